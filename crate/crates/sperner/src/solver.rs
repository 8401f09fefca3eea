//! Approximate Brouwer fixed points via Sperner labelings.
//!
//! A continuous self-map `f` of the standard simplex induces a labeling of
//! any subdivision: label a vertex `w` by some `j` with `f(w)^j < w^j`.
//! Such a labeling is automatically Sperner-valid, so every subdivision
//! contains a fully labeled simplex, and as the subdivisions refine, the
//! witnesses accumulate at a fixed point. `solve` runs that argument as an
//! iterative refinement with a residual tolerance, walking the door graph
//! of an *implicit* edgewise triangulation so only the vertices touched by
//! the path are ever evaluated.
//!
//! The module also exposes the ray retraction `r(x)` (the exit point of
//! the ray from `f(x)` through `x` on the boundary) and the sample-based
//! star labeling built from it.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex::EmbeddedComplex;
use crate::labeling::Labeling;
use crate::pathfollow::{find_fully_labeled, DoorComplex, WalkError};
use crate::simplex::EPS_SUM;
use crate::subdivision::{top_simplex_cap, EdgewiseComplex, EdgewiseTop, Scheme};

/// Strictness margin for the floating labeling rule `f(w)^j < w^j`.
pub const EPS_LABEL: f64 = 1e-15;
/// Below this displacement a point counts as fixed for ray purposes.
pub const EPS_RAY: f64 = 1e-13;
/// Open-star membership threshold: `p` is in st(v_j) when `p^j > EPS_STAR`.
pub const EPS_STAR: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("map returned a point with {got} coordinates, expected {want}")]
    WrongImageDim { want: usize, got: usize },
    #[error("map image is not in the simplex: coordinate {index} = {value}")]
    ImageCoordinateNegative { index: usize, value: f64 },
    #[error("map image coordinates sum to {sum}, not 1")]
    ImageSumOffSimplex { sum: f64 },
    #[error("ray retraction is undefined at a fixed point")]
    RayAtFixedPoint,
    #[error("ray direction has no descending coordinate; the map left the simplex")]
    RayNeverExits,
    #[error("subdivision level {level} needs {needed} top simplices, over the cap {cap}")]
    ResourceCap {
        level: usize,
        needed: u128,
        cap: usize,
    },
    #[error("door walk failed: {0}")]
    Walk(&'static str),
    #[error(transparent)]
    Complex(#[from] crate::complex::ComplexError),
    #[error(transparent)]
    Labeling(#[from] crate::labeling::LabelingError),
}

/// A continuous self-map of the standard `dim`-simplex, evaluated in `f64`.
///
/// Images are clamped and renormalized when within [`EPS_SUM`] of the
/// simplex, and rejected otherwise.
pub struct MapOnSimplex {
    dim: usize,
    name: String,
    eval: Box<dyn Fn(&[f64]) -> Vec<f64> + Sync>,
}

impl fmt::Debug for MapOnSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MapOnSimplex")
            .field("dim", &self.dim)
            .field("name", &self.name)
            .finish()
    }
}

impl MapOnSimplex {
    pub fn new(
        dim: usize,
        name: impl Into<String>,
        eval: impl Fn(&[f64]) -> Vec<f64> + Sync + 'static,
    ) -> Self {
        MapOnSimplex {
            dim,
            name: name.into(),
            eval: Box::new(eval),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Evaluates the map and validates the image: every coordinate must be
    /// ≥ −εΣ and the sum within εΣ of 1. Valid images are clamped to the
    /// simplex and renormalized so downstream exact comparisons see a
    /// genuine barycentric point.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>, SolverError> {
        let mut y = (self.eval)(x);
        if y.len() != self.dim + 1 {
            return Err(SolverError::WrongImageDim {
                want: self.dim + 1,
                got: y.len(),
            });
        }
        let mut sum = 0.0;
        for (i, c) in y.iter_mut().enumerate() {
            if *c < -EPS_SUM {
                return Err(SolverError::ImageCoordinateNegative {
                    index: i,
                    value: *c,
                });
            }
            *c = c.max(0.0);
            sum += *c;
        }
        if (sum - 1.0).abs() > EPS_SUM {
            return Err(SolverError::ImageSumOffSimplex { sum });
        }
        for c in &mut y {
            *c /= sum;
        }
        Ok(y)
    }

    /// Max-norm residual ‖f(x) − x‖∞.
    pub fn residual(&self, x: &[f64]) -> Result<f64, SolverError> {
        let fx = self.eval(x)?;
        Ok(fx
            .iter()
            .zip(x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Outcome of the labeling rule at a single vertex.
#[derive(Debug, Clone, PartialEq)]
pub enum LabelOutcome {
    /// The smallest (1-based) `j` with `f(w)^j < w^j − ελ`.
    Label(usize),
    /// No coordinate strictly decreases; since both sides sum to 1 this
    /// forces `f(w) = w` up to the margin.
    FixedPointHit,
}

/// Labels `w` by the smallest `j` with `f(w)^j < w^j − ελ`. The chosen
/// coordinate satisfies `w^j > f(w)^j ≥ 0`, so the label is automatically
/// Sperner-valid on any subdivision.
pub fn label_from_map(f: &MapOnSimplex, w: &[f64]) -> Result<LabelOutcome, SolverError> {
    let fw = f.eval(w)?;
    Ok(label_from_image(w, &fw))
}

/// The labeling rule applied to a precomputed image point.
pub fn label_from_image(w: &[f64], fw: &[f64]) -> LabelOutcome {
    for (j, (&wi, &fi)) in w.iter().zip(fw).enumerate() {
        if fi < wi - EPS_LABEL {
            return LabelOutcome::Label(j + 1);
        }
    }
    LabelOutcome::FixedPointHit
}

/// All labels permitted at `x`: `{ j : f(x)^j < x^j − ελ }`.
pub fn permitted_labels(x: &[f64], fx: &[f64]) -> Vec<usize> {
    x.iter()
        .zip(fx)
        .enumerate()
        .filter(|&(_, (&xi, &fi))| fi < xi - EPS_LABEL)
        .map(|(j, _)| j + 1)
        .collect()
}

/// Exit point on ∂Δ of the ray from `fx` through `x`.
///
/// With `d = x − fx` the direction satisfies Σ dʲ = 0, so the ray stays in
/// the hyperplane Σ xʲ = 1; the exit parameter is t* = min over
/// `{j : dʲ < 0}` of `xʲ / (−dʲ)`. Requires only that `fx` lies in that
/// hyperplane, so it also serves affine maps that are fixed-point-free on
/// the hyperplane.
pub fn ray_exit(x: &[f64], fx: &[f64]) -> Result<Vec<f64>, SolverError> {
    let d: Vec<f64> = x.iter().zip(fx).map(|(a, b)| a - b).collect();
    if d.iter().map(|c| c.abs()).fold(0.0, f64::max) <= EPS_RAY {
        return Err(SolverError::RayAtFixedPoint);
    }
    let mut t = f64::INFINITY;
    for (&xi, &di) in x.iter().zip(&d) {
        if di < 0.0 {
            t = t.min(xi / -di);
        }
    }
    if !t.is_finite() {
        return Err(SolverError::RayNeverExits);
    }
    let mut p: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + t * di).collect();
    for c in &mut p {
        *c = c.max(0.0);
    }
    Ok(p)
}

/// The retraction `r(x)`: evaluate the map and shoot the ray from
/// `f(x)` through `x` to the boundary.
pub fn ray_retraction(f: &MapOnSimplex, x: &[f64]) -> Result<Vec<f64>, SolverError> {
    let fx = f.eval(x)?;
    ray_exit(x, &fx)
}

/// Open-star membership predicate for the vertex `v_j` (1-based): `st(v_j)
/// = ∂Δ∖Δ_j` is where the `j`-th coordinate is positive.
pub fn in_star(p: &[f64], j: usize) -> bool {
    p[j - 1] > EPS_STAR
}

/// Result of the sample-based star labeling.
#[derive(Debug)]
pub enum StarLabeling<'a> {
    /// Every vertex admitted a label; the labeling is returned validated.
    Total(Labeling<'a>),
    /// No single star `st(v_j)` contained all samples of this vertex's
    /// closed star: the subdivision is not yet fine enough.
    Failure { vertex: usize },
}

/// Labels vertex `w` by the smallest `j` such that every sampled image of
/// the open star of `w` lies in `st(v_j)` ("label w by any j such that
/// r(st(w)) ⊂ ∂Δ∖Δ_j").
///
/// Sampling is not a containment proof: the sample set is `w` itself plus,
/// for each star simplex, its barycenter and `samples_per_simplex` seeded
/// random points from its relative interior — all of which lie in the
/// *open* star (other vertices of star simplices do not, and would defeat
/// every candidate `j`). A vertex with no passing `j` reports `Failure`,
/// the empirical face of the Lebesgue-number condition.
pub fn star_labeling<'a, R>(
    r: R,
    complex: &'a EmbeddedComplex,
    samples_per_simplex: usize,
    seed: u64,
) -> Result<StarLabeling<'a>, SolverError>
where
    R: Fn(&[f64]) -> Result<Vec<f64>, SolverError>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: HashMap<usize, usize> = HashMap::new();
    let n1 = complex.ambient_dim() + 1;
    let mut vertex_ids: Vec<usize> = complex.vertex_ids().collect();
    vertex_ids.sort_unstable();
    for w in vertex_ids {
        let mut images: Vec<Vec<f64>> = Vec::new();
        images.push(r(&complex.point(w).to_f64())?);
        for sim in complex.open_star(w)? {
            if sim.len() == 1 {
                continue; // the vertex itself, already sampled
            }
            let pts: Vec<Vec<f64>> = sim
                .iter()
                .map(|&v| complex.point(v).to_f64())
                .collect();
            images.push(r(&complex.barycenter(&sim).to_f64())?);
            for _ in 0..samples_per_simplex {
                // strictly positive weights keep the sample in the
                // relative interior, hence in the open star of w
                let mut weights: Vec<f64> =
                    (0..pts.len()).map(|_| rng.gen::<f64>() + 1e-3).collect();
                let total: f64 = weights.iter().sum();
                for wt in &mut weights {
                    *wt /= total;
                }
                let mut q = vec![0.0; n1];
                for (wt, p) in weights.iter().zip(&pts) {
                    for (qc, pc) in q.iter_mut().zip(p) {
                        *qc += wt * pc;
                    }
                }
                images.push(r(&q)?);
            }
        }
        match (1..=n1).find(|&j| images.iter().all(|img| in_star(img, j))) {
            Some(j) => {
                labels.insert(w, j);
            }
            None => return Ok(StarLabeling::Failure { vertex: w }),
        }
    }
    Ok(StarLabeling::Total(Labeling::new(complex, labels)?))
}

/// An approximate fixed point with its witnessing fully labeled simplex.
#[derive(Debug, Clone)]
pub struct ApproxFixedPoint {
    /// Barycenter of the witness simplex (or the hit vertex itself).
    pub point: Vec<f64>,
    /// ‖f(point) − point‖∞, recomputed from the map at report time.
    pub residual: f64,
    /// Refinement level the witness came from.
    pub level: usize,
    /// Edgewise parameter at that level (0 for barycentric runs).
    pub m: u32,
    /// Vertices of the witness simplex, in barycentric coordinates.
    pub witness: Vec<Vec<f64>>,
    /// Labels of the witness vertices, same order.
    pub witness_labels: Vec<usize>,
    /// True when the labeling rule found `f(w) = w` outright.
    pub fixed_point_hit: bool,
}

impl ApproxFixedPoint {
    /// Canonical JSON report: point, residual, level, m, witness data.
    pub fn report_json(&self) -> serde_json::Value {
        serde_json::json!({
            "point": self.point,
            "residual": self.residual,
            "level": self.level,
            "m": self.m,
            "witness": self.witness,
            "witness_labels": self.witness_labels,
            "fixed_point_hit": self.fixed_point_hit,
        })
    }
}

/// How a `solve` run ended short of its tolerance.
#[derive(Debug, Error)]
pub enum SolveFailure {
    /// The level budget ran out; the best candidate so far is attached.
    #[error("residual {} after level {} exceeds the tolerance", .best.residual, .best.level)]
    ToleranceNotMet { best: Box<ApproxFixedPoint> },
    #[error(transparent)]
    Error(#[from] SolverError),
}

enum LazyAbort {
    Hit(Vec<u32>),
    Eval(SolverError),
}

/// Door-walk view of the edgewise triangulation with lazily computed
/// labels: only vertices the walk touches are ever mapped through `f`.
struct LazyEdgewise<'f> {
    ew: EdgewiseComplex,
    f: &'f MapOnSimplex,
    labels: HashMap<Vec<u32>, usize>,
}

impl<'f> LazyEdgewise<'f> {
    fn label_of(&mut self, v: &[u32]) -> Result<usize, LazyAbort> {
        if let Some(&l) = self.labels.get(v) {
            return Ok(l);
        }
        let w = self.ew.vertex_point_f64(v);
        match label_from_map(self.f, &w) {
            Ok(LabelOutcome::Label(j)) => {
                self.labels.insert(v.to_vec(), j);
                Ok(j)
            }
            Ok(LabelOutcome::FixedPointHit) => Err(LazyAbort::Hit(v.to_vec())),
            Err(e) => Err(LazyAbort::Eval(e)),
        }
    }
}

impl DoorComplex for LazyEdgewise<'_> {
    type Top = EdgewiseTop;
    type Vert = Vec<u32>;
    type Abort = LazyAbort;

    fn n(&self) -> usize {
        self.ew.dim()
    }

    fn top_vertices(&self, t: &EdgewiseTop) -> Vec<Vec<u32>> {
        self.ew.top_vertices(t)
    }

    fn label(&mut self, v: &Vec<u32>) -> Result<usize, LazyAbort> {
        self.label_of(v)
    }

    fn adjacent(&self, t: &EdgewiseTop, opposite: &Vec<u32>) -> Option<EdgewiseTop> {
        let verts = self.ew.top_vertices(t);
        let k = verts.iter().position(|v| v == opposite)?;
        self.ew.pivot(t, k)
    }

    fn boundary_candidates(&mut self) -> Result<Vec<(EdgewiseTop, Vec<u32>)>, LazyAbort> {
        let face = self.ew.distinguished_face();
        let mut out = Vec::new();
        for ft in face.enumerate_tops() {
            let lifted = self.ew.lift_face_top(&ft);
            // the door is the facet opposite path vertex 0 of the lift
            let opp = self.ew.top_vertices(&lifted)[0].clone();
            out.push((lifted, opp));
        }
        Ok(out)
    }
}

fn hit_result(f: &MapOnSimplex, point: Vec<f64>, level: usize, m: u32) -> Result<ApproxFixedPoint, SolverError> {
    let residual = f.residual(&point)?;
    Ok(ApproxFixedPoint {
        witness: vec![point.clone()],
        witness_labels: vec![],
        point,
        residual,
        level,
        m,
        fixed_point_hit: true,
    })
}

/// How a level's fully labeled simplex is located.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Search {
    /// Door walking from the boundary; edgewise levels stay implicit.
    PathFollow,
    /// Materialize the level and scan every top simplex.
    BruteForce,
}

/// Finds an approximate fixed point of `f` by refining a subdivision,
/// labeling it through `label_from_map`, and path-following to a fully
/// labeled simplex whose barycenter is the candidate.
///
/// The edgewise scheme doubles `m` each level and never materializes the
/// triangulation; the barycentric scheme (factorially expensive, kept for
/// completeness) materializes each depth. The
/// best residual seen so far is retained; `SolveFailure::ToleranceNotMet`
/// returns it when the level budget runs out.
pub fn solve(
    f: &MapOnSimplex,
    tol: f64,
    scheme: Scheme,
    max_level: usize,
) -> Result<ApproxFixedPoint, SolveFailure> {
    solve_with_search(f, tol, scheme, max_level, Search::PathFollow)
}

/// `solve` with an explicit search strategy for the fully labeled simplex.
pub fn solve_with_search(
    f: &MapOnSimplex,
    tol: f64,
    scheme: Scheme,
    max_level: usize,
    search: Search,
) -> Result<ApproxFixedPoint, SolveFailure> {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = f.dim();
    let cap = top_simplex_cap();
    let mut best: Option<ApproxFixedPoint> = None;

    for level in 0..=max_level {
        let candidate = match (scheme, search) {
            (Scheme::Edgewise, Search::PathFollow) => {
                let m: u32 = 1u32 << level.min(31);
                // The triangulation is implicit; only the distinguished
                // face's m^(n-1) top simplices are ever enumerated.
                let needed = (m as u128).pow(n.saturating_sub(1) as u32);
                if needed > cap as u128 {
                    return Err(SolverError::ResourceCap { level, needed, cap }.into());
                }
                solve_level_edgewise(f, m, level)?
            }
            (Scheme::Edgewise, Search::BruteForce) => {
                let m: u32 = 1u32 << level.min(31);
                let needed = (m as u128).pow(n as u32);
                if needed > cap as u128 {
                    return Err(SolverError::ResourceCap { level, needed, cap }.into());
                }
                let complex = crate::subdivision::edgewise_subdivide(n, m).map_err(SolverError::from)?;
                solve_level_explicit(f, &complex, level, m, search)?
            }
            (Scheme::Barycentric, _) => solve_level_barycentric(f, level, cap, search)?,
        };
        if candidate.fixed_point_hit || candidate.residual <= tol {
            return Ok(candidate);
        }
        if best
            .as_ref()
            .map_or(true, |b| candidate.residual < b.residual)
        {
            best = Some(candidate);
        }
    }
    Err(SolveFailure::ToleranceNotMet {
        best: Box::new(best.expect("at least one level ran")),
    })
}

/// Runs one implicit edgewise level at a fixed `m` and returns the fully
/// labeled witness (or the fixed-point hit) without any refinement loop.
pub fn edgewise_witness(f: &MapOnSimplex, m: u32) -> Result<ApproxFixedPoint, SolverError> {
    solve_level_edgewise(f, m, 0)
}

fn solve_level_edgewise(
    f: &MapOnSimplex,
    m: u32,
    level: usize,
) -> Result<ApproxFixedPoint, SolverError> {
    let n = f.dim();
    if n == 0 {
        // Δ^0 is a point fixed by any self-map.
        return hit_result(f, vec![1.0], level, m);
    }
    let mut lazy = LazyEdgewise {
        ew: EdgewiseComplex::new(n, m)?,
        f,
        labels: HashMap::new(),
    };
    match find_fully_labeled(&mut lazy) {
        Ok(top) => {
            let verts = lazy.ew.top_vertices(&top);
            let witness: Vec<Vec<f64>> =
                verts.iter().map(|v| lazy.ew.vertex_point_f64(v)).collect();
            let witness_labels: Vec<usize> = verts.iter().map(|v| lazy.labels[v]).collect();
            let mut point = vec![0.0; n + 1];
            for w in &witness {
                for (pc, wc) in point.iter_mut().zip(w) {
                    *pc += wc / witness.len() as f64;
                }
            }
            let residual = f.residual(&point)?;
            Ok(ApproxFixedPoint {
                point,
                residual,
                level,
                m,
                witness,
                witness_labels,
                fixed_point_hit: false,
            })
        }
        Err(WalkError::Abort(LazyAbort::Hit(v))) => {
            let point = lazy.ew.vertex_point_f64(&v);
            hit_result(f, point, level, m)
        }
        Err(WalkError::Abort(LazyAbort::Eval(e))) => Err(e),
        Err(WalkError::InvariantBreach(msg)) => Err(SolverError::Walk(msg)),
        Err(WalkError::NoStart) => Err(SolverError::Walk(
            "no fully labeled simplex reachable from the boundary",
        )),
    }
}

fn solve_level_barycentric(
    f: &MapOnSimplex,
    depth: usize,
    cap: usize,
    search: Search,
) -> Result<ApproxFixedPoint, SolverError> {
    let n = f.dim();
    let mut complex = EmbeddedComplex::standard(n);
    for level in 0..depth {
        if complex.top_simplices().len() * factorial(n + 1) > cap {
            return Err(SolverError::ResourceCap {
                level,
                needed: (complex.top_simplices().len() * factorial(n + 1)) as u128,
                cap,
            });
        }
        complex = crate::subdivision::barycentric_subdivide(&complex);
    }
    solve_level_explicit(f, &complex, depth, 0, search)
}

/// Labels a materialized complex completely and searches it for a fully
/// labeled simplex.
fn solve_level_explicit(
    f: &MapOnSimplex,
    complex: &EmbeddedComplex,
    level: usize,
    m: u32,
    search: Search,
) -> Result<ApproxFixedPoint, SolverError> {
    let n = complex.dim();
    if n == 0 {
        return hit_result(f, vec![1.0], level, m);
    }
    let mut labels: HashMap<usize, usize> = HashMap::new();
    for v in complex.vertex_ids() {
        let w = complex.point(v).to_f64();
        match label_from_map(f, &w)? {
            LabelOutcome::Label(j) => {
                labels.insert(v, j);
            }
            LabelOutcome::FixedPointHit => return hit_result(f, w, level, m),
        }
    }
    let labeling = Labeling::new(complex, labels)?;
    let witness_verts = match search {
        Search::PathFollow => crate::pathfollow::find_fully_labeled_pathfollow(&labeling)
            .map_err(|_| SolverError::Walk("path following failed on explicit complex"))?,
        Search::BruteForce => labeling
            .find_fully_labeled_bruteforce()?
            .into_iter()
            .next()
            .ok_or(SolverError::Walk("no fully labeled simplex found"))?,
    };
    let witness: Vec<Vec<f64>> = witness_verts
        .iter()
        .map(|&v| complex.point(v).to_f64())
        .collect();
    let witness_labels: Vec<usize> = witness_verts
        .iter()
        .map(|&v| labeling.label(v))
        .collect();
    let point = complex.barycenter(&witness_verts).to_f64();
    let residual = f.residual(&point)?;
    Ok(ApproxFixedPoint {
        point,
        residual,
        level,
        m,
        witness,
        witness_labels,
        fixed_point_hit: false,
    })
}

fn factorial(k: usize) -> usize {
    (1..=k).product::<usize>().max(1)
}

/// Parses a CLI map registry spec into a map on the `dim`-simplex.
///
/// Recognized names: `identity`; `constant:<c1,...,c{n+1}>`; `rotate`
/// (cyclic coordinate shift `(x1,…,x_{n+1}) ↦ (x_{n+1},x1,…,xn)`);
/// `quadratic:<seed>`, the interior quadratic map
/// `f(x)^j = ((A x)_j^2 + 1/10) / Σ_k ((A x)_k^2 + 1/10)` with the entries
/// of `A` drawn uniformly from `[0,1)` by a ChaCha8 generator seeded with
/// `seed`. Its image stays in the interior, so no vertex or boundary point
/// is fixed.
pub fn map_from_spec(spec: &str, dim: usize) -> Result<MapOnSimplex, String> {
    let n1 = dim + 1;
    if spec == "identity" {
        return Ok(MapOnSimplex::new(dim, "identity", |x| x.to_vec()));
    }
    if spec == "rotate" {
        return Ok(MapOnSimplex::new(dim, "rotate", move |x| {
            let mut y = Vec::with_capacity(x.len());
            y.push(x[x.len() - 1]);
            y.extend_from_slice(&x[..x.len() - 1]);
            y
        }));
    }
    if let Some(rest) = spec.strip_prefix("constant:") {
        let c: Vec<f64> = rest
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("bad constant coordinate: {e}"))?;
        if c.len() != n1 {
            return Err(format!(
                "constant map needs {n1} coordinates, got {}",
                c.len()
            ));
        }
        let sum: f64 = c.iter().sum();
        if c.iter().any(|&v| v < 0.0) || (sum - 1.0).abs() > EPS_SUM {
            return Err("constant map target is not a point of the simplex".into());
        }
        return Ok(MapOnSimplex::new(dim, spec, move |_| c.clone()));
    }
    if let Some(rest) = spec.strip_prefix("quadratic:") {
        let seed: u64 = rest
            .parse()
            .map_err(|e| format!("bad quadratic seed: {e}"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<Vec<f64>> = (0..n1)
            .map(|_| (0..n1).map(|_| rng.gen::<f64>()).collect())
            .collect();
        return Ok(MapOnSimplex::new(dim, spec, move |x| {
            let mut y: Vec<f64> = a
                .iter()
                .map(|row| {
                    let dot: f64 = row.iter().zip(x).map(|(r, xi)| r * xi).sum();
                    dot * dot + 0.1
                })
                .collect();
            let total: f64 = y.iter().sum();
            for c in &mut y {
                *c /= total;
            }
            y
        }));
    }
    Err(format!("unknown map spec {spec:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn barycenter_dist(p: &[f64], n1: usize) -> f64 {
        p.iter()
            .map(|c| (c - 1.0 / n1 as f64).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn label_rule_examples() {
        let f = map_from_spec("constant:0.5,0.25,0.25", 2).unwrap();
        assert_eq!(
            label_from_map(&f, &[1.0, 0.0, 0.0]).unwrap(),
            LabelOutcome::Label(1)
        );
        let id = map_from_spec("identity", 2).unwrap();
        assert_eq!(
            label_from_map(&id, &[0.3, 0.3, 0.4]).unwrap(),
            LabelOutcome::FixedPointHit
        );
        let rot = map_from_spec("rotate", 2).unwrap();
        let third = 1.0 / 3.0;
        assert_eq!(
            label_from_map(&rot, &[third, third, third]).unwrap(),
            LabelOutcome::FixedPointHit
        );
    }

    #[test]
    fn ray_exit_interval_example() {
        // x=(1/2,1/2), f(x)=(3/4,1/4): d=(−1/4,1/4), t*=2, exit at v_2
        let p = ray_exit(&[0.5, 0.5], &[0.75, 0.25]).unwrap();
        assert!((p[0] - 0.0).abs() < 1e-12 && (p[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ray_exit_is_identity_on_outward_boundary_points() {
        // x on Δ_1 (first coordinate zero), direction still descending
        // there: t* = 0 and the ray exits immediately at x.
        let x = [0.0, 0.6, 0.4];
        let fx = [0.2, 0.5, 0.3];
        let p = ray_exit(&x, &fx).unwrap();
        for (a, b) in p.iter().zip(&x) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn ray_errors() {
        assert!(matches!(
            ray_exit(&[0.5, 0.5], &[0.5, 0.5]),
            Err(SolverError::RayAtFixedPoint)
        ));
    }

    #[test]
    fn permitted_labels_point_into_exit_star() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let mut x: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let s: f64 = x.iter().sum();
            x.iter_mut().for_each(|c| *c /= s);
            // affine displacement with zero sum keeps fx on the hyperplane
            let d0 = 0.05 * (rng.gen::<f64>() - 0.5);
            let d1 = 0.05 * (rng.gen::<f64>() - 0.5);
            let fx = vec![x[0] + d0, x[1] + d1, x[2] - d0 - d1];
            let Ok(r) = ray_exit(&x, &fx) else { continue };
            for j in permitted_labels(&x, &fx) {
                assert!(r[j - 1] > 0.0, "label {j} but r = {r:?}");
            }
        }
    }

    #[test]
    fn solve_constant_map() {
        let f = map_from_spec("constant:0.2,0.3,0.5", 2).unwrap();
        let apx = solve(&f, 1e-6, Scheme::Edgewise, 30).unwrap();
        assert!(apx.residual <= 1e-6);
        let diam = (3.0f64).sqrt() / apx.m as f64;
        let c = [0.2, 0.3, 0.5];
        for (a, b) in apx.point.iter().zip(&c) {
            assert!((a - b).abs() <= diam);
        }
    }

    #[test]
    fn solve_identity_hits_immediately() {
        let f = map_from_spec("identity", 2).unwrap();
        let apx = solve(&f, 1e-9, Scheme::Edgewise, 5).unwrap();
        assert!(apx.fixed_point_hit);
        assert!(apx.residual <= EPS_SUM);
    }

    #[test]
    fn solve_rotation_finds_barycenter() {
        let f = map_from_spec("rotate", 2).unwrap();
        let apx = solve(&f, 1e-3, Scheme::Edgewise, 30).unwrap();
        assert!(barycenter_dist(&apx.point, 3) <= 1e-2);
    }

    #[test]
    fn solve_barycentric_scheme_runs() {
        let f = map_from_spec("constant:0.25,0.25,0.5", 2).unwrap();
        match solve(&f, 1e-2, Scheme::Barycentric, 4) {
            Ok(apx) => assert!(apx.residual <= 1e-2),
            Err(SolveFailure::ToleranceNotMet { best }) => {
                // factorial growth may exhaust the budget before 1e-2;
                // the best-so-far residual must still be sensible
                assert!(best.residual < 1.0);
            }
            Err(e) => panic!("unexpected: {e}"),
        }
    }

    #[test]
    fn star_labeling_identity_retraction_on_standard_complex() {
        // r = identity on the corner points: each v_j stays in st(v_j).
        let c = EmbeddedComplex::standard(2);
        let out = star_labeling(|p: &[f64]| Ok(p.to_vec()), &c, 4, 1).unwrap();
        match out {
            StarLabeling::Total(l) => {
                for v in 0..3 {
                    assert_eq!(l.label(v), v + 1);
                }
            }
            StarLabeling::Failure { vertex } => panic!("failed at {vertex}"),
        }
    }

    #[test]
    fn star_labeling_fails_when_too_coarse() {
        // A large-displacement retraction on the unsubdivided simplex: the
        // closed star of every vertex is all of Δ, whose retraction image
        // covers the whole boundary, so no single star contains it.
        let c = EmbeddedComplex::standard(2);
        let f = map_from_spec("rotate", 2).unwrap();
        let r = |p: &[f64]| {
            // perturb away from the barycenter before retracting so the
            // ray is defined everywhere on the sample set
            let mut q = p.to_vec();
            q[0] = (q[0] + 0.11).min(1.0);
            let s: f64 = q.iter().sum();
            q.iter_mut().for_each(|c| *c /= s);
            ray_retraction(&f, &q)
        };
        match star_labeling(r, &c, 8, 3).unwrap() {
            StarLabeling::Failure { .. } => {}
            StarLabeling::Total(_) => panic!("coarse complex should fail"),
        }
    }

    #[test]
    fn quadratic_map_is_interior_and_deterministic() {
        let f = map_from_spec("quadratic:42", 2).unwrap();
        let g = map_from_spec("quadratic:42", 2).unwrap();
        let x = [1.0, 0.0, 0.0];
        let fx = f.eval(&x).unwrap();
        assert_eq!(fx, g.eval(&x).unwrap());
        assert!(fx.iter().all(|&c| c > 0.01));
        assert!((fx.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
