//! Finite simplicial complexes embedded in the standard simplex, with
//! incidence, boundary, and open-star queries.
//!
//! Simplices are canonically represented as sorted vertex-id tuples; every
//! index is keyed on that canonical form. Coordinates are exact rationals
//! so that face-membership tagging and all parity identities are exact.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::simplex::{Rat, RatPoint, SimplexError, StandardSimplex};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("invalid point for vertex {id}: {source}")]
    InvalidPoint { id: usize, source: SimplexError },
    #[error("top simplex {0:?} has a repeated or out-of-range vertex id")]
    BadTopSimplex(Vec<usize>),
    #[error("top simplex {0:?} has wrong vertex count for dimension {1}")]
    WrongVertexCount(Vec<usize>, usize),
    #[error("top simplex {0:?} is geometrically degenerate")]
    DegenerateSimplex(Vec<usize>),
    #[error("duplicate top simplex {0:?}")]
    DuplicateTopSimplex(Vec<usize>),
    #[error("pseudomanifold violation: face {0:?} has {1} cofacets")]
    PseudomanifoldViolation(Vec<usize>, usize),
    #[error("coverage violation: simplex volumes sum to {got}, expected 1")]
    CoverageViolation { got: String },
    #[error("boundary face {0:?} does not lie in any face of the standard simplex")]
    UntaggedBoundaryFace(Vec<usize>),
    #[error("unknown vertex id {0}")]
    UnknownVertex(usize),
    #[error("simplex {0:?} is not a face of the complex of the expected dimension")]
    FaceNotInComplex(Vec<usize>),
    #[error("resource cap exceeded: {0} top simplices > limit {1}")]
    ResourceCap(usize, usize),
    #[error("serialized complex is malformed: {0}")]
    Parse(String),
    #[error("vertex {vid} maps to unknown target vertex {tid}")]
    BadVertexImage { vid: usize, tid: usize },
    #[error("image of simplex {0:?} is not a simplex of the target")]
    BadSimplexImage(Vec<usize>),
}

/// All simplices of one dimension, in lexicographic order of their sorted
/// vertex tuples, with a reverse index.
#[derive(Debug, Clone, Default)]
pub struct FaceTable {
    sims: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl FaceTable {
    fn from_set(mut sims: Vec<Vec<usize>>) -> Self {
        sims.sort();
        sims.dedup();
        let index = sims
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        FaceTable { sims, index }
    }

    pub fn len(&self) -> usize {
        self.sims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sims.is_empty()
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.sims[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.sims.iter()
    }

    pub fn position(&self, sim: &[usize]) -> Option<usize> {
        self.index.get(sim).copied()
    }
}

/// A simplicial complex whose vertices carry exact barycentric coordinates
/// in the standard `ambient`-simplex. `dim` is the dimension of the top
/// simplices; for a subdivision of Δ the two agree.
#[derive(Debug, Clone)]
pub struct EmbeddedComplex {
    ambient: usize,
    dim: usize,
    coords: Vec<RatPoint>,
    faces: Vec<FaceTable>,
    /// cofacets[k][i] = indices into faces[k+1] of simplices having
    /// faces[k][i] as a facet.
    cofacets: Vec<Vec<Vec<usize>>>,
    /// For subdivisions of Δ: (dim-1)-face index -> label i of the face Δ_i
    /// containing it, present exactly for the faces with one cofacet.
    boundary_tags: HashMap<usize, usize>,
}

/// Controls the expensive exact validation steps of [`EmbeddedComplex::build`].
#[derive(Debug, Clone)]
pub struct BuildOptions {
    /// Skip the exact volume-sum coverage check above this many top simplices.
    pub coverage_limit: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            coverage_limit: 100_000,
        }
    }
}

impl EmbeddedComplex {
    /// Builds and fully validates a subdivision of the standard n-simplex.
    pub fn build(
        vertices: Vec<RatPoint>,
        top_simplices: Vec<Vec<usize>>,
    ) -> Result<Self, ComplexError> {
        Self::build_with(vertices, top_simplices, &BuildOptions::default())
    }

    pub fn build_with(
        vertices: Vec<RatPoint>,
        top_simplices: Vec<Vec<usize>>,
        opts: &BuildOptions,
    ) -> Result<Self, ComplexError> {
        if vertices.is_empty() {
            return Err(ComplexError::Parse("no vertices".into()));
        }
        let ambient = vertices[0].dim();
        for (id, p) in vertices.iter().enumerate() {
            if p.dim() != ambient {
                return Err(ComplexError::InvalidPoint {
                    id,
                    source: SimplexError::WrongArity {
                        got: p.0.len(),
                        expected: ambient + 1,
                    },
                });
            }
        }
        let dim = ambient;
        let tops = canonicalize_tops(&top_simplices, vertices.len(), dim)?;
        let mut c = Self::assemble(ambient, dim, vertices, tops)?;

        // Affine independence of every top simplex, plus optional coverage.
        let mut volume_sum = Rat::zero();
        let check_coverage = c.faces[dim].len() <= opts.coverage_limit;
        for sim in c.faces[dim].iter() {
            let vol = c.volume_fraction(sim);
            if vol.is_zero() {
                return Err(ComplexError::DegenerateSimplex(sim.clone()));
            }
            if check_coverage {
                volume_sum += vol;
            }
        }
        if check_coverage && !volume_sum.is_one() {
            return Err(ComplexError::CoverageViolation {
                got: volume_sum.to_string(),
            });
        }

        // Pseudomanifold property and boundary tagging.
        if dim > 0 {
            let mut tags = HashMap::new();
            for (i, face) in c.faces[dim - 1].iter().enumerate() {
                match c.cofacets[dim - 1][i].len() {
                    2 => {}
                    1 => {
                        let tag = c
                            .common_zero_coordinate(face)
                            .ok_or_else(|| ComplexError::UntaggedBoundaryFace(face.clone()))?;
                        tags.insert(i, tag);
                    }
                    k => {
                        return Err(ComplexError::PseudomanifoldViolation(face.clone(), k));
                    }
                }
            }
            c.boundary_tags = tags;
        }
        Ok(c)
    }

    /// Shared face-table and incidence construction; no geometric checks.
    fn assemble(
        ambient: usize,
        dim: usize,
        coords: Vec<RatPoint>,
        tops: Vec<Vec<usize>>,
    ) -> Result<Self, ComplexError> {
        let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
        for top in &tops {
            for sub in subsets_nonempty(top) {
                by_dim[sub.len() - 1].push(sub);
            }
        }
        let faces: Vec<FaceTable> = by_dim.into_iter().map(FaceTable::from_set).collect();
        let mut cofacets: Vec<Vec<Vec<usize>>> = Vec::new();
        for k in 0..dim {
            let mut cof = vec![Vec::new(); faces[k].len()];
            for (j, sim) in faces[k + 1].iter().enumerate() {
                for drop in 0..sim.len() {
                    let mut facet = sim.clone();
                    facet.remove(drop);
                    let fi = faces[k].position(&facet).unwrap();
                    cof[fi].push(j);
                }
            }
            cofacets.push(cof);
        }
        Ok(EmbeddedComplex {
            ambient,
            dim,
            coords,
            faces,
            cofacets,
            boundary_tags: HashMap::new(),
        })
    }

    /// The standard n-simplex as a complex with a single top simplex.
    pub fn standard(n: usize) -> Self {
        let s = StandardSimplex::new(n);
        EmbeddedComplex::build(s.vertices(), vec![(0..=n).collect()]).unwrap()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, vid: usize) -> &RatPoint {
        &self.coords[vid]
    }

    pub fn points(&self) -> &[RatPoint] {
        &self.coords
    }

    /// Vertex ids actually present in the complex, in increasing order.
    pub fn vertex_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.faces[0].iter().map(|s| s[0])
    }

    pub fn simplices(&self, k: usize) -> &FaceTable {
        &self.faces[k]
    }

    pub fn top_simplices(&self) -> &FaceTable {
        &self.faces[self.dim]
    }

    pub fn contains_simplex(&self, sim: &[usize]) -> bool {
        sim.len() >= 1
            && sim.len() <= self.dim + 1
            && self.faces[sim.len() - 1].position(sim).is_some()
    }

    /// Top simplices having the given (dim-1)-simplex as a face.
    pub fn cofacets(&self, face: &[usize]) -> Result<Vec<Vec<usize>>, ComplexError> {
        if self.dim == 0 || face.len() != self.dim {
            return Err(ComplexError::FaceNotInComplex(face.to_vec()));
        }
        let fi = self.faces[self.dim - 1]
            .position(face)
            .ok_or_else(|| ComplexError::FaceNotInComplex(face.to_vec()))?;
        Ok(self.cofacets[self.dim - 1][fi]
            .iter()
            .map(|&j| self.faces[self.dim].get(j).to_vec())
            .collect())
    }

    /// Cofacet indices of a k-face by index, for any k < dim.
    pub fn cofacet_indices(&self, k: usize, face_index: usize) -> &[usize] {
        &self.cofacets[k][face_index]
    }

    /// Label i such that the (dim-1)-face with this index lies in Δ_i,
    /// present exactly when the face has one cofacet.
    pub fn boundary_tag(&self, face_index: usize) -> Option<usize> {
        self.boundary_tags.get(&face_index).copied()
    }

    /// All simplices (of every dimension) having `w` as a vertex.
    pub fn open_star(&self, w: usize) -> Result<Vec<Vec<usize>>, ComplexError> {
        if self.faces[0].position(&[w][..]).is_none() {
            return Err(ComplexError::UnknownVertex(w));
        }
        let mut out = Vec::new();
        for table in &self.faces {
            for sim in table.iter() {
                if sim.binary_search(&w).is_ok() {
                    out.push(sim.clone());
                }
            }
        }
        Ok(out)
    }

    /// The subcomplex of simplices contained in ∂Δ, as a standalone complex
    /// of dimension `dim - 1` sharing this complex's vertex ids.
    pub fn boundary_subcomplex(&self) -> EmbeddedComplex {
        assert!(self.dim > 0, "a 0-complex has an empty boundary");
        let tops: Vec<Vec<usize>> = self
            .faces[self.dim - 1]
            .iter()
            .enumerate()
            .filter(|(i, _)| self.boundary_tags.contains_key(i))
            .map(|(_, s)| s.clone())
            .collect();
        // The boundary of Δ is closed, so the subcomplex has no tagged
        // faces of its own; per-simplex Δ_i membership stays queryable via
        // `common_zero_coordinate`.
        EmbeddedComplex::assemble(self.ambient, self.dim - 1, self.coords.clone(), tops).unwrap()
    }

    /// True when every (dim-1)-simplex has exactly two cofacets.
    pub fn is_closed_pseudomanifold(&self) -> bool {
        if self.dim == 0 {
            return true;
        }
        self.cofacets[self.dim - 1].iter().all(|c| c.len() == 2)
    }

    /// The smallest label i with x^i = 0 at every vertex of `sim`, if any.
    pub fn common_zero_coordinate(&self, sim: &[usize]) -> Option<usize> {
        (1..=self.ambient + 1).find(|&i| {
            sim.iter()
                .all(|&v| self.coords[v].0[i - 1].is_zero())
        })
    }

    /// Volume of the simplex as a fraction of the volume of Δ: the absolute
    /// determinant of the matrix of barycentric coordinates of its vertices.
    fn volume_fraction(&self, sim: &[usize]) -> Rat {
        let mat: Vec<Vec<Rat>> = sim.iter().map(|&v| self.coords[v].0.clone()).collect();
        det(mat).abs()
    }

    /// Exact squared maximal edge length over all 1-simplices.
    pub fn max_diameter_sq(&self) -> Rat {
        if self.dim == 0 {
            return Rat::zero();
        }
        let mut best = Rat::zero();
        for edge in self.faces[1].iter() {
            let d = self.coords[edge[0]].dist_sq(&self.coords[edge[1]]);
            if d > best {
                best = d;
            }
        }
        best
    }

    pub fn max_diameter(&self) -> f64 {
        crate::simplex::rat_to_f64(&self.max_diameter_sq()).sqrt()
    }

    /// Exact barycenter of a simplex given by vertex ids.
    pub fn barycenter(&self, sim: &[usize]) -> RatPoint {
        let k = Rat::from_integer((sim.len() as i64).into());
        let mut acc = vec![Rat::zero(); self.ambient + 1];
        for &v in sim {
            for (a, c) in acc.iter_mut().zip(&self.coords[v].0) {
                *a += c;
            }
        }
        RatPoint(acc.into_iter().map(|a| a / &k).collect())
    }

    // --- serialization ---

    pub fn to_json(&self) -> String {
        let vertices: BTreeMap<String, Vec<String>> = self
            .vertex_ids()
            .map(|v| {
                (
                    v.to_string(),
                    self.coords[v].0.iter().map(|r| r.to_string()).collect(),
                )
            })
            .collect();
        let doc = ComplexDoc {
            dim: self.dim,
            vertices,
            top_simplices: self.faces[self.dim].iter().cloned().collect(),
        };
        serde_json::to_string(&doc).unwrap()
    }

    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        let doc: ComplexDoc =
            serde_json::from_str(text).map_err(|e| ComplexError::Parse(e.to_string()))?;
        let mut pairs: Vec<(usize, Vec<Rat>)> = Vec::new();
        for (k, coords) in &doc.vertices {
            let id: usize = k
                .parse()
                .map_err(|_| ComplexError::Parse(format!("bad vertex id {k:?}")))?;
            let mut cs = Vec::new();
            for c in coords {
                cs.push(
                    c.parse::<Rat>()
                        .map_err(|e| ComplexError::Parse(format!("bad coordinate {c:?}: {e}")))?,
                );
            }
            pairs.push((id, cs));
        }
        pairs.sort_by_key(|(id, _)| *id);
        if pairs.iter().enumerate().any(|(i, (id, _))| i != *id) {
            return Err(ComplexError::Parse(
                "vertex ids must be contiguous from 0".into(),
            ));
        }
        let mut vertices = Vec::new();
        for (id, cs) in pairs {
            vertices.push(
                RatPoint::new(cs).map_err(|source| ComplexError::InvalidPoint { id, source })?,
            );
        }
        EmbeddedComplex::build(vertices, doc.top_simplices)
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    dim: usize,
    vertices: BTreeMap<String, Vec<String>>,
    top_simplices: Vec<Vec<usize>>,
}

fn canonicalize_tops(
    tops: &[Vec<usize>],
    n_vertices: usize,
    dim: usize,
) -> Result<Vec<Vec<usize>>, ComplexError> {
    let mut out = Vec::with_capacity(tops.len());
    for t in tops {
        if t.len() != dim + 1 {
            return Err(ComplexError::WrongVertexCount(t.clone(), dim));
        }
        let mut s = t.clone();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) || s.iter().any(|&v| v >= n_vertices) {
            return Err(ComplexError::BadTopSimplex(t.clone()));
        }
        out.push(s);
    }
    let mut sorted = out.clone();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(ComplexError::DuplicateTopSimplex(w[0].clone()));
    }
    Ok(out)
}

fn subsets_nonempty(set: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity((1 << set.len()) - 1);
    for mask in 1u32..(1 << set.len()) {
        let mut s = Vec::with_capacity(mask.count_ones() as usize);
        for (i, &v) in set.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s.push(v);
            }
        }
        out.push(s);
    }
    out
}

/// Exact determinant by Gaussian elimination over the rationals.
fn det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Rat::zero();
    }
    let mut result = Rat::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot != col {
            m.swap(pivot, col);
            result = -result;
        }
        let pv = m[col][col].clone();
        result *= &pv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pv;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    result
}

/// A simplicial map between embedded complexes, given by its action on
/// vertices. When the target is the standard simplex complex every vertex
/// assignment is simplicial; the constructor checks the general condition.
#[derive(Debug, Clone)]
pub struct SimplicialMap<'a> {
    pub source: &'a EmbeddedComplex,
    pub target: &'a EmbeddedComplex,
    vertex_map: HashMap<usize, usize>,
}

impl<'a> SimplicialMap<'a> {
    pub fn new(
        source: &'a EmbeddedComplex,
        target: &'a EmbeddedComplex,
        vertex_map: HashMap<usize, usize>,
    ) -> Result<Self, ComplexError> {
        for v in source.vertex_ids() {
            let tid = *vertex_map
                .get(&v)
                .ok_or(ComplexError::UnknownVertex(v))?;
            if target.faces[0].position(&[tid][..]).is_none() {
                return Err(ComplexError::BadVertexImage { vid: v, tid });
            }
        }
        let map = SimplicialMap {
            source,
            target,
            vertex_map,
        };
        for top in source.top_simplices().iter() {
            let img = map.image_simplex(top);
            if !target.contains_simplex(&img) {
                return Err(ComplexError::BadSimplexImage(top.clone()));
            }
        }
        Ok(map)
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.vertex_map[&v]
    }

    /// Canonical (sorted, deduplicated) image vertex set of a simplex.
    pub fn image_simplex(&self, sim: &[usize]) -> Vec<usize> {
        let mut img: Vec<usize> = sim.iter().map(|&v| self.vertex_map[&v]).collect();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// True when the map sends `sim` onto a target simplex of the same
    /// dimension (no vertex collapse).
    pub fn maps_onto(&self, sim: &[usize], target_sim: &[usize]) -> bool {
        self.image_simplex(sim) == target_sim
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::rat;

    fn unit(n: usize, i: usize) -> RatPoint {
        StandardSimplex::new(n).vertex(i)
    }

    #[test]
    fn standard_simplex_complex() {
        let c = EmbeddedComplex::standard(2);
        assert_eq!(c.top_simplices().len(), 1);
        assert_eq!(c.simplices(1).len(), 3);
        assert_eq!(c.simplices(0).len(), 3);
        // all three edges are boundary, tagged by the opposite vertex
        for i in 0..3 {
            assert!(c.boundary_tag(i).is_some());
        }
        let b = c.boundary_subcomplex();
        assert_eq!(b.dim(), 1);
        assert_eq!(b.top_simplices().len(), 3);
        assert!(b.is_closed_pseudomanifold());
    }

    #[test]
    fn coverage_violation_detected() {
        // two triangles spanning a "square" over four points of Δ^2;
        // they do not cover Δ.
        let verts = vec![
            unit(2, 1),
            unit(2, 2),
            unit(2, 3),
            RatPoint::new(vec![rat(1, 3), rat(1, 3), rat(1, 3)]).unwrap(),
        ];
        let err = EmbeddedComplex::build(verts, vec![vec![0, 1, 3], vec![1, 2, 3]]);
        assert!(matches!(
            err,
            Err(ComplexError::CoverageViolation { .. })
                | Err(ComplexError::UntaggedBoundaryFace(_))
        ));
    }

    #[test]
    fn degenerate_simplex_detected() {
        let verts = vec![
            unit(1, 1),
            unit(1, 1), // duplicate location
            unit(1, 2),
        ];
        let err = EmbeddedComplex::build(verts, vec![vec![0, 1], vec![1, 2]]);
        assert!(matches!(err, Err(ComplexError::DegenerateSimplex(_))));
    }

    #[test]
    fn midpoint_subdivision_of_interval() {
        let verts = vec![
            unit(1, 1),
            RatPoint::new(vec![rat(1, 2), rat(1, 2)]).unwrap(),
            unit(1, 2),
        ];
        let c = EmbeddedComplex::build(verts, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(c.top_simplices().len(), 2);
        let b = c.boundary_subcomplex();
        assert_eq!(b.top_simplices().len(), 2); // two endpoint vertices
        assert_eq!(c.cofacets(&[1]).unwrap().len(), 2);
        assert_eq!(c.cofacets(&[0]).unwrap().len(), 1);
    }

    #[test]
    fn cofacets_wrong_dimension_errors() {
        let c = EmbeddedComplex::standard(2);
        assert!(matches!(
            c.cofacets(&[0, 1, 2]),
            Err(ComplexError::FaceNotInComplex(_))
        ));
    }

    #[test]
    fn open_star_of_corner() {
        let c = EmbeddedComplex::standard(2);
        let star = c.open_star(0).unwrap();
        // {v1}, two edges containing v1, and the triangle
        assert_eq!(star.len(), 4);
        assert!(c.open_star(7).is_err());
    }

    #[test]
    fn serialization_round_trip_is_bit_exact() {
        let c = EmbeddedComplex::standard(2);
        let j = c.to_json();
        let c2 = EmbeddedComplex::from_json(&j).unwrap();
        assert_eq!(j, c2.to_json());
        assert_eq!(c.points(), c2.points());
    }
}
