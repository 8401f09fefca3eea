//! Subdivision schemes for the standard simplex: iterated barycentric
//! subdivision and the edgewise (Freudenthal/Kuhn) triangulation on the
//! 1/m lattice.
//!
//! The edgewise scheme works in cumulative coordinates `s_j = m·(x^1+…+x^j)`,
//! under which Δ becomes the order polytope `0 ≤ s_1 ≤ … ≤ s_n ≤ m`. That
//! region is a union of Kuhn simplices of the unit-cube triangulation of
//! Z^n, giving exactly m^n top simplices, each a lattice path
//! `g, g+e_{π(1)}, …, g+e_{π(1)}+…+e_{π(n)}`. Every edge of such a simplex
//! changes each barycentric coordinate by at most 1/m, so its diameter is
//! at most √(n+1)/m, i.e. the scheme constant is c_n = √((n+1)/2) ≤ n.

use itertools::Itertools;


use crate::complex::{ComplexError, EmbeddedComplex};
use crate::simplex::{rat, RatPoint};

/// Subdivision scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Barycentric,
    Edgewise,
}

/// The barycentric subdivision: one vertex per simplex of `k` (at its
/// barycenter), one top simplex per complete flag of simplices of `k`.
pub fn barycentric_subdivide(k: &EmbeddedComplex) -> EmbeddedComplex {
    let n = k.dim();
    // Deterministic vertex ids: simplices ordered by (dimension, lex tuple).
    let mut vertex_of: Vec<std::collections::HashMap<Vec<usize>, usize>> =
        vec![Default::default(); n + 1];
    let mut coords: Vec<RatPoint> = Vec::new();
    for d in 0..=n {
        for sim in k.simplices(d).iter() {
            vertex_of[d].insert(sim.clone(), coords.len());
            coords.push(k.barycenter(sim));
        }
    }
    let mut tops = Vec::new();
    for top in k.top_simplices().iter() {
        for perm in top.iter().copied().permutations(top.len()) {
            let mut flag = Vec::with_capacity(n + 1);
            let mut prefix: Vec<usize> = Vec::with_capacity(n + 1);
            for v in perm {
                let pos = prefix.binary_search(&v).unwrap_err();
                prefix.insert(pos, v);
                flag.push(vertex_of[prefix.len() - 1][&prefix]);
            }
            tops.push(flag);
        }
    }
    EmbeddedComplex::build(coords, tops).expect("barycentric subdivision is always valid")
}

/// A top simplex of the edgewise triangulation: the lattice path starting
/// at `base` and incrementing cumulative coordinates in the order `perm`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgewiseTop {
    pub base: Vec<u32>,
    pub perm: Vec<u8>,
}

/// The edgewise triangulation of Δ^n with lattice parameter m, queried
/// implicitly: no simplex list is materialized.
#[derive(Debug, Clone, Copy)]
pub struct EdgewiseComplex {
    n: usize,
    m: u32,
}

impl EdgewiseComplex {
    pub fn new(n: usize, m: u32) -> Result<Self, ComplexError> {
        if m < 1 {
            return Err(ComplexError::Parse("edgewise parameter m must be ≥ 1".into()));
        }
        Ok(EdgewiseComplex { n, m })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Upper bound on the diameter of every top simplex.
    pub fn diameter_bound(&self) -> f64 {
        ((self.n + 1) as f64).sqrt() / self.m as f64
    }

    fn monotone(&self, s: &[u32]) -> bool {
        s.windows(2).all(|w| w[0] <= w[1])
            && s.first().map_or(true, |&a| a <= self.m)
            && s.last().map_or(true, |&a| a <= self.m)
    }

    /// The n+1 lattice vertices of a top simplex, in path order.
    pub fn top_vertices(&self, t: &EdgewiseTop) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(self.n + 1);
        let mut cur = t.base.clone();
        out.push(cur.clone());
        for &step in &t.perm {
            cur[step as usize] += 1;
            out.push(cur.clone());
        }
        out
    }

    pub fn is_valid_top(&self, t: &EdgewiseTop) -> bool {
        t.base.len() == self.n
            && t.perm.len() == self.n
            && {
                let mut seen = vec![false; self.n];
                t.perm.iter().all(|&p| {
                    let p = p as usize;
                    p < self.n && !std::mem::replace(&mut seen[p], true)
                })
            }
            && self.top_vertices(t).iter().all(|v| self.monotone(v))
    }

    /// Exact barycentric coordinates of a lattice vertex.
    pub fn vertex_point(&self, s: &[u32]) -> RatPoint {
        let m = self.m as i64;
        let mut coords = Vec::with_capacity(self.n + 1);
        let mut prev: i64 = 0;
        for &si in s {
            coords.push(rat(si as i64 - prev, m));
            prev = si as i64;
        }
        coords.push(rat(m - prev, m));
        RatPoint::new(coords.clone()).unwrap_or(RatPoint(coords))
    }

    pub fn vertex_point_f64(&self, s: &[u32]) -> Vec<f64> {
        let m = self.m as f64;
        let mut coords = Vec::with_capacity(self.n + 1);
        let mut prev = 0.0;
        for &si in s {
            coords.push((si as f64 - prev) / m);
            prev = si as f64;
        }
        coords.push((self.m as f64 - prev) / m);
        coords
    }

    /// The other top simplex sharing the facet opposite path vertex `k`,
    /// or `None` when that facet lies in ∂Δ.
    pub fn pivot(&self, t: &EdgewiseTop, k: usize) -> Option<EdgewiseTop> {
        let n = self.n;
        debug_assert!(k <= n && n > 0);
        let cand = if k == 0 {
            let mut base = t.base.clone();
            base[t.perm[0] as usize] += 1;
            let mut perm = t.perm[1..].to_vec();
            perm.push(t.perm[0]);
            EdgewiseTop { base, perm }
        } else if k == n {
            let mut base = t.base.clone();
            let last = t.perm[n - 1] as usize;
            if base[last] == 0 {
                return None;
            }
            base[last] -= 1;
            let mut perm = vec![t.perm[n - 1]];
            perm.extend_from_slice(&t.perm[..n - 1]);
            EdgewiseTop { base, perm }
        } else {
            let mut perm = t.perm.clone();
            perm.swap(k - 1, k);
            EdgewiseTop {
                base: t.base.clone(),
                perm,
            }
        };
        self.is_valid_top(&cand).then_some(cand)
    }

    /// Every top simplex, enumerated. Intended for explicit materialization
    /// and tests; the count is m^n.
    pub fn enumerate_tops(&self) -> Vec<EdgewiseTop> {
        if self.n == 0 {
            return vec![EdgewiseTop {
                base: vec![],
                perm: vec![],
            }];
        }
        let mut tops = Vec::new();
        let bases = (0..self.n)
            .map(|_| 0..self.m)
            .multi_cartesian_product();
        for base in bases {
            if !self.monotone(&base) {
                continue;
            }
            for perm in (0..self.n as u8).permutations(self.n) {
                let t = EdgewiseTop {
                    base: base.clone(),
                    perm,
                };
                if self.is_valid_top(&t) {
                    tops.push(t);
                }
            }
        }
        tops.sort();
        tops
    }

    /// The face Δ_{n+1} of Δ (where `s_n = m`) carries the edgewise
    /// triangulation of Δ^{n-1} with the same m.
    pub fn distinguished_face(&self) -> EdgewiseComplex {
        assert!(self.n > 0);
        EdgewiseComplex {
            n: self.n - 1,
            m: self.m,
        }
    }

    /// Lifts a top simplex of the distinguished face to the unique top
    /// simplex of this complex having it as a facet. The facet is the one
    /// opposite path vertex 0 of the lifted simplex.
    pub fn lift_face_top(&self, face_top: &EdgewiseTop) -> EdgewiseTop {
        let mut base = face_top.base.clone();
        base.push(self.m - 1);
        let mut perm = vec![(self.n - 1) as u8];
        perm.extend_from_slice(&face_top.perm);
        EdgewiseTop { base, perm }
    }

    /// Embeds a lattice vertex of the distinguished face into this complex.
    pub fn lift_face_vertex(&self, s: &[u32]) -> Vec<u32> {
        let mut out = s.to_vec();
        out.push(self.m);
        out
    }

    /// Materializes the triangulation as a fully validated complex.
    pub fn materialize(&self) -> Result<EmbeddedComplex, ComplexError> {
        let tops = self.enumerate_tops();
        let mut vid: std::collections::HashMap<Vec<u32>, usize> = Default::default();
        let mut coords: Vec<RatPoint> = Vec::new();
        // Deterministic ids: lattice points in sorted order.
        let mut all_vertices: Vec<Vec<u32>> = tops
            .iter()
            .flat_map(|t| self.top_vertices(t))
            .collect();
        all_vertices.sort();
        all_vertices.dedup();
        for s in all_vertices {
            vid.insert(s.clone(), coords.len());
            coords.push(self.vertex_point(&s));
        }
        let top_ids: Vec<Vec<usize>> = tops
            .iter()
            .map(|t| self.top_vertices(t).iter().map(|s| vid[s]).collect())
            .collect();
        EmbeddedComplex::build(coords, top_ids)
    }
}

/// The edgewise triangulation of Δ^n on the 1/m lattice, materialized.
pub fn edgewise_subdivide(n: usize, m: u32) -> Result<EmbeddedComplex, ComplexError> {
    EdgewiseComplex::new(n, m)?.materialize()
}

/// Default cap on materialized top simplices, overridable via the
/// `SPERNER_MAX_SIMPLICES` environment variable.
pub fn top_simplex_cap() -> usize {
    std::env::var("SPERNER_MAX_SIMPLICES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(1_000_000)
}

/// The k-th member of a subdivision sequence Δ'_0, Δ'_1, … of Δ^n.
///
/// Barycentric: the k-fold iterated barycentric subdivision. Edgewise:
/// parameter m = m0·2^k. Errors out when the top-simplex count would
/// exceed `cap`.
pub fn subdivision_sequence(
    n: usize,
    scheme: Scheme,
    depth: u32,
    m0: u32,
    cap: usize,
) -> Result<EmbeddedComplex, ComplexError> {
    match scheme {
        Scheme::Barycentric => {
            let mut count: usize = 1;
            let factorial: usize = (1..=n + 1).product();
            let mut k = EmbeddedComplex::standard(n);
            for _ in 0..depth {
                count = count
                    .checked_mul(factorial)
                    .filter(|&c| c <= cap)
                    .ok_or(ComplexError::ResourceCap(count * factorial.max(1), cap))?;
                k = barycentric_subdivide(&k);
            }
            Ok(k)
        }
        Scheme::Edgewise => {
            let m = m0
                .checked_shl(depth)
                .ok_or(ComplexError::ResourceCap(usize::MAX, cap))?;
            let count = (m as usize)
                .checked_pow(n as u32)
                .ok_or(ComplexError::ResourceCap(usize::MAX, cap))?;
            if count > cap {
                return Err(ComplexError::ResourceCap(count, cap));
            }
            edgewise_subdivide(n, m)
        }
    }
}
