//! Fully-labeled simplex search by door walking.
//!
//! A door is an (n-1)-face whose labels are exactly {1..n}. Fully-labeled
//! top simplices have one door, third-type simplices (label set {1..n})
//! have two, every other simplex none. Walking through doors from the
//! boundary doors on Δ_{n+1} therefore terminates at a fully-labeled
//! simplex for an odd number of starts, which Sperner's Lemma guarantees.

use std::collections::HashSet;
use std::convert::Infallible;
use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

use crate::complex::EmbeddedComplex;
use crate::labeling::Labeling;

#[derive(Debug, Error)]
pub enum WalkError<A> {
    /// Label evaluation requested an early exit (e.g. a fixed point was hit).
    #[error("walk aborted by the labeling")]
    Abort(A),
    /// The inputs broke a structural guarantee; signals a bug, not a
    /// normal outcome.
    #[error("path-following invariant breach: {0}")]
    InvariantBreach(&'static str),
    /// No fully-labeled boundary door exists, contradicting Sperner's Lemma
    /// for a valid labeling.
    #[error("no fully-labeled simplex reachable from the boundary doors")]
    NoStart,
}

/// The incidence and labeling queries door walking needs. Implementations
/// may compute labels lazily; `label` is fallible so a lazily labeled
/// solver complex can abort the walk when it stumbles on a fixed point.
pub trait DoorComplex {
    type Top: Clone + Eq + Hash + Debug;
    type Vert: Clone + Ord + Hash + Debug;
    type Abort;

    fn n(&self) -> usize;
    fn top_vertices(&self, t: &Self::Top) -> Vec<Self::Vert>;
    fn label(&mut self, v: &Self::Vert) -> Result<usize, Self::Abort>;
    /// The other top simplex sharing the facet of `t` opposite `opposite`,
    /// or `None` when that facet lies in ∂Δ.
    fn adjacent(&self, t: &Self::Top, opposite: &Self::Vert) -> Option<Self::Top>;
    /// Top simplices having a facet in the face Δ_{n+1}, each paired with
    /// the vertex opposite that facet. Duplicates are permitted; the walker
    /// filters by door labels and usage.
    fn boundary_candidates(&mut self) -> Result<Vec<(Self::Top, Self::Vert)>, Self::Abort>;
}

fn door_key<V: Ord + Clone>(verts: &[V], skip: &V) -> Vec<V> {
    let mut key: Vec<V> = verts.iter().filter(|v| *v != skip).cloned().collect();
    key.sort();
    key
}

/// Walks the door graph from the boundary doors on Δ_{n+1} until an
/// interior fully-labeled top simplex is found.
pub fn find_fully_labeled<C: DoorComplex>(c: &mut C) -> Result<C::Top, WalkError<C::Abort>> {
    let n = c.n();
    assert!(n >= 1, "door walking needs dimension at least 1");
    let full_set: Vec<usize> = (1..=n + 1).collect();
    let door_set: Vec<usize> = (1..=n).collect();

    let candidates = c.boundary_candidates().map_err(WalkError::Abort)?;
    let mut used: HashSet<Vec<C::Vert>> = HashSet::new();

    'starts: for (start, opp) in candidates {
        let verts = c.top_vertices(&start);
        let entry = door_key(&verts, &opp);
        if used.contains(&entry) {
            continue;
        }
        if label_set(c, &entry).map_err(WalkError::Abort)? != door_set {
            continue;
        }
        used.insert(entry);

        let mut cur = start;
        let mut cur_opp = opp;
        loop {
            let verts = c.top_vertices(&cur);
            let mut labels = Vec::with_capacity(verts.len());
            for v in &verts {
                labels.push(c.label(v).map_err(WalkError::Abort)?);
            }
            let mut sorted = labels.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted == full_set {
                return Ok(cur);
            }
            if sorted != door_set {
                return Err(WalkError::InvariantBreach(
                    "simplex entered through a door is neither second nor third type",
                ));
            }
            // Third type: exactly one other vertex shares the entry
            // vertex's label; dropping it is the exit door.
            let opp_label = labels[verts.iter().position(|v| *v == cur_opp).unwrap()];
            let twins: Vec<&C::Vert> = verts
                .iter()
                .zip(&labels)
                .filter(|&(v, &l)| l == opp_label && *v != cur_opp)
                .map(|(v, _)| v)
                .collect();
            if twins.len() != 1 {
                return Err(WalkError::InvariantBreach(
                    "third-type simplex lacks a unique duplicated label",
                ));
            }
            let exit_vertex = twins[0].clone();
            let exit_door = door_key(&verts, &exit_vertex);
            if !used.insert(exit_door.clone()) {
                return Err(WalkError::InvariantBreach("door visited twice"));
            }
            match c.adjacent(&cur, &exit_vertex) {
                None => continue 'starts, // walked out through ∂Δ
                Some(next) => {
                    let next_verts = c.top_vertices(&next);
                    let new_opp = next_verts
                        .iter()
                        .find(|v| exit_door.binary_search(v).is_err())
                        .cloned()
                        .ok_or(WalkError::InvariantBreach(
                            "adjacent simplex shares all vertices",
                        ))?;
                    cur = next;
                    cur_opp = new_opp;
                }
            }
        }
    }
    Err(WalkError::NoStart)
}

fn label_set<C: DoorComplex>(c: &mut C, verts: &[C::Vert]) -> Result<Vec<usize>, C::Abort> {
    let mut ls = Vec::with_capacity(verts.len());
    for v in verts {
        ls.push(c.label(v)?);
    }
    ls.sort_unstable();
    ls.dedup();
    Ok(ls)
}

/// Door-walk view of an explicitly labeled complex.
pub struct ExplicitDoors<'a, 'c> {
    labeling: &'a Labeling<'c>,
    complex: &'c EmbeddedComplex,
}

impl<'a, 'c> ExplicitDoors<'a, 'c> {
    pub fn new(labeling: &'a Labeling<'c>) -> Self {
        ExplicitDoors {
            complex: labeling.complex(),
            labeling,
        }
    }
}

impl DoorComplex for ExplicitDoors<'_, '_> {
    type Top = usize;
    type Vert = usize;
    type Abort = Infallible;

    fn n(&self) -> usize {
        self.complex.dim()
    }

    fn top_vertices(&self, t: &usize) -> Vec<usize> {
        self.complex.top_simplices().get(*t).to_vec()
    }

    fn label(&mut self, v: &usize) -> Result<usize, Infallible> {
        Ok(self.labeling.label(*v))
    }

    fn adjacent(&self, t: &usize, opposite: &usize) -> Option<usize> {
        let n = self.complex.dim();
        let top = self.complex.top_simplices().get(*t);
        let facet: Vec<usize> = top.iter().copied().filter(|v| v != opposite).collect();
        let fi = self.complex.simplices(n - 1).position(&facet)?;
        self.complex
            .cofacet_indices(n - 1, fi)
            .iter()
            .copied()
            .find(|&j| j != *t)
    }

    fn boundary_candidates(&mut self) -> Result<Vec<(usize, usize)>, Infallible> {
        let n = self.complex.dim();
        let distinguished = self.complex.ambient_dim() + 1;
        let mut out = Vec::new();
        for (fi, face) in self.complex.simplices(n - 1).iter().enumerate() {
            if self.complex.boundary_tag(fi) != Some(distinguished) {
                continue;
            }
            let t = self.complex.cofacet_indices(n - 1, fi)[0];
            let top = self.complex.top_simplices().get(t);
            let opp = *top.iter().find(|v| !face.contains(v)).unwrap();
            out.push((t, opp));
        }
        Ok(out)
    }
}

/// Path-following search over an explicitly labeled complex. The result is
/// always a member of the brute-force list.
pub fn find_fully_labeled_pathfollow(
    labeling: &Labeling<'_>,
) -> Result<Vec<usize>, WalkError<Infallible>> {
    let mut doors = ExplicitDoors::new(labeling);
    let t = find_fully_labeled(&mut doors)?;
    Ok(labeling.complex().top_simplices().get(t).to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::barycentric_subdivide;

    #[test]
    fn identity_labeling_walks_to_delta() {
        let c = EmbeddedComplex::standard(2);
        let l = Labeling::identity(&c).unwrap();
        assert_eq!(find_fully_labeled_pathfollow(&l).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn pathfollow_agrees_with_bruteforce_on_random_labelings() {
        for n in 1..=3usize {
            let mut c = EmbeddedComplex::standard(n);
            for _ in 0..if n == 3 { 1 } else { 2 } {
                c = barycentric_subdivide(&c);
            }
            for seed in 0..50 {
                let l = crate::verify::random_sperner_labeling(&c, seed).unwrap();
                let found = find_fully_labeled_pathfollow(&l).unwrap();
                let brute = l.find_fully_labeled_bruteforce().unwrap();
                assert!(brute.contains(&found), "n={n} seed={seed}");
            }
        }
    }
}
