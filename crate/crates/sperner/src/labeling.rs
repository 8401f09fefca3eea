//! Sperner labelings of subdivisions of Δ, their validity, the
//! combinatorial census (the counts e, f, g, h), and fully-labeled
//! simplex search.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{ComplexError, EmbeddedComplex, SimplicialMap};

#[derive(Debug, Error)]
pub enum LabelingError {
    #[error("vertex {0} has no label")]
    MissingLabel(usize),
    #[error("vertex {vid} labeled {label}, outside 1..={max}")]
    LabelOutOfRange { vid: usize, label: usize, max: usize },
    #[error("labeling violates the Sperner condition at {} vertices", .0.len())]
    NotSperner(Vec<SpernerViolation>),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A vertex lying on a face Δ_i while carrying the label i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpernerViolation {
    pub vertex: usize,
    pub face: usize,
}

/// An assignment of a label in {1..n+1} to every vertex of a subdivision
/// of Δ.
#[derive(Debug, Clone)]
pub struct Labeling<'a> {
    complex: &'a EmbeddedComplex,
    labels: HashMap<usize, usize>,
}

impl<'a> Labeling<'a> {
    /// Wraps a label assignment; range and totality are checked here, the
    /// Sperner condition via [`Labeling::validate_sperner`].
    pub fn new(
        complex: &'a EmbeddedComplex,
        labels: HashMap<usize, usize>,
    ) -> Result<Self, LabelingError> {
        let max = complex.ambient_dim() + 1;
        for vid in complex.vertex_ids() {
            match labels.get(&vid) {
                None => return Err(LabelingError::MissingLabel(vid)),
                Some(&l) if l < 1 || l > max => {
                    return Err(LabelingError::LabelOutOfRange {
                        vid,
                        label: l,
                        max,
                    })
                }
                _ => {}
            }
        }
        Ok(Labeling { complex, labels })
    }

    /// The labeling v_i ↦ i on the unsubdivided standard simplex (or any
    /// complex whose vertex ids are 0..n at the unit points).
    pub fn identity(complex: &'a EmbeddedComplex) -> Result<Self, LabelingError> {
        let labels = complex.vertex_ids().map(|v| (v, v + 1)).collect();
        Labeling::new(complex, labels)
    }

    pub fn complex(&self) -> &'a EmbeddedComplex {
        self.complex
    }

    pub fn label(&self, vid: usize) -> usize {
        self.labels[&vid]
    }

    pub fn labels(&self) -> &HashMap<usize, usize> {
        &self.labels
    }

    /// Sorted, deduplicated label set of a simplex.
    pub fn label_set(&self, sim: &[usize]) -> Vec<usize> {
        let mut ls: Vec<usize> = sim.iter().map(|&v| self.labels[&v]).collect();
        ls.sort_unstable();
        ls.dedup();
        ls
    }

    /// Checks the Sperner condition: a vertex on Δ_i is never labeled i.
    pub fn validate_sperner(&self) -> Result<(), LabelingError> {
        let mut violations = Vec::new();
        for vid in self.complex.vertex_ids() {
            let l = self.labels[&vid];
            if self.complex.point(vid).0[l - 1].is_zero() {
                violations.push(SpernerViolation {
                    vertex: vid,
                    face: l,
                });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(LabelingError::NotSperner(violations))
        }
    }

    /// The simplicial map φ: Δ' → Δ sending a vertex labeled i to v_i.
    /// `target` must be the standard simplex complex of the same dimension.
    pub fn to_simplicial_map<'t>(
        &self,
        target: &'t EmbeddedComplex,
    ) -> Result<SimplicialMap<'t>, LabelingError>
    where
        'a: 't,
    {
        self.validate_sperner()?;
        let map = self
            .labels
            .iter()
            .map(|(&v, &l)| (v, l - 1))
            .collect();
        Ok(SimplicialMap::new(self.complex, target, map)?)
    }

    /// The combinatorial census against the distinguished face Δ_{n+1}.
    pub fn census(&self) -> Result<SpernerCensus, LabelingError> {
        self.census_against(self.complex.ambient_dim() + 1)
    }

    /// The census with an arbitrary distinguished face Δ_i; the lemma is
    /// symmetric in the face choice.
    pub fn census_against(&self, distinguished: usize) -> Result<SpernerCensus, LabelingError> {
        self.validate_sperner()?;
        let n = self.complex.dim();
        let full: Vec<usize> = (1..=n + 1).collect();
        let door_set: Vec<usize> = full
            .iter()
            .copied()
            .filter(|&i| i != distinguished)
            .collect();

        let mut census = SpernerCensus {
            distinguished,
            ..SpernerCensus::default()
        };
        for top in self.complex.top_simplices().iter() {
            let ls = self.label_set(top);
            if ls == full {
                census.fully_labeled.push(top.clone());
            } else if ls == door_set {
                census.third_type.push(top.clone());
            }
        }
        census.e = census.fully_labeled.len();
        census.f = census.third_type.len();

        if n > 0 {
            for (i, face) in self.complex.simplices(n - 1).iter().enumerate() {
                if self.label_set(face) != door_set {
                    continue;
                }
                match self.complex.boundary_tag(i) {
                    Some(tag) => {
                        // a boundary door avoids the label of its carrier
                        // face, so it can only lie in the distinguished face
                        debug_assert_eq!(tag, distinguished);
                        census.boundary_doors.push(face.clone());
                    }
                    None => census.interior_doors.push(face.clone()),
                }
            }
        }
        census.h = census.boundary_doors.len();
        census.g = census.interior_doors.len();
        Ok(census)
    }

    /// All fully-labeled top simplices, by direct enumeration.
    pub fn find_fully_labeled_bruteforce(&self) -> Result<Vec<Vec<usize>>, LabelingError> {
        self.validate_sperner()?;
        let full: Vec<usize> = (1..=self.complex.dim() + 1).collect();
        Ok(self
            .complex
            .top_simplices()
            .iter()
            .filter(|top| self.label_set(top) == full)
            .cloned()
            .collect())
    }

    /// Serializes the labels as a JSON map from vertex id to label.
    pub fn to_json(&self) -> String {
        let doc: BTreeMap<String, usize> = self
            .complex
            .vertex_ids()
            .map(|v| (v.to_string(), self.labels[&v]))
            .collect();
        serde_json::to_string(&doc).unwrap()
    }
}

/// The counts and classified simplex lists of the combinatorial proof:
/// e fully-labeled top simplices ρ, f third-type top simplices, g interior
/// doors τ, h boundary doors σ.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SpernerCensus {
    pub e: usize,
    pub f: usize,
    pub g: usize,
    pub h: usize,
    /// The distinguished face Δ_i the census is taken against.
    pub distinguished: usize,
    pub fully_labeled: Vec<Vec<usize>>,
    pub third_type: Vec<Vec<usize>>,
    pub interior_doors: Vec<Vec<usize>>,
    pub boundary_doors: Vec<Vec<usize>>,
}

impl SpernerCensus {
    /// The exact double-count identity h + 2g = e + 2f.
    pub fn identity_holds(&self) -> bool {
        self.h + 2 * self.g == self.e + 2 * self.f
    }

    /// Census report as canonical JSON: {e, f, g, h, fully_labeled}.
    pub fn report_json(&self) -> String {
        #[derive(Serialize)]
        struct Report<'a> {
            e: usize,
            f: usize,
            g: usize,
            h: usize,
            fully_labeled: &'a [Vec<usize>],
        }
        serde_json::to_string(&Report {
            e: self.e,
            f: self.f,
            g: self.g,
            h: self.h,
            fully_labeled: &self.fully_labeled,
        })
        .unwrap()
    }
}
