//! Cross-proof consistency driver: runs the combinatorial census, the
//! cochain identity, and the mod-2 degree computation on the same labeling
//! and asserts their numeric agreement.

use std::collections::HashMap;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cochain::{chain_identity_report, degree_mod2, pullback, Cochain, CochainError};
use crate::complex::{EmbeddedComplex, SimplicialMap};
use crate::labeling::{Labeling, LabelingError};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error("disagreement between {left} and {right}: {detail}")]
    Disagreement {
        left: &'static str,
        right: &'static str,
        detail: String,
    },
}

/// A uniformly random valid Sperner labeling: each vertex w gets a label
/// drawn from { j : w^j > 0 }. Deterministic for a fixed seed.
pub fn random_sperner_labeling(
    complex: &EmbeddedComplex,
    seed: u64,
) -> Result<Labeling<'_>, LabelingError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels = HashMap::new();
    for vid in complex.vertex_ids() {
        let choices: Vec<usize> = (1..=complex.ambient_dim() + 1)
            .filter(|&j| !complex.point(vid).0[j - 1].is_zero())
            .collect();
        labels.insert(vid, *choices.choose(&mut rng).unwrap());
    }
    Labeling::new(complex, labels)
}

/// Iterates over every valid Sperner labeling of the complex, in the
/// lexicographic order of per-vertex choice indices. Intended for tiny
/// complexes only; the count is the product of the per-vertex choice-set
/// sizes.
pub fn exhaustive_sperner_labelings(complex: &EmbeddedComplex) -> ExhaustiveLabelings<'_> {
    let vertices: Vec<usize> = complex.vertex_ids().collect();
    let choices: Vec<Vec<usize>> = vertices
        .iter()
        .map(|&vid| {
            (1..=complex.ambient_dim() + 1)
                .filter(|&j| !complex.point(vid).0[j - 1].is_zero())
                .collect()
        })
        .collect();
    ExhaustiveLabelings {
        complex,
        vertices,
        choices,
        counter: vec![0; complex.vertex_ids().count()],
        done: false,
    }
}

pub struct ExhaustiveLabelings<'a> {
    complex: &'a EmbeddedComplex,
    vertices: Vec<usize>,
    choices: Vec<Vec<usize>>,
    counter: Vec<usize>,
    done: bool,
}

impl<'a> ExhaustiveLabelings<'a> {
    /// Total number of valid labelings.
    pub fn total(&self) -> usize {
        self.choices.iter().map(|c| c.len()).product()
    }
}

impl<'a> Iterator for ExhaustiveLabelings<'a> {
    type Item = Labeling<'a>;

    fn next(&mut self) -> Option<Labeling<'a>> {
        if self.done {
            return None;
        }
        let labels: HashMap<usize, usize> = self
            .vertices
            .iter()
            .zip(&self.counter)
            .map(|(&vid, &ci)| (vid, self.choices[self.vertices.iter().position(|v| *v == vid).unwrap()][ci]))
            .collect();
        // advance the mixed-radix counter
        let mut i = 0;
        loop {
            if i == self.counter.len() {
                self.done = true;
                break;
            }
            self.counter[i] += 1;
            if self.counter[i] < self.choices[i].len() {
                break;
            }
            self.counter[i] = 0;
            i += 1;
        }
        Some(Labeling::new(self.complex, labels).unwrap())
    }
}

/// The consolidated result of running all three proofs' computations on
/// one labeling.
#[derive(Debug, Clone, Serialize)]
pub struct TripleCheckReport {
    pub e: usize,
    pub f: usize,
    pub g: usize,
    pub h: usize,
    /// Parity of e from the census (the combinatorial verdict).
    pub census_parity: u8,
    /// Parity extracted from the cochain identity sides.
    pub chain_parity: u8,
    /// deg₂(φ_∂), the cohomological verdict.
    pub degree_parity: u8,
    pub cancellations: usize,
    pub agree: bool,
}

/// Runs census, cochain identity, and degree computation on one labeling
/// and checks that all three give the same parity verdict, that e is odd,
/// and that the cross-referenced counts match.
pub fn triple_check(labeling: &Labeling<'_>) -> Result<TripleCheckReport, VerifyError> {
    labeling.validate_sperner()?;
    let complex = labeling.complex();
    let n = complex.dim();

    let census = labeling.census()?;
    if n == 0 {
        // base case: a 0-complex has e = #points labeled 1 = #vertices,
        // no boundary and no doors; the lemma is trivially true
        return Ok(TripleCheckReport {
            e: census.e,
            f: 0,
            g: 0,
            h: 0,
            census_parity: (census.e % 2) as u8,
            chain_parity: (census.e % 2) as u8,
            degree_parity: (census.e % 2) as u8,
            cancellations: 0,
            agree: census.e % 2 == 1,
        });
    }

    let chain = chain_identity_report(labeling)?;
    if (chain.e, chain.f, chain.g, chain.h) != (census.e, census.f, census.g, census.h) {
        return Err(VerifyError::Disagreement {
            left: "census",
            right: "chain_identity_report",
            detail: format!(
                "counts ({},{},{},{}) vs ({},{},{},{})",
                census.e, census.f, census.g, census.h, chain.e, chain.f, chain.g, chain.h
            ),
        });
    }
    if !chain.sides_equal || !chain.sigma_hats_distinct || !chain.count_identity_holds {
        return Err(VerifyError::Disagreement {
            left: "chain identity lhs",
            right: "rhs",
            detail: "cochain identity failed to balance".into(),
        });
    }
    if chain.cancellations != census.f {
        return Err(VerifyError::Disagreement {
            left: "cancellation count",
            right: "census.f",
            detail: format!("{} vs {}", chain.cancellations, census.f),
        });
    }

    // Cohomological route: deg₂(φ_∂) and the pullback of Δ through φ.
    let target = EmbeddedComplex::standard(n);
    let phi = labeling.to_simplicial_map(&target)?;
    let source_boundary = complex.boundary_subcomplex();
    let target_boundary = target.boundary_subcomplex();
    let phi_boundary = SimplicialMap::new(
        &source_boundary,
        &target_boundary,
        source_boundary
            .vertex_ids()
            .map(|v| (v, labeling.label(v) - 1))
            .collect(),
    )
    .map_err(CochainError::from)?;
    let degree = degree_mod2(&phi_boundary)?;

    let delta = Cochain::from_simplices(&target, n, [target.top_simplices().get(0).to_vec()])
        .map_err(VerifyError::Cochain)?;
    let rho_sum = pullback(&phi, &delta)?;
    let pullback_parity = (rho_sum.support_indices().len() % 2) as u8;

    let census_parity = (census.e % 2) as u8;
    let chain_parity = (chain.lhs_reduced.len() % 2) as u8;
    if degree != (census.h % 2) as u8 {
        return Err(VerifyError::Disagreement {
            left: "degree_mod2",
            right: "census.h",
            detail: format!("{degree} vs {}", census.h % 2),
        });
    }
    if pullback_parity != census_parity {
        return Err(VerifyError::Disagreement {
            left: "pullback parity",
            right: "census.e",
            detail: format!("{pullback_parity} vs {census_parity}"),
        });
    }

    let agree = census_parity == chain_parity
        && census_parity == degree
        && census_parity == 1
        && census.identity_holds();
    if !agree {
        return Err(VerifyError::Disagreement {
            left: "parities",
            right: "oddness",
            detail: format!(
                "census {census_parity}, chain {chain_parity}, degree {degree}"
            ),
        });
    }
    Ok(TripleCheckReport {
        e: census.e,
        f: census.f,
        g: census.g,
        h: census.h,
        census_parity,
        chain_parity,
        degree_parity: degree,
        cancellations: chain.cancellations,
        agree,
    })
}
