//! The standard n-simplex, its faces, and points in barycentric coordinates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar used on every proof-verification path.
pub type Rat = BigRational;

/// Default tolerance for treating a floating coordinate as zero.
pub const EPS_ZERO: f64 = 1e-12;
/// Default tolerance on the coordinate sum of floating points.
pub const EPS_SUM: f64 = 1e-9;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimplexError {
    #[error("label {label} out of range 1..={max}")]
    LabelOutOfRange { label: usize, max: usize },
    #[error("point has {got} coordinates, expected {expected}")]
    WrongArity { got: usize, expected: usize },
    #[error("coordinate {index} is negative")]
    NegativeCoordinate { index: usize },
    #[error("coordinates do not sum to 1")]
    BadSum,
}

/// A point of the standard simplex in exact barycentric coordinates.
///
/// Coordinates are nonnegative and sum to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoint(pub Vec<Rat>);

impl RatPoint {
    pub fn new(coords: Vec<Rat>) -> Result<Self, SimplexError> {
        for (i, c) in coords.iter().enumerate() {
            if c.is_negative() {
                return Err(SimplexError::NegativeCoordinate { index: i });
            }
        }
        let sum: Rat = coords.iter().sum();
        if !sum.is_one() {
            return Err(SimplexError::BadSum);
        }
        Ok(RatPoint(coords))
    }

    /// Dimension n of the ambient simplex (`n+1` coordinates).
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Labels `i` (1-based) of the faces Δ_i containing this point,
    /// i.e. `{ i : x^i = 0 }`, tested exactly.
    pub fn carrier_faces(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_zero())
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rat_to_f64).collect()
    }

    /// Exact squared Euclidean distance in (n+1)-space.
    pub fn dist_sq(&self, other: &RatPoint) -> Rat {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .sum()
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    let numer = bigint_to_f64(r.numer());
    let denom = bigint_to_f64(r.denom());
    numer / denom
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    // Good enough for diameter reporting; exact paths never round.
    n.to_string().parse::<f64>().unwrap()
}

/// The standard n-simplex Δ with vertices v_1, …, v_{n+1} at the unit
/// coordinate points of R^{n+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardSimplex {
    dim: usize,
}

/// The face Δ_i of Δ opposite vertex v_i: its vertex set and the defining
/// predicate `x^i = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceDescriptor {
    /// Label i of the opposite vertex (1-based).
    pub opposite: usize,
    /// Labels of the vertices spanning the face.
    pub vertex_labels: Vec<usize>,
}

impl FaceDescriptor {
    /// The defining predicate of the face: the i-th coordinate vanishes.
    pub fn contains(&self, p: &RatPoint) -> bool {
        p.0[self.opposite - 1].is_zero()
    }
}

impl StandardSimplex {
    pub fn new(dim: usize) -> Self {
        StandardSimplex { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The unit coordinate point v_i (1-based label).
    pub fn vertex(&self, i: usize) -> RatPoint {
        let mut coords = vec![Rat::zero(); self.dim + 1];
        coords[i - 1] = Rat::one();
        RatPoint(coords)
    }

    pub fn vertices(&self) -> Vec<RatPoint> {
        (1..=self.dim + 1).map(|i| self.vertex(i)).collect()
    }

    /// The face Δ_i opposite vertex v_i.
    pub fn face_opposite(&self, i: usize) -> Result<FaceDescriptor, SimplexError> {
        if i < 1 || i > self.dim + 1 {
            return Err(SimplexError::LabelOutOfRange {
                label: i,
                max: self.dim + 1,
            });
        }
        Ok(FaceDescriptor {
            opposite: i,
            vertex_labels: (1..=self.dim + 1).filter(|&j| j != i).collect(),
        })
    }
}

/// Maximum pairwise Euclidean distance between the listed points, treating
/// barycentric coordinates as coordinates in (n+1)-space.
pub fn simplex_diameter(points: &[RatPoint]) -> f64 {
    simplex_diameter_sq(points).map_or(0.0, |d| rat_to_f64(&d).sqrt())
}

/// Exact squared diameter; `None` for a single point or empty list.
pub fn simplex_diameter_sq(points: &[RatPoint]) -> Option<Rat> {
    let mut best: Option<Rat> = None;
    for (k, p) in points.iter().enumerate() {
        for q in &points[k + 1..] {
            let d = p.dist_sq(q);
            best = Some(match best {
                Some(b) if b >= d => b,
                _ => d,
            });
        }
    }
    best
}
