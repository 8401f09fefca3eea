//! Bit-packed linear algebra over F2: rank and row-space membership by
//! Gaussian elimination. Used for cohomology ranks and coboundary-class
//! comparisons; deterministic by construction.

/// A dense F2 matrix with rows packed into 64-bit words.
#[derive(Debug, Clone)]
pub struct F2Matrix {
    pub rows: Vec<Vec<u64>>,
    pub cols: usize,
}

fn words(cols: usize) -> usize {
    cols.div_ceil(64)
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows: vec![vec![0; words(cols)]; rows],
            cols,
        }
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.rows[r][c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 == 1
    }

    pub fn rank(&self) -> usize {
        rank_of(self.rows.clone(), self.cols)
    }
}

fn leading_col(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn rank_of(mut rows: Vec<Vec<u64>>, _cols: usize) -> usize {
    let mut rank = 0;
    let n = rows.len();
    for i in 0..n {
        let Some(lead) = leading_col(&rows[i]) else {
            continue;
        };
        rank += 1;
        let pivot = rows[i].clone();
        for (j, row) in rows.iter_mut().enumerate() {
            if j > i && row[lead / 64] >> (lead % 64) & 1 == 1 {
                xor_into(row, &pivot);
            }
        }
    }
    rank
}

/// Reduced basis for incremental row-space membership queries.
#[derive(Debug, Default, Clone)]
pub struct RowSpace {
    basis: Vec<Vec<u64>>,
}

impl RowSpace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces `row` against the basis in place; returns the residue.
    fn reduce(&self, mut row: Vec<u64>) -> Vec<u64> {
        for b in &self.basis {
            let lead = leading_col(b).unwrap();
            if row[lead / 64] >> (lead % 64) & 1 == 1 {
                xor_into(&mut row, b);
            }
        }
        row
    }

    /// Inserts a row; returns false when it was already in the span.
    pub fn insert(&mut self, row: Vec<u64>) -> bool {
        let residue = self.reduce(row);
        if leading_col(&residue).is_none() {
            return false;
        }
        self.basis.push(residue);
        self.basis
            .sort_by_key(|b| leading_col(b).unwrap());
        true
    }

    pub fn contains(&self, row: Vec<u64>) -> bool {
        leading_col(&self.reduce(row)).is_none()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Packs a set of column indices into a bit row of the given width.
pub fn pack_support(cols: usize, support: impl IntoIterator<Item = usize>) -> Vec<u64> {
    let mut row = vec![0u64; words(cols)];
    for c in support {
        debug_assert!(c < cols.max(1));
        row[c / 64] |= 1 << (c % 64);
    }
    row
}
