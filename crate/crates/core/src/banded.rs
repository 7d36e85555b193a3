//! Banded matrices and Gaussian elimination without pivoting.
//!
//! Interpolation and collocation matrices built from B-splines have at most
//! `k` nonzeros per row, clustered around the diagonal when the sites are
//! ordered compatibly with the basis. Elimination without row exchanges keeps
//! the fill inside the original band.

use crate::error::{Error, Result};

/// Relative pivot threshold: a pivot is treated as zero when its magnitude is
/// at most this multiple of the largest entry in its row.
pub const PIVOT_TOLERANCE: f64 = 1e-13;

/// Square matrix with entries only on diagonals `-lower..=upper`.
///
/// Stored row by row, `lower + upper + 1` slots per row; entry `(i, j)` lives
/// at slot `j - i + lower` of row `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    data: Vec<f64>,
}

/// A contiguous run of entries `values` starting at `(row, first_col)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RowSegment {
    pub row: usize,
    pub first_col: usize,
    pub values: Vec<f64>,
}

impl RowSegment {
    pub fn new(row: usize, first_col: usize, values: Vec<f64>) -> Self {
        Self { row, first_col, values }
    }
}

/// How [`BandedMatrix::assemble`] treats two segments writing the same entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WritePolicy {
    /// The later segment wins.
    #[default]
    LastWins,
    /// Overlap is an error.
    Strict,
}

impl BandedMatrix {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("matrix must have at least one row".into()));
        }
        Ok(Self {
            n,
            lower,
            upper,
            data: vec![0.0; n * (lower + upper + 1)],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, 0, 0)?;
        m.data.iter_mut().for_each(|v| *v = 1.0);
        Ok(m)
    }

    /// Builds an `n x n` matrix with the given bandwidths from row segments.
    /// Entries not covered by any segment are zero.
    pub fn assemble(n: usize, lower: usize, upper: usize, rows: &[RowSegment], policy: WritePolicy) -> Result<Self> {
        let mut m = Self::zeros(n, lower, upper)?;
        let mut written = match policy {
            WritePolicy::Strict => Some(vec![false; m.data.len()]),
            WritePolicy::LastWins => None,
        };
        for seg in rows {
            for (offset, &v) in seg.values.iter().enumerate() {
                let (row, col) = (seg.row, seg.first_col + offset);
                let slot = m.slot(row, col).ok_or(Error::OutOfBand { row, col })?;
                if let Some(seen) = written.as_mut() {
                    if std::mem::replace(&mut seen[slot], true) {
                        return Err(Error::OverlappingWrite { row, col });
                    }
                }
                m.data[slot] = v;
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.lower
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.upper
    }

    fn width(&self) -> usize {
        self.lower + self.upper + 1
    }

    fn slot(&self, row: usize, col: usize) -> Option<usize> {
        if row >= self.n || col >= self.n || col + self.lower < row || col > row + self.upper {
            return None;
        }
        Some(row * self.width() + col + self.lower - row)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.slot(row, col).map_or(0.0, |s| self.data[s])
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) -> Result<()> {
        let s = self.slot(row, col).ok_or(Error::OutOfBand { row, col })?;
        self.data[s] = value;
        Ok(())
    }

    fn cols(&self, row: usize) -> std::ops::Range<usize> {
        row.saturating_sub(self.lower)..(row + self.upper + 1).min(self.n)
    }

    /// Dense row-major copy, mainly for inspection and tests.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok((0..self.n)
            .map(|i| self.cols(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect())
    }

    /// Solves `A x = b` by elimination without row exchanges followed by back
    /// substitution. The matrix is consumed; its storage holds the factors.
    pub fn factor_solve(mut self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: b.len(),
            });
        }
        let mut x = b.to_vec();
        let n = self.n;
        for p in 0..n {
            let row_max = self.cols(p).map(|j| self.get(p, j).abs()).fold(0.0, f64::max);
            let pivot = self.get(p, p);
            if !(pivot.abs() > PIVOT_TOLERANCE * row_max) {
                return Err(Error::Singular { row: p });
            }
            let last_col = (p + self.upper).min(n - 1);
            for i in p + 1..=(p + self.lower).min(n - 1) {
                let factor = self.get(i, p) / pivot;
                if factor == 0.0 {
                    continue;
                }
                for j in p + 1..=last_col {
                    let v = self.get(i, j) - factor * self.get(p, j);
                    let s = self.slot(i, j).expect("fill stays inside the band");
                    self.data[s] = v;
                }
                let s = self.slot(i, p).expect("eliminated entry is in band");
                self.data[s] = 0.0;
                x[i] -= factor * x[p];
            }
        }
        for p in (0..n).rev() {
            let last_col = (p + self.upper).min(n - 1);
            let tail: f64 = (p + 1..=last_col).map(|j| self.get(p, j) * x[j]).sum();
            x[p] = (x[p] - tail) / self.get(p, p);
        }
        Ok(x)
    }
}
