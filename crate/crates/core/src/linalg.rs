//! Dense linear algebra over F_p.

use crate::error::{Error, Result};
use crate::fp::{FpElem, PrimeModulus};

/// A column vector over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpVector {
    modulus: PrimeModulus,
    entries: Vec<u64>,
}

impl FpVector {
    pub fn new(modulus: PrimeModulus, entries: Vec<u64>) -> Self {
        let entries = entries.into_iter().map(|v| modulus.reduce(v)).collect();
        FpVector { modulus, entries }
    }

    pub fn zeros(modulus: PrimeModulus, len: usize) -> Self {
        FpVector {
            modulus,
            entries: vec![0; len],
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> FpElem {
        self.modulus.elem(self.entries[i])
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }
}

/// Row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    modulus: PrimeModulus,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(modulus: PrimeModulus, rows: usize, cols: usize) -> Self {
        FpMatrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: PrimeModulus, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows of signed integers (reduced mod p).
    pub fn from_rows_i64(modulus: PrimeModulus, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        let data = rows.iter().flatten().map(|&v| modulus.elem_i64(v).value()).collect();
        Ok(FpMatrix {
            modulus,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix whose column `j` is `columns[j]`.
    pub fn from_columns(modulus: PrimeModulus, rows: usize, columns: &[Vec<u64>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(modulus, rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &v) in col.iter().enumerate() {
                m.data[i * cols + j] = modulus.reduce(v);
            }
        }
        m
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FpElem {
        self.modulus.elem(self.data[r * self.cols + c])
    }

    pub(crate) fn raw(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FpElem) {
        assert_eq!(v.modulus(), self.modulus);
        self.data[r * self.cols + c] = v.value();
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.raw(r, c)).collect()
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let md = self.modulus;
        (0..self.rows)
            .map(|r| {
                let row = &self.data[r * self.cols..(r + 1) * self.cols];
                row.iter().zip(v).fold(0u64, |acc, (&a, &b)| md.add(acc, md.mul(a, b)))
            })
            .collect()
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let md = self.modulus;
        FpMatrix {
            modulus: md,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| md.sub(a, b)).collect(),
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let md = self.modulus;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row == self.rows {
                break;
            }
            let Some(sel) = (row..self.rows).find(|&r| self.data[r * cols + col] != 0) else {
                continue;
            };
            if sel != row {
                for c in 0..cols {
                    self.data.swap(sel * cols + c, row * cols + c);
                }
            }
            let inv = md.inv(self.data[row * cols + col]).expect("pivot is nonzero");
            for c in col..cols {
                let v = self.data[row * cols + c];
                self.data[row * cols + c] = md.mul(v, inv);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.data[r * cols + col];
                if factor == 0 {
                    continue;
                }
                for c in col..cols {
                    let sub = md.mul(factor, self.data[row * cols + c]);
                    self.data[r * cols + c] = md.sub(self.data[r * cols + c], sub);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }
}

/// Basis of the kernel `{v : M v = 0}`.
///
/// The basis is returned in reduced column echelon form: read as the columns of
/// a `cols x k` matrix, each vector's first nonzero coordinate is 1 and that
/// coordinate is zero in every other basis vector. The result is therefore
/// unique for a given kernel.
pub fn solve_nullspace(m: &FpMatrix) -> Vec<FpVector> {
    let md = m.modulus;
    let n = m.cols;
    let mut reduced = m.clone();
    let pivots = reduced.rref();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = md.neg(reduced.raw(r, free));
        }
        basis.push(v);
    }
    if basis.is_empty() {
        return Vec::new();
    }
    // Row-reduce the basis vectors themselves to get the canonical form.
    let k = basis.len();
    let mut b = FpMatrix {
        modulus: md,
        rows: k,
        cols: n,
        data: basis.into_iter().flatten().collect(),
    };
    let rank = b.rref().len();
    debug_assert_eq!(rank, k);
    (0..k)
        .map(|r| FpVector {
            modulus: md,
            entries: b.data[r * n..(r + 1) * n].to_vec(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(solve_nullspace(&FpMatrix::identity(m(7), 3)).is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let k = solve_nullspace(&FpMatrix::zeros(m(7), 2, 2));
        assert_eq!(k.len(), 2);
        assert_eq!(k[0].entries(), &[1, 0]);
        assert_eq!(k[1].entries(), &[0, 1]);
    }

    #[test]
    fn worked_linear_system_over_f5() {
        // columns (c0, c1, c2)
        let sys = FpMatrix::from_rows_i64(m(5), &[vec![-2, -1, 2], vec![-3, -1, 1], vec![-1, 1, 0]]).unwrap();
        let k = solve_nullspace(&sys);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].entries(), &[1, 1, 4]);
        assert_eq!(sys.rank(), 2);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(FpMatrix::from_rows_i64(m(5), &[vec![1, 2], vec![1]]).is_err());
    }

    proptest! {
        #[test]
        fn kernel_is_sound_and_complete(
            rows in 1usize..6,
            cols in 1usize..7,
            seed in proptest::collection::vec(0u64..5, 36),
            p in prop_oneof![Just(3u64), Just(5), Just(13)],
        ) {
            let md = m(p);
            let data: Vec<Vec<i64>> = (0..rows)
                .map(|r| (0..cols).map(|c| (seed[r * 6 + c] % p) as i64).collect())
                .collect();
            let mat = FpMatrix::from_rows_i64(md, &data).unwrap();
            let basis = solve_nullspace(&mat);
            for v in &basis {
                prop_assert!(mat.mul_vec(v.entries()).iter().all(|&x| x == 0));
                let lead = v.entries().iter().position(|&x| x != 0).unwrap();
                prop_assert_eq!(v.entries()[lead], 1);
            }
            prop_assert_eq!(mat.rank() + basis.len(), cols);
            let cols_as_matrix = FpMatrix::from_columns(
                md,
                cols,
                &basis.iter().map(|v| v.entries().to_vec()).collect::<Vec<_>>(),
            );
            prop_assert_eq!(cols_as_matrix.rank(), basis.len());
        }
    }
}
