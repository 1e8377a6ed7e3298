//! Dense matrices over the Gaussian rationals.

use std::fmt;
use std::ops::{Index, IndexMut};

use super::reduce::{RowReducer, SparseVec};
use super::scalar::ExactScalar;
use super::LinAlgError;

/// A dense row-major matrix over `Q(i)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![ExactScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = ExactScalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor from integer entries.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        ExactMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| ExactScalar::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[ExactScalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect();
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn neg(&self) -> ExactMatrix {
        self.scale(&ExactScalar::from_int(-1))
    }

    pub fn scale(&self, c: &ExactScalar) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.mul(c)).collect(),
        }
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(r, c)] = out[(r, c)].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Vec<ExactScalar> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![ExactScalar::zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = &self[(r, c)];
                if !a.is_zero() && !v[c].is_zero() {
                    out[r] = out[r].add(&a.mul(&v[c]));
                }
            }
        }
        out
    }

    /// Commutator `AB - BA`.
    pub fn commutator(&self, other: &ExactMatrix) -> ExactMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Anticommutator `AB + BA`.
    pub fn anticommutator(&self, other: &ExactMatrix) -> ExactMatrix {
        self.mul(other).add(&other.mul(self))
    }

    /// Kronecker product, blocks ordered by the left factor.
    pub fn kronecker(&self, other: &ExactMatrix) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = &self[(r, c)];
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = &other[(r2, c2)];
                        if !b.is_zero() {
                            out[(r * other.rows + r2, c * other.cols + c2)] = a.mul(b);
                        }
                    }
                }
            }
        }
        out
    }

    /// True when the matrix is `c * Id`; returns the scalar.
    pub fn as_scalar_multiple_of_identity(&self) -> Option<ExactScalar> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self[(0, 0)].clone();
        let zero = ExactScalar::zero();
        for r in 0..self.rows {
            for k in 0..self.cols {
                let expect = if r == k { &c } else { &zero };
                if &self[(r, k)] != expect {
                    return None;
                }
            }
        }
        Some(c)
    }

    fn sparse_rows(&self) -> impl Iterator<Item = SparseVec> + '_ {
        (0..self.rows).map(move |r| {
            self.row(r)
                .iter()
                .enumerate()
                .filter(|(_, e)| !e.is_zero())
                .map(|(c, e)| (c as u32, e.clone()))
                .collect()
        })
    }

    /// Exact rank over `Q(i)`.
    pub fn rank(&self) -> usize {
        let mut red = RowReducer::new(self.cols);
        for row in self.sparse_rows() {
            red.add_row(row);
        }
        red.rank()
    }

    /// A basis of the right kernel `{x : Mx = 0}`, each vector scaled so its
    /// first nonzero entry is 1. The basis has `cols - rank` vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<ExactScalar>> {
        let mut red = RowReducer::new(self.cols);
        for row in self.sparse_rows() {
            red.add_row(row);
        }
        red.kernel_basis()
            .into_iter()
            .map(|v| {
                let mut dense = vec![ExactScalar::zero(); self.cols];
                for (c, e) in v {
                    dense[c as usize] = e;
                }
                let lead = dense.iter().find(|e| !e.is_zero()).unwrap().clone();
                for e in &mut dense {
                    if !e.is_zero() {
                        *e = e.div(&lead);
                    }
                }
                dense
            })
            .collect()
    }

    /// One exact solution of `Mx = b`, if the system is consistent.
    pub fn solve(&self, b: &[ExactScalar]) -> Result<Vec<ExactScalar>, LinAlgError> {
        assert_eq!(self.rows, b.len(), "right-hand side length mismatch");
        let mut red = RowReducer::new(self.cols + 1);
        for (r, mut row) in self.sparse_rows().enumerate() {
            if !b[r].is_zero() {
                row.push((self.cols as u32, b[r].clone()));
            }
            red.add_row(row);
        }
        red.solve_augmented()
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let mut e = vec![ExactScalar::zero(); n];
            e[k] = ExactScalar::one();
            match self.solve(&e) {
                Ok(x) => cols.push(x),
                Err(_) => return None,
            }
        }
        let mut inv = ExactMatrix::zeros(n, n);
        for (c, col) in cols.iter().enumerate() {
            for r in 0..n {
                inv[(r, c)] = col[r].clone();
            }
        }
        if self.mul(&inv) == ExactMatrix::identity(n) {
            Some(inv)
        } else {
            None
        }
    }

    /// Determinant by pivot-normalized elimination.
    pub fn det(&self) -> ExactScalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = ExactScalar::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(p) = pivot else {
                return ExactScalar::zero();
            };
            if p != col {
                for c in 0..n {
                    let tmp = m[(p, c)].clone();
                    m[(p, c)] = m[(col, c)].clone();
                    m[(col, c)] = tmp;
                }
                det = det.neg();
            }
            let lead = m[(col, col)].clone();
            det = det.mul(&lead);
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].div(&lead);
                for c in col..n {
                    let delta = factor.mul(&m[(col, c)]);
                    m[(r, c)] = m[(r, c)].sub(&delta);
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = ExactScalar;

    fn index(&self, (r, c): (usize, usize)) -> &ExactScalar {
        &self.entries[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut ExactScalar {
        &mut self.entries[r * self.cols + c]
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_identity_and_zero() {
        assert_eq!(ExactMatrix::identity(2).rank(), 2);
        assert_eq!(ExactMatrix::zeros(3, 5).rank(), 0);
    }

    #[test]
    fn rank_with_gaussian_entries() {
        // second row = i * first row
        let i = ExactScalar::i();
        let m = ExactMatrix::from_rows(vec![
            vec![ExactScalar::one(), i.clone()],
            vec![i.clone(), ExactScalar::from_int(-1)],
        ]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.kernel_basis().len(), 1);
    }

    #[test]
    fn kernel_sizes() {
        assert!(ExactMatrix::identity(4).kernel_basis().is_empty());
        assert_eq!(ExactMatrix::zeros(2, 3).kernel_basis().len(), 3);
        let m = ExactMatrix::from_int_rows(&[&[1, 1, 0]]);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(m.mul_vec(v).iter().all(ExactScalar::is_zero));
            assert!(v.iter().find(|e| !e.is_zero()).unwrap().is_one());
        }
    }

    #[test]
    fn solve_examples() {
        let id = ExactMatrix::identity(3);
        let b = vec![
            ExactScalar::from_int(4),
            ExactScalar::i(),
            ExactScalar::from_frac(1, 3),
        ];
        assert_eq!(id.solve(&b).unwrap(), b);

        let zero = ExactMatrix::zeros(2, 2);
        let b = vec![ExactScalar::one(), ExactScalar::zero()];
        assert!(zero.solve(&b).is_err());

        let m = ExactMatrix::from_int_rows(&[&[2]]);
        assert_eq!(
            m.solve(&[ExactScalar::one()]).unwrap(),
            vec![ExactScalar::from_frac(1, 2)]
        );
    }

    #[test]
    fn kronecker_and_commutator() {
        let a = ExactMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let id = ExactMatrix::identity(2);
        let k = a.kronecker(&id);
        assert_eq!(k.rows(), 4);
        assert_eq!(k[(0, 2)], ExactScalar::one());
        assert!(a.commutator(&a).is_zero());
    }
}
