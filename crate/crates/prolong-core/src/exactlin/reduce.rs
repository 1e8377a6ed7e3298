//! Sparse exact row reduction.
//!
//! [`RowReducer`] maintains a row-echelon basis of the row space fed into it,
//! one sparse row at a time. Rows never need to be materialized as a dense
//! matrix, which keeps the big equivariance/derivation systems of the upper
//! modules tractable: their rows are a few dozen nonzeros over thousands of
//! columns.

use std::collections::BTreeMap;

use super::scalar::ExactScalar;
use super::LinAlgError;

/// A sparse vector: `(column, value)` pairs, sorted by column, values nonzero.
pub type SparseVec = Vec<(u32, ExactScalar)>;

/// `dst + c * src` as a sorted merge.
pub fn axpy(dst: &SparseVec, c: &ExactScalar, src: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() && j < src.len() {
        match dst[i].0.cmp(&src[j].0) {
            std::cmp::Ordering::Less => {
                out.push(dst[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                let v = c.mul(&src[j].1);
                if !v.is_zero() {
                    out.push((src[j].0, v));
                }
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = dst[i].1.add_scaled(c, &src[j].1);
                if !v.is_zero() {
                    out.push((dst[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&dst[i..]);
    for (col, val) in &src[j..] {
        let v = c.mul(val);
        if !v.is_zero() {
            out.push((*col, v));
        }
    }
    out
}

/// Looks up a column in a sparse vector.
pub fn sparse_get(v: &SparseVec, col: u32) -> Option<&ExactScalar> {
    v.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|k| &v[k].1)
}

/// Converts a dense slice to a sparse vector.
pub fn to_sparse(dense: &[ExactScalar]) -> SparseVec {
    dense
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .map(|(c, e)| (c as u32, e.clone()))
        .collect()
}

/// Converts a sparse vector to a dense one of the given width.
pub fn to_dense(v: &SparseVec, ncols: usize) -> Vec<ExactScalar> {
    let mut out = vec![ExactScalar::zero(); ncols];
    for (c, e) in v {
        out[*c as usize] = e.clone();
    }
    out
}

/// Incremental exact row-echelon reduction with pivot rows normalized to a
/// leading 1.
pub struct RowReducer {
    ncols: usize,
    pivots: BTreeMap<u32, SparseVec>,
    fully_reduced: bool,
}

impl RowReducer {
    pub fn new(ncols: usize) -> Self {
        RowReducer {
            ncols,
            pivots: BTreeMap::new(),
            fully_reduced: true,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces a row against the current pivots without inserting it.
    pub fn reduce(&self, mut row: SparseVec) -> SparseVec {
        let mut k = 0;
        while k < row.len() {
            let col = row[k].0;
            if let Some(p) = self.pivots.get(&col) {
                let c = row[k].1.neg();
                row = axpy(&row, &c, p);
                // Entries before `k` are at non-pivot columns already.
            } else {
                k += 1;
            }
        }
        row
    }

    /// Whether the row lies in the span of the rows added so far.
    pub fn is_in_span(&self, row: SparseVec) -> bool {
        self.reduce(row).is_empty()
    }

    /// Adds a row; returns true when it increased the rank.
    pub fn add_row(&mut self, mut row: SparseVec) -> bool {
        loop {
            let Some((col, lead)) = row.first().cloned() else {
                return false;
            };
            match self.pivots.get(&col) {
                Some(p) => {
                    let c = lead.neg();
                    row = axpy(&row, &c, p);
                }
                None => {
                    if !lead.is_one() {
                        let inv = lead.inv();
                        for (_, e) in &mut row {
                            *e = e.mul(&inv);
                        }
                    }
                    self.pivots.insert(col, row);
                    self.fully_reduced = false;
                    return true;
                }
            }
        }
    }

    /// Back-substitutes to reduced row-echelon form.
    fn finalize(&mut self) {
        if self.fully_reduced {
            return;
        }
        let cols: Vec<u32> = self.pivots.keys().copied().collect();
        for &c in cols.iter().rev() {
            let mut row = self.pivots.remove(&c).unwrap();
            let mut k = 1;
            while k < row.len() {
                let col = row[k].0;
                if let Some(p) = self.pivots.get(&col) {
                    let coeff = row[k].1.neg();
                    row = axpy(&row, &coeff, p);
                } else {
                    k += 1;
                }
            }
            self.pivots.insert(c, row);
        }
        self.fully_reduced = true;
    }

    pub fn pivot_columns(&self) -> Vec<u32> {
        self.pivots.keys().copied().collect()
    }

    /// The echelon basis of the row space.
    pub fn row_space_basis(&mut self) -> Vec<SparseVec> {
        self.finalize();
        self.pivots.values().cloned().collect()
    }

    /// A basis of the kernel of the matrix whose rows were added, one vector
    /// per free column, ordered by free column.
    pub fn kernel_basis(&mut self) -> Vec<SparseVec> {
        self.finalize();
        let mut out = Vec::with_capacity(self.ncols - self.pivots.len());
        for f in 0..self.ncols as u32 {
            if self.pivots.contains_key(&f) {
                continue;
            }
            let mut v: SparseVec = vec![(f, ExactScalar::one())];
            for (c, row) in &self.pivots {
                if let Some(a) = sparse_get(row, f) {
                    v.push((*c, a.neg()));
                }
            }
            v.sort_by_key(|(c, _)| *c);
            out.push(v);
        }
        out
    }

    /// Interprets the final column as a right-hand side and returns one exact
    /// solution of the remaining columns' system, free variables set to zero.
    pub fn solve_augmented(&mut self) -> Result<Vec<ExactScalar>, LinAlgError> {
        let b_col = (self.ncols - 1) as u32;
        if self.pivots.contains_key(&b_col) {
            return Err(LinAlgError::InconsistentSystem);
        }
        self.finalize();
        let mut x = vec![ExactScalar::zero(); self.ncols - 1];
        for (c, row) in &self.pivots {
            if let Some(v) = sparse_get(row, b_col) {
                x[*c as usize] = v.clone();
            }
        }
        Ok(x)
    }
}

/// Expresses vectors over a fixed independent spanning set, by augmented
/// reduction: rows `[v_k | e_k]` are reduced once, after which any target
/// resolves in a single pass.
pub struct SpanExpresser {
    ncols: usize,
    k: usize,
    red: RowReducer,
}

impl SpanExpresser {
    pub fn new(ncols: usize, vectors: &[SparseVec]) -> Self {
        let k = vectors.len();
        let mut red = RowReducer::new(ncols + k);
        for (j, v) in vectors.iter().enumerate() {
            let mut row = v.clone();
            row.push(((ncols + j) as u32, ExactScalar::one()));
            let added = red.add_row(row);
            assert!(added, "spanning set must be linearly independent");
        }
        SpanExpresser { ncols, k, red }
    }

    /// Coordinates of `t` over the spanning set, or `None` if outside.
    pub fn express(&self, t: &SparseVec) -> Option<Vec<ExactScalar>> {
        let reduced = self.red.reduce(t.clone());
        let mut coords = vec![ExactScalar::zero(); self.k];
        for (c, v) in reduced {
            if (c as usize) < self.ncols {
                return None;
            }
            coords[c as usize - self.ncols] = v.neg();
        }
        Some(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> ExactScalar {
        ExactScalar::from_int(v)
    }

    #[test]
    fn span_expresser_resolves_coordinates() {
        let b1: SparseVec = vec![(0, s(1)), (1, s(1))];
        let b2: SparseVec = vec![(1, s(1)), (2, s(1))];
        let e = SpanExpresser::new(3, &[b1, b2]);
        let t: SparseVec = vec![(0, s(2)), (1, s(1)), (2, s(-1))];
        assert_eq!(e.express(&t).unwrap(), vec![s(2), s(-1)]);
        assert!(e.express(&vec![(2, s(1)), (0, s(1))]).is_none());
    }

    #[test]
    fn axpy_merges_and_cancels() {
        let a: SparseVec = vec![(0, s(1)), (2, s(3))];
        let b: SparseVec = vec![(0, s(1)), (1, s(5))];
        let out = axpy(&a, &s(-1), &b);
        assert_eq!(out, vec![(1, s(-5)), (2, s(3))]);
    }

    #[test]
    fn rank_and_kernel_of_small_system() {
        let mut red = RowReducer::new(3);
        red.add_row(vec![(0, s(1)), (1, s(1))]);
        red.add_row(vec![(0, s(2)), (1, s(2))]);
        assert_eq!(red.rank(), 1);
        let ker = red.kernel_basis();
        assert_eq!(ker.len(), 2);
    }

    #[test]
    fn membership_after_reduction() {
        let mut red = RowReducer::new(4);
        red.add_row(vec![(0, s(1)), (3, s(2))]);
        red.add_row(vec![(1, s(1)), (3, s(-1))]);
        assert!(red.is_in_span(vec![(0, s(3)), (1, s(1)), (3, s(5))]));
        assert!(!red.is_in_span(vec![(2, s(1))]));
    }
}
