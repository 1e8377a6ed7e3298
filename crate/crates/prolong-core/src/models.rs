//! Independent reference models for the classification rows.
//!
//! Matrix superalgebras `gl`, `sl`, `pgl` and `osp` are built from explicit
//! basis matrices and graded by a diagonal grading element; the resulting
//! graded dimension vectors cross-check the prolongation engine without
//! sharing any code path with it. `K(1|N)` dimensions come from the contact
//! monomial count, and [`expected_row`] tabulates the classification rows
//! with their derived graded dimension vectors.

use std::collections::BTreeMap;

use crate::exactlin::{to_sparse, ExactMatrix, ExactScalar, SpanExpresser, SparseVec};
use crate::gradedlie::{BasisElement, GradedSuperalgebra};

/// Errors from the model layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    /// The grading element does not act with integer eigenvalues on the
    /// chosen basis.
    #[error("ad(H) is not integer-diagonal on basis element {0}")]
    NonIntegerGrading(usize),
}

/// Which constrained matrix space to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Gl,
    Sl,
    Pgl,
    Osp,
}

/// A matrix superalgebra with an explicit basis of `(m+n)×(m+n)` matrices,
/// parity by block position.
pub struct MatrixSuperalgebra {
    kind: ModelKind,
    even_dim: usize,
    odd_dim: usize,
    basis: Vec<(ExactMatrix, u8)>,
    labels: Vec<String>,
}

fn unit(total: usize, r: usize, c: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(total, total);
    m[(r, c)] = ExactScalar::one();
    m
}

/// Builds `gl(m|n)`, `sl(m|n)`, `pgl(n|n)` or `osp(m|n)` (`n` even for
/// `osp`). `pgl` requires `m = n`; it is realized as quotient data: the
/// basis of `gl` modulo the identity, with brackets projected along `C·Id`.
pub fn build_matrix_model(kind: ModelKind, m: usize, n: usize) -> MatrixSuperalgebra {
    let total = m + n;
    let parity = |a: usize, b: usize| u8::from((a < m) != (b < m));
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    match kind {
        ModelKind::Gl => {
            for a in 0..total {
                for b in 0..total {
                    basis.push((unit(total, a, b), parity(a, b)));
                    labels.push(format!("E{},{}", a + 1, b + 1));
                }
            }
        }
        ModelKind::Sl => {
            assert!(m != n, "sl(n|n) is not simple; use pgl for m = n");
            for a in 0..total {
                for b in 0..total {
                    if a != b {
                        basis.push((unit(total, a, b), parity(a, b)));
                        labels.push(format!("E{},{}", a + 1, b + 1));
                    }
                }
            }
            // Supertraceless diagonal combinations.
            let l = total - 1;
            for a in 0..l {
                let eps = if a < m { 1 } else { -1 };
                let x = unit(total, a, a).add(&unit(total, l, l).scale(&ExactScalar::from_int(eps)));
                basis.push((x, 0));
                labels.push(format!("D{}", a + 1));
            }
        }
        ModelKind::Pgl => {
            assert_eq!(m, n, "pgl is built for equal block sizes");
            let l = total - 1;
            for a in 0..total {
                for b in 0..total {
                    if (a, b) != (l, l) {
                        basis.push((unit(total, a, b), parity(a, b)));
                        labels.push(format!("E{},{}", a + 1, b + 1));
                    }
                }
            }
        }
        ModelKind::Osp => {
            assert!(n % 2 == 0 && n >= 2, "osp needs an even symplectic block");
            let half = n / 2;
            // so(m) with respect to the antidiagonal-ones symmetric form.
            let bar = |a: usize| m - 1 - a;
            for p in 0..m {
                for q in 0..m {
                    if q == bar(p) {
                        continue;
                    }
                    if (p, q) > (bar(q), bar(p)) {
                        continue;
                    }
                    let x = unit(total, p, q).sub(&unit(total, bar(q), bar(p)));
                    basis.push((x, 0));
                    labels.push(format!("so{},{}", p + 1, q + 1));
                }
            }
            // sp(n) with respect to Ω = [[0, I], [-I, 0]], blocks inside the
            // odd-index range [m, m+n).
            for i in 0..half {
                for j in 0..half {
                    // P block: E_ij ⊕ -E_ji on the two halves.
                    let x = unit(total, m + i, m + j)
                        .sub(&unit(total, m + half + j, m + half + i));
                    basis.push((x, 0));
                    labels.push(format!("spP{},{}", i + 1, j + 1));
                }
            }
            for i in 0..half {
                for j in i..half {
                    // Q block (symmetric).
                    let mut x = unit(total, m + i, m + half + j);
                    if i != j {
                        x = x.add(&unit(total, m + j, m + half + i));
                    }
                    basis.push((x, 0));
                    labels.push(format!("spQ{},{}", i + 1, j + 1));
                    // R block (symmetric).
                    let mut y = unit(total, m + half + i, m + j);
                    if i != j {
                        y = y.add(&unit(total, m + half + j, m + i));
                    }
                    basis.push((y, 0));
                    labels.push(format!("spR{},{}", i + 1, j + 1));
                }
            }
            // Odd part: B free, C = Ω⁻¹ Bᵀ G.
            for a in 0..m {
                for j in 0..n {
                    let mut x = unit(total, a, m + j);
                    // C = Ω⁻¹ Bᵀ G with B = E_{a,j}: a single entry at
                    // (partner(j), bar(a)) with sign -1 for j < half.
                    let (row, sign) = if j < half {
                        (m + half + j, -1)
                    } else {
                        (m + j - half, 1)
                    };
                    x[(row, bar(a))] = ExactScalar::from_int(sign);
                    basis.push((x, 1));
                    labels.push(format!("od{},{}", a + 1, j + 1));
                }
            }
        }
    }
    MatrixSuperalgebra {
        kind,
        even_dim: m,
        odd_dim: n,
        basis,
        labels,
    }
}

impl MatrixSuperalgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn block_sizes(&self) -> (usize, usize) {
        (self.even_dim, self.odd_dim)
    }

    pub fn basis(&self) -> &[(ExactMatrix, u8)] {
        &self.basis
    }

    fn total(&self) -> usize {
        self.even_dim + self.odd_dim
    }

    /// For `pgl`: projection along `C·Id` onto the stored complement.
    fn project(&self, x: ExactMatrix) -> ExactMatrix {
        if self.kind != ModelKind::Pgl {
            return x;
        }
        let l = self.total() - 1;
        let c = x[(l, l)].clone();
        if c.is_zero() {
            return x;
        }
        x.sub(&ExactMatrix::identity(self.total()).scale(&c))
    }

    /// `[X,Y] = XY - (-1)^{|X||Y|}YX`.
    pub fn supercommutator(
        &self,
        x: &ExactMatrix,
        px: u8,
        y: &ExactMatrix,
        py: u8,
    ) -> ExactMatrix {
        if px == 1 && py == 1 {
            x.anticommutator(y)
        } else {
            x.commutator(y)
        }
    }

    /// The depth-2 grading element `diag(0,...,0; 1,1,-1,-1)` used for the
    /// classification rows (odd block of size 4).
    pub fn standard_grading_element(&self) -> Vec<i64> {
        assert_eq!(self.odd_dim, 4, "standard grading needs an odd block of size 4");
        let mut h = vec![0i64; self.total()];
        h[self.even_dim] = 1;
        h[self.even_dim + 1] = 1;
        h[self.even_dim + 2] = -1;
        h[self.even_dim + 3] = -1;
        h
    }

    /// Grades the model by `ad(H)` for a diagonal integer `H`, producing a
    /// structure-constant algebra with degree = eigenvalue.
    pub fn grade_by_element(&self, h: &[i64]) -> Result<GradedSuperalgebra, ModelError> {
        assert_eq!(h.len(), self.total());
        let total = self.total();
        // Degree of each basis element; ad(H) must be a scalar on it.
        let mut degrees = Vec::with_capacity(self.dim());
        for (idx, (x, _)) in self.basis.iter().enumerate() {
            let mut deg: Option<i64> = None;
            for r in 0..total {
                for c in 0..total {
                    if x[(r, c)].is_zero() {
                        continue;
                    }
                    let d = h[r] - h[c];
                    match deg {
                        None => deg = Some(d),
                        Some(existing) if existing != d => {
                            return Err(ModelError::NonIntegerGrading(idx))
                        }
                        _ => {}
                    }
                }
            }
            degrees.push(deg.unwrap_or(0));
        }
        // Parity must match degree mod 2 for a consistent grading.
        for (idx, (_, p)) in self.basis.iter().enumerate() {
            if i64::from(*p) != degrees[idx].rem_euclid(2) {
                return Err(ModelError::NonIntegerGrading(idx));
            }
        }

        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by_key(|&k| degrees[k]);
        let position: Vec<usize> = {
            let mut pos = vec![0; self.dim()];
            for (new_idx, &old) in order.iter().enumerate() {
                pos[old] = new_idx;
            }
            pos
        };

        let basis_elements: Vec<BasisElement> = order
            .iter()
            .map(|&k| BasisElement {
                label: self.labels[k].clone(),
                degree: degrees[k],
            })
            .collect();
        let mut alg = GradedSuperalgebra::new(basis_elements, None);

        let flat: Vec<SparseVec> = self
            .basis
            .iter()
            .map(|(x, _)| {
                let mut dense = Vec::with_capacity(total * total);
                for r in 0..total {
                    for c in 0..total {
                        dense.push(x[(r, c)].clone());
                    }
                }
                to_sparse(&dense)
            })
            .collect();
        let expresser = SpanExpresser::new(total * total, &flat);

        for a in 0..self.dim() {
            for b in a..self.dim() {
                let (xa, pa) = (&self.basis[order[a]].0, self.basis[order[a]].1);
                let (xb, pb) = (&self.basis[order[b]].0, self.basis[order[b]].1);
                let val = self.project(self.supercommutator(xa, pa, xb, pb));
                if val.is_zero() {
                    continue;
                }
                let mut dense = Vec::with_capacity(total * total);
                for r in 0..total {
                    for c in 0..total {
                        dense.push(val[(r, c)].clone());
                    }
                }
                let coords = expresser
                    .express(&to_sparse(&dense))
                    .expect("model is closed under the supercommutator");
                let sparse: SparseVec = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(k, v)| (position[k] as u32, v))
                    .collect();
                let mut sparse = sparse;
                sparse.sort_by_key(|(c, _)| *c);
                alg.set_bracket(a, b, sparse);
            }
        }
        Ok(alg)
    }
}

/// Dimension of the degree-`p` component of the contact superalgebra
/// `K(1|N)` in its principal grading: the number of monomials `t^a ξ_I`
/// with `2a + |I| = p + 2`.
pub fn k1n_graded_dimension(n: usize, p: i64) -> usize {
    assert!(p >= -2);
    let target = (p + 2) as usize;
    let mut count = 0usize;
    let mut k = target % 2;
    while k <= target.min(n) {
        count += binomial(n, k);
        k += 2;
    }
    count
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc = 1usize;
    for j in 0..k.min(n - k) {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// One expected classification row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedRow {
    pub name: String,
    pub graded_dims: BTreeMap<i64, usize>,
    pub h0_dim: usize,
}

/// The expected maximal prolongation with a nonzero positive part, when the
/// classification lists one for `(D, N)`.
pub fn expected_row(dim_v: usize, copies: usize) -> Option<ExpectedRow> {
    let n = copies;
    match (dim_v, n) {
        (3, _) => Some(ExpectedRow {
            name: format!("osp({n}|4)"),
            graded_dims: BTreeMap::from([
                (-2, 3),
                (-1, 2 * n),
                (0, 4 + n * (n - 1) / 2),
                (1, 2 * n),
                (2, 3),
            ]),
            h0_dim: n * (n - 1) / 2,
        }),
        (4, _) => Some(ExpectedRow {
            name: if n == 4 {
                "pgl(4|4)".to_string()
            } else {
                format!("sl({n}|4)")
            },
            graded_dims: BTreeMap::from([
                (-2, 4),
                (-1, 4 * n),
                (0, n * n + 7),
                (1, 4 * n),
                (2, 4),
            ]),
            h0_dim: n * n,
        }),
        (5, 2) => Some(ExpectedRow {
            name: "ab(3)".to_string(),
            graded_dims: BTreeMap::from([(-2, 5), (-1, 8), (0, 14), (1, 8), (2, 5)]),
            h0_dim: 3,
        }),
        _ => None,
    }
}

/// The matrix model matching an expected row, when one exists (the `ab(3)`
/// row is exceptional and has no matrix model here).
pub fn model_for_row(dim_v: usize, copies: usize) -> Option<MatrixSuperalgebra> {
    match dim_v {
        3 => Some(build_matrix_model(ModelKind::Osp, copies, 4)),
        4 if copies == 4 => Some(build_matrix_model(ModelKind::Pgl, 4, 4)),
        4 => Some(build_matrix_model(ModelKind::Sl, copies, 4)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_dimensions() {
        assert_eq!(build_matrix_model(ModelKind::Osp, 1, 4).dim(), 14);
        assert_eq!(build_matrix_model(ModelKind::Sl, 2, 4).dim(), 35);
        assert_eq!(build_matrix_model(ModelKind::Pgl, 4, 4).dim(), 63);
        assert_eq!(build_matrix_model(ModelKind::Gl, 2, 2).dim(), 16);
        // osp(4|2): so(4) + sp(2) + odd 4·2 = 6 + 3 + 8.
        assert_eq!(build_matrix_model(ModelKind::Osp, 4, 2).dim(), 17);
    }

    #[test]
    fn osp_basis_satisfies_the_constraint() {
        let m = 3;
        let n = 4;
        let model = build_matrix_model(ModelKind::Osp, m, n);
        let total = m + n;
        // J = antidiag ones on the even block ⊕ Ω on the odd block.
        let mut j = ExactMatrix::zeros(total, total);
        for a in 0..m {
            j[(a, m - 1 - a)] = ExactScalar::one();
        }
        for i in 0..n / 2 {
            j[(m + i, m + n / 2 + i)] = ExactScalar::one();
            j[(m + n / 2 + i, m + i)] = ExactScalar::from_int(-1);
        }
        for (x, p) in model.basis() {
            // Supertranspose: [[Aᵀ, Cᵀ], [-Bᵀ, Dᵀ]].
            let mut st = ExactMatrix::zeros(total, total);
            for r in 0..total {
                for c in 0..total {
                    let v = x[(r, c)].clone();
                    let sign = if r >= m && c < m { -1 } else { 1 };
                    st[(c, r)] = if sign == 1 { v } else { v.neg() };
                }
            }
            let cond = st.mul(&j).add(&j.mul(x));
            assert!(cond.is_zero(), "X^{{st}}J + JX != 0 for parity {p}");
        }
    }

    #[test]
    fn graded_osp_rows() {
        for n in 1..=3usize {
            let model = build_matrix_model(ModelKind::Osp, n, 4);
            let h = model.standard_grading_element();
            let g = model.grade_by_element(&h).unwrap();
            let dims = g.graded_dimensions();
            let expect = expected_row(3, n).unwrap().graded_dims;
            assert_eq!(dims, expect, "osp({n}|4) grading");
            assert!(g.check_super_jacobi().ok);
        }
    }

    #[test]
    fn graded_sl_and_pgl_rows() {
        let model = build_matrix_model(ModelKind::Sl, 2, 4);
        let g = model
            .grade_by_element(&model.standard_grading_element())
            .unwrap();
        assert_eq!(g.graded_dimensions(), expected_row(4, 2).unwrap().graded_dims);
        assert!(g.check_super_jacobi().ok);

        let model = build_matrix_model(ModelKind::Pgl, 4, 4);
        let g = model
            .grade_by_element(&model.standard_grading_element())
            .unwrap();
        assert_eq!(g.graded_dimensions(), expected_row(4, 4).unwrap().graded_dims);
        assert!(g.check_super_jacobi().ok);
    }

    #[test]
    fn zero_grading_element_collapses_to_degree_zero() {
        let model = build_matrix_model(ModelKind::Osp, 1, 4);
        let g = model.grade_by_element(&[0; 5]);
        // Odd elements in degree 0 break consistency, which the grading
        // rejects rather than mislabels.
        assert!(matches!(g, Err(ModelError::NonIntegerGrading(_))));

        let gl = build_matrix_model(ModelKind::Gl, 2, 0);
        let g = gl.grade_by_element(&[0, 0]).unwrap();
        assert_eq!(g.graded_dimensions(), BTreeMap::from([(0, 4)]));
    }

    #[test]
    fn contact_dimension_oracle() {
        for n in 1..=8 {
            assert_eq!(k1n_graded_dimension(n, -2), 1);
            assert_eq!(k1n_graded_dimension(n, -1), n);
            assert_eq!(k1n_graded_dimension(n, 0), 1 + n * (n - 1) / 2);
        }
        // N=2, p=0: the monomials t and ξ1ξ2.
        assert_eq!(k1n_graded_dimension(2, 0), 2);
    }

    #[test]
    fn expected_rows_match_the_table() {
        let r31 = expected_row(3, 1).unwrap();
        assert_eq!(r31.name, "osp(1|4)");
        assert_eq!(r31.h0_dim, 0);
        assert_eq!(r31.graded_dims.values().sum::<usize>(), 14);

        let r44 = expected_row(4, 4).unwrap();
        assert_eq!(r44.name, "pgl(4|4)");
        assert_eq!(r44.h0_dim, 16);
        assert_eq!(r44.graded_dims.values().sum::<usize>(), 63);

        assert_eq!(expected_row(6, 1), None);

        // ab(3) dimension arithmetic: graded total equals the even+odd split
        // so(7) ⊕ sl(2) plus S ⊗ C².
        let r52 = expected_row(5, 2).unwrap();
        assert_eq!(r52.graded_dims.values().sum::<usize>(), 40);
        assert_eq!(21 + 3 + 16, 40);
    }
}
