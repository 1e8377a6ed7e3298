//! Clifford algebras and spinor modules over a complex orthogonal space.
//!
//! `V` carries a non-degenerate symmetric form assembled from hyperbolic
//! pairs `(e_i, f_i)` with `(e_i, f_j) = δ_ij`, plus one unit vector `u` when
//! `dim V` is odd. The spinor module `S` is the exterior algebra on the `e`
//! generators: `γ(e_i)` acts by wedging, `γ(f_i)` by `-2 ×` contraction, so
//! the product convention `γ(v)γ(u) + γ(u)γ(v) = -2 (v,u) Id` holds with
//! integer matrix entries. In odd dimension the last gamma is `λ ω`, with `ω`
//! the ordered product of the gammas of an orthogonal rebasing and `λ` the
//! scalar in `{1, i}` squaring `ω²` to `-1`.

use crate::exactlin::{ExactMatrix, ExactScalar};

/// Errors from the Clifford layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliffordError {
    /// An internal identity (the Clifford relation or a scalar-square check)
    /// failed; this signals a coding bug, not bad input.
    #[error("clifford construction self-check failed: {0}")]
    ConstructionFailure(String),
    /// Chirality and semi-spinors only exist in even dimension.
    #[error("no chirality operator in odd dimension {0}")]
    OddDimension(usize),
}

/// A complex vector space with a non-degenerate symmetric bilinear form.
#[derive(Clone)]
pub struct MetricSpace {
    dim: usize,
    gram: ExactMatrix,
    basis_labels: Vec<String>,
}

impl MetricSpace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    /// The bilinear form on coefficient vectors.
    pub fn pairing(&self, v: &[ExactScalar], u: &[ExactScalar]) -> ExactScalar {
        let gu = self.gram.mul_vec(u);
        v.iter()
            .zip(&gu)
            .fold(ExactScalar::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
    }

    pub fn is_isotropic(&self, v: &[ExactScalar]) -> bool {
        self.pairing(v, v).is_zero()
    }

    /// Coefficient vector of the `a`-th basis vector.
    pub fn basis_vector(&self, a: usize) -> Vec<ExactScalar> {
        let mut v = vec![ExactScalar::zero(); self.dim];
        v[a] = ExactScalar::one();
        v
    }
}

/// The canonical hyperbolic(+unit) space of dimension `dim_v`.
///
/// Basis order is `e1, f1, e2, f2, ..., u`; the Gram matrix is a direct sum
/// of antidiagonal 2x2 blocks plus, for odd dimension, a final `[1]`.
pub fn build_metric_space(dim_v: usize) -> MetricSpace {
    assert!(dim_v >= 1, "dim V must be at least 1");
    let mut gram = ExactMatrix::zeros(dim_v, dim_v);
    let mut labels = Vec::with_capacity(dim_v);
    let pairs = dim_v / 2;
    for i in 0..pairs {
        gram[(2 * i, 2 * i + 1)] = ExactScalar::one();
        gram[(2 * i + 1, 2 * i)] = ExactScalar::one();
        labels.push(format!("e{}", i + 1));
        labels.push(format!("f{}", i + 1));
    }
    if dim_v % 2 == 1 {
        gram[(dim_v - 1, dim_v - 1)] = ExactScalar::one();
        labels.push("u".to_string());
    }
    MetricSpace {
        dim: dim_v,
        gram,
        basis_labels: labels,
    }
}

/// A generator of `so(V)` realized on both `V` and `S`.
#[derive(Clone)]
pub struct SoGenerator {
    pub action_v: ExactMatrix,
    pub action_s: ExactMatrix,
}

/// An explicit irreducible Clifford module.
pub struct SpinorModule {
    space: MetricSpace,
    dim_s: usize,
    gammas: Vec<ExactMatrix>,
    chirality: Option<ExactMatrix>,
}

fn wedge_matrix(k: usize, i: usize) -> ExactMatrix {
    let n = 1usize << k;
    let mut m = ExactMatrix::zeros(n, n);
    for mask in 0..n {
        if mask & (1 << i) == 0 {
            let sign = (mask & ((1 << i) - 1)).count_ones() % 2;
            m[(mask | (1 << i), mask)] = ExactScalar::from_int(if sign == 0 { 1 } else { -1 });
        }
    }
    m
}

fn contraction_matrix(k: usize, i: usize) -> ExactMatrix {
    let n = 1usize << k;
    let mut m = ExactMatrix::zeros(n, n);
    for mask in 0..n {
        if mask & (1 << i) != 0 {
            let sign = (mask & ((1 << i) - 1)).count_ones() % 2;
            m[(mask & !(1 << i), mask)] = ExactScalar::from_int(if sign == 0 { 1 } else { -1 });
        }
    }
    m
}

/// Builds the spinor module of the canonical metric space.
pub fn build_spinor_module(space: MetricSpace) -> Result<SpinorModule, CliffordError> {
    build_spinor_module_signed(space, false)
}

/// Same as [`build_spinor_module`] but optionally picking the opposite odd
/// Clifford module (`γ(u) = -λω`). Downstream graded dimensions must not
/// depend on this choice.
pub fn build_spinor_module_signed(
    space: MetricSpace,
    flip_odd_sign: bool,
) -> Result<SpinorModule, CliffordError> {
    let d = space.dim();
    let k = d / 2;
    let dim_s = 1usize << k;
    let mut gammas = Vec::with_capacity(d);
    for i in 0..k {
        gammas.push(wedge_matrix(k, i));
        gammas.push(contraction_matrix(k, i).scale(&ExactScalar::from_int(-2)));
    }

    // Volume element over the orthogonal rebasing x_i = e_i + f_i/2,
    // y_i = e_i - f_i/2, taken in the order x1, y1, x2, y2, ...
    let half = ExactScalar::from_frac(1, 2);
    let mut omega = ExactMatrix::identity(dim_s);
    for i in 0..k {
        let ge = &gammas[2 * i];
        let gf = &gammas[2 * i + 1];
        let gx = ge.add(&gf.scale(&half));
        let gy = ge.sub(&gf.scale(&half));
        omega = omega.mul(&gx).mul(&gy);
    }

    if d % 2 == 1 {
        let sq = omega.mul(&omega);
        let c = sq.as_scalar_multiple_of_identity().ok_or_else(|| {
            CliffordError::ConstructionFailure("volume element square is not scalar".into())
        })?;
        // λ in {1, i} with λ²ω² = -1.
        let lambda = if c == ExactScalar::from_int(-1) {
            ExactScalar::one()
        } else if c == ExactScalar::one() {
            ExactScalar::i()
        } else {
            return Err(CliffordError::ConstructionFailure(format!(
                "volume element squares to {c}, expected ±1"
            )));
        };
        let lambda = if flip_odd_sign { lambda.neg() } else { lambda };
        gammas.push(omega.scale(&lambda));
    }

    let chirality = if d % 2 == 0 {
        let sq = omega.mul(&omega);
        if sq.as_scalar_multiple_of_identity() != Some(ExactScalar::one()) {
            return Err(CliffordError::ConstructionFailure(
                "chirality candidate does not square to the identity".into(),
            ));
        }
        Some(omega)
    } else {
        None
    };

    let module = SpinorModule {
        space,
        dim_s,
        gammas,
        chirality,
    };
    module.verify_clifford_relations()?;
    Ok(module)
}

impl SpinorModule {
    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn dim_v(&self) -> usize {
        self.space.dim()
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn gammas(&self) -> &[ExactMatrix] {
        &self.gammas
    }

    pub fn chirality(&self) -> Option<&ExactMatrix> {
        self.chirality.as_ref()
    }

    fn verify_clifford_relations(&self) -> Result<(), CliffordError> {
        let d = self.dim_v();
        for a in 0..d {
            for b in a..d {
                let anti = self.gammas[a].anticommutator(&self.gammas[b]);
                let expected = ExactMatrix::identity(self.dim_s)
                    .scale(&self.space.gram()[(a, b)].mul(&ExactScalar::from_int(-2)));
                if anti != expected {
                    return Err(CliffordError::ConstructionFailure(format!(
                        "γγ+γγ != -2(,)Id at basis pair ({a},{b})"
                    )));
                }
            }
        }
        if let Some(chi) = &self.chirality {
            for g in &self.gammas {
                if !chi.anticommutator(g).is_zero() {
                    return Err(CliffordError::ConstructionFailure(
                        "chirality does not anticommute with a gamma".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Clifford action of a vector given by coefficients in the `V` basis.
    pub fn gamma_of(&self, v: &[ExactScalar]) -> ExactMatrix {
        assert_eq!(v.len(), self.dim_v());
        let mut out = ExactMatrix::zeros(self.dim_s, self.dim_s);
        for (a, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.gammas[a].scale(c));
            }
        }
        out
    }

    /// The generator `v ∧ u` acting on `V` as `(v,·)u - (u,·)v` and on `S` as
    /// `(γ(v)γ(u) - γ(u)γ(v))/4`.
    pub fn wedge_action(&self, v: &[ExactScalar], u: &[ExactScalar]) -> SoGenerator {
        let d = self.dim_v();
        let mut action_v = ExactMatrix::zeros(d, d);
        for c in 0..d {
            let bc = self.space.basis_vector(c);
            let vc = self.space.pairing(v, &bc);
            let uc = self.space.pairing(u, &bc);
            for r in 0..d {
                let val = vc.mul(&u[r]).sub(&uc.mul(&v[r]));
                if !val.is_zero() {
                    action_v[(r, c)] = val;
                }
            }
        }
        let gv = self.gamma_of(v);
        let gu = self.gamma_of(u);
        let action_s = gv.commutator(&gu).scale(&ExactScalar::from_frac(1, 4));
        SoGenerator { action_v, action_s }
    }

    /// `so(V)` generator attached to a pair of basis indices.
    pub fn so_generator(&self, i: usize, j: usize) -> SoGenerator {
        self.wedge_action(&self.space.basis_vector(i), &self.space.basis_vector(j))
    }

    /// The full wedge basis `{v_i ∧ v_j : i < j}` of `so(V)`.
    pub fn so_basis(&self) -> Vec<SoGenerator> {
        let d = self.dim_v();
        let mut out = Vec::with_capacity(d * (d.saturating_sub(1)) / 2);
        for i in 0..d {
            for j in i + 1..d {
                out.push(self.so_generator(i, j));
            }
        }
        out
    }

    /// Pairwise-orthogonal non-isotropic rebasing `x1, y1, x2, y2, ..., (u)`
    /// with `x_i = e_i + f_i/2`, `y_i = e_i - f_i/2`.
    pub fn orthogonal_rebasing(&self) -> Vec<Vec<ExactScalar>> {
        let d = self.dim_v();
        let half = ExactScalar::from_frac(1, 2);
        let mut out = Vec::with_capacity(d);
        for i in 0..d / 2 {
            let mut x = self.space.basis_vector(2 * i);
            x[2 * i + 1] = half.clone();
            let mut y = self.space.basis_vector(2 * i);
            y[2 * i + 1] = half.neg();
            out.push(x);
            out.push(y);
        }
        if d % 2 == 1 {
            out.push(self.space.basis_vector(d - 1));
        }
        out
    }

    /// A generating set of `so(V)`: the torus generators `e_i ∧ f_i` followed
    /// by the chain `b_j ∧ b_{j+1}` over the orthogonal rebasing. Any
    /// condition that is linear in the generator and holds on this set holds
    /// on all of `so(V)`. The torus members act diagonally on both `V` and
    /// `S`, which keeps the resulting linear systems near-diagonal.
    pub fn equivariance_generators(&self) -> Vec<SoGenerator> {
        let d = self.dim_v();
        let mut out = Vec::new();
        for i in 0..d / 2 {
            out.push(self.so_generator(2 * i, 2 * i + 1));
        }
        let reb = self.orthogonal_rebasing();
        for j in 0..d.saturating_sub(1) {
            out.push(self.wedge_action(&reb[j], &reb[j + 1]));
        }
        out
    }

    /// Semi-spinor projectors `P± = (Id ± chirality)/2` (even dimension).
    pub fn semispinor_projectors(&self) -> Result<(ExactMatrix, ExactMatrix), CliffordError> {
        let chi = self
            .chirality
            .as_ref()
            .ok_or(CliffordError::OddDimension(self.dim_v()))?;
        let half = ExactScalar::from_frac(1, 2);
        let id = ExactMatrix::identity(self.dim_s);
        let plus = id.add(chi).scale(&half);
        let minus = id.sub(chi).scale(&half);
        Ok((plus, minus))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_spaces_match_conventions() {
        let m2 = build_metric_space(2);
        assert_eq!(m2.gram(), &ExactMatrix::from_int_rows(&[&[0, 1], &[1, 0]]));
        let m3 = build_metric_space(3);
        assert_eq!(
            m3.gram(),
            &ExactMatrix::from_int_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])
        );
        let m4 = build_metric_space(4);
        assert_eq!(m4.gram().rank(), 4);
        assert_eq!(m4.basis_labels(), &["e1", "f1", "e2", "f2"]);
    }

    #[test]
    fn d2_gammas_are_the_expected_2x2_matrices() {
        let s = build_spinor_module(build_metric_space(2)).unwrap();
        assert_eq!(s.dim_s(), 2);
        assert_eq!(
            s.gammas()[0],
            ExactMatrix::from_int_rows(&[&[0, 0], &[1, 0]])
        );
        assert_eq!(
            s.gammas()[1],
            ExactMatrix::from_int_rows(&[&[0, -2], &[0, 0]])
        );
    }

    #[test]
    fn spinor_dimensions() {
        for (d, expect) in [(1, 1), (2, 2), (3, 2), (4, 4), (5, 4), (6, 8), (7, 8)] {
            let s = build_spinor_module(build_metric_space(d)).unwrap();
            assert_eq!(s.dim_s(), expect, "dim S at D={d}");
        }
    }

    #[test]
    fn gamma_of_squares_to_minus_norm() {
        let s = build_spinor_module(build_metric_space(3)).unwrap();
        // u is non-isotropic with (u,u) = 1.
        let u = s.space().basis_vector(2);
        let gu = s.gamma_of(&u);
        assert_eq!(
            gu.mul(&gu),
            ExactMatrix::identity(2).scale(&ExactScalar::from_int(-1))
        );
        // e1 is isotropic.
        let e = s.space().basis_vector(0);
        let ge = s.gamma_of(&e);
        assert!(ge.mul(&ge).is_zero());
        // e1 + f1 has norm 2.
        let mut v = s.space().basis_vector(0);
        v[1] = ExactScalar::one();
        let gv = s.gamma_of(&v);
        assert_eq!(
            gv.mul(&gv),
            ExactMatrix::identity(2).scale(&ExactScalar::from_int(-2))
        );
    }

    #[test]
    fn wedge_of_equal_vectors_vanishes() {
        let s = build_spinor_module(build_metric_space(4)).unwrap();
        let v = s.space().basis_vector(1);
        let g = s.wedge_action(&v, &v);
        assert!(g.action_v.is_zero());
        assert!(g.action_s.is_zero());
    }

    #[test]
    fn orthogonal_anticommuting_pair_halves() {
        // For orthogonal non-isotropic v, u the S-action is γ(v)γ(u)/2.
        let s = build_spinor_module(build_metric_space(3)).unwrap();
        let reb = s.orthogonal_rebasing();
        let g = s.wedge_action(&reb[0], &reb[1]);
        let expect = s
            .gamma_of(&reb[0])
            .mul(&s.gamma_of(&reb[1]))
            .scale(&ExactScalar::from_frac(1, 2));
        assert_eq!(g.action_s, expect);
    }

    #[test]
    fn so3_commutators_agree_on_both_sides() {
        let s = build_spinor_module(build_metric_space(3)).unwrap();
        let gens = s.so_basis();
        assert_eq!(gens.len(), 3);
        // Express each V-side commutator over the wedge basis and check the
        // same combination reproduces the S-side commutator.
        let mut rows = Vec::new();
        for k in 0..9 {
            rows.push(
                gens.iter()
                    .map(|g| g.action_v[(k / 3, k % 3)].clone())
                    .collect(),
            );
        }
        let m = ExactMatrix::from_rows(rows);
        for a in &gens {
            for b in &gens {
                let cv = a.action_v.commutator(&b.action_v);
                let cs = a.action_s.commutator(&b.action_s);
                let mut target = Vec::new();
                for r in 0..3 {
                    for c in 0..3 {
                        target.push(cv[(r, c)].clone());
                    }
                }
                let coeff = m.solve(&target).expect("commutator stays in so(V)");
                let mut expect = ExactMatrix::zeros(2, 2);
                for (g, c) in gens.iter().zip(&coeff) {
                    if !c.is_zero() {
                        expect = expect.add(&g.action_s.scale(c));
                    }
                }
                assert_eq!(cs, expect);
            }
        }
    }

    #[test]
    fn equivariance_of_clifford_multiplication() {
        for d in 1..=5 {
            let s = build_spinor_module(build_metric_space(d)).unwrap();
            for g in s.equivariance_generators() {
                for a in 0..d {
                    let v = s.space().basis_vector(a);
                    let lhs = g.action_s.commutator(&s.gamma_of(&v));
                    let av: Vec<ExactScalar> = g.action_v.mul_vec(&v);
                    assert_eq!(lhs, s.gamma_of(&av), "D={d}, basis {a}");
                }
            }
        }
    }

    #[test]
    fn projectors_in_even_dimension() {
        for (d, half_rank) in [(4usize, 2usize), (6, 4)] {
            let s = build_spinor_module(build_metric_space(d)).unwrap();
            let (p, m) = s.semispinor_projectors().unwrap();
            let id = ExactMatrix::identity(s.dim_s());
            assert_eq!(p.add(&m), id);
            assert_eq!(p.mul(&p), p);
            assert_eq!(m.mul(&m), m);
            assert!(p.mul(&m).is_zero());
            assert_eq!(p.rank(), half_rank);
            assert_eq!(m.rank(), half_rank);
            // so(V) preserves the splitting.
            for g in s.equivariance_generators() {
                assert!(g.action_s.commutator(s.chirality().unwrap()).is_zero());
            }
        }
        let s = build_spinor_module(build_metric_space(3)).unwrap();
        assert!(matches!(
            s.semispinor_projectors(),
            Err(CliffordError::OddDimension(3))
        ));
    }

    #[test]
    fn odd_module_sign_choice_is_consistent() {
        for d in [1usize, 3, 5, 7] {
            let plus = build_spinor_module(build_metric_space(d)).unwrap();
            let minus = build_spinor_module_signed(build_metric_space(d), true).unwrap();
            let last = d - 1;
            assert_eq!(plus.gammas()[last], minus.gammas()[last].neg());
        }
    }
}
