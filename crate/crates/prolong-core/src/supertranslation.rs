//! Admissible bilinear forms, invariant bracket tensors and the
//! supertranslation / super-Poincaré algebras built from them.
//!
//! `W = S ⊕ ... ⊕ S` is `N` copies of the spinor module, indexed
//! `α = copy · dim S + spinor index`. A bracket tensor is a symmetric
//! `so(V)`-equivariant map `Γ: S²(W) → V`; the space of all of them is
//! computed directly as an exact kernel (unknowns `Γ^i_{αβ}`, equations
//! equivariance under a generating set of `so(V)`). Admissible bilinear
//! forms with `στ = 1` give such tensors through
//! `(Γ(s,t), v) = B(v·s, t)` and are kept as an independent cross-check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::clifford::{
    build_metric_space, build_spinor_module, CliffordError, SoGenerator, SpinorModule,
};
use crate::exactlin::{ExactMatrix, ExactScalar, RowReducer, SparseVec};
use crate::gradedlie::{BasisElement, GradedSuperalgebra};

/// Errors from form/tensor conversions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    /// `gamma_from_form` needs `στ = 1`; the input has `στ = -1` or no
    /// definite class.
    #[error("admissible form does not satisfy στ = 1")]
    SigmaTauViolation,
    /// `gamma_from_form` needs a non-degenerate form.
    #[error("admissible form is degenerate")]
    DegenerateForm,
    /// `reconstruct_form` needs a non-isotropic direction.
    #[error("cannot reconstruct a form along an isotropic vector")]
    IsotropicVector,
}

/// Failure to build a supertranslation algebra.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error(
        "no supertranslation structure for D={dim_v}, N={copies}: \
         invariant space has dimension {gamma_space_dim} ({detail})"
    )]
    NoStructure {
        dim_v: usize,
        copies: usize,
        gamma_space_dim: usize,
        detail: String,
    },
    #[error(transparent)]
    Clifford(#[from] CliffordError),
}

/// A bilinear form on `W` together with its admissibility invariants.
///
/// Forms coming out of [`admissible_forms`] always carry a definite class
/// `(τ, σ, ε)` with `σ = ε`. Forms reconstructed from a mixed-class bracket
/// tensor may have no definite symmetry; their class fields are `None`.
#[derive(Clone)]
pub struct AdmissibleForm {
    pub matrix: ExactMatrix,
    pub tau: Option<i8>,
    pub sigma: Option<i8>,
    pub epsilon: Option<i8>,
    pub nondegenerate: bool,
}

impl AdmissibleForm {
    /// `στ` when the class is definite.
    pub fn sigma_tau(&self) -> Option<i8> {
        Some(self.sigma? * self.tau?)
    }
}

/// A symmetric `so(V)`-equivariant bracket tensor `Γ: S²(W) → V`.
#[derive(Clone, PartialEq, Eq)]
pub struct BracketTensor {
    dim_v: usize,
    copies: usize,
    dim_w: usize,
    coeffs: Vec<ExactScalar>,
}

impl BracketTensor {
    fn zeros(dim_v: usize, copies: usize, dim_w: usize) -> Self {
        BracketTensor {
            dim_v,
            copies,
            dim_w,
            coeffs: vec![ExactScalar::zero(); dim_v * dim_w * dim_w],
        }
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_w(&self) -> usize {
        self.dim_w
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    #[inline]
    pub fn get(&self, i: usize, alpha: usize, beta: usize) -> &ExactScalar {
        &self.coeffs[(i * self.dim_w + alpha) * self.dim_w + beta]
    }

    fn set(&mut self, i: usize, alpha: usize, beta: usize, v: ExactScalar) {
        self.coeffs[(i * self.dim_w + alpha) * self.dim_w + beta] = v;
    }

    /// `Γ(s_α, s_β)` as a `V` coefficient vector.
    pub fn apply_basis(&self, alpha: usize, beta: usize) -> Vec<ExactScalar> {
        (0..self.dim_v)
            .map(|i| self.get(i, alpha, beta).clone())
            .collect()
    }

    /// Sparse version of [`BracketTensor::apply_basis`].
    pub fn apply_basis_sparse(&self, alpha: usize, beta: usize) -> SparseVec {
        (0..self.dim_v)
            .filter(|&i| !self.get(i, alpha, beta).is_zero())
            .map(|i| (i as u32, self.get(i, alpha, beta).clone()))
            .collect()
    }

    /// Bilinear extension to coefficient vectors on `W`.
    pub fn apply(&self, s: &[ExactScalar], t: &[ExactScalar]) -> Vec<ExactScalar> {
        let mut out = vec![ExactScalar::zero(); self.dim_v];
        for (a, sa) in s.iter().enumerate() {
            if sa.is_zero() {
                continue;
            }
            for (b, tb) in t.iter().enumerate() {
                if tb.is_zero() {
                    continue;
                }
                let c = sa.mul(tb);
                for i in 0..self.dim_v {
                    let g = self.get(i, a, b);
                    if !g.is_zero() {
                        out[i] = out[i].add(&c.mul(g));
                    }
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.dim_v {
            for a in 0..self.dim_w {
                for b in a + 1..self.dim_w {
                    if self.get(i, a, b) != self.get(i, b, a) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Non-degeneracy: `s ↦ Γ(s,·)` is injective, tested as a rank of the
    /// stacked `(dim V · dim W) × dim W` matrix.
    pub fn is_nondegenerate(&self) -> bool {
        let mut red = RowReducer::new(self.dim_w);
        for i in 0..self.dim_v {
            for b in 0..self.dim_w {
                let row: SparseVec = (0..self.dim_w)
                    .filter(|&a| !self.get(i, a, b).is_zero())
                    .map(|a| (a as u32, self.get(i, a, b).clone()))
                    .collect();
                red.add_row(row);
                if red.rank() == self.dim_w {
                    return true;
                }
            }
        }
        red.rank() == self.dim_w
    }

    /// Surjectivity onto `V` (fundamentality of the graded algebra).
    pub fn is_surjective(&self) -> bool {
        let mut red = RowReducer::new(self.dim_v);
        for a in 0..self.dim_w {
            for b in a..self.dim_w {
                red.add_row(self.apply_basis_sparse(a, b));
                if red.rank() == self.dim_v {
                    return true;
                }
            }
        }
        false
    }

    pub fn linear_combination(
        basis: &[BracketTensor],
        coeffs: &[ExactScalar],
    ) -> BracketTensor {
        assert_eq!(basis.len(), coeffs.len());
        assert!(!basis.is_empty());
        let mut out = BracketTensor::zeros(basis[0].dim_v, basis[0].copies, basis[0].dim_w);
        for (t, c) in basis.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for (k, v) in t.coeffs.iter().enumerate() {
                if !v.is_zero() {
                    out.coeffs[k] = out.coeffs[k].add(&c.mul(v));
                }
            }
        }
        out
    }

    /// Flat coefficient view, used for span membership checks.
    pub fn flat(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    /// JSON export: `{"dimV": D, "N": N, "coeffs": [[i, alpha, beta, "c"]]}`
    /// listing all nonzero entries.
    pub fn to_json(&self) -> serde_json::Value {
        let mut entries = Vec::new();
        for i in 0..self.dim_v {
            for a in 0..self.dim_w {
                for b in 0..self.dim_w {
                    let c = self.get(i, a, b);
                    if !c.is_zero() {
                        entries.push(json!([i, a, b, c.to_string()]));
                    }
                }
            }
        }
        json!({ "dimV": self.dim_v, "N": self.copies, "coeffs": entries })
    }
}

/// Entry of `Id_N ⊗ m` without materializing the block matrix.
#[inline]
fn w_entry(m: &ExactMatrix, dim_s: usize, row: usize, col: usize) -> Option<&ExactScalar> {
    if row / dim_s != col / dim_s {
        return None;
    }
    let v = &m[(row % dim_s, col % dim_s)];
    if v.is_zero() {
        None
    } else {
        Some(v)
    }
}

/// `Id_N ⊗ m` as a dense matrix on `W`.
pub fn w_matrix(m: &ExactMatrix, copies: usize) -> ExactMatrix {
    ExactMatrix::identity(copies).kronecker(m)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    Symmetric,
    Antisymmetric,
}

/// Index bookkeeping for tensors with a symmetry constraint in `(α, β)`.
struct PairIndex {
    dim_w: usize,
    symmetry: Symmetry,
}

impl PairIndex {
    fn pairs(&self) -> usize {
        match self.symmetry {
            Symmetry::Symmetric => self.dim_w * (self.dim_w + 1) / 2,
            Symmetry::Antisymmetric => self.dim_w * (self.dim_w - 1) / 2,
        }
    }

    /// Flat index of the ordered pair `(a <= b)` or `(a < b)`.
    fn pair(&self, a: usize, b: usize) -> usize {
        match self.symmetry {
            Symmetry::Symmetric => a * self.dim_w - a * (a + 1) / 2 + b,
            Symmetry::Antisymmetric => a * self.dim_w - a * (a + 1) / 2 + b - a - 1,
        }
    }

    /// Flat index and sign of an arbitrary pair; `None` for a vanishing slot
    /// (diagonal in the antisymmetric case).
    fn locate(&self, a: usize, b: usize) -> Option<(usize, i8)> {
        match self.symmetry {
            Symmetry::Symmetric => {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                Some((self.pair(lo, hi), 1))
            }
            Symmetry::Antisymmetric => {
                if a == b {
                    None
                } else if a < b {
                    Some((self.pair(a, b), 1))
                } else {
                    Some((self.pair(b, a), -1))
                }
            }
        }
    }
}

fn equivariant_space(
    spinor: &SpinorModule,
    copies: usize,
    symmetry: Symmetry,
) -> Vec<BracketTensor> {
    let d = spinor.dim_v();
    let ds = spinor.dim_s();
    let w = ds * copies;
    let idx = PairIndex { dim_w: w, symmetry };
    let pairs = idx.pairs();
    let ncols = d * pairs;
    let flat = |i: usize, p: usize| (i * pairs + p) as u32;

    let mut red = RowReducer::new(ncols);
    for gen in spinor.equivariance_generators() {
        let av = &gen.action_v;
        let bs = &gen.action_s;
        for i in 0..d {
            for alpha in 0..w {
                for beta in alpha..w {
                    if symmetry == Symmetry::Antisymmetric && alpha == beta {
                        continue;
                    }
                    let mut row: Vec<(u32, ExactScalar)> = Vec::new();
                    let mut push = |col: u32, v: ExactScalar| {
                        if v.is_zero() {
                            return;
                        }
                        if let Some(slot) = row.iter_mut().find(|(c, _)| *c == col) {
                            slot.1 = slot.1.add(&v);
                        } else {
                            row.push((col, v));
                        }
                    };
                    // (A Γ(α,β))_i
                    for j in 0..d {
                        let a = &av[(i, j)];
                        if !a.is_zero() {
                            if let Some((p, sg)) = idx.locate(alpha, beta) {
                                let v = if sg < 0 { a.neg() } else { a.clone() };
                                push(flat(j, p), v);
                            }
                        }
                    }
                    // -Γ(Aα, β)_i
                    for mu in 0..w {
                        if let Some(b) = w_entry(bs, ds, mu, alpha) {
                            if let Some((p, sg)) = idx.locate(mu, beta) {
                                let v = if sg < 0 { b.clone() } else { b.neg() };
                                push(flat(i, p), v);
                            }
                        }
                    }
                    // -Γ(α, Aβ)_i
                    for mu in 0..w {
                        if let Some(b) = w_entry(bs, ds, mu, beta) {
                            if let Some((p, sg)) = idx.locate(alpha, mu) {
                                let v = if sg < 0 { b.clone() } else { b.neg() };
                                push(flat(i, p), v);
                            }
                        }
                    }
                    row.sort_by_key(|(c, _)| *c);
                    row.retain(|(_, v)| !v.is_zero());
                    red.add_row(row);
                }
            }
        }
    }

    red.kernel_basis()
        .into_iter()
        .map(|kv| {
            let mut t = BracketTensor::zeros(d, copies, w);
            for (col, v) in kv {
                let col = col as usize;
                let i = col / pairs;
                let p = col % pairs;
                // Invert the pair index.
                let mut a = 0;
                let mut rem = p;
                loop {
                    let count = match symmetry {
                        Symmetry::Symmetric => w - a,
                        Symmetry::Antisymmetric => w - a - 1,
                    };
                    if rem < count {
                        break;
                    }
                    rem -= count;
                    a += 1;
                }
                let b = match symmetry {
                    Symmetry::Symmetric => a + rem,
                    Symmetry::Antisymmetric => a + 1 + rem,
                };
                t.set(i, a, b, v.clone());
                if a != b {
                    let mirrored = match symmetry {
                        Symmetry::Symmetric => v,
                        Symmetry::Antisymmetric => v.neg(),
                    };
                    t.set(i, b, a, mirrored);
                }
            }
            t
        })
        .collect()
}

/// Basis of the space of symmetric `so(V)`-equivariant maps `S²(W) → V`,
/// computed as an exact kernel. Tensors are not yet screened for
/// non-degeneracy.
pub fn invariant_gamma_space(spinor: &SpinorModule, copies: usize) -> Vec<BracketTensor> {
    equivariant_space(spinor, copies, Symmetry::Symmetric)
}

/// The antisymmetric companion of [`invariant_gamma_space`]: equivariant
/// maps `Λ²(W) → V`. Together with the symmetric space this controls how the
/// invariant space grows with the number of spinor copies.
pub fn antisymmetric_gamma_space(spinor: &SpinorModule, copies: usize) -> Vec<BracketTensor> {
    equivariant_space(spinor, copies, Symmetry::Antisymmetric)
}

fn tau_relation_holds(spinor: &SpinorModule, b: &ExactMatrix, tau: i8) -> bool {
    let ds = spinor.dim_s();
    let w = b.rows();
    let t = ExactScalar::from_int(tau as i64);
    for g in spinor.gammas() {
        for alpha in 0..w {
            for beta in 0..w {
                // B(v·s_α, s_β) - τ B(s_α, v·s_β)
                let mut lhs = ExactScalar::zero();
                for mu in 0..w {
                    if let Some(gv) = w_entry(g, ds, mu, alpha) {
                        lhs = lhs.add(&gv.mul(&b[(mu, beta)]));
                    }
                }
                let mut rhs = ExactScalar::zero();
                for nu in 0..w {
                    if let Some(gv) = w_entry(g, ds, nu, beta) {
                        rhs = rhs.add(&gv.mul(&b[(alpha, nu)]));
                    }
                }
                if lhs != t.mul(&rhs) {
                    return false;
                }
            }
        }
    }
    true
}

/// Classifies a bilinear form: definite symmetry sign and τ-relation sign,
/// when they exist.
fn classify_form(spinor: &SpinorModule, matrix: ExactMatrix) -> AdmissibleForm {
    let w = matrix.rows();
    let mut symmetric = true;
    let mut antisymmetric = true;
    for a in 0..w {
        for b in a..w {
            if matrix[(a, b)] != matrix[(b, a)] {
                symmetric = false;
            }
            if matrix[(a, b)] != matrix[(b, a)].neg() || (a == b && !matrix[(a, a)].is_zero()) {
                antisymmetric = false;
            }
        }
    }
    let epsilon = if symmetric {
        Some(1)
    } else if antisymmetric {
        Some(-1)
    } else {
        None
    };
    let tau = if tau_relation_holds(spinor, &matrix, 1) {
        Some(1)
    } else if tau_relation_holds(spinor, &matrix, -1) {
        Some(-1)
    } else {
        None
    };
    let nondegenerate = matrix.rank() == w;
    AdmissibleForm {
        matrix,
        tau,
        sigma: epsilon,
        epsilon,
        nondegenerate,
    }
}

/// Basis of the `τ`-relation solution space on `W = S^{⊕N}`, split into the
/// symmetric (`ε = +1`) and antisymmetric (`ε = -1`) eigen-sub-bases. The
/// transpose of a `τ`-admissible form is `τ`-admissible, so the split is
/// exact; each form is reported with `(τ, σ = ε)`.
pub fn admissible_forms(spinor: &SpinorModule, copies: usize, tau: i8) -> Vec<AdmissibleForm> {
    assert!(tau == 1 || tau == -1);
    let ds = spinor.dim_s();
    let w = ds * copies;
    let mut out = Vec::new();
    for symmetry in [Symmetry::Symmetric, Symmetry::Antisymmetric] {
        let idx = PairIndex { dim_w: w, symmetry };
        let mut red = RowReducer::new(idx.pairs());
        for g in spinor.gammas() {
            for alpha in 0..w {
                for beta in alpha..w {
                    let mut row: Vec<(u32, ExactScalar)> = Vec::new();
                    let mut push = |col: u32, v: ExactScalar| {
                        if v.is_zero() {
                            return;
                        }
                        if let Some(slot) = row.iter_mut().find(|(c, _)| *c == col) {
                            slot.1 = slot.1.add(&v);
                        } else {
                            row.push((col, v));
                        }
                    };
                    // B(v·s_α, s_β) = Σ_μ γ[μ,α] b_{μβ}
                    for mu in 0..w {
                        if let Some(gv) = w_entry(g, ds, mu, alpha) {
                            if let Some((p, sg)) = idx.locate(mu, beta) {
                                let v = if sg < 0 { gv.neg() } else { gv.clone() };
                                push(p as u32, v);
                            }
                        }
                    }
                    // -τ B(s_α, v·s_β) = -τ Σ_ν γ[ν,β] b_{αν}
                    for nu in 0..w {
                        if let Some(gv) = w_entry(g, ds, nu, beta) {
                            if let Some((p, sg)) = idx.locate(alpha, nu) {
                                let mut v = if sg < 0 { gv.neg() } else { gv.clone() };
                                if tau == 1 {
                                    v = v.neg();
                                }
                                push(p as u32, v);
                            }
                        }
                    }
                    row.sort_by_key(|(c, _)| *c);
                    row.retain(|(_, v)| !v.is_zero());
                    red.add_row(row);
                }
            }
        }
        let eps = match symmetry {
            Symmetry::Symmetric => 1i8,
            Symmetry::Antisymmetric => -1,
        };
        for kv in red.kernel_basis() {
            let mut m = ExactMatrix::zeros(w, w);
            for (col, v) in kv {
                let p = col as usize;
                let mut a = 0;
                let mut rem = p;
                loop {
                    let count = match symmetry {
                        Symmetry::Symmetric => w - a,
                        Symmetry::Antisymmetric => w - a - 1,
                    };
                    if rem < count {
                        break;
                    }
                    rem -= count;
                    a += 1;
                }
                let b = match symmetry {
                    Symmetry::Symmetric => a + rem,
                    Symmetry::Antisymmetric => a + 1 + rem,
                };
                m[(a, b)] = v.clone();
                if a != b {
                    m[(b, a)] = if eps == 1 { v } else { v.neg() };
                }
            }
            let nondegenerate = m.rank() == w;
            out.push(AdmissibleForm {
                matrix: m,
                tau: Some(tau),
                sigma: Some(eps),
                epsilon: Some(eps),
                nondegenerate,
            });
        }
    }
    out
}

/// The bracket tensor of an admissible form with `στ = 1`, through
/// `Γ(s,t) = Σ g^{jl} B(v_j·s, t) v_l`.
pub fn gamma_from_form(
    spinor: &SpinorModule,
    copies: usize,
    form: &AdmissibleForm,
) -> Result<BracketTensor, FormError> {
    if form.sigma_tau() != Some(1) {
        return Err(FormError::SigmaTauViolation);
    }
    if !form.nondegenerate {
        return Err(FormError::DegenerateForm);
    }
    let d = spinor.dim_v();
    let ds = spinor.dim_s();
    let w = ds * copies;
    assert_eq!(form.matrix.rows(), w, "form size does not match W");
    let gram_inv = spinor
        .space()
        .gram()
        .inverse()
        .expect("canonical gram matrix is invertible");
    let mut t = BracketTensor::zeros(d, copies, w);
    for alpha in 0..w {
        for beta in 0..w {
            // c_j = B(v_j · s_α, s_β)
            let mut c = vec![ExactScalar::zero(); d];
            for (j, g) in spinor.gammas().iter().enumerate() {
                for mu in 0..w {
                    if let Some(gv) = w_entry(g, ds, mu, alpha) {
                        c[j] = c[j].add(&gv.mul(&form.matrix[(mu, beta)]));
                    }
                }
            }
            let x = gram_inv.mul_vec(&c);
            for (l, v) in x.into_iter().enumerate() {
                if !v.is_zero() {
                    t.set(l, alpha, beta, v);
                }
            }
        }
    }
    assert!(t.is_symmetric(), "στ = 1 form produced a non-symmetric Γ");
    assert!(
        tensor_is_equivariant(spinor, &t),
        "Γ from an admissible form must be equivariant"
    );
    Ok(t)
}

/// Equivariance of a tensor under the generating set of `so(V)`.
pub fn tensor_is_equivariant(spinor: &SpinorModule, t: &BracketTensor) -> bool {
    let d = spinor.dim_v();
    let ds = spinor.dim_s();
    let w = t.dim_w();
    for SoGenerator { action_v, action_s } in spinor.equivariance_generators() {
        for alpha in 0..w {
            for beta in alpha..w {
                // A Γ(α,β) - Γ(Aα,β) - Γ(α,Aβ)
                let lhs = action_v.mul_vec(&t.apply_basis(alpha, beta));
                let mut rhs = vec![ExactScalar::zero(); d];
                for mu in 0..w {
                    if let Some(b) = w_entry(&action_s, ds, mu, alpha) {
                        for i in 0..d {
                            let g = t.get(i, mu, beta);
                            if !g.is_zero() {
                                rhs[i] = rhs[i].add(&b.mul(g));
                            }
                        }
                    }
                    if let Some(b) = w_entry(&action_s, ds, mu, beta) {
                        for i in 0..d {
                            let g = t.get(i, alpha, mu);
                            if !g.is_zero() {
                                rhs[i] = rhs[i].add(&b.mul(g));
                            }
                        }
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// Inverts the bracket relation along a non-isotropic `v`:
/// `B(s,t) = (Γ(s',t), v)` with `s' = -γ(v)s/(v,v)`, so that
/// `B(v·s, t) = (Γ(s,t), v)`.
pub fn reconstruct_form(
    spinor: &SpinorModule,
    gamma: &BracketTensor,
    v: &[ExactScalar],
) -> Result<AdmissibleForm, FormError> {
    let norm = spinor.space().pairing(v, v);
    if norm.is_zero() {
        return Err(FormError::IsotropicVector);
    }
    let w = gamma.dim_w();
    let ds = spinor.dim_s();
    let gv = spinor.gamma_of(v);
    let scale = norm.inv().neg();
    let mut matrix = ExactMatrix::zeros(w, w);
    for alpha in 0..w {
        for beta in 0..w {
            // Γ(s'_α, s_β) with s'_α = scale · γ(v) s_α
            let mut gvec = vec![ExactScalar::zero(); gamma.dim_v()];
            for mu in 0..w {
                if let Some(c) = w_entry(&gv, ds, mu, alpha) {
                    for i in 0..gamma.dim_v() {
                        let g = gamma.get(i, mu, beta);
                        if !g.is_zero() {
                            gvec[i] = gvec[i].add(&c.mul(g));
                        }
                    }
                }
            }
            for g in &mut gvec {
                *g = g.mul(&scale);
            }
            matrix[(alpha, beta)] = spinor.space().pairing(&gvec, v);
        }
    }
    Ok(classify_form(spinor, matrix))
}

/// A depth-2 supertranslation algebra `m = V ⊕ W` with odd bracket `Γ`.
pub struct SupertranslationAlgebra {
    spinor: SpinorModule,
    copies: usize,
    bracket: BracketTensor,
    gamma_space_dim: usize,
    chosen_coeffs: Vec<ExactScalar>,
}

impl SupertranslationAlgebra {
    pub fn spinor(&self) -> &SpinorModule {
        &self.spinor
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn dim_v(&self) -> usize {
        self.spinor.dim_v()
    }

    pub fn dim_w(&self) -> usize {
        self.spinor.dim_s() * self.copies
    }

    pub fn bracket(&self) -> &BracketTensor {
        &self.bracket
    }

    pub fn gamma_space_dim(&self) -> usize {
        self.gamma_space_dim
    }

    pub fn chosen_coeffs(&self) -> &[ExactScalar] {
        &self.chosen_coeffs
    }
}

const ATTEMPT_BUDGET: usize = 40;

/// Builds the supertranslation algebra for `(D, N)`, choosing a
/// non-degenerate `Γ` from the invariant space.
///
/// With explicit `coeffs` the stated combination is used (and must be
/// non-degenerate). Otherwise the all-ones combination is tried first,
/// followed by deterministic pseudo-random small-integer coefficients drawn
/// from `seed`.
pub fn build_supertranslation(
    dim_v: usize,
    copies: usize,
    coeffs: Option<&[ExactScalar]>,
    seed: u64,
) -> Result<SupertranslationAlgebra, BuildError> {
    assert!(dim_v >= 1 && copies >= 1);
    let spinor = build_spinor_module(build_metric_space(dim_v))?;
    let basis = invariant_gamma_space(&spinor, copies);
    let no_structure = |detail: &str| BuildError::NoStructure {
        dim_v,
        copies,
        gamma_space_dim: basis.len(),
        detail: detail.to_string(),
    };
    if basis.is_empty() {
        return Err(no_structure("invariant space is zero"));
    }

    let mut candidates: Vec<Vec<ExactScalar>> = Vec::new();
    match coeffs {
        Some(c) => {
            if c.len() != basis.len() {
                return Err(no_structure(&format!(
                    "expected {} coefficients, got {}",
                    basis.len(),
                    c.len()
                )));
            }
            candidates.push(c.to_vec());
        }
        None => {
            candidates.push(vec![ExactScalar::one(); basis.len()]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..ATTEMPT_BUDGET {
                let c = (0..basis.len())
                    .map(|_| {
                        let mut v = 0i64;
                        while v == 0 {
                            v = rng.gen_range(-3..=3);
                        }
                        ExactScalar::from_int(v)
                    })
                    .collect();
                candidates.push(c);
            }
        }
    }

    for c in candidates {
        let t = BracketTensor::linear_combination(&basis, &c);
        if t.is_nondegenerate() {
            assert!(t.is_symmetric());
            assert!(
                t.is_surjective(),
                "non-degenerate equivariant Γ must be surjective onto V"
            );
            return Ok(SupertranslationAlgebra {
                spinor,
                copies,
                bracket: t,
                gamma_space_dim: basis.len(),
                chosen_coeffs: c,
            });
        }
    }
    Err(no_structure(
        "no non-degenerate combination found in the attempt budget",
    ))
}

/// The super-Poincaré algebra `m ⋊ so(V)` as a structure-constant algebra:
/// degrees -2, -1, 0 with `so(V)` acting tautologically on `V` and
/// spinorially on `W`, and `[V, W] = 0`.
pub fn build_super_poincare(m: &SupertranslationAlgebra) -> GradedSuperalgebra {
    let d = m.dim_v();
    let w = m.dim_w();
    let spinor = m.spinor();
    let so = spinor.so_basis();
    let n_so = so.len();

    let mut basis = Vec::new();
    for label in spinor.space().basis_labels() {
        basis.push(BasisElement {
            label: label.clone(),
            degree: -2,
        });
    }
    for k in 0..w {
        basis.push(BasisElement {
            label: format!("s{}", k + 1),
            degree: -1,
        });
    }
    let labels = spinor.space().basis_labels();
    let mut pair_labels = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            pair_labels.push(format!("{}^{}", labels[i], labels[j]));
        }
    }
    for label in &pair_labels {
        basis.push(BasisElement {
            label: label.clone(),
            degree: 0,
        });
    }

    let mut g = GradedSuperalgebra::new(basis, None);
    let v_at = |i: usize| i;
    let w_at = |a: usize| d + a;
    let so_at = |k: usize| d + w + k;

    // [s, s] = Γ
    for a in 0..w {
        for b in a..w {
            let val: SparseVec = m
                .bracket()
                .apply_basis_sparse(a, b)
                .into_iter()
                .map(|(i, c)| (v_at(i as usize) as u32, c))
                .collect();
            g.set_bracket(w_at(a), w_at(b), val);
        }
    }

    // so(V) structure constants, resolved through the flattened wedge basis.
    let mut flat_rows = Vec::with_capacity(d * d);
    for r in 0..d {
        for c in 0..d {
            flat_rows.push(
                so.iter()
                    .map(|gen| gen.action_v[(r, c)].clone())
                    .collect::<Vec<_>>(),
            );
        }
    }
    let flat = ExactMatrix::from_rows(flat_rows);
    let express_so = |x: &ExactMatrix| -> Vec<ExactScalar> {
        let mut target = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                target.push(x[(r, c)].clone());
            }
        }
        flat.solve(&target)
            .expect("commutator of so(V) elements stays in so(V)")
    };

    for k in 0..n_so {
        for l in k..n_so {
            let comm = so[k].action_v.commutator(&so[l].action_v);
            let coords = express_so(&comm);
            let val: SparseVec = coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(t, c)| (so_at(t) as u32, c))
                .collect();
            g.set_bracket(so_at(k), so_at(l), val);
        }
        // [so_k, v_j]: stored as [v_j, so_k] = -[so_k, v_j].
        for j in 0..d {
            let col: SparseVec = (0..d)
                .filter(|&r| !so[k].action_v[(r, j)].is_zero())
                .map(|r| (v_at(r) as u32, so[k].action_v[(r, j)].neg()))
                .collect();
            g.set_bracket(v_at(j), so_at(k), col);
        }
        // [so_k, s_b]: stored as [s_b, so_k] = -[so_k, s_b].
        let ds = spinor.dim_s();
        for b in 0..w {
            let col: SparseVec = (0..w)
                .filter_map(|r| {
                    w_entry(&so[k].action_s, ds, r, b).map(|c| (w_at(r) as u32, c.neg()))
                })
                .collect();
            g.set_bracket(w_at(b), so_at(k), col);
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spinor(d: usize) -> SpinorModule {
        build_spinor_module(build_metric_space(d)).unwrap()
    }

    #[test]
    fn d3_n1_admissible_inventory() {
        let s = spinor(3);
        let minus = admissible_forms(&s, 1, -1);
        // One-dimensional solution space, antisymmetric and non-degenerate:
        // the (τ,σ) = (-,-) form of the orthosymplectic example.
        assert_eq!(minus.len(), 1);
        assert_eq!(minus[0].epsilon, Some(-1));
        assert_eq!(minus[0].tau, Some(-1));
        assert!(minus[0].nondegenerate);
        let plus = admissible_forms(&s, 1, 1);
        for f in &plus {
            assert_eq!(f.sigma, f.epsilon);
        }
    }

    #[test]
    fn d5_n1_has_a_sigma_tau_minus_form() {
        let s = spinor(5);
        let plus = admissible_forms(&s, 1, 1);
        // The ab(3) ingredient: (τ,σ) = (+,-).
        assert!(plus
            .iter()
            .any(|f| f.epsilon == Some(-1) && f.nondegenerate));
        // στ = 1 on S itself is empty in D=5: no symmetric invariant Γ.
        assert!(invariant_gamma_space(&s, 1).is_empty());
    }

    #[test]
    fn d4_n1_form_blocks_and_gamma_pairing() {
        let s = spinor(4);
        let minus = admissible_forms(&s, 1, -1);
        let nondeg: Vec<_> = minus
            .iter()
            .filter(|f| f.epsilon == Some(-1) && f.nondegenerate)
            .collect();
        assert!(!nondeg.is_empty());
        // Every τ-relation solution is so(4)-invariant, and so(4) has no
        // invariant cross pairing of the semi-spinors: B is block diagonal
        // in the chirality splitting, with non-degenerate blocks.
        let (p, mn) = s.semispinor_projectors().unwrap();
        let f = &nondeg[0];
        let cross = p.transpose().mul(&f.matrix).mul(&mn);
        assert!(cross.is_zero());
        let cross2 = mn.transpose().mul(&f.matrix).mul(&p);
        assert!(cross2.is_zero());
        assert_eq!(p.transpose().mul(&f.matrix).mul(&p).rank(), 2);

        // The derived bracket, by contrast, pairs S+ with S-:
        // Γ(P+s, P+t) = 0 while Γ itself is non-degenerate.
        let t = gamma_from_form(&s, 1, f).unwrap();
        assert!(t.is_nondegenerate());
        for a in 0..4 {
            for b in 0..4 {
                let pa: Vec<ExactScalar> = (0..4).map(|r| p[(r, a)].clone()).collect();
                let pb: Vec<ExactScalar> = (0..4).map(|r| p[(r, b)].clone()).collect();
                assert!(t.apply(&pa, &pb).iter().all(ExactScalar::is_zero));
            }
        }
    }

    #[test]
    fn gamma_space_dimensions_small() {
        // D=1, N=1: every map S²(C) → C is equivariant.
        assert_eq!(invariant_gamma_space(&spinor(1), 1).len(), 1);
        // D=3, N=1: the osp example tensor spans the space.
        assert_eq!(invariant_gamma_space(&spinor(3), 1).len(), 1);
        // D=5, N=1: empty (checked above); D=5, N=2: the b⊗ω tensor.
        assert_eq!(invariant_gamma_space(&spinor(5), 2).len(), 1);
    }

    #[test]
    fn gamma_from_form_lands_in_invariant_space() {
        for (d, n) in [(3usize, 1usize), (3, 2), (4, 1)] {
            let s = spinor(d);
            let space = invariant_gamma_space(&s, n);
            let mut red = RowReducer::new(d * (s.dim_s() * n).pow(2));
            for t in &space {
                red.add_row(crate::exactlin::to_sparse(t.flat()));
            }
            let mut found = 0;
            for tau in [1i8, -1] {
                for f in admissible_forms(&s, n, tau) {
                    if f.sigma_tau() == Some(1) && f.nondegenerate {
                        let t = gamma_from_form(&s, n, &f).unwrap();
                        assert!(
                            red.is_in_span(crate::exactlin::to_sparse(t.flat())),
                            "D={d}, N={n}, τ={tau}"
                        );
                        found += 1;
                    }
                }
            }
            assert!(found > 0, "expected στ=1 forms at D={d}, N={n}");
        }
    }

    #[test]
    fn sigma_tau_violation_and_degenerate_are_rejected() {
        let s = spinor(5);
        let plus = admissible_forms(&s, 1, 1);
        let f = plus
            .iter()
            .find(|f| f.sigma_tau() == Some(-1))
            .expect("D=5 has a στ=-1 class");
        assert_eq!(
            gamma_from_form(&s, 1, f).err(),
            Some(FormError::SigmaTauViolation)
        );

        let s3 = spinor(3);
        let mut degenerate = admissible_forms(&s3, 1, -1)[0].clone();
        degenerate.matrix = ExactMatrix::zeros(2, 2);
        degenerate.nondegenerate = false;
        assert_eq!(
            gamma_from_form(&s3, 1, &degenerate).err(),
            Some(FormError::DegenerateForm)
        );
    }

    #[test]
    fn reconstruct_form_round_trips() {
        let s = spinor(3);
        let f = &admissible_forms(&s, 1, -1)[0];
        let t = gamma_from_form(&s, 1, f).unwrap();
        let reb = s.orthogonal_rebasing();
        let back = reconstruct_form(&s, &t, &reb[0]).unwrap();
        assert_eq!(back.matrix, f.matrix);
        assert_eq!(back.tau, Some(-1));
        assert_eq!(back.epsilon, Some(-1));

        // v-independence across non-isotropic directions.
        let other = reconstruct_form(&s, &t, &reb[1]).unwrap();
        assert_eq!(other.matrix, back.matrix);

        // Isotropic directions are rejected.
        let e1 = s.space().basis_vector(0);
        assert!(matches!(
            reconstruct_form(&s, &t, &e1),
            Err(FormError::IsotropicVector)
        ));
    }

    #[test]
    fn build_supertranslation_small_cases() {
        let m = build_supertranslation(3, 1, None, 0).unwrap();
        assert_eq!(m.dim_v(), 3);
        assert_eq!(m.dim_w(), 2);
        assert_eq!(m.gamma_space_dim(), 1);

        assert!(matches!(
            build_supertranslation(5, 1, None, 0),
            Err(BuildError::NoStructure {
                gamma_space_dim: 0,
                ..
            })
        ));

        let m52 = build_supertranslation(5, 2, None, 0).unwrap();
        assert_eq!(m52.dim_v(), 5);
        assert_eq!(m52.dim_w(), 8);
    }

    #[test]
    fn super_poincare_of_3_1() {
        let m = build_supertranslation(3, 1, None, 0).unwrap();
        let p = build_super_poincare(&m);
        let dims = p.graded_dimensions();
        assert_eq!(dims[&-2], 3);
        assert_eq!(dims[&-1], 2);
        assert_eq!(dims[&0], 3);
        assert!(p.check_super_jacobi().ok);
        // [V, W] = 0 everywhere in the table.
        for i in 0..3 {
            for a in 0..2 {
                assert!(p.bracket_basis(i, 3 + a).is_empty());
            }
        }
    }

    #[test]
    fn gamma_space_growth_follows_the_class_counts() {
        for d in 1..=6 {
            let s = spinor(d);
            let a_sym = invariant_gamma_space(&s, 1).len();
            let a_alt = antisymmetric_gamma_space(&s, 1).len();
            for n in 2..=3 {
                let expect = a_sym * n * (n + 1) / 2 + a_alt * n * (n - 1) / 2;
                assert_eq!(
                    invariant_gamma_space(&s, n).len(),
                    expect,
                    "D={d}, N={n}"
                );
            }
        }
    }
}
