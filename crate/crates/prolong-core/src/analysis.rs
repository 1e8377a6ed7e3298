//! Structural analysis of prolongation output.
//!
//! Everything here re-derives consequences of the structure theory on the
//! computed algebra and fails loudly when a theorem-level fact does not
//! hold: the grading element and the `so(V)` copy must sit inside `g_0` and
//! decompose it into ideals, positive layers must embed into `W` through
//! `φ`, the reflections `ψ_v` must be bracket homomorphisms, `h_0` must
//! land in the symplectic algebra of the `α`-form, and the ideal generated
//! by `g_{-2}` must be the unique minimal (simple) one when the positive
//! part is nonzero. The final verdict compares graded dimensions and
//! `dim h_0` against the expected classification rows.

use std::collections::BTreeMap;

use crate::exactlin::{
    to_sparse, ExactMatrix, ExactScalar, RowReducer, SpanExpresser, SparseVec,
};
use crate::models::{expected_row, k1n_graded_dimension};
use crate::supertranslation::{reconstruct_form, w_matrix, SupertranslationAlgebra};
use crate::tanaka::ProlongationResult;

/// Fatal diagnostics: these contradict proved structure theory and mean the
/// engine (not the input) is wrong.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("g0 does not decompose as so(V) ⊕ CE ⊕ h0: {0}")]
    DecompositionFailure(String),
    #[error("no single spinor satisfies Dv = v·φ(D) for a g1 element")]
    InconsistentPhi,
}

/// One named verification outcome.
#[derive(Clone, Debug)]
pub struct CheckEntry {
    pub name: &'static str,
    pub ok: bool,
    pub note: Option<String>,
}

impl CheckEntry {
    fn with(name: &'static str, ok: bool) -> Self {
        CheckEntry {
            name,
            ok,
            note: None,
        }
    }

    fn skipped(name: &'static str, note: impl Into<String>) -> Self {
        CheckEntry {
            name,
            ok: true,
            note: Some(note.into()),
        }
    }
}

/// Everything the pipeline reports about one `(D, N)` run.
#[derive(Clone, Debug)]
pub struct StructureReport {
    pub dim_v: usize,
    pub copies: usize,
    pub gamma_space_dim: usize,
    pub graded_dims: BTreeMap<i64, usize>,
    pub h0_dim: usize,
    pub so_ideal_ok: bool,
    pub decomposition_ok: bool,
    pub positive_part: bool,
    pub terminated: bool,
    pub minimal_ideal_dims: Option<BTreeMap<i64, usize>>,
    pub simple: Option<bool>,
    pub verdict: String,
    pub jacobi_ok: bool,
    pub checks: Vec<CheckEntry>,
}

impl StructureReport {
    pub fn all_checks_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// The grading element `E = (-2·Id_V, -Id_W)` as a flat `(f, h)` candidate
/// for `g_0`.
fn grading_element_flat(dim_v: usize, dim_w: usize) -> SparseVec {
    let mut flat: SparseVec = Vec::new();
    for alpha in 0..dim_w {
        flat.push(((alpha * dim_w + alpha) as u32, ExactScalar::from_int(-1)));
    }
    let f_cols = dim_w * dim_w;
    for i in 0..dim_v {
        flat.push(((f_cols + i * dim_v + i) as u32, ExactScalar::from_int(-2)));
    }
    flat.sort_by_key(|(c, _)| *c);
    flat
}

/// Coordinates of the grading element over the `g_0` basis; `None` when it
/// is (incorrectly) missing from the computed layer.
pub fn grading_element(result: &ProlongationResult) -> Option<Vec<ExactScalar>> {
    result.layer_coords(0, &grading_element_flat(result.dim_v(), result.dim_w()))
}

/// `ad(E)` acts on `g_p` with eigenvalue `p`, for every computed degree.
pub fn euler_eigenvalues_ok(result: &ProlongationResult, e_coords: &[ExactScalar]) -> bool {
    let alg = result.algebra();
    let e_vec: SparseVec = e_coords
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (result.global_index(0, k) as u32, c.clone()))
        .collect();
    for idx in 0..alg.dim() {
        let p = alg.degree(idx);
        if let Some(t) = alg.truncation() {
            if p + 0 > t {
                continue;
            }
        }
        let unit: SparseVec = vec![(idx as u32, ExactScalar::one())];
        let got = alg.bracket(&e_vec, &unit);
        let expect: SparseVec = if p == 0 {
            Vec::new()
        } else {
            vec![(idx as u32, ExactScalar::from_int(p))]
        };
        if got != expect {
            return false;
        }
    }
    true
}

/// Basis of `h_0 = {D ∈ g_0 : [D, g_{-2}] = 0}`, as coordinate vectors over
/// the `g_0` basis.
pub fn internal_symmetries(result: &ProlongationResult) -> Vec<Vec<ExactScalar>> {
    let n0 = result.layer_dim(0);
    let d = result.dim_v();
    let mut rows = Vec::with_capacity(d * d);
    let pairs: Vec<(ExactMatrix, ExactMatrix)> = (0..n0).map(|k| result.g0_pair(k)).collect();
    for r in 0..d {
        for c in 0..d {
            let row: SparseVec = (0..n0)
                .filter(|&k| !pairs[k].0[(r, c)].is_zero())
                .map(|k| (k as u32, pairs[k].0[(r, c)].clone()))
                .collect();
            rows.push(row);
        }
    }
    let mut red = RowReducer::new(n0);
    for row in rows {
        red.add_row(row);
    }
    red.kernel_basis()
        .into_iter()
        .map(|v| {
            let mut dense = vec![ExactScalar::zero(); n0];
            for (c, val) in v {
                dense[c as usize] = val;
            }
            dense
        })
        .collect()
}

/// The verified decomposition `g_0 = so(V) ⊕ CE ⊕ h_0`.
pub struct G0Decomposition {
    /// Coordinates over the `g_0` basis, one per wedge generator.
    pub so_coords: Vec<Vec<ExactScalar>>,
    pub e_coords: Vec<ExactScalar>,
    pub h0_coords: Vec<Vec<ExactScalar>>,
    /// Each summand is an ideal of `g_0`.
    pub ideals_ok: bool,
    /// `[so(V), h_0] = 0`.
    pub so_h0_commute: bool,
}

/// Verifies that the tautological/spinorial `so(V)` pairs, the grading
/// element and `h_0` exactly fill `g_0` as a direct sum of ideals.
pub fn decompose_g0(
    result: &ProlongationResult,
    m: &SupertranslationAlgebra,
) -> Result<G0Decomposition, AnalysisError> {
    let n0 = result.layer_dim(0);
    let d = result.dim_v();
    let w = result.dim_w();
    let spinor = m.spinor();

    let mut so_coords = Vec::new();
    for gen in spinor.so_basis() {
        let bw = w_matrix(&gen.action_s, m.copies());
        let mut flat: SparseVec = Vec::new();
        for alpha in 0..w {
            for t in 0..w {
                if !bw[(t, alpha)].is_zero() {
                    flat.push(((t * w + alpha) as u32, bw[(t, alpha)].clone()));
                }
            }
        }
        let f_cols = w * w;
        for i in 0..d {
            for t in 0..d {
                if !gen.action_v[(t, i)].is_zero() {
                    flat.push(((f_cols + t * d + i) as u32, gen.action_v[(t, i)].clone()));
                }
            }
        }
        flat.sort_by_key(|(c, _)| *c);
        let coords = result.layer_coords(0, &flat).ok_or_else(|| {
            AnalysisError::DecompositionFailure("an so(V) pair is not a derivation".into())
        })?;
        so_coords.push(coords);
    }

    let e_coords = grading_element(result).ok_or_else(|| {
        AnalysisError::DecompositionFailure("grading element not in g0".into())
    })?;
    let h0_coords = internal_symmetries(result);

    // Direct sum exactly filling g0.
    let mut red = RowReducer::new(n0);
    let mut count = 0;
    for v in so_coords
        .iter()
        .chain(std::iter::once(&e_coords))
        .chain(h0_coords.iter())
    {
        if red.add_row(to_sparse(v)) {
            count += 1;
        }
    }
    let total = so_coords.len() + 1 + h0_coords.len();
    if count != total || total != n0 {
        return Err(AnalysisError::DecompositionFailure(format!(
            "so(V)+CE+h0 spans {count} of {n0} (summand dims {}+1+{})",
            so_coords.len(),
            h0_coords.len()
        )));
    }

    // Ideal property of each summand inside g0, through the bracket table.
    let alg = result.algebra();
    let g0_global = |k: usize| result.global_index(0, k) as u32;
    let to_global = |coords: &[ExactScalar]| -> SparseVec {
        coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (g0_global(k), c.clone()))
            .collect()
    };
    let g0_range = alg.degree_range(0);
    let restrict = |v: &SparseVec| -> SparseVec {
        v.iter()
            .map(|(c, val)| {
                assert!(
                    g0_range.contains(&(*c as usize)),
                    "[g0, g0] stays in degree 0"
                );
                ((*c as usize - g0_range.start) as u32, val.clone())
            })
            .collect()
    };

    let so_span = SpanExpresser::new(n0, &so_coords.iter().map(|v| to_sparse(v)).collect::<Vec<_>>());
    let h0_span = SpanExpresser::new(n0, &h0_coords.iter().map(|v| to_sparse(v)).collect::<Vec<_>>());

    let mut ideals_ok = true;
    for k in 0..n0 {
        let xk: SparseVec = vec![(g0_global(k), ExactScalar::one())];
        for v in &so_coords {
            let b = alg.bracket(&xk, &to_global(v));
            ideals_ok &= so_span.express(&restrict(&b)).is_some();
        }
        for v in &h0_coords {
            let b = alg.bracket(&xk, &to_global(v));
            ideals_ok &= h0_span.express(&restrict(&b)).is_some();
        }
        // E is central in g0.
        let b = alg.bracket(&xk, &to_global(&e_coords));
        ideals_ok &= b.is_empty();
    }

    let mut so_h0_commute = true;
    for a in &so_coords {
        for b in &h0_coords {
            let v = alg.bracket(&to_global(a), &to_global(b));
            so_h0_commute &= v.is_empty();
        }
    }

    if !ideals_ok {
        return Err(AnalysisError::DecompositionFailure(
            "a summand is not an ideal of g0".into(),
        ));
    }

    Ok(G0Decomposition {
        so_coords,
        e_coords,
        h0_coords,
        ideals_ok,
        so_h0_commute,
    })
}

/// The minimal ideal data: the ideal generated by `g_{-2}` and its
/// simplicity certificate.
pub struct MinimalIdeal {
    pub basis: Vec<SparseVec>,
    pub graded_dims: BTreeMap<i64, usize>,
    pub simple: bool,
    pub contains_w: bool,
    pub contains_odd_layers: bool,
}

/// Computes `s = ideal_closure(g_{-2})` and certifies simplicity by the
/// exhaustive generator test: `[s,s] = s` and every basis element of `s`
/// regenerates `s` as an ideal.
pub fn minimal_ideal(result: &ProlongationResult) -> MinimalIdeal {
    let alg = result.algebra();
    let seed: Vec<SparseVec> = alg
        .degree_range(-2)
        .map(|k| vec![(k as u32, ExactScalar::one())])
        .collect();
    let basis = alg.ideal_closure(&seed);
    let graded_dims = alg.subspace_graded_dims(&basis);
    let dim_s = basis.len();

    // [s, s] = s
    let mut derived = RowReducer::new(alg.dim());
    for x in &basis {
        for y in &basis {
            let v = alg.bracket(x, y);
            if !v.is_empty() {
                derived.add_row(v);
            }
        }
    }
    let mut simple = derived.rank() == dim_s;

    // Every single basis element generates the whole of s.
    if simple {
        for x in &basis {
            let regenerated = alg.ideal_closure(std::slice::from_ref(x));
            if regenerated.len() != dim_s {
                simple = false;
                break;
            }
        }
    }

    let w_range = alg.degree_range(-1);
    let mut span = RowReducer::new(alg.dim());
    for x in &basis {
        span.add_row(x.clone());
    }
    let contains_w = w_range
        .clone()
        .all(|k| span.is_in_span(vec![(k as u32, ExactScalar::one())]));
    let mut contains_odd_layers = contains_w;
    for idx in 0..alg.dim() {
        if alg.degree(idx).rem_euclid(2) == 1 {
            contains_odd_layers &= span.is_in_span(vec![(idx as u32, ExactScalar::one())]);
        }
    }

    MinimalIdeal {
        basis,
        graded_dims,
        simple,
        contains_w,
        contains_odd_layers,
    }
}

/// The equivariant embedding `φ: g_1 → W` with `Dv = v·φ(D)`.
pub struct PhiEmbedding {
    /// `φ` images of the `g_1` basis, as spinor coefficient vectors.
    pub images: Vec<Vec<ExactScalar>>,
    pub injective: bool,
    pub equivariant: bool,
    pub clifford_stable: bool,
}

/// Solves `v·φ(D) = D(v)` for every `g_1` basis element simultaneously over
/// all `v`, then verifies injectivity, `so(V)`-equivariance and stability of
/// the image under Clifford multiplication.
pub fn phi_embedding(
    result: &ProlongationResult,
    m: &SupertranslationAlgebra,
) -> Result<PhiEmbedding, AnalysisError> {
    let n1 = result.layer_dim(1);
    let d = result.dim_v();
    let w = result.dim_w();
    let spinor = m.spinor();

    let gammas_w: Vec<ExactMatrix> = (0..d)
        .map(|i| w_matrix(&spinor.gammas()[i], m.copies()))
        .collect();

    let mut images = Vec::with_capacity(n1);
    for k in 0..n1 {
        let action = result.g1_action_on_v(k);
        // Stack γ(v_i) φ = action(:, i) over all i.
        let mut rows = Vec::with_capacity(d * w);
        let mut rhs = Vec::with_capacity(d * w);
        for i in 0..d {
            for t in 0..w {
                rows.push((0..w).map(|mu| gammas_w[i][(t, mu)].clone()).collect());
                rhs.push(action[(t, i)].clone());
            }
        }
        let system = ExactMatrix::from_rows(rows);
        let phi = system
            .solve(&rhs)
            .map_err(|_| AnalysisError::InconsistentPhi)?;
        images.push(phi);
    }

    let mut rank = RowReducer::new(w);
    let mut injective = true;
    for img in &images {
        injective &= rank.add_row(to_sparse(img));
    }

    // Equivariance: φ([A, D]) = A_W · φ(D) for the so(V) wedge basis.
    let alg = result.algebra();
    let mut equivariant = true;
    if n1 > 0 {
        let deco_so = spinor.so_basis();
        // Express each so pair in g0 coordinates to bracket it with g1.
        for gen in &deco_so {
            let bw = w_matrix(&gen.action_s, m.copies());
            let mut flat: SparseVec = Vec::new();
            for alpha in 0..w {
                for t in 0..w {
                    if !bw[(t, alpha)].is_zero() {
                        flat.push(((t * w + alpha) as u32, bw[(t, alpha)].clone()));
                    }
                }
            }
            let f_cols = w * w;
            for i in 0..d {
                for t in 0..d {
                    if !gen.action_v[(t, i)].is_zero() {
                        flat.push(((f_cols + t * d + i) as u32, gen.action_v[(t, i)].clone()));
                    }
                }
            }
            flat.sort_by_key(|(c, _)| *c);
            let Some(coords) = result.layer_coords(0, &flat) else {
                equivariant = false;
                break;
            };
            let a_global: SparseVec = coords
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (result.global_index(0, k) as u32, c.clone()))
                .collect();
            let g1_start = result.global_index(1, 0);
            for k in 0..n1 {
                let dk: SparseVec = vec![((g1_start + k) as u32, ExactScalar::one())];
                let ad = alg.bracket(&a_global, &dk);
                // φ of the combination vs the W action on φ(D_k).
                let mut lhs = vec![ExactScalar::zero(); w];
                for (idx, c) in &ad {
                    let l = *idx as usize - g1_start;
                    for (t, phi_t) in images[l].iter().enumerate() {
                        if !phi_t.is_zero() {
                            lhs[t] = lhs[t].add(&c.mul(phi_t));
                        }
                    }
                }
                let rhs = bw.mul_vec(&images[k]);
                if lhs != rhs {
                    equivariant = false;
                }
            }
        }
    }

    // Image is a Clifford submodule.
    let mut clifford_stable = true;
    if n1 > 0 {
        let image_sparse: Vec<SparseVec> = images.iter().map(|v| to_sparse(v)).collect();
        let mut span = RowReducer::new(w);
        for v in &image_sparse {
            span.add_row(v.clone());
        }
        for g in &gammas_w {
            for img in &images {
                let moved = g.mul_vec(img);
                clifford_stable &= span.is_in_span(to_sparse(&moved));
            }
        }
    }

    Ok(PhiEmbedding {
        images,
        injective,
        equivariant,
        clifford_stable,
    })
}

/// Outcome of the `ψ_v` verification at one vector.
pub struct PsiCheck {
    pub isotropic: bool,
    pub homomorphism: bool,
    pub invertible_matches_norm: bool,
}

/// Builds the degree-0 map `ψ_v` (items (1)-(2) of its defining
/// proposition, with the `ε` of the chosen admissible class) and verifies
/// the bracket law `ψ_v([s,t]) = [ψ_v s, ψ_v t]` on all `W`-basis pairs,
/// plus the invertibility criterion.
pub fn psi_v(m: &SupertranslationAlgebra, v: &[ExactScalar], epsilon: i8) -> PsiCheck {
    let spinor = m.spinor();
    let space = spinor.space();
    let d = m.dim_v();
    let w = m.dim_w();
    let norm = space.pairing(v, v);
    let isotropic = norm.is_zero();
    let eps = ExactScalar::from_int(epsilon as i64);

    // ψ on V.
    let mut psi_v_mat = ExactMatrix::zeros(d, d);
    for j in 0..d {
        let u = space.basis_vector(j);
        let vu = space.pairing(v, &u);
        let img: Vec<ExactScalar> = if isotropic {
            // -2ε(v,u)v
            let c = vu.mul(&eps).mul(&ExactScalar::from_int(-2));
            v.iter().map(|x| x.mul(&c)).collect()
        } else {
            // ε(v,v)(u - 2(v,u)/(v,v) v)
            let c = vu.mul(&ExactScalar::from_int(2)).div(&norm);
            let scale = eps.mul(&norm);
            (0..d)
                .map(|r| u[r].sub(&c.mul(&v[r])).mul(&scale))
                .collect()
        };
        for r in 0..d {
            psi_v_mat[(r, j)] = img[r].clone();
        }
    }

    // ψ on W is Clifford multiplication.
    let psi_w = w_matrix(&spinor.gamma_of(v), m.copies());

    // Homomorphism on odd pairs: ψ(Γ(s,t)) = Γ(ψ s, ψ t).
    let mut homomorphism = true;
    for a in 0..w {
        let psi_a: Vec<ExactScalar> = (0..w).map(|r| psi_w[(r, a)].clone()).collect();
        for b in a..w {
            let psi_b: Vec<ExactScalar> = (0..w).map(|r| psi_w[(r, b)].clone()).collect();
            let lhs = psi_v_mat.mul_vec(&m.bracket().apply_basis(a, b));
            let rhs = m.bracket().apply(&psi_a, &psi_b);
            if lhs != rhs {
                homomorphism = false;
            }
        }
    }

    // Invertible iff non-isotropic; checked on both V and W sides.
    let v_invertible = psi_v_mat.rank() == d;
    let w_invertible = psi_w.rank() == w;
    let invertible_matches_norm = (v_invertible == !isotropic) && (w_invertible == !isotropic);

    PsiCheck {
        isotropic,
        homomorphism,
        invertible_matches_norm,
    }
}

/// Outcome of the `α`-form verification.
pub struct AlphaCheck {
    pub antisymmetric: bool,
    pub nondegenerate: bool,
    pub h0_contained: bool,
}

/// Builds `α(s,t) = (Γ(y·z·s, t), x)` from the first three orthogonal
/// rebasing vectors and checks antisymmetry, non-degeneracy and the
/// containment `h_0 ⊂ osp(W, α)`.
pub fn alpha_form_check(
    m: &SupertranslationAlgebra,
    h0_w_actions: &[ExactMatrix],
) -> AlphaCheck {
    let spinor = m.spinor();
    let reb = spinor.orthogonal_rebasing();
    assert!(reb.len() >= 3, "α-form needs dim V >= 3");
    let (x, y, z) = (&reb[0], &reb[1], &reb[2]);
    let w = m.dim_w();

    let yz = w_matrix(&spinor.gamma_of(y).mul(&spinor.gamma_of(z)), m.copies());
    let mut alpha = ExactMatrix::zeros(w, w);
    for a in 0..w {
        let moved: Vec<ExactScalar> = (0..w).map(|r| yz[(r, a)].clone()).collect();
        for b in 0..w {
            let mut basis_b = vec![ExactScalar::zero(); w];
            basis_b[b] = ExactScalar::one();
            let gvec = m.bracket().apply(&moved, &basis_b);
            alpha[(a, b)] = spinor.space().pairing(&gvec, x);
        }
    }

    let mut antisymmetric = true;
    for a in 0..w {
        for b in a..w {
            if alpha[(a, b)] != alpha[(b, a)].neg() {
                antisymmetric = false;
            }
        }
    }
    let nondegenerate = alpha.rank() == w;

    let mut h0_contained = true;
    for bmat in h0_w_actions {
        let cond = bmat.transpose().mul(&alpha).add(&alpha.mul(bmat));
        h0_contained &= cond.is_zero();
    }

    AlphaCheck {
        antisymmetric,
        nondegenerate,
        h0_contained,
    }
}

/// Deterministic `ψ_v` sample vectors: a mix of isotropic and non-isotropic
/// directions when both exist.
fn psi_sample_vectors(m: &SupertranslationAlgebra) -> Vec<Vec<ExactScalar>> {
    let spinor = m.spinor();
    let space = spinor.space();
    let d = m.dim_v();
    let mut out = Vec::new();
    let reb = spinor.orthogonal_rebasing();
    out.push(reb[0].clone());
    if d >= 2 {
        out.push(reb[1].clone());
        // e1, f1 are isotropic; x1 + y1 = 2 e1 is too.
        out.push(space.basis_vector(0));
        out.push(space.basis_vector(1));
        let sum: Vec<ExactScalar> = (0..d).map(|r| reb[0][r].add(&reb[1][r])).collect();
        out.push(sum);
    } else {
        for k in 2..=5 {
            out.push(vec![ExactScalar::from_int(k)]);
        }
    }
    out
}

/// Runs the whole verification battery and assembles the report.
pub fn classify(m: &SupertranslationAlgebra, result: &ProlongationResult) -> StructureReport {
    let dim_v = m.dim_v();
    let copies = m.copies();
    let graded_dims = result.graded_dims();
    let positive_part = (1..=result.top_degree()).any(|p| result.layer_dim(p) > 0);
    let mut checks = Vec::new();

    checks.push(CheckEntry::with("jacobi", result.jacobi().ok));
    checks.push(CheckEntry::with("transitivity", result.transitivity_ok()));
    if dim_v >= 3 {
        checks.push(CheckEntry::with(
            "g_minus2_faithfulness",
            result.v_faithfulness_ok(),
        ));
    } else {
        checks.push(CheckEntry::skipped("g_minus2_faithfulness", "dim V < 3"));
    }

    let e_coords = grading_element(result);
    checks.push(CheckEntry::with("grading_element", e_coords.is_some()));
    if let Some(e) = &e_coords {
        checks.push(CheckEntry::with(
            "euler_eigenvalues",
            euler_eigenvalues_ok(result, e),
        ));
    }

    let h0_coords = internal_symmetries(result);
    let h0_dim = h0_coords.len();
    let h0_w_actions: Vec<ExactMatrix> = h0_coords
        .iter()
        .map(|coords| {
            let mut b = ExactMatrix::zeros(result.dim_w(), result.dim_w());
            for (k, c) in coords.iter().enumerate() {
                if !c.is_zero() {
                    let (_, bk) = result.g0_pair(k);
                    b = b.add(&bk.scale(c));
                }
            }
            b
        })
        .collect();

    let deco = decompose_g0(result, m);
    let (so_ideal_ok, decomposition_ok) = match &deco {
        Ok(d) => (d.ideals_ok, true),
        Err(_) => (false, false),
    };
    checks.push(CheckEntry::with("g0_decomposition", decomposition_ok));
    if let Ok(d) = &deco {
        checks.push(CheckEntry::with("so_h0_commute", d.so_h0_commute));
    }

    // φ on g1.
    if result.layer_dim(1) > 0 && dim_v >= 3 {
        match phi_embedding(result, m) {
            Ok(phi) => {
                checks.push(CheckEntry::with("phi_injective", phi.injective));
                checks.push(CheckEntry::with("phi_equivariant", phi.equivariant));
                checks.push(CheckEntry::with("phi_clifford_stable", phi.clifford_stable));
            }
            Err(_) => checks.push(CheckEntry::with("phi_injective", false)),
        }
    } else {
        checks.push(CheckEntry::skipped(
            "phi_injective",
            if dim_v < 3 { "dim V < 3" } else { "g1 = 0" },
        ));
    }

    // ψ_v, with ε recovered from the reconstructed admissible form.
    let spinor = m.spinor();
    let reb = spinor.orthogonal_rebasing();
    let eps = reconstruct_form(spinor, m.bracket(), &reb[0])
        .ok()
        .and_then(|f| f.epsilon);
    match eps {
        Some(e) => {
            let mut ok = true;
            let mut saw_isotropic = false;
            for v in psi_sample_vectors(m) {
                let check = psi_v(m, &v, e);
                saw_isotropic |= check.isotropic;
                ok &= check.homomorphism && check.invertible_matches_norm;
            }
            let _ = saw_isotropic;
            checks.push(CheckEntry::with("psi_v", ok));
        }
        None => checks.push(CheckEntry::skipped(
            "psi_v",
            "Γ mixes admissible classes with both ε signs",
        )),
    }

    // α-form.
    if dim_v >= 3 {
        let alpha = alpha_form_check(m, &h0_w_actions);
        checks.push(CheckEntry::with("alpha_antisymmetric", alpha.antisymmetric));
        checks.push(CheckEntry::with("alpha_nondegenerate", alpha.nondegenerate));
        checks.push(CheckEntry::with("alpha_h0_contained", alpha.h0_contained));
    } else {
        checks.push(CheckEntry::skipped("alpha_antisymmetric", "dim V < 3"));
    }

    // Minimal ideal when a positive part exists on a finished run.
    let (minimal_ideal_dims, simple) = if positive_part && result.terminated() {
        let s = minimal_ideal(result);
        checks.push(CheckEntry::with("minimal_ideal_contains_g_minus2", {
            let alg = result.algebra();
            alg.degree_range(-2).len() == s.graded_dims.get(&-2).copied().unwrap_or(0)
        }));
        checks.push(CheckEntry::with(
            "minimal_ideal_contains_odd_layers",
            s.contains_odd_layers,
        ));
        checks.push(CheckEntry::with("minimal_ideal_simple", s.simple));
        (Some(s.graded_dims), Some(s.simple))
    } else {
        (None, None)
    };

    // Verdict by matching the oracles.
    let verdict = if dim_v <= 2 {
        let mut ok = true;
        for p in -2..=result.top_degree() {
            let expect = match dim_v {
                1 => k1n_graded_dimension(copies, p),
                _ => 2 * k1n_graded_dimension(copies, p),
            };
            if result.layer_dim(p) != expect {
                ok = false;
            }
        }
        checks.push(CheckEntry::with("contact_oracle", ok));
        if ok {
            match dim_v {
                1 => format!("K(1|{copies}) growth"),
                _ => format!("K(1|{copies}) ⊕ K(1|{copies}) growth"),
            }
        } else {
            "UNEXPECTED: contact oracle mismatch".to_string()
        }
    } else {
        match expected_row(dim_v, copies) {
            Some(row) => {
                if !positive_part {
                    format!("UNEXPECTED: trivial positive part, expected {}", row.name)
                } else if graded_dims == row.graded_dims && h0_dim == row.h0_dim {
                    row.name
                } else {
                    format!("UNEXPECTED: dims differ from {}", row.name)
                }
            }
            None => {
                if positive_part {
                    "UNEXPECTED: positive part outside the classification".to_string()
                } else {
                    "trivial positive part".to_string()
                }
            }
        }
    };

    StructureReport {
        dim_v,
        copies,
        gamma_space_dim: m.gamma_space_dim(),
        graded_dims,
        h0_dim,
        so_ideal_ok,
        decomposition_ok,
        positive_part,
        terminated: result.terminated(),
        minimal_ideal_dims,
        simple,
        verdict,
        jacobi_ok: result.jacobi().ok,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supertranslation::build_supertranslation;
    use crate::tanaka::{maximal_prolongation, ProlongationOptions};

    fn run(d: usize, n: usize) -> (SupertranslationAlgebra, ProlongationResult) {
        let m = build_supertranslation(d, n, None, 0).unwrap();
        let r = maximal_prolongation(m.bracket(), &ProlongationOptions::default()).unwrap();
        (m, r)
    }

    #[test]
    fn grading_element_and_eigenvalues_3_1() {
        let (_, r) = run(3, 1);
        let e = grading_element(&r).expect("E in g0");
        assert!(euler_eigenvalues_ok(&r, &e));
    }

    #[test]
    fn h0_dimensions() {
        let (_, r) = run(3, 1);
        assert_eq!(internal_symmetries(&r).len(), 0);
        let (_, r) = run(3, 3);
        assert_eq!(internal_symmetries(&r).len(), 3);
        let (_, r) = run(5, 2);
        assert_eq!(internal_symmetries(&r).len(), 3);
    }

    #[test]
    fn g0_decomposition_3_1() {
        let (m, r) = run(3, 1);
        let deco = decompose_g0(&r, &m).unwrap();
        assert_eq!(deco.so_coords.len(), 3);
        assert!(deco.h0_coords.is_empty());
        assert!(deco.ideals_ok);
        assert!(deco.so_h0_commute);
    }

    #[test]
    fn phi_is_a_bijection_for_3_1() {
        let (m, r) = run(3, 1);
        let phi = phi_embedding(&r, &m).unwrap();
        assert_eq!(phi.images.len(), 2);
        assert!(phi.injective);
        assert!(phi.equivariant);
        assert!(phi.clifford_stable);
    }

    #[test]
    fn psi_reflection_identities_3_1() {
        let (m, _) = run(3, 1);
        let eps = -1;
        for v in psi_sample_vectors(&m) {
            let check = psi_v(&m, &v, eps);
            assert!(check.homomorphism);
            assert!(check.invertible_matches_norm);
        }
        // ψ_v(v) = -ε(v,v)v for non-isotropic v is item (2) with u = v;
        // exercised through the homomorphism check above.
    }

    #[test]
    fn classify_3_1_as_osp() {
        let (m, r) = run(3, 1);
        let report = classify(&m, &r);
        assert_eq!(report.verdict, "osp(1|4)");
        assert!(report.positive_part);
        assert_eq!(report.h0_dim, 0);
        assert_eq!(report.simple, Some(true));
        assert!(report.all_checks_ok(), "checks: {:?}", report.checks);
    }

    #[test]
    fn classify_6_1_trivial() {
        let (m, r) = run(6, 1);
        let report = classify(&m, &r);
        assert_eq!(report.verdict, "trivial positive part");
        assert!(!report.positive_part);
        assert!(report.all_checks_ok(), "checks: {:?}", report.checks);
    }

    #[test]
    fn classify_1_2_contact_growth() {
        let m = build_supertranslation(1, 2, None, 0).unwrap();
        let opts = ProlongationOptions {
            max_degree: 8,
            verify_extra_layer: false,
        };
        let r = maximal_prolongation(m.bracket(), &opts).unwrap();
        let report = classify(&m, &r);
        assert_eq!(report.verdict, "K(1|2) growth");
        assert!(report.all_checks_ok(), "checks: {:?}", report.checks);
    }
}
