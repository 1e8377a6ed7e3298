//! Maximal transitive prolongation of a depth-2 fundamental graded algebra.
//!
//! The input is the bracket tensor of `m = m_{-2} ⊕ m_{-1} = V ⊕ W`; the
//! engine computes `g_0, g_1, ...` degree by degree. Elements of `g_p` are
//! stored extensionally as the pair of maps `(f: m_{-1} → g_{p-1},
//! h: m_{-2} → g_{p-2})` given by their bracket action, so `g_p` is the
//! exact kernel of the super-Leibniz conditions
//!
//! ```text
//!   h(Γ(x,y)) = [f(x),y] + [f(y),x]      (x, y ∈ m_{-1})
//!   [f(x),v]  = [h(v),x]                 (x ∈ m_{-1}, v ∈ m_{-2})
//!   [h(v),u]  = [h(u),v]                 (v, u ∈ m_{-2})
//! ```
//!
//! in which all parity signs cancel. Transitivity — an element acting
//! trivially on `m_{-1}` vanishes — follows from surjectivity of `Γ` and is
//! asserted per layer, as is faithfulness on `m_{-2}` for `dim V >= 3`.
//! Brackets `[g_q, g_r]` are assembled recursively by total degree through
//! `[ψ,χ](x) = [ψ,χ(x)] - (-1)^{|ψ||χ|}[χ,ψ(x)]`, with exact membership in
//! the target layer verified at every step.

use std::collections::{BTreeMap, HashMap};

use crate::exactlin::{axpy, sparse_get, ExactMatrix, ExactScalar, RowReducer, SparseVec};
use crate::gradedlie::{BasisElement, GradedSuperalgebra, JacobiReport};
use crate::supertranslation::BracketTensor;

/// Errors from the prolongation engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TanakaError {
    /// A recursive bracket failed the exact membership check in its target
    /// layer. This cannot happen for a valid fundamental input; it signals
    /// an implementation bug.
    #[error("recursive bracket escaped its target layer at degrees ({0}, {1})")]
    ClosureFailure(i64, i64),
    /// A claimed-terminated prolongation produced a nonzero extra layer.
    #[error("termination soundness check failed at degree {0}")]
    TerminationFailure(i64),
}

/// Knobs for a prolongation run.
#[derive(Clone, Debug)]
pub struct ProlongationOptions {
    /// Cap on the computed degree; runs that reach it without terminating
    /// are reported as capped (expected only for `dim V <= 2`).
    pub max_degree: i64,
    /// After termination, compute one extra layer and verify it vanishes.
    pub verify_extra_layer: bool,
}

impl Default for ProlongationOptions {
    fn default() -> Self {
        ProlongationOptions {
            max_degree: 12,
            verify_extra_layer: false,
        }
    }
}

/// Per-basis-element action data of one computed (or negative) layer.
struct LayerData {
    dim: usize,
    /// Kernel vectors over the ambient `Hom(W, g_{p-1}) ⊕ Hom(V, g_{p-2})`.
    elements: Vec<SparseVec>,
    free_cols: Vec<u32>,
    /// `f_maps[k][α]` = coords of `[e_k, s_α]` in the layer below.
    f_maps: Vec<Vec<SparseVec>>,
    /// `h_maps[k][i]` = coords of `[e_k, v_i]` two layers below.
    h_maps: Vec<Vec<SparseVec>>,
    /// `w_by_slot[α][t]` = list of `(k, c)` with `[e_k, s_α]_t = c`.
    w_by_slot: Vec<Vec<Vec<(u32, ExactScalar)>>>,
    /// `v_by_slot[i][t]` = list of `(k, c)` with `[e_k, v_i]_t = c`.
    v_by_slot: Vec<Vec<Vec<(u32, ExactScalar)>>>,
}

impl LayerData {
    #[allow(clippy::too_many_arguments)]
    fn from_maps(
        dim: usize,
        elements: Vec<SparseVec>,
        free_cols: Vec<u32>,
        f_maps: Vec<Vec<SparseVec>>,
        h_maps: Vec<Vec<SparseVec>>,
        dim_w: usize,
        dim_v: usize,
        below_f: usize,
        below_h: usize,
    ) -> Self {
        let mut w_by_slot = vec![vec![Vec::new(); below_f]; dim_w];
        for (k, per_alpha) in f_maps.iter().enumerate() {
            for (alpha, vec) in per_alpha.iter().enumerate() {
                for (t, c) in vec {
                    w_by_slot[alpha][*t as usize].push((k as u32, c.clone()));
                }
            }
        }
        let mut v_by_slot = vec![vec![Vec::new(); below_h]; dim_v];
        for (k, per_i) in h_maps.iter().enumerate() {
            for (i, vec) in per_i.iter().enumerate() {
                for (t, c) in vec {
                    v_by_slot[i][*t as usize].push((k as u32, c.clone()));
                }
            }
        }
        LayerData {
            dim,
            elements,
            free_cols,
            f_maps,
            h_maps,
            w_by_slot,
            v_by_slot,
        }
    }
}

fn layer_coords_impl(layer: &LayerData, candidate: &SparseVec) -> Option<Vec<ExactScalar>> {
    let mut coords = vec![ExactScalar::zero(); layer.dim];
    let mut residual = candidate.clone();
    for (k, fc) in layer.free_cols.iter().enumerate() {
        if let Some(c) = sparse_get(candidate, *fc) {
            coords[k] = c.clone();
            residual = axpy(&residual, &c.neg(), &layer.elements[k]);
        }
    }
    if residual.is_empty() {
        Some(coords)
    } else {
        None
    }
}

/// A computed maximal transitive prolongation.
pub struct ProlongationResult {
    algebra: GradedSuperalgebra,
    terminated: bool,
    max_degree: i64,
    dim_v: usize,
    dim_w: usize,
    layers: Vec<LayerData>,
    jacobi: JacobiReport,
    transitivity_ok: bool,
    v_faithfulness_ok: bool,
}

impl ProlongationResult {
    pub fn algebra(&self) -> &GradedSuperalgebra {
        &self.algebra
    }

    /// True when the engine found `g_p = 0` and stopped on its own.
    pub fn terminated(&self) -> bool {
        self.terminated
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_w(&self) -> usize {
        self.dim_w
    }

    pub fn jacobi(&self) -> &JacobiReport {
        &self.jacobi
    }

    pub fn transitivity_ok(&self) -> bool {
        self.transitivity_ok
    }

    /// Injectivity of `g_p → Hom(m_{-2}, g_{p-2})` for computed `p >= 1`;
    /// only claimed for `dim V >= 3`.
    pub fn v_faithfulness_ok(&self) -> bool {
        self.v_faithfulness_ok
    }

    /// Highest computed degree.
    pub fn top_degree(&self) -> i64 {
        self.layers.len() as i64 - 3
    }

    /// Dimension of `g_p` (0 beyond the computed range).
    pub fn layer_dim(&self, p: i64) -> usize {
        if p < -2 {
            return 0;
        }
        self.layers.get((p + 2) as usize).map_or(0, |l| l.dim)
    }

    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        self.algebra.graded_dimensions()
    }

    /// Global basis index of element `k` of `g_p` in the emitted algebra.
    pub fn global_index(&self, p: i64, k: usize) -> usize {
        let mut offset = 0;
        let mut deg = -2;
        while deg < p {
            offset += self.layer_dim(deg);
            deg += 1;
        }
        offset + k
    }

    /// The `(A, B) ∈ End(V) ⊕ End(W)` pair of a `g_0` basis element
    /// (columns are images of basis vectors).
    pub fn g0_pair(&self, k: usize) -> (ExactMatrix, ExactMatrix) {
        let layer = &self.layers[2];
        let mut a = ExactMatrix::zeros(self.dim_v, self.dim_v);
        for i in 0..self.dim_v {
            for (t, c) in &layer.h_maps[k][i] {
                a[(*t as usize, i)] = c.clone();
            }
        }
        let mut b = ExactMatrix::zeros(self.dim_w, self.dim_w);
        for alpha in 0..self.dim_w {
            for (t, c) in &layer.f_maps[k][alpha] {
                b[(*t as usize, alpha)] = c.clone();
            }
        }
        (a, b)
    }

    /// Action on `V` of a `g_1` basis element, as a `W × V` matrix
    /// (column `i` = `[e_k, v_i] ∈ W`).
    pub fn g1_action_on_v(&self, k: usize) -> ExactMatrix {
        let layer = &self.layers[3];
        let mut m = ExactMatrix::zeros(self.dim_w, self.dim_v);
        for i in 0..self.dim_v {
            for (t, c) in &layer.h_maps[k][i] {
                m[(*t as usize, i)] = c.clone();
            }
        }
        m
    }

    /// Coordinates of a candidate `(f, h)` pair over the basis of `g_p`, or
    /// `None` when the candidate lies outside the layer.
    pub fn layer_coords(&self, p: i64, candidate: &SparseVec) -> Option<Vec<ExactScalar>> {
        layer_coords_impl(&self.layers[(p + 2) as usize], candidate)
    }
}

struct Prolonger<'a> {
    gamma: &'a BracketTensor,
    dim_v: usize,
    dim_w: usize,
    /// `layers[p + 2]` is the layer in degree `p`, starting at `p = -2`.
    layers: Vec<LayerData>,
    /// `[g_q, g_r]` for `0 <= q <= r`, as coords in layer `q + r`.
    table: HashMap<(i64, i64), Vec<Vec<SparseVec>>>,
}

impl<'a> Prolonger<'a> {
    fn new(gamma: &'a BracketTensor) -> Self {
        let dim_v = gamma.dim_v();
        let dim_w = gamma.dim_w();

        let minus2 = LayerData::from_maps(
            dim_v,
            Vec::new(),
            Vec::new(),
            vec![vec![SparseVec::new(); dim_w]; dim_v],
            vec![vec![SparseVec::new(); dim_v]; dim_v],
            dim_w,
            dim_v,
            0,
            0,
        );
        // Degree -1 acts on m_{-1} through Γ, into V.
        let f_maps: Vec<Vec<SparseVec>> = (0..dim_w)
            .map(|k| {
                (0..dim_w)
                    .map(|alpha| gamma.apply_basis_sparse(k, alpha))
                    .collect()
            })
            .collect();
        let minus1 = LayerData::from_maps(
            dim_w,
            Vec::new(),
            Vec::new(),
            f_maps,
            vec![vec![SparseVec::new(); dim_v]; dim_w],
            dim_w,
            dim_v,
            dim_v,
            0,
        );
        Prolonger {
            gamma,
            dim_v,
            dim_w,
            layers: vec![minus2, minus1],
            table: HashMap::new(),
        }
    }

    fn ldim(&self, p: i64) -> usize {
        if p < -2 {
            return 0;
        }
        self.layers.get((p + 2) as usize).map_or(0, |l| l.dim)
    }

    fn layer(&self, p: i64) -> &LayerData {
        &self.layers[(p + 2) as usize]
    }

    fn top_computed(&self) -> i64 {
        self.layers.len() as i64 - 3
    }

    /// `[e_k^{(q)}, x]` for `x` in layer `r` given by coords, as coords in
    /// layer `q + r`.
    fn bracket_elem_vec(&self, q: i64, k: usize, r: i64, coords: &SparseVec) -> SparseVec {
        if coords.is_empty() || q + r < -2 {
            return SparseVec::new();
        }
        match r {
            -1 => {
                let mut acc = SparseVec::new();
                for (alpha, c) in coords {
                    let term = &self.layer(q).f_maps[k][*alpha as usize];
                    if !term.is_empty() {
                        acc = axpy(&acc, c, term);
                    }
                }
                acc
            }
            -2 => {
                let mut acc = SparseVec::new();
                for (i, c) in coords {
                    let term = &self.layer(q).h_maps[k][*i as usize];
                    if !term.is_empty() {
                        acc = axpy(&acc, c, term);
                    }
                }
                acc
            }
            _ if q <= r => {
                let rows = &self.table[&(q, r)][k];
                let mut acc = SparseVec::new();
                for (l, c) in coords {
                    let term = &rows[*l as usize];
                    if !term.is_empty() {
                        acc = axpy(&acc, c, term);
                    }
                }
                acc
            }
            _ => {
                // [e^q_k, x_l] = -(-1)^{qr}[x_l, e^q_k]
                let keep_sign = q % 2 != 0 && r % 2 != 0;
                let rows = &self.table[&(r, q)];
                let mut acc = SparseVec::new();
                for (l, c) in coords {
                    let term = &rows[*l as usize][k];
                    if !term.is_empty() {
                        let c = if keep_sign { c.clone() } else { c.neg() };
                        acc = axpy(&acc, &c, term);
                    }
                }
                acc
            }
        }
    }

    /// Exact kernel of the super-Leibniz conditions in degree `p >= 0`.
    fn solve_layer(&self, p: i64) -> (Vec<SparseVec>, Vec<u32>) {
        let n_f = self.ldim(p - 1);
        let n_h = self.ldim(p - 2);
        let w = self.dim_w;
        let d = self.dim_v;
        let f_cols = n_f * w;
        let ncols = f_cols + n_h * d;
        if ncols == 0 {
            return (Vec::new(), Vec::new());
        }
        let f_at = |k: usize, alpha: usize| (k * w + alpha) as u32;
        let h_at = |k: usize, i: usize| (f_cols + k * d + i) as u32;

        fn push(acc: &mut BTreeMap<u32, ExactScalar>, col: u32, v: ExactScalar) {
            if v.is_zero() {
                return;
            }
            acc.entry(col).and_modify(|e| *e = e.add(&v)).or_insert(v);
        }
        fn flush(acc: &mut BTreeMap<u32, ExactScalar>, red: &mut RowReducer) {
            let row: SparseVec = acc
                .iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (*c, v.clone()))
                .collect();
            acc.clear();
            red.add_row(row);
        }

        let mut red = RowReducer::new(ncols);
        let mut acc: BTreeMap<u32, ExactScalar> = BTreeMap::new();

        // [h(v),u] = [h(u),v] in layer p-4.
        if self.ldim(p - 4) > 0 && n_h > 0 {
            let below = self.layer(p - 2);
            for i in 0..d {
                for j in i + 1..d {
                    for t in 0..self.ldim(p - 4) {
                        for (k, c) in &below.v_by_slot[j][t] {
                            push(&mut acc, h_at(*k as usize, i), c.clone());
                        }
                        for (k, c) in &below.v_by_slot[i][t] {
                            push(&mut acc, h_at(*k as usize, j), c.neg());
                        }
                        flush(&mut acc, &mut red);
                    }
                }
            }
        }

        // [f(x),v] = [h(v),x] in layer p-3.
        if self.ldim(p - 3) > 0 {
            let below_f = self.layer(p - 1);
            let below_h = self.layer(p - 2);
            for alpha in 0..w {
                for i in 0..d {
                    for t in 0..self.ldim(p - 3) {
                        for (k, c) in &below_f.v_by_slot[i][t] {
                            push(&mut acc, f_at(*k as usize, alpha), c.clone());
                        }
                        for (k, c) in &below_h.w_by_slot[alpha][t] {
                            push(&mut acc, h_at(*k as usize, i), c.neg());
                        }
                        flush(&mut acc, &mut red);
                    }
                }
            }
        }

        // h(Γ(x,y)) = [f(x),y] + [f(y),x] in layer p-2.
        if self.ldim(p - 2) > 0 {
            let below_f = self.layer(p - 1);
            for alpha in 0..w {
                for beta in alpha..w {
                    for t in 0..self.ldim(p - 2) {
                        if n_h > 0 {
                            for i in 0..d {
                                let g = self.gamma.get(i, alpha, beta);
                                if !g.is_zero() {
                                    push(&mut acc, h_at(t, i), g.clone());
                                }
                            }
                        }
                        for (k, c) in &below_f.w_by_slot[beta][t] {
                            push(&mut acc, f_at(*k as usize, alpha), c.neg());
                        }
                        for (k, c) in &below_f.w_by_slot[alpha][t] {
                            push(&mut acc, f_at(*k as usize, beta), c.neg());
                        }
                        flush(&mut acc, &mut red);
                    }
                }
            }
        }

        let pivot: std::collections::BTreeSet<u32> =
            red.pivot_columns().into_iter().collect();
        let free = (0..ncols as u32).filter(|c| !pivot.contains(c)).collect();
        (red.kernel_basis(), free)
    }

    fn install_layer(&mut self, p: i64, kernel: Vec<SparseVec>, free: Vec<u32>) {
        let n_f = self.ldim(p - 1);
        let n_h = self.ldim(p - 2);
        let w = self.dim_w;
        let d = self.dim_v;
        let f_cols = n_f * w;
        let dim = kernel.len();
        let mut f_maps = vec![vec![SparseVec::new(); w]; dim];
        let mut h_maps = vec![vec![SparseVec::new(); d]; dim];
        for (k, veck) in kernel.iter().enumerate() {
            for (col, c) in veck {
                let col = *col as usize;
                if col < f_cols {
                    f_maps[k][col % w].push(((col / w) as u32, c.clone()));
                } else {
                    let rest = col - f_cols;
                    h_maps[k][rest % d].push(((rest / d) as u32, c.clone()));
                }
            }
        }
        for per in f_maps.iter_mut().chain(h_maps.iter_mut()) {
            for v in per {
                v.sort_by_key(|(t, _)| *t);
            }
        }
        self.layers.push(LayerData::from_maps(
            dim, kernel, free, f_maps, h_maps, w, d, n_f, n_h,
        ));
    }

    /// Transitivity: the `f`-parts of the layer basis are independent.
    fn layer_transitive(&self, p: i64) -> bool {
        let layer = self.layer(p);
        let f_cols = self.ldim(p - 1) * self.dim_w;
        let mut red = RowReducer::new(f_cols);
        for veck in &layer.elements {
            let f_part: SparseVec = veck
                .iter()
                .filter(|(c, _)| (*c as usize) < f_cols)
                .cloned()
                .collect();
            if !red.add_row(f_part) {
                return false;
            }
        }
        true
    }

    /// Faithfulness on `m_{-2}`: the `h`-parts are independent.
    fn layer_v_faithful(&self, p: i64) -> bool {
        let layer = self.layer(p);
        let f_cols = (self.ldim(p - 1) * self.dim_w) as u32;
        let mut red = RowReducer::new(self.ldim(p - 2) * self.dim_v);
        for veck in &layer.elements {
            let h_part: SparseVec = veck
                .iter()
                .filter(|(c, _)| *c >= f_cols)
                .map(|(c, v)| (c - f_cols, v.clone()))
                .collect();
            if !red.add_row(h_part) {
                return false;
            }
        }
        true
    }

    /// Computes `[g_q, g_r]` for all `q <= r` with `q + r = total`,
    /// expressing every value over the target layer basis.
    fn extend_brackets(&mut self, total: i64) -> Result<(), TanakaError> {
        let mut q = 0;
        while 2 * q <= total {
            let r = total - q;
            let nq = self.ldim(q);
            let nr = self.ldim(r);
            if nq == 0 || nr == 0 {
                self.table
                    .insert((q, r), vec![vec![SparseVec::new(); nr]; nq]);
                q += 1;
                continue;
            }
            let sign_flip = q % 2 != 0 && r % 2 != 0;
            let n_f_target = self.ldim(total - 1);
            let f_cols = n_f_target * self.dim_w;
            let mut rows = vec![vec![SparseVec::new(); nr]; nq];
            for k in 0..nq {
                let lstart = if q == r { k } else { 0 };
                for l in lstart..nr {
                    let mut flat: SparseVec = Vec::new();
                    let comb_sign = if sign_flip {
                        ExactScalar::one()
                    } else {
                        ExactScalar::from_int(-1)
                    };
                    for alpha in 0..self.dim_w {
                        let chi_x = &self.layer(r).f_maps[l][alpha];
                        let mut val = self.bracket_elem_vec(q, k, r - 1, chi_x);
                        let psi_x = &self.layer(q).f_maps[k][alpha];
                        let other = self.bracket_elem_vec(r, l, q - 1, psi_x);
                        val = axpy(&val, &comb_sign, &other);
                        for (t, v) in val {
                            flat.push(((t as usize * self.dim_w + alpha) as u32, v));
                        }
                    }
                    for i in 0..self.dim_v {
                        let chi_v = &self.layer(r).h_maps[l][i];
                        let mut val = self.bracket_elem_vec(q, k, r - 2, chi_v);
                        let psi_v = &self.layer(q).h_maps[k][i];
                        let other = self.bracket_elem_vec(r, l, q - 2, psi_v);
                        val = axpy(&val, &comb_sign, &other);
                        for (t, v) in val {
                            flat.push(((f_cols + t as usize * self.dim_v + i) as u32, v));
                        }
                    }
                    flat.sort_by_key(|(c, _)| *c);
                    let coords: SparseVec = if total > self.top_computed() {
                        if !flat.is_empty() {
                            return Err(TanakaError::ClosureFailure(q, r));
                        }
                        Vec::new()
                    } else {
                        match layer_coords_impl(self.layer(total), &flat) {
                            Some(c) => c
                                .into_iter()
                                .enumerate()
                                .filter(|(_, v)| !v.is_zero())
                                .map(|(t, v)| (t as u32, v))
                                .collect(),
                            None => return Err(TanakaError::ClosureFailure(q, r)),
                        }
                    };
                    if q == r && l != k {
                        let mirrored: SparseVec = coords
                            .iter()
                            .map(|(t, v)| (*t, if sign_flip { v.clone() } else { v.neg() }))
                            .collect();
                        rows[l][k] = mirrored;
                    }
                    rows[k][l] = coords;
                }
            }
            self.table.insert((q, r), rows);
            q += 1;
        }
        Ok(())
    }
}

/// Computes the maximal transitive prolongation of the depth-2 algebra with
/// odd bracket `gamma`, up to `opts.max_degree`.
pub fn maximal_prolongation(
    gamma: &BracketTensor,
    opts: &ProlongationOptions,
) -> Result<ProlongationResult, TanakaError> {
    assert!(opts.max_degree >= 2, "max_degree must be at least 2");
    assert!(gamma.is_symmetric(), "bracket tensor must be symmetric");
    let mut pro = Prolonger::new(gamma);
    let mut terminated = false;
    let mut transitivity_ok = true;
    let mut v_faithfulness_ok = true;

    let mut p = 0i64;
    loop {
        let (kernel, free) = pro.solve_layer(p);
        pro.install_layer(p, kernel, free);
        if p >= 1 && pro.ldim(p) > 0 {
            transitivity_ok &= pro.layer_transitive(p);
            if pro.dim_v >= 3 {
                v_faithfulness_ok &= pro.layer_v_faithful(p);
            }
        }
        pro.extend_brackets(p)?;
        if p >= 1 && pro.ldim(p) == 0 {
            terminated = true;
            break;
        }
        if p == opts.max_degree {
            break;
        }
        p += 1;
    }
    let top = pro.top_computed();

    if terminated {
        // All remaining totals must express over zero layers.
        for total in top + 1..=2 * top {
            pro.extend_brackets(total)?;
        }
        if opts.verify_extra_layer {
            let (kernel, _) = pro.solve_layer(top + 1);
            if !kernel.is_empty() {
                return Err(TanakaError::TerminationFailure(top + 1));
            }
        }
    }

    let truncation = if terminated { None } else { Some(top) };
    let dim_v = pro.dim_v;
    let dim_w = pro.dim_w;

    let mut basis = Vec::new();
    for i in 0..dim_v {
        basis.push(BasisElement {
            label: format!("v{}", i + 1),
            degree: -2,
        });
    }
    for a in 0..dim_w {
        basis.push(BasisElement {
            label: format!("s{}", a + 1),
            degree: -1,
        });
    }
    for deg in 0..=top {
        for k in 0..pro.ldim(deg) {
            basis.push(BasisElement {
                label: format!("g{}_{}", deg, k + 1),
                degree: deg,
            });
        }
    }
    let mut alg = GradedSuperalgebra::new(basis, truncation);

    let mut offsets: HashMap<i64, usize> = HashMap::new();
    let mut run = 0;
    for deg in -2..=top {
        offsets.insert(deg, run);
        run += pro.ldim(deg);
    }
    let at = |deg: i64, k: usize| offsets[&deg] + k;

    for a in 0..dim_w {
        for b in a..dim_w {
            let val: SparseVec = gamma
                .apply_basis_sparse(a, b)
                .into_iter()
                .map(|(i, c)| (at(-2, i as usize) as u32, c))
                .collect();
            alg.set_bracket(at(-1, a), at(-1, b), val);
        }
    }

    for deg in 0..=top {
        let even = deg % 2 == 0;
        for k in 0..pro.ldim(deg) {
            let e_idx = at(deg, k);
            for alpha in 0..dim_w {
                let val = &pro.layer(deg).f_maps[k][alpha];
                if val.is_empty() {
                    continue;
                }
                // [s_α, e] = -(-1)^{deg}[e, s_α]
                let stored: SparseVec = val
                    .iter()
                    .map(|(t, c)| {
                        let c = if even { c.neg() } else { c.clone() };
                        (at(deg - 1, *t as usize) as u32, c)
                    })
                    .collect();
                alg.set_bracket(at(-1, alpha), e_idx, stored);
            }
            for i in 0..dim_v {
                let val = &pro.layer(deg).h_maps[k][i];
                if val.is_empty() {
                    continue;
                }
                // [v_i, e] = -[e, v_i]
                let stored: SparseVec = val
                    .iter()
                    .map(|(t, c)| (at(deg - 2, *t as usize) as u32, c.neg()))
                    .collect();
                alg.set_bracket(at(-2, i), e_idx, stored);
            }
        }
    }

    for q in 0..=top {
        for r in q..=top {
            let Some(rows) = pro.table.get(&(q, r)) else {
                continue;
            };
            for k in 0..pro.ldim(q) {
                let lstart = if q == r { k } else { 0 };
                for l in lstart..pro.ldim(r) {
                    let val: SparseVec = rows[k][l]
                        .iter()
                        .map(|(t, c)| (at(q + r, *t as usize) as u32, c.clone()))
                        .collect();
                    alg.set_bracket(at(q, k), at(r, l), val);
                }
            }
        }
    }

    let jacobi = alg.check_super_jacobi();
    Ok(ProlongationResult {
        algebra: alg,
        terminated,
        max_degree: opts.max_degree,
        dim_v,
        dim_w,
        layers: pro.layers,
        jacobi,
        transitivity_ok,
        v_faithfulness_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supertranslation::build_supertranslation;

    fn prolong(d: usize, n: usize) -> ProlongationResult {
        let m = build_supertranslation(d, n, None, 0).unwrap();
        maximal_prolongation(m.bracket(), &ProlongationOptions::default()).unwrap()
    }

    #[test]
    fn osp_1_4_graded_dimensions() {
        let r = prolong(3, 1);
        assert!(r.terminated());
        let dims: Vec<(i64, usize)> = r.graded_dims().into_iter().collect();
        assert_eq!(dims, vec![(-2, 3), (-1, 2), (0, 4), (1, 2), (2, 3)]);
        assert!(r.jacobi().ok);
        assert!(r.transitivity_ok());
        assert!(r.v_faithfulness_ok());
    }

    #[test]
    fn degree_zero_dimensions_match_theory() {
        // dim g0 = dim so(V) + 1 + dim h0.
        assert_eq!(prolong(3, 1).layer_dim(0), 4);
        assert_eq!(prolong(3, 2).layer_dim(0), 6);
        assert_eq!(prolong(4, 1).layer_dim(0), 8);
    }

    #[test]
    fn vanishing_case_terminates_at_one() {
        let r = prolong(6, 1);
        assert!(r.terminated());
        assert_eq!(r.layer_dim(1), 0);
        assert!(r.jacobi().ok);
    }

    #[test]
    fn infinite_case_is_capped_with_contact_growth() {
        let m = build_supertranslation(1, 1, None, 0).unwrap();
        let opts = ProlongationOptions {
            max_degree: 6,
            verify_extra_layer: false,
        };
        let r = maximal_prolongation(m.bracket(), &opts).unwrap();
        assert!(!r.terminated());
        for p in -2..=6 {
            assert_eq!(r.layer_dim(p), 1, "K(1|1) dims at degree {p}");
        }
        assert!(r.jacobi().ok);
        assert_eq!(r.algebra().truncation(), Some(6));
    }

    #[test]
    fn extra_layer_soundness_check_runs() {
        let m = build_supertranslation(3, 1, None, 0).unwrap();
        let opts = ProlongationOptions {
            max_degree: 12,
            verify_extra_layer: true,
        };
        let r = maximal_prolongation(m.bracket(), &opts).unwrap();
        assert!(r.terminated());
    }

    #[test]
    fn scaling_pair_is_a_degree_zero_element() {
        let r = prolong(3, 2);
        let w = r.dim_w();
        let d = r.dim_v();
        let mut flat: SparseVec = Vec::new();
        for alpha in 0..w {
            flat.push(((alpha * w + alpha) as u32, ExactScalar::from_int(-1)));
        }
        for i in 0..d {
            flat.push(((w * w + i * d + i) as u32, ExactScalar::from_int(-2)));
        }
        flat.sort_by_key(|(c, _)| *c);
        assert!(r.layer_coords(0, &flat).is_some());
    }
}
