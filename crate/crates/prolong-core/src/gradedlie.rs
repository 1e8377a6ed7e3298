//! Structure-constant container for consistently Z-graded Lie superalgebras.
//!
//! Parity is degree mod 2 (consistent grading), super-antisymmetry is built
//! in: constants are stored only for pairs `a <= b` and the other half is
//! derived as `[y,x] = -(-1)^{|x||y|}[x,y]`. Brackets land in the degree
//! `deg x + deg y` block by construction; entries outside it are rejected at
//! insertion.
//!
//! An algebra may be a truncation of an infinite-dimensional one (the
//! `dim V <= 2` prolongations). Brackets whose target degree exceeds the
//! truncation bound are unavailable rather than zero, and the Jacobi checker
//! skips triples that would need them.

use std::collections::BTreeMap;

use serde_json::json;

use crate::exactlin::{axpy, ExactScalar, RowReducer, SparseVec};

/// One labeled basis element of a graded superalgebra.
#[derive(Clone, Debug)]
pub struct BasisElement {
    pub label: String,
    pub degree: i64,
}

impl BasisElement {
    pub fn parity(&self) -> u8 {
        (self.degree.rem_euclid(2)) as u8
    }
}

/// Outcome of a super-Jacobi sweep.
#[derive(Clone, Debug)]
pub struct JacobiReport {
    pub ok: bool,
    /// First violating basis triple, when any.
    pub violation: Option<(usize, usize, usize)>,
    pub triples_checked: usize,
}

/// A finite-dimensional consistently Z-graded Lie superalgebra given by
/// exact structure constants.
pub struct GradedSuperalgebra {
    basis: Vec<BasisElement>,
    ranges: BTreeMap<i64, std::ops::Range<usize>>,
    table: BTreeMap<(u32, u32), SparseVec>,
    truncation: Option<i64>,
}

impl GradedSuperalgebra {
    /// Creates the algebra shell; brackets are installed with
    /// [`GradedSuperalgebra::set_bracket`]. The basis must be sorted by
    /// degree.
    pub fn new(basis: Vec<BasisElement>, truncation: Option<i64>) -> Self {
        assert!(
            basis.windows(2).all(|w| w[0].degree <= w[1].degree),
            "basis must be sorted by degree"
        );
        let mut ranges: BTreeMap<i64, std::ops::Range<usize>> = BTreeMap::new();
        for (k, b) in basis.iter().enumerate() {
            ranges
                .entry(b.degree)
                .and_modify(|r| r.end = k + 1)
                .or_insert(k..k + 1);
        }
        GradedSuperalgebra {
            basis,
            ranges,
            table: BTreeMap::new(),
            truncation,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, k: usize) -> i64 {
        self.basis[k].degree
    }

    pub fn parity(&self, k: usize) -> u8 {
        self.basis[k].parity()
    }

    pub fn truncation(&self) -> Option<i64> {
        self.truncation
    }

    /// Index range of a degree block.
    pub fn degree_range(&self, degree: i64) -> std::ops::Range<usize> {
        self.ranges.get(&degree).cloned().unwrap_or(0..0)
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.ranges.keys().copied().collect()
    }

    /// Exact per-degree dimensions.
    pub fn graded_dimensions(&self) -> BTreeMap<i64, usize> {
        self.ranges.iter().map(|(d, r)| (*d, r.len())).collect()
    }

    /// Installs `[x_a, x_b]` for `a <= b`. Entries must lie in the target
    /// degree block.
    pub fn set_bracket(&mut self, a: usize, b: usize, value: SparseVec) {
        assert!(a <= b, "store brackets for a <= b only");
        let target = self.basis[a].degree + self.basis[b].degree;
        if let Some(t) = self.truncation {
            assert!(
                target <= t,
                "bracket beyond the truncation degree is unavailable"
            );
        }
        let range = self.degree_range(target);
        for (c, _) in &value {
            assert!(
                range.contains(&(*c as usize)),
                "bracket entry outside the degree {target} block"
            );
        }
        if a == b && self.parity(a) == 0 {
            assert!(value.is_empty(), "[x,x] must vanish for even x");
        }
        if value.is_empty() {
            self.table.remove(&(a as u32, b as u32));
        } else {
            self.table.insert((a as u32, b as u32), value);
        }
    }

    /// Whether `[x_a, x_b]` is representable (not cut off by a truncation).
    pub fn bracket_available(&self, a: usize, b: usize) -> bool {
        match self.truncation {
            Some(t) => self.basis[a].degree + self.basis[b].degree <= t,
            None => true,
        }
    }

    /// `[x_a, x_b]` for basis elements, in either order.
    pub fn bracket_basis(&self, a: usize, b: usize) -> SparseVec {
        assert!(
            self.bracket_available(a, b),
            "bracket beyond the truncation degree"
        );
        let (lo, hi, swapped) = if a <= b { (a, b, false) } else { (b, a, true) };
        let stored = self
            .table
            .get(&(lo as u32, hi as u32))
            .cloned()
            .unwrap_or_default();
        if !swapped {
            return stored;
        }
        // [y,x] = -(-1)^{|x||y|}[x,y]
        if self.parity(a) == 1 && self.parity(b) == 1 {
            stored
        } else {
            stored.into_iter().map(|(c, v)| (c, v.neg())).collect()
        }
    }

    /// Bilinear extension of the structure table to sparse elements.
    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (a, xa) in x {
            for (b, yb) in y {
                let term = self.bracket_basis(*a as usize, *b as usize);
                if term.is_empty() {
                    continue;
                }
                let c = xa.mul(yb);
                acc = axpy(&acc, &c, &term);
            }
        }
        acc
    }

    fn bracket_basis_vec(&self, a: usize, v: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (b, coeff) in v {
            let term = self.bracket_basis(a, *b as usize);
            if !term.is_empty() {
                acc = axpy(&acc, coeff, &term);
            }
        }
        acc
    }

    /// Verifies `[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]` over basis
    /// triples, skipping triples a truncation makes unrepresentable.
    pub fn check_super_jacobi(&self) -> JacobiReport {
        let n = self.dim();
        let mut checked = 0;
        for a in 0..n {
            for b in a..n {
                if !self.bracket_available(a, b) {
                    continue;
                }
                for c in b..n {
                    if let Some(t) = self.truncation {
                        let (da, db, dc) = (self.degree(a), self.degree(b), self.degree(c));
                        if da + db + dc > t || db + dc > t || da + dc > t {
                            continue;
                        }
                    }
                    checked += 1;
                    let bc = self.bracket_basis(b, c);
                    let lhs = self.bracket_basis_vec(a, &bc);
                    let ab = self.bracket_basis(a, b);
                    let mut rhs: SparseVec = Vec::new();
                    for (k, v) in &ab {
                        let term = self.bracket_basis(*k as usize, c);
                        if !term.is_empty() {
                            rhs = axpy(&rhs, v, &term);
                        }
                    }
                    let ac = self.bracket_basis(a, c);
                    let sign = if self.parity(a) == 1 && self.parity(b) == 1 {
                        ExactScalar::from_int(-1)
                    } else {
                        ExactScalar::one()
                    };
                    let bac = self.bracket_basis_vec(b, &ac);
                    rhs = axpy(&rhs, &sign, &bac);
                    let diff = axpy(&lhs, &ExactScalar::from_int(-1), &rhs);
                    if !diff.is_empty() {
                        return JacobiReport {
                            ok: false,
                            violation: Some((a, b, c)),
                            triples_checked: checked,
                        };
                    }
                }
            }
        }
        JacobiReport {
            ok: true,
            violation: None,
            triples_checked: checked,
        }
    }

    /// Degree of a homogeneous sparse element, if homogeneous.
    pub fn homogeneous_degree(&self, v: &SparseVec) -> Option<i64> {
        let mut deg = None;
        for (c, _) in v {
            let d = self.degree(*c as usize);
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Smallest ad-invariant subspace containing the (homogeneous) seed.
    /// Returns an echelon basis of homogeneous vectors.
    pub fn ideal_closure(&self, seed: &[SparseVec]) -> Vec<SparseVec> {
        let mut red = RowReducer::new(self.dim());
        let mut frontier: Vec<SparseVec> = Vec::new();
        for v in seed {
            assert!(
                v.is_empty() || self.homogeneous_degree(v).is_some(),
                "ideal seed must be homogeneous"
            );
            if red.add_row(v.clone()) {
                frontier.push(v.clone());
            }
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for a in 0..self.dim() {
                    let all_available =
                        w.iter().all(|(b, _)| self.bracket_available(a, *b as usize));
                    if !all_available {
                        continue;
                    }
                    let v = self.bracket_basis_vec(a, w);
                    if !v.is_empty() && red.add_row(v.clone()) {
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        red.row_space_basis()
    }

    /// Graded dimensions of a subspace given by homogeneous basis vectors.
    pub fn subspace_graded_dims(&self, basis: &[SparseVec]) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for v in basis {
            let d = self
                .homogeneous_degree(v)
                .expect("subspace basis must be homogeneous");
            *out.entry(d).or_insert(0) += 1;
        }
        out
    }

    /// Structure-constant export with exact scalar strings.
    pub fn to_json(&self) -> serde_json::Value {
        let basis: Vec<_> = self
            .basis
            .iter()
            .map(|b| {
                json!({
                    "label": b.label,
                    "degree": b.degree,
                    "parity": b.parity(),
                })
            })
            .collect();
        let brackets: Vec<_> = self
            .table
            .iter()
            .map(|((a, b), v)| {
                let entries: Vec<_> =
                    v.iter().map(|(c, s)| json!([c, s.to_string()])).collect();
                json!([a, b, entries])
            })
            .collect();
        json!({ "basis": basis, "brackets": brackets })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> ExactScalar {
        ExactScalar::from_int(v)
    }

    fn sl2() -> GradedSuperalgebra {
        // H, E, F in degree 0: [H,E]=2E, [H,F]=-2F, [E,F]=H.
        let basis = vec![
            BasisElement { label: "H".into(), degree: 0 },
            BasisElement { label: "E".into(), degree: 0 },
            BasisElement { label: "F".into(), degree: 0 },
        ];
        let mut g = GradedSuperalgebra::new(basis, None);
        g.set_bracket(0, 1, vec![(1, s(2))]);
        g.set_bracket(0, 2, vec![(2, s(-2))]);
        g.set_bracket(1, 2, vec![(0, s(1))]);
        g
    }

    #[test]
    fn abelian_is_a_lie_superalgebra() {
        let basis = (0..3)
            .map(|k| BasisElement { label: format!("x{k}"), degree: 0 })
            .collect();
        let g = GradedSuperalgebra::new(basis, None);
        assert!(g.check_super_jacobi().ok);
        assert_eq!(g.graded_dimensions()[&0], 3);
    }

    #[test]
    fn sl2_jacobi_holds_and_perturbation_is_caught() {
        let g = sl2();
        assert!(g.check_super_jacobi().ok);

        let mut bad = sl2();
        bad.set_bracket(0, 1, vec![(1, s(3))]);
        let report = bad.check_super_jacobi();
        assert!(!report.ok);
        assert!(report.violation.is_some());
    }

    #[test]
    fn toy_supertranslation_brackets() {
        // V = <v> in degree -2, W = <s1, s2> odd in degree -1,
        // [s_i, s_j] = δ_ij v.
        let basis = vec![
            BasisElement { label: "v".into(), degree: -2 },
            BasisElement { label: "s1".into(), degree: -1 },
            BasisElement { label: "s2".into(), degree: -1 },
        ];
        let mut g = GradedSuperalgebra::new(basis, None);
        g.set_bracket(1, 1, vec![(0, s(1))]);
        g.set_bracket(2, 2, vec![(0, s(1))]);
        assert!(g.check_super_jacobi().ok);
        // Odd brackets are symmetric.
        assert_eq!(g.bracket_basis(1, 1), vec![(0, s(1))]);
        assert_eq!(g.bracket_basis(2, 1), g.bracket_basis(1, 2));
        // [v, s] and [v, v] vanish.
        assert!(g.bracket_basis(0, 1).is_empty());
        assert!(g.bracket_basis(0, 0).is_empty());
    }

    #[test]
    fn ideal_closure_is_idempotent_and_monotone() {
        let g = sl2();
        assert!(g.ideal_closure(&[]).is_empty());
        let whole = g.ideal_closure(&[vec![(1, s(1))]]);
        assert_eq!(whole.len(), 3);
        let again = g.ideal_closure(&whole);
        assert_eq!(again.len(), 3);
    }

    #[test]
    fn export_has_sorted_brackets() {
        let g = sl2();
        let v = g.to_json();
        assert_eq!(v["basis"].as_array().unwrap().len(), 3);
        assert_eq!(v["brackets"][0][0], 0);
        assert_eq!(v["brackets"][0][1], 1);
    }
}
