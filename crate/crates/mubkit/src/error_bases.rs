//! Unitary error bases and nice error bases: the generalized-Pauli basis for
//! prime powers, its Weyl-Heisenberg analogue for composite dimensions, and
//! the verifiers for trace orthogonality and the nice-basis axioms.

use num_complex::Complex64;
use std::fmt;

use crate::error::{Error, Result};
use crate::finite::{factorize, lcm, AbelianGroupSpec};
use crate::linalg::{equal_up_to_global_phase, is_unitary, trace_inner, DenseMatrix};
use crate::monomial::{composite_pauli, pauli, snap_to_root, MonomialMatrix, PauliLabel};
use crate::util::parallel_map;

/// One element of an error basis: exact monomial where the construction
/// permits, dense otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisElement {
    Monomial(MonomialMatrix),
    Dense(DenseMatrix),
}

impl BasisElement {
    pub fn dim(&self) -> usize {
        match self {
            BasisElement::Monomial(m) => m.dim(),
            BasisElement::Dense(m) => m.rows(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            BasisElement::Monomial(m) => m.to_dense(),
            BasisElement::Dense(m) => m.clone(),
        }
    }

    pub fn as_monomial(&self) -> Option<&MonomialMatrix> {
        match self {
            BasisElement::Monomial(m) => Some(m),
            BasisElement::Dense(_) => None,
        }
    }

    pub fn adjoint(&self) -> BasisElement {
        match self {
            BasisElement::Monomial(m) => BasisElement::Monomial(m.adjoint()),
            BasisElement::Dense(m) => BasisElement::Dense(m.adjoint()),
        }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        match self {
            BasisElement::Monomial(m) => m.is_identity(),
            BasisElement::Dense(m) => {
                m.is_square() && m.max_abs_diff(&DenseMatrix::identity(m.rows())) <= tol
            }
        }
    }

    /// Trace is exactly zero (cyclotomic test) for monomials, within `tol`
    /// for dense elements.
    pub fn is_traceless(&self, tol: f64) -> bool {
        match self {
            BasisElement::Monomial(m) => m.trace().is_zero(),
            BasisElement::Dense(m) => m.trace().norm() <= tol,
        }
    }

    pub fn commutes_with(&self, other: &BasisElement, tol: f64) -> Result<bool> {
        match (self, other) {
            (BasisElement::Monomial(a), BasisElement::Monomial(b)) => a.commutes_with(b),
            _ => {
                let c = crate::linalg::commutator(&self.to_dense(), &other.to_dense())?;
                Ok(c.max_abs() <= tol)
            }
        }
    }

    /// `tr(self^dag other)`, exact for monomial pairs.
    pub fn trace_inner_is(&self, other: &BasisElement, want: i64, tol: f64) -> Result<bool> {
        match (self, other) {
            (BasisElement::Monomial(a), BasisElement::Monomial(b)) => {
                Ok(a.adjoint().mul(b)?.trace().equals_integer(want))
            }
            _ => {
                let t = trace_inner(&self.to_dense(), &other.to_dense())?;
                Ok((t - Complex64::new(want as f64, 0.0)).norm() <= tol)
            }
        }
    }
}

/// `n^2` unitaries orthogonal under the trace inner product, optionally
/// indexed by an abelian group of order `n^2` with the identity matrix at
/// the identity element.
#[derive(Debug, Clone)]
pub struct UnitaryErrorBasis {
    n: usize,
    elems: Vec<BasisElement>,
    index: Option<IndexMap>,
}

#[derive(Debug, Clone)]
pub struct IndexMap {
    group: AbelianGroupSpec,
    /// labels[i] is the group element indexing elems[i].
    labels: Vec<Vec<u32>>,
}

impl IndexMap {
    pub fn group(&self) -> &AbelianGroupSpec {
        &self.group
    }

    pub fn labels(&self) -> &[Vec<u32>] {
        &self.labels
    }
}

impl UnitaryErrorBasis {
    pub fn new(n: usize, elems: Vec<BasisElement>) -> Result<Self> {
        if elems.len() != n * n {
            return Err(Error::WrongCount { expected: n * n, got: elems.len() });
        }
        if elems.iter().any(|e| e.dim() != n) {
            return Err(Error::InvalidInput("element dimension mismatch".into()));
        }
        Ok(UnitaryErrorBasis { n, elems, index: None })
    }

    pub fn new_indexed(
        n: usize,
        group: AbelianGroupSpec,
        elems: Vec<(Vec<u32>, BasisElement)>,
    ) -> Result<Self> {
        if group.order() != (n * n) as u64 {
            return Err(Error::InvalidInput("index group order must be n^2".into()));
        }
        let (labels, elems): (Vec<_>, Vec<_>) = elems.into_iter().unzip();
        let mut basis = Self::new(n, elems)?;
        basis.index = Some(IndexMap { group, labels });
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elems
    }

    pub fn index_map(&self) -> Option<&IndexMap> {
        self.index.as_ref()
    }

    pub fn element_by_label(&self, label: &[u32]) -> Option<&BasisElement> {
        let idx = self.index.as_ref()?;
        let pos = idx.labels.iter().position(|l| l == label)?;
        Some(&self.elems[pos])
    }

    /// Trace-orthogonality and unitarity report.
    pub fn verify(&self, tol: f64) -> UebReport {
        verify_ueb(&self.elems, self.n, tol)
    }

    /// Nice-basis verification; `Err(NotIndexed)` without an index map.
    pub fn verify_nice(&self) -> Result<NiceReport> {
        verify_nice(self)
    }
}

/// Verifies that `elems` is a unitary error basis for dimension `n`:
/// exactly `n^2` unitary elements with `tr(U_k^dag U_l) = n delta_{k,l}`.
pub fn verify_ueb(elems: &[BasisElement], n: usize, tol: f64) -> UebReport {
    let mut report = UebReport::default();
    if elems.len() != n * n {
        report.wrong_count = Some((n * n, elems.len()));
        return report;
    }
    for (k, e) in elems.iter().enumerate() {
        let ok = match e {
            // Monomial matrices are unitary by construction.
            BasisElement::Monomial(m) => m.dim() == n,
            BasisElement::Dense(m) => m.rows() == n && is_unitary(m, tol),
        };
        if !ok {
            report.non_unitary.push(k);
        }
    }
    let m = elems.len();
    let pair_rows = parallel_map(m, |k| {
        let mut bad = Vec::new();
        for l in k..m {
            let want = if k == l { n as i64 } else { 0 };
            match elems[k].trace_inner_is(&elems[l], want, tol * n as f64) {
                Ok(true) => {}
                _ => {
                    let value = trace_inner(&elems[k].to_dense(), &elems[l].to_dense())
                        .map(|t| t.norm())
                        .unwrap_or(f64::NAN);
                    bad.push((k, l, value));
                }
            }
        }
        bad
    });
    report.bad_pairs = pair_rows.into_iter().flatten().collect();
    report
}

/// Violations found by [`verify_ueb`]; empty means pass.
#[derive(Debug, Default, Clone)]
pub struct UebReport {
    pub wrong_count: Option<(usize, usize)>,
    pub non_unitary: Vec<usize>,
    /// (k, l, |tr(U_k^dag U_l)|) for pairs violating `n delta`.
    pub bad_pairs: Vec<(usize, usize, f64)>,
}

impl UebReport {
    pub fn pass(&self) -> bool {
        self.wrong_count.is_none() && self.non_unitary.is_empty() && self.bad_pairs.is_empty()
    }
}

impl fmt::Display for UebReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass() {
            return write!(f, "unitary error basis: pass");
        }
        if let Some((want, got)) = self.wrong_count {
            writeln!(f, "wrong element count: expected {want}, got {got}")?;
        }
        for k in &self.non_unitary {
            writeln!(f, "element {k} is not unitary")?;
        }
        for (k, l, v) in self.bad_pairs.iter().take(16) {
            writeln!(f, "pair ({k},{l}) violates trace orthogonality: |tr| = {v:.3e}")?;
        }
        if self.bad_pairs.len() > 16 {
            writeln!(f, "... and {} more pairs", self.bad_pairs.len() - 16)?;
        }
        Ok(())
    }
}

/// The phase system `omega(g, h)` of a nice error basis, stored exactly as
/// root-of-unity exponents when every element is monomial.
#[derive(Debug, Clone)]
pub struct Cocycle {
    group: AbelianGroupSpec,
    /// Common root order of all stored phases.
    order: u64,
    /// Exponent at (i, j) = (index of g, index of h), row-major by group index.
    exps: Vec<u64>,
}

impl Cocycle {
    pub fn group(&self) -> &AbelianGroupSpec {
        &self.group
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self, g: &[u32], h: &[u32]) -> u64 {
        let m = self.group.order() as usize;
        let i = self.group.index_of(g) as usize;
        let j = self.group.index_of(h) as usize;
        self.exps[i * m + j]
    }

    pub fn value(&self, g: &[u32], h: &[u32]) -> Complex64 {
        Complex64::from_polar(
            1.0,
            2.0 * std::f64::consts::PI * self.exponent(g, h) as f64 / self.order as f64,
        )
    }

    /// Associativity consistency: `omega(g,h) omega(gh,k) = omega(h,k) omega(g,hk)`
    /// must hold for every triple; checks the given triples exactly.
    pub fn check_triple(&self, g: &[u32], h: &[u32], k: &[u32]) -> bool {
        let gh = self.group.add(g, h);
        let hk = self.group.add(h, k);
        let lhs = (self.exponent(g, h) + self.exponent(&gh, k)) % self.order;
        let rhs = (self.exponent(h, k) + self.exponent(g, &hk)) % self.order;
        lhs == rhs
    }
}

/// Violations of the three nice-basis properties.
#[derive(Debug, Clone)]
pub enum NiceViolation {
    /// The element at the identity label is not the identity matrix.
    IdentityElement,
    /// A non-identity element has nonzero trace.
    NonzeroTrace(Vec<u32>),
    /// `U_g U_h` is not a unimodular multiple of `U_{gh}`.
    ProductLaw(Vec<u32>, Vec<u32>),
}

#[derive(Debug, Clone)]
pub struct NiceReport {
    pub violations: Vec<NiceViolation>,
    pub cocycle: Option<Cocycle>,
}

impl NiceReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty() && self.cocycle.is_some()
    }
}

impl fmt::Display for NiceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass() {
            return write!(f, "nice error basis: pass");
        }
        for v in self.violations.iter().take(16) {
            match v {
                NiceViolation::IdentityElement => {
                    writeln!(f, "element at identity label is not the identity")?
                }
                NiceViolation::NonzeroTrace(g) => writeln!(f, "element {g:?} has nonzero trace")?,
                NiceViolation::ProductLaw(g, h) => {
                    writeln!(f, "product U_{g:?} U_{h:?} is not a phase times U_(g+h)")?
                }
            }
        }
        if self.violations.len() > 16 {
            writeln!(f, "... and {} more", self.violations.len() - 16)?;
        }
        Ok(())
    }
}

/// Checks the three defining properties of a nice error basis and extracts
/// the full cocycle `omega(g, h)` on success.
pub fn verify_nice(basis: &UnitaryErrorBasis) -> Result<NiceReport> {
    let index = basis.index_map().ok_or(Error::NotIndexed)?;
    let group = index.group().clone();
    let m = group.order() as usize;
    let mut by_index: Vec<Option<&BasisElement>> = vec![None; m];
    for (label, elem) in index.labels().iter().zip(basis.elements()) {
        by_index[group.index_of(label) as usize] = Some(elem);
    }
    if by_index.iter().any(|e| e.is_none()) {
        return Err(Error::InvalidInput("index map does not cover the group".into()));
    }
    let elem_at = |i: usize| by_index[i].expect("covered");

    let mut violations = Vec::new();
    let id_idx = group.index_of(&group.identity()) as usize;
    if !elem_at(id_idx).is_identity(1e-9) {
        violations.push(NiceViolation::IdentityElement);
    }
    for i in 0..m {
        if i != id_idx && !elem_at(i).is_traceless(1e-9) {
            violations.push(NiceViolation::NonzeroTrace(group.element(i as u64)));
        }
    }

    // Product law and cocycle extraction. Phases are exact for monomial
    // elements; dense elements fall back to the projective comparison with
    // the phase snapped to a root of unity for storage.
    let mut entries: Vec<Option<(u64, u64)>> = vec![None; m * m];
    for i in 0..m {
        let g = group.element(i as u64);
        for j in 0..m {
            let h = group.element(j as u64);
            let gh_idx = group.index_of(&group.add(&g, &h)) as usize;
            match (elem_at(i), elem_at(j), elem_at(gh_idx)) {
                (BasisElement::Monomial(a), BasisElement::Monomial(b), BasisElement::Monomial(c)) => {
                    let prod = a.mul(b)?;
                    match prod.phase_from(c) {
                        Some((order, exp)) => entries[i * m + j] = Some((order, exp)),
                        None => violations.push(NiceViolation::ProductLaw(g.clone(), h.clone())),
                    }
                }
                (a, b, c) => {
                    // prod = omega * U_{gh}; the comparison returns omega.
                    let prod = a.to_dense().mul(&b.to_dense())?;
                    let phase = equal_up_to_global_phase(&c.to_dense(), &prod, 1e-8)
                        .and_then(|z| snap_to_root(z, 1e-6, crate::monomial::SNAP_ORDER_CAP));
                    match phase {
                        Some((order, exp)) => entries[i * m + j] = Some((order, exp)),
                        None => violations.push(NiceViolation::ProductLaw(g.clone(), h.clone())),
                    }
                }
            }
        }
    }
    let cocycle = if violations.is_empty() {
        let mut order = 1u64;
        for e in entries.iter().flatten() {
            order = lcm(order, e.0);
        }
        let exps = entries
            .into_iter()
            .map(|e| {
                let (o, x) = e.expect("no violation means every entry extracted");
                x * (order / o) % order
            })
            .collect();
        Some(Cocycle { group, order, exps })
    } else {
        None
    };
    Ok(NiceReport { violations, cocycle })
}

/// The nice error basis of tensor products of generalized Pauli matrices,
/// indexed by `Z_p^e x Z_p^e` with the x-part first.
pub fn pauli_basis(p: u64, e: u32) -> Result<UnitaryErrorBasis> {
    if !crate::finite::is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    let n = (p as usize).pow(e);
    let group = AbelianGroupSpec::new(vec![p as u32; 2 * e as usize])?;
    let mut elems = Vec::with_capacity(n * n);
    for idx in 0..group.order() {
        let label = group.element(idx);
        let (x, z) = label.split_at(e as usize);
        let u = pauli(&PauliLabel::new(p as u32, e, x.to_vec(), z.to_vec())?);
        elems.push((label, BasisElement::Monomial(u)));
    }
    UnitaryErrorBasis::new_indexed(n, group, elems)
}

/// The Weyl-Heisenberg basis `{X^x Z^z}` for arbitrary `n >= 2`, indexed by
/// `Z_n x Z_n`. Nice for every `n`; coincides with [`pauli_basis`]`(p, 1)`
/// when `n = p` is prime.
pub fn composite_basis(n: usize) -> Result<UnitaryErrorBasis> {
    if n < 2 {
        return Err(Error::InvalidInput("dimension must be >= 2".into()));
    }
    let group = AbelianGroupSpec::new(vec![n as u32, n as u32])?;
    let mut elems = Vec::with_capacity(n * n);
    for idx in 0..group.order() {
        let label = group.element(idx);
        let u = composite_pauli(n, label[0] as u64, label[1] as u64);
        elems.push((label, BasisElement::Monomial(u)));
    }
    UnitaryErrorBasis::new_indexed(n, group, elems)
}

/// The nice-basis partition bound `min_{p | n} p^{v_p(n)} + 1`: the largest
/// number of maximal commuting classes obtainable from any nice error basis
/// in dimension `n`.
pub fn nice_bound(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, k)| p.pow(k))
        .min()
        .map_or(2, |d| d + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_basis_2_1_elements() {
        let basis = pauli_basis(2, 1).unwrap();
        assert_eq!(basis.elements().len(), 4);
        assert!(basis.element_by_label(&[0, 0]).unwrap().is_identity(1e-12));
        assert!(basis.verify(1e-9).pass());
    }

    #[test]
    fn pauli_basis_3_1_traceless_except_identity() {
        let basis = pauli_basis(3, 1).unwrap();
        assert_eq!(basis.elements().len(), 9);
        let traceless = basis
            .elements()
            .iter()
            .filter(|e| e.is_traceless(1e-12))
            .count();
        assert_eq!(traceless, 8);
        assert!(basis.verify(1e-9).pass());
    }

    #[test]
    fn pauli_basis_2_2_is_tensor_pairs() {
        let basis = pauli_basis(2, 2).unwrap();
        assert_eq!(basis.elements().len(), 16);
        assert_eq!(basis.dim(), 4);
        assert!(basis.verify(1e-9).pass());
    }

    #[test]
    fn non_prime_rejected() {
        assert!(matches!(pauli_basis(6, 1), Err(Error::NonPrime(6))));
    }

    #[test]
    fn verify_catches_duplicate() {
        let x = BasisElement::Monomial(pauli(&PauliLabel::new(2, 1, vec![1], vec![0]).unwrap()));
        let z = BasisElement::Monomial(pauli(&PauliLabel::new(2, 1, vec![0], vec![1]).unwrap()));
        let id = BasisElement::Monomial(MonomialMatrix::identity(2));
        let report = verify_ueb(&[id, x.clone(), z, x], 2, 1e-9);
        assert!(!report.pass());
        assert!(report.bad_pairs.iter().any(|&(k, l, _)| (k, l) == (1, 3)));
    }

    #[test]
    fn verify_catches_non_unitary() {
        let x = BasisElement::Monomial(pauli(&PauliLabel::new(2, 1, vec![1], vec![0]).unwrap()));
        let z = BasisElement::Monomial(pauli(&PauliLabel::new(2, 1, vec![0], vec![1]).unwrap()));
        let id = BasisElement::Monomial(MonomialMatrix::identity(2));
        let d = BasisElement::Dense(
            DenseMatrix::from_rows(vec![
                vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)],
            ])
            .unwrap(),
        );
        let report = verify_ueb(&[id, x, z, d], 2, 1e-9);
        assert!(!report.pass());
        assert_eq!(report.non_unitary, vec![3]);
    }

    #[test]
    fn nice_cocycle_for_qubit_paulis() {
        let basis = pauli_basis(2, 1).unwrap();
        let report = basis.verify_nice().unwrap();
        assert!(report.pass(), "{report}");
        let c = report.cocycle.unwrap();
        // omega((1,0),(0,1)) / omega((0,1),(1,0)) = -1: X and Z anticommute.
        let a = c.value(&[1, 0], &[0, 1]);
        let b = c.value(&[0, 1], &[1, 0]);
        assert!((a / b - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn nice_cocycle_consistency_small_prime_powers() {
        for (p, e) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let basis = pauli_basis(p, e).unwrap();
            let report = basis.verify_nice().unwrap();
            assert!(report.pass(), "pauli_basis({p},{e})");
            let c = report.cocycle.unwrap();
            let g = c.group().clone();
            let m = g.order();
            if m <= 81 {
                for i in 0..m {
                    for j in 0..m {
                        for k in 0..m {
                            assert!(c.check_triple(
                                &g.element(i),
                                &g.element(j),
                                &g.element(k)
                            ));
                        }
                    }
                }
            } else {
                let mut rng = crate::linalg::SplitMix64::new(11);
                for _ in 0..10_000 {
                    let i = rng.next_u64() % m;
                    let j = rng.next_u64() % m;
                    let k = rng.next_u64() % m;
                    assert!(c.check_triple(&g.element(i), &g.element(j), &g.element(k)));
                }
            }
        }
    }

    #[test]
    fn composite_basis_6_is_nice() {
        let basis = composite_basis(6).unwrap();
        assert_eq!(basis.elements().len(), 36);
        assert!(basis.verify(1e-9).pass());
        let report = basis.verify_nice().unwrap();
        assert!(report.pass());
        // Cocycle lands in 6th roots of unity.
        let c = report.cocycle.unwrap();
        assert_eq!(6 % c.order(), 0);
    }

    #[test]
    fn composite_4_differs_from_pauli_2_2_as_indexed_family() {
        let a = composite_basis(4).unwrap();
        let b = pauli_basis(2, 2).unwrap();
        let ga = a.index_map().unwrap().group();
        let gb = b.index_map().unwrap().group();
        assert!(!ga.is_isomorphic_to(gb));
    }

    #[test]
    fn broken_identity_fails_niceness() {
        let basis = pauli_basis(2, 1).unwrap();
        let group = basis.index_map().unwrap().group().clone();
        let labels = basis.index_map().unwrap().labels().to_vec();
        let mut elems: Vec<BasisElement> = basis.elements().to_vec();
        // Swap the identity with X.
        elems.swap(0, 2);
        let rebuilt = UnitaryErrorBasis::new_indexed(
            2,
            group,
            labels.into_iter().zip(elems).collect(),
        )
        .unwrap();
        let report = rebuilt.verify_nice().unwrap();
        assert!(!report.pass());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, NiceViolation::IdentityElement)));
    }

    #[test]
    fn dense_elements_verify_nice_too() {
        // Same basis with every element stored densely: the projective
        // fallback must extract the same cocycle.
        let exact = pauli_basis(3, 1).unwrap();
        let group = exact.index_map().unwrap().group().clone();
        let labeled: Vec<(Vec<u32>, BasisElement)> = exact
            .index_map()
            .unwrap()
            .labels()
            .iter()
            .zip(exact.elements())
            .map(|(l, e)| (l.clone(), BasisElement::Dense(e.to_dense())))
            .collect();
        let dense = UnitaryErrorBasis::new_indexed(3, group, labeled).unwrap();
        let exact_report = exact.verify_nice().unwrap();
        let dense_report = dense.verify_nice().unwrap();
        assert!(dense_report.pass(), "{dense_report}");
        let a = exact_report.cocycle.unwrap();
        let b = dense_report.cocycle.unwrap();
        for g in a.group().clone().elements() {
            for h in a.group().clone().elements() {
                assert!((a.value(&g, &h) - b.value(&g, &h)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn nice_bound_values() {
        assert_eq!(nice_bound(6), 3);
        assert_eq!(nice_bound(12), 4);
        assert_eq!(nice_bound(7), 8);
        assert_eq!(nice_bound(4), 5);
        assert_eq!(nice_bound(10), 3);
        assert_eq!(nice_bound(36), 5);
    }

    #[test]
    fn pauli_trace_orthogonality_is_exact() {
        // All n^4 pairwise inner products equal n*delta exactly for p^e <= 9.
        for (p, e) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let basis = pauli_basis(p, e).unwrap();
            let n = basis.dim() as i64;
            let elems = basis.elements();
            for (k, a) in elems.iter().enumerate() {
                for (l, b) in elems.iter().enumerate() {
                    let want = if k == l { n } else { 0 };
                    assert!(a.trace_inner_is(b, want, 0.0).unwrap(), "p={p} e={e} k={k} l={l}");
                }
            }
        }
    }
}
