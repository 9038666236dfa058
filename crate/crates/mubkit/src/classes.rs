//! Maximal commuting classes of trace-orthogonal unitaries: the standard
//! spread partition of the generalized Pauli basis for prime powers, the
//! verifier for class and partition axioms, and the exhaustive search for
//! largest class partitions of an indexed nice error basis.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::error_bases::{BasisElement, UnitaryErrorBasis};
use crate::finite::{dual_basis, FiniteField};
use crate::linalg::DenseMatrix;
use crate::monomial::{pauli, PauliLabel};

/// `n` pairwise-commuting, trace-orthogonal unitaries containing the
/// identity. The common eigenbasis of such a class is one MUB.
#[derive(Debug, Clone)]
pub struct CommutingClass {
    n: usize,
    members: Vec<BasisElement>,
    labels: Option<Vec<Vec<u32>>>,
}

impl CommutingClass {
    pub fn new(n: usize, members: Vec<BasisElement>) -> Self {
        CommutingClass { n, members, labels: None }
    }

    pub fn with_labels(n: usize, members: Vec<BasisElement>, labels: Vec<Vec<u32>>) -> Self {
        CommutingClass { n, members, labels: Some(labels) }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[BasisElement] {
        &self.members
    }

    pub fn labels(&self) -> Option<&[Vec<u32>]> {
        self.labels.as_deref()
    }

    pub fn member_dense(&self) -> Vec<DenseMatrix> {
        self.members.iter().map(|m| m.to_dense()).collect()
    }

    /// Checks size, identity membership, pairwise commutation, pairwise
    /// trace orthogonality, and (given the ambient basis) maximality.
    pub fn verify(&self, ambient: Option<&UnitaryErrorBasis>, tol: f64) -> ClassReport {
        let mut report = ClassReport::default();
        if self.members.len() != self.n {
            report.wrong_size = Some((self.n, self.members.len()));
        }
        if !self.members.iter().any(|m| m.is_identity(tol)) {
            report.missing_identity = true;
        }
        for (i, a) in self.members.iter().enumerate() {
            if a.dim() != self.n {
                report.wrong_size = Some((self.n, a.dim()));
                continue;
            }
            for (j, b) in self.members.iter().enumerate().skip(i + 1) {
                if !a.commutes_with(b, tol).unwrap_or(false) {
                    report.non_commuting.push((i, j));
                }
                if !a.trace_inner_is(b, 0, tol * self.n as f64).unwrap_or(false) {
                    report.non_orthogonal.push((i, j));
                }
            }
        }
        if let Some(basis) = ambient {
            // Maximality: no ambient element outside the class commutes with
            // every member.
            for (k, cand) in basis.elements().iter().enumerate() {
                let inside = self
                    .members
                    .iter()
                    .any(|m| element_equal(m, cand, tol));
                if inside {
                    continue;
                }
                let commutes_all = self
                    .members
                    .iter()
                    .all(|m| cand.commutes_with(m, tol).unwrap_or(false));
                if commutes_all {
                    report.not_maximal.push(k);
                }
            }
        }
        report
    }
}

/// Projective equality of basis elements (phases are immaterial throughout).
fn element_equal(a: &BasisElement, b: &BasisElement, tol: f64) -> bool {
    match (a, b) {
        (BasisElement::Monomial(x), BasisElement::Monomial(y)) => x.phase_from(y).is_some(),
        _ => crate::linalg::equal_up_to_global_phase(&a.to_dense(), &b.to_dense(), tol).is_some(),
    }
}

/// Violations found by [`CommutingClass::verify`]; empty means pass.
#[derive(Debug, Default, Clone)]
pub struct ClassReport {
    pub wrong_size: Option<(usize, usize)>,
    pub missing_identity: bool,
    pub non_commuting: Vec<(usize, usize)>,
    pub non_orthogonal: Vec<(usize, usize)>,
    /// Ambient elements outside the class commuting with all members.
    pub not_maximal: Vec<usize>,
}

impl ClassReport {
    pub fn pass(&self) -> bool {
        self.wrong_size.is_none()
            && !self.missing_identity
            && self.non_commuting.is_empty()
            && self.non_orthogonal.is_empty()
            && self.not_maximal.is_empty()
    }
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass() {
            return write!(f, "commuting class: pass");
        }
        if let Some((want, got)) = self.wrong_size {
            writeln!(f, "wrong size: expected {want}, got {got}")?;
        }
        if self.missing_identity {
            writeln!(f, "identity matrix missing")?;
        }
        for (i, j) in &self.non_commuting {
            writeln!(f, "members {i},{j} do not commute")?;
        }
        for (i, j) in &self.non_orthogonal {
            writeln!(f, "members {i},{j} not trace-orthogonal")?;
        }
        for k in &self.not_maximal {
            writeln!(f, "ambient element {k} commutes with the whole class")?;
        }
        Ok(())
    }
}

/// A partition of an error basis into commuting classes meeting pairwise in
/// the identity only.
#[derive(Debug, Clone)]
pub struct ClassPartition {
    n: usize,
    classes: Vec<CommutingClass>,
}

impl ClassPartition {
    pub fn new(n: usize, classes: Vec<CommutingClass>) -> Self {
        ClassPartition { n, classes }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[CommutingClass] {
        &self.classes
    }

    pub fn mu(&self) -> usize {
        self.classes.len()
    }

    /// Verifies every class plus the partition-level axioms: pairwise
    /// intersections are exactly the identity, and cross-class pairs are
    /// trace-orthogonal.
    pub fn verify(&self, ambient: Option<&UnitaryErrorBasis>, tol: f64) -> PartitionReport {
        let class_reports: Vec<ClassReport> = self
            .classes
            .iter()
            .map(|c| c.verify(ambient, tol))
            .collect();
        let mut cross_overlap = Vec::new();
        let mut cross_non_orthogonal = Vec::new();
        for (i, a) in self.classes.iter().enumerate() {
            for (j, b) in self.classes.iter().enumerate().skip(i + 1) {
                for (ai, am) in a.members.iter().enumerate() {
                    let a_is_id = am.is_identity(tol);
                    for (bi, bm) in b.members.iter().enumerate() {
                        let b_is_id = bm.is_identity(tol);
                        if a_is_id && b_is_id {
                            continue;
                        }
                        if element_equal(am, bm, tol) {
                            cross_overlap.push((i, ai, j, bi));
                        }
                        if !a_is_id
                            && !b_is_id
                            && !am.trace_inner_is(bm, 0, tol * self.n as f64).unwrap_or(false)
                        {
                            cross_non_orthogonal.push((i, ai, j, bi));
                        }
                    }
                }
            }
        }
        PartitionReport { class_reports, cross_overlap, cross_non_orthogonal }
    }
}

#[derive(Debug, Default, Clone)]
pub struct PartitionReport {
    pub class_reports: Vec<ClassReport>,
    /// (class i, member, class j, member) equal across distinct classes.
    pub cross_overlap: Vec<(usize, usize, usize, usize)>,
    pub cross_non_orthogonal: Vec<(usize, usize, usize, usize)>,
}

impl PartitionReport {
    pub fn pass(&self) -> bool {
        self.class_reports.iter().all(ClassReport::pass)
            && self.cross_overlap.is_empty()
            && self.cross_non_orthogonal.is_empty()
    }
}

impl fmt::Display for PartitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass() {
            return write!(f, "class partition: pass ({} classes)", self.class_reports.len());
        }
        for (i, r) in self.class_reports.iter().enumerate() {
            if !r.pass() {
                writeln!(f, "class {i}: {r}")?;
            }
        }
        for (i, ai, j, bi) in &self.cross_overlap {
            writeln!(f, "classes {i},{j} share non-identity member ({ai},{bi})")?;
        }
        for (i, ai, j, bi) in &self.cross_non_orthogonal {
            writeln!(f, "cross pair ({i}.{ai}, {j}.{bi}) not trace-orthogonal")?;
        }
        Ok(())
    }
}

/// The standard partition of the generalized Pauli basis into `n + 1`
/// commuting classes, indexed by the lines of the desarguesian spread of
/// `F_q x F_q` (`q = p^e`): `C_m = {U^{(coords(a), coords*(m a))}}` for
/// `m in F_q` and `C_inf = {U^{(0, coords*(b))}}`.
///
/// The x-part uses the polynomial basis of `F_q` over `Z_p` and the z-part
/// its trace-dual basis, which turns the Pauli commutation pairing into
/// `Tr(a(mb)) - Tr(b(ma)) = 0` inside each class.
pub fn standard_partition(p: u64, e: u32) -> Result<ClassPartition> {
    let field = FiniteField::new(p, e)?;
    let q = field.order();
    let n = q as usize;
    let poly_basis: Vec<_> = (0..e as u64)
        .map(|i| {
            let mut v = field.zero();
            v[i as usize] = 1;
            v
        })
        .collect();
    let dual = dual_basis(&field, &poly_basis)?;
    // coords(a): coefficients in the polynomial basis (the representation
    // itself). coords*(c): coefficients in the dual basis, c_j = Tr(c b_j),
    // since c = sum_j Tr(c b_j) b*_j under the trace pairing.
    let dual_coords = |c: &Vec<u32>| -> Vec<u32> {
        let coords: Vec<u32> =
            poly_basis.iter().map(|b| field.trace(&field.mul(c, b))).collect();
        debug_assert_eq!(
            {
                let mut rec = field.zero();
                for (cj, bj) in coords.iter().zip(&dual) {
                    let mut s = field.zero();
                    s[0] = *cj;
                    rec = field.add(&rec, &field.mul(&s, bj));
                }
                rec
            },
            *c,
            "dual-basis reconstruction must be exact"
        );
        coords
    };
    let label_for = |x: &[u32], z: &[u32]| -> Vec<u32> {
        let mut l = x.to_vec();
        l.extend_from_slice(z);
        l
    };
    let make = |x: &[u32], z: &[u32]| -> Result<BasisElement> {
        let u = pauli(&PauliLabel::new(p as u32, e, x.to_vec(), z.to_vec())?);
        Ok(BasisElement::Monomial(u))
    };
    let mut classes = Vec::with_capacity(n + 1);
    for m_idx in 0..q {
        let m = field.element(m_idx);
        let mut members = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for a_idx in 0..q {
            let a = field.element(a_idx);
            let z = dual_coords(&field.mul(&m, &a));
            members.push(make(&a, &z)?);
            labels.push(label_for(&a, &z));
        }
        classes.push(CommutingClass::with_labels(n, members, labels));
    }
    let zero = field.zero();
    let mut members = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for b_idx in 0..q {
        let b = field.element(b_idx);
        let z = dual_coords(&b);
        members.push(make(&zero, &z)?);
        labels.push(label_for(&zero, &z));
    }
    classes.push(CommutingClass::with_labels(n, members, labels));
    Ok(ClassPartition::new(n, classes))
}

/// Per class, the `n - 1` traceless matrices spanning the same space as the
/// non-identity members minus their trace component. With nice-basis input
/// the non-identity members are already traceless and pass through intact,
/// keeping exact monomial form.
pub fn classes_to_cartan_bases(partition: &ClassPartition, tol: f64) -> Result<Vec<Vec<BasisElement>>> {
    let report = partition.verify(None, tol);
    if !report.pass() {
        return Err(Error::VerificationFailed(report.to_string()));
    }
    let n = partition.dim();
    let mut out = Vec::with_capacity(partition.classes().len());
    for class in partition.classes() {
        let mut basis = Vec::with_capacity(n - 1);
        for m in class.members() {
            if m.is_identity(tol) {
                continue;
            }
            if m.is_traceless(tol) {
                basis.push(m.clone());
            } else {
                let d = m.to_dense();
                let shift = d.trace() / n as f64;
                let traceless = d.sub(&DenseMatrix::identity(n).scale(shift))?;
                basis.push(BasisElement::Dense(traceless));
            }
        }
        out.push(basis);
    }
    Ok(out)
}

/// Result of [`partition_search`].
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Largest number of pairwise trivially-intersecting commuting classes
    /// found.
    pub mu: usize,
    pub witness: ClassPartition,
    /// True when the search tree was fully explored, making `mu` a proven
    /// maximum for this basis.
    pub exhausted: bool,
    pub nodes: u64,
    /// Number of commuting (isotropic) order-n subgroups found.
    pub subgroup_count: usize,
}

/// Exhaustively searches for a maximum family of commuting classes of the
/// indexed nice basis with pairwise trivial intersections.
///
/// Classes correspond to order-`n` subgroups of the index group whose lifted
/// matrices pairwise commute; those are enumerated by recursive generator
/// extension (deduplicated by element set), then a canonical backtracking
/// over the subgroup list finds the largest pairwise-disjoint family.
pub fn partition_search(basis: &UnitaryErrorBasis, time_cap: Duration) -> Result<SearchOutcome> {
    let nice = basis.verify_nice()?;
    if !nice.pass() {
        return Err(Error::NotNice(nice.to_string()));
    }
    let index = basis.index_map().expect("verified nice implies indexed");
    let group = index.group().clone();
    let n = basis.dim() as u64;
    let order = group.order();
    if order != n * n {
        return Err(Error::InvalidInput("index group order must be n^2".into()));
    }
    let m = order as usize;
    // Element lookup and exact commutation table on generators.
    let elems: Vec<&BasisElement> = {
        let mut by_index: Vec<Option<&BasisElement>> = vec![None; m];
        for (label, elem) in index.labels().iter().zip(basis.elements()) {
            by_index[group.index_of(label) as usize] = Some(elem);
        }
        by_index.into_iter().map(|e| e.expect("covered")).collect()
    };
    let commute = |a: usize, b: usize| -> bool {
        elems[a].commutes_with(elems[b], 1e-9).unwrap_or(false)
    };
    // Addition table on element indices.
    let add = |a: usize, b: usize| -> usize {
        group.index_of(&group.add(&group.element(a as u64), &group.element(b as u64))) as usize
    };

    // Enumerate isotropic subgroups of order n by generator extension.
    let mut subgroups: HashSet<Vec<usize>> = HashSet::new();
    let identity = group.index_of(&group.identity()) as usize;
    // closure(current, g): subgroup generated by current set plus g.
    let close = |base: &[usize], g: usize| -> Vec<usize> {
        let mut set: HashSet<usize> = base.iter().copied().collect();
        set.insert(identity);
        let mut frontier: Vec<usize> = vec![g];
        while let Some(x) = frontier.pop() {
            if set.contains(&x) {
                continue;
            }
            let snapshot: Vec<usize> = set.iter().copied().collect();
            set.insert(x);
            // powers of x
            let mut acc = add(x, x);
            while !set.contains(&acc) {
                frontier.push(acc);
                acc = add(acc, x);
            }
            for y in snapshot {
                let s = add(x, y);
                if !set.contains(&s) {
                    frontier.push(s);
                }
            }
        }
        let mut v: Vec<usize> = set.into_iter().collect();
        v.sort_unstable();
        v
    };
    // Iterative generator extension with explicit stack.
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(vec![identity], 0)];
    while let Some((subgroup, start)) = stack.pop() {
        for g in start..m {
            if g == identity || subgroup.contains(&g) {
                continue;
            }
            // New generator must commute with everything so far.
            if !subgroup.iter().chain(std::iter::once(&g)).all(|&h| commute(g, h)) {
                continue;
            }
            let bigger = close(&subgroup, g);
            let size = bigger.len() as u64;
            if size > n || !n.is_multiple_of(size) {
                continue;
            }
            // All pairs in the closure must commute (products of commuting
            // lifts commute, but re-check cheaply for safety at these sizes).
            let all_commute = bigger
                .iter()
                .enumerate()
                .all(|(i, &a)| bigger[i + 1..].iter().all(|&b| commute(a, b)));
            if !all_commute {
                continue;
            }
            if size == n {
                subgroups.insert(bigger);
            } else {
                stack.push((bigger, g + 1));
            }
        }
    }
    let mut subgroups: Vec<Vec<usize>> = subgroups.into_iter().collect();
    subgroups.sort();

    // Pairwise compatibility: trivial intersection.
    let k = subgroups.len();
    let compatible: Vec<Vec<bool>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let inter = subgroups[i]
                        .iter()
                        .filter(|x| subgroups[j].binary_search(x).is_ok())
                        .count();
                    inter == 1
                })
                .collect()
        })
        .collect();

    // Backtracking for the largest pairwise-compatible family. Candidates in
    // canonical order; the first maximum found is the lexicographically
    // least witness.
    let deadline = Instant::now() + time_cap;
    let mut best: Vec<usize> = Vec::new();
    let mut nodes = 0u64;
    let mut exhausted = true;
    fn dfs(
        chosen: &mut Vec<usize>,
        start: usize,
        compatible: &[Vec<bool>],
        best: &mut Vec<usize>,
        nodes: &mut u64,
        deadline: Instant,
        exhausted: &mut bool,
    ) {
        *nodes += 1;
        if (*nodes).is_multiple_of(4096) && Instant::now() > deadline {
            *exhausted = false;
            return;
        }
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        let k = compatible.len();
        // Bound: even taking every remaining candidate cannot beat best.
        if chosen.len() + (k - start) <= best.len() {
            return;
        }
        for cand in start..k {
            if !*exhausted {
                return;
            }
            if chosen.iter().all(|&c| compatible[c][cand]) {
                chosen.push(cand);
                dfs(chosen, cand + 1, compatible, best, nodes, deadline, exhausted);
                chosen.pop();
            }
        }
    }
    dfs(&mut Vec::new(), 0, &compatible, &mut best, &mut nodes, deadline, &mut exhausted);

    // Materialize the witness: classes sorted by smallest member index.
    let mut chosen_subgroups: Vec<&Vec<usize>> = best.iter().map(|&i| &subgroups[i]).collect();
    chosen_subgroups.sort();
    let classes = chosen_subgroups
        .iter()
        .map(|sub| {
            let members: Vec<BasisElement> = sub.iter().map(|&i| elems[i].clone()).collect();
            let labels: Vec<Vec<u32>> = sub.iter().map(|&i| group.element(i as u64)).collect();
            CommutingClass::with_labels(basis.dim(), members, labels)
        })
        .collect();
    Ok(SearchOutcome {
        mu: best.len(),
        witness: ClassPartition::new(basis.dim(), classes),
        exhausted,
        nodes,
        subgroup_count: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error_bases::{composite_basis, pauli_basis};
    use crate::monomial::MonomialMatrix;
    use num_complex::Complex64;

    #[test]
    fn standard_partition_qubit() {
        let p = standard_partition(2, 1).unwrap();
        assert_eq!(p.mu(), 3);
        let basis = pauli_basis(2, 1).unwrap();
        let report = p.verify(Some(&basis), 1e-9);
        assert!(report.pass(), "{report}");
        // Membership: the three classes are {I,X}, {I,XZ}, {I,Z} in spread
        // order m = 0, 1, infinity.
        let x = pauli(&PauliLabel::new(2, 1, vec![1], vec![0]).unwrap());
        let z = pauli(&PauliLabel::new(2, 1, vec![0], vec![1]).unwrap());
        let xz = x.mul(&z).unwrap();
        let holds = |class: &CommutingClass, m: &MonomialMatrix| {
            class
                .members()
                .iter()
                .any(|e| e.as_monomial().unwrap().phase_from(m).is_some())
        };
        assert!(holds(&p.classes()[0], &x));
        assert!(holds(&p.classes()[1], &xz));
        assert!(holds(&p.classes()[2], &z));
    }

    #[test]
    fn standard_partition_sizes() {
        for (p, e) in [(3u64, 1u32), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let part = standard_partition(p, e).unwrap();
            let n = (p as usize).pow(e);
            assert_eq!(part.mu(), n + 1, "p={p} e={e}");
            let basis = pauli_basis(p, e).unwrap();
            let report = part.verify(Some(&basis), 1e-9);
            assert!(report.pass(), "p={p} e={e}: {report}");
            // Coverage: mu(n-1)+1 distinct elements = n^2.
            let mut seen = std::collections::HashSet::new();
            for class in part.classes() {
                for l in class.labels().unwrap() {
                    seen.insert(l.clone());
                }
            }
            assert_eq!(seen.len(), n * n);
        }
    }

    #[test]
    fn verify_class_catches_size_and_commutation() {
        let x = BasisElement::Monomial(pauli(&PauliLabel::new(2, 1, vec![1], vec![0]).unwrap()));
        let z = BasisElement::Monomial(pauli(&PauliLabel::new(2, 1, vec![0], vec![1]).unwrap()));
        let id = BasisElement::Monomial(MonomialMatrix::identity(2));
        // {I, Z} inside n=3: wrong size.
        let short = CommutingClass::new(3, vec![BasisElement::Monomial(MonomialMatrix::identity(3))]);
        assert!(short.verify(None, 1e-9).wrong_size.is_some());
        // {I, X, Z}: wrong size for n=2 and non-commuting.
        let bad = CommutingClass::new(2, vec![id, x, z]);
        let report = bad.verify(None, 1e-9);
        assert!(!report.pass());
        assert!(report.wrong_size.is_some());
        assert!(!report.non_commuting.is_empty());
    }

    #[test]
    fn maximality_detects_missing_member() {
        // Drop XZ from the class {I, X}: still maximal. Instead take the
        // class {I} padded with nothing: ambient element X commutes.
        let basis = pauli_basis(2, 1).unwrap();
        let id = BasisElement::Monomial(MonomialMatrix::identity(2));
        let x = BasisElement::Monomial(pauli(&PauliLabel::new(2, 1, vec![1], vec![0]).unwrap()));
        let incomplete = CommutingClass::new(2, vec![id, x.clone()]);
        // {I, X} is maximal: only phases of I and X commute with both.
        assert!(incomplete.verify(Some(&basis), 1e-9).not_maximal.is_empty());
        let just_id = CommutingClass::new(2, vec![BasisElement::Monomial(MonomialMatrix::identity(2))]);
        let report = just_id.verify(Some(&basis), 1e-9);
        assert!(!report.not_maximal.is_empty());
    }

    #[test]
    fn cartan_bases_from_qubit_partition() {
        let p = standard_partition(2, 1).unwrap();
        let bases = classes_to_cartan_bases(&p, 1e-9).unwrap();
        assert_eq!(bases.len(), 3);
        for b in &bases {
            assert_eq!(b.len(), 1);
            assert!(b[0].is_traceless(1e-12));
        }
    }

    #[test]
    fn cartan_bases_keep_monomials_exact() {
        let p = standard_partition(3, 1).unwrap();
        let bases = classes_to_cartan_bases(&p, 1e-9).unwrap();
        for b in &bases {
            assert_eq!(b.len(), 2);
            for m in b {
                assert!(m.as_monomial().is_some());
                assert!(m.is_traceless(0.0));
            }
        }
    }

    #[test]
    fn cartan_bases_project_out_small_trace() {
        // A member whose trace is within the orthogonality budget but above
        // the traceless threshold gets its trace component subtracted.
        let eps = 1e-3;
        let z_shifted = DenseMatrix::from_rows(vec![
            vec![Complex64::new(1.0 + eps, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0 + eps, 0.0)],
        ])
        .unwrap();
        let id = BasisElement::Monomial(MonomialMatrix::identity(2));
        let x = BasisElement::Monomial(pauli(&PauliLabel::new(2, 1, vec![1], vec![0]).unwrap()));
        let p = ClassPartition::new(
            2,
            vec![
                CommutingClass::new(2, vec![id.clone(), BasisElement::Dense(z_shifted)]),
                CommutingClass::new(2, vec![id, x]),
            ],
        );
        let bases = classes_to_cartan_bases(&p, eps).unwrap();
        assert!(bases[0][0].is_traceless(1e-12));
        let z = pauli(&PauliLabel::new(2, 1, vec![0], vec![1]).unwrap()).to_dense();
        assert!(bases[0][0].to_dense().max_abs_diff(&z) < 1e-12);
    }

    #[test]
    fn failing_partition_is_rejected() {
        let id = BasisElement::Monomial(MonomialMatrix::identity(2));
        let x = BasisElement::Monomial(pauli(&PauliLabel::new(2, 1, vec![1], vec![0]).unwrap()));
        let z = BasisElement::Monomial(pauli(&PauliLabel::new(2, 1, vec![0], vec![1]).unwrap()));
        let bad = ClassPartition::new(2, vec![CommutingClass::new(2, vec![id, x, z])]);
        assert!(matches!(
            classes_to_cartan_bases(&bad, 1e-9),
            Err(Error::VerificationFailed(_))
        ));
    }

    #[test]
    fn search_qubit_finds_three() {
        let basis = pauli_basis(2, 1).unwrap();
        let out = partition_search(&basis, Duration::from_secs(60)).unwrap();
        assert_eq!(out.mu, 3);
        assert!(out.exhausted);
        assert!(out.witness.verify(Some(&basis), 1e-9).pass());
    }

    #[test]
    fn search_qutrit_finds_four() {
        let basis = pauli_basis(3, 1).unwrap();
        let out = partition_search(&basis, Duration::from_secs(60)).unwrap();
        assert_eq!(out.mu, 4);
        assert!(out.exhausted);
    }

    #[test]
    fn search_composite_6_maxes_at_three() {
        let basis = composite_basis(6).unwrap();
        let out = partition_search(&basis, Duration::from_secs(60)).unwrap();
        assert_eq!(out.mu, 3);
        assert!(out.exhausted);
        assert!(out.witness.verify(Some(&basis), 1e-9).pass());
        assert_eq!(out.mu as u64, crate::error_bases::nice_bound(6));
    }

    #[test]
    fn search_finds_spread_for_four_dimensional_pauli() {
        // The spread subgroups of Z_2^4 are 2-generated, but this checks the
        // enumerator reaches mu = 5 = n + 1.
        let basis = pauli_basis(2, 2).unwrap();
        let out = partition_search(&basis, Duration::from_secs(120)).unwrap();
        assert_eq!(out.mu, 5);
        assert!(out.exhausted);
    }

    #[test]
    fn search_deterministic() {
        let basis = composite_basis(6).unwrap();
        let a = partition_search(&basis, Duration::from_secs(60)).unwrap();
        let b = partition_search(&basis, Duration::from_secs(60)).unwrap();
        assert_eq!(a.mu, b.mu);
        assert_eq!(a.nodes, b.nodes);
        let la: Vec<_> = a.witness.classes().iter().map(|c| c.labels().unwrap().to_vec()).collect();
        let lb: Vec<_> = b.witness.classes().iter().map(|c| c.labels().unwrap().to_vec()).collect();
        assert_eq!(la, lb);
    }
}
