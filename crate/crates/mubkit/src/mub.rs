//! MUB construction and verification: common eigenbases of commuting
//! classes, the unbiasedness check, Latin MUBs from net parallel classes and
//! a generalized Hadamard, standardized Hadamards, and the monomiality
//! detector built on character tables.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::classes::ClassPartition;
use crate::error::{Error, Result};
use crate::finite::{is_character_table, AbelianGroupSpec, ParallelClass};
use crate::linalg::{is_unitary, simultaneous_eigenbasis, DenseMatrix};
use crate::util::parallel_map;

/// How a MUB collection was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Pauli,
    Latin,
    Imported,
    FromCartans,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Pauli => "pauli",
            Provenance::Latin => "latin",
            Provenance::Imported => "imported",
            Provenance::FromCartans => "from-cartans",
        };
        write!(f, "{s}")
    }
}

/// A collection of orthonormal bases of `C^n`, each stored as a unitary
/// whose columns are the basis vectors. At most `n + 1` bases can be
/// pairwise unbiased.
#[derive(Debug, Clone)]
pub struct MubCollection {
    n: usize,
    bases: Vec<DenseMatrix>,
    provenance: Provenance,
}

impl MubCollection {
    pub fn new(n: usize, bases: Vec<DenseMatrix>, provenance: Provenance) -> Result<Self> {
        for b in &bases {
            if b.rows() != n || b.cols() != n {
                return Err(Error::DimensionMismatch(b.rows(), b.cols(), n, n));
            }
        }
        Ok(MubCollection { n, bases, provenance })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bases(&self) -> &[DenseMatrix] {
        &self.bases
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn verify(&self, tol: f64) -> MubReport {
        verify_mubs(self, tol)
    }
}

/// Unbiasedness and unitarity report for a MUB collection.
#[derive(Debug, Clone)]
pub struct MubReport {
    /// Deviation of each basis from unitarity.
    pub unitarity: Vec<f64>,
    /// Worst deviation of `| <phi|psi> |^2` from `1/n` over cross-basis
    /// pairs, with the offending basis pair.
    pub worst_pair: Option<(usize, usize)>,
    pub worst_deviation: f64,
    /// Exceeding `n + 1` bases is a violation regardless of deviations.
    pub too_many: bool,
    /// Tolerance the report was produced at; `pass(tol)` may override it.
    pub tol: f64,
}

impl MubReport {
    pub fn pass(&self, tol: f64) -> bool {
        !self.too_many
            && self.unitarity.iter().all(|&d| d <= tol)
            && self.worst_deviation <= tol
    }

    /// Pass/fail at the tolerance the verification ran with.
    pub fn pass_at_tol(&self) -> bool {
        self.pass(self.tol)
    }
}

impl fmt::Display for MubReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = self.unitarity.iter().copied().fold(0.0, f64::max);
        write!(
            f,
            "bases: {}, worst unitarity deviation: {:.3e}, worst unbiasedness deviation: {:.3e}",
            self.unitarity.len(),
            unit,
            self.worst_deviation
        )?;
        if let Some((i, j)) = self.worst_pair {
            write!(f, " (pair {i},{j})")?;
        }
        if self.too_many {
            write!(f, "; TOO MANY BASES (> n+1)")?;
        }
        Ok(())
    }
}

/// Checks that every basis is unitary and that every cross-basis entry of
/// `B_i^dag B_j` has squared modulus `1/n`, reporting the worst deviation.
pub fn verify_mubs(m: &MubCollection, tol: f64) -> MubReport {
    let n = m.dim();
    let unitarity: Vec<f64> = m
        .bases()
        .iter()
        .map(|b| {
            b.adjoint()
                .mul(b)
                .map(|g| g.max_abs_diff(&DenseMatrix::identity(n)))
                .unwrap_or(f64::INFINITY)
        })
        .collect();
    let k = m.len();
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .collect();
    let devs = parallel_map(pairs.len(), |idx| {
        let (i, j) = pairs[idx];
        let g = m.bases()[i].adjoint().mul(&m.bases()[j]).expect("same n");
        let mut dev = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                dev = dev.max((g.get(r, c).norm_sqr() - 1.0 / n as f64).abs());
            }
        }
        dev
    });
    let mut worst_pair = None;
    let mut worst = 0.0f64;
    for (idx, &d) in devs.iter().enumerate() {
        if d > worst {
            worst = d;
            worst_pair = Some(pairs[idx]);
        }
    }
    MubReport {
        unitarity,
        worst_pair,
        worst_deviation: worst,
        too_many: k > n + 1,
        tol,
    }
}

/// One MUB per commuting class: the common eigenbasis of the class members.
/// The partition is re-verified first; a failing partition is an error.
pub fn mubs_from_classes(partition: &ClassPartition, seed: u64, tol: f64) -> Result<MubCollection> {
    let report = partition.verify(None, tol);
    if !report.pass() {
        return Err(Error::VerificationFailed(report.to_string()));
    }
    let n = partition.dim();
    let mut bases = Vec::with_capacity(partition.mu());
    for (k, class) in partition.classes().iter().enumerate() {
        let mats = class.member_dense();
        let v = simultaneous_eigenbasis(&mats, seed.wrapping_add(k as u64), tol)?;
        bases.push(v);
    }
    MubCollection::new(n, bases, Provenance::Pauli)
}

/// The Latin MUB construction. For each parallel class, the basis vector
/// indexed by (block `b`, column `c`) has `H[k][c] / sqrt(s)` at the `k`-th
/// point of block `b` and zero elsewhere. Blocks from distinct classes share
/// exactly one point, which makes distinct bases unbiased; `H^dag H = s I`
/// makes each basis orthonormal. The result is re-verified before returning.
pub fn latin_mubs(
    classes: &[ParallelClass],
    hadamard: &DenseMatrix,
    tol: f64,
) -> Result<MubCollection> {
    let s = match classes.first() {
        Some(c) => c.block_size(),
        None => return Err(Error::BadNet("no parallel classes supplied".into())),
    };
    if hadamard.rows() != s || hadamard.cols() != s {
        return Err(Error::DimensionMismatch(hadamard.rows(), hadamard.cols(), s, s));
    }
    let scaled = hadamard.scale(Complex64::new(1.0 / (s as f64).sqrt(), 0.0));
    if !is_unitary(&scaled, tol.max(1e-9) * s as f64) {
        let dev = scaled
            .adjoint()
            .mul(&scaled)
            .map(|g| g.max_abs_diff(&DenseMatrix::identity(s)))
            .unwrap_or(f64::INFINITY);
        return Err(Error::NotHadamard(dev));
    }
    for (i, a) in classes.iter().enumerate() {
        if a.block_size() != s {
            return Err(Error::BadNet("mixed block sizes".into()));
        }
        for b in &classes[i + 1..] {
            if !a.meets_like_net(b) {
                return Err(Error::BadNet(format!("classes {i} and later do not meet in one point")));
            }
        }
    }
    let n = s * s;
    let inv_sqrt_s = 1.0 / (s as f64).sqrt();
    let mut bases = Vec::with_capacity(classes.len());
    for class in classes {
        let mut basis = DenseMatrix::zeros(n, n);
        for (b, block) in class.blocks().iter().enumerate() {
            for c in 0..s {
                let col = b * s + c;
                for (k, &point) in block.iter().enumerate() {
                    basis.set(point, col, hadamard.get(k, c) * inv_sqrt_s);
                }
            }
        }
        bases.push(basis);
    }
    let collection = MubCollection::new(n, bases, Provenance::Latin)?;
    let report = collection.verify(tol.max(1e-9));
    if !report.pass(tol.max(1e-9)) {
        return Err(Error::VerificationFailed(report.to_string()));
    }
    Ok(collection)
}

/// A generalized Hadamard normalized so its first row and column are all
/// ones (within tolerance of the construction).
#[derive(Debug, Clone)]
pub struct StandardizedHadamard {
    n: usize,
    matrix: DenseMatrix,
}

impl StandardizedHadamard {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }
}

/// `sqrt(n) B_i^dag B_j`, dephased column-first then row-first so the first
/// row and column become ones. Errors when any entry modulus is off 1 by
/// more than `tol` (the bases were not unbiased).
pub fn standardized_hadamard(
    basis_i: &DenseMatrix,
    basis_j: &DenseMatrix,
    tol: f64,
) -> Result<StandardizedHadamard> {
    let n = basis_i.rows();
    let mut h = basis_i
        .adjoint()
        .mul(basis_j)?
        .scale(Complex64::new((n as f64).sqrt(), 0.0));
    for r in 0..n {
        for c in 0..n {
            let a = h.get(r, c).norm();
            if (a - 1.0).abs() > tol {
                return Err(Error::ZeroEntry(r, c, a));
            }
        }
    }
    for c in 0..n {
        let phase = h.get(0, c);
        let phase = phase / phase.norm();
        for r in 0..n {
            h.set(r, c, h.get(r, c) / phase);
        }
    }
    for r in 0..n {
        let phase = h.get(r, 0);
        let phase = phase / phase.norm();
        for c in 0..n {
            h.set(r, c, h.get(r, c) / phase);
        }
    }
    Ok(StandardizedHadamard { n, matrix: h })
}

/// Per-pair outcome of the monomiality test.
#[derive(Debug, Clone)]
pub struct MonomialityReport {
    /// True when every standardized Hadamard is a character table.
    pub monomial: bool,
    /// (i, j, detected group) for every pair i < j.
    pub pairs: Vec<(usize, usize, Option<AbelianGroupSpec>)>,
}

/// Tests whether the collection is monomial: every standardized Hadamard
/// `B_i^dag B_j` must be the character table of an abelian group.
pub fn is_monomial_collection(m: &MubCollection, tol: f64) -> Result<MonomialityReport> {
    let k = m.len();
    let mut pairs = Vec::new();
    let mut monomial = true;
    for i in 0..k {
        for j in i + 1..k {
            let h = standardized_hadamard(&m.bases()[i], &m.bases()[j], tol.max(1e-6))?;
            let group = is_character_table(h.matrix(), tol.max(1e-8))?;
            monomial &= group.is_some();
            pairs.push((i, j, group));
        }
    }
    Ok(MonomialityReport { monomial, pairs })
}

/// Equality of bases up to column permutation and per-column phases: every
/// column of one basis matches exactly one column of the other with overlap
/// of modulus 1.
pub fn bases_equal_up_to_phase_perm(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols() {
        return false;
    }
    let n = a.rows();
    let g = match a.adjoint().mul(b) {
        Ok(g) => g,
        Err(_) => return false,
    };
    let mut used = vec![false; n];
    for c in 0..n {
        let mut found = None;
        for r in 0..n {
            let v = g.get(r, c).norm();
            if (v - 1.0).abs() <= tol {
                if found.is_some() {
                    return false;
                }
                found = Some(r);
            } else if v > tol {
                return false;
            }
        }
        match found {
            Some(r) if !used[r] => used[r] = true,
            _ => return false,
        }
    }
    true
}

/// Fraction of bases matching position-wise under phase/permutation
/// equality; 1.0 means the collections agree basis by basis.
pub fn matching_score(a: &MubCollection, b: &MubCollection, tol: f64) -> f64 {
    if a.len() != b.len() || a.is_empty() {
        return 0.0;
    }
    let hits = a
        .bases()
        .iter()
        .zip(b.bases())
        .filter(|(x, y)| bases_equal_up_to_phase_perm(x, y, tol))
        .count();
    hits as f64 / a.len() as f64
}
