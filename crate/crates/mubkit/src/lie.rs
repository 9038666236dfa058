//! The Lie-algebra side: Cartan subalgebras of `sl_n(C)`, the Killing form
//! computed two independent ways, adjoint closure, orthogonal decomposition
//! verification, and both directions of the MUB <-> Cartan correspondence.

use num_complex::Complex64;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{
    commutator, is_unitary, simultaneous_eigenbasis, subspace_rank, DenseMatrix, Subspace,
    TOL_RANK,
};
use crate::mub::{MubCollection, Provenance};

/// An `(n-1)`-dimensional abelian self-normalizing subalgebra of `sl_n(C)`,
/// stored by a basis of traceless matrices.
#[derive(Debug, Clone)]
pub struct CartanSubalgebra {
    n: usize,
    basis: Vec<DenseMatrix>,
}

impl CartanSubalgebra {
    pub fn new(n: usize, basis: Vec<DenseMatrix>) -> Result<Self> {
        for b in &basis {
            if b.rows() != n || b.cols() != n {
                return Err(Error::DimensionMismatch(b.rows(), b.cols(), n, n));
            }
        }
        Ok(CartanSubalgebra { n, basis })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[DenseMatrix] {
        &self.basis
    }

    pub fn subspace(&self, tol_rank: f64) -> Result<Subspace> {
        Subspace::from_matrices(&self.basis, tol_rank)
    }
}

/// `n + 1` pairwise Killing-orthogonal Cartan subalgebras forming a direct
/// sum decomposition of `sl_n(C)`.
#[derive(Debug, Clone)]
pub struct OrthogonalDecomposition {
    n: usize,
    cartans: Vec<CartanSubalgebra>,
}

impl OrthogonalDecomposition {
    pub fn new(n: usize, cartans: Vec<CartanSubalgebra>) -> Result<Self> {
        for c in &cartans {
            if c.dim() != n {
                return Err(Error::DimensionMismatch(c.dim(), c.dim(), n, n));
            }
        }
        Ok(OrthogonalDecomposition { n, cartans })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cartans(&self) -> &[CartanSubalgebra] {
        &self.cartans
    }
}

/// The Killing form on `sl_n` via the closed form `2n tr(AB)`. Both inputs
/// must be traceless within `tol`.
pub fn killing(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> Result<Complex64> {
    check_traceless(a, tol)?;
    check_traceless(b, tol)?;
    let n = a.rows();
    if b.rows() != n || !a.is_square() || !b.is_square() {
        return Err(Error::DimensionMismatch(a.rows(), a.cols(), b.rows(), b.cols()));
    }
    Ok(a.mul(b)?.trace() * 2.0 * n as f64)
}

fn check_traceless(m: &DenseMatrix, tol: f64) -> Result<()> {
    let t = m.trace().norm();
    if t > tol * (1.0 + m.max_abs()) {
        return Err(Error::NotTraceless(t));
    }
    Ok(())
}

/// Fixed basis of `sl_n`: the off-diagonal units `E_ij` (row-major, i != j)
/// followed by the diagonal differences `E_kk - E_{k+1,k+1}`.
pub fn sl_basis(n: usize) -> Vec<DenseMatrix> {
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = DenseMatrix::zeros(n, n);
                m.set(i, j, Complex64::new(1.0, 0.0));
                out.push(m);
            }
        }
    }
    for k in 0..n - 1 {
        let mut m = DenseMatrix::zeros(n, n);
        m.set(k, k, Complex64::new(1.0, 0.0));
        m.set(k + 1, k + 1, Complex64::new(-1.0, 0.0));
        out.push(m);
    }
    out
}

/// Coordinates of a traceless matrix in [`sl_basis`]. Off-diagonal
/// coordinates are the entries themselves; diagonal coordinates are the
/// partial sums of the diagonal.
fn sl_coords(m: &DenseMatrix) -> Vec<Complex64> {
    let n = m.rows();
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(m.get(i, j));
            }
        }
    }
    // diag(m) = sum_k c_k (e_k - e_{k+1}) with c_k = d_0 + ... + d_k.
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n - 1 {
        acc += m.get(k, k);
        out.push(acc);
    }
    out
}

/// The matrix of `ad A : C -> [A, C]` over [`sl_basis`].
pub fn ad_matrix(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.rows();
    let basis = sl_basis(n);
    let d = basis.len();
    let mut out = DenseMatrix::zeros(d, d);
    for (col, e) in basis.iter().enumerate() {
        let coords = sl_coords(&commutator(a, e)?);
        for (row, v) in coords.into_iter().enumerate() {
            out.set(row, col, v);
        }
    }
    Ok(out)
}

/// The matrix of `ad A` over an arbitrary trace-orthogonal basis of a
/// subalgebra (coordinates via `tr(B_k M) / tr(B_k B_k)`).
pub fn ad_matrix_in_basis(a: &DenseMatrix, basis: &[DenseMatrix]) -> Result<DenseMatrix> {
    let d = basis.len();
    let norms: Vec<Complex64> = basis
        .iter()
        .map(|b| b.mul(b).map(|m| m.trace()))
        .collect::<Result<_>>()?;
    let mut out = DenseMatrix::zeros(d, d);
    for (col, e) in basis.iter().enumerate() {
        let c = commutator(a, e)?;
        for (row, b) in basis.iter().enumerate() {
            out.set(row, col, b.mul(&c)?.trace() / norms[row]);
        }
    }
    Ok(out)
}

/// The Killing form via its definition `tr(ad A . ad B)`. Agrees with
/// [`killing`] within roundoff; keeping both routes independent is the
/// point of the cross-check.
pub fn killing_ad(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> Result<Complex64> {
    check_traceless(a, tol)?;
    check_traceless(b, tol)?;
    let ada = ad_matrix(a)?;
    let adb = ad_matrix(b)?;
    Ok(ada.mul(&adb)?.trace())
}

/// The Cartan subalgebra of all traceless matrices diagonal in the columns
/// of the unitary `basis`: spanned by `B D_k B^dag` for the diagonal
/// differences `D_k`.
pub fn cartan_from_basis(basis: &DenseMatrix, tol: f64) -> Result<CartanSubalgebra> {
    if !is_unitary(basis, tol.max(1e-9) * 10.0) {
        let dev = basis
            .adjoint()
            .mul(basis)
            .map(|g| g.max_abs_diff(&DenseMatrix::identity(basis.rows())))
            .unwrap_or(f64::INFINITY);
        return Err(Error::NotUnitary(dev));
    }
    let n = basis.rows();
    let adj = basis.adjoint();
    let mut out = Vec::with_capacity(n - 1);
    for k in 0..n - 1 {
        let mut d = DenseMatrix::zeros(n, n);
        d.set(k, k, Complex64::new(1.0, 0.0));
        d.set(k + 1, k + 1, Complex64::new(-1.0, 0.0));
        out.push(basis.mul(&d)?.mul(&adj)?);
    }
    CartanSubalgebra::new(n, out)
}

/// Findings of the Cartan axioms check.
#[derive(Debug, Clone)]
pub struct CartanReport {
    /// Largest trace modulus over basis elements.
    pub trace_deviation: f64,
    /// Largest commutator entry over basis pairs.
    pub abelian_deviation: f64,
    /// Numerical rank of the basis (must be n - 1).
    pub rank: usize,
    /// Complex dimension of the self-normalizer (must equal the rank).
    pub normalizer_dim: usize,
    pub n: usize,
    pub tol: f64,
}

impl CartanReport {
    pub fn pass(&self) -> bool {
        self.trace_deviation <= self.tol
            && self.abelian_deviation <= self.tol
            && self.rank == self.n - 1
            && self.normalizer_dim == self.n - 1
    }
}

impl fmt::Display for CartanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trace dev {:.3e}, abelian dev {:.3e}, rank {}/{}, normalizer dim {}/{}",
            self.trace_deviation,
            self.abelian_deviation,
            self.rank,
            self.n - 1,
            self.normalizer_dim,
            self.n - 1
        )
    }
}

/// Checks the Cartan subalgebra axioms: traceless basis, abelian, dimension
/// `n - 1`, and self-normalizing.
///
/// The normalizer `{A in sl_n : [A, h_i] in S for all i}` is computed as the
/// kernel of a real-linear constraint map on the real coordinates of
/// `sl_n` (dimension `2(n^2 - 1)`), using the projection onto the orthogonal
/// complement of `S` to express membership linearly.
pub fn is_cartan(c: &CartanSubalgebra, tol: f64) -> Result<CartanReport> {
    let n = c.dim();
    let tol = tol.max(1e-12);
    let mut trace_dev = 0.0f64;
    let mut abelian_dev = 0.0f64;
    for (i, a) in c.basis().iter().enumerate() {
        trace_dev = trace_dev.max(a.trace().norm() / (1.0 + a.max_abs()));
        for b in &c.basis()[i + 1..] {
            let dev = commutator(a, b)?.max_abs() / ((1.0 + a.max_abs()) * (1.0 + b.max_abs()));
            abelian_dev = abelian_dev.max(dev);
        }
    }
    let space = c.subspace(TOL_RANK)?;
    let rank = space.rank();

    // Real basis of sl_n: {B, iB} over the fixed complex basis.
    let ambient = sl_basis(n);
    let real_dim = 2 * ambient.len();
    // Constraint matrix: rows = projected commutator components (real and
    // imaginary parts), columns = real basis directions.
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(real_dim);
    for e in &ambient {
        for mult in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
            let dir = e.scale(mult);
            let mut col: Vec<f64> = Vec::new();
            for h in c.basis() {
                let com = commutator(&dir, h)?;
                // Component orthogonal to S.
                let mut v = com.data().to_vec();
                for b in space.orthonormal_basis() {
                    let coeff = crate::linalg::dot(b, &v);
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= coeff * bi;
                    }
                }
                for z in &v {
                    col.push(z.re);
                    col.push(z.im);
                }
            }
            columns.push(col);
        }
    }
    let kernel_dim = real_dim - real_rank(&columns, TOL_RANK);
    // The kernel is a complex subspace (it is closed under multiplication
    // by i because S is), so its complex dimension is half the real one.
    let normalizer_dim = kernel_dim / 2;
    Ok(CartanReport {
        trace_deviation: trace_dev,
        abelian_deviation: abelian_dev,
        rank,
        normalizer_dim,
        n,
        tol: tol.max(1e-8),
    })
}

/// Rank of a set of real vectors (as columns) by modified Gram-Schmidt with
/// a relative threshold.
fn real_rank(columns: &[Vec<f64>], tol_rank: f64) -> usize {
    let max_norm = columns
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
        .max(1e-300);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for c in columns {
        let mut w = c.clone();
        for _ in 0..2 {
            for b in &basis {
                let coeff: f64 = b.iter().zip(&w).map(|(x, y)| x * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= coeff * bi;
                }
            }
        }
        let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nw > tol_rank * max_norm {
            let inv = 1.0 / nw;
            basis.push(w.into_iter().map(|x| x * inv).collect());
        }
    }
    basis.len()
}

/// True when the span is closed under conjugate transpose.
pub fn is_dagger_closed(c: &CartanSubalgebra, tol: f64) -> Result<bool> {
    let space = c.subspace(TOL_RANK)?;
    for h in c.basis() {
        if !space.contains_matrix(&h.adjoint(), tol.max(1e-8)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One Cartan subalgebra per basis: the traceless matrices diagonal in it.
/// The collection must verify as MUBs first.
pub fn mubs_to_cartans(m: &MubCollection, tol: f64) -> Result<Vec<CartanSubalgebra>> {
    let report = m.verify(tol.max(1e-9));
    if !report.pass(tol.max(1e-9)) {
        return Err(Error::VerificationFailed(report.to_string()));
    }
    m.bases().iter().map(|b| cartan_from_basis(b, tol)).collect()
}

/// The converse direction: each dagger-closed Cartan subalgebra is split
/// into commuting Hermitian parts and simultaneously diagonalized; the
/// common eigenbasis is one MUB. Pairwise Killing orthogonality of the
/// inputs is required, and the output collection is re-verified.
pub fn cartans_to_mubs(
    cartans: &[CartanSubalgebra],
    seed: u64,
    tol: f64,
) -> Result<MubCollection> {
    let n = match cartans.first() {
        Some(c) => c.dim(),
        None => return Err(Error::InvalidInput("no cartan subalgebras given".into())),
    };
    for (i, c) in cartans.iter().enumerate() {
        let report = is_cartan(c, tol)?;
        if !report.pass() {
            return Err(Error::VerificationFailed(format!("cartan {i}: {report}")));
        }
        if !is_dagger_closed(c, tol)? {
            return Err(Error::NotDaggerClosed);
        }
        for (j, other) in cartans.iter().enumerate().skip(i + 1) {
            let dev = pairwise_killing_deviation(c, other, tol)?;
            if dev > tol.max(1e-8) * n as f64 {
                return Err(Error::VerificationFailed(format!(
                    "cartans {i},{j} have Killing pairing {dev:.3e}"
                )));
            }
        }
    }
    let mut bases = Vec::with_capacity(cartans.len());
    for (k, c) in cartans.iter().enumerate() {
        let mut herms = Vec::new();
        for h in c.basis() {
            let ad = h.adjoint();
            let re = h.add(&ad)?.scale(Complex64::new(0.5, 0.0));
            let im = h.sub(&ad)?.scale(Complex64::new(0.0, -0.5));
            for part in [re, im] {
                if part.max_abs() > 1e-12 {
                    herms.push(part);
                }
            }
        }
        let v = simultaneous_eigenbasis(&herms, seed.wrapping_add(k as u64), tol.max(1e-9))?;
        bases.push(v);
    }
    let out = MubCollection::new(n, bases, Provenance::FromCartans)?;
    let report = out.verify(tol.max(1e-9));
    if !report.pass(tol.max(1e-9)) {
        return Err(Error::VerificationFailed(report.to_string()));
    }
    Ok(out)
}

/// Largest Killing pairing over basis pairs of two Cartan subalgebras.
pub fn pairwise_killing_deviation(
    a: &CartanSubalgebra,
    b: &CartanSubalgebra,
    tol: f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for x in a.basis() {
        for y in b.basis() {
            let k = killing(x, y, tol.max(1e-6))?;
            let scale = (1.0 + x.max_abs()) * (1.0 + y.max_abs()) * x.rows() as f64;
            worst = worst.max(k.norm() / scale);
        }
    }
    Ok(worst)
}

/// A unitary trace-orthogonal basis of a dagger-closed Cartan subalgebra:
/// `V diag(row k of F_n) V^dag` over the non-constant Fourier rows, where
/// `V` is the common eigenbasis. Together with the identity these form a
/// maximal commuting class.
pub fn unitary_basis_of_cartan(
    c: &CartanSubalgebra,
    seed: u64,
    tol: f64,
) -> Result<Vec<DenseMatrix>> {
    if !is_dagger_closed(c, tol)? {
        return Err(Error::NotDaggerClosed);
    }
    let n = c.dim();
    let mut herms = Vec::new();
    for h in c.basis() {
        let ad = h.adjoint();
        let re = h.add(&ad)?.scale(Complex64::new(0.5, 0.0));
        let im = h.sub(&ad)?.scale(Complex64::new(0.0, -0.5));
        for part in [re, im] {
            if part.max_abs() > 1e-12 {
                herms.push(part);
            }
        }
    }
    let v = simultaneous_eigenbasis(&herms, seed, tol.max(1e-9))?;
    let adj = v.adjoint();
    let mut out = Vec::with_capacity(n - 1);
    for k in 1..n {
        let mut d = DenseMatrix::zeros(n, n);
        for j in 0..n {
            d.set(
                j,
                j,
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k * j % n) as f64 / n as f64),
            );
        }
        out.push(v.mul(&d)?.mul(&adj)?);
    }
    Ok(out)
}

/// Per-component and pairwise findings for an orthogonal decomposition.
#[derive(Debug, Clone)]
pub struct OdReport {
    pub component_reports: Vec<CartanReport>,
    /// Worst Killing pairing between distinct components, normalized as in
    /// [`pairwise_killing_deviation`].
    pub worst_pairing: f64,
    /// Combined numerical rank of all component bases (must be n^2 - 1).
    pub combined_rank: usize,
    pub count: usize,
    pub n: usize,
    pub tol: f64,
}

impl OdReport {
    pub fn pass(&self) -> bool {
        self.count == self.n + 1
            && self.component_reports.iter().all(CartanReport::pass)
            && self.worst_pairing <= self.tol * self.n as f64
            && self.combined_rank == self.n * self.n - 1
    }
}

impl fmt::Display for OdReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "components: {}/{} expected, worst pairing {:.3e}, combined rank {}/{}",
            self.count,
            self.n + 1,
            self.worst_pairing,
            self.combined_rank,
            self.n * self.n - 1
        )?;
        for (i, r) in self.component_reports.iter().enumerate() {
            if !r.pass() {
                writeln!(f, "component {i} fails: {r}")?;
            }
        }
        Ok(())
    }
}

/// Verifies an orthogonal decomposition: `n + 1` components, every component
/// a Cartan subalgebra, pairwise Killing-orthogonal, spanning `sl_n`.
pub fn verify_od(od: &OrthogonalDecomposition, tol: f64) -> Result<OdReport> {
    let n = od.dim();
    let component_reports: Vec<CartanReport> = od
        .cartans()
        .iter()
        .map(|c| is_cartan(c, tol))
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for (i, a) in od.cartans().iter().enumerate() {
        for b in &od.cartans()[i + 1..] {
            worst = worst.max(pairwise_killing_deviation(a, b, tol)?);
        }
    }
    let all: Vec<Vec<Complex64>> = od
        .cartans()
        .iter()
        .flat_map(|c| c.basis().iter().map(|m| m.data().to_vec()))
        .collect();
    let combined_rank = subspace_rank(&all, TOL_RANK);
    Ok(OdReport {
        component_reports,
        worst_pairing: worst,
        combined_rank,
        count: od.cartans().len(),
        n,
        tol: tol.max(1e-8),
    })
}
