//! Dense complex linear algebra for verification and eigenbasis extraction:
//! trace inner products, commutators, unitarity tests, simultaneous
//! diagonalization of commuting normal families, and subspace rank and
//! membership queries.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for predicate checks.
pub const TOL: f64 = 1e-9;
/// Default relative tolerance for numerical rank decisions.
pub const TOL_RANK: f64 = 1e-8;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        Ok(DenseMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite entry".into()));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn adjoint(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &DenseMatrix,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<DenseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, s: Complex64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Kronecker product, `self` acting on the most significant index.
    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        DenseMatrix::from_fn(r1 * r2, c1 * c2, |r, c| {
            self.get(r / r2, c / c2) * other.get(r % r2, c % c2)
        })
    }
}

/// `tr(A^dag B)`, sesquilinear in the first argument.
pub fn trace_inner(a: &DenseMatrix, b: &DenseMatrix) -> Result<Complex64> {
    if a.rows != b.rows || a.cols != b.cols || !a.is_square() {
        return Err(Error::DimensionMismatch(a.rows, a.cols, b.rows, b.cols));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.data.len() {
        acc += a.data[i].conj() * b.data[i];
    }
    Ok(acc)
}

/// `AB - BA`.
pub fn commutator(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    a.mul(b)?.sub(&b.mul(a)?)
}

pub fn is_unitary(m: &DenseMatrix, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let gram = m.adjoint().mul(m).expect("square");
    gram.max_abs_diff(&DenseMatrix::identity(m.rows)) <= tol
}

pub fn is_traceless(m: &DenseMatrix, tol: f64) -> bool {
    m.trace().norm() <= tol
}

pub fn is_hermitian(m: &DenseMatrix, tol: f64) -> bool {
    m.is_square() && m.max_abs_diff(&m.adjoint()) <= tol
}

pub fn is_normal(m: &DenseMatrix, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let ad = m.adjoint();
    let lhs = m.mul(&ad).expect("square");
    let rhs = ad.mul(m).expect("square");
    lhs.max_abs_diff(&rhs) <= tol
}

/// When `M^dag N` is within `tol` of `c I` with `|c| = 1`, returns `c`.
/// This is the projective equality used wherever phases are immaterial.
pub fn equal_up_to_global_phase(m: &DenseMatrix, n: &DenseMatrix, tol: f64) -> Option<Complex64> {
    if m.rows != n.rows || m.cols != n.cols || !m.is_square() {
        return None;
    }
    let p = m.adjoint().mul(n).ok()?;
    let c = p.trace() / p.rows as f64;
    if (c.norm() - 1.0).abs() > tol {
        return None;
    }
    let diff = p.max_abs_diff(&DenseMatrix::identity(p.rows).scale(c));
    (diff <= tol).then_some(c / c.norm())
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition (cyclic complex Jacobi)
// ---------------------------------------------------------------------------

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns eigenvalues ascending and a unitary whose columns are the
/// corresponding eigenvectors. Fully deterministic.
pub fn hermitian_eigen(m: &DenseMatrix, tol: f64) -> Result<(Vec<f64>, DenseMatrix)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(m.rows, m.cols, m.cols, m.rows));
    }
    let herm_dev = m.max_abs_diff(&m.adjoint());
    if herm_dev > tol.max(1e-12) * (1.0 + m.max_abs()) {
        return Err(Error::NotNormal(herm_dev));
    }
    let n = m.rows;
    let mut a = m.clone();
    // Symmetrize exactly so roundoff in the input cannot accumulate.
    for r in 0..n {
        for c in 0..n {
            let v = (a.get(r, c) + a.get(c, r).conj()) * 0.5;
            a.set(r, c, v);
        }
    }
    let mut v = DenseMatrix::identity(n);
    let scale = a.frobenius_norm().max(1e-300);
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += a.get(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = a.get(p, q);
                if g.norm() <= 1e-300 {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let absg = g.norm();
                let u = g / absg;
                let tau = (aqq - app) / (2.0 * absg);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = I with J[p][p]=c, J[p][q]=s*u, J[q][p]=-s*conj(u), J[q][q]=c
                // A <- J^dag A J ; V <- V J
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * c - akq * s * u.conj());
                    a.set(k, q, akp * (s * u) + akq * c);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * c - aqk * (s * u));
                    a.set(q, k, apk * (s * u.conj()) + aqk * c);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c - vkq * s * u.conj());
                    v.set(k, q, vkp * (s * u) + vkq * c);
                }
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let eigs: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| eigs[i].partial_cmp(&eigs[j]).expect("finite"));
    let sorted: Vec<f64> = order.iter().map(|&i| eigs[i]).collect();
    let mut vs = DenseMatrix::zeros(n, n);
    for (new_c, &old_c) in order.iter().enumerate() {
        for r in 0..n {
            vs.set(r, new_c, v.get(r, old_c));
        }
    }
    Ok((sorted, vs))
}

// ---------------------------------------------------------------------------
// Simultaneous diagonalization
// ---------------------------------------------------------------------------

/// Splitmix64: the deterministic generator used for random Hermitian
/// combinations. Passed explicitly, never global.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [0.5, 1.5); bounded away from zero so every matrix
    /// contributes to a combination.
    pub fn coefficient(&mut self) -> f64 {
        0.5 + self.next_f64()
    }
}

const EIGENVALUE_GAP: f64 = 1e-6;
const MAX_REDRAWS: u32 = 32;

/// Returns a unitary whose columns are common eigenvectors of the given
/// commuting normal matrices: `V^dag M V` is diagonal for every input.
///
/// Method: eigendecompose a seeded random combination of the Hermitian and
/// anti-Hermitian parts; eigenvalue clusters closer than the gap threshold
/// trigger a redraw (up to 32 times) and finally recursion into the
/// degenerate blocks.
pub fn simultaneous_eigenbasis(
    mats: &[DenseMatrix],
    seed: u64,
    tol: f64,
) -> Result<DenseMatrix> {
    let n = match mats.first() {
        Some(m) => m.rows,
        None => return Err(Error::InvalidInput("empty matrix family".into())),
    };
    for m in mats {
        if !m.is_square() || m.rows != n {
            return Err(Error::DimensionMismatch(m.rows, m.cols, n, n));
        }
        let ad = m.adjoint();
        let dev = m.mul(&ad)?.max_abs_diff(&ad.mul(m)?);
        if dev > tol * (1.0 + m.max_abs()).powi(2) {
            return Err(Error::NotNormal(dev));
        }
    }
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i + 1..] {
            let dev = commutator(a, b)?.max_abs();
            if dev > tol * (1.0 + a.max_abs()) * (1.0 + b.max_abs()) {
                return Err(Error::NotCommuting(dev));
            }
        }
    }
    // Hermitian and anti-Hermitian parts; near-zero parts are dropped.
    let mut herms: Vec<DenseMatrix> = Vec::new();
    for m in mats {
        let ad = m.adjoint();
        let h = m.add(&ad)?.scale(Complex64::new(0.5, 0.0));
        let k = m.sub(&ad)?.scale(Complex64::new(0.0, -0.5));
        for part in [h, k] {
            if part.max_abs() > 1e-14 {
                herms.push(part);
            }
        }
    }
    let mut rng = SplitMix64::new(seed);
    let identity_block: Vec<Vec<Complex64>> =
        (0..n).map(|i| (0..n).map(|j| Complex64::new(f64::from(i == j), 0.0)).collect()).collect();
    let cols = split_block(&identity_block, &herms, &mut rng, tol)?;
    let mut v = DenseMatrix::zeros(n, n);
    for (c, col) in cols.iter().enumerate() {
        let normalized = normalize_column_phase(col);
        for r in 0..n {
            v.set(r, c, normalized[r]);
        }
    }
    // Post-check: V must diagonalize every input.
    for m in mats {
        let d = v.adjoint().mul(m)?.mul(&v)?;
        let mut off = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    off = off.max(d.get(r, c).norm());
                }
            }
        }
        if off > 10.0 * tol * (1.0 + m.max_abs()) {
            return Err(Error::NotCommuting(off));
        }
    }
    Ok(v)
}

/// Recursively splits the orthonormal block spanned by `block` (columns of
/// the ambient space) until every restricted matrix is scalar. Returns the
/// final columns in a canonical order.
fn split_block(
    block: &[Vec<Complex64>],
    herms: &[DenseMatrix],
    rng: &mut SplitMix64,
    tol: f64,
) -> Result<Vec<Vec<Complex64>>> {
    let k = block.len();
    if k == 1 {
        return Ok(block.to_vec());
    }
    // Restrict to the block: W^dag H W for the isometry W with these columns.
    let restricted: Vec<DenseMatrix> = herms
        .iter()
        .map(|h| restrict(h, block))
        .collect::<Result<_>>()?;
    let active: Vec<&DenseMatrix> = restricted
        .iter()
        .filter(|r| {
            let mean = r.trace() / k as f64;
            let mut dev = 0.0f64;
            for i in 0..k {
                for j in 0..k {
                    let want = if i == j { mean } else { Complex64::new(0.0, 0.0) };
                    dev = dev.max((r.get(i, j) - want).norm());
                }
            }
            dev > tol.max(1e-12)
        })
        .collect();
    if active.is_empty() {
        // Joint eigenspace: keep a canonical order of the current columns.
        let mut out = block.to_vec();
        out.sort_by_key(|a| lex_key(a));
        return Ok(out);
    }
    let mut chosen: Option<(Vec<f64>, DenseMatrix)> = None;
    for attempt in 0..=MAX_REDRAWS {
        let mut comb = DenseMatrix::zeros(k, k);
        for h in &active {
            comb = comb.add(&h.scale(Complex64::new(rng.coefficient(), 0.0)))?;
        }
        let (eigs, vecs) = hermitian_eigen(&comb, tol)?;
        let collided = eigs.windows(2).any(|w| (w[1] - w[0]).abs() < EIGENVALUE_GAP);
        if !collided || attempt == MAX_REDRAWS {
            chosen = Some((eigs, vecs));
            if !collided {
                break;
            }
        }
        if attempt == MAX_REDRAWS {
            break;
        }
    }
    let (eigs, vecs) = chosen.expect("loop always assigns");
    // A non-scalar family whose combinations never split the block cannot
    // make progress; surface that instead of recursing forever.
    let fully_degenerate = eigs.windows(2).all(|w| (w[1] - w[0]).abs() < EIGENVALUE_GAP);
    if fully_degenerate && k > 1 {
        return Err(Error::DegenerateAfterRetries(MAX_REDRAWS));
    }
    // Lift local eigenvectors into the ambient space.
    let ambient = block[0].len();
    let lift = |col: usize| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); ambient];
        for (bi, bcol) in block.iter().enumerate() {
            let w = vecs.get(bi, col);
            for (o, &b) in out.iter_mut().zip(bcol) {
                *o += w * b;
            }
        }
        out
    };
    // Cluster by the gap threshold and recurse into non-trivial clusters.
    let mut out = Vec::with_capacity(k);
    let mut start = 0usize;
    while start < k {
        let mut end = start + 1;
        while end < k && (eigs[end] - eigs[end - 1]).abs() < EIGENVALUE_GAP {
            end += 1;
        }
        let cluster: Vec<Vec<Complex64>> = (start..end).map(lift).collect();
        if cluster.len() == 1 {
            out.extend(cluster);
        } else {
            out.extend(split_block(&cluster, herms, rng, tol)?);
        }
        start = end;
    }
    Ok(out)
}

/// `W^dag H W` for the isometry with the given orthonormal columns.
fn restrict(h: &DenseMatrix, block: &[Vec<Complex64>]) -> Result<DenseMatrix> {
    let k = block.len();
    let n = block[0].len();
    let mut out = DenseMatrix::zeros(k, k);
    for (j, col_j) in block.iter().enumerate() {
        // h * col_j
        let mut hv = vec![Complex64::new(0.0, 0.0); n];
        for r in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..n {
                acc += h.get(r, c) * col_j[c];
            }
            hv[r] = acc;
        }
        for (i, col_i) in block.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..n {
                acc += col_i[r].conj() * hv[r];
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Rotates a column so its first entry of modulus > 1e-8 is real positive.
fn normalize_column_phase(col: &[Complex64]) -> Vec<Complex64> {
    let pivot = col.iter().find(|z| z.norm() > 1e-8);
    match pivot {
        Some(z) => {
            let phase = z / z.norm();
            col.iter().map(|&v| v / phase).collect()
        }
        None => col.to_vec(),
    }
}

/// Rounded lexicographic key (6 decimals) used to break ordering ties.
fn lex_key(col: &[Complex64]) -> Vec<(i64, i64)> {
    col.iter()
        .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
        .collect()
}

// ---------------------------------------------------------------------------
// Subspaces
// ---------------------------------------------------------------------------

/// A complex subspace given by an orthonormalized spanning set.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Complex64>>,
}

impl Subspace {
    /// Orthonormalizes `vectors` by modified Gram-Schmidt, dropping
    /// directions below `tol_rank` relative to the largest input norm.
    pub fn from_vectors(ambient: usize, vectors: &[Vec<Complex64>], tol_rank: f64) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch(v.len(), 1, ambient, 1));
            }
        }
        let max_norm = vectors
            .iter()
            .map(|v| norm(v))
            .fold(0.0, f64::max)
            .max(1e-300);
        let mut basis: Vec<Vec<Complex64>> = Vec::new();
        for v in vectors {
            let mut w = v.clone();
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi -= c * bi;
                    }
                }
            }
            let nw = norm(&w);
            if nw > tol_rank * max_norm {
                let inv = 1.0 / nw;
                basis.push(w.into_iter().map(|z| z * inv).collect());
            }
        }
        Ok(Subspace { ambient, basis })
    }

    pub fn from_matrices(mats: &[DenseMatrix], tol_rank: f64) -> Result<Self> {
        let ambient = mats.first().map_or(0, |m| m.rows() * m.cols());
        let vecs: Vec<Vec<Complex64>> = mats.iter().map(|m| m.data().to_vec()).collect();
        Self::from_vectors(ambient, &vecs, tol_rank)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn orthonormal_basis(&self) -> &[Vec<Complex64>] {
        &self.basis
    }

    /// Residual norm of `v` after projecting onto the subspace.
    pub fn residual(&self, v: &[Complex64]) -> f64 {
        let mut w = v.to_vec();
        for b in &self.basis {
            let c = dot(b, &w);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
        norm(&w)
    }

    pub fn contains(&self, v: &[Complex64], tol: f64) -> bool {
        self.residual(v) <= tol * norm(v).max(1e-300)
    }

    pub fn contains_matrix(&self, m: &DenseMatrix, tol: f64) -> bool {
        self.contains(m.data(), tol)
    }
}

/// Numerical rank of a set of vectors at relative tolerance `tol_rank`.
pub fn subspace_rank(vectors: &[Vec<Complex64>], tol_rank: f64) -> usize {
    let ambient = vectors.first().map_or(0, |v| v.len());
    Subspace::from_vectors(ambient, vectors, tol_rank)
        .map(|s| s.rank())
        .unwrap_or(0)
}

pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> DenseMatrix {
        DenseMatrix::from_rows(vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]])
            .unwrap()
    }

    fn real_y() -> DenseMatrix {
        DenseMatrix::from_rows(vec![vec![c(0.0, 0.0), c(-1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]])
            .unwrap()
    }

    fn pauli_z() -> DenseMatrix {
        DenseMatrix::from_rows(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]])
            .unwrap()
    }

    #[test]
    fn trace_inner_basics() {
        let n = 4;
        let id = DenseMatrix::identity(n);
        assert!((trace_inner(&id, &id).unwrap() - c(n as f64, 0.0)).norm() < 1e-12);
        assert!(trace_inner(&pauli_x(), &pauli_z()).unwrap().norm() < 1e-12);
        // The shift matrix at p = 3: tr(X^dag X) = 3.
        let x3 = DenseMatrix::from_fn(3, 3, |r, cc| c(f64::from(cc == (r + 1) % 3), 0.0));
        assert!((trace_inner(&x3, &x3).unwrap() - c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn commutator_sl2_relations() {
        let (x, y, z) = (pauli_x(), real_y(), pauli_z());
        let two = c(2.0, 0.0);
        assert!(commutator(&x, &y).unwrap().max_abs_diff(&z.scale(two)) < 1e-12);
        assert!(commutator(&x, &z).unwrap().max_abs_diff(&y.scale(two)) < 1e-12);
        assert!(commutator(&y, &z).unwrap().max_abs_diff(&x.scale(two)) < 1e-12);
        assert!(commutator(&x, &x).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn predicate_checks() {
        let f3 = DenseMatrix::from_fn(3, 3, |r, c_| {
            Complex64::from_polar(1.0 / 3f64.sqrt(), 2.0 * std::f64::consts::PI * (r * c_) as f64 / 3.0)
        });
        assert!(is_unitary(&f3, 1e-9));
        let d = DenseMatrix::from_rows(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(2.0, 0.0)]])
            .unwrap();
        assert!(!is_unitary(&d, 1e-9));
        let nil = DenseMatrix::from_rows(vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]])
            .unwrap();
        assert!(!is_normal(&nil, 1e-9));
        assert!(is_traceless(&pauli_x(), 1e-12));
    }

    #[test]
    fn global_phase_comparison() {
        let x = pauli_x();
        let rotated = x.scale(Complex64::from_polar(1.0, 0.987));
        let phase = equal_up_to_global_phase(&x, &rotated, 1e-9).unwrap();
        assert!((phase - Complex64::from_polar(1.0, 0.987)).norm() < 1e-9);
        assert!(equal_up_to_global_phase(&x, &pauli_z(), 1e-9).is_none());
    }

    #[test]
    fn hermitian_eigen_diagonal() {
        let d = DenseMatrix::from_rows(vec![
            vec![c(3.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        let (eigs, v) = hermitian_eigen(&d, 1e-9).unwrap();
        assert!((eigs[0] + 1.0).abs() < 1e-12);
        assert!((eigs[1] - 3.0).abs() < 1e-12);
        assert!(is_unitary(&v, 1e-10));
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        // Seeded random Hermitian matrices of several sizes.
        let mut rng = SplitMix64::new(7);
        for n in [2usize, 3, 5, 8, 13] {
            let mut m = DenseMatrix::zeros(n, n);
            for r in 0..n {
                for cc in r..n {
                    let z = c(rng.next_f64() - 0.5, if cc == r { 0.0 } else { rng.next_f64() - 0.5 });
                    m.set(r, cc, z);
                    m.set(cc, r, z.conj());
                }
            }
            let (eigs, v) = hermitian_eigen(&m, 1e-9).unwrap();
            assert!(is_unitary(&v, 1e-10), "eigenvectors not unitary at n={n}");
            let mut d = DenseMatrix::zeros(n, n);
            for i in 0..n {
                d.set(i, i, c(eigs[i], 0.0));
            }
            let rec = v.mul(&d).unwrap().mul(&v.adjoint()).unwrap();
            assert!(rec.max_abs_diff(&m) < 1e-10 * (1.0 + m.max_abs()), "n={n}");
            assert!(eigs.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn simultaneous_single_diagonal() {
        let d = DenseMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let v = simultaneous_eigenbasis(&[d], 0, 1e-9).unwrap();
        // Columns must be the standard basis up to phase/permutation.
        for col in 0..2 {
            let nonzeros = (0..2).filter(|&r| v.get(r, col).norm() > 1e-9).count();
            assert_eq!(nonzeros, 1);
        }
    }

    #[test]
    fn simultaneous_identity_and_x() {
        let v = simultaneous_eigenbasis(&[DenseMatrix::identity(2), pauli_x()], 0, 1e-9).unwrap();
        let inv = 1.0 / 2f64.sqrt();
        for col in 0..2 {
            let a = v.get(0, col);
            let b = v.get(1, col);
            assert!((a.norm() - inv).abs() < 1e-9);
            assert!((b.norm() - inv).abs() < 1e-9);
        }
        let d = v.adjoint().mul(&pauli_x()).unwrap().mul(&v).unwrap();
        assert!(d.get(0, 1).norm() < 1e-9 && d.get(1, 0).norm() < 1e-9);
    }

    #[test]
    fn simultaneous_x_and_x_squared_p3() {
        // X for p=3 and its square: common eigenbasis is the Fourier basis.
        let x = DenseMatrix::from_fn(3, 3, |r, cc| {
            Complex64::new(f64::from(cc == (r + 1) % 3), 0.0)
        });
        let x2 = x.mul(&x).unwrap();
        let v = simultaneous_eigenbasis(&[x.clone(), x2], 3, 1e-9).unwrap();
        assert!(is_unitary(&v, 1e-9));
        let d = v.adjoint().mul(&x).unwrap().mul(&v).unwrap();
        for r in 0..3 {
            for cc in 0..3 {
                if r != cc {
                    assert!(d.get(r, cc).norm() < 1e-9);
                }
            }
        }
        // Each eigenvalue is a cube root of unity.
        for i in 0..3 {
            let lam = d.get(i, i);
            assert!((lam.norm() - 1.0).abs() < 1e-9);
            assert!((lam.powu(3) - c(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn simultaneous_rejects_non_commuting() {
        let r = simultaneous_eigenbasis(&[pauli_x(), pauli_z()], 0, 1e-9);
        assert!(matches!(r, Err(Error::NotCommuting(_))));
    }

    #[test]
    fn simultaneous_deterministic() {
        let x = pauli_x();
        let fam = vec![DenseMatrix::identity(2), x];
        let v1 = simultaneous_eigenbasis(&fam, 42, 1e-9).unwrap();
        let v2 = simultaneous_eigenbasis(&fam, 42, 1e-9).unwrap();
        assert_eq!(v1.data(), v2.data());
    }

    #[test]
    fn subspace_membership_and_rank() {
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let e2 = vec![c(0.0, 0.0), c(1.0, 0.0)];
        let s = Subspace::from_vectors(2, std::slice::from_ref(&e1), TOL_RANK).unwrap();
        assert!(s.contains(&e1, 1e-9));
        assert!(!s.contains(&e2, 1e-9));
        let sum = vec![c(1.0, 0.0), c(1.0, 0.0)];
        assert_eq!(subspace_rank(&[e1, sum, e2], TOL_RANK), 2);
    }
}
