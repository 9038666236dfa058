//! Exact arithmetic for monomial matrices: one root-of-unity entry per row
//! and column. These carry the generalized Pauli operators and every other
//! construction that the dense machinery only needs to verify.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::{gcd, lcm};
use crate::linalg::DenseMatrix;

/// Default cap on the root order used when recognizing a dense matrix as
/// monomial: lcm(16, 3, 5) covers every dimension up to 16.
pub const SNAP_ORDER_CAP: u64 = 240;

/// An exact monomial matrix: column `j` maps to `omega_order^exps[j]` times
/// basis vector `perm[j]`, i.e. entry `(perm[j], j)` is that root of unity
/// and all other entries are zero. Always unitary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialMatrix {
    n: usize,
    order: u64,
    perm: Vec<usize>,
    exps: Vec<u64>,
}

impl MonomialMatrix {
    pub fn new(n: usize, order: u64, perm: Vec<usize>, exps: Vec<u64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("root order must be >= 1".into()));
        }
        if perm.len() != n || exps.len() != n {
            return Err(Error::InvalidInput("perm/exps length must equal n".into()));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidInput("perm is not a bijection".into()));
            }
            seen[p] = true;
        }
        let exps = exps.into_iter().map(|e| e % order).collect();
        Ok(MonomialMatrix { n, order, perm, exps })
    }

    pub fn identity(n: usize) -> Self {
        MonomialMatrix { n, order: 1, perm: (0..n).collect(), exps: vec![0; n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    /// Exact product. Root orders are unified to their lcm.
    pub fn mul(&self, other: &MonomialMatrix) -> Result<MonomialMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, self.n, other.n, other.n));
        }
        let order = lcm(self.order, other.order);
        let (sa, sb) = (order / self.order, order / other.order);
        let mut perm = vec![0usize; self.n];
        let mut exps = vec![0u64; self.n];
        for j in 0..self.n {
            let mid = other.perm[j];
            perm[j] = self.perm[mid];
            exps[j] = (self.exps[mid] * sa + other.exps[j] * sb) % order;
        }
        Ok(MonomialMatrix { n: self.n, order, perm, exps })
    }

    /// Conjugate transpose: inverts the permutation and negates exponents.
    pub fn adjoint(&self) -> MonomialMatrix {
        let mut perm = vec![0usize; self.n];
        let mut exps = vec![0u64; self.n];
        for j in 0..self.n {
            perm[self.perm[j]] = j;
            exps[self.perm[j]] = (self.order - self.exps[j]) % self.order;
        }
        MonomialMatrix { n: self.n, order: self.order, perm, exps }
    }

    pub fn pow(&self, k: u64) -> MonomialMatrix {
        let mut acc = MonomialMatrix::identity(self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same dimension");
            }
            base = base.mul(&base).expect("same dimension");
            k >>= 1;
        }
        acc
    }

    /// Multiplies by the global phase `omega_order'^exp`.
    pub fn scale_root(&self, order: u64, exp: u64) -> MonomialMatrix {
        let merged = lcm(self.order, order);
        let (sa, sb) = (merged / self.order, merged / order);
        let exps = self.exps.iter().map(|&e| (e * sa + exp % order * sb) % merged).collect();
        MonomialMatrix { n: self.n, order: merged, perm: self.perm.clone(), exps }
    }

    /// Exact trace as a multiset of root-of-unity exponents.
    pub fn trace(&self) -> TraceSum {
        let mut exps = Vec::new();
        for j in 0..self.n {
            if self.perm[j] == j {
                exps.push(self.exps[j]);
            }
        }
        exps.sort_unstable();
        TraceSum { order: self.order, exps }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &p)| p == j) && self.exps.iter().all(|&e| e == 0)
    }

    /// Semantic equality: same dense realization. Exponents are compared as
    /// reduced fractions so differing stored orders cannot mask equality.
    pub fn equal(&self, other: &MonomialMatrix) -> bool {
        self.n == other.n
            && self.perm == other.perm
            && (0..self.n).all(|j| {
                reduce_fraction(self.exps[j], self.order) == reduce_fraction(other.exps[j], other.order)
            })
    }

    /// When `self = omega^t other` for a root of unity, returns `(order, t)`
    /// with the phase expressed at the common order.
    pub fn phase_from(&self, other: &MonomialMatrix) -> Option<(u64, u64)> {
        if self.n != other.n || self.perm != other.perm {
            return None;
        }
        let order = lcm(self.order, other.order);
        let (sa, sb) = (order / self.order, order / other.order);
        let mut phase: Option<u64> = None;
        for j in 0..self.n {
            let d = (self.exps[j] * sa + order - other.exps[j] * sb % order) % order;
            match phase {
                None => phase = Some(d),
                Some(p) if p != d => return None,
                _ => {}
            }
        }
        phase.map(|p| (order, p))
    }

    pub fn commutes_with(&self, other: &MonomialMatrix) -> Result<bool> {
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        Ok(ab.equal(&ba))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n, self.n);
        for j in 0..self.n {
            let angle = 2.0 * std::f64::consts::PI * self.exps[j] as f64 / self.order as f64;
            m.set(self.perm[j], j, Complex64::from_polar(1.0, angle));
        }
        m
    }

    /// Recognizes a dense matrix as monomial: entries of modulus 0 or 1
    /// within `tol`, one nonzero per row and column, phases snapped to the
    /// nearest root of unity of order at most `order_cap`.
    pub fn from_dense(m: &DenseMatrix, tol: f64, order_cap: u64) -> Option<MonomialMatrix> {
        if !m.is_square() {
            return None;
        }
        let n = m.rows();
        let mut perm = vec![usize::MAX; n];
        let mut row_used = vec![false; n];
        let mut entry_orders = Vec::with_capacity(n);
        let mut entry_exps = Vec::with_capacity(n);
        for j in 0..n {
            let mut found = None;
            for r in 0..n {
                let a = m.get(r, j).norm();
                if a > tol {
                    if (a - 1.0).abs() > tol || found.is_some() {
                        return None;
                    }
                    found = Some(r);
                }
            }
            let r = found?;
            if row_used[r] {
                return None;
            }
            row_used[r] = true;
            perm[j] = r;
            let (ord, exp) = snap_to_root(m.get(r, j), tol, order_cap)?;
            entry_orders.push(ord);
            entry_exps.push(exp);
        }
        let mut order = 1u64;
        for &o in &entry_orders {
            order = lcm(order, o);
            if order > 1 << 32 {
                return None;
            }
        }
        let exps = entry_orders
            .iter()
            .zip(&entry_exps)
            .map(|(&o, &e)| e * (order / o) % order)
            .collect();
        Some(MonomialMatrix { n, order, perm, exps })
    }
}

fn reduce_fraction(num: u64, den: u64) -> (u64, u64) {
    let num = num % den;
    if num == 0 {
        return (0, 1);
    }
    let g = gcd(num, den);
    (num / g, den / g)
}

/// Snaps a unimodular complex number to the lowest-order root of unity
/// within `tol`; returns `(order, exponent)`.
pub fn snap_to_root(z: Complex64, tol: f64, order_cap: u64) -> Option<(u64, u64)> {
    let angle = z.arg().rem_euclid(2.0 * std::f64::consts::PI);
    for m in 1..=order_cap {
        let k = (angle * m as f64 / (2.0 * std::f64::consts::PI)).round() as u64 % m;
        let target = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64);
        if (z - target).norm() <= tol {
            return Some((m, k));
        }
    }
    None
}

/// Exact trace of a monomial matrix: the multiset of root exponents summed,
/// with vanishing decided in the cyclotomic field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSum {
    order: u64,
    exps: Vec<u64>,
}

impl TraceSum {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn value(&self) -> Complex64 {
        self.exps
            .iter()
            .map(|&e| {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / self.order as f64)
            })
            .sum()
    }

    /// Exact vanishing test: the sum of roots is zero iff the exponent-count
    /// polynomial is divisible by the cyclotomic polynomial `Phi_order`.
    pub fn is_zero(&self) -> bool {
        if self.exps.is_empty() {
            return true;
        }
        let m = self.order as usize;
        let mut counts = vec![0i128; m];
        for &e in &self.exps {
            counts[e as usize % m] += 1;
        }
        let phi = cyclotomic_poly(self.order);
        poly_rem_int(&counts, &phi).iter().all(|&c| c == 0)
    }

    /// Exact equality with the integer `k` (as a complex number).
    pub fn equals_integer(&self, k: i64) -> bool {
        let m = self.order as usize;
        let mut counts = vec![0i128; m];
        for &e in &self.exps {
            counts[e as usize % m] += 1;
        }
        counts[0] -= k as i128;
        let phi = cyclotomic_poly(self.order);
        poly_rem_int(&counts, &phi).iter().all(|&c| c == 0)
    }
}

/// Cyclotomic polynomial `Phi_m` with integer coefficients, constant first,
/// computed as `(x^m - 1) / prod_{d | m, d < m} Phi_d`.
pub fn cyclotomic_poly(m: u64) -> Vec<i128> {
    let mut num = vec![0i128; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi_d = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials (remainder must vanish).
fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = num.iter().rposition(|&c| c != 0).expect("nonzero");
    let dd = den.iter().rposition(|&c| c != 0).expect("nonzero");
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut rem: Vec<i128> = num.to_vec();
    let mut quot = vec![0i128; dn - dd + 1];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c == 0 {
            continue;
        }
        for i in 0..=dd {
            rem[k + i] -= c * den[i];
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "division must be exact");
    quot
}

/// Remainder of an integer polynomial modulo a monic divisor.
fn poly_rem_int(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dd = den.iter().rposition(|&c| c != 0).expect("nonzero divisor");
    let mut rem: Vec<i128> = num.to_vec();
    while let Some(rd) = rem.iter().rposition(|&c| c != 0) {
        if rd < dd {
            break;
        }
        let c = rem[rd];
        for i in 0..=dd {
            rem[rd - dd + i] -= c * den[i];
        }
    }
    rem
}

/// A label `(x, z)` in `Z_p^e x Z_p^e` for a tensor product of generalized
/// Pauli factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliLabel {
    pub p: u32,
    pub e: u32,
    pub x: Vec<u32>,
    pub z: Vec<u32>,
}

impl PauliLabel {
    pub fn new(p: u32, e: u32, x: Vec<u32>, z: Vec<u32>) -> Result<Self> {
        if x.len() != e as usize || z.len() != e as usize {
            return Err(Error::InvalidInput("label length must equal the degree".into()));
        }
        let x = x.into_iter().map(|v| v % p).collect();
        let z = z.into_iter().map(|v| v % p).collect();
        Ok(PauliLabel { p, e, x, z })
    }
}

/// The tensor product `X^{x_1} Z^{z_1} (x) ... (x) X^{x_e} Z^{z_e}` acting on
/// `C^{p^e}`, with factor 1 on the most significant digit of the index.
///
/// Single-factor conventions: `X` maps basis vector `j` to `j - 1 mod p`
/// (the shift with `X = sum |k><k+1|`) and `Z` scales basis vector `j` by
/// `omega_p^j`.
pub fn pauli(label: &PauliLabel) -> MonomialMatrix {
    let p = label.p as u64;
    let e = label.e as usize;
    let n = p.pow(label.e) as usize;
    let mut perm = vec![0usize; n];
    let mut exps = vec![0u64; n];
    for (j, (pj, ej)) in perm.iter_mut().zip(exps.iter_mut()).enumerate() {
        // Digits of j, most significant first.
        let mut digits = vec![0u64; e];
        let mut rest = j as u64;
        for t in (0..e).rev() {
            digits[t] = rest % p;
            rest /= p;
        }
        let mut target = 0u64;
        let mut phase = 0u64;
        for t in 0..e {
            let xt = label.x[t] as u64;
            let zt = label.z[t] as u64;
            let new_digit = (digits[t] + p - xt % p) % p;
            phase = (phase + zt * digits[t]) % p;
            target = target * p + new_digit;
        }
        *pj = target as usize;
        *ej = phase;
    }
    MonomialMatrix { n, order: p, perm, exps }
}

/// The degree-`n` analogue `X^x Z^z` with `omega = e^{2 pi i / n}`, the
/// building block of the Weyl-Heisenberg basis indexed by `Z_n x Z_n`.
pub fn composite_pauli(n: usize, x: u64, z: u64) -> MonomialMatrix {
    let nn = n as u64;
    let (x, z) = (x % nn, z % nn);
    let mut perm = vec![0usize; n];
    let mut exps = vec![0u64; n];
    for j in 0..n {
        perm[j] = ((j as u64 + nn - x) % nn) as usize;
        exps[j] = z * j as u64 % nn;
    }
    MonomialMatrix { n, order: nn, perm, exps }
}
