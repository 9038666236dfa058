//! Exact combinatorial ingredients: finite fields `F_{p^e}`, abelian groups
//! and their character tables, mutually orthogonal Latin squares, and the
//! parallel classes of the net they generate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Default cap on the order of constructed fields and groups.
pub const DEFAULT_SIZE_CAP: u64 = 1 << 20;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Factorizes `n` into (prime, multiplicity) pairs, ascending by prime.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Returns `(p, e)` when `n = p^e` for a single prime `p`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

/// A field element: coefficient vector over `Z_p`, least-significant
/// coefficient first, length `e`.
pub type FfElem = Vec<u32>;

/// The finite field `F_{p^e}` as `Z_p[x]` modulo a monic irreducible.
///
/// The modulus is selected deterministically: the ascending scan over
/// `x^e + c_{e-1} x^{e-1} + ... + c_0` (counter value `sum c_i p^i`) stops at
/// the first irreducible polynomial, so `F_9` gets `x^2 + 1` and `F_8` gets
/// `x^3 + x + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    e: u32,
    /// Non-leading coefficients of the monic modulus, constant term first.
    modulus: Vec<u32>,
}

impl FiniteField {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        Self::with_cap(p, e, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(p: u64, e: u32, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidInput("extension degree must be >= 1".into()));
        }
        p.checked_pow(e)
            .filter(|&q| q <= cap)
            .ok_or(Error::SizeCap(p.saturating_pow(e.min(63)), cap))?;
        let p32 = p as u32;
        if e == 1 {
            // Modulus x: coefficient list is just the constant term 0.
            return Ok(FiniteField { p: p32, e, modulus: vec![0] });
        }
        for counter in 0..p.pow(e) {
            let mut coeffs = Vec::with_capacity(e as usize);
            let mut c = counter;
            for _ in 0..e {
                coeffs.push((c % p) as u32);
                c /= p;
            }
            if poly_is_irreducible(p32, &coeffs) {
                return Ok(FiniteField { p: p32, e, modulus: coeffs });
            }
        }
        unreachable!("irreducible polynomials of every degree exist over Z_p");
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }

    /// Non-leading modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FfElem {
        vec![0; self.e as usize]
    }

    pub fn one(&self) -> FfElem {
        let mut v = vec![0; self.e as usize];
        v[0] = 1;
        v
    }

    /// The class of `x`, a root of the modulus (equals 0 for e = 1).
    pub fn generator_x(&self) -> FfElem {
        let mut v = vec![0; self.e as usize];
        if self.e > 1 {
            v[1] = 1;
        }
        v
    }

    /// Element with index `i` under the enumeration `sum c_t p^t`.
    pub fn element(&self, mut i: u64) -> FfElem {
        let mut v = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            v.push((i % self.p as u64) as u32);
            i /= self.p as u64;
        }
        v
    }

    pub fn index_of(&self, a: &FfElem) -> u64 {
        let mut i = 0u64;
        for &c in a.iter().rev() {
            i = i * self.p as u64 + c as u64;
        }
        i
    }

    pub fn elements(&self) -> impl Iterator<Item = FfElem> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn is_zero(&self, a: &FfElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FfElem, b: &FfElem) -> FfElem {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn neg(&self, a: &FfElem) -> FfElem {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn sub(&self, a: &FfElem, b: &FfElem) -> FfElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FfElem, b: &FfElem) -> FfElem {
        let e = self.e as usize;
        let p = self.p as u64;
        // Schoolbook product, then reduction by the monic modulus.
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (e..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            // x^k = x^(k-e) * x^e = -x^(k-e) * (modulus tail)
            for (t, &m) in self.modulus.iter().enumerate() {
                let sub = c * m as u64 % p;
                prod[k - e + t] = (prod[k - e + t] + p - sub) % p;
            }
        }
        prod.truncate(e);
        prod.into_iter().map(|c| c as u32).collect()
    }

    pub fn pow(&self, a: &FfElem, mut k: u64) -> FfElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FfElem) -> Result<FfElem> {
        if self.is_zero(a) {
            return Err(Error::InvalidInput("zero has no inverse".into()));
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// The Frobenius automorphism `a -> a^p`.
    pub fn frobenius(&self, a: &FfElem) -> FfElem {
        self.pow(a, self.p as u64)
    }

    /// The `F_p`-linear trace `Tr(a) = a + a^p + ... + a^(p^(e-1))`,
    /// returned as an element of `Z_p`.
    pub fn trace(&self, a: &FfElem) -> u32 {
        let mut acc = self.zero();
        let mut t = a.clone();
        for _ in 0..self.e {
            acc = self.add(&acc, &t);
            t = self.frobenius(&t);
        }
        debug_assert!(acc[1..].iter().all(|&c| c == 0), "trace must land in Z_p");
        acc[0]
    }

    /// Finds a generator of the multiplicative group (order `p^e - 1`).
    pub fn multiplicative_generator(&self) -> FfElem {
        let q1 = self.order() - 1;
        let primes: Vec<u64> = factorize(q1).into_iter().map(|(p, _)| p).collect();
        'candidates: for i in 1..self.order() {
            let g = self.element(i);
            for &r in &primes {
                if self.pow(&g, q1 / r) == self.one() {
                    continue 'candidates;
                }
            }
            return g;
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }
}

/// Divides polynomials over `Z_p` (dense, constant first); returns remainder.
fn poly_rem(p: u32, num: &[u32], den: &[u32]) -> Vec<u32> {
    let dd = den.iter().rposition(|&c| c != 0).expect("nonzero divisor");
    let lead_inv = mod_inv(den[dd] as u64, p as u64) as u32;
    let mut r: Vec<u32> = num.to_vec();
    while let Some(rd) = r.iter().rposition(|&c| c != 0) {
        if rd < dd {
            break;
        }
        let factor = (r[rd] as u64 * lead_inv as u64 % p as u64) as u32;
        for i in 0..=dd {
            let sub = factor as u64 * den[i] as u64 % p as u64;
            let idx = rd - dd + i;
            r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p prime; Fermat.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut k = p - 2;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        k >>= 1;
    }
    acc
}

/// Irreducibility of the monic polynomial `x^e + tail` over `Z_p` by trial
/// division against every monic polynomial of degree 1..=e/2.
fn poly_is_irreducible(p: u32, tail: &[u32]) -> bool {
    let e = tail.len();
    let mut full: Vec<u32> = tail.to_vec();
    full.push(1);
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for counter in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut c = counter;
            for _ in 0..d {
                div.push((c % p as u64) as u32);
                c /= p as u64;
            }
            div.push(1);
            let r = poly_rem(p, &full, &div);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Computes the trace-dual basis `b*` with `Tr(b_i b*_j) = delta_ij` by
/// inverting the trace Gram matrix over `Z_p`.
pub fn dual_basis(field: &FiniteField, basis: &[FfElem]) -> Result<Vec<FfElem>> {
    let e = field.degree() as usize;
    if basis.len() != e {
        return Err(Error::InvalidInput(format!(
            "basis must have {} elements, got {}",
            e,
            basis.len()
        )));
    }
    let p = field.p() as u64;
    let mut gram = vec![vec![0u64; e]; e];
    for i in 0..e {
        for j in 0..e {
            gram[i][j] = field.trace(&field.mul(&basis[i], &basis[j])) as u64;
        }
    }
    let inv = invert_mod_p(&gram, p).ok_or(Error::SingularGram)?;
    // b*_j = sum_k inv[k][j] b_k
    let mut dual = Vec::with_capacity(e);
    for j in 0..e {
        let mut acc = field.zero();
        for k in 0..e {
            let mut s = field.zero();
            s[0] = inv[k][j] as u32;
            acc = field.add(&acc, &field.mul(&s, &basis[k]));
        }
        dual.push(acc);
    }
    Ok(dual)
}

/// Gauss-Jordan inverse over `Z_p`; `None` when singular.
fn invert_mod_p(m: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let mut inv: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let pinv = mod_inv(a[col][col], p);
        for j in 0..n {
            a[col][j] = a[col][j] * pinv % p;
            inv[col][j] = inv[col][j] * pinv % p;
        }
        for r in 0..n {
            if r == col || a[r][col] == 0 {
                continue;
            }
            let f = a[r][col];
            for j in 0..n {
                a[r][j] = (a[r][j] + (p - f) * a[col][j]) % p;
                inv[r][j] = (inv[r][j] + (p - f) * inv[col][j]) % p;
            }
        }
    }
    Some(inv)
}

/// A finite abelian group given by its cyclic factor orders; an element is a
/// tuple of residues, one per factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupSpec {
    factors: Vec<u32>,
}

impl AbelianGroupSpec {
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::InvalidInput("cyclic factor of order 0".into()));
        }
        Ok(AbelianGroupSpec { factors })
    }

    pub fn cyclic(n: u32) -> Self {
        AbelianGroupSpec { factors: vec![n] }
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().map(|&m| m as u64).product()
    }

    pub fn identity(&self) -> Vec<u32> {
        vec![0; self.factors.len()]
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        self.factors
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&m, (&x, &y))| (x + y) % m)
            .collect()
    }

    pub fn neg(&self, a: &[u32]) -> Vec<u32> {
        self.factors
            .iter()
            .zip(a)
            .map(|(&m, &x)| (m - x) % m)
            .collect()
    }

    /// Element with index `i` under mixed-radix enumeration, first factor
    /// most significant.
    pub fn element(&self, mut i: u64) -> Vec<u32> {
        let mut v = vec![0u32; self.factors.len()];
        for (slot, &m) in v.iter_mut().zip(&self.factors).rev() {
            *slot = (i % m as u64) as u32;
            i /= m as u64;
        }
        v
    }

    pub fn index_of(&self, a: &[u32]) -> u64 {
        let mut i = 0u64;
        for (&m, &x) in self.factors.iter().zip(a) {
            i = i * m as u64 + x as u64;
        }
        i
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn element_order(&self, a: &[u32]) -> u64 {
        self.factors
            .iter()
            .zip(a)
            .map(|(&m, &x)| {
                let m = m as u64;
                let x = x as u64;
                m / gcd(m, x)
            })
            .fold(1, lcm)
    }

    /// Canonical primary decomposition: sorted list of prime-power cyclic
    /// orders. Two specs are isomorphic iff these lists agree.
    pub fn canonical_factors(&self) -> Vec<u64> {
        let mut parts = Vec::new();
        for &m in &self.factors {
            if m == 1 {
                continue;
            }
            for (p, k) in factorize(m as u64) {
                parts.push(p.pow(k));
            }
        }
        parts.sort_unstable();
        parts
    }

    pub fn is_isomorphic_to(&self, other: &AbelianGroupSpec) -> bool {
        self.canonical_factors() == other.canonical_factors()
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 { 0 } else { a / gcd(a, b) * b }
}

/// The character table of `G`: row `g`, column `h` holds
/// `prod_t omega_{m_t}^{g_t h_t}`. Rows are pairwise orthogonal with inner
/// product `|G| delta` and the row set is closed under entrywise products.
pub fn character_table(group: &AbelianGroupSpec) -> DenseMatrix {
    let n = group.order() as usize;
    let factors = group.factors();
    DenseMatrix::from_fn(n, n, |r, c| {
        let g = group.element(r as u64);
        let h = group.element(c as u64);
        let mut angle = 0.0f64;
        for ((&m, &gt), &ht) in factors.iter().zip(&g).zip(&h) {
            angle += 2.0 * std::f64::consts::PI * (gt as u64 * ht as u64 % m as u64) as f64
                / m as f64;
        }
        Complex64::from_polar(1.0, angle)
    })
}

/// Decides whether the unimodular matrix `h` is (a row/column permutation of)
/// the character table of a finite abelian group, and if so returns that
/// group's cyclic structure.
///
/// Detection: the rows must contain an all-ones row, be closed under
/// entrywise product within `tol`, and likewise for columns; the closure
/// table is then an abelian group whose cyclic factors are extracted by
/// repeatedly splitting off a maximal-order cyclic subgroup.
pub fn is_character_table(h: &DenseMatrix, tol: f64) -> Result<Option<AbelianGroupSpec>> {
    let m = h.rows();
    if h.cols() != m || m == 0 {
        return Ok(None);
    }
    for r in 0..m {
        for c in 0..m {
            let a = h.get(r, c).norm();
            if (a - 1.0).abs() > tol {
                return Err(Error::NotUnimodular(r, c, a));
            }
        }
    }
    let rows: Vec<Vec<Complex64>> = (0..m).map(|r| h.row(r).to_vec()).collect();
    let cols: Vec<Vec<Complex64>> = (0..m)
        .map(|c| (0..m).map(|r| h.get(r, c)).collect())
        .collect();
    let row_table = match closure_table(&rows, tol) {
        Some(t) => t,
        None => return Ok(None),
    };
    if closure_table(&cols, tol).is_none() {
        return Ok(None);
    }
    Ok(group_from_table(&row_table).map(|factors| AbelianGroupSpec { factors }))
}

/// Builds the multiplication table of the row set under entrywise product,
/// requiring an identity (all-ones) row. `None` when the set is not closed.
fn closure_table(vectors: &[Vec<Complex64>], tol: f64) -> Option<Vec<Vec<usize>>> {
    let m = vectors.len();
    let ones_present = vectors
        .iter()
        .any(|v| v.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() <= tol));
    if !ones_present {
        return None;
    }
    let mut table = vec![vec![0usize; m]; m];
    for i in 0..m {
        for j in i..m {
            let prod: Vec<Complex64> = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b).collect();
            let k = vectors.iter().position(|v| {
                v.iter().zip(&prod).all(|(a, b)| (a - b).norm() <= tol)
            })?;
            table[i][j] = k;
            table[j][i] = k;
        }
    }
    Some(table)
}

/// Extracts cyclic factors from a finite abelian multiplication table.
/// The operation is commutative and cancellative by construction (entrywise
/// products of unimodular vectors), so closure plus identity already
/// guarantees a group.
fn group_from_table(table: &[Vec<usize>]) -> Option<Vec<u32>> {
    let m = table.len();
    let id = (0..m).find(|&i| table[i].iter().enumerate().all(|(j, &k)| k == j))?;
    // Peel off maximal-order cyclic subgroups working in successive
    // quotients. Cosets are represented by their sorted element sets.
    let mut factors: Vec<u32> = Vec::new();
    let mut cosets: Vec<Vec<usize>> = (0..m).map(|g| vec![g]).collect();
    let coset_op = |cosets: &[Vec<usize>], a: usize, b: usize| -> usize {
        let rep = table[cosets[a][0]][cosets[b][0]];
        cosets.iter().position(|c| c.contains(&rep)).expect("closed")
    };
    while cosets.len() > 1 {
        let idc = cosets.iter().position(|c| c.contains(&id)).expect("identity coset");
        let ord_in = |g: usize| -> u64 {
            let mut acc = g;
            let mut ord = 1u64;
            while acc != idc {
                acc = coset_op(&cosets, acc, g);
                ord += 1;
            }
            ord
        };
        let (gen, max_ord) = (0..cosets.len())
            .map(|g| (g, ord_in(g)))
            .max_by_key(|&(_, o)| o)?;
        if max_ord == 1 {
            return None;
        }
        factors.push(max_ord as u32);
        // Subgroup generated by `gen`, then merge cosets.
        let mut sub = vec![idc];
        let mut acc = gen;
        while acc != idc {
            sub.push(acc);
            acc = coset_op(&cosets, acc, gen);
        }
        let mut merged: Vec<Vec<usize>> = Vec::new();
        let mut seen = vec![false; cosets.len()];
        for a in 0..cosets.len() {
            if seen[a] {
                continue;
            }
            let mut class: Vec<usize> = Vec::new();
            for &s in &sub {
                let b = coset_op(&cosets, a, s);
                seen[b] = true;
                class.extend(cosets[b].iter().copied());
            }
            class.sort_unstable();
            class.dedup();
            merged.push(class);
        }
        cosets = merged;
    }
    let prod: u64 = factors.iter().map(|&f| f as u64).product();
    (prod == m as u64).then_some(factors)
}

/// A Latin square of order `s`: every row and column is a permutation of
/// `{0, ..., s-1}`. Serializes as the bare `s x s` integer array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    s: usize,
    cells: Vec<Vec<u32>>,
}

impl Serialize for LatinSquare {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.cells.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LatinSquare {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let cells = Vec::<Vec<u32>>::deserialize(deserializer)?;
        LatinSquare::new(cells).map_err(serde::de::Error::custom)
    }
}

impl LatinSquare {
    pub fn new(cells: Vec<Vec<u32>>) -> Result<Self> {
        let s = cells.len();
        let sq = LatinSquare { s, cells };
        if !sq.is_valid() {
            return Err(Error::InvalidInput("not a latin square".into()));
        }
        Ok(sq)
    }

    pub fn order(&self) -> usize {
        self.s
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.cells[i][j]
    }

    pub fn is_valid(&self) -> bool {
        let s = self.s;
        if self.cells.iter().any(|r| r.len() != s) {
            return false;
        }
        let full: Vec<bool> = vec![true; s];
        for i in 0..s {
            let mut row = vec![false; s];
            let mut col = vec![false; s];
            for j in 0..s {
                let a = self.cells[i][j] as usize;
                let b = self.cells[j][i] as usize;
                if a >= s || b >= s {
                    return false;
                }
                row[a] = true;
                col[b] = true;
            }
            if row != full || col != full {
                return false;
            }
        }
        true
    }

    /// Superimposing two squares must produce every ordered pair exactly once.
    pub fn is_orthogonal_to(&self, other: &LatinSquare) -> bool {
        if self.s != other.s {
            return false;
        }
        let mut seen = vec![false; self.s * self.s];
        for i in 0..self.s {
            for j in 0..self.s {
                let k = self.get(i, j) as usize * self.s + other.get(i, j) as usize;
                if seen[k] {
                    return false;
                }
                seen[k] = true;
            }
        }
        true
    }
}

/// The full set of `s - 1` mutually orthogonal Latin squares
/// `L_a(i, j) = a*i + j` over `F_s`, for `a != 0`.
pub fn mols_from_field(s: u64) -> Result<Vec<LatinSquare>> {
    let (p, e) = prime_power(s).ok_or(Error::NotPrimePower(s))?;
    let field = FiniteField::new(p, e)?;
    let n = s as usize;
    let mut squares = Vec::with_capacity(n - 1);
    for a in 1..s {
        let a = field.element(a);
        let mut cells = vec![vec![0u32; n]; n];
        for (i, row) in cells.iter_mut().enumerate() {
            let ai = field.mul(&a, &field.element(i as u64));
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = field.index_of(&field.add(&ai, &field.element(j as u64))) as u32;
            }
        }
        squares.push(LatinSquare { s: n, cells });
    }
    Ok(squares)
}

/// One parallel class of a net on `s^2` points: `s` disjoint blocks of `s`
/// points each, covering every point once. Points are indexed `p = s*i + j`.
/// Serializes as the bare block list (an `s x s` integer array).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelClass {
    s: usize,
    blocks: Vec<Vec<usize>>,
}

impl Serialize for ParallelClass {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ParallelClass {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(deserializer)?;
        let s = blocks.len();
        ParallelClass::new(s, blocks).map_err(serde::de::Error::custom)
    }
}

impl ParallelClass {
    pub fn new(s: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let pc = ParallelClass { s, blocks };
        pc.validate()?;
        Ok(pc)
    }

    fn validate(&self) -> Result<()> {
        let s = self.s;
        if self.blocks.len() != s || self.blocks.iter().any(|b| b.len() != s) {
            return Err(Error::BadNet(format!("expected {s} blocks of {s} points")));
        }
        let mut seen = vec![false; s * s];
        for b in &self.blocks {
            for &p in b {
                if p >= s * s || seen[p] {
                    return Err(Error::BadNet("blocks do not partition the points".into()));
                }
                seen[p] = true;
            }
        }
        Ok(())
    }

    pub fn block_size(&self) -> usize {
        self.s
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Blocks from distinct classes of a net meet in exactly one point.
    pub fn meets_like_net(&self, other: &ParallelClass) -> bool {
        if self.s != other.s {
            return false;
        }
        for a in &self.blocks {
            for b in &other.blocks {
                let count = a.iter().filter(|p| b.contains(p)).count();
                if count != 1 {
                    return false;
                }
            }
        }
        true
    }
}

/// Parallel classes of the net on `s^2` points built from pairwise orthogonal
/// Latin squares: rows, columns, and one class of level sets per square.
pub fn net_parallel_classes(mols: &[LatinSquare]) -> Result<Vec<ParallelClass>> {
    let s = match mols.first() {
        Some(sq) => sq.order(),
        None => {
            return Err(Error::InvalidInput(
                "net order is undetermined without at least one square".into(),
            ))
        }
    };
    for (i, a) in mols.iter().enumerate() {
        if a.order() != s {
            return Err(Error::InvalidInput("latin squares of mixed order".into()));
        }
        for b in &mols[i + 1..] {
            if !a.is_orthogonal_to(b) {
                return Err(Error::NotOrthogonal);
            }
        }
    }
    net_parallel_classes_of_order(s, mols)
}

/// Same as [`net_parallel_classes`] but usable with zero squares (rows and
/// columns only) by passing the order explicitly.
pub fn net_parallel_classes_of_order(s: usize, mols: &[LatinSquare]) -> Result<Vec<ParallelClass>> {
    let mut classes = Vec::with_capacity(mols.len() + 2);
    let rows = (0..s).map(|i| (0..s).map(|j| s * i + j).collect()).collect();
    let cols = (0..s).map(|j| (0..s).map(|i| s * i + j).collect()).collect();
    classes.push(ParallelClass { s, blocks: rows });
    classes.push(ParallelClass { s, blocks: cols });
    for sq in mols {
        if sq.order() != s {
            return Err(Error::InvalidInput("latin squares of mixed order".into()));
        }
        let mut blocks = vec![Vec::with_capacity(s); s];
        for i in 0..s {
            for j in 0..s {
                blocks[sq.get(i, j) as usize].push(s * i + j);
            }
        }
        classes.push(ParallelClass { s, blocks });
    }
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            if !a.meets_like_net(b) {
                return Err(Error::NotOrthogonal);
            }
        }
    }
    Ok(classes)
}
