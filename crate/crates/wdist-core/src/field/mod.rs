//! Exact arithmetic in GF(p^n) for odd p, table-driven.
//!
//! A [`FieldCtx`] owns three flat tables built once at construction:
//!
//! * `exp[i]`   — the element α^i, for the primitive element α (the residue
//!   class of x modulo a primitive polynomial), i ∈ [0, p^n − 1);
//! * `log[e]`   — the inverse map on nonzero elements;
//! * `tr1[e]`   — the absolute trace Tr(e) ∈ F_p per element.
//!
//! Elements are stored as packed base-p coefficient vectors: the element
//! Σ c_j α^j has index Σ c_j p^j, so index 0 is the zero element and index 1
//! is the multiplicative identity. All operations are pure functions of
//! `(ctx, inputs)`; the context is immutable after construction and safe to
//! share across worker threads.

pub mod poly;

use serde::Serialize;

/// Default cap on the field size p^n for table construction (element count).
pub const DEFAULT_TABLE_ELEMS: u64 = 1 << 24;

/// Hard cap: packed element indexes must fit comfortably in 32 bits.
const HARD_TABLE_ELEMS: u64 = 1 << 31;

/// Approximate table bytes per element (exp + log + tr1, 4 bytes each).
pub const TABLE_BYTES_PER_ELEMENT: u64 = 12;

const LOG_ZERO: u32 = u32::MAX;

/// Errors from field construction and element arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is out of scope; p must be odd")]
    EvenCharacteristic,
    #[error("modulus is reducible over F_{0}")]
    ReduciblePolynomial(u64),
    #[error("modulus is irreducible but x has order below p^n - 1")]
    NotPrimitive,
    #[error("field size p^n = {p}^{n} exceeds the table cap of {cap} elements")]
    TableLimitExceeded { p: u64, n: u32, cap: u64 },
    #[error("division by zero in GF(p^n)")]
    DivisionByZero,
    #[error("{m} does not divide the extension degree {n}")]
    NotADivisor { m: u32, n: u32 },
    #[error("malformed modulus: {0}")]
    InvalidModulus(String),
}

/// Errors from code-parameter validation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is out of scope; p must be odd")]
    EvenCharacteristic,
    #[error("n = {0} is below the minimum extension degree 3")]
    NTooSmall(u32),
    #[error("s = n/gcd(n,k) = {0} is even; the standing hypotheses require odd s")]
    EvenS(u32),
    #[error("k must be at least 1")]
    KTooSmall,
}

/// An element of GF(p^n), stored as its packed base-p coefficient index.
///
/// The packing is context-dependent; elements only combine through the
/// [`FieldCtx`] that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    /// The packed coefficient index (Σ c_j p^j for coefficients c_j).
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Validated (p, n, k) with the derived quantities d = gcd(n, k), s = n/d.
///
/// Carries the standing hypotheses: p an odd prime, n ≥ 3, s odd, k ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub p: u64,
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub s: u32,
}

impl CodeParams {
    /// p^e as u64, panicking on overflow (sizes are validated upstream).
    pub fn p_pow(&self, e: u32) -> u64 {
        self.p.checked_pow(e).expect("p^e fits u64 at validated sizes")
    }

    /// Field size p^n.
    pub fn q(&self) -> u64 {
        self.p_pow(self.n)
    }
}

/// Check the standing hypotheses and derive d and s.
pub fn validate_params(p: u64, n: u32, k: u32) -> Result<CodeParams, ParamError> {
    if !poly::is_prime(p) {
        return Err(ParamError::NotPrime(p));
    }
    if p == 2 {
        return Err(ParamError::EvenCharacteristic);
    }
    if n < 3 {
        return Err(ParamError::NTooSmall(n));
    }
    if k == 0 {
        return Err(ParamError::KTooSmall);
    }
    let d = gcd_u32(n, k);
    let s = n / d;
    if s % 2 == 0 {
        return Err(ParamError::EvenS(s));
    }
    Ok(CodeParams { p, n, k, d, s })
}

fn gcd_u32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The quadratic character η of F_p: 0 at 0, +1 on nonzero squares, −1 otherwise.
///
/// Computed by Euler's criterion a^{(p−1)/2} mod p.
pub fn quadratic_character(p: u64, a: i64) -> i8 {
    debug_assert!(p >= 3 && poly::is_prime(p));
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    let e = poly::pow_mod_u64(r, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, p - 1);
        -1
    }
}

/// Parse the modulus text format: comma-separated ascending coefficients,
/// e.g. `"1,2,0,1"` for 1 + 2x + x³.
pub fn parse_modulus(s: &str) -> Result<Vec<u64>, FieldError> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let c: u64 = part
            .trim()
            .parse()
            .map_err(|_| FieldError::InvalidModulus(format!("bad coefficient {part:?}")))?;
        out.push(c);
    }
    if out.is_empty() {
        return Err(FieldError::InvalidModulus("empty coefficient list".into()));
    }
    Ok(out)
}

/// Render a coefficient vector in the modulus text format.
pub fn format_modulus(coeffs: &[u64]) -> String {
    coeffs
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Immutable description of GF(p^n): modulus, primitive element, and the
/// exp/log/trace tables.
pub struct FieldCtx {
    p: u64,
    n: u32,
    q: u64,
    q1: u64,
    modulus: Vec<u64>,
    /// p^j mod (q − 1) for j in 0..n: Frobenius as a log-domain multiplier.
    frob_pow: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    tr1: Vec<u32>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &format_modulus(&self.modulus))
            .finish()
    }
}

/// Build GF(p^n) with the default table cap; searches for the lexicographically
/// smallest primitive modulus when none is given. Deterministic for fixed (p, n).
pub fn make_field(p: u64, n: u32, modulus: Option<&[u64]>) -> Result<FieldCtx, FieldError> {
    make_field_capped(p, n, modulus, DEFAULT_TABLE_ELEMS)
}

/// As [`make_field`], with an explicit cap on the table element count p^n.
pub fn make_field_capped(
    p: u64,
    n: u32,
    modulus: Option<&[u64]>,
    table_cap: u64,
) -> Result<FieldCtx, FieldError> {
    if !poly::is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if p == 2 {
        return Err(FieldError::EvenCharacteristic);
    }
    assert!(n >= 1, "extension degree must be at least 1");
    let cap = table_cap.min(HARD_TABLE_ELEMS);
    let q = match p.checked_pow(n) {
        Some(q) if q <= cap => q,
        _ => return Err(FieldError::TableLimitExceeded { p, n, cap }),
    };

    let modulus: Vec<u64> = match modulus {
        Some(m) => {
            let m: Vec<u64> = m.to_vec();
            if m.len() != n as usize + 1 {
                return Err(FieldError::InvalidModulus(format!(
                    "expected degree {n} (length {}), got length {}",
                    n + 1,
                    m.len()
                )));
            }
            if m[n as usize] != 1 {
                return Err(FieldError::InvalidModulus("modulus must be monic".into()));
            }
            if m.iter().any(|&c| c >= p) {
                return Err(FieldError::InvalidModulus(format!(
                    "coefficients must lie in [0, {p})"
                )));
            }
            if !poly::is_irreducible(&m, p) {
                return Err(FieldError::ReduciblePolynomial(p));
            }
            if !poly::x_is_primitive(&m, p) {
                return Err(FieldError::NotPrimitive);
            }
            m
        }
        None => poly::find_primitive_modulus(p, n),
    };

    Ok(build_tables(p, n, q, modulus))
}

fn build_tables(p: u64, n: u32, q: u64, modulus: Vec<u64>) -> FieldCtx {
    let q1 = q - 1;
    let nn = n as usize;

    // exp: iterate multiplication by α (= x mod f) on a coefficient vector.
    let mut exp = vec![0u32; q1 as usize];
    let mut cur = vec![0u64; nn];
    cur[0] = 1;
    for slot in exp.iter_mut() {
        *slot = pack(&cur, p);
        // cur *= x, then reduce by the monic modulus.
        let top = cur[nn - 1];
        for j in (1..nn).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for j in 0..nn {
                let t = top * modulus[j] % p;
                cur[j] = (cur[j] + p - t) % p;
            }
        }
    }
    debug_assert_eq!(pack(&cur, p), 1, "α^{{q-1}} must return to 1");

    let mut log = vec![LOG_ZERO; q as usize];
    for (i, &e) in exp.iter().enumerate() {
        debug_assert_eq!(log[e as usize], LOG_ZERO, "powers of α must be distinct");
        log[e as usize] = i as u32;
    }

    // Frobenius multipliers p^j mod (q − 1).
    let mut frob_pow = vec![1u64; nn];
    for j in 1..nn {
        frob_pow[j] = frob_pow[j - 1] * p % q1;
    }

    // Absolute trace: first on the power basis, then linearly on all elements.
    let mut tr_basis = vec![0u64; nn];
    for (j, basis_trace) in tr_basis.iter_mut().enumerate() {
        let mut acc = vec![0u64; nn];
        for i in 0..nn {
            let e = exp[((j as u64 * frob_pow[i]) % q1) as usize];
            let mut rest = e as u64;
            for a in acc.iter_mut() {
                *a = (*a + rest % p) % p;
                rest /= p;
            }
        }
        debug_assert!(acc[1..].iter().all(|&c| c == 0), "trace must land in F_p");
        *basis_trace = acc[0];
    }
    let mut tr1 = vec![0u32; q as usize];
    for (idx, slot) in tr1.iter_mut().enumerate() {
        let mut rest = idx as u64;
        let mut t = 0u64;
        for &b in &tr_basis {
            t += rest % p * b;
            rest /= p;
        }
        *slot = (t % p) as u32;
    }

    FieldCtx {
        p,
        n,
        q,
        q1,
        modulus,
        frob_pow,
        exp,
        log,
        tr1,
    }
}

#[inline]
fn pack(coeffs: &[u64], p: u64) -> u32 {
    let mut idx = 0u64;
    for &c in coeffs.iter().rev() {
        idx = idx * p + c;
    }
    idx as u32
}

impl FieldCtx {
    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Field size p^n.
    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Group order p^n − 1.
    #[inline]
    pub fn units_order(&self) -> u64 {
        self.q1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn modulus_string(&self) -> String {
        format_modulus(&self.modulus)
    }

    /// Total bytes held by the four lookup tables.
    pub fn table_bytes(&self) -> u64 {
        4 * (self.exp.len() + self.log.len() + self.tr1.len()) as u64
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The primitive element α (the residue class of x).
    #[inline]
    pub fn alpha(&self) -> FieldElement {
        FieldElement(self.exp[1])
    }

    /// Element from its packed coefficient index; panics if out of range.
    #[inline]
    pub fn from_index(&self, idx: u64) -> FieldElement {
        assert!(idx < self.q, "element index out of range");
        FieldElement(idx as u32)
    }

    /// Element from ascending coefficients (missing high coefficients are zero;
    /// values are reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        assert!(coeffs.len() <= self.n as usize, "too many coefficients");
        let mut idx = 0u64;
        for &c in coeffs.iter().rev() {
            idx = idx * self.p + c % self.p;
        }
        FieldElement(idx as u32)
    }

    /// Ascending coefficient vector of an element.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        let mut rest = x.0 as u64;
        let mut out = vec![0u64; self.n as usize];
        for c in out.iter_mut() {
            *c = rest % self.p;
            rest /= self.p;
        }
        out
    }

    /// α^i for any i (reduced mod q − 1).
    #[inline]
    pub fn exp_log(&self, i: u64) -> FieldElement {
        FieldElement(self.exp[(i % self.q1) as usize])
    }

    /// Discrete log of a nonzero element; None for zero.
    #[inline]
    pub fn log(&self, x: FieldElement) -> Option<u64> {
        let l = self.log[x.0 as usize];
        (l != LOG_ZERO).then_some(l as u64)
    }

    /// All field elements in index order (starting with 0).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q as u32).map(FieldElement)
    }

    /// The nonzero elements in log order: α⁰, α¹, …, α^{q−2}.
    pub fn units(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.exp.iter().map(|&e| FieldElement(e))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add_index(a.0, b.0))
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let mut rest = a.0 as u64;
        let mut idx = 0u64;
        let mut scale = 1u64;
        while rest != 0 {
            let c = rest % self.p;
            if c != 0 {
                idx += (self.p - c) * scale;
            }
            rest /= self.p;
            scale *= self.p;
        }
        FieldElement(idx as u32)
    }

    /// Digit-wise addition of packed coefficient indexes.
    #[inline]
    pub(crate) fn add_index(&self, a: u32, b: u32) -> u32 {
        let (mut ra, mut rb) = (a as u64, b as u64);
        let mut idx = 0u64;
        let mut scale = 1u64;
        while ra != 0 || rb != 0 {
            let c = (ra % self.p + rb % self.p) % self.p;
            idx += c * scale;
            ra /= self.p;
            rb /= self.p;
            scale *= self.p;
        }
        idx as u32
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match (self.log(a), self.log(b)) {
            (Some(la), Some(lb)) => self.exp_log(la + lb),
            _ => FieldElement(0),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        match self.log(a) {
            None => Err(FieldError::DivisionByZero),
            Some(la) => Ok(self.exp_log(self.q1 - la)),
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// x^e with the usual conventions: 0⁰ = 1, 0^e = 0 for e > 0.
    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        match self.log(x) {
            None => {
                if e == 0 {
                    self.one()
                } else {
                    self.zero()
                }
            }
            Some(lx) => self.exp_log(lx * (e % self.q1) % self.q1),
        }
    }

    /// x^{p^j} for any integer j (reduced mod n); the identity for j ≡ 0.
    pub fn frobenius(&self, x: FieldElement, j: i64) -> FieldElement {
        let j = j.rem_euclid(self.n as i64) as usize;
        match self.log(x) {
            None => x,
            Some(lx) => self.exp_log(lx * self.frob_pow[j] % self.q1),
        }
    }

    /// Relative trace Tr_m^n: F_{p^n} → F_{p^m}, x ↦ Σ_{i} x^{p^{mi}}.
    pub fn trace_to(&self, m: u32, x: FieldElement) -> Result<FieldElement, FieldError> {
        if m == 0 || self.n % m != 0 {
            return Err(FieldError::NotADivisor { m, n: self.n });
        }
        let mut acc = self.zero();
        for i in 0..(self.n / m) {
            acc = self.add(acc, self.frobenius(x, (m * i) as i64));
        }
        Ok(acc)
    }

    /// Absolute trace Tr_1^n as an integer in [0, p).
    #[inline]
    pub fn trace_to_prime(&self, x: FieldElement) -> u64 {
        self.tr1[x.0 as usize] as u64
    }

    /// Absolute trace by element index (hot-path accessor).
    #[inline]
    pub(crate) fn tr1_of_index(&self, idx: usize) -> u32 {
        self.tr1[idx]
    }

    /// Element index of α^i without reduction of i (caller keeps i < q − 1).
    #[inline]
    pub(crate) fn exp_raw(&self, i: usize) -> u32 {
        self.exp[i]
    }

}
