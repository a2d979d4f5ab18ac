//! Exact arithmetic in Z[ζ_p] via integer count vectors.
//!
//! An exponential sum S = Σ_ρ N(ρ)ζ^ρ over the p-th roots of unity is stored
//! as the length-p vector (N(0), …, N(p−1)). The only relation in play is the
//! all-ones relation 1 + ζ + … + ζ^{p−1} = 0, and it is applied exclusively at
//! comparison time: a vector represents a rational integer iff its entries at
//! ρ = 1..p−1 agree, and the value is then N(0) − N(1). This sidesteps the
//! irrational values ±√(±p)·p^e entirely — every check downstream is an
//! integer equality.
//!
//! Sum values are classified symbolically into [`SumClass`]: zero, the full
//! sum p^n, a rational class ±p^e·ζ^{ρ₀}, or a Gauss class ±G_p·p^{e'}·ζ^{ρ₀}
//! where G_p = Σ η(ρ)ζ^ρ is the quadratic Gauss sum with G_p² = (−1)^{(p−1)/2}p.

use super::SumError;
use crate::field::quadratic_character;
use serde::Serialize;

/// Solution counts (N(0), …, N(p−1)) representing S = Σ N(ρ)ζ^ρ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicCounts {
    counts: Vec<u64>,
}

impl CyclotomicCounts {
    pub fn new(counts: Vec<u64>) -> Self {
        assert!(counts.len() >= 3, "need at least p = 3 residue classes");
        CyclotomicCounts { counts }
    }

    pub fn zeroed(p: u64) -> Self {
        CyclotomicCounts { counts: vec![0; p as usize] }
    }

    #[inline]
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    #[inline]

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// |S|² as an exact integer, via the autocorrelation
    /// c_t = Σ_ρ N(ρ)N(ρ−t): then |S|² = c_0 − c_1, provided c_t is constant
    /// over t ≠ 0 (equivalently, S·S̄ is rational).
    pub fn magnitude_squared(&self) -> Result<u64, SumError> {
        let p = self.counts.len();
        let mut c = vec![0u128; p];
        for t in 0..p {
            let mut acc = 0u128;
            for rho in 0..p {
                let other = self.counts[(rho + p - t) % p];
                acc += self.counts[rho] as u128 * other as u128;
            }
            c[t] = acc;
        }
        if c[2..].iter().any(|&ct| ct != c[1]) {
            return Err(SumError::NonRationalNorm { counts: self.counts.clone() });
        }
        debug_assert!(c[0] >= c[1], "autocorrelation peaks at lag zero");
        let m2 = c[0] - c[1];
        u64::try_from(m2).map_err(|_| SumError::NonRationalNorm { counts: self.counts.clone() })
    }
}

/// Signed cyclotomic vector for moment accumulation and Gauss-sum algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicInt {
    v: Vec<i128>,
}

impl CyclotomicInt {
    pub fn zeroed(p: u64) -> Self {
        CyclotomicInt { v: vec![0; p as usize] }
    }

    pub fn from_counts(c: &CyclotomicCounts) -> Self {
        CyclotomicInt { v: c.counts().iter().map(|&x| x as i128).collect() }
    }

    /// Wrap an already-accumulated coefficient vector.
    pub fn from_raw(v: Vec<i128>) -> Self {
        assert!(v.len() >= 3, "need at least p = 3 residue classes");
        CyclotomicInt { v }
    }

    pub fn add_assign(&mut self, other: &CyclotomicInt) {
        assert_eq!(self.v.len(), other.v.len());
        for (a, b) in self.v.iter_mut().zip(&other.v) {
            *a += b;
        }
    }

    /// Cyclic convolution square: (Σ v_ρ ζ^ρ)² with exponents folded mod p.
    pub fn square(&self) -> CyclotomicInt {
        let p = self.v.len();
        let mut out = vec![0i128; p];
        for i in 0..p {
            if self.v[i] == 0 {
                continue;
            }
            for j in 0..p {
                out[(i + j) % p] += self.v[i] * self.v[j];
            }
        }
        CyclotomicInt { v: out }
    }

    /// Reduce by the all-ones relation: Some(v₀ − v₁) iff the tail entries
    /// v₁..v_{p−1} agree (the vector represents a rational integer).
    pub fn reduce_to_integer(&self) -> Option<i128> {
        if self.v[2..].iter().any(|&x| x != self.v[1]) {
            return None;
        }
        Some(self.v[0] - self.v[1])
    }
}

/// Symbolic classification of one exponential sum value.
///
/// `exponent2` encodes the half-integer exponent as its numerator over 2, so
/// |S|² = p^exponent2 for Rational and Gauss classes:
/// Rational: S = sign · p^{exponent2/2} · ζ^{rho0} (exponent2 even);
/// Gauss:    S = sign · G_p · p^{(exponent2−1)/2} · ζ^{rho0} (exponent2 odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SumClass {
    Zero,
    Rational { sign: i8, exponent2: u32, rho0: u32 },
    Gauss { sign: i8, exponent2: u32, rho0: u32 },
    Full,
}

impl SumClass {
    /// Canonical order: Zero, then ascending |S| (exponent2), rational before
    /// Gauss on the (impossible) tie, + before −, then ρ₀; Full last.
    fn order_key(&self) -> (u8, u32, u8, u8, u32) {
        match *self {
            SumClass::Zero => (0, 0, 0, 0, 0),
            SumClass::Rational { sign, exponent2, rho0 } => {
                (1, exponent2, 0, u8::from(sign < 0), rho0)
            }
            SumClass::Gauss { sign, exponent2, rho0 } => {
                (1, exponent2, 1, u8::from(sign < 0), rho0)
            }
            SumClass::Full => (2, 0, 0, 0, 0),
        }
    }

    /// |S|² = p^k for the classified value, when it is finite and fixed.
    pub fn magnitude2_exponent(&self) -> Option<u32> {
        match *self {
            SumClass::Rational { exponent2, .. } | SumClass::Gauss { exponent2, .. } => {
                Some(exponent2)
            }
            SumClass::Zero => None,
            SumClass::Full => None,
        }
    }
}

impl Ord for SumClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for SumClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for SumClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            SumClass::Zero => write!(f, "0"),
            SumClass::Full => write!(f, "full"),
            SumClass::Rational { sign, exponent2, rho0 } => {
                write!(f, "{}p^{}", if sign >= 0 { '+' } else { '-' }, exponent2 / 2)?;
                if rho0 != 0 {
                    write!(f, "*z^{rho0}")?;
                }
                Ok(())
            }
            SumClass::Gauss { sign, exponent2, rho0 } => {
                write!(f, "{}G", if sign >= 0 { '+' } else { '-' })?;
                if exponent2 > 1 {
                    write!(f, "*p^{}", (exponent2 - 1) / 2)?;
                }
                if rho0 != 0 {
                    write!(f, "*z^{rho0}")?;
                }
                Ok(())
            }
        }
    }
}

/// Exact exponent e with v = p^e, if one exists.
fn power_of_p(p: u64, mut v: u64) -> Option<u32> {
    if v == 0 {
        return None;
    }
    let mut e = 0;
    while v > 1 {
        if v % p != 0 {
            return None;
        }
        v /= p;
        e += 1;
    }
    Some(e)
}

/// Match a count vector against the four value templates.
///
/// Templates, tried over all ρ₀ since p is tiny:
/// (a) all entries equal → Zero;
/// (b) a single spike at ρ = 0 → Full;
/// (c) one distinguished entry, all others equal (the v-pattern of even
///     rank): S = B′·p·ζ^{ρ₀} with B′ = (N(ρ₀) − N(other))/p;
/// (d) N(ρ) = A + B·η(ρ − ρ₀) (the η-pattern of odd rank): S = B·G_p·ζ^{ρ₀}.
///
/// Candidates must agree with `magnitude_squared` — this resolves the
/// rational/Gauss shape ambiguity at p = 3, where the two patterns can
/// coincide but their magnitudes p^{even} vs p^{odd} cannot.
pub fn classify_counts(p: u64, counts: &CyclotomicCounts) -> Result<SumClass, SumError> {
    let v = counts.counts();
    assert_eq!(v.len() as u64, p, "count vector length must equal p");
    let mag2 = counts.magnitude_squared()?;

    // (a) all equal — the reduced value is zero.
    if v.iter().all(|&x| x == v[0]) {
        debug_assert_eq!(mag2, 0);
        return Ok(SumClass::Zero);
    }
    // (b) single spike at ρ = 0.
    if v[0] > 0 && v[1..].iter().all(|&x| x == 0) {
        debug_assert_eq!(mag2 as u128, (v[0] as u128) * (v[0] as u128));
        return Ok(SumClass::Full);
    }

    let pu = p as usize;
    let eta: Vec<i8> = (0..p).map(|a| quadratic_character(p, a as i64)).collect();
    let mut candidates: Vec<SumClass> = Vec::new();

    // (c) v-pattern: exactly one entry off a constant tail.
    for rho0 in 0..pu {
        let tail = v[(rho0 + 1) % pu];
        if (0..pu).filter(|&r| r != rho0).any(|r| v[r] != tail) {
            continue;
        }
        let diff = v[rho0] as i128 - tail as i128;
        if diff == 0 || diff % p as i128 != 0 {
            continue;
        }
        // S reduces to diff · ζ^{ρ₀}; it must be an exact signed power of p.
        let abs = diff.unsigned_abs() as u64;
        if let Some(e) = power_of_p(p, abs) {
            let class = SumClass::Rational {
                sign: if diff > 0 { 1 } else { -1 },
                exponent2: 2 * e,
                rho0: rho0 as u32,
            };
            if pow_u128(p, 2 * e) == mag2 as u128 {
                candidates.push(class);
            }
        }
    }

    // (d) η-pattern: N(ρ) = A + B·η(ρ − ρ₀).
    for rho0 in 0..pu {
        let a = v[rho0] as i128;
        let b = v[(rho0 + 1) % pu] as i128 - a; // η(1) = 1
        if b == 0 {
            continue;
        }
        let fits = (0..pu).all(|r| {
            let expected = a + b * eta[(r + pu - rho0) % pu] as i128;
            expected >= 0 && v[r] as i128 == expected
        });
        if !fits {
            continue;
        }
        if let Some(e) = power_of_p(p, b.unsigned_abs() as u64) {
            let class = SumClass::Gauss {
                sign: if b > 0 { 1 } else { -1 },
                exponent2: 2 * e + 1,
                rho0: rho0 as u32,
            };
            if pow_u128(p, 2 * e + 1) == mag2 as u128 {
                candidates.push(class);
            }
        }
    }

    candidates.dedup();
    match candidates.len() {
        1 => Ok(candidates[0]),
        _ => Err(SumError::UnclassifiableCounts { counts: v.to_vec() }),
    }
}

fn pow_u128(p: u64, e: u32) -> u128 {
    (p as u128).pow(e)
}

/// (Σ_{ρ=1}^{p−1} η(ρ)ζ^ρ)², expanded exactly in the count-vector algebra and
/// reduced to a rational integer. Must equal (−1)^{(p−1)/2}·p.
pub fn gauss_sum_square_check(p: u64) -> i128 {
    let mut g = CyclotomicInt::zeroed(p);
    for rho in 1..p {
        g.v[rho as usize] = quadratic_character(p, rho as i64) as i128;
    }
    g.square()
        .reduce_to_integer()
        .expect("the square of a Gauss sum is rational")
}
