//! Dense polynomial arithmetic over F_p used only at field-construction time.
//!
//! Everything here is cold-path code: irreducibility and primitivity testing,
//! and the deterministic lexicographic search for a primitive modulus. Clarity
//! wins over speed — the per-element hot paths live in the table-driven field
//! context, not here.
//!
//! Polynomials are coefficient vectors in ascending order (`c[0] + c[1] x + …`),
//! always reduced mod p, with no trailing-zero guarantees except where stated.

/// Deterministic primality test by trial division; sufficient at desk scale.
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m % 2 == 0 {
        return m == 2;
    }
    let mut d = 3u64;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `m`, ascending, by trial division.
pub fn distinct_prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Trim trailing zero coefficients (the zero polynomial becomes an empty vec).
fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Schoolbook product of `a` and `b` mod p (no modulus reduction).
fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `f`.
fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let nf = degree(f).expect("modulus must be nonzero");
    debug_assert_eq!(f[nf], 1, "modulus must be monic");
    let mut r: Vec<u64> = a.to_vec();
    while let Some(dr) = degree(&r) {
        if dr < nf {
            break;
        }
        let c = r[dr];
        let shift = dr - nf;
        for (j, &fj) in f.iter().enumerate().take(nf + 1) {
            let t = (c * fj) % p;
            let idx = shift + j;
            r[idx] = (r[idx] + p - t) % p;
        }
    }
    r.truncate(nf);
    r
}

/// `a * b mod f` for monic `f`.
pub fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), f, p)
}

/// `a^e mod f` by square-and-multiply.
pub fn pow_mod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut base = rem(a, f, p);
    let mut acc = vec![0u64; degree(f).unwrap()];
    if acc.is_empty() {
        return acc; // degree-0 modulus: the zero ring
    }
    acc[0] = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &base, f, p);
        }
        e >>= 1;
        if e > 0 {
            base = mul_mod(&base, &base, f, p);
        }
    }
    acc
}

/// Monic gcd of `a` and `b` over F_p.
fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        // Make b monic so `rem` applies.
        let db = b.len() - 1;
        let lead = b[db];
        if lead != 1 {
            let inv = inv_mod_p(lead, p);
            for c in b.iter_mut() {
                *c = (*c * inv) % p;
            }
        }
        let r = trim(rem(&a, &b, p));
        a = b;
        b = r;
    }
    if let Some(da) = degree(&a) {
        let lead = a[da];
        if lead != 1 {
            let inv = inv_mod_p(lead, p);
            for c in a.iter_mut() {
                *c = (*c * inv) % p;
            }
        }
    }
    a
}

/// Inverse of `a` modulo the prime `p` (Fermat).
pub fn inv_mod_p(a: u64, p: u64) -> u64 {
    pow_mod_u64(a % p, p - 2, p)
}

/// `a^e mod m` on integers.
pub fn pow_mod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % m;
        }
        a = a * a % m;
        e >>= 1;
    }
    acc
}

/// `x^{p^j} mod f`, computed as j successive p-th powers.
fn x_frobenius_pow(j: u32, f: &[u64], p: u64) -> Vec<u64> {
    let n = degree(f).unwrap();
    let mut h = vec![0u64; n];
    if n == 1 {
        h[0] = (p - f[0] % p) % p; // x ≡ −c₀ mod (x + c₀)
        // p-th powers of an element of F_p are itself; nothing to iterate.
        let _ = j;
        return h;
    }
    h[1] = 1; // h = x
    for _ in 0..j {
        h = pow_mod(&h, p, f, p);
    }
    h
}

/// Irreducibility over F_p of a monic polynomial of degree ≥ 1.
///
/// Uses the standard criterion: f of degree n is irreducible iff
/// x^{p^n} ≡ x (mod f) and gcd(x^{p^{n/r}} − x, f) = 1 for every prime r | n.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = match degree(f) {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    debug_assert_eq!(f[n], 1, "candidates are monic by construction");
    let mut x_poly = vec![0u64; n.max(2)];
    x_poly[1] = 1;
    let x_poly = trim(x_poly);

    let frob_n = x_frobenius_pow(n as u32, f, p);
    if trim(frob_n.clone()) != trim(rem(&x_poly, f, p)) {
        return false;
    }
    for r in distinct_prime_factors(n as u64) {
        let m = n as u64 / r;
        let mut g = x_frobenius_pow(m as u32, f, p);
        // g := x^{p^m} − x mod f
        if g.len() < 2 && n >= 2 {
            g.resize(2, 0);
        }
        if n >= 2 {
            g[1] = (g[1] + p - 1) % p;
        } else {
            g[0] = (g[0] + p - rem(&x_poly, f, p)[0]) % p;
        }
        let common = gcd(&g, f, p);
        if degree(&common).map_or(false, |d| d >= 1) {
            return false;
        }
    }
    true
}

/// Primitivity of the residue class of x modulo an *irreducible* monic `f`:
/// x must have multiplicative order exactly p^n − 1.
pub fn x_is_primitive(f: &[u64], p: u64) -> bool {
    let n = degree(f).unwrap();
    // x ≡ 0 would need f = x; excluded by callers (c₀ ≠ 0 for irreducible f
    // of degree ≥ 2, and handled explicitly for degree 1).
    if n == 1 && f[0] == 0 {
        return false;
    }
    let q1 = p.checked_pow(n as u32).unwrap() - 1;
    let one = {
        let mut v = vec![0u64; n];
        v[0] = 1;
        v
    };
    let x_poly = {
        let mut v = vec![0u64; n.max(2)];
        if n == 1 {
            v[0] = (p - f[0] % p) % p; // x ≡ −c₀
        } else {
            v[1] = 1;
        }
        v
    };
    for ell in distinct_prime_factors(q1) {
        if pow_mod(&x_poly, q1 / ell, f, p) == one {
            return false;
        }
    }
    true
}

/// Deterministic lexicographic search for the smallest primitive monic
/// polynomial of degree n over F_p: constant coefficient compared first,
/// the x^{n−1} coefficient varying fastest.
pub fn find_primitive_modulus(p: u64, n: u32) -> Vec<u64> {
    let n = n as usize;
    let total = p.checked_pow(n as u32).expect("search space fits u64");
    for idx in 0..total {
        // Decode idx into (c₀, c₁, …, c_{n−1}) with c₀ the most significant digit.
        let mut coeffs = vec![0u64; n + 1];
        coeffs[n] = 1;
        let mut rest = idx;
        for j in (0..n).rev() {
            coeffs[j] = rest % p;
            rest /= p;
        }
        if coeffs[0] == 0 {
            continue; // divisible by x (or x itself): never primitive
        }
        if is_irreducible(&coeffs, p) && x_is_primitive(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("a primitive polynomial of every degree exists over F_p")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_cases() {
        let primes: Vec<u64> = (0..60).filter(|&m| is_prime(m)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }

    #[test]
    fn factors_of_smooth_and_prime_values() {
        assert_eq!(distinct_prime_factors(26), vec![2, 13]);
        assert_eq!(distinct_prime_factors(728), vec![2, 7, 13]);
        assert_eq!(distinct_prime_factors(97), vec![97]);
        assert_eq!(distinct_prime_factors(1), Vec::<u64>::new());
    }

    #[test]
    fn cube_of_x_plus_one_is_reducible_in_char_3() {
        // x³ + 1 = (x + 1)³ over F_3.
        assert!(!is_irreducible(&[1, 0, 0, 1], 3));
    }

    #[test]
    fn product_of_two_quadratics_rejected_despite_frobenius_fixed_point() {
        // (x² + 1)(x² + x + 2) over F_3 has no root and x^{3⁴} ≡ x mod f,
        // so the gcd step is what must reject it.
        let f = mul(&[1, 0, 1], &[2, 1, 1], 3);
        let f = trim(f);
        assert_eq!(degree(&f), Some(4));
        assert!(!is_irreducible(&f, 3));
    }

    #[test]
    fn lex_search_skips_irreducible_but_imprimitive_candidates() {
        // Over F_7, x² + 1 is irreducible but x has order 4 < 48.
        assert!(is_irreducible(&[1, 0, 1], 7));
        assert!(!x_is_primitive(&[1, 0, 1], 7));
        let found = find_primitive_modulus(7, 2);
        assert!(is_irreducible(&found, 7) && x_is_primitive(&found, 7));
    }

    #[test]
    fn degree_one_search_finds_smallest_primitive_root_shift() {
        // Over F_5 the sought modulus is x + c with −c a primitive root;
        // c = 1 gives −1 ≡ 4 of order 2, c = 2 gives 3, a primitive root.
        let f = find_primitive_modulus(5, 1);
        assert_eq!(f, vec![2, 1]);
    }

    #[test]
    fn exhaustive_order_check_certifies_primitive_cubic_over_f3() {
        // Independent oracle for the (3,3) search result: multiply out all 26
        // powers of x modulo the found cubic and confirm none before the last
        // returns to 1.
        let f = find_primitive_modulus(3, 3);
        let mut seen = Vec::new();
        let mut cur = vec![0u64, 1, 0]; // x
        for _ in 1..26 {
            assert_ne!(trim(cur.clone()), vec![1u64], "order divides a proper factor");
            seen.push(cur.clone());
            cur = mul_mod(&cur, &[0, 1, 0], &f, 3);
        }
        assert_eq!(trim(cur), vec![1u64], "x^26 must close the cycle");
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 25, "powers of x must be pairwise distinct");
    }
}
