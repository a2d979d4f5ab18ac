//! The linearized operator L_{γ,δ}, its kernel, the auxiliary map Φ_{γ,δ},
//! and the rank/sign classification of the associated quadratic forms.
//!
//! For a pair (γ, δ) the form Ω_{γ,δ}(x) = Tr_d^n(γx^{p^k+1} + δx^{p^{3k}+1})
//! is quadratic over F_{p^d}. Its radical is governed by the linearized
//! polynomial
//!
//!   L_{γ,δ}(z) = γz^{p^k} + γ^{p^{−k}}z^{p^{−k}} + δz^{p^{3k}} + δ^{p^{−3k}}z^{p^{−3k}},
//!
//! whose kernel V is an F_{p^d}-vector space of dimension m ∈ {0, 1, 2} under
//! the standing hypotheses (s = n/d odd). The form then has rank s − m over
//! F_{p^d}, equivalently n − dm over F_p. Each rank class splits into a sign
//! class j ∈ {±1} read off the classified exponential sum S(0, γ, δ).
//!
//! Negative Frobenius exponents are realized as x^{p^{−k}} = x^{p^{n−k}}.
//! The kernel dimension is computed by plain Gaussian elimination over F_p on
//! the n×n matrix of L — n is tiny at desk scale, so no structured solver is
//! warranted.

use crate::distribution::DistributionTable;
use crate::field::{CodeParams, FieldCtx, FieldElement};
use crate::limits::Limits;
use crate::sums::cyclotomic::{classify_counts, CyclotomicCounts, SumClass};
use crate::sums::SumError;
use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// A coefficient pair (γ, δ) naming one quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormId {
    pub gamma: FieldElement,
    pub delta: FieldElement,
}

impl FormId {
    pub fn new(gamma: FieldElement, delta: FieldElement) -> Self {
        FormId { gamma, delta }
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.is_zero() && self.delta.is_zero()
    }
}

/// Rank data for one form: |ker L| = p^{dm}, rank s − m over F_{p^d} and
/// n − dm over F_p, plus the sign class when one has been computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub m: u32,
    pub rank_over_subfield: u32,
    pub rank_over_prime: u32,
    pub sign_class: Option<(u32, i8)>,
}

#[derive(Debug, Error)]
pub enum FormError {
    #[error("the zero pair (0, 0) names no quadratic form")]
    InvalidForm,
    #[error("kernel dimension {nullity} over the prime field is not a multiple of d = {d}")]
    NonDivisibleKernel { nullity: u32, d: u32 },
    #[error("rank sweep over {required} pairs exceeds the configured limit {cap}")]
    TableLimitExceeded { required: u128, cap: u128 },
    #[error("sum of class {class} is inconsistent with kernel dimension m = {m}")]
    ClassificationMismatch { m: u32, class: SumClass },
    #[error("closed-form class size is not an integer (parameters outside hypotheses?)")]
    NonIntegralClassSize,
    #[error(transparent)]
    Sum(#[from] SumError),
}

/// The n×n matrix of z ↦ L_{γ,δ}(z) over F_p, in the coefficient basis:
/// column j holds the coefficients of L(α^j mod f).
pub fn linearized_matrix(params: &CodeParams, ctx: &FieldCtx, form: &FormId) -> Vec<Vec<u64>> {
    let n = params.n as usize;
    let exps = frobenius_exponents(params);
    let multipliers = term_multipliers(ctx, form, &exps);
    let mut matrix = vec![vec![0u64; n]; n];
    for j in 0..n {
        let basis = ctx.from_index(params.p.pow(j as u32));
        let image = apply_linearized(ctx, &multipliers, &exps, basis);
        for (i, &c) in ctx.coeffs(image).iter().enumerate() {
            matrix[i][j] = c;
        }
    }
    matrix
}

/// The four Frobenius exponents (k, −k, 3k, −3k) reduced into [0, n).
fn frobenius_exponents(params: &CodeParams) -> [i64; 4] {
    let n = params.n as i64;
    let k = params.k as i64;
    [
        k.rem_euclid(n),
        (-k).rem_euclid(n),
        (3 * k).rem_euclid(n),
        (-3 * k).rem_euclid(n),
    ]
}

/// Multipliers (γ, γ^{p^{−k}}, δ, δ^{p^{−3k}}) paired with the exponents above.
fn term_multipliers(ctx: &FieldCtx, form: &FormId, exps: &[i64; 4]) -> [FieldElement; 4] {
    [
        form.gamma,
        ctx.frobenius(form.gamma, -(exps[0])),
        form.delta,
        ctx.frobenius(form.delta, -(exps[2])),
    ]
}

fn apply_linearized(
    ctx: &FieldCtx,
    multipliers: &[FieldElement; 4],
    exps: &[i64; 4],
    z: FieldElement,
) -> FieldElement {
    let mut acc = ctx.zero();
    for (&c, &e) in multipliers.iter().zip(exps.iter()) {
        acc = ctx.add(acc, ctx.mul(c, ctx.frobenius(z, e)));
    }
    acc
}

/// Direct evaluation L_{γ,δ}(z), used as the oracle for the matrix.
pub fn linearized_eval(
    params: &CodeParams,
    ctx: &FieldCtx,
    form: &FormId,
    z: FieldElement,
) -> FieldElement {
    let exps = frobenius_exponents(params);
    let multipliers = term_multipliers(ctx, form, &exps);
    apply_linearized(ctx, &multipliers, &exps, z)
}

/// Row-reduce a matrix over F_p in place and return its rank.
fn rank_mod_p(matrix: &mut [Vec<u64>], p: u64) -> u32 {
    let rows = matrix.len();
    let cols = if rows == 0 { 0 } else { matrix[0].len() };
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| matrix[r][col] % p != 0) else {
            continue;
        };
        matrix.swap(rank, pivot);
        let inv = mod_inverse(matrix[rank][col] % p, p);
        for x in matrix[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows {
            if r != rank && matrix[r][col] % p != 0 {
                let factor = matrix[r][col] % p;
                for c in 0..cols {
                    let sub = factor * matrix[rank][c] % p;
                    matrix[r][c] = (matrix[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank as u32
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^{p−2} mod p for prime p.
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// A basis of the null space of `matrix` over F_p, as coefficient vectors.
pub fn kernel_basis(matrix: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = matrix.to_vec();
    let rows = m.len();
    let cols = if rows == 0 { return Vec::new() } else { m[0].len() };
    let rank = rank_mod_p(&mut m, p) as usize;
    // After full reduction the pivot columns are identifiable per row.
    let mut pivot_col = vec![None; rank];
    for (r, pc) in pivot_col.iter_mut().enumerate() {
        *pc = (0..cols).find(|&c| m[r][c] % p != 0);
    }
    let pivots: Vec<usize> = pivot_col.into_iter().flatten().collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            // Row r reads x_{pc} + Σ m[r][c]·x_c = 0 over the free columns.
            v[pc] = (p - m[r][free] % p) % p;
        }
        basis.push(v);
    }
    basis
}

/// Kernel dimension m of L_{γ,δ} over F_{p^d}, so |V| = p^{dm}.
pub fn kernel_dim_m(params: &CodeParams, ctx: &FieldCtx, form: &FormId) -> Result<u32, FormError> {
    if form.is_zero() {
        return Err(FormError::InvalidForm);
    }
    let mut matrix = linearized_matrix(params, ctx, form);
    let rank = rank_mod_p(&mut matrix, params.p);
    let nullity = params.n - rank;
    if nullity % params.d != 0 {
        return Err(FormError::NonDivisibleKernel { nullity, d: params.d });
    }
    Ok(nullity / params.d)
}

/// Rank report for one form (sign class left unset).
pub fn rank_report(params: &CodeParams, ctx: &FieldCtx, form: &FormId) -> Result<RankReport, FormError> {
    let m = kernel_dim_m(params, ctx, form)?;
    Ok(RankReport {
        m,
        rank_over_subfield: params.s - m,
        rank_over_prime: params.n - params.d * m,
        sign_class: None,
    })
}

/// Φ_{γ,δ}(x) = γx^{p^k+1} + δx^{p^{3k}+1} − δ^{p^{−k}}x^{p^{2k}+p^{−k}}
///            + δ^{p^{−2k}}x^{p^k+p^{−2k}}.
///
/// In debug builds two identities are enforced on every call:
/// Tr(Φ(z)) = Tr(γz^{p^k+1} + δz^{p^{3k}+1}), and Φ(z) + Φ(z)^{p^{−k}} = z·L(z).
pub fn phi_eval(params: &CodeParams, ctx: &FieldCtx, form: &FormId, x: FieldElement) -> FieldElement {
    let n = params.n as i64;
    let k = params.k as i64;
    let fr = |v: FieldElement, j: i64| ctx.frobenius(v, j.rem_euclid(n));
    let (gamma, delta) = (form.gamma, form.delta);

    let x_k = fr(x, k);
    let x_2k = fr(x, 2 * k);
    let x_3k = fr(x, 3 * k);
    let x_mk = fr(x, -k);
    let x_m2k = fr(x, -2 * k);

    let t1 = ctx.mul(gamma, ctx.mul(x_k, x));
    let t2 = ctx.mul(delta, ctx.mul(x_3k, x));
    let t3 = ctx.mul(fr(delta, -k), ctx.mul(x_2k, x_mk));
    let t4 = ctx.mul(fr(delta, -2 * k), ctx.mul(x_k, x_m2k));
    let phi = ctx.add(ctx.sub(ctx.add(t1, t2), t3), t4);

    debug_assert_eq!(
        ctx.trace_to_prime(phi),
        ctx.trace_to_prime(ctx.add(t1, t2)),
        "trace identity for the auxiliary map failed"
    );
    debug_assert_eq!(
        ctx.add(phi, fr(phi, -k)),
        ctx.mul(x, linearized_eval(params, ctx, form, x)),
        "folding identity for the auxiliary map failed"
    );
    phi
}

/// Estimated sweep guard: errors unless the (γ, δ) pair count fits the limit.
fn check_sweep_budget(params: &CodeParams, limits: &Limits) -> Result<(), FormError> {
    let q = params.q() as u128;
    let pairs = q * q;
    if pairs > limits.max_sweep_ops {
        return Err(FormError::TableLimitExceeded { required: pairs, cap: limits.max_sweep_ops });
    }
    Ok(())
}

/// All q field elements in sweep order: 0 first, then α⁰, α¹, …, α^{q−2}.
pub(crate) fn sweep_order(ctx: &FieldCtx) -> Vec<FieldElement> {
    let mut order = Vec::with_capacity(ctx.q() as usize);
    order.push(ctx.zero());
    for e in 0..ctx.units_order() {
        order.push(ctx.exp_log(e));
    }
    order
}

/// Kernel-dimension distribution over all (γ, δ) ≠ (0, 0), keyed by m.
///
/// The sweep is partitioned by γ; each worker accumulates a local histogram
/// and the merge is a commutative integer sum, so the result is deterministic
/// regardless of schedule.
pub fn rank_distribution(
    params: &CodeParams,
    ctx: &FieldCtx,
    limits: &Limits,
) -> Result<DistributionTable<u32>, FormError> {
    check_sweep_budget(params, limits)?;
    let order = sweep_order(ctx);
    let histograms: Result<Vec<[u64; 4]>, FormError> = order
        .par_iter()
        .map(|&gamma| {
            let mut local = [0u64; 4];
            for &delta in &order {
                let form = FormId::new(gamma, delta);
                if form.is_zero() {
                    continue;
                }
                let m = kernel_dim_m(params, ctx, &form)?;
                local[(m as usize).min(3)] += 1;
            }
            Ok(local)
        })
        .collect();
    let mut table = DistributionTable::new();
    for local in histograms? {
        for (m, &count) in local.iter().enumerate() {
            if count > 0 {
                table.add(m as u32, BigUint::from(count));
            }
        }
    }
    Ok(table)
}

/// Exact quotient, or None when the division has a remainder.
pub(crate) fn exact_div(num: BigUint, den: &BigUint) -> Option<BigUint> {
    if den.is_zero() || !(&num % den).is_zero() {
        return None;
    }
    Some(num / den)
}

fn pn(params: &CodeParams, e: u32) -> BigUint {
    BigUint::from(params.p).pow(e)
}

/// Closed-form sizes of the six sign classes, in the order
/// (0,+), (0,−), (1,+), (1,−), (2,+), (2,−):
///
///   |R_{0,±}| = (p^{n+2d} − p^{n+d} − p^n + p^{2d})(p^n − 1) / (2(p^{2d} − 1)),
///   |R_{1,j}| = (p^{n−d} + j·p^{(n−d)/2})(p^n − 1) / 2,
///   |R_{2,±}| = (p^{n−d} − 1)(p^n − 1) / (2(p^{2d} − 1)).
pub fn closed_sign_counts(params: &CodeParams) -> Result<Vec<((u32, i8), BigUint)>, FormError> {
    let (n, d) = (params.n, params.d);
    let q1 = pn(params, n) - 1u32;
    let p2d1 = pn(params, 2 * d) - 1u32;
    let two = BigUint::from(2u32);

    let r0_num = (pn(params, n + 2 * d) + pn(params, 2 * d)
        - pn(params, n + d)
        - pn(params, n))
        * &q1;
    let r0 = exact_div(r0_num, &(&two * &p2d1)).ok_or(FormError::NonIntegralClassSize)?;

    debug_assert_eq!((n - d) % 2, 0, "n − d is even when s is odd");
    let half_shift = pn(params, (n - d) / 2);
    let r1_plus = exact_div((pn(params, n - d) + &half_shift) * &q1, &two)
        .ok_or(FormError::NonIntegralClassSize)?;
    let r1_minus = exact_div((pn(params, n - d) - &half_shift) * &q1, &two)
        .ok_or(FormError::NonIntegralClassSize)?;

    let r2_num = (pn(params, n - d) - 1u32) * &q1;
    let r2 = exact_div(r2_num, &(two * p2d1)).ok_or(FormError::NonIntegralClassSize)?;

    Ok(vec![
        ((0, 1), r0.clone()),
        ((0, -1), r0),
        ((1, 1), r1_plus),
        ((1, -1), r1_minus),
        ((2, 1), r2.clone()),
        ((2, -1), r2),
    ])
}

/// Closed-form rank distribution keyed by m: the paired sign classes summed.
pub fn closed_rank_distribution(params: &CodeParams) -> Result<DistributionTable<u32>, FormError> {
    let mut table = DistributionTable::new();
    for ((i, _), count) in closed_sign_counts(params)? {
        table.add(i, count);
    }
    Ok(table)
}

/// Sign classification (i, j) of one form from its ε = 0 count vector.
///
/// i is the kernel dimension m; j is the sign of the classified sum, whose
/// magnitude must be exactly p^{n + dm} and whose root-of-unity offset must
/// vanish (ε = 0 sums are real) — anything else flags a bug upstream.
pub fn sign_classification(
    params: &CodeParams,
    ctx: &FieldCtx,
    form: &FormId,
    s0_counts: &CyclotomicCounts,
) -> Result<(u32, i8), FormError> {
    let m = kernel_dim_m(params, ctx, form)?;
    let class = classify_counts(params.p, s0_counts)?;
    let expected_exponent = params.n + params.d * m;
    let consistent = match class {
        SumClass::Rational { exponent2, rho0, .. } | SumClass::Gauss { exponent2, rho0, .. } => {
            exponent2 == expected_exponent && rho0 == 0
        }
        SumClass::Zero | SumClass::Full => false,
    };
    if !consistent {
        return Err(FormError::ClassificationMismatch { m, class });
    }
    let j = match class {
        SumClass::Rational { sign, .. } | SumClass::Gauss { sign, .. } => sign,
        _ => unreachable!(),
    };
    Ok((m, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, validate_params};
    use crate::sums::exp_sum_counts;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn setup(p: u64, n: u32, k: u32) -> (CodeParams, FieldCtx) {
        let params = validate_params(p, n, k).unwrap();
        let ctx = make_field(p, n, None).unwrap();
        (params, ctx)
    }

    #[test]
    fn zero_form_has_zero_matrix() {
        let (params, ctx) = setup(3, 3, 1);
        let form = FormId::new(ctx.zero(), ctx.zero());
        let matrix = linearized_matrix(&params, &ctx, &form);
        assert!(matrix.iter().flatten().all(|&x| x == 0));
        assert!(matches!(kernel_dim_m(&params, &ctx, &form), Err(FormError::InvalidForm)));
    }

    #[test]
    fn matrix_agrees_with_direct_evaluation() {
        let (params, ctx) = setup(3, 3, 1);
        let mut rng = StdRng::seed_from_u64(0x11b);
        let q = ctx.q();
        for _ in 0..100 {
            let form = FormId::new(
                ctx.from_index(rng.random_range(0..q)),
                ctx.from_index(rng.random_range(0..q)),
            );
            let z = ctx.from_index(rng.random_range(0..q));
            let matrix = linearized_matrix(&params, &ctx, &form);
            let zc = ctx.coeffs(z);
            let image: Vec<u64> = (0..3)
                .map(|i| (0..3).map(|j| matrix[i][j] * zc[j]).sum::<u64>() % 3)
                .collect();
            assert_eq!(ctx.coeffs(linearized_eval(&params, &ctx, &form, z)), image);
        }
    }

    #[test]
    fn singleton_forms_have_full_rank() {
        let (params, ctx) = setup(3, 3, 1);
        for u in ctx.units() {
            let gamma_only = FormId::new(u, ctx.zero());
            let delta_only = FormId::new(ctx.zero(), u);
            assert_eq!(kernel_dim_m(&params, &ctx, &gamma_only).unwrap(), 0);
            assert_eq!(kernel_dim_m(&params, &ctx, &delta_only).unwrap(), 0);
        }
    }

    #[test]
    fn kernel_basis_vectors_are_roots_of_both_maps() {
        let (params, ctx) = setup(3, 3, 1);
        let order = sweep_order(&ctx);
        let mut found_positive_kernel = false;
        for &gamma in &order {
            for &delta in &order {
                let form = FormId::new(gamma, delta);
                if form.is_zero() {
                    continue;
                }
                let matrix = linearized_matrix(&params, &ctx, &form);
                let basis = kernel_basis(&matrix, params.p);
                assert_eq!(
                    basis.len() as u32,
                    params.d * kernel_dim_m(&params, &ctx, &form).unwrap()
                );
                for v in &basis {
                    let z = ctx.from_coeffs(v);
                    assert!(linearized_eval(&params, &ctx, &form, z).is_zero());
                    // Kernel elements are exactly the roots of the auxiliary map.
                    assert!(phi_eval(&params, &ctx, &form, z).is_zero());
                    found_positive_kernel |= !z.is_zero();
                }
            }
        }
        assert!(found_positive_kernel, "some form must have m > 0");
    }

    #[test]
    fn phi_identities_hold_on_random_triples() {
        let (params, ctx) = setup(3, 3, 1);
        let mut rng = StdRng::seed_from_u64(0x8);
        let q = ctx.q();
        for _ in 0..1000 {
            let form = FormId::new(
                ctx.from_index(rng.random_range(0..q)),
                ctx.from_index(rng.random_range(0..q)),
            );
            let z = ctx.from_index(rng.random_range(0..q));
            // phi_eval enforces both identities via debug assertions.
            let phi = phi_eval(&params, &ctx, &form, z);
            let folded = ctx.add(phi, ctx.frobenius(phi, -(params.k as i64)));
            assert_eq!(folded, ctx.mul(z, linearized_eval(&params, &ctx, &form, z)));
        }
        assert!(phi_eval(&params, &ctx, &FormId::new(ctx.alpha(), ctx.alpha()), ctx.zero())
            .is_zero());
    }

    #[test]
    fn rank_distribution_small_case_matches_closed_form() {
        let (params, ctx) = setup(3, 3, 1);
        let empirical = rank_distribution(&params, &ctx, &Limits::default()).unwrap();
        assert_eq!(empirical.get(&0), BigUint::from(468u32));
        assert_eq!(empirical.get(&1), BigUint::from(234u32));
        assert_eq!(empirical.get(&2), BigUint::from(26u32));
        assert_eq!(empirical.total(), BigUint::from(728u32));
        assert_eq!(closed_rank_distribution(&params).unwrap(), empirical);
    }

    #[test]
    fn closed_rank_counts_at_larger_parameters() {
        let p531 = validate_params(5, 3, 1).unwrap();
        let t = closed_rank_distribution(&p531).unwrap();
        assert_eq!(t.get(&0), BigUint::from(12400u32));
        assert_eq!(t.get(&1), BigUint::from(3100u32));
        assert_eq!(t.get(&2), BigUint::from(124u32));

        let p362 = validate_params(3, 6, 2).unwrap();
        let t = closed_rank_distribution(&p362).unwrap();
        assert_eq!(t.total(), BigUint::from(531440u32));
        assert_eq!(t.get(&1), BigUint::from(32760u32 + 26208u32));
        assert_eq!(t.get(&2), BigUint::from(728u32));
    }

    #[test]
    fn closed_sign_counts_at_3_3_1() {
        let params = validate_params(3, 3, 1).unwrap();
        let counts = closed_sign_counts(&params).unwrap();
        let expected: Vec<((u32, i8), u32)> = vec![
            ((0, 1), 234),
            ((0, -1), 234),
            ((1, 1), 156),
            ((1, -1), 78),
            ((2, 1), 13),
            ((2, -1), 13),
        ];
        for (got, want) in counts.iter().zip(expected) {
            assert_eq!(got.0, want.0);
            assert_eq!(got.1, BigUint::from(want.1));
        }
    }

    #[test]
    fn scaling_by_a_subfield_nonsquare_preserves_m_and_flips_odd_rank_signs() {
        let (params, ctx) = setup(3, 3, 1);
        // d = 1: the non-squares of F_3* are {2}; embed 2 = −1.
        let u = ctx.neg(ctx.one());
        assert_eq!(crate::field::quadratic_character(3, 2), -1);
        let mut rng = StdRng::seed_from_u64(0x1e5);
        let q = ctx.q();
        for _ in 0..1000 {
            let form = FormId::new(
                ctx.from_index(rng.random_range(0..q)),
                ctx.from_index(rng.random_range(0..q)),
            );
            if form.is_zero() {
                continue;
            }
            let scaled = FormId::new(ctx.mul(u, form.gamma), ctx.mul(u, form.delta));
            let s0 = exp_sum_counts(&params, &ctx, ctx.zero(), form.gamma, form.delta);
            let s0_scaled =
                exp_sum_counts(&params, &ctx, ctx.zero(), scaled.gamma, scaled.delta);
            let (i, j) = sign_classification(&params, &ctx, &form, &s0).unwrap();
            let (i2, j2) = sign_classification(&params, &ctx, &scaled, &s0_scaled).unwrap();
            assert_eq!(i, i2);
            if i == 1 {
                assert_eq!(j, j2, "even-rank sign must be scaling-invariant");
            } else {
                assert_eq!(j, -j2, "odd-rank sign must flip under a non-square scale");
            }
        }
    }

    #[test]
    fn sweep_budget_guard_fires() {
        let (params, ctx) = setup(3, 3, 1);
        let tiny = Limits { max_sweep_ops: 100, ..Limits::default() };
        assert!(matches!(
            rank_distribution(&params, &ctx, &tiny),
            Err(FormError::TableLimitExceeded { .. })
        ));
    }
}
