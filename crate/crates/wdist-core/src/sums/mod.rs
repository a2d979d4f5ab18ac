//! Exact evaluation, classification, and distribution of the exponential sums
//!
//!   S(ε, γ, δ) = Σ_{x ∈ F_{p^n}} ζ^{Tr(εx + γx^{p^k+1} + δx^{p^{3k}+1})}.
//!
//! Every sum is held as its count vector (N(0), …, N(p−1)) — see
//! [`cyclotomic`] — so moments and distribution checks are integer
//! equalities. Three verification layers live here:
//!
//! * **moments** — Σ S(0,γ,δ) = p^{2n} and Σ S(0,γ,δ)² equal to the value
//!   selected by p^d mod 4, both accumulated exactly;
//! * **ε = 0 distribution** — the classified S(0,γ,δ) over all
//!   (γ,δ) ≠ (0,0) against the six closed sign-class frequencies;
//! * **full distribution** — the classified S(ε,γ,δ) over the whole
//!   (ε,γ,δ)-cube against the closed table, which splits by the parity of
//!   d = gcd(n,k) and, within each rank class, by the sign j and the
//!   root-of-unity offset ρ₀.
//!
//! The direct evaluator walks x = α^j in log order and reads traces from
//! tables; [`transform`] provides the fast all-ε path used by large weight
//! sweeps and cross-checked against the evaluator.

pub mod cyclotomic;
pub mod transform;

pub use cyclotomic::{
    classify_counts, gauss_sum_square_check, CyclotomicCounts, CyclotomicInt, SumClass,
};
pub use transform::{batch_counts_over_epsilon, TransformWorkspace};

use crate::distribution::DistributionTable;
use crate::field::{quadratic_character, CodeParams, FieldCtx, FieldElement};
use crate::forms;
use crate::limits::Limits;
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SumError {
    #[error("count vector has an irrational norm (autocorrelation not constant off lag 0): {counts:?}")]
    NonRationalNorm { counts: Vec<u64> },
    #[error("count vector fits no value template: {counts:?}")]
    UnclassifiableCounts { counts: Vec<u64> },
    #[error("transform grid of {required} bytes exceeds the memory cap of {cap} bytes")]
    MemoryCapExceeded { required: u64, cap: u64 },
    #[error("recovered solution count is not integral: {detail}")]
    NonIntegralCount { detail: String },
    #[error("moment {which} mismatch: computed {got}, expected {expected}")]
    MomentMismatch { which: u8, got: String, expected: String },
    #[error("distribution mismatch at class {class}: counted {got}, closed form gives {expected}")]
    DistributionMismatch { class: SumClass, got: BigUint, expected: BigUint },
    #[error("closed-form frequency is not an integer: {detail}")]
    NonIntegralFrequency { detail: String },
    #[error("closed-form frequency is negative: {detail}")]
    NegativeFrequency { detail: String },
    #[error("sweep of {required} operations exceeds the configured limit of {cap}")]
    SweepLimitExceeded { required: u128, cap: u128 },
}

/// Reusable evaluator for S(ε, γ, δ) count vectors at fixed (params, ctx).
///
/// Precomputes the log-domain power maps j ↦ j·(p^k + 1) mod (q − 1) and
/// j ↦ j·(p^{3k} + 1) mod (q − 1), so each x = α^j costs three table reads.
pub struct Evaluator<'a> {
    params: &'a CodeParams,
    ctx: &'a FieldCtx,
    pow1: Vec<u32>,
    pow3: Vec<u32>,
}

impl<'a> Evaluator<'a> {
    pub fn new(params: &'a CodeParams, ctx: &'a FieldCtx) -> Self {
        assert_eq!(params.p, ctx.p(), "params and field context disagree on p");
        assert_eq!(params.n, ctx.n(), "params and field context disagree on n");
        let q1 = ctx.units_order();
        let e1 = (params.p_pow(params.k % params.n) + 1) % q1;
        let e3 = (params.p_pow(3 * params.k % params.n) + 1) % q1;
        let map = |e: u64| (0..q1).map(|j| (j * e % q1) as u32).collect();
        Evaluator { params, ctx, pow1: map(e1), pow3: map(e3) }
    }

    /// Fill `out[ρ] = #{x : Tr(εx + γx^{p^k+1} + δx^{p^{3k}+1}) = ρ}`.
    pub fn counts_into(
        &self,
        eps: FieldElement,
        gamma: FieldElement,
        delta: FieldElement,
        out: &mut [u64],
    ) {
        let p = self.params.p as u32;
        debug_assert_eq!(out.len(), p as usize);
        out.fill(0);
        out[0] += 1; // x = 0 contributes trace 0
        let q1 = self.ctx.units_order();
        let le = self.ctx.log(eps);
        let lg = self.ctx.log(gamma);
        let ld = self.ctx.log(delta);
        let term = |l: Option<u64>, shift: u32| -> u32 {
            match l {
                None => 0,
                Some(l) => {
                    let mut t = l + shift as u64;
                    if t >= q1 {
                        t -= q1;
                    }
                    self.ctx.tr1_of_index(self.ctx.exp_raw(t as usize) as usize)
                }
            }
        };
        for j in 0..q1 as usize {
            let rho =
                (term(le, j as u32) + term(lg, self.pow1[j]) + term(ld, self.pow3[j])) % p;
            out[rho as usize] += 1;
        }
        debug_assert_eq!(out.iter().sum::<u64>(), self.ctx.q());
    }

    pub fn counts(
        &self,
        eps: FieldElement,
        gamma: FieldElement,
        delta: FieldElement,
    ) -> CyclotomicCounts {
        let mut out = vec![0u64; self.params.p as usize];
        self.counts_into(eps, gamma, delta, &mut out);
        CyclotomicCounts::new(out)
    }
}

/// One-shot count vector of S(ε, γ, δ); sweeps should hold an [`Evaluator`].
pub fn exp_sum_counts(
    params: &CodeParams,
    ctx: &FieldCtx,
    eps: FieldElement,
    gamma: FieldElement,
    delta: FieldElement,
) -> CyclotomicCounts {
    Evaluator::new(params, ctx).counts(eps, gamma, delta)
}

/// Classify one sum's count vector against the four value templates.
pub fn classify_sum(params: &CodeParams, counts: &CyclotomicCounts) -> Result<SumClass, SumError> {
    classify_counts(params.p, counts)
}

fn check_budget(required: u128, limits: &Limits) -> Result<(), SumError> {
    if required > limits.max_sweep_ops {
        return Err(SumError::SweepLimitExceeded { required, cap: limits.max_sweep_ops });
    }
    Ok(())
}

/// Exact first and second moments of S(0, γ, δ) over all q² pairs,
/// as decimal strings (they exceed u64 quickly).
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub first: String,
    pub first_expected: String,
    pub second: String,
    pub second_expected: String,
}

/// Verify Σ_{γ,δ} S(0,γ,δ) = p^{2n} and
/// Σ_{γ,δ} S(0,γ,δ)² = p^{2n}(2p^n − 1) if p^d ≡ 1 (mod 4), else p^{2n}.
///
/// Both sums run over all of F_{p^n} × F_{p^n} including (0,0), accumulate
/// exactly in the count-vector algebra, and reduce to rational integers at
/// the end; a non-rational accumulated vector is itself a mismatch.
pub fn moment_checks(
    params: &CodeParams,
    ctx: &FieldCtx,
    limits: &Limits,
) -> Result<MomentReport, SumError> {
    let q = params.q() as u128;
    check_budget(q * q * q, limits)?;
    let pu = params.p as usize;
    let evaluator = Evaluator::new(params, ctx);
    let order = forms::sweep_order(ctx);

    let locals: Vec<(Vec<i128>, Vec<i128>)> = order
        .par_iter()
        .map(|&gamma| {
            let mut sum = vec![0i128; pu];
            let mut sumsq = vec![0i128; pu];
            let mut buf = vec![0u64; pu];
            for &delta in &order {
                evaluator.counts_into(ctx.zero(), gamma, delta, &mut buf);
                for (acc, &c) in sum.iter_mut().zip(buf.iter()) {
                    *acc += c as i128;
                }
                for i in 0..pu {
                    if buf[i] == 0 {
                        continue;
                    }
                    for j in 0..pu {
                        sumsq[(i + j) % pu] += buf[i] as i128 * buf[j] as i128;
                    }
                }
            }
            (sum, sumsq)
        })
        .collect();

    let mut first_vec = CyclotomicInt::zeroed(params.p);
    let mut second_vec = CyclotomicInt::zeroed(params.p);
    for (sum, sumsq) in locals {
        first_vec.add_assign(&CyclotomicInt::from_raw(sum));
        second_vec.add_assign(&CyclotomicInt::from_raw(sumsq));
    }

    let first_expected = (params.p as i128).pow(2 * params.n);
    let second_expected = if params.p_pow(params.d) % 4 == 1 {
        first_expected * (2 * (params.p as i128).pow(params.n) - 1)
    } else {
        first_expected
    };

    let first = first_vec.reduce_to_integer().ok_or_else(|| SumError::MomentMismatch {
        which: 1,
        got: "a non-rational cyclotomic vector".into(),
        expected: first_expected.to_string(),
    })?;
    if first != first_expected {
        return Err(SumError::MomentMismatch {
            which: 1,
            got: first.to_string(),
            expected: first_expected.to_string(),
        });
    }
    let second = second_vec.reduce_to_integer().ok_or_else(|| SumError::MomentMismatch {
        which: 2,
        got: "a non-rational cyclotomic vector".into(),
        expected: second_expected.to_string(),
    })?;
    if second != second_expected {
        return Err(SumError::MomentMismatch {
            which: 2,
            got: second.to_string(),
            expected: second_expected.to_string(),
        });
    }
    Ok(MomentReport {
        first: first.to_string(),
        first_expected: first_expected.to_string(),
        second: second.to_string(),
        second_expected: second_expected.to_string(),
    })
}

/// Which triples a distribution sweep covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    /// ε = 0, (γ, δ) ≠ (0, 0): the six-row sign-class table.
    GammaDeltaOnly,
    /// The whole (ε, γ, δ) cube, origin included.
    Full,
}

/// Outcome of a verified distribution sweep: the empirical histogram and the
/// closed-form table it was checked against (zero-frequency closed rows are
/// retained for reference; the comparison ignores them).
#[derive(Debug, Clone, Serialize)]
pub struct SDistributionReport {
    pub sweep: SweepKind,
    pub empirical: DistributionTable<SumClass>,
    pub closed: DistributionTable<SumClass>,
}

/// Classify every sum in the requested sweep and compare against the closed
/// table; errors with the first divergent row on any disagreement.
pub fn s_distribution(
    params: &CodeParams,
    ctx: &FieldCtx,
    sweep: SweepKind,
    limits: &Limits,
) -> Result<SDistributionReport, SumError> {
    let q = params.q() as u128;
    let required = match sweep {
        SweepKind::GammaDeltaOnly => q * q * q,
        SweepKind::Full => q * q * q * q,
    };
    check_budget(required, limits)?;

    let evaluator = Evaluator::new(params, ctx);
    let order = forms::sweep_order(ctx);
    let pu = params.p as usize;

    let locals: Result<Vec<BTreeMap<SumClass, u64>>, SumError> = order
        .par_iter()
        .map(|&gamma| {
            let mut local: BTreeMap<SumClass, u64> = BTreeMap::new();
            let mut buf = vec![0u64; pu];
            for &delta in &order {
                match sweep {
                    SweepKind::GammaDeltaOnly => {
                        if gamma.is_zero() && delta.is_zero() {
                            continue;
                        }
                        evaluator.counts_into(ctx.zero(), gamma, delta, &mut buf);
                        let class =
                            classify_counts(params.p, &CyclotomicCounts::new(buf.clone()))?;
                        *local.entry(class).or_insert(0) += 1;
                    }
                    SweepKind::Full => {
                        for eps in ctx.elements() {
                            evaluator.counts_into(eps, gamma, delta, &mut buf);
                            let class =
                                classify_counts(params.p, &CyclotomicCounts::new(buf.clone()))?;
                            *local.entry(class).or_insert(0) += 1;
                        }
                    }
                }
            }
            Ok(local)
        })
        .collect();

    let mut empirical = DistributionTable::new();
    for local in locals? {
        for (class, count) in local {
            empirical.add(class, BigUint::from(count));
        }
    }

    let closed = match sweep {
        SweepKind::GammaDeltaOnly => closed_s0_distribution(params)?,
        SweepKind::Full => closed_full_s_distribution(params)?,
    };
    if let Some((class, got, expected)) =
        empirical.first_divergence(&closed.without_zero_rows())
    {
        return Err(SumError::DistributionMismatch { class, got, expected });
    }
    Ok(SDistributionReport { sweep, empirical, closed })
}

/// p^e as a BigInt, rejecting negative exponents (which arise only outside
/// the standing hypotheses, e.g. s = 1).
fn p_pow_big(p: u64, e: i64, context: &str) -> Result<BigInt, SumError> {
    if e < 0 {
        return Err(SumError::NonIntegralFrequency {
            detail: format!("{context}: exponent {e} is negative"),
        });
    }
    Ok(BigInt::from(p).pow(e as u32))
}

/// Per-form multiplicity p^main + mult·p^shift, scaled by the class size.
fn signed_freq(
    p: u64,
    main: i64,
    shift: i64,
    mult: i64,
    class_size: &BigUint,
    context: &str,
) -> Result<BigUint, SumError> {
    let mut per_form = p_pow_big(p, main, context)?;
    if mult != 0 {
        per_form += BigInt::from(mult) * p_pow_big(p, shift, context)?;
    }
    if per_form.sign() == Sign::Minus {
        return Err(SumError::NegativeFrequency { detail: context.to_string() });
    }
    let per_form = per_form.to_biguint().expect("checked nonnegative");
    Ok(per_form * class_size)
}

fn sign_counts_for_sums(params: &CodeParams) -> Result<Vec<((u32, i8), BigUint)>, SumError> {
    forms::closed_sign_counts(params).map_err(|_| SumError::NonIntegralFrequency {
        detail: "closed sign-class sizes are not integral".into(),
    })
}

/// Closed six-row table for the ε = 0 sweep: each sign class (i, j) of size
/// |R_{i,j}| contributes one value of squared magnitude p^{n+id}, real
/// (ρ₀ = 0), Gauss-shaped when n + id is odd and rational otherwise.
pub fn closed_s0_distribution(
    params: &CodeParams,
) -> Result<DistributionTable<SumClass>, SumError> {
    let mut table = DistributionTable::new();
    for ((i, j), class_size) in sign_counts_for_sums(params)? {
        let exponent2 = params.n + i * params.d;
        let class = if exponent2 % 2 == 1 {
            SumClass::Gauss { sign: j, exponent2, rho0: 0 }
        } else {
            SumClass::Rational { sign: j, exponent2, rho0: 0 }
        };
        table.add(class, class_size);
    }
    Ok(table)
}

/// Closed distribution of S(ε, γ, δ) over the full cube.
///
/// Shared rows: the zero value occurs
/// (p^n − 1)(p^{2n−d} − p^{2n−2d} + p^{2n−3d} − p^{n−2d} + 1) times and the
/// full value p^n once, at the origin. Each sign class (i, j) then spreads
/// over the offsets ρ ∈ [0, p) with per-form multiplicities
///
///   odd n + id (Gauss rows):      p^{n−id−1} + j·η(−ρ)·p^{(n−id−1)/2},
///   even n + id (rational rows):  p^{n−id−1} + j·v(ρ)·p^{(n−id−2)/2},
///
/// where v(0) = p − 1 and v(ρ) = −1 otherwise. Rows of empty classes are
/// skipped; rows whose multiplicity vanishes are kept with frequency 0.
pub fn closed_full_s_distribution(
    params: &CodeParams,
) -> Result<DistributionTable<SumClass>, SumError> {
    let (p, n, d) = (params.p, params.n as i64, params.d as i64);
    let mut table = DistributionTable::new();

    let zero_freq: BigInt = (p_pow_big(p, n, "zero row")? - 1)
        * (p_pow_big(p, 2 * n - d, "zero row")? - p_pow_big(p, 2 * n - 2 * d, "zero row")?
            + p_pow_big(p, 2 * n - 3 * d, "zero row")?
            - p_pow_big(p, n - 2 * d, "zero row")?
            + 1);
    if zero_freq.sign() == Sign::Minus {
        return Err(SumError::NegativeFrequency { detail: "zero row".into() });
    }
    table.add(SumClass::Zero, zero_freq.to_biguint().expect("checked nonnegative"));
    table.add(SumClass::Full, BigUint::one());

    for ((i, j), class_size) in sign_counts_for_sums(params)? {
        if class_size.is_zero() {
            continue;
        }
        let exponent2 = params.n + i * params.d;
        let main = n - i as i64 * d - 1;
        for rho in 0..p {
            let context = format!("class (i={i}, j={j}), offset {rho}");
            let (class, freq) = if exponent2 % 2 == 1 {
                if main < 0 || main % 2 != 0 {
                    return Err(SumError::NonIntegralFrequency { detail: context });
                }
                let mult = j as i64 * quadratic_character(p, -(rho as i64)) as i64;
                let freq = signed_freq(p, main, main / 2, mult, &class_size, &context)?;
                (SumClass::Gauss { sign: j, exponent2, rho0: rho as u32 }, freq)
            } else {
                if main < 1 || main % 2 != 1 {
                    return Err(SumError::NonIntegralFrequency { detail: context });
                }
                let v = if rho == 0 { p as i64 - 1 } else { -1 };
                let freq =
                    signed_freq(p, main, (main - 1) / 2, j as i64 * v, &class_size, &context)?;
                (SumClass::Rational { sign: j, exponent2, rho0: rho as u32 }, freq)
            };
            table.add(class, freq);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, validate_params};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn setup(p: u64, n: u32, k: u32) -> (CodeParams, FieldCtx) {
        (validate_params(p, n, k).unwrap(), make_field(p, n, None).unwrap())
    }

    #[test]
    fn count_vectors_have_the_trivial_shapes() {
        let (params, ctx) = setup(3, 3, 1);
        let zero = ctx.zero();
        let origin = exp_sum_counts(&params, &ctx, zero, zero, zero);
        assert_eq!(origin.counts(), &[27, 0, 0]);
        for eps in ctx.units() {
            let linear = exp_sum_counts(&params, &ctx, eps, zero, zero);
            assert_eq!(linear.counts(), &[9, 9, 9]);
        }
        let mut rng = StdRng::seed_from_u64(7);
        let q = ctx.q();
        for _ in 0..100 {
            let counts = exp_sum_counts(
                &params,
                &ctx,
                ctx.from_index(rng.random_range(0..q)),
                ctx.from_index(rng.random_range(0..q)),
                ctx.from_index(rng.random_range(0..q)),
            );
            assert_eq!(counts.total(), 27);
        }
    }

    #[test]
    fn moments_match_both_mod_four_branches() {
        let (params, ctx) = setup(3, 3, 1);
        let report = moment_checks(&params, &ctx, &Limits::default()).unwrap();
        assert_eq!(report.first, "729");
        assert_eq!(report.second, "729"); // 3 ≡ 3 (mod 4)

        let (params, ctx) = setup(5, 3, 1);
        let report = moment_checks(&params, &ctx, &Limits::default()).unwrap();
        assert_eq!(report.first, "15625");
        assert_eq!(report.second, (15625u64 * 249).to_string()); // 5 ≡ 1 (mod 4)
    }

    #[test]
    fn epsilon_zero_distribution_matches_the_six_closed_rows() {
        let (params, ctx) = setup(3, 3, 1);
        let report =
            s_distribution(&params, &ctx, SweepKind::GammaDeltaOnly, &Limits::default()).unwrap();
        let freq = |class: SumClass| report.empirical.get(&class);
        assert_eq!(freq(SumClass::Gauss { sign: 1, exponent2: 3, rho0: 0 }), 234u32.into());
        assert_eq!(freq(SumClass::Gauss { sign: -1, exponent2: 3, rho0: 0 }), 234u32.into());
        assert_eq!(freq(SumClass::Rational { sign: 1, exponent2: 4, rho0: 0 }), 156u32.into());
        assert_eq!(freq(SumClass::Rational { sign: -1, exponent2: 4, rho0: 0 }), 78u32.into());
        assert_eq!(freq(SumClass::Gauss { sign: 1, exponent2: 5, rho0: 0 }), 13u32.into());
        assert_eq!(freq(SumClass::Gauss { sign: -1, exponent2: 5, rho0: 0 }), 13u32.into());
        assert_eq!(report.empirical.total(), 728u32.into());
    }

    #[test]
    fn full_cube_distribution_matches_the_closed_table() {
        let (params, ctx) = setup(3, 3, 1);
        let report = s_distribution(&params, &ctx, SweepKind::Full, &Limits::default()).unwrap();
        assert_eq!(report.empirical.get(&SumClass::Zero), 4862u32.into());
        assert_eq!(report.empirical.get(&SumClass::Full), 1u32.into());
        // Spot values worked out by hand from the per-class multiplicities.
        assert_eq!(
            report.empirical.get(&SumClass::Rational { sign: 1, exponent2: 4, rho0: 0 }),
            780u32.into()
        );
        assert_eq!(
            report.empirical.get(&SumClass::Gauss { sign: 1, exponent2: 5, rho0: 2 }),
            26u32.into()
        );
        assert_eq!(report.empirical.total(), 19683u32.into());
        // The closed table keeps its zero-frequency rows.
        assert_eq!(
            report.closed.get(&SumClass::Gauss { sign: 1, exponent2: 5, rho0: 1 }),
            BigUint::ZERO
        );
    }

    #[test]
    fn closed_full_table_mass_is_the_cube_size_at_many_parameters() {
        for (p, n, k) in [(3, 3, 1), (5, 3, 1), (3, 5, 1), (7, 3, 1), (3, 9, 3), (3, 6, 2), (5, 6, 2)]
        {
            let params = validate_params(p, n, k).unwrap();
            let table = closed_full_s_distribution(&params).unwrap();
            assert_eq!(
                table.total(),
                BigUint::from(p).pow(3 * n),
                "total must be p^(3n) at ({p},{n},{k})"
            );
            let s0 = closed_s0_distribution(&params).unwrap();
            assert_eq!(s0.total(), BigUint::from(p).pow(2 * n) - 1u32);
        }
    }

    #[test]
    fn degenerate_s_equals_one_parameters_are_rejected_by_the_closed_table() {
        // (3, 3, 3) has s = 1: validation passes (s is odd) but the closed
        // table's exponents leave the integral range.
        let params = validate_params(3, 3, 3).unwrap();
        assert_eq!(params.s, 1);
        assert!(matches!(
            closed_full_s_distribution(&params),
            Err(SumError::NonIntegralFrequency { .. })
        ));
    }

    #[test]
    fn scaling_a_triple_preserves_kind_and_magnitude() {
        let (params, ctx) = setup(3, 3, 1);
        let mut rng = StdRng::seed_from_u64(0xca105);
        let q = ctx.q();
        let two = ctx.from_index(2); // the element 2 = −1 of F_3 ⊂ GF(27)
        for _ in 0..100 {
            let (eps, gamma, delta) = (
                ctx.from_index(rng.random_range(0..q)),
                ctx.from_index(rng.random_range(0..q)),
                ctx.from_index(rng.random_range(0..q)),
            );
            let base = classify_sum(&params, &exp_sum_counts(&params, &ctx, eps, gamma, delta))
                .unwrap();
            let scaled = classify_sum(
                &params,
                &exp_sum_counts(
                    &params,
                    &ctx,
                    ctx.mul(two, eps),
                    ctx.mul(two, gamma),
                    ctx.mul(two, delta),
                ),
            )
            .unwrap();
            match (base, scaled) {
                (SumClass::Zero, SumClass::Zero) | (SumClass::Full, SumClass::Full) => {}
                (
                    SumClass::Rational { exponent2: a, .. },
                    SumClass::Rational { exponent2: b, .. },
                )
                | (SumClass::Gauss { exponent2: a, .. }, SumClass::Gauss { exponent2: b, .. }) => {
                    assert_eq!(a, b)
                }
                other => panic!("kind changed under scaling: {other:?}"),
            }
        }
    }

    #[test]
    fn forms_with_delta_zero_are_bent() {
        let (params, ctx) = setup(3, 3, 1);
        for gamma in ctx.units() {
            for eps in ctx.elements() {
                let counts = exp_sum_counts(&params, &ctx, eps, gamma, ctx.zero());
                assert_eq!(counts.magnitude_squared().unwrap(), 27);
            }
        }
    }

    #[test]
    fn sweep_budget_guard_fires() {
        let (params, ctx) = setup(3, 3, 1);
        let tiny = Limits { max_sweep_ops: 10, ..Limits::default() };
        assert!(matches!(
            moment_checks(&params, &ctx, &tiny),
            Err(SumError::SweepLimitExceeded { .. })
        ));
        assert!(matches!(
            s_distribution(&params, &ctx, SweepKind::Full, &tiny),
            Err(SumError::SweepLimitExceeded { .. })
        ));
    }
}
