//! Codeword weights and the weight distribution of the code, by three routes.
//!
//! A codeword is indexed by a triple (ε, γ, δ): its symbols are
//! Tr(εx + γx^{p^k+1} + δx^{p^{3k}+1}) over x ∈ F_{p^n}* in log order
//! (x = α⁰, α¹, …), so the code has length p^n − 1 and p^{3n} codewords.
//! The Hamming weight of a codeword is p^n − N(0), where N is its count
//! vector.
//!
//! Routes to the distribution:
//!
//! * **enumerate** — one count vector per triple, weight read off N(0);
//! * **transform** — the batch engine produces all ε at once per (γ, δ);
//! * **closed form** — every row of the closed sum-class table maps to a
//!   weight through the Galois-sum identity
//!   N(0) = (p^n + Σ_{t≠0} σ_t(S))/p, which depends only on the class:
//!
//!   | class                | weight                                        |
//!   |----------------------|-----------------------------------------------|
//!   | Zero                 | (p−1)p^{n−1}                                  |
//!   | Full                 | 0                                             |
//!   | Rational, ρ₀ = 0     | (p−1)(p^{n−1} − j·p^{(e−2)/2})                |
//!   | Rational, ρ₀ ≠ 0     | (p−1)p^{n−1} + j·p^{(e−2)/2}                  |
//!   | Gauss, ρ₀ = 0        | (p−1)p^{n−1}                                  |
//!   | Gauss, ρ₀ ≠ 0        | (p−1)p^{n−1} − j·η(−ρ₀)·p^{(e−1)/2}           |
//!
//!   with e the squared-magnitude exponent (|S|² = p^e). Distinct classes
//!   frequently share a weight at small parameters; the table key is the
//!   numeric weight and frequencies add, because enumeration can only
//!   observe merged weights.
//!
//! The closed table and the empirical sweeps share no code path beyond field
//! arithmetic — their exact equality is the verification product.

use crate::distribution::DistributionTable;
use crate::field::{quadratic_character, CodeParams, FieldCtx, FieldElement};
use crate::forms;
use crate::limits::Limits;
use crate::sums::transform::TransformPlan;
use crate::sums::{closed_full_s_distribution, exp_sum_counts, Evaluator, SumClass, SumError};
use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::Serialize;
use thiserror::Error;

/// The triple naming one codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodewordId {
    pub epsilon: FieldElement,
    pub gamma: FieldElement,
    pub delta: FieldElement,
}

#[derive(Debug, Error)]
pub enum WeightError {
    #[error("weight sweep of {required} operations exceeds the budget of {cap}")]
    BudgetExceeded { required: u128, cap: u128 },
    #[error("weight table violates a structural invariant: {detail}")]
    InvariantViolated { detail: String },
    #[error(transparent)]
    Sum(#[from] SumError),
}

/// How an empirical weight distribution is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Enumerate,
    Transform,
}

/// Hamming weight of one codeword: p^n − N(0).
pub fn codeword_weight(params: &CodeParams, ctx: &FieldCtx, id: &CodewordId) -> u64 {
    let counts = exp_sum_counts(params, ctx, id.epsilon, id.gamma, id.delta);
    params.q() - counts.counts()[0]
}

/// Weight distribution over all p^{3n} codewords, by full sweep.
pub fn empirical_weight_distribution(
    params: &CodeParams,
    ctx: &FieldCtx,
    method: Method,
    limits: &Limits,
) -> Result<DistributionTable<u64>, WeightError> {
    let q = params.q() as u128;
    let p2 = (params.p * params.p) as u128;
    let required = match method {
        Method::Enumerate => q * q * q * q,
        Method::Transform => q * q * (q * p2 * params.n as u128), // q² pairs × q·p²·n per pair
    };
    if required > limits.max_sweep_ops {
        return Err(WeightError::BudgetExceeded { required, cap: limits.max_sweep_ops });
    }

    let order = forms::sweep_order(ctx);
    let qu = params.q() as usize;
    let pu = params.p as usize;

    let locals: Result<Vec<Vec<u64>>, WeightError> = match method {
        Method::Enumerate => {
            let evaluator = Evaluator::new(params, ctx);
            order
                .par_iter()
                .map(|&gamma| {
                    let mut hist = vec![0u64; qu];
                    let mut buf = vec![0u64; pu];
                    for &delta in &order {
                        for eps in ctx.elements() {
                            evaluator.counts_into(eps, gamma, delta, &mut buf);
                            hist[qu - buf[0] as usize] += 1;
                        }
                    }
                    Ok(hist)
                })
                .collect()
        }
        Method::Transform => {
            let plan = TransformPlan::new(params, ctx, limits)?;
            order
                .par_iter()
                .map(|&gamma| {
                    let mut hist = vec![0u64; qu];
                    let mut ws = plan.workspace();
                    for &delta in &order {
                        plan.run(&mut ws, gamma, delta)?;
                        for eps in 0..qu {
                            hist[qu - ws.out[eps * pu] as usize] += 1;
                        }
                    }
                    Ok(hist)
                })
                .collect()
        }
    };

    let mut merged = vec![0u64; qu];
    for local in locals? {
        for (m, l) in merged.iter_mut().zip(local) {
            *m += l;
        }
    }
    let mut table = DistributionTable::new();
    for (w, &f) in merged.iter().enumerate() {
        if f > 0 {
            table.add(w as u64, BigUint::from(f));
        }
    }
    Ok(table)
}

/// The weight attached to one sum class by the Galois-sum identity.
fn weight_of_class(params: &CodeParams, class: SumClass) -> Result<u64, WeightError> {
    let (p, n) = (params.p, params.n);
    let main = (p - 1) * params.p_pow(n - 1);
    let shifted = |e2: u32, sub: u32| -> Result<u64, WeightError> {
        if e2 < sub {
            return Err(WeightError::InvariantViolated {
                detail: format!("sum class of squared magnitude p^{e2} below the weight map's range"),
            });
        }
        Ok(params.p_pow((e2 - sub) / 2))
    };
    let w = match class {
        SumClass::Zero => main as i128,
        SumClass::Full => 0,
        SumClass::Rational { sign, exponent2, rho0 } => {
            let step = shifted(exponent2, 2)? as i128;
            if rho0 == 0 {
                (p as i128 - 1) * (params.p_pow(n - 1) as i128 - sign as i128 * step)
            } else {
                main as i128 + sign as i128 * step
            }
        }
        SumClass::Gauss { sign, exponent2, rho0 } => {
            if rho0 == 0 {
                main as i128
            } else {
                let step = shifted(exponent2, 1)? as i128;
                let eta = quadratic_character(p, -(rho0 as i64)) as i128;
                main as i128 - sign as i128 * eta * step
            }
        }
    };
    // Occupied rows stay within [0, p^n − 1]; zero-frequency rows of the
    // closed table may reach exactly p^n, so only values beyond that are bugs.
    if w < 0 || w as u64 > params.q() {
        return Err(WeightError::InvariantViolated {
            detail: format!("class {class} maps to weight {w} outside [0, p^n]"),
        });
    }
    Ok(w as u64)
}

/// Closed-form weight distribution: every row of the closed sum-class table,
/// mapped through [`weight_of_class`] and merged by numeric weight.
/// Zero-frequency rows are retained; comparisons normalize them away.
pub fn closed_form_weight_distribution(
    params: &CodeParams,
) -> Result<DistributionTable<u64>, WeightError> {
    let classes = closed_full_s_distribution(params)?;
    let mut table = DistributionTable::new();
    for (&class, freq) in classes.iter() {
        table.add(weight_of_class(params, class)?, freq.clone());
    }
    Ok(table)
}

/// Check the three structural invariants every weight table must satisfy:
/// Σf = p^{3n}, f(0) = 1, and Σ w·f = (p^n − 1)(p − 1)p^{3n−1}.
pub fn check_weight_invariants(
    params: &CodeParams,
    table: &DistributionTable<u64>,
) -> Result<(), WeightError> {
    let p = BigUint::from(params.p);
    let fail = |detail: String| Err(WeightError::InvariantViolated { detail });

    let total = table.total();
    let expected_total = p.pow(3 * params.n);
    if total != expected_total {
        return fail(format!("frequency total {total}, expected p^(3n) = {expected_total}"));
    }
    if table.get(&0) != BigUint::from(1u32) {
        return fail(format!("weight-0 frequency {}, expected exactly 1", table.get(&0)));
    }
    let mut moment = BigUint::zero();
    for (&w, f) in table.iter() {
        moment += BigUint::from(w) * f;
    }
    let expected_moment =
        (p.pow(params.n) - 1u32) * (params.p - 1) * p.pow(3 * params.n - 1);
    if moment != expected_moment {
        return fail(format!("first power moment {moment}, expected {expected_moment}"));
    }
    Ok(())
}

/// One divergent weight row in a failed comparison.
#[derive(Debug, Clone, Serialize)]
pub struct WeightDivergence {
    pub weight: u64,
    pub closed: String,
    pub empirical: String,
}

/// Outcome of checking the closed-form table against an empirical sweep.
#[derive(Debug, Clone, Serialize)]
pub struct WeightVerification {
    pub method: Method,
    pub pass: bool,
    pub closed: DistributionTable<u64>,
    pub empirical: DistributionTable<u64>,
    pub divergences: Vec<WeightDivergence>,
}

/// Compute both tables and compare them exactly. `method` None picks
/// enumeration for small fields and the transform engine otherwise.
pub fn verify_weight_distribution(
    params: &CodeParams,
    ctx: &FieldCtx,
    method: Option<Method>,
    limits: &Limits,
) -> Result<WeightVerification, WeightError> {
    let method = method.unwrap_or(if params.q() <= 128 {
        Method::Enumerate
    } else {
        Method::Transform
    });
    let closed = closed_form_weight_distribution(params)?;
    let empirical = empirical_weight_distribution(params, ctx, method, limits)?;
    let divergences: Vec<WeightDivergence> = closed
        .without_zero_rows()
        .divergences(&empirical)
        .into_iter()
        .map(|(weight, c, e)| WeightDivergence {
            weight,
            closed: c.to_string(),
            empirical: e.to_string(),
        })
        .collect();
    Ok(WeightVerification { method, pass: divergences.is_empty(), closed, empirical, divergences })
}

/// Smallest weight with positive frequency above zero — the observed minimum
/// distance of the code (reported, not certified).
pub fn min_positive_weight(table: &DistributionTable<u64>) -> Option<u64> {
    table.iter().find(|(&w, f)| w > 0 && !f.is_zero()).map(|(&w, _)| w)
}

/// A weight distribution with its parameter header, as emitted to users.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    pub p: u64,
    pub n: u32,
    pub k: u32,
    pub modulus: String,
    pub rows: DistributionTable<u64>,
}

impl WeightTable {
    pub fn assemble(params: &CodeParams, modulus: String, rows: DistributionTable<u64>) -> Self {
        WeightTable { p: params.p, n: params.n, k: params.k, modulus, rows }
    }

    /// CSV mirror of the JSON rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("weight,frequency\n");
        for (w, f) in self.rows.iter() {
            out.push_str(&format!("{w},{f}\n"));
        }
        out
    }
}

/// JSON: {"p":…,"n":…,"k":…,"modulus":"…","rows":[{"weight":w,"freq":"…"},…]}
/// with rows sorted by weight and frequencies as decimal strings.
impl Serialize for WeightTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Rows<'a>(&'a DistributionTable<u64>);
        impl Serialize for Rows<'_> {
            fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                #[derive(Serialize)]
                struct Row<'a> {
                    weight: u64,
                    freq: &'a str,
                }
                let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
                for (&weight, f) in self.0.iter() {
                    seq.serialize_element(&Row { weight, freq: &f.to_string() })?;
                }
                seq.end()
            }
        }
        let mut s = serializer.serialize_struct("WeightTable", 5)?;
        s.serialize_field("p", &self.p)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("modulus", &self.modulus)?;
        s.serialize_field("rows", &Rows(&self.rows))?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, validate_params};

    fn setup(p: u64, n: u32, k: u32) -> (CodeParams, FieldCtx) {
        (validate_params(p, n, k).unwrap(), make_field(p, n, None).unwrap())
    }

    fn frozen(table: &[(u64, u64)]) -> DistributionTable<u64> {
        table.iter().map(|&(w, f)| (w, BigUint::from(f))).collect()
    }

    #[test]
    fn trivial_codeword_weights() {
        let (params, ctx) = setup(3, 3, 1);
        let zero = ctx.zero();
        assert_eq!(
            codeword_weight(&params, &ctx, &CodewordId { epsilon: zero, gamma: zero, delta: zero }),
            0
        );
        for eps in ctx.units() {
            assert_eq!(
                codeword_weight(&params, &ctx, &CodewordId { epsilon: eps, gamma: zero, delta: zero }),
                18,
                "a nonzero linear trace form is balanced"
            );
        }
    }

    #[test]
    fn closed_table_at_3_3_1_matches_the_hand_computed_rows() {
        let params = validate_params(3, 3, 1).unwrap();
        let table = closed_form_weight_distribution(&params).unwrap();
        let expected = frozen(&[
            (0, 1),
            (9, 52),
            (12, 780),
            (15, 6240),
            (18, 9100),
            (21, 3432),
            (24, 78),
            (27, 0),
        ]);
        assert_eq!(table, expected);
        assert_eq!(min_positive_weight(&table), Some(9));
    }

    #[test]
    fn closed_table_at_3_5_1_has_eight_merged_rows() {
        let params = validate_params(3, 5, 1).unwrap();
        let table = closed_form_weight_distribution(&params).unwrap();
        let expected = frozen(&[
            (0, 1),
            (135, 29040),
            (144, 359370),
            (153, 3855060),
            (162, 6719372),
            (171, 3188592),
            (180, 182952),
            (189, 14520),
        ]);
        assert_eq!(table, expected);
    }

    /// Every frequency here is hand-derived from the six class sizes at
    /// d = 2: |R₀,±| = 235872, |R₁,₊| = 32760, |R₁,₋| = 26208, |R₂,±| = 364,
    /// and the balanced-row count 38736152, e.g. the weight-468 row is
    /// (3⁵ + 2·3²)·235872 (rank-12 forms, sign +, codewords with ρ₀ = 0).
    #[test]
    fn closed_table_at_3_6_2_exercises_the_even_d_branch() {
        let params = validate_params(3, 6, 2).unwrap();
        let table = closed_form_weight_distribution(&params).unwrap();
        let expected = frozen(&[
            (0, 1),
            (324, 1820),
            (405, 2912),
            (432, 1081080),
            (459, 1572480),
            (468, 61562592),
            (477, 118879488),
            (486, 38736152),
            (495, 110388096),
            (504, 53071200),
            (513, 1572480),
            (540, 550368),
            (567, 1456),
            (648, 364),
        ]);
        assert_eq!(table, expected);
    }

    #[test]
    fn enumeration_confirms_the_closed_table_at_the_smallest_parameters() {
        let (params, ctx) = setup(3, 3, 1);
        let verification =
            verify_weight_distribution(&params, &ctx, Some(Method::Enumerate), &Limits::default())
                .unwrap();
        assert!(verification.pass, "divergences: {:?}", verification.divergences);
        assert_eq!(verification.empirical.total(), BigUint::from(19683u32));
    }

    #[test]
    fn both_empirical_methods_agree_exactly() {
        let (params, ctx) = setup(3, 3, 1);
        let by_enum =
            empirical_weight_distribution(&params, &ctx, Method::Enumerate, &Limits::default())
                .unwrap();
        let by_transform =
            empirical_weight_distribution(&params, &ctx, Method::Transform, &Limits::default())
                .unwrap();
        assert_eq!(by_enum, by_transform);
    }

    #[test]
    fn structural_invariants_hold_symbolically_at_many_parameters() {
        for (p, n, k) in [(3, 3, 1), (5, 3, 1), (3, 5, 1), (7, 3, 1), (3, 9, 3), (3, 6, 2), (5, 6, 2)]
        {
            let params = validate_params(p, n, k).unwrap();
            let table = closed_form_weight_distribution(&params).unwrap();
            check_weight_invariants(&params, &table)
                .unwrap_or_else(|e| panic!("invariant failed at ({p},{n},{k}): {e}"));
        }
    }

    #[test]
    fn budget_guard_fires() {
        let (params, ctx) = setup(3, 3, 1);
        let tiny = Limits { max_sweep_ops: 10, ..Limits::default() };
        assert!(matches!(
            empirical_weight_distribution(&params, &ctx, Method::Enumerate, &tiny),
            Err(WeightError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn weight_table_serialization_shapes() {
        let params = validate_params(3, 3, 1).unwrap();
        let rows = closed_form_weight_distribution(&params).unwrap();
        let table = WeightTable::assemble(&params, "1,0,2,1".into(), rows);
        let json = serde_json::to_string(&table).unwrap();
        assert!(json.starts_with(r#"{"p":3,"n":3,"k":1,"modulus":"1,0,2,1","rows":[{"weight":0,"freq":"1"},"#));
        let csv = table.to_csv();
        assert!(csv.starts_with("weight,frequency\n0,1\n9,52\n"));
    }
}
