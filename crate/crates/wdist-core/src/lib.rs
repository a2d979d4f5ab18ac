//! Exact weight-distribution engine for a three-monomial family of p-ary
//! cyclic codes.
//!
//! The library evaluates the codes whose codewords are the trace sequences
//! `c(ε,γ,δ) = (Tr(εx + γx^{p^k+1} + δx^{p^{3k}+1}))` over the nonzero
//! elements of GF(p^n), for odd primes p, n ≥ 3, and odd s = n/gcd(n,k).
//! Every pipeline stage is exact — no floating point anywhere:
//!
//! * [`field`] — table-driven GF(p^n) arithmetic (exp/log, traces,
//!   Frobenius) plus parameter validation;
//! * [`forms`] — the linearized operator attached to a form pair (γ, δ),
//!   its kernel dimension, and the rank/sign class distributions;
//! * [`sums`] — exponential sums as cyclotomic count vectors, their symbolic
//!   classification, moments, and full distribution sweeps;
//! * [`weights`] — codeword weights, empirical weight distributions by two
//!   independent methods, and the closed-form table they must equal;
//! * [`store`] — checksummed JSON result files for caching and replay.
//!
//! The closed-form tables and the empirical sweeps are implemented as
//! independent paths on purpose: agreement between them is the product.

pub mod distribution;
pub mod field;
pub mod forms;
pub mod limits;
pub mod store;
pub mod sums;
pub mod weights;

pub use distribution::DistributionTable;
pub use field::{
    make_field, make_field_capped, parse_modulus, quadratic_character, validate_params, CodeParams,
    FieldCtx, FieldElement, FieldError, ParamError,
};
pub use forms::{
    closed_rank_distribution, closed_sign_counts, kernel_dim_m, rank_distribution, rank_report,
    sign_classification, FormError, FormId, RankReport,
};
pub use limits::Limits;
pub use store::{cached_modulus, save_modulus, Store, StoreError};
pub use sums::cyclotomic::{classify_counts, CyclotomicCounts, SumClass};
pub use sums::{
    classify_sum, closed_full_s_distribution, closed_s0_distribution, exp_sum_counts,
    moment_checks, s_distribution, MomentReport, SDistributionReport, SumError, SweepKind,
};
pub use weights::{
    check_weight_invariants, closed_form_weight_distribution, codeword_weight,
    empirical_weight_distribution, min_positive_weight, verify_weight_distribution, CodewordId,
    Method, WeightError, WeightTable, WeightVerification,
};
