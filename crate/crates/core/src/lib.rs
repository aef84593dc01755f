//! Two-parameter trace-form entropies.
//!
//! The crate covers
//!
//! * the entropy family `S(p) = Σ (p_i^α − p_i^β)/C(α,β)` over the region
//!   `R_α ∪ R_β` with pluggable normalizers ([`entropy`]),
//! * the deformed logarithm `Λ(x) = (x^κ1 − x^κ2)/(κ1 − κ2)` and its inverse
//!   ([`deformed_log`]),
//! * sampled checks of continuity, maximality, generalized Shannon
//!   additivity, expandability and the normalizer properties
//!   ([`verify`]),
//! * two pathological normalizers, one Weierstrass-based and one with
//!   direction-dependent limits at `(1,1)` ([`counterexamples`]),
//! * a maximum-entropy solver for the canonical distribution at fixed mean
//!   energy ([`maxent`]).
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.

pub mod counterexamples;
pub mod deformed_log;
pub mod entropy;
pub mod error;
pub mod maxent;
mod roots;
pub mod scalar;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub use counterexamples::{
    directional_limit_scan, entropy_limit_failure_demo, normalizer_a, normalizer_b, weierstrass,
};
pub use deformed_log::{
    check_a_limit, deformed_entropy_from_log, gen_exp, lambda, lambda_general, lambda_prime,
};
pub use entropy::{
    canonical_normalizer, entropy, region_contains, shannon_entropy, summand, Property,
};
pub use maxent::{solve_canonical, stationarity_inverse, verify_maximum};
pub use suite::{run_axiom_suite, SuiteCheck, SuiteConfig, SuiteEntry};
pub use verify::{ApproachSide, CheckReport, Failure, Verdict};

pub type Distribution = entropy::Distribution<f64>;
pub type ParamPair = entropy::ParamPair<f64>;
pub type Normalizer = entropy::Normalizer<f64>;
pub type JointDistribution = entropy::JointDistribution<f64>;
pub type KappaPair = deformed_log::KappaPair<f64>;
pub type CoefficientA = deformed_log::CoefficientA<f64>;
pub type LimitPath = verify::LimitPath<f64>;
pub type WeierstrassParams = counterexamples::WeierstrassParams<f64>;
pub type MaxentProblem = maxent::MaxentProblem<f64>;
pub type CanonicalSolution = maxent::CanonicalSolution<f64>;
