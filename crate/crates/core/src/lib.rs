// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod complex;
pub mod error;
pub mod mc;
pub mod models;
pub mod pricer;
pub mod quadrature;
pub mod special;
pub mod transforms;

pub use asymptotics::{
    corrected_price, discretization_gap, gamma_limit_expectation, limit_call_qv, limit_call_rv, limit_put_qv,
    limit_put_rv, q_fn, qv_limit, r_fn, GammaLimitLaw,
};
pub use complex::{Complex64, ComplexValue};
pub use error::{Error, Result};
pub use mc::{mc_laplace, mc_price, simulate_increments, LaplaceTarget, Scheme, SimPlan, Underlying};
pub use models::{
    check_condition_psi, jump_variance, levy_exponent, martingale_drift, triplet_drift, DriftMode, ModelKind,
    ModelSpec, Params,
};
pub use pricer::{
    bs_closed_form_rv, invert_put, price_option_qv, price_option_rv, swap_rate_qv, swap_rate_rv, ContourSpec, Method,
    OptionSide, PriceResult,
};
pub use quadrature::QuadratureSpec;
pub use transforms::{laplace_pvar, laplace_qv, laplace_rv, laplace_xsq, psi_qv, TransformSpec};
