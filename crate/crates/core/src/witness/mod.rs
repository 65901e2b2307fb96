//! The two-body witness: bound, operator, expectations and product-state geometry.

mod bound;
mod operator;
mod product;
mod tensor;

pub use bound::{
    bound_value, degeneracy_threshold, quad_form, separable_bound, Branch, QuadraticForm,
    SeparableBound,
};
pub(crate) use bound::checked_bound;
pub use operator::{
    collective_spin, correlation_operator, correlation_operators, correlation_point,
    witness_expectation, witness_operator, SubspaceOperator,
};
pub use product::{saturating_config, separable_correlations};
pub use tensor::{
    expectation_from_point, white_noise_threshold, CorrelationPoint, CorrelationSource,
    CorrelationTensor, MAXIMALLY_MIXED_EXPECTATION,
};
