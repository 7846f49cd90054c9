//! Numerical building blocks for the closed forms: integer-shape incomplete
//! gamma, subset enumeration, double-word arithmetic, and quadrature oracles.

pub mod ddouble;
pub mod incgamma;
pub mod quadrature;
pub mod subsets;

pub use ddouble::Dd;
pub use incgamma::{inc_gamma_reg, inc_gamma_upper_reg, ln_exp_partial_sum};
pub use quadrature::{
    integrate, integrate_graded, oracle_best_relay_exceed, oracle_max_exp_affine_cdf,
    oracle_max_exp_cdf, oracle_sum_exp_affine_cdf, Quad,
};
pub use subsets::{nonempty_subsets, subset_sum_transform, Subset, SubsetIter};
