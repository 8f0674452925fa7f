//! Certificates and the builders that produce them: the two symmetrization
//! transforms and the explicit refutations of the instance families.

mod certificate;
mod cfi;
mod php;
mod subsetsum;
mod symmetrize;

pub use certificate::{parse_certificate, write_certificate, Certificate, Claims};
pub use cfi::{
    assignment_classes, build_cfi_linear, build_cfi_mu, cfi_mu_stages, solves_parity,
    AssignmentClasses,
};
pub use php::{build_php, injection_sum_brute_force, php_alpha, php_injection_sums};
pub use subsetsum::{build_subsetsum, subset_sum_coefficients, subset_sum_multipliers};
pub use symmetrize::{symmetrize_average, symmetrize_product, AverageOptions};
