//! Special-function kernels used by the closed forms.

mod bessel;
mod carlitz;
mod kernel;

pub use bessel::{spherical_bessel_j, spherical_bessel_j_normalized};
pub use carlitz::{carlitz_bessel_p, carlitz_bessel_p_complex, CarlitzTable, DEFAULT_MAX_ORDER};
pub use kernel::{
    kernel_cosh_even, kernel_cosh_even_complex, kernel_sinch_even, kernel_sinch_even_complex,
    TAYLOR_THRESHOLD,
};
