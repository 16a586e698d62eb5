//! Special functions, tail probabilities and random variates.

mod dist;
mod rng;
mod special;

pub(crate) use dist::standard_normal;
pub use dist::{draw_gamma, draw_inverse_gamma, draw_normal};
pub use rng::RandomSource;
pub use special::{chi2_sf, f_sf, ln_gamma, reg_inc_beta, reg_upper_gamma, student_t_sf2};
