//! Special functions on the real line.

mod bessel;
mod gamma;
mod gegenbauer;
mod kummer;

pub use bessel::{bessel_i, bessel_i_scaled, ln_bessel_i};
pub use gamma::{factorial, gamma, ln_gamma, ln_gamma_signed, pochhammer, pole_distance, recip_gamma, sin_pi};
pub use gegenbauer::{gegenbauer, modified_gegenbauer};
pub use kummer::{kummer_m, kummer_m_polynomial, kummer_u, laguerre, whittaker_m, whittaker_w};
