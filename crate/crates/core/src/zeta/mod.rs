//! Zeta evaluation, zero location and zero tables.

mod eval;
mod scan;
mod table;

pub use eval::{
    em_terms, gram_point, hardy_z, hardy_z_parts, rs_theta, rs_theta_deriv, s_bound, theta_series,
    zero_count_theoretic, zeta, MIN_HEIGHT,
};
pub use scan::{find_zeros, MAX_HEIGHT};
pub use table::{
    format_zeros, load_zeros, parse_zeros, store_zeros, ZeroPoint, ZeroRecord, ZeroSet, ZeroSource, FIRST_ZERO_FLOOR,
};
