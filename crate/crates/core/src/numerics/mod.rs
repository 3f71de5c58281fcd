//! Dense linear algebra, special functions and critical-value tables.

pub mod critical;
pub mod matrix;
pub mod special;

pub use critical::{
    lookup_critical, AdfVariant, BreakType, CriticalValueTable, Level, Tail, TestFamily, Verdicts,
    CUSUM_PARAMETERS,
};
pub use matrix::{dot, solve_least_squares, LeastSquares, Matrix, RankDeficient};
pub use special::{
    beta_inc, chi_square_cdf, chi_square_sf, erf, erfc, gamma_p, gamma_q, ln_gamma, normal_cdf,
    student_t_cdf, student_t_two_sided,
};
