//! Scalar polynomial approximations of the sign and step functions.

pub mod chebyshev;
pub mod quadrature;
pub mod sign;

pub use chebyshev::{
    chebyshev_monomial_approx, clenshaw, compressed_sign_poly, sign_grid_error, Basis,
    CompressedPoly, CompressionPlan,
};
pub use quadrature::integral_step_oracle;
pub use sign::{
    p_k_degree, p_k_eval, sign_error_bound, sign_poly_degree, soft_step_eval, SignPolyDegree,
};
