//! Legendre spectral tools: linearization coefficients, series products with
//! truncation bounds, and a spectral solver for a quadratic diffusion
//! equation on `[-1, 1]`.
//!
//! ```
//! use legendre_spectra::{product_coefficients_finite, LegendreSeries};
//!
//! let x = LegendreSeries::new(vec![0.0, 1.0]).unwrap();
//! let sq = product_coefficients_finite(&x, &x);
//! assert!((sq.get(0) - 1.0 / 3.0).abs() < 1e-15);
//! assert!((sq.get(2) - 2.0 / 3.0).abs() < 1e-15);
//! ```

pub mod bounds;
pub mod error;
pub mod expansion;
pub mod io;
pub mod legendre;
pub mod pde;
pub mod quadrature;
pub mod verify;

pub use bounds::{
    bound_curve, mu_truncation_bound_general, mu_truncation_bound_j1, mu_truncation_bound_j2,
    wang_coefficient_bound, weighted_norm, BoundPoint, SmoothnessData,
};
pub use error::{Error, Result};
pub use expansion::{
    evaluate, mu_coefficient, mu_coefficients, power_series, product_coefficients_finite, project,
    FunctionSampler, LegendreSeries,
};
pub use legendre::{legendre_eval, linearization_coefficient, LinearizationTable};
pub use pde::{solve_ivp, Forcing, IbvpSpec, SolverConfig, Trajectory};
pub use quadrature::{gauss_legendre_rule, QuadratureRule};
