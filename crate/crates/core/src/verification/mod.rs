//! Exact solutions, error norms, convergence orders and force post-processing.

pub mod exact;
pub mod forces;
pub mod norms;
pub mod residual;

pub use exact::{
    gaussian_sphere, mms_laminar, mms_turbulent, ExactFields, ExactSolution, GaussianSphere, MmsLaminar, MmsTurbulent,
    Sources,
};
pub use forces::{drag_lift, pressure_at, surface_forces, surface_samples, ForceCoefficients, SurfaceSample, CYLINDER_SCALE};
pub use norms::{observed_order, ErrorAccumulator, ErrorReport};
pub use residual::{fd_derivative, pde_residuals};
