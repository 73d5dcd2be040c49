//! Transport-diffusion stage: numerical fluxes, diffusion, pressure term.

pub mod flux;
pub mod lader;
pub mod pressure;
pub mod transport;
pub mod viscous;

pub use flux::{
    eno_select, kolgan_flux, kolgan_slopes, rusanov_alpha, rusanov_flux, EquationClass,
};
pub use lader::{lader_evolve_flux_states, lader_evolve_flux_states_literal};
pub use pressure::pressure_face_term;
pub use transport::{tet_gradients, transport_diffusion_step, Intermediate, Layout, NodeSources};
pub use viscous::{viscous_flux_galerkin, viscous_flux_orthogonal};
