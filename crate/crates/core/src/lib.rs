//! Optimized Schwarz methods for the complex diffusion equation
//! `Δu − (σ − iε)u = f` on a strip of `J` overlapping subdomains.

pub mod asymptotics;
pub mod cli;
pub mod closed;
pub mod coeffs;
pub mod config;
pub mod error;
pub mod matrix;
pub mod optimizer;
pub mod search;
pub mod simulator;
pub mod symbol;

pub use closed::{rho_three_closed, rho_two_closed, ConvergenceFactor};
pub use coeffs::{interface_coeffs, InterfaceCoeffs};
pub use config::{Frequency, OuterBc, ParamVariant, ProblemConfig, Robin, TransmissionParams};
pub use error::{Error, Result};
pub use optimizer::{optimize, OptimizationResult};
pub use matrix::{assemble_t, spectral_radius, IterationMatrix};
pub use search::{rho_max, LocalMax, RhoMax, SearchPolicy};
pub use symbol::{symbol_of, Symbol};
