//! High-order ADER discontinuous Galerkin solver for a first-order hyperbolic
//! reformulation of the Serre-Green-Naghdi equations over general (non-mild)
//! bottom topography.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: conserved/primitive states, fluxes, non-conservative products,
//!   algebraic sources, eigenstructure, energy and constraint residuals for the
//!   full model and for the mild-bottom variant.
//! - [`bathymetry`]: analytic bottom profiles and their projection onto the
//!   nodal DG space.
//! - [`dg`]: Cartesian meshes, Gauss-Legendre nodal bases, projection,
//!   evaluation and norms.
//! - [`ader`]: local space-time predictor and the fully discrete corrector
//!   with Rusanov flux and path-conservative jump terms.
//! - [`soliton`]: traveling-wave initial data from the similarity ODE.
//! - [`boundary`]: ghost states and relaxation-zone wavemakers/absorbers.
//! - [`scenarios`]: built-in benchmarks, the time loop, gauges, energy
//!   monitoring, convergence studies and model comparison.
//! - [`io`]: configuration files, CSV emission and run manifests.

pub mod ader;
pub mod bathymetry;
pub mod boundary;
pub mod dg;
pub mod error;
pub mod interp;
pub mod io;
pub mod model;
pub mod scenarios;
pub mod soliton;

pub use error::{Error, Result};
