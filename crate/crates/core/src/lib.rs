//! Dynamical Erdős–Rényi graphs near criticality: simulation, exact Fourier
//! checks on small edge sets, revealment of component events and the
//! Monte Carlo experiments built on them.

pub mod asymptotics;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod revealment;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{apply_flip, components, sample_er, ComponentView, Configuration, EdgeSlot, EdgeSpace, FlipEffect};
pub use dynamics::{simulate_trajectory, StepPath, TrajectoryRecord};
pub use experiments::{CellResult, Domain, ExperimentPlan};
pub use spectral::{FunctionTable, SpectrumTable};
