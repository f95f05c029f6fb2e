//! Discrete-time simulation, identification, and control toolkit for a
//! two-finger soft pneumatic gripper that modulates contact force without
//! tactile sensors.
//!
//! The crate is organized around seven building blocks:
//!
//! - [`lti`]: z-domain transfer functions, difference-equation simulation,
//!   polynomial root finding, root locus, and steady-state error analysis.
//! - [`sensing`]: camera-marker bending measurement (circumcenter geometry)
//!   and a synthetic marker generator for testing the round trip.
//! - [`sysid`]: PRBS excitation and ARX least-squares identification.
//! - [`supervisor`]: the per-finger tracking/force controllers, contact
//!   detection, and the latched mode switch.
//! - [`rig`]: the virtual test rig; finger bending dynamics, kinematic
//!   contact queries against a cylindrical object, quasi-static contact
//!   forces, stiction, and pull-out.
//! - [`experiments`]: scenario definitions, time-series logging, sweep
//!   drivers, and the linear fits reported by the experiment suite.
//!
//! All loops run at a fixed sample time of 0.1 s. Angles are degrees,
//! forces Newtons, planar positions centimeters, duty cycles percent.

pub mod defaults;
pub mod error;
pub mod experiments;
pub mod lti;
pub mod rig;
pub mod sensing;
pub mod supervisor;
pub mod sysid;

pub use error::CoreError;
pub use experiments::{RunResult, Scenario, SweepResult, TimeSeriesLog};
pub use lti::{DifferenceEq, Polynomial, TransferFunction};
pub use rig::{ContactLaw, FingerPlant, Mobility, ObjectModel, RigOutputs, RigScene, Side};
pub use sensing::{BendingMeasurement, FingerGeometry, MarkerSet, PixelNoise};
pub use supervisor::{DetectionConfig, FingerMode, FingerSupervisor, ReferenceKind};
pub use sysid::{ArxEstimate, ExcitationSignal};
