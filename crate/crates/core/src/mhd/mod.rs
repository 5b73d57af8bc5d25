//! Quasi-homogeneous ideal MHD on the torus: states, the three right-hand
//! sides, the operator `L`, pressure recovery and initial-condition presets.

mod coupling;
pub mod presets;
mod rhs;
mod state;

pub use coupling::CouplingMatrix;
pub use presets::{Preset, PresetParams};
pub use rhs::{
    l_identity_check, l_operator, mhd_pressure, rhs_elsasser, rhs_euler, rhs_primitive,
    rhs_vorticity,
};
pub use state::{ElsasserState, EulerState, Jacobian, MhdState, PressureFields, VorticityState};
