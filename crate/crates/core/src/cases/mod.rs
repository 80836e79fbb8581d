//! Executable case studies: target tracking and two delivery-UAV formulations.

pub mod tracking;
pub mod uav;

pub use tracking::{tracking_bool_model, tracking_model};
pub use uav::{uav_cost_model, uav_powerset_model, ActuatorSpec, BatterySpec, Parameters, UavTaskSpec};
