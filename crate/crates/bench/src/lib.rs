//! Shared fixtures for the kernel benchmarks.

use pbbs_core::scattering::ActionAngle;
use pbbs_core::State;

/// The 14-box three-soliton state of the worked evolution tables.
pub fn three_soliton_state() -> State {
    "11211122211122".parse().expect("valid")
}

/// The 170-box two-soliton showcase state.
pub fn showcase_state() -> State {
    format!("1122111111222222{}", "1".repeat(154)).parse().expect("valid")
}

/// The showcase angle data (mu = {2, 6}, L = 170, I = 0).
pub fn showcase_angle() -> ActionAngle {
    ActionAngle::new(vec![2, 6], 170, vec![0, 0]).expect("valid")
}
