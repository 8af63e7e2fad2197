//! Time advancement: linear symbol, φ-functions, ETDRK4 and IMEX steppers,
//! and the fixed-step driver with checkpoint/restart.

mod checkpoint;
mod phi;
mod run;
mod stepper;
mod symbol;

pub use checkpoint::{Checkpoint, CHECKPOINT_FORMAT};
pub use phi::{phi_functions, SERIES_THRESHOLD};
pub use run::{restart, restart_with, run, run_with, Event, Simulation, Trajectory};
pub use stepper::{step_etdrk4, Scheme, Stepper};
pub use symbol::{build_symbol, LinearSymbol};
