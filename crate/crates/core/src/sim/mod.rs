//! Plant, transmission scheme, eavesdropper tracking and security reports.

pub mod eve;
pub mod plant;
pub mod report;
pub mod scheme;
pub mod witness;

pub use eve::{EveState, EveStats, SymmetricEve};
pub use plant::{simulate_plant, Disturbance, Trajectory};
pub use report::{security_report, RateReport};
pub use scheme::{run_scheme, BoundaryPolicy, ChannelPolicy, EveMode, SchemeConfig, Transcript};
pub use witness::witness_path;
