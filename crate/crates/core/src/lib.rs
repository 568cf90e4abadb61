pub mod arc_weld;
pub mod crosscut_chop;
pub mod disk_metric;
pub mod exact_geom;
pub mod grid_approx;
pub mod io;
pub mod planar;
pub mod scenes;
pub mod verify;

pub use arc_weld::{MultiWeld, WeldConfig, WeldResult};
pub use crosscut_chop::{ChopError, CrosscutPlan};
pub use exact_geom::{Coord, LengthValue, PLArc, PLDisk, Rational, Segment};
pub use grid_approx::{Scene, SceneError};
pub use planar::Region;
pub use verify::{Check, VerificationReport};
