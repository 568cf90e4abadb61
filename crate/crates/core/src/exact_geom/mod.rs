//! Exact rational points, segments, arcs and disks, plus lengths as certified
//! sums of square roots.

pub mod arc;
pub mod coord;
pub mod disk;
pub mod length;
pub mod rational;
pub mod segment;

pub use arc::{ArcError, PLArc};
pub use coord::{orient, signed_area2, Coord};
pub use disk::{point_in_disk, point_in_ring, DiskError, Location, PLDisk};
pub use length::{arc_length, compare_lengths, LengthOrdering, LengthValue};
pub use rational::{format_rational, parse_rational, Rational};
pub use segment::{seg_intersect, IntersectionResult, Segment};
