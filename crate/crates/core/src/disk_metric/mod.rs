//! Intrinsic geometry of a polygonal disk: triangulation, shortest paths and
//! checks of the nonpositive-curvature facts they satisfy.

pub mod field;
pub mod geodesic;
pub mod properties;
pub mod to_set;
pub mod triangulate;

pub use geodesic::{geodesic, geodesic_in, GeodesicError, GeodesicResult};
pub use triangulate::{triangulate, Triangulation, TriangulationError};
pub use to_set::{geodesic_to_set, geodesic_to_set_in, reflex_vertices, Target};
pub use properties::{check_thin_triangles, geodesics_intersection_connected, triod_check, PropertyReport, TriodSide, TriodVerdict};
pub use field::{segment_in_disk, SetDistance};
