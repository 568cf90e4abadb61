//! Text formats: scenes, traces, SVG renderings, run configuration and the
//! serde helpers for exact rationals.

pub mod scene_file;
pub mod svg;
pub mod trace;

use std::path::PathBuf;

use crate::arc_weld::WeldConfig;
use crate::exact_geom::Rational;
use crate::grid_approx::Scene;

pub use scene_file::{parse_scene, parse_scene_str, SceneDoc, SceneFileError};
pub use svg::{chop_svg, emit_svg, weld_svg};
pub use trace::{emit_trace, parse_trace, TraceError, TraceFile, TraceRun, TRACE_VERSION};

/// Everything a welding run needs besides the scene.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub weld: WeldConfig,
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("delta base {0} is not strictly between 0 and 1")]
    DeltaBase(Rational),
    #[error("epsilon stop {0} is not above the resolution floor {1}")]
    EpsilonStop(Rational, Rational),
    #[error("eta fraction {0} is not strictly between 0 and 1")]
    EtaFraction(Rational),
}

impl RunConfig {
    pub fn validate(&self, scene: &Scene) -> Result<(), ConfigError> {
        let (zero, one) = (Rational::from_integer(0.into()), Rational::from_integer(1.into()));
        let w = &self.weld;
        if w.delta_base <= zero || w.delta_base >= one {
            return Err(ConfigError::DeltaBase(w.delta_base.clone()));
        }
        if w.epsilon_stop <= scene.resolution_floor {
            return Err(ConfigError::EpsilonStop(w.epsilon_stop.clone(), scene.resolution_floor.clone()));
        }
        if w.eta_fraction <= zero || w.eta_fraction >= one {
            return Err(ConfigError::EtaFraction(w.eta_fraction.clone()));
        }
        Ok(())
    }
}

/// Serde adapter writing a rational as `"p/q"`.
pub mod rat {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exact_geom::rational::{format_rational, parse_rational};
    use crate::exact_geom::Rational;

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

pub mod opt_rat {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exact_geom::rational::{format_rational, parse_rational};
    use crate::exact_geom::Rational;

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(format_rational).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| parse_rational(&t).map_err(serde::de::Error::custom)).transpose()
    }
}
