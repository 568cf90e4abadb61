//! Scene files: JSON with exact coordinates.
//!
//! ```json
//! { "label": "two squares", "scale": 32,
//!   "polygons": [[[0, 0], [1, 0], [1, 1], [0, 1]], [["3", "0"], ["4", 0], [4, 1], [3, 1]]],
//!   "holes": [{ "polygon": 0, "ring": [[0.25, 0.25], [0.75, 0.25], [0.75, 0.75]] }] }
//! ```
//!
//! Coordinates are JSON numbers or strings holding `p/q`, integers or finite
//! decimals; decimals are read exactly, so `0.1` is `1/10`.

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};
use serde_json::value::RawValue;

use crate::exact_geom::rational::parse_rational;
use crate::exact_geom::{Coord, Rational};
use crate::grid_approx::{Scene, SceneError};
use crate::planar::{oriented, Region};

#[derive(Debug, thiserror::Error)]
pub enum SceneFileError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("hole refers to polygon {0}, which does not exist")]
    NoSuchPolygon(usize),
    #[error(transparent)]
    Invalid(#[from] SceneError),
}

impl From<serde_json::Error> for SceneFileError {
    fn from(e: serde_json::Error) -> Self {
        SceneFileError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

/// A rational read from a JSON number or string without passing through
/// floating point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Box::<RawValue>::deserialize(d)?;
        let text = raw.get();
        let body = if text.starts_with('"') {
            serde_json::from_str::<String>(text).map_err(serde::de::Error::custom)?
        } else {
            text.to_string()
        };
        parse_rational(&body)
            .map(Exact)
            .map_err(|_| serde::de::Error::custom(format!("{text} is not an exact number")))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HoleIn {
    polygon: usize,
    ring: Vec<[Exact; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneIn {
    #[serde(default)]
    label: Option<String>,
    #[serde(default)]
    scale: Option<Exact>,
    #[serde(default)]
    resolution_floor: Option<Exact>,
    polygons: Vec<Vec<[Exact; 2]>>,
    #[serde(default)]
    holes: Vec<HoleIn>,
}

fn ring(points: Vec<[Exact; 2]>) -> Vec<Coord> {
    points.into_iter().map(|[x, y]| Coord::new(x.0, y.0)).collect()
}

/// Parses scene text. Polygons may be given in either orientation.
pub fn parse_scene_str(text: &str, default_label: &str) -> Result<Scene, SceneFileError> {
    let doc: SceneIn = serde_json::from_str(text)?;
    let mut regions: Vec<Region> = doc.polygons.into_iter().map(|p| Region::simple(oriented(ring(p), true))).collect();
    for h in doc.holes {
        let g = regions.get_mut(h.polygon).ok_or(SceneFileError::NoSuchPolygon(h.polygon))?;
        g.holes.push(oriented(ring(h.ring), false));
    }
    let label = doc.label.unwrap_or_else(|| default_label.to_string());
    Ok(Scene::new(label, regions, doc.scale.map(|e| e.0), doc.resolution_floor.map(|e| e.0))?)
}

pub fn parse_scene(path: &Path) -> Result<Scene, SceneFileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SceneFileError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scene");
    parse_scene_str(&text, stem)
}

/// Canonical scene echo stored in traces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SceneDoc {
    pub label: String,
    #[serde(with = "crate::io::rat")]
    pub scale: Rational,
    #[serde(with = "crate::io::rat")]
    pub resolution_floor: Rational,
    pub regions: Vec<RegionDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionDoc {
    pub outer: Vec<Coord>,
    pub holes: Vec<Vec<Coord>>,
}

impl SceneDoc {
    pub fn of(scene: &Scene) -> Self {
        Self {
            label: scene.label.clone(),
            scale: scene.scale.clone(),
            resolution_floor: scene.resolution_floor.clone(),
            regions: scene.regions.iter().map(|g| RegionDoc { outer: g.outer.clone(), holes: g.holes.clone() }).collect(),
        }
    }

    pub fn to_scene(&self) -> Result<Scene, SceneError> {
        let regions = self.regions.iter().map(|g| Region::new(g.outer.clone(), g.holes.clone())).collect();
        Scene::new(self.label.clone(), regions, Some(self.scale.clone()), Some(self.resolution_floor.clone()))
    }
}
