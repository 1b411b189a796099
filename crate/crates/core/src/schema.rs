//! JSON schemas for circle maps, laminations and earthquakes.
//!
//! Numbers are emitted in scientific notation with 17 significant digits,
//! which round-trips `f64` exactly and keeps the byte output deterministic.
//! All circle points are homogeneous pairs `[u, v]`, matrices are 2×2
//! row-major arrays.

use crate::circlemap::{CircleMapError, LaminationSpec, PiecewiseMobiusCircleMap};
use crate::earthquake::{EarthquakeMap, LeafChoice, Stratum, VerificationReport};
use crate::mobius::{Mobius, MobiusError, RP1Point, Side};
use crate::Geodesic;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("leaf and weight counts differ")]
    LeafWeightMismatch,
    #[error(transparent)]
    Mobius(#[from] MobiusError),
    #[error(transparent)]
    CircleMap(#[from] CircleMapError),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SideTag {
    Left,
    Right,
}

impl From<Side> for SideTag {
    fn from(s: Side) -> Self {
        match s {
            Side::Left => SideTag::Left,
            Side::Right => SideTag::Right,
        }
    }
}

impl From<SideTag> for Side {
    fn from(s: SideTag) -> Self {
        match s {
            SideTag::Left => Side::Left,
            SideTag::Right => Side::Right,
        }
    }
}

fn point_to_pair(p: &RP1Point<f64>) -> [f64; 2] {
    let (u, v) = p.coords();
    [u, v]
}

fn pair_to_point(p: [f64; 2]) -> Result<RP1Point<f64>, SchemaError> {
    Ok(RP1Point::new(p[0], p[1])?)
}

fn mobius_to_rows(m: &Mobius<f64>) -> [[f64; 2]; 2] {
    let [a, b, c, d] = m.entries();
    [[a, b], [c, d]]
}

fn rows_to_mobius(r: [[f64; 2]; 2]) -> Result<Mobius<f64>, SchemaError> {
    Ok(Mobius::new(r[0][0], r[0][1], r[1][0], r[1][1])?)
}

fn geodesic_to_pairs(g: &Geodesic) -> [[f64; 2]; 2] {
    let (a, b) = g.endpoints();
    [point_to_pair(&a), point_to_pair(&b)]
}

fn pairs_to_geodesic(p: [[f64; 2]; 2]) -> Result<Geodesic, SchemaError> {
    Ok(Geodesic::new(pair_to_point(p[0])?, pair_to_point(p[1])?)?)
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

/// Piecewise-Möbius circle map: breakpoints as homogeneous pairs, one piece
/// per counterclockwise arc.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircleMapFile {
    pub breakpoints: Vec<[f64; 2]>,
    pub pieces: Vec<[[f64; 2]; 2]>,
}

impl CircleMapFile {
    pub fn from_map(f: &PiecewiseMobiusCircleMap) -> Self {
        Self {
            breakpoints: f.breakpoints().iter().map(point_to_pair).collect(),
            pieces: f.pieces().iter().map(mobius_to_rows).collect(),
        }
    }

    pub fn to_map(&self) -> Result<PiecewiseMobiusCircleMap, SchemaError> {
        let bps = self
            .breakpoints
            .iter()
            .map(|&p| pair_to_point(p))
            .collect::<Result<Vec<_>, _>>()?;
        let pieces = self
            .pieces
            .iter()
            .map(|&m| rows_to_mobius(m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PiecewiseMobiusCircleMap::new(bps, pieces)?)
    }
}

/// Finite measured lamination: leaves as endpoint pairs plus weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LaminationFile {
    pub leaves: Vec<[[f64; 2]; 2]>,
    pub weights: Vec<f64>,
    pub side: SideTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<usize>,
}

impl LaminationFile {
    pub fn from_spec(spec: &LaminationSpec) -> Self {
        Self {
            leaves: spec.leaves.iter().map(geodesic_to_pairs).collect(),
            weights: spec.weights.clone(),
            side: spec.side.into(),
            base: spec.base,
        }
    }

    pub fn to_spec(&self) -> Result<LaminationSpec, SchemaError> {
        if self.leaves.len() != self.weights.len() {
            return Err(SchemaError::LeafWeightMismatch);
        }
        let leaves = self
            .leaves
            .iter()
            .map(|&l| pairs_to_geodesic(l))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LaminationSpec {
            leaves,
            weights: self.weights.clone(),
            side: self.side.into(),
            base: self.base,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StratumRecord {
    pub ideal_vertices: Vec<[f64; 2]>,
    pub matrix: [[f64; 2]; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeafChoiceRecord {
    pub leaf_index: usize,
    pub t: f64,
    pub matrix: [[f64; 2]; 2],
}

/// Earthquake map: side, leaves, gap strata and per-leaf choices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EarthquakeFile {
    pub side: SideTag,
    pub leaves: Vec<[[f64; 2]; 2]>,
    pub strata: Vec<StratumRecord>,
    pub leaf_choices: Vec<LeafChoiceRecord>,
}

impl EarthquakeFile {
    pub fn from_earthquake(eq: &EarthquakeMap) -> Self {
        Self {
            side: eq.side.into(),
            leaves: eq.leaves.iter().map(geodesic_to_pairs).collect(),
            strata: eq
                .strata
                .iter()
                .map(|s| StratumRecord {
                    ideal_vertices: s.vertices.iter().map(point_to_pair).collect(),
                    matrix: mobius_to_rows(&s.isometry),
                })
                .collect(),
            leaf_choices: eq
                .leaf_choices
                .iter()
                .map(|c| LeafChoiceRecord {
                    leaf_index: c.leaf,
                    t: c.t,
                    matrix: mobius_to_rows(&c.isometry),
                })
                .collect(),
        }
    }

    pub fn to_earthquake(&self) -> Result<EarthquakeMap, SchemaError> {
        let leaves = self
            .leaves
            .iter()
            .map(|&l| pairs_to_geodesic(l))
            .collect::<Result<Vec<_>, _>>()?;
        let strata = self
            .strata
            .iter()
            .map(|s| {
                Ok(Stratum {
                    vertices: s
                        .ideal_vertices
                        .iter()
                        .map(|&p| pair_to_point(p))
                        .collect::<Result<Vec<_>, SchemaError>>()?,
                    isometry: rows_to_mobius(s.matrix)?,
                })
            })
            .collect::<Result<Vec<_>, SchemaError>>()?;
        let leaf_choices = self
            .leaf_choices
            .iter()
            .map(|c| {
                Ok(LeafChoice { leaf: c.leaf_index, t: c.t, isometry: rows_to_mobius(c.matrix)? })
            })
            .collect::<Result<Vec<_>, SchemaError>>()?;
        Ok(EarthquakeMap { side: self.side.into(), leaves, strata, leaf_choices })
    }
}

/// Either of the two renderable inputs, distinguished by their fields.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AnyInput {
    Earthquake(EarthquakeFile),
    CircleMap(CircleMapFile),
}

/// Verification outcome in machine-readable form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub pass: bool,
    pub pairs_checked: usize,
    pub failures: Vec<String>,
    pub worst_trace_margin: f64,
    pub worst_separation_margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_sup_error: Option<f64>,
}

impl ReportFile {
    pub fn from_report(r: &VerificationReport) -> Self {
        Self {
            pass: r.pass && r.boundary_sup_error.is_none_or(|e| e <= 1e-5),
            pairs_checked: r.records.len(),
            failures: r
                .failures()
                .map(|f| format!("{} vs {}: {}", f.first, f.second, f.note))
                .collect(),
            worst_trace_margin: r.worst_trace_margin,
            worst_separation_margin: r.worst_separation_margin,
            boundary_sup_error: r.boundary_sup_error,
        }
    }
}

// ---------------------------------------------------------------------------
// Deterministic emission
// ---------------------------------------------------------------------------

struct SigDigitFormatter;

impl serde_json::ser::Formatter for SigDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        // 17 significant digits: lossless double round trip
        write!(writer, "{value:.16e}")
    }
}

/// Serialize with 17-significant-digit decimals; byte-deterministic for a
/// given value.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String, SchemaError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigitFormatter);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("json is utf8"))
}

pub fn from_json_str<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T, SchemaError> {
    Ok(serde_json::from_str(s)?)
}
