//! Versioned JSON file formats. Every file carries a `"schema"` field.

use serde::{Deserialize, Serialize};

use crate::digraphs::Digraph;
use crate::duality::{PointSet, VerticalLineConfig};
use crate::embedder::{Embedding, Rejection};
use crate::error::{Error, Result};
use crate::generators::{GapSensitive, GmseInstance, WiringDiagram};
use crate::geom::{Direction, PathPerm, Point2};
use crate::lp::FarkasCertificate;
use crate::rat::Rat;
use crate::sequences::PathSet;

pub const INSTANCE_SCHEMA: &str = "monoseq/instance/v1";
pub const POINTS_SCHEMA: &str = "monoseq/points/v1";
pub const VERDICT_SCHEMA: &str = "monoseq/verdict/v1";
pub const WIRING_SCHEMA: &str = "monoseq/wiring/v1";
pub const GMSE_SCHEMA: &str = "monoseq/gmse/v1";
pub const CIRCSEQ_SCHEMA: &str = "monoseq/circseq/v1";

fn check_schema(found: &str, want: &str) -> Result<()> {
    if found != want {
        return Err(Error::Parse(format!("expected schema {want:?}, found {found:?}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphEntry {
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema: String,
    pub n: usize,
    pub paths: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<Direction>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digraphs: Option<Vec<DigraphEntry>>,
    /// Named vertical-line configurations, e.g. the two gap-sensitive ones.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub configs: Vec<NamedConfig>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedConfig {
    pub name: String,
    pub xs: VerticalLineConfig,
}

impl InstanceFile {
    pub fn from_paths(paths: &PathSet) -> Self {
        InstanceFile {
            schema: INSTANCE_SCHEMA.into(),
            n: paths.n(),
            paths: paths.paths().iter().map(|p| p.order().to_vec()).collect(),
            directions: None,
            digraphs: None,
            configs: Vec::new(),
        }
    }

    pub fn from_gap_sensitive(g: &GapSensitive) -> Self {
        let mut f = InstanceFile::from_paths(&g.paths);
        f.configs = vec![
            NamedConfig {
                name: "A".into(),
                xs: g.cfg_a.clone(),
            },
            NamedConfig {
                name: "B".into(),
                xs: g.cfg_b.clone(),
            },
        ];
        f
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        check_schema(&f.schema, INSTANCE_SCHEMA)?;
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        if self.paths.iter().any(|p| p.len() != self.n) {
            return Err(Error::DimensionMismatch(format!("every path must have {} vertices", self.n)));
        }
        if let Some(d) = &self.directions {
            if d.len() != self.paths.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} directions for {} paths",
                    d.len(),
                    self.paths.len()
                )));
            }
        }
        Ok(())
    }

    /// Paths given explicitly, or implied by the digraphs.
    pub fn path_set(&self) -> Result<PathSet> {
        if self.paths.is_empty() {
            if let Some(gs) = &self.digraphs {
                let (graphs, orders) = self.digraph_inputs(gs)?;
                let mut paths = Vec::new();
                for (g, o) in graphs.iter().zip(orders) {
                    let t = match o {
                        Some(p) => crate::digraphs::TopOrder::new(g, p)?,
                        None => crate::digraphs::topological_order(g)?,
                    };
                    paths.push(crate::digraphs::implied_path(&t));
                }
                return PathSet::new(paths);
            }
        }
        PathSet::from_orders(&self.paths)
    }

    #[allow(clippy::type_complexity)]
    pub fn digraph_inputs(&self, gs: &[DigraphEntry]) -> Result<(Vec<Digraph>, Vec<Option<PathPerm>>)> {
        let graphs = gs
            .iter()
            .map(|e| Digraph::new(self.n, e.edges.clone()))
            .collect::<Result<Vec<_>>>()?;
        let orders = gs
            .iter()
            .map(|e| e.order.clone().map(PathPerm::new).transpose())
            .collect::<Result<Vec<_>>>()?;
        Ok((graphs, orders))
    }

    pub fn config(&self, name: &str) -> Option<&VerticalLineConfig> {
        self.configs.iter().find(|c| c.name == name).map(|c| &c.xs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointsFile {
    pub schema: String,
    pub points: Vec<Point2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<Direction>>,
}

impl PointsFile {
    pub fn from_embedding(e: &Embedding) -> Self {
        PointsFile {
            schema: POINTS_SCHEMA.into(),
            points: e.points.points().to_vec(),
            directions: Some(e.directions.clone()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f: PointsFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        check_schema(&f.schema, POINTS_SCHEMA)?;
        Ok(f)
    }

    pub fn point_set(&self) -> Result<PointSet> {
        PointSet::new(self.points.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<Point2>,
    pub directions: Vec<Direction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub schema: String,
    pub feasible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<FarkasCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caveat: Option<String>,
}

impl Verdict {
    pub fn yes(e: &Embedding) -> Self {
        Verdict {
            schema: VERDICT_SCHEMA.into(),
            feasible: true,
            reason: None,
            certificate: None,
            witness: Some(Witness {
                points: e.points.points().to_vec(),
                directions: e.directions.clone(),
            }),
            caveat: None,
        }
    }

    pub fn no(r: &Rejection) -> Self {
        let certificate = match r {
            Rejection::LpInfeasible { certificate, .. } => Some(certificate.clone()),
            _ => None,
        };
        Verdict {
            schema: VERDICT_SCHEMA.into(),
            feasible: false,
            reason: Some(r.code().into()),
            certificate,
            witness: None,
            caveat: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WiringFile {
    pub schema: String,
    #[serde(flatten)]
    pub wiring: WiringDiagram,
}

impl WiringFile {
    pub fn new(wiring: WiringDiagram) -> Self {
        WiringFile {
            schema: WIRING_SCHEMA.into(),
            wiring,
        }
    }

    pub fn parse(text: &str) -> Result<WiringDiagram> {
        let f: WiringFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        check_schema(&f.schema, WIRING_SCHEMA)?;
        Ok(f.wiring)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GmseFile {
    pub schema: String,
    #[serde(flatten)]
    pub instance: GmseInstance,
}

impl GmseFile {
    pub fn new(instance: GmseInstance) -> Self {
        GmseFile {
            schema: GMSE_SCHEMA.into(),
            instance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapRecord {
    pub pair: (usize, usize),
    pub normal: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircseqFile {
    pub schema: String,
    pub perturbed: bool,
    pub snapshots: Vec<Vec<usize>>,
    pub swaps: Vec<SwapRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contained: Option<Vec<bool>>,
}

/// Decimal rendering with `digits` significant digits (display only).
pub fn to_decimal(r: &Rat, digits: usize) -> String {
    let v = r.to_f64();
    if v == 0.0 {
        return "0".into();
    }
    let s = format!("{:.*e}", digits.saturating_sub(1), v);
    let parsed: f64 = s.parse().unwrap_or(v);
    let mut out = format!("{parsed}");
    if out == "-0" {
        out = "0".into();
    }
    out
}
