//! Text document formats for hyperlinks, colored hyperlinks and surfaces.
//!
//! ```json
//! { "loops": [ { "name": "a", "vertices": [[x0, x1, x2, x3], ...] } ],
//!   "colors": [ { "jplus": 0.5, "jminus": 1 } ] }
//! { "components": [ { "outer": [[x2, x3], ...], "holes": [[[x2, x3], ...]] } ],
//!   "normal_sign": 1 }
//! ```
//!
//! `colors` is optional; a colored document is also a valid hyperlink
//! document.

use std::fs;
use std::path::Path;

use hyperarea_core::geometry::{Color, GeometryError};
use hyperarea_core::representation::Spin;
use hyperarea_core::{ColoredHyperlink, Hyperlink, PlLoop, PlanarSurface, Point4, SurfaceComponent};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColorDoc {
    pub jplus: f64,
    pub jminus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperlinkDoc {
    pub loops: Vec<LoopDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<ColorDoc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub outer: Vec<[f64; 2]>,
    #[serde(default)]
    pub holes: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDoc {
    pub components: Vec<ComponentDoc>,
    pub normal_sign: i8,
}

/// A problem with a document's content, located by field path.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    fn new(field: impl Into<String>, message: impl ToString) -> Self {
        Self {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

impl HyperlinkDoc {
    pub fn from_hyperlink(h: &Hyperlink) -> Self {
        Self {
            loops: h
                .loops()
                .iter()
                .zip(h.labels())
                .map(|(l, name)| LoopDoc {
                    name: name.clone(),
                    vertices: l.vertices().iter().map(|v| v.to_array()).collect(),
                })
                .collect(),
            colors: None,
        }
    }

    pub fn from_colored(m: &ColoredHyperlink) -> Self {
        let mut doc = Self::from_hyperlink(m.base());
        doc.colors = Some(
            m.colors()
                .iter()
                .map(|c| ColorDoc {
                    jplus: c.plus.value(),
                    jminus: c.minus.value(),
                })
                .collect(),
        );
        doc
    }

    pub fn to_hyperlink(&self) -> Result<Hyperlink, FieldError> {
        let loops = self
            .loops
            .iter()
            .enumerate()
            .map(|(i, l)| {
                PlLoop::new(l.vertices.iter().map(|&v| Point4::from_array(v)).collect())
                    .map_err(|e| FieldError::new(format!("loops[{i}].vertices"), e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let labels = self.loops.iter().map(|l| l.name.clone()).collect();
        Hyperlink::with_labels(loops, labels).map_err(|e| FieldError::new("loops", e))
    }

    pub fn to_colored(&self) -> Result<ColoredHyperlink, FieldError> {
        let base = self.to_hyperlink()?;
        let colors = self
            .colors
            .as_ref()
            .ok_or_else(|| FieldError::new("colors", "missing; a colored hyperlink needs one color per loop"))?;
        let colors = colors
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let spin = |j: f64, name: &str| {
                    Spin::new(j).map_err(|e| FieldError::new(format!("colors[{i}].{name}"), e))
                };
                Ok(Color::new(spin(c.jplus, "jplus")?, spin(c.jminus, "jminus")?))
            })
            .collect::<Result<Vec<_>, FieldError>>()?;
        ColoredHyperlink::new(base, colors).map_err(|e| FieldError::new("colors", e))
    }
}

impl SurfaceDoc {
    pub fn from_surface(s: &PlanarSurface) -> Self {
        Self {
            components: s
                .components()
                .iter()
                .map(|c| ComponentDoc {
                    outer: c.outer.clone(),
                    holes: c.holes.clone(),
                })
                .collect(),
            normal_sign: s.normal_sign(),
        }
    }

    pub fn to_surface(&self) -> Result<PlanarSurface, FieldError> {
        let components = self
            .components
            .iter()
            .map(|c| SurfaceComponent::new(c.outer.clone(), c.holes.clone()))
            .collect();
        PlanarSurface::new(components, self.normal_sign).map_err(|e| {
            let field = match &e {
                GeometryError::NormalSign(_) => "normal_sign".to_string(),
                GeometryError::NonSimpleRing { component, ring } if *ring == 0 => {
                    format!("components[{component}].outer")
                }
                GeometryError::NonSimpleRing { component, ring } => {
                    format!("components[{component}].holes[{}]", ring - 1)
                }
                GeometryError::HoleOutside { component, hole } => format!("components[{component}].holes[{hole}]"),
                GeometryError::HolesOverlap { component, .. } => format!("components[{component}].holes"),
                _ => "components".to_string(),
            };
            FieldError::new(field, e)
        })
    }
}

/// Parse a document, reporting syntax errors by line and column.
pub fn parse<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Document {
        origin: origin.to_string(),
        message: e.to_string(),
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn content_error(path: &Path, e: FieldError) -> CliError {
    CliError::Document {
        origin: path.display().to_string(),
        message: format!("field `{}`: {}", e.field, e.message),
    }
}

pub fn load_hyperlink(path: &Path) -> Result<Hyperlink, CliError> {
    let doc: HyperlinkDoc = parse(&read(path)?, &path.display().to_string())?;
    doc.to_hyperlink().map_err(|e| content_error(path, e))
}

pub fn load_colored(path: &Path) -> Result<ColoredHyperlink, CliError> {
    let doc: HyperlinkDoc = parse(&read(path)?, &path.display().to_string())?;
    doc.to_colored().map_err(|e| content_error(path, e))
}

pub fn load_surface(path: &Path) -> Result<PlanarSurface, CliError> {
    let doc: SurfaceDoc = parse(&read(path)?, &path.display().to_string())?;
    doc.to_surface().map_err(|e| content_error(path, e))
}

pub fn to_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}
