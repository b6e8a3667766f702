//! Text serialization of pulse sequences together with the atom geometry they
//! address.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::atom_model::{builtin_layout, Atom, AtomArray, Layout, Scheme};
use crate::error::{Error, Result};
use crate::pulse::{Pulse, PulseSequence};

/// Layout name used when the document lists its atoms explicitly.
pub const CUSTOM_LAYOUT: &str = "custom";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutSection {
    pub name: String,
    pub d_um: f64,
    /// Interaction scheme for realistic simulation. VdW when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
    /// Explicit geometry, only for `name = "custom"`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseEntry {
    pub targets: Vec<String>,
    pub theta_rad: f64,
    pub phi_rad: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleDocument {
    pub layout: LayoutSection,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
    #[serde(default)]
    pub pulses: Vec<PulseEntry>,
}

/// Rounds to 12 significant digits.
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

impl ScheduleDocument {
    /// Document for a built-in layout. Angles are rounded to 12 significant
    /// digits.
    pub fn new(layout: Layout, d_um: f64, seq: &PulseSequence) -> Self {
        Self {
            layout: LayoutSection {
                name: layout.name().to_string(),
                d_um,
                scheme: None,
                atoms: Vec::new(),
            },
            metadata: BTreeMap::new(),
            pulses: seq
                .iter()
                .map(|p| PulseEntry {
                    targets: p.targets.clone(),
                    theta_rad: round_sig12(p.theta),
                    phi_rad: round_sig12(p.phi),
                })
                .collect(),
        }
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let doc: Self =
            toml::from_str(text).map_err(|e| Error::Schedule(e.message().to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Schedule(e.to_string()))
    }

    /// Built-in layout, or `None` for a custom geometry.
    pub fn builtin(&self) -> Result<Option<Layout>> {
        if self.layout.name == CUSTOM_LAYOUT {
            return Ok(None);
        }
        self.layout.name.parse().map(Some)
    }

    pub fn scheme(&self) -> Scheme {
        self.layout.scheme.unwrap_or(Scheme::VdW)
    }

    pub fn array(&self) -> Result<AtomArray> {
        match self.builtin()? {
            Some(layout) => {
                if !self.layout.atoms.is_empty() {
                    return Err(Error::Schedule(format!(
                        "layout {} is built in; atoms are only allowed with name = \"{CUSTOM_LAYOUT}\"",
                        self.layout.name
                    )));
                }
                builtin_layout(layout, self.layout.d_um)
            }
            None => {
                if !(self.layout.d_um > 0.0) || !self.layout.d_um.is_finite() {
                    return Err(Error::NonPositiveDistance(self.layout.d_um));
                }
                AtomArray::new(self.layout.atoms.clone(), self.layout.d_um)
            }
        }
    }

    /// Pulses in temporal order, with every label checked against the layout.
    pub fn sequence(&self) -> Result<PulseSequence> {
        let array = self.array()?;
        self.pulses
            .iter()
            .map(|e| {
                let p = Pulse::new(e.targets.iter().cloned(), e.theta_rad, e.phi_rad)?;
                for t in &p.targets {
                    array.index_of(t)?;
                }
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()
            .map(PulseSequence::new)
    }

    pub fn validate(&self) -> Result<()> {
        self.sequence().map(|_| ())
    }
}
