//! Coupling-plan files.

use grouppst_core::pst::{CouplingPlan, Gauge};
use grouppst_core::{Convention, Group};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::output::sig;

pub const FORMAT_TAG: &str = "grouppst-plan/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub format: String,
    pub group: String,
    pub group_order: usize,
    /// SHA-256 of the Cayley table, see [`group_hash`].
    pub group_hash: String,
    pub seed: u64,
    pub convention: String,
    pub t0: f64,
    /// Class index in the symmetrized scheme.
    pub target: usize,
    pub target_element: String,
    pub levels: usize,
    pub gauge: GaugeSection,
    pub couplings: CouplingSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeSection {
    /// `explicit`, `min-nonzero`, `min-l1` or `product`.
    pub mode: String,
    pub phi_over_pi: f64,
    /// Empty when the couplings do not fix an integer gauge.
    pub l: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSection {
    /// `J_i` in the stated convention, one per class.
    pub values: Vec<f64>,
    /// The same values divided by pi.
    pub over_pi: Vec<f64>,
}

/// Hex SHA-256 over the order and the row-major Cayley table, all as
/// little-endian `u64`.
pub fn group_hash(g: &Group) -> String {
    let mut h = Sha256::new();
    h.update((g.order() as u64).to_le_bytes());
    for x in 0..g.order() {
        for y in 0..g.order() {
            h.update((g.mul(x, y) as u64).to_le_bytes());
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl PlanFile {
    pub fn new(
        group_spec: &str,
        group: &Group,
        seed: u64,
        levels: usize,
        mode: &str,
        plan: &CouplingPlan,
        target_element: &str,
    ) -> Self {
        PlanFile {
            format: FORMAT_TAG.into(),
            group: group_spec.into(),
            group_order: group.order(),
            group_hash: group_hash(group),
            seed,
            convention: plan.convention.tag().into(),
            t0: sig(plan.t0),
            target: plan.target,
            target_element: target_element.into(),
            levels,
            gauge: GaugeSection {
                mode: mode.into(),
                phi_over_pi: sig(plan.gauge.phi / core::f64::consts::PI),
                l: plan.gauge.l.clone(),
            },
            couplings: CouplingSection {
                values: plan.couplings.iter().map(|&j| sig(j)).collect(),
                over_pi: plan
                    .couplings
                    .iter()
                    .map(|&j| sig(j / core::f64::consts::PI))
                    .collect(),
            },
        }
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let p: PlanFile = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if p.format != FORMAT_TAG {
            return Err(CliError::Parse(format!("unknown plan format '{}'", p.format)));
        }
        if Convention::from_tag(&p.convention).is_none() {
            return Err(CliError::Parse(format!("unknown convention '{}'", p.convention)));
        }
        if p.couplings.values.len() != p.couplings.over_pi.len() {
            return Err(CliError::Parse("couplings.values and couplings.over_pi differ in length".into()));
        }
        Ok(p)
    }

    pub fn convention(&self) -> Convention {
        Convention::from_tag(&self.convention).unwrap_or(Convention::Amplitude)
    }

    /// The couplings as a core plan; the gauge carries `phi` and `l` only.
    pub fn to_plan(&self) -> CouplingPlan {
        CouplingPlan {
            couplings: self.couplings.values.clone(),
            t0: self.t0,
            target: self.target,
            gauge: Gauge {
                phi: self.gauge.phi_over_pi * core::f64::consts::PI,
                l: self.gauge.l.clone(),
                theta: Vec::new(),
            },
            convention: self.convention(),
        }
    }
}
