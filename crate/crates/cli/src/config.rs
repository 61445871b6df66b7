//! Game config files: two channel descriptors, the packet count, and
//! optional geometry for parametric channel families.
//!
//! ```json
//! {
//!   "n": 2,
//!   "channel_a": { "family": "explicit-triple",
//!                  "p_near": "0.99", "p_mid": "0.94", "p_far": "0.80" },
//!   "channel_b": { "family": "concave-quadratic",
//!                  "a": "0.95", "b": "0.00005" },
//!   "geometry": { "d": "60", "epsilon": "10" }
//! }
//! ```
//!
//! Probabilities are decimal strings so rational mode stays lossless end to
//! end; raw JSON numbers are accepted but demote the value to float mode.

use std::path::Path;

use serde::Deserialize;

use wss_game::channel::{success_probability, ChannelModel, ChannelTriple, GeometryParams};
use wss_game::game::{GameSpec, DEFAULT_MAX_PACKETS};
use wss_game::scalar::Scalar;

use crate::{CliError, ModeArg};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: u32,
    channel_a: ChannelDescriptor,
    channel_b: ChannelDescriptor,
    #[serde(default)]
    geometry: Option<GeometryConfig>,
    #[serde(default)]
    max_packets: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryConfig {
    d: Scalar,
    epsilon: Scalar,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
enum ChannelDescriptor {
    #[serde(rename = "explicit-triple")]
    ExplicitTriple {
        p_near: Scalar,
        p_mid: Scalar,
        p_far: Scalar,
    },
    #[serde(rename = "concave-quadratic")]
    ConcaveQuadratic {
        a: Scalar,
        b: Scalar,
        /// Domain end; defaults to the configured geometry's `D`.
        #[serde(default)]
        d_max: Option<Scalar>,
    },
    #[serde(rename = "table-interpolated")]
    TableInterpolated { points: Vec<(Scalar, Scalar)> },
}

/// A parsed config with bounds-checked (but not yet admissibility-checked)
/// triples, ready for either the validator or the solvers.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub n: u32,
    pub cap: u32,
    pub raw_a: ChannelTriple,
    pub raw_b: ChannelTriple,
}

impl Loaded {
    /// Re-run the admissibility validation and assemble a solvable spec.
    pub fn validated_spec(&self) -> Result<GameSpec, CliError> {
        let a = ChannelTriple::new(
            self.raw_a.p_near().clone(),
            self.raw_a.p_mid().clone(),
            self.raw_a.p_far().clone(),
        )
        .map_err(|e| CliError::Domain(format!("channel_a: {e}")))?;
        let b = ChannelTriple::new(
            self.raw_b.p_near().clone(),
            self.raw_b.p_mid().clone(),
            self.raw_b.p_far().clone(),
        )
        .map_err(|e| CliError::Domain(format!("channel_b: {e}")))?;
        GameSpec::with_cap(self.n, a, b, self.cap).map_err(|e| CliError::Domain(e.to_string()))
    }
}

pub fn load(path: &Path, mode: ModeArg) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let file: FileConfig = serde_json::from_str(&text).map_err(|e| {
        CliError::Usage(format!(
            "cannot parse {} (line {}, column {}): {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    let geometry = match &file.geometry {
        Some(g) => Some(
            GeometryParams::new(apply_mode(&g.d, mode), apply_mode(&g.epsilon, mode))
                .map_err(|e| CliError::Domain(e.to_string()))?,
        ),
        None => None,
    };
    let raw_a = raw_triple("channel_a", &file.channel_a, geometry.as_ref(), mode)?;
    let raw_b = raw_triple("channel_b", &file.channel_b, geometry.as_ref(), mode)?;
    Ok(Loaded {
        n: file.n,
        cap: file.max_packets.unwrap_or(DEFAULT_MAX_PACKETS),
        raw_a,
        raw_b,
    })
}

fn apply_mode(value: &Scalar, mode: ModeArg) -> Scalar {
    match mode {
        ModeArg::Rational => value.clone(),
        ModeArg::Float => value.to_float_mode(),
    }
}

fn raw_triple(
    which: &str,
    descriptor: &ChannelDescriptor,
    geometry: Option<&GeometryParams>,
    mode: ModeArg,
) -> Result<ChannelTriple, CliError> {
    let domain = |e: wss_game::channel::ChannelError| CliError::Domain(format!("{which}: {e}"));
    match descriptor {
        ChannelDescriptor::ExplicitTriple { p_near, p_mid, p_far } => ChannelTriple::raw(
            apply_mode(p_near, mode),
            apply_mode(p_mid, mode),
            apply_mode(p_far, mode),
        )
        .map_err(domain),
        ChannelDescriptor::ConcaveQuadratic { a, b, d_max } => {
            let geom = geometry.ok_or_else(|| {
                CliError::Usage(format!(
                    "{which} uses a parametric family but the config has no geometry section"
                ))
            })?;
            let d_max = d_max.as_ref().map(|d| apply_mode(d, mode)).unwrap_or_else(|| geom.d().clone());
            let model = ChannelModel::concave_quadratic(apply_mode(a, mode), apply_mode(b, mode), d_max)
                .map_err(domain)?;
            sample_raw(which, &model, geom)
        }
        ChannelDescriptor::TableInterpolated { points } => {
            let geom = geometry.ok_or_else(|| {
                CliError::Usage(format!(
                    "{which} uses a parametric family but the config has no geometry section"
                ))
            })?;
            let points = points
                .iter()
                .map(|(d, p)| (apply_mode(d, mode), apply_mode(p, mode)))
                .collect();
            let model = ChannelModel::table(points).map_err(domain)?;
            sample_raw(which, &model, geom)
        }
    }
}

/// Sample a parametric model at the three game distances without the
/// admissibility check, so the validator can report violations instead of
/// erroring out.
fn sample_raw(
    which: &str,
    model: &ChannelModel,
    geom: &GeometryParams,
) -> Result<ChannelTriple, CliError> {
    let domain = |e: wss_game::channel::ChannelError| CliError::Domain(format!("{which}: {e}"));
    let p_near = success_probability(model, &geom.near()).map_err(domain)?;
    let p_mid = success_probability(model, &geom.mid()).map_err(domain)?;
    let p_far = success_probability(model, &geom.far()).map_err(domain)?;
    ChannelTriple::raw(p_near, p_mid, p_far).map_err(domain)
}
