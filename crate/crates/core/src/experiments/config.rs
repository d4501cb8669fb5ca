//! JSON simulation configs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;

use crate::catalog;
use crate::channel::{ChannelFile, WiretapChannel};
use crate::codes::{search_max_wiretap, SearchOptions, WiretapCode};
use crate::error::{Error, Result};
use crate::quantizer::SystemParams;
use crate::rational::{self, Interval, Rational};
use crate::sim::plant::{grid_point, Disturbance, DEFAULT_GRID};
use crate::sim::{BoundaryPolicy, ChannelPolicy, EveMode, SchemeConfig};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemSpec {
    lambda: Value,
    omega: Value,
    i0: [Value; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimSpec {
    system: SystemSpec,
    channel: String,
    code: Value,
    n: usize,
    horizon: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    x0: Option<Value>,
    #[serde(default)]
    disturbance: Option<Value>,
    #[serde(default)]
    grid: Option<u32>,
    #[serde(default)]
    boundary_policy: Option<String>,
    #[serde(default)]
    channel_policy: Option<String>,
    #[serde(default)]
    eve_mode: Option<String>,
    #[serde(default)]
    msg_to_class: Option<Vec<usize>>,
    #[serde(default)]
    dedup_cap: Option<usize>,
    #[serde(default)]
    check_depth: Option<usize>,
}

/// A loaded simulation: scheme, initial state and disturbance policy.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub scheme: SchemeConfig,
    pub x0: Rational,
    pub disturbance: Disturbance,
}

/// Numbers may be written as JSON numbers or as strings like `"6/5"`.
fn number(v: &Value, field: &str) -> Result<Rational> {
    match v {
        Value::Number(x) => rational::parse(&x.to_string()),
        Value::String(s) => rational::parse(s),
        _ => Err(Error::InvalidInput(format!("{field}: expected a number"))),
    }
}

fn resolve_channel(name: &str, base: &Path) -> Result<WiretapChannel> {
    if let Some(wt) = catalog::by_name(name) {
        return Ok(wt);
    }
    let path: PathBuf = base.join(name);
    ChannelFile::load(&path)
        .map_err(|e| match e {
            Error::Io(io) => Error::InvalidInput(format!("channel file {}: {io}", path.display())),
            other => other,
        })?
        .wiretap()
}

fn keyword<T>(value: Option<&str>, default: T, options: &[(&str, T)], field: &str) -> Result<T>
where
    T: Copy,
{
    match value {
        None => Ok(default),
        Some(s) => options
            .iter()
            .find(|(k, _)| *k == s)
            .map(|(_, v)| *v)
            .ok_or_else(|| {
                let names: Vec<&str> = options.iter().map(|(k, _)| *k).collect();
                Error::InvalidInput(format!("{field}: {s:?} is not one of {}", names.join(", ")))
            }),
    }
}

impl Simulation {
    /// Parses a config; relative channel paths resolve against `base`.
    pub fn from_json(text: &str, base: &Path, search: &SearchOptions) -> Result<Self> {
        let spec: SimSpec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("malformed config: {e}")))?;
        let lo = number(&spec.system.i0[0], "i0")?;
        let hi = number(&spec.system.i0[1], "i0")?;
        let params = SystemParams::new(
            number(&spec.system.lambda, "lambda")?,
            number(&spec.system.omega, "omega")?,
            Interval::new(lo, hi)?,
        )?;
        let channel = resolve_channel(&spec.channel, base)?;
        if spec.n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let code = match &spec.code {
            Value::String(s) if s == "search" => {
                search_max_wiretap(&channel.tb, &channel.tc, spec.n, search)?
                    .witness
                    .ok_or_else(|| {
                        Error::InvalidInput(format!("no wiretap code exists at n = {}", spec.n))
                    })?
            }
            Value::Object(_) => {
                let classes: BTreeMap<String, Vec<String>> =
                    serde_json::from_value(spec.code.clone())
                        .map_err(|e| Error::InvalidInput(format!("code: {e}")))?;
                let mut ordered: Vec<(usize, Vec<String>)> = Vec::new();
                for (k, v) in classes {
                    let idx = k.parse().map_err(|_| {
                        Error::InvalidInput(format!("code: message key {k:?} is not an index"))
                    })?;
                    ordered.push((idx, v));
                }
                ordered.sort();
                if ordered.iter().enumerate().any(|(i, (k, _))| i != *k) {
                    return Err(Error::InvalidInput(
                        "code: message keys must be 0..M-1".into(),
                    ));
                }
                let named: Vec<Vec<String>> = ordered.into_iter().map(|(_, v)| v).collect();
                WiretapCode::from_named(spec.n, channel.inputs(), &named)?
            }
            _ => {
                return Err(Error::InvalidInput(
                    "code: expected \"search\" or an object".into(),
                ))
            }
        };

        let mut scheme = SchemeConfig::new(params.clone(), channel, code, spec.horizon);
        scheme.n = spec.n;
        scheme.seed = spec.seed;
        scheme.boundary = keyword(
            spec.boundary_policy.as_deref(),
            BoundaryPolicy::LowestIndex,
            &[
                ("lowest-index", BoundaryPolicy::LowestIndex),
                ("seeded-random", BoundaryPolicy::SeededRandom),
            ],
            "boundary_policy",
        )?;
        scheme.channel_policy = keyword(
            spec.channel_policy.as_deref(),
            ChannelPolicy::SeededUniform,
            &[
                ("seeded-uniform", ChannelPolicy::SeededUniform),
                ("adversarial-first", ChannelPolicy::AdversarialFirst),
            ],
            "channel_policy",
        )?;
        scheme.eve_mode = keyword(
            spec.eve_mode.as_deref(),
            EveMode::Enumerate,
            &[
                ("enumerate", EveMode::Enumerate),
                ("symmetric", EveMode::Symmetric),
            ],
            "eve_mode",
        )?;
        if let Some(p) = spec.msg_to_class {
            scheme.msg_to_class = p;
        }
        if let Some(c) = spec.dedup_cap {
            scheme.dedup_cap = c;
        }
        if let Some(d) = spec.check_depth {
            scheme.check_depth = d;
        }

        let grid = spec.grid.unwrap_or(DEFAULT_GRID);
        let disturbance = match &spec.disturbance {
            None => Disturbance::SeededUniform { grid },
            Some(Value::String(s)) if s == "seeded-uniform" => Disturbance::SeededUniform { grid },
            Some(Value::String(s)) if s == "extremal" => Disturbance::Extremal,
            Some(Value::Array(ws)) => Disturbance::Fixed(
                ws.iter()
                    .map(|w| number(w, "disturbance"))
                    .collect::<Result<_>>()?,
            ),
            Some(other) => {
                return Err(Error::InvalidInput(format!(
                    "disturbance: {other} is not \"seeded-uniform\", \"extremal\" or a list"
                )))
            }
        };
        let x0 = match &spec.x0 {
            Some(v) => number(v, "x0")?,
            None => {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(spec.seed ^ 0x5eed);
                grid_point(&params.i0, grid, &mut rng)
            }
        };
        Ok(Self {
            scheme,
            x0,
            disturbance,
        })
    }

    pub fn load(path: &Path, search: &SearchOptions) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("config {}: {e}", path.display())))?;
        Self::from_json(&text, path.parent().unwrap_or(Path::new(".")), search)
    }
}
