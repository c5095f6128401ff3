//! TOML run configuration. The schema is documented in `docs/config.md`.

use bjscc::bounds::{JsccInstance, SchemeDescriptor, SchemeKind, WzInstance};
use bjscc::prob::{product_channel, DistortionMatrix, Kernel, Pmf};
use bjscc::sim::Backend;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Printed on its own header line, not in the TOML echo.
    #[serde(skip_serializing)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub schemes: Vec<SchemeSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_curve: Option<RateCurveSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSpec {
    Bsc(BscSpec),
    Explicit(ExplicitSpec),
    WynerZiv(WzSpec),
}

/// `M` equiprobable messages over `BSC(delta)^n` with uniform inputs,
/// recovered exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BscSpec {
    pub n: u32,
    pub delta: f64,
    pub m: f64,
    pub k: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSpec {
    pub p_w: Vec<f64>,
    pub p_x: Vec<f64>,
    pub channel: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_z: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distortion: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub threshold: f64,
    pub k: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WzSpec {
    pub p_w: Vec<f64>,
    pub u_given_w: Vec<Vec<f64>>,
    pub t_given_w: Vec<Vec<f64>>,
    pub phi: Vec<Vec<usize>>,
    pub p_x: Vec<f64>,
    pub channel: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distortion: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub threshold: f64,
    pub k: u64,
}

impl InstanceSpec {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Bsc(_) => "bsc",
            Self::Explicit(_) => "explicit",
            Self::WynerZiv(_) => "wyner_ziv",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<u64>,
}

fn default_backend() -> Backend {
    Backend::CellTable
}

fn default_sigmas() -> f64 {
    3.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSpec {
    pub trials: u64,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    /// Pass criterion: `p_hat <= bound + sigmas * stderr`.
    #[serde(default = "default_sigmas")]
    pub sigmas: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateCurveSpec {
    pub n: Vec<u32>,
    pub delta: f64,
    pub eps: f64,
    pub k: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot_script: Option<String>,
}

impl Default for RateCurveSpec {
    /// The two-blocklength sweep over `K = 1, 2, ..., 1024`.
    fn default() -> Self {
        Self {
            n: vec![10, 20],
            delta: 0.05,
            eps: 1e-2,
            k: (0..=10).map(|e| 1 << e).collect(),
            plot_script: None,
        }
    }
}

/// Largest `n` for which the BSC instance is expanded into explicit tables.
pub const MAX_EXPLICIT_N: u32 = 10;

/// Parsed configuration together with its source text, for locating
/// fields in error messages.
pub struct Loaded {
    pub config: Config,
    src: String,
}

impl Loaded {
    pub fn parse(src: &str) -> Result<Self, CliError> {
        let config: Config = toml::from_str(src).map_err(|e| {
            let e = refine_instance_error(src).unwrap_or(e);
            CliError::Config(e.to_string().trim_end().to_owned())
        })?;
        Ok(Self {
            config,
            src: src.to_owned(),
        })
    }

    pub fn empty() -> Self {
        Self {
            config: Config::default(),
            src: String::new(),
        }
    }

    /// Config error naming `section.key` and, when found, its line.
    pub fn err(&self, section: &str, key: &str, msg: impl std::fmt::Display) -> CliError {
        self.err_nth(section, 0, key, msg)
    }

    /// As [`Loaded::err`] for the `nth` table of an array of tables.
    pub fn err_nth(
        &self,
        section: &str,
        nth: usize,
        key: &str,
        msg: impl std::fmt::Display,
    ) -> CliError {
        let field = if section.is_empty() {
            key.to_owned()
        } else {
            format!("{section}.{key}")
        };
        match locate(&self.src, section, nth, key) {
            Some(line) => CliError::Config(format!("{field} (line {line}): {msg}")),
            None => CliError::Config(format!("{field}: {msg}")),
        }
    }
}

#[derive(Deserialize)]
struct Probe<T> {
    #[serde(rename = "instance")]
    _instance: T,
}

/// The tagged instance enum loses value positions on failure. Re-parse the
/// section as its concrete variant, with the tag line blanked, to recover them.
fn refine_instance_error(src: &str) -> Option<toml::de::Error> {
    let table: toml::Table = toml::from_str(src).ok()?;
    let kind = table.get("instance")?.get("kind")?.as_str()?.to_owned();
    let tag_line = locate(src, "instance", 0, "kind")?;
    let stripped: String = src
        .lines()
        .enumerate()
        .map(|(i, l)| if i + 1 == tag_line { "" } else { l })
        .collect::<Vec<_>>()
        .join("\n");
    match kind.as_str() {
        "bsc" => toml::from_str::<Probe<BscSpec>>(&stripped).err(),
        "explicit" => toml::from_str::<Probe<ExplicitSpec>>(&stripped).err(),
        "wyner_ziv" => toml::from_str::<Probe<WzSpec>>(&stripped).err(),
        _ => None,
    }
}

/// 1-based line of `key` inside the `nth` occurrence of `[section]` (or
/// `[[section]]`); the section header's line if the key is absent.
fn locate(src: &str, section: &str, nth: usize, key: &str) -> Option<usize> {
    let mut current = String::new();
    let mut seen = 0usize;
    let mut header = None;
    for (i, line) in src.lines().enumerate() {
        let t = line.trim();
        if t.starts_with('[') {
            if header.is_some() {
                break;
            }
            current = t.trim_matches(|c| c == '[' || c == ']').trim().to_owned();
            if current == section {
                if seen == nth {
                    header = Some(i + 1);
                }
                seen += 1;
            }
            continue;
        }
        let in_scope = if section.is_empty() {
            current.is_empty()
        } else {
            header.is_some()
        };
        if in_scope {
            if let Some(rest) = t.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return Some(i + 1);
                }
            }
        }
    }
    header
}

fn lib_err(l: &Loaded, key: &str, e: bjscc::Error) -> CliError {
    l.err("instance", key, e)
}

fn pmf(l: &Loaded, key: &str, v: &[f64]) -> Result<Pmf<f64>, CliError> {
    Pmf::new(v.to_vec()).map_err(|e| lib_err(l, key, e))
}

fn kernel(l: &Loaded, key: &str, rows: &[Vec<f64>]) -> Result<Kernel<f64>, CliError> {
    Kernel::new(rows.to_vec()).map_err(|e| lib_err(l, key, e))
}

fn distortion(
    l: &Loaded,
    d: &Option<Vec<Vec<f64>>>,
    size: usize,
) -> Result<DistortionMatrix<f64>, CliError> {
    match d {
        Some(rows) => DistortionMatrix::new(rows.clone()),
        None => DistortionMatrix::hamming(size),
    }
    .map_err(|e| lib_err(l, "distortion", e))
}

fn check_k(l: &Loaded, k: u64) -> Result<(), CliError> {
    if k < 1 {
        return Err(l.err("instance", "k", "must be at least 1"));
    }
    Ok(())
}

fn check_delta(l: &Loaded, section: &str, delta: f64) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(l.err(section, "delta", format!("{delta} must lie in [0, 1]")));
    }
    Ok(())
}

/// The instance section after validation.
pub enum Instance {
    Bsc { n: u32, delta: f64, m: f64, k: u64 },
    Jscc(JsccInstance<f64>),
    Wz(WzInstance<f64>),
}

impl Loaded {
    pub fn instance_spec(&self) -> Result<&InstanceSpec, CliError> {
        self.config
            .instance
            .as_ref()
            .ok_or_else(|| CliError::Config("instance: section is required".into()))
    }

    pub fn instance(&self) -> Result<Instance, CliError> {
        let l = self;
        Ok(match self.instance_spec()? {
            InstanceSpec::Bsc(BscSpec { n, delta, m, k }) => {
                check_k(l, *k)?;
                if *n < 1 {
                    return Err(l.err("instance", "n", "must be at least 1"));
                }
                check_delta(l, "instance", *delta)?;
                if !(m.is_finite() && *m >= 1.0) {
                    return Err(l.err(
                        "instance",
                        "m",
                        format!("{m} must be a finite number >= 1"),
                    ));
                }
                Instance::Bsc {
                    n: *n,
                    delta: *delta,
                    m: *m,
                    k: *k,
                }
            }
            InstanceSpec::Explicit(ExplicitSpec {
                p_w,
                p_x,
                channel,
                p_z,
                distortion: dist,
                threshold,
                k,
            }) => {
                check_k(l, *k)?;
                let p_w = pmf(l, "p_w", p_w)?;
                let p_z = match p_z {
                    Some(v) => pmf(l, "p_z", v)?,
                    None => p_w.clone(),
                };
                let dmat = distortion(l, dist, p_w.len())?;
                let inst = JsccInstance::new(
                    p_w,
                    pmf(l, "p_x", p_x)?,
                    p_z,
                    kernel(l, "channel", channel)?,
                    dmat,
                    *threshold,
                    *k,
                )
                .map_err(|e| lib_err(l, "kind", e))?;
                Instance::Jscc(inst)
            }
            InstanceSpec::WynerZiv(WzSpec {
                p_w,
                u_given_w,
                t_given_w,
                phi,
                p_x,
                channel,
                distortion: dist,
                threshold,
                k,
            }) => {
                check_k(l, *k)?;
                let p_w = pmf(l, "p_w", p_w)?;
                let dmat = distortion(l, dist, p_w.len())?;
                let inst = WzInstance::new(
                    p_w,
                    kernel(l, "u_given_w", u_given_w)?,
                    kernel(l, "t_given_w", t_given_w)?,
                    phi.clone(),
                    pmf(l, "p_x", p_x)?,
                    kernel(l, "channel", channel)?,
                    dmat,
                    *threshold,
                    *k,
                )
                .map_err(|e| lib_err(l, "kind", e))?;
                Instance::Wz(inst)
            }
        })
    }

    /// The schemes to evaluate, defaulting to the disjoint one.
    pub fn schemes(&self, k: u64) -> Result<Vec<SchemeDescriptor>, CliError> {
        if self.config.schemes.is_empty() {
            return SchemeDescriptor::disjoint(k)
                .map(|s| vec![s])
                .map_err(|e| self.err("instance", "k", e));
        }
        self.config
            .schemes
            .iter()
            .enumerate()
            .map(|(i, s)| match s.kind {
                SchemeKind::Disjoint => {
                    SchemeDescriptor::disjoint(k).map_err(|e| self.err_nth("schemes", i, "kind", e))
                }
                SchemeKind::Baseline => {
                    SchemeDescriptor::baseline(k).map_err(|e| self.err_nth("schemes", i, "kind", e))
                }
                SchemeKind::Hybrid => {
                    let j = s
                        .j
                        .ok_or_else(|| self.err_nth("schemes", i, "j", "hybrid scheme needs j"))?;
                    if j < 1 || !k.is_multiple_of(j) {
                        return Err(self.err_nth(
                            "schemes",
                            i,
                            "j",
                            format!("{j} must be a positive divisor of k = {k}"),
                        ));
                    }
                    SchemeDescriptor::hybrid_for(k, j)
                        .map_err(|e| self.err_nth("schemes", i, "j", e))
                }
            })
            .collect()
    }

    pub fn simulate(&self) -> Result<&SimulateSpec, CliError> {
        let s = self
            .config
            .simulate
            .as_ref()
            .ok_or_else(|| CliError::Config("simulate: section is required".into()))?;
        if s.trials < 1 {
            return Err(self.err("simulate", "trials", "must be at least 1"));
        }
        if s.sigmas.is_nan() || s.sigmas <= 0.0 {
            return Err(self.err("simulate", "sigmas", "must be positive"));
        }
        Ok(s)
    }

    pub fn rate_curve(&self) -> Result<RateCurveSpec, CliError> {
        let s = self.config.rate_curve.clone().unwrap_or_default();
        if s.n.is_empty() || s.n.contains(&0) {
            return Err(self.err(
                "rate_curve",
                "n",
                "needs at least one blocklength, all >= 1",
            ));
        }
        if s.k.is_empty() || s.k.contains(&0) {
            return Err(self.err("rate_curve", "k", "needs at least one K, all >= 1"));
        }
        check_delta(self, "rate_curve", s.delta)?;
        if !(s.eps > 0.0 && s.eps < 1.0) {
            return Err(self.err("rate_curve", "eps", format!("{} must lie in (0, 1)", s.eps)));
        }
        Ok(s)
    }

    pub fn check_workers(&self) -> Result<(), CliError> {
        if self.config.workers == Some(0) {
            return Err(self.err("", "workers", "must be at least 1"));
        }
        Ok(())
    }

    /// TOML echo of the resolved configuration.
    pub fn resolved(&self) -> String {
        toml::to_string(&self.config).unwrap_or_default()
    }
}

/// Uniform messages over uniform inputs to `BSC(delta)^n`, Hamming
/// distortion at zero: the explicit counterpart of the closed form.
pub fn bsc_instance(n: u32, delta: f64, m: f64, k: u64) -> bjscc::Result<JsccInstance<f64>> {
    if m.fract() != 0.0 {
        return Err(bjscc::Error::Unsupported(format!(
            "simulation needs an integer number of messages, got m = {m}"
        )));
    }
    if n > MAX_EXPLICIT_N {
        return Err(bjscc::Error::Unsupported(format!(
            "simulation expands BSC^n explicitly; n = {n} exceeds {MAX_EXPLICIT_N}"
        )));
    }
    let p_w = Pmf::uniform(m as usize)?;
    let p_x = Pmf::uniform(1 << n)?;
    let ch = product_channel(&Kernel::bsc(delta)?, n)?;
    JsccInstance::near_lossless(p_w, p_x, ch, k)
}
