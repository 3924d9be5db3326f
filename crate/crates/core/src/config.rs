//! Run configuration for the command-line front end (JSON, `"schema": 1`).
//!
//! Signal specs share one string syntax with the `--window` flag:
//!
//! | finite mode       | sampled mode      |
//! |-------------------|-------------------|
//! | `gaussian`        | `gaussian`, `gaussian:RATE` |
//! | `delta`, `delta:K`| `bump:RADIUS`     |
//! | `random`, `random:SEED` | `file:PATH` |
//! | `file:PATH`       |                   |
//!
//! `random` without a seed draws from the top-level `seed`, offset by role
//! and trial. `random:SEED` uses `SEED + trial`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{GroupParams, C64};
use crate::lattice::Lattice;
use crate::sampled::{ProductLattice, SampledSignal};
use crate::signal::Signal;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Finite,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Figa,
    Poisson,
    Rihaczek,
    Rotated,
    Frames,
    WexlerRaz,
    Janssen,
    Norms,
    Holder,
    Cg,
    MainBound,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Figa => "figa",
            Suite::Poisson => "poisson",
            Suite::Rihaczek => "rihaczek",
            Suite::Rotated => "rotated",
            Suite::Frames => "frames",
            Suite::WexlerRaz => "wexler_raz",
            Suite::Janssen => "janssen",
            Suite::Norms => "norms",
            Suite::Holder => "holder",
            Suite::Cg => "cg",
            Suite::MainBound => "main_bound",
        }
    }

    pub fn available_in(&self, mode: Mode) -> bool {
        mode == Mode::Finite || matches!(self, Suite::Figa | Suite::Rihaczek)
    }

    /// Inequality suites compare a ratio against a constant instead of a
    /// residual against a tolerance.
    pub fn is_inequality(&self) -> bool {
        matches!(self, Suite::Holder | Suite::Cg | Suite::MainBound)
    }

    /// Default tolerance; `None` for inequality suites, which only report
    /// their ratio unless the config supplies a constant.
    pub fn default_tolerance(&self, mode: Mode) -> Option<f64> {
        match (mode, self) {
            (Mode::Sampled, _) => Some(1e-6),
            (_, Suite::Figa | Suite::Rihaczek | Suite::Rotated) => Some(1e-10),
            (_, Suite::Poisson) => Some(1e-11),
            (_, Suite::Frames | Suite::WexlerRaz) => Some(1e-8),
            (_, Suite::Janssen | Suite::Norms) => Some(1e-9),
            _ => None,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parsed signal spec.
#[derive(Clone, Debug, PartialEq)]
pub enum SignalSpec {
    Gaussian(Option<f64>),
    Delta(usize),
    Random(Option<u64>),
    Bump(f64),
    File(PathBuf),
}

impl FromStr for SignalSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let bad = |what: &str| Error::Config(format!("signal spec `{s}`: {what}"));
        let num = |a: &str| a.parse::<f64>().map_err(|_| bad("expected a number"));
        match (head, arg) {
            ("gaussian", None) => Ok(SignalSpec::Gaussian(None)),
            ("gaussian", Some(a)) => Ok(SignalSpec::Gaussian(Some(num(a)?))),
            ("delta", None) => Ok(SignalSpec::Delta(0)),
            ("delta", Some(a)) => a.parse().map(SignalSpec::Delta).map_err(|_| bad("expected an index")),
            ("random", None) => Ok(SignalSpec::Random(None)),
            ("random", Some(a)) => a.parse().map(|v| SignalSpec::Random(Some(v))).map_err(|_| bad("expected a seed")),
            ("bump", Some(a)) => Ok(SignalSpec::Bump(num(a)?)),
            ("file", Some(a)) if !a.is_empty() => Ok(SignalSpec::File(PathBuf::from(a))),
            _ => Err(bad("expected gaussian, delta[:K], random[:SEED], bump:R or file:PATH")),
        }
    }
}

impl fmt::Display for SignalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignalSpec::Gaussian(None) => write!(f, "gaussian"),
            SignalSpec::Gaussian(Some(r)) => write!(f, "gaussian:{r}"),
            SignalSpec::Delta(k) => write!(f, "delta:{k}"),
            SignalSpec::Random(None) => write!(f, "random"),
            SignalSpec::Random(Some(s)) => write!(f, "random:{s}"),
            SignalSpec::Bump(r) => write!(f, "bump:{r}"),
            SignalSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl Serialize for SignalSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SignalSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl SignalSpec {
    fn needs_seed(&self) -> bool {
        matches!(self, SignalSpec::Random(None))
    }

    /// Materializes the spec on a finite group. `role` and `trial` offset
    /// the seed of random signals.
    pub fn finite(&self, p: GroupParams, base_seed: Option<u64>, role: u64, trial: u64, dir: &Path) -> Result<Signal> {
        match self {
            SignalSpec::Gaussian(None) => Ok(Signal::gaussian(p)),
            SignalSpec::Delta(k) => {
                if *k >= p.size() {
                    return Err(Error::Config(format!("delta index {k} outside the group of size {}", p.size())));
                }
                let mut v = vec![C64::new(0.0, 0.0); p.size()];
                v[*k] = C64::new(1.0, 0.0);
                Signal::new(p, v)
            }
            SignalSpec::Random(Some(seed)) => Ok(Signal::random(p, seed.wrapping_add(trial))),
            SignalSpec::Random(None) => {
                let base = base_seed.ok_or_else(|| Error::Config("`random` needs a top-level `seed`".into()))?;
                Ok(Signal::random(p, derived_seed(base, role, trial)))
            }
            SignalSpec::File(path) => load_finite(p, &dir.join(path)),
            other => Err(Error::Config(format!("signal spec `{other}` is not available in finite mode"))),
        }
    }

    pub fn sampled(&self, h: f64, half_width: f64, dir: &Path) -> Result<SampledSignal> {
        match self {
            SignalSpec::Gaussian(None) => SampledSignal::gaussian(half_width, h),
            SignalSpec::Gaussian(Some(rate)) => SampledSignal::dilated_gaussian(half_width, h, *rate),
            SignalSpec::Bump(radius) => SampledSignal::bump(half_width, h, *radius),
            SignalSpec::File(path) => {
                let full = dir.join(path);
                let text =
                    std::fs::read_to_string(&full).map_err(|e| Error::Config(format!("{}: {e}", full.display())))?;
                let s: SampledSignal =
                    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", full.display())))?;
                if (s.h() - h).abs() > 1e-12 * h || (s.half_width() - half_width).abs() > 1e-12 * half_width {
                    return Err(Error::Config(format!("{}: grid does not match the configured grid", full.display())));
                }
                Ok(s)
            }
            other => Err(Error::Config(format!("signal spec `{other}` is not available in sampled mode"))),
        }
    }
}

/// Seed for a role-and-trial slot drawn from the top-level seed.
pub fn derived_seed(base: u64, role: u64, trial: u64) -> u64 {
    base.wrapping_add(trial.wrapping_mul(16)).wrapping_add(role)
}

/// Reads a finite signal stored either as a serialized [`Signal`] or as a
/// bare array of `[re, im]` pairs.
fn load_finite(p: GroupParams, path: &Path) -> Result<Signal> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let err = |e: serde_json::Error| Error::Config(format!("{}: {e}", path.display()));
    let value: serde_json::Value = serde_json::from_str(&text).map_err(err)?;
    let signal = if value.is_array() {
        Signal::new(p, serde_json::from_value(value).map_err(err)?)
    } else {
        serde_json::from_value::<Signal>(value).map_err(err)
    }
    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    p.check_same(signal.params()).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    Ok(signal)
}

/// Signals by role. Missing roles default to `random`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Signals {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<SignalSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f2: Option<SignalSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g1: Option<SignalSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g2: Option<SignalSpec>,
}

impl Signals {
    /// Specs in role order `f1, f2, g1, g2`.
    pub fn resolved(&self, mode: Mode) -> [SignalSpec; 4] {
        let default = match mode {
            Mode::Finite => SignalSpec::Random(None),
            Mode::Sampled => SignalSpec::Gaussian(None),
        };
        [&self.f1, &self.f2, &self.g1, &self.g2].map(|s| s.clone().unwrap_or_else(|| default.clone()))
    }
}

/// Exponent in `[1, ∞]`, written as a number or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponent(pub f64);

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        let v = match Raw::deserialize(d)? {
            Raw::Num(v) => v,
            Raw::Str(s) if s == "inf" => f64::INFINITY,
            Raw::Str(s) => {
                return Err(serde::de::Error::custom(format!("exponent `{s}`: expected a number or \"inf\"")))
            }
        };
        if v.is_nan() || v < 1.0 {
            return Err(serde::de::Error::custom(format!("exponent {v} outside [1, inf]")));
        }
        Ok(Exponent(v))
    }
}

/// Norm setup: `(p, q)` with weight `m = v_s`, submultiplicative `v = v_s`,
/// and the partition step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormConfig {
    #[serde(default = "default_p")]
    pub p: Exponent,
    #[serde(default = "default_q")]
    pub q: Exponent,
    #[serde(default = "default_s")]
    pub s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
}

fn default_p() -> Exponent {
    Exponent(2.0)
}
fn default_q() -> Exponent {
    Exponent(1.0)
}
fn default_s() -> f64 {
    1.0
}

impl Default for NormConfig {
    fn default() -> Self {
        Self { p: default_p(), q: default_q(), s: default_s(), step: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub h: f64,
    #[serde(rename = "T")]
    pub half_width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupParams>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lattices: Vec<Lattice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub product_lattices: Vec<ProductLattice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub signals: Signals,
    pub suites: Vec<Suite>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<Suite, f64>,
    #[serde(default)]
    pub norms: NormConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

fn default_trials() -> usize {
    1
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Config(m));
        if self.schema != SCHEMA_VERSION {
            return err(format!("schema: unsupported version {} (expected {SCHEMA_VERSION})", self.schema));
        }
        if self.suites.is_empty() {
            return err("suites: nothing to run".into());
        }
        if self.trials == 0 {
            return err("trials: must be at least 1".into());
        }
        for s in &self.suites {
            if !s.available_in(self.mode) {
                return err(format!("suites: `{s}` is not available in {:?} mode", self.mode).to_lowercase());
            }
        }
        for (s, t) in &self.tolerances {
            if !(t.is_finite() && *t > 0.0) {
                return err(format!("tolerances.{s}: must be positive, got {t}"));
            }
        }
        let specs = self.signals.resolved(self.mode);
        match self.mode {
            Mode::Finite => {
                let Some(p) = self.group else {
                    return err("group: required in finite mode".into());
                };
                if self.lattices.is_empty() {
                    return err("lattices: at least one lattice literal is required in finite mode".into());
                }
                for (i, l) in self.lattices.iter().enumerate() {
                    if l.params() != &p {
                        return err(format!("lattices[{i}]: lives on {} but group is {p}", l.params()));
                    }
                }
                if self.seed.is_none()
                    && (specs.iter().any(SignalSpec::needs_seed) || self.suites.contains(&Suite::Poisson))
                {
                    return err("seed: required when random signals are requested".into());
                }
                if self.grid.is_some() || !self.product_lattices.is_empty() {
                    return err("grid/product_lattices: only valid in sampled mode".into());
                }
            }
            Mode::Sampled => {
                if self.grid.is_none() {
                    return err("grid: required in sampled mode".into());
                }
                if self.product_lattices.is_empty() {
                    return err("product_lattices: at least one is required in sampled mode".into());
                }
                if self.group.is_some() || !self.lattices.is_empty() {
                    return err("group/lattices: only valid in finite mode".into());
                }
            }
        }
        if let Some(step) = self.norms.step {
            if let Some(p) = self.group {
                crate::norms::Partition::new(p, step).map_err(|e| Error::Config(format!("norms.step: {e}")))?;
            }
        }
        Ok(())
    }

    /// Tolerance for `suite` after `scale`; `None` for inequality suites
    /// without an explicit constant.
    pub fn tolerance(&self, suite: Suite, scale: f64) -> Option<f64> {
        self.tolerances.get(&suite).copied().or_else(|| suite.default_tolerance(self.mode)).map(|t| t * scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIGA: &str = r#"{"schema":1,"mode":"finite","group":{"n":12,"d":1},
        "lattices":["N=12;d=1;gens=(3,0),(0,4)"],"seed":7,"suites":["figa"]}"#;

    #[test]
    fn parses_minimal_finite() {
        let c = RunConfig::from_json(FIGA).unwrap();
        assert_eq!(c.trials, 1);
        assert_eq!(c.tolerance(Suite::Figa, 1.0), Some(1e-10));
        assert_eq!(c.tolerance(Suite::Figa, 10.0), Some(1e-9));
        assert_eq!(c.tolerance(Suite::Holder, 1.0), None);
        assert_eq!(c.norms, NormConfig::default());
    }

    #[test]
    fn rejects_bad_configs() {
        let cases = [
            (FIGA.replace(r#"["figa"]"#, "[]"), "nothing to run"),
            (FIGA.replace(r#""seed":7,"#, ""), "seed"),
            (FIGA.replace(r#""schema":1"#, r#""schema":2"#), "schema"),
            (FIGA.replace(r#""n":12"#, r#""n":8"#), "lattices[0]"),
            (FIGA.replace(r#""figa""#, r#""fig""#), "unknown variant"),
            (FIGA.replace(r#""seed":7"#, r#""seed":7,"bogus":1"#), "unknown field"),
        ];
        for (text, needle) in cases {
            match RunConfig::from_json(&text) {
                Err(Error::Config(m)) => assert!(m.contains(needle), "{m}"),
                other => panic!("{needle}: {other:?}"),
            }
        }
        let no_line =
            RunConfig::from_json("{\n\"schema\": 1,\n\"mode\": \"finite\",\n\"suites\": [\"figa\"] oops}").unwrap_err();
        assert!(no_line.to_string().contains("line 4"), "{no_line}");
    }

    #[test]
    fn sampled_config() {
        let text = r#"{"schema":1,"mode":"sampled","grid":{"h":0.015625,"T":8},
            "product_lattices":[{"alpha":1,"beta":0.5,"radius":6}],"suites":["figa"]}"#;
        let c = RunConfig::from_json(text).unwrap();
        assert_eq!(c.tolerance(Suite::Figa, 1.0), Some(1e-6));
        let bad = text.replace(r#"["figa"]"#, r#"["frames"]"#);
        assert!(RunConfig::from_json(&bad).is_err());
    }

    #[test]
    fn signal_specs() {
        for s in ["gaussian", "gaussian:2", "delta:3", "random", "random:9", "bump:1.5", "file:x.json"] {
            let spec: SignalSpec = s.parse().unwrap();
            assert_eq!(spec.to_string().parse::<SignalSpec>().unwrap(), spec);
        }
        for s in ["", "delta:x", "random:-1", "file:", "laplace"] {
            assert!(s.parse::<SignalSpec>().is_err(), "{s}");
        }
        let p = GroupParams::new(4, 1).unwrap();
        let dir = Path::new(".");
        assert!(SignalSpec::Random(None).finite(p, None, 0, 0, dir).is_err());
        let a = SignalSpec::Random(None).finite(p, Some(3), 1, 0, dir).unwrap();
        assert_eq!(a, Signal::random(p, derived_seed(3, 1, 0)));
        assert!(SignalSpec::Delta(4).finite(p, None, 0, 0, dir).is_err());
        assert!(SignalSpec::Bump(1.0).finite(p, None, 0, 0, dir).is_err());
    }

    #[test]
    fn file_signals() {
        let dir = tempfile::tempdir().unwrap();
        let p = GroupParams::new(4, 1).unwrap();
        let s = Signal::random(p, 1);
        std::fs::write(dir.path().join("a.json"), serde_json::to_string(&s).unwrap()).unwrap();
        std::fs::write(dir.path().join("b.json"), serde_json::to_string(s.values()).unwrap()).unwrap();
        for name in ["a.json", "b.json"] {
            let spec: SignalSpec = format!("file:{name}").parse().unwrap();
            assert_eq!(spec.finite(p, None, 0, 0, dir.path()).unwrap(), s);
        }
        let wrong = GroupParams::new(8, 1).unwrap();
        assert!("file:a.json".parse::<SignalSpec>().unwrap().finite(wrong, None, 0, 0, dir.path()).is_err());
    }

    #[test]
    fn exponents() {
        let n: NormConfig = serde_json::from_str(r#"{"p":"inf","q":1.5}"#).unwrap();
        assert!(n.p.0.is_infinite() && n.q.0 == 1.5);
        assert!(serde_json::from_str::<NormConfig>(r#"{"p":0.5}"#).is_err());
        assert_eq!(serde_json::to_string(&n).unwrap(), r#"{"p":"inf","q":1.5,"s":1.0}"#);
    }
}
