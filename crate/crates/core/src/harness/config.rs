//! Experiment configuration: `[section]` headers, `key = value` lines and
//! `#` comments.
//!
//! ```text
//! [run]
//! dt = 0.001          # seconds
//! duration = 20       # seconds, ramp and smooth_random only
//! seed = 42           # default seed for smooth_random
//! max_lag = 2         # seconds searched by the cross-correlation
//!
//! [device]
//! kind = proteretic   # proteretic | hysteretic | comparator
//! M = 12              # number of levels
//! band = 0.6          # b - a of every level, in (0, 1)
//! x0 = 0              # settle input; defaults to the first signal sample
//! delta_a.5 = 0.05    # per-level threshold offsets
//! delta_b.5 = -0.05
//!
//! [signal]
//! kind = smooth_random   # ramp | triangle | pulses | smooth_random
//! lo = 0
//! hi = 12
//! max_rate = 2
//! noise = 0           # uniform noise amplitude
//! noise_seed = 1
//!
//! [output]
//! csv = out/run.csv
//! svg = out/run.svg
//! columns = t, x, y, ref
//!
//! [verify]
//! trials = 1000
//! seed = 7
//! ```
//!
//! Signal parameters by kind, with defaults:
//!
//! | kind            | keys                                                                 |
//! |-----------------|----------------------------------------------------------------------|
//! | `ramp`          | `rate = 1`, `x0 = 0`, `rates = 0.5, 1, 2, 5, 10` (sweep)            |
//! | `triangle`      | `min = 0`, `max = 1`, `period = 4`, `cycles = 1`                     |
//! | `pulses`        | `rates = 1, 2, 5`, `low = 0`, `high = 1`, `plateau = 1`, `gap = 1`   |
//! | `smooth_random` | `lo = 0`, `hi = 1`, `max_rate = 1`, `seed` (defaults to `run.seed`) |
//!
//! Keys are unique within a section and unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::network::ThresholdOverride;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviceKind {
    Proteretic,
    Hysteretic,
    Comparator,
}

impl DeviceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DeviceKind::Proteretic => "proteretic",
            DeviceKind::Hysteretic => "hysteretic",
            DeviceKind::Comparator => "comparator",
        }
    }
}

impl FromStr for DeviceKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "proteretic" => Ok(DeviceKind::Proteretic),
            "hysteretic" => Ok(DeviceKind::Hysteretic),
            "comparator" => Ok(DeviceKind::Comparator),
            _ => Err(format!(
                "unknown device kind `{s}` (proteretic | hysteretic | comparator)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SignalKind {
    Ramp { rate: f64, x0: f64 },
    Triangle { min: f64, max: f64, period: f64, cycles: usize },
    Pulses { low: f64, high: f64, plateau: f64, gap: f64 },
    SmoothRandom { lo: f64, hi: f64, max_rate: f64, seed: u64 },
}

impl SignalKind {
    pub fn name(&self) -> &'static str {
        match self {
            SignalKind::Ramp { .. } => "ramp",
            SignalKind::Triangle { .. } => "triangle",
            SignalKind::Pulses { .. } => "pulses",
            SignalKind::SmoothRandom { .. } => "smooth_random",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSection {
    pub dt: f64,
    pub duration: f64,
    pub seed: u64,
    pub max_lag: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviceSection {
    pub kind: DeviceKind,
    pub levels: usize,
    pub band: f64,
    pub x0: Option<f64>,
    pub overrides: Vec<ThresholdOverride>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalSection {
    pub kind: SignalKind,
    /// Ramp sweep rates or pulse rates, depending on `kind`.
    pub rates: Vec<f64>,
    pub noise: f64,
    pub noise_seed: u64,
}

impl SignalSection {
    /// Largest input slope the generator is declared to produce, noise
    /// excluded.
    pub fn max_rate(&self) -> f64 {
        let max_abs = |v: &[f64]| v.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
        match &self.kind {
            SignalKind::Ramp { rate, .. } => rate.abs().max(max_abs(&self.rates)),
            SignalKind::Triangle {
                min, max, period, ..
            } => 2.0 * (max - min) / period,
            SignalKind::Pulses { .. } => max_abs(&self.rates),
            SignalKind::SmoothRandom { max_rate, .. } => *max_rate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSection {
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub columns: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySection {
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub run: RunSection,
    pub device: DeviceSection,
    pub signal: SignalSection,
    pub output: OutputSection,
    pub verify: VerifySection,
}

pub const DEFAULT_SWEEP_RATES: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 10.0];
pub const DEFAULT_PULSE_RATES: [f64; 3] = [1.0, 2.0, 5.0];

/// Largest step for which a band of width `band` is never hopped by an input
/// moving at `max_rate`: `band / (4 * max_rate)`.
pub fn sampling_bound(band: f64, max_rate: f64) -> f64 {
    band / (4.0 * max_rate)
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections = parse_sections(text)?;
        let mut take = |name: &str| sections.remove(name).unwrap_or_else(|| Section::empty(name));

        let mut run = take("run");
        let run_section = RunSection {
            dt: run.get("dt")?.unwrap_or(1e-3),
            duration: run.get("duration")?.unwrap_or(10.0),
            seed: run.get("seed")?.unwrap_or(0),
            max_lag: run.get("max_lag")?.unwrap_or(2.0),
        };
        let mut device = take("device");
        let device_section = DeviceSection {
            kind: device.get("kind")?.unwrap_or(DeviceKind::Proteretic),
            levels: device.get("M")?.unwrap_or(1),
            band: device.get("band")?.unwrap_or(crate::network::DEFAULT_BAND),
            x0: device.get("x0")?,
            overrides: device.take_overrides()?,
        };
        let mut signal = take("signal");
        let signal_section = parse_signal(&mut signal, run_section.seed)?;
        let mut output = take("output");
        let output_section = OutputSection {
            csv: output.get::<String>("csv")?.map(PathBuf::from),
            svg: output.get::<String>("svg")?.map(PathBuf::from),
            columns: output.get_list::<String>("columns")?,
        };
        let mut verify = take("verify");
        let verify_section = VerifySection {
            trials: verify.get("trials")?.unwrap_or(1000),
            seed: verify.get("seed")?.unwrap_or(7),
        };
        for s in [run, device, signal, output, verify] {
            s.finish()?;
        }
        if let Some(name) = sections.keys().next() {
            let line = sections[name].line;
            return Err(Error::Syntax {
                line,
                message: format!("unknown section [{name}]"),
            });
        }

        let config = Self {
            run: run_section,
            device: device_section,
            signal: signal_section,
            output: output_section,
            verify: verify_section,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let band = self.device.band;
        if !(band > 0.0 && band < 1.0) {
            return Err(Error::config(format!(
                "band out of range: device.band = {band} must lie in (0, 1)"
            )));
        }
        if self.device.levels == 0 {
            return Err(Error::config("device.M must be at least 1"));
        }
        let dt = self.run.dt;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::config(format!("run.dt must be positive, got {dt}")));
        }
        if !(self.run.duration >= dt) {
            return Err(Error::config(format!(
                "run.duration ({}) must be at least run.dt ({dt})",
                self.run.duration
            )));
        }
        if !(self.run.max_lag >= 0.0) {
            return Err(Error::config("run.max_lag must be non-negative"));
        }
        if !(self.signal.noise >= 0.0 && self.signal.noise.is_finite()) {
            return Err(Error::config("signal.noise must be non-negative"));
        }
        if self.verify.trials == 0 {
            return Err(Error::config("verify.trials must be at least 1"));
        }
        self.check_sampling(self.signal.max_rate())?;
        if let (Some(csv), Some(svg)) = (&self.output.csv, &self.output.svg) {
            if csv == svg {
                return Err(Error::config(format!(
                    "output.csv and output.svg both point at {}",
                    csv.display()
                )));
            }
        }
        Ok(())
    }

    /// Enforces `dt <= band / (4 * max_rate)`.
    pub fn check_sampling(&self, max_rate: f64) -> Result<()> {
        if max_rate <= 0.0 {
            return Ok(());
        }
        let bound = sampling_bound(self.device.band, max_rate);
        if self.run.dt > bound {
            return Err(Error::config(format!(
                "run.dt = {} is too coarse: band {} at max rate {} requires dt <= {}",
                self.run.dt, self.device.band, max_rate, bound
            )));
        }
        Ok(())
    }
}

/// Configuration of the equivalence campaign, which has no device or signal.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub verify: VerifySection,
    pub csv: Option<PathBuf>,
}

impl VerifyConfig {
    /// Accepts only `[verify]` (trials, seed) and `[output]` (csv).
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections = parse_sections(text)?;
        let mut verify = sections.remove("verify").unwrap_or_else(|| Section::empty("verify"));
        let mut output = sections.remove("output").unwrap_or_else(|| Section::empty("output"));
        let config = Self {
            verify: VerifySection {
                trials: verify.get("trials")?.unwrap_or(1000),
                seed: verify.get("seed")?.unwrap_or(7),
            },
            csv: output.get::<String>("csv")?.map(PathBuf::from),
        };
        verify.finish()?;
        output.finish()?;
        if let Some((name, section)) = sections.iter().next() {
            return Err(Error::Syntax {
                line: section.line,
                message: format!("section [{name}] is not used by verify"),
            });
        }
        if config.verify.trials == 0 {
            return Err(Error::config("verify.trials must be at least 1"));
        }
        Ok(config)
    }
}

fn parse_signal(section: &mut Section, default_seed: u64) -> Result<SignalSection> {
    let kind_name: String = section
        .get("kind")?
        .ok_or_else(|| Error::config("signal.kind is required"))?;
    let mut rates_default: &[f64] = &[];
    let kind = match kind_name.as_str() {
        "ramp" => {
            rates_default = &DEFAULT_SWEEP_RATES;
            SignalKind::Ramp {
                rate: section.get("rate")?.unwrap_or(1.0),
                x0: section.get("x0")?.unwrap_or(0.0),
            }
        }
        "triangle" => SignalKind::Triangle {
            min: section.get("min")?.unwrap_or(0.0),
            max: section.get("max")?.unwrap_or(1.0),
            period: section.get("period")?.unwrap_or(4.0),
            cycles: section.get("cycles")?.unwrap_or(1),
        },
        "pulses" => {
            rates_default = &DEFAULT_PULSE_RATES;
            SignalKind::Pulses {
                low: section.get("low")?.unwrap_or(0.0),
                high: section.get("high")?.unwrap_or(1.0),
                plateau: section.get("plateau")?.unwrap_or(1.0),
                gap: section.get("gap")?.unwrap_or(1.0),
            }
        }
        "smooth_random" => SignalKind::SmoothRandom {
            lo: section.get("lo")?.unwrap_or(0.0),
            hi: section.get("hi")?.unwrap_or(1.0),
            max_rate: section.get("max_rate")?.unwrap_or(1.0),
            seed: section.get("seed")?.unwrap_or(default_seed),
        },
        other => {
            return Err(Error::config(format!(
                "unknown signal.kind `{other}` (ramp | triangle | pulses | smooth_random)"
            )))
        }
    };
    let rates = if rates_default.is_empty() {
        Vec::new()
    } else {
        section
            .get_list("rates")?
            .unwrap_or_else(|| rates_default.to_vec())
    };
    Ok(SignalSection {
        kind,
        rates,
        noise: section.get("noise")?.unwrap_or(0.0),
        noise_seed: section.get("noise_seed")?.unwrap_or(1),
    })
}

#[derive(Debug)]
struct Entry {
    value: String,
    line: usize,
}

#[derive(Debug)]
struct Section {
    name: String,
    line: usize,
    entries: BTreeMap<String, Entry>,
}

impl Section {
    fn empty(name: &str) -> Self {
        Self {
            name: name.to_owned(),
            line: 0,
            entries: BTreeMap::new(),
        }
    }

    fn bad_value(&self, key: &str, entry: &Entry, why: impl std::fmt::Display) -> Error {
        Error::Syntax {
            line: entry.line,
            message: format!("{}.{key}: {why}", self.name),
        }
    }

    fn get<T: FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(entry) => entry
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|e| self.bad_value(key, &entry, format!("`{}`: {e}", entry.value))),
        }
    }

    fn get_list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(entry) => entry
                .value
                .split(',')
                .map(|item| {
                    item.trim()
                        .parse::<T>()
                        .map_err(|e| self.bad_value(key, &entry, format!("`{}`: {e}", item.trim())))
                })
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    /// Collects `delta_a.M` / `delta_b.M` keys.
    fn take_overrides(&mut self) -> Result<Vec<ThresholdOverride>> {
        let keys: Vec<String> = self
            .entries
            .keys()
            .filter(|k| k.starts_with("delta_a.") || k.starts_with("delta_b."))
            .cloned()
            .collect();
        let mut by_level: BTreeMap<usize, ThresholdOverride> = BTreeMap::new();
        for key in keys {
            let (which, level) = key.split_once('.').expect("filtered on '.'");
            let entry = &self.entries[&key];
            let level: usize = level
                .parse()
                .map_err(|e| self.bad_value(&key, entry, format!("bad level: {e}")))?;
            let value: f64 = self.get(&key)?.expect("key present");
            let o = by_level.entry(level).or_insert(ThresholdOverride {
                level,
                delta_a: 0.0,
                delta_b: 0.0,
            });
            if which == "delta_a" {
                o.delta_a = value;
            } else {
                o.delta_b = value;
            }
        }
        Ok(by_level.into_values().collect())
    }

    fn finish(self) -> Result<()> {
        match self.entries.iter().min_by_key(|(_, e)| e.line) {
            None => Ok(()),
            Some((key, entry)) => Err(Error::Syntax {
                line: entry.line,
                message: format!("unknown key `{key}` in [{}]", self.name),
            }),
        }
    }
}

fn parse_sections(text: &str) -> Result<BTreeMap<String, Section>> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let syntax = |message: String| Error::Syntax {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| syntax(format!("unterminated section header `{line}`")))?
                .trim();
            if name.is_empty() {
                return Err(syntax("empty section name".into()));
            }
            if sections.contains_key(name) {
                return Err(syntax(format!("duplicate section [{name}]")));
            }
            sections.insert(
                name.to_owned(),
                Section {
                    name: name.to_owned(),
                    line: line_no,
                    entries: BTreeMap::new(),
                },
            );
            current = Some(name.to_owned());
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| syntax(format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(syntax("missing key".into()));
        }
        if value.is_empty() {
            return Err(syntax(format!("missing value for `{key}`")));
        }
        let section = current
            .as_ref()
            .and_then(|name| sections.get_mut(name))
            .ok_or_else(|| syntax(format!("`{key}` appears before any [section]")))?;
        if section.entries.contains_key(key) {
            return Err(syntax(format!("duplicate key `{key}` in [{}]", section.name)));
        }
        section.entries.insert(
            key.to_owned(),
            Entry {
                value: value.to_owned(),
                line: line_no,
            },
        );
    }
    Ok(sections)
}
