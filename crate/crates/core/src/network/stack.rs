use crate::analysis::reference_quantize;
use crate::error::{check_finite, Error, Result};
use crate::hysteron::{RelaySpec, RelayUnit};
use crate::signals::Signal;

use super::cell::ProtereticCell;

/// Band width of the default parameterisation `a = m - 0.8`, `b = m - 0.2`.
pub const DEFAULT_BAND: f64 = 0.6;

/// Any device mapping a sample to an integer level in `0..=levels()`.
pub trait Quantizer {
    fn levels(&self) -> usize;

    fn step(&mut self, x: f64) -> Result<usize>;

    fn run_samples(&mut self, samples: &[f64]) -> Result<Vec<usize>> {
        if samples.is_empty() {
            return Err(Error::input("cannot run on an empty signal"));
        }
        samples
            .iter()
            .enumerate()
            .map(|(i, &x)| check_finite(i, x).and_then(|x| self.step(x)))
            .collect()
    }

    fn run(&mut self, signal: &Signal) -> Result<Vec<usize>> {
        self.run_samples(signal.samples())
    }
}

/// Per-level adjustment of the default thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdOverride {
    /// 1-based level index.
    pub level: usize,
    pub delta_a: f64,
    pub delta_b: f64,
}

fn centred_band(level: usize, band: f64) -> (f64, f64) {
    let centre = level as f64 - 0.5;
    (centre - band / 2.0, centre + band / 2.0)
}

fn check_levels(levels: usize) -> Result<()> {
    if levels == 0 {
        return Err(Error::config("a stack needs at least one level (M >= 1)"));
    }
    Ok(())
}

fn apply_overrides(
    levels: usize,
    band: f64,
    overrides: &[ThresholdOverride],
) -> Result<Vec<(f64, f64)>> {
    let mut bands: Vec<(f64, f64)> = (1..=levels).map(|m| centred_band(m, band)).collect();
    for o in overrides {
        if o.level == 0 || o.level > levels {
            return Err(Error::config(format!(
                "override for level {} outside 1..={levels}",
                o.level
            )));
        }
        let (a, b) = &mut bands[o.level - 1];
        *a += o.delta_a;
        *b += o.delta_b;
    }
    for (i, w) in bands.windows(2).enumerate() {
        if !(w[0].0 < w[1].0 && w[0].1 < w[1].1) {
            return Err(Error::config(format!(
                "thresholds of level {} do not increase over level {}",
                i + 2,
                i + 1
            )));
        }
    }
    Ok(bands)
}

/// `M` proteretic cells sharing one input, outputs summed.
///
/// Cell `m` (1-based) spans `(m - 0.5 - band/2, m - 0.5 + band/2)`, which for
/// the default band gives `a = m - 0.8` and `b = m - 0.2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultinaryStack {
    cells: Vec<ProtereticCell>,
}

impl MultinaryStack {
    /// Default band, no overrides, settled at `x0 = 0`.
    pub fn new(levels: usize) -> Result<Self> {
        Self::with_config(levels, DEFAULT_BAND, &[], 0.0)
    }

    pub fn with_config(
        levels: usize,
        band: f64,
        overrides: &[ThresholdOverride],
        x0: f64,
    ) -> Result<Self> {
        check_levels(levels)?;
        let bands = apply_overrides(levels, band, overrides)?;
        let cells = bands
            .into_iter()
            .enumerate()
            .map(|(i, (a, b))| {
                ProtereticCell::new(a, b, x0).map_err(|e| match e {
                    Error::Config(msg) => Error::Config(format!("level {}: {msg}", i + 1)),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { cells })
    }

    pub fn cells(&self) -> &[ProtereticCell] {
        &self.cells
    }

    /// 1-based access, matching level numbering.
    pub fn cell(&self, level: usize) -> Option<&ProtereticCell> {
        level.checked_sub(1).and_then(|i| self.cells.get(i))
    }

    pub fn output(&self) -> usize {
        self.cells.iter().filter(|c| c.output()).count()
    }

    fn narrowest_band(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| c.b() - c.a())
            .fold(f64::INFINITY, f64::min)
    }
}

impl Quantizer for MultinaryStack {
    fn levels(&self) -> usize {
        self.cells.len()
    }

    fn step(&mut self, x: f64) -> Result<usize> {
        check_finite(0, x)?;
        Ok(self
            .cells
            .iter_mut()
            .map(|c| usize::from(c.step_unchecked(x)))
            .sum())
    }

    fn run(&mut self, signal: &Signal) -> Result<Vec<usize>> {
        super::warn_if_undersampled(signal.samples(), self.narrowest_band(), "proteretic stack");
        self.run_samples(signal.samples())
    }
}

/// The conventional counterclockwise counterpart: level `m` is one
/// noninverting relay with set `m - 0.5 + band/2` and reset `m - 0.5 - band/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HystereticStack {
    relays: Vec<RelayUnit>,
}

impl HystereticStack {
    pub fn new(levels: usize) -> Result<Self> {
        Self::with_config(levels, DEFAULT_BAND, &[], 0.0)
    }

    /// Overrides shift the reset (`delta_a`) and set (`delta_b`) thresholds.
    pub fn with_config(
        levels: usize,
        band: f64,
        overrides: &[ThresholdOverride],
        x0: f64,
    ) -> Result<Self> {
        check_levels(levels)?;
        let relays = apply_overrides(levels, band, overrides)?
            .into_iter()
            .enumerate()
            .map(|(i, (lo, hi))| {
                RelaySpec::noninverting(hi, lo)
                    .and_then(|spec| RelayUnit::init_from_input(spec, x0, false))
                    .map_err(|e| Error::Config(format!("level {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { relays })
    }

    pub fn relays(&self) -> &[RelayUnit] {
        &self.relays
    }

    pub fn output(&self) -> usize {
        self.relays.iter().filter(|r| r.output()).count()
    }
}

impl Quantizer for HystereticStack {
    fn levels(&self) -> usize {
        self.relays.len()
    }

    fn step(&mut self, x: f64) -> Result<usize> {
        check_finite(0, x)?;
        Ok(self
            .relays
            .iter_mut()
            .map(|r| usize::from(r.step_unchecked(x)))
            .sum())
    }
}

/// Memoryless mid-band comparator, see [`reference_quantize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparator {
    levels: usize,
}

impl Comparator {
    pub fn new(levels: usize) -> Result<Self> {
        check_levels(levels)?;
        Ok(Self { levels })
    }
}

impl Quantizer for Comparator {
    fn levels(&self) -> usize {
        self.levels
    }

    fn step(&mut self, x: f64) -> Result<usize> {
        check_finite(0, x)?;
        Ok(reference_quantize(x, self.levels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_dodecanary_thresholds() {
        let s = MultinaryStack::new(12).unwrap();
        assert_eq!(s.levels(), 12);
        let c5 = s.cell(5).unwrap();
        assert_relative_eq!(c5.a(), 4.2, epsilon = 1e-12);
        assert_relative_eq!(c5.b(), 4.8, epsilon = 1e-12);
        assert_eq!(s.output(), 0);
    }

    #[test]
    fn binary_case() {
        let s = MultinaryStack::new(1).unwrap();
        assert_relative_eq!(s.cell(1).unwrap().a(), 0.2, epsilon = 1e-12);
        assert_relative_eq!(s.cell(1).unwrap().b(), 0.8, epsilon = 1e-12);
        assert!(s.cell(0).is_none());
    }

    #[test]
    fn zero_levels_rejected() {
        assert!(MultinaryStack::new(0).is_err());
        assert!(HystereticStack::new(0).is_err());
        assert!(Comparator::new(0).is_err());
    }

    #[test]
    fn overrides_apply_and_are_validated() {
        let o = ThresholdOverride {
            level: 3,
            delta_a: 0.1,
            delta_b: -0.1,
        };
        let s = MultinaryStack::with_config(4, DEFAULT_BAND, &[o], 0.0).unwrap();
        assert_relative_eq!(s.cell(3).unwrap().a(), 2.3, epsilon = 1e-12);
        assert_relative_eq!(s.cell(3).unwrap().b(), 2.7, epsilon = 1e-12);

        let collapse = ThresholdOverride {
            level: 2,
            delta_a: 0.7,
            delta_b: 0.0,
        };
        let err = MultinaryStack::with_config(4, DEFAULT_BAND, &[collapse], 0.0).unwrap_err();
        assert!(err.to_string().contains("level 2"), "{err}");

        let out_of_range = ThresholdOverride {
            level: 5,
            delta_a: 0.0,
            delta_b: 0.0,
        };
        assert!(MultinaryStack::with_config(4, DEFAULT_BAND, &[out_of_range], 0.0).is_err());
        assert!(MultinaryStack::with_config(2, 1.0, &[], 0.0).is_err());
    }

    #[test]
    fn held_at_zero_stays_zero() {
        let mut p = MultinaryStack::new(12).unwrap();
        let mut h = HystereticStack::new(12).unwrap();
        for _ in 0..100 {
            assert_eq!(p.step(0.0).unwrap(), 0);
            assert_eq!(h.step(0.0).unwrap(), 0);
        }
    }

    #[test]
    fn ramp_crosses_level_five_early() {
        let mut p = MultinaryStack::with_config(12, DEFAULT_BAND, &[], 4.0).unwrap();
        assert_eq!(p.output(), 4);
        let xs: Vec<f64> = (0..=600).map(|i| 4.0 + i as f64 * 1e-3).collect();
        let ys = p.run_samples(&xs).unwrap();
        let first5 = ys.iter().position(|&y| y == 5).unwrap();
        assert!(xs[first5] > 4.2 && xs[first5 - 1] <= 4.2);
        assert_eq!(ys[first5 - 1], 4);
    }

    #[test]
    fn hysteretic_ramp_crosses_late() {
        let mut h = HystereticStack::new(12).unwrap();
        let xs: Vec<f64> = (0..=2000).map(|i| i as f64 * 1e-3).collect();
        let ys = h.run_samples(&xs).unwrap();
        let first1 = ys.iter().position(|&y| y == 1).unwrap();
        assert!(xs[first1] > 0.8 && xs[first1 - 1] <= 0.8 + 1e-12);
        let first2 = ys.iter().position(|&y| y == 2).unwrap();
        assert!(xs[first2] > 1.8 && xs[first2 - 1] <= 1.8 + 1e-12);
    }

    #[test]
    fn settles_from_top() {
        let p = MultinaryStack::with_config(12, DEFAULT_BAND, &[], 12.5).unwrap();
        assert_eq!(p.output(), 12);
        let h = HystereticStack::with_config(12, DEFAULT_BAND, &[], 12.5).unwrap();
        assert_eq!(h.output(), 12);
    }

    #[test]
    fn comparator_levels() {
        let mut c = Comparator::new(12).unwrap();
        assert_eq!(c.step(4.49).unwrap(), 4);
        assert_eq!(c.step(4.5).unwrap(), 5);
        assert_eq!(c.step(99.0).unwrap(), 12);
    }
}
