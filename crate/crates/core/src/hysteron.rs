//! The elementary bi-stable relay (non-ideal relay / Schmitt trigger).
//!
//! Both polarities share one update rule: a strict crossing of the set
//! threshold drives the output to 1, a strict crossing of the reset
//! threshold drives it to 0, and anything else (including equality with a
//! threshold) retains the previous output.
//!
//! ```text
//!  noninverting              inverting
//!  y                         y
//!  1 ┤    ┌──<──┬───         1 ┼───┬──>──┐
//!    │    ↓     ↑              │   ↑     ↓
//!  0 ┼────┴──>──┘            0 ┤   └──<──┴────
//!       reset  set  x              set  reset  x
//! ```

use std::fmt;

use crate::error::{check_finite, Error, Result};
use crate::signals::Signal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Output 1 above the set threshold, 0 below the reset threshold.
    NonInverting,
    /// Output 1 below the set threshold, 0 above the reset threshold.
    Inverting,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarity::NonInverting => f.write_str("noninverting"),
            Polarity::Inverting => f.write_str("inverting"),
        }
    }
}

/// Thresholds and polarity of a relay. Construct with [`RelaySpec::new`],
/// which enforces the ordering required by the polarity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaySpec {
    polarity: Polarity,
    set_threshold: f64,
    reset_threshold: f64,
}

impl RelaySpec {
    pub fn new(polarity: Polarity, set_threshold: f64, reset_threshold: f64) -> Result<Self> {
        let order_err = |constraint| Error::ThresholdOrder {
            polarity,
            set: set_threshold,
            reset: reset_threshold,
            constraint,
        };
        if !set_threshold.is_finite() || !reset_threshold.is_finite() {
            return Err(order_err("finite thresholds"));
        }
        match polarity {
            Polarity::NonInverting if set_threshold < reset_threshold => {
                Err(order_err("set_threshold >= reset_threshold"))
            }
            Polarity::Inverting if set_threshold > reset_threshold => {
                Err(order_err("set_threshold <= reset_threshold"))
            }
            _ => Ok(Self {
                polarity,
                set_threshold,
                reset_threshold,
            }),
        }
    }

    pub fn noninverting(set_threshold: f64, reset_threshold: f64) -> Result<Self> {
        Self::new(Polarity::NonInverting, set_threshold, reset_threshold)
    }

    pub fn inverting(set_threshold: f64, reset_threshold: f64) -> Result<Self> {
        Self::new(Polarity::Inverting, set_threshold, reset_threshold)
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn set_threshold(&self) -> f64 {
        self.set_threshold
    }

    pub fn reset_threshold(&self) -> f64 {
        self.reset_threshold
    }

    /// The output forced by `x`, or `None` when `x` lies in the retention band
    /// (thresholds included).
    #[inline]
    pub fn forced_output(&self, x: f64) -> Option<bool> {
        match self.polarity {
            Polarity::NonInverting => {
                if x > self.set_threshold {
                    Some(true)
                } else if x < self.reset_threshold {
                    Some(false)
                } else {
                    None
                }
            }
            Polarity::Inverting => {
                if x < self.set_threshold {
                    Some(true)
                } else if x > self.reset_threshold {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelayUnit {
    spec: RelaySpec,
    output: bool,
}

impl RelayUnit {
    pub fn new(spec: RelaySpec, initial_output: bool) -> Self {
        Self {
            spec,
            output: initial_output,
        }
    }

    /// Starts the relay in the state that holding `x0` forever would force.
    /// Inside the retention band the state is ambiguous and `in_band_default`
    /// is used.
    pub fn init_from_input(spec: RelaySpec, x0: f64, in_band_default: bool) -> Result<Self> {
        check_finite(0, x0)?;
        let output = spec.forced_output(x0).unwrap_or(in_band_default);
        Ok(Self { spec, output })
    }

    pub fn spec(&self) -> &RelaySpec {
        &self.spec
    }

    pub fn output(&self) -> bool {
        self.output
    }

    /// Applies one input sample and returns the new output.
    pub fn step(&mut self, x: f64) -> Result<bool> {
        check_finite(0, x)?;
        Ok(self.step_unchecked(x))
    }

    #[inline]
    pub(crate) fn step_unchecked(&mut self, x: f64) -> bool {
        if let Some(forced) = self.spec.forced_output(x) {
            self.output = forced;
        }
        self.output
    }

    /// Folds [`step`](Self::step) over `samples`.
    pub fn run_samples(&mut self, samples: &[f64]) -> Result<Vec<bool>> {
        if samples.is_empty() {
            return Err(Error::input("cannot run a relay on an empty signal"));
        }
        samples
            .iter()
            .enumerate()
            .map(|(i, &x)| check_finite(i, x).map(|x| self.step_unchecked(x)))
            .collect()
    }

    pub fn run(&mut self, signal: &Signal) -> Result<Vec<bool>> {
        self.run_samples(signal.samples())
    }
}
