use crate::error::{check_finite, Error, Result};
use crate::hysteron::{RelaySpec, RelayUnit};
use crate::signals::Signal;

/// Outputs of the two relays inside a [`ProtereticCell`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellState {
    pub a: bool,
    pub b: bool,
}

impl CellState {
    pub const fn new(a: bool, b: bool) -> Self {
        Self { a, b }
    }
}

/// Order in which the two relays see a sample. Only `Feedforward` is a
/// faithful model; `Reversed` exists to show that the order matters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalOrder {
    #[default]
    Feedforward,
    Reversed,
}

/// Two relays and a feedforward adder producing a clockwise loop with
/// on-threshold `a` and off-threshold `b`.
///
/// ```text
///            ┌──────────────────────┐
///   x ──┬───►│ A: inverting (a, b)  ├──┐ y_A
///       │    └──────────────────────┘  ▼
///       └─────────────────────────────►(+)── u = x + y_A ──► B: noninverting
///                                                            set 1+a, reset b ──► y
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ProtereticCell {
    a: f64,
    b: f64,
    relay_a: RelayUnit,
    relay_b: RelayUnit,
}

fn check_band(a: f64, b: f64) -> Result<()> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::config(format!(
            "cell thresholds must be finite, got a={a} b={b}"
        )));
    }
    if !(a < b) {
        return Err(Error::config(format!(
            "cell band is empty: a={a} must be below b={b}"
        )));
    }
    if !(b - a < 1.0) {
        return Err(Error::config(format!(
            "cell band too wide: b - a = {} must be below 1 so that 1 + a > b",
            b - a
        )));
    }
    Ok(())
}

fn relay_specs(a: f64, b: f64) -> Result<(RelaySpec, RelaySpec)> {
    check_band(a, b)?;
    Ok((
        RelaySpec::inverting(a, b)?,
        RelaySpec::noninverting(1.0 + a, b)?,
    ))
}

impl ProtereticCell {
    /// Builds a cell settled at input `x0`. Where `x0` does not force a relay,
    /// it takes the state reached by a rise from below the band: A on, and B
    /// on exactly when `x0 > a`.
    pub fn new(a: f64, b: f64, x0: f64) -> Result<Self> {
        let (spec_a, spec_b) = relay_specs(a, b)?;
        let relay_a = RelayUnit::init_from_input(spec_a, x0, true)?;
        let u0 = x0 + f64::from(u8::from(relay_a.output()));
        // u0 sits in B's band for x0 in (b, 1 + a]; the rise already switched it on
        let relay_b = RelayUnit::init_from_input(spec_b, u0, x0 > a)?;
        Ok(Self {
            a,
            b,
            relay_a,
            relay_b,
        })
    }

    pub fn with_state(a: f64, b: f64, state: CellState) -> Result<Self> {
        let (spec_a, spec_b) = relay_specs(a, b)?;
        Ok(Self {
            a,
            b,
            relay_a: RelayUnit::new(spec_a, state.a),
            relay_b: RelayUnit::new(spec_b, state.b),
        })
    }

    /// Composite on-threshold.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Composite off-threshold.
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn relay_a(&self) -> &RelayUnit {
        &self.relay_a
    }

    pub fn relay_b(&self) -> &RelayUnit {
        &self.relay_b
    }

    pub fn state(&self) -> CellState {
        CellState::new(self.relay_a.output(), self.relay_b.output())
    }

    pub fn output(&self) -> bool {
        self.relay_b.output()
    }

    pub fn step(&mut self, x: f64) -> Result<bool> {
        check_finite(0, x)?;
        Ok(self.step_unchecked(x))
    }

    #[inline]
    pub(crate) fn step_unchecked(&mut self, x: f64) -> bool {
        let y_a = self.relay_a.step_unchecked(x);
        self.relay_b.step_unchecked(x + f64::from(u8::from(y_a)))
    }

    pub fn step_with_order(&mut self, x: f64, order: EvalOrder) -> Result<bool> {
        check_finite(0, x)?;
        Ok(match order {
            EvalOrder::Feedforward => self.step_unchecked(x),
            EvalOrder::Reversed => {
                let stale = f64::from(u8::from(self.relay_a.output()));
                let y = self.relay_b.step_unchecked(x + stale);
                self.relay_a.step_unchecked(x);
                y
            }
        })
    }

    pub fn run_samples(&mut self, samples: &[f64]) -> Result<Vec<bool>> {
        if samples.is_empty() {
            return Err(Error::input("cannot run a cell on an empty signal"));
        }
        samples
            .iter()
            .enumerate()
            .map(|(i, &x)| check_finite(i, x).map(|x| self.step_unchecked(x)))
            .collect()
    }

    pub fn run(&mut self, signal: &Signal) -> Result<Vec<bool>> {
        super::warn_if_undersampled(signal.samples(), self.b - self.a, "proteretic cell");
        self.run_samples(signal.samples())
    }
}

/// Closed-form transition function of the cell, written out independently
/// of [`RelayUnit`]. Returns the next state and the output.
pub fn reference_step(state: CellState, a: f64, b: f64, x: f64) -> Result<(CellState, bool)> {
    check_band(a, b)?;
    check_finite(0, x)?;
    let next_a = if x < a {
        true
    } else if x > b {
        false
    } else {
        state.a
    };
    let u = if next_a { x + 1.0 } else { x };
    let next_b = if u > 1.0 + a {
        true
    } else if u < b {
        false
    } else {
        state.b
    };
    Ok((CellState::new(next_a, next_b), next_b))
}
