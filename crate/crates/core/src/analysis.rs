//! Measurements on simulated level sequences.

use crate::error::{Error, Result};
use crate::signals::Signal;

/// Memoryless mid-band quantiser: the number of thresholds `m - 0.5`
/// (`m = 1..=levels`) at or below `x`. Equivalent to rounding half up and
/// clamping to `0..=levels`.
pub fn reference_quantize(x: f64, levels: usize) -> usize {
    // Threshold comparison instead of `floor(x + 0.5)`, which can round
    // `m - 0.5 - ulp` up to the next level.
    let guess = (x + 0.5).floor().clamp(0.0, levels as f64) as usize;
    if guess > 0 && x < guess as f64 - 0.5 {
        guess - 1
    } else {
        guess
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub index: usize,
    pub time: f64,
    pub from_level: usize,
    pub to_level: usize,
}

impl Transition {
    pub fn is_rising(&self) -> bool {
        self.to_level > self.from_level
    }
}

pub fn extract_transitions(levels: &[usize], t0: f64, dt: f64) -> Vec<Transition> {
    levels
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] != w[1])
        .map(|(i, w)| Transition {
            index: i + 1,
            time: t0 + (i + 1) as f64 * dt,
            from_level: w[0],
            to_level: w[1],
        })
        .collect()
}

pub fn transition_count(levels: &[usize]) -> usize {
    levels.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Lead of a band `(a, b)` over its mid-band comparator for an input moving
/// at `rate`: `(b - a) / (2 |rate|)`.
pub fn predicted_lead(a: f64, b: f64, rate: f64) -> Result<f64> {
    if rate == 0.0 {
        return Err(Error::UndefinedLead);
    }
    if !(b >= a) {
        return Err(Error::config(format!("band needs b >= a, got a={a} b={b}")));
    }
    Ok((b - a) / (2.0 * rate.abs()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeadPair {
    pub device: Transition,
    pub reference: Transition,
    /// `t_reference - t_device`; positive when the device switches first.
    pub lead: f64,
    /// Central-difference input slope at the reference crossing.
    pub rate: f64,
    /// `band / (2 |rate|)`, absent for a flat input.
    pub predicted: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LeadReport {
    pub pairs: Vec<LeadPair>,
    pub unmatched_device: Vec<Transition>,
    pub unmatched_reference: Vec<Transition>,
}

impl LeadReport {
    pub fn leads(&self) -> impl Iterator<Item = f64> + '_ {
        self.pairs.iter().map(|p| p.lead)
    }

    /// Largest `|lead - predicted|` over pairs with a prediction.
    pub fn max_abs_deviation(&self) -> Option<f64> {
        self.pairs
            .iter()
            .filter_map(|p| p.predicted.map(|pred| (p.lead - pred).abs()))
            .reduce(f64::max)
    }

    pub fn is_fully_matched(&self) -> bool {
        self.unmatched_device.is_empty() && self.unmatched_reference.is_empty()
    }
}

/// Pairs device and reference transitions with equal `(from, to)` levels,
/// greedily and in order. Leftovers are reported rather than dropped.
pub fn measure_leads(
    device: &[Transition],
    reference: &[Transition],
    input: &Signal,
    band: f64,
) -> LeadReport {
    let mut report = LeadReport::default();
    let mut cursor = 0;
    for d in device {
        let found = reference[cursor..]
            .iter()
            .position(|r| r.from_level == d.from_level && r.to_level == d.to_level);
        match found {
            Some(offset) => {
                report
                    .unmatched_reference
                    .extend_from_slice(&reference[cursor..cursor + offset]);
                let r = reference[cursor + offset];
                cursor += offset + 1;
                let rate = slope_at(input, r.index);
                report.pairs.push(LeadPair {
                    device: *d,
                    reference: r,
                    lead: r.time - d.time,
                    rate,
                    predicted: (rate != 0.0).then(|| band / (2.0 * rate.abs())),
                });
            }
            None => report.unmatched_device.push(*d),
        }
    }
    report
        .unmatched_reference
        .extend_from_slice(&reference[cursor..]);
    report
}

fn slope_at(signal: &Signal, index: usize) -> f64 {
    let xs = signal.samples();
    let last = xs.len().saturating_sub(1);
    if last == 0 {
        return 0.0;
    }
    let lo = index.saturating_sub(1).min(last);
    let hi = (index + 1).min(last);
    let (lo, hi) = if lo == hi { (last - 1, last) } else { (lo, hi) };
    (xs[hi] - xs[lo]) / ((hi - lo) as f64 * signal.dt())
}

/// Lag (in samples) at which `y` best matches `y_ref`, positive when `y`
/// leads. See [`delay_by_xcorr`].
pub fn xcorr_lag(y: &[usize], y_ref: &[usize], max_lag: usize) -> Result<isize> {
    let n = y.len();
    if n != y_ref.len() {
        return Err(Error::input(format!(
            "series lengths differ: {} vs {}",
            n,
            y_ref.len()
        )));
    }
    if n < 2 || 2 * max_lag >= n {
        return Err(Error::input(format!(
            "max_lag {max_lag} must be below half the series length {n}"
        )));
    }
    let constant = |s: &[usize]| s.iter().all(|&v| v == s[0]);
    if constant(y) || constant(y_ref) {
        return Err(Error::NoEstimate("constant series".into()));
    }

    let prefix = |s: &[usize]| -> (Vec<f64>, Vec<f64>) {
        let mut sum = Vec::with_capacity(n + 1);
        let mut sq = Vec::with_capacity(n + 1);
        let (mut a, mut b) = (0.0, 0.0);
        sum.push(0.0);
        sq.push(0.0);
        for &v in s {
            let v = v as f64;
            a += v;
            b += v * v;
            sum.push(a);
            sq.push(b);
        }
        (sum, sq)
    };
    let (ys, yq) = prefix(y);
    let (rs, rq) = prefix(y_ref);

    // Pearson correlation of y[i] against y_ref[i + k] over the overlap.
    let corr = |k: isize| -> Option<f64> {
        let (y0, r0) = if k >= 0 { (0, k as usize) } else { ((-k) as usize, 0) };
        let len = n - k.unsigned_abs();
        let cross: f64 = y[y0..y0 + len]
            .iter()
            .zip(&y_ref[r0..r0 + len])
            .map(|(&a, &b)| (a * b) as f64)
            .sum();
        let m = len as f64;
        let (sy, sr) = (ys[y0 + len] - ys[y0], rs[r0 + len] - rs[r0]);
        let vy = (yq[y0 + len] - yq[y0]) - sy * sy / m;
        let vr = (rq[r0 + len] - rq[r0]) - sr * sr / m;
        (vy > 0.0 && vr > 0.0).then(|| (cross - sy * sr / m) / (vy * vr).sqrt())
    };

    let mut best: Option<(isize, f64)> = None;
    let lags = std::iter::once(0).chain((1..=max_lag as isize).flat_map(|k| [k, -k]));
    for k in lags {
        if let Some(c) = corr(k) {
            if best.is_none_or(|(_, b)| c > b) {
                best = Some((k, c));
            }
        }
    }
    best.map(|(k, _)| k)
        .ok_or_else(|| Error::NoEstimate("no lag with non-constant overlap".into()))
}

/// Delay of `y_ref` behind `y` in seconds (`lag * dt`), found by maximising
/// the normalised cross-correlation over lags in `[-max_lag, max_lag]`.
/// Ties go to the smallest `|lag|`.
pub fn delay_by_xcorr(y: &[usize], y_ref: &[usize], max_lag: usize, dt: f64) -> Result<f64> {
    Ok(xcorr_lag(y, y_ref, max_lag)? as f64 * dt)
}

/// Trapezoidal `∮ y dx` over the first `period` samples, indices wrapping
/// around. Positive for a clockwise loop in the (x, y) plane.
pub fn orbit_signed_area(x: &[f64], y: &[f64], period: usize) -> Result<f64> {
    if period < 3 || x.len() < period || y.len() < period {
        return Err(Error::input(format!(
            "orbit needs a full period of {period} samples (>= 3), got x={} y={}",
            x.len(),
            y.len()
        )));
    }
    let area = (0..period)
        .map(|i| {
            let next = x[(i + 1) % period];
            let prev = x[(i + period - 1) % period];
            y[i] * (next - prev)
        })
        .sum::<f64>();
    Ok(area / 2.0)
}

/// Orientation of a transfer-function loop from its signed area.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
    Degenerate,
}

impl Orientation {
    pub fn classify(area: f64, tolerance: f64) -> Self {
        if area > tolerance {
            Orientation::Clockwise
        } else if area < -tolerance {
            Orientation::CounterClockwise
        } else {
            Orientation::Degenerate
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Orientation::Clockwise => "clockwise",
            Orientation::CounterClockwise => "counterclockwise",
            Orientation::Degenerate => "degenerate",
        }
    }
}
