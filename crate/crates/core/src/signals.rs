//! Uniformly sampled input signals and the seeded generators used by the
//! experiments. Every generator is a pure function of its arguments.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_finite, Error, Result};

/// Number of sinusoids summed by [`smooth_random`].
pub const SMOOTH_RANDOM_TONES: usize = 8;

/// How a [`Signal`] was produced.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SignalMeta {
    pub kind: String,
    pub params: Vec<(String, f64)>,
    pub seed: Option<u64>,
    /// `(amplitude, seed)` of the noise added by [`add_noise`], if any.
    pub noise: Option<(f64, u64)>,
}

impl SignalMeta {
    fn new(kind: &str, params: &[(&str, f64)], seed: Option<u64>) -> Self {
        Self {
            kind: kind.to_owned(),
            params: params.iter().map(|&(k, v)| (k.to_owned(), v)).collect(),
            seed,
            noise: None,
        }
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    t0: f64,
    dt: f64,
    samples: Vec<f64>,
    meta: SignalMeta,
}

impl Signal {
    pub fn new(t0: f64, dt: f64, samples: Vec<f64>, meta: SignalMeta) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::config(format!("dt must be positive, got {dt}")));
        }
        if !t0.is_finite() {
            return Err(Error::config(format!("t0 must be finite, got {t0}")));
        }
        if samples.is_empty() {
            return Err(Error::input("signal has no samples"));
        }
        for (i, &x) in samples.iter().enumerate() {
            check_finite(i, x)?;
        }
        Ok(Self {
            t0,
            dt,
            samples,
            meta,
        })
    }

    /// A signal starting at t = 0 with a "samples" descriptor.
    pub fn from_samples(dt: f64, samples: Vec<f64>) -> Result<Self> {
        Self::new(0.0, dt, samples, SignalMeta::new("samples", &[], None))
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn meta(&self) -> &SignalMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, index: usize) -> f64 {
        self.t0 + index as f64 * self.dt
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 * self.dt
    }

    /// Largest `|x[i+1] - x[i]| / dt` over the signal.
    pub fn max_rate(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max)
            / self.dt
    }

    /// Each sample repeated `k` times at `dt / k`: the same path traversed
    /// `k` times slower in sample count.
    pub fn repeat_each(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::config("repeat factor must be at least 1"));
        }
        let samples = self
            .samples
            .iter()
            .flat_map(|&x| std::iter::repeat_n(x, k))
            .collect();
        let mut meta = self.meta.clone();
        meta.params.push(("repeat".to_owned(), k as f64));
        Self::new(self.t0, self.dt / k as f64, samples, meta)
    }
}

fn sample_count(duration: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::config(format!("dt must be positive, got {dt}")));
    }
    if !(duration >= dt && duration.is_finite()) {
        return Err(Error::config(format!(
            "duration must be at least dt ({dt}), got {duration}"
        )));
    }
    Ok(((duration / dt).round() as usize).max(1))
}

/// `x0 + rate * i * dt` for `round(duration / dt)` samples.
pub fn ramp(rate: f64, x0: f64, duration: f64, dt: f64) -> Result<Signal> {
    if !rate.is_finite() || !x0.is_finite() {
        return Err(Error::config("ramp rate and start must be finite"));
    }
    let n = sample_count(duration, dt)?;
    let samples = (0..n).map(|i| x0 + rate * i as f64 * dt).collect();
    Signal::new(
        0.0,
        dt,
        samples,
        SignalMeta::new(
            "ramp",
            &[("rate", rate), ("x0", x0), ("duration", duration)],
            None,
        ),
    )
}

/// Symmetric triangle starting at `min`, peaking at `max` mid-period, for
/// `cycles` periods plus one closing sample back at `min`.
///
/// `period / dt` must round to an even sample count so that the peak lands
/// exactly on a sample.
pub fn triangle(min: f64, max: f64, period: f64, dt: f64, cycles: usize) -> Result<Signal> {
    if !(max > min) || !min.is_finite() || !max.is_finite() {
        return Err(Error::config(format!(
            "triangle needs max > min, got min={min} max={max}"
        )));
    }
    if !(dt > 0.0) || !(period >= 4.0 * dt) || !period.is_finite() {
        return Err(Error::config(format!(
            "triangle period ({period}) must be at least 4*dt ({})",
            4.0 * dt
        )));
    }
    if cycles == 0 {
        return Err(Error::config("triangle needs at least one cycle"));
    }
    let per = (period / dt).round() as usize;
    if !per.is_multiple_of(2) {
        return Err(Error::config(format!(
            "triangle period spans {per} samples; an even count is required to sample the peak"
        )));
    }
    let half = per / 2;
    let span = max - min;
    let one: Vec<f64> = (0..per)
        .map(|j| {
            if j <= half {
                min + span * (j as f64 / half as f64)
            } else {
                max - span * ((j - half) as f64 / half as f64)
            }
        })
        .collect();
    let mut samples = Vec::with_capacity(per * cycles + 1);
    for _ in 0..cycles {
        samples.extend_from_slice(&one);
    }
    samples.push(min);
    Signal::new(
        0.0,
        dt,
        samples,
        SignalMeta::new(
            "triangle",
            &[
                ("min", min),
                ("max", max),
                ("period", period),
                ("cycles", cycles as f64),
            ],
            None,
        ),
    )
}

/// Sample index range of one pulse produced by [`trapezoid_pulses`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PulseSpan {
    pub start: usize,
    pub end: usize,
}

/// One trapezoid per entry of `rates` (rise at `rate`, hold `plateau` at
/// `high`, fall at `rate`), each preceded and the last one followed by
/// `gap` seconds at `low`.
pub fn trapezoid_pulses(
    rates: &[f64],
    low: f64,
    high: f64,
    plateau: f64,
    gap: f64,
    dt: f64,
) -> Result<Signal> {
    Ok(trapezoid_pulses_with_spans(rates, low, high, plateau, gap, dt)?.0)
}

/// As [`trapezoid_pulses`], also returning where each pulse sits.
pub fn trapezoid_pulses_with_spans(
    rates: &[f64],
    low: f64,
    high: f64,
    plateau: f64,
    gap: f64,
    dt: f64,
) -> Result<(Signal, Vec<PulseSpan>)> {
    if rates.is_empty() {
        return Err(Error::config("at least one pulse rate is required"));
    }
    if let Some(r) = rates.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(Error::config(format!("pulse rates must be positive, got {r}")));
    }
    if !(high > low) || !high.is_finite() || !low.is_finite() {
        return Err(Error::config(format!(
            "pulses need high > low, got low={low} high={high}"
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::config(format!("dt must be positive, got {dt}")));
    }
    if !(plateau >= 0.0) || !(gap >= 0.0) {
        return Err(Error::config("plateau and gap must be non-negative"));
    }
    let gap_n = (gap / dt).round() as usize;
    let plateau_n = (plateau / dt).round() as usize;
    let mut samples = vec![low; gap_n.max(1)];
    let mut spans = Vec::with_capacity(rates.len());
    for &rate in rates {
        let start = samples.len();
        let edge_n = (((high - low) / rate) / dt).round().max(1.0) as usize;
        samples.extend((1..=edge_n).map(|i| (low + rate * i as f64 * dt).min(high)));
        samples.extend(std::iter::repeat_n(high, plateau_n));
        samples.extend((1..=edge_n).map(|i| (high - rate * i as f64 * dt).max(low)));
        spans.push(PulseSpan {
            start,
            end: samples.len(),
        });
        samples.extend(std::iter::repeat_n(low, gap_n.max(1)));
    }
    let mut params = vec![
        ("low", low),
        ("high", high),
        ("plateau", plateau),
        ("gap", gap),
    ];
    params.extend(rates.iter().map(|&r| ("rate", r)));
    let signal = Signal::new(0.0, dt, samples, SignalMeta::new("pulses", &params, None))?;
    Ok((signal, spans))
}

/// A seeded, continuous, slope-limited pseudo-random path in `[lo, hi]`.
///
/// Sum of [`SMOOTH_RANDOM_TONES`] unit sinusoids with random phases and
/// log-spaced frequencies, rescaled onto `[lo, hi]` and then slew-limited so
/// that no step exceeds `max_rate * dt`.
pub fn smooth_random(
    seed: u64,
    lo: f64,
    hi: f64,
    max_rate: f64,
    duration: f64,
    dt: f64,
) -> Result<Signal> {
    if !(hi > lo) || !hi.is_finite() || !lo.is_finite() {
        return Err(Error::config(format!(
            "smooth_random needs hi > lo, got lo={lo} hi={hi}"
        )));
    }
    if !(max_rate > 0.0 && max_rate.is_finite()) {
        return Err(Error::config(format!(
            "max_rate must be positive, got {max_rate}"
        )));
    }
    let n = sample_count(duration, dt)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // A single full-scale tone at f_max already has peak slope max_rate.
    let f_max = max_rate / (PI * (hi - lo));
    let f_min = f_max / 64.0;
    let tones: Vec<(f64, f64)> = (0..SMOOTH_RANDOM_TONES)
        .map(|k| {
            let frac = k as f64 / (SMOOTH_RANDOM_TONES - 1) as f64;
            let freq = f_min * (f_max / f_min).powf(frac);
            let phase = rng.gen_range(0.0..2.0 * PI);
            (freq, phase)
        })
        .collect();

    let raw: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 * dt;
            tones
                .iter()
                .map(|&(f, p)| (2.0 * PI * f * t + p).sin())
                .sum()
        })
        .collect();
    let (rmin, rmax) = raw
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        });
    let scaled = raw.iter().map(|&x| {
        if rmax > rmin {
            (lo + (x - rmin) / (rmax - rmin) * (hi - lo)).clamp(lo, hi)
        } else {
            0.5 * (lo + hi)
        }
    });

    // Slightly under the limit so rounding in the difference never exceeds it.
    let max_step = max_rate * dt * (1.0 - 1e-9);
    let mut samples: Vec<f64> = Vec::with_capacity(n);
    for target in scaled {
        let next = match samples.last() {
            None => target,
            Some(&prev) => prev + (target - prev).clamp(-max_step, max_step),
        };
        samples.push(next);
    }

    Signal::new(
        0.0,
        dt,
        samples,
        SignalMeta::new(
            "smooth_random",
            &[
                ("lo", lo),
                ("hi", hi),
                ("max_rate", max_rate),
                ("duration", duration),
            ],
            Some(seed),
        ),
    )
}

/// Adds i.i.d. noise uniform on `[-amplitude, amplitude]`.
pub fn add_noise(signal: &Signal, amplitude: f64, seed: u64) -> Result<Signal> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::config(format!(
            "noise amplitude must be non-negative, got {amplitude}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = if amplitude == 0.0 {
        signal.samples.clone()
    } else {
        signal
            .samples
            .iter()
            .map(|&x| x + rng.gen_range(-amplitude..=amplitude))
            .collect()
    };
    let mut meta = signal.meta.clone();
    meta.noise = Some((amplitude, seed));
    Signal::new(signal.t0, signal.dt, samples, meta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_arithmetic() {
        let s = ramp(2.0, 0.0, 1.0, 0.25).unwrap();
        assert_eq!(s.samples(), &[0.0, 0.5, 1.0, 1.5]);
        let s = ramp(0.0, 3.0, 1.0, 0.1).unwrap();
        assert!(s.samples().iter().all(|&x| x == 3.0));
        let s = ramp(-1.0, 1.0, 1.0, 0.25).unwrap();
        assert_eq!(s.samples(), &[1.0, 0.75, 0.5, 0.25]);
    }

    #[test]
    fn ramp_rejects_bad_timing() {
        assert!(ramp(1.0, 0.0, 1.0, 0.0).is_err());
        assert!(ramp(1.0, 0.0, 1.0, -0.1).is_err());
        assert!(ramp(1.0, 0.0, 0.05, 0.1).is_err());
    }

    #[test]
    fn triangle_one_cycle() {
        let s = triangle(0.0, 1.0, 4.0, 1.0, 1).unwrap();
        assert_eq!(s.samples(), &[0.0, 0.5, 1.0, 0.5, 0.0]);
    }

    #[test]
    fn triangle_is_periodic() {
        let s = triangle(0.0, 12.0, 2.4, 0.01, 3).unwrap();
        let per = 240;
        assert_eq!(s.len(), 3 * per + 1);
        for c in 1..3 {
            assert_eq!(&s.samples()[..per], &s.samples()[c * per..(c + 1) * per]);
        }
        assert_eq!(s.samples()[per / 2], 12.0);
    }

    #[test]
    fn triangle_rejects_degenerate() {
        assert!(triangle(1.0, 1.0, 4.0, 1.0, 1).is_err());
        assert!(triangle(0.0, 1.0, 3.0, 1.0, 1).is_err());
        assert!(triangle(0.0, 1.0, 5.0, 1.0, 1).is_err());
        assert!(triangle(0.0, 1.0, 4.0, 1.0, 0).is_err());
    }

    #[test]
    fn pulse_edges() {
        let (s, spans) = trapezoid_pulses_with_spans(&[1.0], 0.0, 1.0, 1.0, 1.0, 0.1).unwrap();
        let rise = &s.samples()[spans[0].start..spans[0].start + 10];
        assert!((rise[9] - 1.0).abs() < 1e-12);
        assert!(rise[8] < 1.0);
        assert_eq!(s.samples()[spans[0].start - 1], 0.0);

        let (_, spans) =
            trapezoid_pulses_with_spans(&[1.0, 2.0, 5.0], 0.0, 1.0, 1.0, 1.0, 0.01).unwrap();
        let widths: Vec<_> = spans.iter().map(|p| p.end - p.start).collect();
        // 2 * rise + plateau, rises 100, 50 and 20 samples
        assert_eq!(widths, vec![300, 200, 140]);
    }

    #[test]
    fn zero_plateau_gives_triangular_pulses() {
        let s = trapezoid_pulses(&[1.0], 0.0, 1.0, 0.0, 0.5, 0.25).unwrap();
        assert_eq!(
            s.samples(),
            &[0.0, 0.0, 0.25, 0.5, 0.75, 1.0, 0.75, 0.5, 0.25, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn pulses_reject_bad_rates() {
        assert!(trapezoid_pulses(&[1.0, 0.0], 0.0, 1.0, 1.0, 1.0, 0.1).is_err());
        assert!(trapezoid_pulses(&[-2.0], 0.0, 1.0, 1.0, 1.0, 0.1).is_err());
        assert!(trapezoid_pulses(&[], 0.0, 1.0, 1.0, 1.0, 0.1).is_err());
        assert!(trapezoid_pulses(&[1.0], 1.0, 1.0, 1.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn smooth_random_is_deterministic_and_bounded() {
        let a = smooth_random(42, 0.0, 12.0, 2.0, 20.0, 1e-3).unwrap();
        let b = smooth_random(42, 0.0, 12.0, 2.0, 20.0, 1e-3).unwrap();
        assert_eq!(a, b);
        let c = smooth_random(43, 0.0, 12.0, 2.0, 20.0, 1e-3).unwrap();
        assert_ne!(a.samples(), c.samples());
        assert!(a.samples().iter().all(|&x| (0.0..=12.0).contains(&x)));
        assert_eq!(a.meta().seed, Some(42));
    }

    #[test]
    fn smooth_random_respects_rate_limit_across_seeds() {
        for seed in 0..100 {
            let s = smooth_random(seed, -1.0, 3.0, 1.5, 10.0, 5e-3).unwrap();
            let worst = s
                .samples()
                .windows(2)
                .map(|w| (w[1] - w[0]).abs() / s.dt())
                .fold(0.0, f64::max);
            assert!(worst <= 1.5, "seed {seed}: {worst}");
        }
    }

    #[test]
    fn smooth_random_rejects_bad_params() {
        assert!(smooth_random(1, 1.0, 0.0, 1.0, 1.0, 0.01).is_err());
        assert!(smooth_random(1, 0.0, 1.0, 0.0, 1.0, 0.01).is_err());
    }

    #[test]
    fn noise_properties() {
        let s = ramp(1.0, 0.0, 2.0, 1e-3).unwrap();
        let same = add_noise(&s, 0.0, 9).unwrap();
        assert_eq!(same.samples(), s.samples());
        assert_eq!(same.meta().noise, Some((0.0, 9)));

        let a = add_noise(&s, 0.15, 9).unwrap();
        let b = add_noise(&s, 0.15, 9).unwrap();
        assert_eq!(a, b);
        let worst = a
            .samples()
            .iter()
            .zip(s.samples())
            .map(|(n, c)| (n - c).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 0.15);
        assert!(worst > 0.1);
        assert!(add_noise(&s, -0.1, 1).is_err());
    }

    #[test]
    fn repeat_each_scales_dt() {
        let s = Signal::from_samples(0.5, vec![1.0, 2.0]).unwrap();
        let r = s.repeat_each(3).unwrap();
        assert_eq!(r.samples(), &[1.0, 1.0, 1.0, 2.0, 2.0, 2.0]);
        assert_eq!(r.dt(), 0.5 / 3.0);
        assert!(s.repeat_each(0).is_err());
    }

    #[test]
    fn signal_invariants_enforced() {
        assert!(Signal::from_samples(0.1, vec![]).is_err());
        assert!(Signal::from_samples(0.0, vec![1.0]).is_err());
        assert!(Signal::from_samples(0.1, vec![f64::NAN]).is_err());
    }
}
