use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    delay_by_xcorr, extract_transitions, measure_leads, orbit_signed_area, reference_quantize,
    transition_count, LeadReport, Orientation, Transition,
};
use crate::error::{Error, Result};
use crate::network::{
    cell_netlist, reference_step, BlockNetwork, Comparator, EvalOrder, HystereticStack,
    MultinaryStack, ProtereticCell, Quantizer,
};
use crate::signals::{self, PulseSpan, Signal};

use super::config::{DeviceKind, ExperimentConfig, SignalKind};
use super::csv::{format_real, Table};
use super::{ChartSpec, ExperimentOutput, RunReport};

/// |area| below this classifies a loop as degenerate.
const AREA_TOLERANCE: f64 = 0.01;
/// Relative tolerance on the loop area against `band * M`.
const AREA_REL_TOLERANCE: f64 = 0.02;

pub fn build_device(config: &ExperimentConfig, x0: f64) -> Result<Box<dyn Quantizer + Send>> {
    let d = &config.device;
    Ok(match d.kind {
        DeviceKind::Proteretic => Box::new(MultinaryStack::with_config(
            d.levels,
            d.band,
            &d.overrides,
            x0,
        )?),
        DeviceKind::Hysteretic => Box::new(HystereticStack::with_config(
            d.levels,
            d.band,
            &d.overrides,
            x0,
        )?),
        DeviceKind::Comparator => Box::new(Comparator::new(d.levels)?),
    })
}

/// The configured signal (noise not yet applied) and, for pulses, where each
/// pulse sits.
pub fn build_signal(config: &ExperimentConfig) -> Result<(Signal, Vec<PulseSpan>)> {
    let dt = config.run.dt;
    let duration = config.run.duration;
    Ok(match &config.signal.kind {
        SignalKind::Ramp { rate, x0 } => (signals::ramp(*rate, *x0, duration, dt)?, Vec::new()),
        SignalKind::Triangle {
            min,
            max,
            period,
            cycles,
        } => (signals::triangle(*min, *max, *period, dt, *cycles)?, Vec::new()),
        SignalKind::Pulses {
            low,
            high,
            plateau,
            gap,
        } => signals::trapezoid_pulses_with_spans(
            &config.signal.rates,
            *low,
            *high,
            *plateau,
            *gap,
            dt,
        )?,
        SignalKind::SmoothRandom {
            lo,
            hi,
            max_rate,
            seed,
        } => (
            signals::smooth_random(*seed, *lo, *hi, *max_rate, duration, dt)?,
            Vec::new(),
        ),
    })
}

fn noisy(config: &ExperimentConfig, clean: &Signal) -> Result<Signal> {
    signals::add_noise(clean, config.signal.noise, config.signal.noise_seed)
}

fn settle_point(config: &ExperimentConfig, signal: &Signal) -> f64 {
    config.device.x0.unwrap_or(signal.samples()[0])
}

/// +1 for devices that lead the comparator, -1 for those that lag, 0 for the
/// comparator itself.
fn lead_sign(kind: DeviceKind) -> f64 {
    match kind {
        DeviceKind::Proteretic => 1.0,
        DeviceKind::Hysteretic => -1.0,
        DeviceKind::Comparator => 0.0,
    }
}

/// Band width of level `m` after overrides.
fn level_band(config: &ExperimentConfig, level: usize) -> f64 {
    config
        .device
        .overrides
        .iter()
        .filter(|o| o.level == level)
        .fold(config.device.band, |band, o| band + o.delta_b - o.delta_a)
}

/// Signed lead predicted for a transition at `rate`.
fn predicted_signed_lead(config: &ExperimentConfig, t: &Transition, rate: f64) -> f64 {
    let level = t.from_level.max(t.to_level);
    lead_sign(config.device.kind) * level_band(config, level) / (2.0 * rate.abs())
}

fn as_f64(levels: &[usize]) -> Vec<f64> {
    levels.iter().map(|&l| l as f64).collect()
}

fn as_i64(levels: &[usize]) -> Vec<i64> {
    levels.iter().map(|&l| l as i64).collect()
}

fn times(signal: &Signal) -> Vec<f64> {
    (0..signal.len()).map(|i| signal.time(i)).collect()
}

fn reference_levels(signal: &Signal, levels: usize) -> Vec<usize> {
    signal
        .samples()
        .iter()
        .map(|&x| reference_quantize(x, levels))
        .collect()
}

fn max_lag_samples(config: &ExperimentConfig, n: usize) -> usize {
    let wanted = (config.run.max_lag / config.run.dt).round() as usize;
    wanted.min(n.saturating_sub(1) / 2)
}

/// Transfer-function orbit of the device under a triangle input.
pub fn run_transfer(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let SignalKind::Triangle {
        min, max, period, ..
    } = config.signal.kind
    else {
        return Err(Error::config(format!(
            "transfer needs a periodic (triangle) signal, got {}",
            config.signal.kind.name()
        )));
    };
    let (clean, _) = build_signal(config)?;
    let input = noisy(config, &clean)?;
    let mut device = build_device(config, settle_point(config, &input))?;
    let levels = device.run(&input)?;
    let y = as_f64(&levels);
    let period_samples = (period / config.run.dt).round() as usize;
    let area = orbit_signed_area(input.samples(), &y, period_samples)?;
    let orientation = Orientation::classify(area, AREA_TOLERANCE);

    let kind = config.device.kind;
    let m = config.device.levels;
    let expected_orientation = match kind {
        DeviceKind::Proteretic => Orientation::Clockwise,
        DeviceKind::Hysteretic => Orientation::CounterClockwise,
        DeviceKind::Comparator => Orientation::Degenerate,
    };

    let mut report = RunReport::new("transfer");
    report.add_metric("period_samples", period_samples as f64);
    report.add_metric("orbit_signed_area", area);
    report.add_check(
        "orientation",
        orientation == expected_orientation,
        format!(
            "{} loop (area {}), {} expected for a {} device",
            orientation.as_str(),
            format_real(area),
            expected_orientation.as_str(),
            kind.as_str()
        ),
    );
    let half = config.device.band / 2.0;
    let spans_all_bands = min < 0.5 - half && max > m as f64 - 0.5 + half;
    if spans_all_bands && kind != DeviceKind::Comparator {
        let expected: f64 = lead_sign(kind) * (1..=m).map(|l| level_band(config, l)).sum::<f64>();
        let rel = ((area - expected) / expected).abs();
        report.add_metric("expected_area", expected);
        report.add_metric("area_relative_error", rel);
        report.add_check(
            "area",
            rel <= AREA_REL_TOLERANCE,
            format!(
                "area {} vs sum of bands {} (relative error {}, tolerance {})",
                format_real(area),
                format_real(expected),
                format_real(rel),
                AREA_REL_TOLERANCE
            ),
        );
    } else if kind != DeviceKind::Comparator {
        report
            .notes
            .push("triangle does not span every band; area not compared".into());
    }

    let table = Table::new()
        .real("t", times(&input))
        .real("x", input.samples().to_vec())
        .int("y", as_i64(&levels));
    Ok(ExperimentOutput {
        report,
        table,
        chart: Some(ChartSpec {
            title: format!("{} transfer orbit", kind.as_str()),
            x: "x".into(),
            series: vec!["y".into()],
        }),
    })
}

/// Up-then-down ramp from 0 to `M + 0.5` at `rate`, peak sample included.
fn constant_rate_excursion(levels: usize, rate: f64, dt: f64) -> Result<Signal> {
    let top = levels as f64 + 0.5;
    let n = ((top / (rate * dt)).round() as usize).max(2);
    let up = (0..=n).map(|i| top * i as f64 / n as f64);
    let down = (0..n).rev().map(|i| top * i as f64 / n as f64);
    Signal::from_samples(dt, up.chain(down).collect())
}

/// M-level device driven by a smooth pseudo-random input, compared with
/// the memoryless quantisation of the same input.
pub fn run_dodecanary(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let SignalKind::SmoothRandom { max_rate, .. } = config.signal.kind else {
        return Err(Error::config(format!(
            "dodecanary needs a smooth_random signal, got {}",
            config.signal.kind.name()
        )));
    };
    let m = config.device.levels;
    let dt = config.run.dt;
    let kind = config.device.kind;
    let (clean, _) = build_signal(config)?;
    let input = noisy(config, &clean)?;
    let mut device = build_device(config, settle_point(config, &input))?;
    let y = device.run(&input)?;
    let reference = reference_levels(&input, m);

    let mut report = RunReport::new("dodecanary");
    let lead = delay_by_xcorr(&y, &reference, max_lag_samples(config, y.len()), dt)?;
    report.add_metric("xcorr_lead", lead);
    let (ok, expectation) = match kind {
        DeviceKind::Proteretic => (lead > 0.0, "output leads (positive)"),
        DeviceKind::Hysteretic => (lead < 0.0, "output lags (negative)"),
        DeviceKind::Comparator => (lead == 0.0, "no shift"),
    };
    report.add_check(
        "xcorr lead sign",
        ok,
        format!("lead {} s, expected {expectation}", format_real(lead)),
    );
    report.add_check(
        "output range",
        y.iter().all(|&v| v <= m),
        format!("all levels within 0..={m}"),
    );

    // The same device over a constant-rate excursion at the signal's max rate.
    let ramp = constant_rate_excursion(m, max_rate, dt)?;
    let actual_rate = (ramp.samples()[1] - ramp.samples()[0]) / dt;
    let mut ramp_device = build_device(config, 0.0)?;
    let ramp_y = ramp_device.run(&ramp)?;
    let ramp_ref = reference_levels(&ramp, m);
    let ramp_lead = delay_by_xcorr(&ramp_y, &ramp_ref, max_lag_samples(config, ramp_y.len()), dt)?;
    let predicted = lead_sign(kind) * config.device.band / (2.0 * actual_rate);
    report.add_metric("constant_rate", actual_rate);
    report.add_metric("constant_rate_xcorr_lead", ramp_lead);
    report.add_metric("constant_rate_predicted_lead", predicted);
    report.add_check(
        "constant-rate lead",
        (ramp_lead - predicted).abs() <= 2.0 * dt,
        format!(
            "xcorr lead {} s vs predicted {} s (tolerance {} s)",
            format_real(ramp_lead),
            format_real(predicted),
            format_real(2.0 * dt)
        ),
    );

    let table = Table::new()
        .real("t", times(&input))
        .real("x", input.samples().to_vec())
        .int("y", as_i64(&y))
        .int("ref", as_i64(&reference));
    Ok(ExperimentOutput {
        report,
        table,
        chart: Some(ChartSpec {
            title: format!("{m}-level {} device", kind.as_str()),
            x: "t".into(),
            series: vec!["x".into(), "y".into()],
        }),
    })
}

struct SweepLeg {
    rate: f64,
    direction: &'static str,
    report: LeadReport,
    predicted: Vec<f64>,
}

fn sweep_leg(
    config: &ExperimentConfig,
    rate: f64,
    rising: bool,
) -> Result<SweepLeg> {
    let m = config.device.levels;
    let dt = config.run.dt;
    let top = m as f64 + 0.5;
    let duration = top / rate.abs();
    let input = if rising {
        signals::ramp(rate.abs(), 0.0, duration, dt)?
    } else {
        signals::ramp(-rate.abs(), top, duration, dt)?
    };
    let mut device = build_device(config, input.samples()[0])?;
    let y = device.run(&input)?;
    let reference = reference_levels(&input, m);
    let dev_t = extract_transitions(&y, input.t0(), dt);
    let ref_t = extract_transitions(&reference, input.t0(), dt);
    let report = measure_leads(&dev_t, &ref_t, &input, config.device.band);
    let predicted = report
        .pairs
        .iter()
        .map(|p| predicted_signed_lead(config, &p.reference, rate))
        .collect();
    Ok(SweepLeg {
        rate,
        direction: if rising { "rising" } else { "falling" },
        report,
        predicted,
    })
}

/// Measured against predicted lead over rising and falling ramps through
/// every band, one pair of ramps per rate.
pub fn run_rate_sweep(config: &ExperimentConfig, rates: &[f64]) -> Result<ExperimentOutput> {
    if rates.is_empty() {
        return Err(Error::config("the sweep needs at least one rate"));
    }
    if let Some(r) = rates.iter().find(|r| **r == 0.0 || !r.is_finite()) {
        return Err(Error::config(format!(
            "sweep rate {r} is invalid: the lead is undefined for a zero rate"
        )));
    }
    let max_rate = rates.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    config.check_sampling(max_rate)?;

    let legs: Vec<Result<SweepLeg>> = std::thread::scope(|scope| {
        let handles: Vec<_> = rates
            .iter()
            .flat_map(|&r| [(r, true), (r, false)])
            .map(|(r, rising)| scope.spawn(move || sweep_leg(config, r, rising)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });

    let dt = config.run.dt;
    let tolerance = 2.0 * dt;
    let m = config.device.levels;
    let mut report = RunReport::new("sweep");
    let mut cols: (Vec<f64>, Vec<String>, Vec<i64>, Vec<i64>) = Default::default();
    let mut times: [Vec<f64>; 5] = Default::default();
    let mut worst_overall = 0.0_f64;
    let legs = legs.into_iter().collect::<Result<Vec<_>>>()?;
    for pair in legs.chunks(2) {
        let rate = pair[0].rate;
        let label = format_real(rate);
        let mut worst = 0.0_f64;
        let mut matched = 0;
        let mut unmatched = 0;
        let mut mean = 0.0;
        for leg in pair {
            unmatched += leg.report.unmatched_device.len() + leg.report.unmatched_reference.len();
            for (p, &pred) in leg.report.pairs.iter().zip(&leg.predicted) {
                let dev = (p.lead - pred).abs();
                worst = worst.max(dev);
                matched += 1;
                mean += p.lead;
                cols.0.push(rate);
                cols.1.push(leg.direction.to_owned());
                cols.2.push(p.device.from_level as i64);
                cols.3.push(p.device.to_level as i64);
                times[0].push(p.device.time);
                times[1].push(p.reference.time);
                times[2].push(p.lead);
                times[3].push(pred);
                times[4].push(dev);
            }
        }
        if matched > 0 {
            mean /= matched as f64;
        }
        worst_overall = worst_overall.max(worst);
        let nominal = lead_sign(config.device.kind) * config.device.band / (2.0 * rate.abs());
        report.add_metric(format!("rate={label}:predicted_lead"), nominal);
        report.add_metric(format!("rate={label}:mean_lead"), mean);
        report.add_metric(format!("rate={label}:max_deviation"), worst);
        report.add_check(
            format!("rate {label}: leads within 2*dt"),
            matched > 0 && worst <= tolerance,
            format!(
                "{matched} transitions, max |lead - predicted| = {} s (tolerance {} s)",
                format_real(worst),
                format_real(tolerance)
            ),
        );
        let expected_pairs = 2 * m;
        report.add_check(
            format!("rate {label}: transitions matched"),
            unmatched == 0 && matched == expected_pairs,
            format!("{matched} matched of {expected_pairs}, {unmatched} unmatched"),
        );
    }
    report.add_metric("max_abs_deviation", worst_overall);

    let [t_device, t_reference, lead, predicted, deviation] = times;
    let table = Table::new()
        .real("rate", cols.0)
        .text("direction", cols.1)
        .int("from_level", cols.2)
        .int("to_level", cols.3)
        .real("t_device", t_device)
        .real("t_reference", t_reference)
        .real("lead", lead)
        .real("predicted", predicted)
        .real("deviation", deviation);
    Ok(ExperimentOutput {
        report,
        table,
        chart: None,
    })
}

/// Clean against noisy trapezoid pulses: transition counts, per-pulse leads
/// and a memoryless comparator for contrast.
pub fn run_noise_pulses(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    if !matches!(config.signal.kind, SignalKind::Pulses { .. }) {
        return Err(Error::config(format!(
            "noise needs a pulses signal, got {}",
            config.signal.kind.name()
        )));
    }
    let m = config.device.levels;
    let dt = config.run.dt;
    let (clean, spans) = build_signal(config)?;
    let input = noisy(config, &clean)?;
    let x0 = settle_point(config, &clean);

    let y_clean = build_device(config, x0)?.run(&clean)?;
    let y_noisy = build_device(config, x0)?.run(&input)?;
    let y_comparator = Comparator::new(m)?.run(&input)?;
    let reference = reference_levels(&clean, m);

    let clean_count = transition_count(&y_clean);
    let noisy_count = transition_count(&y_noisy);
    let comparator_count = transition_count(&y_comparator);
    let noise = config.signal.noise;
    let half_band = config.device.band / 2.0;

    let mut report = RunReport::new("noise");
    report.add_metric("noise_amplitude", noise);
    report.add_metric("clean_transitions", clean_count as f64);
    report.add_metric("noisy_transitions", noisy_count as f64);
    report.add_metric("comparator_noisy_transitions", comparator_count as f64);

    let immunity_detail = format!(
        "clean {clean_count}, noisy {noisy_count} (noise {} vs half-band {})",
        format_real(noise),
        format_real(half_band)
    );
    if noise < half_band {
        report.add_check("noise immunity", noisy_count == clean_count, immunity_detail);
    } else {
        report.add_informative("noise immunity", noisy_count == clean_count, immunity_detail);
        report
            .notes
            .push("noise amplitude reaches half the band; immunity is not expected".into());
    }
    let comparator_detail = format!("comparator {comparator_count} vs clean {clean_count}");
    if noise > 0.0 {
        report.add_check("comparator chatters", comparator_count > clean_count, comparator_detail);
    } else {
        report.add_informative("comparator chatters", comparator_count > clean_count, comparator_detail);
    }

    // Per-pulse leads on the clean run.
    let clean_leads = measure_leads(
        &extract_transitions(&y_clean, clean.t0(), dt),
        &extract_transitions(&reference, clean.t0(), dt),
        &clean,
        config.device.band,
    );
    let noisy_leads = measure_leads(
        &extract_transitions(&y_noisy, input.t0(), dt),
        &extract_transitions(&reference, clean.t0(), dt),
        &clean,
        config.device.band,
    );
    let tolerance = 2.0 * dt;
    let mut worst = 0.0_f64;
    let mut matched = 0;
    for (k, (span, &rate)) in spans.iter().zip(&config.signal.rates).enumerate() {
        let in_span = |t: &Transition| t.index >= span.start && t.index <= span.end;
        for (edge, rising) in [("rise", true), ("fall", false)] {
            let pair = clean_leads
                .pairs
                .iter()
                .find(|p| in_span(&p.reference) && p.reference.is_rising() == rising);
            if let Some(p) = pair {
                let predicted = predicted_signed_lead(config, &p.reference, rate);
                worst = worst.max((p.lead - predicted).abs());
                matched += 1;
                report.add_metric(format!("pulse{}:{edge}_lead", k + 1), p.lead);
                report.add_metric(format!("pulse{}:{edge}_predicted", k + 1), predicted);
            }
            let noisy_pair = noisy_leads
                .pairs
                .iter()
                .find(|p| in_span(&p.reference) && p.reference.is_rising() == rising);
            if let Some(p) = noisy_pair {
                report.add_metric(format!("pulse{}:{edge}_noisy_lead", k + 1), p.lead);
            }
        }
    }
    let expected_pairs = 2 * spans.len() * m;
    report.add_check(
        "leads scale as 1/rate",
        matched == 2 * spans.len() && worst <= tolerance,
        format!(
            "{matched} pulse edges, max |lead - band/(2 rate)| = {} s (tolerance {} s)",
            format_real(worst),
            format_real(tolerance)
        ),
    );
    report.add_check(
        "clean transitions matched",
        clean_leads.is_fully_matched() && clean_leads.pairs.len() == expected_pairs,
        format!(
            "{} matched, {} + {} unmatched",
            clean_leads.pairs.len(),
            clean_leads.unmatched_device.len(),
            clean_leads.unmatched_reference.len()
        ),
    );

    let table = Table::new()
        .real("t", times(&clean))
        .real("x_clean", clean.samples().to_vec())
        .real("x", input.samples().to_vec())
        .int("y_clean", as_i64(&y_clean))
        .int("y", as_i64(&y_noisy))
        .int("ref", as_i64(&reference));
    Ok(ExperimentOutput {
        report,
        table,
        chart: Some(ChartSpec {
            title: "noisy pulses".into(),
            x: "t".into(),
            series: vec!["x".into(), "y".into()],
        }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub order: EvalOrder,
    /// Replace the well-sampled signals with i.i.d. samples that may hop a
    /// band in one step.
    pub coarse: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            order: EvalOrder::Feedforward,
            coarse: false,
        }
    }
}

/// First sample at which the three cell implementations disagreed.
#[derive(Debug, Clone, PartialEq)]
pub struct Divergence {
    pub trial: usize,
    pub trial_seed: u64,
    pub index: usize,
    pub input: f64,
    pub a: f64,
    pub b: f64,
    pub cell: bool,
    pub reference: bool,
    pub network: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub report: RunReport,
    pub divergent_trials: usize,
    pub first_divergence: Option<Divergence>,
    /// One row per trial: its seed, band, rate bound and first divergent
    /// sample (-1 when all three agreed).
    pub table: Table,
}

struct TrialSummary {
    a: f64,
    b: f64,
    max_rate: f64,
    divergence: Option<Divergence>,
}

const VERIFY_SAMPLES: usize = 2000;

fn verify_trial(trial: usize, trial_seed: u64, options: VerifyOptions) -> Result<TrialSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let a: f64 = rng.gen_range(-2.0..2.0);
    let b = a + rng.gen_range(0.05..0.95);
    // Wide enough to reach the recovery thresholds b - 1 and 1 + a.
    let (lo, hi) = (b - 1.5, a + 1.5);
    let max_rate: f64 = rng.gen_range(0.5..5.0);
    let dt = config_free_bound(b - a, max_rate);
    let signal = if options.coarse {
        let samples = (0..VERIFY_SAMPLES).map(|_| rng.gen_range(lo..hi)).collect();
        Signal::from_samples(dt, samples)?
    } else {
        signals::smooth_random(trial_seed, lo, hi, max_rate, VERIFY_SAMPLES as f64 * dt, dt)?
    };
    let x0 = signal.samples()[0];
    let mut cell = ProtereticCell::new(a, b, x0)?;
    let mut state = cell.state();
    let mut net = BlockNetwork::parse(&cell_netlist(a, b, x0)?)?;
    let mut divergence = None;
    for (index, &x) in signal.samples().iter().enumerate() {
        let from_cell = cell.step_with_order(x, options.order)?;
        let (next, from_reference) = reference_step(state, a, b, x)?;
        state = next;
        let from_network = net.step(x)? != 0.0;
        if from_cell != from_reference || from_cell != from_network {
            divergence = Some(Divergence {
                trial,
                trial_seed,
                index,
                input: x,
                a,
                b,
                cell: from_cell,
                reference: from_reference,
                network: from_network,
            });
            break;
        }
    }
    Ok(TrialSummary {
        a,
        b,
        max_rate,
        divergence,
    })
}

fn config_free_bound(band: f64, max_rate: f64) -> f64 {
    super::config::sampling_bound(band, max_rate)
}

/// Runs the composed cell, the closed-form reference machine and the block
/// network side by side on `trials` seeded signals.
pub fn run_verify(trials: usize, seed: u64, options: VerifyOptions) -> Result<VerifyOutcome> {
    if trials == 0 {
        return Err(Error::config("verify needs at least one trial"));
    }
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let trial_seeds: Vec<u64> = (0..trials).map(|_| seeds.next_u64()).collect();
    let summaries = trial_seeds
        .iter()
        .enumerate()
        .map(|(trial, &trial_seed)| verify_trial(trial, trial_seed, options))
        .collect::<Result<Vec<_>>>()?;
    let divergent_trials = summaries.iter().filter(|s| s.divergence.is_some()).count();
    let first_divergence = summaries.iter().find_map(|s| s.divergence.clone());
    let table = Table::new()
        .int("trial", (0..trials as i64).collect())
        .text("trial_seed", trial_seeds.iter().map(u64::to_string).collect())
        .real("a", summaries.iter().map(|s| s.a).collect())
        .real("b", summaries.iter().map(|s| s.b).collect())
        .real("max_rate", summaries.iter().map(|s| s.max_rate).collect())
        .int(
            "divergent_index",
            summaries
                .iter()
                .map(|s| s.divergence.as_ref().map_or(-1, |d| d.index as i64))
                .collect(),
        );

    let mut report = RunReport::new("verify");
    report.add_metric("trials", trials as f64);
    report.add_metric("samples_per_trial", VERIFY_SAMPLES as f64);
    report.add_metric("divergent_trials", divergent_trials as f64);
    let detail = match &first_divergence {
        None => "composed cell, reference machine and block network agree on every sample".into(),
        Some(d) => format!(
            "trial {} (seed {}), sample {}, x = {}, band ({}, {}): cell {}, reference {}, network {}",
            d.trial,
            d.trial_seed,
            d.index,
            format_real(d.input),
            format_real(d.a),
            format_real(d.b),
            u8::from(d.cell),
            u8::from(d.reference),
            u8::from(d.network)
        ),
    };
    report.add_check("zero divergences", divergent_trials == 0, detail);
    if options.order == EvalOrder::Reversed {
        report.notes.push("cell evaluated B before A (debug mode)".into());
    }
    if options.coarse {
        report.notes.push("coarse band-hopping signals (debug mode)".into());
    }
    Ok(VerifyOutcome {
        report,
        divergent_trials,
        first_divergence,
        table,
    })
}
