//! Behaviour checked against independent oracles: hand traces, per-cell
//! traces and plain folds of the update rules.

use proteretic::analysis::{extract_transitions, measure_leads, reference_quantize, transition_count};
use proteretic::network::{reference_step, BlockNetwork, HystereticStack, MultinaryStack, ProtereticCell, Quantizer};
use proteretic::signals::{self, Signal};
use proteretic::{RelaySpec, RelayUnit};

#[test]
fn relay_run_is_a_fold_of_step() {
    let spec = RelaySpec::noninverting(0.8, 0.2).unwrap();
    for seed in 0..100 {
        let s = signals::smooth_random(seed, -0.5, 1.5, 2.0, 2.0, 0.01).unwrap();
        let run = RelayUnit::new(spec, false).run(&s).unwrap();
        let mut state = false;
        let folded: Vec<bool> = s
            .samples()
            .iter()
            .map(|&x| {
                if x > 0.8 {
                    state = true;
                } else if x < 0.2 {
                    state = false;
                }
                state
            })
            .collect();
        assert_eq!(run, folded, "seed {seed}");
    }
}

#[test]
fn relay_hand_trace() {
    let spec = RelaySpec::noninverting(0.8, 0.2).unwrap();
    let out = RelayUnit::new(spec, false).run_samples(&[0.1, 0.5, 0.9, 0.5, 0.1]).unwrap();
    assert_eq!(out, [false, false, true, true, false]);
}

#[test]
fn cell_hand_traces() {
    let cell = |a, b| ProtereticCell::with_state(a, b, proteretic::CellState::new(true, false)).unwrap();
    let out = cell(0.2, 0.8).run_samples(&[0.1, 0.3, 0.9, 0.7]).unwrap();
    assert_eq!(out, [false, true, true, false]);

    let mut on = ProtereticCell::with_state(0.2, 0.8, proteretic::CellState::new(false, true)).unwrap();
    let falling: Vec<f64> = (0..=11).map(|i| 0.9 - 0.01 * i as f64).collect();
    let out = on.run_samples(&falling).unwrap();
    let first_below = falling.iter().position(|&x| x < 0.8).unwrap();
    assert!(out[..first_below].iter().all(|&y| y));
    assert!(!out[first_below]);
}

#[test]
fn cell_composite_thresholds_on_monotone_ramps() {
    for &(a, b) in &[(0.2, 0.8), (-1.3, -0.9), (4.05, 4.95)] {
        let up: Vec<f64> = (0..2000).map(|i| a - 0.5 + i as f64 * 1e-3).collect();
        let y = ProtereticCell::new(a, b, up[0]).unwrap().run_samples(&up).unwrap();
        let levels: Vec<usize> = y.iter().map(|&v| usize::from(v)).collect();
        assert_eq!(transition_count(&levels), 1);
        assert_eq!(levels.iter().position(|&l| l == 1), up.iter().position(|&x| x > a));

        let down: Vec<f64> = (0..2000).map(|i| b + 0.5 - i as f64 * 1e-3).collect();
        let y = ProtereticCell::new(a, b, down[0]).unwrap().run_samples(&down).unwrap();
        let levels: Vec<usize> = y.iter().map(|&v| usize::from(v)).collect();
        assert_eq!(levels[0], 1);
        assert_eq!(transition_count(&levels), 1);
        assert_eq!(levels.iter().position(|&l| l == 0), down.iter().position(|&x| x < b));
    }
}

#[test]
fn reference_machine_examples() {
    use proteretic::CellState as S;
    assert_eq!(reference_step(S::new(true, false), 0.2, 0.8, 0.3).unwrap(), (S::new(true, true), true));
    assert_eq!(reference_step(S::new(false, true), 0.2, 0.8, 0.79).unwrap(), (S::new(false, false), false));
    assert_eq!(reference_step(S::new(false, false), 0.2, 0.8, 1.3).unwrap(), (S::new(false, true), true));
}

/// Per-cell oracle: on a slow triangle, level m is entered on the way up at
/// the first sample above a_m = m - 0.8 and left on the way down at the
/// first sample below b_m = m - 0.2. Relay B compares `x + 1` against
/// `1 + a`, so a sample within a few ulps of the edge may round either way.
#[test]
fn dodecanary_triangle_switches_at_band_edges() {
    let s = signals::triangle(0.0, 12.0, 48.0, 1e-3, 1).unwrap();
    let xs = s.samples();
    let stack = MultinaryStack::new(12).unwrap();
    let bands: Vec<(f64, f64)> = stack.cells().iter().map(|c| (c.a(), c.b())).collect();
    let ys = stack.clone().run(&s).unwrap();
    let peak = xs.len() / 2;
    let ulps = 1e-12;
    for t in extract_transitions(&ys, 0.0, 1e-3) {
        let (i, x, prev) = (t.index, xs[t.index], xs[t.index - 1]);
        if t.is_rising() {
            let edge = bands[t.to_level - 1].0;
            assert!(i <= peak && x > edge && prev <= edge + ulps, "{t:?}");
        } else {
            let edge = bands[t.from_level - 1].1;
            assert!(i > peak && x < edge && prev >= edge - ulps, "{t:?}");
        }
    }
    assert_eq!(transition_count(&ys), 24);
}

#[test]
fn ramp_into_level_five_and_hysteretic_mirror() {
    let s = signals::ramp(0.5, 4.0, 2.0, 1e-3).unwrap();
    let first = s.samples().iter().position(|&x| x > 4.2).unwrap();
    let ys = MultinaryStack::with_config(12, 0.6, &[], 4.0).unwrap().run(&s).unwrap();
    assert_eq!(ys.iter().position(|&y| y == 5), Some(first));

    let late = s.samples().iter().position(|&x| x > 4.8).unwrap();
    let ys = HystereticStack::with_config(12, 0.6, &[], 4.0).unwrap().run(&s).unwrap();
    assert_eq!(ys.iter().position(|&y| y == 5), Some(late));
}

#[test]
fn staircase_on_a_ramp() {
    let s = signals::ramp(1.0, 0.0, 12.5, 1e-3).unwrap();
    let ys = MultinaryStack::new(12).unwrap().run(&s).unwrap();
    let ts = extract_transitions(&ys, 0.0, 1e-3);
    assert_eq!(ts.len(), 12);
    assert!(ts.iter().enumerate().all(|(m, t)| t.from_level == m && t.to_level == m + 1));
}

#[test]
fn ramp_leads_match_crossing_times() {
    // Oracle: the lead is the time between the first samples above a_m and
    // at or above m - 0.5.
    let dt = 1e-3;
    let s = signals::ramp(2.0, 0.0, 6.5, dt).unwrap();
    let stack = MultinaryStack::new(12).unwrap();
    let ys = stack.clone().run(&s).unwrap();
    let refs: Vec<usize> = s.samples().iter().map(|&x| reference_quantize(x, 12)).collect();
    let report = measure_leads(
        &extract_transitions(&ys, 0.0, dt),
        &extract_transitions(&refs, 0.0, dt),
        &s,
        0.6,
    );
    assert!(report.is_fully_matched());
    for p in &report.pairs {
        let m = p.device.to_level;
        let a = stack.cell(m).unwrap().a();
        let i_dev = s.samples().iter().position(|&x| x > a).unwrap();
        let i_ref = s.samples().iter().position(|&x| x >= m as f64 - 0.5).unwrap();
        assert_eq!((p.device.index, p.reference.index), (i_dev, i_ref));
        assert!((p.lead - 0.15).abs() <= 2.0 * dt);
    }
}

#[test]
fn netlists() {
    let mut id = BlockNetwork::parse("block in = input\nblock out = output\nwire in -> out\n").unwrap();
    let xs = [0.3, -7.0, 1e9];
    assert_eq!(id.run_samples(&xs).unwrap(), xs);

    let looped = "block in = input\nblock A = relay inverting set=0.2 reset=0.8 init=0\n\
                  block sum = sum\nblock B = relay noninverting set=1.2 reset=0.8 init=0\n\
                  block out = output\nwire in -> A\nwire A, B -> sum\nwire sum -> B\nwire B -> out\n";
    let err = BlockNetwork::parse(looped).unwrap_err().to_string();
    assert!(err.contains("cycle"), "{err}");
}

#[test]
fn constant_input_below_every_band_is_silent() {
    let s = Signal::from_samples(1e-3, vec![0.0; 500]).unwrap();
    assert!(MultinaryStack::new(12).unwrap().run(&s).unwrap().iter().all(|&y| y == 0));
    assert!(HystereticStack::new(12).unwrap().run(&s).unwrap().iter().all(|&y| y == 0));
}
