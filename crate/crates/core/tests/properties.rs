//! Invariants of the relay, the composed cell and the stacks, checked over
//! generated inputs.

use proptest::prelude::*;

use proteretic::analysis::{
    delay_by_xcorr, orbit_signed_area, predicted_lead, reference_quantize, transition_count,
};
use proteretic::network::{
    cell_netlist, reference_step, BlockNetwork, HystereticStack, MultinaryStack,
    ProtereticCell, Quantizer, DEFAULT_BAND,
};
use proteretic::signals::{self, Signal};
use proteretic::{RelaySpec, RelayUnit};

fn repeat<T: Clone>(v: &[T], k: usize) -> Vec<T> {
    v.iter().flat_map(|x| std::iter::repeat_n(x.clone(), k)).collect()
}

fn relay_spec() -> impl Strategy<Value = RelaySpec> {
    (-2.0..2.0f64, 0.0..1.5f64, any::<bool>()).prop_map(|(lo, width, inverting)| {
        if inverting {
            RelaySpec::inverting(lo, lo + width).unwrap()
        } else {
            RelaySpec::noninverting(lo + width, lo).unwrap()
        }
    })
}

fn cell_band() -> impl Strategy<Value = (f64, f64)> {
    (-2.0..2.0f64, 0.01..0.99f64).prop_map(|(a, w)| (a, a + w))
}

fn samples(range: f64, len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-range..range, 1..len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn relay_rate_independent(spec in relay_spec(), init: bool, xs in samples(3.0, 200), k in 1usize..8) {
        let out = RelayUnit::new(spec, init).run_samples(&xs).unwrap();
        let slow = RelayUnit::new(spec, init).run_samples(&repeat(&xs, k)).unwrap();
        prop_assert_eq!(slow, repeat(&out, k));
    }

    #[test]
    fn relay_idempotent_at_rest(spec in relay_spec(), init: bool, x in -3.0..3.0f64, n in 1usize..20) {
        let mut r = RelayUnit::new(spec, init);
        let first = r.step(x).unwrap();
        for _ in 0..n {
            prop_assert_eq!(r.step(x).unwrap(), first);
        }
    }

    #[test]
    fn relay_single_rise_on_increasing_input(set in 0.0..1.0f64, width in 0.0..1.0f64, n in 10usize..500) {
        let reset = set - width;
        let xs: Vec<f64> = (0..n).map(|i| reset - 0.5 + (width + 1.0) * i as f64 / (n - 1) as f64).collect();
        let out = RelayUnit::new(RelaySpec::noninverting(set, reset).unwrap(), false)
            .run_samples(&xs)
            .unwrap();
        let levels: Vec<usize> = out.iter().map(|&b| usize::from(b)).collect();
        prop_assert_eq!(transition_count(&levels), 1);
        let first = xs.iter().position(|&x| x > set).unwrap();
        prop_assert!(!out[first - 1] && out[first]);
    }

    #[test]
    fn cell_matches_reference_and_network((a, b) in cell_band(), xs in samples(3.5, 300)) {
        let x0 = xs[0];
        let mut cell = ProtereticCell::new(a, b, x0).unwrap();
        let mut state = cell.state();
        let mut net = BlockNetwork::parse(&cell_netlist(a, b, x0).unwrap()).unwrap();
        for &x in &xs {
            let y = cell.step(x).unwrap();
            let (next, y_ref) = reference_step(state, a, b, x).unwrap();
            state = next;
            prop_assert_eq!(y, y_ref);
            prop_assert_eq!(state, cell.state());
            prop_assert_eq!(net.step(x).unwrap(), f64::from(u8::from(y)));
        }
    }

    #[test]
    fn cell_rate_independent((a, b) in cell_band(), xs in samples(3.5, 200), k in 1usize..8) {
        let out = ProtereticCell::new(a, b, xs[0]).unwrap().run_samples(&xs).unwrap();
        let slow = ProtereticCell::new(a, b, xs[0]).unwrap().run_samples(&repeat(&xs, k)).unwrap();
        prop_assert_eq!(slow, repeat(&out, k));
    }

    #[test]
    fn stack_rate_independent_and_bounded(m in 1usize..13, xs in samples(14.0, 200), k in 1usize..5) {
        let out = MultinaryStack::new(m).unwrap().run_samples(&xs).unwrap();
        prop_assert!(out.iter().all(|&y| y <= m));
        let slow = MultinaryStack::new(m).unwrap().run_samples(&repeat(&xs, k)).unwrap();
        prop_assert_eq!(slow, repeat(&out, k));
    }

    #[test]
    fn stack_is_sum_of_independent_cells(m in 1usize..13, xs in samples(14.0, 200)) {
        let stack = MultinaryStack::new(m).unwrap();
        let mut cells: Vec<ProtereticCell> = stack.cells().to_vec();
        let mut stack = stack;
        for &x in &xs {
            let total = stack.step(x).unwrap();
            let separate: usize = cells.iter_mut().map(|c| usize::from(c.step(x).unwrap())).sum();
            prop_assert_eq!(total, separate);
        }
    }

    #[test]
    fn stack_moves_one_level_per_step_on_triangles(m in 1usize..13, per_half in 50usize..400) {
        let s = signals::triangle(0.0, m as f64, 2.0 * per_half as f64 * 0.01, 0.01, 2).unwrap();
        prop_assume!(s.max_rate() * 0.01 <= DEFAULT_BAND / 4.0);
        for ys in [
            MultinaryStack::new(m).unwrap().run(&s).unwrap(),
            HystereticStack::new(m).unwrap().run(&s).unwrap(),
        ] {
            prop_assert!(ys.windows(2).all(|w| w[0].abs_diff(w[1]) <= 1));
        }
    }

    #[test]
    fn deterministic_runs(seed: u64) {
        let s = signals::smooth_random(seed, 0.0, 12.0, 2.0, 2.0, 1e-3).unwrap();
        let a = MultinaryStack::new(12).unwrap().run(&s).unwrap();
        let b = MultinaryStack::new(12).unwrap().run(&s).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn predicted_lead_inverse_in_rate(a in -5.0..5.0f64, w in 0.0..1.0f64, r in 0.01..100.0f64) {
        let once = predicted_lead(a, a + w, r).unwrap();
        let twice = predicted_lead(a, a + w, 2.0 * r).unwrap();
        prop_assert_eq!(once, 2.0 * twice);
        prop_assert_eq!(once, predicted_lead(a, a + w, -r).unwrap());
    }

    #[test]
    fn reference_quantize_monotone(x in -5.0..20.0f64, dx in 0.0..5.0f64, m in 1usize..16) {
        prop_assert!(reference_quantize(x, m) <= reference_quantize(x + dx, m));
        prop_assert!(reference_quantize(x, m) <= m);
    }

    #[test]
    fn xcorr_recovers_shift(seed: u64, shift in 0usize..40) {
        let s = signals::smooth_random(seed, 0.0, 6.0, 3.0, 2.0, 5e-3).unwrap();
        let levels: Vec<usize> = s.samples().iter().map(|&x| reference_quantize(x, 6)).collect();
        prop_assume!(levels.iter().any(|&l| l != levels[0]));
        let n = levels.len();
        let y = &levels[shift..];
        let y_ref = &levels[..n - shift];
        let d = delay_by_xcorr(y, y_ref, 60, 5e-3).unwrap();
        prop_assert_eq!(d, shift as f64 * 5e-3);
    }

    #[test]
    fn signals_satisfy_invariants(seed: u64, lo in -5.0..5.0f64, span in 0.1..10.0f64, rate in 0.1..10.0f64) {
        let s = signals::smooth_random(seed, lo, lo + span, rate, 3.0, 1e-3).unwrap();
        prop_assert!(s.samples().iter().all(|&x| x >= lo && x <= lo + span));
        prop_assert!(s.max_rate() <= rate);
        prop_assert!((s.duration() - 3.0).abs() <= s.dt());
        let noisy = signals::add_noise(&s, 0.2, seed).unwrap();
        prop_assert!(noisy.samples().iter().zip(s.samples()).all(|(n, c)| (n - c).abs() <= 0.2));
    }
}

#[test]
fn generator_slopes_match_declared_rates() {
    let close = |measured: f64, declared: f64| (measured - declared).abs() <= 1e-9 * declared.abs().max(1.0);
    let r = signals::ramp(2.5, -1.0, 4.0, 1e-3).unwrap();
    assert!(r.samples().windows(2).all(|w| close((w[1] - w[0]) / 1e-3, 2.5)));
    let t = signals::triangle(0.0, 3.0, 2.0, 1e-3, 2).unwrap();
    assert!(t.samples().windows(2).all(|w| close(((w[1] - w[0]) / 1e-3).abs(), 3.0)));
    let (p, spans) = signals::trapezoid_pulses_with_spans(&[1.0, 4.0], 0.0, 1.0, 0.5, 0.5, 1e-3).unwrap();
    for (span, rate) in spans.iter().zip([1.0, 4.0]) {
        let xs = &p.samples()[span.start - 1..span.end];
        assert!(xs
            .windows(2)
            .map(|w| ((w[1] - w[0]) / 1e-3).abs())
            .all(|s| s == 0.0 || close(s, rate)));
    }
}

#[test]
fn signed_area_antisymmetry_for_mirrored_bands() {
    // dt = period / 4000
    let s = signals::triangle(0.0, 12.0, 40.0, 0.01, 1).unwrap();
    let period = 4000;
    let prot: Vec<f64> = MultinaryStack::new(12).unwrap().run(&s).unwrap().iter().map(|&l| l as f64).collect();
    let hyst: Vec<f64> = HystereticStack::new(12).unwrap().run(&s).unwrap().iter().map(|&l| l as f64).collect();
    let ap = orbit_signed_area(s.samples(), &prot, period).unwrap();
    let ah = orbit_signed_area(s.samples(), &hyst, period).unwrap();
    assert!(ap > 0.0 && ah < 0.0);
    assert!((ap + ah).abs() <= 0.02 * ap.abs(), "{ap} vs {ah}");
}

#[test]
fn in_band_reversal_can_drop_two_levels() {
    // Rise into band 3 (a = 2.2), reverse before b = 2.8, then keep falling.
    let mut up: Vec<f64> = (0..=250).map(|i| i as f64 * 0.01).collect();
    let down: Vec<f64> = (1..=200).map(|i| 2.5 - i as f64 * 0.01).collect();
    up.extend(down);
    let s = Signal::from_samples(0.01, up).unwrap();
    let ys = MultinaryStack::new(3).unwrap().run(&s).unwrap();
    assert_eq!(*ys.iter().max().unwrap(), 3);
    // cell 3 only releases below b - 1 = 1.8, the same input at which cell 2
    // releases, so the level falls by two at (or within one sample of) x = 1.8
    let peak = ys.iter().position(|&y| y == 3).unwrap();
    let i = peak + ys[peak..].iter().position(|&y| y < 3).unwrap();
    assert!((s.samples()[i] - 1.8).abs() <= 0.011, "{}", s.samples()[i]);
    assert!(ys[i] == 1 || ys[i + 1] == 1, "{:?}", &ys[i..i + 2]);
}
