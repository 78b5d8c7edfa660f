//! Three trapezoid pulses with and without uniform noise, counted through the
//! proteretic cell and through a plain comparator.

use proteretic::harness::{run_noise_pulses, ExperimentConfig};

fn main() -> proteretic::Result<()> {
    for noise in [0.0, 0.05, 0.15, 0.35] {
        let text = format!(
            "[signal]\nkind = pulses\nrates = 1, 2, 5\nnoise = {noise}\nnoise_seed = 11\n"
        );
        let out = run_noise_pulses(&ExperimentConfig::parse(&text)?)?;
        let m = |k| out.report.metric(k).unwrap();
        println!(
            "noise {noise:.2}: cell {} clean / {} noisy transitions, comparator {}",
            m("clean_transitions"),
            m("noisy_transitions"),
            m("comparator_noisy_transitions")
        );
    }
    Ok(())
}
