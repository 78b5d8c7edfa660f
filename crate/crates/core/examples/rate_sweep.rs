//! Lead of the twelve-level stack over a mid-band comparator, for ramps at
//! several rates. The lead follows (b - a) / (2|R|).

use proteretic::harness::{run_rate_sweep, ExperimentConfig};

fn main() -> proteretic::Result<()> {
    let config = ExperimentConfig::parse("[device]\nM = 12\n[signal]\nkind = ramp\n")?;
    let out = run_rate_sweep(&config, &[0.5, 1.0, 2.0, 5.0, 10.0])?;
    println!("{:>6}  {:>10}  {:>10}  {:>10}", "rate", "predicted", "mean lead", "worst dev");
    for rate in ["0.5", "1", "2", "5", "10"] {
        let m = |k: &str| out.report.metric(&format!("rate={rate}:{k}")).unwrap();
        println!(
            "{rate:>6}  {:>10.4}  {:>10.4}  {:>10.4}",
            m("predicted_lead"),
            m("mean_lead"),
            m("max_deviation")
        );
    }
    println!("{}", if out.report.passed() { "all leads within 2 dt" } else { "FAILED" });
    Ok(())
}
