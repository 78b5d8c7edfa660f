//! The twelve-level quantiser on a smooth random input. Its output leads the
//! comparator's; the mirrored hysteretic stack lags by about as much.
//!
//! Pass a path to also write the time series as CSV.

use proteretic::harness::{run_dodecanary, DeviceKind, ExperimentConfig};

const CONFIG: &str = "\
[run]
duration = 20
seed = 42
[device]
M = 12
[signal]
kind = smooth_random
lo = 0
hi = 12
max_rate = 2
";

fn main() -> proteretic::Result<()> {
    for kind in [DeviceKind::Proteretic, DeviceKind::Hysteretic] {
        let mut config = ExperimentConfig::parse(CONFIG)?;
        config.device.kind = kind;
        let out = run_dodecanary(&config)?;
        let m = |k| out.report.metric(k).unwrap();
        println!(
            "{:<10}  xcorr lead {:+.3} s   constant-rate lead {:+.3} s (predicted {:+.3})",
            kind.as_str(),
            m("xcorr_lead"),
            m("constant_rate_xcorr_lead"),
            m("constant_rate_predicted_lead")
        );
        if let (DeviceKind::Proteretic, Some(path)) = (kind, std::env::args().nth(1)) {
            std::fs::write(&path, out.render_csv(None)?).map_err(|e| proteretic::Error::Io {
                path: path.clone(),
                message: e.to_string(),
            })?;
            println!("wrote {path}");
        }
    }
    Ok(())
}
