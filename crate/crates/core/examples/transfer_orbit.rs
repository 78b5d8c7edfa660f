//! Signed area of the input/output orbit under a triangle input: positive
//! (clockwise) for proteretic devices, negative for hysteretic ones, near
//! zero for the memoryless comparator.

use proteretic::harness::{run_transfer, DeviceKind, ExperimentConfig};

fn main() -> proteretic::Result<()> {
    for levels in [1, 12] {
        let text = format!(
            "[device]\nM = {levels}\n[signal]\nkind = triangle\nmin = 0\nmax = {levels}\nperiod = {}\n",
            4 * levels
        );
        for kind in [DeviceKind::Proteretic, DeviceKind::Hysteretic, DeviceKind::Comparator] {
            let mut config = ExperimentConfig::parse(&text)?;
            config.device.kind = kind;
            let out = run_transfer(&config)?;
            let area = out.report.metric("orbit_signed_area").unwrap();
            println!("M = {levels:2}  {:<11} area {area:+.4}", kind.as_str());
        }
    }
    Ok(())
}
