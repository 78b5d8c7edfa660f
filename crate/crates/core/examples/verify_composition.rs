//! Runs the two-relay cell, its closed-form reference machine and the block
//! netlist side by side, then shows that evaluating the relays in the wrong
//! order is caught once the input can hop a band in one sample.

use proteretic::harness::{run_verify, VerifyOptions};
use proteretic::network::EvalOrder;

fn main() -> proteretic::Result<()> {
    let ok = run_verify(200, 7, VerifyOptions::default())?;
    println!("well sampled, A before B: {} divergent trials of 200", ok.divergent_trials);

    let options = VerifyOptions {
        order: EvalOrder::Reversed,
        coarse: true,
    };
    let bad = run_verify(200, 7, options)?;
    println!("band hopping, B before A: {} divergent trials of 200", bad.divergent_trials);
    if let Some(d) = bad.first_divergence {
        println!(
            "  first: trial {} sample {} x = {:.3}, band ({:.3}, {:.3}): cell {} reference {}",
            d.trial, d.index, d.input, d.a, d.b, d.cell, d.reference
        );
    }
    Ok(())
}
