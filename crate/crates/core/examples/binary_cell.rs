//! A single proteretic cell on a slow up-and-down sweep: it switches on at
//! `a` and off at `b`, the reverse of an ordinary relay.

use proteretic::{ProtereticCell, RelaySpec, RelayUnit};

fn main() -> proteretic::Result<()> {
    let (a, b) = (0.2, 0.8);
    let xs: Vec<f64> = (0..=100).chain((0..100).rev()).map(|i| i as f64 / 100.0).collect();

    let mut cell = ProtereticCell::new(a, b, xs[0])?;
    let mut relay = RelayUnit::new(RelaySpec::noninverting(b, a)?, false);
    let (mut y_cell, mut y_relay) = (false, false);
    println!("band ({a}, {b})");
    for (i, &x) in xs.iter().enumerate() {
        let dir = if i <= 100 { "up" } else { "down" };
        let c = cell.step(x)?;
        let r = relay.step(x)?;
        if c != y_cell {
            println!("  proteretic cell -> {}  at x = {x:.2} ({dir})", u8::from(c));
        }
        if r != y_relay {
            println!("  hysteretic relay -> {} at x = {x:.2} ({dir})", u8::from(r));
        }
        (y_cell, y_relay) = (c, r);
    }
    Ok(())
}
