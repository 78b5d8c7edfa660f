//! Builds the two-relay cell as a block netlist, prints its evaluation order
//! and checks it against the composed cell. A feedback wire is rejected.

use proteretic::network::cell_netlist;
use proteretic::{BlockNetwork, ProtereticCell};

fn main() -> proteretic::Result<()> {
    let text = cell_netlist(0.2, 0.8, 0.0)?;
    println!("{text}");
    let mut net = BlockNetwork::parse(&text)?;
    println!("evaluation order: {:?}", net.evaluation_order());

    let mut cell = ProtereticCell::new(0.2, 0.8, 0.0)?;
    let xs = [0.0, 0.3, 0.9, 0.7, 0.5, 1.3, 0.1, -0.3];
    for &x in &xs {
        let y = net.step(x)?;
        assert_eq!(y, f64::from(u8::from(cell.step(x)?)));
        println!("x = {x:5.2}  y = {y}");
    }

    let looped = text.replace("wire in, A -> sum", "wire in, B -> sum");
    match BlockNetwork::parse(&looped) {
        Err(e) => println!("feedback rejected: {e}"),
        Ok(_) => println!("feedback unexpectedly accepted"),
    }
    Ok(())
}
