//! Feedforward compositions of relays.

mod block;
mod cell;
mod stack;

pub use block::{cell_netlist, BlockKind, BlockNetwork, NetworkBuilder};
pub use cell::{reference_step, CellState, EvalOrder, ProtereticCell};
pub use stack::{
    Comparator, HystereticStack, MultinaryStack, Quantizer, ThresholdOverride, DEFAULT_BAND,
};

/// Warns (through `log`) when consecutive samples move by more than a quarter
/// of `band`, which lets the input hop a band within one step.
pub(crate) fn warn_if_undersampled(samples: &[f64], band: f64, who: &str) {
    let worst = samples
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    if worst > band / 4.0 {
        log::warn!(
            "{who}: input moves {worst} per sample, more than band/4 = {}; \
             discrete results may diverge from continuous-time behaviour",
            band / 4.0
        );
    }
}
