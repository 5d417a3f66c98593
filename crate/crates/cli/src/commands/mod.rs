pub mod capacity;
pub mod combine_lfdr;
pub mod combine_probs;
pub mod figures;
pub mod simulate;

/// Nats-to-bits rescale for display.
pub(crate) fn in_unit(nats: f64, bits: bool) -> f64 {
    if bits {
        nats / core::f64::consts::LN_2
    } else {
        nats
    }
}
