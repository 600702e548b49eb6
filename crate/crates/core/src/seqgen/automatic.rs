use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sequence::PhaseSequence;

/// Largest length accepted by the automatic-sequence generators.
pub const MAX_AUTOMATIC_LEN: u64 = 1 << 30;

fn check_len(n_max: u64) -> Result<()> {
    if n_max == 0 || n_max > MAX_AUTOMATIC_LEN {
        return Err(Error::capacity(
            format!("automatic sequence length {n_max}"),
            format!("1..={MAX_AUTOMATIC_LEN}"),
        ));
    }
    Ok(())
}

/// `(−1)^{s₂(n)}` for `n = 0 .. n_max − 1`.
pub fn thue_morse(n_max: u64) -> Result<PhaseSequence> {
    check_len(n_max)?;
    let values = (0..n_max).map(|n| sign(n.count_ones())).collect();
    PhaseSequence::new(values, 1.0, 0)
}

/// `(−1)^{u₁₁(n)}` where `u₁₁` counts overlapping `11` blocks in binary.
pub fn rudin_shapiro(n_max: u64) -> Result<PhaseSequence> {
    check_len(n_max)?;
    let values = (0..n_max).map(|n| sign((n & (n >> 1)).count_ones())).collect();
    PhaseSequence::new(values, 1.0, 0)
}

#[inline]
fn sign(count: u32) -> Complex64 {
    Complex64::new(if count % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
}
