//! Input strings `x = x₁x₂…xₙ` are stored as integers with `x₁` the most
//! significant bit, so `"01"` is `1` and `"10"` is `2`. Bit indices are 1-based.

use crate::error::{RacError, Result};
use crate::qstate::Bit;

/// Bit `x_i` of the `n`-bit input `x`.
#[inline]
pub fn input_bit(x: usize, i: usize, n: usize) -> Bit {
    debug_assert!((1..=n).contains(&i));
    ((x >> (n - i)) & 1) as Bit
}

pub fn input_label(x: usize, n: usize) -> String {
    (1..=n).map(|i| if input_bit(x, i, n) == 1 { '1' } else { '0' }).collect()
}

pub fn parse_input(label: &str, n: usize) -> Result<usize> {
    if label.len() != n || !label.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(RacError::Config(format!("'{label}' is not a {n}-bit input string")));
    }
    Ok(label.bytes().fold(0usize, |acc, b| (acc << 1) | usize::from(b - b'0')))
}

pub fn parse_index(label: &str, n: usize) -> Result<usize> {
    match label.parse::<usize>() {
        Ok(i) if (1..=n).contains(&i) => Ok(i),
        _ => Err(RacError::Config(format!("'{label}' is not a bit index in 1..={n}"))),
    }
}
