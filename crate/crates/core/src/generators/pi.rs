//! Binary expansion of π by fixed-point Machin evaluation.

use num_bigint::BigUint;

use crate::bits::BitSequence;

// Sum of scale / ((2k+1) x^(2k+1)) with alternating signs, and the number of
// truncated divisions performed.
fn arctan_inverse(x: u32, scale: &BigUint) -> (BigUint, u64) {
    let x2 = BigUint::from(x) * x;
    let mut power = scale / x;
    let mut positive = BigUint::default();
    let mut negative = BigUint::default();
    let mut k = 0u32;
    let mut divisions = 1u64;
    while power.bits() > 0 {
        let term = &power / (2 * k + 1);
        if k.is_multiple_of(2) {
            positive += term;
        } else {
            negative += term;
        }
        power /= &x2;
        divisions += 2;
        k += 1;
    }
    (positive - negative, divisions)
}

/// The first `count` bits after the binary point of π.
pub fn pi_bits(count: usize) -> BitSequence {
    let mut guard = 32usize;
    loop {
        let scale = BigUint::from(1u8) << (count + guard);
        let (a5, e5) = arctan_inverse(5, &scale);
        let (a239, e239) = arctan_inverse(239, &scale);
        // pi * scale = 16 atan(1/5) - 4 atan(1/239); each truncation loses < 1 ulp.
        let approx = a5 * 16u32 - a239 * 4u32;
        let error = 16 * e5 + 4 * e239 + 8;
        let low_mask = (BigUint::from(1u8) << guard) - 1u8;
        let low = &approx & &low_mask;
        let margin = BigUint::from(error);
        if low >= margin && low <= &low_mask - &margin {
            let integer_and_fraction = approx >> guard;
            let fraction_mask = (BigUint::from(1u8) << count) - 1u8;
            let fraction = integer_and_fraction & fraction_mask;
            let bytes = fraction.to_bytes_be();
            let mut padded = BitSequence::from_bytes(&bytes);
            let lead = padded.len().saturating_sub(count);
            let mut out = BitSequence::repeat(false, count.saturating_sub(padded.len()));
            padded = padded.slice(lead, padded.len());
            out.extend_from(&padded);
            return out;
        }
        guard *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_bits() {
        assert!(pi_bits(0).is_empty());
        assert_eq!(pi_bits(4).to_string(), "0010");
        assert_eq!(pi_bits(16).to_string(), "0010010000111111");
        assert_eq!(pi_bits(1).to_string(), "0");
        assert_eq!(pi_bits(3).to_string(), "001");
    }

    #[test]
    fn prefix_coherent() {
        let long = pi_bits(700);
        for count in [1, 7, 63, 64, 65, 128, 333] {
            assert!(pi_bits(count).is_prefix_of(&long), "count {count}");
        }
    }
}
