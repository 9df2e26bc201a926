//! Arithmetic in GF(2^8) modulo the Rijndael polynomial x^8 + x^4 + x^3 + x + 1.

/// Low byte of the reduction polynomial (0x11b).
const REDUCTION: u8 = 0x1b;

/// Multiplication by `x`.
#[inline]
pub fn xtime(a: u8) -> u8 {
    let carry = a & 0x80;
    let shifted = a << 1;
    if carry != 0 {
        shifted ^ REDUCTION
    } else {
        shifted
    }
}

/// Shift-and-add multiplication.
pub fn mul(mut a: u8, mut b: u8) -> u8 {
    let mut acc = 0u8;
    while a != 0 && b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a = xtime(a);
        b >>= 1;
    }
    acc
}

/// Multiplicative inverse, with 0 mapped to 0 as in the S-box construction.
///
/// Uses a^254 = a^-1, since the multiplicative group has order 255.
pub fn inv(a: u8) -> u8 {
    if a == 0 {
        return 0;
    }
    let mut result = 1u8;
    let mut base = a;
    let mut exp = 254u8;
    while exp != 0 {
        if exp & 1 != 0 {
            result = mul(result, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    result
}
