//! Gray-coded M-ary PSK mapping and slicing.
//!
//! Constellation position `p` sits at angle 2πp/M and carries the bit
//! pattern `gray(p) = p ^ (p >> 1)`, so adjacent positions differ in one bit.

use crate::Cplx;
use std::f64::consts::PI;

#[inline]
pub fn gray_encode(p: usize) -> usize {
    p ^ (p >> 1)
}

#[inline]
pub fn gray_decode(mut g: usize) -> usize {
    let mut p = 0;
    while g != 0 {
        p ^= g;
        g >>= 1;
    }
    p
}

/// Angle (radians) transmitted for bit value `v` with order M = 2^b_m.
pub fn angle_for_bits(v: usize, m: usize, gray: bool) -> f64 {
    let p = if gray { gray_decode(v) } else { v };
    2.0 * PI * p as f64 / m as f64
}

/// PSK symbol for bit value `v`.
pub fn symbol_for_bits(v: usize, m: usize, gray: bool) -> Cplx {
    Cplx::from_polar(1.0, angle_for_bits(v, m, gray))
}

/// Nearest constellation position to `z` by angle.
pub fn slice_position(z: Cplx, m: usize) -> usize {
    let step = 2.0 * PI / m as f64;
    let p = (z.arg() / step).round() as i64;
    p.rem_euclid(m as i64) as usize
}

/// Bit value recovered from `z`.
pub fn slice_bits(z: Cplx, m: usize, gray: bool) -> usize {
    let p = slice_position(z, m);
    if gray {
        gray_encode(p)
    } else {
        p
    }
}
