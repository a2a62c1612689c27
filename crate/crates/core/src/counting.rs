//! Exact configuration counts and the pigeonhole lower bound on the
//! worst-case solving length.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::CubeError;

pub type BigCount = BigUint;

fn factorial(k: u32) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

fn pow(base: u32, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), exp)
}

fn big_pow(base: &BigUint, exp: usize) -> BigUint {
    num_traits::pow(base.clone(), exp)
}

fn exact_div(a: &BigUint, b: &BigUint) -> BigUint {
    let (q, r) = a.div_rem(b);
    assert!(r.is_zero(), "division must be exact");
    q
}

/// Number of 24-cubie orbits: coupled edges, center corners and center edges.
fn big_orbit_exponent(n: usize) -> usize {
    if n % 2 == 1 {
        (n - 3) * (n + 1) / 4
    } else {
        n * (n - 2) / 4
    }
}

/// Size of the reassembly space.
pub fn s_conf_size(n: usize) -> BigCount {
    let mut v = factorial(8) * pow(3, 8) * pow(2, 12 * (n - 2)) * big_pow(&factorial(24), big_orbit_exponent(n));
    if n % 2 == 1 {
        v *= factorial(12);
    }
    v
}

/// Order of the group generated by slice moves.
pub fn group_order(n: usize) -> BigCount {
    let big = big_pow(&factorial(24), big_orbit_exponent(n));
    if n % 2 == 1 {
        let k = (n - 3) / 2;
        let num = factorial(8) * pow(3, 7) * factorial(12) * pow(2, 11) * big;
        exact_div(&num, &pow(2, k * k + k + 1))
    } else {
        let h = (n - 2) / 2;
        exact_div(&(factorial(8) * pow(3, 7) * big), &pow(2, h * h))
    }
}

/// Number of move orbits on the reassembly space, from the sign and
/// orientation choices that the solvability law leaves free.
pub fn orbit_count(n: usize) -> BigCount {
    if n % 2 == 1 {
        pow(2, (n - 3) * (n - 3) / 4 + n.div_ceil(2)) * 3u32 * pow(2, 12 * (n - 3))
    } else {
        pow(2, (n - 2) * (n - 2) / 4) * 3u32 * pow(2, 12 * (n - 2))
    }
}

/// Moves that leave the sticker coloring unchanged: rearrangements of
/// same-colored centers.
pub fn stabilizer_order(n: usize) -> BigCount {
    let base = exact_div(&pow(24, 6), &BigUint::from(2u32));
    let e = if n % 2 == 1 { (n - 3) * (n - 1) / 4 } else { (n - 2) * (n - 2) / 4 };
    big_pow(&base, e)
}

/// Number of visually distinct reachable configurations.
pub fn s_phys_size(n: usize) -> BigCount {
    exact_div(&group_order(n), &stabilizer_order(n))
}

/// Words of length `k` over the `6n` quarter turns that never contain a
/// turn followed by its inverse, nor three equal turns in a row.
pub fn reduced_sequence_count(n: usize, k: usize) -> BigCount {
    let m = BigUint::from(6 * n);
    match k {
        0 => BigUint::one(),
        1 => m,
        _ => {
            let step = &m - 2u32;
            let mut prev = m.clone();
            let mut cur = &m * (&m - 1u32);
            for _ in 2..k {
                let next = &step * (&cur + &prev);
                prev = std::mem::replace(&mut cur, next);
            }
            cur
        }
    }
}

fn decimal<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub n: usize,
    #[serde(serialize_with = "decimal")]
    pub s_phys: BigUint,
    pub basic_moves: usize,
    /// Certified enclosure of the bound.
    pub lower: f64,
    pub upper: f64,
    pub ceiling: u64,
    pub precision: u32,
}

/// Fixed-point enclosure `[lo, hi] / 2^p` of `log2(v)`.
fn log2_interval(v: &BigUint, p: u32) -> (BigUint, BigUint) {
    assert!(!v.is_zero());
    let bits = v.bits() - 1;
    let one = BigUint::one() << p;
    let two = BigUint::one() << (p + 1);
    let scale = |x: &BigUint, up: bool| -> BigUint {
        // x * 2^p / 2^bits, rounded down or up
        let shifted = x << p;
        let (q, r) = shifted.div_rem(&(BigUint::one() << bits));
        if up && !r.is_zero() {
            q + 1u32
        } else {
            q
        }
    };
    let mut lo_m = scale(v, false);
    let mut hi_m = scale(v, true);
    let mut lo_f = BigUint::zero();
    let mut hi_f = BigUint::zero();
    for k in 1..=p {
        let bit = BigUint::one() << (p - k);
        for (m, f, up) in [(&mut lo_m, &mut lo_f, false), (&mut hi_m, &mut hi_f, true)] {
            let sq = &*m * &*m;
            let (mut q, r) = sq.div_rem(&one);
            if up && !r.is_zero() {
                q += 1u32;
            }
            if q >= two {
                *f += &bit;
                let (h, r2) = q.div_rem(&BigUint::from(2u32));
                q = if up && !r2.is_zero() { h + 1u32 } else { h };
            }
            *m = q;
        }
    }
    let int = BigUint::from(bits) << p;
    (&int + lo_f, &int + hi_f + 1u32)
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    let shift = a.bits().max(b.bits()).saturating_sub(60);
    (a >> shift).to_f64().unwrap() / (b >> shift).to_f64().unwrap()
}

/// Smallest `k` with `(6n)^(k+1) >= |S_phys|`, by exact integer comparison.
pub fn exact_bound_ceiling(n: usize) -> u64 {
    let target = s_phys_size(n);
    let base = BigUint::from(6 * n);
    let mut power = base.clone();
    let mut k = 0u64;
    while power < target {
        power *= &base;
        k += 1;
    }
    k
}

/// `log |S_phys| / log 6n - 1`, enclosed with `precision` fractional bits of
/// base-2 logarithms; the ceiling is returned only once the enclosure pins it.
pub fn gods_number_lower_bound(n: usize, precision: u32) -> Result<BoundResult, CubeError> {
    if n < 2 {
        return Err(CubeError::InvalidSize(n));
    }
    let s = s_phys_size(n);
    let (num_lo, num_hi) = log2_interval(&s, precision);
    let (den_lo, den_hi) = log2_interval(&BigUint::from(6 * n), precision);
    // bound + 1 lies in [num_lo / den_hi, num_hi / den_lo]
    let c_lo = ceil_div(&num_lo, &den_hi);
    let c_hi = ceil_div(&num_hi, &den_lo);
    if c_lo != c_hi || c_lo.is_zero() {
        return Err(CubeError::PrecisionTooLow(precision));
    }
    let ceiling = (c_lo - 1u32).to_u64().expect("bound fits in u64");
    debug_assert_eq!(ceiling, exact_bound_ceiling(n));
    Ok(BoundResult {
        n,
        s_phys: s,
        basic_moves: 6 * n,
        lower: ratio_f64(&num_lo, &den_hi) - 1.0,
        upper: ratio_f64(&num_hi, &den_lo) - 1.0,
        ceiling,
        precision,
    })
}

/// Smallest `k` such that the reduced words of length at most `k` number at
/// least `|S_phys|`.
pub fn tuned_lower_bound(n: usize, precision: u32) -> Result<BoundResult, CubeError> {
    let plain = gods_number_lower_bound(n, precision)?;
    let mut total = BigUint::zero();
    let mut k = 0usize;
    loop {
        total += reduced_sequence_count(n, k);
        if total >= plain.s_phys {
            break;
        }
        k += 1;
    }
    Ok(BoundResult {
        lower: k as f64,
        upper: k as f64,
        ceiling: k as u64,
        ..plain
    })
}

fn log2_big(v: &BigUint) -> f64 {
    let shift = v.bits().saturating_sub(60);
    (v >> shift).to_f64().unwrap().log2() + shift as f64
}

/// `log2 |S_phys|` from the closed forms, usable for very large `n`.
pub fn log2_s_phys(n: usize) -> f64 {
    let n = n as f64;
    let l24 = log2_big(&factorial(24));
    let l246 = 6.0 * 24f64.log2();
    let corners = log2_big(&factorial(8)) + 7.0 * 3f64.log2();
    if n as usize % 2 == 1 {
        corners + log2_big(&factorial(12)) + 10.0 + (n - 3.0) * (n + 1.0) / 4.0 * l24
            - (n - 3.0) * (n - 1.0) / 4.0 * l246
    } else {
        corners + n * (n - 2.0) / 4.0 * l24 - (n - 2.0) * (n - 2.0) / 4.0 * l246
    }
}

/// Floating-point value of the plain bound for large `n`.
pub fn approximate_bound(n: usize) -> f64 {
    log2_s_phys(n) / ((6 * n) as f64).log2() - 1.0
}

/// `bound * log2(n) / n^2`.
pub fn normalized_bound(n: usize) -> f64 {
    approximate_bound(n) * (n as f64).log2() / (n as f64 * n as f64)
}

/// Limit of the normalized bound: `log2(24! / 24^6) / 4`.
pub fn normalized_limit() -> f64 {
    (log2_big(&factorial(24)) - 6.0 * 24f64.log2()) / 4.0
}
