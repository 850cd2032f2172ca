//! Rigorous rational enclosures of cyclotomic numbers.
//!
//! Endpoints are dyadic rationals on a grid that depends only on the requested
//! precision rung, so the enclosure for a higher precision always lies inside
//! the enclosure for a lower one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclotomic::CycNumber;

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(q: BigRational) -> Self {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    fn scale(&self, q: &BigRational) -> Interval {
        if q.is_negative() {
            Interval {
                lo: &self.hi * q,
                hi: &self.lo * q,
            }
        } else {
            Interval {
                lo: &self.lo * q,
                hi: &self.hi * q,
            }
        }
    }

    fn round_outward(&self, bits: u32) -> Interval {
        Interval {
            lo: floor_dyadic(&self.lo, bits),
            hi: ceil_dyadic(&self.hi, bits),
        }
    }
}

/// Rectangular complex enclosure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn re_lo(&self) -> &BigRational {
        &self.re.lo
    }

    pub fn re_hi(&self) -> &BigRational {
        &self.re.hi
    }

    /// Larger of the two side lengths.
    pub fn width(&self) -> BigRational {
        let a = self.re.width();
        let b = self.im.width();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn contains(&self, other: &ComplexInterval) -> bool {
        self.re.contains_interval(&other.re) && self.im.contains_interval(&other.im)
    }

    pub fn contains_f64(&self, re: f64, im: f64) -> bool {
        match (BigRational::from_float(re), BigRational::from_float(im)) {
            (Some(r), Some(i)) => self.re.contains(&r) && self.im.contains(&i),
            _ => false,
        }
    }

    pub fn midpoint_f64(&self) -> (f64, f64) {
        let two = BigRational::from_integer(2.into());
        let r = (&self.re.lo + &self.re.hi) / &two;
        let i = (&self.im.lo + &self.im.hi) / &two;
        (r.to_f64().unwrap_or(f64::NAN), i.to_f64().unwrap_or(f64::NAN))
    }
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

fn floor_dyadic(q: &BigRational, bits: u32) -> BigRational {
    let s = pow2(bits);
    let n = (q.numer() * &s).div_floor(q.denom());
    BigRational::new(n, s)
}

fn ceil_dyadic(q: &BigRational, bits: u32) -> BigRational {
    let s = pow2(bits);
    let n = (q.numer() * &s).div_ceil(q.denom());
    BigRational::new(n, s)
}

/// Enclosure of `atan(1/m)` with error below `2^-bits`, from consecutive
/// partial sums of the alternating series.
fn atan_inv(m: u64, bits: u32) -> Interval {
    let m = BigInt::from(m);
    let m2 = &m * &m;
    let eps = BigRational::new(BigInt::one(), pow2(bits));
    let mut sum = BigRational::zero();
    let mut mpow = m.clone();
    let mut k: u64 = 0;
    loop {
        let term = BigRational::new(BigInt::one(), BigInt::from(2 * k + 1) * &mpow);
        let next = if k.is_multiple_of(2) { &sum + &term } else { &sum - &term };
        if term < eps {
            let (lo, hi) = if next < sum { (next, sum) } else { (sum, next) };
            return Interval { lo, hi };
        }
        sum = next;
        mpow *= &m2;
        k += 1;
    }
}

/// Enclosure of `pi` via Machin's formula.
fn pi_interval(bits: u32) -> Interval {
    let a = atan_inv(5, bits + 6);
    let b = atan_inv(239, bits + 6);
    let sixteen = BigRational::from_integer(16.into());
    let four = BigRational::from_integer(4.into());
    Interval {
        lo: &a.lo * &sixteen - &b.hi * &four,
        hi: &a.hi * &sixteen - &b.lo * &four,
    }
    .round_outward(bits + 4)
}

/// Enclosures of `cos t` and `sin t` for `t` in the nonnegative interval `t`.
fn cos_sin(t: &Interval, bits: u32) -> (Interval, Interval) {
    let eps = BigRational::new(BigInt::one(), pow2(bits));
    let mut cos = Interval::point(BigRational::zero());
    let mut sin = Interval::point(BigRational::zero());
    // term_j spans [t.lo^j / j!, t.hi^j / j!]
    let mut term = Interval::point(BigRational::one());
    let mut j: u64 = 0;
    loop {
        let signed = match j % 4 {
            0 | 1 => term.clone(),
            _ => Interval {
                lo: -&term.hi,
                hi: -&term.lo,
            },
        };
        if j.is_multiple_of(2) {
            cos = cos.add(&signed);
        } else {
            sin = sin.add(&signed);
        }
        j += 1;
        let jq = BigRational::from_integer(BigInt::from(j));
        term = Interval {
            lo: (&term.lo * &t.lo / &jq),
            hi: (&term.hi * &t.hi / &jq),
        }
        .round_outward(bits + 8);
        // the tail is bounded by the first omitted term once terms decrease
        if jq > t.hi && term.hi < eps {
            let r = Interval {
                lo: -&term.hi,
                hi: term.hi.clone(),
            };
            return (cos.add(&r), sin.add(&r));
        }
    }
}

fn rung(precision: u32) -> u32 {
    (precision.max(4) / 4) * 4
}

/// Enclosure of `x` on the dyadic grid for `precision`.
pub fn enclose(x: &CycNumber, precision: u32) -> ComplexInterval {
    if let Some(q) = x.to_rational() {
        return ComplexInterval {
            re: Interval::point(q),
            im: Interval::point(BigRational::zero()),
        };
    }
    let g = rung(precision);
    let mag: BigRational = x.coeffs().iter().map(|c| c.abs()).sum();
    let mag_bits = mag.ceil().to_integer().bits() as u32;
    let work = g + 16 + mag_bits + 2 * x.coeffs().len().next_power_of_two().trailing_zeros();
    let n = x.order() as i64;
    let pi = pi_interval(work + 8);
    let mut re = Interval::point(BigRational::zero());
    let mut im = Interval::point(BigRational::zero());
    for (k, c) in x.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let frac = BigRational::new(BigInt::from(2 * k as i64), BigInt::from(n));
        let t = pi.scale(&frac);
        let (cs, sn) = cos_sin(&t, work + 8);
        re = re.add(&cs.scale(c));
        im = im.add(&sn.scale(c));
    }
    // strict outward step of one grid unit guarantees nesting across rungs
    let ulp = BigRational::new(BigInt::one(), pow2(g));
    let widen = |iv: Interval| {
        let r = iv.round_outward(g);
        Interval {
            lo: r.lo - &ulp,
            hi: r.hi + &ulp,
        }
    };
    ComplexInterval {
        re: widen(re),
        im: widen(im),
    }
}
