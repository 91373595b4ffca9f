//! Outward-rounded real intervals over MPFR floats.
//!
//! Every operation rounds the lower end towards −∞ and the upper end towards
//! +∞, so the true value of any expression built from exact inputs lies in the
//! resulting interval.  Only the handful of operations the height code needs
//! are provided.

use rug::float::{Constant, Round};
use rug::{Float, Integer};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

fn down<T>(prec: u32, v: T) -> Float
where
    Float: rug::Assign<T>,
{
    let mut f = Float::new(prec);
    rug::Assign::assign(&mut f, v);
    f
}

macro_rules! rounded {
    ($prec:expr, $src:expr, $round:expr) => {
        Float::with_val_round($prec, $src, $round).0
    };
}

fn fmin(a: Float, b: Float) -> Float {
    if a.partial_cmp(&b) == Some(Ordering::Greater) {
        b
    } else {
        a
    }
}

fn fmax(a: Float, b: Float) -> Float {
    if a.partial_cmp(&b) == Some(Ordering::Less) {
        b
    } else {
        a
    }
}

impl Interval {
    pub fn new(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn zero(prec: u32) -> Self {
        Interval { lo: Float::new(prec), hi: Float::new(prec) }
    }

    pub fn from_f64(prec: u32, x: f64) -> Self {
        let p = prec.max(53);
        let v = down(p, x);
        Interval { lo: v.clone(), hi: v }
    }

    pub fn from_integer(prec: u32, n: &Integer) -> Self {
        Interval { lo: rounded!(prec, n, Round::Down), hi: rounded!(prec, n, Round::Up) }
    }

    pub fn from_i64(prec: u32, n: i64) -> Self {
        Self::from_integer(prec, &Integer::from(n))
    }

    /// Smallest interval containing the float `x` rounded to `prec`.
    pub fn from_float(prec: u32, x: &Float) -> Self {
        Interval { lo: rounded!(prec, x, Round::Down), hi: rounded!(prec, x, Round::Up) }
    }

    pub fn pi(prec: u32) -> Self {
        Interval { lo: rounded!(prec, Constant::Pi, Round::Down), hi: rounded!(prec, Constant::Pi, Round::Up) }
    }

    /// `log p` for a positive integer.
    pub fn ln_integer(prec: u32, n: &Integer) -> Self {
        Self::from_integer(prec + 8, n).ln().expect("log of positive integer")
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec()
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    pub fn mid(&self) -> Float {
        let p = self.prec();
        let mut m = Float::with_val(p + 1, &self.lo + &self.hi);
        m /= 2;
        m
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// Upper bound on the radius, as an `f64`.
    pub fn rad_f64(&self) -> f64 {
        let w = rounded!(self.prec(), &self.hi - &self.lo, Round::Up);
        (w.to_f64_round(Round::Up) / 2.0) * (1.0 + f64::EPSILON)
    }

    pub fn contains(&self, x: &Float) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval { lo: rounded!(p, &self.lo + &o.lo, Round::Down), hi: rounded!(p, &self.hi + &o.hi, Round::Up) }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval { lo: rounded!(p, &self.lo - &o.hi, Round::Down), hi: rounded!(p, &self.hi - &o.lo, Round::Up) }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: Float::with_val(self.prec(), -&self.hi), hi: Float::with_val(self.prec(), -&self.lo) }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let d = rounded!(p, a * b, Round::Down);
            let u = rounded!(p, a * b, Round::Up);
            lo = Some(match lo {
                None => d,
                Some(x) => fmin(x, d),
            });
            hi = Some(match hi {
                None => u,
                Some(x) => fmax(x, u),
            });
        }
        Interval { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    pub fn mul_integer(&self, n: &Integer) -> Interval {
        self.mul(&Interval::from_integer(self.prec(), n))
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        a.mul(&a)
    }

    /// Multiplication by `2^k`, exact.
    pub fn mul_2exp(&self, k: i32) -> Interval {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        if k >= 0 {
            lo <<= k as u32;
            hi <<= k as u32;
        } else {
            lo >>= (-k) as u32;
            hi >>= (-k) as u32;
        }
        Interval { lo, hi }
    }

    pub fn div(&self, o: &Interval) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let p = self.prec().max(o.prec());
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let d = rounded!(p, a / b, Round::Down);
            let u = rounded!(p, a / b, Round::Up);
            lo = Some(match lo {
                None => d,
                Some(x) => fmin(x, d),
            });
            hi = Some(match hi {
                None => u,
                Some(x) => fmax(x, u),
            });
        }
        Some(Interval { lo: lo.unwrap(), hi: hi.unwrap() })
    }

    pub fn abs(&self) -> Interval {
        let p = self.prec();
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            let m = fmax(Float::with_val(p, -&self.lo), self.hi.clone());
            Interval { lo: Float::new(p), hi: m }
        }
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval { lo: fmax(self.lo.clone(), o.lo.clone()), hi: fmax(self.hi.clone(), o.hi.clone()) }
    }

    pub fn min(&self, o: &Interval) -> Interval {
        Interval { lo: fmin(self.lo.clone(), o.lo.clone()), hi: fmin(self.hi.clone(), o.hi.clone()) }
    }

    /// Natural logarithm; `None` unless the interval is strictly positive.
    pub fn ln(&self) -> Option<Interval> {
        if !self.is_positive() {
            return None;
        }
        let p = self.prec();
        Some(Interval { lo: rounded!(p, self.lo.ln_ref(), Round::Down), hi: rounded!(p, self.hi.ln_ref(), Round::Up) })
    }

    pub fn exp(&self) -> Interval {
        let p = self.prec();
        Interval { lo: rounded!(p, self.lo.exp_ref(), Round::Down), hi: rounded!(p, self.hi.exp_ref(), Round::Up) }
    }

    pub fn sqrt(&self) -> Option<Interval> {
        if self.hi < 0 {
            return None;
        }
        let p = self.prec();
        let lo = if self.lo <= 0 { Float::new(p) } else { rounded!(p, self.lo.sqrt_ref(), Round::Down) };
        Some(Interval { lo, hi: rounded!(p, self.hi.sqrt_ref(), Round::Up) })
    }

    /// Widen by `r ≥ 0` on both sides.
    pub fn inflate(&self, r: f64) -> Interval {
        let p = self.prec();
        Interval { lo: rounded!(p, &self.lo - r, Round::Down), hi: rounded!(p, &self.hi + r, Round::Up) }
    }

    /// Intersection with `[a, b]`, if non-empty.
    pub fn clamp(&self, a: f64, b: f64) -> Option<Interval> {
        let lo = fmax(self.lo.clone(), Float::with_val(self.prec(), a));
        let hi = fmin(self.hi.clone(), Float::with_val(self.prec(), b));
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn third_is_enclosed() {
        let one = Interval::from_i64(64, 1);
        let three = Interval::from_i64(64, 3);
        let t = one.div(&three).unwrap();
        assert!(t.lo() < t.hi());
        let back = t.mul(&three);
        assert!(back.contains(&Float::with_val(64, 1)));
    }

    #[test]
    fn ln_requires_positive() {
        assert!(Interval::from_i64(64, 0).ln().is_none());
        let l = Interval::from_i64(128, 1).ln().unwrap();
        assert!(l.contains_zero());
    }

    proptest! {
        #[test]
        fn arithmetic_encloses_rational_truth(a in -1000i64..1000, b in -1000i64..1000, c in 1i64..1000) {
            // (a*b + a)/c evaluated at low precision must contain the exact rational.
            let p = 24;
            let ia = Interval::from_i64(p, a);
            let ib = Interval::from_i64(p, b);
            let ic = Interval::from_i64(p, c);
            let v = ia.mul(&ib).add(&ia).div(&ic).unwrap();
            let exact = rug::Rational::from((Integer::from(a * b + a), Integer::from(c)));
            let lo = rug::Rational::from(v.lo().to_rational().unwrap());
            let hi = rug::Rational::from(v.hi().to_rational().unwrap());
            prop_assert!(lo <= exact && exact <= hi);
        }
    }
}
