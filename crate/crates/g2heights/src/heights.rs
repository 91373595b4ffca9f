//! Naive heights, canonical heights by Tate telescoping, pairings and angles.
//!
//! `ĥ(K) = h_K(K) + μ∞(K) + Σ_p μ_p(K)` where, along the doubling orbit
//! `K_{n+1} = δ(K_n)/g_n`,
//!
//! * `μ∞ = Σ 4^{-n-1} log‖δ(v_n)‖∞` over max-normalised real vectors `v_n`
//!   (evaluated in outward-rounded interval arithmetic), and
//! * `μ_p = −Σ 4^{-n-1} v_p(g_n) log p`, tracked on `p`-adic vectors modulo
//!   `p^M` for the primes dividing `2Δ_f`.
//!
//! While the exact integer orbit stays under a bit budget it is computed too,
//! and its gcds must factor over the bad primes with the same valuations.

use crate::constants;
use crate::error::{Error, Result};
use crate::factor::{factorize, valuation};
use crate::family::QuinticCurve;
use crate::interval::Interval;
use crate::kummer::{kappa, primitive, sum_and_diff_coords, DuplicationForms, KummerCoords};
use crate::points::CurvePoint;
use rug::ops::Pow;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Mutex;

/// `log max(|s|, e²)`.
pub fn naive_height_x(p: &CurvePoint) -> Result<f64> {
    let h = p.naive_height_int().ok_or(Error::InfinityPoint)?;
    Ok(ln_integer_f64(&h))
}

/// `log max |k_i|`.
pub fn naive_hk(k: &KummerCoords) -> f64 {
    let m = k.coords().iter().map(|x| x.clone().abs()).max().expect("four coordinates");
    ln_integer_f64(&m)
}

fn ln_integer_f64(n: &Integer) -> f64 {
    Float::with_val(n.significant_bits().max(64) + 16, n).ln().to_f64()
}

fn max_abs(k: &[Integer; 4]) -> Integer {
    k.iter().map(|x| x.clone().abs()).max().expect("four coordinates")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightOptions {
    pub target_error: f64,
    pub precision_bits: u32,
    pub max_doublings: usize,
    /// Size cap (bits) for the exact integer orbit used as a cross-check.
    pub exact_bit_budget: u32,
    /// `p`-adic working precision, in bits of `p^M`.
    pub padic_bits: u32,
    /// Force exactly this many doublings (the tail bound is still reported).
    pub fixed_doublings: Option<usize>,
    pub c_arch: f64,
}

impl Default for HeightOptions {
    fn default() -> Self {
        HeightOptions {
            target_error: 1e-8,
            precision_bits: 256,
            max_doublings: 48,
            exact_bit_budget: 1 << 14,
            padic_bits: 2048,
            fixed_doublings: None,
            c_arch: constants::frozen().c_arch,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CanonicalHeightResult {
    pub value: f64,
    pub error_radius: f64,
    pub n_doublings: usize,
    /// `(p, μ_p)` for every prime dividing `2Δ_f`.
    pub prime_corrections: Vec<(Integer, f64)>,
    pub archimedean_correction: f64,
    pub naive: f64,
    /// Rigorous enclosure (rounding plus tail).
    pub enclosure: Interval,
    /// `v_p(g_n)` along the orbit, per bad prime.
    pub valuations: Vec<(Integer, Vec<u32>)>,
    /// Number of steps cross-checked against the exact integer orbit.
    pub exact_steps: usize,
}

impl CanonicalHeightResult {
    pub fn mu_p(&self, p: u64) -> f64 {
        self.prime_corrections.iter().find(|(q, _)| *q == p).map(|x| x.1).unwrap_or(0.0)
    }

    pub fn to_record(&self) -> HeightRecord {
        HeightRecord {
            value: self.value,
            err: self.error_radius,
            mu_inf: self.archimedean_correction,
            mu_p: self.prime_corrections.iter().map(|(p, v)| (p.to_string(), *v)).collect(),
            n: self.n_doublings,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightRecord {
    pub value: f64,
    pub err: f64,
    pub mu_inf: f64,
    pub mu_p: std::collections::BTreeMap<String, f64>,
    pub n: usize,
}

/// Archimedean local height `λ̂∞` of a real lift.
#[derive(Debug, Clone)]
pub struct LocalHeight {
    pub value: f64,
    pub error_radius: f64,
    pub enclosure: Interval,
}

/// Per-curve state: specialised duplication forms, bad primes, result cache.
#[derive(Debug)]
pub struct HeightContext {
    curve: QuinticCurve,
    forms: DuplicationForms,
    bad_primes: Vec<(Integer, u32)>,
    opts: HeightOptions,
    cache: Mutex<HashMap<KummerCoords, CanonicalHeightResult>>,
}

impl HeightContext {
    pub fn new(curve: &QuinticCurve, opts: HeightOptions) -> Self {
        let two_delta = Integer::from(curve.delta() * 2u32);
        let bad_primes = factorize(&two_delta)
            .into_iter()
            .map(|(p, _)| {
                let v = valuation(curve.delta(), &p) + if p == 2 { 4 } else { 0 };
                (p, v)
            })
            .collect();
        HeightContext { curve: curve.clone(), forms: DuplicationForms::new(curve), bad_primes, opts, cache: Mutex::new(HashMap::new()) }
    }

    pub fn curve(&self) -> &QuinticCurve {
        &self.curve
    }

    pub fn options(&self) -> &HeightOptions {
        &self.opts
    }

    /// `(p, v_p(2⁴Δ_f))` for each prime dividing `2Δ_f`.
    pub fn bad_primes(&self) -> &[(Integer, u32)] {
        &self.bad_primes
    }

    /// Stoll's bound `(1/3) v_p(2⁴Δ) log p`.
    pub fn stoll_bound(&self, p: &Integer) -> f64 {
        self.bad_primes.iter().find(|(q, _)| q == p).map(|(q, v)| *v as f64 * ln_integer_f64(q) / 3.0).unwrap_or(0.0)
    }

    fn arch_step_bound(&self) -> f64 {
        12.0 * self.curve.log_height() + self.opts.c_arch
    }

    fn finite_total_bound(&self) -> f64 {
        self.bad_primes.iter().map(|(p, v)| *v as f64 * ln_integer_f64(p) / 3.0).sum()
    }

    /// Rigorous bound on everything omitted after `n` doublings.
    pub fn tail_bound(&self, n: usize) -> f64 {
        let q = 4f64.powi(n as i32);
        (self.arch_step_bound() / 3.0 + self.finite_total_bound()) / q
    }

    fn doublings_for(&self, target: f64) -> Result<usize> {
        if let Some(n) = self.opts.fixed_doublings {
            return Ok(n);
        }
        let mut n = 0;
        while self.tail_bound(n) > target / 2.0 {
            n += 1;
            if n > self.opts.max_doublings {
                return Err(Error::PrecisionExhausted(format!("more than {} doublings needed", self.opts.max_doublings)));
            }
        }
        Ok(n)
    }

    /// Canonical height of a primitive Kummer point.
    pub fn canonical_height(&self, k: &KummerCoords) -> Result<CanonicalHeightResult> {
        if let Some(r) = self.cache.lock().unwrap().get(k) {
            return Ok(r.clone());
        }
        let r = self.compute(k)?;
        self.cache.lock().unwrap().entry(k.clone()).or_insert_with(|| r.clone());
        Ok(r)
    }

    pub fn point_height(&self, p: &CurvePoint) -> Result<CanonicalHeightResult> {
        self.canonical_height(&kappa(p))
    }

    fn compute(&self, k: &KummerCoords) -> Result<CanonicalHeightResult> {
        let n = self.doublings_for(self.opts.target_error)?;
        let (mu_inf, prec_used) = self.mu_infinity(k.coords(), n, self.opts.target_error / 4.0)?;
        let p = prec_used;
        let hk = Interval::ln_integer(p, &max_abs(k.coords()));
        let mut total = hk.add(&mu_inf);
        let mut prime_corrections = Vec::new();
        let mut valuations = Vec::new();
        for (prime, _) in &self.bad_primes {
            let eps = self.padic_valuations(k.coords(), prime, n)?;
            let mu = finite_correction(p, prime, &eps);
            total = total.add(&mu);
            prime_corrections.push((prime.clone(), mu.mid_f64()));
            valuations.push((prime.clone(), eps));
        }
        let exact_steps = self.exact_cross_check(k, n, &valuations)?;
        let tail = self.tail_bound(n);
        let enclosure = total.inflate(tail);
        Ok(CanonicalHeightResult {
            value: total.mid_f64(),
            error_radius: enclosure.rad_f64(),
            n_doublings: n,
            prime_corrections,
            archimedean_correction: mu_inf.mid_f64(),
            naive: hk.mid_f64(),
            enclosure,
            valuations,
            exact_steps,
        })
    }

    /// `Σ_{n<N} 4^{-n-1} log‖δ(v_n)‖∞` for the orbit of `k`, enclosed to width `≤ 2·tol`
    /// (precision doubles until it is).
    fn mu_infinity<T: Clone>(&self, k: &[T; 4], n: usize, tol: f64) -> Result<(Interval, u32)>
    where
        Interval: FromLift<T>,
    {
        let mut prec = self.opts.precision_bits;
        loop {
            if let Some(v) = self.mu_infinity_at(k, n, prec) {
                if v.rad_f64() <= tol {
                    return Ok((v, prec));
                }
            }
            prec *= 2;
            if prec > 16 * self.opts.precision_bits.max(256) {
                return Err(Error::PrecisionExhausted("archimedean interval too wide".into()));
            }
        }
    }

    fn mu_infinity_at<T: Clone>(&self, k: &[T; 4], n: usize, prec: u32) -> Option<Interval>
    where
        Interval: FromLift<T>,
    {
        let mut v: [Interval; 4] = std::array::from_fn(|i| Interval::from_lift(prec, &k[i]));
        let m = max_abs_interval(&v);
        v = normalize(&v, &m)?;
        let mut acc = Interval::zero(prec);
        for i in 0..n {
            let d = self.forms.eval(&v);
            let m = max_abs_interval(&d);
            let term = m.ln()?;
            acc = acc.add(&term.mul_2exp(-2 * (i as i32 + 1)));
            v = normalize(&d, &m)?;
        }
        Some(acc)
    }

    /// Individual increments `λ∞(2K) − 4λ∞(K)` along the orbit (calibration statistic).
    pub fn archimedean_increments(&self, k: &KummerCoords, n: usize) -> Vec<f64> {
        let prec = 128;
        let mut v: [Float; 4] = k.coords().each_ref().map(|x| Float::with_val(prec, x));
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let m = v.iter().map(|x| x.clone().abs()).fold(Float::new(prec), |a, b| a.max(&b));
            v = v.map(|x| x / &m);
            let d = self.forms.eval(&v);
            let dm = d.iter().map(|x| x.clone().abs()).fold(Float::new(prec), |a, b| a.max(&b));
            out.push(dm.clone().ln().to_f64());
            v = d;
        }
        out
    }

    /// `λ̂∞` of a real lift: `log‖K̃‖∞ + μ∞(K̃)`, converged to the configured target.
    pub fn lambda_hat_infinity(&self, lift: &[Float; 4]) -> Result<LocalHeight> {
        let arch = self.arch_step_bound();
        let mut n = 0;
        while arch / (3.0 * 4f64.powi(n as i32)) > self.opts.target_error / 2.0 {
            n += 1;
        }
        let (mu, prec) = self.mu_infinity(lift, n, self.opts.target_error / 4.0)?;
        let v: [Interval; 4] = std::array::from_fn(|i| Interval::from_float(prec, &lift[i]));
        let norm = max_abs_interval(&v).ln().ok_or(Error::DegenerateImage)?;
        let tail = arch / (3.0 * 4f64.powi(n as i32));
        let enclosure = norm.add(&mu).inflate(tail);
        Ok(LocalHeight { value: enclosure.mid_f64(), error_radius: enclosure.rad_f64(), enclosure })
    }

    /// `v_p(g_n)` for `n < N`, from `p`-adic vectors; each step spends that many digits.
    fn padic_valuations(&self, k: &[Integer; 4], p: &Integer, n: usize) -> Result<Vec<u32>> {
        let digits = (self.opts.padic_bits as f64 / (p.significant_bits() as f64 - 1.0).max(1.0)).ceil() as u32;
        let mut r = digits.max(8);
        let mut modulus = Integer::from(Pow::pow(p, r));
        let mut w: [Integer; 4] = k.clone().map(|x| x.modulo(&modulus));
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let d = self.forms.eval(&w).map(|x| x.modulo(&modulus));
            let eps = d.iter().filter(|x| **x != 0).map(|x| valuation(x, p)).min();
            let eps = match eps {
                Some(e) if e < r => e,
                _ => return Err(Error::PrecisionExhausted(format!("{p}-adic precision exhausted"))),
            };
            let scale = Integer::from(Pow::pow(p, eps));
            r -= eps;
            modulus = Integer::from(Pow::pow(p, r));
            w = d.map(|x| x.div_exact(&scale).modulo(&modulus));
            out.push(eps);
        }
        Ok(out)
    }

    /// Replays the orbit exactly while it fits the bit budget; every extracted gcd
    /// must factor over the bad primes with the `p`-adic valuations.
    fn exact_cross_check(&self, k: &KummerCoords, n: usize, vals: &[(Integer, Vec<u32>)]) -> Result<usize> {
        let mut cur = k.coords().clone();
        for step in 0..n {
            if max_abs(&cur).significant_bits() > self.opts.exact_bit_budget / 4 {
                return Ok(step);
            }
            let raw = self.forms.eval(&cur);
            let (next, g) = primitive(raw)?;
            let mut other = g.abs();
            for (p, eps) in vals {
                let v = other.remove_factor_mut(p);
                if v != eps[step] {
                    return Err(Error::Invariant(format!("v_{p}(g_{step}) = {v} but p-adic tracking gave {}", eps[step])));
                }
            }
            if other != 1 {
                return Err(Error::Invariant(format!("gcd at step {step} has good-prime cofactor {other}")));
            }
            cur = next.coords().clone();
        }
        Ok(n)
    }

    /// `⟨P, Q⟩ = (ĥ(P+Q) − ĥ(P) − ĥ(Q))/2` through the sum member.
    pub fn pairing(&self, p: &CurvePoint, q: &CurvePoint) -> Result<Interval> {
        let (sum, _) = sum_and_diff_coords(&self.curve, p, q)?;
        let hs = self.canonical_height(&sum)?.enclosure;
        let hp = self.point_height(p)?.enclosure;
        let hq = self.point_height(q)?.enclosure;
        Ok(hs.sub(&hp).sub(&hq).mul_2exp(-1))
    }

    /// `⟨P, Q⟩ = (ĥ(P) + ĥ(Q) − ĥ(P−Q))/2` through the difference member.
    pub fn pairing_via_difference(&self, p: &CurvePoint, q: &CurvePoint) -> Result<Interval> {
        let (_, diff) = sum_and_diff_coords(&self.curve, p, q)?;
        let hd = self.canonical_height(&diff)?.enclosure;
        let hp = self.point_height(p)?.enclosure;
        let hq = self.point_height(q)?.enclosure;
        Ok(hp.add(&hq).sub(&hd).mul_2exp(-1))
    }

    /// `⟨P, P⟩` via `(ĥ(2P) − 2ĥ(P))/2`.
    pub fn self_pairing(&self, p: &CurvePoint) -> Result<Interval> {
        let k = kappa(p);
        let k2 = crate::kummer::double_coords(&self.curve, &k)?;
        let h2 = self.canonical_height(&k2)?.enclosure;
        let h = self.canonical_height(&k)?.enclosure;
        Ok(h2.sub(&h.mul_2exp(1)).mul_2exp(-1))
    }

    /// `cos θ_{P,Q}` with interval error propagation.
    pub fn cos_theta(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CosTheta> {
        let hp = self.point_height(p)?.enclosure;
        let hq = self.point_height(q)?.enclosure;
        let pair = if p == q {
            self.self_pairing(p)?
        } else if p == &q.neg() {
            self.self_pairing(p)?.neg()
        } else {
            self.pairing(p, q)?
        };
        CosTheta::from_parts(&pair, &hp, &hq)
    }
}

/// Cosine of the Mordell–Weil angle, as an enclosure.
#[derive(Debug, Clone)]
pub struct CosTheta {
    pub interval: Interval,
    /// The enclosure left `[−1−ε, 1+ε]` and was clamped for reporting.
    pub clamped: bool,
}

impl CosTheta {
    pub const EPS: f64 = 1e-6;

    pub fn from_parts(pair: &Interval, hp: &Interval, hq: &Interval) -> Result<CosTheta> {
        if !hp.is_positive() || !hq.is_positive() {
            return Err(Error::TorsionOperand);
        }
        let denom = hp.mul(hq).sqrt().ok_or(Error::TorsionOperand)?;
        let c = pair.div(&denom).ok_or(Error::TorsionOperand)?;
        let lim = 1.0 + Self::EPS;
        if c.lo_f64() < -lim || c.hi_f64() > lim {
            let clamped = c.clamp(-1.0, 1.0).unwrap_or_else(|| {
                let edge = if c.lo_f64() > 0.0 { 1.0 } else { -1.0 };
                Interval::from_f64(c.prec(), edge)
            });
            return Ok(CosTheta { interval: clamped, clamped: true });
        }
        Ok(CosTheta { interval: c, clamped: false })
    }

    pub fn value(&self) -> f64 {
        self.interval.mid_f64()
    }

    pub fn radius(&self) -> f64 {
        self.interval.rad_f64()
    }
}

/// Canonical height with default options and the given target error.
pub fn canonical_height(curve: &QuinticCurve, k: &KummerCoords, target_error: f64) -> Result<CanonicalHeightResult> {
    HeightContext::new(curve, HeightOptions { target_error, ..Default::default() }).canonical_height(k)
}

pub fn pairing(curve: &QuinticCurve, p: &CurvePoint, q: &CurvePoint) -> Result<Interval> {
    HeightContext::new(curve, HeightOptions::default()).pairing(p, q)
}

pub fn cos_theta(curve: &QuinticCurve, p: &CurvePoint, q: &CurvePoint) -> Result<CosTheta> {
    HeightContext::new(curve, HeightOptions::default()).cos_theta(p, q)
}

fn finite_correction(prec: u32, p: &Integer, eps: &[u32]) -> Interval {
    // −Σ 4^{-n-1} ε_n is an exact dyadic rational.
    let mut acc = Interval::zero(prec);
    for (i, e) in eps.iter().enumerate() {
        acc = acc.add(&Interval::from_i64(prec, *e as i64).mul_2exp(-2 * (i as i32 + 1)));
    }
    acc.mul(&Interval::ln_integer(prec, p)).neg()
}

fn max_abs_interval(v: &[Interval; 4]) -> Interval {
    let mut m = v[0].abs();
    for x in &v[1..] {
        m = m.max(&x.abs());
    }
    m
}

fn normalize(v: &[Interval; 4], m: &Interval) -> Option<[Interval; 4]> {
    if !m.is_positive() {
        return None;
    }
    let out: Vec<Interval> = v.iter().map(|x| x.div(m)).collect::<Option<_>>()?;
    out.try_into().ok()
}

/// Conversion of lift coordinates into enclosing intervals.
pub trait FromLift<T> {
    fn from_lift(prec: u32, x: &T) -> Self;
}

impl FromLift<Integer> for Interval {
    fn from_lift(prec: u32, x: &Integer) -> Self {
        Interval::from_integer(prec, x)
    }
}

impl FromLift<Float> for Interval {
    fn from_lift(prec: u32, x: &Float) -> Self {
        Interval::from_float(prec, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kummer::double_coords;
    use crate::points::{search_points, SearchOptions};

    fn ctx(a: [i64; 4]) -> HeightContext {
        HeightContext::new(&QuinticCurve::from_i64(a).unwrap(), HeightOptions::default())
    }

    #[test]
    fn naive_examples() {
        assert!((naive_height_x(&CurvePoint::affine(1, 2, 0)).unwrap() - 4f64.ln()).abs() < 1e-15);
        assert_eq!(naive_height_x(&CurvePoint::affine(-1, 1, 0)).unwrap(), 0.0);
        assert!((naive_height_x(&CurvePoint::affine(7, 3, 0)).unwrap() - 9f64.ln()).abs() < 1e-15);
        assert_eq!(naive_height_x(&CurvePoint::Infinity), Err(Error::InfinityPoint));
        assert!((naive_hk(&KummerCoords::from_i64([0, 16, 4, 1]).unwrap()) - 16f64.ln()).abs() < 1e-15);
        assert_eq!(naive_hk(&KummerCoords::identity()), 0.0);
    }

    #[test]
    fn two_torsion_has_height_zero() {
        let c = ctx([0, 0, 0, 1]);
        let r = c.point_height(&CurvePoint::affine(-1, 1, 0)).unwrap();
        assert!(r.value.abs() <= r.error_radius + 1e-12, "{r:?}");
        assert!(r.value.abs() < 1e-6);
    }

    #[test]
    fn doubling_quadruples_height() {
        let c = ctx([2, 0, -3, 1]);
        for p in search_points(c.curve(), 2, 20, SearchOptions::default()).iter().filter(|p| !p.is_infinity()).take(6) {
            let k = kappa(p);
            let h1 = c.canonical_height(&k).unwrap();
            let h2 = c.canonical_height(&double_coords(c.curve(), &k).unwrap()).unwrap();
            assert!((h2.value - 4.0 * h1.value).abs() <= h2.error_radius + 4.0 * h1.error_radius, "{p}");
            assert!(h1.exact_steps > 0);
        }
    }

    #[test]
    fn error_radius_shrinks_fourfold_per_doubling() {
        let c = QuinticCurve::from_i64([1, 0, 1, 1]).unwrap();
        let k = kappa(&CurvePoint::affine(0, 1, 1));
        let radius = |n| {
            HeightContext::new(&c, HeightOptions { fixed_doublings: Some(n), ..Default::default() })
                .canonical_height(&k)
                .unwrap()
                .error_radius
        };
        for n in [6, 8, 10] {
            assert!(radius(n) / radius(n + 1) >= 3.99);
        }
    }

    #[test]
    fn result_record_shape() {
        let c = ctx([0, 0, 0, 1]);
        let r = c.point_height(&CurvePoint::affine(0, 1, 1)).unwrap();
        let j = serde_json::to_value(r.to_record()).unwrap();
        for key in ["value", "err", "mu_inf", "mu_p", "n"] {
            assert!(j.get(key).is_some());
        }
        assert!(j["mu_p"].get("2").is_some() && j["mu_p"].get("5").is_some());
    }

    #[test]
    fn angles_of_p_with_itself_and_its_negative() {
        let c = ctx([2, 0, -3, 1]);
        let p = CurvePoint::affine(1, 1, 1);
        let same = c.cos_theta(&p, &p).unwrap();
        assert!((same.value() - 1.0).abs() <= same.radius() + 1e-9);
        let opp = c.cos_theta(&p, &p.neg()).unwrap();
        assert!((opp.value() + 1.0).abs() <= opp.radius() + 1e-9);
        let t = ctx([0, 0, 0, 1]);
        assert!(matches!(t.cos_theta(&CurvePoint::affine(-1, 1, 0), &CurvePoint::affine(0, 1, 1)), Err(Error::TorsionOperand)));
    }
}
