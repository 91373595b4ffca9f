//! Kabatiansky–Levenshtein exponent and the two angle optimisations for the
//! large-point bound.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KLResult {
    pub eta: f64,
    /// `e^bracket`: the per-dimension growth rate of a code with `cos θ ≤ η`.
    pub exponent_base: f64,
    pub bracket: f64,
}

fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// With `s = sin(arccos η)`:
/// `((1+s)/(2s)) log((1+s)/(2s)) − ((1−s)/(2s)) log((1−s)/(2s))`.
pub fn kl_exponent(eta: f64) -> Result<KLResult> {
    if !(eta > -1.0 && eta < 1.0) {
        return Err(Error::DomainError(format!("η = {eta} outside (−1, 1)")));
    }
    let s = eta.acos().sin();
    let bracket = xlogx((1.0 + s) / (2.0 * s)) - xlogx((1.0 - s) / (2.0 * s));
    Ok(KLResult { eta, exponent_base: bracket.exp(), bracket })
}

fn base(eta: f64) -> f64 {
    kl_exponent(eta).map(|r| r.exponent_base).unwrap_or(f64::INFINITY)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub alpha_star: f64,
    /// Base for the separated set `S` (`cos θ ≤ α`).
    pub base_s: f64,
    /// Base for one cluster around a point of `S`.
    pub base_cluster: f64,
    pub product: f64,
    /// `false` if the grid pre-scan saw more than one local minimum.
    pub unimodal: bool,
}

const GRID: usize = 10_000;
const TOL: f64 = 1e-9;

/// Minimises `obj` on `(lo, hi]`: grid pre-scan, then golden section around the
/// best grid point.
fn minimise(lo: f64, hi: f64, obj: impl Fn(f64) -> f64) -> (f64, bool) {
    let step = (hi - lo) / GRID as f64;
    let xs: Vec<f64> = (1..=GRID).map(|k| lo + step * k as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| obj(x)).collect();
    let best = (0..GRID).min_by(|&a, &b| ys[a].partial_cmp(&ys[b]).unwrap()).expect("nonempty grid");
    let minima = (1..GRID - 1).filter(|&k| ys[k] < ys[k - 1] && ys[k] < ys[k + 1]).count();
    let (mut a, mut b) = (xs[best.saturating_sub(1)].max(lo + step * 0.5), xs[(best + 1).min(GRID - 1)]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    while b - a > TOL {
        if obj(c) < obj(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    let x = (a + b) / 2.0;
    let x = if obj(x) <= ys[best] { x } else { xs[best] };
    (x, minima <= 1)
}

/// Genus 2: minimise `KL(α) · KL(6 − 8α)` over `α ∈ (1/√2, 3/4]`.
pub fn optimize_genus2() -> Optimum {
    let obj = |a: f64| base(a) * base(6.0 - 8.0 * a);
    let (alpha, unimodal) = minimise(std::f64::consts::FRAC_1_SQRT_2, 0.75, obj);
    let (bs, bc) = (base(alpha), base(6.0 - 8.0 * alpha));
    Optimum { alpha_star: alpha, base_s: bs, base_cluster: bc, product: bs * bc, unimodal }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Genus {
    Finite(u32),
    Infinity,
}

/// Admissible `α`-interval `(max(1/√g, ¼ + 3/(4g)), ½ + 1/(2g))`.
pub fn alpha_interval(g: Genus) -> (f64, f64) {
    match g {
        Genus::Finite(g) => {
            let g = g as f64;
            ((1.0 / g.sqrt()).max(0.25 + 0.75 / g), 0.5 + 0.5 / g)
        }
        Genus::Infinity => (0.25, 0.5),
    }
}

/// Cluster cosine bound `(1 + 1/g − 2α)/(½ − 1/(2g))`; `2 − 4α` in the limit.
pub fn second_argument(g: Genus, alpha: f64) -> f64 {
    match g {
        Genus::Finite(g) => {
            let g = g as f64;
            (1.0 + 1.0 / g - 2.0 * alpha) / (0.5 - 0.5 / g)
        }
        Genus::Infinity => 2.0 - 4.0 * alpha,
    }
}

pub fn optimize_general_genus(g: Genus) -> Result<Optimum> {
    if let Genus::Finite(n) = g {
        if n < 2 {
            return Err(Error::DomainError(format!("genus {n} < 2")));
        }
    }
    let (lo, hi) = alpha_interval(g);
    if lo >= hi {
        return Err(Error::EmptyInterval(lo, hi));
    }
    let obj = |a: f64| base(a) * base(second_argument(g, a));
    let (alpha, unimodal) = minimise(lo, hi, obj);
    let (bs, bc) = (base(alpha), base(second_argument(g, alpha)));
    Ok(Optimum { alpha_star: alpha, base_s: bs, base_cluster: bc, product: bs * bc, unimodal })
}

/// `(η, base)` rows for the CLI table.
pub fn table(etas: &[f64]) -> Vec<KLResult> {
    etas.iter().filter_map(|&e| kl_exponent(e).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    /// High-precision evaluation of the same bracket, written independently.
    fn oracle(eta: f64) -> f64 {
        let p = 200;
        let e = Float::with_val(p, eta);
        let s = (Float::with_val(p, 1) - e.square()).sqrt();
        let two_s = Float::with_val(p, &s * 2u32);
        let u = Float::with_val(p, &s + 1u32) / &two_s;
        let v = (1u32 - s) / &two_s;
        let lu = Float::with_val(p, u.ln_ref()) * &u;
        let lv = if v.is_zero() { Float::new(p) } else { Float::with_val(p, v.ln_ref()) * &v };
        (lu - lv).exp().to_f64()
    }

    #[test]
    fn anchors() {
        assert_eq!(kl_exponent(0.0).unwrap().exponent_base, 1.0);
        assert!((kl_exponent(64.0 / 95.0).unwrap().exponent_base - 1.645).abs() < 1e-3);
        assert!((kl_exponent(0.75).unwrap().exponent_base - 1.888).abs() < 1e-3);
        for eta in [0.1, 39.0 / 59.0, 64.0 / 95.0, 0.75, 0.9] {
            assert!((kl_exponent(eta).unwrap().exponent_base - oracle(eta)).abs() < 1e-12);
        }
        assert!((kl_exponent(39.0 / 59.0).unwrap().exponent_base - 1.61257).abs() < 1e-5);
        // 1.549 belongs to the numeric bound 0.6334, not to 39/59.
        assert!((kl_exponent(0.6334).unwrap().exponent_base - 1.549).abs() < 1e-3);
        assert!(kl_exponent(1.0).is_err() && kl_exponent(-1.0).is_err() && kl_exponent(f64::NAN).is_err());
    }

    #[test]
    fn monotone_and_nonnegative() {
        let mut prev = 0.0;
        for k in 0..=95 {
            let r = kl_exponent(k as f64 / 100.0).unwrap();
            assert!(r.bracket >= 0.0 && r.bracket >= prev);
            assert!((r.exponent_base - r.bracket.exp()).abs() < 1e-15);
            prev = r.bracket;
        }
    }

    #[test]
    fn genus_two_optimum() {
        let o = optimize_genus2();
        assert!((o.alpha_star - 0.7406).abs() < 5e-4);
        assert!((o.base_s - 1.85149).abs() < 5e-4 && (o.base_cluster - 1.01077).abs() < 5e-4);
        assert!(o.product <= 1.872 && o.unimodal);
        let g = optimize_general_genus(Genus::Finite(2)).unwrap();
        assert!((g.product - o.product).abs() < 1e-4 && (g.alpha_star - o.alpha_star).abs() < 1e-4);
    }

    #[test]
    fn infinite_genus_optimum() {
        let o = optimize_general_genus(Genus::Infinity).unwrap();
        assert!((o.alpha_star - 0.4818).abs() < 2e-3);
        assert!((o.product - 1.311).abs() < 2e-3);
    }

    #[test]
    fn cluster_argument_stays_below_one() {
        for g in [Genus::Finite(2), Genus::Finite(3), Genus::Finite(10), Genus::Infinity] {
            let (lo, hi) = alpha_interval(g);
            for k in 1..100 {
                let a = lo + (hi - lo) * k as f64 / 100.0;
                assert!(second_argument(g, a) <= 1.0);
            }
        }
        assert!(optimize_general_genus(Genus::Finite(1)).is_err());
    }

    #[test]
    fn optimum_is_stable_under_interval_perturbation() {
        let (lo, hi) = (std::f64::consts::FRAC_1_SQRT_2, 0.75);
        let obj = |a: f64| base(a) * base(6.0 - 8.0 * a);
        let (x0, _) = minimise(lo, hi, obj);
        for (dl, dh) in [(1e-4, 0.0), (0.0, -1e-4), (-1e-4, 1e-4)] {
            let (x, _) = minimise(lo + dl, hi + dh, obj);
            assert!((x - x0).abs() < 1e-6);
        }
    }
}
