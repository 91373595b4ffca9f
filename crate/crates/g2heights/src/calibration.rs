//! Corpus statistics behind the frozen constants.
//!
//! Everything here is deterministic: the corpus is a fixed stride through the
//! family and all random sampling is seeded.

use crate::analytic::{self, riemann_data, ThetaChar};
use crate::constants::FrozenConstants;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::family::{enumerate_family, QuinticCurve};
use crate::gap::{Classifier, GapConfig, PointClass};
use crate::heights::{HeightContext, HeightOptions};
use crate::kummer::kappa;
use crate::points::{search_points, CurvePoint, SearchOptions};
use rug::Float;
use serde::{Deserialize, Serialize};

pub const CONSTANTS_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationConfig {
    pub precision_bits: u32,
    pub margin: f64,
    pub points_per_curve: usize,
    pub e_max: u64,
    pub s_max: i64,
    pub xi_samples: usize,
    pub seed: u64,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        CalibrationConfig { precision_bits: 128, margin: 2.0, points_per_curve: 4, e_max: 3, s_max: 40, xi_samples: 40, seed: 1 }
    }
}

/// Raw (un-margined) statistics for one curve.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CurveStats {
    pub label: String,
    pub arch_excess: f64,
    pub xi_sup: f64,
    /// `None` when `I₄ = 0` (the ratio is undefined).
    pub i3_ratio: Option<f64>,
    pub im_tau1_residual: f64,
    pub asym_ratio: f64,
    pub disc_ratio: f64,
    pub stoll_excess: f64,
    pub mu_hat: f64,
}

/// Height cutoff of the family slice the default corpus is drawn from.
pub const CORPUS_T: f64 = 1.5;

/// A stride of about `n` curves through `all`, plus `x⁵ + 1` and `x⁵ − x`.
pub fn stride_corpus(all: Vec<QuinticCurve>, n: usize) -> Vec<QuinticCurve> {
    let stride = (all.len() / n.max(1)).max(1);
    let mut out: Vec<QuinticCurve> = all.into_iter().step_by(stride).take(n).collect();
    for a in [[0, 0, 0, 1], [0, 0, -1, 0]] {
        let c = QuinticCurve::from_i64(a).expect("nonsingular");
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

pub fn default_corpus(n: usize) -> Vec<QuinticCurve> {
    stride_corpus(enumerate_family(CORPUS_T).collect(), n)
}

fn ln_abs(x: &rug::Integer) -> f64 {
    Float::with_val(64, x.clone().abs()).ln().to_f64()
}

pub fn curve_stats(curve: &QuinticCurve, cfg: &CalibrationConfig) -> Result<CurveStats> {
    let prec = cfg.precision_bits;
    let rd = riemann_data(curve, prec)?;
    let ctx = HeightContext::new(curve, HeightOptions::default());
    let h = curve.log_height();
    let pts: Vec<CurvePoint> = search_points(curve, cfg.e_max, cfg.s_max, SearchOptions { exec: Execution::Sequential, ..Default::default() })
        .into_iter()
        .filter(|p| !p.is_infinity())
        .take(cfg.points_per_curve)
        .collect();

    let mut arch_excess = f64::NEG_INFINITY;
    let mut mu_hat: f64 = 1.0;
    let classifier = Classifier::new(&ctx, GapConfig::default(), None)?;
    for p in &pts {
        for inc in ctx.archimedean_increments(&kappa(p), 6) {
            arch_excess = arch_excess.max(inc.abs() - 12.0 * h);
        }
        let lp = classifier.classify(p, false)?;
        if lp.label.class != PointClass::I && lp.h_hat > lp.h_hat_err && lp.h_k > 0.0 {
            let r = lp.h_hat / lp.h_k;
            mu_hat = mu_hat.max(r).max(1.0 / r);
        }
    }

    let i3_ratio = if analytic::igusa_i4_exact(curve) == 0 {
        None
    } else {
        let r = analytic::igusa_i3_roots(curve, prec)? / analytic::igusa_i3_thetas(&rd);
        Some(r.real().to_f64())
    };

    let mut asym: f64 = 1.0;
    for ch in ThetaChar::even() {
        let r = analytic::near_zero_ratio(&rd, ch, [0.004, -0.007], [0.003, 0.006]);
        asym = asym.max(r).max(1.0 / r);
    }

    let ld = ln_abs(curve.delta());
    let stoll_total: f64 = ctx.bad_primes().iter().map(|(p, _)| ctx.stoll_bound(p)).sum();
    Ok(CurveStats {
        label: curve.label(),
        arch_excess: arch_excess.max(0.0),
        xi_sup: analytic::xi_sup_sample(&rd, cfg.xi_samples, cfg.seed),
        i3_ratio,
        im_tau1_residual: analytic::im_tau1_residual(&rd, curve),
        asym_ratio: asym,
        disc_ratio: (ln_abs(curve.delta()) - 20.0 * curve.height_h().ln()).exp(),
        stoll_excess: stoll_total - ld / 3.0,
        mu_hat,
    })
}

fn max_of(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(f64::NEG_INFINITY, f64::max)
}

/// Margined constants from per-curve statistics.
pub fn freeze(stats: &[CurveStats], cfg: &CalibrationConfig, provenance: String) -> Result<FrozenConstants> {
    if stats.is_empty() {
        return Err(Error::DomainError("calibration corpus is empty".into()));
    }
    let m = cfg.margin;
    let ratios: Vec<f64> = stats.iter().filter_map(|s| s.i3_ratio).collect();
    if ratios.is_empty() {
        return Err(Error::DomainError("no corpus curve has I4 ≠ 0".into()));
    }
    let i3_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(FrozenConstants {
        version: CONSTANTS_VERSION,
        c_arch: m * max_of(stats.iter().map(|s| s.arch_excess)).max(1.0),
        c_xi: m * max_of(stats.iter().map(|s| s.xi_sup)),
        i3_ratio,
        // Additive constant: widen by the margin in absolute terms.
        c_fit_im_tau1: max_of(stats.iter().map(|s| s.im_tau1_residual)) + m,
        c_asym: m * max_of(stats.iter().map(|s| s.asym_ratio)),
        c_disc: m * max_of(stats.iter().map(|s| s.disc_ratio)),
        c_stoll_global: m * max_of(stats.iter().map(|s| s.stoll_excess)).max(1.0),
        mu_hat: m * max_of(stats.iter().map(|s| s.mu_hat)),
        margin: m,
        provenance,
    })
}

/// Statistics over the whole corpus (parallel over curves, order preserved).
pub fn corpus_stats(corpus: &[QuinticCurve], cfg: &CalibrationConfig, exec: Execution) -> Result<Vec<CurveStats>> {
    if corpus.is_empty() {
        return Err(Error::DomainError("calibration corpus is empty".into()));
    }
    exec.map(corpus, |c| curve_stats(c, cfg)).into_iter().collect()
}

pub fn calibrate(corpus: &[QuinticCurve], cfg: &CalibrationConfig, exec: Execution) -> Result<FrozenConstants> {
    let stats = corpus_stats(corpus, cfg, exec)?;
    let provenance = format!(
        "{} curves; {} bits; margin {}; {} points/curve (e ≤ {}, |s| ≤ {}); {} Ξ samples, seed {}",
        corpus.len(),
        cfg.precision_bits,
        cfg.margin,
        cfg.points_per_curve,
        cfg.e_max,
        cfg.s_max,
        cfg.xi_samples,
        cfg.seed
    );
    freeze(&stats, cfg, provenance)
}

/// Constant names whose relative drift exceeds `tol`.
pub fn drifted(old: &FrozenConstants, new: &FrozenConstants, tol: f64) -> Vec<(&'static str, f64)> {
    use crate::constants::drift;
    [
        ("c_arch", old.c_arch, new.c_arch),
        ("c_xi", old.c_xi, new.c_xi),
        ("i3_ratio", old.i3_ratio, new.i3_ratio),
        ("c_fit_im_tau1", old.c_fit_im_tau1, new.c_fit_im_tau1),
        ("c_asym", old.c_asym, new.c_asym),
        ("c_disc", old.c_disc, new.c_disc),
        ("c_stoll_global", old.c_stoll_global, new.c_stoll_global),
        ("mu_hat", old.mu_hat, new.mu_hat),
    ]
    .into_iter()
    .map(|(n, a, b)| (n, drift(a, b)))
    .filter(|&(_, d)| d > tol)
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(calibrate(&[], &CalibrationConfig::default(), Execution::Sequential).is_err());
    }

    #[test]
    fn corpus_is_deterministic() {
        assert_eq!(default_corpus(8), default_corpus(8));
        assert!(default_corpus(8).len() >= 8);
    }
}
