//! Fitted O(1) constants, frozen by the `calibrate` command.
//!
//! None of these are normative: the underlying bounds are only stated up to O(1).
//! They are monitoring thresholds with a safety margin already applied.

use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrozenConstants {
    pub version: u32,
    /// `sup |λ∞(2K) − 4λ∞(K)| − 12 h(f)` over the fuzz corpus, times the margin.
    pub c_arch: f64,
    /// `sup |Ξ_χ(Z)|` over random `Z` in the fundamental domain, times the margin.
    pub c_xi: f64,
    /// `i3(roots) / i3(thetas)`.
    pub i3_ratio: f64,
    /// Additive constant in `Im τ₁ ≤ (10/π) h(f) − (1/(3π)) log|Δ| + C`.
    pub c_fit_im_tau1: f64,
    /// Two-sided ratio bound for the near-zero theta asymptotics.
    pub c_asym: f64,
    /// `|Δ_f| ≤ C H(f)^20`.
    pub c_disc: f64,
    /// `Σ_p |μ_p| ≤ (1/3) log|Δ_f| + C`.
    pub c_stoll_global: f64,
    /// `ĥ/h_K ∈ [1/μ̂, μ̂]` on non-small points.
    pub mu_hat: f64,
    pub margin: f64,
    pub provenance: String,
}

const FROZEN_JSON: &str = include_str!("../data/frozen_constants.json");

/// The constants shipped with the crate.
pub fn frozen() -> &'static FrozenConstants {
    static CELL: OnceLock<FrozenConstants> = OnceLock::new();
    CELL.get_or_init(|| serde_json::from_str(FROZEN_JSON).expect("frozen constants parse"))
}

/// Relative drift `|new − old| / max(|old|, tiny)`, used to guard recalibration.
pub fn drift(old: f64, new: f64) -> f64 {
    (new - old).abs() / old.abs().max(1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_file_parses_and_is_sane() {
        let c = frozen();
        assert!(c.c_arch.is_finite() && c.c_xi > 0.0 && c.i3_ratio > 0.0 && c.margin >= 1.0);
        let back: FrozenConstants = serde_json::from_str(&serde_json::to_string(c).unwrap()).unwrap();
        assert_eq!(&back, c);
    }
}
