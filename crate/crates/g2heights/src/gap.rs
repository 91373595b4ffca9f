//! Partition of the rational points into small / medium / large classes with
//! their refinements, and empirical audits of the gap principles and of the
//! large-point clustering argument.

use crate::analytic::RiemannData;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::family::{alpha_beta_star, QuinticCurve};
use crate::heights::{naive_height_x, naive_hk, HeightContext};
use crate::kummer::kappa;
use crate::points::CurvePoint;
use rug::{Complex, Float, Integer, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub const C_UP: f64 = 25.0 / 3.0;
pub const C_DOWN: f64 = 8.0;
/// Numeric bound for large-`x` medium points. It is quoted as `39/59 + O(δ) ≤ 0.6334`,
/// although `39/59 ≈ 0.661`; the numeric value is the one audited.
pub const BOUND_UP: f64 = 0.6334;
/// `64/95 + O(δ)`: the bound for the other medium points.
pub const BOUND_NORMAL: f64 = 0.6737;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapConfig {
    pub delta: f64,
    /// The unquantified `O(δ)` slack is taken to be `slack_k · δ`.
    pub slack_k: f64,
}

impl Default for GapConfig {
    fn default() -> Self {
        GapConfig { delta: 0.25, slack_k: 10.0 }
    }
}

impl GapConfig {
    pub fn slack(&self) -> f64 {
        self.slack_k * self.delta
    }

    /// `N = round(1/δ)`.
    pub fn grid_n(&self) -> i64 {
        (1.0 / self.delta).round() as i64
    }
}

/// Per-curve thresholds for a given `δ`.
#[derive(Debug, Clone)]
pub struct Thresholds {
    pub delta: f64,
    /// `δ^{−1/δ}` (exact when `1/δ` is an integer).
    pub big: Option<Rational>,
    pub big_f64: f64,
    pub log_h_f: f64,
    /// `(c↑ − δ) h(f)`, `(c↓ − δ) h(f)`, `δ^{−1/δ} h(f)`.
    pub small_up_height: f64,
    pub small_down_height: f64,
    pub medium_height: f64,
}

impl Thresholds {
    pub fn new(curve: &QuinticCurve, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::DomainError(format!("δ = {delta} outside (0, 1)")));
        }
        let inv = 1.0 / delta;
        let big = (inv.fract() == 0.0 && inv <= 64.0).then(|| {
            let n = inv as u32;
            // δ^{−1/δ} = n^n for δ = 1/n.
            Rational::from(Integer::from(Integer::u_pow_u(n, n)))
        });
        let big_f64 = delta.powf(-inv);
        let h = curve.log_height();
        Ok(Thresholds {
            delta,
            big,
            big_f64,
            log_h_f: h,
            small_up_height: (C_UP - delta) * h,
            small_down_height: (C_DOWN - delta) * h,
            medium_height: big_f64 * h,
        })
    }
}

/// `|x| ≥ c·H(f)` decided exactly when `c` is rational: since
/// `H = max |a_i|^{1/i}`, it holds iff `(|x|/c)^i ≥ |a_i|` for every `i`.
fn x_at_least(curve: &QuinticCurve, x: &Rational, c: &Rational) -> bool {
    let r = Rational::from(x.abs_ref()) / c;
    // coefficients are a2..a5
    let mut pw = Rational::from(&r * &r);
    for (i, a) in curve.coeffs().iter().enumerate() {
        if i > 0 {
            pw *= &r;
        }
        if pw < Rational::from(a.abs_ref()) {
            return false;
        }
    }
    true
}

fn x_at_least_f64(curve: &QuinticCurve, x: &Rational, c: f64) -> bool {
    x.to_f64().abs() >= c * curve.height_h()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointClass {
    I,
    II,
    III,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Arrow {
    Up,
    Bullet,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RhoTag {
    AlphaStar,
    BetaStar,
}

/// `[i, j]` for medium points, `[[i]]` for large ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IjTag {
    Pair(i64, i64),
    Single(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionLabel {
    pub class: PointClass,
    pub arrow: Arrow,
    /// Grid cell of the reduced Abel–Jacobi lift (medium and large points only).
    pub cell: Option<[i64; 4]>,
    pub rho_tag: RhoTag,
    /// `None` for small points and for points with `ĥ = 0` or `h_K = 0`.
    pub ij_tag: Option<IjTag>,
}

impl fmt::Display for PartitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = match self.arrow {
            Arrow::Up => "↑",
            Arrow::Bullet => "•",
            Arrow::Down => "↓",
        };
        write!(f, "{:?}{a}", self.class)?;
        if let Some(c) = self.cell {
            write!(f, " ({},{},{},{})", c[0], c[1], c[2], c[3])?;
        }
        write!(f, " {}", if self.rho_tag == RhoTag::AlphaStar { "α*" } else { "β*" })?;
        match self.ij_tag {
            Some(IjTag::Pair(i, j)) => write!(f, " [{i},{j}]"),
            Some(IjTag::Single(i)) => write!(f, " [[{i}]]"),
            None => Ok(()),
        }
    }
}

/// A classified point together with the heights used to classify it.
#[derive(Debug, Clone)]
pub struct LabeledPoint {
    pub point: CurvePoint,
    pub label: PartitionLabel,
    pub h: f64,
    pub h_k: f64,
    pub h_hat: f64,
    pub h_hat_err: f64,
}

/// Classification state for one curve.
pub struct Classifier<'a> {
    curve: &'a QuinticCurve,
    cfg: GapConfig,
    thr: Thresholds,
    alpha: Complex,
    beta: Complex,
    rdata: Option<Arc<RiemannData>>,
    heights: &'a HeightContext,
}

impl<'a> Classifier<'a> {
    pub fn new(heights: &'a HeightContext, cfg: GapConfig, rdata: Option<Arc<RiemannData>>) -> Result<Self> {
        let curve = heights.curve();
        let pair = alpha_beta_star(curve, 128)?;
        Ok(Classifier { curve, cfg, thr: Thresholds::new(curve, cfg.delta)?, alpha: pair.alpha, beta: pair.beta, rdata, heights })
    }

    pub fn thresholds(&self) -> &Thresholds {
        &self.thr
    }

    fn x_big(&self, x: &Rational) -> bool {
        match &self.thr.big {
            Some(c) => x_at_least(self.curve, x, c),
            None => x_at_least_f64(self.curve, x, self.thr.big_f64),
        }
    }

    /// `|x| ≤ δ^{1/δ} H(f)`.
    fn x_small(&self, x: &Rational) -> bool {
        match &self.thr.big {
            // |x| ≤ H/c  ⇔  not (|x|·c > H)  ⇔  not (|x|·c ≥ H) or |x|·c = H.
            Some(c) => {
                let scaled = Rational::from(x.abs_ref()) * c;
                !x_at_least(self.curve, &scaled, &Rational::from(1)) || self.exactly_h(&scaled)
            }
            None => x.to_f64().abs() <= self.curve.height_h() / self.thr.big_f64,
        }
    }

    fn exactly_h(&self, r: &Rational) -> bool {
        // r = H iff r ≥ H and r^i = |a_i| for some i.
        let mut pw = Rational::from(r * r);
        let mut hit = false;
        for (i, a) in self.curve.coeffs().iter().enumerate() {
            if i > 0 {
                pw *= r;
            }
            hit |= pw == Rational::from(a.abs_ref());
        }
        hit
    }

    /// Class and arrow from the threshold inequalities, then the refinements.
    pub fn classify(&self, p: &CurvePoint, want_cell: bool) -> Result<LabeledPoint> {
        let (s, e, _) = p.parts().ok_or(Error::InfinityPoint)?;
        let x = Rational::from((s.clone(), Integer::from(e * e)));
        let h = naive_height_x(p)?;
        let big_x = self.x_big(&x);
        let t = &self.thr;
        let (class, arrow) = if big_x && h < t.small_up_height {
            (PointClass::I, Arrow::Up)
        } else if !big_x && h < t.small_down_height {
            (PointClass::I, Arrow::Down)
        } else {
            let arrow = if big_x {
                Arrow::Up
            } else if self.x_small(&x) {
                Arrow::Down
            } else {
                Arrow::Bullet
            };
            let class = if h < t.medium_height { PointClass::II } else { PointClass::III };
            (class, arrow)
        };

        let xc = Complex::with_val(128, (Float::with_val(128, &x), 0));
        let da = Float::with_val(128, Complex::with_val(128, &xc - &self.alpha).abs_ref());
        let db = Float::with_val(128, Complex::with_val(128, &xc - &self.beta).abs_ref());
        let rho_tag = if da <= db { RhoTag::AlphaStar } else { RhoTag::BetaStar };

        let k = kappa(p);
        let h_k = naive_hk(&k);
        let hh = self.heights.canonical_height(&k)?;
        let mut label = PartitionLabel { class, arrow, cell: None, rho_tag, ij_tag: None };
        if class != PointClass::I {
            if want_cell {
                let rd = self.rdata.as_ref().ok_or(Error::MissingAnalytic)?;
                label.cell = Some(cell_of(rd, &rd.aj_point(self.curve, p)?, self.cfg.grid_n()));
            }
            let lb = (1.0 + self.cfg.delta).ln();
            let torsion = hh.value.abs() <= hh.error_radius || hh.value <= 0.0;
            if !torsion && h_k > 0.0 {
                let i = ((hh.value / h_k).ln() / lb).floor() as i64;
                label.ij_tag = match class {
                    PointClass::III => Some(IjTag::Single(i)),
                    _ if t.log_h_f > 0.0 => Some(IjTag::Pair(i, ((h_k / t.log_h_f).ln() / lb).floor() as i64)),
                    _ => None,
                };
            }
        }
        Ok(LabeledPoint { point: p.clone(), label, h, h_k, h_hat: hh.value, h_hat_err: hh.error_radius })
    }

    pub fn classify_all(&self, pts: &[CurvePoint], want_cell: bool, exec: Execution) -> Result<Vec<LabeledPoint>> {
        let affine: Vec<CurvePoint> = pts.iter().filter(|p| !p.is_infinity()).cloned().collect();
        exec.map(&affine, |p| self.classify(p, want_cell)).into_iter().collect()
    }
}

/// Grid cell of `Z = A + τB` with `A, B ∈ [−½, ½)²` (ties snap to −½), mesh `1/(2N)`.
pub fn cell_of(rd: &RiemannData, z: &[Complex; 2], n: i64) -> [i64; 4] {
    let (a, b) = rd.half_coords(z);
    let idx = |v: &Float| {
        let t = v.to_f64();
        let t = t - (t + 0.5).floor();
        ((t * 2.0 * n as f64).floor() as i64).clamp(-n, n - 1)
    };
    [idx(&a[0]), idx(&a[1]), idx(&b[0]), idx(&b[1])]
}

// ---------------------------------------------------------------------------
// gap-principle audit

/// One qualifying pair and its measured angle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairCheck {
    pub label: String,
    pub p: usize,
    pub q: usize,
    pub bound: f64,
    pub cos: f64,
    pub radius: f64,
    /// `bound + slack − (cos − radius)`; negative means a certified violation.
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelSummary {
    pub bound: f64,
    pub pairs: usize,
    pub min_margin: Option<f64>,
    pub vacuous: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapReport {
    pub slack: f64,
    pub labels: BTreeMap<String, LabelSummary>,
    pub checks: Vec<PairCheck>,
    pub violations: Vec<PairCheck>,
    /// No label had a qualifying pair.
    pub vacuous: bool,
}

impl GapReport {
    pub fn from_checks(checks: Vec<PairCheck>, group_bounds: BTreeMap<String, f64>, slack: f64) -> GapReport {
        let mut labels: BTreeMap<String, LabelSummary> = group_bounds
            .into_iter()
            .map(|(k, b)| (k, LabelSummary { bound: b, pairs: 0, min_margin: None, vacuous: true }))
            .collect();
        for c in &checks {
            let e = labels.entry(c.label.clone()).or_insert(LabelSummary { bound: c.bound, pairs: 0, min_margin: None, vacuous: true });
            e.pairs += 1;
            e.vacuous = false;
            e.min_margin = Some(e.min_margin.map_or(c.margin, |m: f64| m.min(c.margin)));
        }
        let violations = checks.iter().filter(|c| c.margin < 0.0).cloned().collect();
        GapReport { slack, vacuous: checks.is_empty(), labels, checks, violations }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Which angle bound applies to a medium-point label, if any.
fn applicable_bound(label: &PartitionLabel) -> Option<f64> {
    match (label.class, label.arrow) {
        (PointClass::II, Arrow::Up) => Some(BOUND_UP),
        (PointClass::II, _) => Some(BOUND_NORMAL),
        _ => None,
    }
}

fn y_nonnegative(p: &CurvePoint) -> bool {
    p.parts().is_some_and(|(_, _, t)| *t >= 0)
}

/// Checks `cos θ_{P,Q} ≤ bound + slack` for every qualifying pair sharing a
/// full medium-point label.
pub fn verify_gap_pairs(heights: &HeightContext, pts: &[LabeledPoint], cfg: GapConfig, exec: Execution) -> Result<GapReport> {
    let mut groups: BTreeMap<PartitionLabel, Vec<usize>> = BTreeMap::new();
    for (i, lp) in pts.iter().enumerate() {
        if applicable_bound(&lp.label).is_some() && lp.label.ij_tag.is_some() {
            groups.entry(lp.label.clone()).or_default().push(i);
        }
    }
    let mut jobs = Vec::new();
    let mut bounds = BTreeMap::new();
    for (label, idx) in &groups {
        let bound = applicable_bound(label).expect("filtered");
        bounds.insert(label.to_string(), bound);
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                let (p, q) = (&pts[i].point, &pts[j].point);
                if p.same_x(q) {
                    continue; // P = ±Q
                }
                if label.arrow == Arrow::Up && !(y_nonnegative(p) && y_nonnegative(q)) {
                    continue;
                }
                jobs.push((label.to_string(), bound, i, j));
            }
        }
    }
    let slack = cfg.slack();
    let checks: Vec<PairCheck> = exec
        .map(&jobs, |(label, bound, i, j)| -> Result<PairCheck> {
            let c = heights.cos_theta(&pts[*i].point, &pts[*j].point)?;
            Ok(PairCheck {
                label: label.clone(),
                p: *i,
                q: *j,
                bound: *bound,
                cos: c.value(),
                radius: c.radius(),
                margin: bound + slack - (c.value() - c.radius()),
            })
        })
        .into_iter()
        .collect::<Result<_>>()?;
    Ok(GapReport::from_checks(checks, bounds, slack))
}

// ---------------------------------------------------------------------------
// Gram-matrix utilities for the large-point argument

fn cosines(gram: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = gram.len();
    let norms: Vec<f64> = (0..n)
        .map(|i| if gram[i][i] > 1e-12 { Ok(gram[i][i].sqrt()) } else { Err(Error::DegenerateGram(i)) })
        .collect::<Result<_>>()?;
    Ok((0..n).map(|i| (0..n).map(|j| gram[i][j] / (norms[i] * norms[j])).collect()).collect())
}

/// Greedy maximal `S` with pairwise `cos θ ≤ α`, scanning indices in order.
pub fn greedy_separated_subset(gram: &[Vec<f64>], alpha: f64) -> Result<Vec<usize>> {
    if !(alpha > -1.0 && alpha < 1.0) {
        return Err(Error::DomainError(format!("α = {alpha} outside (−1, 1)")));
    }
    let cos = cosines(gram)?;
    let mut s: Vec<usize> = Vec::new();
    for i in 0..gram.len() {
        if s.iter().all(|&j| cos[i][j] <= alpha) {
            s.push(i);
        }
    }
    Ok(s)
}

/// Every excluded index is within angle `α` of some member, and members are separated.
pub fn is_maximal_separated(gram: &[Vec<f64>], alpha: f64, s: &[usize]) -> Result<bool> {
    let cos = cosines(gram)?;
    let separated = s.iter().all(|&i| s.iter().all(|&j| i == j || cos[i][j] <= alpha));
    let maximal = (0..gram.len()).filter(|i| !s.contains(i)).all(|i| s.iter().any(|&j| cos[i][j] > alpha));
    Ok(separated && maximal)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterAudit {
    pub center: usize,
    /// Indices with `cos θ_{P,Q} > α`.
    pub members: Vec<usize>,
    /// The member with minimal `|v_R|`, removed before the pair check.
    pub removed: Option<usize>,
    /// `max ⟨v_P, v_P′⟩` over remaining pairs.
    pub max_inner: Option<f64>,
    pub threshold: f64,
    pub passed: bool,
    pub vacuous: bool,
    /// Number of remaining members and the bound `1 + 1/c`, `c = −max cos θ_{v_P, v_P′}`.
    pub remaining: usize,
    pub count_bound: Option<f64>,
    pub offending_pairs: Vec<(usize, usize, f64)>,
}

/// With `v_P = P/|P| − Q/|Q|`, `⟨v_P, v_P′⟩ = 1 − cos θ_{P,Q} − cos θ_{P′,Q} + cos θ_{P,P′}`.
/// After removing the member of least `|v_R|`, every remaining pair must satisfy
/// `⟨v_P, v_P′⟩ < −2δ^{1/2} + slack`.
pub fn cluster_repulsion_audit(gram: &[Vec<f64>], center: usize, alpha: f64, delta: f64, slack: f64) -> Result<ClusterAudit> {
    let cos = cosines(gram)?;
    let members: Vec<usize> = (0..gram.len()).filter(|&i| i != center && cos[i][center] > alpha).collect();
    let vnorm2 = |i: usize| 2.0 - 2.0 * cos[i][center];
    let inner = |i: usize, j: usize| 1.0 - cos[i][center] - cos[j][center] + cos[i][j];
    let removed = members.iter().copied().min_by(|&a, &b| vnorm2(a).partial_cmp(&vnorm2(b)).unwrap());
    let rest: Vec<usize> = members.iter().copied().filter(|&i| Some(i) != removed).collect();
    let threshold = -2.0 * delta.sqrt() + slack;
    let mut max_inner: Option<f64> = None;
    let mut max_cos_v: Option<f64> = None;
    let mut offending = Vec::new();
    for (a, &i) in rest.iter().enumerate() {
        for &j in &rest[a + 1..] {
            let v = inner(i, j);
            max_inner = Some(max_inner.map_or(v, |m| m.max(v)));
            let (ni, nj) = (vnorm2(i), vnorm2(j));
            if ni <= 1e-12 || nj <= 1e-12 {
                return Err(Error::DegenerateGram(if ni <= 1e-12 { i } else { j }));
            }
            let cv = v / (ni * nj).sqrt();
            max_cos_v = Some(max_cos_v.map_or(cv, |m| m.max(cv)));
            if v >= threshold {
                offending.push((i, j, v));
            }
        }
    }
    let count_bound = match max_cos_v {
        Some(m) if m < 0.0 => Some(1.0 + 1.0 / (-m)),
        Some(_) => None,
        None => Some(1.0),
    };
    Ok(ClusterAudit {
        center,
        vacuous: rest.len() < 2,
        passed: offending.is_empty() && count_bound.is_some_and(|b| rest.len() as f64 <= b + 1e-9),
        remaining: rest.len(),
        members,
        removed,
        max_inner,
        threshold,
        count_bound,
        offending_pairs: offending,
    })
}

/// Gram matrix `⟨P_i, P_j⟩` of canonical-height pairings.
pub fn height_gram(heights: &HeightContext, pts: &[CurvePoint], exec: Execution) -> Result<Vec<Vec<f64>>> {
    let n = pts.len();
    let jobs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let vals = exec
        .map(&jobs, |&(i, j)| -> Result<f64> {
            if i == j {
                Ok(heights.point_height(&pts[i])?.value)
            } else if pts[i] == pts[j].neg() {
                Ok(-heights.point_height(&pts[i])?.value)
            } else if pts[i] == pts[j] {
                Ok(heights.point_height(&pts[i])?.value)
            } else {
                Ok(heights.pairing(&pts[i], &pts[j])?.mid_f64())
            }
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let mut g = vec![vec![0.0; n]; n];
    for (&(i, j), v) in jobs.iter().zip(vals) {
        g[i][j] = v;
        g[j][i] = v;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heights::HeightOptions;
    use crate::points::{search_points, SearchOptions};
    use rand::{Rng, SeedableRng};

    fn ctx(a: [i64; 4]) -> HeightContext {
        HeightContext::new(&QuinticCurve::from_i64(a).unwrap(), HeightOptions::default())
    }

    fn gram_of(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
        vs.iter().map(|u| vs.iter().map(|v| u.iter().zip(v).map(|(a, b)| a * b).sum()).collect()).collect()
    }

    #[test]
    fn threshold_arithmetic() {
        // H(f) = 2 via a5 = 32.
        let c = ctx([0, 0, 0, 32]);
        let cl = Classifier::new(&c, GapConfig::default(), None).unwrap();
        assert_eq!(cl.thresholds().big, Some(Rational::from(256)));
        assert!(cl.x_big(&Rational::from(1000)) && cl.x_big(&Rational::from(-512)));
        assert!(!cl.x_big(&Rational::from(511)));
        assert!(cl.x_small(&Rational::from((1, 128))) && !cl.x_small(&Rational::from((1, 127))));
    }

    #[test]
    fn small_point_with_small_x_is_class_one_down() {
        let c = ctx([2, 0, -3, 1]);
        let cl = Classifier::new(&c, GapConfig::default(), None).unwrap();
        let lp = cl.classify(&CurvePoint::affine(3, 1, 17), false).unwrap();
        assert!(lp.h < (C_DOWN - 0.25) * c.curve().log_height());
        assert_eq!((lp.label.class, lp.label.arrow), (PointClass::I, Arrow::Down));
        assert!(lp.label.cell.is_none() && lp.label.ij_tag.is_none());
    }

    #[test]
    fn cell_needs_analytic_data() {
        // h(f) = 0, so every affine point is large.
        let c = ctx([0, 0, 0, 1]);
        let cl = Classifier::new(&c, GapConfig::default(), None).unwrap();
        assert_eq!(cl.classify(&CurvePoint::affine(0, 1, 1), true).unwrap_err(), Error::MissingAnalytic);
        let lp = cl.classify(&CurvePoint::affine(0, 1, 1), false).unwrap();
        assert_eq!(lp.label.class, PointClass::III);
    }

    #[test]
    fn labels_ignore_sign_of_y() {
        let c = ctx([-1, 0, 0, 1]);
        let cl = Classifier::new(&c, GapConfig::default(), None).unwrap();
        for p in search_points(c.curve(), 3, 40, SearchOptions::default()).iter().filter(|p| !p.is_infinity()) {
            assert_eq!(cl.classify(p, false).unwrap().label, cl.classify(&p.neg(), false).unwrap().label);
        }
    }

    #[test]
    fn report_flags_injected_violation() {
        let mk = |cos: f64| PairCheck { label: "II↓".into(), p: 0, q: 1, bound: BOUND_NORMAL, cos, radius: 0.0, margin: BOUND_NORMAL + 2.5 - cos };
        let r = GapReport::from_checks(vec![mk(0.2), mk(3.5)], BTreeMap::new(), 2.5);
        assert!(!r.passed() && r.violations.len() == 1);
        let r = GapReport::from_checks(vec![], BTreeMap::from([("II↑".to_string(), BOUND_UP)]), 2.5);
        assert!(r.passed() && r.vacuous && r.labels["II↑"].vacuous);
    }

    #[test]
    fn greedy_examples() {
        let ortho = gram_of(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        assert_eq!(greedy_separated_subset(&ortho, 0.5).unwrap(), vec![0, 1, 2]);
        let twins = gram_of(&[vec![1.0, 2.0], vec![1.0, 2.0]]);
        assert_eq!(greedy_separated_subset(&twins, 0.99).unwrap().len(), 1);
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let vs: Vec<Vec<f64>> = (0..50).map(|_| (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let g = gram_of(&vs);
        let s = greedy_separated_subset(&g, 0.75).unwrap();
        assert!(is_maximal_separated(&g, 0.75, &s).unwrap());
    }

    /// `Q = e₀`, `P_k = cos φ e₀ + sin φ u_k` with `u_k` a regular simplex.
    fn cluster_fixture(m: usize, cos_phi: f64) -> Vec<Vec<f64>> {
        let dim = m + 1;
        let mut vs = vec![{
            let mut q = vec![0.0; dim];
            q[0] = 1.0;
            q
        }];
        let sin_phi = (1.0 - cos_phi * cos_phi).sqrt();
        let centroid = 1.0 / m as f64;
        let scale = (1.0 - centroid).sqrt();
        for k in 0..m {
            let mut v = vec![0.0; dim];
            v[0] = cos_phi;
            for j in 0..m {
                let u = ((k == j) as u8 as f64 - centroid) / scale;
                v[1 + j] = sin_phi * u;
            }
            vs.push(v);
        }
        gram_of(&vs)
    }

    #[test]
    fn cluster_audit_passes_on_constructed_cluster() {
        let delta: f64 = 1e-4;
        let alpha = 0.75 + delta.sqrt();
        let g = cluster_fixture(5, 0.765);
        let cos = cosines(&g).unwrap();
        assert!((1..6).all(|i| cos[i][0] > alpha && (1..6).all(|j| i == j || cos[i][j] <= 0.5)));
        let a = cluster_repulsion_audit(&g, 0, alpha, delta, 0.0).unwrap();
        assert!(a.passed && !a.vacuous, "{a:?}");
        assert_eq!(a.members.len(), 5);
        assert!(a.count_bound.unwrap() >= a.remaining as f64);
        let single = cluster_repulsion_audit(&cluster_fixture(2, 0.9), 0, alpha, delta, 0.0).unwrap();
        assert!(single.passed && single.vacuous);
    }

    #[test]
    fn cluster_audit_flags_tight_pair() {
        let delta: f64 = 1e-4;
        // Three unit vectors near Q with cos θ_{P,P′} ≈ 0.9.
        let vs = vec![vec![1.0, 0.0, 0.0], vec![0.8, 0.6, 0.0], vec![0.8, 0.45, 0.3969], vec![0.8, 0.0, 0.6]];
        let g = gram_of(&vs);
        let a = cluster_repulsion_audit(&g, 0, 0.76, delta, 0.0).unwrap();
        assert!(!a.passed && !a.offending_pairs.is_empty());
    }
}
