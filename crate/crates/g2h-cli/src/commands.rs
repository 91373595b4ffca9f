use crate::config::RunConfig;
use crate::output::{self, Jsonl};
use g2heights::analytic::{self, riemann_data, ThetaChar};
use g2heights::calibration::{self, CalibrationConfig};
use g2heights::family::{enumerate_family, CurveRecord};
use g2heights::gap::{self, Classifier, GapConfig};
use g2heights::heights::{naive_hk, HeightContext, HeightOptions};
use g2heights::kummer::{self, kappa};
use g2heights::packing::{self, Genus};
use g2heights::points::{search_points, SearchOptions};
use g2heights::{CurvePoint, Error, QuinticCurve};
use rug::{Float, Integer};
use serde::Serialize;
use serde_json::json;
use std::fmt;
use std::path::{Path, PathBuf};

/// Process exit status: 0 pass, 2 invariant violation, 3 precision exhausted, 1 anything else.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PrecisionExhausted(_) => 3,
            Error::Invariant(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

pub type CmdResult = Result<bool, Failure>;

pub fn parse_curve(s: &str) -> Result<QuinticCurve, Failure> {
    let parts: Vec<&str> = s.trim_matches(|c| c == '[' || c == ']').split(',').map(str::trim).collect();
    let bad = || Failure { code: 1, message: format!("cannot parse curve '{s}': expected a2,a3,a4,a5") };
    if parts.len() != 4 {
        return Err(bad());
    }
    let mut a: [Integer; 4] = Default::default();
    for (slot, p) in a.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| bad())?;
    }
    Ok(QuinticCurve::new(a)?)
}

fn search(cfg: &RunConfig, c: &QuinticCurve) -> Vec<CurvePoint> {
    search_points(c, cfg.e_max, cfg.s_max, SearchOptions { exec: cfg.exec(), ..Default::default() })
}

fn height_ctx(cfg: &RunConfig, c: &QuinticCurve) -> HeightContext {
    HeightContext::new(c, HeightOptions { target_error: cfg.target_error, precision_bits: cfg.precision_bits, ..Default::default() })
}

fn gap_cfg(cfg: &RunConfig) -> GapConfig {
    GapConfig { delta: cfg.delta, ..Default::default() }
}

// ---------------------------------------------------------------------------

fn coeffs_of(v: &serde_json::Value) -> Option<Vec<Integer>> {
    v["a"].as_array()?.iter().map(|x| x.as_str()?.parse().ok()).collect()
}

pub fn enumerate(cfg: &RunConfig) -> CmdResult {
    let (mut out, last) = match Jsonl::resume(cfg, "curves.jsonl")? {
        Some((w, last)) => (w, last.and_then(|v| coeffs_of(&v))),
        None => (Jsonl::create(cfg, "curves.jsonl", "curves")?, None),
    };
    let mut n = 0u64;
    for c in enumerate_family(cfg.t) {
        // Lexicographic order makes the last written tuple a resume cursor.
        if let Some(l) = &last {
            if c.coeffs().as_slice() <= l.as_slice() {
                continue;
            }
        }
        out.write(&c.to_record())?;
        n += 1;
    }
    let p = out.finish()?;
    println!("wrote {n} new curves to {}", p.display());
    Ok(true)
}

pub fn read_curves(path: &Path) -> Result<Vec<QuinticCurve>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure { code: 1, message: format!("corpus {}: {e}", path.display()) })?;
    let mut out = Vec::new();
    for line in text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let r: CurveRecord = serde_json::from_str(line)?;
        out.push(QuinticCurve::from_record(&r)?);
    }
    Ok(out)
}

#[derive(Serialize)]
struct PointLine {
    point: g2heights::points::PointRecord,
    x: Option<f64>,
}

pub fn search_cmd(cfg: &RunConfig, c: &QuinticCurve) -> CmdResult {
    let pts = search(cfg, c);
    let mut out = Jsonl::create(cfg, "points.jsonl", "points")?;
    out.write(&json!({ "curve": c.to_record() }))?;
    for p in &pts {
        out.write(&PointLine { point: p.to_record(), x: p.x_f64() })?;
        println!("{p}");
    }
    out.finish()?;
    println!("{} points on {c} with e ≤ {}, |s| ≤ {}", pts.len(), cfg.e_max, cfg.s_max);
    Ok(true)
}

pub fn heights(cfg: &RunConfig, c: &QuinticCurve) -> CmdResult {
    let ctx = height_ctx(cfg, c);
    let mut out = Jsonl::create(cfg, "heights.jsonl", "heights")?;
    for p in search(cfg, c).iter().filter(|p| !p.is_infinity()) {
        let k = kappa(p);
        let r = ctx.canonical_height(&k)?;
        out.write(&json!({
            "point": p.to_record(),
            "h": g2heights::heights::naive_height_x(p)?,
            "h_K": naive_hk(&k),
            "h_hat": r.to_record(),
        }))?;
        println!("{p}\tĥ = {:.12} ± {:.1e}\tN = {}", r.value, r.error_radius, r.n_doublings);
    }
    out.finish()?;
    Ok(true)
}

pub fn theta(cfg: &RunConfig, c: &QuinticCurve) -> CmdResult {
    let rd = riemann_data(c, cfg.precision_bits)?;
    let ctx = height_ctx(cfg, c);
    let mut rows = Vec::new();
    let mut ok = true;
    for p in search(cfg, c).iter().filter(|p| !p.is_infinity()).take(8) {
        let (th, rho) = match analytic::lambda_inf_point(&rd, c, p) {
            Ok(v) => v,
            Err(Error::OnDivisor) => continue,
            Err(e) => return Err(e.into()),
        };
        let lift = kappa(p).coords().clone().map(|x| Float::with_val(cfg.precision_bits, x));
        let tel = ctx.lambda_hat_infinity(&lift)?.value;
        ok &= (th - tel).abs() < 1e-4;
        rows.push(json!({ "point": p.to_record(), "theta": th, "telescoped": tel, "rho": rho }));
    }
    let i3 = if analytic::igusa_i4_exact(c) == 0 {
        None
    } else {
        let r = analytic::igusa_i3_roots(c, cfg.precision_bits)? / analytic::igusa_i3_thetas(&rd);
        Some(r.real().to_f64())
    };
    let body = json!({
        "snapshot": rd.snapshot(c),
        "symmetry_defect": rd.symmetry_defect,
        "im_tau1_residual": analytic::im_tau1_residual(&rd, c),
        "i3_ratio": i3,
        "local_heights": rows,
    });
    let p = output::write_json(cfg, "theta.json", &body)?;
    println!("{}", serde_json::to_string_pretty(&body)?);
    println!("wrote {}", p.display());
    Ok(ok)
}

pub fn gap_cmd(cfg: &RunConfig, c: &QuinticCurve) -> CmdResult {
    let ctx = height_ctx(cfg, c);
    let rd = if cfg.theta_enabled { Some(riemann_data(c, cfg.precision_bits)?) } else { None };
    let cl = Classifier::new(&ctx, gap_cfg(cfg), rd)?;
    let labeled = cl.classify_all(&search(cfg, c), cfg.theta_enabled, cfg.exec())?;
    let mut out = Jsonl::create(cfg, "gap_labels.jsonl", "gap_labels")?;
    for lp in &labeled {
        out.write(&json!({ "point": lp.point.to_record(), "label": lp.label, "h": lp.h, "h_K": lp.h_k, "h_hat": lp.h_hat }))?;
        println!("{}\t{}", lp.point, lp.label);
    }
    out.finish()?;
    let report = gap::verify_gap_pairs(&ctx, &labeled, gap_cfg(cfg), cfg.exec())?;
    output::write_json(cfg, "gap_report.json", &report)?;
    println!(
        "{} qualifying pairs, {} violations{}",
        report.checks.len(),
        report.violations.len(),
        if report.vacuous { " (vacuous)" } else { "" }
    );
    Ok(report.passed())
}

pub fn packing_cmd(cfg: &RunConfig) -> CmdResult {
    let etas: Vec<f64> = (1..20).map(|k| k as f64 / 20.0).chain([39.0 / 59.0, 64.0 / 95.0, 0.75]).collect();
    let mut rows = Vec::new();
    println!("{:>10}  {:>10}", "eta", "base");
    for r in packing::table(&etas) {
        println!("{:>10.6}  {:>10.6}", r.eta, r.exponent_base);
        rows.push(vec![format!("{:.6}", r.eta), format!("{:.6}", r.exponent_base)]);
    }
    let g2 = packing::optimize_genus2();
    let ginf = packing::optimize_general_genus(Genus::Infinity)?;
    println!("genus 2: alpha* = {:.6}, {:.6} x {:.6} = {:.6}", g2.alpha_star, g2.base_s, g2.base_cluster, g2.product);
    println!("genus inf: alpha* = {:.6}, product = {:.6}", ginf.alpha_star, ginf.product);
    output::write_csv(cfg, "packing.csv", &["eta", "base"], &rows)?;
    output::write_json(cfg, "packing.json", &json!({ "genus2": g2, "genus_infinity": ginf }))?;
    Ok(true)
}

#[derive(Serialize)]
struct SurveyLine {
    a: Vec<String>,
    #[serde(rename = "H")]
    h: f64,
    points: usize,
}

pub fn survey(cfg: &RunConfig) -> CmdResult {
    let curves: Vec<QuinticCurve> = g2heights::family::collect_family(cfg.t, cfg.exec(), |_| true);
    let counts: Vec<usize> = cfg.exec().map(&curves, |c| {
        search_points(c, cfg.e_max, cfg.s_max, SearchOptions { exec: g2heights::Execution::Sequential, ..Default::default() }).len()
    });
    let mut out = Jsonl::create(cfg, "survey.jsonl", "survey")?;
    // Bands (k−1, k] of H(f).
    let mut bands: std::collections::BTreeMap<i64, (usize, usize, usize)> = Default::default();
    for (c, &n) in curves.iter().zip(&counts) {
        out.write(&SurveyLine { a: c.coeffs().iter().map(|x| x.to_string()).collect(), h: c.height_h(), points: n })?;
        let b = bands.entry(c.height_h().ceil().max(1.0) as i64).or_default();
        b.0 += 1;
        b.1 += n;
        b.2 = b.2.max(n);
    }
    out.finish()?;
    let rows: Vec<Vec<String>> = bands
        .iter()
        .map(|(k, (m, tot, mx))| vec![format!("({},{}]", k - 1, k), m.to_string(), format!("{:.6}", *tot as f64 / *m as f64), mx.to_string()])
        .collect();
    let p = output::write_csv(cfg, "summary.csv", &["T_band", "curves", "avg_points", "max_points"], &rows)?;
    println!("{} curves; points found (a lower bound for #C(Q)) summarised in {}", curves.len(), p.display());
    Ok(true)
}

pub fn calibrate(cfg: &RunConfig, corpus: Option<PathBuf>, size: usize) -> CmdResult {
    let path = corpus.unwrap_or_else(|| cfg.output_dir.join("curves.jsonl"));
    if !path.exists() {
        return Err(Failure { code: 1, message: format!("calibration corpus {} not found (run `g2h enumerate` first)", path.display()) });
    }
    let all = read_curves(&path)?;
    let n_all = all.len();
    let corpus = calibration::stride_corpus(all, size);
    let ccfg = CalibrationConfig { seed: cfg.seed, ..Default::default() };
    let mut frozen = calibration::calibrate(&corpus, &ccfg, cfg.exec())?;
    frozen.provenance = format!("{}; stride of {} through {n_all} curves in {}", frozen.provenance, size, path.file_name().unwrap_or_default().to_string_lossy());
    let p = output::path(cfg, "frozen_constants.json")?;
    std::fs::write(&p, serde_json::to_string_pretty(&frozen)? + "\n")?;
    let x5 = QuinticCurve::from_i64([0, 0, 0, 1])?;
    let snap = riemann_data(&x5, ccfg.precision_bits)?.snapshot(&x5);
    let q = output::path(cfg, "riemann_baseline.json")?;
    std::fs::write(&q, serde_json::to_string_pretty(&snap)? + "\n")?;
    let drift = calibration::drifted(g2heights::constants::frozen(), &frozen, 0.1);
    println!("{}", serde_json::to_string_pretty(&frozen)?);
    println!("wrote {} and {}", p.display(), q.display());
    if !drift.is_empty() {
        println!("drift > 10% against the shipped constants: {drift:?}");
    }
    Ok(true)
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub name: String,
    /// `pass`, `fail` or `vacuous`.
    pub status: String,
    pub detail: String,
}

fn section(name: &str, ok: bool, detail: String) -> Section {
    Section { name: name.into(), status: if ok { "pass" } else { "fail" }.into(), detail }
}

pub const EXPECTED_CHECKSUMS: [(usize, i64, i64); 4] = [(23, -80, 208), (40, 80, 392), (32, -208, 376), (41, 48, 424)];

fn integral_two_torsion(c: &QuinticCurve) -> Vec<Integer> {
    // Rational roots of a monic integral polynomial are integers dividing a5 (or 0).
    let a5 = c.coeffs()[3].clone().abs();
    let mut cand = vec![Integer::new()];
    if let Some(n) = a5.to_u64() {
        for d in (1..=n).filter(|d| n % d == 0) {
            cand.push(Integer::from(d));
            cand.push(-Integer::from(d));
        }
    }
    cand.into_iter().filter(|x| c.eval(x) == 0).collect()
}

pub fn verify(cfg: &RunConfig, c: &QuinticCurve, expected: [(usize, i64, i64); 4]) -> Result<(bool, Vec<Section>), Failure> {
    let mut secs = Vec::new();
    let actual = kummer::table_checksums();
    secs.push(section("kummer_table_checksum", actual == expected, format!("{actual:?}")));

    let tors = integral_two_torsion(c);
    let mut ok = true;
    for a in &tors {
        let d = kummer::delta_raw(c.coeffs(), kappa(&CurvePoint::affine(a.clone(), 1, 0)).coords());
        let fp = c.eval_derivative(a);
        ok &= d[0] == 0 && d[1] == 0 && d[2] == 0 && d[3] == Integer::from(&fp * &fp);
    }
    secs.push(section("two_torsion_duplication", ok, format!("{} integral 2-torsion points", tors.len())));

    let pts: Vec<CurvePoint> = search(cfg, c).into_iter().filter(|p| !p.is_infinity()).collect();
    let ok = pts.iter().all(|p| {
        let m = kappa(p).coords().iter().map(|x| x.clone().abs()).max().unwrap();
        let n = p.naive_height_int().unwrap();
        m == Integer::from(&n * &n)
    });
    secs.push(section("kummer_naive_height", ok, format!("{} points", pts.len())));

    let ctx = height_ctx(cfg, c);
    let sample: Vec<&CurvePoint> = pts.iter().take(6).collect();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut stoll_ok = true;
    for p in &sample {
        let k = kappa(p);
        let h1 = ctx.canonical_height(&k)?;
        let h2 = ctx.canonical_height(&kummer::double_coords(c, &k)?)?;
        let gap = (h2.value - 4.0 * h1.value).abs();
        worst = worst.max(gap);
        ok &= gap <= h2.error_radius + 4.0 * h1.error_radius + 1e-12;
        for (prime, mu) in &h1.prime_corrections {
            let v = ctx.bad_primes().iter().find(|(q, _)| q == prime).map(|(_, v)| *v).unwrap_or(0);
            let v_delta = if *prime == 2 { v.saturating_sub(4) } else { v };
            stoll_ok &= mu.abs() <= ctx.stoll_bound(prime) + 1e-12 && (v_delta > 1 || mu.abs() < 1e-12);
        }
        if !(h1.value > h1.error_radius) {
            // torsion-sized: ĥ must vanish within its radius
            ok &= h1.value.abs() <= 1e-6 + h1.error_radius;
        }
    }
    secs.push(section("canonical_doubling", ok, format!("max |ĥ(2P) − 4ĥ(P)| = {worst:.3e}")));
    secs.push(section("stoll_bounds", stoll_ok, format!("{} bad primes", ctx.bad_primes().len())));

    let mut ok = true;
    let mut n = 0;
    for (i, p) in sample.iter().enumerate() {
        for q in &sample[i + 1..] {
            if p.same_x(q) {
                continue;
            }
            let (s, d) = kummer::sum_and_diff_coords(c, p, q)?;
            let (hs, hd, hp, hq) = (ctx.canonical_height(&s)?, ctx.canonical_height(&d)?, ctx.point_height(p)?, ctx.point_height(q)?);
            let lhs = hs.value + hd.value - 2.0 * hp.value - 2.0 * hq.value;
            ok &= lhs.abs() <= hs.error_radius + hd.error_radius + 2.0 * (hp.error_radius + hq.error_radius) + 1e-12;
            n += 1;
        }
    }
    secs.push(section("parallelogram_law", ok, format!("{n} pairs")));

    let rd = if cfg.theta_enabled { Some(riemann_data(c, cfg.precision_bits)?) } else { None };
    let cl = Classifier::new(&ctx, gap_cfg(cfg), rd.clone())?;
    let labeled = cl.classify_all(&pts, cfg.theta_enabled, cfg.exec())?;
    let report = gap::verify_gap_pairs(&ctx, &labeled, gap_cfg(cfg), cfg.exec())?;
    let mut g = section("gap_pairs", report.passed(), format!("{} pairs, {} violations", report.checks.len(), report.violations.len()));
    if report.vacuous {
        g.status = "vacuous".into();
    }
    secs.push(g);

    if let Some(rd) = rd {
        let evens = ThetaChar::all().iter().filter(|ch| !ch.is_odd()).count();
        let z = rd.zero();
        let odd_max = ThetaChar::odd().into_iter().map(|ch| rd.theta(ch, &z).abs().real().to_f64()).fold(0.0, f64::max);
        secs.push(section("theta_parity", evens == 10 && odd_max < 1e-20, format!("{evens} even; max |θ_odd(0)| = {odd_max:.1e}")));
        let mut worst: f64 = 0.0;
        for p in pts.iter().take(6) {
            if let Ok((th, _)) = analytic::lambda_inf_point(&rd, c, p) {
                let lift = kappa(p).coords().clone().map(|x| Float::with_val(cfg.precision_bits, x));
                worst = worst.max((th - ctx.lambda_hat_infinity(&lift)?.value).abs());
            }
        }
        secs.push(section("local_height_paths", worst < 1e-4, format!("max difference {worst:.3e}")));
    }
    let passed = secs.iter().all(|s| s.status != "fail");
    Ok((passed, secs))
}

pub fn verify_cmd(cfg: &RunConfig, c: &QuinticCurve, expected: [(usize, i64, i64); 4]) -> CmdResult {
    let (passed, secs) = verify(cfg, c, expected)?;
    for s in &secs {
        println!("{:<8} {:<26} {}", s.status.to_uppercase(), s.name, s.detail);
    }
    output::write_json(cfg, "verify_report.json", &json!({ "curve": c.to_record(), "passed": passed, "sections": secs }))?;
    Ok(passed)
}
