//! Period matrix, Siegel reduction, Riemann theta functions with characteristics,
//! the root ↔ characteristic table, Thomae-type constants `c_ρ`, the theta
//! formula for `λ̂∞`, and Igusa `i₃` cross-checks.
//!
//! Conventions. Roots are sorted by `(re, im)`. Cycles are the lifts of the
//! segments `[e_k, e_{k+1}]`; a symplectic basis is extracted from their
//! intersection matrix (the signs of which are fixed by picking the candidate
//! whose `τ` is most nearly symmetric). Abel–Jacobi images are taken relative to
//! `∞` in the normalised coordinates `Z = Ω_A⁻¹ ∫ (dx/y, x dx/y)`.

use crate::constants;
use crate::error::{Error, Result};
use crate::family::QuinticCurve;
use crate::kummer::{ell_form, LinearForm};
use crate::points::CurvePoint;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

pub type Vec2 = [Complex; 2];
pub type Mat2 = [[Complex; 2]; 2];
/// Integral symplectic matrix acting on period columns `[Ω_A | Ω_B]`.
pub type Transform = [[i64; 4]; 4];

pub const REDUCTION_SLACK: f64 = 1e-9;
pub const MATCH_TOLERANCE: f64 = 1e-6;
const MAX_SWEEPS: usize = 64;
const MAX_PANELS: usize = 1 << 11;

// ---------------------------------------------------------------------------
// characteristics

/// Theta characteristic `((a1, a2), (b1, b2))`, entries stored in units of ½.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThetaChar {
    pub a: [u8; 2],
    pub b: [u8; 2],
}

impl ThetaChar {
    pub const fn new(a1: u8, a2: u8, b1: u8, b2: u8) -> Self {
        ThetaChar { a: [a1 & 1, a2 & 1], b: [b1 & 1, b2 & 1] }
    }

    /// The characteristic `((½,½),(0,½))` whose theta divisor is the image of the
    /// curve in Mumford's normalisation.
    pub const MUMFORD_INFINITY: ThetaChar = ThetaChar::new(1, 1, 0, 1);

    pub fn all() -> [ThetaChar; 16] {
        std::array::from_fn(|i| ThetaChar::new((i >> 3) as u8, (i >> 2) as u8, (i >> 1) as u8, i as u8))
    }

    pub fn odd() -> Vec<ThetaChar> {
        Self::all().into_iter().filter(|c| c.is_odd()).collect()
    }

    pub fn even() -> Vec<ThetaChar> {
        Self::all().into_iter().filter(|c| !c.is_odd()).collect()
    }

    /// `4⟨a, b⟩ mod 2`.
    pub fn parity(self) -> u8 {
        (self.a[0] * self.b[0] + self.a[1] * self.b[1]) & 1
    }

    pub fn is_odd(self) -> bool {
        self.parity() == 1
    }

    /// Sum modulo 1.
    pub fn add(self, o: ThetaChar) -> ThetaChar {
        ThetaChar { a: [self.a[0] ^ o.a[0], self.a[1] ^ o.a[1]], b: [self.b[0] ^ o.b[0], self.b[1] ^ o.b[1]] }
    }

    fn halves(self) -> ([i64; 2], [i64; 2]) {
        ([self.a[0] as i64, self.a[1] as i64], [self.b[0] as i64, self.b[1] as i64])
    }
}

impl fmt::Display for ThetaChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = |x: u8| if x == 1 { "½" } else { "0" };
        write!(f, "(({},{}),({},{}))", h(self.a[0]), h(self.a[1]), h(self.b[0]), h(self.b[1]))
    }
}

/// `χ_∞`, the `χ_ρ` of the five roots (sorted order) and the half-period
/// classes `η_ρ` of `[(ρ,0)] − [∞]`, so that `χ_ρ = η_ρ + χ_∞`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharTable {
    pub infinity: ThetaChar,
    pub roots: [ThetaChar; 5],
    pub eta: [ThetaChar; 5],
}

// ---------------------------------------------------------------------------
// small complex linear algebra

fn prec_of(z: &Complex) -> u32 {
    z.prec().0
}

fn cz(p: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(p, (re, im))
}

fn cabs(z: &Complex) -> Float {
    Float::with_val(prec_of(z), z.abs_ref())
}

fn cabs_f64(z: &Complex) -> f64 {
    cabs(z).to_f64()
}

fn pi(p: u32) -> Float {
    Float::with_val(p, Constant::Pi)
}

fn m2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let p = prec_of(&a[0][0]);
    std::array::from_fn(|i| {
        std::array::from_fn(|j| Complex::with_val(p, &a[i][0] * &b[0][j]) + Complex::with_val(p, &a[i][1] * &b[1][j]))
    })
}

fn m2_add(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].clone() + &b[i][j]))
}

fn m2_inv(a: &Mat2) -> Result<Mat2> {
    let p = prec_of(&a[0][0]);
    let det = Complex::with_val(p, &a[0][0] * &a[1][1]) - Complex::with_val(p, &a[0][1] * &a[1][0]);
    if det.real().is_zero() && det.imag().is_zero() {
        return Err(Error::DegenerateGram(2));
    }
    let inv = |z: &Complex| Complex::with_val(p, z / &det);
    Ok([[inv(&a[1][1]), -inv(&a[0][1])], [-inv(&a[1][0]), inv(&a[0][0])]])
}

fn m2_vec(a: &Mat2, v: &Vec2) -> Vec2 {
    let p = prec_of(&a[0][0]);
    std::array::from_fn(|i| Complex::with_val(p, &a[i][0] * &v[0]) + Complex::with_val(p, &a[i][1] * &v[1]))
}

fn symmetrize(t: Mat2) -> Mat2 {
    let off = Complex::with_val(prec_of(&t[0][1]), &t[0][1] + &t[1][0]) / 2u32;
    [[t[0][0].clone(), off.clone()], [off, t[1][1].clone()]]
}

fn int_block(s: &Transform, r0: usize, c0: usize, p: u32) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| cz(p, s[r0 + i][c0 + j] as f64, 0.0)))
}

fn t4_mul(a: &Transform, b: &Transform) -> Transform {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

fn t4_identity() -> Transform {
    std::array::from_fn(|i| std::array::from_fn(|j| (i == j) as i64))
}

/// `τ ↦ (A + τC)⁻¹(B + τD)` for `step = [[A, B], [C, D]]`.
fn act(tau: &Mat2, step: &Transform) -> Result<Mat2> {
    let p = prec_of(&tau[0][0]);
    let (a, b, c, d) = (int_block(step, 0, 0, p), int_block(step, 0, 2, p), int_block(step, 2, 0, p), int_block(step, 2, 2, p));
    let den = m2_add(&a, &m2_mul(tau, &c));
    let num = m2_add(&b, &m2_mul(tau, &d));
    Ok(symmetrize(m2_mul(&m2_inv(&den)?, &num)))
}

fn im_matrix(tau: &Mat2) -> [[Float; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| tau[i][j].imag().clone()))
}

fn re_matrix(tau: &Mat2) -> [[Float; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| tau[i][j].real().clone()))
}

fn f2_inv(y: &[[Float; 2]; 2]) -> [[Float; 2]; 2] {
    let p = y[0][0].prec();
    let det = Float::with_val(p, &y[0][0] * &y[1][1]) - Float::with_val(p, &y[0][1] * &y[1][0]);
    [
        [Float::with_val(p, &y[1][1] / &det), -Float::with_val(p, &y[0][1] / &det)],
        [-Float::with_val(p, &y[1][0] / &det), Float::with_val(p, &y[0][0] / &det)],
    ]
}

fn f2_vec(m: &[[Float; 2]; 2], v: &[Float; 2]) -> [Float; 2] {
    let p = m[0][0].prec();
    std::array::from_fn(|i| Float::with_val(p, &m[i][0] * &v[0]) + Float::with_val(p, &m[i][1] * &v[1]))
}

/// Smallest eigenvalue of `Im τ` (as `f64`).
pub fn lambda_min(tau: &Mat2) -> f64 {
    let y = im_matrix(tau);
    let (a, b, d) = (y[0][0].to_f64(), y[0][1].to_f64(), y[1][1].to_f64());
    (a + d) / 2.0 - (((a - d) / 2.0).powi(2) + b * b).sqrt()
}

pub fn is_positive_definite(tau: &Mat2) -> bool {
    let y = im_matrix(tau);
    let det = Float::with_val(y[0][0].prec(), &y[0][0] * &y[1][1]) - Float::with_val(y[0][0].prec(), &y[0][1] * &y[1][0]);
    y[0][0].is_sign_positive() && !y[0][0].is_zero() && det.is_sign_positive() && !det.is_zero()
}

// ---------------------------------------------------------------------------
// Siegel reduction

/// The reduction inequalities, each as `(name, holds)`.
pub fn reduction_checks(tau: &Mat2, slack: f64) -> Vec<(&'static str, bool)> {
    let r = |i: usize, j: usize| tau[i][j].real().to_f64();
    let y = |i: usize, j: usize| tau[i][j].imag().to_f64();
    vec![
        ("|Re τ| ≤ ½", (0..2).all(|i| (0..2).all(|j| r(i, j).abs() <= 0.5 + slack))),
        ("Im τ₂ ≥ Im τ₁", y(1, 1) >= y(0, 0) - slack),
        ("Im τ₁ ≥ 2 Im τ₁₂ ≥ 0", y(0, 0) >= 2.0 * y(0, 1) - slack && y(0, 1) >= -slack),
        ("Im τ₁ ≥ √3/2", y(0, 0) >= 3f64.sqrt() / 2.0 - slack),
    ]
}

pub fn is_reduced(tau: &Mat2, slack: f64) -> bool {
    reduction_checks(tau, slack).iter().all(|c| c.1)
}

/// Gauss reduction of `Im τ`, integral translation of `Re τ`, and the
/// quasi-inversion `τ₁ ↦ −1/τ₁` while `|τ₁| < 1`.
pub fn reduce_siegel(tau: &Mat2) -> Result<(Mat2, Transform)> {
    if !is_positive_definite(tau) {
        return Err(Error::DomainError("Im τ is not positive definite".into()));
    }
    let mut tau = symmetrize(tau.clone());
    let mut m = t4_identity();
    for sweep in 0..MAX_SWEEPS {
        // Gauss reduction on (y1, y12, y2); R collects the row operations.
        let y = im_matrix(&tau);
        let (mut y1, mut y12, mut y2) = (y[0][0].to_f64(), y[0][1].to_f64(), y[1][1].to_f64());
        let mut r = [[1i64, 0], [0, 1]];
        for _ in 0..200 {
            let q = (y12 / y1).round() as i64;
            if q != 0 {
                r[1] = [r[1][0] - q * r[0][0], r[1][1] - q * r[0][1]];
                let qf = q as f64;
                y2 = y2 - 2.0 * qf * y12 + qf * qf * y1;
                y12 -= qf * y1;
            }
            if y2 < y1 {
                r.swap(0, 1);
                std::mem::swap(&mut y1, &mut y2);
                continue;
            }
            break;
        }
        if y12 < 0.0 {
            r[1] = [-r[1][0], -r[1][1]];
        }
        // τ ↦ R τ Rᵀ is the action of [[R⁻¹, 0], [0, Rᵀ]].
        let det = r[0][0] * r[1][1] - r[0][1] * r[1][0];
        let rinv = [[det * r[1][1], -det * r[0][1]], [-det * r[1][0], det * r[0][0]]];
        let mut step = [[0i64; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                step[i][j] = rinv[i][j];
                step[2 + i][2 + j] = r[j][i];
            }
        }
        tau = act(&tau, &step)?;
        m = t4_mul(&m, &step);

        let mut step = t4_identity();
        for i in 0..2 {
            for j in 0..2 {
                step[i][2 + j] = -(tau[i][j].real().to_f64().round() as i64);
            }
        }
        tau = act(&tau, &step)?;
        m = t4_mul(&m, &step);

        if cabs_f64(&tau[0][0]) < 1.0 - 1e-12 {
            let mut step = [[0i64; 4]; 4];
            step[0][2] = -1;
            step[1][1] = 1;
            step[2][0] = 1;
            step[3][3] = 1;
            tau = act(&tau, &step)?;
            m = t4_mul(&m, &step);
            continue;
        }
        if is_reduced(&tau, REDUCTION_SLACK) {
            return Ok((tau, m));
        }
        return Err(Error::ReductionStall(sweep + 1));
    }
    Err(Error::ReductionStall(MAX_SWEEPS))
}

// ---------------------------------------------------------------------------
// quadrature

fn gauss_legendre(n: usize, prec: u32) -> Arc<Vec<(Float, Float)>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<Vec<(Float, Float)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(n, prec)) {
        return v.clone();
    }
    let wp = prec + 32;
    let eps = Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 8));
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(wp, guess);
        let mut dp = Float::new(wp);
        for _ in 0..100 {
            let (mut p0, mut p1) = (Float::with_val(wp, 1), x.clone());
            for k in 2..=n {
                let p2 = (Float::with_val(wp, &x * &p1) * (2 * k - 1) as u32 - Float::with_val(wp, &p0 * (k - 1) as u32)) / k as u32;
                p0 = p1;
                p1 = p2;
            }
            let x2m1 = Float::with_val(wp, x.square_ref()) - 1u32;
            dp = (Float::with_val(wp, &x * &p1) - &p0) * n as u32 / &x2m1;
            let dx = Float::with_val(wp, &p1 / &dp);
            x -= &dx;
            if dx.abs() < eps {
                break;
            }
        }
        let one_m = 1u32 - Float::with_val(wp, x.square_ref());
        let w = Float::with_val(wp, 2u32) / (one_m * Float::with_val(wp, dp.square_ref()));
        out.push((Float::with_val(prec, &x), Float::with_val(prec, &w)));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let out = Arc::new(out);
    cache.lock().unwrap().insert((n, prec), out.clone());
    out
}

/// Composite Gauss–Legendre nodes on `[0, 1]`, ascending.
fn panel_nodes(panels: usize, prec: u32) -> Vec<(Float, Float)> {
    let base = gauss_legendre(24 + prec as usize / 4, prec);
    let mut out = Vec::with_capacity(panels * base.len());
    for j in 0..panels {
        for (x, w) in base.iter() {
            let u = (Float::with_val(prec, x + 1u32) / 2u32 + j as u32) / panels as u32;
            out.push((u, Float::with_val(prec, w / (2 * panels) as u32)));
        }
    }
    out
}

/// Doubles the panel count until two successive results agree to `2^{-3p/4}`.
fn adaptive<F>(prec: u32, mut rule: F) -> Result<Vec2>
where
    F: FnMut(&[(Float, Float)]) -> Vec2,
{
    let tol = 2f64.powi(-(3 * prec as i32) / 4);
    let mut prev = rule(&panel_nodes(1, prec));
    let mut panels = 2;
    while panels <= MAX_PANELS {
        let cur = rule(&panel_nodes(panels, prec));
        let scale = cur.iter().map(cabs_f64).fold(1.0, f64::max);
        let diff = (0..2).map(|i| cabs_f64(&Complex::with_val(prec, &cur[i] - &prev[i]))).fold(0.0, f64::max);
        if diff <= tol * scale {
            return Ok(cur);
        }
        prev = cur;
        panels *= 2;
    }
    Err(Error::NonConvergence(prec))
}

/// Square roots along a path, choosing each sign for continuity with the previous.
fn continued_sqrt(vals: impl IntoIterator<Item = Complex>) -> Vec<Complex> {
    let mut out: Vec<Complex> = Vec::new();
    for v in vals {
        let mut s = v.sqrt();
        if let Some(prev) = out.last() {
            let p = prec_of(&s);
            if cabs(&Complex::with_val(p, &s - prev)) > cabs(&Complex::with_val(p, &s + prev)) {
                s = -s;
            }
        }
        out.push(s);
    }
    out
}

fn prod_minus(x: &Complex, zs: &[&Complex]) -> Complex {
    let p = prec_of(x);
    zs.iter().fold(cz(p, 1.0, 0.0), |acc, z| acc * Complex::with_val(p, x - *z))
}

/// `2 ∫_{e_i}^{e_j} (1, x) dx/y` via `x = m + r sin θ`.
fn chain_period(roots: &[Complex; 5], i: usize, j: usize, prec: u32) -> Result<Vec2> {
    let (e1, e2) = (&roots[i], &roots[j]);
    let m = Complex::with_val(prec, e1 + e2) / 2u32;
    let r = Complex::with_val(prec, e2 - e1) / 2u32;
    let others: Vec<&Complex> = (0..5).filter(|&k| k != i && k != j).map(|k| &roots[k]).collect();
    let pi = pi(prec);
    adaptive(prec, |nodes| {
        let xs: Vec<Complex> = nodes
            .iter()
            .map(|(u, _)| {
                let th = (Float::with_val(prec, u) - Float::with_val(prec, 0.5)) * &pi;
                m.clone() + Complex::with_val(prec, &r * th.sin())
            })
            .collect();
        let sg = continued_sqrt(xs.iter().map(|x| prod_minus(x, &others)));
        let mut acc = [cz(prec, 0.0, 0.0), cz(prec, 0.0, 0.0)];
        for ((x, s), (_, w)) in xs.iter().zip(&sg).zip(nodes) {
            // dθ/(i√g) = −i dθ/√g
            let t = Complex::with_val(prec, Float::with_val(prec, w * &pi) / s) * cz(prec, 0.0, -1.0);
            acc[1] += Complex::with_val(prec, &t * x);
            acc[0] += t;
        }
        acc.map(|z| z * 2u32)
    })
}

/// `∫_e^∞ (1, x) dx/y` along the ray from `e` best separated from the other roots.
fn ray_integral(roots: &[Complex; 5], e_idx: usize, prec: u32) -> Result<Vec2> {
    let e = &roots[e_idx];
    let others: Vec<&Complex> = (0..5).filter(|&k| k != e_idx).map(|k| &roots[k]).collect();
    let ec = to_c64(e);
    let mut best = (f64::NEG_INFINITY, 0);
    for k in 0..16 {
        let ang = std::f64::consts::PI * k as f64 / 8.0;
        let d = (ang.cos(), ang.sin());
        let dist = others
            .iter()
            .map(|z| {
                let w = c64_sub(to_c64(z), ec);
                let proj = (w.0 * d.0 + w.1 * d.1).max(0.0);
                c64_abs(c64_sub(w, (d.0 * proj, d.1 * proj)))
            })
            .fold(f64::INFINITY, f64::min);
        if dist > best.0 {
            best = (dist, k);
        }
    }
    let ang = Float::with_val(prec, Constant::Pi) * best.1 as u32 / 8u32;
    let d = Complex::with_val(prec, (ang.clone().cos(), ang.sin()));
    let sd = d.clone().sqrt();
    let d52 = Complex::with_val(prec, d.square_ref()) * &sd;
    adaptive(prec, |nodes| {
        let mut xs = Vec::with_capacity(nodes.len());
        let mut ws = Vec::with_capacity(nodes.len());
        for (u, _) in nodes {
            let s = Float::with_val(prec, u / Float::with_val(prec, 1u32 - u));
            let dt = Complex::with_val(prec, &d * Float::with_val(prec, s.square_ref()));
            // Π (x − z)/(d t) = Π (1 + (e − z)/(d t)) → 1 at infinity.
            let w = others.iter().fold(cz(prec, 1.0, 0.0), |acc, z| {
                acc * (Complex::with_val(prec, e - *z) / &dt + 1u32)
            });
            xs.push((s, dt));
            ws.push(w);
        }
        let mut sw = continued_sqrt(ws.into_iter().rev());
        sw.reverse();
        let one = cz(prec, 1.0, 0.0);
        if let Some(last) = sw.last() {
            if cabs(&Complex::with_val(prec, last - &one)) > cabs(&Complex::with_val(prec, last + &one)) {
                sw.iter_mut().for_each(|z| *z = -z.clone());
            }
        }
        let mut acc = [cz(prec, 0.0, 0.0), cz(prec, 0.0, 0.0)];
        for (((s, dt), sq), (u, w)) in xs.iter().zip(&sw).zip(nodes) {
            let om = Float::with_val(prec, 1u32 - u);
            let s5 = Float::with_val(prec, s.square_ref()).square() * s;
            let y = Complex::with_val(prec, &d52 * s5) * sq;
            let dx = Complex::with_val(prec, &d * Float::with_val(prec, u * 2u32)) / (Float::with_val(prec, om.square_ref()) * &om);
            let t = Complex::with_val(prec, &dx / &y) * w;
            let x = Complex::with_val(prec, e + dt);
            acc[1] += Complex::with_val(prec, &t * &x);
            acc[0] += t;
        }
        acc
    })
}

/// `∫_e^{x0} (1, x) dx/y` along `x = e + (x0 − e)u²`, with the branch ending at `y0`.
fn segment_integral(roots: &[Complex; 5], e_idx: usize, x0: &Complex, y0: &Complex, prec: u32) -> Result<Vec2> {
    let e = &roots[e_idx];
    let others: Vec<&Complex> = (0..5).filter(|&k| k != e_idx).map(|k| &roots[k]).collect();
    let span = Complex::with_val(prec, x0 - e);
    let c = span.clone().sqrt();
    adaptive(prec, |nodes| {
        let xs: Vec<Complex> = nodes
            .iter()
            .map(|(u, _)| e.clone() + Complex::with_val(prec, &span * Float::with_val(prec, u.square_ref())))
            .collect();
        let sg = continued_sqrt(xs.iter().map(|x| prod_minus(x, &others)).chain(std::iter::once(prod_minus(x0, &others))));
        let mut acc = [cz(prec, 0.0, 0.0), cz(prec, 0.0, 0.0)];
        for ((x, s), (_, w)) in xs.iter().zip(&sg).zip(nodes) {
            let t = Complex::with_val(prec, &c * Float::with_val(prec, w * 2u32)) / s;
            acc[1] += Complex::with_val(prec, &t * x);
            acc[0] += t;
        }
        let yend = Complex::with_val(prec, &c * sg.last().expect("endpoint"));
        if cabs(&Complex::with_val(prec, &yend - y0)) > cabs(&Complex::with_val(prec, &yend + y0)) {
            acc = acc.map(|z| -z);
        }
        acc
    })
}

type C64 = (f64, f64);

fn to_c64(z: &Complex) -> C64 {
    (z.real().to_f64(), z.imag().to_f64())
}

fn c64_sub(a: C64, b: C64) -> C64 {
    (a.0 - b.0, a.1 - b.1)
}

fn c64_abs(a: C64) -> f64 {
    a.0.hypot(a.1)
}

/// Distance from `z` to the segment `[a, b]`.
fn seg_distance(z: C64, a: C64, b: C64) -> f64 {
    let d = c64_sub(b, a);
    let w = c64_sub(z, a);
    let len2 = d.0 * d.0 + d.1 * d.1;
    let t = if len2 == 0.0 { 0.0 } else { ((w.0 * d.0 + w.1 * d.1) / len2).clamp(0.0, 1.0) };
    c64_abs(c64_sub(w, (d.0 * t, d.1 * t)))
}

// ---------------------------------------------------------------------------
// periods

/// Integer symplectic basis (columns `[A₁, A₂, B₁, B₂]` in cycle coordinates) for
/// the chain intersection matrix with signs `eps`.
fn symplectic_basis(eps: [i64; 3]) -> Option<[[i64; 4]; 4]> {
    let mut e = [[0i64; 4]; 4];
    for k in 0..3 {
        e[k][k + 1] = eps[k];
        e[k + 1][k] = -eps[k];
    }
    let form = |u: &[i64; 4], v: &[i64; 4]| -> i64 { (0..4).map(|i| (0..4).map(|j| u[i] * e[i][j] * v[j]).sum::<i64>()).sum() };
    let mut rem: Vec<[i64; 4]> = (0..4).map(|j| std::array::from_fn(|i| (i == j) as i64)).collect();
    let (mut aa, mut bb) = (Vec::new(), Vec::new());
    while !rem.is_empty() {
        let a = rem.remove(0);
        let idx = rem.iter().position(|v| form(&a, v).abs() == 1)?;
        let v = rem.remove(idx);
        let s = form(&a, &v);
        let b: [i64; 4] = v.map(|x| s * x);
        rem = rem
            .into_iter()
            .map(|v| {
                let (va, vb) = (form(&v, &a), form(&v, &b));
                std::array::from_fn(|i| v[i] - vb * a[i] + va * b[i])
            })
            .collect();
        aa.push(a);
        bb.push(b);
    }
    let cols = [aa[0], aa[1], bb[0], bb[1]];
    Some(std::array::from_fn(|r| std::array::from_fn(|c| cols[c][r])))
}

/// Everything the theta side needs for one curve.
#[derive(Debug, Clone)]
pub struct RiemannData {
    pub precision_bits: u32,
    /// Roots sorted by `(re, im)`; root indices elsewhere refer to this order.
    pub roots: [Complex; 5],
    /// Reduced, symmetrised `τ = Ω_A⁻¹ Ω_B`.
    pub tau: Mat2,
    pub big_period: Mat2,
    pub small_period: Mat2,
    /// Reduction transform applied to the raw symplectic basis.
    pub transform: Transform,
    /// `|τ₁₂ − τ₂₁|` before symmetrisation.
    pub symmetry_defect: f64,
    pub char_table: CharTable,
    omega_a_inv: Mat2,
    /// Normalised `∫_{e_k}^∞` for each root.
    root_aj: [Vec2; 5],
}

/// JSON snapshot of a Riemann matrix and characteristic table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiemannSnapshot {
    pub curve: [String; 4],
    pub precision_bits: u32,
    /// `[τ₁, τ₁₂, τ₂]`, each as `[re, im]` decimal strings.
    pub tau: [[String; 2]; 3],
    pub char_table: CharTable,
}

fn sort_roots(r: &[Complex; 5]) -> [Complex; 5] {
    let mut v = r.to_vec();
    v.sort_by(|x, y| {
        let (a, b) = (x.real().to_f64(), y.real().to_f64());
        if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
            a.partial_cmp(&b).unwrap()
        } else {
            x.imag().to_f64().partial_cmp(&y.imag().to_f64()).unwrap()
        }
    });
    v.try_into().expect("five roots")
}

/// Periods, Siegel reduction and the characteristic table. A failed
/// characteristic match is retried once at twice the precision.
pub fn compute_periods(curve: &QuinticCurve, precision_bits: u32) -> Result<RiemannData> {
    match compute_periods_at(curve, precision_bits) {
        Err(Error::AmbiguousMatch(_)) => compute_periods_at(curve, 2 * precision_bits),
        r => r,
    }
}

fn compute_periods_at(curve: &QuinticCurve, prec: u32) -> Result<RiemannData> {
    let raw = curve.roots(prec)?;
    let roots = sort_roots(&raw.each_ref().map(|z| Complex::with_val(prec, z)));
    let tiny = 2f64.powi(-(prec as i32) / 4);
    for i in 0..5 {
        for j in i + 1..5 {
            if cabs_f64(&Complex::with_val(prec, &roots[i] - &roots[j])) < tiny {
                return Err(Error::PathDegeneracy);
            }
        }
    }
    let chain: Vec<Vec2> = (0..4).map(|k| chain_period(&roots, k, k + 1, prec)).collect::<Result<_>>()?;

    let mut best: Option<(f64, Mat2, Mat2, Mat2)> = None;
    for mask in 0..8 {
        let eps = [0, 1, 2].map(|b| if mask >> b & 1 == 0 { 1 } else { -1 });
        let Some(basis) = symplectic_basis(eps) else { continue };
        // Ω' = Ω · basis, Ω the 2×4 matrix of chain periods.
        let col = |c: usize| -> Vec2 {
            std::array::from_fn(|r| {
                (0..4).fold(cz(prec, 0.0, 0.0), |acc, k| acc + Complex::with_val(prec, &chain[k][r] * basis[k][c]))
            })
        };
        let cols = [col(0), col(1), col(2), col(3)];
        let oa: Mat2 = std::array::from_fn(|r| [cols[0][r].clone(), cols[1][r].clone()]);
        let ob: Mat2 = std::array::from_fn(|r| [cols[2][r].clone(), cols[3][r].clone()]);
        let Ok(inv) = m2_inv(&oa) else { continue };
        let tau = m2_mul(&inv, &ob);
        let sym = cabs_f64(&Complex::with_val(prec, &tau[0][1] - &tau[1][0]));
        if is_positive_definite(&tau) && best.as_ref().map_or(true, |b| sym < b.0) {
            best = Some((sym, oa, ob, tau));
        }
    }
    let (sym, oa, ob, tau0) = best.ok_or(Error::NonConvergence(prec))?;
    if sym > 2f64.powi(-(prec as i32) / 2) {
        return Err(Error::NonConvergence(prec));
    }
    let (tau, transform) = reduce_siegel(&tau0)?;
    // [Ω_A | Ω_B] · transform
    let blk = |r0: usize, c0: usize| int_block(&transform, r0, c0, prec);
    let big = m2_add(&m2_mul(&oa, &blk(0, 0)), &m2_mul(&ob, &blk(2, 0)));
    let small = m2_add(&m2_mul(&oa, &blk(0, 2)), &m2_mul(&ob, &blk(2, 2)));
    let omega_a_inv = m2_inv(&big)?;
    let mut root_aj: Vec<Vec2> = Vec::with_capacity(5);
    for k in 0..5 {
        root_aj.push(m2_vec(&omega_a_inv, &ray_integral(&roots, k, prec)?));
    }
    let mut rd = RiemannData {
        precision_bits: prec,
        roots,
        tau,
        big_period: big,
        small_period: small,
        transform,
        symmetry_defect: sym,
        char_table: CharTable { infinity: ThetaChar::MUMFORD_INFINITY, roots: [ThetaChar::new(0, 0, 0, 0); 5], eta: [ThetaChar::new(0, 0, 0, 0); 5] },
        omega_a_inv,
        root_aj: root_aj.try_into().expect("five roots"),
    };
    rd.char_table = assign_characteristics(&rd, curve)?;
    Ok(rd)
}

/// Single-flight cache of Riemann data per curve and precision.
pub fn riemann_data(curve: &QuinticCurve, precision_bits: u32) -> Result<Arc<RiemannData>> {
    type Slot = Arc<OnceLock<Result<Arc<RiemannData>>>>;
    static CACHE: OnceLock<Mutex<HashMap<(QuinticCurve, u32), Slot>>> = OnceLock::new();
    let slot = CACHE.get_or_init(Default::default).lock().unwrap().entry((curve.clone(), precision_bits)).or_default().clone();
    slot.get_or_init(|| compute_periods(curve, precision_bits).map(Arc::new)).clone()
}

impl RiemannData {
    pub fn tau_f64(&self) -> [[(f64, f64); 2]; 2] {
        std::array::from_fn(|i| std::array::from_fn(|j| to_c64(&self.tau[i][j])))
    }

    pub fn im_tau1(&self) -> f64 {
        self.tau[0][0].imag().to_f64()
    }

    pub fn snapshot(&self, curve: &QuinticCurve) -> RiemannSnapshot {
        let s = |f: &Float| f.to_string_radix(10, Some(40));
        let e = |z: &Complex| [s(z.real()), s(z.imag())];
        RiemannSnapshot {
            curve: curve.coeffs().clone().map(|a| a.to_string()),
            precision_bits: self.precision_bits,
            tau: [e(&self.tau[0][0]), e(&self.tau[0][1]), e(&self.tau[1][1])],
            char_table: self.char_table.clone(),
        }
    }

    /// Largest entrywise distance between this `τ` and a snapshot.
    pub fn snapshot_distance(&self, snap: &RiemannSnapshot) -> f64 {
        let ours = [&self.tau[0][0], &self.tau[0][1], &self.tau[1][1]];
        ours.iter()
            .zip(&snap.tau)
            .map(|(z, [re, im])| {
                let w = Complex::with_val(self.precision_bits, (Float::parse(re).unwrap(), Float::parse(im).unwrap()));
                cabs_f64(&Complex::with_val(self.precision_bits, *z - &w))
            })
            .fold(0.0, f64::max)
    }

    /// `(A, B)` with `Z = A + τB`.
    pub fn half_coords(&self, z: &Vec2) -> ([Float; 2], [Float; 2]) {
        let y = im_matrix(&self.tau);
        let x = re_matrix(&self.tau);
        let b = f2_vec(&f2_inv(&y), &[z[0].imag().clone(), z[1].imag().clone()]);
        let xb = f2_vec(&x, &b);
        let a = std::array::from_fn(|i| Float::with_val(self.precision_bits, z[i].real() - &xb[i]));
        (a, b)
    }

    /// `A + τB` for real `A`, `B`.
    pub fn from_half_coords(&self, a: &[Float; 2], b: &[Float; 2]) -> Vec2 {
        let p = self.precision_bits;
        std::array::from_fn(|i| {
            Complex::with_val(p, (a[i].clone(), 0))
                + Complex::with_val(p, &self.tau[i][0] * &b[0])
                + Complex::with_val(p, &self.tau[i][1] * &b[1])
        })
    }

    /// Lift of a half-period characteristic: `b + τa`.
    pub fn half_period(&self, c: ThetaChar) -> Vec2 {
        let h = |x: u8| Float::with_val(self.precision_bits, x as f64 / 2.0);
        self.from_half_coords(&[h(c.b[0]), h(c.b[1])], &[h(c.a[0]), h(c.a[1])])
    }

    /// Moves `Z` into the fundamental parallelogram `|A_i|, |B_i| ≤ ½`.
    pub fn reduce_z(&self, z: &Vec2) -> Vec2 {
        let (a, b) = self.half_coords(z);
        let r = |v: &[Float; 2]| -> [Float; 2] { std::array::from_fn(|i| v[i].clone() - v[i].clone().round()) };
        self.from_half_coords(&r(&a), &r(&b))
    }

    /// Abel–Jacobi image of `(x, y) − ∞`, reduced. The base root is the one whose
    /// segment to `x` keeps farthest from the other roots.
    pub fn aj(&self, x: &Complex, y: &Complex) -> Result<Vec2> {
        let p = self.precision_bits;
        let xc = to_c64(x);
        let rc: Vec<C64> = self.roots.iter().map(to_c64).collect();
        let bi = (0..5)
            .max_by(|&q1, &q2| {
                let clearance = |q: usize| (0..5).filter(|&j| j != q).map(|j| seg_distance(rc[j], rc[q], xc)).fold(f64::INFINITY, f64::min);
                clearance(q1).partial_cmp(&clearance(q2)).unwrap()
            })
            .expect("five roots");
        let seg = m2_vec(&self.omega_a_inv, &segment_integral(&self.roots, bi, x, y, p)?);
        let z = [self.root_aj[bi][0].clone() + &seg[0], self.root_aj[bi][1].clone() + &seg[1]];
        Ok(self.reduce_z(&z))
    }

    pub fn aj_point(&self, curve: &QuinticCurve, pt: &CurvePoint) -> Result<Vec2> {
        let (s, e, t) = pt.parts().ok_or(Error::InfinityPoint)?;
        let p = self.precision_bits;
        let e2 = Integer::from(e * e);
        let e5 = Integer::from(e2.clone() * &e2) * e;
        let x = Complex::with_val(p, Float::with_val(p, s) / Float::with_val(p, &e2));
        let y = Complex::with_val(p, Float::with_val(p, t) / Float::with_val(p, &e5));
        let _ = curve;
        self.aj(&x, &y)
    }

    /// Normalised `∫_{e_k}^∞`, a half period.
    pub fn root_aj(&self, k: usize) -> &Vec2 {
        &self.root_aj[k]
    }

    pub fn theta(&self, c: ThetaChar, z: &Vec2) -> Complex {
        theta(c, z, &self.tau, self.precision_bits)
    }

    pub fn xi(&self, c: ThetaChar, z: &Vec2) -> f64 {
        xi(c, z, &self.tau)
    }

    pub fn zero(&self) -> Vec2 {
        [cz(self.precision_bits, 0.0, 0.0), cz(self.precision_bits, 0.0, 0.0)]
    }
}

// ---------------------------------------------------------------------------
// theta

/// `θ(Z) · e^{−π Im Z·(Im τ)⁻¹ Im Z}`, summed over the box of radius `R` about
/// the Gaussian's centre; returns the damped sum and the exponent `π Im Z·Y⁻¹ Im Z`.
/// Characteristic entries are in units of ½ and need not be reduced.
pub(crate) fn theta_damped(ah: [i64; 2], bh: [i64; 2], z: &Vec2, tau: &Mat2, prec: u32) -> (Complex, Float) {
    let y = im_matrix(tau);
    let im_z = [z[0].imag().clone(), z[1].imag().clone()];
    let c = f2_vec(&f2_inv(&y), &im_z);
    let pi_f = pi(prec);
    let shift = (Float::with_val(prec, &im_z[0] * &c[0]) + Float::with_val(prec, &im_z[1] * &c[1])) * &pi_f;
    // Terms outside ‖v + c‖₂ ≥ R − 1 are below e^{−πλ(R−1)²}, summed < 2^{−prec}.
    let lam = lambda_min(tau).max(1e-3);
    let r = 1 + ((prec as f64 * std::f64::consts::LN_2 + 20.0) / (std::f64::consts::PI * lam)).sqrt().ceil() as i64;
    let centre: [i64; 2] = std::array::from_fn(|i| (-(ah[i] as f64) / 2.0 - c[i].to_f64()).round() as i64);
    let zb: Vec2 = std::array::from_fn(|i| z[i].clone() + Float::with_val(prec, bh[i] as f64 / 2.0));
    let ipi = Complex::with_val(prec, (0, &pi_f));
    let mut sum = cz(prec, 0.0, 0.0);
    for n1 in centre[0] - r..=centre[0] + r {
        for n2 in centre[1] - r..=centre[1] + r {
            let v1 = Float::with_val(prec, n1 as f64 + ah[0] as f64 / 2.0);
            let v2 = Float::with_val(prec, n2 as f64 + ah[1] as f64 / 2.0);
            let mut q = Complex::with_val(prec, &tau[0][0] * Float::with_val(prec, v1.square_ref()));
            q += Complex::with_val(prec, &tau[0][1] * Float::with_val(prec, &v1 * &v2)) * 2u32;
            q += Complex::with_val(prec, &tau[1][1] * Float::with_val(prec, v2.square_ref()));
            q += (Complex::with_val(prec, &zb[0] * &v1) + Complex::with_val(prec, &zb[1] * &v2)) * 2u32;
            let w = Complex::with_val(prec, &ipi * &q) - &shift;
            sum += w.exp();
        }
    }
    (sum, shift)
}

/// Riemann theta function with characteristic.
pub fn theta(c: ThetaChar, z: &Vec2, tau: &Mat2, prec: u32) -> Complex {
    let (ah, bh) = c.halves();
    let (s, shift) = theta_damped(ah, bh, z, tau, prec);
    s * shift.exp()
}

/// `Ξ_χ(Z) = |θ_χ(Z)| e^{−π Im Z·(Im τ)⁻¹ Im Z}`.
pub fn xi(c: ThetaChar, z: &Vec2, tau: &Mat2) -> f64 {
    let (ah, bh) = c.halves();
    let (s, _) = theta_damped(ah, bh, z, tau, prec_of(&tau[0][0]));
    cabs_f64(&s)
}

// ---------------------------------------------------------------------------
// characteristics of the roots

fn half_integral(v: &Float) -> Option<u8> {
    let t = v.to_f64() * 2.0;
    ((t - t.round()).abs() < MATCH_TOLERANCE).then(|| (t.round() as i64).rem_euclid(2) as u8)
}

/// Odd characteristic vanishing on the image of the curve, by evaluating all six
/// odd thetas at the images of two generic points.
fn detect_infinity_char(rd: &RiemannData, curve: &QuinticCurve) -> Result<ThetaChar> {
    let p = rd.precision_bits;
    let mut found = None;
    for (re, im) in [(0.3, 0.7), (-0.6, 1.1)] {
        let x = cz(p, re, im);
        let y = curve.eval_complex(&x).sqrt();
        let z = rd.aj(&x, &y)?;
        let mut vals: Vec<(f64, ThetaChar)> = ThetaChar::odd().into_iter().map(|c| (rd.xi(c, &z), c)).collect();
        vals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if vals[0].0 > MATCH_TOLERANCE * vals[5].0 || vals[1].0 < 1e3 * vals[0].0.max(MATCH_TOLERANCE * vals[5].0 * 1e-3) {
            return Err(Error::AmbiguousMatch(5));
        }
        if found.is_some_and(|f| f != vals[0].1) {
            return Err(Error::AmbiguousMatch(5));
        }
        found = Some(vals[0].1);
    }
    Ok(found.expect("two probes"))
}

/// Half-period classes of `[(ρ,0)] − [∞]` and the resulting `χ_ρ = η_ρ + χ_∞`.
pub fn assign_characteristics(rd: &RiemannData, curve: &QuinticCurve) -> Result<CharTable> {
    let mut eta = [ThetaChar::new(0, 0, 0, 0); 5];
    for k in 0..5 {
        let (a, b) = rd.half_coords(&rd.root_aj[k]);
        let (Some(b1), Some(b2), Some(a1), Some(a2)) = (half_integral(&b[0]), half_integral(&b[1]), half_integral(&a[0]), half_integral(&a[1]))
        else {
            return Err(Error::AmbiguousMatch(k));
        };
        // Z = A + τB is the lift b' + τa' of the characteristic (a', b') = (B, A).
        eta[k] = ThetaChar::new(b1, b2, a1, a2);
    }
    let infinity = detect_infinity_char(rd, curve)?;
    let roots = eta.map(|e| e.add(infinity));
    let mut seen: Vec<ThetaChar> = vec![infinity];
    for (k, c) in roots.iter().enumerate() {
        if !c.is_odd() || seen.contains(c) {
            return Err(Error::Invariant(format!("root {k} got characteristic {c}, not a fresh odd one")));
        }
        seen.push(*c);
    }
    Ok(CharTable { infinity, roots, eta })
}

// ---------------------------------------------------------------------------
// constants and local heights

/// `c_β = 2 log|θ_{χβ+χ∞+χα}(0)| + ½ log|f′(α)| − log|α − β|`.
pub fn c_rho(rd: &RiemannData, curve: &QuinticCurve, rho: usize, alpha: usize) -> Result<f64> {
    if rho == alpha || rho > 4 || alpha > 4 {
        return Err(Error::DomainError(format!("c_ρ needs distinct roots, got {rho} and {alpha}")));
    }
    let p = rd.precision_bits;
    let t = &rd.char_table;
    let ch = t.roots[rho].add(t.infinity).add(t.roots[alpha]);
    let th = cabs(&rd.theta(ch, &rd.zero()));
    if th.is_zero() || th.to_f64() < 2f64.powi(-(p as i32) / 2) {
        return Err(Error::EvenThetaVanishes);
    }
    let al = &rd.roots[alpha];
    let fp = cabs(&curve.eval_derivative_complex(al));
    let gap = cabs(&Complex::with_val(p, al - &rd.roots[rho]));
    Ok((th.ln() * 2u32 + fp.ln() / 2u32 - gap.ln()).to_f64())
}

/// `λ̂∞(K̃) = −log Ξ_{χρ}(Z)² + log|ℓ_ρ(K̃)| + c_ρ`, with `α = ρ + 1 mod 5`.
pub fn lambda_inf_theta(rd: &RiemannData, curve: &QuinticCurve, ktilde: &[Float; 4], z: &Vec2, rho: usize) -> Result<f64> {
    let p = rd.precision_bits;
    let k: [Complex; 4] = ktilde.each_ref().map(|x| Complex::with_val(p, (x, 0)));
    let ell = cabs(&ell_form(curve, &LinearForm::Root(rd.roots[rho].clone()), &k));
    let norm = ktilde.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
    if ell.to_f64() <= 1e-12 * norm.max(f64::MIN_POSITIVE) {
        return Err(Error::OnDivisor);
    }
    let x = rd.xi(rd.char_table.roots[rho], z);
    if x <= 0.0 {
        return Err(Error::OnDivisor);
    }
    Ok(-2.0 * x.ln() + ell.ln().to_f64() + c_rho(rd, curve, rho, (rho + 1) % 5)?)
}

/// Theta-side `λ̂∞(κ(P))` with the lift `κ(P)`, using the root that keeps `ℓ_ρ`
/// farthest from zero. Returns the value and the root used.
pub fn lambda_inf_point(rd: &RiemannData, curve: &QuinticCurve, pt: &CurvePoint) -> Result<(f64, usize)> {
    let z = rd.aj_point(curve, pt)?;
    let k = crate::kummer::kappa(pt);
    let lift: [Float; 4] = k.coords().each_ref().map(|x| Float::with_val(rd.precision_bits, x));
    let kc = k.to_complex(rd.precision_bits);
    let rho = (0..5)
        .max_by(|&a, &b| {
            let l = |r: usize| cabs_f64(&ell_form(curve, &LinearForm::Root(rd.roots[r].clone()), &kc));
            l(a).partial_cmp(&l(b)).unwrap()
        })
        .expect("five roots");
    Ok((lambda_inf_theta(rd, curve, &lift, &z, rho)?, rho))
}

// ---------------------------------------------------------------------------
// Igusa

/// `I₄ = Σ ((r_i − r_j)(r_j − r_k)(r_k − r_i)(r_l − r_m))²` over the ten ways to
/// split the roots into a triple and a pair.
pub fn igusa_i4_roots(roots: &[Complex; 5]) -> Complex {
    let p = prec_of(&roots[0]);
    let d = |i: usize, j: usize| Complex::with_val(p, &roots[i] - &roots[j]);
    let mut acc = cz(p, 0.0, 0.0);
    for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                let pair: Vec<usize> = (0..5).filter(|q| ![i, j, k].contains(q)).collect();
                let t = d(i, j) * d(j, k) * d(k, i) * d(pair[0], pair[1]);
                acc += t.square();
            }
        }
    }
    acc
}

/// `I₄` as a polynomial in the coefficients.
pub fn igusa_i4_exact(curve: &QuinticCurve) -> Integer {
    let [a2, a3, a4, a5] = curve.coeffs();
    let mut v = Integer::from(a2 * a2) * a4 * 36u32;
    v -= Integer::from(a3 * a3) * a2 * 12u32;
    v += Integer::from(a3 * a5) * 300u32;
    v -= Integer::from(a4 * a4) * 80u32;
    v
}

/// `i₃ = I₄⁵ / Δ_f²` from the roots.
pub fn igusa_i3_roots(curve: &QuinticCurve, precision_bits: u32) -> Result<Complex> {
    let r = curve.roots(precision_bits)?;
    let roots: [Complex; 5] = r.each_ref().map(|z| Complex::with_val(precision_bits, z));
    let i4 = igusa_i4_roots(&roots);
    let delta = Float::with_val(precision_bits, curve.delta());
    Ok(Pow::pow(i4, 5u32) / Float::with_val(precision_bits, delta.square_ref()))
}

/// `(Σ_even θ(0)⁸)⁵ / (Π_even θ(0)²)²`.
pub fn igusa_i3_thetas(rd: &RiemannData) -> Complex {
    let p = rd.precision_bits;
    let z = rd.zero();
    let th: Vec<Complex> = ThetaChar::even().into_iter().map(|c| rd.theta(c, &z)).collect();
    let num = Pow::pow(th.iter().fold(cz(p, 0.0, 0.0), |acc, t| acc + Pow::pow(t.clone(), 8u32)), 5u32);
    let den = th.iter().fold(cz(p, 1.0, 0.0), |acc, t| acc * Complex::with_val(p, t.square_ref())).square();
    num / den
}

pub enum I3Source<'a> {
    Roots(u32),
    Thetas(&'a RiemannData),
}

pub fn igusa_i3(curve: &QuinticCurve, via: I3Source<'_>) -> Result<Complex> {
    match via {
        I3Source::Roots(p) => igusa_i3_roots(curve, p),
        I3Source::Thetas(rd) => Ok(igusa_i3_thetas(rd)),
    }
}

// ---------------------------------------------------------------------------
// monitored statistics

/// `Im τ₁ − (10/π) h(f) + (1/(3π)) log|Δ_f|`; bounded above by `C_fit`.
pub fn im_tau1_residual(rd: &RiemannData, curve: &QuinticCurve) -> f64 {
    let pi = std::f64::consts::PI;
    let ld = Float::with_val(64, curve.delta().clone().abs()).ln().to_f64();
    rd.im_tau1() - 10.0 / pi * curve.log_height() + ld / (3.0 * pi)
}

/// Leading-order size of `θ_χ(Z)` for `Z` near 0: `e^{−π v·Y v}` over the
/// shortest shifted lattice vector `v ∈ a + Z²`.
pub fn near_zero_scale(c: ThetaChar, tau: &Mat2) -> f64 {
    let y = im_matrix(tau).map(|r| r.map(|x| x.to_f64()));
    let mut best = f64::INFINITY;
    for n1 in -1..=1 {
        for n2 in -1..=1 {
            let v = [n1 as f64 + c.a[0] as f64 / 2.0, n2 as f64 + c.a[1] as f64 / 2.0];
            let q = v[0] * v[0] * y[0][0] + 2.0 * v[0] * v[1] * y[0][1] + v[1] * v[1] * y[1][1];
            best = best.min(q);
        }
    }
    (-std::f64::consts::PI * best).exp()
}

/// `|θ_χ(A + τB)| / scale` for small `A`, `B`.
pub fn near_zero_ratio(rd: &RiemannData, c: ThetaChar, a: [f64; 2], b: [f64; 2]) -> f64 {
    let p = rd.precision_bits;
    let z = rd.from_half_coords(&a.map(|x| Float::with_val(p, x)), &b.map(|x| Float::with_val(p, x)));
    cabs_f64(&rd.theta(c, &z)) / near_zero_scale(c, &rd.tau)
}

/// `max_χ Ξ_χ(Z)` over `n` points `Z = A + τB`, `A, B` uniform in `[−½, ½]²`
/// (drawn from a fixed-seed xorshift so the statistic is reproducible).
pub fn xi_sup_sample(rd: &RiemannData, n: usize, seed: u64) -> f64 {
    let mut s = seed | 1;
    let mut next = || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let p = rd.precision_bits.min(64);
    let tau: Mat2 = rd.tau.each_ref().map(|r| r.each_ref().map(|z| Complex::with_val(p, z)));
    let mut best: f64 = 0.0;
    for _ in 0..n {
        let a = [next(), next()].map(|x| Float::with_val(p, x));
        let b = [next(), next()].map(|x| Float::with_val(p, x));
        let z: Vec2 = std::array::from_fn(|i| {
            Complex::with_val(p, (a[i].clone(), 0)) + Complex::with_val(p, &tau[i][0] * &b[0]) + Complex::with_val(p, &tau[i][1] * &b[1])
        });
        for c in ThetaChar::all() {
            best = best.max(xi(c, &z, &tau));
        }
    }
    best
}

/// The frozen `C_Ξ`.
pub fn xi_bound() -> f64 {
    constants::frozen().c_xi
}
