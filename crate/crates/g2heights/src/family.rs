//! The quintic family, its discriminants, height ordering and complex roots.

use crate::error::{Error, Result};
use crate::exec::Execution;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

/// Complex roots at a given precision, sorted by `(re, im)`.
pub type Roots = Arc<[Complex; 5]>;

/// `y^2 = x^5 + a2 x^3 + a3 x^2 + a4 x + a5` with nonzero discriminant.
#[derive(Debug)]
pub struct QuinticCurve {
    a: [Integer; 4],
    disc: Integer,
    delta: Integer,
    height: f64,
    roots: RwLock<BTreeMap<u32, Roots>>,
}

impl Clone for QuinticCurve {
    fn clone(&self) -> Self {
        QuinticCurve {
            a: self.a.clone(),
            disc: self.disc.clone(),
            delta: self.delta.clone(),
            height: self.height,
            roots: RwLock::new(self.roots.read().unwrap().clone()),
        }
    }
}

impl PartialEq for QuinticCurve {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
    }
}

impl Eq for QuinticCurve {}

impl std::hash::Hash for QuinticCurve {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.a.hash(state)
    }
}

impl QuinticCurve {
    /// Admits the curve only if its discriminant is nonzero.
    pub fn new(a: [Integer; 4]) -> Result<Self> {
        let disc = discriminant(&a);
        if disc == 0 {
            return Err(Error::Singular);
        }
        Ok(Self::with_disc(a, disc))
    }

    pub fn from_i64(a: [i64; 4]) -> Result<Self> {
        Self::new(a.map(Integer::from))
    }

    fn with_disc(a: [Integer; 4], disc: Integer) -> Self {
        let delta = Integer::from(&disc << 8);
        let height = naive_height(&a);
        QuinticCurve { a, disc, delta, height, roots: RwLock::new(BTreeMap::new()) }
    }

    pub fn coeffs(&self) -> &[Integer; 4] {
        &self.a
    }

    /// Coefficients as machine integers, if they fit.
    pub fn coeffs_i64(&self) -> Option<[i64; 4]> {
        let v: Vec<i64> = self.a.iter().filter_map(|x| x.to_i64()).collect();
        v.try_into().ok()
    }

    /// `Res(f, f')`.
    pub fn disc(&self) -> &Integer {
        &self.disc
    }

    /// `Δ_f = 2^8 Res(f, f')`.
    pub fn delta(&self) -> &Integer {
        &self.delta
    }

    /// `H(f) = max |a_i|^{1/i}`.
    pub fn height_h(&self) -> f64 {
        self.height
    }

    /// `h(f) = max(0, log H(f))`.
    pub fn log_height(&self) -> f64 {
        if self.height > 0.0 {
            self.height.ln().max(0.0)
        } else {
            0.0
        }
    }

    pub fn eval(&self, x: &Integer) -> Integer {
        let [a2, a3, a4, a5] = &self.a;
        let x2 = Integer::from(x * x);
        let x3 = Integer::from(&x2 * x);
        Integer::from(&x3 * &x2) + Integer::from(a2 * &x3) + Integer::from(a3 * &x2) + Integer::from(a4 * x) + a5
    }

    pub fn eval_derivative(&self, x: &Integer) -> Integer {
        let [a2, a3, a4, _] = &self.a;
        let x2 = Integer::from(x * x);
        Integer::from(&x2 * &x2) * 5u32 + Integer::from(a2 * &x2) * 3u32 + Integer::from(a3 * x) * 2u32 + a4
    }

    pub fn eval_complex(&self, z: &Complex) -> Complex {
        let p = z.prec().0;
        let mut acc = Complex::with_val(p, 1);
        let coeffs = [Integer::from(0), self.a[0].clone(), self.a[1].clone(), self.a[2].clone(), self.a[3].clone()];
        for c in coeffs.iter() {
            acc *= z;
            acc += c;
        }
        acc
    }

    pub fn eval_derivative_complex(&self, z: &Complex) -> Complex {
        let p = z.prec().0;
        let coeffs = [
            Integer::from(5),
            Integer::from(0),
            Integer::from(&self.a[0] * 3u32),
            Integer::from(&self.a[1] * 2u32),
            self.a[2].clone(),
        ];
        let mut acc = Complex::with_val(p, 0);
        for c in coeffs.iter() {
            acc *= z;
            acc += c;
        }
        acc
    }

    /// Cached roots at `precision_bits` or better (the cache only grows upward).
    pub fn roots(&self, precision_bits: u32) -> Result<Roots> {
        {
            let cache = self.roots.read().unwrap();
            if let Some((_, r)) = cache.range(precision_bits..).next() {
                return Ok(r.clone());
            }
        }
        let r: Roots = Arc::new(complex_roots(self, precision_bits)?);
        let mut cache = self.roots.write().unwrap();
        Ok(cache.entry(precision_bits).or_insert(r).clone())
    }

    pub fn to_record(&self) -> CurveRecord {
        CurveRecord {
            a: self.a.iter().map(|x| x.to_string()).collect(),
            disc: self.disc.to_string(),
            delta: self.delta.to_string(),
            h: self.height,
        }
    }

    pub fn from_record(r: &CurveRecord) -> Result<Self> {
        let parse = |s: &str| s.parse::<Integer>().map_err(|e| Error::DomainError(e.to_string()));
        if r.a.len() != 4 {
            return Err(Error::DomainError("expected four coefficients".into()));
        }
        let a = [parse(&r.a[0])?, parse(&r.a[1])?, parse(&r.a[2])?, parse(&r.a[3])?];
        let c = Self::new(a)?;
        if c.disc.to_string() != r.disc {
            return Err(Error::Invariant("stored discriminant disagrees".into()));
        }
        Ok(c)
    }

    /// Compact label such as `[0,0,-1,0]`.
    pub fn label(&self) -> String {
        format!("[{},{},{},{}]", self.a[0], self.a[1], self.a[2], self.a[3])
    }
}

impl std::fmt::Display for QuinticCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "y^2 = x^5 + ({})x^3 + ({})x^2 + ({})x + ({})", self.a[0], self.a[1], self.a[2], self.a[3])
    }
}

/// JSON form of a curve; big integers are decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub a: Vec<String>,
    pub disc: String,
    pub delta: String,
    #[serde(rename = "H")]
    pub h: f64,
}

fn naive_height(a: &[Integer; 4]) -> f64 {
    a.iter()
        .enumerate()
        .map(|(k, c)| {
            let i = (k + 2) as f64;
            c.to_f64().abs().powf(1.0 / i)
        })
        .fold(0.0, f64::max)
}

/// Sylvester matrix of `f` and `f'` (9×9).
pub fn sylvester(a: &[Integer; 4]) -> Vec<Vec<Integer>> {
    let f = [Integer::from(1), Integer::from(0), a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone()];
    let fp = [
        Integer::from(5),
        Integer::from(0),
        Integer::from(&a[0] * 3u32),
        Integer::from(&a[1] * 2u32),
        a[2].clone(),
    ];
    let mut m = vec![vec![Integer::new(); 9]; 9];
    for r in 0..4 {
        for (j, c) in f.iter().enumerate() {
            m[r][r + j] = c.clone();
        }
    }
    for r in 0..5 {
        for (j, c) in fp.iter().enumerate() {
            m[4 + r][r + j] = c.clone();
        }
    }
    m
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn bareiss_det(mut m: Vec<Vec<Integer>>) -> Integer {
    let n = m.len();
    let mut sign = 1i32;
    let mut prev = Integer::from(1);
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Integer::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = Integer::from(&m[i][j] * &m[k][k]) - Integer::from(&m[i][k] * &m[k][j]);
                m[i][j] = v.div_exact(&prev);
            }
            m[i][k] = Integer::new();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// `Res(f, f')`, computed exactly from the Sylvester matrix.
pub fn discriminant(a: &[Integer; 4]) -> Integer {
    bareiss_det(sylvester(a))
}

/// Same value as [`discriminant`] for machine-size coefficients, via the expanded
/// resultant polynomial in checked `i128` arithmetic. `None` on overflow.
pub fn discriminant_i128(a: [i64; 4]) -> Option<i128> {
    let [a2, a3, a4, a5] = a.map(|x| x as i128);
    let p = |c: i128, e: [u32; 4]| -> Option<i128> {
        let mut v = c;
        for (b, k) in [a2, a3, a4, a5].iter().zip(e) {
            v = v.checked_mul(b.checked_pow(k)?)?;
        }
        Some(v)
    };
    let terms: [(i128, [u32; 4]); 19] = [
        (108, [5, 0, 0, 2]),
        (-72, [4, 1, 1, 1]),
        (16, [4, 0, 3, 0]),
        (16, [3, 3, 0, 1]),
        (-4, [3, 2, 2, 0]),
        (-900, [3, 0, 1, 2]),
        (825, [2, 2, 0, 2]),
        (560, [2, 1, 2, 1]),
        (-128, [2, 0, 4, 0]),
        (-630, [1, 3, 1, 1]),
        (144, [1, 2, 3, 0]),
        (-3750, [1, 1, 0, 3]),
        (2000, [1, 0, 2, 2]),
        (108, [0, 5, 0, 1]),
        (-27, [0, 4, 2, 0]),
        (2250, [0, 2, 1, 2]),
        (-1600, [0, 1, 3, 1]),
        (256, [0, 0, 5, 0]),
        (3125, [0, 0, 0, 4]),
    ];
    let mut s: i128 = 0;
    for (c, e) in terms {
        s = s.checked_add(p(c, e)?)?;
    }
    Some(s)
}

/// Exact coefficient bound `floor(T^i)`.
pub fn coefficient_bound(t: f64, i: u32) -> i64 {
    let tf = Float::with_val(64, t);
    let pow = Float::with_val(64 * 6, Pow::pow(&tf, i));
    pow.floor().to_integer().and_then(|z| z.to_i64()).unwrap_or(i64::MAX)
}

/// Bounds `(B2, B3, B4, B5)` of the height box `|a_i| ≤ T^i`.
pub fn family_box(t: f64) -> [i64; 4] {
    [2, 3, 4, 5].map(|i| coefficient_bound(t, i))
}

/// Curves with `|a_i| ≤ T^i` and `Δ ≠ 0`, each once, in lexicographic coefficient order.
pub fn enumerate_family(t: f64) -> impl Iterator<Item = QuinticCurve> {
    enumerate_family_filtered(t, |_| true)
}

/// As [`enumerate_family`], keeping only tuples accepted by `pred`.
pub fn enumerate_family_filtered<P>(t: f64, pred: P) -> impl Iterator<Item = QuinticCurve>
where
    P: Fn(&[i64; 4]) -> bool,
{
    let b = if t >= 1.0 { Some(family_box(t)) } else { None };
    b.into_iter().flat_map(move |b| box_tuples(b).into_iter().flatten()).filter_map(move |a| {
        if !pred(&a) {
            return None;
        }
        admit(a)
    })
}

fn box_tuples(b: [i64; 4]) -> Option<impl Iterator<Item = [i64; 4]>> {
    let [b2, b3, b4, b5] = b;
    Some((-b2..=b2).flat_map(move |a2| {
        (-b3..=b3).flat_map(move |a3| (-b4..=b4).flat_map(move |a4| (-b5..=b5).map(move |a5| [a2, a3, a4, a5])))
    }))
}

fn admit(a: [i64; 4]) -> Option<QuinticCurve> {
    let disc = match discriminant_i128(a) {
        Some(d) => Integer::from(d),
        None => discriminant(&a.map(Integer::from)),
    };
    if disc == 0 {
        None
    } else {
        Some(QuinticCurve::with_disc(a.map(Integer::from), disc))
    }
}

/// Parallel-capable collection of the family; order matches [`enumerate_family`].
pub fn collect_family<P>(t: f64, exec: Execution, pred: P) -> Vec<QuinticCurve>
where
    P: Fn(&[i64; 4]) -> bool + Sync + Send,
{
    if t < 1.0 {
        return Vec::new();
    }
    let [b2, b3, b4, b5] = family_box(t);
    let slabs: Vec<(i64, i64)> = (-b2..=b2).flat_map(|a2| (-b3..=b3).map(move |a3| (a2, a3))).collect();
    exec.flat_map(&slabs, |&(a2, a3)| {
        let mut out = Vec::new();
        for a4 in -b4..=b4 {
            for a5 in -b5..=b5 {
                let a = [a2, a3, a4, a5];
                if pred(&a) {
                    if let Some(c) = admit(a) {
                        out.push(c);
                    }
                }
            }
        }
        out
    })
}

/// `(box size, nonsingular count)` for the height-`T` box, without materialising curves.
pub fn count_family(t: f64, exec: Execution) -> (u64, u64) {
    if t < 1.0 {
        return (0, 0);
    }
    let [b2, b3, b4, b5] = family_box(t);
    let total = [b2, b3, b4, b5].iter().map(|b| (2 * b + 1) as u64).product();
    let slabs: Vec<(i64, i64)> = (-b2..=b2).flat_map(|a2| (-b3..=b3).map(move |a3| (a2, a3))).collect();
    let counts = exec.map(&slabs, |&(a2, a3)| {
        let mut n = 0u64;
        for a4 in -b4..=b4 {
            for a5 in -b5..=b5 {
                let a = [a2, a3, a4, a5];
                let nz = match discriminant_i128(a) {
                    Some(d) => d != 0,
                    None => discriminant(&a.map(Integer::from)) != 0,
                };
                n += nz as u64;
            }
        }
        n
    });
    (total, counts.into_iter().sum())
}

fn cabs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// Aberth–Ehrlich simultaneous iteration at a fixed working precision.
fn aberth(curve: &QuinticCurve, work: u32, max_iter: usize) -> Option<[Complex; 5]> {
    let bound = 1.0 + 2.0 * curve.height_h().max(1.0);
    let mut z: Vec<Complex> = (0..5)
        .map(|k| {
            let ang: Float = Float::with_val(work, Constant::Pi) * (2.0 * k as f64 + 0.4) / 5.0;
            let (s, c) = ang.sin_cos(Float::new(work));
            Complex::with_val(work, (c * bound, s * bound))
        })
        .collect();
    let tol = Float::with_val(work, Float::i_exp(1, -(work as i32) + 12));
    for _ in 0..max_iter {
        let mut worst = Float::with_val(work, 0);
        for k in 0..5 {
            let fz = curve.eval_complex(&z[k]);
            let dfz = curve.eval_derivative_complex(&z[k]);
            if dfz.clone().abs().real().is_zero() {
                z[k] += Complex::with_val(work, (Float::i_exp(1, -20), 0));
                continue;
            }
            let w = Complex::with_val(work, &fz / &dfz);
            let mut s = Complex::with_val(work, 0);
            for j in 0..5 {
                if j != k {
                    let d = Complex::with_val(work, &z[k] - &z[j]);
                    s += Complex::with_val(work, d.recip_ref());
                }
            }
            let denom = Complex::with_val(work, 1) - Complex::with_val(work, &w * &s);
            let corr = Complex::with_val(work, &w / &denom);
            let scale = cabs(&z[k]).max(&Float::with_val(work, 1));
            let rel = cabs(&corr) / scale;
            if rel > worst {
                worst = rel;
            }
            z[k] -= corr;
        }
        if worst <= tol {
            let mut out: Vec<Complex> = z;
            out.sort_by(|a, b| {
                a.real()
                    .partial_cmp(b.real())
                    .unwrap()
                    .then(a.imag().partial_cmp(b.imag()).unwrap())
            });
            return out.try_into().ok();
        }
    }
    None
}

/// Five pairwise-distinct roots, sorted by `(re, im)`, each with
/// `|f(ρ)| ≤ 2^{-prec/2} max(1,|ρ|)^5`.
pub fn complex_roots(curve: &QuinticCurve, precision_bits: u32) -> Result<[Complex; 5]> {
    if precision_bits < 53 {
        return Err(Error::DomainError("precision below 53 bits".into()));
    }
    let mut work = precision_bits + 32;
    for _ in 0..4 {
        if let Some(r) = aberth(curve, work, 400 + work as usize) {
            if certify(curve, &r, precision_bits) {
                let r = r.map(|z| Complex::with_val(precision_bits, z));
                return Ok(r);
            }
        }
        work *= 2;
    }
    Err(Error::NonConvergence(precision_bits))
}

fn certify(curve: &QuinticCurve, r: &[Complex; 5], precision_bits: u32) -> bool {
    let p = r[0].prec().0;
    let eps = Float::with_val(p, Float::i_exp(1, -(precision_bits as i32) / 2));
    for z in r.iter() {
        let res = cabs(&curve.eval_complex(z));
        let m = cabs(z).max(&Float::with_val(p, 1));
        let allowed = Float::with_val(p, &eps * Float::with_val(p, Pow::pow(&m, 5u32)));
        if res > allowed {
            return false;
        }
    }
    for i in 0..5 {
        for j in i + 1..5 {
            if cabs(&Complex::with_val(p, &r[i] - &r[j])).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Distinguished root pair `(α*, β*)` maximising `min(|α|, |β|, |α−β|)`.
#[derive(Debug, Clone)]
pub struct RootPair {
    pub alpha_index: usize,
    pub beta_index: usize,
    pub alpha: Complex,
    pub beta: Complex,
    pub min_quantity: f64,
}

pub fn alpha_beta_star(curve: &QuinticCurve, precision_bits: u32) -> Result<RootPair> {
    let r = curve.roots(precision_bits)?;
    let mut best: Option<(f64, usize, usize)> = None;
    // Roots are sorted by (re, im), so scanning i < j lexicographically and keeping
    // the first strict maximum gives the deterministic tie-break.
    for i in 0..5 {
        for j in i + 1..5 {
            let d = Complex::with_val(precision_bits, &r[i] - &r[j]);
            let q = cabs(&r[i]).min(&cabs(&r[j])).min(&cabs(&d)).to_f64();
            match best {
                Some((b, _, _)) if q <= b * (1.0 + 1e-12) => {}
                _ => best = Some((q, i, j)),
            }
        }
    }
    let (q, i, j) = best.expect("five roots give ten pairs");
    Ok(RootPair { alpha_index: i, beta_index: j, alpha: r[i].clone(), beta: r[j].clone(), min_quantity: q })
}
