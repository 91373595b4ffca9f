//! Rational points `(s/e², t/e⁵)` and the sieved search.

use crate::exec::Execution;
use crate::family::QuinticCurve;
use rug::Integer;
use serde::{Deserialize, Serialize};

/// A point of `C_f(ℚ)`: the point at infinity or `(s/e², t/e⁵)` in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Infinity,
    Affine { s: Integer, e: Integer, t: Integer },
}

impl CurvePoint {
    pub fn affine(s: impl Into<Integer>, e: impl Into<Integer>, t: impl Into<Integer>) -> Self {
        CurvePoint::Affine { s: s.into(), e: e.into(), t: t.into() }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    /// `(s, e, t)` for affine points.
    pub fn parts(&self) -> Option<(&Integer, &Integer, &Integer)> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { s, e, t } => Some((s, e, t)),
        }
    }

    /// The hyperelliptic involution `y ↦ −y`.
    pub fn neg(&self) -> Self {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { s, e, t } => CurvePoint::Affine { s: s.clone(), e: e.clone(), t: Integer::from(-t) },
        }
    }

    /// `x(P)` as a float (affine points only).
    pub fn x_f64(&self) -> Option<f64> {
        self.parts().map(|(s, e, _)| s.to_f64() / (e.to_f64() * e.to_f64()))
    }

    /// `H(P) = max(|s|, e²)`.
    pub fn naive_height_int(&self) -> Option<Integer> {
        self.parts().map(|(s, e, _)| {
            let e2 = Integer::from(e * e);
            let a = Integer::from(s.abs_ref());
            if a > e2 {
                a
            } else {
                e2
            }
        })
    }

    /// Same x-coordinate (so `P = ±Q` for affine points).
    pub fn same_x(&self, other: &CurvePoint) -> bool {
        match (self.parts(), other.parts()) {
            (Some((s1, e1, _)), Some((s2, e2, _))) => {
                Integer::from(s1 * Integer::from(e2 * e2)) == Integer::from(s2 * Integer::from(e1 * e1))
            }
            (None, None) => true,
            _ => false,
        }
    }

    pub fn to_record(&self) -> PointRecord {
        match self {
            CurvePoint::Infinity => PointRecord::Infinity { kind: "infinity".into() },
            CurvePoint::Affine { s, e, t } => PointRecord::Affine { s: s.to_string(), e: e.to_string(), t: t.to_string() },
        }
    }

    pub fn from_record(r: &PointRecord) -> Option<Self> {
        match r {
            PointRecord::Infinity { kind } if kind == "infinity" => Some(CurvePoint::Infinity),
            PointRecord::Infinity { .. } => None,
            PointRecord::Affine { s, e, t } => Some(CurvePoint::Affine { s: s.parse().ok()?, e: e.parse().ok()?, t: t.parse().ok()? }),
        }
    }
}

impl std::fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "∞"),
            CurvePoint::Affine { s, e, t } if *e == 1 => write!(f, "({s}, {t})"),
            CurvePoint::Affine { s, e, t } => write!(f, "({s}/{e}^2, {t}/{e}^5)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRecord {
    Affine { s: String, e: String, t: String },
    Infinity { kind: String },
}

/// `N(s, e) = s⁵ + a₂s³e⁴ + a₃s²e⁶ + a₄se⁸ + a₅e¹⁰`, so `t² = N` on the curve.
pub fn weighted_norm(curve: &QuinticCurve, s: &Integer, e: &Integer) -> Integer {
    let [a2, a3, a4, a5] = curve.coeffs();
    let e2 = Integer::from(e * e);
    let e4 = Integer::from(&e2 * &e2);
    let s2 = Integer::from(s * s);
    let s3 = Integer::from(&s2 * s);
    let mut n = Integer::from(&s3 * &s2);
    n += Integer::from(a2 * &s3) * &e4;
    let e6 = Integer::from(&e4 * &e2);
    n += Integer::from(a3 * &s2) * &e6;
    let e8 = Integer::from(&e4 * &e4);
    n += Integer::from(a4 * s) * &e8;
    n += Integer::from(a5 * &e8) * &e2;
    n
}

/// The exact integral identity plus the lowest-terms conditions.
pub fn is_on_curve(curve: &QuinticCurve, p: &CurvePoint) -> bool {
    match p {
        CurvePoint::Infinity => true,
        CurvePoint::Affine { s, e, t } => {
            *e > 0
                && Integer::from(s.gcd_ref(e)) == 1
                && Integer::from(t.gcd_ref(e)) == 1
                && Integer::from(t * t) == weighted_norm(curve, s, e)
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Prune `s` by the square classes of `N(s,e)` modulo `e⁶` (off by default).
    pub e6_sieve: bool,
    pub exec: Execution,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { e6_sieve: false, exec: Execution::default() }
    }
}

const SIEVE_PRIMES: usize = 8;
const E6_CAP: u64 = 1 << 22;

struct PrimeFilter {
    p: u64,
    residue: Vec<bool>,
    c: [u64; 4],
}

fn small_odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

fn filters_for(curve: &QuinticCurve, e: u64) -> Vec<PrimeFilter> {
    let delta = curve.delta();
    small_odd_primes()
        .filter(|&p| e % p != 0 && !delta.is_divisible_u(p as u32))
        .take(SIEVE_PRIMES)
        .map(|p| {
            let mut residue = vec![false; p as usize];
            for t in 0..p {
                residue[(t * t % p) as usize] = true;
            }
            let ep = e % p;
            let pw = |k: u32| (0..k).fold(1u64, |acc, _| acc * ep % p);
            let m = |a: &Integer, k: u32| -> u64 {
                let r = a.mod_u(p as u32) as u64;
                r * pw(k) % p
            };
            let [a2, a3, a4, a5] = curve.coeffs();
            PrimeFilter { p, residue, c: [m(a2, 4), m(a3, 6), m(a4, 8), m(a5, 10)] }
        })
        .collect()
}

impl PrimeFilter {
    fn may_be_square(&self, s: i64) -> bool {
        let p = self.p;
        let x = s.rem_euclid(p as i64) as u64;
        let mut v = x * x % p;
        v = (v + self.c[0]) % p * x % p;
        v = (v + self.c[1]) % p * x % p;
        v = (v + self.c[2]) % p * x % p;
        v = (v + self.c[3]) % p;
        self.residue[v as usize]
    }
}

struct E6Filter {
    m: u64,
    squares: Vec<bool>,
    a2e4: u128,
}

fn e6_filter(curve: &QuinticCurve, e: u64) -> Option<E6Filter> {
    let m = e.checked_pow(6)?;
    if e < 2 || m > E6_CAP {
        return None;
    }
    let mut squares = vec![false; m as usize];
    for t in 0..m {
        squares[((t as u128 * t as u128) % m as u128) as usize] = true;
    }
    let a2 = curve.coeffs()[0].mod_u(m as u32) as u128;
    let e4 = (e as u128).pow(4) % m as u128;
    Some(E6Filter { m, squares, a2e4: a2 * e4 % m as u128 })
}

impl E6Filter {
    fn may_be_square(&self, s: i64) -> bool {
        // N(s,e) ≡ s⁵ + a₂s³e⁴ (mod e⁶).
        let m = self.m as u128;
        let x = s.rem_euclid(self.m as i64) as u128;
        let x3 = x * x % m * x % m;
        let v = (x3 * (x * x % m) + x3 * self.a2e4) % m;
        self.squares[v as usize]
    }
}

/// Points with one denominator `e`, ascending in `s`, `+t` before `−t`.
pub fn search_stratum(curve: &QuinticCurve, e: u64, s_max: i64, e6_sieve: bool) -> Vec<CurvePoint> {
    let filters = filters_for(curve, e);
    let e6 = if e6_sieve { e6_filter(curve, e) } else { None };
    let ez = Integer::from(e);
    let mut out = Vec::new();
    for s in -s_max..=s_max {
        if num_gcd(s.unsigned_abs(), e) != 1 {
            continue;
        }
        if !filters.iter().all(|f| f.may_be_square(s)) {
            continue;
        }
        if let Some(f) = &e6 {
            if !f.may_be_square(s) {
                continue;
            }
        }
        let sz = Integer::from(s);
        let n = weighted_norm(curve, &sz, &ez);
        if n < 0 {
            continue;
        }
        let (t, rem) = n.sqrt_rem(Integer::new());
        if rem != 0 {
            continue;
        }
        if Integer::from(t.gcd_ref(&ez)) != 1 {
            continue;
        }
        if t == 0 {
            out.push(CurvePoint::affine(sz, ez.clone(), t));
        } else {
            out.push(CurvePoint::affine(sz.clone(), ez.clone(), t.clone()));
            out.push(CurvePoint::affine(sz, ez.clone(), -t));
        }
    }
    out
}

fn num_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// All points with `e ≤ e_max`, `|s| ≤ s_max`, plus `∞`, each once; both signs of `t`.
/// Parallel over denominators; the merge order is `(e, s, sign)`.
pub fn search_points(curve: &QuinticCurve, e_max: u64, s_max: i64, opts: SearchOptions) -> Vec<CurvePoint> {
    let strata = opts.exec.map_range(1..e_max as i64 + 1, |e| search_stratum(curve, e as u64, s_max, opts.e6_sieve));
    std::iter::once(CurvePoint::Infinity).chain(strata.into_iter().flatten()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Unsieved brute force over the full box.
    pub(crate) fn oracle(curve: &QuinticCurve, e_max: u64, s_max: i64) -> BTreeSet<CurvePoint> {
        let mut out = BTreeSet::from([CurvePoint::Infinity]);
        for e in 1..=e_max {
            for s in -s_max..=s_max {
                let (sz, ez) = (Integer::from(s), Integer::from(e));
                if Integer::from(sz.gcd_ref(&ez)) != 1 {
                    continue;
                }
                let n = weighted_norm(curve, &sz, &ez);
                if n >= 0 && n.is_perfect_square() {
                    let t = n.sqrt();
                    for t in [t.clone(), -t] {
                        let p = CurvePoint::affine(sz.clone(), ez.clone(), t);
                        if is_on_curve(curve, &p) {
                            out.insert(p);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn x5_plus_1_box() {
        let c = QuinticCurve::from_i64([0, 0, 0, 1]).unwrap();
        let pts = search_points(&c, 10, 100, SearchOptions::default());
        let want = BTreeSet::from([
            CurvePoint::Infinity,
            CurvePoint::affine(-1, 1, 0),
            CurvePoint::affine(0, 1, 1),
            CurvePoint::affine(0, 1, -1),
        ]);
        assert_eq!(pts.iter().cloned().collect::<BTreeSet<_>>(), want);
        assert_eq!(oracle(&c, 10, 100), want);
        assert_eq!(pts.len(), 4);
    }

    #[test]
    fn x5_minus_x_contains_two_torsion() {
        let c = QuinticCurve::from_i64([0, 0, -1, 0]).unwrap();
        let pts: BTreeSet<_> = search_points(&c, 5, 50, SearchOptions::default()).into_iter().collect();
        for s in [-1, 0, 1] {
            assert!(pts.contains(&CurvePoint::affine(s, 1, 0)));
        }
        assert_eq!(pts, oracle(&c, 5, 50));
    }

    #[test]
    fn membership_examples() {
        let c = QuinticCurve::from_i64([0, 0, 0, 1]).unwrap();
        assert!(is_on_curve(&c, &CurvePoint::affine(-1, 1, 0)));
        assert!(is_on_curve(&c, &CurvePoint::affine(0, 1, 1)));
        assert!(!is_on_curve(&c, &CurvePoint::affine(1, 1, 1)));
        let c = QuinticCurve::from_i64([0, 0, -1, 0]).unwrap();
        // N(1,2) = 1 - 2^8 = -255 is not a square.
        assert_eq!(weighted_norm(&c, &Integer::from(1), &Integer::from(2)), -255);
        for t in -20..=20 {
            assert!(!is_on_curve(&c, &CurvePoint::affine(1, 2, t)));
        }
    }

    #[test]
    fn e6_sieve_and_sequential_agree() {
        for a in [[1, 0, 1, 1], [2, 0, -3, 1], [-1, 0, 0, 1], [0, 1, -1, 1]] {
            let c = QuinticCurve::from_i64(a).unwrap();
            let base = search_points(&c, 8, 300, SearchOptions { e6_sieve: false, exec: Execution::Sequential });
            let e6 = search_points(&c, 8, 300, SearchOptions { e6_sieve: true, exec: Execution::Parallel });
            assert_eq!(base, e6);
        }
    }

    #[test]
    fn record_roundtrip() {
        for p in [CurvePoint::Infinity, CurvePoint::affine(-7, 3, 11)] {
            let j = serde_json::to_string(&p.to_record()).unwrap();
            let r: PointRecord = serde_json::from_str(&j).unwrap();
            assert_eq!(CurvePoint::from_record(&r).unwrap(), p);
        }
        assert_eq!(serde_json::to_string(&CurvePoint::Infinity.to_record()).unwrap(), r#"{"kind":"infinity"}"#);
    }
}
