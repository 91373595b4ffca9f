//! Exact pseudo-arithmetic on the Kummer surface `K_f ⊂ ℙ³`.

mod delta_table;

use crate::error::{Error, Result};
use crate::family::QuinticCurve;
use crate::interval::Interval;
use crate::points::CurvePoint;
use delta_table::{Monomial, DELTA};
use rug::{Complex, Float, Integer};

/// Primitive integer point of `ℙ³`, first nonzero coordinate positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KummerCoords {
    k: [Integer; 4],
}

impl KummerCoords {
    /// Normalises to the primitive representative; all-zero input is rejected.
    pub fn new(k: [Integer; 4]) -> Result<Self> {
        primitive(k).map(|(c, _)| c)
    }

    pub fn from_i64(k: [i64; 4]) -> Result<Self> {
        Self::new(k.map(Integer::from))
    }

    /// Image of the identity, `(0,0,0,1)`.
    pub fn identity() -> Self {
        KummerCoords { k: [Integer::new(), Integer::new(), Integer::new(), Integer::from(1)] }
    }

    pub fn coords(&self) -> &[Integer; 4] {
        &self.k
    }

    pub fn to_strings(&self) -> [String; 4] {
        self.k.each_ref().map(|x| x.to_string())
    }

    /// Largest coordinate size in bits.
    pub fn bits(&self) -> u32 {
        self.k.iter().map(|x| x.significant_bits()).max().unwrap_or(0)
    }

    pub fn to_complex(&self, prec: u32) -> [Complex; 4] {
        self.k.each_ref().map(|x| Complex::with_val(prec, x))
    }
}

impl std::fmt::Display for KummerCoords {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {}, {})", self.k[0], self.k[1], self.k[2], self.k[3])
    }
}

/// Primitive representative together with the signed factor removed.
pub fn primitive(k: [Integer; 4]) -> Result<(KummerCoords, Integer)> {
    let mut g = Integer::new();
    for x in &k {
        g.gcd_mut(x);
    }
    if g == 0 {
        return Err(Error::DegenerateImage);
    }
    let lead_negative = k.iter().find(|x| **x != 0).map(|x| *x < 0).unwrap_or(false);
    if lead_negative {
        g = -g;
    }
    let k = k.map(|x| x.div_exact(&g));
    Ok((KummerCoords { k }, g))
}

/// `κ(P)`: affine `(s/e², t/e⁵) ↦ (0, e⁴, se², s²)`, `∞ ↦ (0,0,0,1)`.
pub fn kappa(p: &CurvePoint) -> KummerCoords {
    match p {
        CurvePoint::Infinity => KummerCoords::identity(),
        CurvePoint::Affine { s, e, .. } => {
            let e2 = Integer::from(e * e);
            let k = [Integer::new(), Integer::from(&e2 * &e2), Integer::from(s * &e2), Integer::from(s * s)];
            // Already primitive when gcd(s, e) = 1; normalise anyway for non-reduced input.
            KummerCoords::new(k).expect("e > 0")
        }
    }
}

/// Monomial counts and coefficient sums `(count, Σc, Σ|c|)` of the four transcribed forms.
pub fn table_checksums() -> [(usize, i64, i64); 4] {
    DELTA.map(|t| (t.len(), t.iter().map(|m| m.0).sum(), t.iter().map(|m| m.0.abs()).sum()))
}

/// Direct evaluation of the transcribed forms `δ_i(a; k)` over the integers.
pub fn delta_raw(a: &[Integer; 4], k: &[Integer; 4]) -> [Integer; 4] {
    delta_raw_tables(&DELTA, a, k)
}

pub(crate) fn delta_raw_tables(tables: &[&[Monomial]; 4], a: &[Integer; 4], k: &[Integer; 4]) -> [Integer; 4] {
    let apow: Vec<Vec<Integer>> = a.iter().map(|x| powers(x, 4)).collect();
    let kpow: Vec<Vec<Integer>> = k.iter().map(|x| powers(x, 4)).collect();
    tables.map(|t| {
        let mut s = Integer::new();
        for (c, ae, ke) in t.iter() {
            let mut term = Integer::from(*c);
            for j in 0..4 {
                term *= &apow[j][ae[j] as usize];
                term *= &kpow[j][ke[j] as usize];
            }
            s += term;
        }
        s
    })
}

fn powers(x: &Integer, n: usize) -> Vec<Integer> {
    let mut v = vec![Integer::from(1)];
    for i in 0..n {
        v.push(Integer::from(&v[i] * x));
    }
    v
}

/// The 35 exponent vectors of quartic monomials in `k1..k4`.
fn quartic_exponents() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(35);
    for i in 0..=4u8 {
        for j in 0..=4 - i {
            for l in 0..=4 - i - j {
                out.push([i, j, l, 4 - i - j - l]);
            }
        }
    }
    out
}

/// Scalars the duplication forms can be evaluated over.
pub trait Scalar: Clone {
    fn mul_s(&self, o: &Self) -> Self;
    fn add_s(&self, o: &Self) -> Self;
    fn scale_s(&self, c: &Integer) -> Self;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
}

impl Scalar for Integer {
    fn mul_s(&self, o: &Self) -> Self {
        Integer::from(self * o)
    }
    fn add_s(&self, o: &Self) -> Self {
        Integer::from(self + o)
    }
    fn scale_s(&self, c: &Integer) -> Self {
        Integer::from(self * c)
    }
    fn zero_like(&self) -> Self {
        Integer::new()
    }
    fn one_like(&self) -> Self {
        Integer::from(1)
    }
}

impl Scalar for Float {
    fn mul_s(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self * o)
    }
    fn add_s(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self + o)
    }
    fn scale_s(&self, c: &Integer) -> Self {
        Float::with_val(self.prec(), self * c)
    }
    fn zero_like(&self) -> Self {
        Float::new(self.prec())
    }
    fn one_like(&self) -> Self {
        Float::with_val(self.prec(), 1)
    }
}

impl Scalar for Interval {
    fn mul_s(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn add_s(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn scale_s(&self, c: &Integer) -> Self {
        self.mul_integer(c)
    }
    fn zero_like(&self) -> Self {
        Interval::zero(self.prec())
    }
    fn one_like(&self) -> Self {
        Interval::from_i64(self.prec(), 1)
    }
}

/// The duplication forms specialised to one curve: `δ_i(k) = Σ_β C_{i,β} k^β`
/// over the 35 quartic monomials, with `C` exact integers.
#[derive(Debug, Clone)]
pub struct DuplicationForms {
    exps: Vec<[u8; 4]>,
    coeffs: [Vec<Integer>; 4],
}

impl DuplicationForms {
    pub fn new(curve: &QuinticCurve) -> Self {
        let exps = quartic_exponents();
        let index = |e: &[u8; 4]| exps.iter().position(|x| x == e).expect("degree-4 monomial");
        let a = curve.coeffs();
        let apow: Vec<Vec<Integer>> = a.iter().map(|x| powers(x, 4)).collect();
        let mut coeffs: [Vec<Integer>; 4] = std::array::from_fn(|_| vec![Integer::new(); exps.len()]);
        for (i, table) in DELTA.iter().enumerate() {
            for (c, ae, ke) in table.iter() {
                let mut v = Integer::from(*c);
                for j in 0..4 {
                    v *= &apow[j][ae[j] as usize];
                }
                coeffs[i][index(ke)] += v;
            }
        }
        DuplicationForms { exps, coeffs }
    }

    pub fn eval<S: Scalar>(&self, k: &[S; 4]) -> [S; 4] {
        let one = k[0].one_like();
        let pw: Vec<Vec<S>> = k
            .iter()
            .map(|x| {
                let mut v = vec![one.clone()];
                for i in 0..4 {
                    let n = v[i].mul_s(x);
                    v.push(n);
                }
                v
            })
            .collect();
        let monos: Vec<S> = self
            .exps
            .iter()
            .map(|e| pw[0][e[0] as usize].mul_s(&pw[1][e[1] as usize]).mul_s(&pw[2][e[2] as usize]).mul_s(&pw[3][e[3] as usize]))
            .collect();
        std::array::from_fn(|i| {
            let mut acc = k[0].zero_like();
            for (c, m) in self.coeffs[i].iter().zip(&monos) {
                if *c != 0 {
                    acc = acc.add_s(&m.scale_s(c));
                }
            }
            acc
        })
    }
}

/// Raw `(δ₁, …, δ₄)(K)` before re-normalisation.
pub fn double_raw(curve: &QuinticCurve, k: &KummerCoords) -> [Integer; 4] {
    DuplicationForms::new(curve).eval(&k.k)
}

/// `κ(2R)` as a primitive tuple.
pub fn double_coords(curve: &QuinticCurve, k: &KummerCoords) -> Result<KummerCoords> {
    KummerCoords::new(double_raw(curve, k))
}

/// Cleared-denominator coordinates of `{κ(P+Q), κ(P−Q)}`: the first member carries
/// `−2Yy`, the second `+2Yy`.
pub fn sum_and_diff_coords(curve: &QuinticCurve, p: &CurvePoint, q: &CurvePoint) -> Result<(KummerCoords, KummerCoords)> {
    let (raw_sum, raw_diff) = sum_and_diff_raw(curve, p, q)?;
    Ok((KummerCoords::new(raw_sum)?, KummerCoords::new(raw_diff)?))
}

/// As [`sum_and_diff_coords`] but without removing common factors.
pub fn sum_and_diff_raw(curve: &QuinticCurve, p: &CurvePoint, q: &CurvePoint) -> Result<([Integer; 4], [Integer; 4])> {
    let ((big_s, big_d, big_u), (s, d, u)) = match (p.parts(), q.parts()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InfinityOperand),
    };
    if p.same_x(q) {
        return Err(Error::EqualX);
    }
    let [a2, a3, a4, a5] = curve.coeffs();
    // X = S/D², x = s/d²; multiply through by D⁶d⁶(X−x)²-compatible powers.
    let dd = Integer::from(big_d * d);
    let dd2 = Integer::from(&dd * &dd);
    let dd4 = Integer::from(&dd2 * &dd2);
    let dd6 = Integer::from(&dd4 * &dd2);
    let big_d2 = Integer::from(big_d * big_d);
    let d2 = Integer::from(d * d);
    let sd2 = Integer::from(big_s * &d2);
    let sd2b = Integer::from(s * &big_d2);
    let a = Integer::from(&sd2 - &sd2b);
    let b = Integer::from(&sd2 + &sd2b);
    let a_sq = Integer::from(&a * &a);
    let ss = Integer::from(big_s * s);
    let k1 = Integer::from(&dd2 * &a_sq);
    let k2 = Integer::from(&a_sq * &b);
    let k3 = Integer::from(&ss * &a_sq);
    let mut k4 = Integer::from(a5 * &dd6) * 2u32;
    k4 += Integer::from(a4 * &dd4) * &b;
    k4 += Integer::from(a3 * &dd4) * &ss * 2u32;
    k4 += Integer::from(a2 * &dd2) * &ss * &b;
    k4 += Integer::from(&ss * &ss) * &b;
    let cross = Integer::from(&dd * big_u) * u * 2u32;
    let sum = [k1.clone(), k2.clone(), k3.clone(), Integer::from(&k4 - &cross)];
    let diff = [k1, k2, k3, k4 + cross];
    Ok((sum, diff))
}

/// Linear forms attached to theta characteristics.
#[derive(Debug, Clone)]
pub enum LinearForm {
    /// `ℓ_ρ = ρ²w − ρx + y`.
    Root(Complex),
    /// `ℓ_∞ = w`.
    Infinity,
    /// `ℓ_{α,β}`.
    Pair(Complex, Complex),
}

/// Evaluates the chosen linear form at `(w, x, y, z)`.
pub fn ell_form(curve: &QuinticCurve, form: &LinearForm, k: &[Complex; 4]) -> Complex {
    let p = k[0].prec().0;
    let [w, x, y, z] = k;
    match form {
        LinearForm::Infinity => w.clone(),
        LinearForm::Root(rho) => {
            let r2 = Complex::with_val(p, rho.square_ref());
            Complex::with_val(p, &r2 * w) - Complex::with_val(p, rho * x) + y
        }
        LinearForm::Pair(al, be) => {
            let [a2, a3, a4, a5] = curve.coeffs();
            let s = Complex::with_val(p, al + be);
            let pr = Complex::with_val(p, al * be);
            let mut num = Complex::with_val(p, a5) * 2u32;
            num += Complex::with_val(p, &s * a4);
            num += Complex::with_val(p, &pr * a3) * 2u32;
            num += Complex::with_val(p, &pr * a2) * &s;
            num += Complex::with_val(p, pr.square_ref()) * &s;
            let diff = Complex::with_val(p, al - be);
            let den = Complex::with_val(p, diff.square_ref());
            let coef = Complex::with_val(p, &num / &den);
            Complex::with_val(p, &coef * w) + Complex::with_val(p, &pr * x) - Complex::with_val(p, &s * y) + z
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::{search_points, SearchOptions};
    use proptest::prelude::*;
    use rug::ops::Pow;

    fn curve(a: [i64; 4]) -> QuinticCurve {
        QuinticCurve::from_i64(a).unwrap()
    }

    #[test]
    fn transcription_checksums() {
        // Counted by hand against the published forms before any code used them.
        assert_eq!(table_checksums(), [(23, -80, 208), (40, 80, 392), (32, -208, 376), (41, 48, 424)]);
    }

    #[test]
    fn bidegrees_of_every_monomial() {
        for (i, t) in DELTA.iter().enumerate() {
            for (_, ae, ke) in t.iter() {
                let kdeg: u32 = ke.iter().map(|&x| x as u32).sum();
                assert_eq!(kdeg, 4);
                // Weight a_j ↦ j, k_j ↦ j.
                let weight: u32 = ae.iter().zip([2, 3, 4, 5]).map(|(&e, w)| e as u32 * w).sum::<u32>()
                    + ke.iter().zip([1, 2, 3, 4]).map(|(&e, w)| e as u32 * w).sum::<u32>();
                assert_eq!(weight, 13 + i as u32, "δ{} monomial {:?} {:?}", i + 1, ae, ke);
            }
        }
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&CurvePoint::affine(1, 2, 0)), KummerCoords::from_i64([0, 16, 4, 1]).unwrap());
        assert_eq!(kappa(&CurvePoint::Infinity), KummerCoords::from_i64([0, 0, 0, 1]).unwrap());
        assert_eq!(kappa(&CurvePoint::affine(-1, 1, 0)), KummerCoords::from_i64([0, 1, -1, 1]).unwrap());
    }

    #[test]
    fn doubling_two_torsion_and_identity() {
        let c = curve([0, 0, 0, 1]);
        let k = kappa(&CurvePoint::affine(-1, 1, 0));
        let raw = double_raw(&c, &k);
        assert_eq!(raw, [0, 0, 0, 25].map(Integer::from));
        assert_eq!(double_coords(&c, &k).unwrap(), KummerCoords::identity());
        for a in [[0, 0, 0, 1], [3, -2, 1, 5], [-7, 11, 2, -30]] {
            assert_eq!(double_coords(&curve(a), &KummerCoords::identity()).unwrap(), KummerCoords::identity());
        }
    }

    #[test]
    fn specialised_forms_match_direct_table() {
        let c = curve([3, -2, 1, 5]);
        let k = [5, -3, 7, 2].map(Integer::from);
        assert_eq!(DuplicationForms::new(&c).eval(&k), delta_raw(c.coeffs(), &k));
    }

    #[test]
    fn sum_and_diff_examples() {
        let c = curve([0, 0, 0, 1]);
        let p = CurvePoint::affine(-1, 1, 0);
        let q = CurvePoint::affine(0, 1, 1);
        let (s, d) = sum_and_diff_coords(&c, &p, &q).unwrap();
        let want = KummerCoords::from_i64([1, -1, 0, 2]).unwrap();
        assert_eq!(s, want);
        assert_eq!(d, want);
        assert_eq!(sum_and_diff_coords(&c, &p, &p), Err(Error::EqualX));
        assert_eq!(sum_and_diff_coords(&c, &p, &CurvePoint::Infinity), Err(Error::InfinityOperand));
    }

    #[test]
    fn swap_and_sign_flip() {
        let c = curve([2, 0, -3, 1]);
        let pts: Vec<_> = search_points(&c, 3, 30, SearchOptions::default()).into_iter().filter(|p| !p.is_infinity()).collect();
        for p in &pts {
            for q in &pts {
                if p.same_x(q) {
                    continue;
                }
                let (s1, d1) = sum_and_diff_coords(&c, p, q).unwrap();
                let (s2, d2) = sum_and_diff_coords(&c, q, p).unwrap();
                assert_eq!((s1.clone(), d1.clone()), (s2, d2));
                let (s3, d3) = sum_and_diff_coords(&c, p, &q.neg()).unwrap();
                assert_eq!((s1, d1), (d3, s3));
            }
        }
    }

    #[test]
    fn ell_forms() {
        let c = curve([0, 0, 0, 1]);
        let p = 128;
        let k = KummerCoords::from_i64([1, -1, 0, 2]).unwrap().to_complex(p);
        let v = ell_form(&c, &LinearForm::Root(Complex::with_val(p, -1)), &k);
        assert!(v.real().is_zero() && v.imag().is_zero());
        let kp = kappa(&CurvePoint::affine(0, 1, 1)).to_complex(p);
        let w = ell_form(&c, &LinearForm::Infinity, &kp);
        assert!(w.real().is_zero());
        // ℓ_ρ(0, e⁴, se², s²) = e⁴ (x − ρ).
        let c2 = curve([2, 0, -3, 1]);
        let rho = Complex::with_val(p, (0.3, -1.7));
        let kq = kappa(&CurvePoint::affine(7, 3, 0)).to_complex(p);
        let got = ell_form(&c2, &LinearForm::Root(rho.clone()), &kq);
        let x = Complex::with_val(p, Float::with_val(p, 7) / 9);
        let want = Complex::with_val(p, &x - &rho) * 81u32;
        let err = Complex::with_val(p, &got - &want);
        assert!(Float::with_val(p, err.abs_ref()).to_f64() < 1e-30);
    }

    #[test]
    fn pair_form_vanishes_on_sum_formula() {
        // ℓ_ρ at the normalised κ(P+Q) equals (X−ρ)(x−ρ); the pair form is the
        // analogue for ℓ_{α,β}, so only check it is finite and linear here.
        let c = curve([2, 0, -3, 1]);
        let p = 96;
        let r = c.roots(p).unwrap();
        let f = LinearForm::Pair(r[0].clone(), r[1].clone());
        let k1 = KummerCoords::from_i64([1, 2, 3, 4]).unwrap().to_complex(p);
        let k2: [Complex; 4] = k1.clone().map(|z| z * 3u32);
        let a = ell_form(&c, &f, &k1) * 3u32;
        let b = ell_form(&c, &f, &k2);
        let d = Complex::with_val(p, &a - &b);
        assert!(Float::with_val(p, d.abs_ref()).to_f64() < 1e-20);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn homogeneity_in_k(a in prop::array::uniform4(-40i64..40), k in prop::array::uniform4(-1000i64..1000)) {
            let a = a.map(Integer::from);
            let k = k.map(Integer::from);
            let lk = k.clone().map(|x| x * 3u32);
            let d = delta_raw(&a, &k);
            let dl = delta_raw(&a, &lk);
            for i in 0..4 {
                prop_assert_eq!(&dl[i], &Integer::from(&d[i] * 81u32));
            }
        }

        #[test]
        fn bigraded_homogeneity(a in prop::array::uniform4(-40i64..40), k in prop::array::uniform4(-1000i64..1000), c in 2i64..=5) {
            let a0 = a.map(Integer::from);
            let k0 = k.map(Integer::from);
            let cz = Integer::from(c);
            let a1: [Integer; 4] = std::array::from_fn(|j| Integer::from(&a0[j] * Integer::from(Pow::pow(&cz, j as u32 + 2))));
            let k1: [Integer; 4] = std::array::from_fn(|j| Integer::from(&k0[j] * Integer::from(Pow::pow(&cz, j as u32 + 1))));
            let d0 = delta_raw(&a0, &k0);
            let d1 = delta_raw(&a1, &k1);
            for i in 0..4 {
                let f = Integer::from(Pow::pow(&cz, 13 + i as u32));
                prop_assert_eq!(&d1[i], &Integer::from(&d0[i] * &f));
            }
        }
    }
}
