use g2heights::analytic::{self, compute_periods, lambda_inf_point, lambda_inf_theta, riemann_data, ThetaChar};
use g2heights::heights::{HeightContext, HeightOptions};
use g2heights::kummer::kappa;
use g2heights::points::{search_points, SearchOptions};
use g2heights::{CurvePoint, QuinticCurve};
use rand::{Rng, SeedableRng};
use rug::{Complex, Float};

fn curve(a: [i64; 4]) -> QuinticCurve {
    QuinticCurve::from_i64(a).unwrap()
}

fn random_curves(n: usize, seed: u64) -> Vec<QuinticCurve> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let a = [rng.gen_range(-6..=6), rng.gen_range(-6..=6), rng.gen_range(-6..=6), rng.gen_range(-6..=6)];
        if let Ok(c) = QuinticCurve::from_i64(a) {
            out.push(c);
        }
    }
    out
}

fn telescoped(ctx: &HeightContext, p: &CurvePoint) -> f64 {
    let lift = kappa(p).coords().clone().map(|x| Float::with_val(256, x));
    ctx.lambda_hat_infinity(&lift).unwrap().value
}

#[test]
fn theta_and_telescoping_local_heights_agree() {
    let mut pairs = 0;
    for a in [[2, 0, -3, 1], [1, 0, 1, 1], [-1, 0, 0, 1], [3, -2, 1, 5], [0, 0, 0, 1], [0, 1, -1, 1]] {
        let c = curve(a);
        let rd = riemann_data(&c, 128).unwrap();
        let ctx = HeightContext::new(&c, HeightOptions::default());
        for p in search_points(&c, 3, 40, SearchOptions::default()).iter().filter(|p| !p.is_infinity()).take(4) {
            let (th, _) = lambda_inf_point(&rd, &c, p).unwrap();
            let tel = telescoped(&ctx, p);
            assert!((th - tel).abs() < 1e-4, "{a:?} {p}: theta {th} telescoped {tel}");
            pairs += 1;
        }
    }
    assert!(pairs >= 10);
}

#[test]
fn two_torsion_local_height() {
    // λ̂∞(κ̃(α,0)) = ½ log|f′(α)| for integer roots α.
    for (a, alpha) in [([0, 0, -1, 0], 0i64), ([0, 0, -1, 0], 1), ([0, 0, -1, 0], -1), ([0, 0, 0, 1], -1), ([0, 0, 0, 32], -2)] {
        let c = curve(a);
        let ctx = HeightContext::new(&c, HeightOptions::default());
        let p = CurvePoint::affine(alpha, 1, 0);
        let want = 0.5 * (c.eval_derivative(&alpha.into()).to_f64().abs()).ln();
        let tel = telescoped(&ctx, &p);
        assert!((tel - want).abs() < 1e-8, "{a:?}: {tel} vs {want}");
        let rd = riemann_data(&c, 128).unwrap();
        let (th, _) = lambda_inf_point(&rd, &c, &p).unwrap();
        assert!((th - want).abs() < 1e-6, "{a:?}: theta {th} vs {want}");
    }
}

#[test]
fn root_choice_does_not_matter() {
    let c = curve([2, 0, -3, 1]);
    let rd = riemann_data(&c, 128).unwrap();
    for p in [CurvePoint::affine(3, 1, 17), CurvePoint::affine(1, 2, 17)] {
        let z = rd.aj_point(&c, &p).unwrap();
        let lift = kappa(&p).coords().clone().map(|x| Float::with_val(128, x));
        let vals: Vec<f64> = (0..5).filter_map(|r| lambda_inf_theta(&rd, &c, &lift, &z, r).ok()).collect();
        assert!(vals.len() >= 2);
        for v in &vals {
            assert!((v - vals[0]).abs() < 1e-6, "{vals:?}");
        }
    }
}

#[test]
fn on_divisor_is_reported() {
    let c = curve([0, 0, 0, 1]);
    let rd = riemann_data(&c, 128).unwrap();
    let p = CurvePoint::affine(-1, 1, 0);
    let rho = (0..5).find(|&k| (rd.roots[k].real().to_f64() + 1.0).abs() < 1e-20 && rd.roots[k].imag().to_f64().abs() < 1e-20).unwrap();
    let z = rd.aj_point(&c, &p).unwrap();
    let lift = kappa(&p).coords().clone().map(|x| Float::with_val(128, x));
    assert_eq!(lambda_inf_theta(&rd, &c, &lift, &z, rho), Err(g2heights::Error::OnDivisor));
}

#[test]
fn tau_is_stable_across_precisions() {
    let c = curve([0, 0, -1, 0]);
    let lo = compute_periods(&c, 128).unwrap();
    let hi = compute_periods(&c, 256).unwrap();
    assert!(lo.symmetry_defect <= 2f64.powi(-64));
    for i in 0..2 {
        for j in 0..2 {
            let d = Complex::with_val(256, &hi.tau[i][j] - &lo.tau[i][j]);
            assert!(Float::with_val(64, d.abs_ref()).to_f64() < 1e-20);
        }
    }
    assert_eq!(lo.char_table, hi.char_table);
}

#[test]
fn random_curves_reduce() {
    for c in random_curves(20, 11) {
        let rd = riemann_data(&c, 128).unwrap();
        assert!(analytic::is_positive_definite(&rd.tau), "{c}");
        for (name, ok) in analytic::reduction_checks(&rd.tau, analytic::REDUCTION_SLACK) {
            assert!(ok, "{c}: {name}");
        }
        assert!(rd.char_table.roots.iter().all(|ch| ch.is_odd()));
    }
}

#[test]
fn monitored_constants_hold() {
    let k = g2heights::constants::frozen();
    for c in random_curves(10, 5) {
        let rd = riemann_data(&c, 128).unwrap();
        assert!(analytic::im_tau1_residual(&rd, &c) <= k.c_fit_im_tau1, "{c}");
        assert!(analytic::xi_sup_sample(&rd, 40, 7) <= k.c_xi, "{c}");
        for ch in ThetaChar::even() {
            let r = analytic::near_zero_ratio(&rd, ch, [0.004, -0.007], [0.003, 0.006]);
            assert!(r <= k.c_asym && r >= 1.0 / k.c_asym, "{c} {ch}: {r}");
        }
    }
}
