use g2heights::analytic::riemann_data;
use g2heights::gap::{greedy_separated_subset, Arrow, Classifier, GapConfig, IjTag, PointClass};
use g2heights::heights::{HeightContext, HeightOptions};
use g2heights::points::{search_points, SearchOptions};
use g2heights::{CurvePoint, Execution, QuinticCurve};
use rand::{Rng, SeedableRng};

const CURVES: [[i64; 4]; 6] = [[2, 0, -3, 1], [-1, 0, 0, 1], [-4, 0, 0, 4], [0, 0, 4, 4], [2, 2, -2, 1], [1, -1, -1, 1]];

/// Membership in each defining set, evaluated in floating point from scratch.
fn memberships(c: &QuinticCurve, p: &CurvePoint, delta: f64) -> Vec<(PointClass, Arrow)> {
    let (s, e, _) = p.parts().unwrap();
    let x = (s.to_f64() / (e.to_f64() * e.to_f64())).abs();
    let h = s.to_f64().abs().max(e.to_f64() * e.to_f64()).ln();
    let hf = c.log_height();
    let big = delta.powf(-1.0 / delta);
    let hh = c.height_h();
    let i_up = x >= big * hh && h < (25.0 / 3.0 - delta) * hf;
    let i_down = x < big * hh && h < (8.0 - delta) * hf;
    let in_i = i_up || i_down;
    let medium = !in_i && h < big * hf;
    let large = !in_i && !medium;
    let mut out = Vec::new();
    for (class, member) in [(PointClass::II, medium), (PointClass::III, large)] {
        if member {
            if x >= big * hh {
                out.push((class, Arrow::Up));
            }
            if x > hh / big && x < big * hh {
                out.push((class, Arrow::Bullet));
            }
            if x <= hh / big {
                out.push((class, Arrow::Down));
            }
        }
    }
    if i_up {
        out.push((PointClass::I, Arrow::Up));
    }
    if i_down {
        out.push((PointClass::I, Arrow::Down));
    }
    out
}

fn corpus() -> Vec<(QuinticCurve, Vec<CurvePoint>)> {
    CURVES
        .iter()
        .map(|&a| {
            let c = QuinticCurve::from_i64(a).unwrap();
            let pts = search_points(&c, 4, 400, SearchOptions::default()).into_iter().filter(|p| !p.is_infinity()).collect();
            (c, pts)
        })
        .collect()
}

#[test]
fn partition_is_exhaustive_disjoint_and_matches_threshold_inequalities() {
    let mut seen = 0;
    for delta in [0.25, 0.2, 0.3] {
        for (c, pts) in corpus() {
            let ctx = HeightContext::new(&c, HeightOptions::default());
            let cl = Classifier::new(&ctx, GapConfig { delta, ..Default::default() }, None).unwrap();
            for p in &pts {
                let m = memberships(&c, p, delta);
                assert_eq!(m.len(), 1, "{c} {p}: {m:?}");
                let lp = cl.classify(p, false).unwrap();
                assert_eq!((lp.label.class, lp.label.arrow), m[0], "{c} {p} δ = {delta}");
                seen += 1;
            }
        }
    }
    assert!(seen > 50);
}

#[test]
fn refinement_tags_follow_their_definitions() {
    let d = 0.25f64;
    for (c, pts) in corpus() {
        let ctx = HeightContext::new(&c, HeightOptions::default());
        let rd = riemann_data(&c, 128).unwrap();
        let cl = Classifier::new(&ctx, GapConfig::default(), Some(rd)).unwrap();
        for p in &pts {
            let lp = cl.classify(p, true).unwrap();
            let lb = (1.0 + d).ln();
            match lp.label.ij_tag {
                Some(IjTag::Pair(i, j)) => {
                    assert_eq!(lp.label.class, PointClass::II);
                    assert_eq!(i, ((lp.h_hat / lp.h_k).ln() / lb).floor() as i64);
                    assert_eq!(j, ((lp.h_k / c.log_height()).ln() / lb).floor() as i64);
                }
                Some(IjTag::Single(i)) => {
                    assert_eq!(lp.label.class, PointClass::III);
                    assert_eq!(i, ((lp.h_hat / lp.h_k).ln() / lb).floor() as i64);
                }
                None => assert!(lp.label.class == PointClass::I || lp.h_hat <= lp.h_hat_err.max(0.0) || c.log_height() == 0.0),
            }
            match lp.label.class {
                PointClass::I => assert!(lp.label.cell.is_none()),
                _ => assert!(lp.label.cell.unwrap().iter().all(|&k| (-4..4).contains(&k))),
            }
        }
    }
}

#[test]
fn negating_y_mirrors_the_cell_and_keeps_the_rest() {
    let mut mirrored = 0;
    for (c, pts) in corpus() {
        let ctx = HeightContext::new(&c, HeightOptions::default());
        let cl = Classifier::new(&ctx, GapConfig::default(), Some(riemann_data(&c, 128).unwrap())).unwrap();
        for p in pts.iter().filter(|p| p.parts().unwrap().2 != &0) {
            let (a, b) = (cl.classify(p, true).unwrap().label, cl.classify(&p.neg(), true).unwrap().label);
            assert_eq!((a.class, a.arrow, a.rho_tag, a.ij_tag), (b.class, b.arrow, b.rho_tag, b.ij_tag));
            if let (Some(ca), Some(cb)) = (a.cell, b.cell) {
                assert_eq!(cb, ca.map(|i| -i - 1), "{c} {p}");
                mirrored += 1;
            }
        }
    }
    assert!(mirrored > 0);
}

#[test]
fn real_pairs_respect_the_gap_bounds() {
    let cfg = GapConfig::default();
    for (c, pts) in corpus() {
        let ctx = HeightContext::new(&c, HeightOptions::default());
        let cl = Classifier::new(&ctx, cfg, Some(riemann_data(&c, 128).unwrap())).unwrap();
        let labeled = cl.classify_all(&pts, true, Execution::default()).unwrap();
        let r = g2heights::gap::verify_gap_pairs(&ctx, &labeled, cfg, Execution::default()).unwrap();
        assert!(r.passed(), "{c}: {:?}", r.violations);
    }
}

/// Brute force: every non-member has some member at cos > α, members pairwise ≤ α.
fn brute_maximal(vs: &[Vec<f64>], s: &[usize], alpha: f64) -> bool {
    let cos = |i: usize, j: usize| {
        let d: f64 = vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum();
        let n = |k: usize| vs[k].iter().map(|x| x * x).sum::<f64>().sqrt();
        d / (n(i) * n(j))
    };
    s.iter().all(|&i| s.iter().all(|&j| i == j || cos(i, j) <= alpha)) && (0..vs.len()).filter(|i| !s.contains(i)).all(|i| s.iter().any(|&j| cos(i, j) > alpha))
}

#[test]
fn greedy_subsets_are_maximal_on_random_fixtures() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(42);
    for trial in 0..20 {
        let dim = 2 + trial % 5;
        let vs: Vec<Vec<f64>> = (0..50).map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let gram: Vec<Vec<f64>> = vs.iter().map(|u| vs.iter().map(|v| u.iter().zip(v).map(|(a, b)| a * b).sum()).collect()).collect();
        for alpha in [0.3, 0.6, 0.7406] {
            let s = greedy_separated_subset(&gram, alpha).unwrap();
            assert!(brute_maximal(&vs, &s, alpha));
        }
    }
}
