use g2heights::analytic::{riemann_data, RiemannSnapshot};
use g2heights::calibration::{calibrate, default_corpus, drifted, CalibrationConfig};
use g2heights::constants::frozen;
use g2heights::{Execution, QuinticCurve};

#[test]
fn recalibration_stays_within_ten_percent() {
    let fresh = calibrate(&default_corpus(16), &CalibrationConfig::default(), Execution::default()).unwrap();
    let d = drifted(frozen(), &fresh, 0.10);
    assert!(d.is_empty(), "drifted constants: {d:?}");
    assert_eq!(fresh.version, frozen().version);
}

#[test]
fn riemann_baseline_is_reproduced() {
    let snap: RiemannSnapshot = serde_json::from_str(include_str!("../data/riemann_baseline.json")).unwrap();
    let c = QuinticCurve::from_i64([0, 0, 0, 1]).unwrap();
    let rd = riemann_data(&c, snap.precision_bits).unwrap();
    assert!(rd.snapshot_distance(&snap) < 1e-30);
    assert_eq!(rd.char_table, snap.char_table);
}
