use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use g2heights::family::count_family;
use g2heights::heights::{HeightContext, HeightOptions};
use g2heights::points::{search_points, SearchOptions};
use g2heights::{CurvePoint, Execution, QuinticCurve};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn family(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_family_T1.5");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| count_family(1.5, exec)));
    }
    g.finish();
}

fn search(c: &mut Criterion) {
    let curve = QuinticCurve::from_i64([2, 0, -3, 1]).unwrap();
    let mut g = c.benchmark_group("search_points_e12_s2000");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| search_points(&curve, 12, 2000, SearchOptions { exec, ..Default::default() }))
        });
    }
    g.finish();
}

fn heights(c: &mut Criterion) {
    let curve = QuinticCurve::from_i64([-1, 0, 0, 1]).unwrap();
    let pts: Vec<CurvePoint> = search_points(&curve, 4, 100, SearchOptions::default()).into_iter().filter(|p| !p.is_infinity()).collect();
    let mut g = c.benchmark_group("canonical_heights_corpus");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            // Fresh context each time so the height cache does not hide the work.
            b.iter(|| {
                let ctx = HeightContext::new(&curve, HeightOptions::default());
                exec.map(&pts, |p| ctx.point_height(p).map(|h| h.value).unwrap_or(f64::NAN))
            })
        });
    }
    g.finish();
}

criterion_group!(benches, family, search, heights);
criterion_main!(benches);
