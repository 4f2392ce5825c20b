use circle_angles::angles::Space;
use circle_angles::obstruction::Obstruction;
use circle_angles::triangulation::parse_triangulation;
use circle_angles::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::path::PathBuf;

fn load(name: &str) -> Obstruction {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(format!("{name}.json"));
    let t = parse_triangulation(&std::fs::read_to_string(path).unwrap()).unwrap();
    Obstruction::new(&t).unwrap()
}

fn components(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_components");
    group.sample_size(20);
    for name in ["L6a4", "L14a456", "s776"] {
        let ob = load(name);
        for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, name), &ob, |b, ob| {
                b.iter(|| {
                    ob.enumerate_components(Space::Sa0, exec).unwrap();
                    ob.enumerate_components(Space::Sa, exec).unwrap()
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, components);
criterion_main!(benches);
