use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use graphcomp::etree::{family_sequence, run_script};
use graphcomp::formulas::bell;
use graphcomp::oracle::count_compositions;
use graphcomp::{make_standard, AttachmentScript, Family, LabeledGraph, Shape, TreeFamily};

fn oracle_fixtures() -> Vec<(String, LabeledGraph)> {
    let mut out = Vec::new();
    for n in [8, 10, 12] {
        out.push((
            format!("cycle_{n}"),
            make_standard(Family::Cycle, n).unwrap(),
        ));
        out.push((
            format!("path_{n}"),
            make_standard(Family::Path, n - 1).unwrap(),
        ));
    }
    out.push((
        "complete_9".into(),
        make_standard(Family::Complete, 9).unwrap(),
    ));
    let ladder = AttachmentScript::canonical(TreeFamily::Cycle, 4, Shape::Chain, 5).unwrap();
    out.push((
        "ladder_6".into(),
        graphcomp::etree::realize_graph(&ladder, 5).unwrap(),
    ));
    out
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for (name, g) in oracle_fixtures() {
        group.bench_with_input(BenchmarkId::from_parameter(&name), &g, |b, g| {
            b.iter(|| count_compositions(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn closed_forms(c: &mut Criterion) {
    c.bench_function("bell_500_memoized", |b| b.iter(|| bell(black_box(500))));
    c.bench_function("book_complete_5_x1000", |b| {
        b.iter(|| family_sequence(TreeFamily::Complete, 5, Shape::Book, black_box(1000)).unwrap())
    });
    c.bench_function("chain_cycle_6_x1000", |b| {
        b.iter(|| family_sequence(TreeFamily::Cycle, 6, Shape::Chain, black_box(1000)).unwrap())
    });
}

fn dynamic_program(c: &mut Criterion) {
    let script = AttachmentScript::canonical(TreeFamily::Cycle, 6, Shape::Chain, 1000).unwrap();
    c.bench_function("run_script_cycle_6_chain_x1000", |b| {
        b.iter(|| run_script(black_box(&script), 1000).unwrap())
    });
}

criterion_group!(benches, oracle, closed_forms, dynamic_program);
criterion_main!(benches);
