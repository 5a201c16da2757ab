use criterion::{criterion_group, criterion_main, Criterion};
use forestalg::caps::Caps;
use forestalg::corpus;
use forestalg::decide::{decide_cca, decide_pt, Prepared};
use forestalg::oracle::ForestEnum;
use forestalg::parse::parse_forest;
use forestalg::piecerel::piece_relation_plain;
use forestalg::pieces::{is_piece, PieceVariant};
use std::hint::black_box;

fn bench_syntactic(c: &mut Criterion) {
    let caps = Caps::default();
    let abcd = corpus::abcd_entry();
    c.bench_function("syntactic_abcd", |b| {
        b.iter(|| black_box(abcd.automaton.to_syntactic(&caps).unwrap()))
    });
    let cca = corpus::cca_abc_entry(&caps).unwrap();
    c.bench_function("syntactic_cca_abc", |b| {
        b.iter(|| black_box(cca.automaton.to_syntactic(&caps).unwrap()))
    });
}

fn bench_piece_relation(c: &mut Criterion) {
    let caps = Caps::default();
    let syn = corpus::abcd_entry().automaton.to_syntactic(&caps).unwrap();
    c.bench_function("piece_relation_plain_abcd", |b| {
        b.iter(|| black_box(piece_relation_plain(&syn)))
    });
}

fn bench_decide(c: &mut Criterion) {
    let caps = Caps::default();
    let entry = corpus::cca_abc_entry(&caps).unwrap();
    c.bench_function("decide_pt_and_cca_cca_abc", |b| {
        b.iter(|| {
            let p = Prepared::from_automaton(&entry.automaton, &caps).unwrap();
            black_box((decide_pt(&p).unwrap().holds, decide_cca(&p).unwrap().holds))
        })
    });
}

fn bench_enumeration(c: &mut Criterion) {
    let ab = forestalg::forest::Alphabet::of_chars("ab");
    c.bench_function("enumerate_forests_upto_6", |b| {
        b.iter(|| {
            let mut en = ForestEnum::new(ab.clone());
            black_box(en.all_upto(6).len())
        })
    });
}

fn bench_embedding(c: &mut Criterion) {
    let caps = Caps::default();
    let ab = forestalg::forest::Alphabet::of_chars("abcd");
    let s = parse_forest("a(a+b)+c", &ab).unwrap();
    let t = parse_forest("a(a+bc)+b+c(a+b)", &ab).unwrap();
    c.bench_function("is_piece_running_example", |b| {
        b.iter(|| black_box(is_piece(&s, &t, PieceVariant::Plain, &caps).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_syntactic,
    bench_piece_relation,
    bench_decide,
    bench_enumeration,
    bench_embedding
);
criterion_main!(benches);
