use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ospquant::geom::{lie_symbol, Weights};
use ospquant::quantizer::{generator_fields, quantize, symbol_basis, QuantizeOptions};
use ospquant::rational::rat;
use ospquant::structops::{casimir_closed, CasimirData, CasimirMode};
use ospquant::weyl::lie_dop;
use ospquant::SpaceSignature;

fn equivariance(c: &mut Criterion) {
    let sig = SpaceSignature::new(2, 0, 1);
    let w = Weights::new(rat(1, 2), rat(1, 3));
    let fam = generator_fields(sig).unwrap();
    let symbols = symbol_basis(sig, &w, 2, 1);
    let opts = QuantizeOptions::default();
    let cell = |s: &ospquant::geom::SymbolField| {
        let q = quantize(s, &opts).unwrap().operator;
        fam.iter()
            .all(|(_, x)| lie_dop(x, &q) == quantize(&lie_symbol(x, s), &opts).unwrap().operator)
    };
    let mut g = c.benchmark_group("equivariance_sweep");
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("sequential", symbols.len()), |b| {
        b.iter(|| black_box(symbols.iter().map(cell).collect::<Vec<_>>()))
    });
    g.bench_function(BenchmarkId::new("parallel", symbols.len()), |b| {
        b.iter(|| black_box(ospquant::par::map(&symbols, cell)))
    });
    g.finish();
}

fn casimir(c: &mut Criterion) {
    let sig = SpaceSignature::new(1, 1, 1);
    let w = Weights::new(rat(1, 2), rat(1, 3));
    let data = CasimirData::new(sig).unwrap();
    let symbols = symbol_basis(sig, &w, 2, 2);
    let mut g = c.benchmark_group("casimir_dual_basis");
    g.sample_size(10);
    g.bench_function("sequential", |b| {
        b.iter(|| black_box(symbols.iter().map(|s| data.casimir_c(s, CasimirMode::DualBasis)).collect::<Vec<_>>()))
    });
    g.bench_function("parallel", |b| {
        b.iter(|| black_box(ospquant::par::map(&symbols, |s| data.casimir_c(s, CasimirMode::DualBasis))))
    });
    g.bench_function("closed_form", |b| {
        b.iter(|| black_box(symbols.iter().map(casimir_closed).collect::<Vec<_>>()))
    });
    g.finish();
}

criterion_group!(benches, equivariance, casimir);
criterion_main!(benches);
