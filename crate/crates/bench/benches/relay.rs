use std::hint::black_box;

use aeswsn_core::hopnet::seeded_payload;
use aeswsn_core::{relay_message, DelayParams, HopChain, Message};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn relay(c: &mut Criterion) {
    let params = DelayParams::default();
    let msg = Message::new(seeded_payload(16, 1));
    let mut group = c.benchmark_group("relay");
    for hops in [1usize, 30, 180] {
        let chain = HopChain::generate(hops, 1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(hops), &chain, |b, chain| {
            b.iter(|| relay_message(black_box(chain), &msg, &params).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, relay);
criterion_main!(benches);
