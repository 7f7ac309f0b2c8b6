use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use deckforge_core::hand::{Evaluator, Oracle};
use deckforge_core::script::{presets, FlowKind};
use deckforge_core::Card;

/// A fixed spread of seven-card pools dealt from the top of a rotated deck.
fn pools(deck: &[Card], n: usize) -> Vec<Vec<Card>> {
    (0..n).map(|i| (0..7).map(|j| deck[(i * 7 + j * 11) % deck.len()]).collect()).collect()
}

fn best_hand(c: &mut Criterion) {
    let mut group = c.benchmark_group("best_hand");
    for name in ["texas", "omaha-hl", "joker-holdem", "6-card-draw"] {
        let spec = presets::find(name).unwrap().spec();
        let deck = spec.deck();
        let pools = pools(&deck, 64);
        // Board games deal two hole cards here; draw games hold the whole pool.
        let hole = if spec.flow.iter().any(|s| s.kind() == FlowKind::Flop) { 2 } else { 7 };
        let ev = Evaluator::new(&spec, 0);
        group.bench_function(format!("{name}/evaluator"), |b| {
            b.iter(|| {
                for p in &pools {
                    black_box(ev.best_hand(&p[..hole], &p[hole..]).ok());
                }
            })
        });
        let mut oracle = Oracle::new(&spec, 0);
        group.bench_function(format!("{name}/oracle"), |b| {
            b.iter(|| {
                for p in &pools {
                    black_box(oracle.best_hand(&p[..hole], &p[hole..]).ok());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, best_hand);
criterion_main!(benches);
