#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symlen_core::construction::{BlockSpec, Construction, Registry};
use symlen_core::fpgroup::FiniteGroup;
use symlen_core::homomorph::{search_hom, Hom};

pub fn registry(p: u64) -> Registry {
    Registry::new()
        .with(BlockSpec::trivial("T", p))
        .with(BlockSpec::free_pro_cyclic("A", p, 1).unwrap())
        .with(BlockSpec::free_pro_cyclic("B", p, 1 + p as i64).unwrap())
        .with(BlockSpec::demushkin2("D", p))
}

fn leaf(rng: &mut ChaCha8Rng, p: u64, allow_trivial: bool) -> Construction {
    let reg = registry(p);
    let ids: &[&str] = if allow_trivial { &["T", "A", "B", "D"] } else { &["A", "B", "D"] };
    let id = ids.choose(rng).unwrap();
    Construction::Leaf(reg.get(id).unwrap().clone())
}

fn build(rng: &mut ChaCha8Rng, p: u64, depth: u32, allow_trivial: bool) -> Construction {
    if depth == 0 || rng.gen_bool(0.3) {
        return leaf(rng, p, allow_trivial);
    }
    if rng.gen_bool(0.5) {
        Construction::extension(build(rng, p, depth - 1, true))
    } else {
        let a = build(rng, p, depth - 1, false);
        let b = build(rng, p, depth - 1, false);
        Construction::free_product(a, b).unwrap()
    }
}

/// Random construction with at most `max_ext` extensions along any branch.
pub fn random_construction(rng: &mut ChaCha8Rng, p: u64, depth: u32, max_ext: usize) -> Construction {
    loop {
        let c = build(rng, p, depth, true);
        if c.extension_rank() <= max_ext && c.generator_ids().len() <= 9 {
            return c;
        }
    }
}

/// Search for a hom with a shuffled candidate order; falls back to the trivial hom.
pub fn random_hom(rng: &mut ChaCha8Rng, c: &Construction, target: &Arc<FiniteGroup>) -> Hom {
    let n = target.order();
    let mut seed_rng = ChaCha8Rng::seed_from_u64(rng.gen());
    let mut cand = |_: &_| {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(&mut seed_rng);
        v
    };
    match search_hom(c, target, &mut cand, 20_000).unwrap() {
        Some(h) => h,
        None => Hom::trivial(c.clone(), target.clone()).unwrap(),
    }
}
