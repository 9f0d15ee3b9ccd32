#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symlen::formats::{default_registry, GroupJson};
use symlen_core::construction::Construction;
use symlen_core::fpgroup::FiniteGroup;
use symlen_core::homomorph::{search_hom, Hom};

/// The four target groups of the factoring corpus for prime `p`.
pub fn targets(p: u64) -> Vec<GroupJson> {
    let mut v = vec![GroupJson::Cyclic { p, k: 1 }, GroupJson::Cyclic { p, k: 2 }, GroupJson::Um { m: 2, p }];
    if p == 2 {
        v.push(GroupJson::Ubar { m: 3, p: 2 });
    }
    v
}

fn build(rng: &mut ChaCha8Rng, p: u64, depth: u32, allow_trivial: bool) -> Construction {
    let reg = default_registry(p).unwrap();
    if depth == 0 || rng.gen_bool(0.25) {
        let ids: &[&str] = if allow_trivial { &["T", "A", "B", "D"] } else { &["A", "B", "D"] };
        return Construction::Leaf(reg.get(ids.choose(rng).unwrap()).unwrap().clone());
    }
    if rng.gen_bool(0.55) {
        Construction::extension(build(rng, p, depth - 1, true))
    } else {
        Construction::free_product(build(rng, p, depth - 1, false), build(rng, p, depth - 1, false)).unwrap()
    }
}

/// Random construction over `{T, A, B, D}` with extension rank at most `max_e`
/// and at most `max_gens` generators.
pub fn random_construction(rng: &mut ChaCha8Rng, p: u64, max_e: usize, max_gens: usize) -> Construction {
    loop {
        let c = build(rng, p, 5, true);
        if c.extension_rank() <= max_e && c.generator_ids().len() <= max_gens {
            return c;
        }
    }
}

/// A homomorphism found by backtracking with a shuffled candidate order,
/// falling back to the trivial one if the budget runs out.
pub fn random_hom(rng: &mut ChaCha8Rng, c: &Construction, g: &Arc<FiniteGroup>) -> Hom {
    let n = g.order();
    let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
    let mut cand = |_: &_| {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(&mut local);
        v
    };
    search_hom(c, g, &mut cand, 50_000).unwrap().unwrap_or_else(|| Hom::trivial(c.clone(), g.clone()).unwrap())
}
