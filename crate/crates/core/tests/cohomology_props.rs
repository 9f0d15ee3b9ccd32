mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symlen_core::bounds::{f, BoundTable, BoundValue};
use symlen_core::cohomology::{
    decode, encode, inflate, restriction_to_base, restriction_to_factors, ring_of, symbols, syml_table, CohRing12, DEFAULT_STATE_CAP,
};
use symlen_core::construction::Construction;

const CAP: usize = DEFAULT_STATE_CAP;

fn small(c: &Construction) -> Option<CohRing12> {
    let r = ring_of(c).ok()?;
    (r.d1 <= 5 && r.d2 <= 6).then_some(r)
}

fn syml_of(table: &[Option<u32>], r: &CohRing12, v: &[u64]) -> Option<u32> {
    table[encode(v, r.p)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bounded_by_f(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = common::random_construction(&mut rng, 3, 3, 2);
        let Some(r) = small(&c) else { return Ok(()) };
        let table = BoundTable::for_blocks(&c.blocks(), 2).unwrap();
        let bound = f(c.extension_rank(), 2, &table);
        for d in syml_table(&r, CAP).unwrap() {
            let d = d.expect("every class of a constructed ring is a sum of symbols");
            prop_assert!(BoundValue::Finite(d as u64) <= bound);
        }
    }

    #[test]
    fn free_product_is_max(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::random_construction(&mut rng, 3, 2, 1);
        let b = common::random_construction(&mut rng, 3, 2, 1);
        prop_assume!(!a.is_trivial_leaf() && !b.is_trivial_leaf());
        let c = Construction::free_product(a.clone(), b.clone()).unwrap();
        let (Some(r), Some(ra), Some(rb)) = (small(&c), small(&a), small(&b)) else { return Ok(()) };
        let (t, ta, tb) = (syml_table(&r, CAP).unwrap(), syml_table(&ra, CAP).unwrap(), syml_table(&rb, CAP).unwrap());
        for code in 0..t.len() {
            let omega = decode(code, r.d2, r.p);
            let (wa, wb) = restriction_to_factors(&r, &omega).unwrap();
            prop_assert_eq!(t[code], syml_of(&ta, &ra, &wa).max(syml_of(&tb, &rb, &wb)));
        }
    }

    #[test]
    fn extension_adds_at_most_m1(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = common::random_construction(&mut rng, 3, 3, 1);
        let c = Construction::extension(base.clone());
        let (Some(r), Some(rb)) = (small(&c), small(&base)) else { return Ok(()) };
        prop_assert!(BoundTable::for_blocks(&base.blocks(), 2).unwrap().get(1) >= BoundValue::Finite(rb.d1.min(1) as u64));
        let m1 = rb.d1.min(1) as u32;
        let (t, tb) = (syml_table(&r, CAP).unwrap(), syml_table(&rb, CAP).unwrap());
        for code in 0..t.len() {
            let omega = decode(code, r.d2, r.p);
            let res = restriction_to_base(&r, &omega).unwrap();
            prop_assert!(t[code].unwrap() <= syml_of(&tb, &rb, &res).unwrap() + m1);
        }
        for code in 0..tb.len() {
            let w = decode(code, rb.d2, rb.p);
            let up = inflate(&r, &w).unwrap();
            prop_assert_eq!(restriction_to_base(&r, &up).unwrap(), w.clone());
            prop_assert!(syml_of(&t, &r, &up).unwrap() <= tb[code].unwrap());
        }
    }

    #[test]
    fn subadditive(seed in any::<u64>(), x in any::<usize>(), y in any::<usize>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = common::random_construction(&mut rng, 3, 3, 2);
        let Some(r) = small(&c) else { return Ok(()) };
        let t = syml_table(&r, CAP).unwrap();
        let (a, b) = (decode(x % t.len(), r.d2, r.p), decode(y % t.len(), r.d2, r.p));
        let sum: Vec<u64> = a.iter().zip(&b).map(|(u, v)| (u + v) % r.p).collect();
        prop_assert!(syml_of(&t, &r, &sum).unwrap() <= syml_of(&t, &r, &a).unwrap() + syml_of(&t, &r, &b).unwrap());
    }

    #[test]
    fn bfs_agrees_with_brute_force(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = common::random_construction(&mut rng, 3, 2, 1);
        let Some(r) = small(&c) else { return Ok(()) };
        prop_assume!(r.d1 <= 4);
        let n1 = 3usize.pow(r.d1 as u32);
        let n2 = 3usize.pow(r.d2 as u32);
        let mut direct = vec![false; n2];
        for x in 0..n1 {
            for y in 0..n1 {
                let s = r.cup(&decode(x, r.d1, r.p), &decode(y, r.d1, r.p));
                direct[encode(&s, r.p)] = true;
            }
        }
        let listed = symbols(&r, CAP).unwrap();
        let expected: Vec<usize> = (1..n2).filter(|c| direct[*c]).collect();
        prop_assert_eq!(&listed, &expected);
        let t = syml_table(&r, CAP).unwrap();
        for code in 0..n2 {
            let one = direct[code];
            let two = listed.iter().any(|s| {
                let v: Vec<u64> = decode(code, r.d2, r.p).iter().zip(decode(*s, r.d2, r.p)).map(|(a, b)| (a + 2 * b) % 3).collect();
                direct[encode(&v, r.p)]
            });
            let expected = if code == 0 { Some(0) } else if one { Some(1) } else if two { Some(2) } else { t[code].filter(|d| *d > 2) };
            prop_assert_eq!(t[code], expected);
        }
    }

    #[test]
    fn invariant_under_change_of_basis(seed in any::<u64>(), a_seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = common::random_construction(&mut rng, 3, 2, 1);
        let Some(r) = small(&c) else { return Ok(()) };
        let mut rng = ChaCha8Rng::seed_from_u64(a_seed);
        let a = invertible(&mut rng, r.d1);
        let b = invertible(&mut rng, r.d2);
        let mut cup = Vec::new();
        for i in 0..r.d1 {
            for j in 0..r.d1 {
                let v = r.cup(&a[i], &a[j]);
                cup.push((0..r.d2).map(|k| (0..r.d2).map(|l| b[k][l] * v[l]).sum::<u64>() % 3).collect());
            }
        }
        let moved = CohRing12::new(3, r.d1, r.d2, cup, r.h1_labels.clone(), r.h2_labels.clone()).unwrap();
        let histogram = |t: Vec<Option<u32>>| {
            let mut h = std::collections::BTreeMap::new();
            for d in t {
                *h.entry(d).or_insert(0usize) += 1;
            }
            h
        };
        prop_assert_eq!(histogram(syml_table(&r, CAP).unwrap()), histogram(syml_table(&moved, CAP).unwrap()));
    }
}

/// Random invertible matrix over F_3, as a list of rows.
fn invertible(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<u64>> {
    use rand::Rng;
    loop {
        let m: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..3)).collect()).collect();
        if rank_mod3(m.clone()) == n {
            return m;
        }
    }
}

fn rank_mod3(mut m: Vec<Vec<u64>>) -> usize {
    let n = m.len();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..n).find(|r| m[*r][col] != 0) else { continue };
        m.swap(rank, piv);
        let inv = if m[rank][col] == 1 { 1 } else { 2 };
        for r in 0..n {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col] * inv % 3;
                for c in 0..n {
                    m[r][c] = (m[r][c] + 3 * 3 - f * m[rank][c] % 3) % 3;
                }
            }
        }
        rank += 1;
    }
    rank
}
