use proptest::prelude::*;
use symlen_core::padic::{inv_mod, modulus, precision_for_exponent, AAutMatrix, PrincipalUnit, TruncatedPadic};

fn matrix() -> impl Strategy<Value = AAutMatrix> {
    (prop::sample::select(vec![2u64, 3, 5]), 1u32..4, 0usize..5).prop_flat_map(|(p, n, r)| {
        prop::collection::vec(any::<i32>(), r * r).prop_map(move |raw| {
            let cols: Vec<Vec<i64>> = (0..r)
                .map(|c| {
                    (0..r)
                        .map(|row| {
                            let v = raw[c * r + row] as i64;
                            if row < c {
                                0
                            } else if row == c {
                                v * p as i64 + 1
                            } else {
                                v
                            }
                        })
                        .collect()
                })
                .collect();
            AAutMatrix::from_columns(&cols, p, n).unwrap()
        })
    })
}

fn pair() -> impl Strategy<Value = (AAutMatrix, AAutMatrix)> {
    (matrix(), any::<u64>()).prop_map(|(a, seed)| {
        let r = a.rank();
        let m = a.modulus();
        let mut s = seed;
        let cols: Vec<Vec<i64>> = (0..r)
            .map(|c| {
                (0..r)
                    .map(|row| {
                        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        let v = ((s >> 33) % m) as i64;
                        if row < c {
                            0
                        } else if row == c {
                            v * a.prime() as i64 + 1
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect();
        let b = AAutMatrix::from_columns(&cols, a.prime(), a.precision()).unwrap();
        (a, b)
    })
}

proptest! {
    #[test]
    fn inverse_is_two_sided(a in matrix()) {
        let inv = a.invert().unwrap();
        prop_assert!(inv.is_valid());
        prop_assert!(a.compose(&inv).unwrap().is_identity());
        prop_assert!(inv.compose(&a).unwrap().is_identity());
    }

    #[test]
    fn compose_closed_and_associative((a, b) in pair()) {
        let ab = a.compose(&b).unwrap();
        prop_assert!(ab.is_valid());
        let aab = a.compose(&ab).unwrap();
        let aa_b = a.compose(&a).unwrap().compose(&b).unwrap();
        prop_assert_eq!(aab, aa_b);
    }

    #[test]
    fn blocks_are_multiplicative((a, b) in pair(), k in 0usize..5) {
        let k = k.min(a.rank());
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.project_bar(k).unwrap(), a.project_bar(k).unwrap().compose(&b.project_bar(k).unwrap()).unwrap());
        prop_assert_eq!(ab.restrict_tail(k).unwrap(), a.restrict_tail(k).unwrap().compose(&b.restrict_tail(k).unwrap()).unwrap());
        prop_assert!(a.project_bar(k).unwrap().is_valid());
        prop_assert_eq!(a.restrict_tail(k).unwrap().rank(), a.rank() - k);
    }

    #[test]
    fn truncation_commutes_with_compose((a, b) in pair(), n in 1u32..4) {
        let n = n.min(a.precision());
        let lhs = a.compose(&b).unwrap().truncate(n).unwrap();
        let rhs = a.truncate(n).unwrap().compose(&b.truncate(n).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_inverses(p in prop::sample::select(vec![2u64, 3, 5, 7]), n in 1u32..6, v in any::<i32>()) {
        let x = TruncatedPadic::new(v as i64, p, n).unwrap();
        match x.inverse() {
            Some(y) => {
                prop_assert!(x.is_unit());
                prop_assert_eq!(x.mul(&y).unwrap(), TruncatedPadic::one(p, n).unwrap());
            }
            None => prop_assert!(!x.is_unit()),
        }
        let m = modulus(p, n).unwrap();
        prop_assert_eq!(inv_mod(x.residue(), m).is_some(), x.is_unit());
    }

    #[test]
    fn principal_units_form_a_group(p in prop::sample::select(vec![2u64, 3, 5]), n in 1u32..6, a in any::<i16>(), b in any::<i16>()) {
        let q: i64 = if p == 2 { 4 } else { p as i64 };
        let x = PrincipalUnit::new(1 + q * a as i64, p, n).unwrap();
        let y = PrincipalUnit::new(1 + q * b as i64, p, n).unwrap();
        let xy = x.mul(&y).unwrap();
        prop_assert_eq!(xy.residue() % q as u64 % modulus(p, n).unwrap(), 1 % q as u64 % modulus(p, n).unwrap());
        prop_assert_eq!(x.mul(&x.inverse()).unwrap(), PrincipalUnit::one(p, n).unwrap());
    }

    #[test]
    fn precision_is_minimal(p in prop::sample::select(vec![2u64, 3, 5]), k in 0u32..6) {
        let e = p.pow(k);
        let n = precision_for_exponent(p, e);
        prop_assert!(n >= 1);
        prop_assert!(modulus(p, n).unwrap() >= e);
        if n > 1 {
            prop_assert!(modulus(p, n - 1).unwrap() < e);
        }
    }
}
