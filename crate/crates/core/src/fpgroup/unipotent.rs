use alloc::vec::Vec;

use super::{FiniteGroup, FpMatrix, GroupError};

/// The elementary abelian subgroup `[[I_r, M], [0, I_{m+1-r}]]` of
/// `U_m(F_p)` with `r = floor((m+1)/2)`, of order `p^{floor((m+1)^2/4)}`.
pub fn corner_block_subgroup(m: usize, p: u64, cap: usize) -> Result<FiniteGroup, GroupError> {
    if m < 1 {
        return Err(GroupError::BadParameters("m must be at least 1".into()));
    }
    let n = m + 1;
    let r = n / 2;
    let gens: Vec<FpMatrix> = (0..r)
        .flat_map(|i| (r..n).map(move |j| (i, j)))
        .map(|(i, j)| FpMatrix::elementary(n, p as u8, false, i, j))
        .collect();
    FiniteGroup::from_generators(&gens, FpMatrix::identity(n, p as u8, false), cap)
}

/// `floor((m+1)^2 / 4)`: `log_p` of the largest abelian subgroup of `U_m(F_p)`.
pub fn max_abelian_log_order(m: usize) -> usize {
    (m + 1) * (m + 1) / 4
}

/// The 2-cocycle of the zero-fill section of `U_m -> U_m / corner`:
/// `c(x, y) = sum_{j=2}^{m} x_{1,j} y_{j,m+1}` (1-based), so that
/// `s(x) s(y) = (I + c(x,y) E_{1,m+1}) s(xy)`.
pub fn massey_cocycle(x: &FpMatrix, y: &FpMatrix) -> Result<u8, GroupError> {
    if !x.is_bar() || !x.same_shape(y) {
        return Err(GroupError::BadMatrix("cocycle arguments must be elements of the same quotient group".into()));
    }
    let n = x.size();
    let p = x.prime() as u32;
    let mut acc = 0u32;
    for j in 1..n - 1 {
        acc += x.get(0, j) as u32 * y.get(j, n - 1) as u32;
    }
    Ok((acc % p) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::{max_abelian_order, DEFAULT_CAP};

    #[test]
    fn witness_orders() {
        for (m, p, log) in [(1, 2, 1), (1, 3, 1), (2, 3, 2), (3, 2, 4), (4, 2, 6)] {
            let w = corner_block_subgroup(m, p, DEFAULT_CAP).unwrap();
            assert_eq!(max_abelian_log_order(m), log);
            assert_eq!(w.order(), (p as usize).pow(log as u32));
            assert!(w.is_abelian());
            assert!(w.exponent() == p);
        }
    }

    #[test]
    fn witness_shape() {
        let w = corner_block_subgroup(3, 2, DEFAULT_CAP).unwrap();
        for e in w.elements() {
            for i in 0..4 {
                for j in i + 1..4 {
                    if !(i < 2 && j >= 2) {
                        assert_eq!(e.get(i, j), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn u1_is_its_own_witness() {
        let u1 = FiniteGroup::unitriangular(1, 3, DEFAULT_CAP).unwrap();
        assert_eq!(max_abelian_order(&u1).0, 3);
        assert_eq!(corner_block_subgroup(1, 3, DEFAULT_CAP).unwrap().order(), 3);
    }

    #[test]
    fn cocycle_matches_section_defect() {
        let g = FiniteGroup::bar_unitriangular(2, 2, DEFAULT_CAP).unwrap();
        let n = 3;
        for x in g.elements() {
            assert_eq!(massey_cocycle(&FpMatrix::identity(n, 2, true), x).unwrap(), 0);
            for y in g.elements() {
                let c = massey_cocycle(x, y).unwrap();
                let lifted = x.lift().mul(&y.lift());
                assert_eq!(lifted.get(0, n - 1), c);
                assert_eq!(lifted.project(), x.mul(y));
            }
        }
        let x = FpMatrix::elementary(3, 2, true, 0, 1);
        let y = FpMatrix::elementary(3, 2, true, 1, 2);
        assert_eq!(massey_cocycle(&x, &y).unwrap(), 1);
        assert_eq!(massey_cocycle(&y, &x).unwrap(), 0);
    }

    #[test]
    fn cocycle_identity_on_small_quotient() {
        let g = FiniteGroup::bar_unitriangular(2, 2, DEFAULT_CAP).unwrap();
        let e = g.elements();
        for x in e {
            for y in e {
                for z in e {
                    let lhs = (massey_cocycle(x, y).unwrap() + massey_cocycle(&x.mul(y), z).unwrap()) % 2;
                    let rhs = (massey_cocycle(y, z).unwrap() + massey_cocycle(x, &y.mul(z)).unwrap()) % 2;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn cocycle_rejects_full_matrices() {
        let x = FpMatrix::identity(3, 2, false);
        assert!(massey_cocycle(&x, &x).is_err());
    }
}
