use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{FpMatrix, GroupError, DEFAULT_CAP};

const TABLE_LIMIT: usize = 1024;

/// A finite p-group of matrices, enumerated breadth-first from its
/// generators. Elements are referred to by index; the identity is index 0.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    prime: u64,
    elements: Vec<FpMatrix>,
    index: BTreeMap<FpMatrix, usize>,
    generators: Vec<usize>,
    table: Option<Vec<u32>>,
    /// Sorted `(code, index)` pairs, when codes fit in 127 bits.
    codes: Option<Vec<(u128, u32)>>,
    inverses: Vec<u32>,
    orders: Vec<u64>,
    exponent: u64,
}

impl FiniteGroup {
    /// Closure of `gens` (all of the same shape), refusing to grow past `cap` elements.
    pub fn from_generators(gens: &[FpMatrix], identity: FpMatrix, cap: usize) -> Result<Self, GroupError> {
        if let Some(g) = gens.iter().find(|g| !g.same_shape(&identity)) {
            return Err(GroupError::BadMatrix(alloc::format!("generator {} does not match the group shape", g)));
        }
        let prime = identity.prime() as u64;
        let mut elements = vec![identity.clone()];
        let mut index = BTreeMap::new();
        index.insert(identity, 0usize);
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head].clone();
            head += 1;
            for g in gens {
                let y = x.mul(g);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
        }
        let generators = gens.iter().map(|g| index[g]).collect();
        let n = elements.len();
        let inverses = elements.iter().map(|e| index[&e.inverse()] as u32).collect();
        let mut grp = FiniteGroup {
            prime,
            elements,
            index,
            generators,
            table: None,
            codes: None,
            inverses,
            orders: Vec::new(),
            exponent: 1,
        };
        if n <= TABLE_LIMIT {
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = grp.index[&grp.elements[a].mul(&grp.elements[b])] as u32;
                }
            }
            grp.table = Some(t);
        } else if fits_in_code(&grp.elements[0]) {
            let mut codes: Vec<(u128, u32)> = grp.elements.iter().enumerate().map(|(i, e)| (e.code(), i as u32)).collect();
            codes.sort_unstable();
            grp.codes = Some(codes);
        }
        grp.orders = (0..n).map(|a| grp.compute_order(a)).collect();
        grp.exponent = grp.orders.iter().copied().max().unwrap_or(1);
        Ok(grp)
    }

    /// `U_m(F_p)`: all unipotent upper-triangular `(m+1) x (m+1)` matrices.
    pub fn unitriangular(m: usize, p: u64, cap: usize) -> Result<Self, GroupError> {
        if m < 1 {
            return Err(GroupError::BadParameters("U_m needs m >= 1".into()));
        }
        Self::check_prime(p)?;
        Self::check_size(p, m * (m + 1) / 2, cap)?;
        let n = m + 1;
        let gens: Vec<FpMatrix> = (0..m).map(|i| FpMatrix::elementary(n, p as u8, false, i, i + 1)).collect();
        Self::from_generators(&gens, FpMatrix::identity(n, p as u8, false), cap)
    }

    /// `U_m(F_p)` modulo its corner subgroup.
    pub fn bar_unitriangular(m: usize, p: u64, cap: usize) -> Result<Self, GroupError> {
        if m < 2 {
            return Err(GroupError::BadParameters("the quotient of U_m needs m >= 2".into()));
        }
        Self::check_prime(p)?;
        Self::check_size(p, m * (m + 1) / 2 - 1, cap)?;
        let n = m + 1;
        let gens: Vec<FpMatrix> = (0..m).map(|i| FpMatrix::elementary(n, p as u8, true, i, i + 1)).collect();
        Self::from_generators(&gens, FpMatrix::identity(n, p as u8, true), cap)
    }

    /// `Z/p^k`, generated by a unipotent Jordan block of size `p^{k-1} + 1`.
    pub fn cyclic(p: u64, k: u32, cap: usize) -> Result<Self, GroupError> {
        Self::check_prime(p)?;
        Self::check_size(p, k as usize, cap)?;
        if k == 0 {
            return Self::from_generators(&[], FpMatrix::identity(2, p as u8, false), cap);
        }
        let n = (p as usize).pow(k - 1) + 1;
        Self::from_generators(&[FpMatrix::jordan(n, p as u8)], FpMatrix::identity(n, p as u8, false), cap)
    }

    pub fn trivial(p: u64) -> Self {
        Self::from_generators(&[], FpMatrix::identity(2, p as u8, false), DEFAULT_CAP).expect("trivial group")
    }

    fn check_prime(p: u64) -> Result<(), GroupError> {
        if !(2..=251).contains(&p) || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(GroupError::BadParameters(alloc::format!("{} is not a supported prime", p)));
        }
        Ok(())
    }

    fn check_size(p: u64, log: usize, cap: usize) -> Result<(), GroupError> {
        let mut n: u128 = 1;
        for _ in 0..log {
            n *= p as u128;
            if n > cap as u128 {
                return Err(GroupError::CapExceeded { cap });
            }
        }
        Ok(())
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `log_p |G|`.
    pub fn log_order(&self) -> u32 {
        let mut n = self.order();
        let mut k = 0;
        while n > 1 {
            n /= self.prime as usize;
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn element(&self, i: usize) -> &FpMatrix {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[FpMatrix] {
        &self.elements
    }

    pub fn index_of(&self, m: &FpMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.elements.len() + b] as usize,
            None => match &self.codes {
                Some(codes) => {
                    let c = self.elements[a].product_code(&self.elements[b]);
                    let pos = codes.binary_search_by(|(k, _)| k.cmp(&c)).expect("closed under products");
                    codes[pos].1 as usize
                }
                None => self.index[&self.elements[a].mul(&self.elements[b])],
            },
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.orders[a]
    }

    fn compute_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `a^e` for any integer `e`.
    pub fn pow(&self, a: usize, e: i64) -> usize {
        let ord = self.orders[a] as i64;
        let mut e = e.rem_euclid(ord) as u64;
        let mut base = a;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        match &self.table {
            Some(_) => self.mul(a, b) == self.mul(b, a),
            None => self.elements[a].commutes_with(&self.elements[b]),
        }
    }

    /// Elements commuting with every generator.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order()).filter(|x| self.generators.iter().all(|g| self.commute(*x, *g))).collect()
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|a| g.iter().all(|b| self.commute(*a, *b)))
    }
}

fn fits_in_code(identity: &FpMatrix) -> bool {
    let k = FpMatrix::free_entries(identity.size(), identity.is_bar()) as u32;
    let bits_per_digit = u8::BITS - (identity.prime() - 1).leading_zeros();
    k * bits_per_digit <= 127
}

/// A subgroup given by its members (breadth-first order) and generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub generators: Vec<usize>,
    members: Vec<bool>,
}

impl Subgroup {
    pub fn from_elements(g: &FiniteGroup, elements: Vec<usize>, generators: Vec<usize>) -> Self {
        let mut members = vec![false; g.order()];
        for e in &elements {
            members[*e] = true;
        }
        Subgroup { elements, generators, members }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.get(a).copied().unwrap_or(false)
    }

    pub fn is_abelian(&self, g: &FiniteGroup) -> bool {
        let gens = &self.generators;
        gens.iter().all(|a| gens.iter().all(|b| g.commute(*a, *b)))
    }

    pub fn is_closed(&self, g: &FiniteGroup) -> bool {
        self.contains(0)
            && self.elements.iter().all(|a| self.contains(g.inv(*a)) && self.elements.iter().all(|b| self.contains(g.mul(*a, *b))))
    }

    pub fn sorted_elements(&self) -> Vec<usize> {
        let mut v = self.elements.clone();
        v.sort_unstable();
        v
    }
}

/// Smallest subgroup containing `gens`, enumerated breadth-first.
pub fn subgroup_closure(g: &FiniteGroup, gens: &[usize]) -> Subgroup {
    let mut members = vec![false; g.order()];
    let mut elements = vec![0];
    members[0] = true;
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head];
        head += 1;
        for s in gens {
            let y = g.mul(x, *s);
            if !members[y] {
                members[y] = true;
                elements.push(y);
            }
        }
    }
    Subgroup { elements, generators: gens.to_vec(), members }
}

/// Lexicographically smallest `(a_1..a_s)`, `0 <= a_i < ord(gens_i)`, with
/// `prod gens_i^{a_i} = target`; `Ok(None)` if the target is outside the
/// subgroup generated by `gens`.
pub fn abelian_dlog(g: &FiniteGroup, target: usize, gens: &[usize]) -> Result<Option<Vec<u64>>, GroupError> {
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            if !g.commute(*a, *b) {
                return Err(GroupError::NonCommuting(*a, *b));
            }
        }
    }
    // suffix[i] = closure of gens[i..]
    let mut suffix: Vec<Subgroup> = Vec::with_capacity(gens.len() + 1);
    for i in (0..=gens.len()).rev() {
        suffix.push(subgroup_closure(g, &gens[i..]));
    }
    suffix.reverse();
    if !suffix[0].contains(target) {
        return Ok(None);
    }
    let mut rest = target;
    let mut out = Vec::with_capacity(gens.len());
    for (i, s) in gens.iter().enumerate() {
        let inv = g.inv(*s);
        let mut cur = rest;
        let mut found = None;
        for a in 0..g.element_order(*s) {
            if suffix[i + 1].contains(cur) {
                found = Some(a);
                break;
            }
            cur = g.mul(inv, cur);
        }
        let a = found.expect("target lies in the suffix closure");
        out.push(a);
        rest = g.mul(g.pow(*s, -(a as i64)), rest);
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_standard_groups() {
        assert_eq!(FiniteGroup::unitriangular(2, 2, DEFAULT_CAP).unwrap().order(), 8);
        assert_eq!(FiniteGroup::bar_unitriangular(2, 2, DEFAULT_CAP).unwrap().order(), 4);
        assert_eq!(FiniteGroup::unitriangular(3, 2, DEFAULT_CAP).unwrap().order(), 64);
        assert_eq!(FiniteGroup::unitriangular(2, 3, DEFAULT_CAP).unwrap().order(), 27);
        assert_eq!(FiniteGroup::bar_unitriangular(3, 2, DEFAULT_CAP).unwrap().order(), 32);
        for (p, k) in [(2, 1), (2, 2), (2, 3), (3, 2), (5, 1)] {
            let c = FiniteGroup::cyclic(p, k, DEFAULT_CAP).unwrap();
            assert_eq!(c.order() as u64, p.pow(k));
            assert_eq!(c.exponent(), p.pow(k));
        }
    }

    #[test]
    fn bar_u2_is_abelian() {
        for p in [2, 3, 5] {
            let g = FiniteGroup::bar_unitriangular(2, p, DEFAULT_CAP).unwrap();
            assert!((0..g.order()).all(|a| (0..g.order()).all(|b| g.commute(a, b))));
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(FiniteGroup::unitriangular(3, 2, 63), Err(GroupError::CapExceeded { .. })));
        assert!(FiniteGroup::unitriangular(3, 2, 64).is_ok());
        let gens = [FpMatrix::jordan(5, 2)];
        assert!(matches!(
            FiniteGroup::from_generators(&gens, FpMatrix::identity(5, 2, false), 7),
            Err(GroupError::CapExceeded { .. })
        ));
    }

    #[test]
    fn group_axioms_exhaustive() {
        for g in [
            FiniteGroup::unitriangular(2, 2, DEFAULT_CAP).unwrap(),
            FiniteGroup::bar_unitriangular(3, 2, DEFAULT_CAP).unwrap(),
            FiniteGroup::cyclic(3, 2, DEFAULT_CAP).unwrap(),
        ] {
            let n = g.order();
            assert!(n.is_power_of_two() || n == 9);
            for a in 0..n {
                assert_eq!(g.mul(a, 0), a);
                assert_eq!(g.mul(0, a), a);
                assert_eq!(g.mul(a, g.inv(a)), 0);
                for b in 0..n {
                    for c in (0..n).step_by(3) {
                        assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn closure_examples() {
        let g = FiniteGroup::unitriangular(2, 2, DEFAULT_CAP).unwrap();
        assert_eq!(subgroup_closure(&g, &[]).order(), 1);
        let s = subgroup_closure(&g, g.generators());
        assert_eq!(s.order(), 8);
        assert!(!g.commute(g.generators()[0], g.generators()[1]));
        let z4 = FiniteGroup::cyclic(2, 2, DEFAULT_CAP).unwrap();
        assert_eq!(subgroup_closure(&z4, z4.generators()).order(), 4);
        let s = subgroup_closure(&g, &[g.generators()[0]]);
        assert!(s.is_closed(&g));
    }

    #[test]
    fn dlog_examples() {
        let z9 = FiniteGroup::cyclic(3, 2, DEFAULT_CAP).unwrap();
        let x = z9.generators()[0];
        let g3 = z9.pow(x, 3);
        assert_eq!(abelian_dlog(&z9, 0, &[g3]).unwrap(), Some(vec![0]));
        assert_eq!(abelian_dlog(&z9, z9.pow(x, 6), &[g3]).unwrap(), Some(vec![2]));
        assert_eq!(abelian_dlog(&z9, x, &[g3]).unwrap(), None);
        // lexicographically smallest: x^6 = x^0 * (x^3)^2 rather than x^6 * 1
        assert_eq!(abelian_dlog(&z9, z9.pow(x, 6), &[x, g3]).unwrap(), Some(vec![0, 2]));
        let u = FiniteGroup::unitriangular(2, 2, DEFAULT_CAP).unwrap();
        assert!(abelian_dlog(&u, 0, u.generators()).is_err());
    }
}
