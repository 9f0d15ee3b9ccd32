//! Symbol-length bound calculus: per-degree block suprema `M_m`, the
//! function `f(e, m)`, and the bounds derived from it.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;

use thiserror::Error;

use crate::construction::{BlockKind, BlockSpec, Construction};
use crate::fpgroup::{l_value, FiniteGroup, GroupError, DEFAULT_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("the sign block exists only for p = 2 (got p = {0})")]
    SignWithOddPrime(u64),
    #[error("block `{block}` declares no bound in degree {m}")]
    UndeclaredDegree { block: String, m: usize },
    #[error("block `{block}` has M_{m} = {value}, above the table entry {table}")]
    TableMismatch { block: String, m: usize, value: BoundValue, table: BoundValue },
    #[error("table entry M_{0} is infinite")]
    InfiniteEntry(usize),
    #[error("degree must be at least {min} (got {got})")]
    BadDegree { min: usize, got: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A nonnegative integer or infinity; infinity absorbs addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundValue {
    Finite(u64),
    Infinite,
}

impl BoundValue {
    pub fn finite(&self) -> Option<u64> {
        match self {
            BoundValue::Finite(v) => Some(*v),
            BoundValue::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        *self == BoundValue::Infinite
    }

    pub fn scale(self, k: u64) -> BoundValue {
        match self {
            BoundValue::Finite(v) => BoundValue::Finite(v.saturating_mul(k)),
            BoundValue::Infinite => BoundValue::Infinite,
        }
    }
}

impl Add for BoundValue {
    type Output = BoundValue;

    fn add(self, rhs: BoundValue) -> BoundValue {
        match (self, rhs) {
            (BoundValue::Finite(a), BoundValue::Finite(b)) => BoundValue::Finite(a.saturating_add(b)),
            _ => BoundValue::Infinite,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Finite(v) => write!(f, "{}", v),
            BoundValue::Infinite => write!(f, "inf"),
        }
    }
}

/// Values `M_1, M_2, ...` with a constant tail; `M_0 = 0` by convention.
/// `M_1` is raised to at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundTable {
    values: Vec<BoundValue>,
    tail: BoundValue,
    clamped: bool,
}

impl BoundTable {
    /// `values[i]` is `M_{i+1}`; degrees past the end take `tail`.
    pub fn new(values: Vec<BoundValue>, tail: BoundValue) -> Self {
        let mut values = values;
        if values.is_empty() {
            values.push(tail);
        }
        let clamped = values[0] < BoundValue::Finite(1);
        if clamped {
            values[0] = BoundValue::Finite(1);
        }
        BoundTable { values, tail, clamped }
    }

    pub fn from_finite(values: &[u64], tail: u64) -> Self {
        Self::new(values.iter().map(|v| BoundValue::Finite(*v)).collect(), BoundValue::Finite(tail))
    }

    /// Table of the standard blocks: trivial, free pro-cyclic and Demushkin,
    /// plus the sign block when requested (`p = 2` only).
    pub fn standard(p: u64, include_sign: bool) -> Result<Self, BoundsError> {
        if include_sign && p != 2 {
            return Err(BoundsError::SignWithOddPrime(p));
        }
        Ok(if include_sign {
            Self::from_finite(&[1, 1], 1)
        } else {
            Self::from_finite(&[1, 1], 0)
        })
    }

    /// Pointwise supremum of the rows of `blocks` in degrees `1..=max_degree`,
    /// with tail 0. Custom blocks must declare every one of these degrees.
    pub fn for_blocks(blocks: &[Arc<BlockSpec>], max_degree: usize) -> Result<Self, BoundsError> {
        let mut values = vec![BoundValue::Finite(0); max_degree.max(1)];
        for b in blocks {
            for (i, slot) in values.iter_mut().enumerate() {
                *slot = (*slot).max(block_bound(b, i + 1)?);
            }
        }
        Ok(Self::new(values, BoundValue::Finite(0)))
    }

    pub fn get(&self, m: usize) -> BoundValue {
        if m == 0 {
            return BoundValue::Finite(0);
        }
        self.values.get(m - 1).copied().unwrap_or(self.tail)
    }

    pub fn clamped(&self) -> bool {
        self.clamped
    }

    /// Explicit entries `M_1..M_k` (not including the tail).
    pub fn entries(&self) -> &[BoundValue] {
        &self.values
    }

    pub fn tail(&self) -> BoundValue {
        self.tail
    }

    /// Reject a table that is smaller than some block's own value.
    pub fn check_covers(&self, blocks: &[Arc<BlockSpec>], max_degree: usize) -> Result<(), BoundsError> {
        for b in blocks {
            for m in 1..=max_degree {
                let value = block_bound(b, m)?;
                let table = self.get(m);
                if value > table {
                    return Err(BoundsError::TableMismatch { block: b.id.clone(), m, value, table });
                }
            }
        }
        Ok(())
    }
}

/// `M_m(B)`: the largest symbol length in `H^m` of one block.
pub fn block_bound(b: &BlockSpec, m: usize) -> Result<BoundValue, BoundsError> {
    let f = BoundValue::Finite;
    Ok(match &b.kind {
        _ if m == 0 => f(0),
        BlockKind::Trivial => f(0),
        BlockKind::FreeProCyclic { .. } => f(u64::from(m == 1)),
        BlockKind::Demushkin { .. } => f(u64::from(m <= 2)),
        BlockKind::SignOfOrderTwo => f(1),
        BlockKind::Custom { bounds, .. } => match bounds.get(m - 1) {
            Some(Some(v)) => f(*v),
            Some(None) => BoundValue::Infinite,
            None => return Err(BoundsError::UndeclaredDegree { block: b.id.clone(), m }),
        },
    })
}

/// `f(e, m)` by the recursion `f(0, m) = M_m`, `f(e, 0) = 0`,
/// `f(e, m) = f(e-1, m) + f(e-1, m-1)`.
pub fn f_recursive(e: usize, m: usize, table: &BoundTable) -> BoundValue {
    // row[j] = f(current e, j) for j <= m
    let mut row: Vec<BoundValue> = (0..=m).map(|j| table.get(j)).collect();
    for _ in 0..e {
        let mut next = row.clone();
        next[0] = BoundValue::Finite(0);
        for j in 1..=m {
            next[j] = row[j] + row[j - 1];
        }
        row = next;
    }
    if e > 0 {
        row[0] = BoundValue::Finite(0);
    }
    row[m]
}

fn binomial(n: usize, k: usize) -> u64 {
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    acc
}

/// `f(e, m) = sum_{k=0}^{min(e,m)} binom(e, k) M_{m-k}`.
pub fn f_closed(e: usize, m: usize, table: &BoundTable) -> BoundValue {
    (0..=e.min(m)).fold(BoundValue::Finite(0), |acc, k| acc + table.get(m - k).scale(binomial(e, k)))
}

pub fn f(e: usize, m: usize, table: &BoundTable) -> BoundValue {
    f_recursive(e, m, table)
}

/// `f(e(c), m)`, after checking that the table covers every block of `c`.
pub fn construction_bound(c: &Construction, m: usize, table: &BoundTable) -> Result<BoundValue, BoundsError> {
    table.check_covers(&c.blocks(), m)?;
    Ok(f(c.extension_rank(), m, table))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformBound {
    pub l: u32,
    pub value: u64,
}

/// `f(l(G), n)`, with `l` computed by exhaustive search unless supplied.
pub fn uniform_bound(g: &FiniteGroup, n: usize, table: &BoundTable, l_override: Option<u32>) -> Result<UniformBound, BoundsError> {
    if n < 2 {
        return Err(BoundsError::BadDegree { min: 2, got: n });
    }
    if let Some(m) = (2..=n).find(|m| table.get(*m).is_infinite()) {
        return Err(BoundsError::InfiniteEntry(m));
    }
    let l = l_override.unwrap_or_else(|| l_value(g));
    let value = f(l as usize, n, table).finite().expect("finite entries give a finite value");
    Ok(UniformBound { l, value })
}

/// `floor(m^2/4) + m - 1`, the analytic bound on `l` of the corner quotient of `U_m`.
pub fn bar_l_bound(m: usize) -> u64 {
    (m * m / 4 + m - 1) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MasseyMode {
    /// `1 + l(U_m / corner)` by exhaustive search.
    ExactL,
    /// `floor(m^2/4) + m`.
    Analytic,
}

/// Bound on the symbol length of pulled-back Massey classes `rho^*(omega_m)`.
pub fn massey_symbol_bound(m: usize, p: u64, mode: MasseyMode, cap: Option<usize>) -> Result<u64, BoundsError> {
    if m < 2 {
        return Err(BoundsError::BadDegree { min: 2, got: m });
    }
    match mode {
        MasseyMode::Analytic => Ok(bar_l_bound(m) + 1),
        MasseyMode::ExactL => {
            let g = FiniteGroup::bar_unitriangular(m, p, cap.unwrap_or(DEFAULT_CAP))?;
            Ok(1 + l_value(&g) as u64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{parse, Registry};

    #[test]
    fn standard_tables() {
        let t = BoundTable::standard(3, false).unwrap();
        assert_eq!((1..6).map(|m| t.get(m)).collect::<Vec<_>>(), [1, 1, 0, 0, 0].map(BoundValue::Finite));
        let t = BoundTable::standard(2, true).unwrap();
        assert!((1..10).all(|m| t.get(m) == BoundValue::Finite(1)));
        assert!(BoundTable::standard(3, true).is_err());
        let trivial = BoundTable::for_blocks(&[Arc::new(BlockSpec::trivial("T", 3))], 4).unwrap();
        assert!(trivial.clamped());
        assert_eq!((1..5).map(|m| trivial.get(m)).collect::<Vec<_>>(), [1, 0, 0, 0].map(BoundValue::Finite));
    }

    #[test]
    fn class_table_matches_standard() {
        let blocks = [
            Arc::new(BlockSpec::trivial("T", 3)),
            Arc::new(BlockSpec::free_pro_cyclic("C", 3, 4).unwrap()),
            Arc::new(BlockSpec::demushkin2("D", 3)),
        ];
        let t = BoundTable::for_blocks(&blocks, 6).unwrap();
        let s = BoundTable::standard(3, false).unwrap();
        assert!((0..8).all(|m| t.get(m) == s.get(m)));
        assert!(!t.clamped());
    }

    #[test]
    fn f_examples() {
        let t = BoundTable::standard(3, false).unwrap();
        for e in 0..10 {
            assert_eq!(f(e, 2, &t), BoundValue::Finite(1 + e as u64));
            assert_eq!(f(e, 0, &t), BoundValue::Finite(0));
            if e >= 1 {
                assert_eq!(f(e, 1, &t), t.get(1));
            }
        }
        assert_eq!(f(3, 2, &t), BoundValue::Finite(4));
        assert_eq!(f(0, 5, &t), t.get(5));
    }

    #[test]
    fn infinity_absorbs() {
        let t = BoundTable::new(vec![BoundValue::Finite(1), BoundValue::Infinite], BoundValue::Finite(0));
        assert_eq!(f(0, 1, &t), BoundValue::Finite(1));
        assert_eq!(f(1, 2, &t), BoundValue::Infinite);
        assert_eq!(f_closed(1, 2, &t), BoundValue::Infinite);
        assert_eq!(f(3, 3, &t), BoundValue::Infinite);
        let g = FiniteGroup::cyclic(3, 1, DEFAULT_CAP).unwrap();
        assert_eq!(uniform_bound(&g, 2, &t, None), Err(BoundsError::InfiniteEntry(2)));
    }

    #[test]
    fn construction_bounds() {
        let r = Registry::new().with(BlockSpec::demushkin2("D", 3)).with(BlockSpec::free_pro_cyclic("C", 3, 1).unwrap());
        let t = BoundTable::standard(3, false).unwrap();
        let leaf = parse("D", &r).unwrap();
        assert_eq!(construction_bound(&leaf, 2, &t).unwrap(), BoundValue::Finite(1));
        let c = parse("<(<D> * C)>", &r).unwrap();
        assert_eq!(construction_bound(&c, 2, &t).unwrap(), BoundValue::Finite(3));
        assert_eq!(construction_bound(&c, 0, &t).unwrap(), BoundValue::Finite(0));
        let too_small = BoundTable::from_finite(&[1, 0], 0);
        assert!(matches!(construction_bound(&c, 2, &too_small), Err(BoundsError::TableMismatch { .. })));
    }

    #[test]
    fn custom_blocks_need_declared_degrees() {
        let b = BlockSpec::new(
            "X",
            3,
            BlockKind::Custom {
                generators: vec!["a".into()],
                relations: Vec::new(),
                theta: vec![1],
                bounds: vec![Some(1), None],
                ring: None,
            },
        )
        .unwrap();
        assert_eq!(block_bound(&b, 1).unwrap(), BoundValue::Finite(1));
        assert_eq!(block_bound(&b, 2).unwrap(), BoundValue::Infinite);
        assert!(matches!(block_bound(&b, 3), Err(BoundsError::UndeclaredDegree { .. })));
    }

    #[test]
    fn uniform_examples() {
        let t = BoundTable::standard(3, false).unwrap();
        let zp = FiniteGroup::cyclic(3, 1, DEFAULT_CAP).unwrap();
        assert_eq!(uniform_bound(&zp, 2, &t, None).unwrap(), UniformBound { l: 1, value: 2 });
        let u2 = FiniteGroup::unitriangular(2, 3, DEFAULT_CAP).unwrap();
        assert_eq!(uniform_bound(&u2, 2, &t, None).unwrap(), UniformBound { l: 2, value: 3 });
        assert_eq!(uniform_bound(&u2, 2, &t, Some(5)).unwrap().value, 6);
        assert!(uniform_bound(&u2, 1, &t, None).is_err());
    }

    #[test]
    fn massey_examples() {
        assert_eq!(massey_symbol_bound(3, 2, MasseyMode::Analytic, None).unwrap(), 5);
        assert_eq!(massey_symbol_bound(4, 2, MasseyMode::Analytic, None).unwrap(), 8);
        assert_eq!(massey_symbol_bound(2, 2, MasseyMode::ExactL, None).unwrap(), 3);
        assert_eq!(massey_symbol_bound(2, 2, MasseyMode::Analytic, None).unwrap(), 3);
        assert!(massey_symbol_bound(1, 2, MasseyMode::Analytic, None).is_err());
        assert!(massey_symbol_bound(5, 3, MasseyMode::ExactL, Some(1000)).is_err());
    }
}
