use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::ConstructionError;
use crate::padic::{inv_mod, modulus, reduce_signed};

/// A word in the generators of one block, as `(local index, exponent)` letters.
pub type LocalWord = Vec<(usize, i64)>;

/// Degree-1/degree-2 cohomology data supplied for a custom block:
/// `cup[i][j]` is a vector of length `d2` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CupData {
    pub d1: usize,
    pub d2: usize,
    pub cup: Vec<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockKind {
    Trivial,
    FreeProCyclic {
        theta: i64,
    },
    /// One-relator group on `x1..xd`.
    Demushkin {
        d: usize,
        relation: LocalWord,
        theta: Vec<i64>,
    },
    /// `Z/2` with `theta(e) = -1`; only for `p = 2`.
    SignOfOrderTwo,
    Custom {
        generators: Vec<String>,
        relations: Vec<LocalWord>,
        theta: Vec<i64>,
        /// `bounds[m-1]` is `M_m`; `None` means infinite. Degrees past the end are undeclared.
        bounds: Vec<Option<u64>>,
        ring: Option<CupData>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec {
    pub id: String,
    pub prime: u64,
    pub kind: BlockKind,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Largest `k` with `p^k < 2^40`: theta values that are only defined
/// p-adically are stored reduced modulo this power.
fn storage_modulus(p: u64) -> u64 {
    let mut m = p;
    while m * p < (1 << 40) {
        m *= p;
    }
    m
}

impl BlockSpec {
    pub fn new(id: impl Into<String>, prime: u64, kind: BlockKind) -> Result<Self, ConstructionError> {
        let b = BlockSpec { id: id.into(), prime, kind };
        b.validate()?;
        Ok(b)
    }

    pub fn trivial(id: &str, p: u64) -> Self {
        BlockSpec { id: id.to_string(), prime: p, kind: BlockKind::Trivial }
    }

    pub fn free_pro_cyclic(id: &str, p: u64, theta: i64) -> Result<Self, ConstructionError> {
        Self::new(id, p, BlockKind::FreeProCyclic { theta })
    }

    pub fn sign(id: &str) -> Self {
        BlockSpec { id: id.to_string(), prime: 2, kind: BlockKind::SignOfOrderTwo }
    }

    /// Two-generator Demushkin block with relation `x1^q [x1, x2] = 1`
    /// (`q = p` for odd `p`, `q = 4` for `p = 2`), `theta(x1) = 1` and
    /// `theta(x2) = (1 - q)^{-1}`.
    pub fn demushkin2(id: &str, p: u64) -> Self {
        let q: i64 = if p == 2 { 4 } else { p as i64 };
        let m = storage_modulus(p);
        let t2 = inv_mod(reduce_signed(1 - q, m), m).expect("1 - q is a unit") as i64;
        let relation = alloc::vec![(0, q), (0, -1), (1, -1), (0, 1), (1, 1)];
        BlockSpec {
            id: id.to_string(),
            prime: p,
            kind: BlockKind::Demushkin { d: 2, relation, theta: alloc::vec![1, t2] },
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.kind, BlockKind::Trivial)
    }

    pub fn generator_count(&self) -> usize {
        match &self.kind {
            BlockKind::Trivial => 0,
            BlockKind::FreeProCyclic { .. } | BlockKind::SignOfOrderTwo => 1,
            BlockKind::Demushkin { d, .. } => *d,
            BlockKind::Custom { generators, .. } => generators.len(),
        }
    }

    pub fn generator_names(&self) -> Vec<String> {
        match &self.kind {
            BlockKind::Trivial => Vec::new(),
            BlockKind::FreeProCyclic { .. } => alloc::vec!["x".to_string()],
            BlockKind::SignOfOrderTwo => alloc::vec!["e".to_string()],
            BlockKind::Demushkin { d, .. } => (1..=*d).map(|i| format!("x{}", i)).collect(),
            BlockKind::Custom { generators, .. } => generators.clone(),
        }
    }

    /// Theta value of each generator as an integer, to be read mod `p^N`.
    pub fn thetas(&self) -> Vec<i64> {
        match &self.kind {
            BlockKind::Trivial => Vec::new(),
            BlockKind::FreeProCyclic { theta } => alloc::vec![*theta],
            BlockKind::SignOfOrderTwo => alloc::vec![-1],
            BlockKind::Demushkin { theta, .. } | BlockKind::Custom { theta, .. } => theta.clone(),
        }
    }

    pub fn relations(&self) -> Vec<LocalWord> {
        match &self.kind {
            BlockKind::Trivial | BlockKind::FreeProCyclic { .. } => Vec::new(),
            BlockKind::SignOfOrderTwo => alloc::vec![alloc::vec![(0, 2)]],
            BlockKind::Demushkin { relation, .. } => alloc::vec![relation.clone()],
            BlockKind::Custom { relations, .. } => relations.clone(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            BlockKind::Trivial => "trivial",
            BlockKind::FreeProCyclic { .. } => "free_pro_cyclic",
            BlockKind::Demushkin { .. } => "demushkin",
            BlockKind::SignOfOrderTwo => "sign",
            BlockKind::Custom { .. } => "custom",
        }
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        let bad = |msg: String| Err(ConstructionError::InvalidBlock { id: self.id.clone(), msg });
        if !is_prime(self.prime) {
            return bad(format!("{} is not prime", self.prime));
        }
        let n = self.generator_count();
        let thetas = self.thetas();
        if thetas.len() != n {
            return bad(format!("{} theta values for {} generators", thetas.len(), n));
        }
        for t in &thetas {
            if reduce_signed(*t, self.prime) != 1 {
                return bad(format!("theta value {} is not 1 mod {}", t, self.prime));
            }
        }
        if matches!(self.kind, BlockKind::SignOfOrderTwo) && self.prime != 2 {
            return bad("sign block requires p = 2".to_string());
        }
        for rel in self.relations() {
            if let Some((i, _)) = rel.iter().find(|(i, _)| *i >= n) {
                return bad(format!("relation uses generator index {} of {}", i, n));
            }
        }
        if let BlockKind::Demushkin { d, .. } = self.kind {
            if d == 0 {
                return bad("demushkin block needs at least one generator".to_string());
            }
        }
        if let BlockKind::Custom { ring: Some(r), .. } = &self.kind {
            let shape_ok = r.cup.len() == r.d1
                && r.cup.iter().all(|row| row.len() == r.d1 && row.iter().all(|v| v.len() == r.d2));
            if !shape_ok {
                return bad("cup table shape does not match d1 x d1 x d2".to_string());
            }
        }
        Ok(())
    }

    /// Theta values reduced into `[0, p^N)`.
    pub fn thetas_mod(&self, precision: u32) -> Result<Vec<u64>, ConstructionError> {
        let m = modulus(self.prime, precision).map_err(ConstructionError::Padic)?;
        Ok(self.thetas().iter().map(|t| reduce_signed(*t, m)).collect())
    }
}

/// Parse a word such as `x1^3 x2^-1 x1` over the given local generator names.
pub fn parse_local_word(text: &str, names: &[String]) -> Result<LocalWord, ConstructionError> {
    let mut out = Vec::new();
    let text = text.trim();
    if text == "1" || text.is_empty() {
        return Ok(out);
    }
    for tok in text.split_whitespace() {
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<i64>()
                    .map_err(|_| ConstructionError::BadWord(text.to_string()))?,
            ),
            None => (tok, 1),
        };
        let idx = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| ConstructionError::BadWord(format!("unknown generator `{}` in `{}`", name, text)))?;
        out.push((idx, exp));
    }
    Ok(out)
}

/// Named building blocks that construction text refers to.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    blocks: BTreeMap<String, Arc<BlockSpec>>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, block: BlockSpec) -> Result<(), ConstructionError> {
        block.validate()?;
        if self.blocks.contains_key(&block.id) {
            return Err(ConstructionError::DuplicateBlock(block.id));
        }
        self.blocks.insert(block.id.clone(), Arc::new(block));
        Ok(())
    }

    pub fn with(mut self, block: BlockSpec) -> Self {
        self.insert(block).expect("valid block");
        self
    }

    pub fn get(&self, id: &str) -> Option<&Arc<BlockSpec>> {
        self.blocks.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<BlockSpec>> {
        self.blocks.values()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}
