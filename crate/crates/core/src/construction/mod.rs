//! Elementary-type constructions: the AST, its text syntax, subconstructions,
//! principal tuples and the presentation of the associated group.
//!
//! Nodes are addressed by [`OccurrencePath`]s from the root, so two equal
//! blocks in different places are never confused.

mod block;
mod parse;
mod tuple;
mod witness;

use alloc::collections::BTreeMap;
use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

pub use block::{parse_local_word, BlockKind, BlockSpec, CupData, LocalWord, Registry};
pub use parse::{parse, ParseError};
pub use tuple::{compatible, principal_tuples, principal_tuples_inductive, restrict_tuple, PrincipalTuple};
pub use witness::{iota, pi, project, subconstructions, Projection, Witness};

use crate::padic::{modulus, reduce_signed, PadicError};
use crate::word::{GenId, Slot, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid block `{id}`: {msg}")]
    InvalidBlock { id: String, msg: String },
    #[error("block `{0}` defined twice")]
    DuplicateBlock(String),
    #[error("malformed word: {0}")]
    BadWord(String),
    #[error("free product operand is the trivial block")]
    TrivialOperand,
    #[error("blocks over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("witness does not fit the construction at {0}")]
    WitnessShape(OccurrencePath),
    #[error("witness keeps a free product with a trivial operand at {0}")]
    WitnessTrivialOperand(OccurrencePath),
    #[error("malformed witness `{0}`")]
    BadWitness(String),
    #[error("principal tuple is not compatible with the witness")]
    Incompatible,
    #[error("path {0} does not address a node of the required kind")]
    BadPath(OccurrencePath),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    L,
    R,
    E,
}

impl Step {
    fn as_char(self) -> char {
        match self {
            Step::L => 'L',
            Step::R => 'R',
            Step::E => 'E',
        }
    }
}

/// Address of an AST node: the steps taken from the root (`L`/`R` into a
/// free product, `E` into the base of an extension). Ordering is preorder,
/// which lists leaves left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccurrencePath(Vec<Step>);

impl OccurrencePath {
    pub fn root() -> Self {
        OccurrencePath(Vec::new())
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn child(&self, s: Step) -> Self {
        let mut v = self.0.clone();
        v.push(s);
        OccurrencePath(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// True if `self` is a proper prefix of `other`.
    pub fn is_strict_ancestor_of(&self, other: &OccurrencePath) -> bool {
        self.0.len() < other.0.len() && other.0.starts_with(&self.0)
    }

    pub fn prefix(&self, len: usize) -> OccurrencePath {
        OccurrencePath(self.0[..len].to_vec())
    }
}

impl From<Vec<Step>> for OccurrencePath {
    fn from(v: Vec<Step>) -> Self {
        OccurrencePath(v)
    }
}

impl fmt::Display for OccurrencePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for OccurrencePath {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                'L' => Ok(Step::L),
                'R' => Ok(Step::R),
                'E' => Ok(Step::E),
                _ => Err(ConstructionError::BadWord(format!("bad path `{}`", s))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(OccurrencePath)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    Leaf(Arc<BlockSpec>),
    FreeProduct(Box<Construction>, Box<Construction>),
    Extension(Box<Construction>),
}

/// A generator of `G(c)` with its origin and theta value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub id: GenId,
    /// Local name inside the block, or `z` for an extension generator.
    pub name: String,
    pub theta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationOrigin {
    Block { leaf: OccurrencePath, index: usize },
    Conjugation { ext: OccurrencePath, by: GenId },
}

/// A defining relation `lhs = rhs` of `G(c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub origin: RelationOrigin,
    pub lhs: Word,
    pub rhs: Word,
}

impl fmt::Display for RelationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl Construction {
    pub fn leaf(b: BlockSpec) -> Self {
        Construction::Leaf(Arc::new(b))
    }

    pub fn free_product(a: Construction, b: Construction) -> Result<Self, ConstructionError> {
        if a.is_trivial_leaf() || b.is_trivial_leaf() {
            return Err(ConstructionError::TrivialOperand);
        }
        if a.prime() != b.prime() {
            return Err(ConstructionError::PrimeMismatch(a.prime(), b.prime()));
        }
        Ok(Construction::FreeProduct(Box::new(a), Box::new(b)))
    }

    pub fn extension(base: Construction) -> Self {
        Construction::Extension(Box::new(base))
    }

    pub fn is_trivial_leaf(&self) -> bool {
        matches!(self, Construction::Leaf(b) if b.is_trivial())
    }

    pub fn prime(&self) -> u64 {
        match self {
            Construction::Leaf(b) => b.prime,
            Construction::FreeProduct(a, _) => a.prime(),
            Construction::Extension(c) => c.prime(),
        }
    }

    pub fn node(&self, path: &OccurrencePath) -> Option<&Construction> {
        let mut cur = self;
        for s in path.steps() {
            cur = match (cur, s) {
                (Construction::FreeProduct(a, _), Step::L) => a,
                (Construction::FreeProduct(_, b), Step::R) => b,
                (Construction::Extension(c), Step::E) => c,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// All nodes in preorder with their paths.
    pub fn nodes(&self) -> Vec<(OccurrencePath, &Construction)> {
        fn go<'a>(c: &'a Construction, path: OccurrencePath, out: &mut Vec<(OccurrencePath, &'a Construction)>) {
            out.push((path.clone(), c));
            match c {
                Construction::Leaf(_) => {}
                Construction::FreeProduct(a, b) => {
                    go(a, path.child(Step::L), out);
                    go(b, path.child(Step::R), out);
                }
                Construction::Extension(base) => go(base, path.child(Step::E), out),
            }
        }
        let mut out = Vec::new();
        go(self, OccurrencePath::root(), &mut out);
        out
    }

    pub fn leaf_paths(&self) -> Vec<OccurrencePath> {
        self.nodes()
            .into_iter()
            .filter(|(_, c)| matches!(c, Construction::Leaf(_)))
            .map(|(p, _)| p)
            .collect()
    }

    pub fn extension_paths(&self) -> Vec<OccurrencePath> {
        self.nodes()
            .into_iter()
            .filter(|(_, c)| matches!(c, Construction::Extension(_)))
            .map(|(p, _)| p)
            .collect()
    }

    pub fn extension_count(&self) -> usize {
        self.extension_paths().len()
    }

    /// Leaves used, deduplicated by block id.
    pub fn blocks(&self) -> Vec<Arc<BlockSpec>> {
        let mut seen: BTreeMap<String, Arc<BlockSpec>> = BTreeMap::new();
        for (_, c) in self.nodes() {
            if let Construction::Leaf(b) = c {
                seen.entry(b.id.clone()).or_insert_with(|| b.clone());
            }
        }
        seen.into_values().collect()
    }

    /// Maximum over leaves of the number of extension ancestors.
    pub fn extension_rank(&self) -> usize {
        self.leaf_paths()
            .iter()
            .map(|p| p.steps().iter().filter(|s| **s == Step::E).count())
            .max()
            .unwrap_or(0)
    }

    /// Extension rank by structural recursion: 0 at a leaf, max over a free
    /// product, plus one through an extension.
    pub fn extension_rank_recursive(&self) -> usize {
        match self {
            Construction::Leaf(_) => 0,
            Construction::FreeProduct(a, b) => a.extension_rank_recursive().max(b.extension_rank_recursive()),
            Construction::Extension(c) => c.extension_rank_recursive() + 1,
        }
    }

    /// Generators in canonical order: a base before its extension generator,
    /// left factor before right.
    pub fn generators(&self) -> Vec<Generator> {
        fn go(c: &Construction, path: OccurrencePath, out: &mut Vec<Generator>) {
            match c {
                Construction::Leaf(b) => {
                    for (i, (name, theta)) in b.generator_names().into_iter().zip(b.thetas()).enumerate() {
                        out.push(Generator { id: GenId::block(path.clone(), i), name, theta });
                    }
                }
                Construction::FreeProduct(a, b) => {
                    go(a, path.child(Step::L), out);
                    go(b, path.child(Step::R), out);
                }
                Construction::Extension(base) => {
                    go(base, path.child(Step::E), out);
                    out.push(Generator { id: GenId::ext(path), name: "z".to_string(), theta: 1 });
                }
            }
        }
        let mut out = Vec::new();
        go(self, OccurrencePath::root(), &mut out);
        out
    }

    pub fn generator_ids(&self) -> Vec<GenId> {
        self.generators().into_iter().map(|g| g.id).collect()
    }

    pub fn theta_table(&self) -> BTreeMap<GenId, i64> {
        self.generators().into_iter().map(|g| (g.id, g.theta)).collect()
    }

    /// Whether `g` is a generator of this construction.
    pub fn has_generator(&self, g: &GenId) -> bool {
        match (self.node(&g.path), g.slot) {
            (Some(Construction::Leaf(b)), Slot::Block(i)) => i < b.generator_count(),
            (Some(Construction::Extension(_)), Slot::Ext) => true,
            _ => false,
        }
    }

    /// Block relations and the conjugation relations `g z g^-1 = z^theta(g)`
    /// of every extension node, with theta read modulo `p^precision`.
    pub fn relations(&self, precision: u32) -> Result<Vec<RelationCheck>, ConstructionError> {
        let m = modulus(self.prime(), precision)?;
        let mut out = Vec::new();
        let gens = self.generators();
        for (path, node) in self.nodes() {
            match node {
                Construction::Leaf(b) => {
                    for (index, rel) in b.relations().into_iter().enumerate() {
                        let lhs = Word::from_letters(rel.iter().map(|(i, e)| (GenId::block(path.clone(), *i), *e)));
                        out.push(RelationCheck {
                            origin: RelationOrigin::Block { leaf: path.clone(), index },
                            lhs,
                            rhs: Word::identity(),
                        });
                    }
                }
                Construction::Extension(_) => {
                    let z = GenId::ext(path.clone());
                    for g in gens.iter().filter(|g| path.is_strict_ancestor_of(&g.id.path)) {
                        let lhs = Word::from_letters([(g.id.clone(), 1), (z.clone(), 1), (g.id.clone(), -1)]);
                        let rhs = Word::power(z.clone(), reduce_signed(g.theta, m) as i64);
                        out.push(RelationCheck {
                            origin: RelationOrigin::Conjugation { ext: path.clone(), by: g.id.clone() },
                            lhs,
                            rhs,
                        });
                    }
                }
                Construction::FreeProduct(..) => {}
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Leaf(b) => write!(f, "{}", b.id),
            Construction::FreeProduct(a, b) => write!(f, "({} * {})", a, b),
            Construction::Extension(c) => write!(f, "<{}>", c),
        }
    }
}
