//! Generator identifiers, words in generators, and generator-to-word tables.
//!
//! Words are never compared as elements of the (infinite) group of a
//! construction; identities are checked after evaluation in a finite target
//! or, for words inside the abelian subgroup `A` of a principal tuple, via
//! their exponent vectors.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::construction::{Construction, OccurrencePath};
use crate::padic::reduce_signed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("malformed generator id `{0}`")]
    BadGenerator(String),
    #[error("malformed word `{0}`")]
    BadWord(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("generator {gen}: theta of image is {image}, expected {expected}")]
    ThetaMismatch { gen: String, image: u64, expected: u64 },
    #[error("{0}")]
    Hypothesis(String),
}

/// Which generator of a node: the `i`-th generator of a building block
/// (at a leaf), or the distinguished generator of an extension node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Block(usize),
    Ext,
}

/// Generator of `G(c)`, addressed by the AST node it comes from.
///
/// Rendered as `g<i>@<path>` for block generators and `z@<path>` for
/// extension generators, with the path written over `L`, `R`, `E`
/// (the root path is empty, so the outermost extension generator is `z@`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId {
    pub path: OccurrencePath,
    pub slot: Slot,
}

impl GenId {
    pub fn block(path: OccurrencePath, index: usize) -> Self {
        GenId { path, slot: Slot::Block(index) }
    }

    pub fn ext(path: OccurrencePath) -> Self {
        GenId { path, slot: Slot::Ext }
    }

    pub fn is_ext(&self) -> bool {
        self.slot == Slot::Ext
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slot {
            Slot::Block(i) => write!(f, "g{}@{}", i, self.path),
            Slot::Ext => write!(f, "z@{}", self.path),
        }
    }
}

impl FromStr for GenId {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WordError::BadGenerator(s.to_string());
        let (head, path) = s.rsplit_once('@').ok_or_else(bad)?;
        let path: OccurrencePath = path.parse().map_err(|_| bad())?;
        if head == "z" {
            return Ok(GenId::ext(path));
        }
        let idx = head.strip_prefix('g').ok_or_else(bad)?;
        let idx: usize = idx.parse().map_err(|_| bad())?;
        Ok(GenId::block(path, idx))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: GenId,
    pub exp: i64,
}

/// A word `g_1^{e_1} g_2^{e_2} ...`; the empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn letter(gen: GenId) -> Self {
        Word { letters: alloc::vec![Letter { gen, exp: 1 }] }
    }

    pub fn power(gen: GenId, exp: i64) -> Self {
        let mut w = Word::identity();
        w.push(gen, exp);
        w
    }

    pub fn from_letters(letters: impl IntoIterator<Item = (GenId, i64)>) -> Self {
        let mut w = Word::identity();
        for (g, e) in letters {
            w.push(g, e);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Append `gen^exp`, merging with the last letter when it is the same
    /// generator and dropping zero exponents.
    pub fn push(&mut self, gen: GenId, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.gen == gen {
                last.exp += exp;
                if last.exp == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(Letter { gen, exp });
    }

    pub fn append(&mut self, other: &Word) {
        for l in &other.letters {
            self.push(l.gen.clone(), l.exp);
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.append(other);
        w
    }

    pub fn inverse(&self) -> Word {
        Word::from_letters(self.letters.iter().rev().map(|l| (l.gen.clone(), -l.exp)))
    }

    /// `self^e`, by repetition (of the word or its inverse).
    pub fn pow(&self, e: i64) -> Word {
        if self.letters.len() == 1 {
            let l = &self.letters[0];
            return Word::power(l.gen.clone(), l.exp * e);
        }
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out.append(&base);
        }
        out
    }

    /// Reduce all exponents into `[0, modulus)`; letters that vanish are dropped.
    pub fn reduce_exponents(&self, modulus: u64) -> Word {
        let mut out = Word::identity();
        for l in &self.letters {
            out.push(l.gen.clone(), reduce_signed(l.exp, modulus) as i64);
        }
        out
    }

    /// Set of generators occurring in the word.
    pub fn support(&self) -> BTreeSet<GenId> {
        self.letters.iter().map(|l| l.gen.clone()).collect()
    }

    /// Replace every letter `g^e` by `f(g)^e`.
    pub fn substitute<F>(&self, mut f: F) -> Result<Word, WordError>
    where
        F: FnMut(&GenId) -> Result<Word, WordError>,
    {
        let mut out = Word::identity();
        for l in &self.letters {
            out.append(&f(&l.gen)?.pow(l.exp));
        }
        Ok(out)
    }

    /// Exponent vector over `basis`, assuming the letters pairwise commute
    /// (they lie in a free abelian subgroup). Returns `None` if some letter is
    /// outside `basis`.
    pub fn abelianize(&self, basis: &[GenId], modulus: u64) -> Option<Vec<u64>> {
        let mut v = alloc::vec![0i64; basis.len()];
        for l in &self.letters {
            let i = basis.iter().position(|b| *b == l.gen)?;
            v[i] += l.exp;
        }
        Some(v.into_iter().map(|e| reduce_signed(e, modulus)).collect())
    }

    /// The word `prod basis[i]^{v[i]}` in basis order.
    pub fn from_exponents(basis: &[GenId], v: &[u64]) -> Word {
        Word::from_letters(basis.iter().cloned().zip(v.iter().map(|e| *e as i64)))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.exp == 1 {
                write!(f, "{}", l.gen)?;
            } else {
                write!(f, "{}^{}", l.gen, l.exp)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Parses `1` (identity) or whitespace-separated `gen` / `gen^exp` tokens.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::identity());
        }
        let mut w = Word::identity();
        for tok in s.split_whitespace() {
            let (g, e) = match tok.split_once('^') {
                Some((g, e)) => (g, e.parse::<i64>().map_err(|_| WordError::BadWord(s.to_string()))?),
                None => (tok, 1),
            };
            w.push(g.parse()?, e);
        }
        Ok(w)
    }
}

/// A map from the generators of one construction to words in the generators
/// of another: the representation of morphisms `G(d) -> G(c)` (and of
/// endomorphisms when `d = c`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenWordMap {
    pub domain: Construction,
    pub codomain: Construction,
    pub table: BTreeMap<GenId, Word>,
}

impl GenWordMap {
    pub fn identity(c: &Construction) -> Self {
        let table = c.generator_ids().into_iter().map(|g| (g.clone(), Word::letter(g))).collect();
        GenWordMap { domain: c.clone(), codomain: c.clone(), table }
    }

    pub fn image(&self, g: &GenId) -> Result<&Word, WordError> {
        self.table.get(g).ok_or_else(|| WordError::UnknownGenerator(g.to_string()))
    }

    /// Image of an arbitrary word of the domain.
    pub fn apply(&self, w: &Word) -> Result<Word, WordError> {
        w.substitute(|g| self.image(g).cloned())
    }

    /// `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &GenWordMap) -> Result<GenWordMap, WordError> {
        let mut table = BTreeMap::new();
        for (g, w) in &inner.table {
            table.insert(g.clone(), self.apply(w)?);
        }
        Ok(GenWordMap { domain: inner.domain.clone(), codomain: self.codomain.clone(), table })
    }

    /// Theta of a codomain word, computed letterwise modulo `modulus`.
    pub fn theta_of_word(codomain: &Construction, w: &Word, modulus: u64) -> Result<u64, WordError> {
        let thetas = codomain.theta_table();
        let mut acc: u128 = 1 % modulus as u128;
        for l in w.letters() {
            let t = *thetas.get(&l.gen).ok_or_else(|| WordError::UnknownGenerator(l.gen.to_string()))?;
            let t = reduce_signed(t, modulus);
            let unit = if l.exp < 0 {
                crate::padic::inv_mod(t, modulus).unwrap_or(0)
            } else {
                t
            };
            for _ in 0..l.exp.unsigned_abs() % (modulus.max(1) * 2) {
                acc = acc * unit as u128 % modulus as u128;
            }
        }
        Ok(acc as u64)
    }

    /// Check `theta_codomain(image(g)) = theta_domain(g)` on every generator.
    pub fn check_theta(&self, modulus: u64) -> Result<(), WordError> {
        let dom = self.domain.theta_table();
        for (g, w) in &self.table {
            let expected = reduce_signed(*dom.get(g).ok_or_else(|| WordError::UnknownGenerator(g.to_string()))?, modulus);
            let image = Self::theta_of_word(&self.codomain, w, modulus)?;
            if image != expected {
                return Err(WordError::ThetaMismatch { gen: g.to_string(), image, expected });
            }
        }
        Ok(())
    }

    /// Rendered table, one `gen -> word` line per generator.
    pub fn render(&self) -> Vec<(String, String)> {
        self.table.iter().map(|(g, w)| (g.to_string(), format!("{}", w))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::Step;

    fn path(s: &str) -> OccurrencePath {
        s.parse().unwrap()
    }

    #[test]
    fn generator_ids_round_trip() {
        for s in ["z@", "z@EL", "g0@", "g12@LRE"] {
            let g: GenId = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert!("x@L".parse::<GenId>().is_err());
        assert!("g1@Q".parse::<GenId>().is_err());
        assert!("g1".parse::<GenId>().is_err());
    }

    #[test]
    fn push_merges_and_cancels() {
        let a = GenId::block(path("L"), 0);
        let b = GenId::ext(OccurrencePath::root().child(Step::E));
        let mut w = Word::identity();
        w.push(a.clone(), 2);
        w.push(a.clone(), -2);
        assert!(w.is_empty());
        w.push(a.clone(), 1);
        w.push(b.clone(), 3);
        assert_eq!(w.concat(&w.inverse()), Word::identity());
        assert_eq!(w.to_string(), "g0@L z@E^3");
        assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        assert_eq!("1".parse::<Word>().unwrap(), Word::identity());
    }

    #[test]
    fn abelianize_collects() {
        let u1 = GenId::ext(path("E"));
        let u2 = GenId::ext(path(""));
        let w = Word::from_letters([(u2.clone(), -1), (u1.clone(), 1), (u2.clone(), 3)]);
        assert_eq!(w.abelianize(&[u1.clone(), u2.clone()], 9), Some(alloc::vec![1, 2]));
        assert_eq!(w.abelianize(&[u1], 9), None);
    }
}
