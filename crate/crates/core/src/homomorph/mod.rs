//! Homomorphisms from the group of a construction into a finite p-group,
//! and the factoring pipeline that pushes them down to subconstructions of
//! small extension rank.

mod factor;
mod lift;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::construction::{Construction, ConstructionError, OccurrencePath, RelationCheck, Step};
use crate::fpgroup::{FiniteGroup, GroupError};
use crate::padic::{modulus, precision_for_exponent, PadicError};
use crate::word::{GenId, GenWordMap, Word, WordError};

pub use factor::{
    factor_full, factor_once, find_collapse, image_chain, normalize_alpha, quotient_factor, FactorStage,
    FactorizationCertificate,
};
pub use lift::{eta_morphism, extend_over_extension, lift_automorphism};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("no image given for generator {0}")]
    MissingImage(String),
    #[error("image given for {0}, which is not a generator of the domain")]
    ExtraImage(String),
    #[error("image index {index} of {gen} is outside the target group")]
    BadImage { gen: String, index: usize },
    #[error("construction prime {0} differs from target prime {1}")]
    PrimeMismatch(u64, u64),
    #[error("relations violated: {}", .0.join("; "))]
    InvalidHom(Vec<String>),
    #[error("coordinate {0} is not a collapse of the image chain")]
    NotACollapse(usize),
    #[error("image chain is strictly descending; no collapse")]
    NoCollapse,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("factoring identity fails at {0}")]
    IdentityFailed(String),
}

/// A homomorphism `G(c) -> G_bar`, given by the images of the generators.
#[derive(Debug, Clone)]
pub struct Hom {
    domain: Construction,
    target: Arc<FiniteGroup>,
    images: BTreeMap<GenId, usize>,
    precision: u32,
}

impl Hom {
    /// Build and validate: every generator needs an image, and every relation
    /// of the domain must hold in the target.
    pub fn new(domain: Construction, target: Arc<FiniteGroup>, images: BTreeMap<GenId, usize>) -> Result<Self, HomError> {
        let h = Self::new_unchecked(domain, target, images)?;
        let bad = h.validate()?;
        if !bad.is_empty() {
            return Err(HomError::InvalidHom(bad.iter().map(|r| r.to_string()).collect()));
        }
        Ok(h)
    }

    /// Build without checking relations (shape is still checked).
    pub fn new_unchecked(domain: Construction, target: Arc<FiniteGroup>, images: BTreeMap<GenId, usize>) -> Result<Self, HomError> {
        if domain.prime() != target.prime() {
            return Err(HomError::PrimeMismatch(domain.prime(), target.prime()));
        }
        for g in domain.generator_ids() {
            if !images.contains_key(&g) {
                return Err(HomError::MissingImage(g.to_string()));
            }
        }
        for (g, i) in &images {
            if !domain.has_generator(g) {
                return Err(HomError::ExtraImage(g.to_string()));
            }
            if *i >= target.order() {
                return Err(HomError::BadImage { gen: g.to_string(), index: *i });
            }
        }
        let precision = precision_for_exponent(target.prime(), target.exponent());
        Ok(Hom { domain, target, images, precision })
    }

    /// The homomorphism sending every generator to the identity.
    pub fn trivial(domain: Construction, target: Arc<FiniteGroup>) -> Result<Self, HomError> {
        let images = domain.generator_ids().into_iter().map(|g| (g, 0)).collect();
        Self::new(domain, target, images)
    }

    pub fn domain(&self) -> &Construction {
        &self.domain
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn images(&self) -> &BTreeMap<GenId, usize> {
        &self.images
    }

    pub fn image(&self, g: &GenId) -> Result<usize, HomError> {
        self.images.get(g).copied().ok_or_else(|| HomError::Word(WordError::UnknownGenerator(g.to_string())))
    }

    /// `N` with `exponent(G_bar) | p^N`.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        modulus(self.target.prime(), self.precision).expect("exponent of a finite group fits")
    }

    pub fn evaluate(&self, w: &Word) -> Result<usize, HomError> {
        let g = &self.target;
        let mut acc = g.identity();
        for l in w.letters() {
            acc = g.mul(acc, g.pow(self.image(&l.gen)?, l.exp));
        }
        Ok(acc)
    }

    /// Relations of the domain that fail in the target.
    pub fn validate(&self) -> Result<Vec<RelationCheck>, HomError> {
        let mut bad = Vec::new();
        for r in self.domain.relations(self.precision)? {
            if self.evaluate(&r.lhs)? != self.evaluate(&r.rhs)? {
                bad.push(r);
            }
        }
        Ok(bad)
    }

    /// `self ∘ phi` for an endomorphism or morphism `phi` into the domain.
    pub fn precompose(&self, phi: &GenWordMap) -> Result<Hom, HomError> {
        if phi.codomain != self.domain {
            return Err(HomError::Precondition("codomain of the map is not the domain of the homomorphism".into()));
        }
        let mut images = BTreeMap::new();
        for (g, w) in &phi.table {
            images.insert(g.clone(), self.evaluate(w)?);
        }
        Ok(Hom { domain: phi.domain.clone(), target: self.target.clone(), images, precision: self.precision })
    }

    /// Images rendered as matrices.
    pub fn render(&self) -> Vec<(String, String)> {
        self.images.iter().map(|(g, i)| (g.to_string(), format!("{}", self.target.element(*i)))).collect()
    }
}

/// Backtracking search for a relation-respecting assignment of generator
/// images. `candidates(g)` lists the images to try for `g`, in order; each
/// relation is checked as soon as its last generator is assigned. Gives up
/// (returning `None`) after `budget` assignments.
pub fn search_hom(
    domain: &Construction,
    target: &Arc<FiniteGroup>,
    candidates: &mut dyn FnMut(&GenId) -> Vec<usize>,
    budget: usize,
) -> Result<Option<Hom>, HomError> {
    let gens = domain.generator_ids();
    let precision = precision_for_exponent(target.prime(), target.exponent());
    let position: BTreeMap<&GenId, usize> = gens.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut due: Vec<Vec<RelationCheck>> = alloc::vec![Vec::new(); gens.len()];
    for r in domain.relations(precision)? {
        let last = r.lhs.letters().iter().chain(r.rhs.letters()).map(|l| position[&l.gen]).max();
        if let Some(i) = last {
            due[i].push(r);
        }
    }
    let eval = |images: &[usize], w: &Word| {
        w.letters().iter().fold(target.identity(), |acc, l| target.mul(acc, target.pow(images[position[&l.gen]], l.exp)))
    };
    let mut images = alloc::vec![0usize; gens.len()];
    let mut options: Vec<Vec<usize>> = Vec::with_capacity(gens.len());
    let mut cursor: Vec<usize> = Vec::with_capacity(gens.len());
    let mut spent = 0usize;
    if gens.is_empty() {
        return Ok(Some(Hom::new_unchecked(domain.clone(), target.clone(), BTreeMap::new())?));
    }
    options.push(candidates(&gens[0]));
    cursor.push(0);
    loop {
        let depth = cursor.len() - 1;
        if cursor[depth] >= options[depth].len() {
            options.pop();
            cursor.pop();
            match cursor.last_mut() {
                Some(c) => {
                    *c += 1;
                    continue;
                }
                None => return Ok(None),
            }
        }
        spent += 1;
        if spent > budget {
            return Ok(None);
        }
        images[depth] = options[depth][cursor[depth]];
        if images[depth] >= target.order() {
            return Err(HomError::BadImage { gen: gens[depth].to_string(), index: images[depth] });
        }
        let ok = due[depth].iter().all(|r| eval(&images, &r.lhs) == eval(&images, &r.rhs));
        if !ok {
            cursor[depth] += 1;
            continue;
        }
        if depth + 1 == gens.len() {
            let map = gens.iter().cloned().zip(images.iter().copied()).collect();
            return Ok(Some(Hom::new(domain.clone(), target.clone(), map)?));
        }
        options.push(candidates(&gens[depth + 1]));
        cursor.push(0);
    }
}

impl PartialEq for Hom {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.images.len() == other.images.len()
            && self
                .images
                .iter()
                .all(|(g, i)| other.images.get(g).map(|j| self.target.element(*i) == other.target.element(*j)).unwrap_or(false))
    }
}

pub(crate) fn under(step: Step, path: &OccurrencePath) -> OccurrencePath {
    let mut steps = Vec::with_capacity(path.len() + 1);
    steps.push(step);
    steps.extend_from_slice(path.steps());
    OccurrencePath::from(steps)
}

pub(crate) fn strip_first(path: &OccurrencePath) -> OccurrencePath {
    OccurrencePath::from(path.steps()[1..].to_vec())
}

pub(crate) fn gen_under(step: Step, g: &GenId) -> GenId {
    GenId { path: under(step, &g.path), slot: g.slot }
}

pub(crate) fn word_under(step: Step, w: &Word) -> Word {
    Word::from_letters(w.letters().iter().map(|l| (gen_under(step, &l.gen), l.exp)))
}
