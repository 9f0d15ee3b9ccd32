//! Factoring a homomorphism through subconstructions until the extension
//! rank is at most `l(G_bar)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::{lift_automorphism, Hom, HomError};
use crate::construction::{pi, principal_tuples, project, Construction, OccurrencePath, PrincipalTuple, Step, Witness};
use crate::fpgroup::{abelian_dlog, l_value, subgroup_closure, Subgroup};
use crate::padic::AAutMatrix;
use crate::word::{GenId, GenWordMap, Word};

fn tuple_images(rho: &Hom, t: &PrincipalTuple) -> Result<Vec<usize>, HomError> {
    t.check(rho.domain())?;
    t.generators().iter().map(|u| rho.image(u)).collect()
}

/// `rho(V^j)` for `j = 0..=r`, where `V^j` is generated by `u_{j+1}..u_r`.
pub fn image_chain(rho: &Hom, t: &PrincipalTuple) -> Result<Vec<Subgroup>, HomError> {
    let imgs = tuple_images(rho, t)?;
    Ok((0..=imgs.len()).map(|j| subgroup_closure(rho.target(), &imgs[j..])).collect())
}

/// Smallest `k` with `rho(V^k) = rho(V^{k+1})`.
pub fn find_collapse(rho: &Hom, t: &PrincipalTuple) -> Result<Option<usize>, HomError> {
    let chain = image_chain(rho, t)?;
    Ok((0..t.rank()).find(|k| chain[*k].order() == chain[*k + 1].order()))
}

/// The automorphism of `A` that replaces `u_{k+1}` by
/// `(prod_{i>k+1} u_i^{a_i})^{-1} u_{k+1}`, where the `a_i` solve
/// `rho(u_{k+1}) = prod rho(u_i)^{a_i}`; afterwards `rho` kills the new
/// `u_{k+1}`. `k` is the 0-based chain index from [`find_collapse`].
pub fn normalize_alpha(rho: &Hom, t: &PrincipalTuple, k: usize) -> Result<AAutMatrix, HomError> {
    let imgs = tuple_images(rho, t)?;
    let r = imgs.len();
    if k >= r {
        return Err(HomError::Precondition(format!("collapse index {} out of range for rank {}", k, r)));
    }
    let a = abelian_dlog(rho.target(), imgs[k], &imgs[k + 1..])?.ok_or(HomError::NotACollapse(k))?;
    let mut columns: Vec<Vec<i64>> = (0..r).map(|j| (0..r).map(|i| i64::from(i == j)).collect()).collect();
    for (i, ai) in a.iter().enumerate() {
        columns[k][k + 1 + i] = -(*ai as i64);
    }
    let alpha = AAutMatrix::from_columns(&columns, rho.target().prime(), rho.precision())?;
    let basis = t.generators();
    let w = Word::from_exponents(&basis[k + 1..], &a).inverse().concat(&Word::letter(basis[k].clone()));
    if rho.evaluate(&w)? != rho.target().identity() {
        return Err(HomError::NotACollapse(k));
    }
    Ok(alpha)
}

/// Push `rho` down to the subconstruction obtained by dropping the
/// extension node of `u_l` (1-based), if `rho(u_l) = 1`; otherwise return
/// the full witness and `rho` itself.
pub fn quotient_factor(rho: &Hom, t: &PrincipalTuple, l: usize) -> Result<(Witness, Hom), HomError> {
    let c = rho.domain();
    t.check(c)?;
    if l == 0 || l > t.rank() {
        return Err(HomError::Precondition(format!("index {} outside 1..={}", l, t.rank())));
    }
    let zl = &t.z_nodes[l - 1];
    if rho.image(&GenId::ext(zl.clone()))? != rho.target().identity() {
        return Ok((Witness::full(c), rho.clone()));
    }
    fn go(node: &Construction, here: OccurrencePath, root: &OccurrencePath, zl: &OccurrencePath) -> Result<Witness, HomError> {
        match node {
            Construction::Leaf(_) => Ok(Witness::Keep),
            Construction::FreeProduct(a, b) => {
                let s = root.steps()[here.len()];
                let (side, other) = if s == Step::L { (a, b) } else { (b, a) };
                let ws = go(side, here.child(s), root, zl)?;
                let trivial = project(side, &ws)?.sub.is_trivial_leaf();
                let keep_other = Witness::full(other);
                Ok(match (s, trivial) {
                    (Step::L, true) => Witness::KeepRight(keep_other.into()),
                    (_, true) => Witness::KeepLeft(keep_other.into()),
                    (Step::L, false) => Witness::KeepBoth(ws.into(), keep_other.into()),
                    (_, false) => Witness::KeepBoth(keep_other.into(), ws.into()),
                })
            }
            Construction::Extension(base) => {
                if here == *zl {
                    Ok(Witness::DropExtension(Witness::full(base).into()))
                } else {
                    Ok(Witness::KeepExtension(go(base, here.child(Step::E), root, zl)?.into()))
                }
            }
        }
    }
    let w = go(c, OccurrencePath::root(), &t.root, zl)?;
    let proj = project(c, &w)?;
    let mut images = BTreeMap::new();
    for (cp, dp) in &proj.node_map {
        for g in c.generator_ids().into_iter().filter(|g| g.path == *cp) {
            images.insert(GenId { path: dp.clone(), slot: g.slot }, rho.image(&g)?);
        }
    }
    let rho_sub = Hom::new_unchecked(proj.sub, rho.target().clone(), images)?;
    let bad = rho_sub.validate()?;
    if !bad.is_empty() {
        return Err(HomError::InvalidHom(bad.iter().map(|r| r.to_string()).collect()));
    }
    let retraction = pi(c, &w)?;
    for g in c.generator_ids() {
        if rho_sub.evaluate(retraction.image(&g)?)? != rho.image(&g)? {
            return Err(HomError::IdentityFailed(g.to_string()));
        }
    }
    Ok((w, rho_sub))
}

/// One factoring step: the tuple used, the collapse index, the normalizing
/// automorphism `alpha` of `A`, its lift `gamma`, the witness of the smaller
/// subconstruction and the factored homomorphism `rho''` on it.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorStage {
    pub tuple: PrincipalTuple,
    pub k: usize,
    pub alpha: AAutMatrix,
    pub gamma: GenWordMap,
    pub witness: Witness,
    pub rho: Hom,
}

impl FactorStage {
    /// Check the stage against the homomorphism it factors: `gamma` is a
    /// theta-compatible endomap extending `alpha`, the witness is proper,
    /// `rho''` respects its relations, and `rho(gamma(g)) = rho''(pi(g))`
    /// for every generator `g`.
    pub fn check(&self, rho: &Hom) -> Result<(), HomError> {
        let c = rho.domain();
        self.tuple.check(c)?;
        if self.gamma.domain != *c || self.gamma.codomain != *c {
            return Err(HomError::IdentityFailed("gamma is not an endomap of the domain".into()));
        }
        let m = self.alpha.modulus();
        self.alpha.validate()?;
        self.gamma.check_theta(m)?;
        let basis = self.tuple.generators();
        if self.alpha.rank() != basis.len() {
            return Err(HomError::IdentityFailed("alpha has the wrong rank".into()));
        }
        for (j, u) in basis.iter().enumerate() {
            if self.gamma.image(u)?.abelianize(&basis, m) != Some(self.alpha.column(j)) {
                return Err(HomError::IdentityFailed(format!("gamma({}) does not match alpha", u)));
            }
        }
        if self.witness.is_full() {
            return Err(HomError::IdentityFailed("witness keeps everything".into()));
        }
        let retraction = pi(c, &self.witness)?;
        if retraction.codomain != *self.rho.domain() {
            return Err(HomError::IdentityFailed("witness does not select the factored domain".into()));
        }
        let bad = self.rho.validate()?;
        if !bad.is_empty() {
            return Err(HomError::InvalidHom(bad.iter().map(|r| r.to_string()).collect()));
        }
        for g in c.generator_ids() {
            if rho.evaluate(self.gamma.image(&g)?)? != self.rho.evaluate(retraction.image(&g)?)? {
                return Err(HomError::IdentityFailed(g.to_string()));
            }
        }
        Ok(())
    }
}

/// Normalize, lift and quotient once at collapse index `k`.
pub fn factor_once(rho: &Hom, t: &PrincipalTuple, k: usize) -> Result<FactorStage, HomError> {
    let alpha = normalize_alpha(rho, t, k)?;
    let gamma = lift_automorphism(rho.domain(), t, &alpha)?;
    let twisted = rho.precompose(&gamma)?;
    let (witness, rho_sub) = quotient_factor(&twisted, t, k + 1)?;
    let stage = FactorStage { tuple: t.clone(), k, alpha, gamma, witness, rho: rho_sub };
    stage.check(rho)?;
    Ok(stage)
}

/// Chain of factoring stages ending at a subconstruction of extension rank
/// at most `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationCertificate {
    pub l: u32,
    pub stages: Vec<FactorStage>,
    pub final_hom: Hom,
}

impl FactorizationCertificate {
    pub fn final_construction(&self) -> &Construction {
        self.final_hom.domain()
    }

    /// Replay every stage starting from `rho`.
    pub fn check(&self, rho: &Hom) -> Result<(), HomError> {
        let mut current = rho;
        for (i, s) in self.stages.iter().enumerate() {
            s.check(current).map_err(|e| HomError::IdentityFailed(format!("stage {}: {}", i, e)))?;
            current = &s.rho;
        }
        if *current != self.final_hom {
            return Err(HomError::IdentityFailed("final homomorphism differs from the last stage".into()));
        }
        if self.final_hom.domain().extension_rank() > self.l as usize {
            return Err(HomError::IdentityFailed(format!(
                "final extension rank {} exceeds {}",
                self.final_hom.domain().extension_rank(),
                self.l
            )));
        }
        if self.stages.len() > rho.domain().extension_count() {
            return Err(HomError::IdentityFailed("more stages than extension nodes".into()));
        }
        Ok(())
    }
}

/// Factor until the extension rank is at most `l(G_bar)` (or `l_override`),
/// always using the first tuple of maximal rank and the smallest collapse.
pub fn factor_full(rho: &Hom, l_override: Option<u32>) -> Result<FactorizationCertificate, HomError> {
    let bad = rho.validate()?;
    if !bad.is_empty() {
        return Err(HomError::InvalidHom(bad.iter().map(|r| r.to_string()).collect()));
    }
    let l = l_override.unwrap_or_else(|| l_value(rho.target()));
    let mut current = rho.clone();
    let mut stages = Vec::new();
    while current.domain().extension_rank() > l as usize {
        let e = current.domain().extension_rank();
        let t = principal_tuples(current.domain()).into_iter().find(|t| t.rank() == e).expect("a tuple of maximal rank");
        let k = find_collapse(&current, &t)?.ok_or(HomError::NoCollapse)?;
        let stage = factor_once(&current, &t, k)?;
        current = stage.rho.clone();
        stages.push(stage);
    }
    Ok(FactorizationCertificate { l, stages, final_hom: current })
}
