//! Extending automorphisms of the abelian subgroup of a principal tuple to
//! automorphisms of the whole construction.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::{gen_under, strip_first, under, word_under, HomError};
use crate::construction::{compatible, project, Construction, ConstructionError, OccurrencePath, PrincipalTuple, Step, Witness};
use crate::padic::AAutMatrix;
use crate::word::{GenId, GenWordMap, Word};

/// Tuple of the base of an extension: drop the outermost node and the
/// leading `E` step.
fn base_tuple(t: &PrincipalTuple) -> PrincipalTuple {
    let r = t.rank();
    PrincipalTuple { root: strip_first(&t.root), z_nodes: t.z_nodes[..r - 1].iter().map(strip_first).collect() }
}

fn side_tuple(t: &PrincipalTuple) -> PrincipalTuple {
    PrincipalTuple { root: strip_first(&t.root), z_nodes: t.z_nodes.iter().map(strip_first).collect() }
}

/// The part of a node map below `step`, with that step removed.
fn sub_map(map: &BTreeMap<OccurrencePath, OccurrencePath>, step: Step) -> BTreeMap<OccurrencePath, OccurrencePath> {
    map.iter()
        .filter(|(k, _)| k.steps().first() == Some(&step))
        .map(|(k, v)| (strip_first(k), v.clone()))
        .collect()
}

/// Generator of `d` sent to its copy in `c = <c_bar>`.
fn iota_gen(dmap: &BTreeMap<OccurrencePath, OccurrencePath>, g: &GenId) -> Result<GenId, HomError> {
    let cp = dmap.get(&g.path).ok_or_else(|| ConstructionError::BadPath(g.path.clone()))?;
    Ok(GenId { path: under(Step::E, cp), slot: g.slot })
}

/// The recursion behind [`eta_morphism`], with ambient `c = <c_bar>`.
/// `d` is a subconstruction of `c_bar` with node map `dmap` (paths of `d` to paths
/// of `c_bar`), `root` the tuple's root leaf in `d`, and `shift` the
/// exponent of the outer generator of `c` in the image of each kept tuple
/// generator (keyed by `c_bar` path).
fn eta_rec(
    d: &Construction,
    dmap: &BTreeMap<OccurrencePath, OccurrencePath>,
    root: &OccurrencePath,
    shift: &BTreeMap<OccurrencePath, i64>,
) -> Result<BTreeMap<GenId, Word>, HomError> {
    match d {
        Construction::Leaf(_) => {
            let mut table = BTreeMap::new();
            for g in d.generator_ids() {
                let image = iota_gen(dmap, &g)?;
                table.insert(g, Word::letter(image));
            }
            Ok(table)
        }
        Construction::FreeProduct(a, b) => {
            let s = root.steps()[0];
            let side = if s == Step::L { a } else { b };
            let inner = eta_rec(side, &sub_map(dmap, s), &strip_first(root), shift)?;
            let mut table: BTreeMap<GenId, Word> = inner.into_iter().map(|(g, w)| (gen_under(s, &g), w)).collect();
            for g in d.generator_ids() {
                if g.path.steps()[0] != s {
                    let image = iota_gen(dmap, &g)?;
                    table.insert(g, Word::letter(image));
                }
            }
            Ok(table)
        }
        Construction::Extension(base) => {
            // Recurse with ambient <d> = Z x| (Z' x| G(base)), Z being the
            // outer generator of c.
            let inner_map: BTreeMap<OccurrencePath, OccurrencePath> =
                base.nodes().into_iter().map(|(q, _)| (q.clone(), under(Step::E, &q))).collect();
            let inner_shift: BTreeMap<OccurrencePath, i64> =
                dmap.iter().filter_map(|(dp, cp)| shift.get(cp).map(|b| (dp.clone(), *b))).collect();
            let eta_base = eta_rec(base, &inner_map, &strip_first(root), &inner_shift)?;
            let own = dmap.get(&OccurrencePath::root()).ok_or_else(|| ConstructionError::BadPath(OccurrencePath::root()))?;
            let b = *shift
                .get(own)
                .ok_or_else(|| HomError::Precondition(format!("no twist recorded for the generator at {}", own)))?;
            // alpha on Z' and eta_base on the base, into <d>
            let z_outer = GenId::ext(OccurrencePath::root());
            let z_own = GenId::ext(OccurrencePath::root().child(Step::E));
            let mut semidirect: BTreeMap<GenId, Word> =
                eta_base.into_iter().map(|(g, w)| (gen_under(Step::E, &g), w)).collect();
            let mut twisted = Word::letter(z_own);
            twisted.push(z_outer, b);
            semidirect.insert(GenId::ext(OccurrencePath::root()), twisted);
            // then embed <d> into c
            let embed = |g: &GenId| -> Result<Word, crate::word::WordError> {
                if g.path.is_root() {
                    return Ok(Word::letter(g.clone()));
                }
                let dp = strip_first(&g.path);
                let cp = dmap
                    .get(&dp)
                    .ok_or_else(|| crate::word::WordError::UnknownGenerator(format!("{}", g)))?;
                Ok(Word::letter(GenId { path: under(Step::E, cp), slot: g.slot }))
            };
            let mut table = BTreeMap::new();
            for (g, w) in semidirect {
                table.insert(g, w.substitute(embed)?);
            }
            Ok(table)
        }
    }
}

/// The morphism `G(d_bar) -> G(c)` for a subconstruction `d_bar` of
/// `c_bar` (given by witness `w`), where `c = <c_bar>`. It agrees with
/// `beta` on the tuple generators kept in `d_bar` and lifts the embedding
/// of `d_bar` into `c_bar`.
///
/// `beta` must fix the outer generator and move each kept tuple generator
/// only by a power of the outer generator.
pub fn eta_morphism(c: &Construction, w: &Witness, t: &PrincipalTuple, beta: &AAutMatrix) -> Result<GenWordMap, HomError> {
    let cbar = match c {
        Construction::Extension(base) => base.as_ref(),
        _ => return Err(HomError::Precondition("ambient construction must be an extension".into())),
    };
    t.check(c)?;
    let r = t.rank();
    if beta.rank() != r {
        return Err(HomError::Precondition(format!("matrix rank {} differs from tuple rank {}", beta.rank(), r)));
    }
    let tbar = base_tuple(t);
    if !compatible(&tbar, w) {
        return Err(ConstructionError::Incompatible.into());
    }
    let proj = project(cbar, w)?;
    let last = r - 1;
    let fixes_outer = (0..r).all(|i| beta.entry(i, last) == u64::from(i == last));
    if !fixes_outer {
        return Err(HomError::Precondition("beta must fix the outer generator".into()));
    }
    let mut shift = BTreeMap::new();
    for (i, z) in tbar.z_nodes.iter().enumerate() {
        if !proj.node_map.contains_key(z) {
            continue;
        }
        let ok = (0..last).all(|j| beta.entry(j, i) == u64::from(j == i));
        if !ok {
            return Err(HomError::Precondition(format!("beta moves coordinate {} outside the outer generator", i + 1)));
        }
        shift.insert(z.clone(), beta.entry(last, i) as i64);
    }
    let dmap: BTreeMap<OccurrencePath, OccurrencePath> = proj.node_map.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
    let root = proj.node_map.get(&tbar.root).cloned().ok_or(ConstructionError::Incompatible)?;
    let table = eta_rec(&proj.sub, &dmap, &root, &shift)?;
    let out = GenWordMap { domain: proj.sub, codomain: c.clone(), table };
    out.check_theta(beta.modulus())?;
    Ok(out)
}

/// Extend `eta_bar: G' -> Z x| G` over `Z' x| G'` by sending the new
/// generator `z'` to `psi`, a power of `z`.
///
/// Checks the hypotheses: the codomain is an extension, `psi` lies in its
/// kernel `Z`, and `eta_bar` followed by the projection to `G` is `phi`.
pub fn extend_over_extension(eta_bar: &GenWordMap, phi: &GenWordMap, psi: Word, modulus: u64) -> Result<GenWordMap, HomError> {
    let gbar = match &eta_bar.codomain {
        Construction::Extension(base) => base.as_ref(),
        _ => return Err(HomError::Precondition("codomain must be an extension".into())),
    };
    if phi.domain != eta_bar.domain || phi.codomain != *gbar {
        return Err(HomError::Precondition("phi must map the domain of eta_bar to the base of its codomain".into()));
    }
    let z = GenId::ext(OccurrencePath::root());
    if psi.letters().iter().any(|l| l.gen != z) {
        return Err(HomError::Precondition(format!("psi = {} is not a power of the kernel generator", psi)));
    }
    for (g, w) in &eta_bar.table {
        let mut projected = Word::identity();
        for l in w.letters() {
            if l.gen == z {
                continue;
            }
            projected.push(GenId { path: strip_first(&l.gen.path), slot: l.gen.slot }, l.exp);
        }
        if projected != *phi.image(g)? {
            return Err(HomError::Precondition(format!("projection of eta_bar({}) is {}, not phi({})", g, projected, g)));
        }
    }
    let mut table: BTreeMap<GenId, Word> = eta_bar.table.iter().map(|(g, w)| (gen_under(Step::E, g), w.clone())).collect();
    table.insert(z, psi);
    let out = GenWordMap { domain: Construction::extension(eta_bar.domain.clone()), codomain: eta_bar.codomain.clone(), table };
    out.check_theta(modulus)?;
    Ok(out)
}

/// An automorphism `gamma` of `G(c)` extending the automorphism `alpha` of
/// the abelian subgroup of the principal tuple `t`: `gamma(u_j)` is a word
/// in `u_1..u_r` with exponent vector equal to column `j` of `alpha`.
pub fn lift_automorphism(c: &Construction, t: &PrincipalTuple, alpha: &AAutMatrix) -> Result<GenWordMap, HomError> {
    t.check(c)?;
    alpha.validate()?;
    if alpha.rank() != t.rank() {
        return Err(HomError::Precondition(format!("matrix rank {} differs from tuple rank {}", alpha.rank(), t.rank())));
    }
    let m = alpha.modulus();
    let out = match c {
        Construction::Leaf(_) => GenWordMap::identity(c),
        Construction::FreeProduct(a, b) => {
            let s = t.root.steps()[0];
            let side = if s == Step::L { a } else { b };
            let inner = lift_automorphism(side, &side_tuple(t), alpha)?;
            let mut out = GenWordMap::identity(c);
            for (g, w) in inner.table {
                out.table.insert(gen_under(s, &g), word_under(s, &w));
            }
            out
        }
        Construction::Extension(cbar) => {
            let r = t.rank();
            let last = r - 1;
            let alpha_bar = alpha.project_bar(last)?;
            let gamma_bar = lift_automorphism(cbar, &base_tuple(t), &alpha_bar)?;
            let a_rr = alpha.entry(last, last) as i64;
            // gamma' = alpha|Z_r x| gamma_bar
            let z = GenId::ext(OccurrencePath::root());
            let mut gamma_prime = GenWordMap::identity(c);
            for (g, w) in &gamma_bar.table {
                gamma_prime.table.insert(gen_under(Step::E, g), word_under(Step::E, w));
            }
            gamma_prime.table.insert(z.clone(), Word::power(z.clone(), a_rr));
            // alpha' = restriction of gamma' to A; beta = alpha'^{-1} alpha
            let mut columns: Vec<Vec<i64>> = alpha_bar
                .to_columns()
                .into_iter()
                .map(|col| col.into_iter().map(|v| v as i64).chain(core::iter::once(0)).collect())
                .collect();
            let mut own = alloc::vec![0i64; r];
            own[last] = a_rr;
            columns.push(own);
            let alpha_prime = AAutMatrix::from_columns(&columns, alpha.prime(), alpha.precision())?;
            let beta = alpha_prime.invert()?.compose(alpha)?;
            let eta_bar = eta_morphism(c, &Witness::full(cbar), t, &beta)?;
            let eta = extend_over_extension(&eta_bar, &GenWordMap::identity(cbar), Word::letter(z), m)?;
            gamma_prime.compose(&eta)?
        }
    };
    let mut out = out;
    for w in out.table.values_mut() {
        *w = reduce_ext_exponents(w, m);
    }
    out.check_theta(m)?;
    Ok(out)
}

fn reduce_ext_exponents(w: &Word, m: u64) -> Word {
    let mut out = Word::identity();
    for l in w.letters() {
        let e = if l.gen.is_ext() { crate::padic::reduce_signed(l.exp, m) as i64 } else { l.exp };
        out.push(l.gen.clone(), e);
    }
    out
}
