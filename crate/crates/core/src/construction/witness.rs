use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::{Construction, ConstructionError, OccurrencePath, Step};
use crate::word::{GenId, GenWordMap, Word};

/// Derivation of a subconstruction `d <= c`, one decision per AST node of `c`
/// along the kept part.
///
/// Text form: `k` (leaf), `b(x,y)`, `l(x)`, `r(x)` (free product),
/// `e(x)` (keep extension), `d(x)` (drop extension).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Witness {
    Keep,
    KeepBoth(Box<Witness>, Box<Witness>),
    KeepLeft(Box<Witness>),
    KeepRight(Box<Witness>),
    KeepExtension(Box<Witness>),
    DropExtension(Box<Witness>),
}

impl Witness {
    /// The witness of `c <= c`.
    pub fn full(c: &Construction) -> Witness {
        match c {
            Construction::Leaf(_) => Witness::Keep,
            Construction::FreeProduct(a, b) => Witness::KeepBoth(Box::new(Self::full(a)), Box::new(Self::full(b))),
            Construction::Extension(base) => Witness::KeepExtension(Box::new(Self::full(base))),
        }
    }

    pub fn is_full(&self) -> bool {
        match self {
            Witness::Keep => true,
            Witness::KeepBoth(a, b) => a.is_full() && b.is_full(),
            Witness::KeepExtension(x) => x.is_full(),
            _ => false,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Keep => write!(f, "k"),
            Witness::KeepBoth(a, b) => write!(f, "b({},{})", a, b),
            Witness::KeepLeft(x) => write!(f, "l({})", x),
            Witness::KeepRight(x) => write!(f, "r({})", x),
            Witness::KeepExtension(x) => write!(f, "e({})", x),
            Witness::DropExtension(x) => write!(f, "d({})", x),
        }
    }
}

impl FromStr for Witness {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let bad = || ConstructionError::BadWitness(s.to_string());
        fn go(src: &[u8], pos: &mut usize) -> Option<Witness> {
            let tag = *src.get(*pos)?;
            *pos += 1;
            if tag == b'k' {
                return Some(Witness::Keep);
            }
            if src.get(*pos) != Some(&b'(') {
                return None;
            }
            *pos += 1;
            let first = go(src, pos)?;
            let w = if tag == b'b' {
                if src.get(*pos) != Some(&b',') {
                    return None;
                }
                *pos += 1;
                let second = go(src, pos)?;
                Witness::KeepBoth(Box::new(first), Box::new(second))
            } else {
                let inner = Box::new(first);
                match tag {
                    b'l' => Witness::KeepLeft(inner),
                    b'r' => Witness::KeepRight(inner),
                    b'e' => Witness::KeepExtension(inner),
                    b'd' => Witness::DropExtension(inner),
                    _ => return None,
                }
            };
            if src.get(*pos) != Some(&b')') {
                return None;
            }
            *pos += 1;
            Some(w)
        }
        let mut pos = 0;
        let w = go(&compact, &mut pos).ok_or_else(bad)?;
        if pos != compact.len() {
            return Err(bad());
        }
        Ok(w)
    }
}

/// Every witness of every subconstruction of `c`, each exactly once.
pub fn subconstructions(c: &Construction) -> Vec<Witness> {
    match c {
        Construction::Leaf(_) => alloc::vec![Witness::Keep],
        Construction::FreeProduct(a, b) => {
            let sa = subconstructions(a);
            let sb = subconstructions(b);
            let nontrivial = |c: &Construction, w: &Witness| project(c, w).map(|p| !p.sub.is_trivial_leaf()).unwrap_or(false);
            let mut out = Vec::new();
            for wa in sa.iter().filter(|w| nontrivial(a, w)) {
                for wb in sb.iter().filter(|w| nontrivial(b, w)) {
                    out.push(Witness::KeepBoth(Box::new(wa.clone()), Box::new(wb.clone())));
                }
            }
            out.extend(sa.into_iter().map(|w| Witness::KeepLeft(Box::new(w))));
            out.extend(sb.into_iter().map(|w| Witness::KeepRight(Box::new(w))));
            out
        }
        Construction::Extension(base) => {
            let sb = subconstructions(base);
            let mut out: Vec<Witness> = sb.iter().cloned().map(|w| Witness::KeepExtension(Box::new(w))).collect();
            out.extend(sb.into_iter().map(|w| Witness::DropExtension(Box::new(w))));
            out
        }
    }
}

/// The subconstruction a witness selects, and where each kept leaf and kept
/// extension node of `c` ends up in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub sub: Construction,
    pub node_map: BTreeMap<OccurrencePath, OccurrencePath>,
}

pub fn project(c: &Construction, w: &Witness) -> Result<Projection, ConstructionError> {
    fn go(
        c: &Construction,
        w: &Witness,
        cp: OccurrencePath,
        dp: OccurrencePath,
        map: &mut BTreeMap<OccurrencePath, OccurrencePath>,
    ) -> Result<Construction, ConstructionError> {
        match (c, w) {
            (Construction::Leaf(b), Witness::Keep) => {
                map.insert(cp, dp);
                Ok(Construction::Leaf(b.clone()))
            }
            (Construction::FreeProduct(a, b), Witness::KeepBoth(x, y)) => {
                let da = go(a, x, cp.child(Step::L), dp.child(Step::L), map)?;
                let db = go(b, y, cp.child(Step::R), dp.child(Step::R), map)?;
                if da.is_trivial_leaf() || db.is_trivial_leaf() {
                    return Err(ConstructionError::WitnessTrivialOperand(cp));
                }
                Ok(Construction::FreeProduct(Box::new(da), Box::new(db)))
            }
            (Construction::FreeProduct(a, _), Witness::KeepLeft(x)) => go(a, x, cp.child(Step::L), dp, map),
            (Construction::FreeProduct(_, b), Witness::KeepRight(x)) => go(b, x, cp.child(Step::R), dp, map),
            (Construction::Extension(base), Witness::KeepExtension(x)) => {
                map.insert(cp.clone(), dp.clone());
                let d = go(base, x, cp.child(Step::E), dp.child(Step::E), map)?;
                Ok(Construction::extension(d))
            }
            (Construction::Extension(base), Witness::DropExtension(x)) => go(base, x, cp.child(Step::E), dp, map),
            _ => Err(ConstructionError::WitnessShape(cp)),
        }
    }
    let mut node_map = BTreeMap::new();
    let sub = go(c, w, OccurrencePath::root(), OccurrencePath::root(), &mut node_map)?;
    Ok(Projection { sub, node_map })
}

/// The embedding `G(d) -> G(c)`: each generator of `d` goes to the generator
/// of `c` it came from.
pub fn iota(c: &Construction, w: &Witness) -> Result<GenWordMap, ConstructionError> {
    let proj = project(c, w)?;
    let back: BTreeMap<&OccurrencePath, &OccurrencePath> = proj.node_map.iter().map(|(k, v)| (v, k)).collect();
    let mut table = BTreeMap::new();
    for g in proj.sub.generator_ids() {
        let cp = back[&g.path].clone();
        table.insert(g.clone(), Word::letter(GenId { path: cp, slot: g.slot }));
    }
    Ok(GenWordMap { domain: proj.sub, codomain: c.clone(), table })
}

/// The retraction `G(c) -> G(d)`: kept generators go to their copies in `d`,
/// everything else to the identity.
pub fn pi(c: &Construction, w: &Witness) -> Result<GenWordMap, ConstructionError> {
    let proj = project(c, w)?;
    let mut table = BTreeMap::new();
    for g in c.generator_ids() {
        let image = match proj.node_map.get(&g.path) {
            Some(dp) => Word::letter(GenId { path: dp.clone(), slot: g.slot }),
            None => Word::identity(),
        };
        table.insert(g, image);
    }
    Ok(GenWordMap { domain: c.clone(), codomain: proj.sub, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{parse, BlockSpec, Registry};
    use alloc::collections::BTreeSet;
    use alloc::format;
    use alloc::string::String;

    fn reg() -> Registry {
        Registry::new()
            .with(BlockSpec::free_pro_cyclic("A", 3, 1).unwrap())
            .with(BlockSpec::free_pro_cyclic("B", 3, 4).unwrap())
            .with(BlockSpec::trivial("T", 3))
    }

    fn printed(c: &str) -> Vec<String> {
        let c = parse(c, &reg()).unwrap();
        let mut v: Vec<String> = subconstructions(&c).iter().map(|w| format!("{}", project(&c, w).unwrap().sub)).collect();
        v.sort();
        v
    }

    #[test]
    fn subconstruction_examples() {
        assert_eq!(printed("B"), ["B"]);
        assert_eq!(printed("<<B>>"), ["<<B>>", "<B>", "<B>", "B"]);
        assert_eq!(printed("(A * B)"), ["(A * B)", "A", "B"]);
        assert_eq!(printed("(<T> * A)"), ["(<T> * A)", "<T>", "A", "T"]);
    }

    #[test]
    fn witnesses_are_distinct_and_include_full() {
        let c = parse("<(<A> * <(A * B)>)>", &reg()).unwrap();
        let subs = subconstructions(&c);
        let set: BTreeSet<&Witness> = subs.iter().collect();
        assert_eq!(set.len(), subs.len());
        assert!(subs.contains(&Witness::full(&c)));
    }

    #[test]
    fn witness_text_round_trip() {
        let c = parse("<(<A> * <(A * B)>)>", &reg()).unwrap();
        for w in subconstructions(&c) {
            let s = format!("{}", w);
            assert_eq!(s.parse::<Witness>().unwrap(), w);
        }
        assert!("b(k)".parse::<Witness>().is_err());
        assert!("e(k))".parse::<Witness>().is_err());
        assert!("x(k)".parse::<Witness>().is_err());
    }

    #[test]
    fn bad_witnesses_rejected() {
        let r = reg();
        let c = parse("(<T> * A)", &r).unwrap();
        let w: Witness = "b(d(k),k)".parse().unwrap();
        assert!(matches!(project(&c, &w), Err(ConstructionError::WitnessTrivialOperand(_))));
        let w: Witness = "e(k)".parse().unwrap();
        assert!(matches!(project(&c, &w), Err(ConstructionError::WitnessShape(_))));
    }

    #[test]
    fn iota_pi_examples() {
        let r = reg();
        let c = parse("(A * B)", &r).unwrap();
        let full = Witness::full(&c);
        assert_eq!(iota(&c, &full).unwrap(), GenWordMap::identity(&c));
        assert_eq!(pi(&c, &full).unwrap(), GenWordMap::identity(&c));

        let w: Witness = "l(k)".parse().unwrap();
        let i = iota(&c, &w).unwrap();
        assert_eq!(i.render(), [("g0@".into(), "g0@L".into())]);
        let p = pi(&c, &w).unwrap();
        assert_eq!(p.image(&"g0@R".parse().unwrap()).unwrap(), &Word::identity());

        let c = parse("<<B>>", &r).unwrap();
        let w: Witness = "d(e(k))".parse().unwrap();
        let i = iota(&c, &w).unwrap();
        assert_eq!(i.image(&"z@".parse().unwrap()).unwrap().to_string(), "z@E");
        let p = pi(&c, &w).unwrap();
        assert_eq!(p.image(&"z@".parse().unwrap()).unwrap(), &Word::identity());

        let c = parse("<B>", &r).unwrap();
        let p = pi(&c, &"d(k)".parse().unwrap()).unwrap();
        assert_eq!(p.image(&"z@".parse().unwrap()).unwrap(), &Word::identity());
    }

    #[test]
    fn pi_after_iota_is_identity() {
        let c = parse("<(<A> * <(A * B)>)>", &reg()).unwrap();
        for w in subconstructions(&c) {
            let i = iota(&c, &w).unwrap();
            let p = pi(&c, &w).unwrap();
            assert_eq!(p.compose(&i).unwrap(), GenWordMap::identity(&i.domain));
            i.check_theta(81).unwrap();
        }
    }
}
