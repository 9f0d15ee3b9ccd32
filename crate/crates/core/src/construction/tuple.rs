use alloc::vec::Vec;
use core::fmt;

use super::{project, Construction, ConstructionError, OccurrencePath, Step, Witness};
use crate::word::GenId;

/// The chain of extension nodes above one leaf, innermost first.
/// Its `i`-th entry carries the generator `u_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrincipalTuple {
    pub root: OccurrencePath,
    pub z_nodes: Vec<OccurrencePath>,
}

impl PrincipalTuple {
    pub fn rank(&self) -> usize {
        self.z_nodes.len()
    }

    /// Generators `u_1..u_r` of the abelian subgroup.
    pub fn generators(&self) -> Vec<GenId> {
        self.z_nodes.iter().cloned().map(GenId::ext).collect()
    }

    /// Derive the tuple of the leaf at `root`.
    pub fn of_leaf(c: &Construction, root: &OccurrencePath) -> Result<Self, ConstructionError> {
        match c.node(root) {
            Some(Construction::Leaf(_)) => {}
            _ => return Err(ConstructionError::BadPath(root.clone())),
        }
        let z_nodes = (0..root.len())
            .rev()
            .filter(|i| root.steps()[*i] == Step::E)
            .map(|i| root.prefix(i))
            .collect();
        Ok(PrincipalTuple { root: root.clone(), z_nodes })
    }

    /// Check that `self` is the tuple of its root in `c`.
    pub fn check(&self, c: &Construction) -> Result<(), ConstructionError> {
        if Self::of_leaf(c, &self.root)? != *self {
            return Err(ConstructionError::BadPath(self.root.clone()));
        }
        Ok(())
    }
}

impl fmt::Display for PrincipalTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root@{} (", self.root)?;
        for (i, z) in self.z_nodes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "z@{}", z)?;
        }
        write!(f, ")")
    }
}

/// One tuple per leaf, leaves left to right.
pub fn principal_tuples(c: &Construction) -> Vec<PrincipalTuple> {
    c.leaf_paths()
        .iter()
        .map(|p| PrincipalTuple::of_leaf(c, p).expect("leaf path"))
        .collect()
}

/// Reference implementation following the inductive definition: a block has
/// the trivial tuple; a free product has the tuples of its factors; an
/// extension appends its own node to every tuple of the base.
pub fn principal_tuples_inductive(c: &Construction) -> Vec<PrincipalTuple> {
    fn go(c: &Construction, here: &OccurrencePath) -> Vec<PrincipalTuple> {
        match c {
            Construction::Leaf(_) => alloc::vec![PrincipalTuple { root: here.clone(), z_nodes: Vec::new() }],
            Construction::FreeProduct(a, b) => {
                let mut out = go(a, &here.child(Step::L));
                out.extend(go(b, &here.child(Step::R)));
                out
            }
            Construction::Extension(base) => go(base, &here.child(Step::E))
                .into_iter()
                .map(|mut t| {
                    t.z_nodes.push(here.clone());
                    t
                })
                .collect(),
        }
    }
    go(c, &OccurrencePath::root())
}

/// Whether the witness keeps the root leaf of `t`.
pub fn compatible(t: &PrincipalTuple, w: &Witness) -> bool {
    let mut cur = w;
    for s in t.root.steps() {
        cur = match (cur, s) {
            (Witness::KeepBoth(x, _), Step::L) | (Witness::KeepLeft(x), Step::L) => x,
            (Witness::KeepBoth(_, y), Step::R) | (Witness::KeepRight(y), Step::R) => y,
            (Witness::KeepExtension(x), Step::E) | (Witness::DropExtension(x), Step::E) => x,
            _ => return false,
        };
    }
    *cur == Witness::Keep
}

/// The tuple of `d` with the same root: the extension nodes of `t` that `w`
/// keeps, relocated into `d`.
pub fn restrict_tuple(c: &Construction, t: &PrincipalTuple, w: &Witness) -> Result<PrincipalTuple, ConstructionError> {
    if !compatible(t, w) {
        return Err(ConstructionError::Incompatible);
    }
    let proj = project(c, w)?;
    let root = proj.node_map.get(&t.root).cloned().ok_or(ConstructionError::Incompatible)?;
    let z_nodes = t.z_nodes.iter().filter_map(|z| proj.node_map.get(z).cloned()).collect();
    Ok(PrincipalTuple { root, z_nodes })
}
