//! Finite p-groups of unipotent matrices over `F_p`: the groups `U_m(F_p)`,
//! their quotients by the corner subgroup, cyclic test groups, subgroup
//! closure, discrete logarithms and the largest-abelian-subgroup search.

mod group;
mod matrix;
mod search;
mod unipotent;

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

pub use group::{abelian_dlog, subgroup_closure, FiniteGroup, Subgroup};
pub use matrix::FpMatrix;
pub use search::{l_value, max_abelian_order, reduce_results, AbelianSearch};
pub use unipotent::{max_abelian_log_order, corner_block_subgroup, massey_cocycle};

/// Default limit on the number of enumerated elements.
pub const DEFAULT_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group would exceed the search cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("bad matrix: {0}")]
    BadMatrix(String),
    #[error("bad group parameters: {0}")]
    BadParameters(String),
    #[error("elements {0} and {1} do not commute")]
    NonCommuting(usize, usize),
}

/// Description of a target group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Unitriangular { m: usize, p: u64 },
    BarUnitriangular { m: usize, p: u64 },
    Cyclic { p: u64, k: u32 },
    Custom { p: u64, generators: Vec<Vec<Vec<i64>>>, bar: bool },
}

impl GroupSpec {
    pub fn prime(&self) -> u64 {
        match self {
            GroupSpec::Unitriangular { p, .. }
            | GroupSpec::BarUnitriangular { p, .. }
            | GroupSpec::Cyclic { p, .. }
            | GroupSpec::Custom { p, .. } => *p,
        }
    }

    pub fn build(&self, cap: usize) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupSpec::Unitriangular { m, p } => FiniteGroup::unitriangular(*m, *p, cap),
            GroupSpec::BarUnitriangular { m, p } => FiniteGroup::bar_unitriangular(*m, *p, cap),
            GroupSpec::Cyclic { p, k } => FiniteGroup::cyclic(*p, *k, cap),
            GroupSpec::Custom { p, generators, bar } => {
                if *p < 2 || *p > 251 {
                    return Err(GroupError::BadParameters(alloc::format!("unsupported prime {}", p)));
                }
                let gens = generators
                    .iter()
                    .map(|rows| FpMatrix::from_rows(rows, *p as u8, *bar))
                    .collect::<Result<Vec<_>, _>>()?;
                let n = gens.first().map(|g| g.size()).unwrap_or(2);
                FiniteGroup::from_generators(&gens, FpMatrix::identity(n, *p as u8, *bar), cap)
            }
        }
    }
}
