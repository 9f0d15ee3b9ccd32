//! Degree-1 and degree-2 mod-p cohomology of constructions (odd `p`), and
//! exact symbol lengths in degree 2 by breadth-first search over `H^2`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::construction::{BlockKind, BlockSpec, Construction, OccurrencePath, Step};

/// Default limit on `|H^2|` (and on `|H^1|`) for exact symbol lengths.
pub const DEFAULT_STATE_CAP: usize = 59_049;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the cohomology oracle needs an odd prime (got {0})")]
    EvenPrime(u64),
    #[error("block `{0}` has no cohomology data")]
    Unsupported(String),
    #[error("demushkin block `{0}` has an odd number of generators")]
    OddDemushkin(String),
    #[error("cup table is not alternating at ({0}, {1})")]
    NotAlternating(usize, usize),
    #[error("bad cup table: {0}")]
    BadShape(String),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("{what} has {size} elements, over the cap of {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: usize },
    #[error("ring is not an extension ring")]
    NotExtension,
    #[error("vector has length {got}, expected {expected}")]
    BadVector { got: usize, expected: usize },
}

/// How the basis of a ring was assembled, kept for restriction maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingShape {
    Block,
    /// `H^i = H^i(left) + H^i(right)`, left first.
    FreeProduct { left_d1: usize, left_d2: usize },
    /// `H^1 = Inf(H^1 base) + <beta>`, `H^2 = Inf(H^2 base) + beta ∪ Inf(H^1 base)`.
    Extension { base_d1: usize, base_d2: usize },
}

/// `H^1`, `H^2` and the cup product `H^1 x H^1 -> H^2` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohRing12 {
    pub p: u64,
    pub d1: usize,
    pub d2: usize,
    /// `cup[i * d1 + j]` is `e_i ∪ e_j`.
    pub cup: Vec<Vec<u64>>,
    pub h1_labels: Vec<String>,
    pub h2_labels: Vec<String>,
    pub shape: RingShape,
}

impl CohRing12 {
    /// Build and check the alternating property.
    pub fn new(p: u64, d1: usize, d2: usize, cup: Vec<Vec<u64>>, h1_labels: Vec<String>, h2_labels: Vec<String>) -> Result<Self, OracleError> {
        if p.is_multiple_of(2) {
            return Err(OracleError::EvenPrime(p));
        }
        if cup.len() != d1 * d1 || cup.iter().any(|v| v.len() != d2) {
            return Err(OracleError::BadShape(format!("expected {} vectors of length {}", d1 * d1, d2)));
        }
        if h1_labels.len() != d1 || h2_labels.len() != d2 {
            return Err(OracleError::BadShape("label count does not match the dimensions".into()));
        }
        let cup = cup.into_iter().map(|v| v.into_iter().map(|x| x % p).collect()).collect();
        let r = CohRing12 { p, d1, d2, cup, h1_labels, h2_labels, shape: RingShape::Block };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        for i in 0..self.d1 {
            for j in 0..self.d1 {
                let a = self.cup_basis(i, j);
                let b = self.cup_basis(j, i);
                let ok = a.iter().zip(b).all(|(x, y)| (x + y) % self.p == 0);
                if !ok || (i == j && a.iter().any(|x| *x != 0)) {
                    return Err(OracleError::NotAlternating(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn cup_basis(&self, i: usize, j: usize) -> &[u64] {
        &self.cup[i * self.d1 + j]
    }

    /// `a ∪ b` for arbitrary classes of degree 1.
    pub fn cup(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; self.d2];
        for (i, ai) in a.iter().enumerate().filter(|(_, v)| **v != 0) {
            for (j, bj) in b.iter().enumerate().filter(|(_, v)| **v != 0) {
                let c = ai * bj % p;
                for (o, v) in out.iter_mut().zip(self.cup_basis(i, j)) {
                    *o = (*o + c * v) % p;
                }
            }
        }
        out
    }

    fn trivial(p: u64) -> Self {
        CohRing12 { p, d1: 0, d2: 0, cup: Vec::new(), h1_labels: Vec::new(), h2_labels: Vec::new(), shape: RingShape::Block }
    }
}

fn at(label: &str, path: &OccurrencePath) -> String {
    format!("{}@{}", label, path)
}

/// The ring of one block; labels are attached at `path`.
pub fn block_ring(b: &BlockSpec, path: &OccurrencePath) -> Result<CohRing12, OracleError> {
    let p = b.prime;
    if p.is_multiple_of(2) {
        return Err(OracleError::EvenPrime(p));
    }
    let names = b.generator_names();
    match &b.kind {
        BlockKind::Trivial => Ok(CohRing12::trivial(p)),
        BlockKind::FreeProCyclic { .. } => CohRing12::new(p, 1, 0, vec![Vec::new()], vec![at(&format!("chi({})", names[0]), path)], Vec::new()),
        BlockKind::Demushkin { d, .. } => {
            if d % 2 == 1 {
                return Err(OracleError::OddDemushkin(b.id.clone()));
            }
            let mut cup = vec![vec![0u64]; d * d];
            for k in 0..d / 2 {
                let (i, j) = (2 * k, 2 * k + 1);
                cup[i * d + j] = vec![1];
                cup[j * d + i] = vec![p - 1];
            }
            let h1 = names.iter().map(|n| at(&format!("chi({})", n), path)).collect();
            CohRing12::new(p, *d, 1, cup, h1, vec![at("omega", path)])
        }
        BlockKind::Custom { ring: Some(r), .. } => {
            let cup = r.cup.iter().flat_map(|row| row.iter().cloned()).collect();
            let h1 = (0..r.d1).map(|i| at(&format!("a{}", i + 1), path)).collect();
            let h2 = (0..r.d2).map(|i| at(&format!("w{}", i + 1), path)).collect();
            CohRing12::new(p, r.d1, r.d2, cup, h1, h2)
        }
        BlockKind::Custom { ring: None, .. } | BlockKind::SignOfOrderTwo => Err(OracleError::Unsupported(b.id.clone())),
    }
}

/// The connected sum: direct sums in both degrees, cross cups zero.
pub fn free_product_ring(a: &CohRing12, b: &CohRing12) -> Result<CohRing12, OracleError> {
    if a.p != b.p {
        return Err(OracleError::PrimeMismatch(a.p, b.p));
    }
    let (d1, d2) = (a.d1 + b.d1, a.d2 + b.d2);
    let mut cup = vec![vec![0u64; d2]; d1 * d1];
    for i in 0..a.d1 {
        for j in 0..a.d1 {
            cup[i * d1 + j][..a.d2].copy_from_slice(a.cup_basis(i, j));
        }
    }
    for i in 0..b.d1 {
        for j in 0..b.d1 {
            cup[(a.d1 + i) * d1 + a.d1 + j][a.d2..].copy_from_slice(b.cup_basis(i, j));
        }
    }
    let h1_labels = a.h1_labels.iter().chain(&b.h1_labels).cloned().collect();
    let h2_labels = a.h2_labels.iter().chain(&b.h2_labels).cloned().collect();
    Ok(CohRing12 { p: a.p, d1, d2, cup, h1_labels, h2_labels, shape: RingShape::FreeProduct { left_d1: a.d1, left_d2: a.d2 } })
}

/// The ring of `Z x| G` from that of `G`: a new class `beta` in degree 1,
/// and `beta ∪ Inf(chi_i)` for each degree-1 class of the base in degree 2.
pub fn extension_ring(base: &CohRing12, path: &OccurrencePath) -> Result<CohRing12, OracleError> {
    let p = base.p;
    if p.is_multiple_of(2) {
        return Err(OracleError::EvenPrime(p));
    }
    let (bd1, bd2) = (base.d1, base.d2);
    let (d1, d2) = (bd1 + 1, bd2 + bd1);
    let beta = bd1;
    let mut cup = vec![vec![0u64; d2]; d1 * d1];
    for i in 0..bd1 {
        for j in 0..bd1 {
            cup[i * d1 + j][..bd2].copy_from_slice(base.cup_basis(i, j));
        }
        cup[beta * d1 + i][bd2 + i] = 1;
        cup[i * d1 + beta][bd2 + i] = p - 1;
    }
    let beta_label = at("beta", path);
    let mut h1_labels = base.h1_labels.clone();
    h1_labels.push(beta_label.clone());
    let mut h2_labels = base.h2_labels.clone();
    h2_labels.extend(base.h1_labels.iter().map(|l| format!("{} ∪ {}", beta_label, l)));
    Ok(CohRing12 { p, d1, d2, cup, h1_labels, h2_labels, shape: RingShape::Extension { base_d1: bd1, base_d2: bd2 } })
}

/// Ring of a construction by structural recursion.
pub fn ring_of(c: &Construction) -> Result<CohRing12, OracleError> {
    fn go(c: &Construction, here: OccurrencePath) -> Result<CohRing12, OracleError> {
        match c {
            Construction::Leaf(b) => block_ring(b, &here),
            Construction::FreeProduct(a, b) => free_product_ring(&go(a, here.child(Step::L))?, &go(b, here.child(Step::R))?),
            Construction::Extension(base) => extension_ring(&go(base, here.child(Step::E))?, &here),
        }
    }
    go(c, OccurrencePath::root())
}

fn check_len(r: &CohRing12, omega: &[u64]) -> Result<(), OracleError> {
    if omega.len() != r.d2 {
        return Err(OracleError::BadVector { got: omega.len(), expected: r.d2 });
    }
    Ok(())
}

/// Restriction of a degree-2 class of an extension ring to the base: keep
/// the inflated coordinates, drop the `beta` part.
pub fn restriction_to_base(r: &CohRing12, omega: &[u64]) -> Result<Vec<u64>, OracleError> {
    check_len(r, omega)?;
    match r.shape {
        RingShape::Extension { base_d2, .. } => Ok(omega[..base_d2].to_vec()),
        _ => Err(OracleError::NotExtension),
    }
}

/// Restrictions of a degree-2 class of a free-product ring to the two factors.
pub fn restriction_to_factors(r: &CohRing12, omega: &[u64]) -> Result<(Vec<u64>, Vec<u64>), OracleError> {
    check_len(r, omega)?;
    match r.shape {
        RingShape::FreeProduct { left_d2, .. } => Ok((omega[..left_d2].to_vec(), omega[left_d2..].to_vec())),
        _ => Err(OracleError::BadShape("ring is not a free-product ring".into())),
    }
}

/// Degree-2 class `Inf(omega_base)` in an extension ring.
pub fn inflate(r: &CohRing12, omega_base: &[u64]) -> Result<Vec<u64>, OracleError> {
    match r.shape {
        RingShape::Extension { base_d2, .. } => {
            if omega_base.len() != base_d2 {
                return Err(OracleError::BadVector { got: omega_base.len(), expected: base_d2 });
            }
            let mut out = omega_base.to_vec();
            out.resize(r.d2, 0);
            Ok(out)
        }
        _ => Err(OracleError::NotExtension),
    }
}

fn checked_pow(p: u64, e: usize, cap: usize, what: &'static str) -> Result<usize, OracleError> {
    let mut n: u128 = 1;
    for _ in 0..e {
        n *= p as u128;
        if n > cap as u128 {
            return Err(OracleError::CapExceeded { what, size: n.saturating_mul(p as u128), cap });
        }
    }
    Ok(n as usize)
}

pub fn encode(v: &[u64], p: u64) -> usize {
    v.iter().rev().fold(0usize, |acc, x| acc * p as usize + *x as usize)
}

pub fn decode(mut code: usize, len: usize, p: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % p as usize) as u64);
        code /= p as usize;
    }
    out
}

fn add_codes(a: usize, b: usize, len: usize, p: u64) -> usize {
    let (mut a, mut b) = (a, b);
    let p = p as usize;
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..len {
        out += ((a % p + b % p) % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

/// Codes of all nonzero symbols `a ∪ b`, sorted.
pub fn symbols(r: &CohRing12, cap: usize) -> Result<Vec<usize>, OracleError> {
    let n1 = checked_pow(r.p, r.d1, cap, "H^1")?;
    let n2 = checked_pow(r.p, r.d2, cap, "H^2")?;
    let mut is_symbol = vec![false; n2];
    for code in 1..n1 {
        let a = decode(code, r.d1, r.p);
        // a ∪ (-) is linear: its image is the span of a ∪ e_j
        let rows: Vec<usize> = (0..r.d1)
            .map(|j| {
                let mut e = vec![0u64; r.d1];
                e[j] = 1;
                encode(&r.cup(&a, &e), r.p)
            })
            .filter(|c| *c != 0)
            .collect();
        let mut span = vec![0usize];
        let mut seen = vec![false; n2];
        seen[0] = true;
        for row in rows {
            if seen[row] {
                continue;
            }
            let mut next = span.clone();
            for s in &span {
                let mut x = *s;
                for _ in 1..r.p {
                    x = add_codes(x, row, r.d2, r.p);
                    if !seen[x] {
                        seen[x] = true;
                        next.push(x);
                    }
                }
            }
            span = next;
        }
        for s in span {
            is_symbol[s] = true;
        }
    }
    Ok((1..n2).filter(|c| is_symbol[*c]).collect())
}

/// Symbol length of every class of `H^2`, indexed by code; `None` where the
/// class is not a sum of symbols.
pub fn syml_table(r: &CohRing12, cap: usize) -> Result<Vec<Option<u32>>, OracleError> {
    let n2 = checked_pow(r.p, r.d2, cap, "H^2")?;
    let s = symbols(r, cap)?;
    let mut dist = vec![None; n2];
    dist[0] = Some(0);
    let mut frontier = vec![0usize];
    let mut k = 0;
    while !frontier.is_empty() {
        k += 1;
        let mut next = Vec::new();
        for x in &frontier {
            for y in &s {
                let z = add_codes(*x, *y, r.d2, r.p);
                if dist[z].is_none() {
                    dist[z] = Some(k);
                    next.push(z);
                }
            }
        }
        frontier = next;
    }
    Ok(dist)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Syml {
    Finite(u32),
    NotReachable,
}

pub fn syml_exact(r: &CohRing12, omega: &[u64], cap: usize) -> Result<Syml, OracleError> {
    check_len(r, omega)?;
    let table = syml_table(r, cap)?;
    let v: Vec<u64> = omega.iter().map(|x| x % r.p).collect();
    Ok(table[encode(&v, r.p)].map(Syml::Finite).unwrap_or(Syml::NotReachable))
}

/// Largest symbol length over `H^2`.
pub fn max_syml(r: &CohRing12, cap: usize) -> Result<Syml, OracleError> {
    let table = syml_table(r, cap)?;
    Ok(table.iter().map(|d| d.map(Syml::Finite).unwrap_or(Syml::NotReachable)).max().unwrap_or(Syml::Finite(0)))
}
