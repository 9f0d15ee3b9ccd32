//! Truncated p-adic integers and filtration-preserving automorphisms of `Z_p^r`.
//!
//! Everything here is computed modulo `p^N`. A finite target group only sees
//! exponents modulo its exponent, so `N` is normally chosen as the smallest
//! value with `exponent(G) | p^N` (see [`precision_for_exponent`]).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("precision/prime mismatch: ({p1}, N={n1}) vs ({p2}, N={n2})")]
    Mismatch { p1: u64, n1: u32, p2: u64, n2: u32 },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("entry ({row},{col}) must vanish above the diagonal")]
    NotTriangular { row: usize, col: usize },
    #[error("diagonal entry {0} is not a unit mod p")]
    NonUnitDiagonal(usize),
    #[error("index {index} out of range for rank {rank}")]
    OutOfRange { index: usize, rank: usize },
    #[error("{0} is not a principal unit (must be 1 mod p)")]
    NotPrincipal(i64),
    #[error("modulus p^N = {p}^{n} does not fit in 63 bits")]
    Overflow { p: u64, n: u32 },
    #[error("column length {got}, expected {expected}")]
    BadColumn { got: usize, expected: usize },
}

/// `p^n`, checked against overflow of the 63-bit range we use for residues.
pub fn modulus(p: u64, n: u32) -> Result<u64, PadicError> {
    let mut m: u64 = 1;
    for _ in 0..n {
        m = m
            .checked_mul(p)
            .filter(|v| *v < (1 << 62))
            .ok_or(PadicError::Overflow { p, n })?;
    }
    Ok(m)
}

/// Smallest `N >= 1` with `exponent | p^N`. `exponent` must be a power of `p`.
pub fn precision_for_exponent(p: u64, exponent: u64) -> u32 {
    let mut n = 1;
    let mut q = p;
    while q < exponent {
        q *= p;
        n += 1;
    }
    n
}

/// Reduce a signed integer into `[0, m)`.
pub fn reduce_signed(v: i64, m: u64) -> u64 {
    let m = m as i128;
    (((v as i128) % m + m) % m) as u64
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    let m = m as i128;
    Some(((old_s % m + m) % m) as u64)
}

/// An element of `Z/p^N`, viewed as a truncated p-adic integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncatedPadic {
    residue: u64,
    prime: u64,
    precision: u32,
}

impl TruncatedPadic {
    pub fn new(value: i64, prime: u64, precision: u32) -> Result<Self, PadicError> {
        let m = modulus(prime, precision)?;
        Ok(TruncatedPadic { residue: reduce_signed(value, m), prime, precision })
    }

    pub fn zero(prime: u64, precision: u32) -> Result<Self, PadicError> {
        Self::new(0, prime, precision)
    }

    pub fn one(prime: u64, precision: u32) -> Result<Self, PadicError> {
        Self::new(1, prime, precision)
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        // Validated at construction.
        modulus(self.prime, self.precision).unwrap_or(u64::MAX)
    }

    pub fn is_unit(&self) -> bool {
        !self.residue.is_multiple_of(self.prime)
    }

    fn check(&self, other: &Self) -> Result<(), PadicError> {
        if self.prime != other.prime || self.precision != other.precision {
            return Err(PadicError::Mismatch {
                p1: self.prime,
                n1: self.precision,
                p2: other.prime,
                n2: other.precision,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PadicError> {
        self.check(other)?;
        let m = self.modulus();
        Ok(TruncatedPadic { residue: (self.residue + other.residue) % m, ..*self })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PadicError> {
        self.check(other)?;
        Ok(TruncatedPadic { residue: mul_mod(self.residue, other.residue, self.modulus()), ..*self })
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        TruncatedPadic { residue: (m - self.residue) % m, ..*self }
    }

    pub fn inverse(&self) -> Option<Self> {
        inv_mod(self.residue, self.modulus()).map(|r| TruncatedPadic { residue: r, ..*self })
    }

    /// Reduce to a lower precision `n <= N`.
    pub fn truncate(&self, n: u32) -> Result<Self, PadicError> {
        let m = modulus(self.prime, n)?;
        Ok(TruncatedPadic { residue: self.residue % m, prime: self.prime, precision: n })
    }
}

impl fmt::Display for TruncatedPadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.prime, self.precision)
    }
}

/// A truncated p-adic integer congruent to 1 mod p; the values of a cyclotomic
/// character live here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrincipalUnit(TruncatedPadic);

impl PrincipalUnit {
    pub fn new(value: i64, prime: u64, precision: u32) -> Result<Self, PadicError> {
        if reduce_signed(value, prime) != 1 % prime {
            return Err(PadicError::NotPrincipal(value));
        }
        Ok(PrincipalUnit(TruncatedPadic::new(value, prime, precision)?))
    }

    pub fn one(prime: u64, precision: u32) -> Result<Self, PadicError> {
        Self::new(1, prime, precision)
    }

    pub fn value(&self) -> TruncatedPadic {
        self.0
    }

    pub fn residue(&self) -> u64 {
        self.0.residue
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PadicError> {
        Ok(PrincipalUnit(self.0.mul(&other.0)?))
    }

    pub fn inverse(&self) -> Self {
        // Principal units are units.
        PrincipalUnit(self.0.inverse().unwrap_or(self.0))
    }

    /// `self^e` for an integer exponent.
    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { *self };
        let m = base.0.modulus();
        let mut acc = 1 % m;
        let mut b = base.0.residue;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = mul_mod(acc, b, m);
            }
            b = mul_mod(b, b, m);
            k >>= 1;
        }
        PrincipalUnit(TruncatedPadic { residue: acc, ..base.0 })
    }
}

/// An automorphism of `A = Z_1 x ... x Z_r` (each `Z_i = Z_p`) preserving the
/// tail filtration `V^j = span(u_{j+1}, ..., u_r)`, stored modulo `p^N`.
///
/// Column convention: column `i` holds the exponent vector of `alpha(u_i)`
/// over the basis `u_1..u_r`, so `entry(j, i)` is the exponent of `u_j` in
/// `alpha(u_i)`. Filtration preservation makes the matrix lower triangular
/// (`entry(j, i) = 0` for `j < i`) with unit diagonal. With this layout
/// [`AAutMatrix::project_bar`] is the top-left block and
/// [`AAutMatrix::restrict_tail`] the bottom-right block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AAutMatrix {
    rank: usize,
    prime: u64,
    precision: u32,
    // row-major: entries[row * rank + col]
    entries: Vec<u64>,
}

impl AAutMatrix {
    pub fn identity(rank: usize, prime: u64, precision: u32) -> Result<Self, PadicError> {
        let m = modulus(prime, precision)?;
        let mut entries = vec![0; rank * rank];
        for i in 0..rank {
            entries[i * rank + i] = 1 % m;
        }
        Ok(AAutMatrix { rank, prime, precision, entries })
    }

    /// Build from columns (column `i` = exponent vector of `alpha(u_i)`),
    /// validating the invariants.
    pub fn from_columns(columns: &[Vec<i64>], prime: u64, precision: u32) -> Result<Self, PadicError> {
        let rank = columns.len();
        let m = modulus(prime, precision)?;
        let mut entries = vec![0; rank * rank];
        for (i, col) in columns.iter().enumerate() {
            if col.len() != rank {
                return Err(PadicError::BadColumn { got: col.len(), expected: rank });
            }
            for (j, v) in col.iter().enumerate() {
                entries[j * rank + i] = reduce_signed(*v, m);
            }
        }
        let out = AAutMatrix { rank, prime, precision, entries };
        out.validate()?;
        Ok(out)
    }

    /// Like [`AAutMatrix::from_columns`] but without checking the invariants.
    /// Used by tests that need to feed violating matrices into [`AAutMatrix::validate`].
    pub fn from_columns_unchecked(columns: &[Vec<i64>], prime: u64, precision: u32) -> Result<Self, PadicError> {
        let rank = columns.len();
        let m = modulus(prime, precision)?;
        let mut entries = vec![0; rank * rank];
        for (i, col) in columns.iter().enumerate() {
            if col.len() != rank {
                return Err(PadicError::BadColumn { got: col.len(), expected: rank });
            }
            for (j, v) in col.iter().enumerate() {
                entries[j * rank + i] = reduce_signed(*v, m);
            }
        }
        Ok(AAutMatrix { rank, prime, precision, entries })
    }

    pub fn validate(&self) -> Result<(), PadicError> {
        for j in 0..self.rank {
            for i in 0..self.rank {
                if j < i && self.entry(j, i) != 0 {
                    return Err(PadicError::NotTriangular { row: j, col: i });
                }
            }
            if self.entry(j, j).is_multiple_of(self.prime) {
                return Err(PadicError::NonUnitDiagonal(j));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        modulus(self.prime, self.precision).unwrap_or(u64::MAX)
    }

    /// Exponent of `u_row` in `alpha(u_col)` (0-based).
    pub fn entry(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.rank + col]
    }

    /// Exponent vector of `alpha(u_col)` (0-based column).
    pub fn column(&self, col: usize) -> Vec<u64> {
        (0..self.rank).map(|row| self.entry(row, col)).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.rank).all(|j| (0..self.rank).all(|i| self.entry(j, i) == u64::from(i == j)))
    }

    fn check(&self, other: &Self) -> Result<(), PadicError> {
        if self.prime != other.prime || self.precision != other.precision {
            return Err(PadicError::Mismatch {
                p1: self.prime,
                n1: self.precision,
                p2: other.prime,
                n2: other.precision,
            });
        }
        if self.rank != other.rank {
            return Err(PadicError::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    /// `self ∘ other`: column `i` is the exponent vector of `self(other(u_i))`.
    pub fn compose(&self, other: &Self) -> Result<Self, PadicError> {
        self.check(other)?;
        let r = self.rank;
        let m = self.modulus();
        let mut entries = vec![0; r * r];
        for row in 0..r {
            for col in 0..r {
                let mut acc: u128 = 0;
                for k in 0..r {
                    acc += self.entry(row, k) as u128 * other.entry(k, col) as u128;
                }
                entries[row * r + col] = (acc % m as u128) as u64;
            }
        }
        Ok(AAutMatrix { rank: r, prime: self.prime, precision: self.precision, entries })
    }

    /// Inverse by forward substitution on the lower-triangular system.
    pub fn invert(&self) -> Result<Self, PadicError> {
        self.validate()?;
        let r = self.rank;
        let m = self.modulus();
        let mut inv = vec![0u64; r * r];
        for col in 0..r {
            // Solve self * x = e_col, x lower part only (x_row = 0 for row < col).
            for row in col..r {
                let mut rhs: i128 = if row == col { 1 } else { 0 };
                for k in col..row {
                    rhs -= self.entry(row, k) as i128 * inv[k * r + col] as i128;
                }
                let rhs = rhs.rem_euclid(m as i128) as u64;
                let d = inv_mod(self.entry(row, row), m).ok_or(PadicError::NonUnitDiagonal(row))?;
                inv[row * r + col] = mul_mod(rhs, d, m);
            }
        }
        Ok(AAutMatrix { rank: r, prime: self.prime, precision: self.precision, entries: inv })
    }

    /// The induced endomorphism of `Z_1 x ... x Z_k` (top-left `k x k` block).
    /// `k = 0` yields the empty matrix.
    pub fn project_bar(&self, k: usize) -> Result<Self, PadicError> {
        if k > self.rank {
            return Err(PadicError::OutOfRange { index: k, rank: self.rank });
        }
        Ok(self.block(0, k))
    }

    /// The restriction to `Z_{k+1} x ... x Z_r` (bottom-right block).
    pub fn restrict_tail(&self, k: usize) -> Result<Self, PadicError> {
        if k > self.rank {
            return Err(PadicError::OutOfRange { index: k, rank: self.rank });
        }
        Ok(self.block(k, self.rank))
    }

    fn block(&self, from: usize, to: usize) -> Self {
        let r = to - from;
        let mut entries = Vec::with_capacity(r * r);
        for row in from..to {
            for col in from..to {
                entries.push(self.entry(row, col));
            }
        }
        AAutMatrix { rank: r, prime: self.prime, precision: self.precision, entries }
    }

    /// Reduce all entries to precision `n <= N`.
    pub fn truncate(&self, n: u32) -> Result<Self, PadicError> {
        let m = modulus(self.prime, n)?;
        Ok(AAutMatrix {
            rank: self.rank,
            prime: self.prime,
            precision: n,
            entries: self.entries.iter().map(|e| e % m).collect(),
        })
    }

    /// Columns as plain integer vectors, for serialization.
    pub fn to_columns(&self) -> Vec<Vec<u64>> {
        (0..self.rank).map(|c| self.column(c)).collect()
    }
}

impl fmt::Display for AAutMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for row in 0..self.rank {
            if row > 0 {
                write!(f, "; ")?;
            }
            for col in 0..self.rank {
                if col > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.entry(row, col))?;
            }
        }
        write!(f, "] mod {}^{}", self.prime, self.precision)
    }
}
