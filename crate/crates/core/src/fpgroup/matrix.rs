use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::GroupError;

/// Unipotent upper-triangular matrix over `F_p`.
///
/// With `bar` set the matrix stands for its class in the quotient by the
/// corner subgroup: entry `(0, n-1)` is kept at zero and products are
/// re-zeroed there.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpMatrix {
    n: usize,
    p: u8,
    bar: bool,
    entries: Vec<u8>,
}

impl FpMatrix {
    pub fn identity(n: usize, p: u8, bar: bool) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        FpMatrix { n, p, bar, entries }
    }

    /// Build from rows; entries are reduced mod `p`.
    pub fn from_rows(rows: &[Vec<i64>], p: u8, bar: bool) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::BadMatrix("matrix must be square and nonempty".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            for v in r {
                entries.push(v.rem_euclid(p as i64) as u8);
            }
        }
        let m = FpMatrix { n, p, bar, entries };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<(), GroupError> {
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                let ok = match i.cmp(&j) {
                    core::cmp::Ordering::Equal => v == 1,
                    core::cmp::Ordering::Greater => v == 0,
                    core::cmp::Ordering::Less => true,
                };
                if !ok {
                    return Err(GroupError::BadMatrix(alloc::format!("entry ({},{}) breaks unipotent upper-triangular shape", i, j)));
                }
            }
        }
        if self.bar && (self.n < 3 || self.get(0, self.n - 1) != 0) {
            return Err(GroupError::BadMatrix("bar matrix needs size >= 3 and a zero corner".into()));
        }
        Ok(())
    }

    /// `I + E_{ij}` (0-based indices, `i < j`).
    pub fn elementary(n: usize, p: u8, bar: bool, i: usize, j: usize) -> Self {
        let mut m = Self::identity(n, p, bar);
        m.entries[i * n + j] = 1;
        m
    }

    /// Unipotent Jordan block of size `n`.
    pub fn jordan(n: usize, p: u8) -> Self {
        let mut m = Self::identity(n, p, false);
        for i in 0..n.saturating_sub(1) {
            m.entries[i * n + i + 1] = 1;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u8 {
        self.p
    }

    pub fn is_bar(&self) -> bool {
        self.bar
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.n == other.n && self.p == other.p && self.bar == other.bar
    }

    /// Plain matrix product, ignoring the bar flag.
    pub fn mul_full(&self, other: &Self) -> Self {
        let n = self.n;
        let p = self.p as u32;
        let mut out = vec![0u8; n * n];
        for i in 0..n {
            for j in i..n {
                let mut acc = 0u32;
                for k in i..=j {
                    acc += self.entries[i * n + k] as u32 * other.entries[k * n + j] as u32;
                }
                out[i * n + j] = (acc % p) as u8;
            }
        }
        FpMatrix { n, p: self.p, bar: self.bar, entries: out }
    }

    /// `xy = yx` (outside the corner for bar matrices), without allocating.
    pub fn commutes_with(&self, other: &Self) -> bool {
        let n = self.n;
        let p = self.p as u32;
        for i in 0..n {
            for j in i + 1..n {
                if self.bar && i == 0 && j == n - 1 {
                    continue;
                }
                let (mut xy, mut yx) = (0u32, 0u32);
                for k in i..=j {
                    xy += self.entries[i * n + k] as u32 * other.entries[k * n + j] as u32;
                    yx += other.entries[i * n + k] as u32 * self.entries[k * n + j] as u32;
                }
                if xy % p != yx % p {
                    return false;
                }
            }
        }
        true
    }

    /// Number of free entries (strictly upper, minus the corner for bar).
    pub fn free_entries(n: usize, bar: bool) -> usize {
        n * (n - 1) / 2 - usize::from(bar && n >= 3)
    }

    /// Free entries read as base-`p` digits, row by row.
    pub fn code(&self) -> u128 {
        let n = self.n;
        let mut c = 0u128;
        for i in 0..n {
            for j in i + 1..n {
                if self.bar && i == 0 && j == n - 1 {
                    continue;
                }
                c = c * self.p as u128 + self.entries[i * n + j] as u128;
            }
        }
        c
    }

    /// `code(self * other)` without building the product.
    pub fn product_code(&self, other: &Self) -> u128 {
        let n = self.n;
        let p = self.p as u32;
        let mut c = 0u128;
        for i in 0..n {
            for j in i + 1..n {
                if self.bar && i == 0 && j == n - 1 {
                    continue;
                }
                let mut acc = 0u32;
                for k in i..=j {
                    acc += self.entries[i * n + k] as u32 * other.entries[k * n + j] as u32;
                }
                c = c * p as u128 + (acc % p) as u128;
            }
        }
        c
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = self.mul_full(other);
        if self.bar {
            m.entries[n_corner(self.n)] = 0;
        }
        m
    }

    pub fn inverse(&self) -> Self {
        // (I + N)^{-1} = sum_k (-N)^k, with N nilpotent of index < n.
        let n = self.n;
        let p = self.p;
        let mut neg_nil = self.clone();
        neg_nil.bar = false;
        for i in 0..n {
            for j in 0..n {
                let v = self.get(i, j);
                let nil = if i == j { 0 } else { v };
                neg_nil.entries[i * n + j] = (p - nil % p) % p ;
            }
        }
        let mut acc = Self::identity(n, p, false);
        let mut term = Self::identity(n, p, false);
        for _ in 1..n {
            term = mat_mul_raw(&term, &neg_nil);
            acc = mat_add_raw(&acc, &term);
        }
        acc.bar = self.bar;
        if self.bar {
            acc.entries[n_corner(n)] = 0;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n, self.p, self.bar)
    }

    /// The same matrix without the bar flag (the zero-fill lift).
    pub fn lift(&self) -> Self {
        FpMatrix { bar: false, ..self.clone() }
    }

    /// Class in the quotient: zero the corner and set the bar flag.
    pub fn project(&self) -> Self {
        let mut m = FpMatrix { bar: true, ..self.clone() };
        m.entries[n_corner(self.n)] = 0;
        m
    }
}

fn n_corner(n: usize) -> usize {
    n - 1
}

fn mat_mul_raw(a: &FpMatrix, b: &FpMatrix) -> FpMatrix {
    let n = a.n;
    let p = a.p as u32;
    let mut out = vec![0u8; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a.entries[i * n + k] as u32;
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = ((out[i * n + j] as u32 + x * b.entries[k * n + j] as u32) % p) as u8;
            }
        }
    }
    FpMatrix { n, p: a.p, bar: false, entries: out }
}

fn mat_add_raw(a: &FpMatrix, b: &FpMatrix) -> FpMatrix {
    let p = a.p as u32;
    let entries = a.entries.iter().zip(&b.entries).map(|(x, y)| ((*x as u32 + *y as u32) % p) as u8).collect();
    FpMatrix { n: a.n, p: a.p, bar: false, entries }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, v) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", v)?;
            }
        }
        write!(f, "]")
    }
}
