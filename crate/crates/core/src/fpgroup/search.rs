//! Exact search for a largest abelian subgroup.
//!
//! A largest abelian subgroup may be taken to contain the center `Z`, so the
//! search starts from `Z`. It is split into top-level branches, one per
//! element `x` outside `Z` that is the least element of `<Z, x>` outside `Z`:
//! the branch for `x` covers the abelian subgroups containing `Z` whose least
//! element outside `Z` is `x`. Branches share nothing, so running them in any
//! order or on any number of threads and reducing with [`reduce_results`]
//! gives the same answer.

use alloc::vec;
use alloc::vec::Vec;

use super::{FiniteGroup, Subgroup};

pub struct AbelianSearch<'a> {
    g: &'a FiniteGroup,
    center: State,
    /// For `y` outside the center, the least index in `<Z, y>` outside `Z`.
    min_outside_center: Vec<usize>,
}

struct State {
    elements: Vec<usize>,
    members: Vec<bool>,
    generators: Vec<usize>,
}

impl<'a> AbelianSearch<'a> {
    pub fn new(g: &'a FiniteGroup) -> Self {
        let n = g.order();
        let z = g.center();
        let mut members = vec![false; n];
        for e in &z {
            members[*e] = true;
        }
        let center = State { elements: z.clone(), members, generators: z };
        let mut min_outside_center = vec![usize::MAX; n];
        for (y, slot) in min_outside_center.iter_mut().enumerate() {
            if center.members[y] {
                continue;
            }
            let mut yk = y;
            let mut best = usize::MAX;
            while !center.members[yk] {
                for e in &center.elements {
                    best = best.min(g.mul(*e, yk));
                }
                yk = g.mul(yk, y);
            }
            *slot = best;
        }
        AbelianSearch { g, center, min_outside_center }
    }

    /// Roots of the top-level branches.
    pub fn branches(&self) -> Vec<usize> {
        (1..self.g.order()).filter(|x| self.min_outside_center[*x] == *x).collect()
    }

    /// A maximal (not necessarily maximum) abelian subgroup, built by always
    /// adding the least-index commuting element. Serves as the common floor
    /// of every branch.
    pub fn greedy(&self) -> Subgroup {
        let mut st = self.trivial_state();
        loop {
            let next = (1..self.g.order()).find(|y| !st.members[*y] && st.generators.iter().all(|a| self.g.commute(*a, *y)));
            match next {
                Some(y) => st = self.extend(&st, y),
                None => break,
            }
        }
        Subgroup::from_elements(self.g, st.elements, st.generators)
    }

    fn trivial_state(&self) -> State {
        let mut members = vec![false; self.g.order()];
        members[0] = true;
        State { elements: vec![0], members, generators: Vec::new() }
    }

    /// `<A, x>` for `x` commuting with `A`: the union of cosets `A x^j`.
    fn extend(&self, a: &State, x: usize) -> State {
        let g = self.g;
        let mut elements = a.elements.clone();
        let mut members = a.members.clone();
        let mut xp = x;
        while !members[xp] {
            for e in &a.elements {
                let y = g.mul(*e, xp);
                members[y] = true;
                elements.push(y);
            }
            xp = g.mul(xp, x);
        }
        let mut generators = a.generators.clone();
        generators.push(x);
        State { elements, members, generators }
    }

    fn bound(&self, a: usize, c: usize) -> usize {
        let p = self.g.prime() as usize;
        let q = (a + c) / a;
        let mut k = 1;
        while k * p <= q {
            k *= p;
        }
        a * k
    }

    /// Best abelian subgroup in branch `root` of order strictly above `floor`.
    pub fn search_branch(&self, root: usize, floor: usize) -> Option<Subgroup> {
        let g = self.g;
        let a = self.extend(&self.center, root);
        let c: Vec<usize> = (1..g.order())
            .filter(|y| !a.members[*y] && self.min_outside_center[*y] >= root && g.commute(*y, root))
            .collect();
        let mut best = floor;
        let mut found = None;
        self.descend(&a, c, &mut best, &mut found);
        found
    }

    fn descend(&self, a: &State, c: Vec<usize>, best: &mut usize, found: &mut Option<Subgroup>) {
        let g = self.g;
        if a.elements.len() > *best {
            *best = a.elements.len();
            *found = Some(Subgroup::from_elements(g, a.elements.clone(), a.generators.clone()));
        }
        let mut remaining = c;
        loop {
            if remaining.is_empty() || self.bound(a.elements.len(), remaining.len()) <= *best {
                return;
            }
            let x = remaining[0];
            let next = self.extend(a, x);
            let c_next: Vec<usize> = remaining.iter().copied().filter(|y| !next.members[*y] && g.commute(*y, x)).collect();
            self.descend(&next, c_next, best, found);
            // Exclude x: drop every y whose cyclic group meets the coset xA,
            // since <A, y> would then contain x.
            let x_inv = g.inv(x);
            remaining.retain(|y| {
                let mut yk = *y;
                loop {
                    if a.members[g.mul(x_inv, yk)] {
                        return false;
                    }
                    if yk == 0 {
                        return true;
                    }
                    yk = g.mul(yk, *y);
                }
            });
        }
    }
}

/// Pick the largest subgroup; ties go to the lexicographically smallest
/// sorted element list.
pub fn reduce_results(candidates: impl IntoIterator<Item = Subgroup>) -> Option<Subgroup> {
    let mut best: Option<(usize, Vec<usize>, Subgroup)> = None;
    for s in candidates {
        let key = s.sorted_elements();
        let better = match &best {
            None => true,
            Some((o, k, _)) => s.order() > *o || (s.order() == *o && key < *k),
        };
        if better {
            best = Some((s.order(), key, s));
        }
    }
    best.map(|(_, _, s)| s)
}

/// Order of a largest abelian subgroup, with a witness.
pub fn max_abelian_order(g: &FiniteGroup) -> (usize, Subgroup) {
    let search = AbelianSearch::new(g);
    let floor = search.greedy();
    let found = search.branches().into_iter().filter_map(|r| search.search_branch(r, floor.order()));
    let best = reduce_results(found).unwrap_or(floor);
    (best.order(), best)
}

/// `log_p` of the largest abelian subgroup order.
pub fn l_value(g: &FiniteGroup) -> u32 {
    let (n, _) = max_abelian_order(g);
    let p = g.prime() as usize;
    let mut k = 0;
    let mut m = n;
    while m > 1 {
        m /= p;
        k += 1;
    }
    k
}
