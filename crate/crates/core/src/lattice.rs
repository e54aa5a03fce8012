//! Finite lattices given by their cover relation.
//!
//! Elements carry opaque string identifiers; everything internal is
//! positional. Order, meet and join tables are computed once at
//! construction, so every query afterwards is a table lookup.

use std::collections::HashMap;
use std::fmt;

use crate::canon::{self, CanonicalForm};
use crate::error::{Error, Result};

/// Positional index of an element inside a [`FiniteLattice`].
pub type Elem = usize;

#[derive(Clone)]
pub struct FiniteLattice {
    ids: Vec<String>,
    index: HashMap<String, Elem>,
    lower: Vec<Vec<Elem>>,
    upper: Vec<Vec<Elem>>,
    leq: Vec<bool>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    /// Elements sorted so that `x < y` implies `x` comes first.
    linear: Vec<Elem>,
    bottom: Elem,
    top: Elem,
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLattice").field("elements", &self.ids).field("covers", &self.cover_pairs_ids()).finish()
    }
}

impl PartialEq for FiniteLattice {
    /// Labelled equality: same identifiers in the same order, same covers.
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.lower == other.lower
    }
}

impl Eq for FiniteLattice {}

impl FiniteLattice {
    /// Validates `covers` over `elements` and caches the order and both
    /// operation tables.
    pub fn build<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self> {
        let ids: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateElement(id.clone()));
            }
        }
        let mut pairs = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            let a = *index.get(a.as_ref()).ok_or_else(|| Error::UnknownElement(a.as_ref().to_string()))?;
            let b = *index.get(b.as_ref()).ok_or_else(|| Error::UnknownElement(b.as_ref().to_string()))?;
            pairs.push((a, b));
        }
        Self::from_index_covers(ids, index, &pairs)
    }

    /// Same as [`build`](Self::build) with covers already given as positions.
    pub fn from_covers(ids: Vec<String>, covers: &[(Elem, Elem)]) -> Result<Self> {
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateElement(id.clone()));
            }
        }
        Self::from_index_covers(ids, index, covers)
    }

    /// Builds a lattice from an order relation given as a predicate; the
    /// covers are obtained by transitive reduction.
    pub fn from_order(ids: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = ids.len();
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !leq(a, b) {
                    continue;
                }
                let between = (0..n).any(|c| c != a && c != b && leq(a, c) && leq(c, b));
                if !between {
                    covers.push((a, b));
                }
            }
        }
        Self::from_covers(ids, &covers)
    }

    fn from_index_covers(ids: Vec<String>, index: HashMap<String, Elem>, covers: &[(Elem, Elem)]) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::EmptyLattice);
        }
        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for &(a, b) in covers {
            if a == b {
                return Err(Error::Cycle(ids[a].clone()));
            }
            if !upper[a].contains(&b) {
                upper[a].push(b);
                lower[b].push(a);
            }
        }
        for v in lower.iter_mut().chain(upper.iter_mut()) {
            v.sort_unstable();
        }

        // Kahn's algorithm; ties resolved by position for determinism.
        let mut indeg: Vec<usize> = lower.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<Elem> = (0..n).filter(|&x| indeg[x] == 0).collect();
        let mut linear = Vec::with_capacity(n);
        while let Some(x) = ready.pop_first() {
            linear.push(x);
            for &y in &upper[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.insert(y);
                }
            }
        }
        if linear.len() != n {
            let stuck = (0..n).find(|&x| indeg[x] > 0).unwrap_or(0);
            return Err(Error::Cycle(ids[stuck].clone()));
        }

        let mut leq = vec![false; n * n];
        for &x in &linear {
            leq[x * n + x] = true;
            for &l in &lower[x] {
                for z in 0..n {
                    if leq[z * n + l] {
                        leq[z * n + x] = true;
                    }
                }
            }
        }
        for &(a, b) in covers {
            let implied = (0..n).any(|c| c != a && c != b && leq[a * n + c] && leq[c * n + b]);
            if implied {
                return Err(Error::NotTransitivelyReduced(ids[a].clone(), ids[b].clone()));
            }
        }

        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in x..n {
                let m = greatest(n, |z| leq[z * n + x] && leq[z * n + y], |a, b| leq[a * n + b])
                    .ok_or_else(|| Error::NotALattice(ids[x].clone(), ids[y].clone(), "meet"))?;
                let j = greatest(n, |z| leq[x * n + z] && leq[y * n + z], |a, b| leq[b * n + a])
                    .ok_or_else(|| Error::NotALattice(ids[x].clone(), ids[y].clone(), "join"))?;
                meet[x * n + y] = m;
                meet[y * n + x] = m;
                join[x * n + y] = j;
                join[y * n + x] = j;
            }
        }
        let bottom = linear[0];
        let top = linear[n - 1];
        Ok(FiniteLattice { ids, index, lower, upper, leq, meet, join, linear, bottom, top })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, x: Elem) -> &str {
        &self.ids[x]
    }

    pub fn elem(&self, id: &str) -> Result<Elem> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn elems<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<Elem>> {
        ids.iter().map(|s| self.elem(s.as_ref())).collect()
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    #[inline]
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.leq[x * self.len() + y]
    }

    #[inline]
    pub fn lt(&self, x: Elem, y: Elem) -> bool {
        x != y && self.leq(x, y)
    }

    #[inline]
    pub fn comparable(&self, x: Elem, y: Elem) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    #[inline]
    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.meet[x * self.len() + y]
    }

    #[inline]
    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.join[x * self.len() + y]
    }

    /// Meet by identifier.
    pub fn meet_of(&self, x: &str, y: &str) -> Result<&str> {
        let m = self.meet(self.elem(x)?, self.elem(y)?);
        Ok(self.id(m))
    }

    /// Join by identifier.
    pub fn join_of(&self, x: &str, y: &str) -> Result<&str> {
        let j = self.join(self.elem(x)?, self.elem(y)?);
        Ok(self.id(j))
    }

    pub fn lower_covers(&self, x: Elem) -> &[Elem] {
        &self.lower[x]
    }

    pub fn upper_covers(&self, x: Elem) -> &[Elem] {
        &self.upper[x]
    }

    /// `(lower covers, upper covers)` of the element named `id`.
    pub fn covers_of(&self, id: &str) -> Result<(Vec<&str>, Vec<&str>)> {
        let x = self.elem(id)?;
        let name = |v: &[Elem]| v.iter().map(|&e| self.id(e)).collect::<Vec<_>>();
        Ok((name(&self.lower[x]), name(&self.upper[x])))
    }

    #[inline]
    pub fn covers(&self, x: Elem, y: Elem) -> bool {
        self.upper[x].contains(&y)
    }

    /// All cover pairs `(lower, upper)` in positional order.
    pub fn cover_pairs(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for &b in &self.upper[a] {
                out.push((a, b));
            }
        }
        out
    }

    fn cover_pairs_ids(&self) -> Vec<(&str, &str)> {
        self.cover_pairs().into_iter().map(|(a, b)| (self.id(a), self.id(b))).collect()
    }

    /// A linear extension of the order.
    pub fn linear_extension(&self) -> &[Elem] {
        &self.linear
    }

    pub fn join_irreducibles(&self) -> Vec<Elem> {
        self.elements().filter(|&x| self.lower[x].len() == 1).collect()
    }

    pub fn meet_irreducibles(&self) -> Vec<Elem> {
        self.elements().filter(|&x| self.upper[x].len() == 1).collect()
    }

    #[inline]
    pub fn is_join_irreducible(&self, x: Elem) -> bool {
        self.lower[x].len() == 1
    }

    #[inline]
    pub fn is_meet_irreducible(&self, x: Elem) -> bool {
        self.upper[x].len() == 1
    }

    pub fn interval(&self, lo: Elem, hi: Elem) -> Result<Interval> {
        if !self.leq(lo, hi) {
            return Err(Error::NotComparable(self.id(lo).into(), self.id(hi).into()));
        }
        let members = self.elements().filter(|&u| self.leq(lo, u) && self.leq(u, hi)).collect();
        Ok(Interval { lo, hi, members })
    }

    pub fn is_chain_interval(&self, lo: Elem, hi: Elem) -> Result<bool> {
        let iv = self.interval(lo, hi)?;
        Ok(self.is_chain(&iv.members))
    }

    pub fn is_chain(&self, set: &[Elem]) -> bool {
        set.iter().enumerate().all(|(k, &a)| set[k + 1..].iter().all(|&b| self.comparable(a, b)))
    }

    pub fn is_chain_lattice(&self) -> bool {
        self.elements().all(|x| self.upper[x].len() <= 1)
    }

    /// For all a, b: a ∧ b ≺ a implies b ≺ a ∨ b.
    pub fn is_semimodular(&self) -> bool {
        self.elements().all(|a| {
            self.elements().all(|b| {
                let m = self.meet(a, b);
                !self.covers(m, a) || self.covers(b, self.join(a, b))
            })
        })
    }

    /// Join-irreducibles contain no three pairwise incomparable elements.
    pub fn is_slim(&self) -> bool {
        let jir = self.join_irreducibles();
        for (p, &a) in jir.iter().enumerate() {
            for (q, &b) in jir.iter().enumerate().skip(p + 1) {
                if self.comparable(a, b) {
                    continue;
                }
                for &c in &jir[q + 1..] {
                    if !self.comparable(a, c) && !self.comparable(b, c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z))))
        })
    }

    /// Unordered incomparable pairs `(a, b)` with `a < b` positionally.
    pub fn incomparable_pairs(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in a + 1..self.len() {
                if !self.comparable(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_sublattice(&self, set: &[Elem]) -> Result<bool> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut member = vec![false; self.len()];
        for &x in set {
            member[x] = true;
        }
        Ok(set.iter().all(|&a| set.iter().all(|&b| member[self.meet(a, b)] && member[self.join(a, b)])))
    }

    /// Smallest sublattice containing `set`, as a membership mask.
    pub fn sublattice_closure(&self, set: &[Elem]) -> Vec<bool> {
        let mut member = vec![false; self.len()];
        let mut list: Vec<Elem> = Vec::new();
        for &x in set {
            if !member[x] {
                member[x] = true;
                list.push(x);
            }
        }
        let mut k = 0;
        while k < list.len() {
            let a = list[k];
            for idx in 0..=k {
                let b = list[idx];
                for c in [self.meet(a, b), self.join(a, b)] {
                    if !member[c] {
                        member[c] = true;
                        list.push(c);
                    }
                }
            }
            k += 1;
        }
        member
    }

    pub fn principal_ideal(&self, x: Elem) -> Vec<Elem> {
        self.elements().filter(|&u| self.leq(u, x)).collect()
    }

    /// The subposet on `keep` with the induced order. Fails with
    /// `NotALattice` when the subposet is not a lattice.
    pub fn induced(&self, keep: &[Elem]) -> Result<FiniteLattice> {
        let ids = keep.iter().map(|&x| self.ids[x].clone()).collect();
        FiniteLattice::from_order(ids, |a, b| self.leq(keep[a], keep[b]))
    }

    /// The order dual on the same identifiers.
    pub fn dual(&self) -> FiniteLattice {
        let covers: Vec<(Elem, Elem)> = self.cover_pairs().into_iter().map(|(a, b)| (b, a)).collect();
        FiniteLattice::from_covers(self.ids.clone(), &covers).expect("dual of a lattice is a lattice")
    }

    /// Copy with identifiers renamed by `rename`, keeping positions.
    pub fn relabel(&self, rename: impl Fn(&str) -> String) -> Result<FiniteLattice> {
        let ids = self.ids.iter().map(|s| rename(s)).collect();
        FiniteLattice::from_covers(ids, &self.cover_pairs())
    }

    /// Copy with positions permuted: new position `k` holds old element `perm[k]`.
    pub fn permuted(&self, perm: &[Elem]) -> FiniteLattice {
        let mut inv = vec![0; self.len()];
        for (k, &old) in perm.iter().enumerate() {
            inv[old] = k;
        }
        let ids = perm.iter().map(|&x| self.ids[x].clone()).collect();
        let covers: Vec<_> = self.cover_pairs().into_iter().map(|(a, b)| (inv[a], inv[b])).collect();
        FiniteLattice::from_covers(ids, &covers).expect("permutation preserves validity")
    }

    /// Length of a longest chain (number of covers along it).
    pub fn length(&self) -> usize {
        let mut height = vec![0usize; self.len()];
        for &x in &self.linear {
            height[x] = self.lower[x].iter().map(|&l| height[l] + 1).max().unwrap_or(0);
        }
        height[self.top]
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canon::canonical_form(self.len(), &self.lower, &self.upper, |a, b| self.leq(a, b))
    }

    /// True when some bijection preserves the order (backtracking; used as
    /// an independent check on [`canonical_form`](Self::canonical_form)).
    pub fn is_isomorphic(&self, other: &FiniteLattice) -> bool {
        canon::brute_isomorphic(self.len(), |a, b| self.leq(a, b), other.len(), |a, b| other.leq(a, b))
    }
}

fn greatest(n: usize, member: impl Fn(usize) -> bool, below: impl Fn(usize, usize) -> bool) -> Option<usize> {
    let set: Vec<usize> = (0..n).filter(|&z| member(z)).collect();
    set.iter().copied().find(|&m| set.iter().all(|&z| below(z, m)))
}

/// A closed interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Elem,
    pub hi: Elem,
    pub members: Vec<Elem>,
}

/// A few standard small lattices used throughout tests and fixtures.
pub mod standard {
    use super::FiniteLattice;

    pub fn chain(n: usize) -> FiniteLattice {
        let ids: Vec<String> = (0..n).map(|k| k.to_string()).collect();
        let covers: Vec<(usize, usize)> = (1..n).map(|k| (k - 1, k)).collect();
        FiniteLattice::from_covers(ids, &covers).expect("chain")
    }

    /// 0 < x < z < 1 and 0 < y < 1.
    pub fn n5() -> FiniteLattice {
        FiniteLattice::build(&["0", "x", "y", "z", "1"], &[("0", "x"), ("x", "z"), ("z", "1"), ("0", "y"), ("y", "1")])
            .expect("N5")
    }

    pub fn m3() -> FiniteLattice {
        FiniteLattice::build(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        .expect("M3")
    }

    /// Four-element Boolean lattice.
    pub fn b2() -> FiniteLattice {
        FiniteLattice::build(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]).expect("B2")
    }
}
