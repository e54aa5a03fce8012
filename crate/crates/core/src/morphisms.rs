//! Lattice homomorphisms: embeddings, retractions and retracts.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};

/// Largest lattice accepted by the retraction enumerators.
pub const RETRACTION_SIZE_BOUND: usize = 14;

/// A total map between the elements of two lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap<'a> {
    pub source: &'a FiniteLattice,
    pub target: &'a FiniteLattice,
    pub assignment: Vec<Elem>,
}

impl<'a> LatticeMap<'a> {
    pub fn new(source: &'a FiniteLattice, target: &'a FiniteLattice, assignment: Vec<Elem>) -> Self {
        assert_eq!(assignment.len(), source.len(), "assignment must be total");
        LatticeMap { source, target, assignment }
    }

    pub fn identity(l: &'a FiniteLattice) -> Self {
        LatticeMap::new(l, l, l.elements().collect())
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.assignment[x]
    }

    pub fn is_homomorphism(&self) -> bool {
        let (s, t, f) = (self.source, self.target, &self.assignment);
        s.elements().all(|x| {
            s.elements().all(|y| f[s.meet(x, y)] == t.meet(f[x], f[y]) && f[s.join(x, y)] == t.join(f[x], f[y]))
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.assignment.iter().all(|&c| !std::mem::replace(&mut seen[c], true))
    }

    /// Sorted, deduplicated image.
    pub fn image(&self) -> Vec<Elem> {
        let set: BTreeSet<Elem> = self.assignment.iter().copied().collect();
        set.into_iter().collect()
    }

    pub fn to_json(&self, source_ref: &str, target_ref: &str) -> Value {
        let mut assignment = Map::new();
        for x in self.source.elements() {
            assignment.insert(self.source.id(x).into(), self.target.id(self.assignment[x]).into());
        }
        json!({"source": source_ref, "target": target_ref, "assignment": assignment})
    }
}

/// Injective lattice homomorphism. Bounds need not be preserved.
pub fn is_embedding(m: &LatticeMap) -> bool {
    m.is_injective() && m.is_homomorphism()
}

/// An idempotent endomorphism together with its image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Retraction<'a> {
    pub map: LatticeMap<'a>,
    pub image: Vec<Elem>,
}

impl<'a> Retraction<'a> {
    fn new(l: &'a FiniteLattice, assignment: Vec<Elem>) -> Self {
        let map = LatticeMap::new(l, l, assignment);
        let image = map.image();
        Retraction { map, image }
    }
}

/// Direct check of every retraction axiom, sharing no code with the search.
pub fn validate_retraction(l: &FiniteLattice, f: &[Elem]) -> std::result::Result<(), String> {
    if f.len() != l.len() || f.iter().any(|&c| c >= l.len()) {
        return Err("not a total self-map".into());
    }
    for x in l.elements() {
        if f[f[x]] != f[x] {
            return Err(format!("not idempotent at {}", l.id(x)));
        }
        for y in l.elements() {
            if f[l.meet(x, y)] != l.meet(f[x], f[y]) {
                return Err(format!("meet of {} and {} not preserved", l.id(x), l.id(y)));
            }
            if f[l.join(x, y)] != l.join(f[x], f[y]) {
                return Err(format!("join of {} and {} not preserved", l.id(x), l.id(y)));
            }
        }
    }
    let fixed: Vec<Elem> = l.elements().filter(|&x| f[x] == x).collect();
    let image: BTreeSet<Elem> = f.iter().copied().collect();
    if fixed != image.into_iter().collect::<Vec<_>>() {
        return Err("image differs from the fixed points".into());
    }
    Ok(())
}

struct Search<'a> {
    source: &'a FiniteLattice,
    target: &'a FiniteLattice,
    order: Vec<Elem>,
    /// Incomparable pairs of the source grouped by their join.
    join_pairs: Vec<Vec<(Elem, Elem)>>,
    domains: Vec<Vec<Elem>>,
    injective: bool,
    idempotent: bool,
}

impl<'a> Search<'a> {
    fn new(source: &'a FiniteLattice, target: &'a FiniteLattice, domains: Vec<Vec<Elem>>) -> Self {
        let order = source.linear_extension().to_vec();
        let mut join_pairs = vec![Vec::new(); source.len()];
        for (x, y) in source.incomparable_pairs() {
            join_pairs[source.join(x, y)].push((x, y));
        }
        Search { source, target, order, join_pairs, domains, injective: false, idempotent: false }
    }

    fn run(&self, visit: &mut dyn FnMut(&[Elem]) -> ControlFlow<()>) {
        let n = self.source.len();
        let mut f = vec![usize::MAX; n];
        let mut used = vec![false; self.target.len()];
        let _ = self.go(0, &mut f, &mut used, visit);
    }

    fn go(
        &self,
        k: usize,
        f: &mut [Elem],
        used: &mut [bool],
        visit: &mut dyn FnMut(&[Elem]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if k == self.order.len() {
            return visit(f);
        }
        let x = self.order[k];
        let forced_fixed = self.idempotent && self.order[..k].iter().any(|&y| f[y] == x);
        for &c in &self.domains[x] {
            if (self.injective && used[c]) || (forced_fixed && c != x) || !self.consistent(k, x, c, f) {
                continue;
            }
            f[x] = c;
            used[c] = true;
            let r = self.go(k + 1, f, used, visit);
            used[c] = false;
            f[x] = usize::MAX;
            r?;
        }
        ControlFlow::Continue(())
    }

    fn consistent(&self, k: usize, x: Elem, c: Elem, f: &[Elem]) -> bool {
        let (s, t) = (self.source, self.target);
        if self.idempotent && c != x && f[c] != usize::MAX && f[c] != c {
            return false;
        }
        for &y in &self.order[..k] {
            if t.meet(c, f[y]) != f[s.meet(x, y)] {
                return false;
            }
        }
        self.join_pairs[x].iter().all(|&(y, z)| t.join(f[y], f[z]) == c)
    }
}

/// Calls `visit` on every embedding `K → L`; with a constraint `(A, S)` only
/// those mapping `A` into `S`. Stops early on `Break`.
pub fn for_each_embedding(
    k: &FiniteLattice,
    l: &FiniteLattice,
    constraint: Option<(&[Elem], &[Elem])>,
    mut visit: impl FnMut(&[Elem]) -> ControlFlow<()>,
) {
    if k.len() > l.len() {
        return;
    }
    let all: Vec<Elem> = l.elements().collect();
    let mut domains = vec![all; k.len()];
    if let Some((a, s)) = constraint {
        let mut s = s.to_vec();
        s.sort_unstable();
        s.dedup();
        for &x in a {
            domains[x] = s.clone();
        }
    }
    let mut search = Search::new(k, l, domains);
    search.injective = true;
    search.run(&mut visit);
}

pub fn enumerate_embeddings<'a>(
    k: &'a FiniteLattice,
    l: &'a FiniteLattice,
    constraint: Option<(&[Elem], &[Elem])>,
) -> Vec<LatticeMap<'a>> {
    let mut out = Vec::new();
    for_each_embedding(k, l, constraint, |f| {
        out.push(LatticeMap::new(k, l, f.to_vec()));
        ControlFlow::Continue(())
    });
    out
}

fn check_bound(l: &FiniteLattice) -> Result<()> {
    if l.len() > RETRACTION_SIZE_BOUND {
        return Err(Error::SizeBound { size: l.len(), bound: RETRACTION_SIZE_BOUND });
    }
    Ok(())
}

/// Calls `visit` on the assignment of every retraction of `l`.
pub fn for_each_retraction(l: &FiniteLattice, mut visit: impl FnMut(&[Elem]) -> ControlFlow<()>) -> Result<()> {
    check_bound(l)?;
    let all: Vec<Elem> = l.elements().collect();
    let mut search = Search::new(l, l, vec![all; l.len()]);
    search.idempotent = true;
    search.run(&mut |f| {
        debug_assert_eq!(validate_retraction(l, f), Ok(()));
        visit(f)
    });
    Ok(())
}

/// All retractions; each is rechecked by [`validate_retraction`].
pub fn enumerate_retractions(l: &FiniteLattice) -> Result<Vec<Retraction<'_>>> {
    let mut out = Vec::new();
    let mut bad = None;
    for_each_retraction(l, |f| {
        if let Err(e) = validate_retraction(l, f) {
            bad = Some(e);
            return ControlFlow::Break(());
        }
        out.push(Retraction::new(l, f.to_vec()));
        ControlFlow::Continue(())
    })?;
    match bad {
        Some(e) => Err(Error::NotARetraction(e)),
        None => Ok(out),
    }
}

/// Distinct images of retractions, as sorted element lists in sorted order.
pub fn retracts(l: &FiniteLattice) -> Result<Vec<Vec<Elem>>> {
    let mut images = BTreeSet::new();
    for_each_retraction(l, |f| {
        let img: BTreeSet<Elem> = f.iter().copied().collect();
        images.insert(img.into_iter().collect::<Vec<_>>());
        ControlFlow::Continue(())
    })?;
    for img in &images {
        debug_assert!(l.is_sublattice(img).unwrap_or(false));
    }
    Ok(images.into_iter().collect())
}

/// A retraction onto the sublattice `s`, if one exists.
pub fn is_retract<'a>(l: &'a FiniteLattice, s: &[Elem]) -> Result<Option<Retraction<'a>>> {
    if !l.is_sublattice(s)? {
        return Err(Error::NotSublattice);
    }
    let mut inside: Vec<Elem> = s.to_vec();
    inside.sort_unstable();
    inside.dedup();
    let domains =
        l.elements().map(|x| if inside.binary_search(&x).is_ok() { vec![x] } else { inside.clone() }).collect();
    let search = Search::new(l, l, domains);
    let mut found = None;
    search.run(&mut |f| {
        found = Some(f.to_vec());
        ControlFlow::Break(())
    });
    Ok(found.map(|f| Retraction::new(l, f)))
}

/// Unpruned searches over all maps, for cross-checking on tiny inputs.
pub mod oracle {
    use super::*;

    fn all_maps(n: usize, m: usize, mut visit: impl FnMut(&[Elem])) {
        let mut f = vec![0; n];
        loop {
            visit(&f);
            let mut k = 0;
            while k < n && f[k] + 1 == m {
                f[k] = 0;
                k += 1;
            }
            if k == n {
                return;
            }
            f[k] += 1;
        }
    }

    /// Number of idempotent endomorphisms among all `n^n` self-maps.
    pub fn retraction_count(l: &FiniteLattice) -> usize {
        let mut count = 0;
        all_maps(l.len(), l.len(), |f| {
            if validate_retraction(l, f).is_ok() {
                count += 1;
            }
        });
        count
    }

    /// Number of embeddings among all `|L|^|K|` maps.
    pub fn embedding_count(k: &FiniteLattice, l: &FiniteLattice) -> usize {
        let mut count = 0;
        all_maps(k.len(), l.len(), |f| {
            if is_embedding(&LatticeMap::new(k, l, f.to_vec())) {
                count += 1;
            }
        });
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::standard::*;
    use crate::slim::grid;

    #[test]
    fn embedding_basics() {
        let l = n5();
        assert!(is_embedding(&LatticeMap::identity(&l)));
        let c2 = chain(2);
        assert!(!is_embedding(&LatticeMap::new(&c2, &c2, vec![0, 0])));
        // x, y of N5 sent onto the atoms of B2 while keeping 0 and 1: x∨y is
        // fine but z ↦ x-image breaks x∧z.
        let b = b2();
        let f = vec![0, 1, 2, 1, 3];
        assert!(!is_embedding(&LatticeMap::new(&l, &b, f)));
    }

    #[test]
    fn embedding_counts() {
        assert_eq!(enumerate_embeddings(&chain(2), &chain(3), None).len(), 3);
        let (g, _) = grid(3, 3).unwrap();
        assert_eq!(enumerate_embeddings(&b2(), &g, None).len(), 18);
        assert_eq!(oracle::embedding_count(&b2(), &g), 18);
        assert!(enumerate_embeddings(&b2(), &chain(5), None).is_empty());
        assert_eq!(enumerate_embeddings(&b2(), &n5(), None).len(), 4);
    }

    #[test]
    fn constrained_embeddings() {
        let (g, _) = grid(3, 3).unwrap();
        let b = b2();
        let a = [0usize];
        let s = g.elems(&["0.0"]).unwrap();
        let maps = enumerate_embeddings(&b, &g, Some((&a, &s)));
        assert_eq!(maps.len(), 8);
        assert!(maps.iter().all(|m| m.apply(0) == s[0]));
    }

    #[test]
    fn retraction_counts() {
        assert_eq!(enumerate_retractions(&chain(2)).unwrap().len(), 3);
        assert_eq!(enumerate_retractions(&b2()).unwrap().len(), 11);
        assert_eq!(oracle::retraction_count(&b2()), 11);
        assert_eq!(retracts(&b2()).unwrap().len(), 10);
        assert_eq!(retracts(&chain(3)).unwrap().len(), 7);
        for n in 1..=6 {
            assert_eq!(retracts(&chain(n)).unwrap().len(), (1 << n) - 1);
        }
        let l = n5();
        let constants = enumerate_retractions(&l).unwrap().iter().filter(|r| r.image.len() == 1).count();
        assert_eq!(constants, 5);
    }

    #[test]
    fn retract_witnesses() {
        let l = chain(3);
        for mask in 1u32..8 {
            let s: Vec<Elem> = (0..3).filter(|&k| mask >> k & 1 == 1).collect();
            let r = is_retract(&l, &s).unwrap().expect("chains retract onto any subset");
            assert_eq!(r.image, s);
        }
        let all: Vec<Elem> = l.elements().collect();
        assert_eq!(is_retract(&l, &all).unwrap().unwrap().map, LatticeMap::identity(&l));
        let m = m3();
        let atoms = m.elems(&["a", "b"]).unwrap();
        assert_eq!(is_retract(&m, &atoms).unwrap_err(), Error::NotSublattice);
    }

    #[test]
    fn size_bound() {
        let err = enumerate_retractions(&chain(15)).unwrap_err();
        assert_eq!(err, Error::SizeBound { size: 15, bound: 14 });
    }

    #[test]
    fn map_json() {
        let l = chain(2);
        let v = LatticeMap::new(&l, &l, vec![0, 0]).to_json("c2", "c2");
        assert_eq!(v.to_string(), r#"{"assignment":{"0":"0","1":"0"},"source":"c2","target":"c2"}"#);
    }
}
