//! Enumeration of slim semimodular lattices by construction recipes, and an
//! independent brute-force enumeration of all small lattices.

use std::collections::{BTreeMap, HashSet};

use crate::canon::{canonical_form, CanonicalForm};
use crate::diagram::DiagramLayout;
use crate::error::{Error, Result};
use crate::lattice::{standard, FiniteLattice};
use crate::par;
use crate::slim::{self, ConstructionRecipe, RecipeStep};

#[derive(Clone, Debug)]
pub struct GeneratedSsl {
    pub lattice: FiniteLattice,
    pub layout: DiagramLayout,
    /// `None` for the one- and two-element chains, which no recipe reaches.
    pub recipe: Option<ConstructionRecipe>,
    pub form: CanonicalForm,
}

/// Starting bound on intermediate sizes. The `n`-chain comes from
/// `grid(2, n-1)`, which has `2n-2` elements, so nothing smaller works; it is
/// not always enough (size 12 needs 24), see [`generate_ssl`].
pub fn default_intermediate_bound(n: usize) -> usize {
    n.max(2 * n.saturating_sub(1))
}

/// Every SSL with at most `max_size` elements up to isomorphism, each with a
/// recipe, sorted by size and then canonical form.
///
/// No closed-form bound on intermediate sizes is known to us, so the bound
/// starts at [`default_intermediate_bound`] and grows until the recipes reach
/// every lattice of [`ssl_by_coordinates`], which is complete on its own.
pub fn generate_ssl(max_size: usize) -> Vec<GeneratedSsl> {
    let target: HashSet<CanonicalForm> = ssl_by_coordinates(max_size).iter().map(|l| l.canonical_form()).collect();
    let cap = 4 * max_size.max(2);
    let mut bound = default_intermediate_bound(max_size);
    loop {
        let out = generate_ssl_bounded(max_size, bound);
        debug_assert!(out.iter().all(|g| target.contains(&g.form)));
        if out.len() >= target.len() {
            return out;
        }
        assert!(bound < cap, "recipes reach {} of {} SSLs at intermediate size {bound}", out.len(), target.len());
        bound += 1;
    }
}

/// As [`generate_ssl`] with an explicit bound on intermediate sizes.
pub fn generate_ssl_bounded(max_size: usize, bound: usize) -> Vec<GeneratedSsl> {
    let mut out: Vec<GeneratedSsl> = Vec::new();
    for k in 1..=max_size.min(2) {
        let l = standard::chain(k);
        let layout = slim::default_layout(&l).expect("chains are slim");
        let form = l.canonical_form();
        out.push(GeneratedSsl { lattice: l, layout, recipe: None, form });
    }
    if max_size < 3 {
        return out;
    }
    // Corner removal keeps the length, and the result has more than
    // `length` elements.
    let max_length = max_size - 1;
    let mut seen: HashSet<CanonicalForm> = out.iter().map(|g| g.form.clone()).collect();
    let mut buckets: BTreeMap<usize, Vec<GeneratedSsl>> = BTreeMap::new();
    let push =
        |g: GeneratedSsl, seen: &mut HashSet<CanonicalForm>, buckets: &mut BTreeMap<usize, Vec<GeneratedSsl>>| {
            if seen.insert(g.form.clone()) {
                buckets.entry(g.lattice.len()).or_default().push(g);
            }
        };

    for m in 2..=bound {
        for k in m..=bound {
            if m * k > bound || m + k - 2 > max_length {
                continue;
            }
            let (l, layout) = slim::grid(m, k).expect("grid");
            let form = l.canonical_form();
            push(
                GeneratedSsl { lattice: l, layout, recipe: Some(ConstructionRecipe::new(m, k)), form },
                &mut seen,
                &mut buckets,
            );
        }
    }

    // Multiforks only grow the lattice, so ascending sizes visit parents first.
    let mut forked: Vec<GeneratedSsl> = Vec::new();
    let mut size = 0;
    while let Some((&s, _)) = buckets.range(size + 1..).next() {
        size = s;
        let mut level = buckets.remove(&s).unwrap_or_default();
        level.sort_by(|a, b| a.form.cmp(&b.form));
        let children = par::map(&level, |g| fork_children(g, bound, max_length));
        for g in children.into_iter().flatten() {
            push(g, &mut seen, &mut buckets);
        }
        forked.extend(level);
    }

    // Corner removals only shrink, so descending sizes visit parents first.
    for g in forked {
        buckets.entry(g.lattice.len()).or_default().push(g);
    }
    while let Some((&s, _)) = buckets.iter().next_back() {
        let mut level = buckets.remove(&s).unwrap_or_default();
        level.sort_by(|a, b| a.form.cmp(&b.form));
        let children = par::map(&level, corner_children);
        for g in children.into_iter().flatten() {
            push(g, &mut seen, &mut buckets);
        }
        out.extend(level.into_iter().filter(|g| g.lattice.len() <= max_size));
    }
    out.sort_by(|a, b| (a.lattice.len(), &a.form).cmp(&(b.lattice.len(), &b.form)));
    out
}

fn fork_children(g: &GeneratedSsl, bound: usize, max_length: usize) -> Vec<GeneratedSsl> {
    let recipe = g.recipe.as_ref().expect("recipe");
    let length = g.lattice.length();
    let tag = format!("f{}", recipe.steps.len());
    let mut out = Vec::new();
    for cell in slim::four_cells_unchecked(&g.lattice, &g.layout) {
        let ideal = g.lattice.induced(&g.lattice.principal_ideal(cell.t)).expect("ideal");
        if !ideal.is_distributive() {
            continue;
        }
        let mut n = 1;
        while length + n <= max_length {
            let Ok(e) = slim::multifork_extend(&g.lattice, &g.layout, &cell, n, &tag) else { break };
            if e.lattice.len() > bound {
                break;
            }
            let step = RecipeStep::Multifork {
                left: g.lattice.id(cell.a).to_string(),
                top: g.lattice.id(cell.t).to_string(),
                n,
            };
            let form = e.lattice.canonical_form();
            out.push(GeneratedSsl { lattice: e.lattice, layout: e.layout, recipe: Some(recipe.with(step)), form });
            n += 1;
        }
    }
    out
}

fn corner_children(g: &GeneratedSsl) -> Vec<GeneratedSsl> {
    let recipe = g.recipe.as_ref().expect("recipe");
    if g.lattice.len() <= 3 {
        return Vec::new();
    }
    slim::corners_unchecked(&g.lattice, &g.layout)
        .into_iter()
        .map(|w| {
            let (l, layout) = slim::remove_corner_unchecked(&g.lattice, &g.layout, w).expect("corner");
            let step = RecipeStep::RemoveCorner(g.lattice.id(w).to_string());
            let form = l.canonical_form();
            GeneratedSsl { lattice: l, layout, recipe: Some(recipe.with(step)), form }
        })
        .collect()
}

/// Every SSL with at most `max_size` elements up to isomorphism, sorted by
/// size and then canonical form, without using any construction.
///
/// If `Jir L` is the union of disjoint chains `U` and `V`, then
/// `x -> (|U ∩ ↓x|, |V ∩ ↓x|)` is injective and sends meets to
/// componentwise minima. So slim lattices are exactly the min-closed subsets
/// of a `(p+1) x (q+1)` grid containing both corners and hitting every row
/// and column; the row minima and column minima are then `U` and `V`.
/// Asking for `p + q` join-irreducibles keeps one picture per partition.
pub fn ssl_by_coordinates(max_size: usize) -> Vec<FiniteLattice> {
    let mut shapes = Vec::new();
    for p in 0..max_size {
        for q in 0..=p.min(max_size - 1 - p) {
            shapes.push((p, q));
        }
    }
    let found = par::map(&shapes, |&(p, q)| {
        let mut s = GridSubsets::new(p, q, max_size);
        let corners = if p + q == 0 { 1 } else { 2 };
        s.run(0, corners);
        s.found
    });
    let mut seen = HashSet::new();
    let mut out: Vec<(CanonicalForm, FiniteLattice)> = Vec::new();
    for (f, l) in found.into_iter().flatten() {
        if seen.insert(f.clone()) {
            out.push((f, l));
        }
    }
    out.sort_by(|a, b| (a.1.len(), &a.0).cmp(&(b.1.len(), &b.0)));
    out.into_iter().map(|(_, l)| l).collect()
}

/// Depth-first search over min-closed subsets of a grid. Points are visited
/// in decreasing lexicographic order, so the meet of a new point with an
/// old one is always still ahead and can be marked as forced.
struct GridSubsets {
    p: usize,
    q: usize,
    max: usize,
    pts: Vec<(usize, usize)>,
    chosen: Vec<usize>,
    forced: Vec<bool>,
    found: Vec<(CanonicalForm, FiniteLattice)>,
}

impl GridSubsets {
    fn new(p: usize, q: usize, max: usize) -> Self {
        let mut pts: Vec<(usize, usize)> = (0..=p).flat_map(|i| (0..=q).map(move |j| (i, j))).collect();
        pts.reverse();
        let mut forced = vec![false; pts.len()];
        forced[0] = true;
        *forced.last_mut().expect("nonempty") = true;
        GridSubsets { p, q, max, pts, chosen: Vec::new(), forced, found: Vec::new() }
    }

    fn index(&self, (i, j): (usize, usize)) -> usize {
        (self.p - i) * (self.q + 1) + (self.q - j)
    }

    /// `pending` counts forced points at positions `k` and later.
    fn run(&mut self, k: usize, pending: usize) {
        if self.chosen.len() + pending > self.max {
            return;
        }
        if k > 0 && (k == self.pts.len() || self.pts[k].0 != self.pts[k - 1].0) {
            let row = self.pts[k - 1].0;
            if !self.chosen.iter().any(|&c| self.pts[c].0 == row) {
                return;
            }
        }
        if k == self.pts.len() {
            self.leaf();
            return;
        }
        let mut newly = Vec::new();
        for &c in &self.chosen {
            let (a, b) = (self.pts[k], self.pts[c]);
            let m = self.index((a.0.min(b.0), a.1.min(b.1)));
            if m > k && !self.forced[m] {
                self.forced[m] = true;
                newly.push(m);
            }
        }
        let was_forced = self.forced[k];
        self.chosen.push(k);
        self.run(k + 1, pending - usize::from(was_forced) + newly.len());
        self.chosen.pop();
        for m in newly {
            self.forced[m] = false;
        }
        if !was_forced {
            self.run(k + 1, pending);
        }
    }

    fn leaf(&mut self) {
        let n = self.chosen.len();
        let pts: Vec<(usize, usize)> = self.chosen.iter().rev().map(|&c| self.pts[c]).collect();
        let mut cols = vec![false; self.q + 1];
        for &(_, j) in &pts {
            cols[j] = true;
        }
        if cols.contains(&false) {
            return;
        }
        let leq = |a: usize, b: usize| pts[a].0 <= pts[b].0 && pts[a].1 <= pts[b].1;
        let mut covers = vec![vec![false; n]; n];
        let mut cover_list = Vec::new();
        let mut lower = vec![0usize; n];
        for a in 0..n {
            for b in 0..n {
                if a != b && leq(a, b) && !(0..n).any(|c| c != a && c != b && leq(a, c) && leq(c, b)) {
                    covers[a][b] = true;
                    cover_list.push((a, b));
                    lower[b] += 1;
                }
            }
        }
        if lower.iter().filter(|&&c| c == 1).count() != self.p + self.q {
            return;
        }
        let pos = |pt: (usize, usize)| pts.iter().position(|&x| x == pt);
        let meet = |a: usize, b: usize| pos((pts[a].0.min(pts[b].0), pts[a].1.min(pts[b].1))).expect("min-closed");
        let join = |a: usize, b: usize| {
            let lo = (pts[a].0.max(pts[b].0), pts[a].1.max(pts[b].1));
            let above = pts.iter().filter(|x| x.0 >= lo.0 && x.1 >= lo.1);
            let m = above.fold((usize::MAX, usize::MAX), |m, x| (m.0.min(x.0), m.1.min(x.1)));
            pos(m).expect("min-closed")
        };
        for a in 0..n {
            for b in a + 1..n {
                let m = meet(a, b);
                if covers[m][a] && covers[m][b] {
                    let j = join(a, b);
                    if !covers[a][j] || !covers[b][j] {
                        return;
                    }
                }
            }
        }
        let ids = pts.iter().map(|&(i, j)| slim::grid_id(i, j)).collect();
        let l = FiniteLattice::from_covers(ids, &cover_list).expect("min-closed subsets are lattices");
        self.found.push((l.canonical_form(), l));
    }
}

/// Largest size accepted by [`exhaustive_small_lattices`].
pub const EXHAUSTIVE_LIMIT: usize = 8;

/// All lattices with at most `max_size` elements up to isomorphism, found
/// by enumerating every poset on the middle elements and adding 0 and 1.
pub fn exhaustive_small_lattices(max_size: usize) -> Result<Vec<FiniteLattice>> {
    if max_size > EXHAUSTIVE_LIMIT {
        return Err(Error::SizeBound { size: max_size, bound: EXHAUSTIVE_LIMIT });
    }
    let mut out = Vec::new();
    if max_size >= 1 {
        out.push(standard::chain(1));
    }
    let mut level: Vec<Poset> = vec![Poset { leq: Vec::new() }];
    for middle in 0..=max_size.saturating_sub(2) {
        if middle > 0 {
            level = extend_posets(&level);
        }
        if max_size < 2 {
            break;
        }
        let mut found: Vec<(CanonicalForm, FiniteLattice)> =
            par::map(&level, |p| p.bounded()).into_iter().flatten().map(|l| (l.canonical_form(), l)).collect();
        found.sort_by(|a, b| a.0.cmp(&b.0));
        out.extend(found.into_iter().map(|(_, l)| l));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct Poset {
    leq: Vec<Vec<bool>>,
}

impl Poset {
    fn len(&self) -> usize {
        self.leq.len()
    }

    fn covers(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let n = self.len();
        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                let lt = a != b && self.leq[a][b];
                if lt && !(0..n).any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b]) {
                    lower[b].push(a);
                    upper[a].push(b);
                }
            }
        }
        (lower, upper)
    }

    fn form(&self) -> CanonicalForm {
        let (lower, upper) = self.covers();
        canonical_form(self.len(), &lower, &upper, |a, b| self.leq[a][b])
    }

    /// The poset with a new bottom and top, if that is a lattice.
    fn bounded(&self) -> Option<FiniteLattice> {
        let n = self.len();
        let mut ids = vec!["0".to_string()];
        ids.extend((0..n).map(|k| format!("p{k}")));
        ids.push("1".to_string());
        let leq = |a: usize, b: usize| a == 0 || b == n + 1 || (a != n + 1 && b != 0 && self.leq[a - 1][b - 1]);
        FiniteLattice::from_order(ids, leq).ok()
    }
}

/// Adds one new maximal element above each antichain (including the empty
/// one) and deduplicates.
fn extend_posets(level: &[Poset]) -> Vec<Poset> {
    let grown: Vec<Vec<(CanonicalForm, Poset)>> = par::map(level, |p| {
        antichains(p)
            .into_iter()
            .map(|a| {
                let q = with_maximal(p, &a);
                (q.form(), q)
            })
            .collect()
    });
    let mut seen = HashSet::new();
    let mut out: Vec<(CanonicalForm, Poset)> = Vec::new();
    for (f, q) in grown.into_iter().flatten() {
        if seen.insert(f.clone()) {
            out.push((f, q));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, q)| q).collect()
}

fn antichains(p: &Poset) -> Vec<Vec<usize>> {
    let n = p.len();
    (0u32..1 << n)
        .map(|mask| (0..n).filter(|&k| mask >> k & 1 == 1).collect::<Vec<_>>())
        .filter(|s| s.iter().all(|&a| s.iter().all(|&b| a == b || !p.leq[a][b])))
        .collect()
}

fn with_maximal(p: &Poset, below: &[usize]) -> Poset {
    let n = p.len();
    let mut leq: Vec<Vec<bool>> = p
        .leq
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.push(false);
            r
        })
        .collect();
    let mut last = vec![false; n + 1];
    last[n] = true;
    leq.push(last);
    for a in 0..n {
        leq[a][n] = below.iter().any(|&b| p.leq[a][b]);
    }
    Poset { leq }
}
