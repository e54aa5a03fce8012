//! Constructive side: grids, join coordinates, 4-cells, multifork
//! extensions, corners and recipes.

use serde::{Deserialize, Serialize};

use crate::diagram::{self, layout_join_coords, DiagramLayout};
use crate::error::{Error, Result};
use crate::geometry::{self, Slope};
use crate::lattice::{Elem, FiniteLattice};

/// Two disjoint chains `u`, `v` covering the join-irreducibles, with the
/// prefix indices `i[x]`, `j[x]` of every element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinCoordinates {
    pub u: Vec<Elem>,
    pub v: Vec<Elem>,
    pub i: Vec<usize>,
    pub j: Vec<usize>,
}

impl JoinCoordinates {
    pub fn coords(&self, x: Elem) -> (usize, usize) {
        (self.i[x], self.j[x])
    }

    /// Checks every structural invariant against `l`; returns the first
    /// failure as text.
    pub fn verify(&self, l: &FiniteLattice) -> std::result::Result<(), String> {
        let mut jir: Vec<Elem> = l.join_irreducibles();
        let mut both: Vec<Elem> = self.u.iter().chain(self.v.iter()).copied().collect();
        jir.sort_unstable();
        both.sort_unstable();
        if jir != both {
            return Err("chains do not partition the join-irreducibles".into());
        }
        if !l.is_chain(&self.u) || !l.is_chain(&self.v) {
            return Err("u or v is not a chain".into());
        }
        let pick = |chain: &[Elem], k: usize| if k == 0 { l.bottom() } else { chain[k - 1] };
        for x in l.elements() {
            if l.join(pick(&self.u, self.i[x]), pick(&self.v, self.j[x])) != x {
                return Err(format!("{} is not the join of its prefixes", l.id(x)));
            }
            for y in l.elements() {
                let by_coords = self.i[x] <= self.i[y] && self.j[x] <= self.j[y];
                if l.leq(x, y) != by_coords {
                    return Err(format!("order mismatch at ({}, {})", l.id(x), l.id(y)));
                }
                if x != y && self.coords(x) == self.coords(y) {
                    return Err("coordinates are not injective".into());
                }
            }
        }
        Ok(())
    }
}

/// Splits the join-irreducibles into two chains by 2-colouring their
/// incomparability graph. In each connected component the class holding the
/// largest identifier becomes `u`.
pub fn join_coordinates(l: &FiniteLattice) -> Result<JoinCoordinates> {
    if !l.is_slim() {
        return Err(Error::NotSlim);
    }
    let jir = l.join_irreducibles();
    let mut colour: Vec<Option<bool>> = vec![None; l.len()];
    let mut in_u = vec![false; l.len()];
    for &start in &jir {
        if colour[start].is_some() {
            continue;
        }
        let mut component = vec![start];
        colour[start] = Some(false);
        let mut k = 0;
        while k < component.len() {
            let x = component[k];
            let cx = colour[x].expect("coloured");
            for &y in &jir {
                if l.comparable(x, y) {
                    continue;
                }
                match colour[y] {
                    None => {
                        colour[y] = Some(!cx);
                        component.push(y);
                    }
                    Some(cy) if cy == cx => return Err(Error::NotSlim),
                    Some(_) => {}
                }
            }
            k += 1;
        }
        let anchor = *component.iter().max_by(|&&a, &&b| l.id(a).cmp(l.id(b))).expect("nonempty");
        let u_colour = colour[anchor];
        for &x in &component {
            in_u[x] = colour[x] == u_colour;
        }
    }
    let height = |x: Elem| l.principal_ideal(x).len();
    let mut u: Vec<Elem> = jir.iter().copied().filter(|&x| in_u[x]).collect();
    let mut v: Vec<Elem> = jir.iter().copied().filter(|&x| !in_u[x]).collect();
    u.sort_by_key(|&x| height(x));
    v.sort_by_key(|&x| height(x));
    let i = l.elements().map(|x| u.iter().filter(|&&w| l.leq(w, x)).count()).collect();
    let j = l.elements().map(|x| v.iter().filter(|&&w| l.leq(w, x)).count()).collect();
    let jc = JoinCoordinates { u, v, i, j };
    debug_assert_eq!(jc.verify(l), Ok(()));
    Ok(jc)
}

/// Join-coordinate layout of a slim lattice.
pub fn default_layout(l: &FiniteLattice) -> Result<DiagramLayout> {
    layout_join_coords(l, &join_coordinates(l)?)
}

pub fn grid_id(p: usize, q: usize) -> String {
    format!("{p}.{q}")
}

/// `C_m × C_k`; element `(p, q)` is named `"p.q"`.
pub fn grid(m: usize, k: usize) -> Result<(FiniteLattice, DiagramLayout)> {
    if m < 2 || k < 2 {
        return Err(Error::SingletonChain(m, k));
    }
    let mut ids = Vec::with_capacity(m * k);
    for p in 0..m {
        for q in 0..k {
            ids.push(grid_id(p, q));
        }
    }
    let at = |p: usize, q: usize| p * k + q;
    let mut covers = Vec::new();
    for p in 0..m {
        for q in 0..k {
            if p + 1 < m {
                covers.push((at(p, q), at(p + 1, q)));
            }
            if q + 1 < k {
                covers.push((at(p, q), at(p, q + 1)));
            }
        }
    }
    let l = FiniteLattice::from_covers(ids, &covers)?;
    let layout = default_layout(&l)?;
    Ok((l, layout))
}

/// A covering square `o ≺ a, b ≺ t` drawn as a face; `a` is left of `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FourCell {
    pub o: Elem,
    pub a: Elem,
    pub b: Elem,
    pub t: Elem,
}

pub fn four_cells(l: &FiniteLattice, layout: &DiagramLayout) -> Result<Vec<FourCell>> {
    diagram::require_valid(l, layout)?;
    Ok(four_cells_unchecked(l, layout))
}

pub(crate) fn four_cells_unchecked(l: &FiniteLattice, layout: &DiagramLayout) -> Vec<FourCell> {
    let mut out = Vec::new();
    for o in l.elements() {
        let ups = l.upper_covers(o);
        for (k, &p) in ups.iter().enumerate() {
            for &q in &ups[k + 1..] {
                let t = l.join(p, q);
                if !l.covers(p, t) || !l.covers(q, t) {
                    continue;
                }
                let (a, b) = if layout.pos(p).x < layout.pos(q).x { (p, q) } else { (q, p) };
                let quad = [layout.pos(o), layout.pos(b), layout.pos(t), layout.pos(a)];
                let empty = l
                    .elements()
                    .filter(|&w| w != o && w != a && w != b && w != t)
                    .all(|w| !geometry::strictly_inside_polygon(layout.pos(w), &quad));
                if empty {
                    out.push(FourCell { o, a, b, t });
                }
            }
        }
    }
    out.sort_by_key(|c| (c.t, c.a, c.b, c.o));
    out
}

fn check_cell(l: &FiniteLattice, layout: &DiagramLayout, c: &FourCell) -> Result<()> {
    let ok = l.covers(c.o, c.a)
        && l.covers(c.o, c.b)
        && l.covers(c.a, c.t)
        && l.covers(c.b, c.t)
        && layout.pos(c.a).x < layout.pos(c.b).x;
    if ok {
        Ok(())
    } else {
        Err(Error::NotACell(format!("{{{}, {}, {}, {}}}", l.id(c.o), l.id(c.a), l.id(c.b), l.id(c.t))))
    }
}

/// The principal ideal of the cell's top is distributive.
pub fn is_distributive_cell(l: &FiniteLattice, layout: &DiagramLayout, cell: &FourCell) -> Result<bool> {
    check_cell(l, layout, cell)?;
    let ideal = l.induced(&l.principal_ideal(cell.t))?;
    Ok(ideal.is_distributive())
}

/// Cell with left element `left` and top `top`.
pub fn find_cell(l: &FiniteLattice, layout: &DiagramLayout, left: Elem, top: Elem) -> Result<FourCell> {
    four_cells_unchecked(l, layout)
        .into_iter()
        .find(|c| c.a == left && c.t == top)
        .ok_or_else(|| Error::NotACell(format!("left {} top {}", l.id(left), l.id(top))))
}

/// Result of a multifork extension, with the new meet-irreducibles named.
#[derive(Clone, Debug)]
pub struct Extension {
    pub lattice: FiniteLattice,
    pub layout: DiagramLayout,
    pub new_meet_irreducibles: Vec<Elem>,
}

/// Replaces the distributive 4-cell by a copy of `S_n` and adds leg
/// elements down-left and down-right through the adjacent 4-cells.
///
/// New identifiers are `{tag}:h{r}`, `{tag}:c{s}.{r}` for central elements
/// and `{tag}:l{level}.{s}` / `{tag}:r{level}.{s}` for legs, where level 0
/// subdivides the cell's own lower edges.
pub fn multifork_extend(
    l: &FiniteLattice,
    layout: &DiagramLayout,
    cell: &FourCell,
    n: usize,
    tag: &str,
) -> Result<Extension> {
    if n == 0 {
        return Err(Error::BadMultiplicity);
    }
    if !l.is_slim() {
        return Err(Error::NotSlim);
    }
    if !l.is_semimodular() {
        return Err(Error::NotSemimodular);
    }
    if !is_distributive_cell(l, layout, cell)? {
        return Err(Error::NotDistributiveCell(l.id(cell.t).into()));
    }
    let FourCell { o, a, b, t } = *cell;
    let left_edges = leg_edges(l, layout, o, a, true);
    let right_edges = leg_edges(l, layout, o, b, false);

    let mut ids: Vec<String> = l.ids().to_vec();
    let mut add = |id: String| {
        ids.push(id);
        ids.len() - 1
    };
    let left: Vec<Vec<Elem>> =
        (0..left_edges.len()).map(|lv| (1..=n).map(|s| add(format!("{tag}:l{lv}.{s}"))).collect()).collect();
    let right: Vec<Vec<Elem>> =
        (0..right_edges.len()).map(|lv| (1..=n).map(|s| add(format!("{tag}:r{lv}.{s}"))).collect()).collect();
    // Central part of S_n: (s, r) with s, r >= 1 and s + r <= n + 1.
    let mut central = std::collections::BTreeMap::new();
    for s in 1..=n {
        for r in 1..=n + 1 - s {
            let id = if s + r == n + 1 { format!("{tag}:h{r}") } else { format!("{tag}:c{s}.{r}") };
            central.insert((s, r), add(id));
        }
    }
    let at = |s: usize, r: usize| -> Elem {
        match (s, r) {
            (0, 0) => o,
            (s, 0) if s == n + 1 => a,
            (0, r) if r == n + 1 => b,
            (s, 0) => left[0][s - 1],
            (0, r) => right[0][r - 1],
            _ => central[&(s, r)],
        }
    };

    let split: Vec<(Elem, Elem)> = left_edges.iter().chain(right_edges.iter()).copied().collect();
    let mut covers: Vec<(Elem, Elem)> = l.cover_pairs().into_iter().filter(|e| !split.contains(e)).collect();
    for (edges, legs) in [(&left_edges, &left), (&right_edges, &right)] {
        for (lv, &(x, y)) in edges.iter().enumerate() {
            let chain = &legs[lv];
            covers.push((x, chain[0]));
            covers.extend(chain.windows(2).map(|w| (w[0], w[1])));
            covers.push((chain[n - 1], y));
            if lv > 0 {
                covers.extend(chain.iter().zip(legs[lv - 1].iter()).map(|(&lo, &hi)| (lo, hi)));
            }
        }
    }
    for (&(s, r), &c) in &central {
        covers.push((at(s - 1, r), c));
        covers.push((at(s, r - 1), c));
        if s + r == n + 1 {
            covers.push((c, t));
        }
    }

    let ext = FiniteLattice::from_covers(ids, &covers)
        .map_err(|e| Error::Postcondition(format!("extension is not a lattice: {e}")))?;
    if !ext.is_slim() || !ext.is_semimodular() {
        return Err(Error::NotSemimodular);
    }
    let ext_layout = default_layout(&ext)?;
    let hs: Vec<Elem> = (1..=n).map(|r| central[&(n + 1 - r, r)]).collect();
    check_extension(l, &ext, &ext_layout, &hs)?;
    Ok(Extension { lattice: ext, layout: ext_layout, new_meet_irreducibles: hs })
}

/// Edges subdivided by one leg: the cell's lower edge, then the parallel
/// lower edge of each 4-cell further down on that side.
fn leg_edges(l: &FiniteLattice, layout: &DiagramLayout, o: Elem, top: Elem, leftwards: bool) -> Vec<(Elem, Elem)> {
    let mut edges = vec![(o, top)];
    loop {
        let (x, y) = *edges.last().expect("nonempty");
        let px = layout.pos(x).x;
        let beside = l.lower_covers(y).iter().copied().filter(|&z| z != x);
        let next = if leftwards {
            beside.filter(|&z| layout.pos(z).x < px).max_by_key(|&z| layout.pos(z).x)
        } else {
            beside.filter(|&z| layout.pos(z).x > px).min_by_key(|&z| layout.pos(z).x)
        };
        let Some(y2) = next else { break };
        let x2 = l.meet(x, y2);
        if !l.covers(x2, x) || !l.covers(x2, y2) {
            break;
        }
        edges.push((x2, y2));
    }
    edges
}

fn check_extension(old: &FiniteLattice, ext: &FiniteLattice, layout: &DiagramLayout, hs: &[Elem]) -> Result<()> {
    let fail = |m: &str| Err(Error::Postcondition(m.to_string()));
    for x in old.elements() {
        for y in old.elements() {
            if old.leq(x, y) != ext.leq(x, y) {
                return fail("order on old elements changed");
            }
            if old.meet(x, y) != ext.meet(x, y) {
                return fail("meet of old elements changed");
            }
        }
    }
    let new_mir: Vec<Elem> = (old.len()..ext.len()).filter(|&x| ext.is_meet_irreducible(x)).collect();
    let mut expected = hs.to_vec();
    expected.sort_unstable();
    if new_mir != expected {
        return fail("new meet-irreducibles are not exactly the fork tops");
    }
    let boundary = diagram::boundary_mask(ext, layout);
    for &h in hs {
        let ideal = ext.induced(&ext.principal_ideal(h))?;
        if !is_grid(&ideal) {
            return fail("ideal of a fork top is not a grid");
        }
        if boundary[h] {
            return fail("fork top on a boundary chain");
        }
        let up = ext.upper_covers(h)[0];
        if layout.edge_slope(h, up) != Slope::Precipitous {
            return fail("fork top edge is not precipitous");
        }
    }
    Ok(())
}

/// Direct product of two nonsingleton chains, up to isomorphism.
pub fn is_grid(l: &FiniteLattice) -> bool {
    match join_coordinates(l) {
        Ok(jc) => !jc.u.is_empty() && !jc.v.is_empty() && l.len() == (jc.u.len() + 1) * (jc.v.len() + 1),
        Err(_) => false,
    }
}

/// Doubly irreducible boundary elements whose upper cover has exactly two
/// lower covers.
pub fn corners(l: &FiniteLattice, layout: &DiagramLayout) -> Result<Vec<Elem>> {
    diagram::require_valid(l, layout)?;
    Ok(corners_unchecked(l, layout))
}

pub(crate) fn corners_unchecked(l: &FiniteLattice, layout: &DiagramLayout) -> Vec<Elem> {
    let boundary = diagram::boundary_mask(l, layout);
    l.elements()
        .filter(|&u| {
            boundary[u]
                && l.is_join_irreducible(u)
                && l.is_meet_irreducible(u)
                && l.lower_covers(l.upper_covers(u)[0]).len() == 2
        })
        .collect()
}

/// Drops a corner; surviving elements keep their positions.
pub fn remove_corner(l: &FiniteLattice, layout: &DiagramLayout, w: Elem) -> Result<(FiniteLattice, DiagramLayout)> {
    if !corners(l, layout)?.contains(&w) {
        return Err(Error::NotACorner(l.id(w).into()));
    }
    let out = remove_corner_unchecked(l, layout, w)?;
    if !out.0.is_slim() || !out.0.is_semimodular() {
        return Err(Error::Postcondition("corner removal broke slim semimodularity".into()));
    }
    Ok(out)
}

pub(crate) fn remove_corner_unchecked(
    l: &FiniteLattice,
    layout: &DiagramLayout,
    w: Elem,
) -> Result<(FiniteLattice, DiagramLayout)> {
    let keep: Vec<Elem> = l.elements().filter(|&x| x != w).collect();
    let lat = l.induced(&keep)?;
    Ok((lat, layout.restrict(&keep)))
}

/// One failing incomparable pair for the chain-interval property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainViolation {
    pub a: String,
    pub b: String,
    pub meet: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PartIReport {
    pub pairs_checked: usize,
    pub violations: Vec<ChainViolation>,
}

impl PartIReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every incomparable pair `a, b` of a slim lattice, `[a∧b, a]` and
/// `[a∧b, b]` are chains.
pub fn theorem_part_i_check(l: &FiniteLattice) -> Result<PartIReport> {
    if !l.is_slim() {
        return Err(Error::NotSlim);
    }
    let pairs = l.incomparable_pairs();
    let mut violations = Vec::new();
    for &(a, b) in &pairs {
        let c = l.meet(a, b);
        if !l.is_chain_interval(c, a)? || !l.is_chain_interval(c, b)? {
            violations.push(ChainViolation { a: l.id(a).into(), b: l.id(b).into(), meet: l.id(c).into() });
        }
    }
    Ok(PartIReport { pairs_checked: pairs.len(), violations })
}

/// Grid dimensions followed by multifork steps and corner removals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionRecipe {
    pub grid: (usize, usize),
    pub steps: Vec<RecipeStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecipeStep {
    Multifork { left: String, top: String, n: usize },
    RemoveCorner(String),
}

impl ConstructionRecipe {
    pub fn new(m: usize, k: usize) -> Self {
        ConstructionRecipe { grid: (m, k), steps: Vec::new() }
    }

    pub fn with(&self, step: RecipeStep) -> Self {
        let mut r = self.clone();
        r.steps.push(step);
        r
    }

    pub fn removals(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, RecipeStep::RemoveCorner(_))).count()
    }

    fn check_order(&self) -> Result<()> {
        let mut removing = false;
        for (k, s) in self.steps.iter().enumerate() {
            match s {
                RecipeStep::RemoveCorner(_) => removing = true,
                RecipeStep::Multifork { .. } if removing => {
                    return Err(Error::MalformedRecipe(format!("step {k}: multifork after a corner removal")))
                }
                RecipeStep::Multifork { .. } => {}
            }
        }
        Ok(())
    }
}

/// Applies one step; `index` is the step's position in its recipe.
pub(crate) fn apply_step(
    l: &FiniteLattice,
    layout: &DiagramLayout,
    index: usize,
    step: &RecipeStep,
) -> Result<(FiniteLattice, DiagramLayout)> {
    match step {
        RecipeStep::Multifork { left, top, n } => {
            let cell = find_cell(l, layout, l.elem(left)?, l.elem(top)?)?;
            let e = multifork_extend(l, layout, &cell, *n, &format!("f{index}"))?;
            Ok((e.lattice, e.layout))
        }
        RecipeStep::RemoveCorner(id) => {
            let w = l.elem(id)?;
            if !corners_unchecked(l, layout).contains(&w) {
                return Err(Error::NotACorner(id.clone()));
            }
            remove_corner_unchecked(l, layout, w)
        }
    }
}

/// Deterministic replay; the result is checked to be slim, semimodular and
/// validly laid out.
pub fn replay(recipe: &ConstructionRecipe) -> Result<(FiniteLattice, DiagramLayout)> {
    recipe.check_order()?;
    let (mut l, mut layout) = grid(recipe.grid.0, recipe.grid.1)?;
    for (index, step) in recipe.steps.iter().enumerate() {
        (l, layout) = apply_step(&l, &layout, index, step).map_err(|e| Error::Step { index, source: Box::new(e) })?;
    }
    if !l.is_slim() {
        return Err(Error::NotSlim);
    }
    if !l.is_semimodular() {
        return Err(Error::NotSemimodular);
    }
    diagram::require_valid(&l, &layout)?;
    Ok((l, layout))
}
