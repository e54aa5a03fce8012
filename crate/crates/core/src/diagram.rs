//! C₁-diagram geometry: layouts, slope classes, boundary chains, rays,
//! cones, the left-of relation, and the regular-meet checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{self, Point, Slope, Q};
use crate::lattice::{Elem, FiniteLattice};
use crate::par;
use crate::slim::JoinCoordinates;

/// Plane position per element, indexed like the lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramLayout {
    pub position: Vec<Point>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    NW,
    NE,
    SW,
    SE,
}

impl Direction {
    pub fn opposite(self) -> Direction {
        match self {
            Direction::NW => Direction::SE,
            Direction::SE => Direction::NW,
            Direction::NE => Direction::SW,
            Direction::SW => Direction::NE,
        }
    }

    fn vector(self) -> (i64, i64) {
        match self {
            Direction::NW => (-1, 1),
            Direction::NE => (1, 1),
            Direction::SW => (-1, -1),
            Direction::SE => (1, -1),
        }
    }
}

/// Position `(j - i, j + i)` from the join coordinates: the first chain
/// climbs to the upper left, the second to the upper right.
pub fn layout_join_coords(l: &FiniteLattice, jc: &JoinCoordinates) -> Result<DiagramLayout> {
    let position = l
        .elements()
        .map(|x| {
            let (i, j) = (jc.i[x] as i64, jc.j[x] as i64);
            Point::int(j - i, j + i)
        })
        .collect();
    let layout = DiagramLayout { position };
    let report = validate_c1(l, &layout);
    if let Some(v) = report.violations.first() {
        return Err(Error::LayoutInvalid(v.describe(l)));
    }
    Ok(layout)
}

impl DiagramLayout {
    pub fn pos(&self, x: Elem) -> Point {
        self.position[x]
    }

    pub fn edge_slope(&self, lower: Elem, upper: Elem) -> Slope {
        Slope::of(self.position[lower], self.position[upper])
    }

    /// Restriction to the surviving elements of `keep` (given in the new
    /// lattice's positional order).
    pub fn restrict(&self, keep: &[Elem]) -> DiagramLayout {
        DiagramLayout { position: keep.iter().map(|&x| self.position[x]).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    DuplicatePosition {
        a: String,
        b: String,
    },
    NotUpward {
        lower: String,
        upper: String,
    },
    AngleOutOfRange {
        lower: String,
        upper: String,
    },
    /// The lower end is an interior meet-irreducible but the edge is normal,
    /// or the converse.
    EdgeRule {
        lower: String,
        upper: String,
        precipitous: bool,
    },
    ConeOrder {
        x: String,
        y: String,
    },
    Crossing {
        e: (String, String),
        f: (String, String),
    },
    VertexOnEdge {
        vertex: String,
        e: (String, String),
    },
}

impl Violation {
    pub fn describe(&self, _l: &FiniteLattice) -> String {
        serde_json::to_string(self).unwrap_or_default()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct C1Report {
    pub violations: Vec<Violation>,
}

impl C1Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// All C₁ conditions, in order: distinct positions, upward edges, angle
/// range, the edge rule (both directions), cone-order equivalence, planarity.
pub fn validate_c1(l: &FiniteLattice, layout: &DiagramLayout) -> C1Report {
    let mut v = Vec::new();
    let n = l.len();
    let id = |x: Elem| l.id(x).to_string();
    if layout.position.len() != n {
        v.push(Violation::DuplicatePosition { a: "<layout>".into(), b: "<size mismatch>".into() });
        return C1Report { violations: v };
    }
    for a in 0..n {
        for b in a + 1..n {
            if layout.pos(a) == layout.pos(b) {
                v.push(Violation::DuplicatePosition { a: id(a), b: id(b) });
            }
        }
    }
    let edges = l.cover_pairs();
    let mut shape_ok = true;
    for &(a, b) in &edges {
        if layout.pos(b).y <= layout.pos(a).y {
            v.push(Violation::NotUpward { lower: id(a), upper: id(b) });
            shape_ok = false;
        } else if layout.edge_slope(a, b) == Slope::OutOfRange {
            v.push(Violation::AngleOutOfRange { lower: id(a), upper: id(b) });
            shape_ok = false;
        }
    }
    let (left, right) = boundary_chains_unchecked(l, layout);
    let mut on_boundary = vec![false; n];
    for &x in left.iter().chain(right.iter()) {
        on_boundary[x] = true;
    }
    for &(a, b) in &edges {
        let s = layout.edge_slope(a, b);
        if s == Slope::OutOfRange {
            continue;
        }
        let interior_mir = l.is_meet_irreducible(a) && !on_boundary[a];
        let precipitous = s == Slope::Precipitous;
        if interior_mir != precipitous {
            v.push(Violation::EdgeRule { lower: id(a), upper: id(b), precipitous });
        }
    }
    for x in 0..n {
        for y in 0..n {
            if x != y && l.leq(x, y) != geometry::cone_leq(layout.pos(x), layout.pos(y)) {
                v.push(Violation::ConeOrder { x: id(x), y: id(y) });
            }
        }
    }
    if shape_ok {
        for (k, &(a, b)) in edges.iter().enumerate() {
            let (pa, pb) = (layout.pos(a), layout.pos(b));
            for &(c, d) in &edges[k + 1..] {
                let (pc, pd) = (layout.pos(c), layout.pos(d));
                let shared = [a, b].iter().find(|&&e| e == c || e == d).copied();
                let bad = match shared {
                    None => geometry::segments_touch(pa, pb, pc, pd),
                    Some(s) => {
                        let ps = layout.pos(s);
                        let oa = if s == a { pb } else { pa };
                        let oc = if s == c { pd } else { pc };
                        geometry::collinear_overlap(ps, oa, oc)
                    }
                };
                if bad {
                    v.push(Violation::Crossing { e: (id(a), id(b)), f: (id(c), id(d)) });
                }
            }
            for w in 0..n {
                if w != a && w != b && geometry::strictly_inside_segment(layout.pos(w), pa, pb) {
                    v.push(Violation::VertexOnEdge { vertex: id(w), e: (id(a), id(b)) });
                }
            }
        }
    }
    C1Report { violations: v }
}

fn boundary_chains_unchecked(l: &FiniteLattice, layout: &DiagramLayout) -> (Vec<Elem>, Vec<Elem>) {
    let walk = |leftmost: bool| {
        let mut chain = vec![l.bottom()];
        let mut x = l.bottom();
        while let Some(&next) = if leftmost {
            l.upper_covers(x).iter().min_by_key(|&&u| (layout.pos(u).x, u))
        } else {
            l.upper_covers(x).iter().max_by_key(|&&u| (layout.pos(u).x, std::cmp::Reverse(u)))
        } {
            chain.push(next);
            x = next;
        }
        chain
    };
    (walk(true), walk(false))
}

/// Left and right boundary chains: from the minimum, always step to the
/// leftmost (resp. rightmost) upper cover.
pub fn boundary_chains(l: &FiniteLattice, layout: &DiagramLayout) -> Result<(Vec<Elem>, Vec<Elem>)> {
    require_valid(l, layout)?;
    Ok(boundary_chains_unchecked(l, layout))
}

pub(crate) fn require_valid(l: &FiniteLattice, layout: &DiagramLayout) -> Result<()> {
    let report = validate_c1(l, layout);
    match report.violations.first() {
        Some(v) => Err(Error::LayoutInvalid(v.describe(l))),
        None => Ok(()),
    }
}

/// Membership mask of `left ∪ right` boundary without revalidating.
pub(crate) fn boundary_mask(l: &FiniteLattice, layout: &DiagramLayout) -> Vec<bool> {
    let (left, right) = boundary_chains_unchecked(l, layout);
    let mut mask = vec![false; l.len()];
    for x in left.into_iter().chain(right) {
        mask[x] = true;
    }
    mask
}

/// Elements other than `u` lying exactly on the ray of normal slope from
/// `u` in direction `d`, nearest first. Empty when nothing lies there.
pub fn ray_elements(l: &FiniteLattice, layout: &DiagramLayout, u: Elem, d: Direction) -> Vec<Elem> {
    let (sx, sy) = d.vector();
    let (sx, sy) = (Q::from_integer(sx), Q::from_integer(sy));
    let pu = layout.pos(u);
    let mut hits: Vec<(Q, Elem)> = l
        .elements()
        .filter(|&w| w != u)
        .filter_map(|w| {
            let delta = layout.pos(w) - pu;
            let t = delta.x * sx;
            (t == delta.y * sy && t > Q::from_integer(0)).then_some((t, w))
        })
        .collect();
    hits.sort();
    hits.into_iter().map(|(_, w)| w).collect()
}

pub fn cone_leq(layout: &DiagramLayout, b: Elem, c: Elem) -> bool {
    b == c || geometry::cone_leq(layout.pos(b), layout.pos(c))
}

/// Maximal chain through `v`, taking leftmost covers in both directions.
pub fn leftmost_chain_through(l: &FiniteLattice, layout: &DiagramLayout, v: Elem) -> Vec<Elem> {
    let mut down = vec![v];
    let mut x = v;
    while let Some(&p) = l.lower_covers(x).iter().min_by_key(|&&p| (layout.pos(p).x, p)) {
        down.push(p);
        x = p;
    }
    down.reverse();
    let mut x = v;
    while let Some(&q) = l.upper_covers(x).iter().min_by_key(|&&q| (layout.pos(q).x, q)) {
        down.push(q);
        x = q;
    }
    down
}

/// Every maximal chain containing `v` (exponential; small inputs only).
pub fn maximal_chains_through(l: &FiniteLattice, v: Elem) -> Vec<Vec<Elem>> {
    fn downs(l: &FiniteLattice, x: Elem) -> Vec<Vec<Elem>> {
        if l.lower_covers(x).is_empty() {
            return vec![vec![x]];
        }
        let mut out = Vec::new();
        for &p in l.lower_covers(x) {
            for mut c in downs(l, p) {
                c.push(x);
                out.push(c);
            }
        }
        out
    }
    fn ups(l: &FiniteLattice, x: Elem) -> Vec<Vec<Elem>> {
        if l.upper_covers(x).is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for &q in l.upper_covers(x) {
            for c in ups(l, q) {
                let mut v = vec![q];
                v.extend(c);
                out.push(v);
            }
        }
        out
    }
    let mut out = Vec::new();
    for d in downs(l, v) {
        for u in ups(l, v) {
            let mut c = d.clone();
            c.extend(u);
            out.push(c);
        }
    }
    out
}

/// `u` is strictly left of the polyline drawn by `chain` at `u`'s height.
pub fn left_of_chain(layout: &DiagramLayout, u: Elem, chain: &[Elem]) -> bool {
    let pu = layout.pos(u);
    for w in chain.windows(2) {
        let (p, q) = (layout.pos(w[0]), layout.pos(w[1]));
        if p.y <= pu.y && pu.y <= q.y {
            let x = if q.y == p.y { p.x } else { p.x + (q.x - p.x) * (pu.y - p.y) / (q.y - p.y) };
            return pu.x < x;
        }
    }
    false
}

/// For incomparable `u`, `v`: `u` lies left of a maximal chain through `v`.
pub fn left_of(l: &FiniteLattice, layout: &DiagramLayout, u: Elem, v: Elem) -> Result<bool> {
    if l.comparable(u, v) {
        return Err(Error::NotIncomparable(l.id(u).into(), l.id(v).into()));
    }
    let chain = leftmost_chain_through(l, layout, v);
    let answer = left_of_chain(layout, u, &chain);
    if cfg!(debug_assertions) && l.len() <= 10 {
        for c in maximal_chains_through(l, v) {
            debug_assert_eq!(left_of_chain(layout, u, &c), answer, "left_of depends on chain");
        }
    }
    Ok(answer)
}

/// Sub-checks of the regular-meet property for an incomparable pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularMeetReport {
    pub a: String,
    pub b: String,
    pub meet: String,
    pub intervals_are_chains: bool,
    pub slope_a: Option<Slope>,
    pub slope_b: Option<Slope>,
    pub orthogonal: bool,
    pub meet_reducible: bool,
    /// Interval elements (tops excluded) with a single upper cover.
    pub meet_irreducible_witnesses: Vec<String>,
}

impl RegularMeetReport {
    pub fn passed(&self) -> bool {
        self.intervals_are_chains
            && self.slope_a.is_some()
            && self.slope_b.is_some()
            && self.orthogonal
            && self.meet_reducible
    }

    /// Names of the failing sub-checks.
    pub fn failed_checks(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.intervals_are_chains {
            out.push("chains");
        }
        if self.slope_a.is_none() || self.slope_b.is_none() {
            out.push("normal_slope");
        }
        if !self.orthogonal {
            out.push("orthogonal");
        }
        if !self.meet_reducible {
            out.push("meet_reducible");
        }
        out
    }
}

fn chain_slope(l: &FiniteLattice, layout: &DiagramLayout, members: &[Elem]) -> Option<Slope> {
    let mut sorted = members.to_vec();
    sorted.sort_by_key(|&x| l.principal_ideal(x).len());
    let mut slope = None;
    for w in sorted.windows(2) {
        let s = layout.edge_slope(w[0], w[1]);
        if !s.is_normal() || slope.is_some_and(|t| t != s) {
            return None;
        }
        slope = Some(s);
    }
    slope
}

pub fn regular_meet_check(l: &FiniteLattice, layout: &DiagramLayout, a: Elem, b: Elem) -> Result<RegularMeetReport> {
    if l.comparable(a, b) {
        return Err(Error::NotIncomparable(l.id(a).into(), l.id(b).into()));
    }
    let c = l.meet(a, b);
    let ia = l.interval(c, a)?.members;
    let ib = l.interval(c, b)?.members;
    let chains = l.is_chain(&ia) && l.is_chain(&ib);
    let (slope_a, slope_b) =
        if chains { (chain_slope(l, layout, &ia), chain_slope(l, layout, &ib)) } else { (None, None) };
    let orthogonal = matches!((slope_a, slope_b), (Some(s), Some(t)) if s != t);
    let mut witnesses: Vec<String> = ia
        .iter()
        .filter(|&&x| x != a)
        .chain(ib.iter().filter(|&&x| x != b))
        .filter(|&&x| l.upper_covers(x).len() < 2)
        .map(|&x| l.id(x).to_string())
        .collect();
    witnesses.sort();
    witnesses.dedup();
    Ok(RegularMeetReport {
        a: l.id(a).into(),
        b: l.id(b).into(),
        meet: l.id(c).into(),
        intervals_are_chains: chains,
        slope_a,
        slope_b,
        orthogonal,
        meet_reducible: witnesses.is_empty(),
        meet_irreducible_witnesses: witnesses,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairSweepReport {
    pub pairs_checked: usize,
    pub failures: Vec<RegularMeetReport>,
}

impl PairSweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Regular-meet check over every incomparable pair of a slim semimodular
/// lattice; failures sorted by identifiers.
pub fn theorem_part_ii_check(l: &FiniteLattice, layout: &DiagramLayout) -> Result<PairSweepReport> {
    if !l.is_slim() {
        return Err(Error::NotSlim);
    }
    if !l.is_semimodular() {
        return Err(Error::NotSemimodular);
    }
    require_valid(l, layout)?;
    let mut pairs: Vec<(Elem, Elem)> =
        l.incomparable_pairs().into_iter().map(|(a, b)| if l.id(a) <= l.id(b) { (a, b) } else { (b, a) }).collect();
    pairs.sort_by(|p, q| (l.id(p.0), l.id(p.1)).cmp(&(l.id(q.0), l.id(q.1))));
    let reports = par::map(&pairs, |&(a, b)| regular_meet_check(l, layout, a, b));
    let mut failures = Vec::new();
    for r in reports {
        let r = r?;
        if !r.passed() {
            failures.push(r);
        }
    }
    Ok(PairSweepReport { pairs_checked: pairs.len(), failures })
}
