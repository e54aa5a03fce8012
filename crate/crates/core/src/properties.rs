//! Absorption properties of sublattices and of the retracts of a lattice.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::diagram::DiagramLayout;
use crate::error::{Error, Result};
use crate::io::LatticeJson;
use crate::lattice::{Elem, FiniteLattice};
use crate::morphisms::{self, for_each_embedding, validate_retraction, LatticeMap, Retraction};
use crate::par;
use crate::slim::ConstructionRecipe;

/// `AP(K, A, X)`: every embedding of `K` sending the black part `A` into a
/// sublattice must also send the stars `X` into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsorptionPattern {
    pub name: String,
    pub k: FiniteLattice,
    pub black: Vec<Elem>,
    pub stars: Vec<Elem>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternJson {
    name: String,
    lattice: LatticeJson,
    black: Vec<String>,
    stars: Vec<String>,
}

impl AbsorptionPattern {
    pub fn new(name: &str, k: FiniteLattice, mut black: Vec<Elem>, mut stars: Vec<Elem>) -> Result<Self> {
        black.sort_unstable();
        black.dedup();
        stars.sort_unstable();
        stars.dedup();
        if stars.is_empty() {
            return Err(Error::InvalidPattern("star set is empty".into()));
        }
        if !k.is_sublattice(&black).unwrap_or(false) {
            return Err(Error::InvalidPattern("black elements do not form a sublattice".into()));
        }
        Ok(AbsorptionPattern { name: name.to_string(), k, black, stars })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: PatternJson = serde_json::from_str(s)?;
        let k = p.lattice.lattice()?;
        let black = k.elems(&p.black)?;
        let stars = k.elems(&p.stars)?;
        AbsorptionPattern::new(&p.name, k, black, stars)
    }

    pub fn to_json(&self) -> String {
        let ids = |v: &[Elem]| {
            let mut out: Vec<String> = v.iter().map(|&x| self.k.id(x).to_string()).collect();
            out.sort();
            out
        };
        let p = PatternJson {
            name: self.name.clone(),
            lattice: LatticeJson::new(&self.k, None),
            black: ids(&self.black),
            stars: ids(&self.stars),
        };
        serde_json::to_string(&p).expect("serialisable")
    }

    /// Same marks on the dual of `K`.
    pub fn dual(&self) -> Self {
        AbsorptionPattern {
            name: format!("{}dual", self.name),
            k: self.k.dual(),
            black: self.black.clone(),
            stars: self.stars.clone(),
        }
    }
}

/// `K` on `a, b, c, d, x, y, z, t`: the 3×3 grid without one of its side
/// corners, with `A = {a, b, c, d}` and `X = {y}`.
pub fn builtin_pattern_p81() -> AbsorptionPattern {
    let k = FiniteLattice::build(
        &["a", "b", "c", "d", "t", "x", "y", "z"],
        &[
            ("a", "x"),
            ("a", "b"),
            ("x", "y"),
            ("b", "y"),
            ("b", "t"),
            ("y", "z"),
            ("y", "c"),
            ("t", "c"),
            ("z", "d"),
            ("c", "d"),
        ],
    )
    .expect("P81 lattice");
    let black = k.elems(&["a", "b", "c", "d"]).expect("ids");
    let stars = k.elems(&["y"]).expect("ids");
    AbsorptionPattern::new("P81", k, black, stars).expect("P81")
}

const P92: &str = include_str!("../data/patterns/p92.json");
const P82: &str = include_str!("../data/patterns/p82.json");
const P94: &str = include_str!("../data/patterns/p94.json");

/// Names accepted by [`builtin_pattern`].
pub const BUILTIN_PATTERNS: [&str; 6] = ["P81", "P92", "P82", "P82dual", "P94", "P94dual"];

pub fn builtin_pattern(name: &str) -> Option<AbsorptionPattern> {
    let load = |s: &str| AbsorptionPattern::from_json(s).expect("shipped pattern");
    Some(match name {
        "P81" => builtin_pattern_p81(),
        "P92" => load(P92),
        "P82" => load(P82),
        "P82dual" => load(P82).dual(),
        "P94" => load(P94),
        "P94dual" => load(P94).dual(),
        _ => return None,
    })
}

/// A built-in name or a path to a pattern JSON file.
pub fn load_pattern(name_or_path: &str) -> Result<AbsorptionPattern> {
    if let Some(p) = builtin_pattern(name_or_path) {
        return Ok(p);
    }
    let text = std::fs::read_to_string(name_or_path).map_err(|e| Error::Schema(format!("{name_or_path}: {e}")))?;
    AbsorptionPattern::from_json(&text)
}

/// An embedding of `K` with `g(A) ⊆ S` and a star mapped outside `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub embedding: Vec<Elem>,
    pub star: Elem,
}

impl Witness {
    pub fn to_json(&self, p: &AbsorptionPattern, l: &FiniteLattice) -> Value {
        let g = LatticeMap::new(&p.k, l, self.embedding.clone());
        json!({"embedding": g.to_json(&p.name, "L")["assignment"], "star": p.k.id(self.star)})
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternVerdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Whether the sublattice `s` of `l` satisfies the pattern; otherwise the
/// first violating embedding in search order.
pub fn satisfies_absorption(l: &FiniteLattice, s: &[Elem], p: &AbsorptionPattern) -> Result<PatternVerdict> {
    if !l.is_sublattice(s)? {
        return Err(Error::NotSublattice);
    }
    let mut inside = vec![false; l.len()];
    for &x in s {
        inside[x] = true;
    }
    let mut witness = None;
    for_each_embedding(&p.k, l, Some((&p.black, s)), |g| match p.stars.iter().find(|&&x| !inside[g[x]]) {
        Some(&star) => {
            witness = Some(Witness { embedding: g.to_vec(), star });
            ControlFlow::Break(())
        }
        None => ControlFlow::Continue(()),
    });
    Ok(PatternVerdict { holds: witness.is_none(), witness })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractFailure {
    pub retract: Vec<Elem>,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractsReport {
    pub retracts_checked: usize,
    pub failures: Vec<RetractFailure>,
}

impl RetractsReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the pattern on every retract of `l`.
pub fn check_retracts_property(l: &FiniteLattice, p: &AbsorptionPattern) -> Result<RetractsReport> {
    let retracts = morphisms::retracts(l)?;
    let verdicts = par::map(&retracts, |s| satisfies_absorption(l, s, p));
    let mut failures = Vec::new();
    for (s, v) in retracts.iter().zip(verdicts) {
        if let Some(witness) = v?.witness {
            failures.push(RetractFailure { retract: s.clone(), witness });
        }
    }
    Ok(RetractsReport { retracts_checked: retracts.len(), failures })
}

/// A block of a partition together with its marked element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub mark: Elem,
    pub members: Vec<Elem>,
}

/// Sends every element to the mark of its block; fails unless this is a
/// retraction.
pub fn cogwheel_retraction<'a>(l: &'a FiniteLattice, blocks: &[Block]) -> Result<Retraction<'a>> {
    let mut f = vec![usize::MAX; l.len()];
    for b in blocks {
        if !b.members.contains(&b.mark) {
            return Err(Error::NotARetraction(format!("mark {} outside its block", l.id(b.mark))));
        }
        for &x in &b.members {
            if f[x] != usize::MAX {
                return Err(Error::NotARetraction(format!("{} in two blocks", l.id(x))));
            }
            f[x] = b.mark;
        }
    }
    if let Some(x) = f.iter().position(|&c| c == usize::MAX) {
        return Err(Error::NotARetraction(format!("{} in no block", l.id(x))));
    }
    validate_retraction(l, &f).map_err(Error::NotARetraction)?;
    let map = LatticeMap::new(l, l, f);
    let image = map.image();
    Ok(Retraction { map, image })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockJson {
    mark: String,
    members: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureJson {
    name: String,
    pattern: String,
    lattice: LatticeJson,
    blocks: Vec<BlockJson>,
}

/// A lattice with a partition into blocks whose cog-wheel retraction has an
/// image violating `pattern`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub name: String,
    pub pattern: String,
    pub lattice: FiniteLattice,
    pub layout: Option<DiagramLayout>,
    pub recipe: Option<ConstructionRecipe>,
    pub blocks: Vec<Block>,
}

impl Counterexample {
    pub fn from_json(s: &str) -> Result<Self> {
        let f: FixtureJson = serde_json::from_str(s)?;
        let (lattice, layout) = f.lattice.parts()?;
        let blocks = f
            .blocks
            .iter()
            .map(|b| Ok(Block { mark: lattice.elem(&b.mark)?, members: lattice.elems(&b.members)? }))
            .collect::<Result<Vec<_>>>()?;
        let recipe = f.lattice.recipe.clone();
        Ok(Counterexample { name: f.name, pattern: f.pattern, lattice, layout, recipe, blocks })
    }

    pub fn to_json(&self) -> String {
        let mut lattice = LatticeJson::new(&self.lattice, self.layout.as_ref());
        lattice.recipe = self.recipe.clone();
        let ids = |v: &[Elem]| {
            let mut out: Vec<String> = v.iter().map(|&x| self.lattice.id(x).to_string()).collect();
            out.sort();
            out
        };
        let mut blocks: Vec<BlockJson> = self
            .blocks
            .iter()
            .map(|b| BlockJson { mark: self.lattice.id(b.mark).to_string(), members: ids(&b.members) })
            .collect();
        blocks.sort_by(|a, b| a.mark.cmp(&b.mark));
        let f = FixtureJson { name: self.name.clone(), pattern: self.pattern.clone(), lattice, blocks };
        serde_json::to_string_pretty(&f).expect("serialisable") + "\n"
    }

    /// Fibres of a retraction, each marked by its fixed point.
    pub fn blocks_of(f: &[Elem]) -> Vec<Block> {
        let mut blocks: Vec<Block> = Vec::new();
        for (x, &m) in f.iter().enumerate() {
            match blocks.iter_mut().find(|b| b.mark == m) {
                Some(b) => b.members.push(x),
                None => blocks.push(Block { mark: m, members: vec![x] }),
            }
        }
        blocks
    }
}

const FIXTURES: [&str; 4] = [
    include_str!("../data/fixtures/l82.json"),
    include_str!("../data/fixtures/l82dual.json"),
    include_str!("../data/fixtures/l94.json"),
    include_str!("../data/fixtures/l94dual.json"),
];

/// Shipped counterexamples, one per pattern that fails in general.
pub fn builtin_counterexamples() -> Vec<Counterexample> {
    FIXTURES.iter().map(|s| Counterexample::from_json(s).expect("shipped fixture")).collect()
}

/// Enlarging the star set can only make the property stronger: returns
/// whether `satisfies(bigger) ⇒ satisfies(p)` held for `s`.
pub fn pattern_strength_check(
    l: &FiniteLattice,
    s: &[Elem],
    p: &AbsorptionPattern,
    bigger: &AbsorptionPattern,
) -> Result<bool> {
    let same_base = p.k == bigger.k && p.black == bigger.black;
    if !same_base || !p.stars.iter().all(|x| bigger.stars.contains(x)) {
        return Err(Error::PatternMismatch);
    }
    let strong = satisfies_absorption(l, s, bigger)?.holds;
    Ok(!strong || satisfies_absorption(l, s, p)?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::standard::chain;
    use crate::morphisms::{is_embedding, is_retract};

    fn set(l: &FiniteLattice, ids: &[&str]) -> Vec<Elem> {
        l.elems(ids).unwrap()
    }

    #[test]
    fn p81_identities() {
        let p = builtin_pattern_p81();
        let k = &p.k;
        let m = |a, b| k.meet_of(a, b).unwrap().to_string();
        let j = |a, b| k.join_of(a, b).unwrap().to_string();
        assert_eq!(m("x", "t"), "a");
        assert_eq!(m("z", "t"), "b");
        assert_eq!(m("z", "c"), "y");
        assert_eq!(j("x", "b"), "y");
        assert_eq!(j("x", "t"), "c");
        assert_eq!(j("z", "t"), "d");
        assert!(k.is_slim() && k.is_semimodular());
    }

    #[test]
    fn p81_layout_matches_drawing() {
        let p = builtin_pattern_p81();
        let layout = crate::slim::default_layout(&p.k).unwrap();
        let at = |id: &str| {
            let q = layout.pos(p.k.elem(id).unwrap());
            (q.x.to_integer(), q.y.to_integer())
        };
        assert_eq!(at("a"), (0, 0));
        assert_eq!(at("x"), (-1, 1));
        assert_eq!(at("b"), (1, 1));
        assert_eq!(at("y"), (0, 2));
        assert_eq!(at("t"), (2, 2));
        assert_eq!(at("z"), (-1, 3));
        assert_eq!(at("c"), (1, 3));
        assert_eq!(at("d"), (0, 4));
    }

    #[test]
    fn shipped_patterns_load() {
        for name in BUILTIN_PATTERNS {
            let p = builtin_pattern(name).unwrap();
            assert!(p.k.is_slim() && p.k.is_semimodular(), "{name}");
            assert!(p.stars.iter().all(|x| !p.black.contains(x)), "{name}");
        }
        let p92 = builtin_pattern("P92").unwrap();
        assert_eq!((p92.k.len(), p92.stars.len()), (9, 2));
        assert_eq!(builtin_pattern("P94").unwrap().stars.len(), 4);
        assert!(builtin_pattern("nope").is_none());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let p = builtin_pattern_p81();
        assert_eq!(AbsorptionPattern::from_json(&p.to_json()).unwrap(), p);
        let no_stars = p.to_json().replace(r#""stars":["y"]"#, r#""stars":[]"#);
        assert!(matches!(AbsorptionPattern::from_json(&no_stars), Err(Error::InvalidPattern(_))));
        let bad_black = p.to_json().replace(r#""black":["a","b","c","d"]"#, r#""black":["x","b"]"#);
        assert!(matches!(AbsorptionPattern::from_json(&bad_black), Err(Error::InvalidPattern(_))));
    }

    #[test]
    fn verdicts_on_k() {
        let p = builtin_pattern_p81();
        let k = &p.k;
        let s = set(k, &["a", "b", "c", "d", "y"]);
        assert!(satisfies_absorption(k, &s, &p).unwrap().holds);
        assert!(satisfies_absorption(k, &s, &builtin_pattern("P92").unwrap()).unwrap().holds);
        assert!(is_retract(k, &s).unwrap().is_none());

        let s = set(k, &["a", "b", "c", "d"]);
        let v = satisfies_absorption(k, &s, &p).unwrap();
        let w = v.witness.unwrap();
        assert_eq!(w.embedding, k.elements().collect::<Vec<_>>());
        assert_eq!(k.id(w.star), "y");
        assert!(is_embedding(&LatticeMap::new(k, k, w.embedding)));

        let c5 = chain(5);
        assert!(satisfies_absorption(&c5, &[0, 4], &p).unwrap().holds);
    }

    #[test]
    fn cogwheels() {
        let l = chain(3);
        let singletons: Vec<Block> = l.elements().map(|x| Block { mark: x, members: vec![x] }).collect();
        assert_eq!(cogwheel_retraction(&l, &singletons).unwrap().map, LatticeMap::identity(&l));
        let one = [Block { mark: 0, members: vec![0, 1, 2] }];
        assert_eq!(cogwheel_retraction(&l, &one).unwrap().image, vec![0]);
        let broken = [Block { mark: 1, members: vec![0, 1, 2] }, Block { mark: 2, members: vec![] }];
        assert!(matches!(cogwheel_retraction(&l, &broken), Err(Error::NotARetraction(_))));
        let bad = [Block { mark: 0, members: vec![0, 2] }, Block { mark: 1, members: vec![1] }];
        assert!(matches!(cogwheel_retraction(&l, &bad), Err(Error::NotARetraction(_))));
    }

    #[test]
    fn strength() {
        let p = builtin_pattern_p81();
        let mut bigger = p.clone();
        bigger.stars = set(&p.k, &["t", "y"]);
        let k = &p.k;
        for s in morphisms::retracts(k).unwrap() {
            assert!(pattern_strength_check(k, &s, &p, &bigger).unwrap());
            assert!(pattern_strength_check(k, &s, &p, &p).unwrap());
        }
        assert_eq!(pattern_strength_check(k, &[0], &bigger, &p).unwrap_err(), Error::PatternMismatch);
    }

    #[test]
    fn shipped_counterexamples() {
        let all = builtin_counterexamples();
        assert_eq!(all.len(), 4);
        for c in &all {
            let l = &c.lattice;
            assert!(l.is_slim() && l.is_semimodular(), "{}", c.name);
            let r = cogwheel_retraction(l, &c.blocks).unwrap();
            let p = builtin_pattern(&c.pattern).unwrap();
            let v = satisfies_absorption(l, &r.image, &p).unwrap();
            assert!(!v.holds, "{}", c.name);
            assert_eq!(Counterexample::from_json(&c.to_json()).unwrap(), *c);
        }
    }
}
