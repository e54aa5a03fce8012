//! JSON exchange formats for lattices, layouts and recipes.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::diagram::DiagramLayout;
use crate::error::{Error, Result};
use crate::geometry::{Point, Q};
use crate::lattice::FiniteLattice;
use crate::slim::ConstructionRecipe;

/// One coordinate: a plain integer or `[num, den]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Int(i64),
    Frac(i64, i64),
}

impl Coord {
    pub fn of(q: Q) -> Coord {
        if q.denom().is_one() {
            Coord::Int(*q.numer())
        } else {
            Coord::Frac(*q.numer(), *q.denom())
        }
    }

    pub fn value(self) -> Result<Q> {
        match self {
            Coord::Int(n) => Ok(Q::from_integer(n)),
            Coord::Frac(_, 0) => Err(Error::Schema("zero denominator".into())),
            Coord::Frac(n, d) => Ok(Q::new(n, d)),
        }
    }
}

/// Wire form of a lattice; field order is the output key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<BTreeMap<String, (Coord, Coord)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<ConstructionRecipe>,
}

impl LatticeJson {
    /// Elements and covers sorted by identifier.
    pub fn new(l: &FiniteLattice, layout: Option<&DiagramLayout>) -> Self {
        let mut elements: Vec<String> = l.ids().to_vec();
        elements.sort();
        let mut covers: Vec<(String, String)> =
            l.cover_pairs().into_iter().map(|(a, b)| (l.id(a).to_string(), l.id(b).to_string())).collect();
        covers.sort();
        let coords = layout.map(|lay| {
            l.elements()
                .map(|x| {
                    let p = lay.pos(x);
                    (l.id(x).to_string(), (Coord::of(p.x), Coord::of(p.y)))
                })
                .collect()
        });
        LatticeJson { elements, covers, coords, recipe: None }
    }

    pub fn lattice(&self) -> Result<FiniteLattice> {
        FiniteLattice::build(&self.elements, &self.covers)
    }

    /// The lattice and, when coordinates are present, its layout.
    pub fn parts(&self) -> Result<(FiniteLattice, Option<DiagramLayout>)> {
        let l = self.lattice()?;
        let Some(coords) = &self.coords else { return Ok((l, None)) };
        let mut position = Vec::with_capacity(l.len());
        for x in l.elements() {
            let (cx, cy) =
                coords.get(l.id(x)).ok_or_else(|| Error::Schema(format!("no coordinates for {}", l.id(x))))?;
            position.push(Point::new(cx.value()?, cy.value()?));
        }
        if coords.len() != l.len() {
            return Err(Error::Schema("coordinates for unknown elements".into()));
        }
        Ok((l, Some(DiagramLayout { position })))
    }
}

pub fn lattice_to_json(l: &FiniteLattice, layout: Option<&DiagramLayout>) -> String {
    serde_json::to_string(&LatticeJson::new(l, layout)).expect("serialisable")
}

pub fn lattice_from_json(s: &str) -> Result<(FiniteLattice, Option<DiagramLayout>)> {
    let j: LatticeJson = serde_json::from_str(s)?;
    j.parts()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::standard::n5;
    use crate::slim::{default_layout, grid};

    #[test]
    fn exact_shape() {
        let l = n5();
        let s = lattice_to_json(&l, None);
        assert_eq!(
            s,
            r#"{"elements":["0","1","x","y","z"],"covers":[["0","x"],["0","y"],["x","z"],["y","1"],["z","1"]]}"#
        );
        let (back, lay) = lattice_from_json(&s).unwrap();
        assert!(lay.is_none());
        assert!(back.is_isomorphic(&l));
    }

    #[test]
    fn coords_round_trip() {
        let (l, layout) = grid(2, 3).unwrap();
        let s = lattice_to_json(&l, Some(&layout));
        assert!(s.contains(r#""coords":{"0.0":[0,0]"#));
        let (back, lay) = lattice_from_json(&s).unwrap();
        assert_eq!(lattice_to_json(&back, lay.as_ref()), s);
        let half = Coord::of(Q::new(1, 2));
        assert_eq!(serde_json::to_string(&half).unwrap(), "[1,2]");
        let pos = |l: &FiniteLattice, lay: &DiagramLayout, id: &str| lay.pos(l.elem(id).unwrap());
        let fresh = default_layout(&back).unwrap();
        assert!(l.ids().iter().all(|id| pos(&l, &layout, id) == pos(&back, &fresh, id)));
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(lattice_from_json("{"), Err(Error::Schema(_))));
        assert!(matches!(lattice_from_json(r#"{"elements":["a"],"covers":[],"extra":1}"#), Err(Error::Schema(_))));
        let bad = r#"{"elements":["a","b"],"covers":[["a","b"]],"coords":{"a":[0,0]}}"#;
        assert!(matches!(lattice_from_json(bad), Err(Error::Schema(_))));
    }
}
