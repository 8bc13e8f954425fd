//! Obstructions to asphericity: generic localizations, simple triangles, and the
//! reduction search from a graph to the obstruction catalog.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::arrangement::{bit, bits, build_csg, format_form, Arrangement};
use crate::budget::Budget;
use crate::error::{CsaError, Result};
use crate::graphs::{catalog_graph, classify_family, FamilyTag, Graph, CATALOG};
use crate::lattice::IntersectionLattice;
use crate::regions::chambers;
use crate::verdict::{Status, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Triangle {
    /// Sign vector of the chamber over the essentialized arrangement.
    pub chamber: String,
    pub walls: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    GenericLocalization {
        /// Hyperplanes containing the flat.
        flat: Vec<usize>,
        rank: usize,
    },
    SimpleTriangle {
        /// Hyperplanes of the rank 3 localization, or all of `A`.
        flat: Vec<usize>,
        triangle: Triangle,
    },
    /// The localization of `A_{G_1}` at `H_2 ∩ H_4 ∩ H_{1234}` is `B(0)`, whose complement
    /// is diffeomorphic to that of `B(4)`, which has a simple triangle.
    LatticeIsotopy {
        flat: Vec<usize>,
        forms: Vec<String>,
        triangle: Triangle,
    },
    /// Listed among the minimal non-aspherical graphs but no triangle was located by
    /// the operational predicate.
    Catalog { name: String },
}

/// Flats of rank at least `min_rank` with generic localization, first in flat order.
pub fn detect_generic_localization(a: &Arrangement, min_rank: usize, budget: &Budget) -> Result<Option<Obstruction>> {
    if min_rank < 3 {
        return Err(CsaError::InvalidInput("min_rank must be at least 3".into()));
    }
    let lat = IntersectionLattice::with_cap(a, budget.flats)?;
    for f in lat.flats() {
        if f.rank < min_rank || f.size() <= f.rank {
            continue;
        }
        if a.subarrangement(f.closed).is_generic() {
            return Ok(Some(Obstruction::GenericLocalization { flat: f.indices(), rank: f.rank }));
        }
    }
    Ok(None)
}

/// `χ(t) = (t-1)q(t)` with `q(1) != 0`, i.e. `A` is not a product.
pub fn is_irreducible(a: &Arrangement) -> Result<bool> {
    if a.is_empty() {
        return Ok(false);
    }
    let chi = IntersectionLattice::new(a)?.characteristic_polynomial();
    let q = chi.div_linear(-1).expect("χ of a central arrangement vanishes at 1");
    Ok(q.eval(1) != 0)
}

/// An irreducible arrangement with a chamber that has exactly three walls whose
/// pairwise intersections are double lines.
pub fn find_simple_triangle(a: &Arrangement, budget: &Budget) -> Result<Option<Triangle>> {
    let e = a.essentialize();
    if e.dim() != 3 {
        return Err(CsaError::InvalidInput(format!("simple triangles need rank 3, got {}", e.dim())));
    }
    // products of lower rank pieces are aspherical; the Boolean one has eight such chambers
    if !is_irreducible(&e)? {
        return Ok(None);
    }
    let g = chambers(&e, budget)?;
    for (c, &w) in g.chambers.iter().zip(&g.walls) {
        if w.count_ones() != 3 {
            continue;
        }
        let ws: Vec<usize> = bits(w).collect();
        let double = |x: usize, y: usize| e.closure(bit(x) | bit(y)).count_ones() == 2;
        if double(ws[0], ws[1]) && double(ws[0], ws[2]) && double(ws[1], ws[2]) {
            return Ok(Some(Triangle { chamber: c.sign_string(e.len()), walls: ws }));
        }
    }
    Ok(None)
}

pub fn detect_simple_triangle(a: &Arrangement, budget: &Budget) -> Result<Option<Obstruction>> {
    Ok(find_simple_triangle(a, budget)?.map(|t| Obstruction::SimpleTriangle { flat: (0..a.len()).collect(), triangle: t }))
}

/// Some rank 3 localization with a simple triangle.
pub fn triangle_localization(a: &Arrangement, budget: &Budget) -> Result<Option<Obstruction>> {
    let lat = IntersectionLattice::truncated(a, 3, budget.flats)?;
    for f in lat.rank_level(3) {
        if let Some(t) = find_simple_triangle(&a.subarrangement(f.closed), budget)? {
            return Ok(Some(Obstruction::SimpleTriangle { flat: f.indices(), triangle: t }));
        }
    }
    Ok(None)
}

/// `B(t) = {y, z, x+y+tz, x+z, y+z, x+y+z}`.
pub fn b_arrangement(t: i64) -> Arrangement {
    Arrangement::from_normals(3, &[vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, t], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]])
        .expect("B(t) is a valid arrangement")
}

/// The `G_1` argument: `A_X ≅ B(0)` via `(x1+x3, x2, x4) ↦ (x, y, z)`, and `B(4)` has a
/// simple triangle.
pub fn g1_obstruction(budget: &Budget) -> Result<Option<Obstruction>> {
    let a = build_csg(&catalog_graph("G1")?)?;
    let idx = |l: &[usize]| a.index_of_label(l).ok_or(CsaError::NotInArrangement);
    let gens = bit(idx(&[2])?) | bit(idx(&[4])?) | bit(idx(&[1, 2, 3, 4])?);
    let closed = a.closure(gens);
    let mut mapped = Vec::new();
    for i in bits(closed) {
        let v = a.normal(i);
        // α must factor through x1+x3
        if v[0] != v[2] {
            return Ok(None);
        }
        mapped.push(vec![v[0], v[1], v[3]]);
    }
    let b = Arrangement::from_normals(3, &mapped)?;
    if !b.same_set(&b_arrangement(0)) {
        return Ok(None);
    }
    let Some(t) = find_simple_triangle(&b_arrangement(4), budget)? else { return Ok(None) };
    Ok(Some(Obstruction::LatticeIsotopy {
        flat: bits(closed).collect(),
        forms: bits(closed).map(|i| format_form(a.normal(i), 1)).collect(),
        triangle: t,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Reduction {
    /// Pass to the induced subgraph without this vertex.
    DeleteVertex { v: usize },
    Contract { a: usize, b: usize },
}

impl Reduction {
    pub fn apply(&self, g: &Graph) -> Result<Graph> {
        match *self {
            Reduction::DeleteVertex { v } => g.delete_vertex(v),
            Reduction::Contract { a, b } => g.contract(a, b),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kpi1Certificate {
    /// Supersolvable (paths) or factored (the triangle).
    Family { family: String, chain_length: Option<usize> },
    ObstructionMinor { script: Vec<Reduction>, target: String, terminal: Obstruction },
    Unknown { explored: usize },
}

/// `KNOWN_YES`, `KNOWN_NO` or `UNKNOWN`.
pub fn kpi1_label(s: Status) -> &'static str {
    match s {
        Status::CertifiedYes => "KNOWN_YES",
        Status::CertifiedNo => "KNOWN_NO",
        Status::Inconclusive => "UNKNOWN",
    }
}

/// Catalog graphs whose arrangements are not aspherical (all but `K_4`).
fn obstruction_names() -> impl Iterator<Item = &'static str> {
    CATALOG.iter().copied().filter(|&n| n != "G2")
}

/// Obstruction carried by a catalog graph.
pub fn catalog_obstruction(name: &str, budget: &Budget) -> Result<Obstruction> {
    let g = catalog_graph(name)?;
    let a = build_csg(&g)?;
    let found = match name {
        "G1" => g1_obstruction(budget)?,
        "G7" => detect_generic_localization(&a, 4, budget)?,
        "G8" => detect_generic_localization(&a, 5, budget)?,
        _ => triangle_localization(&a, budget)?,
    };
    Ok(found.unwrap_or(Obstruction::Catalog { name: name.to_string() }))
}

/// Replays a script and checks the endpoint against the named catalog graph.
pub fn replay(g: &Graph, script: &[Reduction], target: &str) -> Result<bool> {
    let mut h = g.clone();
    for r in script {
        h = r.apply(&h)?;
    }
    Ok(h.is_isomorphic(&catalog_graph(target)?))
}

/// Three-valued asphericity verdict.
pub fn kpi1_verdict(g: &Graph, budget: &Budget) -> Result<Verdict<Kpi1Certificate>> {
    match classify_family(g)? {
        FamilyTag::Path { n } => {
            let chain = if n <= 6 {
                IntersectionLattice::new(&build_csg(g)?)?.supersolvable_chain().map(|c| c.len() - 1)
            } else {
                None
            };
            return Ok(Verdict::yes(Kpi1Certificate::Family { family: format!("P_{n}"), chain_length: chain }));
        }
        FamilyTag::Cycle { n: 3 } | FamilyTag::Complete { n: 3 } => {
            return Ok(Verdict::yes(Kpi1Certificate::Family { family: "C_3".into(), chain_length: None }));
        }
        _ => {}
    }
    let targets: Vec<(&str, (usize, Vec<u64>))> =
        obstruction_names().map(|n| Ok((n, catalog_graph(n)?.canonical_code()))).collect::<Result<_>>()?;
    let mut seen: HashMap<(usize, Vec<u64>), ()> = HashMap::new();
    let mut queue: VecDeque<(Graph, Vec<Reduction>)> = VecDeque::from([(g.clone(), Vec::new())]);
    seen.insert(g.canonical_code(), ());
    while let Some((h, script)) = queue.pop_front() {
        let code = h.canonical_code();
        if let Some((name, _)) = targets.iter().find(|(_, c)| *c == code) {
            let terminal = catalog_obstruction(name, budget)?;
            return Ok(Verdict::no(Kpi1Certificate::ObstructionMinor { script, target: name.to_string(), terminal }));
        }
        if h.n() <= 4 {
            continue;
        }
        let mut moves: Vec<Reduction> = (1..=h.n()).map(|v| Reduction::DeleteVertex { v }).collect();
        moves.extend(h.edges().into_iter().map(|(a, b)| Reduction::Contract { a, b }));
        for m in moves {
            let next = m.apply(&h)?;
            if !next.is_connected() {
                continue;
            }
            if seen.insert(next.canonical_code(), ()).is_none() {
                let mut s = script.clone();
                s.push(m);
                queue.push_back((next, s));
            }
        }
    }
    Ok(Verdict::inconclusive(Kpi1Certificate::Unknown { explored: seen.len() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::csg_power;
    use crate::graphs::parse_family;

    #[test]
    fn triangles() {
        let b = Budget::default();
        assert!(find_simple_triangle(&b_arrangement(4), &b).unwrap().is_some());
        assert!(find_simple_triangle(&b_arrangement(0), &b).unwrap().is_none());
        // A_{C_3}^2 is B(0) after x ↦ y, y ↦ z, z ↦ -(x+y+z), so it has no triangle either
        let x3 = csg_power(&parse_family("C:3").unwrap(), 2).unwrap();
        let m = [[0, 1, 0], [0, 0, 1], [-1, -1, -1]];
        let image: Vec<Vec<i64>> = x3.normals().map(|v| (0..3).map(|j| (0..3).map(|i| v[i] * m[i][j]).sum()).collect()).collect();
        assert!(Arrangement::from_normals(3, &image).unwrap().same_set(&b_arrangement(0)));
        assert!(detect_simple_triangle(&x3, &b).unwrap().is_none());
        assert!(find_simple_triangle(&build_csg(&parse_family("P:4").unwrap()).unwrap(), &b).is_err());
        let boolean = Arrangement::from_normals(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(find_simple_triangle(&boolean, &b).unwrap().is_none());
        assert!(find_simple_triangle(&build_csg(&parse_family("P:3").unwrap()).unwrap(), &b).unwrap().is_none());
    }

    #[test]
    fn g1_is_b0() {
        match g1_obstruction(&Budget::default()).unwrap() {
            Some(Obstruction::LatticeIsotopy { forms, .. }) => {
                assert_eq!(forms, vec!["x2", "x4", "x2+x4", "x1+x2+x3", "x1+x3+x4", "x1+x2+x3+x4"]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn small_verdicts() {
        let b = Budget::default();
        for (s, want) in [("P:5", "KNOWN_YES"), ("C:3", "KNOWN_YES"), ("K:4", "UNKNOWN"), ("C:4", "UNKNOWN"), ("G1", "KNOWN_NO")] {
            let v = kpi1_verdict(&parse_family(s).unwrap(), &b).unwrap();
            assert_eq!(kpi1_label(v.status), want, "{s}");
        }
    }

    #[test]
    fn boolean_has_no_generic_localization() {
        let a = Arrangement::from_normals(4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        assert_eq!(detect_generic_localization(&a, 3, &Budget::default()).unwrap(), None);
    }
}
