//! Simple graphs on vertices `1..=n`, named families and the obstruction catalog.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CsaError, Result};

pub const MAX_VERTICES: usize = 64;

/// Undirected simple graph. Vertex `v` is bit `v-1` of the adjacency masks.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson { n: self.n, edges: self.edges().into_iter().map(|(a, b)| [a, b]).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let g = GraphJson::deserialize(d)?;
        let edges: Vec<(usize, usize)> = g.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(g.n, &edges).map_err(serde::de::Error::custom)
    }
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(CsaError::InvalidInput(format!("vertex count {n} outside 1..={MAX_VERTICES}")));
        }
        let mut adj = vec![0u64; n];
        for &(a, b) in edges {
            if a == b {
                return Err(CsaError::InvalidInput(format!("loop at vertex {a}")));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(CsaError::InvalidInput(format!("edge {a}-{b} out of range 1..={n}")));
            }
            if adj[a - 1] >> (b - 1) & 1 == 1 {
                return Err(CsaError::InvalidInput(format!("duplicate edge {a}-{b}")));
            }
            adj[a - 1] |= 1 << (b - 1);
            adj[b - 1] |= 1 << (a - 1);
        }
        Ok(Graph { n, adj })
    }

    fn from_adj(adj: Vec<u64>) -> Self {
        Graph { n: adj.len(), adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full_mask(&self) -> u64 {
        if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 }
    }

    pub fn neighbors_mask(&self, v: usize) -> u64 {
        self.adj[v - 1]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a >= 1 && b >= 1 && a <= self.n && b <= self.n && self.adj[a - 1] >> (b - 1) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].count_ones() as usize
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 1..=self.n {
            for b in a + 1..=self.n {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Is the subgraph induced on `mask` connected (and nonempty)?
    pub fn mask_connected(&self, mask: u64) -> bool {
        if mask == 0 {
            return false;
        }
        let mut seen = mask & mask.wrapping_neg();
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.adj[v] & mask & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == mask
    }

    pub fn is_connected(&self) -> bool {
        self.mask_connected(self.full_mask())
    }

    /// Masks of all connected vertex sets in (size, lexicographic) order.
    pub fn connected_masks(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for v in 0..self.n {
            let seed = 1u64 << v;
            // only vertices above the seed may join
            let allowed = !((seed << 1) - 1) & self.full_mask();
            self.grow(seed, self.adj[v] & allowed, 0, allowed, &mut out);
        }
        out.sort_by(|a, b| a.count_ones().cmp(&b.count_ones()).then_with(|| lex_key(*a).cmp(&lex_key(*b))));
        out
    }

    fn grow(&self, set: u64, ext: u64, banned: u64, allowed: u64, out: &mut Vec<u64>) {
        out.push(set);
        let mut ext = ext;
        let mut banned = banned;
        while ext != 0 {
            let w = ext.trailing_zeros() as usize;
            let bit = 1u64 << w;
            ext &= !bit;
            let new_set = set | bit;
            let new_ext = (ext | self.adj[w]) & allowed & !new_set & !banned & !bit;
            self.grow(new_set, new_ext, banned, allowed, out);
            banned |= bit;
        }
    }

    pub fn connected_subsets(&self) -> Vec<Vec<usize>> {
        self.connected_masks().into_iter().map(mask_to_vertices).collect()
    }

    /// `G[S]` relabeled to `1..=|S|`, with `map[i-1]` the original label of new vertex `i`.
    pub fn induced(&self, s: &[usize]) -> Result<(Graph, Vec<usize>)> {
        if s.is_empty() {
            return Err(CsaError::InvalidInput("empty vertex set".into()));
        }
        let mut map: Vec<usize> = s.to_vec();
        map.sort_unstable();
        map.dedup();
        if let Some(&v) = map.iter().find(|&&v| v == 0 || v > self.n) {
            return Err(CsaError::InvalidInput(format!("vertex {v} out of range")));
        }
        let adj = map
            .iter()
            .map(|&v| {
                map.iter()
                    .enumerate()
                    .filter(|&(_, &w)| self.has_edge(v, w))
                    .fold(0u64, |m, (j, _)| m | 1 << j)
            })
            .collect();
        Ok((Graph::from_adj(adj), map))
    }

    pub fn delete_vertex(&self, v: usize) -> Result<Graph> {
        let rest: Vec<usize> = (1..=self.n).filter(|&w| w != v).collect();
        Ok(self.induced(&rest)?.0)
    }

    /// Contract edge `a-b`: the smaller endpoint survives, higher labels shift down.
    pub fn contract(&self, a: usize, b: usize) -> Result<Graph> {
        if !self.has_edge(a, b) {
            return Err(CsaError::InvalidInput(format!("{a}-{b} is not an edge")));
        }
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        let relabel = |v: usize| if v == gone { keep } else if v > gone { v - 1 } else { v };
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (x, y) in self.edges() {
            let (x, y) = (relabel(x), relabel(y));
            if x != y {
                let e = (x.min(y), x.max(y));
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
        Graph::new(self.n - 1, &edges)
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (1..=self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// A vertex bijection `p` with `p[i]` = image of vertex `i+1` (0-based), if isomorphic.
    pub fn isomorphism(&self, other: &Graph) -> Option<Vec<usize>> {
        if self.n != other.n || self.edge_count() != other.edge_count() || self.degree_sequence() != other.degree_sequence() {
            return None;
        }
        let mut p = vec![usize::MAX; self.n];
        let mut used = 0u64;
        if self.iso_extend(other, 0, &mut p, &mut used) { Some(p) } else { None }
    }

    fn iso_extend(&self, other: &Graph, i: usize, p: &mut [usize], used: &mut u64) -> bool {
        if i == self.n {
            return true;
        }
        for j in 0..other.n {
            if *used >> j & 1 == 1 || self.adj[i].count_ones() != other.adj[j].count_ones() {
                continue;
            }
            let ok = (0..i).all(|k| (self.adj[i] >> k & 1) == (other.adj[j] >> p[k] & 1));
            if ok {
                p[i] = j;
                *used |= 1 << j;
                if self.iso_extend(other, i + 1, p, used) {
                    return true;
                }
                *used &= !(1 << j);
            }
        }
        p[i] = usize::MAX;
        false
    }

    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        self.isomorphism(other).is_some()
    }

    /// Largest adjacency word over relabelings sorted by degree.
    /// Equal for isomorphic graphs; exhaustive, so meant for small graphs.
    pub fn canonical_code(&self) -> (usize, Vec<u64>) {
        let n = self.n;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(self.adj[v].count_ones()));
        let degs: Vec<u32> = order.iter().map(|&v| self.adj[v].count_ones()).collect();
        let mut best: Option<Vec<u64>> = None;
        let mut perm = vec![usize::MAX; n];
        let mut used = 0u64;
        self.canon_rec(0, &degs, &mut perm, &mut used, &mut best);
        (n, best.unwrap_or_default())
    }

    fn canon_rec(&self, i: usize, degs: &[u32], perm: &mut Vec<usize>, used: &mut u64, best: &mut Option<Vec<u64>>) {
        let n = self.n;
        if i == n {
            let code: Vec<u64> = (0..n)
                .map(|a| (0..n).fold(0u64, |m, b| m | ((self.adj[perm[a]] >> perm[b] & 1) << b)))
                .collect();
            if best.as_ref().map_or(true, |b| code > *b) {
                *best = Some(code);
            }
            return;
        }
        for v in 0..n {
            if *used >> v & 1 == 1 || self.adj[v].count_ones() != degs[i] {
                continue;
            }
            perm[i] = v;
            *used |= 1 << v;
            self.canon_rec(i + 1, degs, perm, used, best);
            *used &= !(1 << v);
        }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} edges=[", self.n)?;
        for (i, (a, b)) in self.edges().into_iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}{}{b}", if self.n > 9 { "-" } else { "" })?;
        }
        write!(f, "]")
    }
}

fn lex_key(mask: u64) -> Vec<usize> {
    mask_to_vertices(mask)
}

pub fn mask_to_vertices(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

pub fn vertices_to_mask(vs: &[usize]) -> u64 {
    vs.iter().fold(0u64, |m, &v| m | 1 << (v - 1))
}

/// Family spec mini-language: `P:n`, `C:n`, `A:n,k`, `T:n,k`, `K:n`, or a catalog name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Path(usize),
    Cycle(usize),
    AlmostPath(usize, usize),
    PathWithTriangle(usize, usize),
    Complete(usize),
    Named(String),
}

impl FromStr for FamilySpec {
    type Err = CsaError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CsaError::InvalidInput(format!("bad family spec {s:?}"));
        let s = s.trim();
        if let Some((kind, args)) = s.split_once(':') {
            let nums: Vec<usize> = args
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            return match (kind.trim(), nums.as_slice()) {
                ("P", &[n]) => Ok(FamilySpec::Path(n)),
                ("C", &[n]) => Ok(FamilySpec::Cycle(n)),
                ("A", &[n, k]) => Ok(FamilySpec::AlmostPath(n, k)),
                ("T", &[n, k]) => Ok(FamilySpec::PathWithTriangle(n, k)),
                ("K", &[n]) => Ok(FamilySpec::Complete(n)),
                _ => Err(bad()),
            };
        }
        if catalog_edges(s).is_some() {
            Ok(FamilySpec::Named(s.to_string()))
        } else {
            Err(bad())
        }
    }
}

pub fn build_family(spec: &FamilySpec) -> Result<Graph> {
    let range = |msg: String| Err(CsaError::InvalidInput(msg));
    match *spec {
        FamilySpec::Path(n) => {
            if n < 1 {
                return range("P:n needs n >= 1".into());
            }
            path(n)
        }
        FamilySpec::Cycle(n) => {
            if n < 3 {
                return range("C:n needs n >= 3".into());
            }
            let mut e: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
            e.push((1, n));
            Graph::new(n, &e)
        }
        FamilySpec::AlmostPath(n, k) => {
            if k < 1 || k > n {
                return range(format!("A:{n},{k} needs 1 <= k <= n"));
            }
            let mut e: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
            e.push((k, n + 1));
            Graph::new(n + 1, &e)
        }
        FamilySpec::PathWithTriangle(n, k) => {
            if k < 1 || k + 1 > n {
                return range(format!("T:{n},{k} needs 1 <= k <= n-1"));
            }
            let mut e: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
            e.push((k, n + 1));
            e.push((k + 1, n + 1));
            Graph::new(n + 1, &e)
        }
        FamilySpec::Complete(n) => {
            if n < 1 {
                return range("K:n needs n >= 1".into());
            }
            let e: Vec<(usize, usize)> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
            Graph::new(n, &e)
        }
        FamilySpec::Named(ref name) => {
            let (n, e) = catalog_edges(name).ok_or_else(|| CsaError::InvalidInput(format!("unknown graph {name}")))?;
            Graph::new(n, &e)
        }
    }
}

pub fn parse_family(s: &str) -> Result<Graph> {
    build_family(&s.parse()?)
}

fn path(n: usize) -> Result<Graph> {
    let e: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
    Graph::new(n, &e)
}

/// Names of the obstruction catalog, in display order.
pub const CATALOG: &[&str] = &[
    "G1", "G2", "G3", "G4", "G5", "G6", "G7", "G8", "G9", "G10", "G11", "K5", "K5a", "K5b", "K5c", "K5d", "G6'", "G12",
    "G13", "G14", "G15",
];

pub fn catalog_edges(name: &str) -> Option<(usize, Vec<(usize, usize)>)> {
    // star with center 3 and leaves 1, 2, 4, 5
    let star = |extra: &[(usize, usize)]| {
        let mut e = vec![(1, 3), (2, 3), (3, 4), (3, 5)];
        e.extend_from_slice(extra);
        (5, e)
    };
    let k5_minus = |missing: &[(usize, usize)]| {
        let e = (1..=5)
            .flat_map(|a| (a + 1..=5).map(move |b| (a, b)))
            .filter(|e| !missing.contains(e))
            .collect();
        (5, e)
    };
    Some(match name {
        "G1" => (4, vec![(1, 2), (2, 3), (3, 4), (1, 4), (2, 4)]),
        "G2" => (4, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]),
        "G3" => (5, vec![(1, 2), (1, 3), (1, 4), (1, 5)]),
        "G4" => (5, vec![(1, 2), (1, 3), (1, 4), (1, 5), (2, 3)]),
        "G5" => (5, vec![(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (4, 5)]),
        "G6" => (5, vec![(1, 2), (2, 3), (3, 4), (1, 4), (1, 5)]),
        "G7" => (6, vec![(1, 2), (1, 3), (2, 3), (1, 4), (2, 5), (3, 6)]),
        "G8" => (7, vec![(1, 2), (1, 3), (1, 4), (2, 5), (3, 6), (4, 7)]),
        "G9" => star(&[(1, 2), (1, 4)]),
        "G10" => star(&[(1, 2), (1, 4), (2, 5)]),
        "G11" => star(&[(1, 2), (2, 5), (4, 5), (1, 4)]),
        "K5" => k5_minus(&[]),
        "K5a" => k5_minus(&[(2, 5)]),
        "K5b" => k5_minus(&[(1, 5), (2, 5)]),
        "K5c" => (5, vec![(1, 2), (2, 3), (3, 4), (3, 5), (1, 3), (1, 4), (2, 4)]),
        "K5d" => (5, vec![(2, 3), (3, 4), (4, 5), (3, 5), (1, 3), (1, 4), (2, 4)]),
        "G6'" => (5, vec![(1, 2), (2, 5), (4, 5), (1, 4), (2, 3)]),
        "G12" => (5, vec![(1, 2), (2, 5), (4, 5), (1, 4), (3, 4), (2, 3)]),
        "G13" => (5, vec![(1, 2), (2, 5), (4, 5), (1, 4), (2, 3), (3, 5)]),
        "G14" => (5, vec![(1, 2), (2, 5), (4, 5), (1, 4), (2, 3), (3, 5), (1, 3)]),
        // drawn on vertices 1,2,4,5,6; relabeled 4->3, 5->4, 6->5
        "G15" => (5, vec![(1, 2), (2, 4), (3, 4), (1, 3), (2, 3), (4, 5)]),
        _ => return None,
    })
}

pub fn catalog_graph(name: &str) -> Result<Graph> {
    build_family(&FamilySpec::Named(name.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FamilyTag {
    Path { n: usize },
    Cycle { n: usize },
    AlmostPath { n: usize, k: usize },
    PathWithTriangle { n: usize, k: usize },
    Complete { n: usize },
    Named { name: String },
    Other,
}

impl FamilyTag {
    pub fn spec(&self) -> Option<FamilySpec> {
        Some(match *self {
            FamilyTag::Path { n } => FamilySpec::Path(n),
            FamilyTag::Cycle { n } => FamilySpec::Cycle(n),
            FamilyTag::AlmostPath { n, k } => FamilySpec::AlmostPath(n, k),
            FamilyTag::PathWithTriangle { n, k } => FamilySpec::PathWithTriangle(n, k),
            FamilyTag::Complete { n } => FamilySpec::Complete(n),
            FamilyTag::Named { ref name } => FamilySpec::Named(name.clone()),
            FamilyTag::Other => return None,
        })
    }

    /// One of the four families whose arrangements are free.
    pub fn is_free_family(&self) -> bool {
        matches!(
            self,
            FamilyTag::Path { .. } | FamilyTag::Cycle { .. } | FamilyTag::AlmostPath { .. } | FamilyTag::PathWithTriangle { .. }
        )
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::Path { n } => write!(f, "P_{n}"),
            FamilyTag::Cycle { n } => write!(f, "C_{n}"),
            FamilyTag::AlmostPath { n, k } => write!(f, "A_{{{n},{k}}}"),
            FamilyTag::PathWithTriangle { n, k } => write!(f, "Δ_{{{n},{k}}}"),
            FamilyTag::Complete { n } => write!(f, "K_{n}"),
            FamilyTag::Named { name } => write!(f, "{name}"),
            FamilyTag::Other => write!(f, "other"),
        }
    }
}

/// Candidate templates with `n` vertices, in reporting priority order.
fn templates(n: usize) -> Vec<FamilyTag> {
    let mut t = vec![FamilyTag::Path { n }];
    if n >= 3 {
        t.push(FamilyTag::Cycle { n });
    }
    if n >= 4 {
        let m = n - 1;
        for k in (2..=(m + 1) / 2).filter(|&k| k < m) {
            t.push(FamilyTag::AlmostPath { n: m, k });
        }
        for k in 1..=m / 2 {
            t.push(FamilyTag::PathWithTriangle { n: m, k });
        }
        t.push(FamilyTag::Complete { n });
    }
    for name in CATALOG {
        if catalog_edges(name).is_some_and(|(m, _)| m == n) {
            t.push(FamilyTag::Named { name: name.to_string() });
        }
    }
    t
}

pub fn classify_family(g: &Graph) -> Result<FamilyTag> {
    if !g.is_connected() {
        return Err(CsaError::Disconnected);
    }
    for tag in templates(g.n()) {
        let spec = tag.spec().expect("templates are concrete");
        let t = build_family(&spec)?;
        if t.is_isomorphic(g) {
            return Ok(tag);
        }
    }
    Ok(FamilyTag::Other)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_connected(g: &Graph) -> Vec<u64> {
        let mut v: Vec<u64> = (1..=g.full_mask()).filter(|&m| g.mask_connected(m)).collect();
        v.sort_by(|a, b| a.count_ones().cmp(&b.count_ones()).then_with(|| lex_key(*a).cmp(&lex_key(*b))));
        v
    }

    #[test]
    fn families() {
        let p3 = parse_family("P:3").unwrap();
        assert_eq!(p3.edges(), vec![(1, 2), (2, 3)]);
        let t = parse_family("T:3,1").unwrap();
        assert_eq!(t.n(), 4);
        assert_eq!(t.edges(), vec![(1, 2), (1, 4), (2, 3), (2, 4)]);
        let g1 = parse_family("G1").unwrap();
        assert_eq!((g1.n(), g1.edge_count()), (4, 5));
        assert!(parse_family("T:3,3").is_err());
        assert!(parse_family("C:2").is_err());
        assert!(parse_family("Q:2").is_err());
    }

    #[test]
    fn connected_subset_counts() {
        let p2 = parse_family("P:2").unwrap();
        assert_eq!(p2.connected_subsets(), vec![vec![1], vec![2], vec![1, 2]]);
        assert_eq!(parse_family("C:4").unwrap().connected_subsets().len(), 13);
        for n in 1..=8 {
            assert_eq!(parse_family(&format!("P:{n}")).unwrap().connected_masks().len(), n * (n + 1) / 2);
            assert_eq!(parse_family(&format!("K:{n}")).unwrap().connected_masks().len(), (1 << n) - 1);
            if n >= 3 {
                assert_eq!(parse_family(&format!("C:{n}")).unwrap().connected_masks().len(), n * (n - 1) + 1);
            }
        }
    }

    #[test]
    fn grow_matches_filter() {
        for name in CATALOG {
            let g = catalog_graph(name).unwrap();
            assert_eq!(g.connected_masks(), brute_connected(&g), "{name}");
        }
    }

    #[test]
    fn induced_and_contract() {
        let p4 = parse_family("P:4").unwrap();
        let (h, map) = p4.induced(&[1, 2, 3]).unwrap();
        assert!(h.is_isomorphic(&parse_family("P:3").unwrap()));
        assert_eq!(map, vec![1, 2, 3]);
        let k5 = parse_family("K:5").unwrap();
        assert!(k5.induced(&[1, 3, 4, 5]).unwrap().0.is_isomorphic(&parse_family("K:4").unwrap()));
        assert!(p4.induced(&[]).is_err());
        let p3 = parse_family("P:3").unwrap();
        assert_eq!(p3.contract(1, 2).unwrap(), parse_family("P:2").unwrap());
        let c4 = parse_family("C:4").unwrap();
        assert!(c4.contract(1, 4).unwrap().is_isomorphic(&parse_family("C:3").unwrap()));
        assert!(k5.contract(2, 5).unwrap().is_isomorphic(&parse_family("K:4").unwrap()));
        assert!(p3.contract(1, 3).is_err());
    }

    #[test]
    fn g5_induced_triangle() {
        // dropping a triangle vertex keeps a 3-cycle through the center
        let g5 = catalog_graph("G5").unwrap();
        let (h, _) = g5.induced(&[1, 3, 4, 5]).unwrap();
        assert!(h.has_edge(1, 3) && h.has_edge(3, 4) && h.has_edge(1, 4));
    }

    #[test]
    fn classification() {
        let scrambled = Graph::new(5, &[(3, 5), (5, 1), (1, 4), (4, 2)]).unwrap();
        assert_eq!(classify_family(&scrambled).unwrap(), FamilyTag::Path { n: 5 });
        let star = Graph::new(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(classify_family(&star).unwrap(), FamilyTag::AlmostPath { n: 3, k: 2 });
        assert_eq!(classify_family(&catalog_graph("G2").unwrap()).unwrap(), FamilyTag::Complete { n: 4 });
        assert_eq!(classify_family(&parse_family("T:2,1").unwrap()).unwrap(), FamilyTag::Cycle { n: 3 });
        assert_eq!(classify_family(&parse_family("T:5,4").unwrap()).unwrap(), FamilyTag::PathWithTriangle { n: 5, k: 1 });
        assert_eq!(classify_family(&parse_family("A:5,4").unwrap()).unwrap(), FamilyTag::AlmostPath { n: 5, k: 2 });
        assert_eq!(classify_family(&parse_family("A:4,4").unwrap()).unwrap(), FamilyTag::Path { n: 5 });
        assert_eq!(classify_family(&catalog_graph("G1").unwrap()).unwrap(), FamilyTag::Named { name: "G1".into() });
        let disc = Graph::new(3, &[(1, 2)]).unwrap();
        assert!(classify_family(&disc).is_err());
    }

    #[test]
    fn canonical_code_is_invariant() {
        let g = catalog_graph("G10").unwrap();
        let h = Graph::new(5, &[(5, 3), (5, 1), (5, 2), (5, 4), (3, 1), (3, 2), (1, 4)]).unwrap();
        assert!(g.is_isomorphic(&h));
        assert_eq!(g.canonical_code(), h.canonical_code());
        assert_ne!(g.canonical_code(), catalog_graph("G9").unwrap().canonical_code());
    }

    #[test]
    fn json_roundtrip() {
        let g = catalog_graph("G7").unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<Graph>(&s).unwrap(), g);
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[1,1]]}"#).is_err());
    }
}
