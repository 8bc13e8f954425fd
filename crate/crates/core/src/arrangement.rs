//! Central arrangements with primitive integer normals, and the
//! deletion / restriction / localization calculus.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CsaError, Result};
use crate::exactlin::{primitive, RatVector, Span, Subspace};
use crate::graphs::{mask_to_vertices, Graph};

/// Bitset of hyperplane indices.
pub type HSet = u128;

pub const MAX_HYPERPLANES: usize = 128;

pub fn bits(mut m: HSet) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn bit(i: usize) -> HSet {
    1u128 << i
}

pub fn full_set(n: usize) -> HSet {
    if n >= 128 { HSet::MAX } else { (1u128 << n) - 1 }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vec<i64>,
    pub label: Option<Vec<usize>>,
}

impl Hyperplane {
    pub fn new(normal: Vec<i64>) -> Self {
        Hyperplane { normal: primitive(&normal), label: None }
    }

    /// `H_I = ker Σ_{i∈I} x_i` in `n` variables.
    pub fn csg(n: usize, label: Vec<usize>) -> Self {
        let mut normal = vec![0; n];
        for &i in &label {
            normal[i - 1] = 1;
        }
        Hyperplane { normal, label: Some(label) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Arrangement {
    dim: usize,
    hyperplanes: Vec<Hyperplane>,
}

#[derive(Deserialize)]
struct ArrangementJson {
    dim: usize,
    hyperplanes: Vec<Hyperplane>,
}

impl<'de> Deserialize<'de> for Arrangement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let a = ArrangementJson::deserialize(d)?;
        Arrangement::new(a.dim, a.hyperplanes).map_err(serde::de::Error::custom)
    }
}

impl Arrangement {
    /// Normalizes every normal; duplicates keep their first occurrence.
    pub fn new(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        let mut out: Vec<Hyperplane> = Vec::with_capacity(hyperplanes.len());
        for h in hyperplanes {
            if h.normal.len() != dim {
                return Err(CsaError::DimensionMismatch { expected: dim, found: h.normal.len() });
            }
            if h.normal.iter().all(|&x| x == 0) {
                return Err(CsaError::InvalidInput("zero normal vector".into()));
            }
            let normal = primitive(&h.normal);
            if let Some(l) = &h.label {
                let expected = Hyperplane::csg(dim, l.clone()).normal;
                if l.iter().any(|&i| i == 0 || i > dim) || expected != normal {
                    return Err(CsaError::InvalidInput(format!("label {l:?} does not match normal {normal:?}")));
                }
            }
            if !out.iter().any(|g| g.normal == normal) {
                out.push(Hyperplane { normal, label: h.label });
            }
        }
        if out.len() > MAX_HYPERPLANES {
            return Err(CsaError::TooManyHyperplanes(out.len()));
        }
        Ok(Arrangement { dim, hyperplanes: out })
    }

    pub fn from_normals(dim: usize, normals: &[Vec<i64>]) -> Result<Self> {
        Arrangement::new(dim, normals.iter().map(|n| Hyperplane { normal: n.clone(), label: None }).collect())
    }

    pub fn empty(dim: usize) -> Self {
        Arrangement { dim, hyperplanes: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn normal(&self, i: usize) -> &[i64] {
        &self.hyperplanes[i].normal
    }

    pub fn normals(&self) -> impl Iterator<Item = &[i64]> {
        self.hyperplanes.iter().map(|h| h.normal.as_slice())
    }

    pub fn all(&self) -> HSet {
        full_set(self.len())
    }

    pub fn rank(&self) -> usize {
        Span::from_rows(self.dim, self.normals()).rank()
    }

    pub fn rank_of_set(&self, s: HSet) -> usize {
        Span::from_rows(self.dim, bits(s).map(|i| self.normal(i))).rank()
    }

    pub fn index_of(&self, normal: &[i64]) -> Option<usize> {
        let p = primitive(normal);
        self.hyperplanes.iter().position(|h| h.normal == p)
    }

    pub fn index_of_label(&self, label: &[usize]) -> Option<usize> {
        let mut l = label.to_vec();
        l.sort_unstable();
        self.hyperplanes.iter().position(|h| h.label.as_deref() == Some(l.as_slice()))
    }

    /// The hyperplanes in `s`, in arrangement order.
    pub fn subarrangement(&self, s: HSet) -> Arrangement {
        Arrangement { dim: self.dim, hyperplanes: bits(s).map(|i| self.hyperplanes[i].clone()).collect() }
    }

    pub fn delete(&self, i: usize) -> Result<Arrangement> {
        if i >= self.len() {
            return Err(CsaError::NotInArrangement);
        }
        Ok(self.subarrangement(self.all() & !bit(i)))
    }

    /// Add a hyperplane at the end (no-op for an existing normal).
    pub fn add(&self, h: Hyperplane) -> Result<Arrangement> {
        let mut hs = self.hyperplanes.clone();
        hs.push(h);
        Arrangement::new(self.dim, hs)
    }

    /// Indices of hyperplanes containing `x`.
    pub fn localization_set(&self, x: &Subspace) -> HSet {
        self.hyperplanes
            .iter()
            .enumerate()
            .filter(|(_, h)| x.inside_kernel(&h.normal))
            .fold(0, |m, (i, _)| m | bit(i))
    }

    /// `A_X = {H ∈ A : X ⊆ H}`.
    pub fn localization(&self, x: &Subspace) -> Result<Arrangement> {
        if x.ambient_dim() != self.dim {
            return Err(CsaError::DimensionMismatch { expected: self.dim, found: x.ambient_dim() });
        }
        Ok(self.subarrangement(self.localization_set(x)))
    }

    /// The flat `∩_{i∈s} H_i`.
    pub fn flat_of(&self, s: HSet) -> Subspace {
        let normals: Vec<&[i64]> = bits(s).map(|i| self.normal(i)).collect();
        Subspace::kernel_of_all(self.dim, &normals)
    }

    /// Closure of `s`: all hyperplanes containing `∩_{i∈s} H_i`.
    pub fn closure(&self, s: HSet) -> HSet {
        let mut span = Span::from_rows(self.dim, bits(s).map(|i| self.normal(i)));
        (0..self.len()).filter(|&j| s >> j & 1 == 1 || span.contains(self.normal(j))).fold(0, |m, j| m | bit(j))
    }

    /// `A^H` for `H = A[i]`, in the coordinates of the canonical basis of `H`, together
    /// with the index in `A^H` of `H_j ∩ H` for every `j` (`None` for `j = i`).
    pub fn restriction_with_map(&self, i: usize) -> Result<(Arrangement, Vec<Option<usize>>)> {
        if i >= self.len() {
            return Err(CsaError::NotInArrangement);
        }
        let x = Subspace::kernel_of(self.normal(i));
        let (a, map) = self.restrict_onto(&x, self.all() & !bit(i));
        let mut map = map;
        map[i] = None;
        Ok((a, map))
    }

    pub fn restriction(&self, i: usize) -> Result<Arrangement> {
        Ok(self.restriction_with_map(i)?.0)
    }

    /// `A^X` for an arbitrary subspace `X`, in the coordinates of the canonical basis of `X`.
    pub fn restriction_to(&self, x: &Subspace) -> Result<(Arrangement, Vec<Option<usize>>)> {
        if x.ambient_dim() != self.dim {
            return Err(CsaError::DimensionMismatch { expected: self.dim, found: x.ambient_dim() });
        }
        let inside = self.localization_set(x);
        Ok(self.restrict_onto(x, self.all() & !inside))
    }

    fn restrict_onto(&self, x: &Subspace, candidates: HSet) -> (Arrangement, Vec<Option<usize>>) {
        let basis = integer_basis(x);
        let d = x.dim();
        let mut out: Vec<Hyperplane> = Vec::new();
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut map = vec![None; self.len()];
        for j in bits(candidates) {
            let form: Vec<BigInt> = basis
                .iter()
                .map(|b| b.iter().zip(self.normal(j)).fold(BigInt::zero(), |acc, (x, &a)| acc + x * a))
                .collect();
            if form.iter().all(Zero::is_zero) {
                continue;
            }
            let g = form.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            let g = if form.iter().find(|x| !x.is_zero()).is_some_and(|x| x < &BigInt::zero()) { -g } else { g };
            let normal: Vec<i64> = form
                .iter()
                .map(|x| (x / &g).to_i64().expect("restricted normal fits in i64"))
                .collect();
            let k = *index.entry(normal.clone()).or_insert_with(|| {
                out.push(Hyperplane { normal, label: None });
                out.len() - 1
            });
            map[j] = Some(k);
        }
        (Arrangement { dim: d, hyperplanes: out }, map)
    }

    /// `(A, A \ {H}, A^H)` for `H = A[i]`.
    pub fn triple(&self, i: usize) -> Result<(Arrangement, Arrangement, Arrangement)> {
        Ok((self.clone(), self.delete(i)?, self.restriction(i)?))
    }

    /// Every subset of cardinality `rank` is independent and `|A| > rank`.
    pub fn is_generic(&self) -> bool {
        let r = self.rank();
        if self.len() <= r {
            return false;
        }
        fn dfs(a: &Arrangement, start: usize, depth: usize, r: usize, span: &Span) -> bool {
            if depth == r {
                return true;
            }
            for j in start..a.len() {
                let mut s = span.clone();
                if !s.insert(a.normal(j)) {
                    return false;
                }
                if !dfs(a, j + 1, depth + 1, r, &s) {
                    return false;
                }
            }
            true
        }
        dfs(self, 0, 0, r, &Span::new(self.dim))
    }

    /// Project normals onto the row space: an essential arrangement of dimension `rank`.
    pub fn essentialize(&self) -> Arrangement {
        let row = Subspace::kernel_of_all(self.dim, &self.normals().collect::<Vec<_>>()).annihilator();
        let pivots: Vec<usize> = row
            .basis()
            .iter()
            .map(|r| r.0.iter().position(|x| !x.is_zero()).expect("nonzero row"))
            .collect();
        // coordinates of α in the reduced basis are its entries at the pivot columns
        let hs = self
            .hyperplanes
            .iter()
            .map(|h| Hyperplane { normal: primitive(&pivots.iter().map(|&p| h.normal[p]).collect::<Vec<_>>()), label: h.label.clone() })
            .collect();
        Arrangement { dim: pivots.len(), hyperplanes: hs }
    }

    /// Same hyperplanes up to order.
    pub fn same_set(&self, other: &Arrangement) -> bool {
        self.dim == other.dim
            && self.len() == other.len()
            && self.hyperplanes.iter().all(|h| other.index_of(&h.normal).is_some())
    }

    pub fn sorted_normals(&self) -> Vec<Vec<i64>> {
        let mut v: Vec<Vec<i64>> = self.normals().map(<[i64]>::to_vec).collect();
        v.sort();
        v
    }
}

/// RREF basis rows of `x` scaled to integers by a common positive factor per matrix.
fn integer_basis(x: &Subspace) -> Vec<Vec<BigInt>> {
    let l = x.basis().iter().flat_map(|r| r.0.iter()).fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    x.basis()
        .iter()
        .map(|r| r.0.iter().map(|q| (q * num_rational::BigRational::from_integer(l.clone())).to_integer()).collect())
        .collect()
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-arrangement, {} hyperplanes:", self.dim, self.len())?;
        for h in &self.hyperplanes {
            write!(f, " {}", format_form(&h.normal, 1))?;
        }
        Ok(())
    }
}

/// `2x_0+x_1` style rendering; `first` is the index of the first variable.
pub fn format_form(normal: &[i64], first: usize) -> String {
    let mut s = String::new();
    for (i, &c) in normal.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c < 0 {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        if c.abs() != 1 {
            s.push_str(&c.abs().to_string());
        }
        s.push_str(&format!("x{}", i + first));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// `A_G`: one hyperplane per connected vertex set, in (size, lexicographic) order.
pub fn build_csg(g: &Graph) -> Result<Arrangement> {
    let hs: Vec<Hyperplane> = g.connected_masks().into_iter().map(|m| Hyperplane::csg(g.n(), mask_to_vertices(m))).collect();
    if hs.len() > MAX_HYPERPLANES {
        return Err(CsaError::TooManyHyperplanes(hs.len()));
    }
    Ok(Arrangement { dim: g.n(), hyperplanes: hs })
}

/// `A_G^s = {H_I : |I| <= s}`.
pub fn csg_power(g: &Graph, s: usize) -> Result<Arrangement> {
    let hs: Vec<Hyperplane> = g
        .connected_masks()
        .into_iter()
        .filter(|m| m.count_ones() as usize <= s)
        .map(|m| Hyperplane::csg(g.n(), mask_to_vertices(m)))
        .collect();
    if hs.len() > MAX_HYPERPLANES {
        return Err(CsaError::TooManyHyperplanes(hs.len()));
    }
    Ok(Arrangement { dim: g.n(), hyperplanes: hs })
}

/// `A_I` for a lower order ideal of connected vertex sets.
pub fn ideal_subarrangement(g: &Graph, ideal: &[Vec<usize>]) -> Result<Arrangement> {
    let mut masks: Vec<u64> = Vec::new();
    for m in ideal {
        if m.is_empty() || m.iter().any(|&v| v == 0 || v > g.n()) {
            return Err(CsaError::InvalidInput(format!("bad vertex set {m:?}")));
        }
        let mask = crate::graphs::vertices_to_mask(m);
        if !g.mask_connected(mask) {
            return Err(CsaError::InvalidInput(format!("{m:?} does not induce a connected subgraph")));
        }
        masks.push(mask);
    }
    let all = g.connected_masks();
    for &m in &masks {
        for &sub in &all {
            if sub != m && sub & !m == 0 && !masks.contains(&sub) {
                return Err(CsaError::NotAnIdeal { member: mask_to_vertices(m), sub: mask_to_vertices(sub) });
            }
        }
    }
    let hs = all
        .into_iter()
        .filter(|m| masks.contains(m))
        .map(|m| Hyperplane::csg(g.n(), mask_to_vertices(m)))
        .collect();
    Arrangement::new(g.n(), hs)
}

/// `B_n = A_{P_n} ∪ {ker(2x_0+x_1+…+x_k) : k = 1..n-1}` in variables `x_0..x_{n-1}`;
/// coordinate `x_i` is graph vertex `i+1`.
pub fn bn_arrangement(n: usize) -> Result<Arrangement> {
    if n < 2 {
        return Err(CsaError::InvalidInput("B_n needs n >= 2".into()));
    }
    let mut a = build_csg(&crate::graphs::parse_family(&format!("P:{n}"))?)?;
    for k in 1..n {
        let mut v = vec![0i64; n];
        v[0] = 2;
        for x in v.iter_mut().take(k + 1).skip(1) {
            *x = 1;
        }
        a.hyperplanes.push(Hyperplane { normal: v, label: None });
    }
    Ok(a)
}

impl Arrangement {
    pub fn to_rat_rows(&self) -> Vec<RatVector> {
        self.normals().map(RatVector::from_ints).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::parse_family;

    fn csg(s: &str) -> Arrangement {
        build_csg(&parse_family(s).unwrap()).unwrap()
    }

    #[test]
    fn build_examples() {
        let a = csg("P:2");
        assert_eq!(a.sorted_normals(), vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(csg("T:3,1").len(), 12);
        assert_eq!(csg("C:3").len(), 7);
        for s in ["P:5", "C:5", "T:4,2", "K:4", "G8"] {
            let a = csg(s);
            assert_eq!(a.rank(), a.dim(), "{s}");
        }
    }

    #[test]
    fn localization_g1() {
        let a = csg("G1");
        let x = a.flat_of(bit(a.index_of_label(&[2]).unwrap()) | bit(a.index_of_label(&[4]).unwrap()) | bit(a.index_of_label(&[1, 2, 3, 4]).unwrap()));
        let loc = a.localization(&x).unwrap();
        let labels: Vec<Vec<usize>> = loc.hyperplanes().iter().map(|h| h.label.clone().unwrap()).collect();
        assert_eq!(labels, vec![vec![2], vec![4], vec![2, 4], vec![1, 2, 3], vec![1, 3, 4], vec![1, 2, 3, 4]]);
        assert_eq!(a.localization(&Subspace::full(4)).unwrap().len(), 0);
        assert_eq!(a.localization(&Subspace::zero(4)).unwrap(), a);
        let h = Subspace::kernel_of(a.normal(3));
        assert_eq!(a.localization(&h).unwrap().len(), 1);
    }

    #[test]
    fn restrictions() {
        let a = csg("P:2");
        let r = a.restriction(a.index_of_label(&[1]).unwrap()).unwrap();
        assert_eq!((r.dim(), r.len(), r.rank()), (1, 1, 1));
        let c3 = csg("C:3");
        let i = c3.index_of_label(&[1, 2]).unwrap();
        let r = c3.restriction(i).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.dim(), 2);
        // ker(x1+x2) has RREF basis (1,-1,0), (0,0,1)
        assert_eq!(r.sorted_normals(), vec![vec![0, 1], vec![1, -1], vec![1, 0], vec![1, 1]]);
        assert!(a.restriction(9).is_err());
    }

    #[test]
    fn triple_counts() {
        let a = csg("P:2");
        let (_, d, r) = a.triple(2).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(r.len(), 1);
        let one = Arrangement::from_normals(2, &[vec![1, 0]]).unwrap();
        let (_, d, r) = one.triple(0).unwrap();
        assert_eq!((d.len(), r.len(), r.dim()), (0, 0, 1));
    }

    #[test]
    fn delta_last_restriction() {
        for n in 3..=5 {
            let a = csg(&format!("T:{n},1"));
            // x0 is the apex n+1, x1 and x2 are vertices 1 and 2
            let label: Vec<usize> = (2..=n + 1).collect();
            let i = a.index_of_label(&label).unwrap();
            let r = a.restriction(i).unwrap();
            let prev = csg(&format!("T:{},1", n - 1));
            assert_eq!(r.len(), prev.len() + 1, "n={n}");
        }
    }

    #[test]
    fn ideals() {
        let g = parse_family("A:3,2").unwrap();
        let full: Vec<Vec<usize>> = g.connected_subsets();
        assert_eq!(ideal_subarrangement(&g, &full).unwrap(), build_csg(&g).unwrap());
        let small: Vec<Vec<usize>> = full.iter().filter(|s| s.len() <= 2).cloned().collect();
        assert_eq!(ideal_subarrangement(&g, &small).unwrap(), csg_power(&g, 2).unwrap());
        let err = ideal_subarrangement(&g, &[vec![1, 2]]).unwrap_err();
        assert!(matches!(err, CsaError::NotAnIdeal { .. }));
    }

    #[test]
    fn bn() {
        let b2 = bn_arrangement(2).unwrap();
        assert_eq!(b2.len(), 4);
        assert_eq!(b2.normal(3), &[2, 1]);
        for n in 2..=7 {
            assert_eq!(bn_arrangement(n).unwrap().len(), n * (n + 1) / 2 + n - 1);
        }
        assert!(bn_arrangement(1).is_err());
    }

    #[test]
    fn generic() {
        let g = Arrangement::from_normals(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap();
        assert!(g.is_generic());
        let b = Arrangement::from_normals(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(!b.is_generic());
        assert!(!csg("C:3").is_generic());
    }

    #[test]
    fn json() {
        let a = csg("P:2");
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.starts_with(r#"{"dim":2,"hyperplanes":[{"normal":[1,0],"label":[1]}"#));
        assert_eq!(serde_json::from_str::<Arrangement>(&s).unwrap(), a);
        assert!(serde_json::from_str::<Arrangement>(r#"{"dim":2,"hyperplanes":[{"normal":[0,0],"label":null}]}"#).is_err());
    }

    #[test]
    fn forms() {
        assert_eq!(format_form(&[2, 1, 0], 0), "2x0+x1");
        assert_eq!(format_form(&[-1, 0, 1], 1), "-x1+x3");
    }
}
