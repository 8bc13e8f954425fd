//! Intersection lattices, Möbius values, characteristic and Poincaré
//! polynomials, modular flats and supersolvability.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arrangement::{bit, bits, Arrangement, HSet};
use crate::error::{CsaError, Result};
use crate::exactlin::{Span, Subspace};
use crate::poly::IntPolynomial;

pub const DEFAULT_FLAT_CAP: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flat {
    /// Indices of the hyperplanes containing the flat.
    pub closed: HSet,
    pub rank: usize,
    pub mobius: i64,
}

impl Flat {
    pub fn indices(&self) -> Vec<usize> {
        bits(self.closed).collect()
    }

    pub fn size(&self) -> usize {
        self.closed.count_ones() as usize
    }
}

/// Flats ordered by rank, then by their sorted index lists.
#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    arr: Arrangement,
    flats: Vec<Flat>,
    index: HashMap<HSet, usize>,
    rank_start: Vec<usize>,
    lower: Vec<Vec<usize>>,
    complete: bool,
}

fn index_key(s: HSet) -> Vec<usize> {
    bits(s).collect()
}

impl IntersectionLattice {
    pub fn new(a: &Arrangement) -> Result<Self> {
        Self::build(a, usize::MAX, DEFAULT_FLAT_CAP)
    }

    pub fn with_cap(a: &Arrangement, cap: usize) -> Result<Self> {
        Self::build(a, usize::MAX, cap)
    }

    /// Only flats of rank at most `max_rank`.
    pub fn truncated(a: &Arrangement, max_rank: usize, cap: usize) -> Result<Self> {
        Self::build(a, max_rank, cap)
    }

    fn build(a: &Arrangement, max_rank: usize, cap: usize) -> Result<Self> {
        let m = a.len();
        let mut levels: Vec<Vec<HSet>> = vec![vec![0]];
        let mut covers: Vec<(HSet, HSet)> = Vec::new();
        let mut spans: Vec<Span> = vec![Span::new(a.dim())];
        let mut total = 1usize;
        let mut k = 0;
        while k < max_rank {
            let mut next: Vec<HSet> = Vec::new();
            let mut next_spans: Vec<Span> = Vec::new();
            let mut seen: HashMap<HSet, usize> = HashMap::new();
            for (f, span) in levels[k].iter().zip(&spans) {
                let mut covered = *f;
                for h in 0..m {
                    if covered >> h & 1 == 1 {
                        continue;
                    }
                    let mut s = span.clone();
                    s.insert(a.normal(h));
                    let mut closed = *f | bit(h);
                    for g in h + 1..m {
                        if closed >> g & 1 == 0 && s.contains(a.normal(g)) {
                            closed |= bit(g);
                        }
                    }
                    // hyperplanes below h are either in f or already covered by an earlier cover
                    for g in bits(covered & !*f) {
                        if s.contains(a.normal(g)) {
                            closed |= bit(g);
                        }
                    }
                    covered |= closed;
                    covers.push((*f, closed));
                    if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(closed) {
                        e.insert(next.len());
                        next.push(closed);
                        next_spans.push(s);
                        total += 1;
                        if total > cap {
                            return Err(CsaError::Budget { what: "lattice flats", limit: cap as u64 });
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
            spans = next_spans;
            k += 1;
        }
        let complete = levels.last().is_some_and(|l| l.len() == 1 && l[0] == a.all());
        let mut flats = Vec::with_capacity(total);
        let mut rank_start = Vec::new();
        for (r, mut level) in levels.into_iter().enumerate() {
            level.sort_by_cached_key(|&s| index_key(s));
            rank_start.push(flats.len());
            flats.extend(level.into_iter().map(|closed| Flat { closed, rank: r, mobius: 0 }));
        }
        rank_start.push(flats.len());
        let index: HashMap<HSet, usize> = flats.iter().enumerate().map(|(i, f)| (f.closed, i)).collect();
        let mut lower = vec![Vec::new(); flats.len()];
        for (f, g) in covers {
            lower[index[&g]].push(index[&f]);
        }
        for l in lower.iter_mut() {
            l.sort_unstable();
            l.dedup();
        }
        // Weisner: μ(X) = -Σ μ(Y) over lower covers Y of X missing a fixed atom of X
        let mut mob = vec![0i64; flats.len()];
        mob[0] = 1;
        for x in 1..flats.len() {
            let h = flats[x].closed.trailing_zeros();
            mob[x] = -lower[x].iter().filter(|&&y| flats[y].closed >> h & 1 == 0).map(|&y| mob[y]).sum::<i64>();
        }
        for (f, mu) in flats.iter_mut().zip(mob) {
            f.mobius = mu;
        }
        Ok(IntersectionLattice { arr: a.clone(), flats, index, rank_start, lower, complete })
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arr
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Rank of the top flat.
    pub fn rank(&self) -> usize {
        self.rank_start.len() - 2
    }

    /// Whether the top flat `T(A)` was reached (false only for truncated builds).
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn rank_level(&self, r: usize) -> &[Flat] {
        if r + 1 >= self.rank_start.len() {
            return &[];
        }
        &self.flats[self.rank_start[r]..self.rank_start[r + 1]]
    }

    pub fn rank_range(&self, r: usize) -> std::ops::Range<usize> {
        if r + 1 >= self.rank_start.len() {
            return 0..0;
        }
        self.rank_start[r]..self.rank_start[r + 1]
    }

    pub fn find(&self, closed: HSet) -> Option<usize> {
        self.index.get(&closed).copied()
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower[i]
    }

    pub fn top(&self) -> usize {
        self.flats.len() - 1
    }

    /// The flat as a subspace of the ambient space.
    pub fn subspace(&self, i: usize) -> Subspace {
        self.arr.flat_of(self.flats[i].closed)
    }

    /// Flat generated by a set of hyperplanes.
    pub fn join_of(&self, s: HSet) -> Option<usize> {
        self.find(self.arr.closure(s))
    }

    pub fn characteristic_polynomial(&self) -> IntPolynomial {
        let n = self.arr.dim();
        let mut c = vec![0i64; n + 1];
        for f in &self.flats {
            c[n - f.rank] += f.mobius;
        }
        IntPolynomial::new(c)
    }

    /// `π(A,t) = Σ μ(X) (-t)^{r(X)}`.
    pub fn poincare_polynomial(&self) -> IntPolynomial {
        let mut c = vec![0i64; self.rank() + 1];
        for f in &self.flats {
            c[f.rank] += if f.rank % 2 == 0 { f.mobius } else { -f.mobius };
        }
        IntPolynomial::new(c)
    }

    fn is_modular_pair(&self, x: usize, y: usize) -> bool {
        let (cx, cy) = (self.flats[x].closed, self.flats[y].closed);
        if cx & !cy == 0 || cy & !cx == 0 {
            return true;
        }
        let meet = self.find(cx & cy).expect("intersection of closed sets is closed");
        let join_rank = self.arr.rank_of_set(cx | cy);
        self.flats[x].rank + self.flats[y].rank == join_rank + self.flats[meet].rank
    }

    /// Flats `X` with `r(X)+r(Y) = r(X∨Y)+r(X∧Y)` for every flat `Y`.
    pub fn modular_flats(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| (0..self.len()).all(|y| self.is_modular_pair(x, y))).collect()
    }

    pub fn is_modular(&self, x: usize) -> bool {
        (0..self.len()).all(|y| self.is_modular_pair(x, y))
    }

    /// A maximal chain of modular flats `V = X_0 < … < X_r`, if one exists.
    pub fn supersolvable_chain(&self) -> Option<Vec<usize>> {
        let mut failed = HashSet::new();
        let mut chain = self.chain_below(self.top(), &mut failed)?;
        chain.reverse();
        Some(chain)
    }

    // Downward search: a modular coatom of [V, top], then recurse inside it.
    fn chain_below(&self, top: usize, failed: &mut HashSet<usize>) -> Option<Vec<usize>> {
        if self.flats[top].rank <= 1 {
            return Some(if top == 0 { vec![0] } else { vec![top, 0] });
        }
        if failed.contains(&top) {
            return None;
        }
        let ct = self.flats[top].closed;
        let lines: Vec<HSet> = self
            .rank_level(2)
            .iter()
            .map(|f| f.closed)
            .filter(|&c| c & !ct == 0)
            .collect();
        for &z in &self.lower[top] {
            let cz = self.flats[z].closed;
            if lines.iter().all(|&l| l & cz != 0) {
                if let Some(mut rest) = self.chain_below(z, failed) {
                    rest.insert(0, top);
                    return Some(rest);
                }
            }
        }
        failed.insert(top);
        None
    }

    /// Sizes `|X_i| - |X_{i-1}|` along a chain.
    pub fn chain_increments(&self, chain: &[usize]) -> Vec<u64> {
        chain.windows(2).map(|w| (self.flats[w[1]].size() - self.flats[w[0]].size()) as u64).collect()
    }

    pub fn export(&self) -> LatticeExport {
        LatticeExport {
            rank: self.rank(),
            flats: self
                .flats
                .iter()
                .enumerate()
                .map(|(i, f)| FlatExport { id: i, rank: f.rank, hyperplanes: f.indices(), mobius: f.mobius, covers: self.lower[i].clone() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatExport {
    pub id: usize,
    pub rank: usize,
    pub hyperplanes: Vec<usize>,
    pub mobius: i64,
    /// Ids of the flats this one covers.
    pub covers: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeExport {
    pub rank: usize,
    pub flats: Vec<FlatExport>,
}

pub fn intersection_lattice(a: &Arrangement) -> Result<IntersectionLattice> {
    IntersectionLattice::new(a)
}

pub fn characteristic_polynomial(l: &IntersectionLattice) -> IntPolynomial {
    l.characteristic_polynomial()
}

pub fn poincare_polynomial(l: &IntersectionLattice) -> IntPolynomial {
    l.poincare_polynomial()
}

/// Largest absolute value of a square minor of the normal matrix.
pub fn max_abs_minor(a: &Arrangement) -> BigInt {
    let m = a.len();
    let n = a.dim();
    let rows: Vec<&[i64]> = a.normals().collect();
    let mut best = BigInt::from(1);
    for k in 1..=n.min(m) {
        let rsets = combinations(m, k);
        let csets = combinations(n, k);
        for rs in &rsets {
            for cs in &csets {
                let mat: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| BigInt::from(rows[r][c])).collect()).collect();
                let d = bareiss_det(mat);
                let d = if d < BigInt::zero() { -d } else { d };
                if d > best {
                    best = d;
                }
            }
        }
    }
    best
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Fraction-free determinant.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone() * sign
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `#{x ∈ F_p^n : α_H(x) ≠ 0 for all H}`.
pub fn count_complement_mod_p(a: &Arrangement, p: u64) -> u128 {
    let n = a.dim();
    if a.is_empty() {
        return (p as u128).pow(n as u32);
    }
    let normals: Vec<Vec<u64>> = a
        .normals()
        .map(|v| v.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    // projective count with the first nonzero coordinate equal to 1
    let mut proj: u128 = 0;
    for lead in 0..n {
        let partial: Vec<u64> = normals.iter().map(|v| v[lead]).collect();
        if lead == n - 1 {
            if partial.iter().all(|&s| s != 0) {
                proj += 1;
            }
            continue;
        }
        proj += count_rec(&normals, p, lead + 1, n, &partial);
    }
    proj * (p as u128 - 1)
}

fn count_rec(normals: &[Vec<u64>], p: u64, pos: usize, n: usize, partial: &[u64]) -> u128 {
    if pos == n - 1 {
        let mut forbidden: Vec<u64> = Vec::new();
        for (v, &s) in normals.iter().zip(partial) {
            let c = v[pos];
            if c == 0 {
                if s == 0 {
                    return 0;
                }
            } else {
                // s + c x = 0  ⇔  x = -s / c
                let x = (p - s) % p * mod_inv(c, p) % p;
                if !forbidden.contains(&x) {
                    forbidden.push(x);
                }
            }
        }
        return (p - forbidden.len() as u64) as u128;
    }
    let mut total = 0;
    let mut next = partial.to_vec();
    for x in 0..p {
        for ((t, v), &s) in next.iter_mut().zip(normals).zip(partial) {
            *t = (s + v[pos] * x) % p;
        }
        total += count_rec(normals, p, pos + 1, n, &next);
    }
    total
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// χ(A,t) by counting points over `n+1` finite fields of good characteristic and interpolating.
pub fn char_poly_finite_field(a: &Arrangement) -> Result<IntPolynomial> {
    let n = a.dim();
    let bound = max_abs_minor(a).to_u64().ok_or_else(|| CsaError::Unsupported("minor bound too large".into()))?;
    let primes: Vec<u64> = (bound + 1..).filter(|&p| is_prime(p)).take(n + 1).collect();
    if primes.len() < n + 1 {
        return Err(CsaError::Unsupported("not enough good primes".into()));
    }
    let pts: Vec<(BigRational, BigRational)> = primes
        .iter()
        .map(|&p| (BigRational::from_integer(p.into()), BigRational::from_integer(count_complement_mod_p(a, p).into())))
        .collect();
    let coeffs = lagrange(&pts);
    coeffs
        .into_iter()
        .map(|c| {
            if !c.is_integer() {
                return Err(CsaError::Unsupported("non-integral interpolation".into()));
            }
            c.to_integer().to_i64().ok_or(CsaError::Overflow)
        })
        .collect::<Result<Vec<i64>>>()
        .map(IntPolynomial::new)
}

fn lagrange(pts: &[(BigRational, BigRational)]) -> Vec<BigRational> {
    let k = pts.len();
    let mut out = vec![BigRational::zero(); k];
    for (i, (xi, yi)) in pts.iter().enumerate() {
        let mut basis = vec![BigRational::from_integer(1.into())];
        let mut denom = BigRational::from_integer(1.into());
        for (j, (xj, _)) in pts.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut nb = vec![BigRational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                nb[d + 1] += c.clone();
                nb[d] -= c * xj;
            }
            basis = nb;
            denom *= xi - xj;
        }
        let f = yi / denom;
        for (d, c) in basis.iter().enumerate() {
            out[d] += c * &f;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::build_csg;
    use crate::graphs::parse_family;

    fn csg(s: &str) -> Arrangement {
        build_csg(&parse_family(s).unwrap()).unwrap()
    }

    fn boolean(n: usize) -> Arrangement {
        let v: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        Arrangement::from_normals(n, &v).unwrap()
    }

    #[test]
    fn p2_lattice() {
        let l = IntersectionLattice::new(&csg("P:2")).unwrap();
        let mu: Vec<i64> = l.flats().iter().map(|f| f.mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, -1, 2]);
        assert_eq!(l.characteristic_polynomial().coeffs(), &[2, -3, 1]);
        assert_eq!(l.poincare_polynomial(), IntPolynomial::from_linear_factors(&[1, 2]));
        assert_eq!(l.modular_flats().len(), 5);
    }

    #[test]
    fn boolean_lattice() {
        for n in 1..=5 {
            let l = IntersectionLattice::new(&boolean(n)).unwrap();
            assert_eq!(l.len(), 1 << n);
            let expected = (0..n).fold(IntPolynomial::one(), |acc, _| acc * IntPolynomial::new(vec![-1, 1]));
            assert_eq!(l.characteristic_polynomial(), expected);
        }
    }

    #[test]
    fn c3_lattice() {
        let a = csg("C:3");
        let l = IntersectionLattice::new(&a).unwrap();
        // brute force: closed sets of all pairs
        let mut lines = HashSet::new();
        for i in 0..7 {
            for j in i + 1..7 {
                lines.insert(a.closure(bit(i) | bit(j)));
            }
        }
        assert_eq!(l.rank_level(2).len(), lines.len());
        assert_eq!(l.rank_level(1).len(), 7);
        let chi = IntPolynomial::new(vec![-1, 1]) * IntPolynomial::new(vec![-3, 1]) * IntPolynomial::new(vec![-3, 1]);
        assert_eq!(l.characteristic_polynomial(), chi);
        assert_eq!(char_poly_finite_field(&a).unwrap(), chi);
        assert!(l.supersolvable_chain().is_none());
    }

    #[test]
    fn delta31_poincare() {
        let l = IntersectionLattice::new(&csg("T:3,1")).unwrap();
        assert_eq!(l.poincare_polynomial(), IntPolynomial::from_linear_factors(&[1, 3, 4, 4]));
        assert_eq!(IntersectionLattice::new(&Arrangement::empty(3)).unwrap().poincare_polynomial(), IntPolynomial::one());
    }

    #[test]
    fn finite_field_p2() {
        let a = csg("P:2");
        assert_eq!(count_complement_mod_p(&a, 5), 12);
        assert_eq!(count_complement_mod_p(&boolean(3), 7), 216);
        assert_eq!(char_poly_finite_field(&a).unwrap().coeffs(), &[2, -3, 1]);
    }

    #[test]
    fn modular_and_chains() {
        let l = IntersectionLattice::new(&csg("C:3")).unwrap();
        let m = l.modular_flats();
        assert!(m.contains(&0) && m.contains(&l.top()));
        for i in l.rank_range(1) {
            assert!(m.contains(&i));
        }
        for n in 1..=5 {
            let l = IntersectionLattice::new(&csg(&format!("P:{n}"))).unwrap();
            let c = l.supersolvable_chain().expect("braid arrangements are supersolvable");
            assert_eq!(c.len(), n + 1);
            assert!(c.iter().all(|&x| l.is_modular(x)));
            let mut inc = l.chain_increments(&c);
            inc.sort_unstable();
            assert_eq!(inc, (1..=n as u64).collect::<Vec<_>>());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = IntersectionLattice::with_cap(&csg("K:4"), 10).unwrap_err();
        assert!(matches!(err, CsaError::Budget { .. }));
    }

    #[test]
    fn truncated_build() {
        let a = csg("K:4");
        let t = IntersectionLattice::truncated(&a, 2, DEFAULT_FLAT_CAP).unwrap();
        let f = IntersectionLattice::new(&a).unwrap();
        assert!(!t.is_complete());
        assert_eq!(t.rank_level(2).len(), f.rank_level(2).len());
    }

    #[test]
    fn determinants() {
        let m = |v: Vec<Vec<i64>>| v.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        assert_eq!(bareiss_det(m(vec![vec![0, 1], vec![1, 0]])), BigInt::from(-1));
        assert_eq!(bareiss_det(m(vec![vec![2, 1, 1], vec![1, 3, 2], vec![1, 0, 0]])), BigInt::from(-1));
        assert_eq!(max_abs_minor(&csg("K:3")), BigInt::from(2));
    }
}
