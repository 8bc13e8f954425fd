//! Chambers of real arrangements, the poset of regions and its rank-generating
//! function.
//!
//! A sign vector `σ` is a chamber iff `{σ_H ⟨α_H, x⟩ > 0}` is feasible. By Gordan's
//! alternative this fails iff some `y >= 0`, `Σy = 1` has `Σ y_H σ_H α_H = 0`, which is
//! decided by an exact phase-one simplex with Bland's rule. An interior point is read
//! off the optimal dual.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arrangement::{bit, Arrangement, HSet};
use crate::budget::Budget;
use crate::error::{CsaError, Result};
use crate::exactlin::Ring;
use crate::poly::IntPolynomial;
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chamber {
    /// Bit `i` set when `α_i > 0` on the chamber.
    pub positive: HSet,
    #[serde(serialize_with = "big_strings")]
    pub witness: Vec<BigInt>,
}

fn big_strings<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl Chamber {
    pub fn sign_string(&self, m: usize) -> String {
        (0..m).map(|i| if self.positive >> i & 1 == 1 { '+' } else { '-' }).collect()
    }

    pub fn opposite(&self, m: usize) -> Chamber {
        Chamber { positive: !self.positive & crate::arrangement::full_set(m), witness: self.witness.iter().map(|x| -x).collect() }
    }
}

fn signed_rows(a: &Arrangement, positive: HSet) -> Vec<Vec<i64>> {
    (0..a.len())
        .map(|i| {
            let s = if positive >> i & 1 == 1 { 1 } else { -1 };
            a.normal(i).iter().map(|&x| s * x).collect()
        })
        .collect()
}

enum Lp<R> {
    Empty,
    Point(Vec<R>),
}

/// Phase one on `M^T y + a' = 0`, `Σy + a'' = 1` with a fraction-free tableau.
/// `None` on overflow of `R`.
fn gordan<R: Ring>(m: &[Vec<i64>], n: usize) -> Option<Lp<R>> {
    let k = m.len();
    let rows = n + 1;
    let cols = k + rows + 1;
    let rhs = cols - 1;
    let mut t: Vec<Vec<R>> = vec![vec![R::nil(); cols]; rows + 1];
    for (j, mrow) in m.iter().enumerate() {
        for i in 0..n {
            t[i][j] = R::from_i64(mrow[i]);
        }
        t[n][j] = R::from_i64(1);
    }
    for i in 0..rows {
        t[i][k + i] = R::from_i64(1);
    }
    t[n][rhs] = R::from_i64(1);
    // objective row: reduced costs of `min Σ a`
    let obj = rows;
    for j in 0..k {
        let s: i64 = m[j].iter().sum();
        t[obj][j] = R::from_i64(-(s + 1));
    }
    t[obj][rhs] = R::from_i64(-1);
    let mut basis: Vec<usize> = (k..k + rows).collect();
    let mut d = R::from_i64(1);
    loop {
        let Some(s) = (0..rhs).find(|&j| t[obj][j].is_neg()) else { break };
        let mut r: Option<usize> = None;
        for i in 0..rows {
            if t[i][s].is_nil() || t[i][s].is_neg() {
                continue;
            }
            r = match r {
                None => Some(i),
                Some(p) => {
                    // t[i][rhs]/t[i][s] vs t[p][rhs]/t[p][s]
                    let c = R::mul_sub(&t[i][rhs], &t[p][s], &t[p][rhs], &t[i][s])?;
                    if c.is_neg() || (c.is_nil() && basis[i] < basis[p]) {
                        Some(i)
                    } else {
                        Some(p)
                    }
                }
            };
        }
        let r = r.expect("phase one is bounded below");
        let piv = t[r][s].clone();
        for i in 0..=rows {
            if i == r {
                continue;
            }
            let f = t[i][s].clone();
            for j in 0..cols {
                let v = R::mul_sub(&t[i][j], &piv, &f, &t[r][j])?;
                t[i][j] = v.div_exact(&d);
            }
        }
        d = piv;
        basis[r] = s;
    }
    if !t[obj][rhs].is_neg() {
        return Some(Lp::Empty);
    }
    // x_i = (z[a_i] - D) / D, up to the positive factor D
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        x.push(R::mul_sub(&t[obj][k + i], &R::from_i64(1), &d, &R::from_i64(1))?);
    }
    Some(Lp::Point(x))
}

fn primitive_big(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
    if !g.is_zero() {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

/// An interior point of the cone with the given signs, or `None` if it is empty.
pub fn chamber_point(a: &Arrangement, positive: HSet) -> Option<Vec<BigInt>> {
    let m = signed_rows(a, positive);
    let x: Option<Vec<BigInt>> = match gordan::<i128>(&m, a.dim()) {
        Some(Lp::Empty) => None,
        Some(Lp::Point(x)) => Some(x.iter().map(|v| v.to_big()).collect()),
        None => match gordan::<BigInt>(&m, a.dim()).expect("big integers do not overflow") {
            Lp::Empty => None,
            Lp::Point(x) => Some(x),
        },
    };
    let x = primitive_big(x?);
    debug_assert!(m.iter().all(|r| r.iter().zip(&x).map(|(&c, v)| v * c).sum::<BigInt>().is_positive()));
    Some(x)
}

fn sign_of(a: &Arrangement, p: &[BigInt]) -> Option<HSet> {
    let mut s = 0;
    for i in 0..a.len() {
        let v: BigInt = a.normal(i).iter().zip(p).map(|(&c, x)| x * c).sum();
        if v.is_zero() {
            return None;
        }
        if v.is_positive() {
            s |= bit(i);
        }
    }
    Some(s)
}

/// The all-ones point if no form vanishes there, else `(1, N, N², …)` with `N` large.
pub fn base_point(a: &Arrangement) -> Vec<BigInt> {
    let ones = vec![BigInt::from(1); a.dim()];
    if sign_of(a, &ones).is_some() {
        return ones;
    }
    let big = 2 + a.normals().flat_map(|v| v.iter().map(|x| x.unsigned_abs())).max().unwrap_or(0);
    let mut p = Vec::with_capacity(a.dim());
    let mut c = BigInt::from(1);
    for _ in 0..a.dim() {
        p.push(c.clone());
        c *= big;
    }
    p
}

pub fn base_chamber(a: &Arrangement) -> Chamber {
    let p = base_point(a);
    let positive = sign_of(a, &p).expect("the base point avoids every hyperplane");
    Chamber { positive, witness: p }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChamberGraph {
    /// Sorted by sign vector.
    pub chambers: Vec<Chamber>,
    /// Walls of each chamber.
    pub walls: Vec<HSet>,
}

/// All chambers, by breadth-first wall-crossing from the base chamber.
pub fn chambers(a: &Arrangement, budget: &Budget) -> Result<ChamberGraph> {
    let seed = base_chamber(a);
    let mut index: HashMap<HSet, usize> = HashMap::new();
    let mut found = vec![seed.clone()];
    let mut walls: Vec<HSet> = vec![0];
    index.insert(seed.positive, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        let s = found[c].positive;
        for h in 0..a.len() {
            let t = s ^ bit(h);
            if index.contains_key(&t) {
                walls[c] |= bit(h);
                continue;
            }
            if let Some(w) = chamber_point(a, t) {
                if found.len() >= budget.chambers {
                    return Err(CsaError::Budget { what: "chambers", limit: budget.chambers as u64 });
                }
                index.insert(t, found.len());
                found.push(Chamber { positive: t, witness: w });
                walls.push(0);
                walls[c] |= bit(h);
                queue.push_back(found.len() - 1);
            }
        }
    }
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by_key(|&i| sort_key(found[i].positive, a.len()));
    Ok(ChamberGraph { chambers: order.iter().map(|&i| found[i].clone()).collect(), walls: order.iter().map(|&i| walls[i]).collect() })
}

/// Lexicographic on the sign string, `+` before `-`.
fn sort_key(positive: HSet, m: usize) -> Vec<bool> {
    (0..m).map(|i| positive >> i & 1 == 0).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionPoset {
    pub base: Chamber,
    pub chambers: Vec<Chamber>,
    /// `|S(B, R)|` for each chamber.
    pub ranks: Vec<usize>,
}

impl RegionPoset {
    /// `R <= R'` iff `S(B,R) ⊆ S(B,R')`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        let si = self.chambers[i].positive ^ self.base.positive;
        let sj = self.chambers[j].positive ^ self.base.positive;
        si & !sj == 0
    }

    pub fn zeta(&self) -> IntPolynomial {
        let top = self.ranks.iter().copied().max().unwrap_or(0);
        let mut c = vec![0i64; top + 1];
        for &r in &self.ranks {
            c[r] += 1;
        }
        IntPolynomial::new(c)
    }
}

pub fn poset_of_regions(g: &ChamberGraph, base: &Chamber) -> Result<RegionPoset> {
    if !g.chambers.iter().any(|c| c.positive == base.positive) {
        return Err(CsaError::InvalidInput("base is not a chamber".into()));
    }
    let ranks = g.chambers.iter().map(|c| (c.positive ^ base.positive).count_ones() as usize).collect();
    Ok(RegionPoset { base: base.clone(), chambers: g.chambers.clone(), ranks })
}

/// `ζ(P(A,B); t)` for the base chamber.
pub fn zeta_polynomial(a: &Arrangement, budget: &Budget) -> Result<IntPolynomial> {
    let g = chambers(a, budget)?;
    Ok(poset_of_regions(&g, &base_chamber(a))?.zeta())
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaCertificate {
    pub zeta: IntPolynomial,
    pub expected: IntPolynomial,
    pub chamber_count: usize,
    /// Sign vector of the base that satisfies the identity.
    pub base: Option<String>,
    pub bases_tried: usize,
}

/// `ζ(P(A,B); t) = ∏ (1 + t + … + t^{e_i})` for the base chamber, and optionally for
/// some other chamber.
pub fn zeta_factorization_check(a: &Arrangement, exps: &[u64], search_bases: bool, budget: &Budget) -> Result<Verdict<ZetaCertificate>> {
    if exps.iter().sum::<u64>() != a.len() as u64 {
        return Err(CsaError::InvalidInput(format!("exponents sum to {}, not |A| = {}", exps.iter().sum::<u64>(), a.len())));
    }
    let expected = IntPolynomial::q_product(exps);
    let g = chambers(a, budget)?;
    let base = base_chamber(a);
    let zeta = poset_of_regions(&g, &base)?.zeta();
    let m = a.len();
    let mut cert = ZetaCertificate { zeta: zeta.clone(), expected: expected.clone(), chamber_count: g.chambers.len(), base: None, bases_tried: 1 };
    if zeta == expected {
        cert.base = Some(base.sign_string(m));
        return Ok(Verdict::yes(cert));
    }
    if !search_bases {
        return Ok(Verdict::inconclusive(cert));
    }
    for c in &g.chambers {
        if c.positive == base.positive {
            continue;
        }
        cert.bases_tried += 1;
        let z = poset_of_regions(&g, c)?.zeta();
        if z == expected {
            cert.zeta = z;
            cert.base = Some(c.sign_string(m));
            return Ok(Verdict::yes(cert));
        }
    }
    Ok(Verdict::no(cert))
}

/// CSV rows `signs,rank` for the base chamber.
pub fn chambers_csv(a: &Arrangement, p: &RegionPoset) -> String {
    let mut s = String::from("signs,rank\n");
    for (c, r) in p.chambers.iter().zip(&p.ranks) {
        s.push_str(&format!("{},{}\n", c.sign_string(a.len()), r));
    }
    s
}
