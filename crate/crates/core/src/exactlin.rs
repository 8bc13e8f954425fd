//! Exact linear algebra over the rationals.
//!
//! [`Subspace`] keeps a row space in reduced row-echelon form, so equality of
//! subspaces is equality of matrices. [`Span`] is the integer workhorse used by
//! the lattice and search code: fraction-free echelon rows in `i128`, promoted
//! to `BigInt` if an entry ever overflows.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CsaError, Result};

pub type Rat = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVector(pub Vec<Rat>);

impl RatVector {
    pub fn zeros(n: usize) -> Self {
        RatVector(vec![Rat::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RatVector(v.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RatVector) -> Rat {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn dot_ints(&self, other: &[i64]) -> Rat {
        self.0
            .iter()
            .zip(other)
            .fold(Rat::zero(), |acc, (a, &b)| acc + a * Rat::from_integer(BigInt::from(b)))
    }

    /// Scale to a primitive integer vector with first nonzero entry positive.
    pub fn to_primitive_ints(&self) -> Result<Vec<i64>> {
        let ints = clear_denominators(&self.0);
        primitive_big(&ints)
            .into_iter()
            .map(|x| x.to_i64().ok_or(CsaError::Overflow))
            .collect()
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

fn clear_denominators(v: &[Rat]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect()
}

fn primitive_big(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    v.iter().map(|x| x / &g * &sign).collect()
}

/// Primitive form of an integer vector: content 1, first nonzero entry positive.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return v.to_vec();
    }
    let s = if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) { -1 } else { 1 };
    v.iter().map(|&x| x / g * s).collect()
}

/// A linear subspace of Q^n stored as the row space of its canonical matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    #[serde(with = "rat_rows")]
    basis: Vec<RatVector>,
    ambient_dim: usize,
}

mod rat_rows {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rows: &[RatVector], s: S) -> std::result::Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = rows.iter().map(|r| r.0.iter().map(|x| x.to_string()).collect()).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<RatVector>, D::Error> {
        let text: Vec<Vec<String>> = Vec::deserialize(d)?;
        text.into_iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.parse::<Rat>().map_err(serde::de::Error::custom))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map(RatVector)
            })
            .collect()
    }
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { basis: Vec::new(), ambient_dim }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut v = RatVector::zeros(ambient_dim);
                v.0[i] = Rat::one();
                v
            })
            .collect();
        Subspace { basis, ambient_dim }
    }

    /// The hyperplane `ker α` as a row space of dimension n-1.
    pub fn kernel_of(normal: &[i64]) -> Self {
        Subspace::span_unchecked(normal.len(), vec![RatVector::from_ints(normal)]).annihilator()
    }

    /// The common zero set of the given linear forms.
    pub fn kernel_of_all(ambient_dim: usize, normals: &[&[i64]]) -> Self {
        let rows = normals.iter().map(|n| RatVector::from_ints(n)).collect();
        Subspace::span_unchecked(ambient_dim, rows).annihilator()
    }

    pub fn basis(&self) -> &[RatVector] {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn span_unchecked(ambient_dim: usize, rows: Vec<RatVector>) -> Self {
        Subspace { basis: rref(rows, ambient_dim), ambient_dim }
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.0.iter().position(|x| !x.is_zero()).expect("rref row is nonzero"))
            .collect()
    }

    /// Vectors of the dual space vanishing on `self`, identified with Q^n.
    pub fn annihilator(&self) -> Self {
        let n = self.ambient_dim;
        let piv = self.pivots();
        let mut rows = Vec::new();
        for f in (0..n).filter(|c| !piv.contains(c)) {
            let mut v = RatVector::zeros(n);
            v.0[f] = Rat::one();
            for (row, &p) in self.basis.iter().zip(&piv) {
                v.0[p] = -row.0[f].clone();
            }
            rows.push(v);
        }
        Subspace::span_unchecked(n, rows)
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(CsaError::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Subspace::span_unchecked(self.ambient_dim, rows))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    pub fn contains_vector(&self, v: &RatVector) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.clone());
        rref(rows, self.ambient_dim).len() == self.dim()
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && other.basis.iter().all(|v| self.contains_vector(v))
    }

    /// Is `self` contained in the hyperplane `ker α`?
    pub fn inside_kernel(&self, normal: &[i64]) -> bool {
        self.basis.iter().all(|b| b.dot_ints(normal).is_zero())
    }
}

/// Canonical reduced row-echelon form of the row space of `rows`.
pub fn canonical_form(ambient_dim: usize, rows: &[RatVector]) -> Result<Subspace> {
    if let Some(r) = rows.iter().find(|r| r.len() != ambient_dim) {
        return Err(CsaError::DimensionMismatch { expected: ambient_dim, found: r.len() });
    }
    Ok(Subspace::span_unchecked(ambient_dim, rows.to_vec()))
}

pub fn rank_of(rows: &[RatVector]) -> Result<usize> {
    match rows.first() {
        None => Ok(0),
        Some(r) => Ok(canonical_form(r.len(), rows)?.dim()),
    }
}

fn rref(mut rows: Vec<RatVector>, n: usize) -> Vec<RatVector> {
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i].0[c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r].0[c].recip();
        for x in rows[r].0.iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row.0[c].is_zero() {
                let f = row.0[c].clone();
                for (x, y) in row.0.iter_mut().zip(&pivot.0) {
                    *x = &*x - &f * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Minimal integer arithmetic needed by fraction-free elimination.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn nil() -> Self;
    fn from_i64(x: i64) -> Self;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    /// `a*b - c*d`, or `None` on overflow.
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self>;
    fn gcd_r(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn negate(&self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Ring for i128 {
    fn nil() -> Self {
        0
    }
    fn from_i64(x: i64) -> Self {
        x as i128
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)
    }
    fn gcd_r(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn negate(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Ring for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        Some(a * b - c * d)
    }
    fn gcd_r(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn negate(&self) -> Option<Self> {
        Some(-self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Debug)]
struct Overflow;

/// Fraction-free echelon rows: primitive, pivot entry positive, zeros left of pivot.
#[derive(Clone, Debug)]
struct Echelon<T> {
    n: usize,
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: Ring> Echelon<T> {
    fn new(n: usize) -> Self {
        Echelon { n, rows: Vec::new() }
    }

    fn reduce(&self, v: &mut [T]) -> std::result::Result<(), Overflow> {
        for (p, r) in &self.rows {
            if v[*p].is_nil() {
                continue;
            }
            let c = v[*p].clone();
            let mut g = T::nil();
            for (x, y) in v.iter_mut().zip(r) {
                *x = T::mul_sub(&r[*p], x, &c, y).ok_or(Overflow)?;
                g = g.gcd_r(x);
            }
            if !g.is_nil() && g != T::from_i64(1) {
                for x in v.iter_mut() {
                    *x = x.div_exact(&g);
                }
            }
        }
        Ok(())
    }

    fn contains(&self, v: &[T]) -> std::result::Result<bool, Overflow> {
        let mut w = v.to_vec();
        self.reduce(&mut w)?;
        Ok(w.iter().all(Ring::is_nil))
    }

    fn insert(&mut self, v: &[T]) -> std::result::Result<bool, Overflow> {
        let mut w = v.to_vec();
        self.reduce(&mut w)?;
        let Some(p) = w.iter().position(|x| !x.is_nil()) else {
            return Ok(false);
        };
        if w[p].is_neg() {
            for x in w.iter_mut() {
                *x = x.negate().ok_or(Overflow)?;
            }
        }
        let pos = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(pos, (p, w));
        Ok(true)
    }
}

/// Integer row span with automatic promotion to big integers.
#[derive(Clone, Debug)]
pub struct Span(Repr);

#[derive(Clone, Debug)]
enum Repr {
    Small(Echelon<i128>),
    Big(Echelon<BigInt>),
}

impl Span {
    pub fn new(n: usize) -> Self {
        Span(Repr::Small(Echelon::new(n)))
    }

    pub fn from_rows<'a>(n: usize, rows: impl IntoIterator<Item = &'a [i64]>) -> Self {
        let mut s = Span::new(n);
        for r in rows {
            s.insert(r);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        match &self.0 {
            Repr::Small(e) => e.n,
            Repr::Big(e) => e.n,
        }
    }

    pub fn rank(&self) -> usize {
        match &self.0 {
            Repr::Small(e) => e.rows.len(),
            Repr::Big(e) => e.rows.len(),
        }
    }

    fn promote(&mut self) {
        if let Repr::Small(e) = &self.0 {
            let rows = e.rows.iter().map(|(p, r)| (*p, r.iter().map(Ring::to_big).collect())).collect();
            self.0 = Repr::Big(Echelon { n: e.n, rows });
        }
    }

    pub fn contains(&mut self, v: &[i64]) -> bool {
        if let Repr::Small(e) = &mut self.0 {
            let w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
            match e.contains(&w) {
                Ok(b) => return b,
                Err(Overflow) => self.promote(),
            }
        }
        let Repr::Big(e) = &mut self.0 else { unreachable!() };
        let w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        e.contains(&w).expect("big integers do not overflow")
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        if let Repr::Small(e) = &mut self.0 {
            let w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
            let backup = e.rows.clone();
            match e.insert(&w) {
                Ok(b) => return b,
                Err(Overflow) => {
                    e.rows = backup;
                    self.promote();
                }
            }
        }
        let Repr::Big(e) = &mut self.0 else { unreachable!() };
        let w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        e.insert(&w).expect("big integers do not overflow")
    }

    pub fn is_big(&self) -> bool {
        matches!(self.0, Repr::Big(_))
    }

    pub fn to_subspace(&self) -> Subspace {
        let n = self.ambient_dim();
        let rows: Vec<RatVector> = match &self.0 {
            Repr::Small(e) => e.rows.iter().map(|(_, r)| big_row(r.iter().map(Ring::to_big))).collect(),
            Repr::Big(e) => e.rows.iter().map(|(_, r)| big_row(r.iter().cloned())).collect(),
        };
        Subspace::span_unchecked(n, rows)
    }
}

fn big_row(it: impl Iterator<Item = BigInt>) -> RatVector {
    RatVector(it.map(Rat::from_integer).collect())
}

/// Rank of a set of integer vectors.
pub fn int_rank<'a>(n: usize, rows: impl IntoIterator<Item = &'a [i64]>) -> usize {
    Span::from_rows(n, rows).rank()
}
