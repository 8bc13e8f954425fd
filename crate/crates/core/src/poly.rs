//! Integer polynomials in one variable `t`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Coefficient list, index = degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial::new(vec![1])
    }

    pub fn monomial(c: i64, d: usize) -> Self {
        let mut v = vec![0; d + 1];
        v[d] = c;
        IntPolynomial::new(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> i64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: i64) -> i128 {
        self.coeffs.iter().rev().fold(0i128, |acc, &c| acc * t as i128 + c as i128)
    }

    /// `∏ (1 + b t)`.
    pub fn from_linear_factors(bs: &[u64]) -> Self {
        bs.iter().fold(IntPolynomial::one(), |acc, &b| acc * IntPolynomial::new(vec![1, b as i64]))
    }

    /// `∏ (1 + t + ... + t^e)`.
    pub fn q_product(es: &[u64]) -> Self {
        es.iter()
            .fold(IntPolynomial::one(), |acc, &e| acc * IntPolynomial::new(vec![1; e as usize + 1]))
    }

    /// `p(t) ↦ t^d p(1/t)` for `d = deg`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPolynomial::new(c)
    }

    /// `p(-t)`.
    pub fn negate_var(&self) -> Self {
        IntPolynomial::new(
            self.coeffs.iter().enumerate().map(|(i, &c)| if i % 2 == 1 { -c } else { c }).collect(),
        )
    }

    pub fn shift(&self, d: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; d];
        c.extend_from_slice(&self.coeffs);
        IntPolynomial::new(c)
    }

    /// Divide by `1 + b t` if it divides exactly.
    pub fn div_linear(&self, b: i64) -> Option<Self> {
        // p = (1 + b t) q, solve from the constant term up
        let n = self.coeffs.len();
        if n == 0 {
            return Some(IntPolynomial::zero());
        }
        let mut q = vec![0i64; n - 1];
        let mut prev = 0i64;
        for i in 0..n - 1 {
            q[i] = self.coeffs[i].checked_sub(b.checked_mul(prev)?)?;
            prev = q[i];
        }
        if b.checked_mul(prev)? != self.coeffs[n - 1] {
            return None;
        }
        Some(IntPolynomial::new(q))
    }

    /// Nonnegative integers `b_i` (ascending) with `self = ∏ (1 + b_i t)`, if they exist.
    /// Zero factors are not reported; callers pad to the rank they expect.
    pub fn factor_one_plus(&self) -> Option<Vec<u64>> {
        if self.coeff(0) != 1 {
            return None;
        }
        let mut p = self.clone();
        let mut out = Vec::new();
        while p.degree().unwrap_or(0) > 0 {
            let lead = *p.coeffs.last().unwrap();
            if lead <= 0 {
                return None;
            }
            // the smallest b dividing the leading coefficient that divides p
            let b = (1..=lead).find(|&b| lead % b == 0 && p.div_linear(b).is_some())?;
            p = p.div_linear(b).unwrap();
            out.push(b as u64);
        }
        out.sort_unstable();
        Some(out)
    }

    /// Pretty product form `(1 + b t)...` for factorizable polynomials.
    pub fn factored_string(bs: &[u64]) -> String {
        if bs.is_empty() {
            return "1".into();
        }
        bs.iter()
            .map(|&b| if b == 1 { "(1+t)".to_string() } else { format!("(1+{b}t)") })
            .collect()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            match d {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    write!(f, "t")?;
                    if d > 1 {
                        write!(f, "^{d}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, o: IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, o: IntPolynomial) -> IntPolynomial {
        self + (-o)
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, o: IntPolynomial) -> IntPolynomial {
        if self.is_zero() || o.is_zero() {
            return IntPolynomial::zero();
        }
        let mut c = vec![0i64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPolynomial::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factoring() {
        let p = IntPolynomial::from_linear_factors(&[1, 3, 4, 4]);
        assert_eq!(p.factor_one_plus(), Some(vec![1, 3, 4, 4]));
        assert_eq!(IntPolynomial::new(vec![1, 3, 3]).factor_one_plus(), None);
        assert_eq!(IntPolynomial::one().factor_one_plus(), Some(vec![]));
        assert_eq!(IntPolynomial::from_linear_factors(&[2, 6]).factor_one_plus(), Some(vec![2, 6]));
    }

    #[test]
    fn display_and_ops() {
        let p = IntPolynomial::new(vec![2, -3, 1]);
        assert_eq!(p.to_string(), "t^2 - 3t + 2");
        assert_eq!(p.eval(5), 12);
        assert_eq!(IntPolynomial::q_product(&[1, 2]).coeffs(), &[1, 2, 2, 1]);
        assert_eq!(p.negate_var().coeffs(), &[2, 3, 1]);
        assert_eq!(IntPolynomial::factored_string(&[1, 2]), "(1+t)(1+2t)");
    }
}
