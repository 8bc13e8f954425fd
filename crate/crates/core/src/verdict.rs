//! Three-valued verdicts.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    CertifiedYes,
    CertifiedNo,
    Inconclusive,
}

impl Status {
    /// Process exit code for this status.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::CertifiedYes => 0,
            Status::CertifiedNo => 1,
            Status::Inconclusive => 2,
        }
    }

    pub fn is_yes(self) -> bool {
        self == Status::CertifiedYes
    }

    pub fn is_no(self) -> bool {
        self == Status::CertifiedNo
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict<C> {
    pub status: Status,
    pub certificate: C,
}

impl<C> Verdict<C> {
    pub fn yes(certificate: C) -> Self {
        Verdict { status: Status::CertifiedYes, certificate }
    }

    pub fn no(certificate: C) -> Self {
        Verdict { status: Status::CertifiedNo, certificate }
    }

    pub fn inconclusive(certificate: C) -> Self {
        Verdict { status: Status::Inconclusive, certificate }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BudgetReport {
    pub what: String,
    pub limit: u64,
    pub used: u64,
}

/// `a ⊆ b` as multisets; both sorted ascending.
pub fn is_submultiset(a: &[u64], b: &[u64]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Sorted exponents padded with zeros to length `len`.
pub fn pad_exponents(exps: &[u64], len: usize) -> Option<Vec<u64>> {
    let nz: Vec<u64> = exps.iter().copied().filter(|&e| e != 0).collect();
    if nz.len() > len {
        return None;
    }
    let mut v = vec![0; len - nz.len()];
    v.extend(nz);
    v.sort_unstable();
    Some(v)
}

pub fn nonzero(exps: &[u64]) -> Vec<u64> {
    exps.iter().copied().filter(|&e| e != 0).collect()
}
