//! Freeness: family classification, Poincaré exponents, inductive freeness
//! with induction tables, MAT partitions and accuracy.

use std::collections::HashMap;

use serde::Serialize;

use crate::arrangement::{bit, bits, build_csg, format_form, ideal_subarrangement, Arrangement, HSet};
use crate::budget::{Budget, Meter};
use crate::error::{CsaError, Result};
use crate::exactlin::Span;
use crate::graphs::{build_family, classify_family, FamilySpec, FamilyTag, Graph};
use crate::lattice::IntersectionLattice;
use crate::poly::IntPolynomial;
use crate::verdict::{is_submultiset, nonzero, pad_exponents, BudgetReport, Verdict};

/// Exponents `{b_i}` with `π(A,t) = ∏(1+b_i t)`, ascending, zeros omitted.
pub fn exponent_candidates(a: &Arrangement) -> Result<Option<Vec<u64>>> {
    Ok(IntersectionLattice::new(a)?.poincare_polynomial().factor_one_plus())
}

fn factor_padded(p: &IntPolynomial, len: usize) -> Option<Vec<u64>> {
    pad_exponents(&p.factor_one_plus()?, len)
}

/// Addition step: from `exp A'` (length ℓ) and `exp A''` (length ℓ-1), the exponents of `A`.
pub fn addition_step(deletion: &[u64], restriction: &[u64]) -> Option<Vec<u64>> {
    if deletion.len() != restriction.len() + 1 || !is_submultiset(restriction, deletion) {
        return None;
    }
    // the single element of exp A' not matched by exp A''
    let mut rest = deletion.to_vec();
    for e in restriction {
        let p = rest.iter().position(|x| x == e)?;
        rest.remove(p);
    }
    let mut out = deletion.to_vec();
    let p = out.iter().position(|&x| x == rest[0])?;
    out[p] += 1;
    out.sort_unstable();
    Some(out)
}

// ---------------------------------------------------------------------------
// free_verdict_csg

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FreeCertificate {
    Family { family: FamilyTag, exponents: Vec<u64>, poincare: IntPolynomial, mat_block_sizes: Option<Vec<usize>> },
    NotFree { family: FamilyTag, poincare_factors: Option<Vec<u64>> },
    Mismatch { family: FamilyTag, formula: Vec<u64>, poincare: IntPolynomial },
}

/// Block sizes of the by-cardinality partition, ascending cardinality.
fn size_counts(g: &Graph) -> Vec<usize> {
    let mut counts = vec![0usize; g.n()];
    for m in g.connected_masks() {
        counts[m.count_ones() as usize - 1] += 1;
    }
    while counts.last() == Some(&0) {
        counts.pop();
    }
    counts
}

/// `e_j = #{k : |π_k| >= j}`.
pub fn dual_partition(sizes: &[usize]) -> Vec<u64> {
    let max = sizes.iter().copied().max().unwrap_or(0);
    let mut e: Vec<u64> = (1..=max).map(|j| sizes.iter().filter(|&&s| s >= j).count() as u64).collect();
    e.sort_unstable();
    e
}

/// Exponents of the free families by formula.
pub fn family_exponents(tag: &FamilyTag) -> Option<Vec<u64>> {
    match *tag {
        FamilyTag::Path { n } => Some((1..=n as u64).collect()),
        FamilyTag::Cycle { n } => {
            let mut e = vec![1];
            e.extend(std::iter::repeat(n as u64).take(n - 1));
            Some(e)
        }
        FamilyTag::AlmostPath { n, k } => {
            let g = build_family(&FamilySpec::AlmostPath(n, k)).ok()?;
            Some(dual_partition(&size_counts(&g)))
        }
        FamilyTag::PathWithTriangle { n, k } => {
            // restriction of A_{A_{n+1,k+1}} to a hyperplane: drop one largest exponent
            let g = build_family(&FamilySpec::AlmostPath(n + 1, k + 1)).ok()?;
            let mut e = dual_partition(&size_counts(&g));
            e.pop();
            Some(e)
        }
        _ => None,
    }
}

pub fn free_verdict_csg(g: &Graph) -> Result<Verdict<FreeCertificate>> {
    let family = classify_family(g)?;
    let a = build_csg(g)?;
    let poincare = IntersectionLattice::new(&a)?.poincare_polynomial();
    if !family.is_free_family() {
        return Ok(Verdict::no(FreeCertificate::NotFree { family, poincare_factors: poincare.factor_one_plus() }));
    }
    let formula = family_exponents(&family).expect("free family");
    if poincare.factor_one_plus().as_ref() != Some(&formula) {
        return Ok(Verdict::inconclusive(FreeCertificate::Mismatch { family, formula, poincare }));
    }
    let mat_block_sizes = match family {
        FamilyTag::AlmostPath { .. } => {
            let blocks = by_size_partition(&a);
            let v = verify_mat_partition(&a, &blocks)?;
            if !v.status.is_yes() {
                return Ok(Verdict::inconclusive(FreeCertificate::Mismatch { family, formula, poincare }));
            }
            Some(blocks.iter().map(Vec::len).collect())
        }
        _ => None,
    };
    Ok(Verdict::yes(FreeCertificate::Family { family, exponents: formula, poincare, mat_block_sizes }))
}

// ---------------------------------------------------------------------------
// inductive freeness

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InductionRow {
    /// `exp A'_i = exp A_{i-1}`, padded to the ambient dimension.
    pub exp_before: Vec<u64>,
    pub hyperplane: Vec<i64>,
    /// Table certifying `A_i^{H_i}`; absent when that restriction has rank at most one.
    pub restriction: Option<usize>,
    pub exp_restriction: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InductionTable {
    pub dim: usize,
    pub rows: Vec<InductionRow>,
    pub exponents: Vec<u64>,
}

/// Induction tables for an arrangement and the restrictions it depends on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InductionCertificate {
    pub root: usize,
    pub tables: Vec<InductionTable>,
}

impl InductionCertificate {
    pub fn table(&self) -> &InductionTable {
        &self.tables[self.root]
    }

    pub fn exponents(&self) -> Vec<u64> {
        nonzero(&self.table().exponents)
    }

    /// Markdown in the `exp A' | α_H | exp A''` layout.
    pub fn markdown(&self) -> String {
        let mut s = String::from("| exp A' | α_H | exp A'' |\n|---|---|---|\n");
        for r in &self.table().rows {
            s.push_str(&format!(
                "| {} | {} | {} |\n",
                fmt_exps(&r.exp_before),
                format_form(&r.hyperplane, 1),
                fmt_exps(&r.exp_restriction)
            ));
        }
        s.push_str(&format!("| {} | | |\n", fmt_exps(&self.table().exponents)));
        s
    }
}

fn fmt_exps(e: &[u64]) -> String {
    let nz = nonzero(e);
    if nz.is_empty() {
        return "0".into();
    }
    nz.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InductionOutcome {
    Table(InductionCertificate),
    /// `π(A,t)` does not factor: not free.
    PoincareObstruction { poincare: IntPolynomial },
    Exhausted { steps: u64 },
    Budget(BudgetReport),
}

type Key = (usize, Vec<Vec<i64>>);

fn key(a: &Arrangement) -> Key {
    (a.dim(), a.sorted_normals())
}

enum Stop {
    Budget(BudgetReport),
    Err(CsaError),
}

impl From<CsaError> for Stop {
    fn from(e: CsaError) -> Self {
        match e {
            CsaError::Budget { what, limit } => Stop::Budget(BudgetReport { what: what.into(), limit, used: limit }),
            e => Stop::Err(e),
        }
    }
}

struct IfSearch {
    meter: Meter,
    flat_cap: usize,
    memo: HashMap<Key, Option<usize>>,
    tables: Vec<InductionTable>,
}

impl IfSearch {
    fn new(budget: &Budget) -> Self {
        IfSearch { meter: Meter::new(budget.steps), flat_cap: budget.flats, memo: HashMap::new(), tables: Vec::new() }
    }

    fn tick(&mut self) -> std::result::Result<(), Stop> {
        if self.meter.tick() {
            Ok(())
        } else {
            Err(Stop::Budget(BudgetReport { what: "steps".into(), limit: self.meter.limit, used: self.meter.used }))
        }
    }

    fn poincare(&self, a: &Arrangement) -> std::result::Result<IntPolynomial, Stop> {
        Ok(IntersectionLattice::with_cap(a, self.flat_cap)?.poincare_polynomial())
    }

    fn low_rank_table(&mut self, a: &Arrangement) -> Option<usize> {
        let mut acc = Arrangement::empty(a.dim());
        let mut cur = vec![0; a.dim()];
        let mut rows = Vec::new();
        for h in a.hyperplanes() {
            acc = acc.add(h.clone()).ok()?;
            let r = acc.restriction(acc.len() - 1).ok()?;
            let er = pad_exponents(&if r.is_empty() { vec![] } else { vec![1] }, a.dim() - 1)?;
            let next = addition_step(&cur, &er)?;
            rows.push(InductionRow { exp_before: cur, hyperplane: h.normal.clone(), restriction: None, exp_restriction: er });
            cur = next;
        }
        self.tables.push(InductionTable { dim: a.dim(), rows, exponents: cur });
        Some(self.tables.len() - 1)
    }

    fn solve(&mut self, a: &Arrangement, pi: &IntPolynomial) -> std::result::Result<Option<usize>, Stop> {
        let k = key(a);
        if let Some(&r) = self.memo.get(&k) {
            return Ok(r);
        }
        let l = a.dim();
        let Some(exps) = factor_padded(pi, l) else {
            self.memo.insert(k, None);
            return Ok(None);
        };
        if a.rank() <= 2 {
            let t = self.low_rank_table(a);
            self.memo.insert(k, t);
            return Ok(t);
        }
        let mut found = None;
        for h in (0..a.len()).rev() {
            self.tick()?;
            let r = a.restriction(h)?;
            let pr = self.poincare(&r)?;
            let pd = pi.clone() - pr.shift(1);
            let (Some(er), Some(ed)) = (factor_padded(&pr, l - 1), factor_padded(&pd, l)) else {
                continue;
            };
            if addition_step(&ed, &er).as_ref() != Some(&exps) {
                continue;
            }
            let rid = if r.rank() <= 1 {
                None
            } else {
                match self.solve(&r, &pr)? {
                    Some(id) => Some(id),
                    None => continue,
                }
            };
            let d = a.delete(h)?;
            let Some(did) = self.solve(&d, &pd)? else {
                continue;
            };
            let mut rows = self.tables[did].rows.clone();
            rows.push(InductionRow { exp_before: ed, hyperplane: a.normal(h).to_vec(), restriction: rid, exp_restriction: er });
            self.tables.push(InductionTable { dim: l, rows, exponents: exps });
            found = Some(self.tables.len() - 1);
            break;
        }
        self.memo.insert(k, found);
        Ok(found)
    }

    /// Keep only tables reachable from `root`, renumbered in discovery order.
    fn extract(&self, root: usize) -> InductionCertificate {
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![root];
        ids.insert(root, 0);
        let mut i = 0;
        while i < order.len() {
            for r in &self.tables[order[i]].rows {
                if let Some(t) = r.restriction {
                    if !ids.contains_key(&t) {
                        ids.insert(t, order.len());
                        order.push(t);
                    }
                }
            }
            i += 1;
        }
        let tables = order
            .iter()
            .map(|&t| {
                let mut tab = self.tables[t].clone();
                for r in tab.rows.iter_mut() {
                    r.restriction = r.restriction.map(|x| ids[&x]);
                }
                tab
            })
            .collect();
        InductionCertificate { root: 0, tables }
    }
}

pub fn inductive_freeness_search(a: &Arrangement, budget: &Budget) -> Result<Verdict<InductionOutcome>> {
    let mut s = IfSearch::new(budget);
    let pi = match s.poincare(a) {
        Ok(p) => p,
        Err(Stop::Budget(b)) => return Ok(Verdict::inconclusive(InductionOutcome::Budget(b))),
        Err(Stop::Err(e)) => return Err(e),
    };
    if pi.factor_one_plus().is_none_or(|e| e.len() > a.dim()) {
        return Ok(Verdict::no(InductionOutcome::PoincareObstruction { poincare: pi }));
    }
    match s.solve(a, &pi) {
        Ok(Some(id)) => {
            let cert = s.extract(id);
            Ok(Verdict::yes(InductionOutcome::Table(cert)))
        }
        Ok(None) => Ok(Verdict::inconclusive(InductionOutcome::Exhausted { steps: s.meter.used })),
        Err(Stop::Budget(b)) => Ok(Verdict::inconclusive(InductionOutcome::Budget(b))),
        Err(Stop::Err(e)) => Err(e),
    }
}

/// Replay an induction certificate against `a`; returns the exponents (padded) on success.
pub fn verify_induction_certificate(a: &Arrangement, cert: &InductionCertificate) -> std::result::Result<Vec<u64>, String> {
    let mut done: HashMap<usize, Vec<u64>> = HashMap::new();
    verify_table(a, cert, cert.root, &mut done)
}

fn verify_table(
    a: &Arrangement,
    cert: &InductionCertificate,
    id: usize,
    done: &mut HashMap<usize, Vec<u64>>,
) -> std::result::Result<Vec<u64>, String> {
    let t = cert.tables.get(id).ok_or_else(|| format!("missing table {id}"))?;
    if t.dim != a.dim() {
        return Err(format!("table {id}: dimension {} for a {}-arrangement", t.dim, a.dim()));
    }
    let normals: Vec<Vec<i64>> = t.rows.iter().map(|r| r.hyperplane.clone()).collect();
    let listed = Arrangement::from_normals(t.dim, &normals).map_err(|e| e.to_string())?;
    if listed.len() != t.rows.len() || !listed.same_set(a) {
        return Err(format!("table {id}: hyperplanes differ from the arrangement"));
    }
    if let Some(e) = done.get(&id) {
        return Ok(e.clone());
    }
    let mut acc = Arrangement::empty(t.dim);
    let mut cur = vec![0u64; t.dim];
    for (i, row) in t.rows.iter().enumerate() {
        if row.exp_before != cur {
            return Err(format!("table {id} row {i}: exp A' is {:?}, replay gives {:?}", row.exp_before, cur));
        }
        acc = acc.add(crate::arrangement::Hyperplane::new(row.hyperplane.clone())).map_err(|e| e.to_string())?;
        let r = acc.restriction(acc.len() - 1).map_err(|e| e.to_string())?;
        let er = match row.restriction {
            None if r.rank() <= 1 => pad_exponents(&if r.is_empty() { vec![] } else { vec![1] }, t.dim - 1).unwrap(),
            None => return Err(format!("table {id} row {i}: restriction of rank {} needs a table", r.rank())),
            Some(rid) => verify_table(&r, cert, rid, done)?,
        };
        if er != row.exp_restriction {
            return Err(format!("table {id} row {i}: exp A'' is {:?}, replay gives {:?}", row.exp_restriction, er));
        }
        cur = addition_step(&cur, &er).ok_or_else(|| format!("table {id} row {i}: exp A'' not contained in exp A'"))?;
    }
    if cur != t.exponents {
        return Err(format!("table {id}: final exponents {:?}, replay gives {:?}", t.exponents, cur));
    }
    done.insert(id, cur.clone());
    Ok(cur)
}

// ---------------------------------------------------------------------------
// MAT

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatCertificate {
    Partition { blocks: Vec<Vec<usize>>, block_sizes: Vec<usize>, exponents: Vec<u64> },
    Violation { step: usize, condition: u8, hyperplane: Option<usize>, detail: String },
}

fn check_partition(a: &Arrangement, blocks: &[Vec<usize>]) -> Result<()> {
    let mut seen: HSet = 0;
    for b in blocks {
        if b.is_empty() {
            return Err(CsaError::NotAPartition("empty block".into()));
        }
        for &h in b {
            if h >= a.len() || seen >> h & 1 == 1 {
                return Err(CsaError::NotAPartition(format!("hyperplane {h} repeated or out of range")));
            }
            seen |= bit(h);
        }
    }
    if seen != a.all() {
        return Err(CsaError::NotAPartition("blocks do not cover the arrangement".into()));
    }
    Ok(())
}

/// Checks the three MAT-step conditions for the ordered partition `blocks`.
pub fn verify_mat_partition(a: &Arrangement, blocks: &[Vec<usize>]) -> Result<Verdict<MatCertificate>> {
    check_partition(a, blocks)?;
    let fail = |step, condition, hyperplane, detail: String| Ok(Verdict::no(MatCertificate::Violation { step, condition, hyperplane, detail }));
    let mut prev: HSet = 0;
    for (k, block) in blocks.iter().enumerate() {
        let step = k + 1;
        let mut span = Span::new(a.dim());
        for &h in block {
            span.insert(a.normal(h));
        }
        if span.rank() != block.len() {
            return fail(step, 1, None, format!("block of size {} has rank {}", block.len(), span.rank()));
        }
        // X ⊆ H' iff α_{H'} lies in the span of the block
        for h in bits(prev) {
            if span.contains(a.normal(h)) {
                return fail(step, 2, Some(h), "intersection of the block lies in an earlier hyperplane".into());
            }
        }
        let count = prev.count_ones() as usize;
        for &h in block {
            let sub = a.subarrangement(prev | bit(h));
            let pos = bits(prev | bit(h)).position(|x| x == h).unwrap();
            let r = sub.restriction(pos)?.len();
            if count - r != k {
                return fail(step, 3, Some(h), format!("|A_k| - |(A_k ∪ H)^H| = {} - {} ≠ {}", count, r, k));
            }
        }
        for &h in block {
            prev |= bit(h);
        }
    }
    let sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
    let exponents = dual_partition(&sizes);
    Ok(Verdict::yes(MatCertificate::Partition { blocks: blocks.to_vec(), block_sizes: sizes, exponents }))
}

/// Blocks of hyperplanes grouped by label cardinality, ascending.
pub fn by_size_partition(a: &Arrangement) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (i, h) in a.hyperplanes().iter().enumerate() {
        let s = h.label.as_ref().map_or(0, Vec::len);
        if blocks.len() < s {
            blocks.resize(s, Vec::new());
        }
        if s > 0 {
            blocks[s - 1].push(i);
        }
    }
    blocks.retain(|b| !b.is_empty());
    blocks
}

/// `A_I` with its by-cardinality ordered partition. `G` must be an almost-path graph.
pub fn mat_partition_for_ideal(g: &Graph, ideal: &[Vec<usize>]) -> Result<(Arrangement, Vec<Vec<usize>>)> {
    match classify_family(g)? {
        FamilyTag::AlmostPath { .. } | FamilyTag::Path { .. } => {}
        other => return Err(CsaError::Unsupported(format!("ideal MAT partitions need an almost-path graph, got {other:?}"))),
    }
    let a = ideal_subarrangement(g, ideal)?;
    let blocks = by_size_partition(&a);
    Ok((a, blocks))
}

// ---------------------------------------------------------------------------
// accuracy

#[derive(Clone, Debug, Serialize)]
pub struct AccuracyWitness {
    pub dim: usize,
    /// Hyperplanes containing `X_d`.
    pub flat: Vec<usize>,
    pub exponents: Vec<u64>,
    pub induction: Option<InductionCertificate>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AccuracyCertificate {
    Witnesses { flag: bool, witnesses: Vec<AccuracyWitness> },
    Refuted { dim: usize, candidates: usize },
    Open { dim: Option<usize>, budget: Option<BudgetReport> },
}

struct FlatCheck {
    id: usize,
    induction: Option<InductionCertificate>,
}

pub fn accuracy_certify(a: &Arrangement, exps: &[u64], flag_mode: bool, budget: &Budget) -> Result<Verdict<AccuracyCertificate>> {
    let l = a.dim();
    let mut e = exps.to_vec();
    e.sort_unstable();
    if e.len() != l || e.iter().sum::<u64>() != a.len() as u64 {
        return Err(CsaError::InvalidInput(format!("exponents {exps:?} inconsistent with a {l}-arrangement of {} hyperplanes", a.len())));
    }
    let lat = IntersectionLattice::with_cap(a, budget.flats)?;
    let mut good: Vec<Vec<FlatCheck>> = (0..=l).map(|_| Vec::new()).collect();
    let mut hit_budget = None;
    let mut open_dim = None;
    for d in (1..l).rev() {
        let range = lat.rank_range(l - d);
        let mut poincare_ok = 0;
        for x in range.clone() {
            let (r, _) = a.restriction_to(&lat.subspace(x))?;
            let pr = IntersectionLattice::with_cap(&r, budget.flats)?.poincare_polynomial();
            if factor_padded(&pr, d).as_deref() != Some(&e[..d]) {
                continue;
            }
            poincare_ok += 1;
            let v = inductive_freeness_search(&r, budget)?;
            if let InductionOutcome::Budget(b) = &v.certificate {
                hit_budget = Some(b.clone());
            }
            if let InductionOutcome::Table(c) = v.certificate {
                good[d].push(FlatCheck { id: x, induction: Some(c) });
                if !flag_mode {
                    break;
                }
            }
        }
        if poincare_ok == 0 {
            return Ok(Verdict::no(AccuracyCertificate::Refuted { dim: d, candidates: range.len() }));
        }
        if good[d].is_empty() && open_dim.is_none() {
            open_dim = Some(d);
        }
    }
    if let Some(d) = open_dim {
        return Ok(Verdict::inconclusive(AccuracyCertificate::Open { dim: Some(d), budget: hit_budget }));
    }
    let mut chain: Vec<usize> = Vec::new();
    if flag_mode {
        // X_{d} ⊆ X_{d+1}: closed sets grow as the dimension drops
        fn pick(lat: &IntersectionLattice, good: &[Vec<FlatCheck>], d: usize, above: HSet, chain: &mut Vec<usize>) -> bool {
            if d == 0 {
                return true;
            }
            for (i, f) in good[d].iter().enumerate() {
                if above & !lat.flats()[f.id].closed == 0 {
                    chain.push(i);
                    if pick(lat, good, d - 1, lat.flats()[f.id].closed, chain) {
                        return true;
                    }
                    chain.pop();
                }
            }
            false
        }
        if !pick(&lat, &good, l - 1, 0, &mut chain) {
            return Ok(Verdict::inconclusive(AccuracyCertificate::Open { dim: None, budget: hit_budget }));
        }
        chain.reverse();
    } else {
        chain = vec![0; l - 1];
    }
    let mut witnesses: Vec<AccuracyWitness> = Vec::new();
    for d in 1..l {
        let f = &mut good[d][chain[d - 1]];
        witnesses.push(AccuracyWitness { dim: d, flat: lat.flats()[f.id].indices(), exponents: e[..d].to_vec(), induction: f.induction.take() });
    }
    witnesses.push(AccuracyWitness { dim: l, flat: vec![], exponents: e.clone(), induction: None });
    Ok(Verdict::yes(AccuracyCertificate::Witnesses { flag: flag_mode, witnesses }))
}

/// Re-check every witness: restriction exponents and induction tables.
pub fn verify_accuracy(a: &Arrangement, cert: &AccuracyCertificate) -> std::result::Result<(), String> {
    let AccuracyCertificate::Witnesses { flag, witnesses } = cert else {
        return Err("not a witness certificate".into());
    };
    let mut prev: Option<HSet> = None;
    for w in witnesses.iter().rev().skip(1) {
        let set = w.flat.iter().fold(0, |m, &i| m | bit(i));
        if a.closure(set) != set || a.rank_of_set(set) != a.dim() - w.dim {
            return Err(format!("witness of dimension {} is not a flat of that dimension", w.dim));
        }
        if *flag && prev.is_some_and(|p| p & !set != 0) {
            return Err(format!("witness of dimension {} breaks the flag", w.dim));
        }
        prev = Some(set);
        let (r, _) = a.restriction_to(&a.flat_of(set)).map_err(|e| e.to_string())?;
        let c = w.induction.as_ref().ok_or("missing induction table")?;
        let got = verify_induction_certificate(&r, c)?;
        if got != w.exponents {
            return Err(format!("dimension {}: exponents {:?} vs {:?}", w.dim, got, w.exponents));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::parse_family;

    fn csg(s: &str) -> Arrangement {
        build_csg(&parse_family(s).unwrap()).unwrap()
    }

    #[test]
    fn candidates() {
        assert_eq!(exponent_candidates(&csg("P:3")).unwrap(), Some(vec![1, 2, 3]));
        assert_eq!(exponent_candidates(&csg("T:3,1")).unwrap(), Some(vec![1, 3, 4, 4]));
        let generic = Arrangement::from_normals(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap();
        assert_eq!(exponent_candidates(&generic).unwrap(), None);
    }

    #[test]
    fn verdicts() {
        let v = free_verdict_csg(&parse_family("T:3,1").unwrap()).unwrap();
        assert!(v.status.is_yes());
        let v = free_verdict_csg(&parse_family("G1").unwrap()).unwrap();
        assert!(v.status.is_no());
        let v = free_verdict_csg(&parse_family("A:3,2").unwrap()).unwrap();
        match v.certificate {
            FreeCertificate::Family { exponents, mat_block_sizes, .. } => {
                assert_eq!(exponents, vec![1, 3, 3, 4]);
                assert_eq!(mat_block_sizes, Some(vec![4, 3, 3, 1]));
            }
            c => panic!("{c:?}"),
        }
        assert!(matches!(free_verdict_csg(&Graph::new(3, &[(1, 2)]).unwrap()), Err(CsaError::Disconnected)));
    }

    #[test]
    fn addition() {
        assert_eq!(addition_step(&[1, 2, 2], &[1, 2]), Some(vec![1, 2, 3]));
        assert_eq!(addition_step(&[0, 0, 0], &[0, 0]), Some(vec![0, 0, 1]));
        assert_eq!(addition_step(&[1, 2, 2], &[1, 3]), None);
    }

    fn if_yes(a: &Arrangement) -> InductionCertificate {
        let v = inductive_freeness_search(a, &Budget::default()).unwrap();
        match v.certificate {
            InductionOutcome::Table(c) => c,
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn inductive_tables() {
        for s in ["C:3", "P:4", "A:3,2", "T:3,1"] {
            let a = csg(s);
            let c = if_yes(&a);
            let e = verify_induction_certificate(&a, &c).unwrap();
            assert_eq!(nonzero(&e), exponent_candidates(&a).unwrap().unwrap(), "{s}");
        }
        let boolean = Arrangement::from_normals(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(if_yes(&boolean).exponents(), vec![1, 1, 1]);
    }

    #[test]
    fn tampered_tables_fail() {
        let a = csg("C:3");
        let mut c = if_yes(&a);
        let root = c.root;
        c.tables[root].exponents[0] += 1;
        assert!(verify_induction_certificate(&a, &c).is_err());
        let c = if_yes(&a);
        assert!(verify_induction_certificate(&csg("P:3"), &c).is_err());
    }

    #[test]
    fn non_free_refuted() {
        let v = inductive_freeness_search(&csg("K:4"), &Budget::default()).unwrap();
        assert!(v.status.is_no());
    }

    #[test]
    fn mat() {
        let a = csg("A:3,2");
        let v = verify_mat_partition(&a, &by_size_partition(&a)).unwrap();
        match v.certificate {
            MatCertificate::Partition { exponents, .. } => assert_eq!(exponents, vec![1, 3, 3, 4]),
            c => panic!("{c:?}"),
        }
        let mut blocks = by_size_partition(&a);
        blocks.swap(0, 1);
        assert!(verify_mat_partition(&a, &blocks).unwrap().status.is_no());
        assert!(verify_mat_partition(&a, &blocks[1..]).is_err());
    }

    #[test]
    fn ideal_blocks() {
        let g = parse_family("A:3,2").unwrap();
        let ideal: Vec<Vec<usize>> = g.connected_subsets().into_iter().filter(|s| s.len() <= 2).collect();
        let (a, blocks) = mat_partition_for_ideal(&g, &ideal).unwrap();
        assert_eq!(blocks.iter().map(Vec::len).collect::<Vec<_>>(), vec![4, 3]);
        assert!(verify_mat_partition(&a, &blocks).unwrap().status.is_yes());
        assert!(mat_partition_for_ideal(&parse_family("C:4").unwrap(), &ideal).is_err());
    }

    #[test]
    fn accuracy() {
        let a = csg("C:3");
        let v = accuracy_certify(&a, &[1, 3, 3], false, &Budget::default()).unwrap();
        assert!(v.status.is_yes());
        verify_accuracy(&a, &v.certificate).unwrap();
        let a = csg("T:3,1");
        let v = accuracy_certify(&a, &[1, 3, 4, 4], true, &Budget::default()).unwrap();
        assert!(v.status.is_yes());
        verify_accuracy(&a, &v.certificate).unwrap();
        assert!(accuracy_certify(&a, &[1, 3, 4], false, &Budget::default()).is_err());
    }
}
