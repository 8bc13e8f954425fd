//! Nice partitions, the restriction map, and inductive factorizations.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::arrangement::{bit, bits, build_csg, bn_arrangement, format_form, ideal_subarrangement, Arrangement, HSet};
use crate::budget::{Budget, Meter};
use crate::error::{CsaError, Result};
use crate::exactlin::Span;
use crate::graphs::{parse_family, Graph};
use crate::lattice::IntersectionLattice;
use crate::poly::IntPolynomial;
use crate::verdict::{BudgetReport, Verdict};

/// Ordered blocks of hyperplane indices.
pub type Partition = Vec<Vec<usize>>;

fn block_masks(a: &Arrangement, pi: &[Vec<usize>]) -> Result<Vec<HSet>> {
    let mut seen: HSet = 0;
    let mut out = Vec::with_capacity(pi.len());
    for b in pi {
        if b.is_empty() {
            return Err(CsaError::NotAPartition("empty block".into()));
        }
        let mut m: HSet = 0;
        for &h in b {
            if h >= a.len() || (seen | m) >> h & 1 == 1 {
                return Err(CsaError::NotAPartition(format!("hyperplane {h} repeated or out of range")));
            }
            m |= bit(h);
        }
        seen |= m;
        out.push(m);
    }
    if seen != a.all() {
        return Err(CsaError::NotAPartition("blocks do not cover the arrangement".into()));
    }
    Ok(out)
}

/// A transversal that is linearly dependent, if any.
fn dependent_transversal(a: &Arrangement, blocks: &[HSet]) -> Option<Vec<usize>> {
    let mut order: Vec<HSet> = blocks.to_vec();
    order.sort_by_key(|b| b.count_ones());
    fn dfs(a: &Arrangement, order: &[HSet], span: &Span, chosen: &mut Vec<usize>) -> Option<Vec<usize>> {
        let Some((&first, rest)) = order.split_first() else {
            return None;
        };
        for h in bits(first) {
            let mut s = span.clone();
            chosen.push(h);
            if !s.insert(a.normal(h)) {
                return Some(chosen.clone());
            }
            if let Some(w) = dfs(a, rest, &s, chosen) {
                return Some(w);
            }
            chosen.pop();
        }
        None
    }
    dfs(a, &order, &Span::new(a.dim()), &mut Vec::new())
}

/// Every transversal of `π` is linearly independent.
pub fn is_independent(a: &Arrangement, pi: &[Vec<usize>]) -> Result<bool> {
    let blocks = block_masks(a, pi)?;
    Ok(dependent_transversal(a, &blocks).is_none())
}

/// Non-empty blocks `π_i ∩ A_X`, order preserved. `x` is the set of hyperplanes containing the flat.
pub fn induced_partition(a: &Arrangement, pi: &[Vec<usize>], x: HSet) -> Result<Partition> {
    block_masks(a, pi)?;
    if a.closure(x) != x {
        return Err(CsaError::NotAFlat);
    }
    Ok(pi
        .iter()
        .map(|b| b.iter().copied().filter(|&h| x >> h & 1 == 1).collect::<Vec<_>>())
        .filter(|b| !b.is_empty())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NiceCertificate {
    Nice { block_sizes: Vec<usize>, poincare: IntPolynomial },
    BlockCount { blocks: usize, rank: usize },
    /// A flat whose induced partition has no singleton block.
    NoSingleton { flat: Vec<usize> },
    DependentTransversal { hyperplanes: Vec<usize> },
}

fn nice_with_lattice(a: &Arrangement, blocks: &[HSet], lat: &IntersectionLattice) -> NiceCertificate {
    if blocks.len() != lat.rank() {
        return NiceCertificate::BlockCount { blocks: blocks.len(), rank: lat.rank() };
    }
    for f in &lat.flats()[1..] {
        if !blocks.iter().any(|b| (b & f.closed).count_ones() == 1) {
            return NiceCertificate::NoSingleton { flat: f.indices() };
        }
    }
    if let Some(t) = dependent_transversal(a, blocks) {
        return NiceCertificate::DependentTransversal { hyperplanes: t };
    }
    let sizes: Vec<usize> = blocks.iter().map(|b| b.count_ones() as usize).collect();
    let poincare = lat.poincare_polynomial();
    NiceCertificate::Nice { block_sizes: sizes, poincare }
}

/// Factored counts that every nice partition satisfies.
fn consistent(blocks: &[HSet], lat: &IntersectionLattice) -> bool {
    let mut sizes: Vec<u64> = blocks.iter().map(|b| b.count_ones() as u64).collect();
    sizes.sort_unstable();
    lat.poincare_polynomial() == IntPolynomial::from_linear_factors(&sizes)
        && lat.flats().iter().all(|f| blocks.iter().filter(|&&b| b & f.closed != 0).count() == f.rank)
}

pub fn is_nice(a: &Arrangement, pi: &[Vec<usize>]) -> Result<Verdict<NiceCertificate>> {
    let blocks = block_masks(a, pi)?;
    let lat = IntersectionLattice::new(a)?;
    let c = nice_with_lattice(a, &blocks, &lat);
    Ok(match c {
        NiceCertificate::Nice { .. } => {
            assert!(consistent(&blocks, &lat), "nice partition violates the factored counts");
            Verdict::yes(c)
        }
        _ => Verdict::no(c),
    })
}

fn nice_quick(a: &Arrangement, blocks: &[HSet], cap: usize) -> Result<bool> {
    if a.is_empty() {
        return Ok(blocks.is_empty());
    }
    let lat = IntersectionLattice::with_cap(a, cap)?;
    Ok(matches!(nice_with_lattice(a, blocks, &lat), NiceCertificate::Nice { .. }))
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionMap {
    pub restriction: Arrangement,
    /// Index in `A''` of `H ∩ H_0` for each `H ∈ A \ π_1`; `None` on `π_1`.
    pub image: Vec<Option<usize>>,
    pub injective: bool,
    pub surjective: bool,
    /// `ρ(π_i)` for `i = 2..s`.
    pub blocks: Partition,
}

impl RestrictionMap {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }
}

/// `ρ: A \ π_1 → A^{H_0}`, `H ↦ H ∩ H_0`. `h0` must lie in the first block.
pub fn restriction_map(a: &Arrangement, pi: &[Vec<usize>], h0: usize) -> Result<RestrictionMap> {
    let blocks = block_masks(a, pi)?;
    if blocks[0] >> h0 & 1 == 0 {
        return Err(CsaError::InvalidInput(format!("hyperplane {h0} is not in the first block")));
    }
    let (r, map) = a.restriction_with_map(h0)?;
    let mut image = vec![None; a.len()];
    let mut hit = vec![0usize; r.len()];
    for h in bits(a.all() & !blocks[0]) {
        let j = map[h].expect("distinct hyperplanes meet in codimension two");
        image[h] = Some(j);
        hit[j] += 1;
    }
    let injective = hit.iter().all(|&c| c <= 1);
    let surjective = hit.iter().all(|&c| c >= 1);
    let blocks = pi[1..].iter().map(|b| b.iter().map(|&h| image[h].unwrap()).collect()).collect();
    Ok(RestrictionMap { restriction: r, image, injective, surjective, blocks })
}

// ---------------------------------------------------------------------------
// addition steps

/// Outcome of adding `h` to block `target` (or a new block) of `(A_i, π)`, sets over `a`.
struct Step {
    bijective: bool,
    nice: bool,
    restriction_sizes: Vec<usize>,
    restriction_len: usize,
}

/// Blocks are given in slot order; `target` indexes into them, `None` opens a new block at `new_pos`.
fn check_step(a: &Arrangement, added: HSet, blocks: &[HSet], h: usize, target: Option<usize>, cap: usize) -> Result<Step> {
    let sub_set = added | bit(h);
    let sub = a.subarrangement(sub_set);
    let pos = |x: usize| (sub_set & (bit(x) - 1)).count_ones() as usize;
    let (r, map) = sub.restriction_with_map(pos(h))?;
    let first = target.map_or(0, |t| blocks[t]);
    let rest = added & !first;
    let mut hit = vec![0usize; r.len()];
    for g in bits(rest) {
        hit[map[pos(g)].unwrap()] += 1;
    }
    let bijective = hit.iter().all(|&c| c == 1);
    let mut rblocks: Vec<HSet> = Vec::new();
    let mut sizes = Vec::new();
    for (i, &b) in blocks.iter().enumerate() {
        if Some(i) == target {
            continue;
        }
        sizes.push(b.count_ones() as usize);
        rblocks.push(bits(b).fold(0, |m, g| m | bit(map[pos(g)].unwrap())));
    }
    let nice = bijective && nice_quick(&r, &rblocks, cap)?;
    Ok(Step { bijective, nice, restriction_sizes: sizes, restriction_len: r.len() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationRow {
    /// Block sizes of `π'_i` in slot order.
    pub exp_before: Vec<usize>,
    pub hyperplane: usize,
    pub form: Vec<i64>,
    pub slot: usize,
    /// Block sizes of `π''_i` in slot order.
    pub exp_restriction: Vec<usize>,
    pub restriction_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationTable {
    pub rows: Vec<FactorizationRow>,
    pub slots: Vec<usize>,
    pub partition: Partition,
    pub exponents: Vec<usize>,
}

impl FactorizationTable {
    pub fn markdown(&self, first_var: usize) -> String {
        let mut s = String::from("| exp A' | α_H | slot | exp A'' |\n|---|---|---|---|\n");
        for r in &self.rows {
            s.push_str(&format!("| {} | {} | {} | {} |\n", join(&r.exp_before), format_form(&r.form, first_var), r.slot, join(&r.exp_restriction)));
        }
        s.push_str(&format!("| {} | | | |\n", join(&self.exponents)));
        s
    }
}

pub(crate) fn join(v: &[usize]) -> String {
    if v.is_empty() {
        return "∅".into();
    }
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorizationOutcome {
    Table(FactorizationTable),
    Failed { step: usize, hyperplane: usize, bijective: bool, nice_restriction: bool, rows: Vec<FactorizationRow> },
}

/// Replays `script` (hyperplane, slot) from the empty arrangement. Blocks are ordered by slot.
pub fn verify_inductive_factorization(a: &Arrangement, script: &[(usize, usize)]) -> Result<Verdict<FactorizationOutcome>> {
    verify_with_cap(a, script, crate::lattice::DEFAULT_FLAT_CAP)
}

fn verify_with_cap(a: &Arrangement, script: &[(usize, usize)], cap: usize) -> Result<Verdict<FactorizationOutcome>> {
    let mut seen: HSet = 0;
    for &(h, _) in script {
        if h >= a.len() || seen >> h & 1 == 1 {
            return Err(CsaError::InvalidInput(format!("script repeats or misses hyperplane {h}")));
        }
        seen |= bit(h);
    }
    if seen != a.all() {
        return Err(CsaError::InvalidInput("script does not cover the arrangement".into()));
    }
    let mut blocks: BTreeMap<usize, HSet> = BTreeMap::new();
    let mut added: HSet = 0;
    let mut rows = Vec::new();
    for (step, &(h, slot)) in script.iter().enumerate() {
        let slots: Vec<usize> = blocks.keys().copied().collect();
        let masks: Vec<HSet> = blocks.values().copied().collect();
        let target = slots.iter().position(|&s| s == slot);
        let st = check_step(a, added, &masks, h, target, cap)?;
        let row = FactorizationRow {
            exp_before: masks.iter().map(|b| b.count_ones() as usize).collect(),
            hyperplane: h,
            form: a.normal(h).to_vec(),
            slot,
            exp_restriction: st.restriction_sizes,
            restriction_size: st.restriction_len,
        };
        rows.push(row);
        if !st.nice {
            return Ok(Verdict::no(FactorizationOutcome::Failed { step, hyperplane: h, bijective: st.bijective, nice_restriction: st.nice, rows }));
        }
        *blocks.entry(slot).or_insert(0) |= bit(h);
        added |= bit(h);
    }
    let partition: Partition = blocks.values().map(|&b| bits(b).collect()).collect();
    let exponents = partition.iter().map(Vec::len).collect();
    Ok(Verdict::yes(FactorizationOutcome::Table(FactorizationTable { rows, slots: blocks.keys().copied().collect(), partition, exponents })))
}

// ---------------------------------------------------------------------------
// canonical partitions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CanonicalKind {
    /// `λ^0` on the braid arrangement `A_{P_n}`.
    Braid,
    Bn,
    DeltaN1,
    /// The 15-hyperplane ideal of `A_{A_{4,2}}`.
    AGs2N4,
}

impl std::str::FromStr for CanonicalKind {
    type Err = CsaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "braid" | "lambda0" => Ok(CanonicalKind::Braid),
            "bn" => Ok(CanonicalKind::Bn),
            "delta" | "deltan1" => Ok(CanonicalKind::DeltaN1),
            "ags2" | "ags2_n4" => Ok(CanonicalKind::AGs2N4),
            _ => Err(CsaError::Unsupported(format!("unknown partition kind {s}"))),
        }
    }
}

/// Index of the hyperplane with the given normal.
fn idx(a: &Arrangement, normal: &[i64]) -> usize {
    a.index_of(normal).unwrap_or_else(|| panic!("missing hyperplane {normal:?}"))
}

fn sum_form(dim: usize, vars: impl IntoIterator<Item = usize>) -> Vec<i64> {
    let mut v = vec![0; dim];
    for i in vars {
        v[i] += 1;
    }
    v
}

/// `A_{Δ_{n,1}}` in variables `x_0..x_n`: `x_0` is the apex adjacent to `x_1, x_2`.
pub fn delta_arrangement(n: usize) -> Result<Arrangement> {
    if n < 1 {
        return Err(CsaError::InvalidInput("Δ_{n,1} needs n >= 1".into()));
    }
    let mut e = vec![(1, 2)];
    if n >= 2 {
        e.push((1, 3));
    }
    e.extend((2..=n).map(|k| (k, k + 1)));
    build_csg(&Graph::new(n + 1, &e)?)
}

/// Blocks of the canonical `Δ_{m,1}` partition as normals in `dim >= m+1` variables.
fn delta_blocks(m: usize, dim: usize) -> Vec<Vec<Vec<i64>>> {
    let mut out = vec![vec![sum_form(dim, [0, 1])]];
    for k in 2..=m {
        out.push((0..=k).map(|i| sum_form(dim, i..=k)).collect());
    }
    let mut last: Vec<Vec<i64>> = (2..=m).map(|k| sum_form(dim, std::iter::once(0).chain(2..=k))).collect();
    last.push(sum_form(dim, [0]));
    last.push(sum_form(dim, [1]));
    out.push(last);
    out
}

fn braid_blocks(n: usize, dim: usize) -> Vec<Vec<Vec<i64>>> {
    (1..=n).map(|k| (0..k).map(|j| sum_form(dim, j..k)).collect()).collect()
}

fn bn_form(n: usize, k: usize) -> Vec<i64> {
    let mut v = sum_form(n, 0..=k);
    v[0] = 2;
    v
}

pub fn canonical_partition(kind: CanonicalKind, n: usize) -> Result<(Arrangement, Partition)> {
    let to_idx = |a: &Arrangement, bl: Vec<Vec<Vec<i64>>>| bl.into_iter().map(|b| b.iter().map(|v| idx(a, v)).collect()).collect();
    match kind {
        CanonicalKind::Braid => {
            let a = build_csg(&parse_family(&format!("P:{n}"))?)?;
            let p = to_idx(&a, braid_blocks(n, n));
            Ok((a, p))
        }
        CanonicalKind::Bn => {
            let a = bn_arrangement(n)?;
            let mut bl = braid_blocks(n, n);
            for (k, b) in bl.iter_mut().enumerate().skip(1) {
                b.push(bn_form(n, k));
            }
            let p = to_idx(&a, bl);
            Ok((a, p))
        }
        CanonicalKind::DeltaN1 => {
            let a = delta_arrangement(n)?;
            let p = to_idx(&a, delta_blocks(n, n + 1));
            Ok((a, p))
        }
        CanonicalKind::AGs2N4 => {
            let g = parse_family("A:4,2")?;
            let labels: [&[usize]; 15] = [
                &[2], &[1], &[1, 2], &[1, 2, 5], &[3], &[2, 3], &[1, 2, 3], &[5], &[2, 5], &[2, 3, 5], &[2, 3, 4, 5], &[4], &[3, 4], &[2, 3, 4],
                &[1, 2, 3, 4],
            ];
            let ideal: Vec<Vec<usize>> = labels.iter().map(|l| l.to_vec()).collect();
            let a = ideal_subarrangement(&g, &ideal)?;
            let li = |l: &[usize]| a.index_of_label(l).expect("label in ideal");
            let p = vec![
                vec![li(&[2])],
                vec![li(&[1]), li(&[1, 2]), li(&[1, 2, 5])],
                vec![li(&[3]), li(&[2, 3]), li(&[1, 2, 3])],
                vec![li(&[5]), li(&[2, 5]), li(&[2, 3, 5]), li(&[2, 3, 4, 5])],
                vec![li(&[4]), li(&[3, 4]), li(&[2, 3, 4]), li(&[1, 2, 3, 4])],
            ];
            Ok((a, p))
        }
    }
}

// ---------------------------------------------------------------------------
// searches

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorizationSearch {
    Found { script: Vec<(usize, usize)>, table: FactorizationTable },
    /// `π(A,t)` does not split into linear factors.
    PoincareObstruction { poincare: IntPolynomial },
    /// Exhaustive enumeration of partitions with the admissible block sizes found no nice one.
    NoNicePartition { block_sizes: Vec<u64>, candidates: u64 },
    Exhausted { steps: u64 },
    Budget(BudgetReport),
}

struct Dfs<'a> {
    a: &'a Arrangement,
    meter: Meter,
    cap: usize,
    rank: usize,
    failed: HashSet<(HSet, Vec<HSet>)>,
    /// Fixed assignment of hyperplanes to slots, if any.
    fixed: Option<Vec<usize>>,
}

enum Halt {
    Budget,
    Err(CsaError),
}

impl From<CsaError> for Halt {
    fn from(e: CsaError) -> Self {
        match e {
            CsaError::Budget { .. } => Halt::Budget,
            e => Halt::Err(e),
        }
    }
}

impl Dfs<'_> {
    /// Blocks are kept in slot order; slots are the positions at creation, or the fixed slot.
    fn go(&mut self, added: HSet, blocks: &mut Vec<(usize, HSet)>, script: &mut Vec<(usize, usize)>) -> std::result::Result<bool, Halt> {
        if added == self.a.all() {
            return Ok(true);
        }
        let mut key_blocks: Vec<HSet> = blocks.iter().map(|b| b.1).collect();
        key_blocks.sort_unstable();
        let key = (added, key_blocks);
        if self.failed.contains(&key) {
            return Ok(false);
        }
        let masks: Vec<HSet> = blocks.iter().map(|b| b.1).collect();
        for h in bits(self.a.all() & !added) {
            let targets: Vec<(Option<usize>, usize)> = match &self.fixed {
                Some(f) => {
                    let s = f[h];
                    vec![(blocks.iter().position(|b| b.0 == s), s)]
                }
                None => {
                    let mut t: Vec<(Option<usize>, usize)> = (0..blocks.len()).map(|i| (Some(i), blocks[i].0)).collect();
                    if blocks.len() < self.rank {
                        t.push((None, blocks.len()));
                    }
                    t
                }
            };
            for (target, slot) in targets {
                if !self.meter.tick() {
                    return Err(Halt::Budget);
                }
                if !check_step(self.a, added, &masks, h, target, self.cap)?.nice {
                    continue;
                }
                let saved = blocks.clone();
                match target {
                    Some(i) => blocks[i].1 |= bit(h),
                    None => {
                        let p = blocks.iter().position(|b| b.0 > slot).unwrap_or(blocks.len());
                        blocks.insert(p, (slot, bit(h)));
                    }
                }
                script.push((h, slot));
                if self.go(added | bit(h), blocks, script)? {
                    return Ok(true);
                }
                script.pop();
                *blocks = saved;
            }
        }
        self.failed.insert(key);
        Ok(false)
    }
}

/// An addition order verifying `π` as an inductive factorization.
pub fn fixed_partition_order_search(a: &Arrangement, pi: &[Vec<usize>], budget: &Budget) -> Result<Verdict<FactorizationSearch>> {
    block_masks(a, pi)?;
    let mut slot_of = vec![0; a.len()];
    for (s, b) in pi.iter().enumerate() {
        for &h in b {
            slot_of[h] = s;
        }
    }
    let mut d = Dfs { a, meter: Meter::new(budget.steps), cap: budget.flats, rank: a.rank(), failed: HashSet::new(), fixed: Some(slot_of) };
    run_dfs(a, &mut d)
}

fn run_dfs(a: &Arrangement, d: &mut Dfs) -> Result<Verdict<FactorizationSearch>> {
    let mut script = Vec::new();
    match d.go(0, &mut Vec::new(), &mut script) {
        Ok(true) => {
            let v = verify_with_cap(a, &script, d.cap)?;
            match v.certificate {
                FactorizationOutcome::Table(table) if v.status.is_yes() => Ok(Verdict::yes(FactorizationSearch::Found { script, table })),
                _ => Err(CsaError::Unsupported("search produced a script that does not verify".into())),
            }
        }
        Ok(false) => Ok(Verdict::inconclusive(FactorizationSearch::Exhausted { steps: d.meter.used })),
        Err(Halt::Budget) => Ok(Verdict::inconclusive(FactorizationSearch::Budget(BudgetReport {
            what: "steps".into(),
            limit: d.meter.limit,
            used: d.meter.used,
        }))),
        Err(Halt::Err(e)) => Err(e),
    }
}

/// Number of ordered-by-size partitions of `m` hyperplanes into blocks of the given sizes (saturating).
fn partition_count(sizes: &[u64]) -> u128 {
    let mut total: u128 = 1;
    let mut left: u64 = sizes.iter().sum();
    let mut c = sizes.to_vec();
    c.sort_unstable();
    for &s in &c {
        // C(left, s)
        let mut b: u128 = 1;
        for i in 0..s {
            b = b.saturating_mul((left - i) as u128) / (i + 1) as u128;
        }
        total = total.saturating_mul(b);
        left -= s;
    }
    total
}

pub const NICE_ENUMERATION_LIMIT: u128 = 5_000_000;

/// Searches all partitions of `A` whose block sizes are `sizes` for a nice one.
/// `Ok(None)` when the enumeration would exceed the limit.
pub fn find_nice_partition(a: &Arrangement, sizes: &[u64], limit: u128) -> Result<Option<Option<Partition>>> {
    if partition_count(sizes) > limit {
        return Ok(None);
    }
    let lat = IntersectionLattice::new(a)?;
    if sizes.len() != lat.rank() || sizes.iter().sum::<u64>() != a.len() as u64 {
        return Ok(Some(None));
    }
    let lines: Vec<HSet> = lat.rank_level(2).iter().map(|f| f.closed).collect();
    let mut targets = sizes.to_vec();
    targets.sort_unstable();
    let mut blocks = vec![0 as HSet; targets.len()];
    fn rec(a: &Arrangement, lat: &IntersectionLattice, lines: &[HSet], targets: &[u64], blocks: &mut Vec<HSet>, h: usize) -> Option<Partition> {
        if h == a.len() {
            return matches!(nice_with_lattice(a, blocks, lat), NiceCertificate::Nice { .. })
                .then(|| blocks.iter().map(|&b| bits(b).collect()).collect());
        }
        for i in 0..blocks.len() {
            if blocks[i].count_ones() as u64 >= targets[i] {
                continue;
            }
            // interchangeable empty blocks: only the first of equal target size
            if blocks[i] == 0 && (0..i).any(|j| blocks[j] == 0 && targets[j] == targets[i]) {
                continue;
            }
            blocks[i] |= bit(h);
            let done = full_set_below(h + 1);
            let ok = lines.iter().all(|&l| {
                let meets: Vec<u32> = blocks.iter().map(|&b| (b & l).count_ones()).filter(|&c| c > 0).collect();
                if meets.len() > 2 {
                    return false;
                }
                // fully assigned line: two blocks, one meeting it once
                l & !done != 0 || (meets.len() == 2 && meets.contains(&1))
            });
            if ok {
                if let Some(p) = rec(a, lat, lines, targets, blocks, h + 1) {
                    return Some(p);
                }
            }
            blocks[i] &= !bit(h);
        }
        None
    }
    Ok(Some(rec(a, &lat, &lines, &targets, &mut blocks, 0)))
}

fn full_set_below(n: usize) -> HSet {
    crate::arrangement::full_set(n)
}

/// Bottom-up search over addition orders and block assignments.
pub fn inductive_factorization_search(a: &Arrangement, budget: &Budget) -> Result<Verdict<FactorizationSearch>> {
    let lat = IntersectionLattice::with_cap(a, budget.flats)?;
    let poincare = lat.poincare_polynomial();
    let Some(sizes) = poincare.factor_one_plus() else {
        return Ok(Verdict::no(FactorizationSearch::PoincareObstruction { poincare }));
    };
    if let Some(None) = find_nice_partition(a, &sizes, NICE_ENUMERATION_LIMIT)? {
        let candidates = partition_count(&sizes).min(u64::MAX as u128) as u64;
        return Ok(Verdict::no(FactorizationSearch::NoNicePartition { block_sizes: sizes, candidates }));
    }
    let mut d = Dfs { a, meter: Meter::new(budget.steps), cap: budget.flats, rank: lat.rank(), failed: HashSet::new(), fixed: None };
    run_dfs(a, &mut d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csg(s: &str) -> Arrangement {
        build_csg(&parse_family(s).unwrap()).unwrap()
    }

    fn boolean(n: usize) -> Arrangement {
        let v: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        Arrangement::from_normals(n, &v).unwrap()
    }

    #[test]
    fn independence() {
        assert!(is_independent(&boolean(3), &[vec![0], vec![1], vec![2]]).unwrap());
        let p2 = csg("P:2");
        let x1 = p2.index_of(&[1, 0]).unwrap();
        let rest: Vec<usize> = (0..3).filter(|&i| i != x1).collect();
        assert!(is_independent(&p2, &[vec![x1], rest]).unwrap());
        assert!(is_independent(&boolean(2), &[vec![0, 1]]).unwrap());
        let c3 = csg("C:3");
        assert!(!is_independent(&c3, &[vec![0, 1, 2], vec![3, 4, 5], vec![6]]).unwrap());
    }

    #[test]
    fn induced() {
        let (a, p) = canonical_partition(CanonicalKind::Braid, 3).unwrap();
        assert_eq!(induced_partition(&a, &p, 0).unwrap(), Vec::<Vec<usize>>::new());
        assert_eq!(induced_partition(&a, &p, a.all()).unwrap(), p);
        let lat = IntersectionLattice::new(&a).unwrap();
        for f in lat.rank_level(2) {
            let ip = induced_partition(&a, &p, f.closed).unwrap();
            let singles = ip.iter().filter(|b| b.len() == 1).count();
            assert!(singles >= 1, "{ip:?}");
            if f.size() > 2 {
                assert_eq!(singles, 1, "{ip:?}");
            }
        }
        assert!(matches!(induced_partition(&a, &p, 0b11), Err(CsaError::NotAFlat)));
    }

    #[test]
    fn canonical_sizes() {
        let sizes = |k, n| canonical_partition(k, n).unwrap().1.iter().map(Vec::len).collect::<Vec<_>>();
        assert_eq!(sizes(CanonicalKind::Bn, 3), vec![1, 3, 4]);
        assert_eq!(sizes(CanonicalKind::DeltaN1, 2), vec![1, 3, 3]);
        assert_eq!(sizes(CanonicalKind::AGs2N4, 4), vec![1, 3, 3, 4, 4]);
        assert_eq!(sizes(CanonicalKind::Braid, 4), vec![1, 2, 3, 4]);
    }

    #[test]
    fn nice_partitions() {
        for n in 2..=5 {
            for kind in [CanonicalKind::Braid, CanonicalKind::Bn, CanonicalKind::DeltaN1] {
                let (a, p) = canonical_partition(kind, n).unwrap();
                assert!(is_nice(&a, &p).unwrap().status.is_yes(), "{kind:?} {n}");
            }
        }
        let (a, p) = canonical_partition(CanonicalKind::AGs2N4, 4).unwrap();
        assert!(is_nice(&a, &p).unwrap().status.is_yes());
        let c3 = csg("C:3");
        let v = is_nice(&c3, &[vec![0, 1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert!(matches!(v.certificate, NiceCertificate::BlockCount { .. }));
    }

    #[test]
    fn restriction_maps() {
        let b = boolean(2);
        let m = restriction_map(&b, &[vec![0], vec![1]], 0).unwrap();
        assert!(m.bijective());
        assert!(restriction_map(&b, &[vec![0], vec![1]], 1).is_err());
        let (a, p) = canonical_partition(CanonicalKind::DeltaN1, 4).unwrap();
        let h = a.index_of(&[1, 0, 1, 1, 1]).unwrap();
        let mut q = p.clone();
        let last = q.pop().unwrap();
        q.insert(0, last);
        let m = restriction_map(&a, &q, h).unwrap();
        assert!(m.bijective());
        assert!(is_nice(&m.restriction, &m.blocks).unwrap().status.is_yes());
        // a one-element first block is too small in the braid arrangement
        let (a, p) = canonical_partition(CanonicalKind::Braid, 3).unwrap();
        let mut q = p.clone();
        let top = q[2].pop().unwrap();
        q.insert(0, vec![top]);
        assert!(!restriction_map(&a, &q, top).unwrap().bijective());
    }

    #[test]
    fn searches() {
        let v = inductive_factorization_search(&csg("P:3"), &Budget::default()).unwrap();
        assert!(v.status.is_yes());
        let v = inductive_factorization_search(&csg("C:4"), &Budget::default()).unwrap();
        assert!(matches!(v.certificate, FactorizationSearch::NoNicePartition { .. }), "{v:?}");
        let v = inductive_factorization_search(&csg("K:4"), &Budget::default()).unwrap();
        assert!(v.status.is_no());
        let (a, p) = canonical_partition(CanonicalKind::AGs2N4, 4).unwrap();
        let v = fixed_partition_order_search(&a, &p, &Budget::default()).unwrap();
        assert!(v.status.is_yes());
    }

    #[test]
    fn bad_scripts() {
        let a = boolean(2);
        assert!(verify_inductive_factorization(&a, &[(0, 0)]).is_err());
        let v = verify_inductive_factorization(&a, &[(0, 0), (1, 0)]).unwrap();
        assert!(v.status.is_no());
        let v = verify_inductive_factorization(&a, &[(0, 0), (1, 1)]).unwrap();
        assert!(v.status.is_yes());
    }
}
