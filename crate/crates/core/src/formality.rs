//! Line closure, lc-bases, generation closure and the projective uniqueness
//! certificate for connected subgraph arrangements.

use serde::Serialize;

use crate::arrangement::{bit, bits, build_csg, Arrangement, HSet};
use crate::budget::{Budget, Meter};
use crate::error::{CsaError, Result};
use crate::exactlin::{Span, Subspace};
use crate::graphs::Graph;
use crate::lattice::IntersectionLattice;
use crate::verdict::Verdict;

/// One hyperplane added during a closure stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Application {
    pub added: usize,
    /// For line closure the two hyperplanes of the pair; for generation closure the
    /// flats (as sets of hyperplanes containing them) whose sum is the new hyperplane.
    pub witness: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureTrace {
    pub stages: Vec<Vec<usize>>,
    /// `applications[i]` produced `stages[i + 1]`.
    pub applications: Vec<Vec<Application>>,
}

impl ClosureTrace {
    pub fn result(&self) -> &[usize] {
        self.stages.last().expect("a trace has a first stage")
    }

    pub fn result_set(&self) -> HSet {
        self.result().iter().fold(0, |m, &i| m | bit(i))
    }
}

fn check_subset(a: &Arrangement, b: HSet) -> Result<()> {
    if b == 0 {
        return Err(CsaError::InvalidInput("the starting set is empty".into()));
    }
    if b & !a.all() != 0 {
        return Err(CsaError::NotInArrangement);
    }
    Ok(())
}

/// Smallest `B' ⊇ B` with `A_{H∩H'} ⊆ B'` for all `H, H' ∈ B'`.
pub fn line_closure(a: &Arrangement, b: HSet) -> Result<ClosureTrace> {
    check_subset(a, b)?;
    let lines = IntersectionLattice::truncated(a, 2, usize::MAX)?;
    let lines: Vec<HSet> = lines.rank_level(2).iter().map(|f| f.closed).collect();
    let mut cur = b;
    let mut trace = ClosureTrace { stages: vec![bits(b).collect()], applications: Vec::new() };
    loop {
        let mut next = cur;
        let mut apps = Vec::new();
        for &l in &lines {
            let hit = l & cur;
            if hit.count_ones() < 2 {
                continue;
            }
            let pair: Vec<usize> = bits(hit).take(2).collect();
            for h in bits(l & !next) {
                apps.push(Application { added: h, witness: pair.iter().map(|&p| vec![p]).collect() });
            }
            next |= l;
        }
        if next == cur {
            return Ok(trace);
        }
        apps.sort_by_key(|x| x.added);
        trace.stages.push(bits(next).collect());
        trace.applications.push(apps);
        cur = next;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LcCertificate {
    pub basis: Option<Vec<usize>>,
    pub trace: Option<ClosureTrace>,
    /// Number of candidate bases examined.
    pub tried: u64,
    /// Whether every `r`-subset was examined.
    pub exhaustive: bool,
}

fn unit_normals(a: &Arrangement) -> HSet {
    (0..a.len()).filter(|&i| a.normal(i).iter().filter(|&&x| x != 0).count() == 1).fold(0, |m, i| m | bit(i))
}

/// Searches for `r` hyperplanes of rank `r` whose line closure is all of `A`:
/// the coordinate hyperplanes first, then `r`-subsets in lexicographic order.
pub fn lc_basis_certify(a: &Arrangement, budget: &Budget) -> Result<Verdict<LcCertificate>> {
    let r = a.rank();
    if a.is_empty() {
        return Ok(Verdict::yes(LcCertificate { basis: Some(Vec::new()), trace: None, tried: 0, exhaustive: true }));
    }
    let mut meter = Meter::new(budget.steps);
    let mut tried = 0;
    let attempt = |s: HSet, tried: &mut u64| -> Result<Option<ClosureTrace>> {
        *tried += 1;
        if a.rank_of_set(s) != r {
            return Ok(None);
        }
        let t = line_closure(a, s)?;
        Ok((t.result_set() == a.all()).then_some(t))
    };
    let coords = unit_normals(a);
    if coords.count_ones() as usize == r {
        if let Some(t) = attempt(coords, &mut tried)? {
            return Ok(Verdict::yes(LcCertificate { basis: Some(bits(coords).collect()), trace: Some(t), tried, exhaustive: false }));
        }
    }
    let m = a.len();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        if !meter.tick() {
            return Ok(Verdict::inconclusive(LcCertificate { basis: None, trace: None, tried, exhaustive: false }));
        }
        let s = idx.iter().fold(0, |acc, &i| acc | bit(i));
        if s != coords {
            if let Some(t) = attempt(s, &mut tried)? {
                return Ok(Verdict::yes(LcCertificate { basis: Some(idx), trace: Some(t), tried, exhaustive: false }));
            }
        }
        // next r-subset
        let mut k = r;
        while k > 0 && idx[k - 1] == m - r + k - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
        for j in k..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(Verdict::inconclusive(LcCertificate { basis: None, trace: None, tried, exhaustive: true }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GenerationMode {
    /// `H` joins when `X + Y = H` for two flats of the current stage.
    Pair,
    /// `H` joins when it is the sum of any family of flats of the current stage.
    Exponential,
}

/// The generation closure `⟨S⟩_A` under the chosen rule.
pub fn generation_closure(a: &Arrangement, s: HSet, mode: GenerationMode, budget: &Budget) -> Result<ClosureTrace> {
    check_subset(a, s)?;
    let mut cur = s;
    let mut trace = ClosureTrace { stages: vec![bits(s).collect()], applications: Vec::new() };
    while cur != a.all() {
        let members: Vec<usize> = bits(cur).collect();
        let lat = IntersectionLattice::with_cap(&a.subarrangement(cur), budget.flats)?;
        // flats as sets of hyperplanes of `a` (only those of the current stage matter)
        let flats: Vec<HSet> = lat.flats().iter().map(|f| bits(f.closed).fold(0, |m, i| m | bit(members[i]))).collect();
        let mut apps = Vec::new();
        for h in bits(a.all() & !cur) {
            // flats inside H: the normal of H lies in the span of the flat's normals
            let mut inside: Vec<HSet> = Vec::new();
            for &f in &flats {
                if f == 0 {
                    continue;
                }
                let mut sp = Span::from_rows(a.dim(), bits(f).map(|i| a.normal(i)));
                if sp.contains(a.normal(h)) {
                    inside.push(f);
                }
            }
            // keep the largest subspaces, i.e. the inclusion-minimal sets
            let minimal: Vec<HSet> = inside.iter().copied().filter(|&f| !inside.iter().any(|&g| g != f && g & f == g)).collect();
            let witness = match mode {
                GenerationMode::Pair => pair_witness(a, &minimal),
                GenerationMode::Exponential => family_witness(a, &minimal)?,
            };
            if let Some(w) = witness {
                apps.push(Application { added: h, witness: w.iter().map(|&f| bits(f).collect()).collect() });
            }
        }
        if apps.is_empty() {
            break;
        }
        for x in &apps {
            cur |= bit(x.added);
        }
        trace.stages.push(bits(cur).collect());
        trace.applications.push(apps);
    }
    Ok(trace)
}

/// Two flats `X, Y ⊆ H` with `X + Y = H`: dually, the spans of their normals meet in a line.
fn pair_witness(a: &Arrangement, minimal: &[HSet]) -> Option<Vec<HSet>> {
    for (i, &x) in minimal.iter().enumerate() {
        for &y in &minimal[i..] {
            if a.rank_of_set(x) + a.rank_of_set(y) - a.rank_of_set(x | y) == 1 {
                return Some(vec![x, y]);
            }
        }
    }
    None
}

/// The sum of all flats inside `H` is the largest sum available.
fn family_witness(a: &Arrangement, minimal: &[HSet]) -> Result<Option<Vec<HSet>>> {
    let Some((&first, rest)) = minimal.split_first() else { return Ok(None) };
    let mut meet = a.flat_of(first).annihilator();
    for &f in rest {
        meet = meet.intersect(&a.flat_of(f).annihilator())?;
    }
    Ok((meet.dim() == 1).then(|| minimal.to_vec()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessEntry {
    pub label: Vec<usize>,
    pub dim_x: usize,
    pub dim_y: usize,
    pub dim_meet: usize,
    pub dim_sum: usize,
    /// `X + Y ⊆ H_I`.
    pub contained: bool,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessCertificate {
    pub n: usize,
    /// Labels of `S`: the coordinate hyperplanes and `ker(x_1+…+x_n)`.
    pub generators: Vec<Vec<usize>>,
    pub entries: Vec<UniquenessEntry>,
    pub verified: bool,
}

/// For every `H_I ∉ S`, `X = ∩_{i∈I} ker x_i` and `Y = ker(Σx) ∩ ∩_{j∉I} ker x_j`
/// are flats of `L(S)` with `X + Y = H_I`.
pub fn projective_uniqueness_certificate(g: &Graph) -> Result<UniquenessCertificate> {
    if !g.is_connected() {
        return Err(CsaError::Disconnected);
    }
    let n = g.n();
    let a = build_csg(g)?;
    let unit = |i: usize| {
        let mut v = vec![0i64; n];
        v[i - 1] = 1;
        v
    };
    let ones = vec![1i64; n];
    let mut generators: Vec<Vec<usize>> = (1..=n).map(|i| vec![i]).collect();
    if n > 1 {
        generators.push((1..=n).collect());
    }
    let mut entries = Vec::new();
    for h in a.hyperplanes() {
        let label = h.label.clone().expect("CSG hyperplanes are labelled");
        if label.len() == 1 || label.len() == n {
            continue;
        }
        let xs: Vec<Vec<i64>> = label.iter().map(|&i| unit(i)).collect();
        let mut ys: Vec<Vec<i64>> = (1..=n).filter(|j| !label.contains(j)).map(unit).collect();
        ys.push(ones.clone());
        let x = Subspace::kernel_of_all(n, &xs.iter().map(Vec::as_slice).collect::<Vec<_>>());
        let y = Subspace::kernel_of_all(n, &ys.iter().map(Vec::as_slice).collect::<Vec<_>>());
        let meet = x.intersect(&y)?;
        let sum = x.sum(&y)?;
        let contained = sum.inside_kernel(&h.normal);
        let k = label.len();
        let verified = x.dim() == n - k && y.dim() == k - 1 && meet.dim() == 0 && contained && sum.dim() == n - 1;
        entries.push(UniquenessEntry { label, dim_x: x.dim(), dim_y: y.dim(), dim_meet: meet.dim(), dim_sum: sum.dim(), contained, verified });
    }
    let verified = entries.iter().all(|e| e.verified);
    Ok(UniquenessCertificate { n, generators, entries, verified })
}

/// Indices in `A_G` of `S`.
pub fn generator_set(a: &Arrangement) -> HSet {
    let n = a.dim();
    let mut s = 0;
    for i in 1..=n {
        if let Some(j) = a.index_of_label(&[i]) {
            s |= bit(j);
        }
    }
    if let Some(j) = a.index_of_label(&(1..=n).collect::<Vec<_>>()) {
        s |= bit(j);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::parse_family;

    fn csg(s: &str) -> Arrangement {
        build_csg(&parse_family(s).unwrap()).unwrap()
    }

    #[test]
    fn line_closure_small() {
        let a = csg("P:2");
        let t = line_closure(&a, 0b11).unwrap();
        assert_eq!(t.result(), &[0, 1, 2]);
        assert_eq!(t.stages.len(), 2);
        let t = line_closure(&a, a.all()).unwrap();
        assert_eq!(t.stages.len(), 1);
        assert!(line_closure(&a, 0).is_err());
    }

    #[test]
    fn lc_bases() {
        for s in ["P:4", "K:4", "C:5"] {
            let a = csg(s);
            let v = lc_basis_certify(&a, &Budget::default()).unwrap();
            assert!(v.status.is_yes(), "{s}");
            assert_eq!(v.certificate.basis.unwrap(), (0..a.dim()).collect::<Vec<_>>());
        }
        let generic = Arrangement::from_normals(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap();
        let v = lc_basis_certify(&generic, &Budget::default()).unwrap();
        assert!(!v.status.is_yes() && !v.status.is_no());
        assert!(v.certificate.exhaustive);
        assert_eq!(v.certificate.tried, 4);
    }

    #[test]
    fn generation() {
        for (s, total) in [("P:3", 6), ("C:4", 13)] {
            let a = csg(s);
            let gs = generator_set(&a);
            assert_eq!(gs.count_ones() as usize, a.dim() + 1);
            for mode in [GenerationMode::Pair, GenerationMode::Exponential] {
                let t = generation_closure(&a, gs, mode, &Budget::default()).unwrap();
                assert_eq!(t.result().len(), total, "{s}");
            }
        }
        let a = csg("P:3");
        assert_eq!(generation_closure(&a, a.all(), GenerationMode::Pair, &Budget::default()).unwrap().stages.len(), 1);
        assert!(generation_closure(&a, 0, GenerationMode::Pair, &Budget::default()).is_err());
    }

    #[test]
    fn generation_stalls_on_generic() {
        let a = Arrangement::from_normals(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1], vec![1, 2, 3]]).unwrap();
        let t = generation_closure(&a, 0b1111, GenerationMode::Exponential, &Budget::default()).unwrap();
        assert_eq!(t.result().len(), 4);
    }

    #[test]
    fn uniqueness_counts() {
        let c = projective_uniqueness_certificate(&parse_family("T:3,1").unwrap()).unwrap();
        assert!(c.verified);
        assert_eq!(c.entries.len(), 7);
        let c = projective_uniqueness_certificate(&parse_family("K:4").unwrap()).unwrap();
        assert_eq!(c.entries.len(), 10);
        let c = projective_uniqueness_certificate(&parse_family("P:3").unwrap()).unwrap();
        let e = &c.entries[0];
        assert_eq!(e.label, vec![1, 2]);
        assert_eq!((e.dim_x, e.dim_y, e.dim_meet, e.dim_sum), (1, 1, 0, 2));
        let d = Graph::new(3, &[(1, 2)]).unwrap();
        assert_eq!(projective_uniqueness_certificate(&d), Err(CsaError::Disconnected));
    }
}
