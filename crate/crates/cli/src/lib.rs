//! The `csa` command line: argument parsing, analyses and rendering.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use csa_core::arrangement::{build_csg, csg_power, format_form, ideal_subarrangement, Arrangement};
use csa_core::factorization::{inductive_factorization_search, FactorizationSearch};
use csa_core::formality::{generation_closure, generator_set, lc_basis_certify, projective_uniqueness_certificate, GenerationMode};
use csa_core::freeness::{by_size_partition, exponent_candidates, free_verdict_csg, inductive_freeness_search, verify_mat_partition, FreeCertificate, InductionOutcome};
use csa_core::graphs::{classify_family, parse_family};
use csa_core::lattice::IntersectionLattice;
use csa_core::regions::{base_chamber, chambers, chambers_csv, poset_of_regions, zeta_factorization_check};
use csa_core::tables::{bn_table, delta_table, ReproducedTable};
use csa_core::topology::{kpi1_label, kpi1_verdict};
use csa_core::{Budget, CsaError, Graph, IntPolynomial, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Md,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableTarget {
    Bn,
    Delta,
}

#[derive(Parser, Debug)]
#[command(name = "csa", version, about = "Connected subgraph arrangements: freeness, factorizations, chambers, asphericity")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub out: OutFormat,
    /// Budget overrides `flats=N,chambers=N,steps=N`, applied after CSA_BUDGET.
    #[arg(long, global = true)]
    pub budget: Option<String>,
    #[command(subcommand)]
    pub cmd: Command,
}

/// Graphs are family specs (`P:4`, `C:5`, `A:4,2`, `T:3,1`, `K:4`, `G1`) or JSON files
/// of the form `{"n": 4, "edges": [[1,2],[2,3]]}`.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit the arrangement A_G.
    Build { graph: String },
    /// Characteristic and Poincaré polynomials, supersolvable chain.
    Lattice { graph: String },
    /// Freeness verdict and induction table.
    Free {
        graph: String,
        /// Skip the inductive freeness search.
        #[arg(long)]
        no_table: bool,
    },
    /// Nice partition and inductive factorization search.
    Factor { graph: String },
    /// Verify the by-size MAT partition.
    Mat { graph: String },
    /// lc-basis and projective uniqueness certificates.
    Formal { graph: String },
    /// Chambers, ζ and the product identity.
    Regions {
        graph: String,
        #[arg(long)]
        check_product: bool,
        /// Try every chamber as base when the canonical one fails.
        #[arg(long)]
        search_bases: bool,
    },
    /// Three-valued asphericity verdict.
    Kpi1 { graph: String },
    /// A_G^s or the ideal arrangement A_I.
    Ideal {
        graph: String,
        #[arg(long, conflicts_with = "sets")]
        s: Option<usize>,
        /// Vertex sets separated by `;`, vertices by `,`.
        #[arg(long)]
        sets: Option<String>,
        /// Also run the inductive factorization search.
        #[arg(long)]
        factor: bool,
    },
    /// Every analysis within budget, as one document.
    Report { graph: String },
    /// Regenerate the induction tables of factorizations.
    ReproduceTables {
        #[arg(long, value_enum)]
        target: Option<TableTarget>,
        #[arg(long)]
        n: Option<usize>,
    },
}

/// What a command produced.
pub struct Rendered {
    pub json: Value,
    pub md: String,
    pub csv: Option<String>,
    pub exit: i32,
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::CertifiedYes => "YES",
        Status::CertifiedNo => "NO",
        Status::Inconclusive => "INCONCLUSIVE",
    }
}

pub fn load_graph(spec: &str) -> Result<Graph, CsaError> {
    let g = if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| CsaError::InvalidInput(format!("{spec}: {e}")))?;
        serde_json::from_str(&text).map_err(|e| CsaError::InvalidInput(format!("{spec}: {e}")))?
    } else {
        parse_family(spec)?
    };
    if !g.is_connected() {
        return Err(CsaError::Disconnected);
    }
    Ok(g)
}

fn exps_string(e: &[u64]) -> String {
    e.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn q_string(e: &[u64]) -> String {
    e.iter()
        .filter(|&&x| x > 0)
        .map(|&x| {
            let terms: Vec<String> = (1..=x).map(|k| if k == 1 { "t".to_string() } else { format!("t^{k}") }).collect();
            format!("(1+{})", terms.join("+"))
        })
        .collect()
}

fn forms(a: &Arrangement) -> Vec<String> {
    a.normals().map(|v| format_form(v, 1)).collect()
}

fn label_string(l: &Option<Vec<usize>>) -> String {
    l.as_ref().map(|l| l.iter().map(usize::to_string).collect::<String>()).unwrap_or_default()
}

fn build(g: &Graph) -> Result<Rendered, CsaError> {
    let a = build_csg(g)?;
    let mut md = format!("# A_G for {}\n\n{} hyperplanes in {} variables, rank {}.\n\n", describe(g), a.len(), a.dim(), a.rank());
    let mut csv = String::from("index,label,form\n");
    for (i, h) in a.hyperplanes().iter().enumerate() {
        md.push_str(&format!("- H_{{{}}}: {}\n", label_string(&h.label), format_form(&h.normal, 1)));
        csv.push_str(&format!("{i},{},{}\n", label_string(&h.label), format_form(&h.normal, 1)));
    }
    let json = json!({ "graph": g, "family": describe(g), "size": a.len(), "rank": a.rank(), "arrangement": a, "forms": forms(&a) });
    Ok(Rendered { json, md, csv: Some(csv), exit: EXIT_OK })
}

fn describe(g: &Graph) -> String {
    classify_family(g).map(|t| t.to_string()).unwrap_or_else(|_| "disconnected".into())
}

fn lattice(a: &Arrangement, budget: &Budget) -> Result<Rendered, CsaError> {
    let l = IntersectionLattice::with_cap(a, budget.flats)?;
    let chi = l.characteristic_polynomial();
    let pi = l.poincare_polynomial();
    let factors = pi.factor_one_plus();
    let chain = l.supersolvable_chain();
    let per_rank: Vec<usize> = (0..=l.rank()).map(|r| l.rank_level(r).len()).collect();
    let mut md = format!("χ(t) = {chi}\n\nπ(t) = {pi}\n\n");
    if let Some(f) = &factors {
        md.push_str(&format!("π(t) = {}\n\n", IntPolynomial::factored_string(f)));
    }
    md.push_str(&format!("Flats per rank: {}\n\n", per_rank.iter().map(usize::to_string).collect::<Vec<_>>().join(",")));
    match &chain {
        Some(c) => md.push_str(&format!("Supersolvable: YES, chain increments {}\n", exps_string(&l.chain_increments(c)))),
        None => md.push_str("Supersolvable: NO\n"),
    }
    let mut csv = String::from("rank,flats\n");
    for (r, n) in per_rank.iter().enumerate() {
        csv.push_str(&format!("{r},{n}\n"));
    }
    let json = json!({
        "size": a.len(),
        "rank": l.rank(),
        "flats": l.len(),
        "flats_per_rank": per_rank,
        "characteristic_polynomial": chi,
        "characteristic_polynomial_text": chi.to_string(),
        "poincare_polynomial": pi,
        "poincare_factors": factors,
        "supersolvable": chain.is_some(),
        "supersolvable_chain": chain.as_ref().map(|c| c.iter().map(|&i| l.flats()[i].indices()).collect::<Vec<_>>()),
        "chain_increments": chain.as_ref().map(|c| l.chain_increments(c)),
    });
    Ok(Rendered { json, md, csv: Some(csv), exit: EXIT_OK })
}

fn free(g: &Graph, table: bool, budget: &Budget) -> Result<Rendered, CsaError> {
    let v = free_verdict_csg(g)?;
    let mut status = v.status;
    let mut exit = status.exit_code();
    let exps = match &v.certificate {
        FreeCertificate::Family { exponents, .. } => Some(exponents.clone()),
        _ => None,
    };
    let mut md = format!("free: {}", status_word(status));
    if let Some(e) = &exps {
        md.push_str(&format!(", exponents {}", exps_string(e)));
    }
    md.push('\n');
    let mut induction = Value::Null;
    if table {
        let a = build_csg(g)?;
        let s = inductive_freeness_search(&a, budget)?;
        match &s.certificate {
            InductionOutcome::Table(c) => {
                md.push_str(&format!("\nInductively free, exponents {}:\n\n{}", exps_string(&c.exponents()), c.markdown()));
            }
            InductionOutcome::Budget(_) if !status.is_yes() && !status.is_no() => exit = EXIT_BUDGET,
            _ => {}
        }
        if !status.is_yes() && !status.is_no() {
            status = s.status;
            if exit != EXIT_BUDGET {
                exit = status.exit_code();
            }
        }
        induction = json!({ "status": s.status, "certificate": s.certificate });
    }
    let json = json!({ "verdict": status_word(status), "status": status, "exponents": exps, "certificate": v.certificate, "induction": induction });
    Ok(Rendered { json, md, csv: None, exit })
}

fn factor(a: &Arrangement, budget: &Budget) -> Result<Rendered, CsaError> {
    let v = inductive_factorization_search(a, budget)?;
    let mut exit = v.status.exit_code();
    let mut md = format!("inductively factored: {}\n", status_word(v.status));
    match &v.certificate {
        FactorizationSearch::Found { table, .. } => {
            md.push_str(&format!("\nNice partition block sizes {}:\n\n{}", exps_string(&table.exponents.iter().map(|&x| x as u64).collect::<Vec<_>>()), table.markdown(1)));
        }
        FactorizationSearch::Budget(_) => exit = EXIT_BUDGET,
        _ => {}
    }
    let json = json!({ "verdict": status_word(v.status), "status": v.status, "certificate": v.certificate });
    Ok(Rendered { json, md, csv: None, exit })
}

fn mat(a: &Arrangement) -> Result<Rendered, CsaError> {
    let blocks = by_size_partition(a);
    let v = verify_mat_partition(a, &blocks)?;
    let sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
    let md = format!(
        "MAT partition by label size: {}\nblock sizes {}\n",
        status_word(v.status),
        sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    );
    let json = json!({ "verdict": status_word(v.status), "status": v.status, "blocks": blocks, "block_sizes": sizes, "certificate": v.certificate });
    Ok(Rendered { json, md, csv: None, exit: v.status.exit_code() })
}

fn formal(g: &Graph, budget: &Budget) -> Result<Rendered, CsaError> {
    let a = build_csg(g)?;
    let lc = lc_basis_certify(&a, budget)?;
    let pu = projective_uniqueness_certificate(g)?;
    let gen = generation_closure(&a, generator_set(&a), GenerationMode::Pair, budget)?;
    let generated = gen.result().len() == a.len();
    let mut md = format!(
        "lc-basis: {}\nprojective uniqueness: {} ({} witnesses)\ngeneration closure of S: {} of {} hyperplanes\n",
        status_word(lc.status),
        if pu.verified { "VERIFIED" } else { "FAILED" },
        pu.entries.len(),
        gen.result().len(),
        a.len()
    );
    let mut csv = String::from("label,dim_x,dim_y,dim_meet,dim_sum,contained,verified\n");
    if !pu.entries.is_empty() {
        md.push_str("\n| H_I | dim X | dim Y | dim X∩Y | dim X+Y | X+Y ⊆ H_I |\n|---|---|---|---|---|---|\n");
    }
    for e in &pu.entries {
        let l: String = e.label.iter().map(usize::to_string).collect();
        md.push_str(&format!("| {l} | {} | {} | {} | {} | {} |\n", e.dim_x, e.dim_y, e.dim_meet, e.dim_sum, e.contained));
        csv.push_str(&format!("{l},{},{},{},{},{},{}\n", e.dim_x, e.dim_y, e.dim_meet, e.dim_sum, e.contained, e.verified));
    }
    let ok = lc.status.is_yes() && pu.verified && generated;
    let json = json!({
        "verdict": if ok { "YES" } else { "INCONCLUSIVE" },
        "lc_basis": { "status": lc.status, "certificate": lc.certificate },
        "projective_uniqueness": pu,
        "generation_closure": gen,
    });
    Ok(Rendered { json, md, csv: Some(csv), exit: if ok { EXIT_OK } else { EXIT_INCONCLUSIVE } })
}

fn regions(g: &Graph, check_product: bool, search_bases: bool, budget: &Budget) -> Result<Rendered, CsaError> {
    let a = build_csg(g)?;
    let cg = chambers(&a, budget)?;
    let poset = poset_of_regions(&cg, &base_chamber(&a))?;
    let zeta = poset.zeta();
    let mut md = format!("chambers: {}\nζ(t) = {zeta}\n", cg.chambers.len());
    let mut json = json!({ "chambers": cg.chambers.len(), "zeta": zeta, "zeta_text": zeta.to_string(), "base": poset.base.sign_string(a.len()) });
    let mut exit = EXIT_OK;
    if check_product {
        let v = free_verdict_csg(g)?;
        let FreeCertificate::Family { exponents, .. } = &v.certificate else {
            return Err(CsaError::InvalidInput(format!("{} is not in a free family; no exponents to check", describe(g))));
        };
        let z = zeta_factorization_check(&a, exponents, search_bases, budget)?;
        md.push_str(&format!("product identity: {}, ζ = {}\n", status_word(z.status), q_string(exponents)));
        if let Some(b) = &z.certificate.base {
            md.push_str(&format!("base chamber {b}\n"));
        }
        json["product"] = json!({ "verdict": status_word(z.status), "status": z.status, "exponents": exponents, "factored": q_string(exponents), "certificate": z.certificate });
        exit = z.status.exit_code();
    }
    Ok(Rendered { json, md, csv: Some(chambers_csv(&a, &poset)), exit })
}

fn kpi1(g: &Graph, budget: &Budget) -> Result<Rendered, CsaError> {
    let v = kpi1_verdict(g, budget)?;
    let label = kpi1_label(v.status);
    let md = format!("K(π,1): {label}\n");
    let json = json!({ "verdict": label, "status": v.status, "certificate": v.certificate });
    Ok(Rendered { json, md, csv: None, exit: v.status.exit_code() })
}

fn parse_sets(s: &str) -> Result<Vec<Vec<usize>>, CsaError> {
    s.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| CsaError::InvalidInput(format!("bad vertex {x:?}"))))
                .collect()
        })
        .collect()
}

fn ideal(g: &Graph, s: Option<usize>, sets: Option<&str>, run_factor: bool, budget: &Budget) -> Result<Rendered, CsaError> {
    let a = match (s, sets) {
        (Some(s), None) => csg_power(g, s)?,
        (None, Some(sets)) => ideal_subarrangement(g, &parse_sets(sets)?)?,
        _ => return Err(CsaError::InvalidInput("give exactly one of --s or --sets".into())),
    };
    let candidates = exponent_candidates(&a)?;
    let blocks = by_size_partition(&a);
    let m = verify_mat_partition(&a, &blocks)?;
    let l = IntersectionLattice::with_cap(&a, budget.flats)?;
    let chain = l.supersolvable_chain();
    let mut md = format!(
        "{} hyperplanes, rank {}\nexponent candidates: {}\nMAT partition by label size: {}\nsupersolvable: {}\n",
        a.len(),
        a.rank(),
        candidates.as_deref().map(exps_string).unwrap_or_else(|| "none".into()),
        status_word(m.status),
        if chain.is_some() { "YES" } else { "NO" }
    );
    let mut json = json!({
        "size": a.len(),
        "rank": a.rank(),
        "forms": forms(&a),
        "exponent_candidates": candidates,
        "mat": { "status": m.status, "certificate": m.certificate },
        "supersolvable": chain.is_some(),
        "chain_increments": chain.as_ref().map(|c| l.chain_increments(c)),
    });
    let mut exit = m.status.exit_code();
    if run_factor {
        let f = factor(&a, budget)?;
        md.push_str(&f.md);
        json["factorization"] = f.json;
        if f.exit == EXIT_BUDGET {
            exit = EXIT_BUDGET;
        }
    }
    Ok(Rendered { json, md, csv: None, exit })
}

fn report(g: &Graph, budget: &Budget) -> Result<Rendered, CsaError> {
    let a = build_csg(g)?;
    let mut sections = serde_json::Map::new();
    let mut timings = serde_json::Map::new();
    let mut md = format!("# Report for {}\n\n", describe(g));
    let mut run = |name: &str, f: &dyn Fn() -> Result<Rendered, CsaError>| {
        let t = Instant::now();
        let v = match f() {
            Ok(r) => {
                md.push_str(&format!("## {name}\n\n{}\n", r.md));
                r.json
            }
            Err(e) => {
                md.push_str(&format!("## {name}\n\nskipped: {e}\n\n"));
                json!({ "skipped": e.to_string() })
            }
        };
        sections.insert(name.to_string(), v);
        timings.insert(name.to_string(), json!(t.elapsed().as_millis() as u64));
    };
    run("build", &|| build(g));
    run("lattice", &|| lattice(&a, budget));
    run("free", &|| free(g, true, budget));
    run("factor", &|| factor(&a, budget));
    run("mat", &|| mat(&a));
    run("formal", &|| formal(g, budget));
    run("regions", &|| regions(g, true, false, budget));
    run("kpi1", &|| kpi1(g, budget));
    let json = json!({ "graph": g, "family": describe(g), "budget": budget, "analyses": sections, "timings_ms": timings });
    Ok(Rendered { json, md, csv: None, exit: EXIT_OK })
}

/// All requested tables, verified while they are generated.
pub fn reproduce(target: Option<TableTarget>, n: Option<usize>) -> Result<Vec<ReproducedTable>, CsaError> {
    let mut out = Vec::new();
    let bn = |n: usize| if (2..=7).contains(&n) { bn_table(n) } else { Err(CsaError::InvalidInput(format!("B_n tables need 2 <= n <= 7, got {n}"))) };
    let de = |n: usize| if (2..=6).contains(&n) { delta_table(n) } else { Err(CsaError::InvalidInput(format!("Δ tables need 2 <= n <= 6, got {n}"))) };
    match (target, n) {
        (Some(TableTarget::Bn), Some(n)) => out.push(bn(n)?),
        (Some(TableTarget::Delta), Some(n)) => out.push(de(n)?),
        (Some(TableTarget::Bn), None) => out.extend((2..=7).map(bn).collect::<Result<Vec<_>, _>>()?),
        (Some(TableTarget::Delta), None) => out.extend((2..=6).map(de).collect::<Result<Vec<_>, _>>()?),
        (None, None) => {
            out.extend((2..=7).map(bn).collect::<Result<Vec<_>, _>>()?);
            out.extend((2..=6).map(de).collect::<Result<Vec<_>, _>>()?);
        }
        (None, Some(_)) => return Err(CsaError::InvalidInput("--n needs --target".into())),
    }
    Ok(out)
}

fn tables(target: Option<TableTarget>, n: Option<usize>) -> Result<Rendered, CsaError> {
    let ts = reproduce(target, n)?;
    let md = ts.iter().map(|t| t.markdown.as_str()).collect::<Vec<_>>().join("\n");
    let json = Value::Array(
        ts.iter()
            .map(|t| {
                json!({
                    "title": t.title,
                    "exponents": t.table.exponents,
                    "steps": t.script.len(),
                    "rows": t.table.rows[t.tail_start..],
                    "markdown": t.markdown,
                })
            })
            .collect(),
    );
    Ok(Rendered { json, md, csv: None, exit: EXIT_OK })
}

fn budget_from(cli: &Cli) -> Result<Budget, CsaError> {
    let b = Budget::from_env()?;
    match &cli.budget {
        Some(s) => b.with_overrides(s),
        None => Ok(b),
    }
}

fn dispatch(cli: &Cli) -> Result<Rendered, CsaError> {
    let budget = budget_from(cli)?;
    match &cli.cmd {
        Command::Build { graph } => build(&load_graph(graph)?),
        Command::Lattice { graph } => lattice(&build_csg(&load_graph(graph)?)?, &budget),
        Command::Free { graph, no_table } => free(&load_graph(graph)?, !no_table, &budget),
        Command::Factor { graph } => factor(&build_csg(&load_graph(graph)?)?, &budget),
        Command::Mat { graph } => mat(&build_csg(&load_graph(graph)?)?),
        Command::Formal { graph } => formal(&load_graph(graph)?, &budget),
        Command::Regions { graph, check_product, search_bases } => regions(&load_graph(graph)?, *check_product, *search_bases, &budget),
        Command::Kpi1 { graph } => kpi1(&load_graph(graph)?, &budget),
        Command::Ideal { graph, s, sets, factor } => ideal(&load_graph(graph)?, *s, sets.as_deref(), *factor, &budget),
        Command::Report { graph } => report(&load_graph(graph)?, &budget),
        Command::ReproduceTables { target, n } => tables(*target, *n),
    }
}

/// Runs one invocation and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(r) => {
            let text = match cli.out {
                OutFormat::Json => serde_json::to_string_pretty(&r.json).expect("values serialize") + "\n",
                OutFormat::Md => r.md,
                OutFormat::Csv => match r.csv {
                    Some(c) => c,
                    None => {
                        let _ = writeln!(err, "csv output is not available for this command");
                        return EXIT_INPUT;
                    }
                },
            };
            let _ = out.write_all(text.as_bytes());
            r.exit
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                CsaError::Budget { .. } => EXIT_BUDGET,
                _ => EXIT_INPUT,
            }
        }
    }
}
