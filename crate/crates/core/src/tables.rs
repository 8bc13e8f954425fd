//! Induction tables of factorizations for `B_n` and `A_{Δ_{n,1}}`, regenerated by
//! replaying a full addition script from the empty arrangement.

use serde::Serialize;

use crate::arrangement::{bn_arrangement, format_form, Arrangement};
use crate::error::{CsaError, Result};
use crate::factorization::{delta_arrangement, join, verify_inductive_factorization, FactorizationOutcome, FactorizationRow, FactorizationTable};

/// Slot of the last block in the `Δ` partitions; new blocks are inserted before it.
const LAST_SLOT: usize = 1000;

#[derive(Clone, Debug, Serialize)]
pub struct ReproducedTable {
    pub title: String,
    pub arrangement: Arrangement,
    pub script: Vec<(usize, usize)>,
    /// The verified table for the whole script.
    pub table: FactorizationTable,
    /// First row of the displayed tail.
    pub tail_start: usize,
    pub markdown: String,
}

fn sum_form(dim: usize, vars: impl IntoIterator<Item = usize>) -> Vec<i64> {
    let mut v = vec![0; dim];
    for i in vars {
        v[i] += 1;
    }
    v
}

fn index(a: &Arrangement, v: &[i64]) -> Result<usize> {
    a.index_of(v).ok_or_else(|| CsaError::InvalidInput(format!("hyperplane {} missing", format_form(v, 0))))
}

fn verified(a: &Arrangement, script: &[(usize, usize)]) -> Result<FactorizationTable> {
    let v = verify_inductive_factorization(a, script)?;
    match v.certificate {
        FactorizationOutcome::Table(t) => Ok(t),
        FactorizationOutcome::Failed { step, .. } => Err(CsaError::Unsupported(format!("addition step {step} does not verify"))),
    }
}

struct Line {
    before: String,
    exps: String,
    form: String,
    restriction: String,
    rexps: String,
}

fn render(title: &str, note: &str, lines: &[Line], steps: usize) -> String {
    let mut s = format!("## {title}\n\n{note}\n\n");
    s.push_str("| (A'_i, π'_i) | exp A'_i | α_{H_i} | (A''_i, π''_i) | exp A''_i |\n");
    s.push_str("|---|---|---|---|---|\n");
    for l in lines {
        s.push_str(&format!("| {} | {} | {} | {} | {} |\n", l.before, l.exps, l.form, l.restriction, l.rexps));
    }
    s.push_str(&format!("\nVerified: {steps} addition steps from the empty arrangement.\n"));
    s
}

fn row_line(r: &FactorizationRow, before: String, restriction: String) -> Line {
    Line { before, exps: join(&r.exp_before), form: format_form(&r.form, 0), restriction, rexps: join(&r.exp_restriction) }
}

fn final_line(t: &FactorizationTable, name: String) -> Line {
    Line { before: name, exps: join(&t.exponents), form: String::new(), restriction: String::new(), rexps: String::new() }
}

/// `B_n` for `n >= 2`: from `(A_{P_n}, λ^0)` add `H_k = ker(2x_0+x_1+…+x_k)`, `k = 1..n-1`.
pub fn bn_table(n: usize) -> Result<ReproducedTable> {
    let a = bn_arrangement(n)?;
    let mut script = Vec::new();
    for k in 1..=n {
        for j in (0..k).rev() {
            script.push((index(&a, &sum_form(n, j..k))?, k));
        }
    }
    let tail_start = script.len();
    for k in 1..n {
        let mut v = sum_form(n, 0..=k);
        v[0] = 2;
        script.push((index(&a, &v)?, k + 1));
    }
    let table = verified(&a, &script)?;
    let expected_r: Vec<usize> = std::iter::once(1).chain(3..=n).collect();
    let mut lines = Vec::new();
    for (i, r) in table.rows[tail_start..].iter().enumerate() {
        let mut got = r.exp_restriction.clone();
        got.sort_unstable();
        if got != expected_r {
            return Err(CsaError::Unsupported(format!("row {i}: restriction exponents {got:?}")));
        }
        lines.push(row_line(r, format!("(A_{i}, λ^{i})"), format!("(B_{}, π^{})", n - 1, n - 1)));
    }
    lines.push(final_line(&table, format!("(B_{n}, π^{n})")));
    let title = format!("Induction table of factorizations for B_{n}");
    let note = format!("Variables x0..x{}; x_i is vertex i+1 of the path P_{n}. Exponents are block sizes in block order.", n - 1);
    let markdown = render(&title, &note, &lines, script.len());
    Ok(ReproducedTable { title, arrangement: a, script, table, tail_start, markdown })
}

/// Additions turning `A_{Δ_{m-1,1}}` into `A_{Δ_{m,1}}` inside `dim` variables.
fn delta_tail(a: &Arrangement, m: usize, dim: usize) -> Result<Vec<(usize, usize)>> {
    let mut s = Vec::new();
    for i in 1..=m + 1 {
        s.push((index(a, &sum_form(dim, i - 1..=m))?, m));
    }
    s.push((index(a, &sum_form(dim, std::iter::once(0).chain(2..=m)))?, LAST_SLOT));
    Ok(s)
}

/// `A_{Δ_{n,1}}` for `n >= 2`: from `(A_{Δ_{n-1,1}}, π)` add `x_{i-1}+…+x_n` for
/// `i = 1..n+1` into a new block, then `x_0+x_2+…+x_n` into the last block.
pub fn delta_table(n: usize) -> Result<ReproducedTable> {
    if n < 2 {
        return Err(CsaError::InvalidInput("the Δ table needs n >= 2".into()));
    }
    let dim = n + 1;
    let a = delta_arrangement(n)?;
    let mut script = vec![
        (index(&a, &sum_form(dim, [0, 1]))?, 1),
        (index(&a, &sum_form(dim, [0]))?, LAST_SLOT),
        (index(&a, &sum_form(dim, [1]))?, LAST_SLOT),
    ];
    for m in 2..n {
        script.extend(delta_tail(&a, m, dim)?);
    }
    let tail_start = script.len();
    script.extend(delta_tail(&a, n, dim)?);
    let table = verified(&a, &script)?;
    let prev = format!("(A_{{Δ_{{{},1}}}}, π)", n - 1);
    let mut lines = Vec::new();
    let mut expected: Vec<usize> = std::iter::once(1).chain(3..=n).chain([n]).collect();
    for (i, r) in table.rows[tail_start..].iter().enumerate() {
        if i == n + 1 {
            expected = std::iter::once(1).chain(3..=n + 1).collect();
        }
        let mut got = r.exp_restriction.clone();
        got.sort_unstable();
        if got != expected {
            return Err(CsaError::Unsupported(format!("row {i}: restriction exponents {got:?}")));
        }
        let before = if i == 0 { prev.clone() } else { format!("(A_{i}, λ^{i})") };
        let restriction = if i <= n { prev.clone() } else { format!("(A''_{{Δ_{{{n},1}}}}, π'')") };
        lines.push(row_line(r, before, restriction));
    }
    lines.push(final_line(&table, format!("(A_{{Δ_{{{n},1}}}}, π)")));
    let title = format!("Induction table of factorizations for A_{{Δ_{{{n},1}}}}");
    let note = format!(
        "Variables x0..x{n}; x0 is the apex joined to x1 and x2, and x1..x{n} is the path. Exponents are block sizes in block order."
    );
    let markdown = render(&title, &note, &lines, script.len());
    Ok(ReproducedTable { title, arrangement: a, script, table, tail_start, markdown })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        let t = bn_table(3).unwrap();
        assert_eq!(t.table.exponents, vec![1, 3, 4]);
        assert!(t.markdown.contains("| (A_0, λ^0) | 1,2,3 | 2x0+x1 | (B_2, π^2) | 1,3 |"), "{}", t.markdown);
        let d = delta_table(3).unwrap();
        assert_eq!(d.table.exponents, vec![1, 3, 4, 4]);
        assert_eq!(d.table.rows.len() - d.tail_start, 5);
        assert!(delta_table(1).is_err());
    }
}
