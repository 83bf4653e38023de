//! DIMACS CNF text with a variable legend in comment lines.
//!
//! ```text
//! c params {"identity":"3; 0-1,0-2,1-2","kappa":3,...}
//! c x id=0 w=0,1 L=1 t=0 j=1
//! c p w=0,1 var=1
//! c q w=0,1 L=1 m=1 i=0 var=1129
//! p cnf 1152 18472
//! -1 -2 48 0
//! ```

use std::fmt::Write as _;

use super::{CnfInstance, Layout, PropVar, SatError};
use crate::statement::StatementParams;

/// Plain DIMACS: optional comment lines, header, one clause per line.
pub fn write_cnf(num_vars: usize, clauses: &[Vec<i32>], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("c ");
        out.push_str(c);
        out.push('\n');
    }
    let _ = writeln!(out, "p cnf {num_vars} {}", clauses.len());
    for clause in clauses {
        for lit in clause {
            let _ = write!(out, "{lit} ");
        }
        out.push_str("0\n");
    }
    out
}

/// Header variable count, clauses, and numbered comment lines (without the `c `).
pub type RawCnf = (usize, Vec<Vec<i32>>, Vec<(usize, String)>);

pub fn read_cnf(text: &str) -> Result<RawCnf, SatError> {
    let err = |line: usize, message: String| SatError::Dimacs { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut comments = Vec::new();
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed == "%" {
            continue;
        }
        if trimmed == "c" || trimmed.starts_with("c ") {
            comments.push((line, trimmed.get(2..).unwrap_or("").to_string()));
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(err(line, "second header".into()));
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(err(line, format!("expected 'p cnf V C', got {trimmed:?}")));
            }
            let v = parts[2].parse().map_err(|_| err(line, "bad variable count".into()))?;
            let c = parts[3].parse().map_err(|_| err(line, "bad clause count".into()))?;
            header = Some((v, c));
            continue;
        }
        let (vars, _) = header.ok_or_else(|| err(line, "clause before header".into()))?;
        for tok in trimmed.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| err(line, format!("bad literal {tok:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > vars {
                    return Err(err(line, format!("literal {lit} exceeds {vars} variables")));
                }
                current.push(lit);
            }
        }
    }
    let (vars, count) = header.ok_or_else(|| err(last_line, "missing header".into()))?;
    if !current.is_empty() {
        return Err(err(last_line, "last clause is not terminated by 0".into()));
    }
    if clauses.len() != count {
        return Err(err(
            last_line,
            format!("header announces {count} clauses, found {}", clauses.len()),
        ));
    }
    Ok((vars, clauses, comments))
}

/// DIMACS text of an instance; the legend lets [`parse_dimacs`] rebuild it.
pub fn export_dimacs(c: &CnfInstance) -> String {
    let layout = c.layout();
    let mut comments = vec![format!(
        "params {}",
        serde_json::to_string(c.params()).expect("params serialize")
    )];
    for id in 0..layout.pool_len {
        let x = layout.pool_var(id);
        comments.push(format!(
            "x id={id} w={},{} L={} t={} j={}",
            x.w.0, x.w.1, x.level, x.tuple, x.j
        ));
    }
    for v in 1..=layout.num_vars() as i32 {
        let pv = layout.describe(v).expect("numbered variable");
        comments.push(format!("{pv} var={v}"));
    }
    write_cnf(c.num_vars(), c.clauses(), &comments)
}

/// Reads DIMACS text written by [`export_dimacs`]; the legend must agree with
/// the numbering implied by the parameters.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance, SatError> {
    let (vars, clauses, comments) = read_cnf(text)?;
    let err = |line: usize, message: String| SatError::Dimacs { line, message };
    let (pline, json) = comments
        .iter()
        .find_map(|(l, c)| c.strip_prefix("params ").map(|j| (*l, j)))
        .ok_or_else(|| err(1, "missing 'c params' legend line".into()))?;
    let params: StatementParams =
        serde_json::from_str(json).map_err(|e| err(pline, format!("bad params: {e}")))?;
    let layout = Layout::new(&params)?;
    if vars != layout.num_vars() {
        return Err(err(
            0,
            format!("header has {vars} variables, parameters imply {}", layout.num_vars()),
        ));
    }
    for (line, c) in &comments {
        if let Some(rest) = c.strip_prefix("x ") {
            let f = fields(rest);
            let id: usize = field(&f, "id").ok_or_else(|| err(*line, "x line without id".into()))?;
            if id >= layout.pool_len {
                return Err(err(*line, format!("pool id {id} out of range")));
            }
            let x = layout.pool_var(id);
            let expected = format!(
                "id={id} w={},{} L={} t={} j={}",
                x.w.0, x.w.1, x.level, x.tuple, x.j
            );
            if rest.trim() != expected {
                return Err(err(*line, format!("legend disagrees with layout: expected {expected:?}")));
            }
        } else if c.starts_with("p ") || c.starts_with("q ") {
            let f = fields(&c[2..]);
            let var: i32 = field(&f, "var").ok_or_else(|| err(*line, "legend line without var".into()))?;
            let pv = parse_prop_var(c, &f).ok_or_else(|| err(*line, format!("bad legend {c:?}")))?;
            if layout.var(&pv) != Some(var) {
                return Err(err(*line, format!("legend maps {pv} to {var}, layout disagrees")));
            }
        }
    }
    Ok(CnfInstance::from_parts(params, layout, clauses))
}

fn fields(s: &str) -> Vec<(&str, &str)> {
    s.split_whitespace().filter_map(|kv| kv.split_once('=')).collect()
}

fn field<T: std::str::FromStr>(f: &[(&str, &str)], key: &str) -> Option<T> {
    f.iter().find(|(k, _)| *k == key).and_then(|(_, v)| v.parse().ok())
}

fn pair_field(f: &[(&str, &str)]) -> Option<(usize, usize)> {
    let (a, b) = f.iter().find(|(k, _)| *k == "w")?.1.split_once(',')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

fn parse_prop_var(line: &str, f: &[(&str, &str)]) -> Option<PropVar> {
    let (a, b) = pair_field(f)?;
    if line.starts_with("p ") {
        Some(PropVar::P { a, b })
    } else {
        Some(PropVar::Q {
            w: (a, b),
            level: field(f, "L")?,
            m: field(f, "m")?,
            i: field(f, "i")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::Identity;
    use crate::sat::encode;

    #[test]
    fn plain_cnf_text() {
        assert_eq!(write_cnf(3, &[], &[]), "p cnf 3 0\n");
        assert_eq!(write_cnf(1, &[vec![1]], &[]), "p cnf 1 1\n1 0\n");
        let (v, cl, _) = read_cnf("c hi\np cnf 2 2\n1 -2 0\n2\n0\n").unwrap();
        assert_eq!(v, 2);
        assert_eq!(cl, vec![vec![1, -2], vec![2]]);
        assert!(read_cnf("p cnf 1 2\n1 0\n").is_err());
        assert!(read_cnf("p cnf 1 1\n2 0\n").is_err());
        assert!(read_cnf("1 0\n").is_err());
    }

    #[test]
    fn instance_round_trip() {
        let p = StatementParams::uniform(Identity::monochromatic(3), 3, 1, 2, 1).unwrap();
        let c = encode(&p, 2).unwrap();
        let text = export_dimacs(&c);
        assert!(text.lines().next().unwrap().starts_with("c params {"));
        assert!(text.contains("c x id=0 w=0,1 L=1 t=0 j=1\n"));
        assert!(text.contains("c p w=0,1 var=1\n"));
        assert!(text.contains("c q w=0,1 L=1 m=1 i=0 var="));
        let back = parse_dimacs(&text).unwrap();
        assert_eq!(back, c);
        let tampered = text.replacen("c p w=0,1 var=1", "c p w=0,2 var=1", 1);
        assert!(parse_dimacs(&tampered).is_err());
    }
}
