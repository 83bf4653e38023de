//! Models back to witnesses, and witnesses to models.

use std::collections::HashMap;

use super::{CnfInstance, SatError};
use crate::measure::GeneratorId;
use crate::statement::{Witness, WitnessEntry};

/// Literals of a solver's model output. Accepts a bare line of literals or
/// competition output (`s` status line, `v` value lines); `c` lines and `0`
/// terminators are skipped.
pub fn parse_model(text: &str) -> Result<Vec<i32>, SatError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('s') {
            continue;
        }
        let body = t.strip_prefix('v').unwrap_or(t);
        for tok in body.split_whitespace() {
            let lit: i32 = tok
                .parse()
                .map_err(|_| SatError::Model(format!("bad literal {tok:?}")))?;
            if lit != 0 {
                out.push(lit);
            }
        }
    }
    Ok(out)
}

/// Truth values of `1..=num_vars`; unmentioned variables are false.
pub fn model_from_literals(num_vars: usize, literals: &[i32]) -> Result<Vec<bool>, SatError> {
    let mut values: Vec<Option<bool>> = vec![None; num_vars];
    for &lit in literals {
        let v = lit.unsigned_abs() as usize;
        if v == 0 || v > num_vars {
            return Err(SatError::Model(format!("literal {lit} outside 1..={num_vars}")));
        }
        let val = lit > 0;
        match values[v - 1] {
            Some(old) if old != val => {
                return Err(SatError::Model(format!("variable {v} assigned both ways")));
            }
            _ => values[v - 1] = Some(val),
        }
    }
    Ok(values.into_iter().map(|v| v.unwrap_or(false)).collect())
}

/// Checks that every clause has a true literal.
pub fn check_model(c: &CnfInstance, values: &[bool]) -> Result<(), SatError> {
    for (index, clause) in c.clauses().iter().enumerate() {
        let sat = clause
            .iter()
            .any(|&x| values[x.unsigned_abs() as usize - 1] == (x > 0));
        if !sat {
            return Err(SatError::UnsatisfiedClause {
                index,
                clause: clause.clone(),
            });
        }
    }
    Ok(())
}

/// Witness described by a satisfying model. Blocks of the partition become
/// generators `y0, y1, ...` in the order the chosen tuples first mention them.
pub fn decode(model: &[i32], c: &CnfInstance) -> Result<Witness, SatError> {
    let values = model_from_literals(c.num_vars(), model)?;
    check_model(c, &values)?;
    let layout = c.layout();
    let is_true = |v: i32| values[v as usize - 1];
    let mut block_of: HashMap<usize, u32> = HashMap::new();
    let mut chosen: Vec<(usize, Vec<usize>)> = Vec::new();
    // representative of each used pool variable: least id in its class
    let mut reps: HashMap<usize, usize> = HashMap::new();
    for (slot, s) in layout.slots.iter().enumerate() {
        let mut terms = Vec::with_capacity(s.colors);
        for m in 1..=s.colors {
            let picked: Vec<usize> = (0..s.term_set.len())
                .filter(|&i| is_true(layout.q_var(slot, m, i)))
                .collect();
            if picked.len() != 1 {
                return Err(SatError::Model(format!(
                    "w={:?} L={} m={m}: {} terms selected",
                    s.w,
                    s.level,
                    picked.len()
                )));
            }
            terms.push(picked[0]);
        }
        let t = s.tuple_index(&terms);
        for x in s.tuple_vars(t) {
            let rep = (0..x).find(|&y| is_true(layout.p_var(y, x))).unwrap_or(x);
            reps.insert(x, rep);
        }
        chosen.push((slot, terms));
    }
    let mut witness = Witness::new();
    for (slot, terms) in chosen {
        let s = &layout.slots[slot];
        let t = s.tuple_index(&terms);
        let gens = s
            .tuple_vars(t)
            .map(|x| {
                let next = block_of.len() as u32;
                GeneratorId(*block_of.entry(reps[&x]).or_insert(next))
            })
            .collect();
        witness.insert(s.w, s.level, WitnessEntry { gens, terms });
    }
    Ok(witness)
}

/// The valuation induced by a witness: `q` picks the witness's terms, and `p`
/// relates two pool variables exactly when both belong to chosen tuples and
/// carry the same generator. Unchosen tuples are singletons.
pub fn valuation_for_witness(c: &CnfInstance, witness: &Witness) -> Result<Vec<i32>, SatError> {
    let params = c.params();
    let layout = c.layout();
    let mut label: Vec<Option<GeneratorId>> = vec![None; layout.pool_len];
    let mut values = vec![false; c.num_vars()];
    for (slot, s) in layout.slots.iter().enumerate() {
        let e = witness.check_entry(params, s.w, s.level)?;
        if e.terms.iter().any(|&i| i >= s.term_set.len()) {
            return Err(SatError::Witness(format!("term index out of range at {:?}", s.w)));
        }
        for (m, &i) in e.terms.iter().enumerate() {
            values[layout.q_var(slot, m + 1, i) as usize - 1] = true;
        }
        let t = s.tuple_index(&e.terms);
        for (x, &g) in s.tuple_vars(t).zip(&e.gens) {
            label[x] = Some(g);
        }
    }
    if witness.len() != layout.slots.len() {
        return Err(SatError::Witness("witness has entries outside the parameters".into()));
    }
    let used: Vec<usize> = (0..layout.pool_len).filter(|&x| label[x].is_some()).collect();
    for (k, &a) in used.iter().enumerate() {
        for &b in &used[k + 1..] {
            if label[a] == label[b] {
                values[layout.p_var(a, b) as usize - 1] = true;
            }
        }
    }
    Ok(values
        .iter()
        .enumerate()
        .map(|(i, &v)| if v { i as i32 + 1 } else { -(i as i32 + 1) })
        .collect())
}
