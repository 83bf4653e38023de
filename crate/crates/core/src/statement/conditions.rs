//! Measure predicates of C3, C4 and C5 over evaluated cells.
//!
//! Shared by the verifier and the propositional encoder so both judge a
//! configuration by the same arithmetic.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::identity::{realizes_identity, Coloring, Identity};
use crate::measure::{is_partition, union_support, AlgebraElement, AtomSet, DyadicMeasure};

/// C3: the cells form a partition sequence.
pub fn c3_holds(cells: &[AlgebraElement]) -> bool {
    is_partition(cells)
}

/// `1 - 1/2^N`.
pub fn c4_threshold(n: usize) -> DyadicMeasure {
    DyadicMeasure::one_minus_half_pow(n as u32)
}

/// Measure of `⋃_m (lower[m] ∩ upper[m])`, over the colors present at both
/// levels.
pub fn c4_measure(lower: &[AlgebraElement], upper: &[AlgebraElement]) -> DyadicMeasure {
    let support = union_support(lower.iter().chain(upper).map(AlgebraElement::support));
    let mut acc = AtomSet::empty(1usize << support.len());
    for (a, b) in lower.iter().zip(upper) {
        let meet = a.extend_to(&support).atoms().and(b.extend_to(&support).atoms());
        acc = acc.or(&meet);
    }
    DyadicMeasure::from_atoms(acc.count(), support.len() as u32)
}

/// The colorings of the pairs of an `r`-set (lexicographic pair order) with
/// colors `0..colors` that realize `identity`.
pub fn realizing_colorings(identity: &Identity, colors: usize) -> Vec<Vec<usize>> {
    let r = identity.size();
    let pairs = r * r.saturating_sub(1) / 2;
    let total = colors.checked_pow(pairs as u32).expect("coloring count overflows");
    let mut memo: HashMap<Vec<u8>, bool> = HashMap::new();
    let mut out = Vec::new();
    let mut digits = vec![0usize; pairs];
    for _ in 0..total {
        let c = Coloring::new(r, digits.iter().map(|&d| d as u64).collect()).expect("pair count");
        let hit = *memo
            .entry(c.pattern())
            .or_insert_with(|| realizes_identity(&c, identity));
        if hit {
            out.push(digits.clone());
        }
        // next coloring in mixed radix, last pair fastest
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < colors {
                break;
            }
            *d = 0;
        }
    }
    out
}

/// `⋃ { ⋂_z cells[z][c(z)] : c realizes I }`, where `cells[z]` are the cells
/// of the `z`-th pair of `P` in lexicographic pair order.
pub fn c5_union(identity: &Identity, cells: &[&[AlgebraElement]]) -> AlgebraElement {
    let colors = cells.first().map_or(1, |c| c.len());
    assert!(cells.iter().all(|c| c.len() == colors), "pairs of P disagree on g(L)");
    let support = union_support(cells.iter().flat_map(|c| c.iter().map(AlgebraElement::support)));
    let len = 1usize << support.len();
    let sets: Vec<Vec<AtomSet>> = cells
        .iter()
        .map(|row| row.iter().map(|e| e.extend_to(&support).atoms().clone()).collect())
        .collect();
    let mut acc = AtomSet::empty(len);
    for coloring in realizing_colorings(identity, colors) {
        let mut cell = AtomSet::full(len);
        for (z, &m) in coloring.iter().enumerate() {
            cell = cell.and(&sets[z][m]);
        }
        acc = acc.or(&cell);
    }
    AlgebraElement::new(support, acc).expect("aligned support")
}

/// C5 bound: `measure < 1/L`.
pub fn c5_bound_holds(measure: &DyadicMeasure, level: usize) -> bool {
    measure.cmp_fraction(1, level as u64) == Ordering::Less
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::GeneratorId;

    #[test]
    fn realizing_colorings_counts() {
        // two colors on a triangle: 2 constant, 6 with a 2+1 pattern, none all-distinct
        assert_eq!(realizing_colorings(&Identity::monochromatic(3), 2).len(), 2);
        assert_eq!(realizing_colorings(&Identity::all_distinct(3), 2).len(), 8);
        assert_eq!(realizing_colorings(&Identity::all_distinct(3), 3).len(), 27);
        assert_eq!(realizing_colorings(&Identity::monochromatic(3), 1).len(), 1);
    }

    #[test]
    fn c5_union_independent_generators() {
        // cells (y_z, ~y_z) for three independent generators:
        // the constant colorings cover 2 of 8 atoms
        let cells: Vec<Vec<AlgebraElement>> = (0..3)
            .map(|z| {
                let y = AlgebraElement::generator(GeneratorId(z));
                vec![y.clone(), y.complement()]
            })
            .collect();
        let refs: Vec<&[AlgebraElement]> = cells.iter().map(|c| c.as_slice()).collect();
        let u = c5_union(&Identity::monochromatic(3), &refs);
        assert_eq!(u.measure(), DyadicMeasure::from_atoms(1, 2));
        assert!(c5_bound_holds(&u.measure(), 3));
        assert!(!c5_bound_holds(&u.measure(), 4));
    }

    #[test]
    fn c4_measure_self_overlap_is_one() {
        let y = AlgebraElement::generator(GeneratorId(0));
        let cells = vec![y.clone(), y.complement()];
        assert!(c4_measure(&cells, &cells).is_one());
        let flipped = vec![y.complement(), y];
        assert!(c4_measure(&cells, &flipped).is_zero());
        assert_eq!(c4_threshold(2).to_string(), "3/2^2");
    }
}
