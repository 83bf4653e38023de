//! Elements of the free algebra: sets of atoms over a finite generator support.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use super::bitset::AtomSet;
use super::dyadic::DyadicMeasure;
use super::term::Term;
use super::{GeneratorId, MeasureError, MAX_SUPPORT};

/// A finite union of atoms of the product space over `support`.
///
/// Atom `a` is the point where `support[j]` holds exactly when bit `j` of `a`
/// is set. Equality is semantic: elements over different supports are equal
/// when they denote the same set.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    support: Vec<GeneratorId>,
    atoms: AtomSet,
}

impl AlgebraElement {
    pub fn new(support: Vec<GeneratorId>, atoms: AtomSet) -> Result<Self, MeasureError> {
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MeasureError::UnsortedSupport);
        }
        if support.len() > MAX_SUPPORT {
            return Err(MeasureError::SupportTooLarge(support.len()));
        }
        if atoms.len() != 1usize << support.len() {
            return Err(MeasureError::AtomCount {
                expected: 1usize << support.len(),
                got: atoms.len(),
            });
        }
        Ok(Self { support, atoms })
    }

    pub fn zero() -> Self {
        Self {
            support: Vec::new(),
            atoms: AtomSet::empty(1),
        }
    }

    pub fn one() -> Self {
        Self {
            support: Vec::new(),
            atoms: AtomSet::full(1),
        }
    }

    /// The set where `id` holds.
    pub fn generator(id: GeneratorId) -> Self {
        Self {
            support: vec![id],
            atoms: AtomSet::from_u64(2, 0b10),
        }
    }

    /// Substitutes `gens[i]` for `x_{i+1}` in the function given by `table`
    /// (a truth table over `gens.len()` variables). Repeated generators
    /// identify the corresponding variables.
    pub fn from_table(table: &AtomSet, gens: &[GeneratorId]) -> Result<Self, MeasureError> {
        if table.len() != 1usize << gens.len() {
            return Err(MeasureError::ArityMismatch {
                expected: table.len().trailing_zeros() as usize,
                got: gens.len(),
            });
        }
        let mut support = gens.to_vec();
        support.sort_unstable();
        support.dedup();
        if support.len() > MAX_SUPPORT {
            return Err(MeasureError::SupportTooLarge(support.len()));
        }
        let position: Vec<usize> = gens
            .iter()
            .map(|g| support.binary_search(g).expect("generator in support"))
            .collect();
        let len = 1usize << support.len();
        let mut atoms = AtomSet::empty(len);
        for b in 0..len {
            let a = position
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &p)| acc | (b >> p & 1) << i);
            if table.get(a) {
                atoms.set(b, true);
            }
        }
        Ok(Self { support, atoms })
    }

    pub fn support(&self) -> &[GeneratorId] {
        &self.support
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    /// The same set over a larger support.
    pub fn extend_to(&self, support: &[GeneratorId]) -> Self {
        if support == self.support.as_slice() {
            return self.clone();
        }
        assert!(support.len() <= MAX_SUPPORT, "support of {} generators", support.len());
        let position: Vec<usize> = self
            .support
            .iter()
            .map(|g| {
                support
                    .binary_search(g)
                    .expect("target support must contain the element's support")
            })
            .collect();
        let len = 1usize << support.len();
        let mut atoms = AtomSet::empty(len);
        for b in 0..len {
            let a = position
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &p)| acc | (b >> p & 1) << i);
            if self.atoms.get(a) {
                atoms.set(b, true);
            }
        }
        Self {
            support: support.to_vec(),
            atoms,
        }
    }

    fn aligned(&self, other: &Self) -> (AtomSet, AtomSet, Vec<GeneratorId>) {
        let support = union_support([self.support.as_slice(), other.support.as_slice()]);
        (
            self.extend_to(&support).atoms,
            other.extend_to(&support).atoms,
            support,
        )
    }

    pub fn meet(&self, other: &Self) -> Self {
        let (a, b, support) = self.aligned(other);
        Self { support, atoms: a.and(&b) }
    }

    pub fn join(&self, other: &Self) -> Self {
        let (a, b, support) = self.aligned(other);
        Self { support, atoms: a.or(&b) }
    }

    pub fn difference(&self, other: &Self) -> Self {
        let (a, b, support) = self.aligned(other);
        Self { support, atoms: a.and_not(&b) }
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        let (a, b, support) = self.aligned(other);
        Self { support, atoms: a.xor(&b) }
    }

    pub fn complement(&self) -> Self {
        Self {
            support: self.support.clone(),
            atoms: self.atoms.not(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        let (a, b, _) = self.aligned(other);
        a.is_subset(&b)
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.atoms.is_full()
    }

    /// Product measure: each generator independently holds with probability
    /// one half.
    pub fn measure(&self) -> DyadicMeasure {
        DyadicMeasure::from_atoms(self.atoms.count(), self.support.len() as u32)
    }

    /// Membership of the point that assigns `value(g)` to each generator.
    pub fn contains(&self, value: impl Fn(GeneratorId) -> bool) -> bool {
        let atom = self
            .support
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &g)| acc | (value(g) as usize) << j);
        self.atoms.get(atom)
    }

    /// Whether the set depends on the generator at support position `j`.
    fn depends_on(&self, j: usize) -> bool {
        let bit = 1usize << j;
        (0..self.atoms.len())
            .filter(|a| a & bit == 0)
            .any(|a| self.atoms.get(a) != self.atoms.get(a | bit))
    }

    /// The same set over the generators it actually depends on.
    pub fn reduce(&self) -> Self {
        let keep: Vec<usize> = (0..self.support.len()).filter(|&j| self.depends_on(j)).collect();
        if keep.len() == self.support.len() {
            return self.clone();
        }
        let support: Vec<GeneratorId> = keep.iter().map(|&j| self.support[j]).collect();
        let len = 1usize << support.len();
        let mut atoms = AtomSet::empty(len);
        for b in 0..len {
            // dropped generators are irrelevant; read them as 0
            let a = keep
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &j)| acc | (b >> i & 1) << j);
            atoms.set(b, self.atoms.get(a));
        }
        Self { support, atoms }
    }
}

/// Sorted union of supports.
pub fn union_support<'a>(supports: impl IntoIterator<Item = &'a [GeneratorId]>) -> Vec<GeneratorId> {
    let mut out: Vec<GeneratorId> = supports.into_iter().flatten().copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.aligned(other);
        a == b
    }
}

impl Eq for AlgebraElement {}

impl Hash for AlgebraElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let r = self.reduce();
        r.support.hash(state);
        r.atoms.hash(state);
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support: Vec<String> = self.support.iter().map(|g| g.0.to_string()).collect();
        write!(f, "support=[{}]; atoms={}", support.join(","), self.atoms.to_hex())
    }
}

impl FromStr for AlgebraElement {
    type Err = MeasureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || MeasureError::ElementSyntax(s.to_string());
        let (lhs, rhs) = s.split_once(';').ok_or_else(syntax)?;
        let list = lhs
            .trim()
            .strip_prefix("support=[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(syntax)?;
        let support = if list.trim().is_empty() {
            Vec::new()
        } else {
            list.split(',')
                .map(|g| g.trim().parse().map(GeneratorId).map_err(|_| syntax()))
                .collect::<Result<Vec<_>, _>>()?
        };
        let hex = rhs.trim().strip_prefix("atoms=").ok_or_else(syntax)?;
        if support.len() > MAX_SUPPORT {
            return Err(MeasureError::SupportTooLarge(support.len()));
        }
        let atoms = AtomSet::from_hex(1usize << support.len(), hex).ok_or_else(syntax)?;
        Self::new(support, atoms)
    }
}

/// Evaluates `term` at the generator tuple `gens`.
pub fn eval(term: &Term, gens: &[GeneratorId]) -> Result<AlgebraElement, MeasureError> {
    if term.arity() != gens.len() {
        return Err(MeasureError::ArityMismatch {
            expected: term.arity(),
            got: gens.len(),
        });
    }
    if term.arity() > MAX_SUPPORT {
        return Err(MeasureError::SupportTooLarge(term.arity()));
    }
    AlgebraElement::from_table(&term.truth_table(), gens)
}

/// Measure of an element.
pub fn measure(e: &AlgebraElement) -> DyadicMeasure {
    e.measure()
}
