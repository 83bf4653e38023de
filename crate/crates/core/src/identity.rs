//! Finite pair-colorings, realization and identities.
//!
//! A coloring `f` *realizes* a coloring `g` when some injection `k` of the
//! vertices of `g` into the vertices of `f` turns every equality of `g`-colors
//! into an equality of `f`-colors:
//!
//! ```text
//! g({x,y}) = g({u,v})  =>  f({k x, k y}) = f({k u, k v})
//! ```
//!
//! Mutual realization is an equivalence relation whose classes on finite
//! colorings are *identities*. For colorings of the same size it coincides with
//! isomorphism of the induced edge partitions, so an identity is stored as the
//! lexicographically least edge partition over all vertex relabelings.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{normalize_labels, pair_count, pair_index, SetPartitions};

/// Color id. Only equality between ids is ever observed.
pub type Color = u64;

/// A pair-coloring of the complete graph on `{0..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    n: usize,
    colors: Vec<Color>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("line {line}: expected \"i j c\" with decimal naturals, got {content:?}")]
    Malformed { line: usize, content: String },
    #[error("line {line}: pair endpoints must satisfy i < j, got {i} {j}")]
    Unordered { line: usize, i: usize, j: usize },
    #[error("line {line}: pair {{{i},{j}}} colored twice")]
    Duplicate { line: usize, i: usize, j: usize },
    #[error("pair {{{i},{j}}} is missing")]
    Missing { i: usize, j: usize },
    #[error("expected {expected} pair colors, got {got}")]
    WrongLength { expected: usize, got: usize },
}

impl Coloring {
    /// Builds a coloring from colors listed in lexicographic pair order.
    pub fn new(n: usize, colors: Vec<Color>) -> Result<Self, ColoringError> {
        if colors.len() != pair_count(n) {
            return Err(ColoringError::WrongLength {
                expected: pair_count(n),
                got: colors.len(),
            });
        }
        Ok(Self { n, colors })
    }

    pub fn from_fn(n: usize, mut color: impl FnMut(usize, usize) -> Color) -> Self {
        let mut colors = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                colors.push(color(i, j));
            }
        }
        Self { n, colors }
    }

    /// Every pair gets the same color.
    pub fn constant(n: usize, color: Color) -> Self {
        Self::from_fn(n, |_, _| color)
    }

    /// Every pair gets its own color.
    pub fn all_distinct(n: usize) -> Self {
        let mut next = 0;
        Self::from_fn(n, |_, _| {
            next += 1;
            next
        })
    }

    /// Size of the field.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Pair colors in lexicographic pair order.
    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    /// Color of `{i, j}`; the order of the endpoints does not matter.
    pub fn color(&self, i: usize, j: usize) -> Color {
        assert!(i != j, "a pair needs two distinct vertices");
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.colors[pair_index(self.n, a, b)]
    }

    /// The coloring induced on `vertices` (relabelled `0..vertices.len()`).
    pub fn restrict(&self, vertices: &[usize]) -> Coloring {
        Coloring::from_fn(vertices.len(), |i, j| self.color(vertices[i], vertices[j]))
    }

    /// The coloring `c'` with `c'({π i, π j}) = c({i, j})`.
    pub fn permute(&self, perm: &[usize]) -> Coloring {
        assert_eq!(perm.len(), self.n);
        let mut colors = vec![0; self.colors.len()];
        let mut k = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
                colors[pair_index(self.n, a, b)] = self.colors[k];
                k += 1;
            }
        }
        Coloring { n: self.n, colors }
    }

    /// Edge partition as a restricted growth string over the pair order.
    pub fn pattern(&self) -> Vec<u8> {
        normalize_labels(&self.colors)
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut k = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                writeln!(f, "{i} {j} {}", self.colors[k])?;
                k += 1;
            }
        }
        Ok(())
    }
}

impl FromStr for Coloring {
    type Err = ColoringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_coloring(s)
    }
}

/// Parses the line format `i j c`; blank lines and `#` comments are skipped.
/// The field size is one more than the largest vertex mentioned.
pub fn parse_coloring(text: &str) -> Result<Coloring, ColoringError> {
    let mut entries: Vec<(usize, usize, usize, Color)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let malformed = || ColoringError::Malformed {
            line,
            content: raw.to_string(),
        };
        if fields.len() != 3 {
            return Err(malformed());
        }
        let i: usize = fields[0].parse().map_err(|_| malformed())?;
        let j: usize = fields[1].parse().map_err(|_| malformed())?;
        let c: Color = fields[2].parse().map_err(|_| malformed())?;
        if i >= j {
            return Err(ColoringError::Unordered { line, i, j });
        }
        entries.push((line, i, j, c));
    }
    let n = entries.iter().map(|e| e.2 + 1).max().unwrap_or(0);
    let mut colors: Vec<Option<Color>> = vec![None; pair_count(n)];
    for &(line, i, j, c) in &entries {
        let slot = &mut colors[pair_index(n, i, j)];
        if slot.is_some() {
            return Err(ColoringError::Duplicate { line, i, j });
        }
        *slot = Some(c);
    }
    let mut out = Vec::with_capacity(colors.len());
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            match colors[k] {
                Some(c) => out.push(c),
                None => return Err(ColoringError::Missing { i, j }),
            }
            k += 1;
        }
    }
    Ok(Coloring { n, colors: out })
}

/// Whether `f` realizes `g`.
///
/// Backtracks over injections of `g`'s vertices into `f`'s, maintaining the
/// map from `g`-color classes to the single `f`-color each class must land on.
pub fn realizes(f: &Coloring, g: &Coloring) -> bool {
    if g.n > f.n {
        return false;
    }
    let mut search = Embedding {
        f,
        g,
        image: Vec::with_capacity(g.n),
        used: vec![false; f.n],
        class_color: HashMap::new(),
    };
    search.extend()
}

struct Embedding<'a> {
    f: &'a Coloring,
    g: &'a Coloring,
    image: Vec<usize>,
    used: Vec<bool>,
    /// g-color -> (f-color it is pinned to, number of pairs pinning it)
    class_color: HashMap<Color, (Color, usize)>,
}

impl Embedding<'_> {
    fn extend(&mut self) -> bool {
        let v = self.image.len();
        if v == self.g.n {
            return true;
        }
        for cand in 0..self.f.n {
            if self.used[cand] {
                continue;
            }
            let mut pinned: Vec<Color> = Vec::with_capacity(v);
            let mut ok = true;
            for u in 0..v {
                let gc = self.g.color(u, v);
                let fc = self.f.color(self.image[u], cand);
                match self.class_color.get_mut(&gc) {
                    Some((c, count)) if *c == fc => {
                        *count += 1;
                        pinned.push(gc);
                    }
                    Some(_) => {
                        ok = false;
                        break;
                    }
                    None => {
                        self.class_color.insert(gc, (fc, 1));
                        pinned.push(gc);
                    }
                }
            }
            if ok {
                self.used[cand] = true;
                self.image.push(cand);
                if self.extend() {
                    return true;
                }
                self.image.pop();
                self.used[cand] = false;
            }
            for gc in pinned {
                let entry = self.class_color.get_mut(&gc).expect("pinned class");
                entry.1 -= 1;
                if entry.1 == 0 {
                    self.class_color.remove(&gc);
                }
            }
        }
        false
    }
}

/// Mutual realization.
pub fn equivalent(f: &Coloring, g: &Coloring) -> bool {
    realizes(f, g) && realizes(g, f)
}

/// A ≃-class of finite colorings, stored as the least edge partition (as a
/// restricted growth string over the lexicographic pair order) among all
/// vertex relabelings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Identity {
    r: usize,
    blocks: Vec<u8>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdentityParseError {
    #[error("identity must look like \"r; i-j,i-j|i-j\", got {0:?}")]
    Syntax(String),
    #[error("pair {0} is not a pair of {{0..{1}}}")]
    BadPair(String, usize),
    #[error("pair {i}-{j} appears twice")]
    Duplicate { i: usize, j: usize },
    #[error("pair {i}-{j} is not covered")]
    Missing { i: usize, j: usize },
}

impl Identity {
    /// Size of the field.
    pub fn size(&self) -> usize {
        self.r
    }

    /// Block label of every pair, in lexicographic pair order.
    pub fn pattern(&self) -> &[u8] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    /// The blocks of the edge partition, each a list of pairs.
    pub fn edge_partition(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.block_count()];
        let mut k = 0;
        for i in 0..self.r {
            for j in i + 1..self.r {
                out[self.blocks[k] as usize].push((i, j));
                k += 1;
            }
        }
        out
    }

    /// A coloring in the class: each pair colored by its block.
    pub fn representative(&self) -> Coloring {
        Coloring {
            n: self.r,
            colors: self.blocks.iter().map(|&b| b as Color).collect(),
        }
    }

    /// The one-color identity of size `r`.
    pub fn monochromatic(r: usize) -> Self {
        canonical_identity(&Coloring::constant(r, 0))
    }

    pub fn all_distinct(r: usize) -> Self {
        canonical_identity(&Coloring::all_distinct(r))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = self
            .edge_partition()
            .into_iter()
            .map(|b| b.iter().map(|(i, j)| format!("{i}-{j}")).join(","))
            .join("|");
        write!(f, "{}; {}", self.r, blocks)
    }
}

impl FromStr for Identity {
    type Err = IdentityParseError;

    /// Parses `r; block|block|...`; the result is re-canonicalized, so any
    /// partition in the class is accepted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || IdentityParseError::Syntax(s.to_string());
        let (r_text, rest) = s.split_once(';').ok_or_else(syntax)?;
        let r: usize = r_text.trim().parse().map_err(|_| syntax())?;
        let mut labels: Vec<Option<Color>> = vec![None; pair_count(r)];
        let rest = rest.trim();
        if !rest.is_empty() {
            for (b, block) in rest.split('|').enumerate() {
                for pair in block.split(',') {
                    let pair = pair.trim();
                    let bad = || IdentityParseError::BadPair(pair.to_string(), r);
                    let (i, j) = pair.split_once('-').ok_or_else(bad)?;
                    let i: usize = i.trim().parse().map_err(|_| bad())?;
                    let j: usize = j.trim().parse().map_err(|_| bad())?;
                    let (i, j) = (i.min(j), i.max(j));
                    if i == j || j >= r {
                        return Err(bad());
                    }
                    let slot = &mut labels[pair_index(r, i, j)];
                    if slot.is_some() {
                        return Err(IdentityParseError::Duplicate { i, j });
                    }
                    *slot = Some(b as Color);
                }
            }
        }
        let mut colors = Vec::with_capacity(labels.len());
        let mut k = 0;
        for i in 0..r {
            for j in i + 1..r {
                colors.push(labels[k].ok_or(IdentityParseError::Missing { i, j })?);
                k += 1;
            }
        }
        Ok(canonical_identity(&Coloring { n: r, colors }))
    }
}

impl Serialize for Identity {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Identity {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Least edge-partition encoding of `c` over all `n!` vertex relabelings.
pub fn canonical_identity(c: &Coloring) -> Identity {
    let n = c.n;
    let mut best = c.pattern();
    for perm in (0..n).permutations(n) {
        let candidate = c.permute(&perm).pattern();
        if candidate < best {
            best = candidate;
        }
    }
    Identity { r: n, blocks: best }
}

/// Every identity of size `r`, each exactly once, in sorted order.
pub fn enumerate_identities(r: usize) -> BTreeSet<Identity> {
    let m = pair_count(r);
    let candidates: Vec<Vec<usize>> = SetPartitions::new(m).collect();
    candidates
        .into_par_iter()
        .filter_map(|rgs| {
            let colors: Vec<Color> = rgs.iter().map(|&b| b as Color).collect();
            let coloring = Coloring { n: r, colors };
            let own = coloring.pattern();
            // canonical iff no relabeling gives a smaller pattern
            let minimal = (0..r)
                .permutations(r)
                .all(|p| coloring.permute(&p).pattern() >= own);
            minimal.then_some(Identity { r, blocks: own })
        })
        .collect()
}

/// Whether `c` realizes (a representative of) `identity`.
pub fn realizes_identity(c: &Coloring, identity: &Identity) -> bool {
    realizes(c, &identity.representative())
}

/// A finite 0/1 word, a node of the full binary tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BinaryWord {
    bits: Vec<bool>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("binary word may only contain 0 and 1, got {0:?}")]
    Syntax(String),
    #[error("word {0} occurs twice")]
    Duplicate(BinaryWord),
    #[error("word {0} is a prefix of {1}; branches must form an antichain")]
    Prefix(BinaryWord, BinaryWord),
    #[error("word {0} is longer than {MAX_WORD_LEN} bits")]
    TooLong(BinaryWord),
}

/// Longest word accepted by [`meet_coloring`]; meets are encoded into a `u64`.
pub const MAX_WORD_LEN: usize = 62;

impl BinaryWord {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// The `len` low bits of `value`, most significant first.
    pub fn from_bits(value: u64, len: usize) -> Self {
        Self {
            bits: (0..len).rev().map(|k| value >> k & 1 == 1).collect(),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_prefix_of(&self, other: &BinaryWord) -> bool {
        other.bits.starts_with(&self.bits)
    }

    /// Longest common prefix.
    pub fn meet(&self, other: &BinaryWord) -> BinaryWord {
        let len = self
            .bits
            .iter()
            .zip(&other.bits)
            .take_while(|(a, b)| a == b)
            .count();
        BinaryWord {
            bits: self.bits[..len].to_vec(),
        }
    }

    /// An injective numbering of words of length at most [`MAX_WORD_LEN`]:
    /// a leading one followed by the bits.
    pub fn code(&self) -> u64 {
        debug_assert!(self.len() <= MAX_WORD_LEN);
        self.bits.iter().fold(1u64, |acc, &b| acc << 1 | b as u64)
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("ε");
        }
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BinaryWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(WordError::Syntax(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BinaryWord::new)
    }
}

/// Colors `{i, j}` by the numbered meet of `words[i]` and `words[j]`.
pub fn meet_coloring(words: &[BinaryWord]) -> Result<Coloring, WordError> {
    for w in words {
        if w.len() > MAX_WORD_LEN {
            return Err(WordError::TooLong(w.clone()));
        }
    }
    for (a, b) in words.iter().tuple_combinations() {
        if a == b {
            return Err(WordError::Duplicate(a.clone()));
        }
        if a.is_prefix_of(b) {
            return Err(WordError::Prefix(a.clone(), b.clone()));
        }
        if b.is_prefix_of(a) {
            return Err(WordError::Prefix(b.clone(), a.clone()));
        }
    }
    Ok(Coloring::from_fn(words.len(), |i, j| {
        words[i].meet(&words[j]).code()
    }))
}

/// Identities of meet colorings of `k` branches separated within `depth`
/// levels, built by splitting on the first bit: branches on opposite sides meet
/// at the root, branches on the same side meet one level down.
fn meet_patterns(
    k: usize,
    depth: usize,
    memo: &mut HashMap<(usize, usize), BTreeSet<Identity>>,
) -> BTreeSet<Identity> {
    if let Some(hit) = memo.get(&(k, depth)) {
        return hit.clone();
    }
    let mut out = BTreeSet::new();
    if k <= 1 {
        out.insert(canonical_identity(&Coloring::constant(k, 0)));
    } else if depth > 0 {
        out.extend(meet_patterns(k, depth - 1, memo));
        for left in 1..k {
            let right = k - left;
            let lhs = meet_patterns(left, depth - 1, memo);
            let rhs = meet_patterns(right, depth - 1, memo);
            for a in &lhs {
                for b in &rhs {
                    let (ca, cb) = (a.representative(), b.representative());
                    let offset = ca.colors.iter().max().map_or(0, |m| m + 1);
                    let root = offset + cb.colors.iter().max().map_or(0, |m| m + 1);
                    let joined = Coloring::from_fn(k, |i, j| match (i < left, j < left) {
                        (true, true) => ca.color(i, j),
                        (false, false) => offset + cb.color(i - left, j - left),
                        _ => root,
                    });
                    out.insert(canonical_identity(&joined));
                }
            }
        }
    }
    memo.insert((k, depth), out.clone());
    out
}

/// The identities of the meet coloring realized on `r` branches whose pairwise
/// meets lie within the first `depth` levels of the tree.
pub fn meet_pattern_identities(r: usize, depth: usize) -> BTreeSet<Identity> {
    meet_patterns(r, depth, &mut HashMap::new())
}

/// The size-`r` identities realized by the meet coloring on branches separated
/// within `depth` levels: every identity that some meet pattern realizes.
pub fn j_identities(r: usize, depth: usize) -> BTreeSet<Identity> {
    let patterns: Vec<Coloring> = meet_pattern_identities(r, depth)
        .iter()
        .map(Identity::representative)
        .collect();
    enumerate_identities(r)
        .into_iter()
        .filter(|id| patterns.iter().any(|m| realizes_identity(m, id)))
        .collect()
}

/// Distinct raw edge patterns of meet colorings over all `r`-sets of words of
/// length exactly `depth`. Brute force; used to cross-check the recursion.
pub fn meet_identities_brute_force(r: usize, depth: usize) -> BTreeSet<Identity> {
    let words: Vec<BinaryWord> = (0..1u64 << depth)
        .map(|v| BinaryWord::from_bits(v, depth))
        .collect();
    let mut raw: HashSet<Vec<u8>> = HashSet::new();
    for subset in words.iter().combinations(r) {
        let owned: Vec<BinaryWord> = subset.into_iter().cloned().collect();
        let c = meet_coloring(&owned).expect("equal-length distinct words");
        raw.insert(c.pattern());
    }
    raw.into_iter()
        .map(|p| {
            let colors = p.iter().map(|&b| b as Color).collect();
            canonical_identity(&Coloring { n: r, colors })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(a: Color, b: Color, c: Color) -> Coloring {
        Coloring::new(3, vec![a, b, c]).unwrap()
    }

    #[test]
    fn parse_single_edge() {
        let c = parse_coloring("0 1 5").unwrap();
        assert_eq!(c.n(), 2);
        assert_eq!(c.color(0, 1), 5);
    }

    #[test]
    fn parse_monochromatic_triangle() {
        let c = parse_coloring("0 1 0\n0 2 0\n1 2 0\n").unwrap();
        assert_eq!(c, Coloring::constant(3, 0));
    }

    #[test]
    fn parse_reports_missing_pair() {
        let err = parse_coloring("0 1 0\n0 2 1").unwrap_err();
        assert_eq!(err, ColoringError::Missing { i: 1, j: 2 });
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = parse_coloring("# header\n0 1 0\n0 1 3").unwrap_err();
        assert_eq!(err, ColoringError::Duplicate { line: 3, i: 0, j: 1 });
        let err = parse_coloring("0 1 x").unwrap_err();
        assert!(matches!(err, ColoringError::Malformed { line: 1, .. }));
        let err = parse_coloring("0 1 2\n2 1 0").unwrap_err();
        assert!(matches!(err, ColoringError::Unordered { line: 2, .. }));
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn parse_round_trips_display() {
        let c = triangle(4, 9, 4);
        assert_eq!(parse_coloring(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn realization_examples() {
        let mono = triangle(0, 0, 0);
        let distinct = triangle(0, 1, 2);
        assert!(realizes(&mono, &mono));
        assert!(realizes(&distinct, &distinct));
        assert!(!realizes(&distinct, &mono));
        assert!(realizes(&mono, &distinct));
        assert!(!equivalent(&mono, &distinct));
    }

    #[test]
    fn larger_field_cannot_embed() {
        assert!(!realizes(&Coloring::constant(2, 0), &Coloring::constant(3, 0)));
        assert!(realizes(&Coloring::constant(4, 0), &Coloring::all_distinct(3)));
    }

    #[test]
    fn two_plus_one_relabelings_are_equivalent() {
        let a = triangle(0, 0, 1);
        let b = triangle(1, 0, 0);
        let c = triangle(0, 1, 0);
        assert!(equivalent(&a, &b));
        assert!(equivalent(&b, &c));
        assert_eq!(canonical_identity(&a), canonical_identity(&b));
        assert_eq!(canonical_identity(&a), canonical_identity(&c));
    }

    #[test]
    fn canonical_ignores_labels() {
        assert_eq!(
            canonical_identity(&Coloring::constant(3, 7)),
            canonical_identity(&Coloring::constant(3, 0))
        );
        let distinct = canonical_identity(&triangle(5, 6, 7));
        assert_eq!(distinct.block_count(), 3);
        assert!(distinct.edge_partition().iter().all(|b| b.len() == 1));
    }

    #[test]
    fn identity_serialization() {
        let id = canonical_identity(&triangle(3, 3, 8));
        let text = id.to_string();
        assert_eq!(text, "3; 0-1,0-2|1-2");
        assert_eq!(text.parse::<Identity>().unwrap(), id);
        assert_eq!("3; 1-2,0-2|0-1".parse::<Identity>().unwrap(), id);
        assert_eq!(Identity::monochromatic(3).to_string(), "3; 0-1,0-2,1-2");
        assert!("3; 0-1|0-2".parse::<Identity>().is_err());
        assert!("3; 0-1|0-2|0-2,1-2".parse::<Identity>().is_err());
        assert!("3; 0-1|0-3|1-2".parse::<Identity>().is_err());
    }

    #[test]
    fn small_identity_counts() {
        assert_eq!(enumerate_identities(2).len(), 1);
        assert_eq!(enumerate_identities(3).len(), 3);
    }

    #[test]
    fn meet_coloring_examples() {
        let words: Vec<BinaryWord> = ["00", "01", "10"].iter().map(|w| w.parse().unwrap()).collect();
        let c = meet_coloring(&words).unwrap();
        assert_ne!(c.color(0, 1), c.color(0, 2));
        assert_eq!(c.color(0, 2), c.color(1, 2));
        assert_eq!(canonical_identity(&c), canonical_identity(&triangle(0, 0, 1)));

        let pair: Vec<BinaryWord> = ["00", "01"].iter().map(|w| w.parse().unwrap()).collect();
        assert_eq!(meet_coloring(&pair).unwrap().n(), 2);
    }

    #[test]
    fn meet_coloring_four_words() {
        // meets: ab=00, ac=0, ad=ε, bc=0, bd=ε, cd=ε
        let words: Vec<BinaryWord> = ["000", "001", "010", "100"]
            .iter()
            .map(|w| w.parse().unwrap())
            .collect();
        let c = meet_coloring(&words).unwrap();
        assert_eq!(c.pattern(), vec![0, 1, 2, 1, 2, 2]);
    }

    #[test]
    fn meet_coloring_rejects_bad_words() {
        let dup: Vec<BinaryWord> = ["01", "01"].iter().map(|w| w.parse().unwrap()).collect();
        assert!(matches!(meet_coloring(&dup), Err(WordError::Duplicate(_))));
        let pre: Vec<BinaryWord> = ["0", "01"].iter().map(|w| w.parse().unwrap()).collect();
        assert!(matches!(meet_coloring(&pre), Err(WordError::Prefix(_, _))));
        assert!("012".parse::<BinaryWord>().is_err());
    }

    #[test]
    fn j_fragment_small() {
        assert_eq!(j_identities(2, 2).len(), 1);
        let j3 = j_identities(3, 3);
        assert_eq!(j3.len(), 2);
        assert!(!j3.contains(&Identity::monochromatic(3)));
        assert!(j3.contains(&Identity::all_distinct(3)));
    }

    #[test]
    fn meet_recursion_matches_brute_force() {
        for r in 2..=4 {
            for depth in 2..=4 {
                assert_eq!(
                    meet_pattern_identities(r, depth),
                    meet_identities_brute_force(r, depth),
                    "r={r} depth={depth}"
                );
            }
        }
    }

    #[test]
    fn constant_coloring_realizes_everything() {
        let c = Coloring::constant(4, 1);
        for id in enumerate_identities(3) {
            assert!(realizes_identity(&c, &id));
        }
        assert!(!realizes_identity(&Coloring::all_distinct(3), &Identity::monochromatic(3)));
    }
}
