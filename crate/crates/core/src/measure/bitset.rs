//! Fixed-length bitsets indexed by atoms of a finite product space.

use std::cmp::Ordering;
use std::fmt::Write as _;

/// A set of atoms `{0..len}` where `len` is a power of two.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomSet {
    len: usize,
    words: Vec<u64>,
}

impl AtomSet {
    pub fn empty(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self {
            len,
            words: vec![u64::MAX; len.div_ceil(64)],
        };
        s.trim();
        s
    }

    /// The low `len` bits of `bits`.
    pub fn from_u64(len: usize, bits: u64) -> Self {
        assert!(len <= 64);
        let mut s = Self {
            len,
            words: vec![bits],
        };
        if len == 0 {
            s.words.clear();
        }
        s.trim();
        s
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len as u64
    }

    #[inline]
    pub fn get(&self, atom: usize) -> bool {
        self.words[atom / 64] >> (atom % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, atom: usize, value: bool) {
        let bit = 1u64 << (atom % 64);
        if value {
            self.words[atom / 64] |= bit;
        } else {
            self.words[atom / 64] &= !bit;
        }
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&a| self.get(a))
    }

    pub fn and(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a ^ b)
    }

    pub fn and_not(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn not(&self) -> Self {
        let mut s = Self {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.trim();
        s
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn zip(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.len, other.len, "atom sets over different spaces");
        Self {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    /// Compares the sets as binary numbers with atom `a` at bit `a`.
    pub fn cmp_numeric(&self, other: &Self) -> Ordering {
        let n = self.words.len().max(other.words.len());
        for k in (0..n).rev() {
            let a = self.words.get(k).copied().unwrap_or(0);
            let b = other.words.get(k).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// The set as a `u64` when it fits.
    pub fn as_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    /// Hex digits, most significant first; one digit per four atoms (at least
    /// one digit).
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        let mut out = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let mut nibble = 0u8;
            for b in 0..4 {
                let atom = d * 4 + b;
                if atom < self.len && self.get(atom) {
                    nibble |= 1 << b;
                }
            }
            write!(out, "{nibble:x}").unwrap();
        }
        out
    }

    pub fn from_hex(len: usize, hex: &str) -> Option<Self> {
        let mut s = Self::empty(len);
        let digits: Vec<char> = hex.chars().collect();
        for (pos, ch) in digits.iter().rev().enumerate() {
            let nibble = ch.to_digit(16)?;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let atom = pos * 4 + b;
                    if atom >= len {
                        return None;
                    }
                    s.set(atom, true);
                }
            }
        }
        Some(s)
    }
}
