//! Boolean terms over variables `x1..xk`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::bitset::AtomSet;

/// Expression tree of a boolean term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Zero,
    One,
    /// `x_i`, 1-based.
    Var(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn max_var(&self) -> usize {
        match self {
            Expr::Zero | Expr::One => 0,
            Expr::Var(i) => *i,
            Expr::Not(e) => e.max_var(),
            Expr::And(a, b) | Expr::Or(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Value under the assignment whose bit `i - 1` is the value of `x_i`.
    pub fn eval_bits(&self, assignment: usize) -> bool {
        match self {
            Expr::Zero => false,
            Expr::One => true,
            Expr::Var(i) => assignment >> (i - 1) & 1 == 1,
            Expr::Not(e) => !e.eval_bits(assignment),
            Expr::And(a, b) => a.eval_bits(assignment) && b.eval_bits(assignment),
            Expr::Or(a, b) => a.eval_bits(assignment) || b.eval_bits(assignment),
        }
    }

    fn shifted(&self, offset: usize) -> Expr {
        match self {
            Expr::Zero => Expr::Zero,
            Expr::One => Expr::One,
            Expr::Var(i) => Expr::Var(i + offset),
            Expr::Not(e) => Expr::Not(Box::new(e.shifted(offset))),
            Expr::And(a, b) => Expr::And(Box::new(a.shifted(offset)), Box::new(b.shifted(offset))),
            Expr::Or(a, b) => Expr::Or(Box::new(a.shifted(offset)), Box::new(b.shifted(offset))),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Or(..) => 0,
            Expr::And(..) => 1,
            _ => 2,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
        let own = self.precedence();
        let wrap = own < parent;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Zero => f.write_str("0")?,
            Expr::One => f.write_str("1")?,
            Expr::Var(i) => write!(f, "x{i}")?,
            Expr::Not(e) => {
                f.write_str("~")?;
                e.write(f, 2)?;
            }
            Expr::And(a, b) => {
                a.write(f, 1)?;
                f.write_str(" & ")?;
                b.write(f, 2)?;
            }
            Expr::Or(a, b) => {
                a.write(f, 0)?;
                f.write_str(" | ")?;
                b.write(f, 1)?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A boolean term with a recorded arity; its variables are among
/// `x1..x_arity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    arity: usize,
    expr: Expr,
}

/// Largest arity whose truth table is materialized.
pub const MAX_TABLE_ARITY: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("term mentions x{var} but has arity {arity}")]
    VariableOutOfRange { var: usize, arity: usize },
}

impl Term {
    pub fn new(arity: usize, expr: Expr) -> Result<Self, TermError> {
        let var = expr.max_var();
        if var > arity {
            return Err(TermError::VariableOutOfRange { var, arity });
        }
        Ok(Self { arity, expr })
    }

    pub fn zero(arity: usize) -> Self {
        Self { arity, expr: Expr::Zero }
    }

    pub fn one(arity: usize) -> Self {
        Self { arity, expr: Expr::One }
    }

    /// `x_i` as a term of the given arity.
    pub fn var(i: usize, arity: usize) -> Self {
        assert!(i >= 1 && i <= arity, "x{i} outside arity {arity}");
        Self { arity, expr: Expr::Var(i) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// The same term viewed with a larger arity.
    pub fn widen(&self, arity: usize) -> Self {
        assert!(arity >= self.arity);
        Self { arity, expr: self.expr.clone() }
    }

    /// Renames `x_i` to `x_{i+offset}`; the arity grows by `offset`.
    pub fn shift(&self, offset: usize) -> Self {
        Self {
            arity: self.arity + offset,
            expr: self.expr.shifted(offset),
        }
    }

    pub fn and(&self, other: &Term) -> Self {
        Self {
            arity: self.arity.max(other.arity),
            expr: Expr::And(Box::new(self.expr.clone()), Box::new(other.expr.clone())),
        }
    }

    pub fn or(&self, other: &Term) -> Self {
        Self {
            arity: self.arity.max(other.arity),
            expr: Expr::Or(Box::new(self.expr.clone()), Box::new(other.expr.clone())),
        }
    }

    pub fn not(&self) -> Self {
        Self {
            arity: self.arity,
            expr: Expr::Not(Box::new(self.expr.clone())),
        }
    }

    /// Satisfying assignments; assignment `a` sets `x_i` to bit `i - 1` of `a`.
    pub fn truth_table(&self) -> AtomSet {
        assert!(
            self.arity <= MAX_TABLE_ARITY,
            "arity {} too large for a truth table",
            self.arity
        );
        let len = 1usize << self.arity;
        let mut table = AtomSet::empty(len);
        for a in 0..len {
            if self.expr.eval_bits(a) {
                table.set(a, true);
            }
        }
        table
    }

    /// Full disjunctive normal form of a truth table, minterms in increasing
    /// assignment order; the empty table gives `0`.
    pub fn from_truth_table(arity: usize, table: &AtomSet) -> Self {
        assert_eq!(table.len(), 1usize << arity);
        let mut disjuncts = table.ones().map(|a| {
            (1..=arity)
                .map(|i| {
                    let v = Expr::Var(i);
                    if a >> (i - 1) & 1 == 1 {
                        v
                    } else {
                        Expr::Not(Box::new(v))
                    }
                })
                .reduce(|acc, lit| Expr::And(Box::new(acc), Box::new(lit)))
                .unwrap_or(Expr::One)
        });
        let expr = match disjuncts.next() {
            None => Expr::Zero,
            Some(first) => disjuncts.fold(first, |acc, d| Expr::Or(Box::new(acc), Box::new(d))),
        };
        Self { arity, expr }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.write(f, 0)
    }
}

impl FromStr for Term {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

/// Parses `xN` variables, `0`, `1`, prefix `~`, infix `&` (binding tighter)
/// and `|`, and parentheses. The arity is the largest variable index.
pub fn parse_term(text: &str) -> Result<Term, TermError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let expr = parser.or()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    let arity = expr.max_var();
    Ok(Term { arity, expr })
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> TermError {
        TermError::Syntax {
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn or(&mut self) -> Result<Expr, TermError> {
        let mut lhs = self.and()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let rhs = self.and()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr, TermError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, TermError> {
        match self.peek() {
            Some('~') => {
                self.pos += 1;
                Ok(Expr::Not(Box::new(self.unary()?)))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.or()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('0') => {
                self.pos += 1;
                Ok(Expr::Zero)
            }
            Some('1') => {
                self.pos += 1;
                Ok(Expr::One)
            }
            Some('x') => {
                let start = self.pos;
                self.pos += 1;
                let digits_start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits: String = self.chars[digits_start..self.pos].iter().collect();
                match digits.parse::<usize>() {
                    Ok(i) if i >= 1 => Ok(Expr::Var(i)),
                    _ => {
                        self.pos = start;
                        Err(self.error("variables are x1, x2, ..."))
                    }
                }
            }
            Some(_) => Err(self.error("expected a variable, constant, '~' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
