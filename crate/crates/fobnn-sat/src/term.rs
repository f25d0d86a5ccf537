//! Arithmetic terms over annotated variables and signed constants.
//!
//! A variable is a species name plus an annotation: the current value `X`,
//! the next value `X'`, the derivative `X.`, the next derivative `X'.`, or
//! an auxiliary helper introduced by flattening. Terms combine variables
//! and constants with the four arithmetic operators.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::sign::{sign_of_rational, Op, Sign};

/// Annotation carried by every variable occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// Species value in the current state: `X`.
    Current,
    /// Species value in the successor state: `X'`.
    Next,
    /// Derivative in the current state: `X.`.
    Dot,
    /// Derivative in the successor state: `X'.`.
    NextDot,
    /// Auxiliary variable introduced by flattening or encoding.
    Helper,
}

/// A variable: base name plus annotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnnotatedVar {
    pub base: String,
    pub kind: VarKind,
}

impl AnnotatedVar {
    pub fn new(base: impl Into<String>, kind: VarKind) -> AnnotatedVar {
        AnnotatedVar { base: base.into(), kind }
    }

    pub fn current(base: impl Into<String>) -> AnnotatedVar {
        AnnotatedVar::new(base, VarKind::Current)
    }

    pub fn next(base: impl Into<String>) -> AnnotatedVar {
        AnnotatedVar::new(base, VarKind::Next)
    }

    pub fn dot(base: impl Into<String>) -> AnnotatedVar {
        AnnotatedVar::new(base, VarKind::Dot)
    }

    pub fn next_dot(base: impl Into<String>) -> AnnotatedVar {
        AnnotatedVar::new(base, VarKind::NextDot)
    }

    pub fn helper(base: impl Into<String>) -> AnnotatedVar {
        AnnotatedVar::new(base, VarKind::Helper)
    }

    /// True for species-valued variables (`X`, `X'`), which are constrained
    /// to non-negative signs by construction.
    pub fn is_species_valued(&self) -> bool {
        matches!(self.kind, VarKind::Current | VarKind::Next)
    }
}

impl fmt::Display for AnnotatedVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::Current | VarKind::Helper => write!(f, "{}", self.base),
            VarKind::Next => write!(f, "{}'", self.base),
            VarKind::Dot => write!(f, "{}.", self.base),
            VarKind::NextDot => write!(f, "{}'.", self.base),
        }
    }
}

/// A constant occurring in a term: either an exact rational literal or a
/// named rate constant whose sign is known from its declaration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constant {
    Num(BigRational),
    Sym { name: String, sign: Sign },
}

impl Constant {
    pub fn num(n: i64) -> Constant {
        Constant::Num(BigRational::from_integer(n.into()))
    }

    pub fn sign(&self) -> Sign {
        match self {
            Constant::Num(x) => sign_of_rational(x),
            Constant::Sym { sign, .. } => *sign,
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Num(x) => write!(f, "{}", render_rational(x)),
            Constant::Sym { name, .. } => write!(f, "{name}"),
        }
    }
}

/// Render a rational in decimal notation when the denominator divides a
/// power of ten, else as `n/d`.
pub fn render_rational(x: &BigRational) -> String {
    let x = x.reduced();
    let den = x.denom();
    let mut d = den.clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if d != BigInt::from(1) {
        return format!("{}/{}", x.numer(), x.denom());
    }
    let k = twos.max(fives);
    let scaled = (x.numer() * num_traits::pow(BigInt::from(10), k) / den).abs();
    let digits = scaled.to_string();
    let sign = if x.is_negative() { "-" } else { "" };
    if k == 0 {
        return format!("{sign}{digits}");
    }
    let (int_part, frac_part) = if digits.len() > k {
        (digits[..digits.len() - k].to_string(), digits[digits.len() - k..].to_string())
    } else {
        ("0".to_string(), format!("{digits:0>k$}"))
    };
    format!("{sign}{int_part}.{frac_part}")
}

/// An arithmetic term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(AnnotatedVar),
    Const(Constant),
    Binary { op: Op, left: Box<Term>, right: Box<Term> },
}

impl Term {
    pub fn var(v: AnnotatedVar) -> Term {
        Term::Var(v)
    }

    pub fn constant(c: Constant) -> Term {
        Term::Const(c)
    }

    pub fn zero() -> Term {
        Term::Const(Constant::Num(BigRational::zero()))
    }

    pub fn binary(op: Op, left: Term, right: Term) -> Term {
        Term::Binary { op, left: Box::new(left), right: Box::new(right) }
    }

    pub fn add(left: Term, right: Term) -> Term {
        Term::binary(Op::Add, left, right)
    }

    pub fn sub(left: Term, right: Term) -> Term {
        Term::binary(Op::Sub, left, right)
    }

    pub fn mul(left: Term, right: Term) -> Term {
        Term::binary(Op::Mul, left, right)
    }

    pub fn div(left: Term, right: Term) -> Term {
        Term::binary(Op::Div, left, right)
    }

    /// Negation, written as subtraction from zero.
    pub fn neg(t: Term) -> Term {
        Term::sub(Term::zero(), t)
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self, Term::Const(Constant::Num(x)) if x.is_zero())
    }

    /// True when the leftmost leaf of the term is a numeric literal, in
    /// which case a rendered unary minus must parenthesize the term to
    /// avoid reading back as a negative literal.
    fn leftmost_is_number(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(Constant::Num(_)) => true,
            Term::Const(Constant::Sym { .. }) => false,
            Term::Binary { left, .. } => left.leftmost_is_number(),
        }
    }

    /// All variables occurring in the term, in first-occurrence order.
    pub fn variables(&self) -> Vec<&AnnotatedVar> {
        let mut out = Vec::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables<'a>(&'a self, out: &mut Vec<&'a AnnotatedVar>) {
        match self {
            Term::Var(v) => {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
            Term::Const(_) => {}
            Term::Binary { left, right, .. } => {
                left.collect_variables(out);
                right.collect_variables(out);
            }
        }
    }
}

fn precedence(op: Op) -> u8 {
    match op {
        Op::Add | Op::Sub => 1,
        Op::Mul | Op::Div => 2,
    }
}

impl Term {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::Binary { op, left, right } => {
                // `0 - t` is displayed as unary negation, binding like its
                // additive level.
                if *op == Op::Sub && left.is_zero_const() {
                    let need = min_prec > 1 || right.leftmost_is_number();
                    if need {
                        write!(f, "(")?;
                    }
                    write!(f, "-")?;
                    right.fmt_prec(f, 2)?;
                    if need {
                        write!(f, ")")?;
                    }
                    return Ok(());
                }
                let prec = precedence(*op);
                let need = prec < min_prec;
                if need {
                    write!(f, "(")?;
                }
                left.fmt_prec(f, prec)?;
                write!(f, " {} ", op.symbol())?;
                right.fmt_prec(f, prec + 1)?;
                if need {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
