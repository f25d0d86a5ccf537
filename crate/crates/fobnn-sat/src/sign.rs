//! The sign domain and the relational semantics of arithmetic over it.
//!
//! Every real quantity is abstracted to one of three signs: strictly
//! positive, strictly negative, or zero. Arithmetic operators become
//! *relations* over signs: `+ + -` may yield any sign, so the result of an
//! operation is a [`SignSet`] rather than a single [`Sign`]. The tables in
//! this module are the minimal sound relations — they contain a triple
//! `(s1, s2, s)` exactly when there are reals `x1`, `x2` of signs `s1`, `s2`
//! with `x1 op x2` defined and of sign `s`. Everything downstream (the
//! term evaluator, the brute-force enumerator, and the CNF encoding of
//! operator definitions) is measured against these tables.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

/// Sign of a real quantity: strictly positive, strictly negative, or zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
    Zero,
}

impl Sign {
    /// All three signs, in display order.
    pub const ALL: [Sign; 3] = [Sign::Pos, Sign::Neg, Sign::Zero];

    fn index(self) -> usize {
        match self {
            Sign::Pos => 0,
            Sign::Neg => 1,
            Sign::Zero => 2,
        }
    }

    /// Single-character rendering: `+`, `-`, `0`.
    pub fn glyph(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
            Sign::Zero => '0',
        }
    }

    /// Inverse of [`Sign::glyph`].
    pub fn from_glyph(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Pos),
            '-' => Some(Sign::Neg),
            '0' => Some(Sign::Zero),
            _ => None,
        }
    }

    /// True for `+` and `0`, the signs a concentration may take.
    pub fn is_nonneg(self) -> bool {
        self != Sign::Neg
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.glyph())
    }
}

/// Sign of an exact rational.
pub fn sign_of_rational(x: &BigRational) -> Sign {
    if x.is_zero() {
        Sign::Zero
    } else if x > &BigRational::zero() {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

const P: u8 = 1;
const N: u8 = 2;
const Z: u8 = 4;
const ANY: u8 = P | N | Z;

/// A set of signs, stored as a three-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SignSet(u8);

impl SignSet {
    pub const EMPTY: SignSet = SignSet(0);
    pub const ALL: SignSet = SignSet(ANY);

    pub fn singleton(s: Sign) -> SignSet {
        match s {
            Sign::Pos => SignSet(P),
            Sign::Neg => SignSet(N),
            Sign::Zero => SignSet(Z),
        }
    }

    pub fn contains(self, s: Sign) -> bool {
        self.0 & SignSet::singleton(s).0 != 0
    }

    pub fn insert(&mut self, s: Sign) {
        self.0 |= SignSet::singleton(s).0;
    }

    pub fn union(self, other: SignSet) -> SignSet {
        SignSet(self.0 | other.0)
    }

    pub fn intersect(self, other: SignSet) -> SignSet {
        SignSet(self.0 & other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Sign> {
        Sign::ALL.into_iter().filter(move |s| self.contains(*s))
    }
}

impl FromIterator<Sign> for SignSet {
    fn from_iter<T: IntoIterator<Item = Sign>>(iter: T) -> Self {
        let mut set = SignSet::EMPTY;
        for s in iter {
            set.insert(s);
        }
        set
    }
}

impl fmt::Display for SignSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for s in self.iter() {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for SignSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The four arithmetic operators that may appear in kinetic terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl Op {
    pub const ALL: [Op; 4] = [Op::Add, Op::Sub, Op::Mul, Op::Div];

    pub fn symbol(self) -> char {
        match self {
            Op::Add => '+',
            Op::Sub => '-',
            Op::Mul => '*',
            Op::Div => '/',
        }
    }
}

// One row per left sign (+, -, 0), one column per right sign.
const ADD_TABLE: [[u8; 3]; 3] = [
    [P, ANY, P], //
    [ANY, N, N],
    [P, N, Z],
];
const SUB_TABLE: [[u8; 3]; 3] = [
    [ANY, P, P], //
    [N, ANY, N],
    [N, P, Z],
];
const MUL_TABLE: [[u8; 3]; 3] = [
    [P, N, Z], //
    [N, P, Z],
    [Z, Z, Z],
];
// Division by zero is undefined, so the relation has no triple with a
// zero divisor: those entries are empty.
const DIV_TABLE: [[u8; 3]; 3] = [
    [P, N, 0], //
    [N, P, 0],
    [Z, Z, 0],
];

fn table_of(op: Op) -> &'static [[u8; 3]; 3] {
    match op {
        Op::Add => &ADD_TABLE,
        Op::Sub => &SUB_TABLE,
        Op::Mul => &MUL_TABLE,
        Op::Div => &DIV_TABLE,
    }
}

/// Set of result signs of `s1 op s2` under the sound relational semantics.
pub fn abstract_apply(op: Op, s1: Sign, s2: Sign) -> SignSet {
    SignSet(table_of(op)[s1.index()][s2.index()])
}

/// The full relation interpreting one operator: the set of triples
/// `(s1, s2, s)` such that some reals of signs `s1` and `s2` combine
/// under the operator to a real of sign `s`.
#[derive(Debug, Clone, Copy)]
pub struct SignRelation {
    op: Op,
}

impl SignRelation {
    pub fn of(op: Op) -> SignRelation {
        SignRelation { op }
    }

    pub fn op(self) -> Op {
        self.op
    }

    pub fn contains(self, s1: Sign, s2: Sign, s: Sign) -> bool {
        abstract_apply(self.op, s1, s2).contains(s)
    }

    /// Image of an input pair: `{ s | (s1, s2, s) in triples }`.
    pub fn image(self, s1: Sign, s2: Sign) -> SignSet {
        abstract_apply(self.op, s1, s2)
    }

    /// All triples of the relation, in row-major table order.
    pub fn triples(self) -> Vec<(Sign, Sign, Sign)> {
        let mut out = Vec::new();
        for s1 in Sign::ALL {
            for s2 in Sign::ALL {
                for s in self.image(s1, s2).iter() {
                    out.push((s1, s2, s));
                }
            }
        }
        out
    }
}
