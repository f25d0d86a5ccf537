//! Flattening of transition formulas into three-address form.
//!
//! The propositional encoding only knows how to talk about single
//! operator applications, so before encoding, every nested term is broken
//! into a chain of fresh helper variables: one per constant occurrence
//! and one per operator application, introduced bottom-up and
//! left-to-right. Helpers extend the existential prefix; the formula as a
//! whole keeps exactly the models of its source over the free variables.

use crate::fobnn::{Fobnn, FobnnAtom};
use crate::sign::Op;
use crate::term::{AnnotatedVar, Constant, Term};

/// An atom of the flattened formula. Every operand is a variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlatAtom {
    /// `var = c` for a literal or symbolic constant `c`.
    ConstDef { var: AnnotatedVar, value: Constant },
    /// `var = left op right`.
    OpDef { var: AnnotatedVar, op: Op, left: AnnotatedVar, right: AnnotatedVar },
    /// `var = alias`: the two variables share a sign.
    Copy { var: AnnotatedVar, alias: AnnotatedVar },
    /// `var >= 0`.
    Nonneg { var: AnnotatedVar },
    /// `left - right >= 0`, kept as a comparison so the encoder can lower
    /// it with a single difference helper.
    Ge { left: AnnotatedVar, right: AnnotatedVar },
}

impl std::fmt::Display for FlatAtom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FlatAtom::ConstDef { var, value } => write!(f, "{var} = {value}"),
            FlatAtom::OpDef { var, op, left, right } => {
                write!(f, "{var} = {left} {} {right}", op.symbol())
            }
            FlatAtom::Copy { var, alias } => write!(f, "{var} = {alias}"),
            FlatAtom::Nonneg { var } => write!(f, "{var} >= 0"),
            FlatAtom::Ge { left, right } => write!(f, "{left} >= {right}"),
        }
    }
}

/// A conjunction of flat atoms under an existential prefix, with the
/// species lists carried along for state decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatFormula {
    pub species: Vec<String>,
    /// Existentially bound variables: the source prefix followed by the
    /// helpers introduced here, in order of introduction.
    pub existentials: Vec<AnnotatedVar>,
    pub atoms: Vec<FlatAtom>,
}

impl FlatFormula {
    /// The flat atoms re-expressed as ordinary atoms, for differential
    /// testing against the set-valued evaluator.
    pub fn to_atoms(&self) -> Vec<FobnnAtom> {
        self.atoms
            .iter()
            .map(|a| match a {
                FlatAtom::ConstDef { var, value } => FobnnAtom::Eq(
                    Term::var(var.clone()),
                    Term::constant(value.clone()),
                ),
                FlatAtom::OpDef { var, op, left, right } => FobnnAtom::Eq(
                    Term::var(var.clone()),
                    Term::binary(*op, Term::var(left.clone()), Term::var(right.clone())),
                ),
                FlatAtom::Copy { var, alias } => {
                    FobnnAtom::Eq(Term::var(var.clone()), Term::var(alias.clone()))
                }
                FlatAtom::Nonneg { var } => FobnnAtom::Nonneg(Term::var(var.clone())),
                FlatAtom::Ge { left, right } => FobnnAtom::Nonneg(Term::sub(
                    Term::var(left.clone()),
                    Term::var(right.clone()),
                )),
            })
            .collect()
    }
}

impl std::fmt::Display for FlatFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for v in &self.existentials {
            write!(f, "exists {v}. ")?;
        }
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, " and ")?;
            }
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

struct Flattener {
    counter: usize,
    helpers: Vec<AnnotatedVar>,
    atoms: Vec<FlatAtom>,
}

impl Flattener {
    fn fresh(&mut self) -> AnnotatedVar {
        self.counter += 1;
        let w = AnnotatedVar::helper(format!("w{}", self.counter));
        self.helpers.push(w.clone());
        w
    }

    /// Reduce a term to a single variable, pushing defining atoms in
    /// bottom-up, left-to-right order.
    fn term(&mut self, t: &Term) -> AnnotatedVar {
        match t {
            Term::Var(v) => v.clone(),
            Term::Const(c) => {
                let w = self.fresh();
                self.atoms.push(FlatAtom::ConstDef { var: w.clone(), value: c.clone() });
                w
            }
            Term::Binary { op, left, right } => {
                let l = self.term(left);
                let r = self.term(right);
                let w = self.fresh();
                self.atoms.push(FlatAtom::OpDef { var: w.clone(), op: *op, left: l, right: r });
                w
            }
        }
    }

    fn atom(&mut self, atom: &FobnnAtom) {
        match atom {
            FobnnAtom::Eq(lhs, rhs) => {
                let l = self.term(lhs);
                let r = self.term(rhs);
                self.atoms.push(FlatAtom::Copy { var: l, alias: r });
            }
            // `X >= 0` and `X' >= X` shapes stay primitive; anything else
            // is named first.
            FobnnAtom::Nonneg(Term::Var(v)) => {
                self.atoms.push(FlatAtom::Nonneg { var: v.clone() });
            }
            FobnnAtom::Nonneg(Term::Binary { op: Op::Sub, left, right })
                if matches!((left.as_ref(), right.as_ref()), (Term::Var(_), Term::Var(_))) =>
            {
                let (Term::Var(l), Term::Var(r)) = (left.as_ref(), right.as_ref()) else {
                    unreachable!()
                };
                self.atoms.push(FlatAtom::Ge { left: l.clone(), right: r.clone() });
            }
            FobnnAtom::Nonneg(t) => {
                let w = self.term(t);
                self.atoms.push(FlatAtom::Nonneg { var: w });
            }
        }
    }
}

/// Flatten a transition formula into three-address atoms.
///
/// Helper numbering (`w1`, `w2`, ...) is global across the formula so the
/// result reads as one namespace; helpers are appended to the existential
/// prefix after the source's own bound variables.
pub fn flatten(f: &Fobnn) -> FlatFormula {
    let mut st = Flattener { counter: 0, helpers: Vec::new(), atoms: Vec::new() };
    for atom in &f.atoms {
        st.atom(atom);
    }
    let mut existentials = f.existentials.clone();
    existentials.extend(st.helpers);
    FlatFormula { species: f.species.clone(), existentials, atoms: st.atoms }
}
