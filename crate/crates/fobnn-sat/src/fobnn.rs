//! Construction of the sign-abstracted transition formula of a network.
//!
//! The formula describes one abstract step of the ODE semantics: it binds
//! a derivative sign `X.` for every species in the current state and `X'.`
//! in the next state, requires both to agree with the reaction kinetics,
//! and couples the states through `X' = X + X.` together with
//! non-negativity of all species values. Its free variables are the
//! current and next species values; boolean states are assignments to
//! them, and satisfiability under such an assignment is existence of a
//! transition.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::network::{RateConstant, Reaction, ReactionNetwork};
use crate::parse::{parse_expr, Cursor};
use crate::sign::{Op, Sign};
use crate::term::{AnnotatedVar, Constant, Term, VarKind};

/// An atomic constraint of the transition formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FobnnAtom {
    /// `lhs = rhs`: the terms admit a common sign value.
    Eq(Term, Term),
    /// `t >= 0`: the term admits a non-negative sign value.
    Nonneg(Term),
}

impl std::fmt::Display for FobnnAtom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FobnnAtom::Eq(lhs, rhs) => write!(f, "{lhs} = {rhs}"),
            FobnnAtom::Nonneg(t) => write!(f, "{t} >= 0"),
        }
    }
}

/// The transition formula: an existential prefix over derivative
/// variables and a conjunction of atoms, free in `X` and `X'` for every
/// species `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fobnn {
    pub species: Vec<String>,
    pub existentials: Vec<AnnotatedVar>,
    pub atoms: Vec<FobnnAtom>,
}

/// The sign-level ODE right-hand sides of a network, one per species in
/// declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdeSystem {
    pub equations: Vec<(String, Term)>,
}

/// Net stoichiometric coefficient of `species` in `reaction`:
/// produced minus consumed.
fn net_coefficient(reaction: &Reaction, species: &str) -> BigRational {
    reaction.produced(species) - reaction.consumed(species)
}

/// Build the ODE right-hand side for every species: the sum over
/// reactions of the net coefficient times the kinetic term, with zero
/// summands dropped and unit coefficients elided.
pub fn build_odes(rn: &ReactionNetwork) -> OdeSystem {
    let one = BigRational::from_integer(1.into());
    let equations = rn
        .species
        .iter()
        .map(|x| {
            let mut rhs: Option<Term> = None;
            for r in &rn.reactions {
                let coef = net_coefficient(r, x);
                if coef.is_zero() {
                    continue;
                }
                let magnitude = coef.abs();
                let summand = if magnitude == one {
                    r.kinetics.clone()
                } else {
                    Term::mul(Term::Const(Constant::Num(magnitude)), r.kinetics.clone())
                };
                rhs = Some(match rhs {
                    None if coef.is_positive() => summand,
                    None => Term::neg(summand),
                    Some(acc) if coef.is_positive() => Term::add(acc, summand),
                    Some(acc) => Term::sub(acc, summand),
                });
            }
            (x.clone(), rhs.unwrap_or_else(Term::zero))
        })
        .collect();
    OdeSystem { equations }
}

/// Replace every current-state species variable by its next-state twin.
fn shift_to_next(t: &Term) -> Term {
    match t {
        Term::Var(v) if v.kind == VarKind::Current => Term::var(AnnotatedVar::next(&*v.base)),
        Term::Var(v) => Term::var(v.clone()),
        Term::Const(c) => Term::Const(c.clone()),
        Term::Binary { op, left, right } => {
            Term::binary(*op, shift_to_next(left), shift_to_next(right))
        }
    }
}

/// Build the transition formula of a network.
///
/// The body lists, in order: the ODE atoms `X. = rhs` in species
/// declaration order, their primed twins `X'. = rhs'`, and then per
/// species the coupling `X' = X + X.` followed by `X >= 0` and `X' >= 0`.
/// The existential prefix binds `X.` and `X'.` per species in declaration
/// order.
pub fn build_fobnn(rn: &ReactionNetwork) -> Result<Fobnn> {
    rn.require_valid()?;
    let odes = build_odes(rn);
    let mut atoms = Vec::new();
    for (x, rhs) in &odes.equations {
        atoms.push(FobnnAtom::Eq(Term::var(AnnotatedVar::dot(x)), rhs.clone()));
    }
    for (x, rhs) in &odes.equations {
        atoms.push(FobnnAtom::Eq(Term::var(AnnotatedVar::next_dot(x)), shift_to_next(rhs)));
    }
    for x in &rn.species {
        atoms.push(FobnnAtom::Eq(
            Term::var(AnnotatedVar::next(x)),
            Term::add(Term::var(AnnotatedVar::current(x)), Term::var(AnnotatedVar::dot(x))),
        ));
        atoms.push(FobnnAtom::Nonneg(Term::var(AnnotatedVar::current(x))));
        atoms.push(FobnnAtom::Nonneg(Term::var(AnnotatedVar::next(x))));
    }
    let existentials = rn
        .species
        .iter()
        .flat_map(|x| [AnnotatedVar::dot(x), AnnotatedVar::next_dot(x)])
        .collect();
    Ok(Fobnn { species: rn.species.clone(), existentials, atoms })
}

impl Fobnn {
    /// Append, for each listed species, the constraint `X' - X >= 0`
    /// excluding decay of a present species to absence in one step. Sound
    /// when every reaction consuming the species follows mass-action
    /// kinetics; see [`detect_mass_action`].
    pub fn add_mass_action_constraints(&mut self, species: &[String]) -> Result<()> {
        for name in species {
            if !self.species.contains(name) {
                return Err(Error::UnknownSpecies(name.clone()));
            }
        }
        for x in self.species.clone() {
            if species.contains(&x) {
                self.atoms.push(FobnnAtom::Nonneg(Term::sub(
                    Term::var(AnnotatedVar::next(&x)),
                    Term::var(AnnotatedVar::current(&x)),
                )));
            }
        }
        Ok(())
    }

    /// Append `X. = 0` for every species, restricting transitions to
    /// states where all derivatives vanish (steady-state mode).
    pub fn add_derivative_zero(&mut self) {
        for x in self.species.clone() {
            self.atoms.push(FobnnAtom::Eq(Term::var(AnnotatedVar::dot(&x)), Term::zero()));
        }
    }

    /// Parse and append user constraints. The text is a conjunction of
    /// atoms `term >= term` or `term = term` joined by `and`, over the
    /// free variables `X` (current) and `X'` (next) plus declared
    /// constants and numeric literals. Derivative variables are bound by
    /// the formula and cannot be constrained.
    pub fn add_constraint_text(&mut self, text: &str, constants: &[RateConstant]) -> Result<()> {
        let atoms = parse_constraints(text, &self.species, constants)?;
        self.atoms.extend(atoms);
        Ok(())
    }
}

/// Parse constraint text against a species and constant environment.
pub fn parse_constraints(
    text: &str,
    species: &[String],
    constants: &[RateConstant],
) -> Result<Vec<FobnnAtom>> {
    let joined = text
        .lines()
        .map(|l| match l.find('#') {
            Some(i) => &l[..i],
            None => l,
        })
        .collect::<Vec<_>>()
        .join(" ");
    let mut cur = Cursor::new(&joined, 1);
    let mut out = Vec::new();
    if cur.at_end() {
        return Ok(out);
    }
    loop {
        out.push(parse_constraint_atom(&mut cur, species, constants)?);
        if cur.at_end() {
            break;
        }
        let word = cur.ident()?;
        if word != "and" {
            return Err(cur.err("expected 'and' between constraint atoms"));
        }
    }
    Ok(out)
}

fn parse_constraint_atom(
    cur: &mut Cursor,
    species: &[String],
    constants: &[RateConstant],
) -> Result<FobnnAtom> {
    let mut resolver = |name: &str, suffix: &str, cur: &Cursor| -> Result<Term> {
        match suffix {
            "" => {
                if species.iter().any(|s| s == name) {
                    return Ok(Term::var(AnnotatedVar::current(name)));
                }
                if let Some(c) = constants.iter().find(|c| c.name == name) {
                    return Ok(Term::constant(c.as_constant()));
                }
                Err(cur.err(format!("unknown variable '{name}'")))
            }
            "'" => {
                if species.iter().any(|s| s == name) {
                    Ok(Term::var(AnnotatedVar::next(name)))
                } else {
                    Err(cur.err(format!("unknown species '{name}'")))
                }
            }
            _ => Err(cur.err(format!(
                "derivative variable '{name}{suffix}' is bound by the formula and cannot appear in constraints"
            ))),
        }
    };
    let lhs = parse_expr(cur, &mut resolver)?;
    cur.skip_ws();
    if cur.eat_str(">=") {
        let rhs = parse_expr(cur, &mut resolver)?;
        Ok(FobnnAtom::Nonneg(if rhs.is_zero_const() {
            lhs
        } else {
            Term::sub(lhs, rhs)
        }))
    } else if cur.eat_str("=") {
        let rhs = parse_expr(cur, &mut resolver)?;
        Ok(FobnnAtom::Eq(lhs, rhs))
    } else {
        Err(cur.err("expected '>=' or '='"))
    }
}

/// Split a term along its multiplication spine; `None` if any non-product
/// structure occurs (the term is then not a pure product of factors).
fn mul_factors(t: &Term) -> Option<Vec<&Term>> {
    match t {
        Term::Binary { op: Op::Mul, left, right } => {
            let mut l = mul_factors(left)?;
            l.extend(mul_factors(right)?);
            Some(l)
        }
        Term::Binary { .. } => None,
        leaf => Some(vec![leaf]),
    }
}

/// True when the kinetic term of the reaction is, up to associativity and
/// commutativity of `*`, a single positive rate constant times each
/// reactant raised to its (integer) stoichiometry.
fn has_mass_action_kinetics(r: &Reaction) -> bool {
    let Some(factors) = mul_factors(&r.kinetics) else {
        return false;
    };
    let mut constant_factors = 0usize;
    let mut var_counts: BTreeMap<&str, u64> = BTreeMap::new();
    for f in factors {
        match f {
            Term::Const(c) => {
                if c.sign() != Sign::Pos {
                    return false;
                }
                constant_factors += 1;
            }
            Term::Var(v) if v.kind == VarKind::Current => {
                *var_counts.entry(v.base.as_str()).or_insert(0) += 1;
            }
            _ => return false,
        }
    }
    if constant_factors != 1 {
        return false;
    }
    let mut expected: BTreeMap<&str, u64> = BTreeMap::new();
    for (sp, coef) in &r.reactants {
        if !coef.is_integer() {
            return false;
        }
        let Some(n) = coef.to_integer().to_u64() else {
            return false;
        };
        expected.insert(sp.as_str(), n);
    }
    var_counts == expected
}

/// The species for which the mass-action constraint `X' - X >= 0` is
/// justified: every reaction consuming the species must have mass-action
/// kinetics. Species that no reaction consumes qualify vacuously.
pub fn detect_mass_action(rn: &ReactionNetwork) -> Vec<String> {
    rn.species
        .iter()
        .filter(|x| {
            rn.reactions
                .iter()
                .filter(|r| r.consumed(x).is_positive())
                .all(has_mass_action_kinetics)
        })
        .cloned()
        .collect()
}
