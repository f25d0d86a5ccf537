//! Set-valued sign semantics and brute-force transition enumeration.
//!
//! This module is deliberately dumb: it evaluates terms into sign sets by
//! direct table lookups and decides formulas by exhaustive search. It
//! serves as the independent reference the SAT pipeline is validated
//! against, so it shares no code with flattening or encoding.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fobnn::{Fobnn, FobnnAtom};
use crate::sign::{abstract_apply, Sign, SignSet};
use crate::state::{BaseState, ExtendedState, Transition};
use crate::term::{AnnotatedVar, Term};

/// Maximum species count accepted by the brute-force enumerators.
pub const BRUTE_FORCE_SPECIES_LIMIT: usize = 6;

/// A partial assignment of signs to variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SignAssignment {
    map: BTreeMap<AnnotatedVar, Sign>,
}

impl SignAssignment {
    pub fn new() -> SignAssignment {
        SignAssignment::default()
    }

    pub fn bind(&mut self, var: AnnotatedVar, sign: Sign) {
        self.map.insert(var, sign);
    }

    pub fn unbind(&mut self, var: &AnnotatedVar) {
        self.map.remove(var);
    }

    pub fn get(&self, var: &AnnotatedVar) -> Option<Sign> {
        self.map.get(var).copied()
    }

    pub fn is_bound(&self, var: &AnnotatedVar) -> bool {
        self.map.contains_key(var)
    }
}

impl FromIterator<(AnnotatedVar, Sign)> for SignAssignment {
    fn from_iter<T: IntoIterator<Item = (AnnotatedVar, Sign)>>(iter: T) -> Self {
        SignAssignment { map: iter.into_iter().collect() }
    }
}

/// Evaluate a term to the set of signs it may take under the assignment.
/// Operators are applied relation-wise: the image of an input pair is a
/// set, and sets propagate by unioning over all input combinations.
pub fn eval_term(t: &Term, a: &SignAssignment) -> Result<SignSet> {
    match t {
        Term::Var(v) => a
            .get(v)
            .map(SignSet::singleton)
            .ok_or_else(|| Error::UnboundVariable(v.to_string())),
        Term::Const(c) => Ok(SignSet::singleton(c.sign())),
        Term::Binary { op, left, right } => {
            let l = eval_term(left, a)?;
            let r = eval_term(right, a)?;
            let mut out = SignSet::EMPTY;
            for s1 in l.iter() {
                for s2 in r.iter() {
                    out = out.union(abstract_apply(*op, s1, s2));
                }
            }
            Ok(out)
        }
    }
}

/// A first-order formula over sign variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FoFormula {
    /// `t1 = t2`: the terms admit a common sign value.
    Eq(Term, Term),
    /// `t >= 0`: the term admits a non-negative sign value.
    Nonneg(Term),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Exists(AnnotatedVar, Box<FoFormula>),
    Forall(AnnotatedVar, Box<FoFormula>),
}

impl FoFormula {
    pub fn and(l: FoFormula, r: FoFormula) -> FoFormula {
        FoFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: FoFormula, r: FoFormula) -> FoFormula {
        FoFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn not(f: FoFormula) -> FoFormula {
        FoFormula::Not(Box::new(f))
    }

    pub fn exists(v: AnnotatedVar, f: FoFormula) -> FoFormula {
        FoFormula::Exists(v, Box::new(f))
    }

    pub fn forall(v: AnnotatedVar, f: FoFormula) -> FoFormula {
        FoFormula::Forall(v, Box::new(f))
    }

    /// A vacuously true formula.
    pub fn truth() -> FoFormula {
        FoFormula::Nonneg(Term::zero())
    }
}

/// Evaluate a closed-enough formula: every free variable must be bound by
/// the assignment. Quantifiers range over all three signs.
pub fn eval_formula(f: &FoFormula, a: &SignAssignment) -> Result<bool> {
    match f {
        FoFormula::Eq(t1, t2) => {
            Ok(!eval_term(t1, a)?.intersect(eval_term(t2, a)?).is_empty())
        }
        FoFormula::Nonneg(t) => {
            let nonneg = SignSet::singleton(Sign::Pos).union(SignSet::singleton(Sign::Zero));
            Ok(!eval_term(t, a)?.intersect(nonneg).is_empty())
        }
        FoFormula::Not(g) => Ok(!eval_formula(g, a)?),
        FoFormula::And(l, r) => Ok(eval_formula(l, a)? && eval_formula(r, a)?),
        FoFormula::Or(l, r) => Ok(eval_formula(l, a)? || eval_formula(r, a)?),
        FoFormula::Exists(v, g) => {
            let mut scoped = a.clone();
            for s in Sign::ALL {
                scoped.bind(v.clone(), s);
                if eval_formula(g, &scoped)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        FoFormula::Forall(v, g) => {
            let mut scoped = a.clone();
            for s in Sign::ALL {
                scoped.bind(v.clone(), s);
                if !eval_formula(g, &scoped)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// The transition formula as a plain first-order formula: existential
/// prefix over the derivative variables, conjunction of the atoms.
pub fn formula_of(f: &Fobnn) -> FoFormula {
    let mut body = None;
    for atom in &f.atoms {
        let g = match atom {
            FobnnAtom::Eq(l, r) => FoFormula::Eq(l.clone(), r.clone()),
            FobnnAtom::Nonneg(t) => FoFormula::Nonneg(t.clone()),
        };
        body = Some(match body {
            None => g,
            Some(acc) => FoFormula::and(acc, g),
        });
    }
    let mut out = body.unwrap_or_else(FoFormula::truth);
    for v in f.existentials.iter().rev() {
        out = FoFormula::exists(v.clone(), out);
    }
    out
}

fn eval_atom(atom: &FobnnAtom, a: &SignAssignment) -> Result<bool> {
    match atom {
        FobnnAtom::Eq(t1, t2) => {
            Ok(!eval_term(t1, a)?.intersect(eval_term(t2, a)?).is_empty())
        }
        FobnnAtom::Nonneg(t) => {
            let nonneg = SignSet::singleton(Sign::Pos).union(SignSet::singleton(Sign::Zero));
            Ok(!eval_term(t, a)?.intersect(nonneg).is_empty())
        }
    }
}

/// Atoms paired with their variable sets, for early rejection during the
/// witness search: an atom is checked as soon as all its variables are
/// bound.
fn atoms_with_vars(atoms: &[FobnnAtom]) -> Vec<(&FobnnAtom, Vec<AnnotatedVar>)> {
    atoms
        .iter()
        .map(|atom| {
            let vars = match atom {
                FobnnAtom::Eq(l, r) => {
                    let mut v: Vec<AnnotatedVar> =
                        l.variables().into_iter().cloned().collect();
                    for x in r.variables() {
                        if !v.contains(x) {
                            v.push(x.clone());
                        }
                    }
                    v
                }
                FobnnAtom::Nonneg(t) => t.variables().into_iter().cloned().collect(),
            };
            (atom, vars)
        })
        .collect()
}

fn consistent_so_far(
    atoms: &[(&FobnnAtom, Vec<AnnotatedVar>)],
    a: &SignAssignment,
) -> Result<bool> {
    for (atom, vars) in atoms {
        if vars.iter().all(|v| a.is_bound(v)) && !eval_atom(atom, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Depth-first search for a witness assignment to the existential
/// variables. With `collect` the search visits every witness and reports
/// each full assignment to the callback; otherwise it stops at the first.
fn search_witness(
    atoms: &[(&FobnnAtom, Vec<AnnotatedVar>)],
    exists: &[AnnotatedVar],
    a: &mut SignAssignment,
    on_witness: &mut dyn FnMut(&SignAssignment),
    collect: bool,
) -> Result<bool> {
    if !consistent_so_far(atoms, a)? {
        return Ok(false);
    }
    let Some((var, rest)) = exists.split_first() else {
        on_witness(a);
        return Ok(true);
    };
    let mut found = false;
    for s in Sign::ALL {
        a.bind(var.clone(), s);
        if search_witness(atoms, rest, a, on_witness, collect)? {
            found = true;
            if !collect {
                a.unbind(var);
                return Ok(true);
            }
        }
    }
    a.unbind(var);
    Ok(found)
}

/// Decide whether an existentially closed conjunction of atoms holds under
/// a fixed assignment of its remaining free variables.
///
/// This is the prenex fragment the compiled formulas live in, so the
/// backtracking witness search applies directly.  Variables bound by
/// `assignment` must cover every free variable of the atoms.
pub fn satisfiable_under(
    atoms: &[FobnnAtom],
    existentials: &[AnnotatedVar],
    assignment: &SignAssignment,
) -> Result<bool> {
    let indexed = atoms_with_vars(atoms);
    let mut a = assignment.clone();
    let mut noop = |_: &SignAssignment| {};
    search_witness(&indexed, existentials, &mut a, &mut noop, false)
}

fn guard_species(f: &Fobnn, what: &'static str) -> Result<()> {
    if f.species.len() > BRUTE_FORCE_SPECIES_LIMIT {
        return Err(Error::SizeGuard {
            what,
            limit: BRUTE_FORCE_SPECIES_LIMIT,
            actual: f.species.len(),
        });
    }
    Ok(())
}

fn bind_base(a: &mut SignAssignment, species: &[String], state: &BaseState, next: bool) {
    for (name, sign) in species.iter().zip(state.signs()) {
        let var = if next {
            AnnotatedVar::next(name)
        } else {
            AnnotatedVar::current(name)
        };
        a.bind(var, *sign);
    }
}

/// Enumerate every boolean transition by trying all state pairs and
/// searching for a derivative witness for each.
pub fn brute_force_base_transitions(
    f: &Fobnn,
) -> Result<BTreeSet<Transition<BaseState>>> {
    guard_species(f, "brute-force enumeration species count")?;
    let atoms = atoms_with_vars(&f.atoms);
    let n = f.species.len();
    let mut out = BTreeSet::new();
    for from in BaseState::all(n) {
        for to in BaseState::all(n) {
            let mut a = SignAssignment::new();
            bind_base(&mut a, &f.species, &from, false);
            bind_base(&mut a, &f.species, &to, true);
            let mut noop = |_: &SignAssignment| {};
            if search_witness(&atoms, &f.existentials, &mut a, &mut noop, false)? {
                out.insert(Transition::new(from.clone(), to.clone()));
            }
        }
    }
    Ok(out)
}

/// Enumerate every extended transition: boolean state pairs together with
/// the derivative signs witnessing them.
pub fn brute_force_extended_transitions(
    f: &Fobnn,
) -> Result<BTreeSet<Transition<ExtendedState>>> {
    guard_species(f, "brute-force enumeration species count")?;
    let atoms = atoms_with_vars(&f.atoms);
    let n = f.species.len();
    let mut out = BTreeSet::new();
    for from in BaseState::all(n) {
        for to in BaseState::all(n) {
            let mut a = SignAssignment::new();
            bind_base(&mut a, &f.species, &from, false);
            bind_base(&mut a, &f.species, &to, true);
            let mut record = |witness: &SignAssignment| {
                let dots: Vec<Sign> = f
                    .species
                    .iter()
                    .map(|x| witness.get(&AnnotatedVar::dot(x)).expect("dot bound"))
                    .collect();
                let next_dots: Vec<Sign> = f
                    .species
                    .iter()
                    .map(|x| witness.get(&AnnotatedVar::next_dot(x)).expect("dot bound"))
                    .collect();
                out.insert(Transition::new(
                    ExtendedState::new(from.clone(), dots),
                    ExtendedState::new(to.clone(), next_dots),
                ));
            };
            search_witness(&atoms, &f.existentials, &mut a, &mut record, true)?;
        }
    }
    Ok(out)
}
