//! Incremental SAT sessions over a compiled transition formula.
//!
//! A session owns a backend loaded with the formula's CNF and drives the
//! enumeration queries: models are decoded into transitions, reported
//! ones are excluded with blocking clauses, and fixed points are found by
//! activating loop clauses (`X' = X` for every species) behind an
//! assumption literal and then checking each self-looping state for an
//! escaping transition.
//!
//! Blocking clauses are permanent, so a session enumerates each
//! transition at most once across its lifetime; open a fresh session for
//! an independent query.

use crate::backend::SatBackend;
use crate::cnf::{encode, VarRegistry};
use crate::error::{Error, Result};
use crate::flatten::flatten;
use crate::fobnn::Fobnn;
use crate::sign::Sign;
use crate::state::{BaseState, ExtendedState, Transition};
use crate::term::AnnotatedVar;

/// Default bound on candidate states examined by the fixed point search.
pub const DEFAULT_LOOP_LIMIT: usize = 5000;

/// An incremental solving session for one transition formula.
pub struct SolverSession {
    backend: Box<dyn SatBackend>,
    registry: VarRegistry,
    species: Vec<String>,
    loop_flag: Option<i32>,
    guards: usize,
}

/// Compile a formula to CNF and load it into the given backend.
pub fn open_session(f: &Fobnn, backend: Box<dyn SatBackend>) -> SolverSession {
    let flat = flatten(f);
    let (cnf, registry) = encode(&flat);
    let mut backend = backend;
    for clause in &cnf.clauses {
        backend.add_clause(clause);
    }
    SolverSession {
        backend,
        registry,
        species: f.species.clone(),
        loop_flag: None,
        guards: 0,
    }
}

/// The two positive literals making a pair differ from a given sign:
/// exactly one of them is true iff the pair decodes to something else.
fn diff_lits(pair: (i32, i32), sign: Sign) -> [i32; 2] {
    let (p0, p1) = pair;
    match sign {
        Sign::Pos => [-p0, p1],
        Sign::Neg => [p0, -p1],
        Sign::Zero => [p0, p1],
    }
}

impl SolverSession {
    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn registry(&self) -> &VarRegistry {
        &self.registry
    }

    pub fn backend_name(&self) -> &'static str {
        self.backend.name()
    }

    fn pair_of(&self, v: &AnnotatedVar) -> Result<(i32, i32)> {
        self.registry
            .pair(v)
            .ok_or_else(|| Error::Internal(format!("variable {v} is not encoded")))
    }

    fn species_var(&self, i: usize, next: bool) -> AnnotatedVar {
        if next {
            AnnotatedVar::next(&self.species[i])
        } else {
            AnnotatedVar::current(&self.species[i])
        }
    }

    fn dot_var(&self, i: usize, next: bool) -> AnnotatedVar {
        if next {
            AnnotatedVar::next_dot(&self.species[i])
        } else {
            AnnotatedVar::dot(&self.species[i])
        }
    }

    /// Assumption literals pinning the current-state variables to `state`.
    pub fn assumptions_for_state(&self, state: &BaseState) -> Result<Vec<i32>> {
        if state.len() != self.species.len() {
            return Err(Error::InvalidState(format!(
                "state has {} species, formula has {}",
                state.len(),
                self.species.len()
            )));
        }
        let mut lits = Vec::with_capacity(2 * self.species.len());
        for (i, sign) in state.signs().iter().enumerate() {
            let (p0, p1) = self.pair_of(&self.species_var(i, false))?;
            match sign {
                Sign::Pos => {
                    lits.push(p0);
                    lits.push(-p1);
                }
                Sign::Zero => {
                    lits.push(-p0);
                    lits.push(-p1);
                }
                Sign::Neg => {
                    return Err(Error::InvalidState(
                        "species states cannot be negative".into(),
                    ))
                }
            }
        }
        Ok(lits)
    }

    fn decode_pair(&self, pair: (i32, i32)) -> Result<Sign> {
        match (self.backend.value(pair.0), self.backend.value(pair.1)) {
            (true, false) => Ok(Sign::Pos),
            (false, true) => Ok(Sign::Neg),
            (false, false) => Ok(Sign::Zero),
            (true, true) => Err(Error::Internal(
                "model violates a sign exclusion clause".into(),
            )),
        }
    }

    fn decode_base(&self, next: bool) -> Result<BaseState> {
        let mut signs = Vec::with_capacity(self.species.len());
        for i in 0..self.species.len() {
            let sign = self.decode_pair(self.pair_of(&self.species_var(i, next))?)?;
            if sign == Sign::Neg {
                return Err(Error::Internal(
                    "model assigns a negative sign to a species".into(),
                ));
            }
            signs.push(sign);
        }
        BaseState::new(signs)
    }

    fn decode_extended(&self, next: bool) -> Result<ExtendedState> {
        let base = self.decode_base(next)?;
        let mut derivatives = Vec::with_capacity(self.species.len());
        for i in 0..self.species.len() {
            derivatives.push(self.decode_pair(self.pair_of(&self.dot_var(i, next))?)?);
        }
        Ok(ExtendedState::new(base, derivatives))
    }

    /// Permanently exclude a transition from future models.
    pub fn block_base_transition(&mut self, t: &Transition<BaseState>) -> Result<()> {
        let mut clause = Vec::with_capacity(4 * self.species.len());
        for (i, sign) in t.from.signs().iter().enumerate() {
            clause.extend(diff_lits(self.pair_of(&self.species_var(i, false))?, *sign));
        }
        for (i, sign) in t.to.signs().iter().enumerate() {
            clause.extend(diff_lits(self.pair_of(&self.species_var(i, true))?, *sign));
        }
        self.backend.add_clause(&clause);
        Ok(())
    }

    /// Permanently exclude an extended transition (including its
    /// derivative signs) from future models.
    pub fn block_extended_transition(
        &mut self,
        t: &Transition<ExtendedState>,
    ) -> Result<()> {
        let mut clause = Vec::with_capacity(8 * self.species.len());
        for (next, state) in [(false, &t.from), (true, &t.to)] {
            for (i, sign) in state.base.signs().iter().enumerate() {
                clause.extend(diff_lits(self.pair_of(&self.species_var(i, next))?, *sign));
            }
            for (i, sign) in state.derivatives.iter().enumerate() {
                clause.extend(diff_lits(self.pair_of(&self.dot_var(i, next))?, *sign));
            }
        }
        self.backend.add_clause(&clause);
        Ok(())
    }

    /// Enumerate boolean transitions, optionally restricted to one source
    /// state, blocking each as it is found. Stops at `limit` if given.
    pub fn enumerate_transitions(
        &mut self,
        from: Option<&BaseState>,
        limit: Option<usize>,
    ) -> Result<Vec<Transition<BaseState>>> {
        let assumptions = match from {
            Some(s) => self.assumptions_for_state(s)?,
            None => Vec::new(),
        };
        let mut out = Vec::new();
        while limit.map_or(true, |n| out.len() < n) {
            if !self.backend.solve(&assumptions)? {
                break;
            }
            let t = Transition::new(self.decode_base(false)?, self.decode_base(true)?);
            self.block_base_transition(&t)?;
            out.push(t);
        }
        Ok(out)
    }

    /// Enumerate extended transitions: distinct derivative witnesses of
    /// the same boolean step count separately.
    pub fn enumerate_extended_transitions(
        &mut self,
        from: Option<&BaseState>,
        limit: Option<usize>,
    ) -> Result<Vec<Transition<ExtendedState>>> {
        let assumptions = match from {
            Some(s) => self.assumptions_for_state(s)?,
            None => Vec::new(),
        };
        let mut out = Vec::new();
        while limit.map_or(true, |n| out.len() < n) {
            if !self.backend.solve(&assumptions)? {
                break;
            }
            let t = Transition::new(
                self.decode_extended(false)?,
                self.decode_extended(true)?,
            );
            self.block_extended_transition(&t)?;
            out.push(t);
        }
        Ok(out)
    }

    /// Install the loop clauses `X' = X` behind a fresh activation
    /// literal and return that literal. Assuming it restricts models to
    /// self-loops; leaving it free keeps the clauses inert. Idempotent.
    pub fn install_loop_machinery(&mut self) -> Result<i32> {
        if let Some(flag) = self.loop_flag {
            return Ok(flag);
        }
        let flag = self.registry.fresh_aux("loop");
        for i in 0..self.species.len() {
            let (c0, c1) = self.pair_of(&self.species_var(i, false))?;
            let (n0, n1) = self.pair_of(&self.species_var(i, true))?;
            self.backend.add_clause(&[-flag, -c0, n0]);
            self.backend.add_clause(&[-flag, -n0, c0]);
            self.backend.add_clause(&[-flag, -c1, n1]);
            self.backend.add_clause(&[-flag, -n1, c1]);
        }
        self.loop_flag = Some(flag);
        Ok(flag)
    }

    /// Find all fixed points: states whose only outgoing transition is
    /// the self-loop.
    ///
    /// Candidates are enumerated by solving under the loop flag; each is
    /// then checked for an escaping transition by assuming the state
    /// together with a fresh guard whose clause demands a different
    /// successor. Run this on a session with no prior blocking, or
    /// escapes may be missed.
    pub fn find_fixed_points(&mut self, loop_limit: usize) -> Result<Vec<BaseState>> {
        let flag = self.install_loop_machinery()?;
        let mut out = Vec::new();
        for _ in 0..loop_limit {
            if !self.backend.solve(&[flag])? {
                return Ok(out);
            }
            let sigma = self.decode_base(false)?;

            // Guarded escape clause: some next-state variable differs.
            self.guards += 1;
            let guard = self.registry.fresh_aux(format!("guard{}", self.guards));
            let mut clause = vec![-guard];
            for (i, sign) in sigma.signs().iter().enumerate() {
                clause.extend(diff_lits(self.pair_of(&self.species_var(i, true))?, *sign));
            }
            self.backend.add_clause(&clause);

            let mut assumptions = self.assumptions_for_state(&sigma)?;
            assumptions.push(guard);
            let escapes = self.backend.solve(&assumptions)?;
            if !escapes {
                out.push(sigma.clone());
            }
            self.block_base_transition(&Transition::new(sigma.clone(), sigma))?;
        }
        Err(Error::SizeGuard {
            what: "fixed point candidate count",
            limit: loop_limit,
            actual: loop_limit + 1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{NaiveBackend, VarisatBackend};
    use crate::fixtures::renz;
    use crate::fobnn::build_fobnn;
    use crate::oracle::{brute_force_base_transitions, brute_force_extended_transitions};
    use crate::parse_native;
    use std::collections::BTreeSet;

    fn varisat() -> Box<dyn SatBackend> {
        Box::new(VarisatBackend::new())
    }

    fn naive() -> Box<dyn SatBackend> {
        Box::new(NaiveBackend::new())
    }

    fn state(f: &Fobnn, text: &str) -> BaseState {
        BaseState::parse(text, &f.species).unwrap()
    }

    #[test]
    fn enumeration_matches_the_brute_force_oracle() {
        for src in [
            "species: A\nconst k > 0\nr: A => @ k*A\n",
            "species: A, B\nconst k > 0\nr: A => B @ k*A\n",
            "species: A, B\nconst k1 > 0\nconst k2 > 0\n\
             r1: A => B @ k1*A\nr2: B => A @ k2*B\n",
        ] {
            let f = build_fobnn(&parse_native(src).unwrap()).unwrap();
            let expected = brute_force_base_transitions(&f).unwrap();
            for backend in [varisat(), naive()] {
                let mut session = open_session(&f, backend);
                let got: BTreeSet<_> = session
                    .enumerate_transitions(None, None)
                    .unwrap()
                    .into_iter()
                    .collect();
                assert_eq!(got, expected, "{} on {src}", session.backend_name());
            }
        }
    }

    #[test]
    fn extended_enumeration_matches_the_brute_force_oracle() {
        let src = "species: A, B\nconst k1 > 0\nconst k2 > 0\n\
                   r1: A => B @ k1*A\nr2: B => A @ k2*B\n";
        let f = build_fobnn(&parse_native(src).unwrap()).unwrap();
        let expected = brute_force_extended_transitions(&f).unwrap();
        let mut session = open_session(&f, varisat());
        let got: BTreeSet<_> = session
            .enumerate_extended_transitions(None, None)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn source_restriction_matches_filtering() {
        let f = build_fobnn(&renz()).unwrap();
        let from = state(&f, "S=+,E=+,C=0,P=0");
        let expected: BTreeSet<_> = brute_force_base_transitions(&f)
            .unwrap()
            .into_iter()
            .filter(|t| t.from == from)
            .collect();
        let mut session = open_session(&f, varisat());
        let got: BTreeSet<_> = session
            .enumerate_transitions(Some(&from), None)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn limit_truncates_the_enumeration() {
        let f = build_fobnn(&renz()).unwrap();
        let mut session = open_session(&f, varisat());
        assert_eq!(session.enumerate_transitions(None, Some(3)).unwrap().len(), 3);
    }

    #[test]
    fn loop_clauses_are_inert_until_assumed() {
        let f = build_fobnn(&renz()).unwrap();
        let mut plain = open_session(&f, varisat());
        let without: BTreeSet<_> =
            plain.enumerate_transitions(None, None).unwrap().into_iter().collect();

        let mut wired = open_session(&f, varisat());
        wired.install_loop_machinery().unwrap();
        let with: BTreeSet<_> =
            wired.enumerate_transitions(None, None).unwrap().into_iter().collect();
        assert_eq!(without, with);
    }

    #[test]
    fn unsatisfiable_formulas_enumerate_nothing() {
        // A species pinned to a negative constant conflicts with its
        // non-negativity.
        let a = AnnotatedVar::current("A");
        let f = Fobnn {
            species: vec!["A".into()],
            existentials: vec![],
            atoms: vec![crate::fobnn::FobnnAtom::Eq(
                crate::term::Term::var(a),
                crate::term::Term::constant(crate::term::Constant::num(-1)),
            )],
        };
        let mut session = open_session(&f, varisat());
        assert!(session.enumerate_transitions(None, None).unwrap().is_empty());
        let mut session = open_session(&f, varisat());
        assert!(session.find_fixed_points(DEFAULT_LOOP_LIMIT).unwrap().is_empty());
    }

    #[test]
    fn enumeration_is_deterministic() {
        let f = build_fobnn(&renz()).unwrap();
        let run = || {
            let mut s = open_session(&f, varisat());
            s.enumerate_transitions(None, None).unwrap()
        };
        assert_eq!(run(), run());
    }

    /// Fixed points derived from a full transition set: states whose
    /// sole successor is themselves.
    fn oracle_fixed_points(f: &Fobnn) -> BTreeSet<BaseState> {
        let transitions = brute_force_base_transitions(f).unwrap();
        BaseState::all(f.species.len())
            .into_iter()
            .filter(|s| {
                let succs: Vec<_> =
                    transitions.iter().filter(|t| t.from == *s).collect();
                succs.len() == 1 && succs[0].to == *s
            })
            .collect()
    }

    #[test]
    fn decay_network_has_a_single_fixed_point() {
        let f = build_fobnn(
            &parse_native("species: A\nconst k > 0\nr: A => @ k*A\n").unwrap(),
        )
        .unwrap();
        let mut session = open_session(&f, varisat());
        let got = session.find_fixed_points(DEFAULT_LOOP_LIMIT).unwrap();
        assert_eq!(got, vec![state(&f, "A=0")]);
        assert_eq!(
            got.iter().cloned().collect::<BTreeSet<_>>(),
            oracle_fixed_points(&f)
        );
    }

    #[test]
    fn enzyme_fixed_points_are_the_inert_states() {
        // Without further constraints the dead states are exactly those
        // where every kinetic term vanishes: no complex, and no substrate
        // together with enzyme.
        let f = build_fobnn(&renz()).unwrap();
        let mut session = open_session(&f, varisat());
        let got: BTreeSet<_> =
            session.find_fixed_points(DEFAULT_LOOP_LIMIT).unwrap().into_iter().collect();
        let expected: BTreeSet<_> = [
            "S=0,E=0,C=0,P=0",
            "S=0,E=0,C=0,P=+",
            "S=+,E=0,C=0,P=0",
            "S=+,E=0,C=0,P=+",
            "S=0,E=+,C=0,P=0",
            "S=0,E=+,C=0,P=+",
        ]
        .iter()
        .map(|s| state(&f, s))
        .collect();
        assert_eq!(got, expected);
        assert_eq!(got, oracle_fixed_points(&f));
    }

    #[test]
    fn mass_action_constraints_add_the_saturated_fixed_point() {
        // Under mass action conservation reasoning (species never
        // decrease), the all-positive state becomes inescapable too.
        let mut f = build_fobnn(&renz()).unwrap();
        let all = f.species.clone();
        f.add_mass_action_constraints(&all).unwrap();
        let mut session = open_session(&f, varisat());
        let got: BTreeSet<_> =
            session.find_fixed_points(DEFAULT_LOOP_LIMIT).unwrap().into_iter().collect();
        let mut expected: BTreeSet<_> = [
            "S=0,E=0,C=0,P=0",
            "S=0,E=0,C=0,P=+",
            "S=+,E=0,C=0,P=0",
            "S=+,E=0,C=0,P=+",
            "S=0,E=+,C=0,P=0",
            "S=0,E=+,C=0,P=+",
        ]
        .iter()
        .map(|s| state(&f, s))
        .collect();
        expected.insert(state(&f, "S=+,E=+,C=+,P=+"));
        assert_eq!(got, expected);
        assert_eq!(got, oracle_fixed_points(&f));
    }

    #[test]
    fn fixed_point_search_honors_the_loop_limit() {
        let f = build_fobnn(&renz()).unwrap();
        let mut session = open_session(&f, varisat());
        let err = session.find_fixed_points(1).unwrap_err();
        assert!(err.is_guard(), "expected a guard error, got {err}");
    }

    #[test]
    fn naive_backend_agrees_on_fixed_points() {
        let f = build_fobnn(&renz()).unwrap();
        let mut fast = open_session(&f, varisat());
        let mut slow = open_session(&f, naive());
        let a: BTreeSet<_> =
            fast.find_fixed_points(DEFAULT_LOOP_LIMIT).unwrap().into_iter().collect();
        let b: BTreeSet<_> =
            slow.find_fixed_points(DEFAULT_LOOP_LIMIT).unwrap().into_iter().collect();
        assert_eq!(a, b);
    }
}
