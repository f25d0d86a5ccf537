//! Incremental SAT backends.
//!
//! The analysis only needs three operations — add a clause, solve under
//! assumptions, read the model — so backends hide behind a minimal
//! trait. The default is the varisat CDCL solver; a naive DPLL solver is
//! kept alongside it as an independent cross-check and is selectable via
//! the `FOBNN_SAT_BACKEND` environment variable.

use varisat::{ExtendFormula, Lit, Solver};

use crate::error::{Error, Result};

/// Name of the environment variable selecting the backend.
pub const BACKEND_ENV: &str = "FOBNN_SAT_BACKEND";

/// An incremental SAT solver over DIMACS-style signed literals.
pub trait SatBackend {
    fn name(&self) -> &'static str;

    /// Add a permanent clause.
    fn add_clause(&mut self, lits: &[i32]);

    /// Solve under the given assumptions (which hold for this call only).
    fn solve(&mut self, assumptions: &[i32]) -> Result<bool>;

    /// Value of a variable in the most recent satisfying model.
    /// Variables the solver left unassigned read as false.
    fn value(&self, var: i32) -> bool;
}

/// The default backend, wrapping the varisat CDCL solver.
pub struct VarisatBackend {
    solver: Solver<'static>,
    model: Vec<bool>,
}

impl VarisatBackend {
    pub fn new() -> VarisatBackend {
        VarisatBackend { solver: Solver::new(), model: Vec::new() }
    }
}

impl Default for VarisatBackend {
    fn default() -> Self {
        VarisatBackend::new()
    }
}

impl SatBackend for VarisatBackend {
    fn name(&self) -> &'static str {
        "varisat"
    }

    fn add_clause(&mut self, lits: &[i32]) {
        let clause: Vec<Lit> =
            lits.iter().map(|&l| Lit::from_dimacs(l as isize)).collect();
        self.solver.add_clause(&clause);
    }

    fn solve(&mut self, assumptions: &[i32]) -> Result<bool> {
        let lits: Vec<Lit> =
            assumptions.iter().map(|&l| Lit::from_dimacs(l as isize)).collect();
        self.solver.assume(&lits);
        let sat = self.solver.solve().map_err(|e| Error::Backend(e.to_string()))?;
        if sat {
            self.model.clear();
            if let Some(model) = self.solver.model() {
                for lit in model {
                    let d = lit.to_dimacs();
                    let var = d.unsigned_abs() as usize;
                    if self.model.len() < var {
                        self.model.resize(var, false);
                    }
                    self.model[var - 1] = d > 0;
                }
            }
        }
        Ok(sat)
    }

    fn value(&self, var: i32) -> bool {
        self.model.get(var as usize - 1).copied().unwrap_or(false)
    }
}

/// A deliberately simple DPLL solver: unit propagation plus chronological
/// backtracking, branching on the lowest unassigned variable with false
/// first. Slow but an independent referee for the default backend.
pub struct NaiveBackend {
    clauses: Vec<Vec<i32>>,
    num_vars: usize,
    model: Vec<bool>,
}

impl NaiveBackend {
    pub fn new() -> NaiveBackend {
        NaiveBackend { clauses: Vec::new(), num_vars: 0, model: Vec::new() }
    }

    fn grow(&mut self, lits: &[i32]) {
        for &l in lits {
            self.num_vars = self.num_vars.max(l.unsigned_abs() as usize);
        }
    }

    /// Unit propagation to fixpoint. Returns false on conflict.
    fn propagate(&self, assign: &mut [Option<bool>]) -> bool {
        loop {
            let mut changed = false;
            for clause in &self.clauses {
                let mut unassigned: Option<i32> = None;
                let mut satisfied = false;
                let mut open = 0;
                for &l in clause {
                    match assign[l.unsigned_abs() as usize - 1] {
                        Some(v) if v == (l > 0) => {
                            satisfied = true;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            open += 1;
                            unassigned = Some(l);
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match (open, unassigned) {
                    (0, _) => return false,
                    (1, Some(l)) => {
                        assign[l.unsigned_abs() as usize - 1] = Some(l > 0);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn dpll(&self, assign: &mut Vec<Option<bool>>) -> bool {
        if !self.propagate(assign) {
            return false;
        }
        let Some(var) = assign.iter().position(|v| v.is_none()) else {
            return true;
        };
        for value in [false, true] {
            let mut trial = assign.clone();
            trial[var] = Some(value);
            if self.dpll(&mut trial) {
                *assign = trial;
                return true;
            }
        }
        false
    }
}

impl Default for NaiveBackend {
    fn default() -> Self {
        NaiveBackend::new()
    }
}

impl SatBackend for NaiveBackend {
    fn name(&self) -> &'static str {
        "naive"
    }

    fn add_clause(&mut self, lits: &[i32]) {
        self.grow(lits);
        self.clauses.push(lits.to_vec());
    }

    fn solve(&mut self, assumptions: &[i32]) -> Result<bool> {
        self.grow(assumptions);
        let mut assign: Vec<Option<bool>> = vec![None; self.num_vars];
        for &l in assumptions {
            let slot = &mut assign[l.unsigned_abs() as usize - 1];
            match *slot {
                Some(v) if v != (l > 0) => return Ok(false),
                _ => *slot = Some(l > 0),
            }
        }
        let sat = self.dpll(&mut assign);
        if sat {
            self.model = assign.iter().map(|v| v.unwrap_or(false)).collect();
        }
        Ok(sat)
    }

    fn value(&self, var: i32) -> bool {
        self.model.get(var as usize - 1).copied().unwrap_or(false)
    }
}

/// Construct a backend by name: `varisat` or `naive`.
pub fn backend_by_name(name: &str) -> Result<Box<dyn SatBackend>> {
    match name {
        "varisat" => Ok(Box::new(VarisatBackend::new())),
        "naive" => Ok(Box::new(NaiveBackend::new())),
        other => Err(Error::Backend(format!(
            "unknown backend `{other}` (expected `varisat` or `naive`)"
        ))),
    }
}

/// Construct the backend selected by the `FOBNN_SAT_BACKEND` environment
/// variable, defaulting to varisat.
pub fn backend_from_env() -> Result<Box<dyn SatBackend>> {
    match std::env::var(BACKEND_ENV) {
        Ok(name) if !name.is_empty() => backend_by_name(&name),
        _ => backend_by_name("varisat"),
    }
}
