//! Cross-checking the SAT pipeline against a brute-force oracle.
//!
//! The oracle enumerates transitions by evaluating the transition
//! formula directly over set-valued sign semantics, searching the
//! existential derivative variables by backtracking. It shares no code
//! with the flattener, the CNF encoder or the solvers, so agreement is
//! strong evidence both routes are right. The oracle is exponential in
//! the species count and guarded accordingly; it exists for validation,
//! not analysis.
//!
//! Run with: `cargo run --example oracle_crosscheck`

use std::collections::BTreeSet;

use fobnn_sat::{
    backend_by_name, brute_force_base_transitions, build_fobnn, open_session, parse_native,
    BaseState, Transition,
};

const NETWORK: &str = "\
species: A, B, X
const k1 > 0
const k2 > 0
const k3 > 0
r_make: A + X => B + X @ k1*A*X
r_back: B => A @ k2*B
r_sink: X => @ k3*X
";

fn main() -> fobnn_sat::Result<()> {
    let rn = parse_native(NETWORK)?;
    let f = build_fobnn(&rn)?;

    let reference: BTreeSet<Transition<BaseState>> = brute_force_base_transitions(&f)?;
    println!("oracle says: {} transitions", reference.len());

    for backend in ["varisat", "naive"] {
        let mut session = open_session(&f, backend_by_name(backend)?);
        let found: BTreeSet<Transition<BaseState>> =
            session.enumerate_transitions(None, None)?.into_iter().collect();
        let verdict = if found == reference { "agrees" } else { "DISAGREES" };
        println!("{backend}: {} transitions, {verdict}", found.len());
        assert_eq!(found, reference);
    }
    Ok(())
}
