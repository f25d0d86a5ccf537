//! Enumerating transitions with the incremental SAT session.
//!
//! A session compiles the transition formula once and then answers many
//! queries against the same solver: each model found is blocked with a
//! clause and the solver is asked again, so successive calls never
//! repeat a transition. Restricting to one source state is done with
//! assumptions, not new clauses — querying another source afterwards
//! reuses all the learnt work. The blocking clauses are permanent,
//! though, so to see the same slice twice, open a fresh session.
//!
//! Run with: `cargo run --example enumerate_transitions`

use fobnn_sat::{backend_from_env, build_fobnn, open_session, parse_native, BaseState};

const NETWORK: &str = "\
species: S, E, C, P
const k_on > 0
const k_off > 0
const k_cat > 0
r_on: S + E => C @ k_on*S*E
r_off: C => S + E @ k_off*C
r_cat: C => E + 2*P @ k_cat*C
";

fn main() -> fobnn_sat::Result<()> {
    let rn = parse_native(NETWORK)?;
    let f = build_fobnn(&rn)?;
    let mut session = open_session(&f, backend_from_env()?);
    println!("backend: {}", session.backend_name());

    // Successors of the fully charged initial state.
    let from = BaseState::parse("S=+,E=+,C=0,P=0", &f.species)?;
    let mut steps = session.enumerate_transitions(Some(&from), None)?;
    steps.sort();
    println!("successors of {}:", from.render(&f.species));
    for t in &steps {
        println!("  -> {}", t.to.render(&f.species));
    }
    // Binding consumes S and E and produces C; the sign abstraction
    // cannot tell whether either reactant runs out, so all four
    // combinations appear.
    assert_eq!(steps.len(), 4);

    // The same session, a different source: the assumptions of the
    // first query leave no trace.
    let from = BaseState::parse("S=0,E=0,C=+,P=0", &f.species)?;
    let mut steps = session.enumerate_transitions(Some(&from), None)?;
    steps.sort();
    println!("successors of {}:", from.render(&f.species));
    for t in &steps {
        println!("  -> {}", t.to.render(&f.species));
    }

    // Extended transitions carry the derivative signs that witness each
    // step; distinct witnesses of the same boolean step count
    // separately. Fresh session: the queries above blocked their models
    // for good.
    let from = BaseState::parse("S=+,E=+,C=0,P=0", &f.species)?;
    let mut session = open_session(&f, backend_from_env()?);
    let mut witnesses = session.enumerate_extended_transitions(Some(&from), None)?;
    witnesses.sort();
    println!("with derivative witnesses:");
    for t in &witnesses {
        println!("  {} -> {}", t.from.render(&f.species), t.to.render(&f.species));
    }

    // No source restriction enumerates the whole relation.
    let mut session = open_session(&f, backend_from_env()?);
    let all = session.enumerate_transitions(None, None)?;
    println!(
        "total: {} transitions over {} states",
        all.len(),
        1usize << f.species.len()
    );
    Ok(())
}
