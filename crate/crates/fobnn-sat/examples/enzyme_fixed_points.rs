//! Fixed points of an enzymatic reaction network.
//!
//! A fixed point is a boolean state whose only outgoing transition is
//! the self loop: once there, the sign dynamics cannot leave. For the
//! classic enzyme system the plain transition formula admits only inert
//! states (no reaction can fire), while adding the mass action
//! constraints `X' >= X` also certifies the running steady state where
//! every species is present.
//!
//! Run with: `cargo run --example enzyme_fixed_points`

use fobnn_sat::{
    backend_from_env, build_fobnn, detect_mass_action, open_session, parse_native,
    DEFAULT_LOOP_LIMIT,
};

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
    let mut plain = session.find_fixed_points(DEFAULT_LOOP_LIMIT)?;
    plain.sort();
    println!("fixed points of the plain formula:");
    for s in &plain {
        println!("  {}", s.render(&f.species));
    }

    // All kinetic laws here follow mass action, so the detector covers
    // every species; `X' >= X` then encodes that a present species
    // cannot silently vanish while its producers still run.
    let covered = detect_mass_action(&rn);
    assert_eq!(covered, rn.species);

    let mut f = build_fobnn(&rn)?;
    f.add_mass_action_constraints(&covered)?;
    let mut session = open_session(&f, backend_from_env()?);
    let mut constrained = session.find_fixed_points(DEFAULT_LOOP_LIMIT)?;
    constrained.sort();
    println!("with mass action constraints:");
    for s in &constrained {
        let fresh = !plain.contains(s);
        println!("  {}{}", s.render(&f.species), if fresh { "   (new)" } else { "" });
    }

    // The plain fixed points are exactly the inert states: no complex,
    // and never substrate and enzyme together.
    assert_eq!(plain.len(), 6);
    // The constraints add exactly one state: everything present.
    assert_eq!(constrained.len(), 7);
    Ok(())
}
