//! The sign semantics against the classic boolean semantics.
//!
//! The classic semantics fires one enabled reaction at a time: products
//! appear, reactants not re-produced may or may not run out. The sign
//! semantics instead asks whether some choice of derivative signs is
//! consistent with the kinetic laws. Neither contains the other in
//! general: the sign relation moves all coupled species at once where
//! the classic one steps reaction by reaction, and the classic relation
//! fires a reaction even where the summed kinetics force a different
//! direction.
//!
//! Run with: `cargo run --example classic_vs_sign`

use fobnn_sat::{
    backend_from_env, build_fobnn, build_stg, classic_stg, compare, parse_native,
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
    let sign = build_stg(&f, backend_from_env()?, false, false)?;
    let classic = classic_stg(&rn, false)?;

    let report = compare(&sign, &classic)?;
    println!("{report}");
    println!();

    // A sign self loop needs a zero derivative vector consistent with
    // the kinetics; a classic self loop needs an enabled reaction whose
    // firing changes nothing. Different conditions, different loops.
    let sign_loops = sign.named_edges().filter(|(a, b)| a == b).count();
    let classic_loops = classic.named_edges().filter(|(a, b)| a == b).count();
    println!("self loops: sign {sign_loops}, classic {classic_loops}");

    // The two graphs also disagree about what a dead end looks like:
    // the sign graph parks inert states on self loops, the classic one
    // gives them no outgoing edges at all, so it has no fixed points in
    // the self-loop sense.
    println!(
        "fixed points: sign {}, classic {}",
        sign.fixed_points().len(),
        classic.fixed_points().len()
    );

    // Disagreements in both directions, spelled out.
    for (a, b) in report.left_only_edges.iter().take(5) {
        println!("only sign:    {a} -> {b}");
    }
    for (a, b) in report.right_only_edges.iter().take(5) {
        println!("only classic: {a} -> {b}");
    }
    Ok(())
}
