//! From reaction network to DIMACS CNF, step by step.
//!
//! The pipeline has three stages. Building the transition formula
//! turns each ODE right-hand side into sign-level equations over
//! current, next and derivative variables. Flattening names every
//! intermediate subterm with a helper variable so each atom touches at
//! most one operator. Encoding maps every sign variable to a pair of
//! propositional variables and each flat atom to a fixed clause schema.
//!
//! Run with: `cargo run --example export_dimacs`

use fobnn_sat::{build_fobnn, emit_dimacs, encode, flatten, parse_native};

const NETWORK: &str = "\
species: A, B
const k1 > 0
const k2 > 0
r_fwd: A => B @ k1*A
r_rev: B => A @ k2*B
";

fn main() -> fobnn_sat::Result<()> {
    let rn = parse_native(NETWORK)?;

    let f = build_fobnn(&rn)?;
    println!("transition formula ({} atoms):", f.atoms.len());
    for atom in &f.atoms {
        println!("  {atom}");
    }
    println!();

    let flat = flatten(&f);
    println!("flattened ({} atoms):", flat.atoms.len());
    for atom in &flat.atoms {
        println!("  {atom}");
    }
    println!();

    let (cnf, registry) = encode(&flat);
    println!(
        "cnf: {} variables, {} clauses over {} sign variables",
        cnf.num_vars,
        cnf.clauses.len(),
        registry.len()
    );
    println!();

    // The DIMACS text carries the variable map in comments, so any
    // external solver's models can be decoded back to signs.
    print!("{}", emit_dimacs(&cnf, &registry));
    Ok(())
}
