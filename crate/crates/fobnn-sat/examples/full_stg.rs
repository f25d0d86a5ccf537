//! Building a complete state transition graph.
//!
//! The graph over boolean states has one node per assignment of
//! present/absent to the species and one edge per satisfiable
//! transition. This example builds it for a small bistable switch,
//! prints Graphviz text, and reads a few facts off the graph object.
//!
//! Run with: `cargo run --example full_stg`

use fobnn_sat::{backend_from_env, build_fobnn, build_stg, parse_native};

// Two mutually exclusive products fed from a shared precursor: each
// product catalyses its own formation.
const NETWORK: &str = "\
species: G, X, Y
const ka > 0
const kb > 0
r_x: G + X => 2*X @ ka*G*X
r_y: G + Y => 2*Y @ kb*G*Y
";

fn main() -> fobnn_sat::Result<()> {
    let rn = parse_native(NETWORK)?;
    let f = build_fobnn(&rn)?;

    // `extended = false` projects derivatives away; `force = false`
    // keeps the 2^n species guard armed.
    let graph = build_stg(&f, backend_from_env()?, false, false)?;

    println!("{}", graph.to_dot(false));
    println!("nodes: {}", graph.node_count());
    println!("edges: {}", graph.edge_count());
    println!("density: {:.3}", graph.density_f64()?);

    let fixed = graph.fixed_points();
    println!("fixed points (out-degree one self loops):");
    for node in &fixed {
        println!("  {node}");
    }
    // With no reaction consuming G outright, any state lacking X and Y
    // is inert, as is any state lacking G.
    assert!(fixed.contains(&"G=0,X=0,Y=0"));

    // The same graph serializes to JSON for the `compare` tooling.
    let json = graph.to_json();
    println!("json payload: {} bytes", json.len());
    Ok(())
}
