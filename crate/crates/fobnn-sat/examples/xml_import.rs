//! Importing a network from the XML interchange format.
//!
//! The importer accepts a closed subset of the format: declared species
//! and parameters (positive or with an exact rational value), reactions
//! with reactant/product lists and a kinetic law given as a formula
//! attribute. Everything else is rejected loudly rather than guessed
//! at. The result is an ordinary network, identical to what the native
//! text parser produces.
//!
//! Run with: `cargo run --example xml_import`

use fobnn_sat::{parse_coresbml, parse_native, render_native};

const XML: &str = r#"<coresbml>
  <listOfSpecies>
    <species id="A"/>
    <species id="B"/>
  </listOfSpecies>
  <listOfParameters>
    <parameter id="k1" positive="true"/>
    <parameter id="k2" value="3/2"/>
  </listOfParameters>
  <listOfReactions>
    <reaction id="r_fwd">
      <listOfReactants>
        <speciesReference species="A"/>
      </listOfReactants>
      <listOfProducts>
        <speciesReference species="B" stoichiometry="2"/>
      </listOfProducts>
      <kineticLaw formula="k1*A"/>
    </reaction>
    <reaction id="r_rev">
      <listOfReactants>
        <speciesReference species="B"/>
      </listOfReactants>
      <listOfProducts>
        <speciesReference species="A"/>
      </listOfProducts>
      <kineticLaw formula="k2*B"/>
    </reaction>
  </listOfReactions>
</coresbml>
"#;

fn main() -> fobnn_sat::Result<()> {
    let rn = parse_coresbml(XML)?;
    let native = render_native(&rn);
    println!("imported network, canonical native form:");
    print!("{native}");

    // The canonical form round-trips through the native parser.
    let back = parse_native(&native)?;
    assert_eq!(back, rn);
    println!();
    println!("round trip through the native format: identical");

    // Malformed input names the problem instead of improvising.
    let err = parse_coresbml("<coresbml><unknown/></coresbml>").unwrap_err();
    println!("rejected element: {err}");
    Ok(())
}
