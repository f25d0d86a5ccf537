//! Import of reaction networks from a small SBML-like XML dialect.
//!
//! The accepted subset is deliberately narrow: species with an `id`,
//! parameters that are either declared `positive="true"` or given an
//! exact numeric `value`, and reactions with reactant/product reference
//! lists plus a kinetic law carried as a `formula` attribute in the same
//! expression syntax as the native text format. Anything else — events,
//! rules, MathML bodies, unknown attributes — is rejected by name rather
//! than silently skipped, so a file either imports faithfully or fails
//! loudly.
//!
//! ```xml
//! <coresbml>
//!   <listOfSpecies>
//!     <species id="S"/>
//!   </listOfSpecies>
//!   <listOfParameters>
//!     <parameter id="k" positive="true"/>
//!   </listOfParameters>
//!   <listOfReactions>
//!     <reaction id="r">
//!       <listOfReactants>
//!         <speciesReference species="S" stoichiometry="2"/>
//!       </listOfReactants>
//!       <listOfProducts/>
//!       <kineticLaw formula="k * S * S"/>
//!     </reaction>
//!   </listOfReactions>
//! </coresbml>
//! ```

use std::collections::BTreeMap;

use num_rational::BigRational;
use roxmltree::{Document, Node};

use crate::error::{Error, Result};
use crate::network::{RateConstant, Reaction, ReactionNetwork};
use crate::parse::{parse_attribute_number, parse_kinetics_text};

fn unsupported(what: impl std::fmt::Display) -> Error {
    Error::CoreSbml(format!("unsupported: {what}"))
}

fn check_attrs(node: &Node, allowed: &[&str]) -> Result<()> {
    for attr in node.attributes() {
        if !allowed.contains(&attr.name()) {
            return Err(unsupported(format!(
                "attribute `{}` on <{}>",
                attr.name(),
                node.tag_name().name()
            )));
        }
    }
    Ok(())
}

fn require_attr<'a>(node: &'a Node, name: &str) -> Result<&'a str> {
    node.attribute(name).ok_or_else(|| {
        Error::CoreSbml(format!(
            "<{}> is missing the `{name}` attribute",
            node.tag_name().name()
        ))
    })
}

/// Element children, rejecting stray text content.
fn children<'a, 'input>(node: &'a Node<'a, 'input>) -> Result<Vec<Node<'a, 'input>>> {
    let mut out = Vec::new();
    for child in node.children() {
        if child.is_element() {
            out.push(child);
        } else if child.is_text()
            && !child.text().unwrap_or("").trim().is_empty()
        {
            return Err(Error::CoreSbml(format!(
                "unexpected text content inside <{}>",
                node.tag_name().name()
            )));
        }
    }
    Ok(out)
}

fn expect_leaf(node: &Node) -> Result<()> {
    if let Some(child) = children(node)?.first() {
        return Err(unsupported(child.tag_name().name()));
    }
    Ok(())
}

fn parse_species_list(list: &Node, rn: &mut ReactionNetwork) -> Result<()> {
    check_attrs(list, &[])?;
    for node in children(list)? {
        if node.tag_name().name() != "species" {
            return Err(unsupported(node.tag_name().name()));
        }
        check_attrs(&node, &["id"])?;
        expect_leaf(&node)?;
        rn.species.push(require_attr(&node, "id")?.to_string());
    }
    Ok(())
}

fn parse_parameter_list(list: &Node, rn: &mut ReactionNetwork) -> Result<()> {
    check_attrs(list, &[])?;
    for node in children(list)? {
        if node.tag_name().name() != "parameter" {
            return Err(unsupported(node.tag_name().name()));
        }
        check_attrs(&node, &["id", "positive", "value"])?;
        expect_leaf(&node)?;
        let id = require_attr(&node, "id")?.to_string();
        let value = match (node.attribute("positive"), node.attribute("value")) {
            (Some("true"), None) => None,
            (Some(other), None) => {
                return Err(Error::CoreSbml(format!(
                    "parameter `{id}`: `positive` must be \"true\", got \"{other}\""
                )))
            }
            (None, Some(v)) => Some(parse_attribute_number(v).map_err(|e| {
                Error::CoreSbml(format!("parameter `{id}`: invalid value: {e}"))
            })?),
            (Some(_), Some(_)) => {
                return Err(Error::CoreSbml(format!(
                    "parameter `{id}` declares both `positive` and `value`"
                )))
            }
            (None, None) => {
                return Err(Error::CoreSbml(format!(
                    "parameter `{id}` needs `positive=\"true\"` or a `value`"
                )))
            }
        };
        rn.constants.push(RateConstant { name: id, value });
    }
    Ok(())
}

fn parse_pool(list: &Node, id: &str) -> Result<BTreeMap<String, BigRational>> {
    check_attrs(list, &[])?;
    let mut pool: BTreeMap<String, BigRational> = BTreeMap::new();
    for node in children(list)? {
        if node.tag_name().name() != "speciesReference" {
            return Err(unsupported(node.tag_name().name()));
        }
        check_attrs(&node, &["species", "stoichiometry"])?;
        expect_leaf(&node)?;
        let species = require_attr(&node, "species")?.to_string();
        let coef = match node.attribute("stoichiometry") {
            None => BigRational::from_integer(1.into()),
            Some(text) => parse_attribute_number(text).map_err(|e| {
                Error::CoreSbml(format!(
                    "reaction `{id}`: invalid stoichiometry for `{species}`: {e}"
                ))
            })?,
        };
        *pool.entry(species).or_insert_with(|| BigRational::from_integer(0.into())) +=
            coef;
    }
    Ok(pool)
}

fn parse_reaction(node: &Node, rn: &mut ReactionNetwork) -> Result<()> {
    check_attrs(node, &["id"])?;
    let id = require_attr(node, "id")?.to_string();
    let mut reactants = None;
    let mut products = None;
    let mut kinetics = None;
    for child in children(node)? {
        match child.tag_name().name() {
            "listOfReactants" if reactants.is_none() => {
                reactants = Some(parse_pool(&child, &id)?);
            }
            "listOfProducts" if products.is_none() => {
                products = Some(parse_pool(&child, &id)?);
            }
            "kineticLaw" if kinetics.is_none() => {
                check_attrs(&child, &["formula"])?;
                expect_leaf(&child)?;
                let formula = require_attr(&child, "formula")?;
                kinetics = Some(
                    parse_kinetics_text(formula, &rn.species, &rn.constants).map_err(
                        |e| {
                            Error::CoreSbml(format!(
                                "reaction `{id}`: invalid kinetic law: {e}"
                            ))
                        },
                    )?,
                );
            }
            "listOfReactants" | "listOfProducts" | "kineticLaw" => {
                return Err(Error::CoreSbml(format!(
                    "reaction `{id}` repeats <{}>",
                    child.tag_name().name()
                )))
            }
            other => return Err(unsupported(other)),
        }
    }
    let kinetics = kinetics.ok_or_else(|| {
        Error::CoreSbml(format!("reaction `{id}` has no <kineticLaw>"))
    })?;
    rn.reactions.push(Reaction {
        id,
        reactants: reactants.unwrap_or_default(),
        products: products.unwrap_or_default(),
        kinetics,
    });
    Ok(())
}

/// Parse a reaction network from the XML dialect.
pub fn parse_coresbml(text: &str) -> Result<ReactionNetwork> {
    let doc = Document::parse(text)
        .map_err(|e| Error::CoreSbml(format!("malformed XML: {e}")))?;
    let root = doc.root_element();
    if root.tag_name().name() != "coresbml" {
        return Err(Error::CoreSbml(format!(
            "root element must be <coresbml>, found <{}>",
            root.tag_name().name()
        )));
    }
    check_attrs(&root, &["version"])?;

    let mut rn =
        ReactionNetwork { species: vec![], constants: vec![], reactions: vec![] };
    // Declarations first, then reactions, regardless of document order,
    // so kinetic laws can always resolve their symbols.
    for node in children(&root)? {
        match node.tag_name().name() {
            "listOfSpecies" => parse_species_list(&node, &mut rn)?,
            "listOfParameters" => parse_parameter_list(&node, &mut rn)?,
            "listOfReactions" => {}
            other => return Err(unsupported(other)),
        }
    }
    for node in children(&root)? {
        if node.tag_name().name() == "listOfReactions" {
            check_attrs(&node, &[])?;
            for reaction in children(&node)? {
                if reaction.tag_name().name() != "reaction" {
                    return Err(unsupported(reaction.tag_name().name()));
                }
                parse_reaction(&reaction, &mut rn)?;
            }
        }
    }
    rn.require_valid()?;
    Ok(rn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::renz;

    const RENZ_XML: &str = r#"<coresbml>
  <listOfSpecies>
    <species id="S"/>
    <species id="E"/>
    <species id="C"/>
    <species id="P"/>
  </listOfSpecies>
  <listOfParameters>
    <parameter id="k_on" positive="true"/>
    <parameter id="k_off" positive="true"/>
    <parameter id="k_cat" positive="true"/>
  </listOfParameters>
  <listOfReactions>
    <reaction id="r_on">
      <listOfReactants>
        <speciesReference species="S"/>
        <speciesReference species="E"/>
      </listOfReactants>
      <listOfProducts>
        <speciesReference species="C"/>
      </listOfProducts>
      <kineticLaw formula="k_on*S*E"/>
    </reaction>
    <reaction id="r_off">
      <listOfReactants>
        <speciesReference species="C"/>
      </listOfReactants>
      <listOfProducts>
        <speciesReference species="S"/>
        <speciesReference species="E"/>
      </listOfProducts>
      <kineticLaw formula="k_off*C"/>
    </reaction>
    <reaction id="r_cat">
      <listOfReactants>
        <speciesReference species="C"/>
      </listOfReactants>
      <listOfProducts>
        <speciesReference species="E"/>
        <speciesReference species="P" stoichiometry="2"/>
      </listOfProducts>
      <kineticLaw formula="k_cat*C"/>
    </reaction>
  </listOfReactions>
</coresbml>
"#;

    #[test]
    fn the_enzyme_network_imports_identically() {
        assert_eq!(parse_coresbml(RENZ_XML).unwrap(), renz());
    }

    #[test]
    fn declarations_may_follow_reactions() {
        let reordered = r#"<coresbml>
  <listOfReactions>
    <reaction id="r">
      <listOfReactants><speciesReference species="A"/></listOfReactants>
      <kineticLaw formula="k*A"/>
    </reaction>
  </listOfReactions>
  <listOfSpecies><species id="A"/></listOfSpecies>
  <listOfParameters><parameter id="k" positive="true"/></listOfParameters>
</coresbml>"#;
        let rn = parse_coresbml(reordered).unwrap();
        assert_eq!(rn.reactions.len(), 1);
        assert!(rn.reactions[0].products.is_empty());
    }

    #[test]
    fn numeric_parameters_and_fractional_values_parse_exactly() {
        let xml = r#"<coresbml>
  <listOfSpecies><species id="A"/></listOfSpecies>
  <listOfParameters>
    <parameter id="k1" value="0.25"/>
    <parameter id="k2" value="1/3"/>
    <parameter id="k3" value="-2"/>
  </listOfParameters>
</coresbml>"#;
        let rn = parse_coresbml(xml).unwrap();
        let v = |i: usize| rn.constants[i].value.clone().unwrap();
        assert_eq!(v(0), BigRational::new(1.into(), 4.into()));
        assert_eq!(v(1), BigRational::new(1.into(), 3.into()));
        assert_eq!(v(2), BigRational::from_integer((-2).into()));
    }

    #[test]
    fn repeated_species_references_accumulate() {
        let xml = r#"<coresbml>
  <listOfSpecies><species id="A"/><species id="B"/></listOfSpecies>
  <listOfParameters><parameter id="k" positive="true"/></listOfParameters>
  <listOfReactions>
    <reaction id="r">
      <listOfReactants>
        <speciesReference species="A"/>
        <speciesReference species="A"/>
      </listOfReactants>
      <listOfProducts><speciesReference species="B"/></listOfProducts>
      <kineticLaw formula="k*A*A"/>
    </reaction>
  </listOfReactions>
</coresbml>"#;
        let rn = parse_coresbml(xml).unwrap();
        assert_eq!(
            rn.reactions[0].reactants["A"],
            BigRational::from_integer(2.into())
        );
    }

    #[test]
    fn foreign_elements_are_rejected_by_name() {
        let xml = r#"<coresbml>
  <listOfSpecies><species id="A"/></listOfSpecies>
  <listOfEvents/>
</coresbml>"#;
        let err = parse_coresbml(xml).unwrap_err().to_string();
        assert!(err.contains("unsupported: listOfEvents"), "{err}");
    }

    #[test]
    fn mathml_kinetic_laws_are_rejected_by_name() {
        let xml = r#"<coresbml>
  <listOfSpecies><species id="A"/></listOfSpecies>
  <listOfParameters><parameter id="k" positive="true"/></listOfParameters>
  <listOfReactions>
    <reaction id="r">
      <listOfReactants><speciesReference species="A"/></listOfReactants>
      <kineticLaw><math/></kineticLaw>
    </reaction>
  </listOfReactions>
</coresbml>"#;
        let err = parse_coresbml(xml).unwrap_err().to_string();
        assert!(err.contains("unsupported: math"), "{err}");
    }

    #[test]
    fn unknown_attributes_are_rejected() {
        let xml = r#"<coresbml>
  <listOfSpecies><species id="A" compartment="c"/></listOfSpecies>
</coresbml>"#;
        let err = parse_coresbml(xml).unwrap_err().to_string();
        assert!(err.contains("attribute `compartment`"), "{err}");
    }

    #[test]
    fn wrong_root_elements_are_rejected() {
        let err = parse_coresbml("<sbml/>").unwrap_err().to_string();
        assert!(err.contains("root element"), "{err}");
    }

    #[test]
    fn undeclared_kinetic_symbols_are_reported_with_the_reaction() {
        let xml = r#"<coresbml>
  <listOfSpecies><species id="A"/></listOfSpecies>
  <listOfReactions>
    <reaction id="r">
      <listOfReactants><speciesReference species="A"/></listOfReactants>
      <kineticLaw formula="k*A"/>
    </reaction>
  </listOfReactions>
</coresbml>"#;
        let err = parse_coresbml(xml).unwrap_err().to_string();
        assert!(err.contains("reaction `r`"), "{err}");
        assert!(err.contains("undeclared symbol 'k'"), "{err}");
    }

    #[test]
    fn network_level_validation_still_applies() {
        let xml = r#"<coresbml>
  <listOfSpecies><species id="A"/><species id="A"/></listOfSpecies>
</coresbml>"#;
        let err = parse_coresbml(xml).unwrap_err().to_string();
        assert!(err.contains("duplicate"), "{err}");
    }
}
