//! Reaction networks: species, rate constants, and reactions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::sign::{sign_of_rational, Sign};
use crate::term::{render_rational, AnnotatedVar, Constant, Term, VarKind};

/// A rate constant declaration. `value` is `None` for constants declared
/// only as positive symbols (`const k > 0`), `Some` for numeric ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateConstant {
    pub name: String,
    pub value: Option<BigRational>,
}

impl RateConstant {
    pub fn positive(name: impl Into<String>) -> RateConstant {
        RateConstant { name: name.into(), value: None }
    }

    pub fn numeric(name: impl Into<String>, value: BigRational) -> RateConstant {
        RateConstant { name: name.into(), value: Some(value) }
    }

    pub fn sign(&self) -> Sign {
        match &self.value {
            None => Sign::Pos,
            Some(v) => sign_of_rational(v),
        }
    }

    /// The term-level constant referring to this declaration.
    pub fn as_constant(&self) -> Constant {
        Constant::Sym { name: self.name.clone(), sign: self.sign() }
    }
}

/// One reaction: reactant and product pools with non-negative rational
/// stoichiometries, plus a kinetic rate term over current species values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reaction {
    pub id: String,
    pub reactants: BTreeMap<String, BigRational>,
    pub products: BTreeMap<String, BigRational>,
    pub kinetics: Term,
}

impl Reaction {
    /// Stoichiometric coefficient of `species` among the reactants.
    pub fn consumed(&self, species: &str) -> BigRational {
        self.reactants.get(species).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Stoichiometric coefficient of `species` among the products.
    pub fn produced(&self, species: &str) -> BigRational {
        self.products.get(species).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// A reaction network. Species and constants keep declaration order, which
/// fixes variable order everywhere downstream.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReactionNetwork {
    pub species: Vec<String>,
    pub constants: Vec<RateConstant>,
    pub reactions: Vec<Reaction>,
}

impl ReactionNetwork {
    pub fn has_species(&self, name: &str) -> bool {
        self.species.iter().any(|s| s == name)
    }

    pub fn constant(&self, name: &str) -> Option<&RateConstant> {
        self.constants.iter().find(|c| c.name == name)
    }

    /// Semantic checks beyond grammar. Returns one human-readable
    /// diagnostic per problem; an empty list means the network is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for s in &self.species {
            if !is_identifier(s) {
                out.push(format!("species name '{s}' is not a valid identifier"));
            }
            if !seen.insert(s.clone()) {
                out.push(format!("duplicate species '{s}'"));
            }
        }
        let mut seen_consts = BTreeSet::new();
        for c in &self.constants {
            if !is_identifier(&c.name) {
                out.push(format!("constant name '{}' is not a valid identifier", c.name));
            }
            if !seen_consts.insert(c.name.clone()) {
                out.push(format!("duplicate constant '{}'", c.name));
            }
            if seen.contains(&c.name) {
                out.push(format!("'{}' declared both as species and constant", c.name));
            }
        }
        let mut seen_reactions = BTreeSet::new();
        for r in &self.reactions {
            if !is_identifier(&r.id) {
                out.push(format!("reaction id '{}' is not a valid identifier", r.id));
            }
            if !seen_reactions.insert(r.id.clone()) {
                out.push(format!("duplicate reaction id '{}'", r.id));
            }
            if r.reactants.is_empty() && r.products.is_empty() {
                out.push(format!("reaction '{}' has neither reactants nor products", r.id));
            }
            for (pool, name) in [(&r.reactants, "reactant"), (&r.products, "product")] {
                for (sp, coef) in pool {
                    if !self.has_species(sp) {
                        out.push(format!("reaction '{}': undeclared {name} species '{sp}'", r.id));
                    }
                    if coef < &BigRational::zero() {
                        out.push(format!(
                            "reaction '{}': negative stoichiometry for {name} '{sp}'",
                            r.id
                        ));
                    } else if coef.is_zero() {
                        out.push(format!(
                            "reaction '{}': zero stoichiometry for {name} '{sp}'",
                            r.id
                        ));
                    }
                }
            }
            out.extend(self.check_kinetic_term(&r.kinetics).into_iter().map(|d| {
                format!("reaction '{}': {d}", r.id)
            }));
        }
        out
    }

    fn check_kinetic_term(&self, t: &Term) -> Vec<String> {
        let mut out = Vec::new();
        match t {
            Term::Var(v) => {
                if v.kind != VarKind::Current {
                    out.push(format!("kinetics may only mention current species values, found '{v}'"));
                } else if !self.has_species(&v.base) {
                    out.push(format!("undeclared species '{}' in kinetics", v.base));
                }
            }
            Term::Const(Constant::Sym { name, .. }) => {
                if self.constant(name).is_none() {
                    out.push(format!("undeclared constant '{name}' in kinetics"));
                }
            }
            Term::Const(Constant::Num(_)) => {}
            Term::Binary { left, right, .. } => {
                out.extend(self.check_kinetic_term(left));
                out.extend(self.check_kinetic_term(right));
            }
        }
        out
    }

    /// Like [`ReactionNetwork::validate`] but turning a non-empty
    /// diagnostic list into an error.
    pub fn require_valid(&self) -> Result<()> {
        let diags = self.validate();
        if diags.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidModel(diags.join("; ")))
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn render_pool(pool: &BTreeMap<String, BigRational>) -> String {
    let one = BigRational::from_integer(1.into());
    pool.iter()
        .map(|(sp, coef)| {
            if *coef == one {
                sp.clone()
            } else {
                format!("{}*{sp}", render_rational(coef))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl fmt::Display for ReactionNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_native(self))
    }
}

/// Render a network in the native text format. The output parses back to
/// an equal network, so it doubles as a canonical form.
pub fn render_native(rn: &ReactionNetwork) -> String {
    let mut out = String::new();
    if !rn.species.is_empty() {
        out.push_str(&format!("species: {}\n", rn.species.join(", ")));
    }
    for c in &rn.constants {
        match &c.value {
            None => out.push_str(&format!("const {} > 0\n", c.name)),
            Some(v) => out.push_str(&format!("const {} = {}\n", c.name, render_rational(v))),
        }
    }
    for r in &rn.reactions {
        out.push_str(&format!(
            "{}: {} => {} @ {}\n",
            r.id,
            render_pool(&r.reactants),
            render_pool(&r.products),
            r.kinetics
        ));
    }
    out
}

/// Convenience used throughout tests and examples: a current-state species
/// variable as a term.
pub fn species_term(name: &str) -> Term {
    Term::var(AnnotatedVar::current(name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sign::Op;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn sample_network() -> ReactionNetwork {
        let k = RateConstant::positive("k");
        let kinetics = Term::mul(Term::constant(k.as_constant()), species_term("A"));
        ReactionNetwork {
            species: vec!["A".into(), "B".into()],
            constants: vec![k],
            reactions: vec![Reaction {
                id: "r1".into(),
                reactants: BTreeMap::from([("A".into(), rat(1))]),
                products: BTreeMap::from([("B".into(), rat(2))]),
                kinetics,
            }],
        }
    }

    #[test]
    fn valid_network_has_no_diagnostics() {
        assert!(sample_network().validate().is_empty());
    }

    #[test]
    fn validate_flags_duplicates_and_unknowns() {
        let mut rn = sample_network();
        rn.species.push("A".into());
        rn.reactions[0].products.insert("Ghost".into(), rat(1));
        let diags = rn.validate();
        assert!(diags.iter().any(|d| d.contains("duplicate species 'A'")));
        assert!(diags.iter().any(|d| d.contains("undeclared product species 'Ghost'")));
    }

    #[test]
    fn validate_flags_bad_stoichiometry_and_empty_pools() {
        let mut rn = sample_network();
        rn.reactions[0].reactants.insert("A".into(), rat(-1));
        rn.reactions.push(Reaction {
            id: "r2".into(),
            reactants: BTreeMap::new(),
            products: BTreeMap::new(),
            kinetics: Term::zero(),
        });
        let diags = rn.validate();
        assert!(diags.iter().any(|d| d.contains("negative stoichiometry")));
        assert!(diags.iter().any(|d| d.contains("neither reactants nor products")));
    }

    #[test]
    fn validate_flags_undeclared_kinetic_symbols() {
        let mut rn = sample_network();
        rn.reactions[0].kinetics = Term::binary(
            Op::Mul,
            Term::constant(Constant::Sym { name: "mystery".into(), sign: Sign::Pos }),
            species_term("A"),
        );
        let diags = rn.validate();
        assert!(diags.iter().any(|d| d.contains("undeclared constant 'mystery'")));
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("k_on"));
        assert!(is_identifier("_x9"));
        assert!(!is_identifier("9x"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("a-b"));
    }

    #[test]
    fn empty_network_renders_empty() {
        assert_eq!(render_native(&ReactionNetwork::default()), "");
    }
}
