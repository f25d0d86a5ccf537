//! Shared fixtures for the integration tests: the enzyme network and a
//! reproducible corpus of small networks for oracle cross-checks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fobnn_sat::{
    parse_native, AnnotatedVar, RateConstant, Reaction, ReactionNetwork, Term,
};

pub const RENZ: &str = "\
species: S, E, C, P
const k_on > 0
const k_off > 0
const k_cat > 0
r_on: S + E => C @ k_on*S*E
r_off: C => S + E @ k_off*C
r_cat: C => E + 2*P @ k_cat*C
";

pub fn renz() -> ReactionNetwork {
    parse_native(RENZ).expect("fixture parses")
}

/// Hand-written networks of at most three species, covering decay,
/// inflow, dimerization, catalysis, cycles, and rational kinetics.
pub fn hand_written() -> Vec<ReactionNetwork> {
    let texts = [
        "species: A\nconst k > 0\nr1: A => @ k*A\n",
        "species: A\nconst k > 0\nr1: => A @ k\n",
        "species: A, B\nconst k > 0\nr1: A + A => B @ k*A*A\n",
        "species: A, B, C\nconst k > 0\nr1: A + C => B + C @ k*A*C\n",
        "species: A\nconst k1 > 0\nconst k2 > 0\nr1: => A @ k1\nr2: A => @ k2*A\n",
        "species: A, B\nconst k1 > 0\nconst k2 > 0\nr1: A => B @ k1*A\nr2: B => A @ k2*B\n",
        "species: A, B\nconst k1 > 0\nconst k2 > 0\nr1: A => B @ k1*A/(k2 + A)\n",
        "species: A, B, C\nconst k1 > 0\nconst k2 = 3/2\n\
         r1: A + B => C @ k1*A*B\nr2: C => A + B @ k2*C\n",
    ];
    texts.iter().map(|t| parse_native(t).expect("hand-written network parses")).collect()
}

/// A reproducible corpus: the hand-written networks plus seeded random
/// ones, every network with at most three species.
pub fn corpus() -> Vec<ReactionNetwork> {
    let mut nets = hand_written();
    let mut rng = ChaCha8Rng::seed_from_u64(0xF0B1);
    for idx in 0..16 {
        nets.push(random_network(&mut rng, idx));
    }
    nets
}

fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Random network: 1-3 species, positive or exact-rational rate
/// constants, reactions with random pools under mass-action kinetics,
/// sometimes divided by a never-zero denominator.
fn random_network(rng: &mut ChaCha8Rng, idx: usize) -> ReactionNetwork {
    let names = ["A", "B", "C"];
    let n_species = rng.gen_range(1..=3);
    let species: Vec<String> = names[..n_species].iter().map(|s| s.to_string()).collect();

    let n_consts = rng.gen_range(1..=3);
    let constants: Vec<RateConstant> = (0..n_consts)
        .map(|i| {
            let name = format!("k{}", i + 1);
            if rng.gen_bool(0.5) {
                RateConstant::positive(name)
            } else {
                let values = [(1, 2), (1, 1), (3, 2), (2, 1), (3, 1)];
                let (p, q) = values[rng.gen_range(0..values.len())];
                RateConstant::numeric(name, rational(p, q))
            }
        })
        .collect();

    let n_reactions = rng.gen_range(1..=3);
    let reactions: Vec<Reaction> = (0..n_reactions)
        .map(|r| {
            let mut reactants = BTreeMap::new();
            let mut products = BTreeMap::new();
            for s in &species {
                if rng.gen_bool(0.4) {
                    reactants.insert(s.clone(), rational(rng.gen_range(1..=2), 1));
                }
                if rng.gen_bool(0.4) {
                    products.insert(s.clone(), rational(rng.gen_range(1..=2), 1));
                }
            }
            if reactants.is_empty() && products.is_empty() {
                let s = &species[rng.gen_range(0..species.len())];
                products.insert(s.clone(), rational(1, 1));
            }

            // Mass action: rate constant times the reactant values.
            let k = constants[rng.gen_range(0..constants.len())].as_constant();
            let mut rate = Term::constant(k);
            for s in reactants.keys() {
                rate = Term::mul(rate, Term::var(AnnotatedVar::current(s)));
            }
            // Occasional saturation denominator; a positive constant plus
            // a non-negative species never hits zero.
            if rng.gen_bool(0.3) {
                let k = constants[rng.gen_range(0..constants.len())].as_constant();
                let s = &species[rng.gen_range(0..species.len())];
                rate = Term::div(
                    rate,
                    Term::add(Term::constant(k), Term::var(AnnotatedVar::current(s))),
                );
            }
            Reaction { id: format!("r{}", r + 1), reactants, products, kinetics: rate }
        })
        .collect();

    let rn = ReactionNetwork { species, constants, reactions };
    rn.require_valid()
        .unwrap_or_else(|e| panic!("random network {idx} failed validation: {e}"));
    rn
}
