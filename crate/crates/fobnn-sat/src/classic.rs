//! Classic boolean semantics of reaction networks, as a baseline.
//!
//! Here a state says which species are present, a reaction is enabled
//! when all its reactants are, and a step fires exactly one enabled
//! reaction: products become present, reactants that are not also
//! products may or may not be used up (both outcomes are successors),
//! and uninvolved species are copied. A state with no enabled reaction
//! has no successor at all — unlike the sign semantics, nothing
//! guarantees a self-loop.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{GraphKind, TransitionGraph, STG_SPECIES_LIMIT};
use crate::network::{Reaction, ReactionNetwork};
use crate::sign::Sign;
use crate::state::BaseState;

fn successors_of_firing(
    rn: &ReactionNetwork,
    state: &BaseState,
    reaction: &Reaction,
    out: &mut BTreeSet<BaseState>,
) {
    // Per-species candidate signs after firing, in declaration order.
    let options: Vec<Vec<Sign>> = rn
        .species
        .iter()
        .zip(state.signs())
        .map(|(x, sign)| {
            if reaction.products.contains_key(x) {
                vec![Sign::Pos]
            } else if reaction.reactants.contains_key(x) {
                vec![Sign::Pos, Sign::Zero]
            } else {
                vec![*sign]
            }
        })
        .collect();
    let mut stack = vec![(0usize, Vec::with_capacity(options.len()))];
    while let Some((i, prefix)) = stack.pop() {
        if i == options.len() {
            out.insert(BaseState::new(prefix).expect("non-negative signs"));
            continue;
        }
        for &sign in options[i].iter().rev() {
            let mut next = prefix.clone();
            next.push(sign);
            stack.push((i + 1, next));
        }
    }
}

/// All classic successors of a boolean state.
pub fn classic_successors(
    rn: &ReactionNetwork,
    state: &BaseState,
) -> Result<BTreeSet<BaseState>> {
    if state.len() != rn.species.len() {
        return Err(Error::InvalidState(format!(
            "state has {} species, network has {}",
            state.len(),
            rn.species.len()
        )));
    }
    let present: BTreeMap<&str, bool> = rn
        .species
        .iter()
        .zip(state.signs())
        .map(|(x, s)| (x.as_str(), *s == Sign::Pos))
        .collect();
    let mut out = BTreeSet::new();
    for reaction in &rn.reactions {
        let enabled = reaction.reactants.keys().all(|x| present[x.as_str()]);
        if enabled {
            successors_of_firing(rn, state, reaction, &mut out);
        }
    }
    Ok(out)
}

/// The full classic state transition graph over all boolean states.
/// Guarded at [`STG_SPECIES_LIMIT`] species unless `force` is set.
pub fn classic_stg(rn: &ReactionNetwork, force: bool) -> Result<TransitionGraph> {
    rn.require_valid()?;
    if !force && rn.species.len() > STG_SPECIES_LIMIT {
        return Err(Error::SizeGuard {
            what: "state transition graph species count",
            limit: STG_SPECIES_LIMIT,
            actual: rn.species.len(),
        });
    }
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for state in BaseState::all(rn.species.len()) {
        let from = state.render(&rn.species);
        nodes.insert(from.clone());
        for succ in classic_successors(rn, &state)? {
            edges.insert((from.clone(), succ.render(&rn.species)));
        }
    }
    TransitionGraph::from_named_edges(GraphKind::Classic, rn.species.clone(), nodes, edges)
}
