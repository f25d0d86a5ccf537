//! Boolean and extended states of a network, and transitions between them.

use crate::error::{Error, Result};
use crate::sign::Sign;

/// A boolean state: one non-negative sign (`+` present, `0` absent) per
/// species, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseState {
    signs: Vec<Sign>,
}

impl BaseState {
    /// Build from per-species signs; negative signs are rejected because
    /// concentrations cannot be negative.
    pub fn new(signs: Vec<Sign>) -> Result<BaseState> {
        if let Some(s) = signs.iter().find(|s| !s.is_nonneg()) {
            return Err(Error::InvalidState(format!(
                "species sign must be + or 0, got {s}"
            )));
        }
        Ok(BaseState { signs })
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// All `2^n` boolean states over `n` species, all-absent first.
    pub fn all(n: usize) -> impl Iterator<Item = BaseState> {
        (0..1usize << n).map(move |mask| BaseState {
            signs: (0..n)
                .map(|i| {
                    if mask & (1 << (n - 1 - i)) != 0 {
                        Sign::Pos
                    } else {
                        Sign::Zero
                    }
                })
                .collect(),
        })
    }

    /// Render as `S=+,E=0,...` following the given species order.
    pub fn render(&self, species: &[String]) -> String {
        debug_assert_eq!(species.len(), self.signs.len());
        species
            .iter()
            .zip(&self.signs)
            .map(|(name, sign)| format!("{name}={sign}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parse `NAME=+|0` pairs separated by commas. Every declared species
    /// must be assigned exactly once.
    pub fn parse(text: &str, species: &[String]) -> Result<BaseState> {
        let mut signs: Vec<Option<Sign>> = vec![None; species.len()];
        for part in text.split(',') {
            let part = part.trim();
            let (name, value) = part.split_once('=').ok_or_else(|| {
                Error::InvalidState(format!("expected NAME=+ or NAME=0, got '{part}'"))
            })?;
            let name = name.trim();
            let value = value.trim();
            let idx = species.iter().position(|s| s == name).ok_or_else(|| {
                Error::InvalidState(format!("unknown species '{name}'"))
            })?;
            let sign = match value {
                "+" => Sign::Pos,
                "0" => Sign::Zero,
                other => {
                    return Err(Error::InvalidState(format!(
                        "species '{name}' must be + or 0, got '{other}'"
                    )))
                }
            };
            if signs[idx].replace(sign).is_some() {
                return Err(Error::InvalidState(format!("species '{name}' assigned twice")));
            }
        }
        let signs = signs
            .into_iter()
            .zip(species)
            .map(|(s, name)| {
                s.ok_or_else(|| Error::InvalidState(format!("species '{name}' not assigned")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BaseState { signs })
    }
}

/// A boolean state extended with one derivative sign per species; the
/// derivative may be any of the three signs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtendedState {
    pub base: BaseState,
    pub derivatives: Vec<Sign>,
}

impl ExtendedState {
    pub fn new(base: BaseState, derivatives: Vec<Sign>) -> ExtendedState {
        debug_assert_eq!(base.len(), derivatives.len());
        ExtendedState { base, derivatives }
    }

    /// Render as `S=+,E=0,S.=-,E.=+`: base signs first, then derivative
    /// signs under dotted names.
    pub fn render(&self, species: &[String]) -> String {
        let mut parts = vec![self.base.render(species)];
        parts.extend(
            species
                .iter()
                .zip(&self.derivatives)
                .map(|(name, sign)| format!("{name}.={sign}")),
        );
        parts.join(",")
    }
}

/// A directed transition between two states of the same shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition<S> {
    pub from: S,
    pub to: S,
}

impl<S> Transition<S> {
    pub fn new(from: S, to: S) -> Transition<S> {
        Transition { from, to }
    }
}
