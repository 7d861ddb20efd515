//! Sparse multivariate polynomials and reduced rational functions over ℚ.
//!
//! Variables are plain indices handed out by a [`VarRegistry`]. A registry
//! knows the display name of every variable and whether it is a base
//! generator or a jet symbol standing for a derivation word applied to a
//! generator. Polynomials themselves carry only indices.

mod gcd;
mod mpoly;
mod ratfunc;

use std::collections::HashMap;
use std::fmt;

pub use gcd::gcd;
pub use mpoly::{MPoly, Monomial};
pub use ratfunc::RatFunc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Base,
    /// A jet symbol; `base` is the generator the word is applied to.
    Jet { base: VarId },
}

#[derive(Debug, Clone)]
struct VarInfo {
    name: String,
    kind: VarKind,
}

/// Dense allocation of variable indices with names and kinds.
#[derive(Debug, Clone, Default)]
pub struct VarRegistry {
    vars: Vec<VarInfo>,
    by_name: HashMap<String, VarId>,
}

impl VarRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the base generator called `name`, allocating it if needed.
    pub fn base(&mut self, name: &str) -> VarId {
        if let Some(&v) = self.by_name.get(name) {
            return v;
        }
        self.push(name.to_string(), VarKind::Base)
    }

    pub fn jet(&mut self, name: String, base: VarId) -> VarId {
        debug_assert!(!self.by_name.contains_key(&name));
        self.push(name, VarKind::Jet { base })
    }

    fn push(&mut self, name: String, kind: VarKind) -> VarId {
        let id = VarId(self.vars.len() as u32);
        self.by_name.insert(name.clone(), id);
        self.vars.push(VarInfo { name, kind });
        id
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.vars[v.index()].name
    }

    pub fn kind(&self, v: VarId) -> VarKind {
        self.vars[v.index()].kind
    }

    /// The generator a variable is graded by: itself for a base generator,
    /// the underlying generator for a jet symbol.
    pub fn base_of(&self, v: VarId) -> VarId {
        match self.kind(v) {
            VarKind::Base => v,
            VarKind::Jet { base } => base,
        }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.vars.len() as u32).map(VarId)
    }
}

/// Part of `f` whose degree is odd in every listed generator.
///
/// A jet symbol counts towards the degree of its base generator, so the
/// Leibniz expansion of a word applied to a monomial keeps its grading.
pub fn odd_component(f: &MPoly, vars: &[VarId], registry: &VarRegistry) -> MPoly {
    let terms = f.terms().iter().filter(|(m, _)| {
        vars.iter().all(|&g| {
            let deg: u32 = m
                .iter()
                .filter(|&(v, _)| registry.base_of(v) == g)
                .map(|(_, e)| e)
                .sum();
            deg % 2 == 1
        })
    });
    MPoly::from_sorted_terms(terms.cloned().collect())
}
