//! Name-keyed registries of interchangeable strategies.
//!
//! Every pluggable family in this crate (PDTB head rules, RST conversions,
//! dependency codecs, MDD modes) implements [`Named`] and is stored as a
//! trait object in a [`Registry`]. The CLI selects entries by name.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A strategy that can be looked up by name.
pub trait Named {
    /// Registry key. Lower-case, stable across releases.
    fn name(&self) -> &'static str;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("unknown {family} '{name}' (available: {})", available.join(", "))]
    Unknown {
        family: &'static str,
        name: String,
        available: Vec<&'static str>,
    },

    #[error("{family} '{name}' is already registered")]
    Duplicate { family: &'static str, name: &'static str },
}

/// Strategies of one family, keyed by [`Named::name`].
pub struct Registry<T: ?Sized + Named> {
    family: &'static str,
    entries: BTreeMap<&'static str, Arc<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(family: &'static str) -> Self {
        Registry {
            family,
            entries: BTreeMap::new(),
        }
    }

    /// Add a strategy. Names must be unique within the registry.
    pub fn register(&mut self, strategy: Arc<T>) -> Result<(), RegistryError> {
        let name = strategy.name();
        if self.entries.contains_key(name) {
            return Err(RegistryError::Duplicate {
                family: self.family,
                name,
            });
        }
        self.entries.insert(name, strategy);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>, RegistryError> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| RegistryError::Unknown {
                family: self.family,
                name: name.to_owned(),
                available: self.names(),
            })
    }

    /// Registered names in lexicographic order.
    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn family(&self) -> &'static str {
        self.family
    }
}

impl<T: ?Sized + Named> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("family", &self.family)
            .field("entries", &self.names())
            .finish()
    }
}
