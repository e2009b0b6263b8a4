//! Name-keyed registries for interchangeable strategies.
//!
//! Schedule designers, transfer-matrix steppers and cooling protocols are all
//! trait objects looked up by name at runtime. Lookup accepts `_` and `-`
//! interchangeably so that `ground_state` (config files) and `ground-state`
//! (command line) resolve to the same entry.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Anything that can live in a [`Registry`].
pub trait Named {
    fn name(&self) -> &'static str;
}

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Arc<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Adds an entry, returning the one it replaced, if any.
    pub fn register(&mut self, entry: Arc<T>) -> Option<Arc<T>> {
        self.entries.insert(entry.name(), entry)
    }

    pub fn with(mut self, entry: Arc<T>) -> Self {
        self.register(entry);
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        let key = name.trim().replace('_', "-");
        self.entries
            .get(key.as_str())
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().collect::<Vec<_>>().join(", "),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn kind(&self) -> &'static str {
        self.kind
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Named + Send + Sync {
        fn greet(&self) -> String;
    }

    struct Hello;
    impl Named for Hello {
        fn name(&self) -> &'static str {
            "hello-world"
        }
    }
    impl Greeter for Hello {
        fn greet(&self) -> String {
            "hi".into()
        }
    }

    #[test]
    fn lookup_normalizes_separators() {
        let reg: Registry<dyn Greeter> = Registry::new("greeter").with(Arc::new(Hello));
        assert_eq!(reg.get("hello_world").unwrap().greet(), "hi");
        assert_eq!(reg.get("hello-world").unwrap().name(), "hello-world");
    }

    #[test]
    fn unknown_name_lists_alternatives() {
        let reg: Registry<dyn Greeter> = Registry::new("greeter").with(Arc::new(Hello));
        match reg.get("bye") {
            Err(Error::UnknownStrategy { kind, available, .. }) => {
                assert_eq!(kind, "greeter");
                assert_eq!(available, "hello-world");
            }
            _ => panic!("expected UnknownStrategy"),
        }
    }
}
