//! Interning of constant names.
//!
//! Constants are interned once per model so the rest of the engine can work
//! with dense `u32` ids and only touch strings at the I/O boundary.

use std::collections::HashMap;

/// Dense id of an interned constant name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

/// Append-only string interner.
#[derive(Debug, Default, Clone)]
pub struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, SymbolId>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns `name`, returning the existing id if already present.
    pub fn intern(&mut self, name: &str) -> SymbolId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = SymbolId(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    /// Looks up a name without interning.
    pub fn get(&self, name: &str) -> Option<SymbolId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.names[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intern_is_idempotent() {
        let mut t = SymbolTable::new();
        let a = t.intern("Anna");
        let b = t.intern("Bob");
        assert_ne!(a, b);
        assert_eq!(t.intern("Anna"), a);
        assert_eq!(t.name(a), "Anna");
        assert_eq!(t.name(b), "Bob");
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn get_does_not_intern() {
        let mut t = SymbolTable::new();
        assert_eq!(t.get("X"), None);
        let x = t.intern("X");
        assert_eq!(t.get("X"), Some(x));
        assert_eq!(t.len(), 1);
    }
}
