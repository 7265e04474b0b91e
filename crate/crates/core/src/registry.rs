//! Name-keyed collections of interchangeable implementations.

use crate::error::{Error, Result};

/// Something that can be looked up by name in a [`Registry`].
pub trait Named {
    fn name(&self) -> &'static str;
}

/// Ordered set of trait objects keyed by their names.
pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry { kind, entries: Vec::new() }
    }

    /// Adds `entry`, replacing any entry with the same name.
    pub fn register(&mut self, entry: Box<T>) {
        match self.entries.iter().position(|e| e.name() == entry.name()) {
            Some(i) => self.entries[i] = entry,
            None => self.entries.push(entry),
        }
    }

    pub fn with(mut self, entry: Box<T>) -> Self {
        self.register(entry);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownStrategy { kind: self.kind, name: name.to_string() })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|b| b.as_ref())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Named {
        fn greet(&self) -> String;
    }

    struct Plain;
    struct Loud(&'static str);

    impl Named for Plain {
        fn name(&self) -> &'static str {
            "plain"
        }
    }
    impl Greeter for Plain {
        fn greet(&self) -> String {
            "hi".into()
        }
    }
    impl Named for Loud {
        fn name(&self) -> &'static str {
            self.0
        }
    }
    impl Greeter for Loud {
        fn greet(&self) -> String {
            "HI".into()
        }
    }

    #[test]
    fn lookup_and_replace() {
        let mut r: Registry<dyn Greeter> = Registry::new("greeter");
        r.register(Box::new(Plain));
        r.register(Box::new(Loud("loud")));
        assert_eq!(r.names(), vec!["plain", "loud"]);
        assert_eq!(r.get("loud").unwrap().greet(), "HI");
        r.register(Box::new(Loud("plain")));
        assert_eq!(r.len(), 2);
        assert_eq!(r.get("plain").unwrap().greet(), "HI");
        assert!(matches!(r.get("quiet"), Err(Error::UnknownStrategy { .. })));
    }
}
