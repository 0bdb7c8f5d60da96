//! Global, append-only symbol table.
//!
//! The first nine symbols are registered in a fixed order so that the graded
//! lexicographic monomial order is the same in every session:
//! `X, Y, Z, a, b, c, mu, s_a, s_b`. Anything else (solver unknowns, user
//! symbols) is appended on first use.

use std::fmt;
use std::sync::{OnceLock, RwLock};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u16);

const RESERVED: [&str; 9] = ["X", "Y", "Z", "a", "b", "c", "mu", "s_a", "s_b"];

/// Names that map-spec files may use without declaring them.
pub const RESERVED_NAMES: &[&str] = &RESERVED;

fn table() -> &'static RwLock<Vec<String>> {
    static TABLE: OnceLock<RwLock<Vec<String>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(RESERVED.iter().map(|s| s.to_string()).collect()))
}

impl Symbol {
    pub const X: Symbol = Symbol(0);
    pub const Y: Symbol = Symbol(1);
    pub const Z: Symbol = Symbol(2);
    pub const A: Symbol = Symbol(3);
    pub const B: Symbol = Symbol(4);
    pub const C: Symbol = Symbol(5);
    pub const MU: Symbol = Symbol(6);
    /// Stand-in for an unspecified `sigma(a)`.
    pub const SIGMA_A: Symbol = Symbol(7);
    /// Stand-in for an unspecified `sigma(b)`.
    pub const SIGMA_B: Symbol = Symbol(8);

    /// Interns `name`, returning the existing symbol if already registered.
    pub fn intern(name: &str) -> Symbol {
        if let Some(s) = Symbol::lookup(name) {
            return s;
        }
        let mut t = table().write().expect("symbol table poisoned");
        if let Some(i) = t.iter().position(|n| n == name) {
            return Symbol(i as u16);
        }
        assert!(t.len() < u16::MAX as usize, "symbol table full");
        t.push(name.to_string());
        Symbol((t.len() - 1) as u16)
    }

    pub fn lookup(name: &str) -> Option<Symbol> {
        let t = table().read().expect("symbol table poisoned");
        t.iter().position(|n| n == name).map(|i| Symbol(i as u16))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Symbol {
        assert!(i < count(), "symbol index {i} not registered");
        Symbol(i as u16)
    }

    pub fn name(self) -> String {
        table().read().expect("symbol table poisoned")[self.0 as usize].clone()
    }

    pub fn is_reserved(name: &str) -> bool {
        RESERVED_NAMES.contains(&name)
    }
}

/// Number of registered symbols.
pub fn count() -> usize {
    table().read().expect("symbol table poisoned").len()
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reserved_order_is_fixed() {
        assert_eq!(Symbol::X.name(), "X");
        assert_eq!(Symbol::MU.name(), "mu");
        assert_eq!(Symbol::lookup("s_b"), Some(Symbol::SIGMA_B));
    }

    #[test]
    fn interning_is_a_bijection() {
        let p = Symbol::intern("p_1^0");
        assert_eq!(Symbol::intern("p_1^0"), p);
        assert_eq!(p.name(), "p_1^0");
        assert!(p.index() >= RESERVED.len());
    }

    #[test]
    fn concurrent_interning_agrees() {
        let handles: Vec<_> = (0..8)
            .map(|_| std::thread::spawn(|| Symbol::intern("shared_sym")))
            .collect();
        let ids: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(ids.windows(2).all(|w| w[0] == w[1]));
    }
}
