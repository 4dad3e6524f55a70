//! Rewrite-order strategies, registered by name and picked at runtime.
//!
//! Both the Fock straightening and the wedge rewriting have several applicable rewrites at once;
//! a strategy decides which one fires. Normal forms must not depend on the choice.

use std::collections::BTreeMap;

use parking_lot::Mutex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Picks one rewrite site among the applicable ones.
pub trait ReductionStrategy: Send + Sync {
    fn name(&self) -> &str;

    /// `candidates` is nonempty and ascending; returns one of its entries.
    fn choose(&self, candidates: &[usize]) -> usize;
}

/// Always the smallest site.
#[derive(Debug, Default)]
pub struct Leftmost;

impl ReductionStrategy for Leftmost {
    fn name(&self) -> &str {
        "leftmost"
    }

    fn choose(&self, candidates: &[usize]) -> usize {
        candidates[0]
    }
}

/// Always the largest site.
#[derive(Debug, Default)]
pub struct Rightmost;

impl ReductionStrategy for Rightmost {
    fn name(&self) -> &str {
        "rightmost"
    }

    fn choose(&self, candidates: &[usize]) -> usize {
        candidates[candidates.len() - 1]
    }
}

/// Uniformly random site from a seeded generator.
pub struct Randomized {
    rng: Mutex<ChaCha8Rng>,
}

impl Randomized {
    pub fn new(seed: u64) -> Self {
        Self { rng: Mutex::new(ChaCha8Rng::seed_from_u64(seed)) }
    }
}

impl ReductionStrategy for Randomized {
    fn name(&self) -> &str {
        "randomized"
    }

    fn choose(&self, candidates: &[usize]) -> usize {
        candidates[self.rng.lock().gen_range(0..candidates.len())]
    }
}

type StrategyCtor = fn(u64) -> Box<dyn ReductionStrategy>;

/// Name → constructor table.
pub struct StrategyRegistry {
    entries: BTreeMap<String, StrategyCtor>,
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        let mut r = Self { entries: BTreeMap::new() };
        r.register("leftmost", |_| Box::new(Leftmost));
        r.register("rightmost", |_| Box::new(Rightmost));
        r.register("randomized", |seed| Box::new(Randomized::new(seed)));
        r
    }
}

impl StrategyRegistry {
    pub fn register(&mut self, name: &str, ctor: StrategyCtor) {
        self.entries.insert(name.to_string(), ctor);
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    pub fn build(&self, name: &str, seed: u64) -> Result<Box<dyn ReductionStrategy>> {
        self.entries
            .get(name)
            .map(|ctor| ctor(seed))
            .ok_or_else(|| Error::InvalidInput(format!("unknown strategy {name:?}; known: {}", self.names().join(", "))))
    }
}

/// Build a strategy from the default registry.
pub fn strategy_by_name(name: &str, seed: u64) -> Result<Box<dyn ReductionStrategy>> {
    StrategyRegistry::default().build(name, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        let r = StrategyRegistry::default();
        assert_eq!(r.names(), vec!["leftmost", "randomized", "rightmost"]);
        assert_eq!(r.build("leftmost", 0).unwrap().choose(&[2, 5, 7]), 2);
        assert_eq!(r.build("rightmost", 0).unwrap().choose(&[2, 5, 7]), 7);
        let rnd = r.build("randomized", 3).unwrap();
        for _ in 0..20 {
            assert!([2, 5, 7].contains(&rnd.choose(&[2, 5, 7])));
        }
        assert!(r.build("bogus", 0).is_err());
    }
}
