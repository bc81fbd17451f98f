//! Engine-wide tunables, shared by the library entry points and the CLI.

use crate::groebner::GroebnerConfig;

#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Budgets for basis computations.
    pub groebner: GroebnerConfig,
    /// Largest allowed twist exponent e (p^e grows fast).
    pub e_max: u64,
    /// Default degree bound for purity-witness searches.
    pub degree_bound: u64,
    /// Seed for randomized scenario generators.
    pub seed: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            groebner: GroebnerConfig::default(),
            e_max: 3,
            degree_bound: 8,
            seed: 0,
        }
    }
}
