use std::env;

/// Environment variable overriding [`Limits::orbit`].
pub const ORBIT_LIMIT_VAR: &str = "WEYLRING_ORBIT_LIMIT";
/// Environment variable overriding [`Limits::oracle`].
pub const ORACLE_LIMIT_VAR: &str = "WEYLRING_ORACLE_LIMIT";

/// Resource ceilings for the enumeration kernels.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of weights an orbit (or a weight system) may have.
    pub orbit: u64,
    /// Largest `dim E_λ' · dim E_λ''` the brute-force tensor oracle accepts.
    pub oracle: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            orbit: 10_000_000,
            oracle: 1_000_000,
        }
    }
}

impl Limits {
    /// Defaults, overridden by the environment when the variables parse.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = read_var(ORBIT_LIMIT_VAR) {
            limits.orbit = v;
        }
        if let Some(v) = read_var(ORACLE_LIMIT_VAR) {
            limits.oracle = v;
        }
        limits
    }
}

fn read_var(name: &str) -> Option<u64> {
    env::var(name).ok()?.trim().replace('_', "").parse().ok()
}
