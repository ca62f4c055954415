//! Tensor product decomposition `E_λ' ⊗ E_λ''`.
//!
//! [`tensor_decompose`] runs the signed sum over the weight system of one
//! factor: each weight `λ` contributes `m_λ · t(λ + λ'' + δ)` copies of
//! `E_{{λ + λ'' + δ} − δ}`. [`tensor_oracle`] is an independent route that
//! convolves both weight systems and peels off highest weights.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::rootsys::{RootSystem, SystemId, Weight};
use crate::weights::{full_weight_multiset_with, weyl_dimension, weyl_dimension_unchecked};
use crate::weyl::walk_to_dominant;

/// Weight counts above which per-weight contributions are summed in parallel.
const PARALLEL_THRESHOLD: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub system: SystemId,
    pub factors: (Weight, Weight),
    /// Highest weight → multiplicity; every multiplicity is positive.
    pub components: BTreeMap<Weight, BigInt>,
}

impl Decomposition {
    pub fn mult(&self, w: &Weight) -> BigInt {
        self.components.get(w).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.components.values().all(|m| m == &BigInt::from(1))
    }

    /// `Σ mult(μ) · dim E_μ`.
    pub fn total_dimension(&self, rs: &RootSystem) -> BigUint {
        self.components
            .iter()
            .map(|(w, m)| weyl_dimension_unchecked(rs, w) * m.magnitude())
            .sum()
    }

    /// `dim E_λ' · dim E_λ''`.
    pub fn product_dimension(&self, rs: &RootSystem) -> BigUint {
        weyl_dimension_unchecked(rs, &self.factors.0) * weyl_dimension_unchecked(rs, &self.factors.1)
    }

    pub fn conserves_dimension(&self, rs: &RootSystem) -> bool {
        self.total_dimension(rs) == self.product_dimension(rs)
    }
}

fn require_dominant(rs: &RootSystem, w: &Weight) -> Result<()> {
    rs.check_weight(w)?;
    if !w.is_dominant() {
        return Err(Error::NotDominant(w.to_string()));
    }
    Ok(())
}

fn finish(
    rs: &RootSystem,
    factors: (Weight, Weight),
    acc: HashMap<Weight, BigInt>,
    context: &str,
) -> Result<Decomposition> {
    let mut components = BTreeMap::new();
    for (w, m) in acc {
        if m.is_negative() {
            return Err(Error::NegativeMultiplicity {
                context: format!("{context} {} ⊗ {} in {}", factors.0, factors.1, rs.id()),
                weight: w.to_string(),
                mult: m.to_string(),
            });
        }
        if !m.is_zero() {
            components.insert(w, m);
        }
    }
    Ok(Decomposition {
        system: rs.id(),
        factors,
        components,
    })
}

pub fn tensor_decompose(rs: &RootSystem, left: &Weight, right: &Weight) -> Result<Decomposition> {
    tensor_decompose_with(rs, left, right, &Limits::from_env())
}

pub fn tensor_decompose_with(
    rs: &RootSystem,
    left: &Weight,
    right: &Weight,
    limits: &Limits,
) -> Result<Decomposition> {
    require_dominant(rs, left)?;
    require_dominant(rs, right)?;
    // The sum runs over the weights of the smaller factor.
    let (small, large) = if weyl_dimension(rs, left)? <= weyl_dimension(rs, right)? {
        (left, right)
    } else {
        (right, left)
    };
    let weights = full_weight_multiset_with(rs, small, limits)?;
    let shift = large + rs.rho();

    let contribute = |mut acc: HashMap<Weight, BigInt>, (nu, m): (&Weight, &BigInt)| {
        let mut w = nu + &shift;
        let reflections = walk_to_dominant(rs, &mut w);
        if w.coords().contains(&0) {
            return acc;
        }
        w -= rs.rho();
        let entry = acc.entry(w).or_default();
        if reflections.is_multiple_of(2) {
            *entry += m;
        } else {
            *entry -= m;
        }
        acc
    };

    let acc = if weights.len() >= PARALLEL_THRESHOLD {
        let entries: Vec<(&Weight, &BigInt)> = weights.iter().collect();
        entries
            .into_par_iter()
            .fold(HashMap::new, contribute)
            .reduce(HashMap::new, |mut a, b| {
                for (w, m) in b {
                    *a.entry(w).or_default() += m;
                }
                a
            })
    } else {
        weights.iter().fold(HashMap::new(), contribute)
    };
    finish(rs, (left.clone(), right.clone()), acc, "tensor_decompose")
}

/// Brute-force decomposition: convolve the two weight systems, then peel
/// off irreducible modules from the top.
pub fn tensor_oracle(rs: &RootSystem, left: &Weight, right: &Weight) -> Result<Decomposition> {
    tensor_oracle_with(rs, left, right, &Limits::from_env())
}

pub fn tensor_oracle_with(rs: &RootSystem, left: &Weight, right: &Weight, limits: &Limits) -> Result<Decomposition> {
    require_dominant(rs, left)?;
    require_dominant(rs, right)?;
    let product = weyl_dimension(rs, left)? * weyl_dimension(rs, right)?;
    if product > BigUint::from(limits.oracle) {
        return Err(Error::GuardExceeded {
            what: "tensor oracle product",
            predicted: product.to_string(),
            limit: limits.oracle,
        });
    }
    let a = full_weight_multiset_with(rs, left, limits)?;
    let b = full_weight_multiset_with(rs, right, limits)?;
    let mut product: HashMap<Weight, BigInt> = HashMap::new();
    for (wa, ma) in a.iter() {
        for (wb, mb) in b.iter() {
            *product.entry(wa + wb).or_default() += ma * mb;
        }
    }

    let mut order: Vec<Weight> = product.keys().cloned().collect();
    order.sort_by_cached_key(|w| (std::cmp::Reverse(rs.height_scaled(w)), w.clone()));
    let mut peeled: HashMap<Weight, BigInt> = HashMap::new();
    for w in order {
        let m = product.get(&w).cloned().unwrap_or_default();
        if m.is_zero() {
            continue;
        }
        if m.is_negative() || !w.is_dominant() {
            return Err(Error::NegativeMultiplicity {
                context: format!("tensor_oracle peel {left} ⊗ {right} in {}", rs.id()),
                weight: w.to_string(),
                mult: m.to_string(),
            });
        }
        let module = full_weight_multiset_with(rs, &w, limits)?;
        for (u, k) in module.iter() {
            *product.entry(u.clone()).or_default() -= &m * k;
        }
        peeled.insert(w, m);
    }
    finish(rs, (left.clone(), right.clone()), peeled, "tensor_oracle")
}
