//! Weight systems of irreducible modules: Weyl's dimension formula and
//! Freudenthal's multiplicity recursion.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, LazyLock, Mutex};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::rootsys::{RootSystem, SystemId, Weight};
use crate::weyl::{self, orbit_size};

/// Every weight of an irreducible module with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMultiset {
    pub entries: BTreeMap<Weight, BigInt>,
    pub total: BigInt,
}

impl WeightMultiset {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mult(&self, w: &Weight) -> BigInt {
        self.entries.get(w).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &BigInt)> {
        self.entries.iter()
    }
}

pub type DominantTable = BTreeMap<Weight, BigInt>;

fn require_dominant(rs: &RootSystem, lambda: &Weight) -> Result<()> {
    rs.check_weight(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    Ok(())
}

/// `dim E_λ = Π_{β>0} (λ+δ, β) / (δ, β)`.
pub fn weyl_dimension(rs: &RootSystem, lambda: &Weight) -> Result<BigUint> {
    require_dominant(rs, lambda)?;
    Ok(weyl_dimension_unchecked(rs, lambda))
}

pub(crate) fn weyl_dimension_unchecked(rs: &RootSystem, lambda: &Weight) -> BigUint {
    let shifted = lambda + rs.rho();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for beta in rs.positive_roots() {
        let top: i64 = beta.iter().zip(shifted.coords()).map(|(b, c)| b * c).sum();
        let bottom: i64 = beta.iter().sum();
        num *= BigUint::from(top as u64);
        den *= BigUint::from(bottom as u64);
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    q
}

type TableCache = HashMap<(SystemId, Weight), Arc<DominantTable>>;

static CACHE: LazyLock<Mutex<TableCache>> =
    LazyLock::new(Default::default);

/// Multiplicity of every dominant weight of `E_λ`, by Freudenthal's formula.
/// Results are memoized process-wide.
pub fn dominant_weight_multiplicities(rs: &RootSystem, lambda: &Weight) -> Result<Arc<DominantTable>> {
    dominant_weight_multiplicities_with(rs, lambda, &Limits::from_env())
}

pub fn dominant_weight_multiplicities_with(
    rs: &RootSystem,
    lambda: &Weight,
    limits: &Limits,
) -> Result<Arc<DominantTable>> {
    require_dominant(rs, lambda)?;
    let key = (rs.id(), lambda.clone());
    if let Some(t) = CACHE.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(t.clone());
    }
    let table = Arc::new(freudenthal(rs, lambda, limits)?);
    CACHE
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .entry(key)
        .or_insert_with(|| table.clone());
    Ok(table)
}

/// Dominant weights `μ ≤ λ`, highest first.
fn dominant_weights_below(rs: &RootSystem, lambda: &Weight, limits: &Limits) -> Result<Vec<Weight>> {
    let mut seen: HashSet<Weight> = HashSet::new();
    seen.insert(lambda.clone());
    let mut stack = vec![lambda.clone()];
    while let Some(mu) = stack.pop() {
        for alpha in rs.positive_root_weights() {
            let nu = &mu - alpha;
            if nu.is_dominant() && !seen.contains(&nu) {
                seen.insert(nu.clone());
                stack.push(nu);
            }
        }
        if seen.len() as u64 > limits.orbit {
            return Err(Error::GuardExceeded {
                what: "dominant weight set",
                predicted: format!(">{}", seen.len()),
                limit: limits.orbit,
            });
        }
    }
    let mut out: Vec<Weight> = seen.into_iter().collect();
    out.sort_by_cached_key(|w| (std::cmp::Reverse(rs.height_scaled(w)), w.clone()));
    Ok(out)
}

fn freudenthal(rs: &RootSystem, lambda: &Weight, limits: &Limits) -> Result<DominantTable> {
    let rho = rs.rho();
    let top = lambda + rho;
    let top_norm = rs.form_scaled(&top, &top);
    let mut table = DominantTable::new();
    let order = dominant_weights_below(rs, lambda, limits)?;
    for mu in order {
        if &mu == lambda {
            table.insert(mu, BigInt::one());
            continue;
        }
        let mut acc = BigInt::zero();
        for alpha in rs.positive_root_weights() {
            let mut nu = &mu + alpha;
            loop {
                let mut rep = nu.clone();
                weyl::walk_to_dominant(rs, &mut rep);
                let Some(m) = table.get(&rep) else { break };
                acc += m * BigInt::from(rs.form_scaled(&nu, alpha));
                nu += alpha;
            }
        }
        let shifted = &mu + rho;
        let gap = top_norm - rs.form_scaled(&shifted, &shifted);
        debug_assert!(gap > 0);
        let (m, r) = (acc * BigInt::from(2)).div_rem(&BigInt::from(gap));
        debug_assert!(r.is_zero(), "Freudenthal quotient must be exact");
        if m.is_positive() {
            table.insert(mu, m);
        }
    }
    Ok(table)
}

/// The full weight system of `E_λ` with multiplicities, assembled from
/// the Weyl orbits of its dominant weights.
pub fn full_weight_multiset(rs: &RootSystem, lambda: &Weight) -> Result<WeightMultiset> {
    full_weight_multiset_with(rs, lambda, &Limits::from_env())
}

pub fn full_weight_multiset_with(rs: &RootSystem, lambda: &Weight, limits: &Limits) -> Result<WeightMultiset> {
    let dominant = dominant_weight_multiplicities_with(rs, lambda, limits)?;
    let predicted: BigUint = dominant.keys().map(|mu| orbit_size(rs, mu)).sum();
    if predicted > BigUint::from(limits.orbit) {
        return Err(Error::GuardExceeded {
            what: "weight system",
            predicted: predicted.to_string(),
            limit: limits.orbit,
        });
    }
    let mut entries = BTreeMap::new();
    let mut total = BigInt::zero();
    for (mu, m) in dominant.iter() {
        let size = orbit_size(rs, mu);
        for w in weyl::orbit_unchecked(rs, mu, size.to_usize().unwrap_or(0)) {
            total += m;
            entries.insert(w, m.clone());
        }
    }
    Ok(WeightMultiset { entries, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::reflect;

    fn rs(s: &str) -> RootSystem {
        RootSystem::new(s.parse::<SystemId>().unwrap()).unwrap()
    }

    fn dim(r: &RootSystem, w: &[i64]) -> u64 {
        weyl_dimension(r, &Weight::new(w.to_vec())).unwrap().to_u64().unwrap()
    }

    #[test]
    fn dimensions() {
        let e6 = rs("E6");
        assert_eq!(dim(&e6, &[0, 0, 0, 0, 0, 0]), 1);
        assert_eq!(dim(&e6, &[1, 0, 0, 0, 0, 0]), 27);
        assert_eq!(dim(&e6, &[0, 1, 0, 0, 0, 0]), 78);
        assert_eq!(dim(&e6, &[1, 0, 0, 0, 0, 1]), 650);
        let d5 = rs("D5");
        let spin: Vec<u64> = (0..4).map(|b| dim(&d5, &[0, 0, 0, b, 0])).collect();
        assert_eq!(spin, vec![1, 16, 126, 672]);
        assert_eq!(dim(&d5, &[1, 0, 0, 0, 0]), 10);
        assert_eq!(dim(&rs("E7"), &[0, 0, 0, 0, 0, 0, 1]), 56);
        assert_eq!(dim(&rs("E7"), &[1, 0, 0, 0, 0, 0, 0]), 133);
        assert_eq!(dim(&rs("A2"), &[1, 1]), 8);
    }

    #[test]
    fn non_dominant_rejected() {
        let e6 = rs("E6");
        assert!(matches!(
            weyl_dimension(&e6, &Weight::from([1, -1, 0, 0, 0, 0])),
            Err(Error::NotDominant(_))
        ));
        assert!(matches!(
            weyl_dimension(&e6, &Weight::from([1, 0, 0])),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn minuscule_has_single_dominant_weight() {
        let e6 = rs("E6");
        let t = dominant_weight_multiplicities(&e6, &Weight::fundamental(6, 1)).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[&Weight::fundamental(6, 1)], BigInt::one());
    }

    #[test]
    fn adjoint_zero_weight_is_rank() {
        for name in ["A3", "D5", "E6", "E7"] {
            let r = rs(name);
            let t = dominant_weight_multiplicities(&r, r.highest_root()).unwrap();
            assert_eq!(t[&Weight::zero(r.rank())], BigInt::from(r.rank()));
        }
    }

    #[test]
    fn trivial_module() {
        let e6 = rs("E6");
        let t = dominant_weight_multiplicities(&e6, &Weight::zero(6)).unwrap();
        assert_eq!(t.len(), 1);
        let full = full_weight_multiset(&e6, &Weight::zero(6)).unwrap();
        assert_eq!(full.total, BigInt::one());
    }

    #[test]
    fn full_multisets() {
        let e6 = rs("E6");
        let m = full_weight_multiset(&e6, &Weight::fundamental(6, 1)).unwrap();
        assert_eq!(m.len(), 27);
        assert!(m.iter().all(|(_, k)| k.is_one()));
        assert!(m.iter().all(|(w, _)| w.coords().iter().all(|&c| c >= -1)));

        let m = full_weight_multiset(&e6, &Weight::from([1, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(m.total, BigInt::from(650));

        let d5 = rs("D5");
        let m = full_weight_multiset(&d5, &Weight::fundamental(5, 1)).unwrap();
        assert_eq!(m.len(), 10);
        assert!(m.iter().all(|(_, k)| k.is_one()));
    }

    /// ±e_i in the orthogonal model of D5, converted to fundamental
    /// coordinates `⟨x, α_i∨⟩`.
    #[test]
    fn d5_vector_weights_match_orthogonal_model() {
        let to_fund = |x: [i64; 5]| Weight::from([x[0] - x[1], x[1] - x[2], x[2] - x[3], x[3] - x[4], x[3] + x[4]]);
        let mut expected = std::collections::BTreeSet::new();
        for i in 0..5 {
            for s in [1, -1] {
                let mut x = [0; 5];
                x[i] = s;
                expected.insert(to_fund(x));
            }
        }
        let d5 = rs("D5");
        let m = full_weight_multiset(&d5, &Weight::fundamental(5, 1)).unwrap();
        let got: std::collections::BTreeSet<Weight> = m.entries.keys().cloned().collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn multisets_are_consistent() {
        let cases: &[(&str, &[i64])] = &[
            ("A2", &[2, 1]),
            ("A3", &[1, 1, 1]),
            ("D4", &[1, 0, 1, 1]),
            ("D5", &[1, 0, 0, 1, 0]),
            ("E6", &[0, 1, 0, 0, 0, 1]),
            ("E6", &[2, 0, 0, 0, 0, 0]),
        ];
        for (name, hw) in cases {
            let r = rs(name);
            let lambda = Weight::new(hw.to_vec());
            let m = full_weight_multiset(&r, &lambda).unwrap();
            assert_eq!(m.total, BigInt::from(weyl_dimension(&r, &lambda).unwrap()), "{name} {lambda}");
            assert!(m.mult(&lambda).is_one());
            for (w, k) in m.iter() {
                for i in 0..r.rank() {
                    assert_eq!(&m.mult(&reflect(&r, w, i)), k);
                }
                assert!(r
                    .weight_to_root(&(&lambda - w))
                    .is_some_and(|c| c.iter().all(|&x| x >= 0)));
            }
        }
    }
}
