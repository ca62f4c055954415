//! Dominant-chamber reduction by reflection walks, and Weyl orbits.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::rootsys::{RootSystem, Series, Weight};

/// The dominant representative `{λ}` of a weight together with `t(λ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedDominant {
    pub dominant: Weight,
    /// `(-1)^reflections`, or 0 when the weight is singular.
    pub sign: i8,
    pub reflections: u64,
}

/// Applies `s_i` (0-based) in place: `λ ← λ − ⟨λ, α_i∨⟩ α_i`.
#[inline]
pub(crate) fn reflect_in_place(rs: &RootSystem, w: &mut Weight, i: usize) {
    let k = w.get(i);
    if k == 0 {
        return;
    }
    let row = &rs.cartan()[i];
    for (c, a) in w.coords_mut().iter_mut().zip(row) {
        *c -= k * a;
    }
}

pub fn reflect(rs: &RootSystem, w: &Weight, i: usize) -> Weight {
    let mut out = w.clone();
    reflect_in_place(rs, &mut out, i);
    out
}

/// Reflection walk into the dominant chamber, always reflecting at the
/// lowest-index negative coordinate.
pub fn to_dominant(rs: &RootSystem, lambda: &Weight) -> Result<SignedDominant> {
    rs.check_weight(lambda)?;
    let mut w = lambda.clone();
    let reflections = walk_to_dominant(rs, &mut w);
    let sign = if w.coords().contains(&0) {
        0
    } else if reflections.is_multiple_of(2) {
        1
    } else {
        -1
    };
    Ok(SignedDominant {
        dominant: w,
        sign,
        reflections,
    })
}

/// Same as [`to_dominant`] for weights given by rational coordinates;
/// non-integral input is rejected.
pub fn to_dominant_rational(rs: &RootSystem, coords: &[num_rational::BigRational]) -> Result<SignedDominant> {
    let w = Weight::from_rationals(coords)?;
    to_dominant(rs, &w)
}

#[inline]
pub(crate) fn walk_to_dominant(rs: &RootSystem, w: &mut Weight) -> u64 {
    let mut count = 0u64;
    while let Some(i) = w.coords().iter().position(|&c| c < 0) {
        reflect_in_place(rs, w, i);
        count += 1;
    }
    count
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Order of the Weyl group of a connected simply-laced diagram.
pub fn weyl_group_order(series: Series, rank: usize) -> BigUint {
    match series {
        Series::A => factorial(rank + 1),
        Series::D => (BigUint::one() << (rank - 1)) * factorial(rank),
        Series::E => match rank {
            6 => BigUint::from(51_840u32),
            7 => BigUint::from(2_903_040u32),
            8 => BigUint::from(696_729_600u64),
            _ => unreachable!("validated E rank"),
        },
    }
}

/// Classifies a connected sub-diagram (given by node indices) of a
/// simply-laced Dynkin diagram.
fn classify_component(rs: &RootSystem, nodes: &[usize]) -> (Series, usize) {
    let k = nodes.len();
    let adj = |a: usize, b: usize| rs.cartan()[a][b] != 0 && a != b;
    let degree = |a: usize| nodes.iter().filter(|&&b| adj(a, b)).count();
    let Some(&branch) = nodes.iter().find(|&&a| degree(a) >= 3) else {
        return (Series::A, k);
    };
    // Leg lengths from the branch node.
    let mut legs = Vec::new();
    for &start in nodes.iter().filter(|&&b| adj(branch, b)) {
        let (mut prev, mut cur, mut len) = (branch, start, 1);
        while let Some(&next) = nodes.iter().find(|&&b| b != prev && adj(cur, b)) {
            prev = cur;
            cur = next;
            len += 1;
        }
        legs.push(len);
    }
    legs.sort_unstable();
    match legs.as_slice() {
        [1, 1, _] => (Series::D, k),
        [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => (Series::E, k),
        _ => unreachable!("finite simply-laced diagram"),
    }
}

/// Order of the parabolic subgroup generated by the simple reflections that
/// fix `lambda` (the zero coordinates of a dominant weight).
pub fn stabilizer_order(rs: &RootSystem, lambda: &Weight) -> BigUint {
    let zeros: Vec<usize> = (0..rs.rank()).filter(|&i| lambda.get(i) == 0).collect();
    let mut seen = vec![false; rs.rank()];
    let mut order = BigUint::one();
    for &start in &zeros {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut idx = 0;
        while idx < comp.len() {
            let a = comp[idx];
            for &b in &zeros {
                if !seen[b] && rs.cartan()[a][b] != 0 {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            idx += 1;
        }
        let (series, k) = classify_component(rs, &comp);
        order *= weyl_group_order(series, k);
    }
    order
}

/// `|W| / |W_λ|` for a dominant weight.
pub fn orbit_size(rs: &RootSystem, lambda: &Weight) -> BigUint {
    weyl_group_order(rs.series(), rs.rank()) / stabilizer_order(rs, lambda)
}

/// The W-orbit of a dominant weight, generated by closure under simple
/// reflections.
pub fn weyl_orbit(rs: &RootSystem, lambda: &Weight) -> Result<BTreeSet<Weight>> {
    weyl_orbit_with(rs, lambda, &Limits::from_env())
}

pub fn weyl_orbit_with(rs: &RootSystem, lambda: &Weight, limits: &Limits) -> Result<BTreeSet<Weight>> {
    rs.check_weight(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    let predicted = orbit_size(rs, lambda);
    if predicted > BigUint::from(limits.orbit) {
        return Err(Error::GuardExceeded {
            what: "Weyl orbit",
            predicted: predicted.to_string(),
            limit: limits.orbit,
        });
    }
    Ok(orbit_unchecked(rs, lambda, predicted.to_usize().unwrap_or(0)))
}

pub(crate) fn orbit_unchecked(rs: &RootSystem, lambda: &Weight, capacity: usize) -> BTreeSet<Weight> {
    let mut seen: HashSet<Weight> = HashSet::with_capacity(capacity);
    let mut queue = vec![lambda.clone()];
    seen.insert(lambda.clone());
    while let Some(w) = queue.pop() {
        for i in 0..rs.rank() {
            if w.get(i) == 0 {
                continue;
            }
            let r = reflect(rs, &w, i);
            if seen.insert(r.clone()) {
                queue.push(r);
            }
        }
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::SystemId;

    fn rs(s: &str) -> RootSystem {
        RootSystem::new(s.parse::<SystemId>().unwrap()).unwrap()
    }

    #[test]
    fn already_dominant_regular() {
        let e6 = rs("E6");
        let r = to_dominant(&e6, &Weight::from([1, 1, 1, 1, 1, 1])).unwrap();
        assert_eq!(r.dominant, Weight::from([1, 1, 1, 1, 1, 1]));
        assert_eq!((r.sign, r.reflections), (1, 0));
    }

    #[test]
    fn two_reflections_to_rho() {
        let e6 = rs("E6");
        let r = to_dominant(&e6, &Weight::from([1, -1, 1, 3, -1, 2])).unwrap();
        assert_eq!(r.dominant, Weight::from([1, 1, 1, 1, 1, 1]));
        assert_eq!(r.sign, 1);
        assert_eq!(r.reflections, 2);

        let r = to_dominant(&e6, &Weight::from([1, -1, 1, 2, 2, -1])).unwrap();
        assert_eq!(r.dominant, Weight::from([1, 1, 1, 1, 1, 1]));
        assert_eq!((r.sign, r.reflections), (1, 2));
    }

    #[test]
    fn first_reflection_is_at_alpha_2() {
        let e6 = rs("E6");
        let w = reflect(&e6, &Weight::from([1, -1, 1, 2, 2, -1]), 1);
        assert_eq!(w, Weight::from([1, 1, 1, 1, 2, -1]));
    }

    #[test]
    fn singular_weight_has_sign_zero() {
        let e6 = rs("E6");
        let r = to_dominant(&e6, &Weight::from([1, 1, 1, 0, 1, 1])).unwrap();
        assert_eq!(r.dominant, Weight::from([1, 1, 1, 0, 1, 1]));
        assert_eq!(r.sign, 0);
    }

    #[test]
    fn rational_input_rejected_when_non_integral() {
        use num_rational::BigRational;
        let a2 = rs("A2");
        let half = BigRational::new(1.into(), 2.into());
        assert!(matches!(
            to_dominant_rational(&a2, &[half.clone(), half]),
            Err(Error::NonIntegral(_))
        ));
        let two = BigRational::from_integer(2.into());
        let r = to_dominant_rational(&a2, &[two, BigRational::from_integer((-1).into())]).unwrap();
        assert_eq!(r.dominant, Weight::from([1, 1]));
    }

    #[test]
    fn minuscule_orbits() {
        let e6 = rs("E6");
        let orbit = weyl_orbit(&e6, &Weight::fundamental(6, 1)).unwrap();
        assert_eq!(orbit.len(), 27);
        for w in &orbit {
            assert!(w.coords().iter().all(|&c| c >= -1));
        }
        let d5 = rs("D5");
        assert_eq!(weyl_orbit(&d5, &Weight::fundamental(5, 4)).unwrap().len(), 16);
        assert_eq!(weyl_orbit(&d5, &Weight::fundamental(5, 5)).unwrap().len(), 16);
        assert_eq!(weyl_orbit(&d5, &Weight::zero(5)).unwrap().len(), 1);
        assert_eq!(weyl_orbit(&rs("E7"), &Weight::fundamental(7, 7)).unwrap().len(), 56);
    }

    #[test]
    fn orbit_of_rule_shift_weights() {
        // All 27 weights of the minuscule E6 module, as an explicit list.
        let listed: BTreeSet<Weight> = [
            [1, 0, 0, 0, 0, 0], [-1, 0, 1, 0, 0, 0], [0, 0, -1, 1, 0, 0], [0, 1, 0, -1, 1, 0],
            [0, -1, 0, 0, 1, 0], [0, 1, 0, 0, -1, 1], [0, -1, 0, 1, -1, 1], [0, 1, 0, 0, 0, -1],
            [0, 0, 1, -1, 0, 1], [0, -1, 0, 1, 0, -1], [1, 0, -1, 0, 0, 1], [0, 0, 1, -1, 1, -1],
            [-1, 0, 0, 0, 0, 1], [1, 0, -1, 0, 1, -1], [0, 0, 1, 0, -1, 0], [-1, 0, 0, 0, 1, -1],
            [1, 0, -1, 1, -1, 0], [-1, 0, 0, 1, -1, 0], [1, 1, 0, -1, 0, 0], [-1, 1, 1, -1, 0, 0],
            [1, -1, 0, 0, 0, 0], [-1, -1, 1, 0, 0, 0], [0, 1, -1, 0, 0, 0], [0, -1, -1, 1, 0, 0],
            [0, 0, 0, -1, 1, 0], [0, 0, 0, 0, -1, 1], [0, 0, 0, 0, 0, -1],
        ]
        .into_iter()
        .map(Weight::from)
        .collect();
        let e6 = rs("E6");
        assert_eq!(weyl_orbit(&e6, &Weight::fundamental(6, 1)).unwrap(), listed);
    }

    #[test]
    fn group_orders() {
        assert_eq!(weyl_group_order(Series::A, 2), BigUint::from(6u32));
        assert_eq!(weyl_group_order(Series::D, 4), BigUint::from(192u32));
        let e6 = rs("E6");
        assert_eq!(orbit_size(&e6, &Weight::fundamental(6, 2)), BigUint::from(72u32));
        assert_eq!(orbit_size(&e6, &Weight::zero(6)), BigUint::one());
        assert_eq!(orbit_size(&e6, &Weight::from([1, 1, 1, 1, 1, 1])), BigUint::from(51_840u32));
        let e7 = rs("E7");
        assert_eq!(orbit_size(&e7, &Weight::fundamental(7, 1)), BigUint::from(126u32));
    }

    #[test]
    fn orbit_guard() {
        let e7 = rs("E7");
        let limits = Limits { orbit: 1000, ..Limits::default() };
        let err = weyl_orbit_with(&e7, &Weight::from([1, 1, 1, 1, 1, 1, 1]), &limits).unwrap_err();
        assert!(err.is_guard());
        assert!(matches!(
            weyl_orbit(&e7, &Weight::from([-1, 0, 0, 0, 0, 0, 0])),
            Err(Error::NotDominant(_))
        ));
    }
}
