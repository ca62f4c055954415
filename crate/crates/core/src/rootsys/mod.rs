//! Simply-laced root systems built from their Cartan matrices.
//!
//! Everything is expressed in two integral bases: roots in the simple-root
//! basis, weights in the fundamental-weight basis. For a simply-laced system
//! the Cartan matrix `C` is symmetric, `α_i = Σ_j C[i][j] ϖ_j`, and the
//! invariant form on weights is `C⁻¹`.

mod weight;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, LazyLock, Mutex};
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use weight::Weight;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    D,
    E,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::D => 'D',
            Series::E => 'E',
        }
    }
}

impl FromStr for Series {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Series::A),
            "D" | "d" => Ok(Series::D),
            "E" | "e" => Ok(Series::E),
            other => Err(Error::UnsupportedSystem {
                series: other.to_string(),
                rank: 0,
                reason: "only the simply-laced series A, D and E are supported",
            }),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Cartan type label, e.g. `E6`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SystemId {
    pub series: Series,
    pub rank: usize,
}

impl SystemId {
    pub fn new(series: Series, rank: usize) -> Self {
        SystemId { series, rank }
    }

    pub fn validate(self) -> Result<Self> {
        let reject = |reason| {
            Err(Error::UnsupportedSystem {
                series: self.series.to_string(),
                rank: self.rank,
                reason,
            })
        };
        match self.series {
            Series::A if self.rank >= 1 => Ok(self),
            Series::A => reject("A_n needs n >= 1"),
            Series::D if self.rank >= 3 => Ok(self),
            Series::D => reject("D_n needs n >= 3"),
            Series::E if self.rank == 6 || self.rank == 7 => Ok(self),
            Series::E => reject("only E6 and E7 are supported"),
        }
    }
}

impl FromStr for SystemId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars
            .next()
            .ok_or_else(|| Error::Parse("empty root system type".into()))?;
        if !letter.is_ascii_alphabetic() {
            return Err(Error::Parse(format!("bad root system type `{s}`")));
        }
        let series = Series::from_str(&letter.to_string()).map_err(|_| Error::UnsupportedSystem {
            series: letter.to_string(),
            rank: 0,
            reason: "only the simply-laced series A, D and E are supported",
        })?;
        let rank: usize = chars
            .as_str()
            .trim_start_matches('_')
            .parse()
            .map_err(|_| Error::Parse(format!("bad root system type `{s}`")))?;
        SystemId::new(series, rank).validate()
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

/// An immutable simply-laced root system.
#[derive(Clone, Debug)]
pub struct RootSystem {
    id: SystemId,
    cartan: Vec<Vec<i64>>,
    /// Positive roots in the simple-root basis, sorted by height.
    positive_roots: Vec<Vec<i64>>,
    /// The same roots in the fundamental-weight basis.
    positive_root_weights: Vec<Weight>,
    rho: Weight,
    /// `inv_denom · C⁻¹`, an integer matrix.
    inv_scaled: Vec<Vec<i64>>,
    inv_denom: i64,
}

fn cartan_matrix(id: SystemId) -> Vec<Vec<i64>> {
    let n = id.rank;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    match id.series {
        Series::A => {
            for i in 1..n {
                edges.push((i - 1, i));
            }
        }
        Series::D => {
            for i in 1..n - 1 {
                edges.push((i - 1, i));
            }
            edges.push((n - 3, n - 1));
        }
        Series::E => {
            // Bourbaki: chain 1-3-4-5-6(-7), node 2 attached to node 4.
            edges.push((0, 2));
            edges.push((1, 3));
            for i in 2..n - 1 {
                edges.push((i, i + 1));
            }
        }
    }
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (i, j) in edges {
        c[i][j] = -1;
        c[j][i] = -1;
    }
    c
}

fn invert_exact(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("Cartan matrix of a finite type is invertible");
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &factor * p;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn generate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut roots: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect();
    let mut seen: HashSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut idx = 0;
    while idx < roots.len() {
        let beta = roots[idx].clone();
        for i in 0..n {
            let is_simple_i = beta.iter().enumerate().all(|(j, &c)| c == if j == i { 1 } else { 0 });
            if is_simple_i {
                continue;
            }
            let pairing: i64 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
            // α_i-string through β: down-length minus up-length equals the pairing.
            let mut down = 0;
            loop {
                let mut g = beta.clone();
                g[i] -= down + 1;
                if seen.contains(&g) {
                    down += 1;
                } else {
                    break;
                }
            }
            if down - pairing > 0 {
                let mut g = beta.clone();
                g[i] += 1;
                if seen.insert(g.clone()) {
                    roots.push(g);
                }
            }
        }
        idx += 1;
    }
    roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    roots
}

static SHARED: LazyLock<Mutex<HashMap<SystemId, Arc<RootSystem>>>> = LazyLock::new(Default::default);

/// Builds the root system of the given type.
pub fn build_root_system(series: Series, rank: usize) -> Result<RootSystem> {
    RootSystem::new(SystemId::new(series, rank))
}

impl RootSystem {
    pub fn new(id: SystemId) -> Result<Self> {
        let id = id.validate()?;
        let cartan = cartan_matrix(id);
        let inv = invert_exact(&cartan);
        let inv_denom = inv
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let inv_scaled = inv
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        (x * BigRational::from_integer(inv_denom.clone()))
                            .to_integer()
                            .to_i64()
                            .expect("small inverse Cartan entries")
                    })
                    .collect()
            })
            .collect();
        let positive_roots = generate_positive_roots(&cartan);
        let positive_root_weights = positive_roots
            .iter()
            .map(|r| root_to_weight_with(&cartan, r))
            .collect();
        Ok(RootSystem {
            id,
            rho: Weight::new(vec![1; id.rank]),
            cartan,
            positive_roots,
            positive_root_weights,
            inv_scaled,
            inv_denom: inv_denom.to_i64().expect("small determinant"),
        })
    }

    /// Process-wide shared instance; root systems are immutable.
    pub fn shared(id: SystemId) -> Result<Arc<RootSystem>> {
        let id = id.validate()?;
        let mut map = SHARED.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(rs) = map.get(&id) {
            return Ok(rs.clone());
        }
        let rs = Arc::new(RootSystem::new(id)?);
        map.insert(id, rs.clone());
        Ok(rs)
    }

    pub fn id(&self) -> SystemId {
        self.id
    }

    pub fn series(&self) -> Series {
        self.id.series
    }

    pub fn rank(&self) -> usize {
        self.id.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Positive roots in the simple-root basis, ordered by height.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Positive roots in the fundamental-weight basis, same order as
    /// [`RootSystem::positive_roots`].
    pub fn positive_root_weights(&self) -> &[Weight] {
        &self.positive_root_weights
    }

    /// Half the sum of the positive roots, `[1,...,1]`.
    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn highest_root(&self) -> &Weight {
        self.positive_root_weights.last().expect("non-empty root system")
    }

    /// The simple root α_i (0-based) as a weight: row `i` of the Cartan matrix.
    pub fn simple_root(&self, i: usize) -> Weight {
        Weight::new(self.cartan[i].clone())
    }

    /// Invariant form on the simple-root basis, i.e. the (symmetric) Cartan
    /// matrix with every root of squared length 2.
    pub fn form(&self) -> Vec<Vec<BigRational>> {
        self.cartan
            .iter()
            .map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect()
    }

    /// Gram matrix of the fundamental weights, `C⁻¹`.
    pub fn weight_gram(&self) -> Vec<Vec<BigRational>> {
        self.inv_scaled
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| BigRational::new(x.into(), self.inv_denom.into()))
                    .collect()
            })
            .collect()
    }

    pub fn check_weight(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank() {
            return Err(Error::RankMismatch {
                weight: w.to_string(),
                got: w.rank(),
                expected: self.rank(),
            });
        }
        Ok(())
    }

    /// `⟨λ, α_i∨⟩` with `i` counted from 1; this is coordinate `i` of λ.
    pub fn coroot_pairing(&self, lambda: &Weight, i: usize) -> Result<BigRational> {
        self.check_weight(lambda)?;
        if i == 0 || i > self.rank() {
            return Err(Error::IndexOutOfRange { index: i, rank: self.rank() });
        }
        Ok(BigRational::from_integer(lambda.get(i - 1).into()))
    }

    /// The W-invariant form `(λ, μ)`, normalized so roots have squared length 2.
    pub fn invariant_form(&self, lambda: &Weight, mu: &Weight) -> Result<BigRational> {
        self.check_weight(lambda)?;
        self.check_weight(mu)?;
        Ok(BigRational::new(self.form_scaled(lambda, mu).into(), self.inv_denom.into()))
    }

    /// `form_scale() · (λ, μ)`, always an integer.
    pub(crate) fn form_scaled(&self, lambda: &Weight, mu: &Weight) -> i64 {
        let (l, m) = (lambda.coords(), mu.coords());
        let mut acc = 0i64;
        for (i, row) in self.inv_scaled.iter().enumerate() {
            if l[i] == 0 {
                continue;
            }
            let s: i64 = row.iter().zip(m).map(|(a, b)| a * b).sum();
            acc += l[i] * s;
        }
        acc
    }

    /// Converts simple-root coordinates to the fundamental-weight basis.
    pub fn root_to_weight(&self, root: &[i64]) -> Weight {
        root_to_weight_with(&self.cartan, root)
    }

    /// Simple-root coordinates of a weight, if it lies in the root lattice.
    pub fn weight_to_root(&self, w: &Weight) -> Option<Vec<i64>> {
        let c = w.coords();
        let mut out = Vec::with_capacity(self.rank());
        for row in &self.inv_scaled {
            let s: i64 = row.iter().zip(c).map(|(a, b)| a * b).sum();
            if s % self.inv_denom != 0 {
                return None;
            }
            out.push(s / self.inv_denom);
        }
        Some(out)
    }

    /// `inv_denom · ⟨w, ρ∨⟩`: a linear functional that strictly increases
    /// along every positive root.
    pub(crate) fn height_scaled(&self, w: &Weight) -> i64 {
        let c = w.coords();
        self.inv_scaled
            .iter()
            .map(|row| row.iter().zip(c).map(|(a, b)| a * b).sum::<i64>())
            .sum()
    }
}

fn root_to_weight_with(cartan: &[Vec<i64>], root: &[i64]) -> Weight {
    let n = cartan.len();
    Weight::new(
        (0..n)
            .map(|j| (0..n).map(|i| root[i] * cartan[i][j]).sum())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::new(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn positive_root_counts() {
        for n in 1..=8 {
            assert_eq!(rs(&format!("A{n}")).positive_roots().len(), n * (n + 1) / 2);
        }
        for n in 3..=8 {
            assert_eq!(rs(&format!("D{n}")).positive_roots().len(), n * (n - 1));
        }
        assert_eq!(rs("D5").positive_roots().len(), 20);
        assert_eq!(rs("E6").positive_roots().len(), 36);
        assert_eq!(rs("E7").positive_roots().len(), 63);
    }

    #[test]
    fn unsupported_types_rejected() {
        assert!(matches!(
            build_root_system(Series::E, 8),
            Err(Error::UnsupportedSystem { .. })
        ));
        assert!(build_root_system(Series::D, 2).is_err());
        assert!(build_root_system(Series::A, 0).is_err());
        assert!("B3".parse::<SystemId>().is_err());
        assert!("G2".parse::<SystemId>().is_err());
    }

    #[test]
    fn cartan_is_simply_laced() {
        for name in ["A4", "D5", "E6", "E7"] {
            let r = rs(name);
            for (i, row) in r.cartan().iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    if i == j {
                        assert_eq!(x, 2);
                    } else {
                        assert!(x == 0 || x == -1);
                        assert_eq!(x, r.cartan()[j][i]);
                    }
                }
            }
        }
    }

    #[test]
    fn rho_is_all_ones_and_half_sum() {
        for name in ["A3", "D5", "E6", "E7"] {
            let r = rs(name);
            let mut sum = Weight::zero(r.rank());
            for w in r.positive_root_weights() {
                sum += w;
            }
            assert_eq!(&sum, &(r.rho() * 2));
        }
    }

    #[test]
    fn pairings() {
        let e6 = rs("E6");
        let one = BigRational::one();
        for i in 1..=6 {
            assert_eq!(e6.coroot_pairing(&Weight::from([1, 1, 1, 1, 1, 1]), i).unwrap(), one);
        }
        assert_eq!(e6.coroot_pairing(&Weight::from([1, 0, 0, 0, 0, 0]), 1).unwrap(), one);
        assert_eq!(
            e6.coroot_pairing(&Weight::from([1, -1, 1, 2, 2, -1]), 2).unwrap(),
            -one
        );
        assert!(matches!(
            e6.coroot_pairing(&Weight::zero(6), 7),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            e6.coroot_pairing(&Weight::zero(5), 1),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn form_values() {
        let e6 = rs("E6");
        let a1 = e6.simple_root(0);
        assert_eq!(e6.invariant_form(&a1, &a1).unwrap(), BigRational::from_integer(2.into()));
        let lam = Weight::from([3, 1, 0, 2, 0, 1]);
        assert!(e6.invariant_form(&Weight::zero(6), &lam).unwrap().is_zero());
        // ϖ_1 = e_1 in the orthogonal model of D5.
        let d5 = rs("D5");
        let w1 = Weight::fundamental(5, 1);
        assert_eq!(d5.invariant_form(&w1, &w1).unwrap(), BigRational::one());
    }

    #[test]
    fn form_pairs_fundamental_weights_with_simple_roots() {
        for name in ["A5", "D4", "D6", "E6", "E7"] {
            let r = rs(name);
            for j in 1..=r.rank() {
                let wj = Weight::fundamental(r.rank(), j);
                for i in 0..r.rank() {
                    let expected = BigRational::from_integer(wj.get(i).into());
                    assert_eq!(r.invariant_form(&wj, &r.simple_root(i)).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn form_is_positive_definite() {
        // Sylvester's criterion on the Cartan matrix.
        for name in ["A6", "D5", "D8", "E6", "E7"] {
            let r = rs(name);
            let n = r.rank();
            for k in 1..=n {
                let minor: Vec<Vec<i64>> = r.cartan()[..k].iter().map(|row| row[..k].to_vec()).collect();
                assert!(det_exact(&minor) > BigRational::zero(), "{name} minor {k}");
            }
        }
    }

    fn det_exact(m: &[Vec<i64>]) -> BigRational {
        let n = m.len();
        let mut a: Vec<Vec<BigRational>> = m
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let mut det = BigRational::one();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).unwrap();
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= a[c][c].clone();
            let pivot = a[c].clone();
            for row in a.iter_mut().skip(c + 1) {
                let f = &row[c] / &pivot[c];
                for (x, p) in row.iter_mut().zip(&pivot).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        det
    }

    #[test]
    fn root_pairings_are_bounded() {
        for name in ["A4", "D5", "E6", "E7"] {
            let r = rs(name);
            for beta in r.positive_root_weights() {
                for &c in beta.coords() {
                    assert!((-3..=3).contains(&c));
                }
            }
            assert!(r.highest_root().is_dominant());
        }
        // The adjoint representations.
        assert_eq!(rs("E6").highest_root(), &Weight::from([0, 1, 0, 0, 0, 0]));
        assert_eq!(rs("E7").highest_root(), &Weight::from([1, 0, 0, 0, 0, 0, 0]));
        assert_eq!(rs("D5").highest_root(), &Weight::from([0, 1, 0, 0, 0]));
        assert_eq!(rs("A3").highest_root(), &Weight::from([1, 0, 1]));
    }

    #[test]
    fn root_lattice_round_trip() {
        let r = rs("E7");
        for (root, w) in r.positive_roots().iter().zip(r.positive_root_weights()) {
            assert_eq!(r.weight_to_root(w).as_deref(), Some(root.as_slice()));
        }
        assert_eq!(r.weight_to_root(&Weight::fundamental(7, 7)), None);
    }
}
