//! Finite root data: Cartan matrix, positive roots and coroots, ρ, dominance and the dot action.
//!
//! Weights are integer vectors in the fundamental-weight basis, so `λ[i] = ⟨λ, α_i^∨⟩`.
//! Simple roots are indexed from 0 here; the label `s1` refers to index 0.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::{Deref, DerefMut};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer coordinate vector in the fundamental-weight basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * c).collect())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: i64, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + c * b).collect())
    }

    pub fn neg(&self) -> Weight {
        self.scale(-1)
    }
}

impl Deref for Weight {
    type Target = Vec<i64>;
    fn deref(&self) -> &Vec<i64> {
        &self.0
    }
}

impl DerefMut for Weight {
    fn deref_mut(&mut self) -> &mut Vec<i64> {
        &mut self.0
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Comma-separated integers, optionally wrapped in parentheses or brackets.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        if body.trim().is_empty() {
            return Ok(Weight(Vec::new()));
        }
        body.split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidInput(format!("not an integer: {p:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}

/// A positive root together with its coroot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    /// Coordinates in the fundamental-weight basis.
    pub weight: Weight,
    /// Coordinates in the simple-root basis.
    pub simple_coords: Vec<i64>,
    /// Coordinates of the coroot in the simple-coroot basis.
    pub coroot: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.simple_coords.iter().sum()
    }

    pub fn coroot_height(&self) -> i64 {
        self.coroot.iter().sum()
    }

    /// `⟨λ, α^∨⟩`.
    pub fn pair(&self, lambda: &[i64]) -> i64 {
        self.coroot.iter().zip(lambda).map(|(c, l)| c * l).sum()
    }
}

/// Result of moving a weight to its dominant dot-orbit representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominantData {
    /// The representative with all shifted simple pairings `≥ 0`.
    pub dominant: Weight,
    /// Simple-reflection indices `x` with `λ = x∘λ⁺`, leftmost first.
    pub word: Vec<usize>,
    /// `|{α > 0 : ⟨λ+ρ, α^∨⟩ < 0}|`.
    pub negative_count: usize,
    /// `|{α > 0 : ⟨λ+ρ, α^∨⟩ ∈ ℓZ_{<0}}|`.
    pub negative_ell_count: usize,
    /// `|{α > 0 : ⟨λ+ρ, α^∨⟩ ∈ ℓZ}|`.
    pub ell_count: usize,
    /// False when the orbit meets a wall, so `|λ⟩ = 0`.
    pub regular: bool,
}

/// Finite-type root datum built from a Cartan matrix.
#[derive(Clone, Debug)]
pub struct RootDatum {
    label: String,
    cartan: Vec<Vec<i64>>,
    simple: Vec<Weight>,
    positive: Vec<Root>,
    inverse: Vec<Vec<Ratio<i64>>>,
    w0_word: Vec<usize>,
    highest_root: usize,
    highest_coroot: usize,
}

const MAX_POSITIVE_ROOTS: usize = 2000;

impl RootDatum {
    /// Build from a type label such as `"A2"`, `"B3"`, `"G2"`.
    pub fn build(label: &str) -> Result<Self> {
        let cartan = cartan_matrix(label)?;
        Self::from_cartan(label, cartan)
    }

    /// Build from an explicit matrix with `A[i][j] = ⟨α_j, α_i^∨⟩`.
    pub fn from_cartan(label: &str, cartan: Vec<Vec<i64>>) -> Result<Self> {
        let n = cartan.len();
        if n == 0 {
            return Err(Error::NotFiniteType("empty matrix".into()));
        }
        for (i, row) in cartan.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotFiniteType("matrix is not square".into()));
            }
            if row[i] != 2 {
                return Err(Error::NotFiniteType(format!("diagonal entry {i} is not 2")));
            }
            for (j, &a) in row.iter().enumerate() {
                if i != j && (a > 0 || (a == 0) != (cartan[j][i] == 0)) {
                    return Err(Error::NotFiniteType(format!("bad off-diagonal entry ({i},{j})")));
                }
            }
        }
        let positive = enumerate_positive_roots(&cartan)?;
        let inverse = invert(&cartan).ok_or_else(|| Error::NotFiniteType("singular matrix".into()))?;
        let simple = (0..n).map(|j| Weight((0..n).map(|i| cartan[i][j]).collect())).collect();
        let highest_root = argmax(positive.iter().map(Root::height));
        let highest_coroot = argmax(positive.iter().map(Root::coroot_height));
        let mut out = RootDatum {
            label: label.to_string(),
            cartan,
            simple,
            positive,
            inverse,
            w0_word: Vec::new(),
            highest_root,
            highest_coroot,
        };
        out.w0_word = out.compute_w0_word();
        Ok(out)
    }

    fn compute_w0_word(&self) -> Vec<usize> {
        // Walk ρ to -ρ; the reflections taken, last first, spell w0.
        let mut x = self.rho();
        let mut word = Vec::new();
        while let Some(i) = (0..self.rank()).find(|&i| x[i] > 0) {
            x = self.reflect(i, &x);
            word.push(i);
        }
        word.reverse();
        word
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Simple root `α_i` in ω-coordinates (column `i` of the Cartan matrix).
    pub fn simple_root(&self, i: usize) -> &Weight {
        &self.simple[i]
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive.len()
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank()])
    }

    pub fn highest_root(&self) -> &Root {
        &self.positive[self.highest_root]
    }

    /// The positive root whose coroot is the highest coroot; it bounds the fundamental alcove.
    pub fn highest_coroot_root(&self) -> &Root {
        &self.positive[self.highest_coroot]
    }

    /// `1 + ⟨ρ, θ^∨⟩` for the highest root `θ`.
    pub fn dual_coxeter(&self) -> i64 {
        1 + self.highest_root().coroot_height()
    }

    pub fn is_irreducible(&self) -> bool {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if !seen[j] && self.cartan[i][j] != 0 {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Linear reflection `s_i v = v - ⟨v, α_i^∨⟩ α_i`.
    pub fn reflect(&self, i: usize, v: &Weight) -> Weight {
        v.add_scaled(-v[i], &self.simple[i])
    }

    /// Reflection in an arbitrary positive root.
    pub fn reflect_root(&self, root: &Root, v: &Weight) -> Weight {
        v.add_scaled(-root.pair(v), &root.weight)
    }

    /// `s_i∘λ = λ - ⟨λ+ρ, α_i^∨⟩ α_i`.
    pub fn dot_reflect(&self, i: usize, lambda: &Weight) -> Weight {
        lambda.add_scaled(-(lambda[i] + 1), &self.simple[i])
    }

    /// Linear action of `s_{w[0]} s_{w[1]} ⋯` on `v`.
    pub fn apply_word(&self, word: &[usize], v: &Weight) -> Weight {
        word.iter().rev().fold(v.clone(), |acc, &i| self.reflect(i, &acc))
    }

    /// Dot action of `s_{w[0]} s_{w[1]} ⋯` on `λ`.
    pub fn dot_word(&self, word: &[usize], lambda: &Weight) -> Weight {
        word.iter().rev().fold(lambda.clone(), |acc, &i| self.dot_reflect(i, &acc))
    }

    /// A reduced word for the longest element `w0`.
    pub fn w0_word(&self) -> &[usize] {
        &self.w0_word
    }

    pub fn w0_apply(&self, v: &Weight) -> Weight {
        self.apply_word(&self.w0_word, v)
    }

    pub fn w0_dot(&self, lambda: &Weight) -> Weight {
        self.dot_word(&self.w0_word, lambda)
    }

    /// Shifted pairings `⟨λ+ρ, α^∨⟩` for all positive roots.
    pub fn shifted_pairings(&self, lambda: &Weight) -> Vec<i64> {
        let shifted = lambda.add(&self.rho());
        self.positive.iter().map(|r| r.pair(&shifted)).collect()
    }

    /// `⟨λ+ρ, α_i^∨⟩ > 0` for every simple `i`.
    pub fn is_dominant(&self, lambda: &Weight) -> bool {
        lambda.iter().all(|&c| c + 1 > 0)
    }

    /// Some shifted simple pairing vanishes.
    pub fn on_simple_wall(&self, lambda: &Weight) -> bool {
        lambda.iter().any(|&c| c + 1 == 0)
    }

    pub fn dominant_data(&self, lambda: &Weight, ell: i64) -> DominantData {
        let mut mu = lambda.clone();
        let mut word = Vec::new();
        while let Some(i) = (0..self.rank()).find(|&i| mu[i] + 1 < 0) {
            mu = self.dot_reflect(i, &mu);
            word.push(i);
        }
        let pairings = self.shifted_pairings(lambda);
        let negative_count = pairings.iter().filter(|&&p| p < 0).count();
        let negative_ell_count = pairings.iter().filter(|&&p| p < 0 && p % ell == 0).count();
        let ell_count = pairings.iter().filter(|&&p| p % ell == 0).count();
        let regular = !self.on_simple_wall(&mu);
        DominantData { dominant: mu, word, negative_count, negative_ell_count, ell_count, regular }
    }

    /// Coordinates of `v` in the simple-root basis, if integral.
    pub fn simple_coords(&self, v: &Weight) -> Option<Vec<i64>> {
        let n = self.rank();
        (0..n)
            .map(|i| {
                let s: Ratio<i64> = (0..n).map(|j| self.inverse[i][j] * v[j]).sum();
                s.is_integer().then(|| s.to_integer())
            })
            .collect()
    }

    fn rational_simple_coords(&self, v: &Weight) -> Vec<Ratio<i64>> {
        let n = self.rank();
        (0..n).map(|i| (0..n).map(|j| self.inverse[i][j] * v[j]).sum()).collect()
    }

    /// `μ ≤ λ`: `λ - μ` is a nonnegative integer combination of simple roots.
    pub fn leq(&self, mu: &Weight, lambda: &Weight) -> bool {
        self.simple_coords(&lambda.sub(mu)).is_some_and(|c| c.iter().all(|&x| x >= 0))
    }

    /// Height of `λ - μ` in simple roots (caller guarantees integrality).
    pub fn depth(&self, mu: &Weight, lambda: &Weight) -> i64 {
        self.simple_coords(&lambda.sub(mu)).map(|c| c.iter().sum()).unwrap_or(i64::MAX)
    }

    /// All dominant `μ ≤ λ`, ordered by depth below `λ` and then coordinates.
    pub fn enumerate_below(&self, lambda: &Weight) -> Vec<Weight> {
        let n = self.rank();
        // A dominant μ has A^{-1}(μ+ρ) > 0, so the subtracted multiplicities are bounded.
        let bounds: Vec<i64> = self
            .rational_simple_coords(&lambda.add(&self.rho()))
            .iter()
            .map(|r| if r.is_negative() || r.is_zero() { -1 } else { r.floor().to_integer() })
            .collect();
        if bounds.iter().any(|&b| b < 0) {
            return if self.is_dominant(lambda) { vec![lambda.clone()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        let mut c = vec![0i64; n];
        loop {
            let mut mu = lambda.clone();
            for (j, &k) in c.iter().enumerate() {
                if k != 0 {
                    mu = mu.add_scaled(-k, &self.simple[j]);
                }
            }
            if self.is_dominant(&mu) {
                out.push((c.iter().sum::<i64>(), mu));
            }
            let mut j = 0;
            loop {
                if j == n {
                    out.sort();
                    return out.into_iter().map(|(_, w)| w).collect();
                }
                c[j] += 1;
                if c[j] <= bounds[j] {
                    break;
                }
                c[j] = 0;
                j += 1;
            }
        }
    }
}

fn argmax(it: impl Iterator<Item = i64>) -> usize {
    let mut best = (i64::MIN, 0);
    for (i, v) in it.enumerate() {
        if v > best.0 {
            best = (v, i);
        }
    }
    best.1
}

fn enumerate_positive_roots(cartan: &[Vec<i64>]) -> Result<Vec<Root>> {
    let n = cartan.len();
    let unit = |i: usize| (0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut roots = Vec::new();
    for i in 0..n {
        seen.insert(unit(i));
        queue.push_back((unit(i), unit(i)));
    }
    while let Some((b, g)) = queue.pop_front() {
        for i in 0..n {
            let pb: i64 = (0..n).map(|j| b[j] * cartan[i][j]).sum();
            let pg: i64 = (0..n).map(|j| g[j] * cartan[j][i]).sum();
            let mut b2 = b.clone();
            b2[i] -= pb;
            let mut g2 = g.clone();
            g2[i] -= pg;
            // Finite types never need a coefficient above 6.
            if b2.iter().chain(&g2).any(|&x| x > 64) {
                return Err(Error::NotFiniteType("root system is infinite".into()));
            }
            if b2.iter().all(|&x| x >= 0) && b2.iter().any(|&x| x > 0) && seen.insert(b2.clone()) {
                queue.push_back((b2, g2));
            }
        }
        roots.push((b, g));
        if roots.len() > MAX_POSITIVE_ROOTS {
            return Err(Error::NotFiniteType("root system is infinite".into()));
        }
    }
    roots.sort_by_key(|(b, _)| (b.iter().sum::<i64>(), std::cmp::Reverse(b.clone())));
    Ok(roots
        .into_iter()
        .map(|(b, g)| {
            let weight = Weight((0..n).map(|i| (0..n).map(|j| cartan[i][j] * b[j]).sum()).collect());
            Root { weight, simple_coords: b, coroot: g }
        })
        .collect())
}

fn invert(m: &[Vec<i64>]) -> Option<Vec<Vec<Ratio<i64>>>> {
    let n = m.len();
    let mut a: Vec<Vec<Ratio<i64>>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Ratio<i64>> = row.iter().map(|&x| Ratio::from_integer(x)).collect();
            r.extend((0..n).map(|j| Ratio::from_integer(i64::from(i == j))));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..2 * n {
                    let sub = f * a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Cartan matrix for a type label (Bourbaki numbering).
pub fn cartan_matrix(label: &str) -> Result<Vec<Vec<i64>>> {
    let bad = || Error::InvalidInput(format!("unknown Cartan type {label:?}"));
    let mut chars = label.trim().chars();
    let family = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
    let n: usize = chars.as_str().parse().map_err(|_| bad())?;
    let supported = match family {
        'A' => (1..=9).contains(&n),
        'B' | 'C' => (2..=4).contains(&n),
        'D' => n == 4,
        'G' => n == 2,
        'F' => n == 4,
        _ => false,
    };
    if !supported {
        return Err(bad());
    }
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match family {
        'A' => (0..n - 1).for_each(|i| link(i, i + 1, -1, -1)),
        'B' => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -1, -2);
        }
        'C' => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -2, -1);
        }
        'D' => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 3, n - 1, -1, -1);
        }
        'G' => link(0, 1, -3, -1),
        'F' => {
            link(0, 1, -1, -1);
            link(1, 2, -1, -2);
            link(2, 3, -1, -1);
        }
        _ => unreachable!(),
    }
    Ok(a)
}

/// Distinct dominant weights of a list, sorted.
pub fn dominant_set(root: &RootDatum, weights: impl IntoIterator<Item = Weight>) -> BTreeSet<Weight> {
    weights.into_iter().filter(|w| root.is_dominant(w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn build_examples() {
        let a1 = RootDatum::build("A1").unwrap();
        assert_eq!((a1.rank(), a1.num_positive_roots(), a1.dual_coxeter()), (1, 1, 2));
        let a2 = RootDatum::build("A2").unwrap();
        assert_eq!((a2.num_positive_roots(), a2.dual_coxeter()), (3, 3));
        let g2 = RootDatum::build("G2").unwrap();
        assert_eq!((g2.num_positive_roots(), g2.dual_coxeter()), (6, 4));
    }

    #[test]
    fn root_counts_and_dual_coxeter_numbers() {
        // (type, |R+|, dual Coxeter number) from the classification tables.
        let table = [
            ("A3", 6, 4),
            ("A9", 45, 10),
            ("B2", 4, 3),
            ("B3", 9, 5),
            ("B4", 16, 7),
            ("C2", 4, 3),
            ("C3", 9, 4),
            ("C4", 16, 5),
            ("D4", 12, 6),
            ("F4", 24, 9),
        ];
        for (label, count, h) in table {
            let r = RootDatum::build(label).unwrap();
            assert_eq!(r.num_positive_roots(), count, "{label}");
            assert_eq!(r.dual_coxeter(), h, "{label}");
            assert_eq!(r.w0_word().len(), count, "{label}");
            assert_eq!(r.w0_apply(&r.rho()), r.rho().neg(), "{label}");
            for i in 0..r.rank() {
                assert_eq!(r.rho()[i], 1);
            }
        }
    }

    #[test]
    fn rejects_non_finite() {
        let affine = vec![vec![2, -2], vec![-2, 2]];
        assert!(matches!(RootDatum::from_cartan("x", affine), Err(Error::NotFiniteType(_))));
        let hyperbolic = vec![vec![2, -3], vec![-3, 2]];
        assert!(matches!(RootDatum::from_cartan("x", hyperbolic), Err(Error::NotFiniteType(_))));
        let lopsided = vec![vec![2, 0], vec![-1, 2]];
        assert!(RootDatum::from_cartan("x", lopsided).is_err());
        assert!(RootDatum::build("E6").is_err());
    }

    #[test]
    fn dot_reflect_examples() {
        let a1 = RootDatum::build("A1").unwrap();
        assert_eq!(a1.dot_reflect(0, &w(&[10])), w(&[-12]));
        assert_eq!(a1.dot_reflect(0, &w(&[-1])), w(&[-1]));
        let a2 = RootDatum::build("A2").unwrap();
        assert_eq!(a2.dot_reflect(0, &w(&[1, 2])), w(&[-3, 4]));
    }

    #[test]
    fn dominant_data_examples() {
        let a1 = RootDatum::build("A1").unwrap();
        let d = a1.dominant_data(&w(&[9]), 5);
        assert_eq!((d.dominant.clone(), d.word.len(), d.ell_count), (w(&[9]), 0, 1));
        let d = a1.dominant_data(&w(&[-12]), 5);
        assert_eq!(d.dominant, w(&[10]));
        assert_eq!(d.word, vec![0]);
        assert_eq!((d.negative_count, d.negative_ell_count), (1, 0));
        assert!(!a1.dominant_data(&w(&[-1]), 5).regular);
    }

    #[test]
    fn dominance_examples() {
        let a1 = RootDatum::build("A1").unwrap();
        let below: Vec<Weight> = a1.enumerate_below(&w(&[10]));
        assert_eq!(below, [10, 8, 6, 4, 2, 0].iter().map(|&c| w(&[c])).collect::<Vec<_>>());
        assert!(a1.leq(&w(&[0]), &w(&[10])));
        assert!(!a1.leq(&w(&[1]), &w(&[10])));
        let a2 = RootDatum::build("A2").unwrap();
        assert_eq!(a2.enumerate_below(&w(&[1, 1])), vec![w(&[1, 1]), w(&[0, 0])]);
    }

    /// Brute force over a coordinate box: every dominant weight ≤ λ.
    fn brute_below(r: &RootDatum, lambda: &Weight, bound: i64) -> BTreeSet<Weight> {
        let n = r.rank();
        let mut out = BTreeSet::new();
        let mut c = vec![0i64; n];
        loop {
            let mu = Weight(c.clone());
            if r.leq(&mu, lambda) {
                out.insert(mu);
            }
            let mut j = 0;
            loop {
                if j == n {
                    return out;
                }
                c[j] += 1;
                if c[j] <= bound {
                    break;
                }
                c[j] = 0;
                j += 1;
            }
        }
    }

    #[test]
    fn enumerate_below_matches_brute_force() {
        for label in ["A2", "B2", "G2", "A3"] {
            let r = RootDatum::build(label).unwrap();
            for lam in [vec![3; r.rank()], (0..r.rank() as i64).collect::<Vec<_>>()] {
                let lam = Weight(lam);
                let got: BTreeSet<Weight> = r.enumerate_below(&lam).into_iter().collect();
                assert_eq!(got, brute_below(&r, &lam, 20), "{label} {lam}");
            }
        }
    }

    fn weight_in(rank: usize, bound: i64) -> impl Strategy<Value = Weight> {
        prop::collection::vec(-bound..=bound, rank).prop_map(Weight)
    }

    proptest! {
        #[test]
        fn dot_reflect_is_involution(lam in weight_in(2, 15), i in 0usize..2) {
            for label in ["A2", "B2", "G2"] {
                let r = RootDatum::build(label).unwrap();
                prop_assert_eq!(r.dot_reflect(i, &r.dot_reflect(i, &lam)), lam.clone());
            }
        }

        #[test]
        fn dominant_data_is_consistent(lam in weight_in(2, 12), ell in 2i64..6) {
            for label in ["A2", "B2", "G2"] {
                let r = RootDatum::build(label).unwrap();
                let d = r.dominant_data(&lam, ell);
                prop_assert_eq!(r.dot_word(&d.word, &d.dominant), lam.clone());
                prop_assert!(d.dominant.iter().all(|&c| c + 1 >= 0));
                // Counts recomputed from the definitions.
                let pair = r.shifted_pairings(&lam);
                prop_assert_eq!(d.ell_count, pair.iter().filter(|p| *p % ell == 0).count());
                prop_assert_eq!(d.negative_count, pair.iter().filter(|p| **p < 0).count());
                prop_assert_eq!(d.regular, pair.iter().all(|&p| p != 0));
                if d.regular {
                    prop_assert_eq!(d.word.len(), d.negative_count);
                }
                // Reflecting keeps the dominant representative.
                for i in 0..r.rank() {
                    let other = r.dominant_data(&r.dot_reflect(i, &lam), ell);
                    prop_assert_eq!(other.dominant, d.dominant.clone());
                }
            }
        }

        #[test]
        fn enumerate_below_is_downward_closed(lam in weight_in(2, 6)) {
            let r = RootDatum::build("A2").unwrap();
            if r.is_dominant(&lam) {
                let below = r.enumerate_below(&lam);
                let set: BTreeSet<Weight> = below.iter().cloned().collect();
                for mu in &below {
                    prop_assert!(r.leq(mu, &lam));
                    for nu in r.enumerate_below(mu) {
                        prop_assert!(set.contains(&nu));
                    }
                }
            }
        }
    }
}
