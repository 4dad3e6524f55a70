//! Sparse finite linear combinations with Laurent polynomial coefficients.

use std::collections::btree_map::{self, BTreeMap};
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use crate::laurent::LaurentPoly;

/// `Σ c_k [k]` with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Combination<K: Ord> {
    coeffs: BTreeMap<K, LaurentPoly>,
}

impl<K: Ord> Default for Combination<K> {
    fn default() -> Self {
        Self { coeffs: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Combination<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(k: K, c: LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(k, c);
        out
    }

    pub fn basis(k: K) -> Self {
        Self::term(k, LaurentPoly::one())
    }

    pub fn add_term(&mut self, k: K, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(k) {
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, c: &LaurentPoly, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.coeffs {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: &K) -> LaurentPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&K, &LaurentPoly)> {
        self.coeffs.iter()
    }

    pub fn keys(&self) -> impl DoubleEndedIterator<Item = &K> {
        self.coeffs.keys()
    }

    pub fn as_map(&self) -> &BTreeMap<K, LaurentPoly> {
        &self.coeffs
    }

    pub fn into_map(self) -> BTreeMap<K, LaurentPoly> {
        self.coeffs
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_scaled(c, self);
        out
    }

    /// Apply `bar` to every coefficient.
    pub fn bar_coeffs(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c.bar())).collect() }
    }

    /// Relabel keys, merging collisions.
    pub fn map_keys<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> J) -> Combination<J> {
        let mut out = Combination::zero();
        for (k, c) in &self.coeffs {
            out.add_term(f(k), c.clone());
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, LaurentPoly)> for Combination<K> {
    fn from_iter<I: IntoIterator<Item = (K, LaurentPoly)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<K: Ord + Clone> AddAssign<&Combination<K>> for Combination<K> {
    fn add_assign(&mut self, rhs: &Combination<K>) {
        for (k, c) in &rhs.coeffs {
            self.add_term(k.clone(), c.clone());
        }
    }
}

impl<K: Ord + Clone> SubAssign<&Combination<K>> for Combination<K> {
    fn sub_assign(&mut self, rhs: &Combination<K>) {
        for (k, c) in &rhs.coeffs {
            self.add_term(k.clone(), -c);
        }
    }
}

impl<K: Ord + Clone> Add for &Combination<K> {
    type Output = Combination<K>;
    fn add(self, rhs: &Combination<K>) -> Combination<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Sub for &Combination<K> {
    type Output = Combination<K>;
    fn sub(self, rhs: &Combination<K>) -> Combination<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K: Ord + Clone> Neg for &Combination<K> {
    type Output = Combination<K>;
    fn neg(self) -> Combination<K> {
        Combination { coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_keys() {
        let mut a: Combination<i32> = Combination::basis(1);
        a.add_term(2, LaurentPoly::t_half(1));
        let b = Combination::term(2, LaurentPoly::t_half(1));
        let d = &a - &b;
        assert_eq!(d, Combination::basis(1));
        assert!((&d - &d).is_zero());
        assert_eq!(a.map_keys(|_| 0).len(), 1);
    }
}
