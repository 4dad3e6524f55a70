//! Generic KL-module engine: canonical basis and inverse transition matrix of a finite
//! based module with a unitriangular bar involution.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// Sparse matrix stored by column: `m[w][v]` is the entry in row `v`, column `w`.
pub type Matrix<K> = BTreeMap<K, BTreeMap<K, LaurentPoly>>;

/// A finite KL-module: basis in a linear extension of its partial order plus bar columns.
pub struct KlModule<K> {
    order: Vec<K>,
    position: HashMap<K, usize>,
    bar: Vec<BTreeMap<usize, LaurentPoly>>,
}

impl<K: Ord + Clone + Debug + std::hash::Hash> KlModule<K> {
    /// Build from a linear extension `order` (smaller elements first), the order predicate and the
    /// bar expansion `bar(b_w) = Σ_v a_{vw} b_v`.
    pub fn new<L, B>(order: Vec<K>, leq: L, mut bar_column: B) -> Result<Self>
    where
        L: Fn(&K, &K) -> bool,
        B: FnMut(&K) -> Result<BTreeMap<K, LaurentPoly>>,
    {
        let position: HashMap<K, usize> = order.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        if position.len() != order.len() {
            return Err(Error::InvalidInput("repeated basis element".into()));
        }
        let mut bar = Vec::with_capacity(order.len());
        for (j, w) in order.iter().enumerate() {
            let mut col = BTreeMap::new();
            for (v, a) in bar_column(w)? {
                if a.is_zero() {
                    continue;
                }
                let i = *position
                    .get(&v)
                    .ok_or_else(|| Error::InvalidInput(format!("bar of {w:?} leaves the index set at {v:?}")))?;
                if i > j || (i != j && !leq(&v, w)) {
                    return Err(Error::InvalidInput(format!("bar of {w:?} is not triangular at {v:?}")));
                }
                col.insert(i, a);
            }
            if col.get(&j).is_none_or(|a| !a.is_one()) {
                return Err(Error::InvalidInput(format!("bar of {w:?} has diagonal entry other than 1")));
            }
            bar.push(col);
        }
        Ok(Self { order, position, bar })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[K] {
        &self.order
    }

    /// `a_{vw}`.
    pub fn bar_entry(&self, v: &K, w: &K) -> LaurentPoly {
        match (self.position.get(v), self.position.get(w)) {
            (Some(&i), Some(&j)) => self.bar[j].get(&i).cloned().unwrap_or_default(),
            _ => LaurentPoly::zero(),
        }
    }

    /// Check `A·Ā = 1` entrywise.
    pub fn check_involutive(&self) -> Result<()> {
        for (j, col) in self.bar.iter().enumerate() {
            let mut acc: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
            for (&z, a_zw) in col {
                let abar = a_zw.bar();
                for (&v, a_vz) in &self.bar[z] {
                    *acc.entry(v).or_default() += a_vz * &abar;
                }
            }
            for (v, c) in acc {
                let expected = v == j;
                if (expected && !c.is_one()) || (!expected && !c.is_zero()) {
                    return Err(Error::BarNotInvolutive(format!(
                        "(A·Ā) at ({:?}, {:?}) is {c}",
                        self.order[v], self.order[j]
                    )));
                }
            }
        }
        Ok(())
    }

    fn canonical_column(&self, j: usize) -> Result<BTreeMap<usize, LaurentPoly>> {
        // Column j of P, filled downward; bars of known entries are cached alongside.
        let mut col: BTreeMap<usize, LaurentPoly> = BTreeMap::from([(j, LaurentPoly::one())]);
        let mut bars: BTreeMap<usize, LaurentPoly> = BTreeMap::from([(j, LaurentPoly::one())]);
        for u in (0..j).rev() {
            let mut f = LaurentPoly::zero();
            for (&z, pbar) in bars.range(u + 1..) {
                if let Some(a) = self.bar[z].get(&u) {
                    f += a * pbar;
                }
            }
            if f.is_zero() {
                continue;
            }
            if !f.is_antisymmetric() {
                return Err(Error::RecursionParityFailure(format!(
                    "at ({:?}, {:?}) the right side {f} is not antisymmetric",
                    self.order[u], self.order[j]
                )));
            }
            let val = f.positive_part()?;
            if !val.is_zero() {
                bars.insert(u, val.bar());
                col.insert(u, val);
            }
        }
        Ok(col)
    }

    /// All columns of the canonical transition matrix `C_w = Σ_v p_{vw} b_v`.
    pub fn canonical_basis(&self) -> Result<Matrix<K>> {
        self.check_involutive()?;
        let cols = (0..self.len()).map(|j| self.canonical_column(j)).collect::<Result<Vec<_>>>()?;
        Ok(self.to_matrix(&cols))
    }

    /// Canonical column of a single element.
    pub fn canonical_element(&self, w: &K) -> Result<BTreeMap<K, LaurentPoly>> {
        self.check_involutive()?;
        let j = *self.position.get(w).ok_or_else(|| Error::InvalidInput(format!("{w:?} not in the index set")))?;
        let col = self.canonical_column(j)?;
        Ok(col.into_iter().map(|(i, v)| (self.order[i].clone(), v)).collect())
    }

    /// Columns of `D = P^{-1}`, so `b_w = Σ_v d_{vw} C_v`, solved by the bar recursion.
    ///
    /// The canonical matrix is only used to confirm `D·P = 1`.
    pub fn inverse_transition(&self, p: &Matrix<K>) -> Result<Matrix<K>> {
        self.check_involutive()?;
        let n = self.len();
        // Rows of D, indexed by u, holding d_{uz} for columns z already solved.
        let mut rows: Vec<BTreeMap<usize, LaurentPoly>> = (0..n).map(|u| BTreeMap::from([(u, LaurentPoly::one())])).collect();
        for j in 0..n {
            for u in 0..j {
                let mut rhs = LaurentPoly::zero();
                for (&z, d_uz) in rows[u].range(..j) {
                    if let Some(a) = self.bar[j].get(&z) {
                        rhs -= d_uz * a;
                    }
                }
                if rhs.is_zero() {
                    continue;
                }
                if !rhs.is_antisymmetric() {
                    return Err(Error::RecursionParityFailure(format!(
                        "inverse at ({:?}, {:?}) has right side {rhs}",
                        self.order[u], self.order[j]
                    )));
                }
                let d = rhs.positive_part()?;
                if !d.is_zero() {
                    rows[u].insert(j, d);
                }
            }
        }
        let mut cols: Vec<BTreeMap<usize, LaurentPoly>> = vec![BTreeMap::new(); n];
        for (u, row) in rows.into_iter().enumerate() {
            for (z, d) in row {
                cols[z].insert(u, d);
            }
        }
        let d = self.to_matrix(&cols);
        if !p.is_empty() && !is_identity(&multiply(&d, p)) {
            return Err(Error::RecursionParityFailure("D·P is not the identity".into()));
        }
        Ok(d)
    }

    /// Expand `bar(C_w)` through the bar columns and compare with `C_w`.
    pub fn verify_bar_invariant(&self, p: &Matrix<K>) -> Result<()> {
        for (w, col) in p {
            let mut image: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
            for (z, pz) in col {
                let zb = pz.bar();
                for (&v, a) in &self.bar[self.position[z]] {
                    *image.entry(v).or_default() += a * &zb;
                }
            }
            image.retain(|_, c| !c.is_zero());
            let expected: BTreeMap<usize, LaurentPoly> = col.iter().map(|(k, v)| (self.position[k], v.clone())).collect();
            if image != expected {
                return Err(Error::BarNotInvolutive(format!("canonical element at {w:?} is not bar-invariant")));
            }
        }
        Ok(())
    }

    fn to_matrix(&self, cols: &[BTreeMap<usize, LaurentPoly>]) -> Matrix<K> {
        cols.iter()
            .enumerate()
            .map(|(j, col)| {
                (self.order[j].clone(), col.iter().map(|(&i, v)| (self.order[i].clone(), v.clone())).collect())
            })
            .collect()
    }
}

/// `Σ_z m1_{vz} m2_{zw}`.
pub fn multiply<K: Ord + Clone>(m1: &Matrix<K>, m2: &Matrix<K>) -> Matrix<K> {
    let mut out = Matrix::new();
    for (w, col) in m2 {
        let mut acc: BTreeMap<K, LaurentPoly> = BTreeMap::new();
        for (z, b) in col {
            if let Some(zc) = m1.get(z) {
                for (v, a) in zc {
                    *acc.entry(v.clone()).or_default() += a * b;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        out.insert(w.clone(), acc);
    }
    out
}

/// True when the matrix is the identity on its column keys.
pub fn is_identity<K: Ord + Clone>(m: &Matrix<K>) -> bool {
    m.iter().all(|(w, col)| col.len() == 1 && col.get(w).is_some_and(|c| c.is_one()))
}

/// Strip the sign `(-1)^{Δℓ}` from a signed entry.
pub fn unsign(p: &LaurentPoly, length_diff: usize) -> LaurentPoly {
    if length_diff % 2 == 1 { -p } else { p.clone() }
}

/// JSON `{col: {row: poly}}` with keys rendered by `key`.
pub fn matrix_json<K>(m: &Matrix<K>, key: impl Fn(&K) -> String) -> Value {
    let mut out = Map::new();
    for (w, col) in m {
        let entries: Map<String, Value> =
            col.iter().map(|(v, p)| (key(v), serde_json::to_value(p).expect("poly serializes"))).collect();
        out.insert(key(w), Value::Object(entries));
    }
    Value::Object(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_i64(terms)
    }

    /// Infinite dihedral group truncated at length `n`: elements are words by (length, start).
    fn dihedral(n: usize) -> (Vec<(usize, u8)>, impl Fn(&(usize, u8), &(usize, u8)) -> bool) {
        let mut order = vec![(0, 0)];
        for l in 1..=n {
            order.push((l, 0));
            order.push((l, 1));
        }
        (order, |a: &(usize, u8), b: &(usize, u8)| a.0 < b.0 || a == b)
    }

    /// Oracle: bar columns from the R-polynomials of the infinite dihedral group.
    fn dihedral_bar(w: &(usize, u8)) -> Result<BTreeMap<(usize, u8), LaurentPoly>> {
        // bar(T_w) = Σ_{y≤w} (-1)^{ℓ(w)-ℓ(y)} R_{y,w} T_y with the closed form
        // R_{y,w} = Σ over lattice paths, computed by the standard recursion below.
        fn r(y: (usize, u8), w: (usize, u8), memo: &mut BTreeMap<((usize, u8), (usize, u8)), LaurentPoly>) -> LaurentPoly {
            if y.0 > w.0 || (y.0 == w.0 && y != w) {
                return LaurentPoly::zero();
            }
            if y == w {
                return LaurentPoly::one();
            }
            if let Some(v) = memo.get(&(y, w)) {
                return v.clone();
            }
            // s is the last letter of w; ws drops it.
            let last = (w.1 as usize + w.0 - 1) % 2;
            let norm = |x: (usize, u8)| if x.0 == 0 { (0, 0) } else { x };
            let ws = norm((w.0 - 1, w.1));
            let ys_len_down = y.0 > 0 && (y.1 as usize + y.0 - 1) % 2 == last;
            let ys = if y.0 == 0 {
                (1, last as u8)
            } else if ys_len_down {
                norm((y.0 - 1, y.1))
            } else {
                (y.0 + 1, y.1)
            };
            let val = if ys_len_down {
                r(ys, ws, memo)
            } else {
                let q = LaurentPoly::t_half(2);
                (q.clone() - LaurentPoly::one()) * r(y, ws, memo) + q * r(ys, ws, memo)
            };
            memo.insert((y, w), val.clone());
            val
        }
        let mut memo = BTreeMap::new();
        let mut col = BTreeMap::new();
        let (order, _) = dihedral(w.0);
        for y in order {
            let rv = r(y, *w, &mut memo);
            if rv.is_zero() {
                continue;
            }
            let shift = y.0 as i32 - w.0 as i32;
            let sign = if (w.0 - y.0) % 2 == 1 { -1 } else { 1 };
            col.insert(y, rv.shift(shift).scale(&sign.into()));
        }
        Ok(col)
    }

    #[test]
    fn dihedral_canonical_basis() {
        let (order, leq) = dihedral(6);
        let m = KlModule::new(order.clone(), leq, dihedral_bar).unwrap();
        let p = m.canonical_basis().unwrap();
        m.verify_bar_invariant(&p).unwrap();
        for w in &order {
            for y in &order {
                let expected = if y.0 < w.0 || y == w { poly(&[(w.0 as i32 - y.0 as i32, 1)]) } else { LaurentPoly::zero() };
                let sign = if (w.0 - y.0.min(w.0)) % 2 == 1 { -1 } else { 1 };
                let expected = expected.scale(&sign.into());
                assert_eq!(p[w].get(y).cloned().unwrap_or_default(), expected, "{y:?} {w:?}");
            }
        }
        assert_eq!(p[&(1, 0)][&(0, 0)], poly(&[(1, -1)]));
        let d = m.inverse_transition(&p).unwrap();
        assert!(is_identity(&multiply(&d, &p)));
        assert!(is_identity(&multiply(&p, &d)));
    }

    #[test]
    fn any_linear_extension_gives_same_answer() {
        let (order, leq) = dihedral(5);
        let base = KlModule::new(order.clone(), &leq, dihedral_bar).unwrap().canonical_basis().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            // Shuffle within each length layer; that keeps a linear extension.
            let mut shuffled = vec![order[0]];
            for l in 1..=5 {
                let mut layer = vec![(l, 0u8), (l, 1u8)];
                layer.shuffle(&mut rng);
                shuffled.extend(layer);
            }
            let m = KlModule::new(shuffled, &leq, dihedral_bar).unwrap();
            assert_eq!(m.canonical_basis().unwrap(), base);
        }
    }

    #[test]
    fn diagonal_instance() {
        let order = vec![1, 2, 3];
        let m = KlModule::new(order, |a, b| a <= b, |w| Ok(BTreeMap::from([(*w, LaurentPoly::one())]))).unwrap();
        let p = m.canonical_basis().unwrap();
        assert!(is_identity(&p));
        assert!(is_identity(&m.inverse_transition(&p).unwrap()));
    }

    #[test]
    fn fock_block_example() {
        // The A1 block {0, 8, 10} at level 5, with bar columns of the standard basis.
        let bar = |w: &i64| -> Result<BTreeMap<i64, LaurentPoly>> {
            Ok(match w {
                0 => BTreeMap::from([(0, LaurentPoly::one())]),
                8 => BTreeMap::from([(8, LaurentPoly::one()), (0, poly(&[(-1, 1), (1, -1)]))]),
                _ => BTreeMap::from([
                    (10, LaurentPoly::one()),
                    (8, poly(&[(-1, 1), (1, -1)])),
                    (0, poly(&[(2, 1), (0, -1)])),
                ]),
            })
        };
        let m = KlModule::new(vec![0, 8, 10], |a, b| a <= b, bar).unwrap();
        let p = m.canonical_basis().unwrap();
        assert_eq!(p[&8][&0], poly(&[(1, -1)]));
        assert_eq!(p[&10][&8], poly(&[(1, -1)]));
        assert_eq!(p[&10][&0], poly(&[(2, 1)]));
        let d = m.inverse_transition(&p).unwrap();
        assert_eq!(d[&10][&8], poly(&[(1, 1)]));
        assert!(!d[&10].contains_key(&0));
        assert_eq!(d[&8][&0], poly(&[(1, 1)]));
    }

    #[test]
    fn broken_instance_is_rejected() {
        let bar = |w: &i64| -> Result<BTreeMap<i64, LaurentPoly>> {
            Ok(match w {
                0 => BTreeMap::from([(0, LaurentPoly::one())]),
                _ => BTreeMap::from([(1, LaurentPoly::one()), (0, poly(&[(1, 1)]))]),
            })
        };
        let m = KlModule::new(vec![0, 1], |a, b| a <= b, bar).unwrap();
        assert!(matches!(m.canonical_basis(), Err(Error::BarNotInvolutive(_))));
        let bad = KlModule::new(vec![0, 1], |a, b| a <= b, |w| Ok(BTreeMap::from([(*w, poly(&[(0, 2)]))])));
        assert!(bad.is_err());
    }
}
