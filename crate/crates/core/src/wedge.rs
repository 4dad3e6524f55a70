//! Semi-infinite wedges `v_{a₁}∧v_{a₂}∧⋯` truncated to a window of `n` slots, with partitions,
//! Maya diagrams and the type-A straightening rules.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::fock::{FockElement, FockSpace};
use crate::heckefock::{Mismatch, Report};
use crate::laurent::LaurentPoly;
use crate::linear::Combination;
use crate::rootdata::{RootDatum, Weight};
use crate::strategy::{Leftmost, ReductionStrategy};

/// Weakly decreasing parts, trailing zeros dropped.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Partition(Vec<i64>);

impl TryFrom<Vec<i64>> for Partition {
    type Error = Error;

    fn try_from(mut parts: Vec<i64>) -> Result<Self> {
        if parts.iter().any(|&p| p < 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!("{parts:?} is not a partition")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self(parts))
    }
}

impl From<Partition> for Vec<i64> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl Partition {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        parts.try_into()
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `a_j = λ_j - j + 1` for the first `n` slots.
    pub fn to_word(&self, n: usize) -> Result<WedgeWord> {
        if self.0.len() > n {
            return Err(Error::TruncationBreach(format!("{} parts do not fit in {n} slots", self.0.len())));
        }
        Ok(WedgeWord((0..n).map(|j| self.0.get(j).copied().unwrap_or(0) - j as i64).collect()))
    }

    pub fn to_maya(&self) -> MayaDiagram {
        MayaDiagram { black: self.to_word(self.0.len()).expect("fits").0 }
    }

    /// Every partition of `m`, in reverse lexicographic order.
    pub fn of_size(m: i64) -> Vec<Partition> {
        fn go(rest: i64, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(cap)).rev() {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(m, m, &mut Vec::new(), &mut out);
        out
    }

    /// Partitions with size at most `m` and at most `n` parts.
    pub fn up_to(m: i64, n: usize) -> Vec<Partition> {
        (0..=m).flat_map(Partition::of_size).filter(|p| p.0.len() <= n).collect()
    }
}

/// Window indices `a₁, …, a_n`; slots past `n` hold the frozen tail `a_j = -j + 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WedgeWord(pub Vec<i64>);

impl WedgeWord {
    pub fn slots(&self) -> usize {
        self.0.len()
    }

    /// Strictly decreasing and above the tail.
    pub fn is_normal(&self) -> bool {
        let n = self.0.len() as i64;
        self.0.windows(2).all(|w| w[0] > w[1]) && self.0.last().is_none_or(|&a| a > -n)
    }

    pub fn to_partition(&self) -> Result<Partition> {
        if !self.is_normal() {
            return Err(Error::InvalidInput(format!("{self} is not in normal form")));
        }
        Partition::new(self.0.iter().enumerate().map(|(j, a)| a + j as i64).collect())
    }

    /// Type `A_{n-1}` weight: `c_i = a_i - a_{i+1} - 1`.
    pub fn to_weight(&self) -> Weight {
        Weight(self.0.windows(2).map(|w| w[0] - w[1] - 1).collect())
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl std::fmt::Display for WedgeWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| format!("v{a}")).collect();
        write!(f, "{}", parts.join("∧"))?;
        if !self.0.is_empty() {
            write!(f, "∧")?;
        }
        write!(f, "…")
    }
}

/// The black indices of the window; everything at or below `-N` is implicitly black.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MayaDiagram {
    pub black: Vec<i64>,
}

impl MayaDiagram {
    pub fn to_partition(&self) -> Result<Partition> {
        let mut black = self.black.clone();
        black.sort_unstable_by(|a, b| b.cmp(a));
        if black.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("repeated black index".into()));
        }
        let parts: Vec<i64> = black.iter().enumerate().map(|(j, a)| a + j as i64).collect();
        if parts.iter().any(|&p| p < 0) {
            return Err(Error::InvalidInput(format!("{:?} leaves a gap below the window", self.black)));
        }
        Partition::new(parts)
    }

    pub fn to_word(&self) -> Result<WedgeWord> {
        let p = self.to_partition()?;
        p.to_word(p.parts().len())
    }
}

pub type WedgeElement = Combination<WedgeWord>;

/// Straightening in a fixed window and level, memoized.
pub struct WedgeSpace {
    slots: usize,
    ell: i64,
    strategy: Box<dyn ReductionStrategy>,
    memo: Mutex<HashMap<Vec<i64>, Arc<WedgeElement>>>,
}

impl WedgeSpace {
    pub fn new(slots: usize, ell: i64) -> Self {
        Self::with_strategy(slots, ell, Box::new(Leftmost))
    }

    pub fn with_strategy(slots: usize, ell: i64, strategy: Box<dyn ReductionStrategy>) -> Self {
        assert!(ell >= 1, "level must be positive");
        Self { slots, ell, strategy, memo: Mutex::new(HashMap::new()) }
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Normal form of a raw window.
    pub fn straighten(&self, raw: &[i64]) -> Result<Arc<WedgeElement>> {
        if raw.len() != self.slots {
            return Err(Error::InvalidInput(format!("expected {} indices, got {}", self.slots, raw.len())));
        }
        self.straighten_inner(raw)
    }

    fn straighten_inner(&self, raw: &[i64]) -> Result<Arc<WedgeElement>> {
        if let Some(v) = self.memo.lock().get(raw) {
            return Ok(v.clone());
        }
        let tail = -(self.slots as i64);
        if let Some(a) = raw.iter().find(|&&a| a <= tail) {
            return Err(Error::TruncationBreach(format!("index {a} reaches the tail at {tail}")));
        }
        let sites: Vec<usize> = (0..raw.len().saturating_sub(1)).filter(|&i| raw[i] <= raw[i + 1]).collect();
        let val = if sites.is_empty() {
            WedgeElement::basis(WedgeWord(raw.to_vec()))
        } else {
            let i = self.strategy.choose(&sites);
            let mut out = WedgeElement::zero();
            let before: i64 = raw.iter().sum();
            for (word, c) in self.rewrite(raw, i) {
                let after: i64 = word.iter().sum();
                if after != before {
                    return Err(Error::SumViolation(format!("{raw:?} at slot {i} produced {word:?}")));
                }
                out.add_scaled(&c, &*self.straighten_inner(&word)?);
            }
            out
        };
        let val = Arc::new(val);
        self.memo.lock().insert(raw.to_vec(), val.clone());
        Ok(val)
    }

    /// One rule applied to the ascending pair `v_b∧v_a` at slots `i, i+1`.
    fn rewrite(&self, raw: &[i64], i: usize) -> Vec<(Vec<i64>, LaurentPoly)> {
        let (b, a) = (raw[i], raw[i + 1]);
        let p = a - b;
        let with = |x: i64, y: i64| {
            let mut w = raw.to_vec();
            w[i] = x;
            w[i + 1] = y;
            w
        };
        let minus_half = LaurentPoly::monomial(1, -1);
        if p == 0 {
            vec![]
        } else if p % self.ell == 0 {
            vec![(with(a, b), -LaurentPoly::one())]
        } else if p < self.ell {
            vec![(with(a, b), minus_half)]
        } else {
            let j = p % self.ell;
            vec![
                (with(b + j, a - j), minus_half.clone()),
                (with(a - j, b + j), -LaurentPoly::one()),
                (with(a, b), minus_half),
            ]
        }
    }

    /// Straighten, then relabel each normal word by its type-A weight.
    pub fn straighten_to_weights(&self, raw: &[i64]) -> Result<FockElement> {
        Ok(self.straighten(raw)?.map_keys(WedgeWord::to_weight))
    }
}

/// Compare wedge straightening with the Fock space of type `A_{n-1}` on every partition of size
/// at most `max_size`, for the partition itself and each simple exchange of adjacent slots.
pub fn crosscheck_fock(n: usize, ell: i64, max_size: i64) -> Result<Report> {
    crosscheck_partitions(n, ell, &Partition::up_to(max_size, n))
}

pub fn crosscheck_partitions(n: usize, ell: i64, partitions: &[Partition]) -> Result<Report> {
    if n < 2 {
        return Err(Error::InvalidInput("the window needs at least two slots".into()));
    }
    let root = Arc::new(RootDatum::build(&format!("A{}", n - 1))?);
    let fock = FockSpace::new(root.clone(), ell);
    let wedge = WedgeSpace::new(n, ell);
    let mut report = Report::default();
    for part in partitions {
        let word = part.to_word(n)?;
        let lambda = word.to_weight();
        let mut raws = vec![(word.0.clone(), lambda.clone())];
        for i in 0..n - 1 {
            let mut raw = word.0.clone();
            raw.swap(i, i + 1);
            raws.push((raw, root.dot_reflect(i, &lambda)));
        }
        for (raw, weight) in raws {
            let got = wedge.straighten_to_weights(&raw)?;
            let expected = fock.straighten(&weight);
            report.checked += 1;
            if got != *expected {
                report.mismatches.push(Mismatch {
                    kind: "wedge".into(),
                    weight: weight.0.clone(),
                    fock: fock.to_json(&expected),
                    hecke: json!({"wedge": raw, "normal": fock.to_json(&got)}),
                });
            }
        }
    }
    Ok(report)
}
