//! The Fock space at level `ℓ`: generators `|λ⟩` for every weight, straightened to the basis of
//! dominant generators, with its bar involution, canonical basis and decomposition numbers.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use parking_lot::Mutex;
use serde_json::{json, Value};

use crate::error::Result;
use crate::klcore::{KlModule, Matrix};
use crate::laurent::LaurentPoly;
use crate::linear::Combination;
use crate::rootdata::{RootDatum, Weight};
use crate::strategy::{Leftmost, ReductionStrategy};
use crate::weyl::canonical_alcove_point;

/// Combination of dominant generators.
pub type FockElement = Combination<Weight>;

/// The Fock space of a root datum at a fixed level, with a straightening memo.
pub struct FockSpace {
    root: Arc<RootDatum>,
    ell: i64,
    strategy: Box<dyn ReductionStrategy>,
    memo: Mutex<HashMap<Weight, Arc<FockElement>>>,
}

impl FockSpace {
    pub fn new(root: Arc<RootDatum>, ell: i64) -> Self {
        Self::with_strategy(root, ell, Box::new(Leftmost))
    }

    pub fn with_strategy(root: Arc<RootDatum>, ell: i64, strategy: Box<dyn ReductionStrategy>) -> Self {
        assert!(ell >= 1, "level must be positive");
        Self { root, ell, strategy, memo: Mutex::new(HashMap::new()) }
    }

    pub fn root(&self) -> &Arc<RootDatum> {
        &self.root
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn strategy_name(&self) -> &str {
        self.strategy.name()
    }

    /// Normal form of `|λ⟩`.
    pub fn straighten(&self, lambda: &Weight) -> Arc<FockElement> {
        if let Some(v) = self.memo.lock().get(lambda) {
            return v.clone();
        }
        let val = Arc::new(self.straighten_uncached(lambda));
        self.memo.lock().insert(lambda.clone(), val.clone());
        val
    }

    fn straighten_uncached(&self, lambda: &Weight) -> FockElement {
        if self.root.on_simple_wall(lambda) {
            return FockElement::zero();
        }
        let negative: Vec<usize> = (0..self.root.rank()).filter(|&i| lambda[i] + 1 < 0).collect();
        if negative.is_empty() {
            return FockElement::basis(lambda.clone());
        }
        let i = self.strategy.choose(&negative);
        let mu = self.root.dot_reflect(i, lambda);
        let mut out = FockElement::zero();
        for (w, c) in self.exchange(&mu, i) {
            out.add_scaled(&c, &self.straighten(&w));
        }
        out
    }

    /// Right side of the exchange law for `|s_i∘μ⟩` when `⟨μ+ρ, α_i^∨⟩ > 0`.
    pub fn exchange(&self, mu: &Weight, i: usize) -> Vec<(Weight, LaurentPoly)> {
        let p = mu[i] + 1;
        debug_assert!(p > 0);
        let minus_half = LaurentPoly::monomial(1, -1);
        if p % self.ell == 0 {
            vec![(mu.clone(), -LaurentPoly::one())]
        } else if p < self.ell {
            vec![(mu.clone(), minus_half)]
        } else {
            let j = p % self.ell;
            let mu1 = mu.add_scaled(-j, self.root.simple_root(i));
            vec![
                (self.root.dot_reflect(i, &mu1), minus_half.clone()),
                (mu1, -LaurentPoly::one()),
                (mu.clone(), minus_half),
            ]
        }
    }

    pub fn straighten_element(&self, v: &FockElement) -> FockElement {
        let mut out = FockElement::zero();
        for (w, c) in v.iter() {
            out.add_scaled(c, &self.straighten(w));
        }
        out
    }

    /// `N_λ`: positive roots with `⟨λ+ρ, α^∨⟩ ∈ ℓZ`.
    pub fn ell_wall_count(&self, lambda: &Weight) -> usize {
        self.root.shifted_pairings(lambda).iter().filter(|&&p| p % self.ell == 0).count()
    }

    /// `bar(|λ⟩) = (-1)^{N}(t^{-1/2})^{N-N_λ} |w0∘λ⟩` straightened, `N` the number of positive roots.
    pub fn bar_generator(&self, lambda: &Weight) -> FockElement {
        let n = self.root.num_positive_roots();
        let gap = (n - self.ell_wall_count(lambda)) as i32;
        let sign = if n % 2 == 1 { -1 } else { 1 };
        self.straighten(&self.root.w0_dot(lambda)).scale(&LaurentPoly::monomial(-gap, sign))
    }

    /// Bar involution, semilinear over `t^{1/2} ↦ t^{-1/2}`.
    pub fn bar(&self, v: &FockElement) -> FockElement {
        let mut out = FockElement::zero();
        for (w, c) in v.iter() {
            out.add_scaled(&c.bar(), &self.bar_generator(w));
        }
        out
    }

    /// KL module on a bar-stable set of dominant weights listed top first, by depth.
    pub fn module(&self, weights: &[Weight]) -> Result<KlModule<Weight>> {
        let order = weights.iter().rev().cloned().collect();
        KlModule::new(order, |a, b| self.root.leq(a, b), |w| Ok(self.bar_generator(w).into_map()))
    }

    /// `C_λ = |λ⟩ + Σ_{μ<λ} p_{μλ}|μ⟩`, computed over every dominant `μ ≤ λ`.
    pub fn canonical(&self, lambda: &Weight) -> Result<FockElement> {
        let below = self.root.enumerate_below(lambda);
        let m = self.module(&below)?;
        Ok(m.canonical_element(lambda)?.into_iter().collect())
    }

    /// Full canonical matrix on the block of `λ`.
    pub fn canonical_matrix(&self, lambda: &Weight) -> Result<Matrix<Weight>> {
        let block = self.block_of(lambda);
        let m = self.module(&block)?;
        let p = m.canonical_basis()?;
        m.verify_bar_invariant(&p)?;
        Ok(p)
    }

    /// Row `μ ↦ d_{λμ}` over the block, with `|λ⟩ = Σ_μ d_{λμ} C_μ`.
    pub fn decomposition(&self, lambda: &Weight) -> Result<BTreeMap<Weight, LaurentPoly>> {
        let block = self.block_of(lambda);
        let m = self.module(&block)?;
        let p = m.canonical_basis()?;
        let d = m.inverse_transition(&p)?;
        let col = d.get(lambda).cloned().unwrap_or_default();
        Ok(block.iter().map(|mu| (mu.clone(), col.get(mu).cloned().unwrap_or_default())).collect())
    }

    /// Dominant `μ ≤ λ` in the level-`ℓ` orbit of `λ`, `λ` first.
    pub fn block_of(&self, lambda: &Weight) -> Vec<Weight> {
        let key = canonical_alcove_point(&self.root, lambda, self.ell);
        self.root
            .enumerate_below(lambda)
            .into_iter()
            .filter(|mu| canonical_alcove_point(&self.root, mu, self.ell) == key)
            .collect()
    }

    pub fn to_json(&self, v: &FockElement) -> Value {
        let terms: Vec<Value> = v
            .iter()
            .rev()
            .map(|(w, c)| json!({"weight": w.0, "coeff": serde_json::to_value(c).expect("poly serializes")}))
            .collect();
        json!({"terms": terms, "ell": self.ell, "type": self.root.label()})
    }

    /// Text form such as `-t^{1/2}|10> + (t-1)|8>`.
    pub fn format(&self, v: &FockElement) -> String {
        format_combination(v.iter().rev().map(|(w, c)| (ket(w), c)))
    }
}

/// `|a,b>`.
pub fn ket(w: &Weight) -> String {
    let coords: Vec<String> = w.iter().map(i64::to_string).collect();
    format!("|{}>", coords.join(","))
}

/// Join `coeff·label` terms; unit coefficients are dropped and compound ones parenthesized.
pub fn format_combination<'a>(terms: impl Iterator<Item = (String, &'a LaurentPoly)>) -> String {
    let parts: Vec<String> = terms
        .map(|(label, c)| {
            if c.is_one() {
                label
            } else if (-c).is_one() {
                format!("-{label}")
            } else if c.len() == 1 {
                format!("{c}{label}")
            } else {
                format!("({c}){label}")
            }
        })
        .collect();
    let mut out = String::new();
    for (i, part) in parts.iter().enumerate() {
        match (i, part.strip_prefix('-')) {
            (0, _) => out.push_str(part),
            (_, Some(rest)) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            (_, None) => {
                out.push_str(" + ");
                out.push_str(part);
            }
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}
