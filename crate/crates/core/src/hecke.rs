//! Hecke algebra of the extended affine Weyl group in the normalization
//! `T_s² = (t^{1/2} - t^{-1/2})T_s + 1`: T-basis arithmetic, bar involution, Bernstein
//! elements, parabolic projectors and the four flavors of KL polynomials.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use parking_lot::Mutex;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::klcore::KlModule;
use crate::laurent::LaurentPoly;
use crate::rootdata::Weight;
use crate::weyl::{AffineWeylElement, AffineWeylGroup, Subgroup};

/// A finite combination `Σ c_x T_x`.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct HeckeElement {
    coeffs: BTreeMap<AffineWeylElement, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c·T_x`.
    pub fn term(x: AffineWeylElement, c: LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(x, c);
        out
    }

    pub fn from_map(map: BTreeMap<AffineWeylElement, LaurentPoly>) -> Self {
        let mut out = Self::zero();
        for (x, c) in map {
            out.add_term(x, c);
        }
        out
    }

    pub fn add_term(&mut self, x: AffineWeylElement, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(x);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
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

    pub fn coeff(&self, x: &AffineWeylElement) -> LaurentPoly {
        self.coeffs.get(x).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AffineWeylElement, &LaurentPoly)> {
        self.coeffs.iter()
    }

    pub fn coeffs(&self) -> &BTreeMap<AffineWeylElement, LaurentPoly> {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> BTreeMap<AffineWeylElement, LaurentPoly> {
        self.coeffs
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|(x, a)| (x.clone(), a * c)).filter(|(_, a)| !a.is_zero()).collect() }
    }
}

impl AddAssign<&HeckeElement> for HeckeElement {
    fn add_assign(&mut self, rhs: &HeckeElement) {
        for (x, c) in &rhs.coeffs {
            self.add_term(x.clone(), c.clone());
        }
    }
}

impl SubAssign<&HeckeElement> for HeckeElement {
    fn sub_assign(&mut self, rhs: &HeckeElement) {
        for (x, c) in &rhs.coeffs {
            self.add_term(x.clone(), -c);
        }
    }
}

impl Add for &HeckeElement {
    type Output = HeckeElement;
    fn add(self, rhs: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &HeckeElement {
    type Output = HeckeElement;
    fn sub(self, rhs: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &HeckeElement {
    type Output = HeckeElement;
    fn neg(self) -> HeckeElement {
        HeckeElement { coeffs: self.coeffs.iter().map(|(x, c)| (x.clone(), -c)).collect() }
    }
}

/// Which normalized parabolic sum to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectorKind {
    /// `ε = Σ (-t^{1/2})^{ℓ(w_J)-ℓ(z)} T_z`, with `T_s ε = ε T_s = -t^{-1/2} ε`.
    Sign,
    /// `1 = Σ (t^{-1/2})^{ℓ(w_J)-ℓ(z)} T_z`, with `T_s 1 = 1 T_s = t^{1/2} 1`.
    Trivial,
}

/// KL polynomial flavors; subgroups are finite stabilizers (right) or parabolics (left).
#[derive(Clone, Copy, Debug)]
pub enum KlFlavor<'a> {
    /// `y ↦ P_{y,x}`.
    Plain,
    /// `y ↦ P^ν_{y,x}` for `x, y` minimal in their right `W_ν` cosets.
    Singular(&'a Subgroup),
    /// `y ↦ P_{w_γ y, w_γ x}` for `x, y` minimal in their left `W_γ` cosets.
    Parabolic(&'a Subgroup),
    /// `y ↦ P^ν_{w_γ y, w_γ x}` for minimal double-coset representatives.
    ParabolicSingular(&'a Subgroup, &'a Subgroup),
}

/// Hecke algebra over a shared affine Weyl group, with memoized bar images and X-elements.
pub struct HeckeAlgebra {
    group: Arc<AffineWeylGroup>,
    bar_memo: Mutex<HashMap<AffineWeylElement, Arc<HeckeElement>>>,
    x_memo: Mutex<HashMap<Weight, Arc<HeckeElement>>>,
}

impl HeckeAlgebra {
    pub fn new(group: Arc<AffineWeylGroup>) -> Self {
        Self { group, bar_memo: Mutex::new(HashMap::new()), x_memo: Mutex::new(HashMap::new()) }
    }

    pub fn group(&self) -> &Arc<AffineWeylGroup> {
        &self.group
    }

    pub fn one(&self) -> HeckeElement {
        self.t(&self.group.identity())
    }

    pub fn scalar(&self, c: LaurentPoly) -> HeckeElement {
        HeckeElement::term(self.group.identity(), c)
    }

    pub fn t(&self, x: &AffineWeylElement) -> HeckeElement {
        HeckeElement::term(x.clone(), LaurentPoly::one())
    }

    pub fn t_gen(&self, g: usize) -> HeckeElement {
        self.t(&self.group.generator(g))
    }

    /// `a·T_{s_g}`.
    pub fn mul_gen(&self, a: &HeckeElement, g: usize) -> HeckeElement {
        let delta = LaurentPoly::delta();
        let mut out = HeckeElement::zero();
        for (x, c) in a.iter() {
            let xs = self.group.mul_gen(x, g);
            if self.group.length(&xs) < self.group.length(x) {
                out.add_term(x.clone(), c * &delta);
            }
            out.add_term(xs, c.clone());
        }
        out
    }

    /// `T_{s_g}·a`.
    pub fn gen_mul(&self, g: usize, a: &HeckeElement) -> HeckeElement {
        let delta = LaurentPoly::delta();
        let mut out = HeckeElement::zero();
        for (x, c) in a.iter() {
            let sx = self.group.gen_mul(g, x);
            if self.group.length(&sx) < self.group.length(x) {
                out.add_term(x.clone(), c * &delta);
            }
            out.add_term(sx, c.clone());
        }
        out
    }

    /// `a·T_π` for a length-zero `π`.
    fn mul_length_zero(&self, a: &HeckeElement, pi: &AffineWeylElement) -> HeckeElement {
        HeckeElement { coeffs: a.iter().map(|(x, c)| (self.group.compose(x, pi), c.clone())).collect() }
    }

    /// `a·T_y`.
    pub fn mul_basis(&self, a: &HeckeElement, y: &AffineWeylElement) -> HeckeElement {
        let (pi, word) = self.group.reduced_word(y);
        let mut out = self.mul_length_zero(a, &pi);
        for g in word {
            out = self.mul_gen(&out, g);
        }
        out
    }

    pub fn mul(&self, a: &HeckeElement, b: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (y, c) in b.iter() {
            out += &self.mul_basis(a, y).scale(c);
        }
        out
    }

    /// Product of a list of factors, left to right.
    pub fn product(&self, factors: &[&HeckeElement]) -> HeckeElement {
        factors.iter().fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    /// `T_{s_g}^{-1} = T_{s_g} - (t^{1/2} - t^{-1/2})`.
    pub fn t_gen_inverse(&self, g: usize) -> HeckeElement {
        let mut out = self.t_gen(g);
        out.add_term(self.group.identity(), -LaurentPoly::delta());
        out
    }

    /// `T_x^{-1}`.
    pub fn t_inverse(&self, x: &AffineWeylElement) -> HeckeElement {
        let (pi, word) = self.group.reduced_word(x);
        let mut out = self.one();
        for &g in word.iter().rev() {
            out = self.mul(&out, &self.t_gen_inverse(g));
        }
        self.mul_length_zero(&out, &self.group.inverse(&pi))
    }

    /// `bar(T_x) = T_{x^{-1}}^{-1}`.
    pub fn bar_basis(&self, x: &AffineWeylElement) -> Arc<HeckeElement> {
        if let Some(v) = self.bar_memo.lock().get(x) {
            return v.clone();
        }
        let val = match self.group.first_right_descent(x) {
            None => self.t(x),
            Some(g) => {
                let head = self.bar_basis(&self.group.mul_gen(x, g));
                let mut out = self.mul_gen(&head, g);
                out -= &head.scale(&LaurentPoly::delta());
                out
            }
        };
        let val = Arc::new(val);
        self.bar_memo.lock().insert(x.clone(), val.clone());
        val
    }

    pub fn bar(&self, a: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (x, c) in a.iter() {
            out += &self.bar_basis(x).scale(&c.bar());
        }
        out
    }

    /// `X^μ = T_{t_{μ₁}} T_{t_{μ₂}}^{-1}` with `μ₁ = max(μ, 0)`, `μ₂ = max(-μ, 0)` coordinatewise.
    pub fn x_weight(&self, mu: &Weight) -> Arc<HeckeElement> {
        if let Some(v) = self.x_memo.lock().get(mu) {
            return v.clone();
        }
        let pos = Weight(mu.iter().map(|&c| c.max(0)).collect());
        let neg = Weight(mu.iter().map(|&c| (-c).max(0)).collect());
        let val = Arc::new(self.x_split(&pos, &neg));
        self.x_memo.lock().insert(mu.clone(), val.clone());
        val
    }

    /// `T_{t_a} T_{t_b}^{-1}` for dominant `a`, `b`; equals `X^{a-b}`.
    pub fn x_split(&self, a: &Weight, b: &Weight) -> HeckeElement {
        let head = self.t(&self.group.translation(a));
        if b.iter().all(|&c| c == 0) {
            return head;
        }
        self.mul(&head, &self.t_inverse(&self.group.translation(b)))
    }

    /// `X^{t_μ w} = X^μ T_{w^{-1}}^{-1} = X^μ bar(T_w)`.
    pub fn x_elem(&self, x: &AffineWeylElement) -> HeckeElement {
        let head = self.x_weight(&x.trans);
        if x.fin == 0 {
            return (*head).clone();
        }
        self.mul(&head, &self.bar_basis(&self.group.finite_element(x.fin)))
    }

    /// `δ·(X^λ - X^{s_iλ})/(1 - X^{-α_i})`, expanded as a finite telescoping sum.
    pub fn bernstein_rhs(&self, lambda: &Weight, i: usize) -> HeckeElement {
        let root = self.group.root();
        let alpha = root.simple_root(i);
        let k = lambda[i];
        let mut out = HeckeElement::zero();
        if k >= 0 {
            for j in 0..k {
                out += &*self.x_weight(&lambda.add_scaled(-j, alpha));
            }
        } else {
            for j in 1..=-k {
                out -= &*self.x_weight(&lambda.add_scaled(j, alpha));
            }
        }
        out.scale(&LaurentPoly::delta())
    }

    /// The projector of a Coxeter parabolic subgroup.
    pub fn projector(&self, kind: ProjectorKind, sub: &Subgroup) -> Result<HeckeElement> {
        if !sub.is_coxeter() {
            return Err(Error::Unsupported("projectors are built over Coxeter parabolics only".into()));
        }
        let top = sub.longest_len as u32;
        let mut out = HeckeElement::zero();
        for z in &sub.elements {
            let gap = top - self.group.length(z) as u32;
            let c = match kind {
                ProjectorKind::Sign => LaurentPoly::signed_power(true, 1, gap),
                ProjectorKind::Trivial => LaurentPoly::signed_power(false, -1, gap),
            };
            out.add_term(z.clone(), c);
        }
        Ok(out)
    }

    /// Projector for the subgroup generated by `gens`.
    pub fn projector_for(&self, kind: ProjectorKind, gens: &[usize]) -> Result<HeckeElement> {
        self.projector(kind, &self.group.subgroup(gens, &[])?)
    }

    /// Plain KL module on the Bruhat ideal below `x`.
    pub fn plain_module(&self, x: &AffineWeylElement) -> Result<KlModule<AffineWeylElement>> {
        let ideal = self.group.bruhat_ideal(x);
        KlModule::new(
            ideal.to_vec(),
            |a, b| self.group.bruhat_leq(a, b),
            |w| Ok(self.bar_basis(w).coeffs().clone()),
        )
    }

    /// `C_x = Σ_y (-1)^{ℓ(x)-ℓ(y)} P_{y,x} T_y`.
    pub fn canonical(&self, x: &AffineWeylElement) -> Result<HeckeElement> {
        Ok(HeckeElement::from_map(self.plain_module(x)?.canonical_element(x)?))
    }

    /// Remove the sign `(-1)^{ℓ(x)-ℓ(y)}` from signed coefficients.
    fn unsign_map(
        &self,
        top_len: usize,
        signed: BTreeMap<AffineWeylElement, LaurentPoly>,
        len_of: impl Fn(&AffineWeylElement) -> usize,
    ) -> BTreeMap<AffineWeylElement, LaurentPoly> {
        signed
            .into_iter()
            .map(|(y, p)| {
                let d = top_len.abs_diff(len_of(&y));
                (y, crate::klcore::unsign(&p, d))
            })
            .collect()
    }

    fn flavor_parts<'a>(&self, flavor: KlFlavor<'a>) -> (Option<&'a Subgroup>, Option<&'a Subgroup>) {
        match flavor {
            KlFlavor::Plain => (None, None),
            KlFlavor::Singular(nu) => (None, Some(nu)),
            KlFlavor::Parabolic(gamma) => (Some(gamma), None),
            KlFlavor::ParabolicSingular(gamma, nu) => (Some(gamma), Some(nu)),
        }
    }

    /// KL polynomials of the requested flavor through the summation formula over `W_ν`.
    pub fn kl_suite(&self, x: &AffineWeylElement, flavor: KlFlavor<'_>) -> Result<BTreeMap<AffineWeylElement, LaurentPoly>> {
        let g = &self.group;
        let (gamma, nu) = self.flavor_parts(flavor);
        let lift = |u: &AffineWeylElement| match gamma {
            Some(sub) => g.compose(&sub.longest, u),
            None => u.clone(),
        };
        let top = lift(x);
        let column = self.plain_module(&top)?.canonical_element(&top)?;
        let top_len = g.length(&top);
        let plain = |y: &AffineWeylElement| -> LaurentPoly {
            column.get(y).map(|p| crate::klcore::unsign(p, top_len.abs_diff(g.length(y)))).unwrap_or_default()
        };
        let mut out = BTreeMap::new();
        for y in g.bruhat_ideal(&top).iter() {
            if let Some(sub) = gamma {
                if !sub.gens.iter().all(|&s| g.is_left_descent(s, y)) {
                    continue;
                }
            }
            let value = match nu {
                None => plain(y),
                Some(sub) => {
                    // Only one Ω-translate of y lies in the ideal, so length-minimality suffices.
                    if sub.gens.iter().any(|&s| g.is_right_descent(y, s)) {
                        continue;
                    }
                    let ly = g.length(y);
                    let mut acc = LaurentPoly::zero();
                    for z in &sub.elements {
                        let yz = g.compose(y, z);
                        let p = plain(&yz);
                        if p.is_zero() {
                            continue;
                        }
                        let sign = ly.abs_diff(g.length(&yz)) % 2 == 1;
                        acc += LaurentPoly::signed_power(sign, 1, g.length(z) as u32) * p;
                    }
                    acc
                }
            };
            if !value.is_zero() {
                out.insert(lift(y), value);
            }
        }
        Ok(out)
    }

    /// The same polynomials by running the KL engine directly on `ε_γ H 1_ν` with genuine projectors.
    pub fn kl_suite_direct(
        &self,
        x: &AffineWeylElement,
        flavor: KlFlavor<'_>,
    ) -> Result<BTreeMap<AffineWeylElement, LaurentPoly>> {
        let g = &self.group;
        let (gamma, nu) = self.flavor_parts(flavor);
        if nu.is_some_and(|s| !s.is_coxeter()) {
            return Err(Error::Unsupported("direct route needs a Coxeter stabilizer".into()));
        }
        let left_gens: Vec<usize> = gamma.map(|s| s.gens.clone()).unwrap_or_default();
        let right_gens: Vec<usize> = nu.map(|s| s.gens.clone()).unwrap_or_default();
        let w_left = gamma.map(|s| s.longest.clone()).unwrap_or_else(|| g.identity());
        let w_right = nu.map(|s| s.longest.clone()).unwrap_or_else(|| g.identity());
        let eps = match gamma {
            Some(s) => self.projector(ProjectorKind::Sign, s)?,
            None => self.one(),
        };
        let triv = match nu {
            Some(s) => self.projector(ProjectorKind::Trivial, s)?,
            None => self.one(),
        };
        let top_of = |u: &AffineWeylElement| g.compose(&g.compose(&w_left, u), &w_right);
        let admissible = |u: &AffineWeylElement| {
            left_gens.iter().all(|&s| !g.is_left_descent(s, u))
                && right_gens.iter().all(|&s| !g.is_right_descent(u, s))
                && right_gens.iter().all(|&s| !g.is_right_descent(&g.compose(&w_left, u), s))
        };
        if !admissible(x) {
            return Err(Error::InvalidInput(format!("{x:?} is not an admissible double-coset representative")));
        }
        let basis: Vec<AffineWeylElement> = g.bruhat_ideal(&top_of(x)).iter().filter(|u| admissible(u)).cloned().collect();
        let module = KlModule::new(
            basis.clone(),
            |a, b| g.bruhat_leq(a, b),
            |u| {
                let image = self.product(&[&eps, &self.bar_basis(u), &triv]);
                let coords: BTreeMap<AffineWeylElement, LaurentPoly> = basis
                    .iter()
                    .map(|v| (v.clone(), image.coeff(&top_of(v))))
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                Ok(coords)
            },
        )?;
        let signed = module.canonical_element(x)?;
        let top_len = g.length(x);
        Ok(self.unsign_map(top_len, signed, |y| g.length(y)))
    }

    /// JSON `[{"word": [...], "coeff": {...}}, ...]` in key order.
    pub fn to_json(&self, a: &HeckeElement) -> Value {
        Value::Array(
            a.iter()
                .map(|(x, c)| json!({"word": self.group.word_labels(x), "coeff": serde_json::to_value(c).expect("poly serializes")}))
                .collect(),
        )
    }

    pub fn from_json(&self, v: &Value) -> Result<HeckeElement> {
        let items = v.as_array().ok_or_else(|| Error::InvalidInput("Hecke element JSON must be an array".into()))?;
        let mut out = HeckeElement::zero();
        for item in items {
            let word: Vec<String> = serde_json::from_value(item["word"].clone())
                .map_err(|e| Error::InvalidInput(format!("bad word: {e}")))?;
            let coeff: LaurentPoly = serde_json::from_value(item["coeff"].clone())
                .map_err(|e| Error::InvalidInput(format!("bad coefficient: {e}")))?;
            out.add_term(self.group.from_labels(&word)?, coeff);
        }
        Ok(out)
    }

    /// Human-readable form such as `(t^{1/2})·T[s0 s1] + T[]`.
    pub fn format(&self, a: &HeckeElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        a.iter()
            .map(|(x, c)| format!("({c})·T[{}]", self.group.word_labels(x).join(" ")))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
