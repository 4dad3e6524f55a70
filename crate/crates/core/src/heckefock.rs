//! The Hecke-side model of the Fock space: the module `⊕_ν ε₀ H 1_ν` with formal projector
//! symbols, the elements `[T_λ]` and `[X_λ]`, and cross-checks against the straightening model.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use parking_lot::Mutex;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fock::{FockElement, FockSpace};
use crate::hecke::{HeckeAlgebra, HeckeElement, KlFlavor, ProjectorKind};
use crate::klcore::{unsign, KlModule};
use crate::laurent::LaurentPoly;
use crate::linear::Combination;
use crate::rootdata::{RootDatum, Weight};
use crate::weyl::{AffineWeylElement, AffineWeylGroup, AlcovePoint, Subgroup};

/// Basis label `ε₀ T_rep 1_ν`: `ν` a canonical alcove point, `rep` minimal in its double coset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PBasis {
    pub nu: Weight,
    pub rep: AffineWeylElement,
}

pub type PModuleElement = Combination<PBasis>;

/// One disagreement found by a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub kind: String,
    pub weight: Vec<i64>,
    pub fock: Value,
    pub hecke: Value,
}

/// Outcome of a sweep.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl Report {
    pub fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        self.mismatches.extend(other.mismatches);
    }

    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Alcove point with its stabilizer, cached per `ν`.
pub struct Stabilizer {
    pub point: AlcovePoint,
    pub group: Subgroup,
}

/// The module together with the Fock space it models.
pub struct HeckeFock {
    hecke: Arc<HeckeAlgebra>,
    fock: Arc<FockSpace>,
    ell: i64,
    finite: Subgroup,
    points: Mutex<HashMap<Weight, Arc<Stabilizer>>>,
}

impl HeckeFock {
    pub fn new(root: Arc<RootDatum>, ell: i64) -> Result<Self> {
        let group = Arc::new(AffineWeylGroup::new(root.clone())?);
        let finite = group.finite_parabolic();
        Ok(Self {
            hecke: Arc::new(HeckeAlgebra::new(group)),
            fock: Arc::new(FockSpace::new(root, ell)),
            ell,
            finite,
            points: Mutex::new(HashMap::new()),
        })
    }

    pub fn hecke(&self) -> &Arc<HeckeAlgebra> {
        &self.hecke
    }

    pub fn fock(&self) -> &Arc<FockSpace> {
        &self.fock
    }

    pub fn group(&self) -> &Arc<AffineWeylGroup> {
        self.hecke.group()
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn stabilizer(&self, nu: &Weight) -> Result<Arc<Stabilizer>> {
        if let Some(s) = self.points.lock().get(nu) {
            return Ok(s.clone());
        }
        let point = self.group().alcove_point(nu, self.ell);
        let group = self.group().stabilizer(&point)?;
        let s = Arc::new(Stabilizer { point, group });
        self.points.lock().insert(nu.clone(), s.clone());
        Ok(s)
    }

    /// `ε₀ T_x 1_ν` in the basis, using `ε₀T_s = -t^{-1/2}ε₀` and `T_z 1_ν = t^{ℓ(z)/2} 1_ν`.
    pub fn reduce_t(&self, x: &AffineWeylElement, stab: &Stabilizer) -> PModuleElement {
        let g = self.group();
        let n = g.rank();
        let walls = &stab.point.walls;
        let mut u = x.clone();
        let mut left = 0u32;
        let mut right = 0u32;
        'outer: loop {
            let len = g.length(&u);
            for s in 1..=n {
                let su = g.gen_mul(s, &u);
                if g.length(&su) < len {
                    u = su;
                    left += 1;
                    continue 'outer;
                }
            }
            for &s in walls {
                let us = g.mul_gen(&u, s);
                if g.length(&us) < len {
                    u = us;
                    right += 1;
                    continue 'outer;
                }
            }
            break;
        }
        let top = g.compose(&g.w0(), &u);
        if walls.iter().any(|&s| g.is_right_descent(&top, s)) {
            return PModuleElement::zero();
        }
        let rep = stab.point.omega_stab.iter().map(|pi| g.compose(&u, pi)).fold(u.clone(), |a, b| a.min(b));
        let coeff = LaurentPoly::signed_power(true, -1, left) * LaurentPoly::signed_power(false, 1, right);
        PModuleElement::term(PBasis { nu: stab.point.nu.clone(), rep }, coeff)
    }

    /// `ε₀ h 1_ν`.
    pub fn project(&self, h: &HeckeElement, stab: &Stabilizer) -> PModuleElement {
        let mut out = PModuleElement::zero();
        for (x, c) in h.iter() {
            out.add_scaled(c, &self.reduce_t(x, stab));
        }
        out
    }

    /// Dominant weight labelling a basis element.
    pub fn label(&self, b: &PBasis) -> Weight {
        let g = self.group();
        g.level_dot(&g.compose(&g.w0(), &b.rep), &b.nu, self.ell)
    }

    /// Basis element `[T_λ]` of a dominant weight.
    pub fn basis_of(&self, lambda: &Weight) -> PBasis {
        let (point, x) = self.group().alcove_decompose(lambda, self.ell);
        PBasis { nu: point.nu, rep: x }
    }

    /// `[T_λ] = ε₀ T_x 1_ν` with `λ = w₀x∘ν`, for any weight.
    pub fn bracket_t(&self, lambda: &Weight) -> Result<PModuleElement> {
        let (point, x) = self.group().alcove_decompose(lambda, self.ell);
        let stab = self.stabilizer(&point.nu)?;
        Ok(self.reduce_t(&x, &stab))
    }

    /// Relabel by dominant weights.
    pub fn to_weights(&self, v: &PModuleElement) -> FockElement {
        v.map_keys(|b| self.label(b))
    }

    /// `|λ⟩ ↦ [T_λ]` on dominant generators.
    pub fn phi(&self, v: &FockElement) -> PModuleElement {
        v.iter().map(|(w, c)| (self.basis_of(w), c.clone())).collect()
    }

    /// Candidates `v' ∈ vW_ν` passing the condition `X^{v'u} = X^{v'}T_u` on generators of `W_ν`.
    fn condition_x_reps(&self, v: &AffineWeylElement, stab: &Stabilizer) -> Vec<AffineWeylElement> {
        let g = self.group();
        let h = &self.hecke;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for z in &stab.group.elements {
            let cand = g.compose(v, z);
            if !seen.insert(cand.clone()) {
                continue;
            }
            let xv = h.x_elem(&cand);
            let gens_ok = stab.point.walls.iter().all(|&s| h.x_elem(&g.mul_gen(&cand, s)) == h.mul_gen(&xv, s));
            let omega_ok = stab
                .point
                .omega_stab
                .iter()
                .all(|pi| h.x_elem(&g.compose(&cand, pi)) == h.mul(&xv, &h.t(pi)));
            if gens_ok && omega_ok {
                out.push(cand);
            }
        }
        out
    }

    /// `[X_λ] = ε₀ X^v 1_ν` with `λ = w₀v∘ν` and `v` satisfying the X-condition.
    pub fn bracket_x(&self, lambda: &Weight) -> Result<PModuleElement> {
        let (point, x) = self.group().alcove_decompose(lambda, self.ell);
        let stab = self.stabilizer(&point.nu)?;
        let reps = self.condition_x_reps(&x, &stab);
        let mut result: Option<PModuleElement> = None;
        for v in &reps {
            let val = self.project(&self.hecke.x_elem(v), &stab);
            match &result {
                None => result = Some(val),
                Some(prev) if *prev != val => {
                    return Err(Error::RepresentativeAmbiguity(format!(
                        "weight {lambda}: representatives passing the X-condition disagree"
                    )))
                }
                Some(_) => {}
            }
        }
        result.ok_or_else(|| {
            Error::RepresentativeAmbiguity(format!("weight {lambda}: no representative in x·W_ν passes the X-condition"))
        })
    }

    /// `bar(ε₀ h 1_ν) = ε₀ bar(h) 1_ν`, semilinear.
    pub fn bar_module(&self, v: &PModuleElement) -> Result<PModuleElement> {
        let mut out = PModuleElement::zero();
        for (b, c) in v.iter() {
            let stab = self.stabilizer(&b.nu)?;
            out.add_scaled(&c.bar(), &self.project(&self.hecke.bar_basis(&b.rep), &stab));
        }
        Ok(out)
    }

    /// Canonical basis element through the KL engine on the module basis, relabelled by weights.
    pub fn canonical(&self, lambda: &Weight) -> Result<FockElement> {
        let block = self.fock.block_of(lambda);
        let labels: HashMap<PBasis, Weight> = block.iter().map(|w| (self.basis_of(w), w.clone())).collect();
        let order: Vec<PBasis> = block.iter().rev().map(|w| self.basis_of(w)).collect();
        let root = self.fock.root().clone();
        let module = KlModule::new(
            order,
            |a, b| root.leq(&labels[a], &labels[b]),
            |b| Ok(self.bar_module(&PModuleElement::basis(b.clone()))?.into_map()),
        )?;
        let col = module.canonical_element(&self.basis_of(lambda))?;
        Ok(col.into_iter().map(|(b, c)| (labels[&b].clone(), c)).collect())
    }

    /// Signed parabolic-singular KL coefficients `(-1)^{ℓ(w₀x)-ℓ(w₀y)} P^ν_{w₀y,w₀x}`, relabelled.
    pub fn kl_column(&self, lambda: &Weight) -> Result<FockElement> {
        let b = self.basis_of(lambda);
        let stab = self.stabilizer(&b.nu)?;
        let g = self.group();
        let polys = self.hecke.kl_suite(&b.rep, KlFlavor::ParabolicSingular(&self.finite, &stab.group))?;
        let top = g.length(&b.rep);
        Ok(polys
            .into_iter()
            .map(|(u, p)| {
                let label = g.level_dot(&g.compose(&g.w0(), &u), &b.nu, self.ell);
                (label, unsign(&p, top.abs_diff(g.length(&u))))
            })
            .collect())
    }

    /// `T_s X^{sμ} - X^{sμ+α}T_s^{-1} + T_s X^{μ-α} - X^μ T_s^{-1}` for simple `α = α_i`.
    pub fn lifted_identity(&self, mu: &Weight, i: usize) -> HeckeElement {
        let h = &self.hecke;
        let root = self.group().root();
        let alpha = root.simple_root(i);
        let smu = root.reflect(i, mu);
        let ts = h.t_gen(i + 1);
        let tsi = h.t_gen_inverse(i + 1);
        let mut out = h.mul(&ts, &h.x_weight(&smu));
        out -= &h.mul(&h.x_weight(&smu.add(alpha)), &tsi);
        out += &h.mul(&ts, &h.x_weight(&mu.sub(alpha)));
        out -= &h.mul(&h.x_weight(mu), &tsi);
        out
    }

    /// The four-term combination whose `ε₀`-multiple vanishes when `s_i w > w` (right half).
    pub fn right_hexagon(&self, mu: &Weight, w: u32, i: usize) -> HeckeElement {
        let h = &self.hecke;
        let g = self.group();
        let root = g.root();
        let smu = root.reflect(i, mu);
        let bw = h.bar_basis(&g.finite_element(w));
        let bsw = h.bar_basis(&g.finite_element(g.finite().left_gen(i, w)));
        let half = LaurentPoly::t_half(1);
        let mut out = h.mul(&h.x_weight(&smu), &bsw);
        out += &h.mul(&h.x_weight(&smu), &bw).scale(&half);
        out += &h.mul(&h.x_weight(mu), &bsw);
        out += &h.mul(&h.x_weight(mu), &bw).scale(&half);
        out
    }

    /// The four-term combination from the lifted identity (left half).
    pub fn left_hexagon(&self, mu: &Weight, w: u32, i: usize) -> HeckeElement {
        let h = &self.hecke;
        let g = self.group();
        let root = g.root();
        let alpha = root.simple_root(i);
        let smu = root.reflect(i, mu);
        let bw = h.bar_basis(&g.finite_element(w));
        let bsw = h.bar_basis(&g.finite_element(g.finite().left_gen(i, w)));
        let neg_half = LaurentPoly::monomial(-1, -1);
        let mut out = h.mul(&h.x_weight(&smu), &bw).scale(&neg_half);
        out -= &h.mul(&h.x_weight(&smu.add(alpha)), &bsw);
        out += &h.mul(&h.x_weight(&mu.sub(alpha)), &bw).scale(&neg_half);
        out -= &h.mul(&h.x_weight(mu), &bsw);
        out
    }

    /// The finite sign projector `ε₀` as a genuine Hecke element.
    pub fn eps0(&self) -> HeckeElement {
        self.hecke.projector(ProjectorKind::Sign, &self.finite).expect("finite Weyl group is Coxeter")
    }

    fn fock_json(&self, v: &FockElement) -> Value {
        let map: BTreeMap<String, Value> = v
            .iter()
            .map(|(w, c)| (w.to_string(), serde_json::to_value(c).expect("poly serializes")))
            .collect();
        json!(map)
    }

    fn mismatch(&self, kind: &str, lambda: &Weight, fock: &FockElement, hecke: Value) -> Mismatch {
        Mismatch { kind: kind.into(), weight: lambda.0.clone(), fock: self.fock_json(fock), hecke }
    }

    /// Straightening versus `[X_λ]` for one weight.
    pub fn check_straightening(&self, lambda: &Weight) -> Option<Mismatch> {
        let expected = self.fock.straighten(lambda);
        match self.bracket_x(lambda) {
            Ok(v) => {
                let got = self.to_weights(&v);
                (got != *expected).then(|| self.mismatch("straighten", lambda, &expected, self.fock_json(&got)))
            }
            Err(e) => Some(self.mismatch("straighten", lambda, &expected, json!({"error": e.to_string()}))),
        }
    }

    /// Canonical basis through the module versus the Fock space, for a dominant weight.
    pub fn check_canonical(&self, lambda: &Weight) -> Option<Mismatch> {
        let expected = match self.fock.canonical(lambda) {
            Ok(c) => c,
            Err(e) => return Some(self.mismatch("canonical", lambda, &FockElement::zero(), json!({"error": e.to_string()}))),
        };
        match self.canonical(lambda) {
            Ok(got) if got == expected => None,
            Ok(got) => Some(self.mismatch("canonical", lambda, &expected, self.fock_json(&got))),
            Err(e) => Some(self.mismatch("canonical", lambda, &expected, json!({"error": e.to_string()}))),
        }
    }

    /// Fock canonical coefficients versus signed parabolic-singular KL polynomials.
    pub fn check_kl(&self, lambda: &Weight) -> Option<Mismatch> {
        let expected = match self.fock.canonical(lambda) {
            Ok(c) => c,
            Err(e) => return Some(self.mismatch("kl", lambda, &FockElement::zero(), json!({"error": e.to_string()}))),
        };
        match self.kl_column(lambda) {
            Ok(got) if got == expected => None,
            Ok(got) => Some(self.mismatch("kl", lambda, &expected, self.fock_json(&got))),
            Err(e) => Some(self.mismatch("kl", lambda, &expected, json!({"error": e.to_string()}))),
        }
    }

    /// Straightening on every weight in the box, then canonical and KL checks on dominant ones.
    ///
    /// `max_block` limits which blocks get the KL comparison.
    pub fn verify_phi(&self, height: i64, max_block: usize) -> Report {
        let weights = box_weights(self.fock.root().rank(), height);
        let straight: Vec<Option<Mismatch>> = weights.par_iter().map(|w| self.check_straightening(w)).collect();
        let dominant: Vec<&Weight> = weights.iter().filter(|w| self.fock.root().is_dominant(w)).collect();
        let canon: Vec<Option<Mismatch>> = dominant.par_iter().map(|w| self.check_canonical(w)).collect();
        let kl_targets: Vec<&Weight> =
            dominant.iter().copied().filter(|w| self.fock.block_of(w).len() <= max_block).collect();
        let kl: Vec<Option<Mismatch>> = kl_targets.par_iter().map(|w| self.check_kl(w)).collect();
        Report {
            checked: weights.len() + dominant.len() + kl_targets.len(),
            mismatches: straight.into_iter().chain(canon).chain(kl).flatten().collect(),
        }
    }

    /// Straightening relations for `[X_λ]` under every simple reflection, tallied by configuration.
    pub fn case_consistency(&self, height: i64) -> Result<(BTreeMap<String, usize>, Report)> {
        let root = self.fock.root().clone();
        let g = self.group();
        let mut tally: BTreeMap<String, usize> = BTreeMap::new();
        let mut report = Report::default();
        for lambda in box_weights(root.rank(), height) {
            for i in 0..root.rank() {
                let p = lambda[i] + 1;
                if p < 0 {
                    continue;
                }
                let (point, x) = g.alcove_decompose(&lambda, self.ell);
                let stab = self.stabilizer(&point.nu)?;
                let v = self.condition_x_reps(&x, &stab).into_iter().next().unwrap_or(x);
                // q = ⟨-ℓw₀μ, α_i^∨⟩ for v = t_μ w.
                let q = -self.ell * root.w0_apply(&v.trans)[i];
                let case = classify(p, q, self.ell);
                *tally.entry(case.to_string()).or_default() += 1;
                let lhs = self.bracket_x(&root.dot_reflect(i, &lambda))?;
                let mut rhs = PModuleElement::zero();
                if p == 0 {
                    rhs = -&self.bracket_x(&lambda)?;
                } else {
                    for (wt, c) in self.fock.exchange(&lambda, i) {
                        rhs.add_scaled(&c, &self.bracket_x(&wt)?);
                    }
                }
                report.checked += 1;
                if lhs != rhs {
                    let got = self.to_weights(&lhs);
                    report.mismatches.push(self.mismatch(case, &lambda, &self.to_weights(&rhs), self.fock_json(&got)));
                }
            }
        }
        Ok((tally, report))
    }
}

/// Configuration of `(p, q)` among the right/left, regular/singular cases.
pub fn classify(p: i64, q: i64, ell: i64) -> &'static str {
    if q == 0 && (0..ell).contains(&p) {
        if p > 0 { "2Rreg" } else { "2Rsing" }
    } else if q == ell && (0..ell).contains(&p) {
        if p > 0 { "2Lreg" } else { "2Lsing" }
    } else if q >= ell && q <= p && p < q + ell {
        if p > q { "1Rreg" } else { "1Rsing" }
    } else if q >= ell && q - ell <= p && p < q {
        if p > q - ell { "1Lreg" } else { "1Lsing" }
    } else {
        "other"
    }
}

/// All weights with coordinates in `[-h, h]`, lexicographic.
pub fn box_weights(rank: usize, h: i64) -> Vec<Weight> {
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (-h..=h).map(move |c| {
                    let mut v = v.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(Weight).collect()
}
