//! Named verification sweeps, each producing a `{checked, mismatches}` report.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fock::FockSpace;
use crate::hecke::{HeckeAlgebra, HeckeElement, ProjectorKind};
use crate::heckefock::{box_weights, HeckeFock, Mismatch, Report};
use crate::laurent::LaurentPoly;
use crate::rootdata::{RootDatum, Weight};
use crate::strategy::StrategyRegistry;
use crate::wedge::{crosscheck_fock, crosscheck_partitions, Partition};
use crate::weyl::{AffineWeylElement, AffineWeylGroup};

/// Inputs shared by every sweep.
#[derive(Clone)]
pub struct SuiteParams {
    pub root: Arc<RootDatum>,
    pub ell: i64,
    pub height: i64,
    pub seed: u64,
}

/// A verification sweep.
pub trait Suite: Send + Sync {
    fn name(&self) -> &str;
    fn run(&self, params: &SuiteParams) -> Result<Report>;
}

/// Name → suite table.
pub struct SuiteRegistry {
    entries: BTreeMap<String, Box<dyn Suite>>,
}

impl Default for SuiteRegistry {
    fn default() -> Self {
        let mut r = Self { entries: BTreeMap::new() };
        r.register(Box::new(PhiSuite));
        r.register(Box::new(ConfluenceSuite { samples: 200 }));
        r.register(Box::new(HexagonSuite));
        r.register(Box::new(WedgeSuite));
        r.register(Box::new(DihedralSuite));
        r
    }
}

impl SuiteRegistry {
    pub fn register(&mut self, suite: Box<dyn Suite>) {
        self.entries.insert(suite.name().to_string(), suite);
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn Suite> {
        self.entries
            .get(name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {name:?}; known: {}", self.names().join(", "))))
    }

    pub fn run(&self, name: &str, params: &SuiteParams) -> Result<Report> {
        self.get(name)?.run(params)
    }
}

fn mismatch(kind: &str, weight: &[i64], expected: Value, got: Value) -> Mismatch {
    Mismatch { kind: kind.into(), weight: weight.to_vec(), fock: expected, hecke: got }
}

fn record(report: &mut Report, ok: bool, make: impl FnOnce() -> Mismatch) {
    report.checked += 1;
    if !ok {
        report.mismatches.push(make());
    }
}

/// Straightening, canonical basis and KL polynomials against the Hecke module.
pub struct PhiSuite;

impl Suite for PhiSuite {
    fn name(&self) -> &str {
        "phi"
    }

    fn run(&self, p: &SuiteParams) -> Result<Report> {
        Ok(HeckeFock::new(p.root.clone(), p.ell)?.verify_phi(p.height, 8))
    }
}

/// Strategy independence of straightening and `bar∘bar = id` on random weights.
pub struct ConfluenceSuite {
    pub samples: usize,
}

impl ConfluenceSuite {
    pub fn check_weights(&self, root: &Arc<RootDatum>, ell: i64, weights: &[Weight], seed: u64) -> Result<Report> {
        let registry = StrategyRegistry::default();
        let base = FockSpace::new(root.clone(), ell);
        let others: Vec<FockSpace> = registry
            .names()
            .iter()
            .map(|name| Ok(FockSpace::with_strategy(root.clone(), ell, registry.build(name, seed)?)))
            .collect::<Result<_>>()?;
        let mut report = Report::default();
        for w in weights {
            let expected = base.straighten(w);
            for fock in &others {
                let got = fock.straighten(w);
                record(&mut report, got == expected, || {
                    mismatch(fock.strategy_name(), &w.0, base.to_json(&expected), base.to_json(&got))
                });
            }
            let twice = base.bar(&base.bar(&expected));
            record(&mut report, twice == *expected, || {
                mismatch("bar", &w.0, base.to_json(&expected), base.to_json(&twice))
            });
        }
        Ok(report)
    }
}

impl Suite for ConfluenceSuite {
    fn name(&self) -> &str {
        "confluence"
    }

    fn run(&self, p: &SuiteParams) -> Result<Report> {
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        let n = p.root.rank();
        let weights: Vec<Weight> =
            (0..self.samples).map(|_| Weight((0..n).map(|_| rng.gen_range(-p.height..=p.height)).collect())).collect();
        self.check_weights(&p.root, p.ell, &weights, p.seed)
    }
}

/// Identities in the affine Hecke algebra and the module relations built from them.
pub struct HexagonSuite;

impl HexagonSuite {
    fn check_zero(report: &mut Report, kind: &str, weight: &[i64], h: &HeckeAlgebra, value: &HeckeElement) {
        record(report, value.is_zero(), || mismatch(kind, weight, json!([]), h.to_json(value)));
    }

    fn check_eq(report: &mut Report, kind: &str, weight: &[i64], h: &HeckeAlgebra, a: &HeckeElement, b: &HeckeElement) {
        record(report, a == b, || mismatch(kind, weight, h.to_json(b), h.to_json(a)));
    }

    /// Quadratic relation on each generator and products along random reduced words.
    pub fn relations(h: &HeckeAlgebra, seed: u64, report: &mut Report) {
        let g = h.group();
        let n = g.rank();
        for s in 0..=n {
            let mut expected = h.one();
            expected.add_term(g.generator(s), LaurentPoly::delta());
            Self::check_eq(report, "quadratic", &[s as i64], h, &h.mul(&h.t_gen(s), &h.t_gen(s)), &expected);
            Self::check_eq(report, "inverse", &[s as i64], h, &h.mul(&h.t_gen(s), &h.t_gen_inverse(s)), &h.one());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..400 {
            let word: Vec<usize> = (0..rng.gen_range(1..=8)).map(|_| rng.gen_range(0..=n)).collect();
            let x = g.from_gens(&word);
            if g.length(&x) != word.len() {
                continue;
            }
            // A reduced word multiplies out to the basis element.
            let prod = word.iter().fold(h.one(), |acc, &s| h.mul_gen(&acc, s));
            Self::check_eq(report, "braid", &[], h, &prod, &h.t(&x));
        }
    }

    pub fn bernstein(h: &HeckeAlgebra, bound: i64, report: &mut Report) {
        let root = h.group().root().clone();
        for lam in box_weights(root.rank(), bound) {
            for i in 0..root.rank() {
                let lhs = &h.mul(&h.t_gen(i + 1), &h.x_weight(&lam)) - &h.mul(&h.x_weight(&root.reflect(i, &lam)), &h.t_gen(i + 1));
                Self::check_eq(report, "bernstein", &lam.0, h, &lhs, &h.bernstein_rhs(&lam, i));
            }
        }
    }

    /// `X^μ X^ν = X^{μ+ν}` on a box.
    pub fn commuting_x(h: &HeckeAlgebra, bound: i64, report: &mut Report) {
        let weights = box_weights(h.group().rank(), bound);
        for mu in &weights {
            for nu in &weights {
                let prod = h.mul(&h.x_weight(mu), &h.x_weight(nu));
                Self::check_eq(report, "x-commute", &mu.add(nu).0, h, &prod, &h.x_weight(&mu.add(nu)));
            }
        }
    }

    fn finite_generator_sets(g: &AffineWeylGroup) -> Vec<Vec<usize>> {
        let n = g.rank();
        let mut sets = vec![vec![]];
        for a in 0..=n {
            sets.push(vec![a]);
            for b in a + 1..=n {
                sets.push(vec![a, b]);
            }
        }
        sets.into_iter().filter(|s| s.len() <= n && g.subgroup(s, &[]).is_ok()).collect()
    }

    /// `T_s` eigenvalues and squares of the sign and trivial projectors.
    pub fn projectors(h: &HeckeAlgebra, report: &mut Report) -> Result<()> {
        let g = h.group();
        let neg = LaurentPoly::monomial(-1, -1);
        let pos = LaurentPoly::t_half(1);
        for gens in Self::finite_generator_sets(g) {
            let sub = g.subgroup(&gens, &[])?;
            let l = sub.longest_len as u32;
            let eps = h.projector(ProjectorKind::Sign, &sub)?;
            let one = h.projector(ProjectorKind::Trivial, &sub)?;
            let tag: Vec<i64> = gens.iter().map(|&s| s as i64).collect();
            for &s in &gens {
                Self::check_eq(report, "sign-eigen", &tag, h, &h.gen_mul(s, &eps), &eps.scale(&neg));
                Self::check_eq(report, "sign-eigen", &tag, h, &h.mul_gen(&eps, s), &eps.scale(&neg));
                Self::check_eq(report, "trivial-eigen", &tag, h, &h.gen_mul(s, &one), &one.scale(&pos));
                Self::check_eq(report, "trivial-eigen", &tag, h, &h.mul_gen(&one, s), &one.scale(&pos));
            }
            let poincare = sub.poincare();
            let one_sq = LaurentPoly::signed_power(false, -1, l) * &poincare;
            Self::check_eq(report, "trivial-square", &tag, h, &h.mul(&one, &one), &one.scale(&one_sq));
            let eps_sq = LaurentPoly::signed_power(true, 1, l) * poincare.bar();
            Self::check_eq(report, "sign-square", &tag, h, &h.mul(&eps, &eps), &eps.scale(&eps_sq));
        }
        Ok(())
    }

    /// `ε_γ T_u 1_ν` against its double-coset sum for minimal `u` with `ℓ(u) ≤ max_len`.
    pub fn double_cosets(h: &HeckeAlgebra, max_len: usize, report: &mut Report) -> Result<()> {
        let g = h.group();
        let n = g.rank();
        let mut elems: Vec<AffineWeylElement> = g.omega().cloned().collect();
        let mut frontier = elems.clone();
        for _ in 0..max_len {
            frontier = frontier.iter().flat_map(|x| (0..=n).map(move |s| g.mul_gen(x, s))).collect();
            frontier.sort();
            frontier.dedup();
            elems.extend(frontier.iter().cloned());
        }
        elems.sort();
        elems.dedup();
        let sets = Self::finite_generator_sets(g);
        for lg in &sets {
            for rg in &sets {
                let left = g.subgroup(lg, &[])?;
                let right = g.subgroup(rg, &[])?;
                let eps = h.projector(ProjectorKind::Sign, &left)?;
                let one = h.projector(ProjectorKind::Trivial, &right)?;
                for u in elems.iter().filter(|u| g.length(u) <= max_len) {
                    let minimal =
                        lg.iter().all(|&s| !g.is_left_descent(s, u)) && rg.iter().all(|&s| !g.is_right_descent(u, s));
                    if !minimal {
                        continue;
                    }
                    let lhs = h.product(&[&eps, &h.t(u), &one]);
                    let wu = g.compose(&left.longest, u);
                    if rg.iter().any(|&s| g.is_right_descent(&wu, s)) {
                        Self::check_zero(report, "double-coset-zero", &u.trans.0, h, &lhs);
                        continue;
                    }
                    let mut rhs = HeckeElement::zero();
                    for v in &left.elements {
                        for z in &right.elements {
                            let c = LaurentPoly::signed_power(true, -1, g.length(v) as u32)
                                * LaurentPoly::signed_power(false, 1, g.length(z) as u32);
                            rhs.add_term(g.compose(&g.compose(v, u), z), c);
                        }
                    }
                    let scale = LaurentPoly::signed_power(true, 1, left.longest_len as u32)
                        * LaurentPoly::signed_power(false, -1, right.longest_len as u32);
                    Self::check_eq(report, "double-coset", &u.trans.0, h, &lhs, &rhs.scale(&scale));
                }
            }
        }
        Ok(())
    }

    /// The lifted four-term identity and both hexagon combinations, in `H` and in the module.
    pub fn hexagons(m: &HeckeFock, bound: i64, report: &mut Report) -> Result<()> {
        let g = m.group().clone();
        let h = m.hecke().clone();
        let n = g.rank();
        let eps = m.eps0();
        let mut nus: Vec<Weight> = box_weights(n, bound + 1).iter().map(|l| g.alcove_decompose(l, m.ell()).0.nu).collect();
        nus.sort();
        nus.dedup();
        let stabs = nus.iter().map(|nu| m.stabilizer(nu)).collect::<Result<Vec<_>>>()?;
        for mu in box_weights(n, bound) {
            for i in 0..n {
                Self::check_zero(report, "lifted", &mu.0, &h, &m.lifted_identity(&mu, i));
                for w in g.finite().elements() {
                    if g.finite().is_left_descent(i, w) {
                        continue;
                    }
                    for (kind, comb) in [("right-hexagon", m.right_hexagon(&mu, w, i)), ("left-hexagon", m.left_hexagon(&mu, w, i))] {
                        Self::check_zero(report, kind, &mu.0, &h, &h.mul(&eps, &comb));
                        for stab in &stabs {
                            let projected = m.project(&comb, stab);
                            record(report, projected.is_zero(), || {
                                mismatch(kind, &mu.0, json!({}), json!({"nu": stab.point.nu.0, "terms": projected.len()}))
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl Suite for HexagonSuite {
    fn name(&self) -> &str {
        "hexagon"
    }

    fn run(&self, p: &SuiteParams) -> Result<Report> {
        let m = HeckeFock::new(p.root.clone(), p.ell)?;
        let h = m.hecke().clone();
        let small = p.height.clamp(0, 2);
        let mut report = Report::default();
        Self::relations(&h, p.seed, &mut report);
        Self::bernstein(&h, p.height.clamp(0, 4), &mut report);
        // X-elements outside type A grow quickly with the weight.
        let x_cap = if p.root.label().starts_with('A') { 3 } else { 2 };
        Self::commuting_x(&h, p.height.clamp(0, x_cap), &mut report);
        Self::projectors(&h, &mut report)?;
        if p.root.rank() <= 2 {
            Self::double_cosets(&h, 4, &mut report)?;
        }
        Self::hexagons(&m, small, &mut report)?;
        let (_, cases) = m.case_consistency(p.height)?;
        report.merge(cases);
        Ok(report)
    }
}

/// Type-A wedge straightening against the Fock space of `A_{n-1}`, `n = rank + 1`, partitions up
/// to size `height`; the nine-part worked partition is always included in a wider window.
pub struct WedgeSuite;

impl WedgeSuite {
    pub fn worked_partition() -> Partition {
        Partition::new(vec![4, 4, 3, 3, 2, 2, 1, 1, 1]).expect("valid partition")
    }
}

impl Suite for WedgeSuite {
    fn name(&self) -> &str {
        "wedge"
    }

    fn run(&self, p: &SuiteParams) -> Result<Report> {
        if !p.root.label().starts_with('A') || !p.root.is_irreducible() {
            return Err(Error::InvalidInput(format!("the wedge suite needs type A, got {}", p.root.label())));
        }
        let mut report = crosscheck_fock(p.root.rank() + 1, p.ell, p.height)?;
        report.merge(crosscheck_partitions(10, p.ell, &[Self::worked_partition()])?);
        Ok(report)
    }
}

/// Signed KL polynomials `(-t^{1/2})^{ℓ(x)-ℓ(y)}` in affine `A1`, for `ℓ(x) ≤ height`.
pub struct DihedralSuite;

impl Suite for DihedralSuite {
    fn name(&self) -> &str {
        "dihedral"
    }

    fn run(&self, p: &SuiteParams) -> Result<Report> {
        let g = Arc::new(AffineWeylGroup::new(Arc::new(RootDatum::build("A1")?))?);
        let h = HeckeAlgebra::new(g.clone());
        let mut report = Report::default();
        let max_len = p.height.max(0) as usize;
        for pi in g.omega().cloned().collect::<Vec<_>>() {
            for start in [0usize, 1] {
                for len in 0..=max_len {
                    if len == 0 && start == 1 {
                        continue;
                    }
                    let x = (0..len).fold(pi.clone(), |acc, i| g.mul_gen(&acc, (start + i) % 2));
                    let c = h.canonical(&x)?;
                    let ideal = g.bruhat_ideal(&x);
                    let word = g.word_labels(&x);
                    let tag = vec![len as i64, start as i64];
                    record(&mut report, c.len() == ideal.len(), || {
                        mismatch("support", &tag, json!(ideal.len()), json!(c.len()))
                    });
                    for y in ideal.iter() {
                        let d = (g.length(&x) - g.length(y)) as u32;
                        let expected = LaurentPoly::signed_power(true, 1, d);
                        let got = c.coeff(y);
                        record(&mut report, got == expected, || {
                            mismatch("dihedral", &tag, json!({"x": word, "p": expected.to_string()}), json!(got.to_string()))
                        });
                    }
                }
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(label: &str, ell: i64, height: i64) -> SuiteParams {
        SuiteParams { root: Arc::new(RootDatum::build(label).unwrap()), ell, height, seed: 7 }
    }

    #[test]
    fn registry_names() {
        let r = SuiteRegistry::default();
        assert_eq!(r.names(), vec!["confluence", "dihedral", "hexagon", "phi", "wedge"]);
        assert!(r.get("nope").is_err());
    }

    #[test]
    fn small_runs_are_clean() {
        let r = SuiteRegistry::default();
        for (suite, label, ell, height) in
            [("phi", "A1", 3, 6), ("confluence", "B2", 2, 6), ("hexagon", "A1", 2, 3), ("wedge", "A3", 2, 4), ("dihedral", "A1", 2, 5)]
        {
            let report = r.run(suite, &params(label, ell, height)).unwrap();
            assert!(report.checked > 0, "{suite}");
            assert!(report.ok(), "{suite}: {:?}", report.mismatches);
        }
        assert!(r.run("wedge", &params("B2", 2, 3)).is_err());
    }
}
