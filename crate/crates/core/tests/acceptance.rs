//! One `criterion N: PASS/FAIL` line per acceptance criterion; exits nonzero on any failure.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use klfock_core::fock::{FockElement, FockSpace};
use klfock_core::heckefock::HeckeFock;
use klfock_core::suites::{ConfluenceSuite, DihedralSuite, HexagonSuite, Suite, SuiteParams, WedgeSuite};
use klfock_core::wedge::{crosscheck_fock, crosscheck_partitions};
use klfock_core::{LaurentPoly, RootDatum, Weight};

type Outcome = Result<String, String>;

fn root(label: &str) -> Arc<RootDatum> {
    Arc::new(RootDatum::build(label).expect("known type"))
}

fn poly(terms: &[(i32, i64)]) -> LaurentPoly {
    LaurentPoly::from_i64(terms)
}

fn a1(c: i64) -> Weight {
    Weight(vec![c])
}

fn element(terms: &[(i64, &[(i32, i64)])]) -> FockElement {
    terms.iter().map(|(c, p)| (a1(*c), poly(p))).collect()
}

fn expect_eq(what: &str, got: &FockElement, want: &FockElement) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn criterion_1() -> Outcome {
    let f = FockSpace::new(root("A1"), 5);
    expect_eq("|-11>", &f.straighten(&a1(-11)), &element(&[(9, &[(0, -1)])]))?;
    expect_eq("|-4>", &f.straighten(&a1(-4)), &element(&[(2, &[(1, -1)])]))?;
    expect_eq(
        "|-12>",
        &f.straighten(&a1(-12)),
        &element(&[(10, &[(1, -1)]), (8, &[(2, 1), (0, -1)]), (0, &[(1, 1), (3, -1)])]),
    )?;
    Ok("three straightening cases exact".into())
}

fn criterion_2() -> Outcome {
    let f = FockSpace::new(root("A1"), 5);
    let block = f.block_of(&a1(10));
    if block != vec![a1(10), a1(8), a1(0)] {
        return Err(format!("block {block:?}"));
    }
    let c = |w| f.canonical(&a1(w)).map_err(|e| e.to_string());
    expect_eq("C_8", &c(8)?, &element(&[(8, &[(0, 1)]), (0, &[(1, -1)])]))?;
    expect_eq("C_10", &c(10)?, &element(&[(10, &[(0, 1)]), (8, &[(1, -1)]), (0, &[(2, 1)])]))?;
    let d = f.decomposition(&a1(10)).map_err(|e| e.to_string())?;
    if d[&a1(8)] != poly(&[(1, 1)]) || !d[&a1(0)].is_zero() || !d[&a1(10)].is_one() {
        return Err(format!("decomposition row {d:?}"));
    }
    Ok("C_8, C_10, d_{10,8}, d_{10,0} exact".into())
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let suite = ConfluenceSuite { samples: 0 };
    let mut checked = 0;
    let mut weights_total = 0;
    for label in ["A1", "A2", "B2"] {
        let r = root(label);
        for ell in [2, 3] {
            let weights: Vec<Weight> =
                (0..100).map(|_| Weight((0..r.rank()).map(|_| rng.gen_range(-12..=12)).collect())).collect();
            weights_total += weights.len();
            let report = suite.check_weights(&r, ell, &weights, rng.gen()).map_err(|e| e.to_string())?;
            if !report.ok() {
                return Err(format!("{label} ℓ={ell}: {:?}", report.mismatches[0]));
            }
            checked += report.checked;
        }
    }
    Ok(format!("{weights_total} weights, {checked} comparisons"))
}

fn criterion_4() -> Outcome {
    let params = SuiteParams { root: root("A1"), ell: 2, height: 8, seed: 0 };
    let report = DihedralSuite.run(&params).map_err(|e| e.to_string())?;
    if !report.ok() {
        return Err(format!("{:?}", report.mismatches[0]));
    }
    Ok(format!("{} coefficients", report.checked))
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for label in ["A1", "A2", "B2"] {
        for ell in [2, 3] {
            let params = SuiteParams { root: root(label), ell, height: 3, seed: 11 };
            let report = HexagonSuite.run(&params).map_err(|e| e.to_string())?;
            if !report.ok() {
                return Err(format!("{label} ℓ={ell}: {:?}", report.mismatches[0]));
            }
            checked += report.checked;
        }
    }
    Ok(format!("{checked} identities"))
}

/// Criteria 6 and 7 share one sweep.
fn phi_sweep() -> (Outcome, Outcome) {
    let mut straight = 0;
    let mut kl = 0;
    let mut bad6 = Vec::new();
    let mut bad7 = Vec::new();
    let runs: [(&str, &[i64], i64); 2] = [("A1", &[2, 3, 5], 12), ("A2", &[2, 3], 4)];
    for (label, ells, height) in runs {
        for &ell in ells {
            let m = match HeckeFock::new(root(label), ell) {
                Ok(m) => m,
                Err(e) => return (Err(e.to_string()), Err(e.to_string())),
            };
            let report = m.verify_phi(height, 8);
            let dominant = klfock_core::heckefock::box_weights(m.group().rank(), height)
                .into_iter()
                .filter(|w| m.fock().root().is_dominant(w))
                .collect::<Vec<_>>();
            let weights = (2 * height + 1).pow(m.group().rank() as u32) as usize;
            straight += weights + dominant.len();
            kl += report.checked - weights - dominant.len();
            for mm in report.mismatches {
                let tag = format!("{label} ℓ={ell} {} {:?}", mm.kind, mm.weight);
                if mm.kind == "kl" {
                    bad7.push(tag);
                } else {
                    bad6.push(tag);
                }
            }
        }
    }
    let six = if bad6.is_empty() {
        Ok(format!("{straight} straightening and canonical comparisons"))
    } else {
        Err(format!("{} mismatches, first {}", bad6.len(), bad6[0]))
    };
    let seven = if !bad7.is_empty() {
        Err(format!("{} mismatches, first {}", bad7.len(), bad7[0]))
    } else if kl == 0 {
        Err("no blocks compared".into())
    } else {
        Ok(format!("{kl} blocks compared"))
    };
    (six, seven)
}

fn criterion_8() -> Outcome {
    let mut checked = 0;
    for ell in [2, 3] {
        let report = crosscheck_fock(8, ell, 6).map_err(|e| e.to_string())?;
        if !report.ok() {
            return Err(format!("ℓ={ell}: {:?}", report.mismatches[0]));
        }
        checked += report.checked;
        let worked = WedgeSuite::worked_partition();
        let report = crosscheck_partitions(10, ell, std::slice::from_ref(&worked)).map_err(|e| e.to_string())?;
        if !report.ok() {
            return Err(format!("worked partition ℓ={ell}: {:?}", report.mismatches[0]));
        }
        checked += report.checked;
        let maya = worked.to_maya();
        if maya.black != [4, 3, 1, 0, -2, -3, -5, -6, -7] {
            return Err(format!("worked partition converts to {:?}", maya.black));
        }
        if maya.to_partition().map_err(|e| e.to_string())? != worked {
            return Err("worked partition does not round-trip".into());
        }
    }
    Ok(format!("{checked} exchanges, worked partition included"))
}

fn main() -> ExitCode {
    let mut failed = false;
    let mut report = |n: usize, start: Instant, outcome: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {n}: PASS ({msg}; {secs:.2}s)"),
            Err(msg) => {
                failed = true;
                println!("criterion {n}: FAIL ({msg}; {secs:.2}s)");
            }
        }
    };
    let t = Instant::now();
    report(1, t, criterion_1());
    let t = Instant::now();
    report(2, t, criterion_2());
    let t = Instant::now();
    report(3, t, criterion_3());
    let t = Instant::now();
    report(4, t, criterion_4());
    let t = Instant::now();
    report(5, t, criterion_5());
    let t = Instant::now();
    let (six, seven) = phi_sweep();
    report(6, t, six);
    report(7, t, seven);
    let t = Instant::now();
    report(8, t, criterion_8());
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
