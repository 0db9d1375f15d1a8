//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use bca_cli::commands::odd_irregular_example;
use bca_core::conditions::rank_profile_orders;
use bca_core::contraction::{cayley_image, contraction_roundtrip_defect, CONTRACTION_SLACK};
use bca_core::exec::{map_indexed, Execution};
use bca_core::forms::dual_classification;
use bca_core::generate::{
    item_rng, random_contraction, random_dissipative_system, random_invertible, random_mixed_system,
};
use bca_core::numerics::{operator_norm, row_space_basis, subspace_distance};
use bca_core::polyoracle::{
    hermite_interpolant, l0_imaginary_part, rational, sample_admissible, sample_dissipativity,
    verify_boundary_form_identity, verify_canonical_identity,
};
use bca_core::{
    dissipativity_verdict, from_contraction, normalize, orders_multiset, regularity_verdict, selfadjoint_verdict,
    structural_report, truncate_leading, BcError, BoundaryConditionSystem, Complex64, TolerancePolicy,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for m in 1..=6 {
        let rep =
            verify_boundary_form_identity(m, 50, 1000 + m as u64, Execution::Parallel).map_err(|e| e.to_string())?;
        ensure(rep.passed && rep.samples == 50, || {
            format!("m = {m}: max defect {}", rep.max_defect)
        })?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!("m = 1..6 x 50 samples, defect 0, {secs:.2} s"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    for m in 1..=6 {
        let rep = verify_canonical_identity(m, 50, 2000 + m as u64, Execution::Parallel).map_err(|e| e.to_string())?;
        ensure(rep.passed && rep.samples == 50, || {
            format!("m = {m}: max defect {}", rep.max_defect)
        })?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!("m = 1..6 x 50 samples, defect 0, {secs:.2} s"))
}

fn criterion_3() -> Outcome {
    let tol = TolerancePolicy::default();
    for n in 2..=4 {
        let sys = odd_irregular_example(n).map_err(|e| e.to_string())?;
        let m = sys.m();
        let verdict = dissipativity_verdict(&sys, &tol).map_err(|e| e.to_string())?;
        ensure(verdict.dissipative, || format!("n = {n}: not dissipative"))?;
        for y_hat in sample_admissible(&sys, 30, 3000 + n as u64).map_err(|e| e.to_string())? {
            let y = hermite_interpolant(&y_hat);
            let d = &y_hat.at_zero()[n - 1];
            let expected = (d * d.conj()).re / rational(2, 1);
            ensure(l0_imaginary_part(&y, m) == expected, || {
                format!("n = {n}: Im(L0 y, y) != |y^(n-1)(0)|^2/2")
            })?;
        }
        let rep =
            regularity_verdict(&normalize(&sys, &tol).map_err(|e| e.to_string())?, &tol).map_err(|e| e.to_string())?;
        ensure(rep.theta_0.norm() <= 1e-10 * rep.scale, || {
            format!("n = {n}: |theta_0| = {:e}", rep.theta_0.norm())
        })?;
        ensure(rep.regular == Some(false), || format!("n = {n}: reported regular"))?;
    }
    Ok("n = 2..4: dissipative, exact Im-form on 30 samples each, theta_0 = 0, not regular".into())
}

fn criterion_4() -> Outcome {
    let tol = TolerancePolicy::uniform(1e-8).unwrap();
    let mut dissipative = 0;
    for m in 1..=4 {
        let rows = map_indexed(100, Execution::Parallel, |i| -> Result<(bool, bool), BcError> {
            let sys = random_mixed_system(m, &mut item_rng(4000 + m as u64, i as u64))?;
            Ok((
                dissipativity_verdict(&sys, &tol)?.dissipative,
                dual_classification(&sys, &tol)?.is_nonpositive(),
            ))
        });
        for (i, row) in rows.into_iter().enumerate() {
            let (primal, dual) = row.map_err(|e| e.to_string())?;
            ensure(primal == dual, || {
                format!("m = {m}, system {i}: G_N verdict {primal}, G_L verdict {dual}")
            })?;
            dissipative += primal as usize;
        }
    }
    Ok(format!("400/400 agree ({dissipative} dissipative)"))
}

fn criterion_5() -> Outcome {
    let tol = TolerancePolicy::default();
    let mut worst_defect = 0.0f64;
    for m in 1..=4 {
        for i in 0..100u64 {
            let sys = random_mixed_system(m, &mut item_rng(5000 + m as u64, i)).map_err(|e| e.to_string())?;
            let dissipative = dissipativity_verdict(&sys, &tol)
                .map_err(|e| e.to_string())?
                .dissipative;
            let contraction = match cayley_image(&sys, &tol) {
                Ok(v) => operator_norm(&v) <= 1.0 + CONTRACTION_SLACK,
                Err(BcError::RankDeficiency { .. }) => false,
                Err(e) => return Err(e.to_string()),
            };
            ensure(dissipative == contraction, || {
                format!("m = {m}, system {i}: equivalence fails")
            })?;

            let sys = random_dissipative_system(m, &mut item_rng(5100 + m as u64, i)).map_err(|e| e.to_string())?;
            let defect = contraction_roundtrip_defect(&sys, &tol).map_err(|e| e.to_string())?;
            ensure(defect <= 1e-9, || {
                format!("m = {m}, system {i}: round-trip defect {defect:e}")
            })?;
            worst_defect = worst_defect.max(defect);

            let v = random_contraction(m, &mut item_rng(5200 + m as u64, i));
            let back = from_contraction(&v).map_err(|e| e.to_string())?;
            ensure(
                dissipativity_verdict(&back, &tol)
                    .map_err(|e| e.to_string())?
                    .dissipative,
                || format!("m = {m}, contraction {i}: image not dissipative"),
            )?;
        }
    }
    Ok(format!(
        "equivalence 400/400, max round-trip defect {worst_defect:.1e}, from_contraction 400/400"
    ))
}

fn criterion_6() -> Outcome {
    let tol = TolerancePolicy::uniform(1e-8).unwrap();
    for m in [2, 4] {
        for i in 0..100u64 {
            let sys = random_dissipative_system(m, &mut item_rng(6000 + m as u64, i)).map_err(|e| e.to_string())?;
            let rep = regularity_verdict(&normalize(&sys, &tol).map_err(|e| e.to_string())?, &tol)
                .map_err(|e| e.to_string())?;
            ensure(rep.regular == Some(true) && rep.regular_strict == Some(true), || {
                format!("m = {m}, system {i}: {rep:?}")
            })?;
        }
    }
    Ok("m = 2, 4: 200/200 regular under both readings".into())
}

fn criterion_7() -> Outcome {
    let tol = TolerancePolicy::default();
    let span = |s: &BoundaryConditionSystem| row_space_basis(s.coeffs(), &tol);
    let mut systems = 0;
    for m in 1..=6 {
        for i in 0..10u64 {
            let mut rng = item_rng(7000 + m as u64, i);
            let sys = if i % 2 == 0 {
                random_dissipative_system(m, &mut rng)
            } else {
                random_mixed_system(m, &mut rng)
            }
            .map_err(|e| e.to_string())?;
            let orders = orders_multiset(&sys, &tol).map_err(|e| e.to_string())?;
            let oracle = rank_profile_orders(&sys, &tol);
            ensure(orders == oracle, || {
                format!("m = {m}, system {i}: {orders:?} vs rank profile {oracle:?}")
            })?;
            for r in 0..20 {
                let mixed = sys
                    .recombined(&random_invertible(m, &mut rng))
                    .map_err(|e| e.to_string())?;
                let got = orders_multiset(&mixed, &tol).map_err(|e| e.to_string())?;
                ensure(got == orders, || {
                    format!("m = {m}, system {i}, recombination {r}: {got:?} vs {orders:?}")
                })?;
            }
            let norm = normalize(&sys, &tol).map_err(|e| e.to_string())?;
            let again = normalize(norm.base(), &tol).map_err(|e| e.to_string())?;
            ensure(again.orders() == norm.orders(), || {
                format!("m = {m}, system {i}: not idempotent")
            })?;
            for (a, b) in [(&sys, norm.base()), (norm.base(), again.base())] {
                let d = subspace_distance(&span(a), &span(b)).map_err(|e| e.to_string())?;
                ensure(d <= 1e-9, || format!("m = {m}, system {i}: row span moved by {d:e}"))?;
            }
            systems += 1;
        }
    }
    Ok(format!("{systems} systems x 20 recombinations, m = 1..6"))
}

fn criterion_8() -> Outcome {
    let tol = TolerancePolicy::default();
    for i in 0..100u64 {
        let m = [2, 4, 6][i as usize % 3];
        let sys = random_dissipative_system(m, &mut item_rng(8000, i)).map_err(|e| e.to_string())?;
        let norm = normalize(&sys, &tol).map_err(|e| e.to_string())?;
        let rep = structural_report(&norm).map_err(|e| e.to_string())?;
        ensure(rep.rank_sums.iter().all(|&s| s == 2), || {
            format!("system {i}: rank sums {:?}", rep.rank_sums)
        })?;
        for d in &rep.pairing_defects {
            ensure(d.defect <= 1e-9 * d.scale, || {
                format!("system {i}: pairing defect {d:?}")
            })?;
        }
        let truncated = truncate_leading(&norm);
        ensure(
            selfadjoint_verdict(&truncated, &tol).map_err(|e| e.to_string())?,
            || format!("system {i}: truncation not self-adjoint"),
        )?;
    }
    Ok("100/100 (m = 2, 4, 6)".into())
}

fn criterion_9() -> Outcome {
    let tol = TolerancePolicy::default();
    for (name, rows) in [
        ("Dirichlet", [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]),
        ("Neumann", [[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]]),
    ] {
        let sys = BoundaryConditionSystem::from_real_rows(2, &[&rows[0], &rows[1]]).unwrap();
        let verdict = dissipativity_verdict(&sys, &tol).map_err(|e| e.to_string())?;
        ensure(verdict.dissipative && verdict.selfadjoint, || {
            format!("{name}: {verdict:?}")
        })?;
        let rep =
            regularity_verdict(&normalize(&sys, &tol).map_err(|e| e.to_string())?, &tol).map_err(|e| e.to_string())?;
        ensure(rep.regular == Some(true), || format!("{name}: not regular"))?;
        let thetas = [rep.theta_minus1.unwrap_or_default(), rep.theta_0, rep.theta_1];
        let expected = [1.0, 0.0, -1.0].map(|x| Complex64::new(x, 0.0));
        let scale = thetas.iter().map(|t| t.norm()).fold(0.0, f64::max);
        for (t, e) in thetas.iter().zip(&expected) {
            ensure((t - e).norm() <= 1e-10 * scale, || format!("{name}: thetas {thetas:?}"))?;
        }
    }
    // a·y(0) + b·y(1) = 0 on a 21 x 21 grid; (0, 0) is not a condition.
    let grid: Vec<f64> = (0..21).map(|k| (k as f64 - 10.0) / 10.0).collect();
    let mut cases = 0;
    for &a in &grid {
        for &b in &grid {
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let sys = BoundaryConditionSystem::from_real_rows(1, &[&[a, b]]).unwrap();
            let verdict = dissipativity_verdict(&sys, &tol)
                .map_err(|e| e.to_string())?
                .dissipative;
            let oracle = sample_dissipativity(&sys, 20, 9000, Execution::Sequential).map_err(|e| e.to_string())?;
            let expected = b.abs() >= a.abs();
            ensure(verdict == expected && oracle.all_nonnegative == expected, || {
                format!(
                    "(a, b) = ({a}, {b}): verdict {verdict}, oracle {}, expected {expected}",
                    oracle.all_nonnegative
                )
            })?;
            cases += 1;
        }
    }
    Ok(format!(
        "Dirichlet/Neumann thetas (1, 0, -1); transport grid {cases}/{cases} agree with |b| >= |a| and the oracle"
    ))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn criterion_10() -> Outcome {
    let mut inputs: Vec<PathBuf> = std::fs::read_dir(golden_dir())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && !p.to_string_lossy().ends_with(".check.json"))
        .collect();
    inputs.sort();
    ensure(!inputs.is_empty(), || "no golden inputs".into())?;
    for input in &inputs {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_bca"))
                .arg("check")
                .arg(input)
                .env_remove("BCA_TOL")
                .output()
                .map_err(|e| e.to_string())
        };
        let (first, second) = (run()?, run()?);
        ensure(first.status.success(), || {
            format!("{}: exit {:?}", input.display(), first.status.code())
        })?;
        ensure(first.stdout == second.stdout, || {
            format!("{}: reports differ", input.display())
        })?;
    }
    Ok(format!("{} golden inputs, byte-identical reports", inputs.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("boundary-form identity, exact", criterion_1),
        ("canonical-vector identity, exact", criterion_2),
        ("odd-order irregular dissipative family", criterion_3),
        ("duality of the two Gram tests", criterion_4),
        ("dissipative <=> contraction", criterion_5),
        ("even-order dissipative => regular", criterion_6),
        ("normalization invariants", criterion_7),
        ("structural rank and pairing properties", criterion_8),
        ("classical conditions", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2} s]", k + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.2} s]", k + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
