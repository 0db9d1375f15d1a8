use std::path::Path;

use bca_core::conditions::PairingDefect;
use bca_core::polyoracle::{
    rational_to_f64, sample_dissipativity, verify_boundary_form_identity, verify_canonical_identity, IdentityReport,
};
use bca_core::{
    dissipativity_verdict, from_contraction, normalize, normalize_with, regularity_verdict, selfadjoint_verdict,
    structural_report, to_contraction, BcError, BoundaryConditionSystem, ComplexMatrix, ContractionParametrization,
    DissipativityVerdict, Execution, NormalizeOptions, NormalizedSystem, RegularityReport, TolerancePolicy,
};
use serde_json::{json, Value};

use crate::input::{parse_conditions, parse_contraction, parse_json};
use crate::output::{complex, conditions, matrix, num, sha256_hex, stamp};
use crate::{Cli, CliError, Command, ExampleName};

/// Largest order the exact oracle accepts.
const ORACLE_MAX_ORDER: usize = 8;

struct Loaded {
    doc: Value,
    digest: String,
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| CliError::Input(format!("{}: not UTF-8", path.display())))?;
    Ok(Loaded {
        doc: parse_json(text)?,
        digest: sha256_hex(&bytes),
    })
}

pub fn execute(cli: &Cli, tol: &TolerancePolicy) -> Result<Value, CliError> {
    let conditions_of = |path: &Path| -> Result<(BoundaryConditionSystem, String), CliError> {
        let loaded = load(path)?;
        let sys = parse_conditions(&loaded.doc)?;
        sys.validate(tol)?;
        Ok((sys, loaded.digest))
    };
    let (body, digest) = match &cli.command {
        Command::Normalize { file, canonical } => {
            let (sys, digest) = conditions_of(file)?;
            let norm = normalize_with(&sys, tol, NormalizeOptions { canonical: *canonical })?;
            (normalized_json(&norm), Some(digest))
        }
        Command::Check { file } => {
            let (sys, digest) = conditions_of(file)?;
            (check(&sys, tol, cli.seed, cli.samples)?, Some(digest))
        }
        Command::Dissipative { file } => {
            let (sys, digest) = conditions_of(file)?;
            (verdict_json(&dissipativity_verdict(&sys, tol)?), Some(digest))
        }
        Command::Regular { file } => {
            let (sys, digest) = conditions_of(file)?;
            let norm = normalize(&sys, tol)?;
            let rep = regularity_verdict(&norm, tol)?;
            (
                json!({"m": sys.m(), "orders": norm.orders(), "regularity": regularity_json(&rep)}),
                Some(digest),
            )
        }
        Command::Selfadjoint { file } => {
            let (sys, digest) = conditions_of(file)?;
            (
                json!({"m": sys.m(), "selfadjoint": selfadjoint_verdict(&sys, tol)?}),
                Some(digest),
            )
        }
        Command::ToContraction { file } => {
            let (sys, digest) = conditions_of(file)?;
            (contraction_json(&sys, tol)?, Some(digest))
        }
        Command::FromContraction { file } => {
            let loaded = load(file)?;
            let param = ContractionParametrization::new(parse_contraction(&loaded.doc)?)?;
            let sys = from_contraction(&param)?;
            (
                json!({"m": sys.m(), "conditions": conditions(&sys)}),
                Some(loaded.digest),
            )
        }
        Command::Verify { m } => (verify(*m, cli.samples, cli.seed)?, None),
        Command::Example { name, n } => {
            let sys = match name {
                ExampleName::OddIrregular => odd_irregular_example(*n)?,
            };
            (json!({"m": sys.m(), "conditions": conditions(&sys)}), None)
        }
    };
    Ok(stamp(body, tol, digest.as_deref()))
}

/// `y^(2n−2)(0) = y^(2n−2)(1) = … = y^(n)(0) = y^(n)(1) = y^(n−1)(1) = 0` for `m = 2n − 1`:
/// dissipative, with `θ₀ = 0`, so not regular.
pub fn odd_irregular_example(n: usize) -> Result<BoundaryConditionSystem, CliError> {
    if !(1..=32).contains(&n) {
        return Err(CliError::Input(format!("n: expected an integer in 1..=32, got {n}")));
    }
    let m = 2 * n - 1;
    let mut c = ComplexMatrix::zeros(m, 2 * m);
    let mut row = 0;
    for d in (n..=2 * n - 2).rev() {
        c[(row, d)] = 1.0.into();
        c[(row + 1, m + d)] = 1.0.into();
        row += 2;
    }
    c[(row, m + n - 1)] = 1.0.into();
    Ok(BoundaryConditionSystem::new(m, c)?)
}

fn verdict_json(v: &DissipativityVerdict) -> Value {
    json!({
        "dissipative": v.dissipative,
        "selfadjoint": v.selfadjoint,
        "gram_classification": v.classification.as_str(),
        "gram_eigenvalues": v.gram_eigenvalues.iter().map(|&x| num(x)).collect::<Vec<_>>(),
    })
}

fn normalized_json(norm: &NormalizedSystem) -> Value {
    json!({
        "m": norm.m(),
        "conditions": conditions(norm.base()),
        "orders": norm.orders(),
        "leading": norm.leading().iter().map(|&(a, b)| json!([complex(a), complex(b)])).collect::<Vec<_>>(),
    })
}

fn regularity_json(rep: &RegularityReport) -> Value {
    json!({
        "theta_minus1": rep.theta_minus1.map(complex),
        "theta_0": complex(rep.theta_0),
        "theta_1": complex(rep.theta_1),
        "scale": num(rep.scale),
        "regular": rep.regular,
        "regular_strict": rep.regular_strict,
    })
}

fn pairing_json(d: &PairingDefect) -> Value {
    json!({"order": d.order, "partner_order": d.partner_order, "defect": num(d.defect), "scale": num(d.scale)})
}

fn contraction_json(sys: &BoundaryConditionSystem, tol: &TolerancePolicy) -> Result<Value, CliError> {
    match to_contraction(sys, tol) {
        Ok(param) => Ok(json!({
            "m": sys.m(),
            "dissipative": true,
            "V": matrix(&param.display_matrix()),
            "norm": num(param.norm()),
        })),
        Err(BcError::NotDissipative) => Ok(json!({"m": sys.m(), "dissipative": false, "V": null, "norm": null})),
        Err(e) => Err(e.into()),
    }
}

fn check(sys: &BoundaryConditionSystem, tol: &TolerancePolicy, seed: u64, samples: usize) -> Result<Value, CliError> {
    let m = sys.m();
    let verdict = dissipativity_verdict(sys, tol)?;
    let norm = normalize(sys, tol)?;
    let reg = regularity_verdict(&norm, tol)?;
    let structure = if m.is_multiple_of(2) {
        let rep = structural_report(&norm)?;
        json!({
            "rank_sums": rep.rank_sums,
            "pairing_defects": rep.pairing_defects.iter().map(pairing_json).collect::<Vec<_>>(),
        })
    } else {
        Value::Null
    };
    let oracle = if m <= ORACLE_MAX_ORDER && samples > 0 {
        let rep = sample_dissipativity(sys, samples, seed, Execution::Parallel)?;
        json!({
            "seed": seed,
            "samples": rep.samples,
            "all_nonnegative": rep.all_nonnegative,
            "min_im_l0": rep.min_value.to_string(),
            "min_im_l0_approx": num(rational_to_f64(&rep.min_value)),
        })
    } else {
        Value::Null
    };
    let contraction = contraction_json(sys, tol)?;
    Ok(json!({
        "m": m,
        "verdicts": {
            "dissipative": verdict.dissipative,
            "selfadjoint": verdict.selfadjoint,
            "regular": reg.regular,
            "regular_strict": reg.regular_strict,
        },
        "dissipativity": verdict_json(&verdict),
        "orders": norm.orders(),
        "normalized": normalized_json(&norm),
        "regularity": regularity_json(&reg),
        "structure": structure,
        "contraction": contraction,
        "oracle": oracle,
    }))
}

fn identity_json(rep: &IdentityReport) -> Value {
    json!({"passed": rep.passed, "samples": rep.samples, "max_defect": rep.max_defect.to_string()})
}

fn verify(m: usize, samples: usize, seed: u64) -> Result<Value, CliError> {
    let form = verify_boundary_form_identity(m, samples, seed, Execution::Parallel)?;
    let canonical = verify_canonical_identity(m, samples, seed, Execution::Parallel)?;
    Ok(json!({
        "m": m,
        "seed": seed,
        "samples": samples,
        "passed": form.passed && canonical.passed,
        "boundary_form_identity": identity_json(&form),
        "canonical_identity": identity_json(&canonical),
    }))
}
