//! Primary computations against their exhaustive counterparts, one record
//! per instance.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use parcon_core::charlattice::{
    component_group, point_count_mod_q, smith_normal_form, CharacterSystem,
};
use parcon_core::oracle::{
    brute_force_sp_odd, enumerate_sign_solutions, enumerate_torus_solutions,
    gcd_minor_invariant_factors, sp_odd_small_presentations,
};
use parcon_core::sampling::{self, trial_seed};
use parcon_core::Error;

use crate::{to_document, CliError, CliResult, OracleArgs, OracleCheck};

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct OracleReport {
    pub check: String,
    pub seed: u64,
    pub trials: u64,
    pub agreed: u64,
    pub mismatches: u64,
    pub instances: Vec<Value>,
}

pub(crate) fn run(args: &OracleArgs) -> (Option<String>, CliResult<()>) {
    let report = match build(args) {
        Ok(r) => r,
        Err(e) => return (None, Err(e)),
    };
    let doc = match to_document(&report) {
        Ok(d) => d,
        Err(e) => return (None, Err(e)),
    };
    if report.mismatches == 0 {
        (Some(doc), Ok(()))
    } else {
        let msg = format!(
            "{} of {} instances disagree",
            report.mismatches,
            report.instances.len()
        );
        (Some(doc), Err(CliError::Mismatch(msg)))
    }
}

/// One instance: whether both sides agree, and the record to print.
type Instance = (bool, Value);

fn build(args: &OracleArgs) -> CliResult<OracleReport> {
    let instances: Vec<Instance> = match args.check {
        OracleCheck::SnfVsMinors => trials(args, snf_instance)?,
        OracleCheck::PointcountVsEnumeration => {
            let q = args.q;
            trials(args, |seed| pointcount_instance(seed, q))?
        }
        OracleCheck::SignEnumeration => trials(args, sign_instance)?,
        OracleCheck::SpOddBruteforce => {
            let q = args.q.unwrap_or(2);
            let cap = usize::try_from(args.trials).unwrap_or(usize::MAX);
            let presentations: Vec<_> =
                sp_odd_small_presentations().into_iter().take(cap).collect();
            presentations
                .par_iter()
                .enumerate()
                .map(|(i, p)| -> CliResult<Instance> {
                    let count = brute_force_sp_odd(q, p)?;
                    let ok = count.agrees();
                    Ok((
                        ok,
                        json!({ "instance": i, "agree": ok, "v_tags": p.v_tags, "counts": count }),
                    ))
                })
                .collect::<CliResult<_>>()?
        }
    };
    let agreed = instances.iter().filter(|(ok, _)| *ok).count() as u64;
    Ok(OracleReport {
        check: serde_json::to_value(args.check)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default(),
        seed: args.seed,
        trials: args.trials,
        agreed,
        mismatches: instances.len() as u64 - agreed,
        instances: instances.into_iter().map(|(_, v)| v).collect(),
    })
}

/// Runs `one` on every trial seed in parallel, keeping trial order; the
/// first error in trial order wins.
fn trials<F>(args: &OracleArgs, one: F) -> CliResult<Vec<Instance>>
where
    F: Fn(u64) -> CliResult<Instance> + Sync,
{
    (0..args.trials)
        .into_par_iter()
        .map(|t| {
            let (ok, mut record) = one(trial_seed(args.seed, t))?;
            record["trial"] = json!(t);
            Ok((ok, record))
        })
        .collect()
}

fn random_rows(seed: u64, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    use rand::Rng;
    let mut rng = sampling::rng(seed);
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| rng.random_range(-bound..=bound))
                .collect()
        })
        .collect()
}

/// Small draws from the trial seed itself, kept apart from the entry stream.
fn pick(seed: u64, salt: u64, lo: u64, hi: u64) -> u64 {
    lo + trial_seed(seed, salt) % (hi - lo + 1)
}

fn snf_instance(seed: u64) -> CliResult<Instance> {
    let rows = pick(seed, 1, 1, 6) as usize;
    let cols = pick(seed, 2, 1, 6) as usize;
    let m = random_rows(seed, rows, cols, 9);
    let primary = smith_normal_form(&m, cols).factors;
    let oracle = gcd_minor_invariant_factors(&m, cols);
    let ok = primary == oracle;
    Ok((
        ok,
        json!({ "agree": ok, "matrix": m, "elimination": primary, "minors": oracle }),
    ))
}

fn system(n: usize, rows: Vec<Vec<i64>>) -> CliResult<CharacterSystem> {
    CharacterSystem::new(n, rows).map_err(|e: Error| CliError::Internal(e.to_string()))
}

fn pointcount_instance(seed: u64, q: Option<u64>) -> CliResult<Instance> {
    const FIELDS: [u64; 4] = [2, 3, 5, 7];
    let q = q.unwrap_or(FIELDS[pick(seed, 3, 0, 3) as usize]);
    let n = pick(seed, 1, 1, 4) as usize;
    let r = pick(seed, 2, 0, 4) as usize;
    let s = system(n, random_rows(seed, r, n, 3))?;
    let oracle = enumerate_torus_solutions(&s, q)?;
    let primary = point_count_mod_q(&s, q);
    let ok = primary == u128::from(oracle);
    Ok((
        ok,
        json!({ "agree": ok, "q": q, "system": s, "formula": primary.to_string(), "enumeration": oracle }),
    ))
}

/// A system containing `2e_i` for every `i`, so every solution is a sign
/// vector and the group is finite of order equal to the solution count.
fn sign_instance(seed: u64) -> CliResult<Instance> {
    let n = pick(seed, 1, 1, 6) as usize;
    let extra = pick(seed, 2, 0, 3) as usize;
    let mut rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 2 } else { 0 }).collect())
        .collect();
    rows.extend(random_rows(seed, extra, n, 3));
    let s = system(n, rows)?;
    let oracle = enumerate_sign_solutions(&s)?;
    let primary = component_group(&s).order;
    let ok = primary == oracle;
    Ok((
        ok,
        json!({ "agree": ok, "system": s, "component_order": primary, "sign_solutions": oracle }),
    ))
}
