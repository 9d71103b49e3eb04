//! Seeded fuzzing. Trials run in parallel and are collected in trial order,
//! so a summary depends only on the arguments.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use parcon_core::connectivity::{analyze, check_family_presentation, FamilyData, SubgroupFamily};
use parcon_core::flags::random_flag;
use parcon_core::sampling::{self, trial_seed};

use crate::commands::{adapt_checked, standard_lemma_data};
use crate::{to_document, CliError, CliResult, FuzzArgs, Lemma};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct FuzzFailure {
    pub trial: u64,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct FuzzSummary {
    pub family: String,
    pub trials: u64,
    pub seed: u64,
    pub standard_data: bool,
    /// Number of trials per component-group order.
    pub components: BTreeMap<u64, u64>,
    /// Trials that produced a full reduction trace.
    pub traces: u64,
    pub failures: Vec<FuzzFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct LemmaFuzzSummary {
    pub lemma: u8,
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub failures: Vec<FuzzFailure>,
}

pub(crate) fn run(args: &FuzzArgs) -> (Option<String>, CliResult<()>) {
    let result = match (args.family, args.lemma) {
        (Some(family), _) => fuzz_family(family, args).and_then(|s| {
            let n = s.failures.len();
            Ok((to_document(&s)?, n))
        }),
        (None, Some(lemma)) => fuzz_lemma(lemma, args).and_then(|s| {
            let n = s.failures.len();
            Ok((to_document(&s)?, n))
        }),
        (None, None) => unreachable!("clap requires a target"),
    };
    match result {
        Ok((doc, 0)) => (Some(doc), Ok(())),
        Ok((doc, n)) => (
            Some(doc),
            Err(CliError::Mismatch(format!("{n} fuzz trials failed"))),
        ),
        Err(e) => (None, Err(e)),
    }
}

struct TrialResult {
    components: u64,
    traced: bool,
}

pub fn fuzz_family(family: SubgroupFamily, args: &FuzzArgs) -> CliResult<FuzzSummary> {
    if matches!(family, SubgroupFamily::So { .. }) {
        return Err(CliError::Unsupported(
            "SO(n) is only decided on the standard flag; use analyze --witness so-standard".into(),
        ));
    }
    let outcomes: Vec<(u64, u64, Result<TrialResult, String>)> = (0..args.trials)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(args.seed, t);
            (t, s, family_trial(family, s, args.standard_data))
        })
        .collect();
    let mut summary = FuzzSummary {
        family: family.to_string(),
        trials: args.trials,
        seed: args.seed,
        standard_data: args.standard_data,
        components: BTreeMap::new(),
        traces: 0,
        failures: Vec::new(),
    };
    for (trial, seed, outcome) in outcomes {
        match outcome {
            Ok(r) => {
                *summary.components.entry(r.components).or_default() += 1;
                summary.traces += u64::from(r.traced);
            }
            Err(message) => summary.failures.push(FuzzFailure {
                trial,
                seed,
                message,
            }),
        }
    }
    Ok(summary)
}

fn family_trial(
    family: SubgroupFamily,
    seed: u64,
    standard_data: bool,
) -> Result<TrialResult, String> {
    let dim = family.ambient_dim();
    let f = random_flag(dim, seed);
    let data = if standard_data {
        FamilyData::standard(family)
    } else {
        FamilyData::random(family, &mut sampling::rng(trial_seed(seed, 1)))
    };
    let report = analyze(family, &f, &data).map_err(|e| e.to_string())?;
    check_family_presentation(family, &f, &data, &report.presentation)?;
    let connected = report.components == 1;
    if family.is_expected_connected() && !connected {
        return Err(format!(
            "{} components for a connected family",
            report.components
        ));
    }
    let traced = match &report.trace {
        Some(steps) => {
            if !connected {
                return Err("trace present for a disconnected verdict".into());
            }
            if steps.last().is_some_and(|s| s.dim > 1) {
                return Err("trace stops above dimension 1".into());
            }
            true
        }
        None => {
            if connected && family.is_expected_connected() {
                return Err("connected verdict without a reduction trace".into());
            }
            false
        }
    };
    if !connected && report.witness.is_none() {
        return Err("disconnected verdict without a witness".into());
    }
    Ok(TrialResult {
        components: report.components,
        traced,
    })
}

pub fn fuzz_lemma(lemma: Lemma, args: &FuzzArgs) -> CliResult<LemmaFuzzSummary> {
    let dim = args.dim.expect("clap requires --dim with --lemma");
    // validates the dimension once, before any trial
    standard_lemma_data(lemma, dim, args.u_dim)?;
    let outcomes: Vec<(u64, u64, Result<(), String>)> = (0..args.trials)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(args.seed, t);
            (
                t,
                s,
                lemma_trial(lemma, dim, args.u_dim, s, args.standard_data),
            )
        })
        .collect();
    let failures = outcomes
        .into_iter()
        .filter_map(|(trial, seed, r)| {
            r.err().map(|message| FuzzFailure {
                trial,
                seed,
                message,
            })
        })
        .collect();
    Ok(LemmaFuzzSummary {
        lemma: lemma.number(),
        dim,
        trials: args.trials,
        seed: args.seed,
        failures,
    })
}

fn lemma_trial(
    lemma: Lemma,
    dim: usize,
    u_dim: Option<usize>,
    seed: u64,
    standard_data: bool,
) -> Result<(), String> {
    let f = random_flag(dim, seed);
    let mut rng = sampling::rng(trial_seed(seed, 1));
    let m = u_dim.unwrap_or((trial_seed(seed, 2) % (dim as u64 + 1)) as usize);
    let data = if standard_data {
        standard_lemma_data(lemma, dim, Some(m)).map_err(|e| e.to_string())?
    } else {
        let family = match lemma {
            Lemma::Decomposition => SubgroupFamily::GlGl { m, n: dim - m },
            Lemma::Symplectic => SubgroupFamily::Sp { n: dim / 2 },
            Lemma::OddSymplectic => SubgroupFamily::SpOdd { n: dim / 2 },
        };
        FamilyData::random(family, &mut rng)
    };
    adapt_checked(&f, &data)
        .map(drop)
        .map_err(|e| e.to_string())
}
