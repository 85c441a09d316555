use anyhow::Result;
use lucid_core::data::Dataset;
use lucid_core::scoring::{parse_signs, render_card, solve_lattice, CoefficientBounds, LatticeConfig, ScoringDoc, TrainingSummary};
use serde_json::json;

use super::{evaluation, mib, Status};
use crate::args::{LatticeArgs, RiskSlimArgs};
use crate::input::{data_params, load_data, training_split};
use crate::manifest::Run;

pub(crate) fn lattice_config(args: &LatticeArgs, ds: &Dataset) -> Result<LatticeConfig> {
    Ok(LatticeConfig {
        lambda: args.lambda,
        bounds: CoefficientBounds::coefficients(args.coef_min, args.coef_max),
        signs: match &args.signs {
            Some(s) => parse_signs(s, ds)?,
            None => Vec::new(),
        },
        sparsity_cap: args.sparsity_cap,
        ..LatticeConfig::default()
    })
}

pub fn train(args: &RiskSlimArgs) -> Result<(Status, Run)> {
    let l = &args.lattice;
    let params = json!({
        "data": data_params(&args.data),
        "test_frac": args.split.test_frac,
        "seed": args.split.seed,
        "threads": args.run.threads,
        "mem_budget_mib": args.run.mem_budget,
        "lambda": l.lambda,
        "coef_min": l.coef_min,
        "coef_max": l.coef_max,
        "sparsity_cap": l.sparsity_cap,
        "signs": l.signs,
        "max_nodes": args.max_nodes,
    });
    let mut run = Run::new("train-riskslim", params, &args.run.out_dir)?;
    let ds = load_data(&args.data, &mut run)?;
    let (train, held_out) = training_split(&ds, &args.split, &mut run)?;
    let cfg = LatticeConfig {
        max_nodes: args.max_nodes,
        mem_budget: mib(args.run.mem_budget),
        threads: args.run.threads,
        ..lattice_config(l, &train)?
    };
    let cert = solve_lattice(&train, &cfg)?;
    log::info!(
        "objective {:.6} with {} nonzero points ({}, gap {:.3e})",
        cert.objective,
        cert.system.sparsity(),
        if cert.optimal { "optimal" } else { "budget exhausted" },
        cert.gap
    );
    let summary = TrainingSummary::from(&cert);
    run.write_text("card.txt", &render_card(&cert.system, Some(&summary)))?;
    run.write_json("model.json", &serde_json::to_value(ScoringDoc::new(&cert.system, Some(summary)))?)?;
    run.write_json("certificate.json", &cert.to_json(false))?;
    let test = held_out.as_ref().map(|(t, _)| t);
    run.write_json("evaluation.json", &evaluation(&cert.system, &train, test)?)?;
    Ok((if cert.optimal { Status::Done } else { Status::Gap }, run))
}
