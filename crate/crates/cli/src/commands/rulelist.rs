use anyhow::Result;
use lucid_core::data::{mine_antecedents, Antecedent, Dataset, MiningConfig};
use lucid_core::rules::LabelNames;
use lucid_core::search::{
    enumerate_rashomon_constrained, resolve_with_constraints, FeatureConstraints, SearchConfig,
};
use serde_json::json;

use super::{evaluation, mib, Status};
use crate::args::{MiningArgs, RuleListArgs};
use crate::input::{data_params, load_data, training_split};
use crate::manifest::Run;

pub(crate) fn mining_config(args: &MiningArgs) -> MiningConfig {
    MiningConfig {
        max_cardinality: args.max_card,
        min_support: args.min_support,
        include_negations: !args.no_negations,
    }
}

pub(crate) fn mine(ds: &Dataset, args: &MiningArgs, run: &mut Run) -> Result<Vec<Antecedent>> {
    let ants = mine_antecedents(ds, &mining_config(args))?;
    log::info!("mined {} antecedents", ants.len());
    let names = ds.feature_names();
    let mut text = String::new();
    for (i, a) in ants.iter().enumerate() {
        text.push_str(&format!("{i:5}  {}  ({} rows)\n", a.render(&names), a.support.count_ones()));
    }
    run.write_text("antecedents.txt", &text)?;
    Ok(ants)
}

fn params(args: &RuleListArgs) -> serde_json::Value {
    json!({
        "data": data_params(&args.data),
        "test_frac": args.split.test_frac,
        "seed": args.split.seed,
        "threads": args.run.threads,
        "mem_budget_mib": args.run.mem_budget,
        "max_card": args.mining.max_card,
        "min_support": args.mining.min_support,
        "negations": !args.mining.no_negations,
        "lambda": args.lambda,
        "max_rules": args.max_rules,
        "epsilon": args.epsilon,
        "forbid": args.forbid,
        "require": args.require,
        "max_expansions": args.max_expansions,
        "max_models": args.max_models,
    })
}

fn search_config(args: &RuleListArgs) -> SearchConfig {
    SearchConfig {
        lambda: args.lambda,
        max_rules: args.max_rules,
        epsilon: args.epsilon,
        threads: args.run.threads,
        mem_budget: mib(args.run.mem_budget),
        max_expansions: args.max_expansions,
        max_models: args.max_models,
        ..SearchConfig::default()
    }
}

fn constraints(args: &RuleListArgs) -> FeatureConstraints {
    FeatureConstraints {
        forbid: args.forbid.clone(),
        require: args.require.clone(),
    }
}

fn rashomon_outputs(ds: &Dataset, ants: &[Antecedent], args: &RuleListArgs, run: &mut Run) -> Result<bool> {
    let set = enumerate_rashomon_constrained(ds, ants, &search_config(args), &constraints(args))?;
    log::info!("{} models within {} of the optimum", set.len(), set.epsilon);
    run.write_text("rashomon.txt", &set.render(&LabelNames::default()))?;
    run.write_json("rashomon.json", &set.to_json(false))?;
    Ok(set.complete && !set.truncated)
}

pub fn train(args: &RuleListArgs) -> Result<(Status, Run)> {
    let mut run = Run::new("train-rulelist", params(args), &args.run.out_dir)?;
    let ds = load_data(&args.data, &mut run)?;
    let (train, held_out) = training_split(&ds, &args.split, &mut run)?;
    let ants = mine(&train, &args.mining, &mut run)?;
    let constraints = constraints(args);
    let result = resolve_with_constraints(&train, &ants, &search_config(args), &constraints)?;
    let cert = &result.certificate;
    log::info!(
        "objective {} with {} rules ({})",
        cert.objective.to_f64(),
        cert.model.size(),
        if cert.optimal { "optimal" } else { "budget exhausted" }
    );
    let mut text = cert.render_model(&LabelNames::default());
    text.push_str(&format!(
        "\nobjective {} = {} errors / {} rows + {} x {} rules{}\n",
        cert.objective.value(),
        cert.objective.errors,
        cert.objective.n,
        cert.lambda,
        cert.objective.size,
        if cert.optimal { " (certified optimal)" } else { " (not certified; see gap)" }
    ));
    run.write_text("model.txt", &text)?;
    run.write_json("model.json", &serde_json::to_value(cert.model_doc())?)?;
    let certificate = if constraints.is_empty() { cert.to_json(false) } else { result.to_json(false) };
    run.write_json("certificate.json", &certificate)?;
    let test = held_out.as_ref().map(|(t, _)| t);
    run.write_json("evaluation.json", &evaluation(&cert.model, &train, test)?)?;
    let mut complete = cert.optimal;
    if !args.epsilon.is_zero() {
        complete &= rashomon_outputs(&train, &ants, args, &mut run)?;
    }
    Ok((if complete { Status::Done } else { Status::Gap }, run))
}

pub fn rashomon(args: &RuleListArgs) -> Result<(Status, Run)> {
    let mut run = Run::new("rashomon", params(args), &args.run.out_dir)?;
    let ds = load_data(&args.data, &mut run)?;
    let (train, _) = training_split(&ds, &args.split, &mut run)?;
    let ants = mine(&train, &args.mining, &mut run)?;
    let complete = rashomon_outputs(&train, &ants, args, &mut run)?;
    Ok((if complete { Status::Done } else { Status::Gap }, run))
}
