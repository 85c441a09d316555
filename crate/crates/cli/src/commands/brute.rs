use anyhow::{bail, Result};
use lucid_core::rules::json::RuleListDoc;
use lucid_core::rules::LabelNames;
use lucid_core::scoring::brute::exhaustive_lattice;
use lucid_core::search::brute::{best, evaluate_all};
use serde_json::json;

use super::Status;
use crate::args::{BruteForceArgs, BruteKind, LatticeArgs};
use crate::commands::riskslim::lattice_config;
use crate::commands::rulelist::mine;
use crate::input::{data_params, load_data};
use crate::manifest::Run;

/// Rule lists of at most `max_rules` distinct antecedents out of `m`.
fn list_count(m: u64, max_rules: usize) -> Option<u64> {
    let mut total = 1u64;
    let mut term = 1u64;
    for k in 0..max_rules as u64 {
        if k >= m {
            break;
        }
        term = term.checked_mul(m - k)?;
        total = total.checked_add(term)?;
    }
    Some(total)
}

pub fn run(args: &BruteForceArgs) -> Result<(Status, Run)> {
    let params = json!({
        "data": data_params(&args.data),
        "kind": format!("{:?}", args.kind).to_lowercase(),
        "max_card": args.mining.max_card,
        "min_support": args.mining.min_support,
        "negations": !args.mining.no_negations,
        "lambda": args.lambda,
        "max_rules": args.max_rules,
        "coef_min": args.coef_min,
        "coef_max": args.coef_max,
        "sparsity_cap": args.sparsity_cap,
        "signs": args.signs,
        "max_candidates": args.max_candidates,
    });
    let mut run = Run::new("brute-force", params, &args.out_dir)?;
    let ds = load_data(&args.data, &mut run)?;
    match args.kind {
        BruteKind::Rulelist => {
            let ants = mine(&ds, &args.mining, &mut run)?;
            match list_count(ants.len() as u64, args.max_rules) {
                Some(c) if c <= args.max_candidates => {}
                _ => bail!(
                    "{} antecedents with up to {} rules exceed {} candidate lists",
                    ants.len(),
                    args.max_rules,
                    args.max_candidates
                ),
            }
            let lists = evaluate_all(&ds, &ants, args.lambda, args.max_rules)?;
            let b = best(&lists).expect("the empty list is always evaluated");
            let features: Vec<String> = ds.feature_names().iter().map(|s| s.to_string()).collect();
            let names: Vec<&str> = ds.feature_names();
            let mut text = b.model.render(&names, &LabelNames::default());
            text.push_str(&format!("\nobjective {} over {} lists\n", b.objective.value(), lists.len()));
            run.write_text("brute.txt", &text)?;
            run.write_json(
                "brute.json",
                &json!({
                    "schema_version": lucid_core::SCHEMA_VERSION,
                    "kind": "rule_list_brute_force",
                    "toolkit_version": lucid_core::VERSION,
                    "objective": b.objective,
                    "antecedents": b.antecedents,
                    "lists_evaluated": lists.len(),
                    "model": RuleListDoc::new(&b.model, &features, Some(args.lambda), Some(&b.objective)),
                }),
            )?;
        }
        BruteKind::Lattice => {
            let lattice = LatticeArgs {
                lambda: args.lambda,
                coef_min: args.coef_min,
                coef_max: args.coef_max,
                sparsity_cap: args.sparsity_cap,
                signs: args.signs.clone(),
            };
            let cfg = lattice_config(&lattice, &ds)?;
            let opt = exhaustive_lattice(&ds, &cfg, args.max_candidates)?;
            let text = format!(
                "intercept {}\ncoefficients {:?}\nobjective {:.12} over {} points\n",
                opt.coefficients[0],
                &opt.coefficients[1..],
                opt.objective,
                opt.points
            );
            run.write_text("brute.txt", &text)?;
            run.write_json(
                "brute.json",
                &json!({
                    "schema_version": lucid_core::SCHEMA_VERSION,
                    "kind": "lattice_brute_force",
                    "toolkit_version": lucid_core::VERSION,
                    "objective": opt.objective,
                    "intercept": opt.coefficients[0],
                    "coefficients": &opt.coefficients[1..],
                    "features": ds.feature_names(),
                    "points": opt.points,
                }),
            )?;
        }
    }
    Ok((Status::Done, run))
}
