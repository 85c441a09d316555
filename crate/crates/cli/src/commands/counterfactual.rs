use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use lucid_core::data::{one_hot_groups, FeatureInfo};
use lucid_core::model::{AnyModel, Classifier, LoadedModel};
use lucid_core::recourse::{
    counterfactual_json, enumerate_counterfactuals, local_explanation_dnf, narrative, InstanceDoc, QueryDoc,
};
use lucid_core::rules::LabelNames;
use serde_json::json;

use super::Status;
use crate::args::CounterfactualArgs;
use crate::input::load;
use crate::manifest::Run;

fn parse_instance(text: &str) -> Result<Vec<u8>> {
    text.split(',')
        .map(|s| s.trim().parse::<u8>().with_context(|| format!("`{s}` is not 0 or 1")))
        .collect()
}

/// `name:cost` pairs; `inf` or `immutable` freezes a feature.
fn parse_costs(text: &str, doc: &mut QueryDoc) -> Result<()> {
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let Some((name, value)) = item.rsplit_once(':') else {
            bail!("expected `feature:cost`, got `{item}`");
        };
        let name = name.trim().to_string();
        match value.trim() {
            "inf" | "immutable" => doc.immutable.push(name),
            v => {
                let cost: f64 = v.parse().with_context(|| format!("`{v}` is not a cost"))?;
                doc.costs.insert(name, cost);
            }
        }
    }
    Ok(())
}

pub fn run(args: &CounterfactualArgs) -> Result<(Status, Run)> {
    let params = json!({
        "model": args.model.display().to_string(),
        "input": args.input.as_ref().map(|p| p.display().to_string()),
        "label_col": args.label_col,
        "positive": args.positive,
        "cutpoints": args.cutpoints,
        "query": args.query.as_ref().map(|p| p.display().to_string()),
        "instance": args.instance,
        "row": args.row,
        "target": args.target,
        "costs": args.costs,
        "budget": args.budget,
        "k": args.k,
        "irredundant": args.irredundant,
    });
    let mut run = Run::new("counterfactual", params, &args.out_dir)?;
    run.input(&args.model)?;
    let loaded = LoadedModel::load(&args.model)?;
    let ds = match &args.input {
        Some(path) => {
            let ds = load(path, args.label_col.as_deref(), &args.positive, args.cutpoints.as_deref(), &mut run)?;
            loaded.check_dataset(&ds).context("model and dataset features differ")?;
            Some(ds)
        }
        None => None,
    };
    let features: Vec<FeatureInfo> = match &ds {
        Some(ds) => ds.features().to_vec(),
        None => loaded.features.iter().map(FeatureInfo::binary).collect(),
    };

    let mut doc = match &args.query {
        Some(path) => {
            run.input(path)?;
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => QueryDoc {
            instance: InstanceDoc::Vector(Vec::new()),
            target: None,
            costs: BTreeMap::new(),
            immutable: Vec::new(),
            budget: None,
            k: None,
        },
    };
    if let Some(text) = &args.instance {
        doc.instance = InstanceDoc::Vector(parse_instance(text)?);
    } else if let Some(row) = args.row {
        let Some(ds) = &ds else { bail!("--row needs --input") };
        if row >= ds.n() {
            bail!("row {row} is out of range for {} rows", ds.n());
        }
        doc.instance = InstanceDoc::Vector(ds.row(row).into_iter().map(u8::from).collect());
    } else if args.query.is_none() {
        bail!("give the instance with --query, --instance or --row");
    }
    if args.target.is_some() {
        doc.target = args.target;
    }
    if let Some(costs) = &args.costs {
        parse_costs(costs, &mut doc)?;
    }
    if args.budget.is_some() {
        doc.budget = args.budget;
    }
    if args.k.is_some() {
        doc.k = args.k;
    }

    let model: &AnyModel = &loaded.model;
    let instance = doc.instance(&features)?;
    let prediction = model.predict(&instance)?;
    let query = doc.to_query(&features, one_hot_groups(&features), prediction)?;
    let k = doc.k.unwrap_or(1);
    let found = enumerate_counterfactuals(model, &query, k, args.irredundant)?;
    for cf in &found {
        let reached = model.predict(&cf.apply(&query.instance))?;
        assert_eq!(reached, query.target, "counterfactual does not reach the target");
    }

    let labels = LabelNames::default();
    let explanation = match model {
        AnyModel::Dnf(dnf) => Some(serde_json::to_value(local_explanation_dnf(dnf, &instance)?)?),
        _ => None,
    };
    let out = json!({
        "schema_version": lucid_core::SCHEMA_VERSION,
        "kind": "counterfactuals",
        "toolkit_version": lucid_core::VERSION,
        "model_kind": model.kind(),
        "instance": instance.iter().map(|&b| u8::from(b)).collect::<Vec<_>>(),
        "prediction": u8::from(prediction),
        "target": u8::from(query.target),
        "budget": query.budget,
        "k": k,
        "feasible": !found.is_empty(),
        "counterfactuals": found.iter().map(|cf| counterfactual_json(cf, &features, &labels)).collect::<Vec<_>>(),
        "explanation": explanation,
    });
    run.write_json("counterfactual.json", &out)?;
    let mut text = String::new();
    if found.is_empty() {
        text.push_str(&format!(
            "No change of at most {} features moves the prediction to {}.\n",
            query.budget,
            labels.get(query.target)
        ));
    }
    for cf in &found {
        text.push_str(&format!("{} (cost {})\n", narrative(cf, &features, &labels), cf.cost));
        for w in lucid_core::recourse::warnings(cf, &features) {
            text.push_str(&format!("  note: {w}\n"));
        }
    }
    run.write_text("counterfactual.txt", &text)?;
    print!("{text}");
    Ok((if found.is_empty() { Status::Infeasible } else { Status::Done }, run))
}
