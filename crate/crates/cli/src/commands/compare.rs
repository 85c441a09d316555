use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{Context, Result};
use lucid_core::eval::{compare, load_predictions, split, Candidate};
use lucid_core::model::{AnyModel, LoadedModel};
use lucid_core::scoring::{round_logreg_baseline, CoefficientBounds};
use lucid_core::Rational;
use serde_json::json;

use super::Status;
use crate::args::CompareArgs;
use crate::input::{data_params, load_data};
use crate::manifest::Run;

/// The file stem, or `parent/stem` when the stem is already taken.
fn unique_name(path: &Path, taken: &mut BTreeSet<String>) -> String {
    let stem = path.file_stem().map_or("model".into(), |s| s.to_string_lossy().into_owned());
    let qualified = match path.parent().and_then(Path::file_name) {
        Some(dir) => format!("{}/{stem}", dir.to_string_lossy()),
        None => stem.clone(),
    };
    let mut name = stem;
    if taken.contains(&name) {
        name = qualified.clone();
    }
    let mut i = 2;
    while !taken.insert(name.clone()) {
        name = format!("{qualified}#{i}");
        i += 1;
    }
    name
}

pub fn run(args: &CompareArgs) -> Result<(Status, Run)> {
    let params = json!({
        "data": data_params(&args.data),
        "test_frac": args.test_frac,
        "seed": args.seed,
        "threads": args.threads,
        "model": args.model.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "baseline": args.baseline.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "logreg_baseline": args.logreg_baseline,
        "coef_min": args.coef_min,
        "coef_max": args.coef_max,
        "margin": args.margin,
    });
    let mut run = Run::new("compare", params, &args.out_dir)?;
    run.seed(args.seed);
    let ds = load_data(&args.data, &mut run)?;
    let s = split(&ds, args.test_frac, args.seed)?;

    let mut taken = BTreeSet::new();
    let mut candidates = Vec::new();
    for path in &args.model {
        run.input(path)?;
        let loaded = LoadedModel::load(path)?;
        loaded.check_dataset(&ds).with_context(|| format!("{}: features differ from the dataset", path.display()))?;
        candidates.push(Candidate::model(unique_name(path, &mut taken), loaded.model, true));
    }
    for path in &args.baseline {
        run.input(path)?;
        let name = unique_name(path, &mut taken);
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            candidates.push(Candidate::predictions(name, load_predictions(path)?));
        } else {
            let loaded = LoadedModel::load(path)?;
            loaded.check_dataset(&ds).with_context(|| format!("{}: features differ from the dataset", path.display()))?;
            candidates.push(Candidate::model(name, loaded.model, false));
        }
    }
    if args.logreg_baseline {
        let train = ds.select_rows(&s.train);
        let bounds = CoefficientBounds::coefficients(args.coef_min, args.coef_max);
        let baseline = round_logreg_baseline(&train, &bounds, Rational::zero())?;
        let mut name = "rounded-logreg".to_string();
        if !taken.insert(name.clone()) {
            name.push_str("#2");
        }
        candidates.push(Candidate::model(name, AnyModel::Scoring(baseline.system), false));
    }
    let report = lucid_core::par::with_threads(args.threads, || compare(&candidates, &ds, &s, args.margin))?;
    let text = report.render();
    run.write_text("compare.txt", &text)?;
    run.write_json("compare.json", &report.to_json())?;
    print!("{text}");
    Ok((Status::Done, run))
}
