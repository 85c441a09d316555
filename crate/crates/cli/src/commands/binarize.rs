use anyhow::Result;
use lucid_core::data::write_cache_to;
use serde_json::json;

use super::Status;
use crate::args::BinarizeArgs;
use crate::input::{data_params, load_data};
use crate::manifest::Run;

pub fn run(args: &BinarizeArgs) -> Result<(Status, Run)> {
    let mut run = Run::new("binarize", json!({ "data": data_params(&args.data) }), &args.out_dir)?;
    let ds = load_data(&args.data, &mut run)?;
    let mut bytes = Vec::new();
    write_cache_to(&ds, &mut bytes)?;
    run.write_bytes("dataset.cache", &bytes)?;
    let mut text = format!("{} rows, {} positive, label `{}`\n", ds.n(), ds.positives(), ds.label_name());
    for (j, f) in ds.features().iter().enumerate() {
        let support = ds.column(j).count_ones();
        text.push_str(&format!("{j:4}  {:32}  {support} rows\n", f.name));
    }
    run.write_text("features.txt", &text)?;
    run.write_json(
        "features.json",
        &json!({
            "schema_version": lucid_core::SCHEMA_VERSION,
            "kind": "features",
            "rows": ds.n(),
            "positives": ds.positives(),
            "label": ds.label_name(),
            "features": ds.features(),
        }),
    )?;
    Ok((Status::Done, run))
}
