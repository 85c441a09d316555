use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::bitvec::BitVector;
use crate::data::dataset::{Dataset, FeatureInfo, FeatureKind};
use crate::data::raw::{Column, ColumnKind, RawTable};
use crate::error::{Error, Result};

/// Per-column binarization directives.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ColumnSpec {
    /// Number of equal-mass bins; thresholds at the inner lower quantiles.
    pub quantiles: Option<usize>,
    /// Explicit `x <= t` thresholds; overrides quantiles.
    pub cutpoints: Option<Vec<f64>>,
    /// Closed intervals `lo <= x <= hi`, emitted in addition to thresholds.
    pub intervals: Option<Vec<(f64, f64)>>,
    /// One-hot encode this column by value even if it parses as numeric.
    pub categorical: bool,
    pub skip: bool,
}

impl ColumnSpec {
    fn requests_numeric(&self) -> bool {
        self.quantiles.is_some() || self.cutpoints.is_some() || self.intervals.is_some()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BinarizationConfig {
    /// Bins used for numeric columns without explicit directives.
    pub default_quantiles: usize,
    pub columns: BTreeMap<String, ColumnSpec>,
}

impl Default for BinarizationConfig {
    fn default() -> Self {
        BinarizationConfig {
            default_quantiles: 4,
            columns: BTreeMap::new(),
        }
    }
}

impl BinarizationConfig {
    pub fn column_mut(&mut self, name: &str) -> &mut ColumnSpec {
        self.columns.entry(name.to_string()).or_default()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Parses the key/value config format:
    ///
    /// ```text
    /// # comment
    /// default.quantiles = 4
    /// age.intervals = 18..20, 21..23
    /// age.cutpoints = 20, 25, 30
    /// priors_count = 0, 1, 3        # bare column name means cutpoints
    /// juv_fel_count.quantiles = 2
    /// sex.categorical = true
    /// race.skip = true
    /// ```
    ///
    /// A plain number list for `intervals` yields one interval per
    /// consecutive pair of sorted bounds.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = BinarizationConfig::default();
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::Config {
                line: line_no,
                message,
            };
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let (column, attr) = match key.rsplit_once('.') {
                Some((c, a))
                    if matches!(a, "quantiles" | "cutpoints" | "intervals" | "categorical" | "skip") =>
                {
                    (c, a)
                }
                _ => (key, "cutpoints"),
            };
            if column.is_empty() {
                return Err(err("empty column name".into()));
            }
            if column == "default" || column == "*" {
                if attr != "quantiles" {
                    return Err(err(format!("only `quantiles` may be set on `{column}`")));
                }
                cfg.default_quantiles = parse_quantiles(value).map_err(err)?;
                continue;
            }
            let spec = cfg.column_mut(column);
            match attr {
                "quantiles" => spec.quantiles = Some(parse_quantiles(value).map_err(err)?),
                "cutpoints" => spec.cutpoints = Some(parse_numbers(value).map_err(err)?),
                "intervals" => spec.intervals = Some(parse_intervals(value).map_err(err)?),
                "categorical" => spec.categorical = parse_bool(value).map_err(err)?,
                "skip" => spec.skip = parse_bool(value).map_err(err)?,
                _ => unreachable!(),
            }
        }
        Ok(cfg)
    }
}

fn items(value: &str) -> impl Iterator<Item = &str> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
}

fn parse_number(s: &str) -> std::result::Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("`{s}` is not a number"))
}

fn parse_numbers(value: &str) -> std::result::Result<Vec<f64>, String> {
    let v: Vec<f64> = items(value).map(parse_number).collect::<std::result::Result<_, _>>()?;
    if v.is_empty() {
        return Err("empty number list".into());
    }
    Ok(v)
}

fn parse_quantiles(value: &str) -> std::result::Result<usize, String> {
    match value.parse::<usize>() {
        Ok(q) if q >= 2 => Ok(q),
        _ => Err(format!("quantile count must be an integer >= 2, got `{value}`")),
    }
}

fn parse_bool(value: &str) -> std::result::Result<bool, String> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true/false, got `{value}`")),
    }
}

fn parse_intervals(value: &str) -> std::result::Result<Vec<(f64, f64)>, String> {
    let toks: Vec<&str> = items(value).collect();
    if toks.iter().any(|t| t.contains("..")) {
        toks.iter()
            .map(|t| {
                let (lo, hi) = t
                    .split_once("..")
                    .ok_or_else(|| format!("expected `lo..hi`, got `{t}`"))?;
                let (lo, hi) = (parse_number(lo)?, parse_number(hi)?);
                if lo > hi {
                    return Err(format!("empty interval `{t}`"));
                }
                Ok((lo, hi))
            })
            .collect()
    } else {
        let mut bounds = parse_numbers(value)?;
        if bounds.len() < 2 {
            return Err("need at least two interval bounds".into());
        }
        bounds.sort_by(f64::total_cmp);
        bounds.dedup();
        Ok(bounds.windows(2).map(|w| (w[0], w[1])).collect())
    }
}

/// Inner lower quantiles `Q(k/bins)`, `k = 1..bins`, deduplicated.
///
/// `Q(q)` is the smallest sample value `v` with `#{x <= v} >= q * n`.
pub fn lower_quantiles(values: &[f64], bins: usize) -> Vec<f64> {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if sorted.is_empty() || bins < 2 {
        return Vec::new();
    }
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut out: Vec<f64> = (1..bins)
        .map(|k| {
            // ceil(k * n / bins) - 1, at least 0
            let idx = (k * n).div_ceil(bins).max(1) - 1;
            sorted[idx]
        })
        .collect();
    out.dedup();
    out
}

/// Renders a cutpoint without a trailing `.0` for integral values.
pub(crate) fn fmt_num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Turns a raw table into binary features.
///
/// Constant features are dropped. Missing numeric entries fail every
/// threshold and interval feature of their column; any column with a
/// missing entry also yields a `"<column> missing"` feature.
pub fn binarize(raw: &RawTable, config: &BinarizationConfig) -> Result<Dataset> {
    for name in config.columns.keys() {
        if raw.column(name).is_none() {
            return Err(Error::Binarize {
                column: name.clone(),
                message: "not present in the table".into(),
            });
        }
    }
    let n = raw.n();
    let default_spec = ColumnSpec::default();
    let mut features = Vec::new();
    let mut columns = Vec::new();

    for (name, col) in raw.names().iter().zip(raw.columns()) {
        let spec = config.columns.get(name).unwrap_or(&default_spec);
        if spec.skip {
            continue;
        }
        let mut emitted: Vec<(FeatureInfo, BitVector)> = Vec::new();
        match col {
            Column::Categorical(values) => {
                if spec.requests_numeric() {
                    return Err(Error::Binarize {
                        column: name.clone(),
                        message: "quantiles, cutpoints or intervals requested on a categorical column"
                            .into(),
                    });
                }
                one_hot(name, values.iter().map(|v| v.clone()), n, &mut emitted);
            }
            Column::Numeric(values) if spec.categorical => {
                if spec.requests_numeric() {
                    return Err(Error::Binarize {
                        column: name.clone(),
                        message: "column is marked categorical but also has numeric directives".into(),
                    });
                }
                one_hot(name, values.iter().map(|v| v.map(fmt_num)), n, &mut emitted);
            }
            Column::Numeric(values) => {
                if col.kind() == ColumnKind::Binary && !spec.requests_numeric() {
                    emitted.push((
                        FeatureInfo {
                            name: name.clone(),
                            column: name.clone(),
                            kind: FeatureKind::Binary,
                        },
                        BitVector::from_fn(n, |i| values[i] == Some(1.0)),
                    ));
                } else {
                    numeric_features(name, values, spec, config.default_quantiles, &mut emitted);
                }
            }
        }
        if (0..n).any(|i| col.is_missing(i)) {
            emitted.push((
                FeatureInfo {
                    name: format!("{name} missing"),
                    column: name.clone(),
                    kind: FeatureKind::Missing,
                },
                BitVector::from_fn(n, |i| col.is_missing(i)),
            ));
        }
        for (info, bits) in emitted {
            let ones = bits.count_ones();
            if ones == 0 || ones == n {
                continue;
            }
            features.push(info);
            columns.push(bits);
        }
    }
    Dataset::new(
        features,
        columns,
        BitVector::from_bools(raw.label()),
        raw.label_name(),
    )
}

fn one_hot(
    name: &str,
    values: impl Iterator<Item = Option<String>>,
    n: usize,
    out: &mut Vec<(FeatureInfo, BitVector)>,
) {
    let values: Vec<Option<String>> = values.collect();
    let levels: BTreeSet<&str> = values.iter().flatten().map(String::as_str).collect();
    for level in levels {
        out.push((
            FeatureInfo {
                name: format!("{name}={level}"),
                column: name.to_string(),
                kind: FeatureKind::Category {
                    value: level.to_string(),
                },
            },
            BitVector::from_fn(n, |i| values[i].as_deref() == Some(level)),
        ));
    }
}

fn numeric_features(
    name: &str,
    values: &[Option<f64>],
    spec: &ColumnSpec,
    default_quantiles: usize,
    out: &mut Vec<(FeatureInfo, BitVector)>,
) {
    let n = values.len();
    let mut thresholds = match &spec.cutpoints {
        Some(c) => c.clone(),
        None => {
            let present: Vec<f64> = values.iter().flatten().copied().collect();
            lower_quantiles(&present, spec.quantiles.unwrap_or(default_quantiles))
        }
    };
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    for t in thresholds {
        out.push((
            FeatureInfo {
                name: format!("{name}<={}", fmt_num(t)),
                column: name.to_string(),
                kind: FeatureKind::Threshold { threshold: t },
            },
            BitVector::from_fn(n, |i| values[i].is_some_and(|x| x <= t)),
        ));
    }
    if let Some(intervals) = &spec.intervals {
        let mut seen = BTreeSet::new();
        for &(lo, hi) in intervals {
            let label = format!("{name} in [{},{}]", fmt_num(lo), fmt_num(hi));
            if !seen.insert(label.clone()) {
                continue;
            }
            out.push((
                FeatureInfo {
                    name: label,
                    column: name.to_string(),
                    kind: FeatureKind::Interval { lo, hi },
                },
                BitVector::from_fn(n, |i| values[i].is_some_and(|x| lo <= x && x <= hi)),
            ));
        }
    }
}
