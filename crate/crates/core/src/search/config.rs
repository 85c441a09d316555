use crate::rational::Rational;

/// Order in which open prefixes are expanded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueueDiscipline {
    /// Smallest lower bound first, then shorter prefix, then lexicographic.
    #[default]
    BestFirst,
    /// Shorter prefix first, then smallest bound, then lexicographic.
    BreadthFirst,
}

/// Switches for the optional pruning rules. The hierarchical bound is
/// always on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BoundToggles {
    pub lookahead: bool,
    pub equivalent_points: bool,
    /// Minimum and accurate-minimum capture support, plus empty captures.
    pub support: bool,
    pub symmetry: bool,
}

impl Default for BoundToggles {
    fn default() -> Self {
        BoundToggles {
            lookahead: true,
            equivalent_points: true,
            support: true,
            symmetry: true,
        }
    }
}

impl BoundToggles {
    pub fn hierarchical_only() -> Self {
        BoundToggles {
            lookahead: false,
            equivalent_points: false,
            support: false,
            symmetry: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub lambda: Rational,
    /// Longest rule list considered (rules, not counting the default).
    pub max_rules: usize,
    /// Rashomon tolerance; 0 keeps only optimal models.
    pub epsilon: Rational,
    pub queue: QueueDiscipline,
    /// Worker threads; 0 uses the global pool. Results do not depend on it.
    pub threads: usize,
    /// Prefixes expanded per synchronous round.
    pub batch_size: usize,
    /// Approximate bytes of queued prefixes and symmetry memo before the
    /// search stops with a gap.
    pub mem_budget: Option<usize>,
    pub max_expansions: Option<u64>,
    /// Rashomon set size limit.
    pub max_models: usize,
    pub bounds: BoundToggles,
    /// Record the bounds of every evaluated prefix in the certificate.
    pub trace: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            lambda: Rational::new(1, 100).expect("nonzero denominator"),
            max_rules: 4,
            epsilon: Rational::zero(),
            queue: QueueDiscipline::BestFirst,
            threads: 0,
            batch_size: 32,
            mem_budget: None,
            max_expansions: None,
            max_models: 100_000,
            bounds: BoundToggles::default(),
            trace: false,
        }
    }
}

impl SearchConfig {
    pub fn with_lambda(lambda: Rational) -> Self {
        SearchConfig {
            lambda,
            ..Default::default()
        }
    }

    pub(crate) fn validate(&self) -> crate::Result<()> {
        if self.lambda.is_negative() {
            return Err(crate::Error::InvalidParameter(format!(
                "lambda must be non-negative, got {}",
                self.lambda
            )));
        }
        if self.epsilon.is_negative() {
            return Err(crate::Error::InvalidParameter(format!(
                "epsilon must be non-negative, got {}",
                self.epsilon
            )));
        }
        if self.batch_size == 0 {
            return Err(crate::Error::InvalidParameter("batch size must be positive".into()));
        }
        Ok(())
    }
}
