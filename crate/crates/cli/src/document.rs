//! The JSON result document and its re-validation.

use diverse_medians::candidate::CostClass;
use diverse_medians::metrics;
use diverse_medians::mindisp::PlotkinBound;
use diverse_medians::oracle::EnumerationLimits;
use diverse_medians::{Alphabet, Dataset, Rational, Sym};
use serde::{Deserialize, Serialize};

use crate::config::{Format, Objective, RunConfig, Strategy};

pub const SCHEMA: &str = "diverse-medians/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub input: Option<String>,
    pub format: Format,
    pub objective: Objective,
    pub strategy: Strategy,
    pub epsilon: Rational,
    pub k: usize,
    pub delta: Rational,
    pub eta: Rational,
    pub seed: u64,
    pub alphabet: Option<String>,
    pub lp: bool,
    pub linear_scan: bool,
    pub distinct: bool,
    pub t: Option<u64>,
    pub sizes: Option<String>,
    pub limits: EnumerationLimits,
}

impl From<&RunConfig> for ConfigEcho {
    fn from(c: &RunConfig) -> Self {
        ConfigEcho {
            input: c.input.as_ref().map(|p| p.display().to_string()),
            format: c.format,
            objective: c.objective,
            strategy: c.strategy,
            epsilon: c.epsilon,
            k: c.k,
            delta: c.delta,
            eta: c.eta,
            seed: c.seed,
            alphabet: c.alphabet.clone(),
            lp: c.lp,
            linear_scan: c.linear_scan,
            distinct: c.distinct,
            t: c.t,
            sizes: c.sizes.clone(),
            limits: c.limits(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub n: usize,
    pub d: usize,
    pub alphabet_size: usize,
    /// Symbols in tie-break order.
    pub alphabet: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectiveValue {
    pub name: String,
    pub value: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlotkinCertificate {
    pub alphabet_sizes: Vec<usize>,
    pub plotkin_sum: String,
    pub t: u64,
    pub max_code_size: PlotkinBound,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    pub plotkin: Option<PlotkinCertificate>,
    /// Upper bound `4(1+ε)opt/n` on the best achievable min dispersion.
    pub tstar_upper: Option<Rational>,
    pub lp_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleValues {
    pub pool_size: usize,
    pub diameter: u64,
    pub sum_dispersion: u64,
    pub min_dispersion: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema: String,
    pub config: ConfigEcho,
    pub dataset: Option<DatasetSummary>,
    pub opt: Option<u64>,
    pub w: Option<String>,
    /// `opt = 0`: every string equals `w` at every approximate median.
    pub degenerate: bool,
    pub d_star: Option<usize>,
    /// Joins the symbols of each string; empty when all symbols are one
    /// character long.
    pub separator: String,
    pub strings: Vec<String>,
    pub costs: Vec<u64>,
    pub objective: ObjectiveValue,
    pub cost_class: Option<CostClass>,
    pub strategy: String,
    pub guarantee: String,
    pub certificates: Certificates,
    pub oracle: Option<OracleValues>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

pub fn separator_for(alphabet: &Alphabet) -> &'static str {
    if alphabet.symbols().iter().all(|s| s.chars().count() == 1) {
        ""
    } else {
        " "
    }
}

pub fn render(alphabet: &Alphabet, s: &[Sym]) -> String {
    let sep = separator_for(alphabet);
    s.iter().map(|&a| alphabet.symbol(a)).collect::<Vec<_>>().join(sep)
}

fn parse_string(alphabet: &Alphabet, sep: &str, s: &str) -> Result<Vec<Sym>, String> {
    let tokens: Vec<String> =
        if sep.is_empty() { s.chars().map(String::from).collect() } else { s.split(sep).map(String::from).collect() };
    tokens.iter().map(|t| alphabet.id(t).ok_or_else(|| format!("unknown symbol {t:?} in {s:?}"))).collect()
}

/// Checks a document against its dataset, recomputing everything from the
/// rows: opt by column counting, each cost by summing Hamming distances, and
/// the reported objective value from the strings.
pub fn revalidate(doc: &ResultDocument, dataset: &Dataset) -> Result<(), String> {
    if doc.schema != SCHEMA {
        return Err(format!("schema {:?}, expected {SCHEMA:?}", doc.schema));
    }
    let alphabet = dataset.alphabet();
    let summary = doc.dataset.as_ref().ok_or("document has no dataset summary")?;
    if (summary.n, summary.d, summary.alphabet.as_slice()) != (dataset.n(), dataset.d(), alphabet.symbols()) {
        return Err("dataset summary does not match the dataset".into());
    }
    let mut opt = 0u64;
    for i in 0..dataset.d() {
        let mut counts = vec![0u64; dataset.sigma()];
        for row in dataset.rows() {
            counts[row[i] as usize] += 1;
        }
        opt += dataset.n() as u64 - counts.iter().max().copied().unwrap_or(0);
    }
    if doc.opt != Some(opt) {
        return Err(format!("opt {:?} differs from recomputed {opt}", doc.opt));
    }
    if let Some(w) = &doc.w {
        let w = parse_string(alphabet, &doc.separator, w)?;
        if dataset.direct_cost(&w).map_err(|e| e.to_string())? != opt {
            return Err("w does not attain opt".into());
        }
    }
    if doc.strings.len() != doc.costs.len() {
        return Err("strings and costs differ in length".into());
    }
    let mut parsed = Vec::with_capacity(doc.strings.len());
    for (s, &cost) in doc.strings.iter().zip(&doc.costs) {
        let v = parse_string(alphabet, &doc.separator, s)?;
        let direct = dataset.direct_cost(&v).map_err(|e| e.to_string())?;
        if direct != cost {
            return Err(format!("{s:?}: document cost {cost}, recomputed {direct}"));
        }
        if let Some(class) = &doc.cost_class {
            if !class.admits(opt, direct) {
                return Err(format!("{s:?}: cost {direct} outside {} (ε = {})", class.label, class.epsilon));
            }
        }
        parsed.push(v);
    }
    let recomputed = match doc.config.objective {
        Objective::Median => Some(opt),
        Objective::Diameter if parsed.len() == 2 => Some(metrics::hamming(&parsed[0], &parsed[1]) as u64),
        Objective::SumDispersion => Some(metrics::sum_dispersion(&parsed)),
        Objective::MinDispersion if parsed.len() >= 2 => {
            Some(metrics::min_dispersion(&parsed).map_err(|e| e.to_string())? as u64)
        }
        Objective::Oracle => Some(parsed.len() as u64),
        _ => doc.objective.value,
    };
    if recomputed != doc.objective.value {
        return Err(format!("objective {:?} differs from recomputed {recomputed:?}", doc.objective.value));
    }
    Ok(())
}
