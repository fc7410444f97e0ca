//! Routing a parsed configuration to the right algorithm.

use std::fs;
use std::time::Instant;

use clap::ValueEnum;
use diverse_medians::candidate::{CandidateSet, CostClass};
use diverse_medians::diameter::{approx_diameter_pair, exact_diameter_pair};
use diverse_medians::lpround::{build_ilp, lp_min_dispersion};
use diverse_medians::mindisp::{
    self, greedy_dispersion, min_disp_dp_approx, min_disp_dp_exact, plotkin_bound, plotkin_sum, sample_approx_medians,
    sample_exact_medians, tstar_upper_bound, SampleConfig,
};
use diverse_medians::oracle::{self, EnumerationLimits};
use diverse_medians::sumdisp::{self, SearchMode};
use diverse_medians::{Budget, Dataset, MedianContext, Sym};

use crate::config::{Objective, RunConfig, Strategy};
use crate::document::{
    render, separator_for, Certificates, ConfigEcho, DatasetSummary, ObjectiveValue, OracleValues,
    PlotkinCertificate, ResultDocument, SCHEMA,
};
use crate::error::CliError;
use crate::ingest::ingest;

/// Loaded dataset with its context and budget.
struct Instance {
    dataset: Dataset,
    ctx: MedianContext,
    budget: Budget,
}

impl Instance {
    fn render(&self, s: &[Sym]) -> String {
        render(self.dataset.alphabet(), s)
    }

    fn exact(&self) -> bool {
        self.budget.epsilon().is_zero()
    }

    fn approx_class(&self) -> CostClass {
        if self.exact() {
            CostClass::exact()
        } else {
            CostClass::approx("(1+ε)-approximate", self.budget.epsilon())
        }
    }
}

/// What an objective handler fills in.
struct Outcome {
    members: Vec<Vec<Sym>>,
    value: Option<u64>,
    name: &'static str,
    cost_class: Option<CostClass>,
    strategy: String,
    guarantee: String,
    d_star: Option<usize>,
    certificates: Certificates,
    oracle: Option<OracleValues>,
    notes: Vec<String>,
}

impl Outcome {
    fn new(name: &'static str, members: Vec<Vec<Sym>>, value: u64, strategy: &str, guarantee: String) -> Self {
        Outcome {
            members,
            value: Some(value),
            name,
            cost_class: None,
            strategy: strategy.into(),
            guarantee,
            d_star: None,
            certificates: Certificates::default(),
            oracle: None,
            notes: Vec::new(),
        }
    }
}

fn kebab<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn mismatch(cfg: &RunConfig) -> CliError {
    CliError::Mismatch { objective: kebab(&cfg.objective), strategy: kebab(&cfg.strategy) }
}

pub fn run(cfg: &RunConfig) -> Result<ResultDocument, CliError> {
    let started = Instant::now();
    let instance = match &cfg.input {
        Some(path) => {
            let dataset = ingest(path, cfg.format, cfg.alphabet.as_deref())?;
            let ctx = MedianContext::build(&dataset);
            let budget = Budget::new(cfg.epsilon, ctx.opt());
            Some(Instance { dataset, ctx, budget })
        }
        None if cfg.objective == Objective::Bound && cfg.sizes.is_some() => None,
        None => return Err(CliError::Validation("--input is required for this objective".into())),
    };
    let limits = cfg.limits();
    let outcome = match (&instance, cfg.objective) {
        (_, Objective::Bound) => bound(cfg, instance.as_ref())?,
        (Some(inst), Objective::Median) => median(cfg, inst)?,
        (Some(inst), Objective::Diameter) => diameter(cfg, inst, &limits)?,
        (Some(inst), Objective::SumDispersion) => sum_dispersion(cfg, inst, &limits)?,
        (Some(inst), Objective::MinDispersion) => min_dispersion(cfg, inst, &limits)?,
        (Some(inst), Objective::Oracle) => oracle_values(cfg, inst, &limits)?,
        (None, _) => unreachable!("input presence checked above"),
    };
    let mut doc = ResultDocument {
        schema: SCHEMA.into(),
        config: ConfigEcho::from(cfg),
        dataset: None,
        opt: None,
        w: None,
        degenerate: false,
        d_star: outcome.d_star,
        separator: String::new(),
        strings: Vec::new(),
        costs: Vec::new(),
        objective: ObjectiveValue { name: outcome.name.into(), value: outcome.value },
        cost_class: outcome.cost_class,
        strategy: outcome.strategy,
        guarantee: outcome.guarantee,
        certificates: outcome.certificates,
        oracle: outcome.oracle,
        notes: outcome.notes,
        wall_time_ms: None,
    };
    if let Some(inst) = &instance {
        let alphabet = inst.dataset.alphabet();
        doc.dataset = Some(DatasetSummary {
            n: inst.dataset.n(),
            d: inst.dataset.d(),
            alphabet_size: alphabet.len(),
            alphabet: alphabet.symbols().to_vec(),
        });
        doc.opt = Some(inst.ctx.opt());
        doc.w = Some(inst.render(inst.ctx.w()));
        doc.degenerate = inst.ctx.opt() == 0;
        doc.separator = separator_for(alphabet).into();
        doc.strings = outcome.members.iter().map(|s| inst.render(s)).collect();
        doc.costs = outcome
            .members
            .iter()
            .map(|s| inst.ctx.median_cost(s))
            .collect::<Result<_, _>>()?;
    }
    if cfg.timing {
        doc.wall_time_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    Ok(doc)
}

/// The document as pretty JSON with a trailing newline.
pub fn run_to_string(cfg: &RunConfig) -> Result<String, CliError> {
    let doc = run(cfg)?;
    let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
    s.push('\n');
    Ok(s)
}

fn median(cfg: &RunConfig, inst: &Instance) -> Result<Outcome, CliError> {
    if cfg.strategy != Strategy::Auto {
        return Err(mismatch(cfg));
    }
    let opt = inst.ctx.opt();
    let mut out = Outcome::new("opt", vec![], opt, "majority", format!("w is an exact median with cost opt = {opt}"));
    out.cost_class = Some(CostClass::exact());
    Ok(out)
}

fn diameter(cfg: &RunConfig, inst: &Instance, limits: &EnumerationLimits) -> Result<Outcome, CliError> {
    let ctx = &inst.ctx;
    let (members, strategy, guarantee, class) = match cfg.strategy {
        Strategy::Auto if inst.exact() => {
            let r = exact_diameter_pair(ctx);
            let g = format!("D* = {} tie indices, exact", r.diameter);
            (vec![r.pair.0, r.pair.1], "exact".to_string(), g, CostClass::exact())
        }
        Strategy::ExactConstruction => {
            let r = exact_diameter_pair(ctx);
            let g = format!("maximum distance {} among exact medians", r.diameter);
            (vec![r.pair.0, r.pair.1], "exact".to_string(), g, CostClass::exact())
        }
        Strategy::Auto => {
            let r = approx_diameter_pair(ctx, &inst.budget);
            let branch = serde_json::to_value(r.branch).expect("branch serializes");
            let branch = branch.as_str().unwrap_or_default().to_string();
            let g = format!("exact maximum distance among (1+ε)-approximate medians, ε = {}", inst.budget.epsilon());
            (vec![r.pair.0, r.pair.1], branch, g, inst.approx_class())
        }
        Strategy::Dp => {
            let dp = if inst.exact() {
                min_disp_dp_exact(ctx.freq(), ctx.w(), 2, limits)?
            } else {
                min_disp_dp_approx(ctx, &inst.budget, 2, limits)?
            };
            (dp.members, "dp".to_string(), "exact optimum over all pairs".into(), inst.approx_class())
        }
        _ => return Err(mismatch(cfg)),
    };
    let value = diverse_medians::metrics::hamming(&members[0], &members[1]);
    let mut out = Outcome::new("diameter", members, value as u64, &strategy, guarantee);
    out.cost_class = Some(class);
    out.d_star = Some(value);
    Ok(out)
}

fn sum_dispersion(cfg: &RunConfig, inst: &Instance, limits: &EnumerationLimits) -> Result<Outcome, CliError> {
    let ctx = &inst.ctx;
    let k = cfg.k;
    let mode = if cfg.linear_scan { SearchMode::Linear } else { SearchMode::Binary };
    let exact_set = |cfg: &RunConfig| -> Result<(CandidateSet, String), CliError> {
        if cfg.distinct {
            let set = sumdisp::sum_dispersion_exact_distinct(ctx, k)?;
            Ok((set, "distinct exact medians, per-index counts balanced; optimal among multisets".into()))
        } else {
            Ok((sumdisp::sum_dispersion_exact_k(ctx, k)?, "balanced tie layout, v = v*".into()))
        }
    };
    let ties = ctx.freq().tie_indices().len();
    let (set, strategy, guarantee, class, d_star, notes) = match cfg.strategy {
        Strategy::Auto if inst.exact() => {
            let (set, g) = exact_set(cfg)?;
            (set, "exact-construction".to_string(), g, CostClass::exact(), ties, vec![])
        }
        Strategy::ExactConstruction => {
            let (set, g) = exact_set(cfg)?;
            (set, "exact-construction".to_string(), g, CostClass::exact(), ties, vec![])
        }
        Strategy::Auto => {
            let r = sumdisp::sum_dispersion_dispatch(ctx, &inst.budget, k, cfg.delta, mode, limits)?;
            (r.set, r.strategy, r.guarantee, inst.approx_class(), r.d_star, r.notes)
        }
        Strategy::Greedy => {
            let r = sumdisp::sum_dispersion_approx_k(ctx, &inst.budget, k, mode)?;
            let d_star = approx_diameter_pair(ctx, &inst.budget).diameter;
            let g = format!("v >= (1 - 4/D*) v* with D* = {d_star}");
            let note = format!("prefix {} of {} ops", r.prefix_len, r.list_len);
            (r.set, "density-greedy".to_string(), g, inst.approx_class(), d_star, vec![note])
        }
        _ => return Err(mismatch(cfg)),
    };
    let value = set.sum_dispersion();
    let mut out = Outcome::new("sum_dispersion", set.into_members(), value, &strategy, guarantee);
    out.cost_class = Some(class);
    out.d_star = Some(d_star);
    out.notes = notes;
    Ok(out)
}

fn min_dispersion(cfg: &RunConfig, inst: &Instance, limits: &EnumerationLimits) -> Result<Outcome, CliError> {
    let ctx = &inst.ctx;
    let budget = &inst.budget;
    let (k, delta, eta, seed) = (cfg.k, cfg.delta, cfg.eta, cfg.seed);
    let d_star = || {
        if inst.exact() {
            ctx.freq().tie_indices().len()
        } else {
            approx_diameter_pair(ctx, budget).diameter
        }
    };
    let mut certificates = Certificates::default();
    let (set, strategy, guarantee, class, notes) = match cfg.strategy {
        Strategy::Auto => {
            let r = if inst.exact() {
                mindisp::min_dispersion_dispatch_exact(ctx, k, delta, eta, seed, limits)?
            } else {
                mindisp::min_dispersion_dispatch_approx(ctx, budget, k, delta, eta, seed, cfg.lp, limits)?
            };
            (r.set, r.strategy, r.guarantee, r.cost_class, r.notes)
        }
        Strategy::Dp => {
            SampleConfig::new(k, delta, eta, seed)?;
            let dp = if inst.exact() {
                min_disp_dp_exact(ctx.freq(), ctx.w(), k, limits)?
            } else {
                min_disp_dp_approx(ctx, budget, k, limits)?
            };
            let note = format!("{} DP states", dp.states);
            (CandidateSet::new(ctx, dp.members)?, "dp".into(), "exact optimum t*".into(), inst.approx_class(), vec![note])
        }
        Strategy::Sample => {
            let sc = SampleConfig::new(k, delta, eta, seed)?;
            if inst.exact() {
                let out = sample_exact_medians(ctx, &sc)?;
                let sum = plotkin_sum(&ctx.freq().majority_sizes())?;
                let g = format!("minDp >= (1-δ)Σ = (1-{delta})·{sum} with probability >= 1-η, {} trials", sc.trials());
                (out.set, "sample".into(), g, CostClass::exact(), vec![])
            } else {
                let out = sample_approx_medians(ctx, budget, &sc)?;
                let class = CostClass::approx("(1+2ε)-approximate", budget.epsilon().scale(2)?);
                let g = format!("minDp >= (1-δ)D*/2 with probability >= 1-η, {} trials", sc.trials());
                (out.set, "sample".into(), g, class, vec![])
            }
        }
        Strategy::Greedy => {
            SampleConfig::new(k, delta, eta, seed)?;
            let pool = if inst.exact() {
                oracle::enumerate_exact_medians(ctx.freq(), limits)?
            } else {
                oracle::enumerate_approx_medians(ctx, budget, limits)?
            };
            let g = greedy_dispersion(&pool, k, limits)?;
            let mut notes = vec![format!("pool of {} medians", pool.len())];
            if g.duplicated {
                notes.push("pool smaller than k; duplicates used".into());
            }
            let set = CandidateSet::new(ctx, g.picks.iter().map(|&p| pool[p].clone()).collect())?;
            (set, "enumeration+greedy".into(), "minDp >= t*/2".into(), inst.approx_class(), notes)
        }
        Strategy::Lp => {
            if let Some(path) = &cfg.dump_lp {
                if ctx.opt() > 0 {
                    let model = build_ilp(ctx, budget, k)?;
                    fs::write(path, model.relaxation().to_triplets())
                        .map_err(|e| CliError::Io { path: path.display().to_string(), reason: e.to_string() })?;
                }
            }
            let lp = lp_min_dispersion(ctx, budget, k, delta, eta, seed)?;
            certificates.lp_value = Some(lp.lp_value);
            let class = CostClass::approx("(1+ε+δ)-approximate", budget.epsilon().checked_add(&delta)?);
            let g = format!(
                "minDp >= (1-δ)/2 t* w.h.p. when t* >= ((8+4δ)/δ)·sqrt(d)(2 log k + 2); precondition {}",
                if lp.precondition_plausible { "plausible" } else { "not met" }
            );
            let note = format!("{} of {} rounding trials feasible", lp.feasible_trials, lp.trials);
            (lp.set, "lp".into(), g, class, vec![note])
        }
        Strategy::ExactConstruction => return Err(mismatch(cfg)),
    };
    let value = set.min_dispersion();
    let sizes = ctx.freq().majority_sizes();
    certificates.plotkin = Some(plotkin_certificate(sizes, value as u64)?);
    certificates.tstar_upper = Some(tstar_upper_bound(ctx, budget)?);
    let mut out = Outcome::new("min_dispersion", set.into_members(), value as u64, &strategy, guarantee);
    out.cost_class = Some(class);
    out.d_star = Some(d_star());
    out.certificates = certificates;
    out.notes = notes;
    Ok(out)
}

fn plotkin_certificate(sizes: Vec<usize>, t: u64) -> Result<PlotkinCertificate, CliError> {
    Ok(PlotkinCertificate {
        plotkin_sum: plotkin_sum(&sizes)?.to_string(),
        max_code_size: plotkin_bound(&sizes, t)?,
        alphabet_sizes: sizes,
        t,
    })
}

fn parse_sizes(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|x| match x.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(CliError::Validation(format!("bad alphabet size {x:?} in --sizes"))),
        })
        .collect()
}

fn bound(cfg: &RunConfig, inst: Option<&Instance>) -> Result<Outcome, CliError> {
    if cfg.strategy != Strategy::Auto {
        return Err(mismatch(cfg));
    }
    let t = cfg.t.ok_or_else(|| CliError::Validation("--objective bound needs --t".into()))?;
    let sizes = match (&cfg.sizes, inst) {
        (Some(s), _) => parse_sizes(s)?,
        (None, Some(inst)) => inst.ctx.freq().majority_sizes(),
        (None, None) => unreachable!("input presence checked by run"),
    };
    let cert = plotkin_certificate(sizes, t)?;
    let value = cert.max_code_size.bound();
    let mut out = Outcome::new("max_code_size", vec![], 0, "plotkin", String::new());
    out.value = value;
    out.guarantee = match value {
        Some(b) => format!("every code with minimum distance {t} has at most {b} words"),
        None => format!("t = {t} is below the Plotkin sum {}; no bound", cert.plotkin_sum),
    };
    out.certificates.plotkin = Some(cert);
    if let Some(inst) = inst {
        out.certificates.tstar_upper = Some(tstar_upper_bound(&inst.ctx, &inst.budget)?);
    }
    Ok(out)
}

fn oracle_values(cfg: &RunConfig, inst: &Instance, limits: &EnumerationLimits) -> Result<Outcome, CliError> {
    if cfg.strategy != Strategy::Auto {
        return Err(mismatch(cfg));
    }
    let ctx = &inst.ctx;
    let pool = if inst.exact() {
        oracle::enumerate_exact_medians(ctx.freq(), limits)?
    } else {
        oracle::enumerate_approx_medians(ctx, &inst.budget, limits)?
    };
    let values = OracleValues {
        pool_size: pool.len(),
        diameter: oracle::brute_diameter(&pool).value,
        sum_dispersion: oracle::brute_sumdp_k(&pool, cfg.k, limits)?.value,
        min_dispersion: if cfg.k >= 2 { Some(oracle::brute_mindp_k(&pool, cfg.k, limits)?.value) } else { None },
    };
    let g = format!("exhaustive over {} medians", pool.len());
    let mut out = Outcome::new("pool_size", vec![], pool.len() as u64, "exhaustive", g);
    out.members = pool;
    out.cost_class = Some(inst.approx_class());
    out.d_star = Some(values.diameter as usize);
    out.oracle = Some(values);
    Ok(out)
}
