//! Integer program for min dispersion, its LP relaxation and dependent
//! rounding of the relaxed assignment.

use std::fmt::Write as _;

use rand::Rng;

use crate::budget::{Budget, Rational};
use crate::candidate::CandidateSet;
use crate::context::MedianContext;
use crate::dataset::Sym;
use crate::error::{Error, Result};
use crate::mindisp::{tstar_upper_bound, SampleConfig};
use crate::rng;

const SNAP: f64 = 1e-9;
const ROW_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRow {
    pub terms: Vec<(usize, f64)>,
    pub cmp: Cmp,
    pub rhs: f64,
}

/// A maximization LP: objective coefficients, variable bounds and rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LpModel {
    pub objective: Vec<f64>,
    pub bounds: Vec<(f64, f64)>,
    pub rows: Vec<LinearRow>,
}

impl LpModel {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Sparse triplet dump: `obj j c`, `bound j lo hi`, `row r op rhs`, `a r j c`.
    pub fn to_triplets(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# maximize; {} variables, {} rows", self.num_vars(), self.rows.len());
        for (j, c) in self.objective.iter().enumerate() {
            if *c != 0.0 {
                let _ = writeln!(out, "obj {j} {c}");
            }
        }
        for (j, (lo, hi)) in self.bounds.iter().enumerate() {
            let _ = writeln!(out, "bound {j} {lo} {hi}");
        }
        for (r, row) in self.rows.iter().enumerate() {
            let op = match row.cmp {
                Cmp::Le => "<=",
                Cmp::Ge => ">=",
                Cmp::Eq => "=",
            };
            let _ = writeln!(out, "row {r} {op} {}", row.rhs);
            for (j, c) in &row.terms {
                let _ = writeln!(out, "a {r} {j} {c}");
            }
        }
        out
    }
}

/// An optimal primal solution.
#[derive(Debug, Clone, PartialEq)]
pub struct LpPrimal {
    pub objective: f64,
    pub values: Vec<f64>,
}

/// Anything that can solve [`LpModel`] to optimality.
pub trait LpSolver {
    fn solve(&self, model: &LpModel) -> Result<LpPrimal>;
}

/// Dense simplex from the `minilp` crate.
#[derive(Debug, Clone, Copy, Default)]
pub struct SimplexSolver;

impl LpSolver for SimplexSolver {
    fn solve(&self, model: &LpModel) -> Result<LpPrimal> {
        use minilp::{ComparisonOp, OptimizationDirection, Problem};
        let mut problem = Problem::new(OptimizationDirection::Maximize);
        let vars: Vec<minilp::Variable> =
            model.objective.iter().zip(&model.bounds).map(|(&c, &b)| problem.add_var(c, b)).collect();
        for row in &model.rows {
            let terms: Vec<(minilp::Variable, f64)> = row.terms.iter().map(|&(j, c)| (vars[j], c)).collect();
            let op = match row.cmp {
                Cmp::Le => ComparisonOp::Le,
                Cmp::Ge => ComparisonOp::Ge,
                Cmp::Eq => ComparisonOp::Eq,
            };
            problem.add_constraint(terms.as_slice(), op, row.rhs);
        }
        match problem.solve() {
            Ok(sol) => Ok(LpPrimal { objective: sol.objective(), values: vars.iter().map(|&v| sol[v]).collect() }),
            Err(minilp::Error::Infeasible) => Err(Error::Infeasible("linear program has no feasible point".into())),
            Err(e) => Err(Error::NonConvergent(e.to_string())),
        }
    }
}

/// The integer program over the top-`k` symbols of every index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpModel {
    pub k: usize,
    pub d: usize,
    /// `ranked[i][j]`: the `j`-th most frequent symbol at `i`, `w_i` first.
    pub ranked: Vec<Vec<Sym>>,
    /// `costs[i][j]`: extra cost of `ranked[i][j]`.
    pub costs: Vec<Vec<u64>>,
    pub budget: Budget,
}

impl IlpModel {
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.k).flat_map(|r| (r + 1..self.k).map(move |s| (r, s))).collect()
    }

    pub fn u_var(&self, r: usize, i: usize, j: usize) -> usize {
        (r * self.d + i) * self.k + j
    }

    pub fn z_var(&self, pair: usize, i: usize, j: usize) -> usize {
        self.k * self.d * self.k + (pair * self.d + i) * self.k + j
    }

    pub fn t_var(&self) -> usize {
        let p = self.k * (self.k - 1) / 2;
        self.k * self.d * self.k + p * self.d * self.k
    }

    pub fn num_vars(&self) -> usize {
        self.t_var() + 1
    }

    /// Closed-form row count: two cost rows and `d` simplex rows per member,
    /// four linearization rows per pair, index and rank, one distance row per pair.
    pub fn expected_rows(k: usize, d: usize) -> usize {
        let p = k * (k - 1) / 2;
        2 * k + k * d + 4 * p * d * k + p
    }

    /// The LP relaxation with `u, z ∈ [0, 1]` and `t ∈ [0, d]`.
    pub fn relaxation(&self) -> LpModel {
        let (k, d) = (self.k, self.d);
        let n = self.num_vars();
        let mut objective = vec![0.0; n];
        objective[self.t_var()] = 1.0;
        let mut bounds = vec![(0.0, 1.0); n];
        bounds[self.t_var()] = (0.0, d as f64);
        let (num, den) = self.budget.threshold();
        let slack = num as f64 / den as f64;
        let mut rows = Vec::with_capacity(Self::expected_rows(k, d));
        for r in 0..k {
            let terms: Vec<(usize, f64)> = (0..d)
                .flat_map(|i| (0..k).map(move |j| (i, j)))
                .filter(|&(i, j)| self.costs[i][j] > 0)
                .map(|(i, j)| (self.u_var(r, i, j), self.costs[i][j] as f64))
                .collect();
            rows.push(LinearRow { terms: terms.clone(), cmp: Cmp::Le, rhs: slack });
            rows.push(LinearRow { terms, cmp: Cmp::Ge, rhs: 0.0 });
        }
        for r in 0..k {
            for i in 0..d {
                let terms = (0..k).map(|j| (self.u_var(r, i, j), 1.0)).collect();
                rows.push(LinearRow { terms, cmp: Cmp::Eq, rhs: 1.0 });
            }
        }
        let pairs = self.pairs();
        for (p, &(r, s)) in pairs.iter().enumerate() {
            for i in 0..d {
                for j in 0..k {
                    let (z, a, b) = (self.z_var(p, i, j), self.u_var(r, i, j), self.u_var(s, i, j));
                    rows.push(LinearRow { terms: vec![(z, 1.0), (a, -1.0), (b, -1.0)], cmp: Cmp::Le, rhs: 0.0 });
                    rows.push(LinearRow { terms: vec![(z, 1.0), (a, -1.0), (b, 1.0)], cmp: Cmp::Ge, rhs: 0.0 });
                    rows.push(LinearRow { terms: vec![(z, 1.0), (a, 1.0), (b, -1.0)], cmp: Cmp::Ge, rhs: 0.0 });
                    rows.push(LinearRow { terms: vec![(z, 1.0), (a, 1.0), (b, 1.0)], cmp: Cmp::Le, rhs: 2.0 });
                }
            }
        }
        for p in 0..pairs.len() {
            let mut terms: Vec<(usize, f64)> =
                (0..d).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| (self.z_var(p, i, j), 1.0)).collect();
            terms.push((self.t_var(), -2.0));
            rows.push(LinearRow { terms, cmp: Cmp::Ge, rhs: 0.0 });
        }
        LpModel { objective, bounds, rows }
    }

    /// Decodes one rank per index into a string.
    pub fn decode(&self, ranks: &[usize]) -> Vec<Sym> {
        ranks.iter().enumerate().map(|(i, &j)| self.ranked[i][j]).collect()
    }
}

/// Builds the model; needs at least `k` symbols so every rank exists.
pub fn build_ilp(ctx: &MedianContext, budget: &Budget, k: usize) -> Result<IlpModel> {
    if k < 2 {
        return Err(Error::InvalidParameter("k must be at least 2".into()));
    }
    if ctx.sigma() < k {
        return Err(Error::InvalidParameter(format!(
            "the model ranks the top {k} symbols per index but the alphabet has only {}",
            ctx.sigma()
        )));
    }
    let freq = ctx.freq();
    let mut ranked = Vec::with_capacity(ctx.d());
    let mut costs = Vec::with_capacity(ctx.d());
    for i in 0..ctx.d() {
        let col = freq.column(i);
        let mut order: Vec<Sym> = (0..ctx.sigma() as Sym).collect();
        order.sort_by_key(|&a| (std::cmp::Reverse(col[a as usize]), a));
        order.truncate(k);
        costs.push(order.iter().map(|&a| ctx.per_char_cost(i, a)).collect());
        ranked.push(order);
    }
    Ok(IlpModel { k, d: ctx.d(), ranked, costs, budget: *budget })
}

/// Per member, a `d × k` row-stochastic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalAssignment {
    pub u: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpRelaxation {
    pub assignment: FractionalAssignment,
    pub t: f64,
    /// `2t`: the smallest pairwise `Σ z` at the optimum.
    pub lp_value: f64,
}

pub fn solve_lp_relaxation(model: &IlpModel, solver: &dyn LpSolver) -> Result<LpRelaxation> {
    let primal = solver.solve(&model.relaxation())?;
    let u = (0..model.k)
        .map(|r| {
            (0..model.d)
                .map(|i| (0..model.k).map(|j| primal.values[model.u_var(r, i, j)].clamp(0.0, 1.0)).collect())
                .collect()
        })
        .collect();
    let t = primal.values[model.t_var()];
    Ok(LpRelaxation { assignment: FractionalAssignment { u }, t, lp_value: 2.0 * t })
}

fn snap(x: f64) -> f64 {
    if x < SNAP {
        0.0
    } else if x > 1.0 - SNAP {
        1.0
    } else {
        x
    }
}

fn fractional(x: f64) -> bool {
    x > 0.0 && x < 1.0
}

/// Rounds a row-stochastic matrix to one chosen column per row, keeping
/// every entry's probability of being chosen equal to its value.
///
/// Repeatedly takes a cycle or maximal path of fractional entries in the
/// row/column bipartite graph and shifts weight alternately along it.
pub fn dependent_round<R: Rng + ?Sized>(frac: &[Vec<f64>], rng: &mut R) -> Result<Vec<usize>> {
    let mut x: Vec<Vec<f64>> = frac.iter().map(|row| row.iter().map(|&v| snap(v)).collect()).collect();
    for (i, row) in x.iter().enumerate() {
        let sum: f64 = row.iter().sum();
        if row.is_empty() || (sum - 1.0).abs() > ROW_TOLERANCE || row.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidParameter(format!("row {i} is not stochastic (sum {sum})")));
        }
    }
    let rows = x.len();
    while let Some(walk) = fractional_walk(&x) {
        let (mut up, mut down) = (f64::INFINITY, f64::INFINITY);
        for (e, &(i, j)) in walk.iter().enumerate() {
            let v = x[i][j];
            if e % 2 == 0 {
                up = up.min(1.0 - v);
                down = down.min(v);
            } else {
                up = up.min(v);
                down = down.min(1.0 - v);
            }
        }
        let raise = rng.gen_bool(down / (up + down));
        for (e, &(i, j)) in walk.iter().enumerate() {
            let step = if raise { up } else { -down };
            let v = if e % 2 == 0 { x[i][j] + step } else { x[i][j] - step };
            x[i][j] = snap(v.clamp(0.0, 1.0));
        }
    }
    Ok((0..rows)
        .map(|i| {
            let row = &x[i];
            (0..row.len()).fold(0, |best, j| if row[j] > row[best] { j } else { best })
        })
        .collect())
}

/// Edges `(row, column)` of a cycle or maximal path of fractional entries.
fn fractional_walk(x: &[Vec<f64>]) -> Option<Vec<(usize, usize)>> {
    let rows = x.len();
    let start = (0..rows).find(|&i| x[i].iter().any(|&v| fractional(v)))?;
    // Vertices: rows are 0..rows, columns are rows + j.
    let neighbours = |v: usize| -> Vec<usize> {
        if v < rows {
            (0..x[v].len()).filter(|&j| fractional(x[v][j])).map(|j| rows + j).collect()
        } else {
            (0..rows).filter(|&i| fractional(x[i][v - rows])).collect()
        }
    };
    let edge = |a: usize, b: usize| if a < rows { (a, b - rows) } else { (b, a - rows) };

    let mut path = vec![start];
    let mut reversed = false;
    loop {
        let cur = *path.last().unwrap();
        let prev = if path.len() >= 2 { Some(path[path.len() - 2]) } else { None };
        let next = neighbours(cur).into_iter().find(|&v| Some(v) != prev);
        match next {
            Some(v) => {
                if let Some(pos) = path.iter().position(|&u| u == v) {
                    let mut cycle: Vec<(usize, usize)> = path[pos..].windows(2).map(|w| edge(w[0], w[1])).collect();
                    cycle.push(edge(cur, v));
                    return Some(cycle);
                }
                path.push(v);
            }
            None if !reversed => {
                reversed = true;
                path.reverse();
            }
            None => break,
        }
    }
    Some(path.windows(2).map(|w| edge(w[0], w[1])).collect()).filter(|p: &Vec<_>| !p.is_empty())
}

/// Chosen columns as a 0/1 matrix.
pub fn to_indicator(choice: &[usize], cols: usize) -> Vec<Vec<u8>> {
    choice.iter().map(|&c| (0..cols).map(|j| u8::from(j == c)).collect()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub set: CandidateSet,
    pub value: usize,
    pub lp_value: f64,
    pub trials: usize,
    pub feasible_trials: usize,
    pub best_trial: usize,
    pub tstar_upper: Rational,
    pub precondition_plausible: bool,
}

/// Solves the relaxation once, rounds it in `⌈log2(1/η)⌉` trials and keeps
/// the best trial whose members all cost at most `(1+ε+δ)·opt`.
pub fn lp_min_dispersion(
    ctx: &MedianContext,
    budget: &Budget,
    k: usize,
    delta: Rational,
    eta: Rational,
    seed: u64,
) -> Result<LpOutcome> {
    lp_min_dispersion_with(ctx, budget, k, delta, eta, seed, &SimplexSolver)
}

#[allow(clippy::too_many_arguments)]
pub fn lp_min_dispersion_with(
    ctx: &MedianContext,
    budget: &Budget,
    k: usize,
    delta: Rational,
    eta: Rational,
    seed: u64,
    solver: &dyn LpSolver,
) -> Result<LpOutcome> {
    let cfg = SampleConfig::new(k, delta, eta, seed)?;
    let tstar_upper = tstar_upper_bound(ctx, budget)?;
    let threshold = (8.0 + 4.0 * delta.to_f64()) / delta.to_f64()
        * (ctx.d() as f64).sqrt()
        * (2.0 * (k as f64).log2() + 2.0);
    let precondition_plausible = tstar_upper.to_f64() >= threshold;
    if ctx.opt() == 0 {
        return Ok(LpOutcome {
            set: CandidateSet::copies_of_w(ctx, k)?,
            value: 0,
            lp_value: 0.0,
            trials: 0,
            feasible_trials: 0,
            best_trial: 0,
            tstar_upper,
            precondition_plausible,
        });
    }
    let model = build_ilp(ctx, budget, k)?;
    let relaxed = solve_lp_relaxation(&model, solver)?;
    let loose = budget.with_epsilon(budget.epsilon().checked_add(&delta)?);
    let trials = cfg.trials();
    let mut best: Option<(usize, usize, Vec<Vec<Sym>>)> = None;
    let mut feasible_trials = 0;
    for t in 0..trials {
        let mut members = Vec::with_capacity(k);
        for (r, u) in relaxed.assignment.u.iter().enumerate() {
            let ranks = dependent_round(u, &mut rng::derived(seed, &[t as u64, r as u64]))?;
            members.push(model.decode(&ranks));
        }
        if !members.iter().all(|m| loose.fits(ctx.deviation_cost(m))) {
            continue;
        }
        feasible_trials += 1;
        let value = crate::metrics::min_dispersion(&members)?;
        if best.as_ref().is_none_or(|b| value > b.0) {
            best = Some((value, t, members));
        }
    }
    let Some((value, best_trial, members)) = best else {
        return Err(Error::Infeasible(format!("none of {trials} rounding trials met the (1+ε+δ) cost bound")));
    };
    Ok(LpOutcome {
        set: CandidateSet::new(ctx, members)?,
        value,
        lp_value: relaxed.lp_value,
        trials,
        feasible_trials,
        best_trial,
        tstar_upper,
        precondition_plausible,
    })
}
