//! Randomized scenario suite probing which penalized fits survive a
//! translation of the marker coding and which do not.
//!
//! Each scenario draws seeded random instances (markers, response, shift),
//! fits the scenario's model and penalty under both codings, and classifies
//! the trial. Invariance scenarios must hold on every trial; witness
//! scenarios must produce at least one clear prediction difference.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::coding::{build_design_matrix, MarkerMatrix, TranslationVector};
use crate::invariance::{run_invariance_experiment, InvarianceReport};
use crate::poly::{Monomial, PolynomialCoefficients, PolynomialModel};
use crate::solver::{condition_estimate, Method, PenaltyNorm, PenaltySpec};
use crate::{constant, Scalar};

/// Instances whose normal-equation condition estimate exceeds this are
/// redrawn so numerical rank issues are not mistaken for coding effects.
pub const REDRAW_CONDITION_LIMIT: f64 = 1e10;
/// Prediction difference that counts as a witness of non-invariance.
pub const WITNESS_PRED_DIFF: f64 = 1e-3;
/// Scale factor for the per-trial invariance tolerance.
pub const INVARIANCE_RTOL: f64 = 1e-6;
/// Witness scenarios must find a witness within this many trials.
pub const WITNESS_TRIAL_BUDGET: u32 = 20;

const MAX_MODEL_MONOMIALS: usize = 12;

/// Scenario identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioId {
    C1,
    C2,
    C3,
    C4,
    E3a,
    E3b,
    E3c,
    R,
    X,
}

/// What a scenario is expected to show.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    /// Every trial stays invariant.
    AllInvariant,
    /// At least one trial within the budget is a clear witness.
    WitnessExists,
    /// The isolated degree-1 coefficient stays put on every trial while the
    /// remaining lower-degree coefficients move on at least one.
    RemarkPattern,
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expectation::AllInvariant => "all-invariant",
            Expectation::WitnessExists => "witness-exists",
            Expectation::RemarkPattern => "remark-pattern",
        })
    }
}

impl ScenarioId {
    pub fn all() -> [ScenarioId; 9] {
        [
            ScenarioId::C1,
            ScenarioId::C2,
            ScenarioId::C3,
            ScenarioId::C4,
            ScenarioId::E3a,
            ScenarioId::E3b,
            ScenarioId::E3c,
            ScenarioId::R,
            ScenarioId::X,
        ]
    }

    pub fn code(&self) -> &'static str {
        match self {
            ScenarioId::C1 => "C1",
            ScenarioId::C2 => "C2",
            ScenarioId::C3 => "C3",
            ScenarioId::C4 => "C4",
            ScenarioId::E3a => "E3a",
            ScenarioId::E3b => "E3b",
            ScenarioId::E3c => "E3c",
            ScenarioId::R => "R",
            ScenarioId::X => "X",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            ScenarioId::C1 => "unpenalized least squares on complete models of degree 1-3",
            ScenarioId::C2 => "penalty restricted to top-degree coefficients (ridge or l1)",
            ScenarioId::C3 => "ridge on the additive model, intercept unpenalized",
            ScenarioId::C4 => "l1 on the additive model, intercept unpenalized",
            ScenarioId::E3a => "ridge with a penalized intercept",
            ScenarioId::E3b => "ridge on an additive model without intercept",
            ScenarioId::E3c => "l1 on degree-1 and degree-2 coefficients",
            ScenarioId::R => "isolated degree-1 variable keeps its coefficient under ols",
            ScenarioId::X => "incomplete model under ols",
        }
    }

    pub fn expectation(&self) -> Expectation {
        match self {
            ScenarioId::C1 | ScenarioId::C2 | ScenarioId::C3 | ScenarioId::C4 => {
                Expectation::AllInvariant
            }
            ScenarioId::E3a | ScenarioId::E3b | ScenarioId::E3c | ScenarioId::X => {
                Expectation::WitnessExists
            }
            ScenarioId::R => Expectation::RemarkPattern,
        }
    }
}

/// Per-scenario tally.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult<F> {
    pub id: ScenarioId,
    pub trials: u32,
    pub invariant_trials: u32,
    pub witness_trials: u32,
    pub first_witness_trial: Option<u32>,
    pub error_trials: u32,
    pub redraws: u32,
    pub redraw_cap_exceeded: bool,
    pub max_pred_diff_seen: F,
    pub passed: bool,
}

/// Results of the whole scenario suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSummary<F> {
    pub seed: u64,
    pub trials: u32,
    pub scenarios: Vec<ScenarioResult<F>>,
}

impl<F: Scalar> SuiteSummary<F> {
    pub fn all_passed(&self) -> bool {
        self.scenarios.iter().all(|s| s.passed)
    }

    pub fn scenario(&self, id: ScenarioId) -> &ScenarioResult<F> {
        self.scenarios
            .iter()
            .find(|s| s.id == id)
            .expect("all scenarios are always run")
    }

    /// Key-value lines, one field per line, deterministic order.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("suite.seed={}\n", self.seed));
        out.push_str(&format!("suite.trials={}\n", self.trials));
        for s in &self.scenarios {
            let code = s.id.code();
            out.push_str(&format!("scenario.{code}.description={}\n", s.id.description()));
            out.push_str(&format!("scenario.{code}.expectation={}\n", s.id.expectation()));
            out.push_str(&format!("scenario.{code}.trials={}\n", s.trials));
            out.push_str(&format!("scenario.{code}.invariant_trials={}\n", s.invariant_trials));
            out.push_str(&format!("scenario.{code}.witness_trials={}\n", s.witness_trials));
            let first = s
                .first_witness_trial
                .map(|t| t.to_string())
                .unwrap_or_else(|| "none".into());
            out.push_str(&format!("scenario.{code}.first_witness_trial={first}\n"));
            out.push_str(&format!("scenario.{code}.error_trials={}\n", s.error_trials));
            out.push_str(&format!("scenario.{code}.redraws={}\n", s.redraws));
            out.push_str(&format!(
                "scenario.{code}.max_pred_diff={:e}\n",
                s.max_pred_diff_seen
            ));
            out.push_str(&format!("scenario.{code}.passed={}\n", s.passed));
        }
        out.push_str(&format!("suite.all_passed={}\n", self.all_passed()));
        out
    }
}

struct Trial<F> {
    markers: MarkerMatrix<F>,
    shift: TranslationVector<F>,
    y: Vec<F>,
    model: PolynomialModel,
    penalty: PenaltySpec<F>,
    method: Method,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn trial_rng(seed: u64, scenario: usize, trial: u32, attempt: u32) -> ChaCha8Rng {
    let key = splitmix64(
        seed ^ splitmix64(
            ((scenario as u64) << 48) ^ ((trial as u64) << 16) ^ attempt as u64,
        ),
    );
    ChaCha8Rng::seed_from_u64(key)
}

fn gen_markers<F: Scalar>(
    rng: &mut ChaCha8Rng,
    n: usize,
    p: usize,
    model: &PolynomialModel,
) -> MarkerMatrix<F> {
    // A {0,1,2} coding spans only powers up to 2: on a three-value domain,
    // x^3 is a linear combination of 1, x, x^2, which makes higher-power
    // columns exactly collinear. Such models get the continuous coding.
    let max_power = model
        .monomials()
        .iter()
        .flat_map(|m| m.exponents().map(|(_, power)| power))
        .max()
        .unwrap_or(0);
    let discrete = max_power <= 2 && rng.random_bool(0.5);
    let data: Vec<F> = (0..n * p)
        .map(|_| {
            let v = if discrete {
                rng.random_range(0..=2) as f64
            } else {
                rng.random_range(-1.0..2.0)
            };
            constant(v)
        })
        .collect();
    MarkerMatrix::new(n, p, data).expect("generated markers are finite")
}

fn gen_shift<F: Scalar>(rng: &mut ChaCha8Rng, p: usize) -> TranslationVector<F> {
    TranslationVector::new((0..p).map(|_| constant(rng.random_range(-2.0..2.0))).collect())
        .expect("generated shift is finite")
}

fn gen_response<F: Scalar>(
    rng: &mut ChaCha8Rng,
    markers: &MarkerMatrix<F>,
    model: &PolynomialModel,
) -> Vec<F> {
    let coeffs: Vec<F> = (0..model.len())
        .map(|_| constant(StandardNormal.sample(rng)))
        .collect();
    let signal = PolynomialCoefficients::new(model.clone(), coeffs)
        .expect("generated coefficients are finite");
    markers
        .rows()
        .map(|row| {
            let noise: f64 = StandardNormal.sample(rng);
            signal.evaluate(row).expect("dimensions agree") + constant(noise)
        })
        .collect()
}

fn gen_lambda(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.random_range(-1.0..1.0))
}

fn random_exact_degree_monomial(rng: &mut ChaCha8Rng, p: usize, degree: u32) -> Monomial {
    let mut powers: BTreeMap<usize, u32> = BTreeMap::new();
    for _ in 0..degree {
        *powers.entry(rng.random_range(0..p)).or_insert(0) += 1;
    }
    Monomial::new(powers).expect("degree stays within bounds")
}

/// Closure of one or two random generator monomials; max total degree is
/// exactly `degree`.
fn random_complete_model(rng: &mut ChaCha8Rng, p: usize, degree: u32) -> PolynomialModel {
    let lead = random_exact_degree_monomial(rng, p, degree);
    let mut generators = vec![lead.clone()];
    if rng.random_bool(0.5) {
        let extra_degree = rng.random_range(1..=degree);
        let extra = random_exact_degree_monomial(rng, p, extra_degree);
        if extra != generators[0] {
            generators.push(extra);
        }
    }
    let base = PolynomialModel::new(generators, p).expect("generators are valid");
    let closed = base.complete_closure();
    if closed.len() > MAX_MODEL_MONOMIALS {
        PolynomialModel::new(vec![lead], p)
            .expect("generator is valid")
            .complete_closure()
    } else {
        closed
    }
}

fn pick_n(rng: &mut ChaCha8Rng, model_len: usize) -> usize {
    let lo = (model_len + 2).max(6);
    rng.random_range(lo..=20.max(lo))
}

fn top_degree_penalty<F: Scalar>(
    rng: &mut ChaCha8Rng,
    model: &PolynomialModel,
    norm: PenaltyNorm,
) -> PenaltySpec<F> {
    let top = model.max_total_degree();
    let entries = model
        .monomials()
        .iter()
        .map(|m| {
            if m.total_degree() == top {
                (norm, constant(gen_lambda(rng)))
            } else {
                (PenaltyNorm::None, F::zero())
            }
        })
        .collect();
    PenaltySpec::from_entries(entries).expect("single-norm entries are valid")
}

fn gen_trial<F: Scalar>(id: ScenarioId, trial: u32, rng: &mut ChaCha8Rng) -> Trial<F> {
    let (model, penalty, method): (PolynomialModel, PenaltySpec<F>, Method) = match id {
        ScenarioId::C1 => {
            let p = rng.random_range(1..=4);
            let degree = 1 + trial % 3;
            let model = random_complete_model(rng, p, degree);
            let penalty = PenaltySpec::unpenalized(&model);
            (model, penalty, Method::Ols)
        }
        ScenarioId::C2 => {
            let p = rng.random_range(1..=4);
            let degree = 2 + trial % 2;
            let model = random_complete_model(rng, p, degree);
            let (norm, method) = if trial % 2 == 0 {
                (PenaltyNorm::L2, Method::Ridge)
            } else {
                (PenaltyNorm::L1, Method::Lasso)
            };
            let penalty = top_degree_penalty(rng, &model, norm);
            (model, penalty, method)
        }
        ScenarioId::C3 => {
            let p = rng.random_range(1..=4);
            let model = PolynomialModel::auto_degree(p, 1).expect("additive model");
            let penalty = PenaltySpec::by_total_degree(
                &model,
                PenaltyNorm::L2,
                &[(1, constant(gen_lambda(rng)))],
            )
            .expect("valid penalty");
            (model, penalty, Method::Ridge)
        }
        ScenarioId::C4 => {
            let p = rng.random_range(1..=4);
            let model = PolynomialModel::auto_degree(p, 1).expect("additive model");
            let penalty = PenaltySpec::by_total_degree(
                &model,
                PenaltyNorm::L1,
                &[(1, constant(gen_lambda(rng)))],
            )
            .expect("valid penalty");
            (model, penalty, Method::Lasso)
        }
        ScenarioId::E3a => {
            let p = rng.random_range(1..=4);
            let model = PolynomialModel::auto_degree(p, 1).expect("additive model");
            let penalty = PenaltySpec::by_total_degree(
                &model,
                PenaltyNorm::L2,
                &[(0, constant(gen_lambda(rng))), (1, constant(gen_lambda(rng)))],
            )
            .expect("valid penalty");
            (model, penalty, Method::Ridge)
        }
        ScenarioId::E3b => {
            let p = rng.random_range(1..=4);
            let model = PolynomialModel::new(
                (0..p).map(Monomial::variable).collect(),
                p,
            )
            .expect("variables-only model");
            let penalty = PenaltySpec::by_total_degree(
                &model,
                PenaltyNorm::L2,
                &[(1, constant(gen_lambda(rng)))],
            )
            .expect("valid penalty");
            (model, penalty, Method::Ridge)
        }
        ScenarioId::E3c => {
            let p = rng.random_range(2..=4);
            let model = PolynomialModel::auto_degree(p, 2).expect("pairwise model");
            let penalty = PenaltySpec::by_total_degree(
                &model,
                PenaltyNorm::L1,
                &[(1, constant(gen_lambda(rng))), (2, constant(gen_lambda(rng)))],
            )
            .expect("valid penalty");
            (model, penalty, Method::Lasso)
        }
        ScenarioId::R => {
            let model = PolynomialModel::new(
                vec![
                    Monomial::intercept(),
                    Monomial::variable(0),
                    Monomial::variable(1),
                    Monomial::variable(2),
                    Monomial::new([(1, 1), (2, 1)]).expect("pairwise term"),
                ],
                3,
            )
            .expect("remark model");
            let penalty = PenaltySpec::unpenalized(&model);
            (model, penalty, Method::Ols)
        }
        ScenarioId::X => {
            let model = PolynomialModel::new(
                vec![
                    Monomial::intercept(),
                    Monomial::variable(0),
                    Monomial::new([(0, 1), (1, 1)]).expect("pairwise term"),
                ],
                2,
            )
            .expect("incomplete model");
            let penalty = PenaltySpec::unpenalized(&model);
            (model, penalty, Method::Ols)
        }
    };

    let p = model.num_variables();
    let n = pick_n(rng, model.len());
    let markers = gen_markers(rng, n, p, &model);
    let shift = gen_shift(rng, p);
    let y = gen_response(rng, &markers, &model);
    Trial {
        markers,
        shift,
        y,
        model,
        penalty,
        method,
    }
}

fn well_conditioned<F: Scalar>(trial: &Trial<F>) -> bool {
    let limit = constant::<F>(REDRAW_CONDITION_LIMIT);
    let ok = |markers: &MarkerMatrix<F>| -> bool {
        match build_design_matrix(markers, &trial.model) {
            Ok(design) => match condition_estimate(&design, Some(&trial.penalty)) {
                Ok(cond) => cond <= limit,
                Err(_) => false,
            },
            Err(_) => false,
        }
    };
    if !ok(&trial.markers) {
        return false;
    }
    match trial.markers.apply_translation(&trial.shift) {
        Ok(translated) => ok(&translated),
        Err(_) => false,
    }
}

struct TrialClass {
    invariant_held: bool,
    witness: bool,
}

fn classify<F: Scalar>(id: ScenarioId, report: &InvarianceReport<F>, y: &[F]) -> TrialClass {
    let rtol = constant::<F>(INVARIANCE_RTOL);
    let witness_level = constant::<F>(WITNESS_PRED_DIFF);
    match id {
        ScenarioId::R => {
            let coef_tol = |m: &Monomial| {
                let base = report
                    .fit_original
                    .coefficients
                    .get(m)
                    .unwrap_or(F::zero())
                    .abs();
                rtol * (F::one() + base)
            };
            let diff = |m: &Monomial| {
                report
                    .per_coefficient_diffs
                    .get(m)
                    .copied()
                    .unwrap_or(F::zero())
            };
            let isolated = Monomial::variable(0);
            let pairwise = Monomial::new([(1, 1), (2, 1)]).expect("pairwise term");
            let invariant_held = diff(&isolated) <= coef_tol(&isolated)
                && diff(&pairwise) <= coef_tol(&pairwise);
            let witness = diff(&Monomial::intercept()) > witness_level
                && diff(&Monomial::variable(1)) > witness_level
                && diff(&Monomial::variable(2)) > witness_level;
            TrialClass {
                invariant_held,
                witness,
            }
        }
        _ => {
            let y_scale = F::one()
                + y.iter()
                    .map(|v| v.abs())
                    .fold(F::zero(), F::max);
            let coef_scale = F::one()
                + report
                    .fit_original
                    .coefficients
                    .values()
                    .iter()
                    .chain(report.fit_translated.coefficients.values())
                    .map(|v| v.abs())
                    .fold(F::zero(), F::max);
            TrialClass {
                invariant_held: report.max_pred_diff <= rtol * y_scale
                    && report.max_topdeg_coef_diff <= rtol * coef_scale,
                witness: report.max_pred_diff > witness_level,
            }
        }
    }
}

fn run_scenario<F: Scalar>(
    id: ScenarioId,
    index: usize,
    seed: u64,
    trials: u32,
) -> ScenarioResult<F> {
    let redraw_cap = (trials / 5).max(1);
    let mut result = ScenarioResult {
        id,
        trials,
        invariant_trials: 0,
        witness_trials: 0,
        first_witness_trial: None,
        error_trials: 0,
        redraws: 0,
        redraw_cap_exceeded: false,
        max_pred_diff_seen: F::zero(),
        passed: false,
    };

    'trials: for trial in 0..trials {
        let mut attempt = 0u32;
        // Ill-conditioned draws, and draws the solver rejects numerically,
        // are redrawn and counted against the cap.
        let (data, report) = loop {
            let mut rng = trial_rng(seed, index, trial, attempt);
            let candidate = gen_trial::<F>(id, trial, &mut rng);
            if well_conditioned(&candidate) {
                let y_scale = F::one()
                    + candidate
                        .y
                        .iter()
                        .map(|v| v.abs())
                        .fold(F::zero(), F::max);
                match run_invariance_experiment(
                    &candidate.markers,
                    &candidate.y,
                    &candidate.model,
                    &candidate.penalty,
                    &candidate.shift,
                    candidate.method,
                    constant::<F>(INVARIANCE_RTOL) * y_scale,
                ) {
                    Ok(report) => break (candidate, report),
                    Err(e) => {
                        let cond = build_design_matrix(&candidate.markers, &candidate.model)
                            .ok()
                            .and_then(|d| condition_estimate(&d, Some(&candidate.penalty)).ok());
                        eprintln!(
                            "DEBUG {} trial {trial} attempt {attempt}: {e}; cond={cond:?}; model=[{}]; method={:?}",
                            id.code(),
                            candidate.model.spec_text().replace('\n', ";"),
                            candidate.method
                        );
                        result.error_trials += 1
                    }
                }
            }
            result.redraws += 1;
            attempt += 1;
            if result.redraws > redraw_cap {
                result.redraw_cap_exceeded = true;
                break 'trials;
            }
        };

        if report.max_pred_diff > result.max_pred_diff_seen {
            result.max_pred_diff_seen = report.max_pred_diff;
        }
        let class = classify(id, &report, &data.y);
        if class.invariant_held {
            result.invariant_trials += 1;
        }
        if class.witness {
            result.witness_trials += 1;
            if result.first_witness_trial.is_none() {
                result.first_witness_trial = Some(trial + 1);
            }
        }
    }

    result.passed = match id.expectation() {
        Expectation::AllInvariant => {
            result.invariant_trials == trials && !result.redraw_cap_exceeded
        }
        Expectation::WitnessExists => result
            .first_witness_trial
            .map_or(false, |t| t <= trials.min(WITNESS_TRIAL_BUDGET)),
        Expectation::RemarkPattern => {
            result.invariant_trials == trials
                && result.witness_trials >= 1
                && !result.redraw_cap_exceeded
        }
    };
    result
}

/// Runs every scenario for `trials` seeded instances each. Failures are
/// recorded in the summary, never raised.
pub fn corollary_suite<F: Scalar>(seed: u64, trials: u32) -> SuiteSummary<F> {
    let scenarios = ScenarioId::all()
        .iter()
        .enumerate()
        .map(|(index, &id)| run_scenario::<F>(id, index, seed, trials))
        .collect();
    SuiteSummary {
        seed,
        trials,
        scenarios,
    }
}
