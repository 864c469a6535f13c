//! Least-squares fits of polynomial models: unpenalized, weighted ridge with
//! unpenalized slots, and weighted L1 by coordinate descent, plus an
//! exhaustive small-instance L1 oracle.
//!
//! The objective convention throughout is the plain sum of squared residuals
//! plus the penalty term, with no 1/2 or 1/n factor. For the L1 fit this puts
//! the factor 2 into the stationarity conditions: a nonzero penalized
//! coefficient satisfies `2 x_j' r = w_j sign(theta_j)`.

use std::fmt;
use std::str::FromStr;

use crate::coding::{DesignMatrix, MarkerMatrix};
use crate::linalg::{condition_of, solve_spd, SymMat};
use crate::poly::{PolynomialCoefficients, PolynomialModel};
use crate::{Error, Result, Scalar};

/// Hard sweep budget for the coordinate-descent L1 solver.
pub const MAX_LASSO_SWEEPS: usize = 100_000;
/// A fit counts as converged only if the final sweep moved no coefficient by
/// more than this.
pub const LASSO_CONVERGENCE_TOL: f64 = 1e-10;
/// Largest model the exhaustive L1 oracle accepts.
pub const ORACLE_MONOMIAL_LIMIT: usize = 6;

// Internal target: sweeping to 1e-12 keeps the stationarity residuals of the
// returned fit comfortably below the 1e-8 checks.
const LASSO_SWEEP_TARGET: f64 = 1e-12;

/// Penalty applied to one coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyNorm {
    None,
    L2,
    L1,
}

impl fmt::Display for PenaltyNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PenaltyNorm::None => "none",
            PenaltyNorm::L2 => "l2",
            PenaltyNorm::L1 => "l1",
        })
    }
}

/// Per-monomial penalty entries, aligned with a model's canonical order.
/// A spec is all-L2-or-none or all-L1-or-none; mixing the two norms is
/// rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltySpec<F> {
    norms: Vec<PenaltyNorm>,
    weights: Vec<F>,
}

impl<F: Scalar> PenaltySpec<F> {
    /// One `(norm, weight)` entry per model monomial, in model order.
    pub fn from_entries(entries: Vec<(PenaltyNorm, F)>) -> Result<Self> {
        let mut norms = Vec::with_capacity(entries.len());
        let mut weights = Vec::with_capacity(entries.len());
        for (norm, weight) in entries {
            if norm != PenaltyNorm::None {
                if !weight.is_finite() {
                    return Err(Error::NonFinite {
                        context: "penalty weight",
                    });
                }
                if weight < F::zero() {
                    return Err(Error::PenaltyMismatch {
                        detail: "penalty weights must be non-negative".into(),
                    });
                }
            }
            norms.push(norm);
            weights.push(if norm == PenaltyNorm::None {
                F::zero()
            } else {
                weight
            });
        }
        let has_l1 = norms.iter().any(|&n| n == PenaltyNorm::L1);
        let has_l2 = norms.iter().any(|&n| n == PenaltyNorm::L2);
        if has_l1 && has_l2 {
            return Err(Error::PenaltyMismatch {
                detail: "cannot mix l1 and l2 entries in one spec".into(),
            });
        }
        Ok(Self { norms, weights })
    }

    /// All entries unpenalized.
    pub fn unpenalized(model: &PolynomialModel) -> Self {
        Self {
            norms: vec![PenaltyNorm::None; model.len()],
            weights: vec![F::zero(); model.len()],
        }
    }

    /// Applies `(total degree, weight)` pairs with the given norm; monomials
    /// of unlisted degrees stay unpenalized.
    pub fn by_total_degree(
        model: &PolynomialModel,
        norm: PenaltyNorm,
        degree_weights: &[(u32, F)],
    ) -> Result<Self> {
        let entries = model
            .monomials()
            .iter()
            .map(|m| {
                match degree_weights
                    .iter()
                    .find(|(d, _)| *d == m.total_degree())
                {
                    Some(&(_, w)) => (norm, w),
                    None => (PenaltyNorm::None, F::zero()),
                }
            })
            .collect();
        Self::from_entries(entries)
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn norm(&self, j: usize) -> PenaltyNorm {
        self.norms[j]
    }

    pub fn weight(&self, j: usize) -> F {
        self.weights[j]
    }

    /// The non-`None` norm used by this spec, if any entry is penalized.
    pub fn kind(&self) -> Option<PenaltyNorm> {
        self.norms
            .iter()
            .find(|&&n| n != PenaltyNorm::None)
            .copied()
    }

    fn check_len(&self, design: &DesignMatrix<F>) -> Result<()> {
        if self.len() != design.n_cols() {
            return Err(Error::PenaltyMismatch {
                detail: format!(
                    "penalty has {} entries, model has {} monomials",
                    self.len(),
                    design.n_cols()
                ),
            });
        }
        Ok(())
    }

    fn penalty_value(&self, theta: &[F]) -> F {
        let mut acc = F::zero();
        for j in 0..self.len() {
            match self.norms[j] {
                PenaltyNorm::None => {}
                PenaltyNorm::L2 => acc += self.weights[j] * theta[j] * theta[j],
                PenaltyNorm::L1 => acc += self.weights[j] * theta[j].abs(),
            }
        }
        acc
    }
}

/// Outcome of a fit: coefficients keyed by monomial plus per-row diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult<F> {
    pub coefficients: PolynomialCoefficients<F>,
    pub fitted: Vec<F>,
    pub residuals: Vec<F>,
    pub ssr: F,
    pub objective: F,
}

/// Fitting method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ols,
    Ridge,
    Lasso,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Ols => "OLS",
            Method::Ridge => "RIDGE",
            Method::Lasso => "LASSO",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ols" => Ok(Method::Ols),
            "ridge" => Ok(Method::Ridge),
            "lasso" => Ok(Method::Lasso),
            other => Err(Error::ModelParse {
                detail: format!("unknown method `{other}`"),
            }),
        }
    }
}

/// Checks that a penalty spec is usable with a method: OLS takes no penalty,
/// ridge takes L2-or-none entries, the L1 fit takes L1-or-none entries.
pub fn check_method_penalty<F: Scalar>(method: Method, penalty: &PenaltySpec<F>) -> Result<()> {
    let ok = match method {
        Method::Ols => penalty.kind().is_none(),
        Method::Ridge => penalty.kind() != Some(PenaltyNorm::L1),
        Method::Lasso => penalty.kind() != Some(PenaltyNorm::L2),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::PenaltyMismatch {
            detail: format!("method {method} is incompatible with the penalty norms"),
        })
    }
}

fn check_response<F: Scalar>(design: &DesignMatrix<F>, y: &[F]) -> Result<()> {
    if y.len() != design.n_rows() {
        return Err(Error::DimensionMismatch {
            context: "response vector",
            expected: design.n_rows(),
            actual: y.len(),
        });
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "response vector",
        });
    }
    Ok(())
}

fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn gram_with_diag<F: Scalar>(design: &DesignMatrix<F>, diag: &[F]) -> SymMat<F> {
    let m = design.n_cols();
    let mut g = SymMat::zeros(m);
    for j in 0..m {
        for k in j..m {
            let v = dot(design.column(j), design.column(k));
            g.set(j, k, v);
            g.set(k, j, v);
        }
    }
    for (j, &d) in diag.iter().enumerate() {
        g.add_to(j, j, d);
    }
    g
}

fn xty<F: Scalar>(design: &DesignMatrix<F>, y: &[F]) -> Vec<F> {
    (0..design.n_cols())
        .map(|j| dot(design.column(j), y))
        .collect()
}

fn fitted_values<F: Scalar>(design: &DesignMatrix<F>, theta: &[F]) -> Vec<F> {
    let mut fitted = vec![F::zero(); design.n_rows()];
    for (j, &t) in theta.iter().enumerate() {
        if t == F::zero() {
            continue;
        }
        for (f, &x) in fitted.iter_mut().zip(design.column(j)) {
            *f += t * x;
        }
    }
    fitted
}

fn assemble_fit<F: Scalar>(
    design: &DesignMatrix<F>,
    y: &[F],
    theta: Vec<F>,
    penalty: Option<&PenaltySpec<F>>,
) -> Result<FitResult<F>> {
    let fitted = fitted_values(design, &theta);
    let residuals: Vec<F> = y.iter().zip(&fitted).map(|(&yi, &fi)| yi - fi).collect();
    let ssr: F = residuals.iter().map(|&r| r * r).sum();
    let objective = match penalty {
        Some(p) => ssr + p.penalty_value(&theta),
        None => ssr,
    };
    Ok(FitResult {
        coefficients: PolynomialCoefficients::new(design.model().clone(), theta)?,
        fitted,
        residuals,
        ssr,
        objective,
    })
}

/// Ordinary least squares: solves the normal equations `(X'X) theta = X'y`.
/// Numerically rank-deficient systems are rejected rather than resolved by a
/// minimum-norm rule.
pub fn fit_ols<F: Scalar>(design: &DesignMatrix<F>, y: &[F]) -> Result<FitResult<F>> {
    check_response(design, y)?;
    let g = gram_with_diag(design, &vec![F::zero(); design.n_cols()]);
    let solved = solve_spd(&g, &xty(design, y))?;
    assemble_fit(design, y, solved.solution, None)
}

/// Weighted ridge with unpenalized slots: solves `(X'X + D) theta = X'y`
/// where `D` is diagonal with the L2 weights (zero for unpenalized entries).
pub fn fit_ridge_weighted<F: Scalar>(
    design: &DesignMatrix<F>,
    y: &[F],
    penalty: &PenaltySpec<F>,
) -> Result<FitResult<F>> {
    check_response(design, y)?;
    penalty.check_len(design)?;
    check_method_penalty(Method::Ridge, penalty)?;
    let diag: Vec<F> = (0..penalty.len()).map(|j| penalty.weight(j)).collect();
    let g = gram_with_diag(design, &diag);
    let solved = solve_spd(&g, &xty(design, y))?;
    assemble_fit(design, y, solved.solution, Some(penalty))
}

fn soft_threshold<F: Scalar>(z: F, gamma: F) -> F {
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        F::zero()
    }
}

/// Weighted L1 fit by cyclic coordinate descent with soft thresholding.
/// Unpenalized coordinates take an exact least-squares step. Coordinates are
/// visited in canonical model order from a zero start.
pub fn fit_lasso_weighted<F: Scalar>(
    design: &DesignMatrix<F>,
    y: &[F],
    penalty: &PenaltySpec<F>,
) -> Result<FitResult<F>> {
    check_response(design, y)?;
    penalty.check_len(design)?;
    check_method_penalty(Method::Lasso, penalty)?;

    let m = design.n_cols();
    let col_norms: Vec<F> = (0..m)
        .map(|j| dot(design.column(j), design.column(j)))
        .collect();
    let base_target = crate::constant::<F>(LASSO_SWEEP_TARGET);
    let required = crate::constant::<F>(LASSO_CONVERGENCE_TOL);

    let mut theta = vec![F::zero(); m];
    let mut residual = y.to_vec();
    let mut last_max_delta = F::infinity();
    for _sweep in 0..MAX_LASSO_SWEEPS {
        if _sweep % 20000 == 19999 {
            eprintln!("DEBUG sweep {_sweep}: last_max_delta={last_max_delta:e} theta={theta:?}");
        }
        let mut max_delta = F::zero();
        let mut max_theta = F::zero();
        for j in 0..m {
            if col_norms[j] == F::zero() {
                continue;
            }
            let rho = dot(design.column(j), &residual) + col_norms[j] * theta[j];
            let new = match penalty.norm(j) {
                PenaltyNorm::L1 => {
                    soft_threshold(rho, penalty.weight(j) / crate::constant::<F>(2.0))
                        / col_norms[j]
                }
                PenaltyNorm::None => rho / col_norms[j],
                PenaltyNorm::L2 => unreachable!("rejected by check_method_penalty"),
            };
            let delta = new - theta[j];
            if delta != F::zero() {
                for (r, &x) in residual.iter_mut().zip(design.column(j)) {
                    *r -= delta * x;
                }
                theta[j] = new;
            }
            if delta.abs() > max_delta {
                max_delta = delta.abs();
            }
            if new.abs() > max_theta {
                max_theta = new.abs();
            }
        }
        last_max_delta = max_delta;
        // The rounding noise floor of an update scales with the coefficient
        // magnitudes, so the early-exit target does too, clamped to stay
        // within the convergence contract.
        let target = (base_target * (F::one() + max_theta))
            .min(required)
            .max(base_target);
        if max_delta <= target {
            break;
        }
    }
    if last_max_delta > required {
        return Err(Error::NonConvergence {
            sweeps: MAX_LASSO_SWEEPS,
        });
    }
    assemble_fit(design, y, theta, Some(penalty))
}

/// Exact L1 minimizer for tiny models, found by enumerating the 3^k sign
/// patterns of the k penalized coordinates, solving each pattern's
/// stationarity system in closed form and keeping the sign-consistent
/// candidate with the smallest objective. Independent of the coordinate
/// descent path.
pub fn lasso_oracle_small<F: Scalar>(
    design: &DesignMatrix<F>,
    y: &[F],
    penalty: &PenaltySpec<F>,
) -> Result<FitResult<F>> {
    check_response(design, y)?;
    penalty.check_len(design)?;
    check_method_penalty(Method::Lasso, penalty)?;
    let m = design.n_cols();
    if m > ORACLE_MONOMIAL_LIMIT {
        return Err(Error::TooLarge {
            monomials: m,
            limit: ORACLE_MONOMIAL_LIMIT,
        });
    }

    let penalized: Vec<usize> = (0..m)
        .filter(|&j| penalty.norm(j) == PenaltyNorm::L1)
        .collect();
    let free: Vec<usize> = (0..m)
        .filter(|&j| penalty.norm(j) == PenaltyNorm::None)
        .collect();
    let gram = gram_with_diag(design, &vec![F::zero(); m]);
    let b = xty(design, y);
    let half = crate::constant::<F>(0.5);

    let mut best: Option<(F, Vec<F>)> = None;
    let patterns = 3usize.pow(penalized.len() as u32);
    for code in 0..patterns {
        // decode the sign pattern: 0 -> fixed at zero, 1 -> +, 2 -> -
        let mut signs = Vec::with_capacity(penalized.len());
        let mut rest = code;
        for _ in 0..penalized.len() {
            signs.push(rest % 3);
            rest /= 3;
        }
        let mut support: Vec<usize> = free.clone();
        let mut sign_of: Vec<F> = vec![F::zero(); m];
        for (pos, &j) in penalized.iter().enumerate() {
            match signs[pos] {
                0 => {}
                1 => {
                    support.push(j);
                    sign_of[j] = F::one();
                }
                _ => {
                    support.push(j);
                    sign_of[j] = -F::one();
                }
            }
        }
        support.sort_unstable();

        let mut theta = vec![F::zero(); m];
        if !support.is_empty() {
            let k = support.len();
            let mut sub = SymMat::zeros(k);
            let mut rhs = vec![F::zero(); k];
            for (a, &ja) in support.iter().enumerate() {
                for (bi, &jb) in support.iter().enumerate() {
                    sub.set(a, bi, gram.at(ja, jb));
                }
                rhs[a] = b[ja] - half * penalty.weight(ja) * sign_of[ja];
            }
            let fact = match crate::linalg::Ldlt::factorize(&sub) {
                Some(f) => f,
                None => continue,
            };
            let sol = fact.solve(&rhs);
            let mut consistent = true;
            for (a, &ja) in support.iter().enumerate() {
                theta[ja] = sol[a];
                if sign_of[ja] != F::zero() && sol[a] * sign_of[ja] < F::zero() {
                    consistent = false;
                    break;
                }
            }
            if !consistent {
                continue;
            }
        }

        let fitted = fitted_values(design, &theta);
        let ssr: F = y
            .iter()
            .zip(&fitted)
            .map(|(&yi, &fi)| (yi - fi) * (yi - fi))
            .sum();
        let objective = ssr + penalty.penalty_value(&theta);
        if best.as_ref().map_or(true, |(obj, _)| objective < *obj) {
            best = Some((objective, theta));
        }
    }

    let (_, theta) = best.ok_or(Error::RankDeficient {
        condition: f64::INFINITY,
    })?;
    assemble_fit(design, y, theta, Some(penalty))
}

/// Predictions of a polynomial on marker rows.
pub fn predict<F: Scalar>(
    coefficients: &PolynomialCoefficients<F>,
    markers: &MarkerMatrix<F>,
) -> Result<Vec<F>> {
    if coefficients.model().num_variables() != markers.n_markers() {
        return Err(Error::DimensionMismatch {
            context: "prediction markers",
            expected: coefficients.model().num_variables(),
            actual: markers.n_markers(),
        });
    }
    markers.rows().map(|row| coefficients.evaluate(row)).collect()
}

/// Infinity-norm condition estimate of `X'X + D`, with `D` taken from the L2
/// entries of `penalty` when given. Infinite for numerically singular
/// systems.
pub fn condition_estimate<F: Scalar>(
    design: &DesignMatrix<F>,
    penalty: Option<&PenaltySpec<F>>,
) -> Result<F> {
    let diag: Vec<F> = match penalty {
        Some(p) => {
            p.check_len(design)?;
            (0..p.len())
                .map(|j| {
                    if p.norm(j) == PenaltyNorm::L2 {
                        p.weight(j)
                    } else {
                        F::zero()
                    }
                })
                .collect()
        }
        None => vec![F::zero(); design.n_cols()],
    };
    Ok(condition_of(&gram_with_diag(design, &diag)))
}

/// Largest stationarity violation of an L1 fit: for penalized nonzero
/// coefficients `|2 x_j' r - w_j sign(theta_j)|`, for penalized zeros the
/// excess of `|2 x_j' r|` over `w_j`, for unpenalized coordinates
/// `|x_j' r|`.
pub fn lasso_kkt_violation<F: Scalar>(
    design: &DesignMatrix<F>,
    y: &[F],
    penalty: &PenaltySpec<F>,
    theta: &[F],
) -> Result<F> {
    check_response(design, y)?;
    penalty.check_len(design)?;
    if theta.len() != design.n_cols() {
        return Err(Error::DimensionMismatch {
            context: "coefficient vector",
            expected: design.n_cols(),
            actual: theta.len(),
        });
    }
    let fitted = fitted_values(design, theta);
    let residual: Vec<F> = y.iter().zip(&fitted).map(|(&yi, &fi)| yi - fi).collect();
    let two = crate::constant::<F>(2.0);
    let mut worst = F::zero();
    for j in 0..design.n_cols() {
        let grad = dot(design.column(j), &residual);
        let violation = match penalty.norm(j) {
            PenaltyNorm::None => grad.abs(),
            PenaltyNorm::L1 => {
                if theta[j] != F::zero() {
                    (two * grad - penalty.weight(j) * theta[j].signum()).abs()
                } else {
                    ((two * grad).abs() - penalty.weight(j)).max(F::zero())
                }
            }
            PenaltyNorm::L2 => (two * grad - two * penalty.weight(j) * theta[j]).abs(),
        };
        if violation > worst {
            worst = violation;
        }
    }
    Ok(worst)
}

/// Dispatches to the fit matching `method`.
pub fn fit_with_method<F: Scalar>(
    method: Method,
    design: &DesignMatrix<F>,
    y: &[F],
    penalty: &PenaltySpec<F>,
) -> Result<FitResult<F>> {
    check_method_penalty(method, penalty)?;
    match method {
        Method::Ols => fit_ols(design, y),
        Method::Ridge => fit_ridge_weighted(design, y, penalty),
        Method::Lasso => fit_lasso_weighted(design, y, penalty),
    }
}
