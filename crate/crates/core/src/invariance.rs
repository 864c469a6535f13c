//! Paired-coding experiments: fit the same model under an original and a
//! translated marker coding and measure how predictions and coefficients
//! move.

use std::collections::BTreeMap;
use std::fmt;

use crate::coding::{build_design_matrix, MarkerMatrix, TranslationVector};
use crate::poly::{Monomial, PolynomialCoefficients, PolynomialModel};
use crate::solver::{fit_with_method, FitResult, Method, PenaltySpec};
use crate::{constant, Error, Result, Scalar};

/// Relative tolerance on the residual-sum identity checked by
/// [`check_proposition1`].
pub const SSR_IDENTITY_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Invariant,
    NotInvariant,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Invariant => "INVARIANT",
            Verdict::NotInvariant => "NOT_INVARIANT",
        })
    }
}

/// Outcome of the analytic rewrite check: a polynomial `f` on the original
/// coding versus its rewrite on the translated coding. No refitting happens;
/// the same function is evaluated in two coordinate systems.
#[derive(Debug, Clone, PartialEq)]
pub struct Prop1Report<F> {
    pub ssr_original: F,
    pub ssr_translated: F,
    pub ssr_within_tolerance: bool,
    pub top_degree_coeffs_equal: bool,
}

impl<F: Scalar> Prop1Report<F> {
    pub fn passed(&self) -> bool {
        self.ssr_within_tolerance && self.top_degree_coeffs_equal
    }
}

/// Rewrites `f` in the variables shifted by `shift`, evaluates both versions
/// against `y` on their respective codings, and reports whether the residual
/// sums agree to `1e-9 * (1 + SSR)` and the top-degree coefficients are
/// copied exactly.
///
/// Holds for arbitrary coefficient vectors, fitted or not.
pub fn check_proposition1<F: Scalar>(
    f: &PolynomialCoefficients<F>,
    markers: &MarkerMatrix<F>,
    shift: &TranslationVector<F>,
    y: &[F],
) -> Result<Prop1Report<F>> {
    if markers.n_markers() != f.model().num_variables() {
        return Err(Error::DimensionMismatch {
            context: "marker columns",
            expected: f.model().num_variables(),
            actual: markers.n_markers(),
        });
    }
    if y.len() != markers.n_individuals() {
        return Err(Error::DimensionMismatch {
            context: "response vector",
            expected: markers.n_individuals(),
            actual: y.len(),
        });
    }
    let rewritten = f.translate(shift.as_slice())?;
    let translated = markers.apply_translation(shift)?;

    let ssr = |poly: &PolynomialCoefficients<F>, m: &MarkerMatrix<F>| -> Result<F> {
        let mut acc = F::zero();
        for (row, &yi) in m.rows().zip(y) {
            let r = yi - poly.evaluate(row)?;
            acc += r * r;
        }
        Ok(acc)
    };
    let ssr_original = ssr(f, markers)?;
    let ssr_translated = ssr(&rewritten, &translated)?;

    let top = f.model().max_total_degree();
    let top_degree_coeffs_equal = f
        .model()
        .monomials()
        .iter()
        .filter(|m| m.total_degree() == top)
        .all(|m| rewritten.get(m) == f.get(m));

    let tol = constant::<F>(SSR_IDENTITY_RTOL) * (F::one() + ssr_original);
    Ok(Prop1Report {
        ssr_original,
        ssr_translated,
        ssr_within_tolerance: (ssr_original - ssr_translated).abs() <= tol,
        top_degree_coeffs_equal,
    })
}

/// Comparison of two fits of the same model and penalty under an original
/// and a translated coding.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport<F> {
    pub method: Method,
    pub tolerance: F,
    pub model_complete: bool,
    pub max_pred_diff: F,
    pub max_topdeg_coef_diff: F,
    pub per_coefficient_diffs: BTreeMap<Monomial, F>,
    pub ssr_original: F,
    pub ssr_translated: F,
    pub verdict: Verdict,
    pub fit_original: FitResult<F>,
    pub fit_translated: FitResult<F>,
}

impl<F: Scalar> InvarianceReport<F> {
    /// Key-value lines, one field per line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("invariance.method={}\n", self.method));
        out.push_str(&format!("invariance.tolerance={:e}\n", self.tolerance));
        out.push_str(&format!(
            "invariance.model_complete={}\n",
            self.model_complete
        ));
        out.push_str(&format!("invariance.ssr_original={}\n", self.ssr_original));
        out.push_str(&format!(
            "invariance.ssr_translated={}\n",
            self.ssr_translated
        ));
        out.push_str(&format!(
            "invariance.max_pred_diff={:e}\n",
            self.max_pred_diff
        ));
        out.push_str(&format!(
            "invariance.max_topdeg_coef_diff={:e}\n",
            self.max_topdeg_coef_diff
        ));
        out.push_str(&format!("invariance.verdict={}\n", self.verdict));
        for (m, d) in &self.per_coefficient_diffs {
            out.push_str(&format!("coefdiff.{m}={d:e}\n"));
        }
        out
    }

    /// CSV table of per-coefficient values and differences, full precision.
    pub fn per_coefficient_csv(&self) -> String {
        let mut out = String::from("monomial,original,translated,abs_diff\n");
        for (m, d) in &self.per_coefficient_diffs {
            let a = self.fit_original.coefficients.get(m).unwrap_or(F::zero());
            let b = self.fit_translated.coefficients.get(m).unwrap_or(F::zero());
            out.push_str(&format!("{m},{a},{b},{d}\n"));
        }
        out
    }
}

/// Fits `model` on `markers` and on `markers` shifted by `shift`, using the
/// same penalty for both codings, and reports coefficient and prediction
/// differences. Predictions are compared on the training rows. The verdict
/// is `INVARIANT` when both the prediction and top-degree coefficient
/// differences stay within `tolerance`.
pub fn run_invariance_experiment<F: Scalar>(
    markers: &MarkerMatrix<F>,
    y: &[F],
    model: &PolynomialModel,
    penalty: &PenaltySpec<F>,
    shift: &TranslationVector<F>,
    method: Method,
    tolerance: F,
) -> Result<InvarianceReport<F>> {
    let design = build_design_matrix(markers, model)?;
    let fit_original = fit_with_method(method, &design, y, penalty)?;

    let translated = markers.apply_translation(shift)?;
    let design_t = build_design_matrix(&translated, model)?;
    let fit_translated = fit_with_method(method, &design_t, y, penalty)?;

    let max_pred_diff = fit_original
        .fitted
        .iter()
        .zip(&fit_translated.fitted)
        .map(|(&a, &b)| (a - b).abs())
        .fold(F::zero(), F::max);

    let top = model.max_total_degree();
    let mut per_coefficient_diffs = BTreeMap::new();
    let mut max_topdeg_coef_diff = F::zero();
    for (m, a) in fit_original.coefficients.iter() {
        let b = fit_translated.coefficients.get(m).unwrap_or(F::zero());
        let d = (a - b).abs();
        if m.total_degree() == top && d > max_topdeg_coef_diff {
            max_topdeg_coef_diff = d;
        }
        per_coefficient_diffs.insert(m.clone(), d);
    }

    let verdict = if max_pred_diff <= tolerance && max_topdeg_coef_diff <= tolerance {
        Verdict::Invariant
    } else {
        Verdict::NotInvariant
    };
    Ok(InvarianceReport {
        method,
        tolerance,
        model_complete: model.completeness_check().is_complete,
        max_pred_diff,
        max_topdeg_coef_diff,
        per_coefficient_diffs,
        ssr_original: fit_original.ssr,
        ssr_translated: fit_translated.ssr,
        verdict,
        fit_original,
        fit_translated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::build_design_matrix;
    use crate::solver::{fit_ols, PenaltyNorm};

    fn example_markers() -> MarkerMatrix<f64> {
        MarkerMatrix::from_rows(&[
            vec![2.0, 2.0],
            vec![1.0, 2.0],
            vec![2.0, 0.0],
            vec![2.0, 1.0],
            vec![1.0, 0.0],
        ])
        .unwrap()
    }

    fn example_response() -> Vec<f64> {
        vec![-0.72, 2.34, 0.08, -0.89, 0.86]
    }

    fn pairwise_model() -> PolynomialModel {
        PolynomialModel::auto_degree(2, 2).unwrap()
    }

    #[test]
    fn proposition_holds_for_the_ols_fit() {
        let m = example_markers();
        let y = example_response();
        let x = build_design_matrix(&m, &pairwise_model()).unwrap();
        let fit = fit_ols(&x, &y).unwrap();
        let report =
            check_proposition1(&fit.coefficients, &m, &m.column_mean_translation(), &y).unwrap();
        assert!(report.passed());
        assert!((report.ssr_original - report.ssr_translated).abs() < 1e-12);
    }

    #[test]
    fn proposition_is_trivial_for_zero_shift() {
        let m = example_markers();
        let y = example_response();
        let model = pairwise_model();
        let f = PolynomialCoefficients::new(model, vec![0.3, -2.0, 1.5, 0.7]).unwrap();
        let report = check_proposition1(&f, &m, &TranslationVector::zero(2), &y).unwrap();
        assert!(report.passed());
        assert_eq!(report.ssr_original, report.ssr_translated);
    }

    #[test]
    fn proposition_holds_for_arbitrary_coefficients() {
        let m = example_markers();
        let y = example_response();
        let f = PolynomialCoefficients::new(pairwise_model(), vec![3.0, 0.25, -4.5, 2.125])
            .unwrap();
        let shift = TranslationVector::new(vec![-0.75, 1.5]).unwrap();
        let report = check_proposition1(&f, &m, &shift, &y).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn uniform_ridge_is_not_invariant_under_centering() {
        let m = example_markers();
        let y = example_response();
        let model = pairwise_model();
        let pen = PenaltySpec::by_total_degree(&model, PenaltyNorm::L2, &[(1, 1.0), (2, 1.0)])
            .unwrap();
        let report = run_invariance_experiment(
            &m,
            &y,
            &model,
            &pen,
            &m.column_mean_translation(),
            Method::Ridge,
            1e-6,
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::NotInvariant);
        let h = Monomial::new([(0, 1), (1, 1)]).unwrap();
        let original = report.fit_original.coefficients.get(&h).unwrap();
        let translated = report.fit_translated.coefficients.get(&h).unwrap();
        assert!((original - -0.48).abs() < 0.01);
        assert!((translated - -0.57).abs() < 0.01);
        assert!(report.max_pred_diff > 1e-3);
    }

    #[test]
    fn top_degree_only_ridge_is_invariant_under_centering() {
        let m = example_markers();
        let y = example_response();
        let model = pairwise_model();
        let pen = PenaltySpec::by_total_degree(&model, PenaltyNorm::L2, &[(2, 1.0)]).unwrap();
        let report = run_invariance_experiment(
            &m,
            &y,
            &model,
            &pen,
            &m.column_mean_translation(),
            Method::Ridge,
            1e-6,
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::Invariant);
        let h = Monomial::new([(0, 1), (1, 1)]).unwrap();
        assert!((report.fit_original.coefficients.get(&h).unwrap() - -0.57).abs() < 0.01);
        assert!(report.max_pred_diff <= 1e-6);
    }

    #[test]
    fn ols_is_invariant_under_centering() {
        let m = example_markers();
        let y = example_response();
        let model = pairwise_model();
        let report = run_invariance_experiment(
            &m,
            &y,
            &model,
            &PenaltySpec::unpenalized(&model),
            &m.column_mean_translation(),
            Method::Ols,
            1e-6,
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::Invariant);
        assert!(report.model_complete);
    }

    #[test]
    fn incomplete_model_under_ols_is_not_invariant() {
        let m = example_markers();
        let y = example_response();
        let model = PolynomialModel::parse_spec("1;1^1;1*2", Some(2)).unwrap();
        let report = run_invariance_experiment(
            &m,
            &y,
            &model,
            &PenaltySpec::unpenalized(&model),
            &m.column_mean_translation(),
            Method::Ols,
            1e-6,
        )
        .unwrap();
        assert!(!report.model_complete);
        assert_eq!(report.verdict, Verdict::NotInvariant);
        assert!(report.max_pred_diff > 1e-3);
        // estimates on both codings, up to three published decimals
        let got: Vec<f64> = report.fit_original.coefficients.values().to_vec();
        for (g, e) in got.iter().zip([3.71, -2.098, -0.012]) {
            assert!((g - e).abs() <= 0.002);
        }
        let got: Vec<f64> = report.fit_translated.coefficients.values().to_vec();
        for (g, e) in got.iter().zip([0.334, -2.11, -1.162]) {
            assert!((g - e).abs() <= 0.002);
        }
    }

    #[test]
    fn report_text_is_deterministic_and_keyed() {
        let m = example_markers();
        let y = example_response();
        let model = pairwise_model();
        let pen = PenaltySpec::by_total_degree(&model, PenaltyNorm::L2, &[(2, 1.0)]).unwrap();
        let report = run_invariance_experiment(
            &m,
            &y,
            &model,
            &pen,
            &m.column_mean_translation(),
            Method::Ridge,
            1e-6,
        )
        .unwrap();
        let text = report.render_text();
        assert!(text.contains("invariance.verdict=INVARIANT"));
        assert!(text.contains("coefdiff.1^1*2="));
        let csv = report.per_coefficient_csv();
        assert!(csv.starts_with("monomial,original,translated,abs_diff\n"));
        assert_eq!(csv.lines().count(), 5);
        assert_eq!(text, report.render_text());
    }
}
