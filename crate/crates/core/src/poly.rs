//! Monomials, polynomial models and coefficient vectors.
//!
//! A [`Monomial`] is a sparse map from variable index to positive power; the
//! empty map is the intercept. A [`PolynomialModel`] is an ordered,
//! duplicate-free set of monomials over `num_variables` variables, kept in
//! graded-lexicographic order so coefficient vectors and design matrices are
//! reproducible. [`PolynomialCoefficients`] attaches one real coefficient per
//! model monomial and supports evaluation and translation of the variables.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result, Scalar};

/// Largest power a single variable may carry in a monomial.
pub const MAX_EXPONENT: u32 = 8;
/// Largest total degree a monomial may have.
pub const MAX_TOTAL_DEGREE: u32 = 8;
/// Cap on monomial count for generated models (`auto_degree`, closures).
pub const MODEL_SIZE_LIMIT: usize = 10_000;

/// Product of variables with positive integer powers; `{}` is the intercept.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: BTreeMap<usize, u32>,
}

impl Monomial {
    /// The empty monomial of total degree 0.
    pub fn intercept() -> Self {
        Self {
            exponents: BTreeMap::new(),
        }
    }

    /// `x_index` to the first power.
    pub fn variable(index: usize) -> Self {
        let mut exponents = BTreeMap::new();
        exponents.insert(index, 1);
        Self { exponents }
    }

    /// Builds a monomial from `(variable index, power)` pairs. Zero powers
    /// are dropped, repeated indices accumulate.
    pub fn new(powers: impl IntoIterator<Item = (usize, u32)>) -> Result<Self> {
        let mut exponents: BTreeMap<usize, u32> = BTreeMap::new();
        for (index, power) in powers {
            if power == 0 {
                continue;
            }
            *exponents.entry(index).or_insert(0) += power;
        }
        for (&index, &power) in &exponents {
            if power > MAX_EXPONENT {
                return Err(Error::DegreeBound {
                    detail: format!(
                        "variable {} has exponent {power}, maximum is {MAX_EXPONENT}",
                        index + 1
                    ),
                });
            }
        }
        let total: u32 = exponents.values().sum();
        if total > MAX_TOTAL_DEGREE {
            return Err(Error::DegreeBound {
                detail: format!("total degree {total}, maximum is {MAX_TOTAL_DEGREE}"),
            });
        }
        Ok(Self { exponents })
    }

    fn from_map(exponents: BTreeMap<usize, u32>) -> Self {
        debug_assert!(exponents.values().all(|&p| p > 0));
        Self { exponents }
    }

    /// Sum of all powers; 0 for the intercept.
    pub fn total_degree(&self) -> u32 {
        self.exponents.values().sum()
    }

    pub fn is_intercept(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Power of `index` in this monomial (0 when absent).
    pub fn exponent(&self, index: usize) -> u32 {
        self.exponents.get(&index).copied().unwrap_or(0)
    }

    /// `(variable index, power)` pairs in increasing index order.
    pub fn exponents(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exponents.iter().map(|(&i, &p)| (i, p))
    }

    pub fn max_variable_index(&self) -> Option<usize> {
        self.exponents.keys().next_back().copied()
    }

    /// All monomials with componentwise powers between 0 and this monomial's,
    /// including the intercept and the monomial itself.
    pub fn divisors(&self) -> Vec<Monomial> {
        let mut out = vec![BTreeMap::new()];
        for (&index, &power) in &self.exponents {
            let mut next = Vec::with_capacity(out.len() * (power as usize + 1));
            for base in &out {
                for p in 0..=power {
                    let mut map = base.clone();
                    if p > 0 {
                        map.insert(index, p);
                    }
                    next.push(map);
                }
            }
            out = next;
        }
        out.into_iter().map(Monomial::from_map).collect()
    }
}

// Graded lexicographic: total degree first, then the sorted
// (index, power) pair sequences.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exponents.iter().cmp(other.exponents.iter()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Text form: `1` is the intercept; otherwise `*`-joined factors `k` or `k^d`
// with 1-based variable indices. A power-1 factor of variable 1 prints as
// `1^1` so it cannot be confused with the intercept.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_intercept() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .exponents()
            .map(|(index, power)| {
                let shown = index + 1;
                if power == 1 && index != 0 {
                    shown.to_string()
                } else {
                    format!("{shown}^{power}")
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::ModelParse {
                detail: "empty monomial".into(),
            });
        }
        if s == "1" {
            return Ok(Monomial::intercept());
        }
        let mut pairs = Vec::new();
        for factor in s.split('*') {
            let factor = factor.trim();
            let (base, power) = match factor.split_once('^') {
                Some((b, p)) => {
                    let power: u32 = p.trim().parse().map_err(|_| Error::ModelParse {
                        detail: format!("invalid exponent in `{factor}`"),
                    })?;
                    if power == 0 {
                        return Err(Error::ModelParse {
                            detail: format!("exponent must be positive in `{factor}`"),
                        });
                    }
                    (b.trim(), power)
                }
                None => (factor, 1),
            };
            let index: usize = base.parse().map_err(|_| Error::ModelParse {
                detail: format!("invalid variable index in `{factor}`"),
            })?;
            if index == 0 {
                return Err(Error::ModelParse {
                    detail: format!("variable indices are 1-based in `{factor}`"),
                });
            }
            pairs.push((index - 1, power));
        }
        Monomial::new(pairs)
    }
}

/// Result of a completeness check: missing divisor monomials, if any, in
/// canonical order with no repeats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completeness {
    pub is_complete: bool,
    pub missing: Vec<Monomial>,
}

/// Ordered, duplicate-free set of monomials over a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialModel {
    monomials: Vec<Monomial>,
    num_variables: usize,
}

impl PolynomialModel {
    pub fn new(mut monomials: Vec<Monomial>, num_variables: usize) -> Result<Self> {
        if num_variables == 0 {
            return Err(Error::VariableOutOfRange {
                index: 0,
                num_variables: 0,
            });
        }
        if monomials.is_empty() {
            return Err(Error::EmptyModel);
        }
        monomials.sort();
        for pair in monomials.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateMonomial {
                    monomial: pair[0].to_string(),
                });
            }
        }
        for m in &monomials {
            if let Some(index) = m.max_variable_index() {
                if index >= num_variables {
                    return Err(Error::VariableOutOfRange {
                        index,
                        num_variables,
                    });
                }
            }
        }
        Ok(Self {
            monomials,
            num_variables,
        })
    }

    /// All monomials with per-variable power at most 1 and total degree at
    /// most `degree`, intercept included. `degree` 2 gives the usual
    /// main-effect plus pairwise-interaction model.
    pub fn auto_degree(num_variables: usize, degree: u32) -> Result<Self> {
        if num_variables == 0 {
            return Err(Error::VariableOutOfRange {
                index: 0,
                num_variables: 0,
            });
        }
        let cap = (degree as usize).min(num_variables);
        let mut monomials = vec![Monomial::intercept()];
        let mut chosen: Vec<usize> = Vec::new();
        build_combinations(0, num_variables, cap, &mut chosen, &mut monomials)?;
        Self::new(monomials, num_variables)
    }

    /// Parses a model spec: monomials separated by newlines or `;`. When
    /// `num_variables` is absent it is inferred from the largest index used.
    pub fn parse_spec(text: &str, num_variables: Option<usize>) -> Result<Self> {
        let mut monomials = Vec::new();
        for piece in text.split(|c| c == ';' || c == '\n') {
            let piece = piece.trim_end_matches('\r').trim();
            if piece.is_empty() {
                continue;
            }
            monomials.push(piece.parse::<Monomial>()?);
        }
        if monomials.is_empty() {
            return Err(Error::ModelParse {
                detail: "model spec contains no monomials".into(),
            });
        }
        let inferred = monomials
            .iter()
            .filter_map(Monomial::max_variable_index)
            .max()
            .map(|i| i + 1)
            .unwrap_or(1);
        Self::new(monomials, num_variables.unwrap_or(inferred))
    }

    /// Renders the model back to spec text, one monomial per line.
    pub fn spec_text(&self) -> String {
        self.monomials
            .iter()
            .map(Monomial::to_string)
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, monomial: &Monomial) -> Option<usize> {
        self.monomials.binary_search(monomial).ok()
    }

    pub fn contains(&self, monomial: &Monomial) -> bool {
        self.index_of(monomial).is_some()
    }

    pub fn has_intercept(&self) -> bool {
        self.monomials
            .first()
            .map(Monomial::is_intercept)
            .unwrap_or(false)
    }

    /// Largest total degree appearing in the model.
    pub fn max_total_degree(&self) -> u32 {
        self.monomials
            .iter()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// A model is complete when every divisor of each of its monomials is
    /// also a model monomial.
    pub fn completeness_check(&self) -> Completeness {
        let present: BTreeSet<&Monomial> = self.monomials.iter().collect();
        let mut missing: BTreeSet<Monomial> = BTreeSet::new();
        for m in &self.monomials {
            for divisor in m.divisors() {
                if !present.contains(&divisor) {
                    missing.insert(divisor);
                }
            }
        }
        Completeness {
            is_complete: missing.is_empty(),
            missing: missing.into_iter().collect(),
        }
    }

    /// Smallest complete model containing this one: the union of all divisor
    /// monomials. Idempotent.
    pub fn complete_closure(&self) -> PolynomialModel {
        let mut closed: BTreeSet<Monomial> = BTreeSet::new();
        for m in &self.monomials {
            closed.extend(m.divisors());
        }
        PolynomialModel::new(closed.into_iter().collect(), self.num_variables)
            .expect("closure of a valid model is valid")
    }
}

fn build_combinations(
    start: usize,
    num_variables: usize,
    remaining: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Monomial>,
) -> Result<()> {
    if remaining == 0 {
        return Ok(());
    }
    for index in start..num_variables {
        chosen.push(index);
        out.push(Monomial::new(chosen.iter().map(|&i| (i, 1)))?);
        if out.len() > MODEL_SIZE_LIMIT {
            return Err(Error::ModelTooLarge {
                monomials: out.len(),
                limit: MODEL_SIZE_LIMIT,
            });
        }
        build_combinations(index + 1, num_variables, remaining - 1, chosen, out)?;
        chosen.pop();
    }
    Ok(())
}

/// A polynomial: one real coefficient per model monomial.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCoefficients<F> {
    model: PolynomialModel,
    values: Vec<F>,
}

impl<F: Scalar> PolynomialCoefficients<F> {
    pub fn new(model: PolynomialModel, values: Vec<F>) -> Result<Self> {
        if values.len() != model.len() {
            return Err(Error::DimensionMismatch {
                context: "coefficient vector",
                expected: model.len(),
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "polynomial coefficients",
            });
        }
        Ok(Self { model, values })
    }

    pub fn model(&self) -> &PolynomialModel {
        &self.model
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn get(&self, monomial: &Monomial) -> Option<F> {
        self.model.index_of(monomial).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, F)> + '_ {
        self.model
            .monomials()
            .iter()
            .zip(self.values.iter().copied())
    }

    pub fn max_total_degree(&self) -> u32 {
        self.model.max_total_degree()
    }

    /// Evaluates the polynomial at `point`.
    pub fn evaluate(&self, point: &[F]) -> Result<F> {
        if point.len() != self.model.num_variables() {
            return Err(Error::DimensionMismatch {
                context: "evaluation point",
                expected: self.model.num_variables(),
                actual: point.len(),
            });
        }
        let mut acc = F::zero();
        for (m, a) in self.iter() {
            let mut term = a;
            for (index, power) in m.exponents() {
                term = term * point[index].powi(power as i32);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Rewrites the polynomial in shifted variables: the result `g` satisfies
    /// `g(x) = f(x + shifts)` identically.
    ///
    /// Each monomial is expanded binomially into its divisors. Coefficients
    /// of monomials of the highest total degree receive no contributions from
    /// other terms and are copied verbatim, so they compare bitwise equal to
    /// the originals. Zero contributions are skipped, which also makes a zero
    /// shift return the polynomial unchanged.
    pub fn translate(&self, shifts: &[F]) -> Result<Self> {
        if shifts.len() != self.model.num_variables() {
            return Err(Error::DimensionMismatch {
                context: "translation vector",
                expected: self.model.num_variables(),
                actual: shifts.len(),
            });
        }
        if shifts.iter().any(|s| !s.is_finite()) {
            return Err(Error::NonFinite {
                context: "translation vector",
            });
        }
        let mut acc: BTreeMap<Monomial, F> =
            self.iter().map(|(m, a)| (m.clone(), a)).collect();
        for (m, a) in self.iter() {
            for (divisor, multiplier) in shift_expansion(m, shifts) {
                if divisor == *m {
                    continue;
                }
                let contribution = a * multiplier;
                if contribution != F::zero() {
                    *acc.entry(divisor).or_insert_with(F::zero) += contribution;
                }
            }
        }
        let (monomials, values): (Vec<_>, Vec<_>) = acc.into_iter().unzip();
        let model = PolynomialModel::new(monomials, self.model.num_variables())
            .expect("translated monomials stay within bounds");
        Self::new(model, values)
    }
}

/// Terms of `prod_k (x_k + s_k)^{d_k}`: every divisor of `m` together with
/// its multiplier `prod_k C(d_k, delta_k) s_k^{d_k - delta_k}`.
fn shift_expansion<F: Scalar>(m: &Monomial, shifts: &[F]) -> Vec<(Monomial, F)> {
    let mut terms: Vec<(BTreeMap<usize, u32>, F)> = vec![(BTreeMap::new(), F::one())];
    for (index, power) in m.exponents() {
        let mut next = Vec::with_capacity(terms.len() * (power as usize + 1));
        for (base, mult) in &terms {
            for delta in 0..=power {
                let coeff = F::from_u64(binomial(power, delta)).expect("small binomial")
                    * shifts[index].powi((power - delta) as i32);
                let mut map = base.clone();
                if delta > 0 {
                    map.insert(index, delta);
                }
                next.push((map, *mult * coeff));
            }
        }
        terms = next;
    }
    terms
        .into_iter()
        .map(|(map, mult)| (Monomial::from_map(map), mult))
        .collect()
}

fn binomial(n: u32, k: u32) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(pairs: &[(usize, u32)]) -> Monomial {
        Monomial::new(pairs.iter().copied()).unwrap()
    }

    fn model(monos: &[Monomial], p: usize) -> PolynomialModel {
        PolynomialModel::new(monos.to_vec(), p).unwrap()
    }

    #[test]
    fn total_degree_examples() {
        assert_eq!(Monomial::intercept().total_degree(), 0);
        assert_eq!(mono(&[(1, 1), (2, 1)]).total_degree(), 2);
        assert_eq!(mono(&[(1, 2)]).total_degree(), 2);
    }

    #[test]
    fn canonical_order_is_graded_lexicographic() {
        let one = Monomial::intercept();
        let x1 = Monomial::variable(0);
        let x2 = Monomial::variable(1);
        let x1x2 = mono(&[(0, 1), (1, 1)]);
        let x1sq = mono(&[(0, 2)]);
        let mut v = vec![x1sq.clone(), x1x2.clone(), x2.clone(), one.clone(), x1.clone()];
        v.sort();
        assert_eq!(v, vec![one, x1, x2, x1x2, x1sq]);
    }

    #[test]
    fn degree_bounds_are_enforced() {
        assert!(Monomial::new([(0, 9)]).is_err());
        assert!(Monomial::new([(0, 5), (1, 4)]).is_err());
        assert!(Monomial::new([(0, 8)]).is_ok());
    }

    #[test]
    fn completeness_of_pairwise_interaction_model() {
        let m = model(
            &[
                Monomial::intercept(),
                Monomial::variable(0),
                Monomial::variable(1),
                mono(&[(0, 1), (1, 1)]),
            ],
            2,
        );
        let c = m.completeness_check();
        assert!(c.is_complete);
        assert!(c.missing.is_empty());
    }

    #[test]
    fn completeness_flags_missing_main_effect() {
        let m = model(
            &[
                Monomial::intercept(),
                Monomial::variable(0),
                mono(&[(0, 1), (1, 1)]),
            ],
            2,
        );
        let c = m.completeness_check();
        assert!(!c.is_complete);
        assert_eq!(c.missing, vec![Monomial::variable(1)]);
    }

    #[test]
    fn intercept_only_model_is_complete() {
        let m = model(&[Monomial::intercept()], 1);
        assert!(m.completeness_check().is_complete);
    }

    #[test]
    fn closure_adds_missing_divisors() {
        let m = model(
            &[
                Monomial::intercept(),
                Monomial::variable(0),
                mono(&[(0, 1), (1, 1)]),
            ],
            2,
        );
        let closed = m.complete_closure();
        assert_eq!(
            closed.monomials(),
            model(
                &[
                    Monomial::intercept(),
                    Monomial::variable(0),
                    Monomial::variable(1),
                    mono(&[(0, 1), (1, 1)]),
                ],
                2,
            )
            .monomials()
        );
        // fixed point on already-complete input
        assert_eq!(closed.complete_closure(), closed);
    }

    #[test]
    fn closure_of_single_cubic_monomial() {
        let m = model(&[mono(&[(0, 2), (1, 1)])], 2);
        let closed = m.complete_closure();
        let expected = vec![
            Monomial::intercept(),
            Monomial::variable(0),
            Monomial::variable(1),
            mono(&[(0, 1), (1, 1)]),
            mono(&[(0, 2)]),
            mono(&[(0, 2), (1, 1)]),
        ];
        assert_eq!(closed.monomials(), expected.as_slice());
    }

    #[test]
    fn translate_expands_product_monomial() {
        // f = x1*x2 translated by (1, 2): g(x) = (x1+1)(x2+2)
        let m = model(&[mono(&[(0, 1), (1, 1)])], 2);
        let f = PolynomialCoefficients::new(m, vec![1.0]).unwrap();
        let g = f.translate(&[1.0, 2.0]).unwrap();
        assert_eq!(g.get(&Monomial::intercept()), Some(2.0));
        assert_eq!(g.get(&Monomial::variable(0)), Some(2.0));
        assert_eq!(g.get(&Monomial::variable(1)), Some(1.0));
        assert_eq!(g.get(&mono(&[(0, 1), (1, 1)])), Some(1.0));
        assert_eq!(g.model().len(), 4);
    }

    #[test]
    fn translate_by_zero_is_identity() {
        let m = model(
            &[Monomial::intercept(), Monomial::variable(0), mono(&[(0, 2)])],
            1,
        );
        let f = PolynomialCoefficients::new(m, vec![0.5, -1.25, 3.0]).unwrap();
        let g = f.translate(&[0.0]).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn translate_copies_top_degree_coefficient_bitwise() {
        let m = model(
            &[
                Monomial::intercept(),
                Monomial::variable(0),
                Monomial::variable(1),
                mono(&[(0, 1), (1, 1)]),
            ],
            2,
        );
        let h = -1.14_f64;
        let f = PolynomialCoefficients::new(m, vec![1.83, -0.97, 1.88, h]).unwrap();
        let g = f.translate(&[1.6, 1.0]).unwrap();
        let got = g.get(&mono(&[(0, 1), (1, 1)])).unwrap();
        assert_eq!(got.to_bits(), h.to_bits());
    }

    #[test]
    fn translate_rejects_wrong_length() {
        let m = model(&[Monomial::intercept(), Monomial::variable(0)], 1);
        let f = PolynomialCoefficients::new(m, vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            f.translate(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn evaluate_examples() {
        let m = model(&[Monomial::intercept(), Monomial::variable(0)], 1);
        let f = PolynomialCoefficients::new(m, vec![2.0, 3.0]).unwrap();
        assert_eq!(f.evaluate(&[0.0]).unwrap(), 2.0);

        let m = model(&[mono(&[(0, 1), (1, 1)])], 2);
        let f = PolynomialCoefficients::new(m, vec![1.0]).unwrap();
        assert_eq!(f.evaluate(&[2.0, 2.0]).unwrap(), 4.0);
    }

    #[test]
    fn monomial_text_round_trip() {
        for text in ["1", "2", "1^2", "1^1", "1*2", "2*3", "1^2*4"] {
            let m: Monomial = text.parse().unwrap();
            let back: Monomial = m.to_string().parse().unwrap();
            assert_eq!(m, back);
        }
        assert_eq!("1".parse::<Monomial>().unwrap(), Monomial::intercept());
        assert_eq!("2".parse::<Monomial>().unwrap(), Monomial::variable(1));
        assert_eq!("1^1".parse::<Monomial>().unwrap(), Monomial::variable(0));
        // inside a product a bare `1` is variable 1
        assert_eq!(
            "1*2".parse::<Monomial>().unwrap(),
            mono(&[(0, 1), (1, 1)])
        );
        assert!("0".parse::<Monomial>().is_err());
        assert!("2^0".parse::<Monomial>().is_err());
        assert!("x1".parse::<Monomial>().is_err());
    }

    #[test]
    fn model_spec_parsing_and_inference() {
        let m = PolynomialModel::parse_spec("1;1^1;1*2", None).unwrap();
        assert_eq!(m.num_variables(), 2);
        assert_eq!(m.len(), 3);
        assert!(!m.completeness_check().is_complete);
        assert_eq!(
            m.completeness_check().missing,
            vec![Monomial::variable(1)]
        );

        let lines = "1\n1^1\n2\n1*2\n";
        let m2 = PolynomialModel::parse_spec(lines, Some(2)).unwrap();
        assert!(m2.completeness_check().is_complete);
        assert_eq!(PolynomialModel::parse_spec(&m2.spec_text(), Some(2)).unwrap(), m2);
    }

    #[test]
    fn model_rejects_duplicates_and_bad_indices() {
        let dup = PolynomialModel::new(
            vec![Monomial::variable(0), Monomial::variable(0)],
            1,
        );
        assert!(matches!(dup, Err(Error::DuplicateMonomial { .. })));
        let oob = PolynomialModel::new(vec![Monomial::variable(3)], 2);
        assert!(matches!(oob, Err(Error::VariableOutOfRange { .. })));
        assert!(matches!(
            PolynomialModel::new(vec![], 2),
            Err(Error::EmptyModel)
        ));
    }

    #[test]
    fn auto_degree_matches_pairwise_model() {
        let m = PolynomialModel::auto_degree(3, 2).unwrap();
        // 1 + 3 main effects + 3 pairwise products
        assert_eq!(m.len(), 7);
        assert!(m.completeness_check().is_complete);
        assert!(m.has_intercept());
        assert_eq!(m.max_total_degree(), 2);
        let d1 = PolynomialModel::auto_degree(4, 1).unwrap();
        assert_eq!(d1.len(), 5);
    }

    #[test]
    fn intercept_sorts_first() {
        let m = model(
            &[mono(&[(0, 1), (1, 1)]), Monomial::intercept(), Monomial::variable(1)],
            2,
        );
        assert!(m.monomials()[0].is_intercept());
    }
}
