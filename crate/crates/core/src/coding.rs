//! Marker matrices, coding translations and design-matrix construction.

use crate::poly::{Monomial, PolynomialModel};
use crate::{Error, Result, Scalar};

/// `n x p` matrix of marker codes: rows are individuals, columns are loci.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkerMatrix<F> {
    data: Vec<F>,
    n: usize,
    p: usize,
}

impl<F: Scalar> MarkerMatrix<F> {
    /// Builds from row-major data of length `n * p`.
    pub fn new(n: usize, p: usize, data: Vec<F>) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != n * p {
            return Err(Error::DimensionMismatch {
                context: "marker matrix data",
                expected: n * p,
                actual: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "marker matrix",
            });
        }
        Ok(Self { data, n, p })
    }

    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != p) {
            return Err(Error::DimensionMismatch {
                context: "marker matrix rows",
                expected: p,
                actual: rows.iter().map(Vec::len).find(|&l| l != p).unwrap_or(0),
            });
        }
        Self::new(n, p, rows.concat())
    }

    pub fn n_individuals(&self) -> usize {
        self.n
    }

    pub fn n_markers(&self) -> usize {
        self.p
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.p..(i + 1) * self.p]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[F]> {
        self.data.chunks_exact(self.p)
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i * self.p + j]
    }

    /// Per-column arithmetic means. Subtracting them makes every column sum
    /// to zero.
    pub fn column_mean_translation(&self) -> TranslationVector<F> {
        let n = F::from_usize(self.n).expect("row count fits in scalar");
        let mut sums = vec![F::zero(); self.p];
        for row in self.rows() {
            for (s, &v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        TranslationVector {
            shifts: sums.into_iter().map(|s| s / n).collect(),
        }
    }

    /// Subtracts `shift_j` from column `j`.
    pub fn apply_translation(&self, translation: &TranslationVector<F>) -> Result<Self> {
        if translation.len() != self.p {
            return Err(Error::DimensionMismatch {
                context: "translation vector",
                expected: self.p,
                actual: translation.len(),
            });
        }
        let data = self
            .data
            .chunks_exact(self.p)
            .flat_map(|row| {
                row.iter()
                    .zip(translation.as_slice())
                    .map(|(&v, &s)| v - s)
            })
            .collect();
        Self::new(self.n, self.p, data)
    }
}

/// Constant shift subtracted from each marker column.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationVector<F> {
    shifts: Vec<F>,
}

impl<F: Scalar> TranslationVector<F> {
    pub fn new(shifts: Vec<F>) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if shifts.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "translation vector",
            });
        }
        Ok(Self { shifts })
    }

    pub fn zero(p: usize) -> Self {
        Self {
            shifts: vec![F::zero(); p],
        }
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn as_slice(&self) -> &[F] {
        &self.shifts
    }

    pub fn negated(&self) -> Self {
        Self {
            shifts: self.shifts.iter().map(|&s| -s).collect(),
        }
    }
}

/// Regressor matrix with one column per model monomial, canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix<F> {
    model: PolynomialModel,
    n_rows: usize,
    columns: Vec<Vec<F>>,
}

impl<F: Scalar> DesignMatrix<F> {
    pub fn model(&self) -> &PolynomialModel {
        &self.model
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[F] {
        &self.columns[j]
    }

    pub fn column_for(&self, monomial: &Monomial) -> Option<&[F]> {
        self.model.index_of(monomial).map(|j| self.column(j).as_ref())
    }

    pub fn entry(&self, i: usize, j: usize) -> F {
        self.columns[j][i]
    }
}

/// Evaluates every model monomial on every marker row. The intercept column
/// is all ones; the column of a monomial holds the per-row products
/// `prod_k M[i,k]^{d_k}`.
pub fn build_design_matrix<F: Scalar>(
    markers: &MarkerMatrix<F>,
    model: &PolynomialModel,
) -> Result<DesignMatrix<F>> {
    if model.num_variables() != markers.n_markers() {
        return Err(Error::DimensionMismatch {
            context: "design matrix variables",
            expected: markers.n_markers(),
            actual: model.num_variables(),
        });
    }
    let n = markers.n_individuals();
    let columns = model
        .monomials()
        .iter()
        .map(|m| {
            markers
                .rows()
                .map(|row| {
                    let mut v = F::one();
                    for (index, power) in m.exponents() {
                        v = v * row[index].powi(power as i32);
                    }
                    v
                })
                .collect::<Vec<F>>()
        })
        .collect();
    Ok(DesignMatrix {
        model: model.clone(),
        n_rows: n,
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    pub(crate) fn example_markers() -> MarkerMatrix<f64> {
        MarkerMatrix::from_rows(&[
            vec![2.0, 2.0],
            vec![1.0, 2.0],
            vec![2.0, 0.0],
            vec![2.0, 1.0],
            vec![1.0, 0.0],
        ])
        .unwrap()
    }

    fn pairwise_model() -> PolynomialModel {
        PolynomialModel::auto_degree(2, 2).unwrap()
    }

    #[test]
    fn column_means_of_example_matrix() {
        let t = example_markers().column_mean_translation();
        assert_eq!(t.as_slice(), &[1.6, 1.0]);
    }

    #[test]
    fn column_means_trivia() {
        let zeros = MarkerMatrix::new(3, 2, vec![0.0; 6]).unwrap();
        assert_eq!(zeros.column_mean_translation().as_slice(), &[0.0, 0.0]);
        let single = MarkerMatrix::new(1, 3, vec![1.5, -2.0, 7.0]).unwrap();
        assert_eq!(single.column_mean_translation().as_slice(), &[1.5, -2.0, 7.0]);
    }

    #[test]
    fn translation_shifts_rows() {
        let m = example_markers();
        let t = m.column_mean_translation();
        let shifted = m.apply_translation(&t).unwrap();
        assert!((shifted.get(0, 0) - 0.4).abs() < 1e-15);
        assert!((shifted.get(0, 1) - 1.0).abs() < 1e-15);
        // columns of the centered matrix sum to zero
        for j in 0..2 {
            let s: f64 = (0..5).map(|i| shifted.get(i, j)).sum();
            assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn zero_translation_and_inverse() {
        let m = example_markers();
        let zero = TranslationVector::zero(2);
        assert_eq!(m.apply_translation(&zero).unwrap(), m);
        let t = TranslationVector::new(vec![0.7, -1.3]).unwrap();
        let back = m
            .apply_translation(&t)
            .unwrap()
            .apply_translation(&t.negated())
            .unwrap();
        for i in 0..5 {
            for j in 0..2 {
                assert!((back.get(i, j) - m.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn translation_length_is_checked() {
        let m = example_markers();
        let t = TranslationVector::new(vec![1.0]).unwrap();
        assert!(matches!(
            m.apply_translation(&t),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn design_matrix_rows_are_monomial_products() {
        let x = build_design_matrix(&example_markers(), &pairwise_model()).unwrap();
        assert_eq!(x.n_cols(), 4);
        let row0: Vec<f64> = (0..4).map(|j| x.entry(0, j)).collect();
        assert_eq!(row0, vec![1.0, 2.0, 2.0, 4.0]);
        // zero factor kills the product column
        let row4: Vec<f64> = (0..4).map(|j| x.entry(4, j)).collect();
        assert_eq!(row4, vec![1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn intercept_only_design_is_all_ones() {
        let model = PolynomialModel::new(vec![Monomial::intercept()], 2).unwrap();
        let x = build_design_matrix(&example_markers(), &model).unwrap();
        assert_eq!(x.n_cols(), 1);
        assert!(x.column(0).iter().all(|&v| v == 1.0));
    }

    #[test]
    fn non_finite_markers_are_rejected() {
        assert!(matches!(
            MarkerMatrix::new(1, 2, vec![1.0, f64::NAN]),
            Err(Error::NonFinite { .. })
        ));
    }
}
