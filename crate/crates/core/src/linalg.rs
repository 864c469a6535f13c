//! Minimal dense symmetric solver for the normal-equation systems.
//!
//! The systems solved here are small (one row/column per model monomial), so
//! an unpivoted LDL^t factorization with an explicit infinity-norm condition
//! estimate is all that is needed.

use crate::{Error, Result, Scalar};

/// Condition-estimate limit above which a system is reported rank deficient.
pub(crate) const CONDITION_LIMIT: f64 = 1e12;

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone)]
pub(crate) struct SymMat<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: Scalar> SymMat<F> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![F::zero(); n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> F {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.n + j] += v;
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> F {
        let mut worst = F::zero();
        for i in 0..self.n {
            let row: F = (0..self.n).map(|j| self.at(i, j).abs()).sum();
            if row > worst {
                worst = row;
            }
        }
        worst
    }
}

/// LDL^t factorization of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub(crate) struct Ldlt<F> {
    n: usize,
    lower: Vec<F>,
    diag: Vec<F>,
}

impl<F: Scalar> Ldlt<F> {
    /// Returns `None` when a pivot is not strictly positive, i.e. the matrix
    /// is numerically singular or indefinite.
    pub fn factorize(a: &SymMat<F>) -> Option<Self> {
        let n = a.n();
        let mut lower = vec![F::zero(); n * n];
        let mut diag = vec![F::zero(); n];
        for j in 0..n {
            let mut d = a.at(j, j);
            for k in 0..j {
                let l_jk = lower[j * n + k];
                d -= l_jk * l_jk * diag[k];
            }
            if !(d > F::zero()) || !d.is_finite() {
                return None;
            }
            diag[j] = d;
            lower[j * n + j] = F::one();
            for i in (j + 1)..n {
                let mut v = a.at(i, j);
                for k in 0..j {
                    v -= lower[i * n + k] * lower[j * n + k] * diag[k];
                }
                lower[i * n + j] = v / d;
            }
        }
        Some(Self { n, lower, diag })
    }

    pub fn solve(&self, rhs: &[F]) -> Vec<F> {
        let n = self.n;
        let mut x = rhs.to_vec();
        // forward: L z = rhs
        for i in 0..n {
            for k in 0..i {
                let l = self.lower[i * n + k];
                let xk = x[k];
                x[i] -= l * xk;
            }
        }
        for i in 0..n {
            x[i] /= self.diag[i];
        }
        // backward: L^t x = z
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let l = self.lower[k * n + i];
                let xk = x[k];
                x[i] -= l * xk;
            }
        }
        x
    }

    /// Infinity-norm condition estimate `‖A‖∞ · ‖A⁻¹‖∞`, with the inverse
    /// recovered column by column from the factorization.
    pub fn condition_inf(&self, a: &SymMat<F>) -> F {
        let n = self.n;
        let mut inv_row_sums = vec![F::zero(); n];
        let mut unit = vec![F::zero(); n];
        for j in 0..n {
            unit[j] = F::one();
            let col = self.solve(&unit);
            unit[j] = F::zero();
            for i in 0..n {
                inv_row_sums[i] += col[i].abs();
            }
        }
        let inv_norm = inv_row_sums
            .into_iter()
            .fold(F::zero(), |acc, v| if v > acc { v } else { acc });
        a.inf_norm() * inv_norm
    }
}

#[derive(Debug)]
pub(crate) struct Solved<F> {
    pub solution: Vec<F>,
    #[allow(dead_code)]
    pub condition: F,
}

/// Condition estimate of `a`, infinite when the factorization fails.
pub(crate) fn condition_of<F: Scalar>(a: &SymMat<F>) -> F {
    match Ldlt::factorize(a) {
        Some(f) => f.condition_inf(a),
        None => F::infinity(),
    }
}

/// Solves `a x = rhs`, rejecting numerically rank-deficient systems.
pub(crate) fn solve_spd<F: Scalar>(a: &SymMat<F>, rhs: &[F]) -> Result<Solved<F>> {
    let fact = Ldlt::factorize(a).ok_or(Error::RankDeficient {
        condition: f64::INFINITY,
    })?;
    let condition = fact.condition_inf(a);
    if condition.to_f64().unwrap_or(f64::INFINITY) > CONDITION_LIMIT {
        return Err(Error::RankDeficient {
            condition: condition.to_f64().unwrap_or(f64::INFINITY),
        });
    }
    Ok(Solved {
        solution: fact.solve(rhs),
        condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(n: usize, entries: &[f64]) -> SymMat<f64> {
        let mut a = SymMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, entries[i * n + j]);
            }
        }
        a
    }

    #[test]
    fn solves_small_spd_system() {
        let a = mat(2, &[4.0, 1.0, 1.0, 3.0]);
        let solved = solve_spd(&a, &[1.0, 2.0]).unwrap();
        // exact solution of [[4,1],[1,3]] x = [1,2] is [1/11, 7/11]
        assert!((solved.solution[0] - 1.0 / 11.0).abs() < 1e-14);
        assert!((solved.solution[1] - 7.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_singular_matrix() {
        let a = mat(2, &[1.0, 1.0, 1.0, 1.0]);
        match solve_spd(&a, &[1.0, 1.0]) {
            Err(Error::RankDeficient { .. }) => {}
            other => panic!("expected RankDeficient, got {other:?}"),
        }
    }

    #[test]
    fn condition_estimate_spans_identity_and_near_singular() {
        let eye = mat(2, &[1.0, 0.0, 0.0, 1.0]);
        assert!((condition_of(&eye) - 1.0).abs() < 1e-14);
        let near = mat(2, &[1.0, 1.0, 1.0, 1.0 + 1e-13]);
        assert!(condition_of(&near) > 1e12);
    }
}
