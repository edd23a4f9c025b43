//! Frobenius graded superalgebras: a trace `tr_A: A → {λ_A,π_A}F` whose kernel
//! contains no nonzero left ideal.

use std::sync::Arc;

use thiserror::Error;

use crate::exactmath::{Matrix, Scalar, Vector};
use crate::gsalg::{check_automorphism, AlgebraError, Degree, GradedLinearMap, GradedSuperAlgebra};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrobeniusError {
    #[error("trace must be a 1 x {expected} row, found {rows} x {cols}")]
    TraceShape { expected: usize, rows: usize, cols: usize },
    #[error("trace has shift {found}, expected {expected}")]
    ShiftMismatch { expected: Degree, found: Degree },
    #[error("trace is nonzero on basis element `{0}` outside the declared degree")]
    OffDegree(String),
}

/// A validated Frobenius structure on an algebra.
#[derive(Debug, Clone)]
pub struct FrobeniusAlgebraData {
    algebra: Arc<GradedSuperAlgebra>,
    trace: GradedLinearMap,
    degree: Degree,
    gram: Matrix,
    gram_inverse: Matrix,
}

/// Checks a trace `tr_A` of shift `(-λ_A, π_A)` where `degree = (λ_A, π_A)`.
/// Returns `Ok(None)` when the Gram matrix `tr_A(e_i e_j)` is singular.
pub fn check_frobenius(
    algebra: Arc<GradedSuperAlgebra>,
    trace: &GradedLinearMap,
    degree: &Degree,
) -> Result<Option<FrobeniusAlgebraData>, FrobeniusError> {
    let dim = algebra.dim();
    if trace.matrix.rows() != 1 || trace.matrix.cols() != dim {
        return Err(FrobeniusError::TraceShape {
            expected: dim,
            rows: trace.matrix.rows(),
            cols: trace.matrix.cols(),
        });
    }
    let expected = Degree::new(degree.lambda.iter().map(|x| -x).collect(), degree.parity);
    if trace.shift != expected {
        return Err(FrobeniusError::ShiftMismatch { expected, found: trace.shift.clone() });
    }
    for j in 0..dim {
        if !trace.matrix.get(0, j).is_zero() && algebra.degree(j) != degree {
            return Err(FrobeniusError::OffDegree(algebra.label(j).to_string()));
        }
    }
    let gram = gram_matrix(&algebra, trace);
    let Some(gram_inverse) = gram.invert().expect("square") else {
        return Ok(None);
    };
    Ok(Some(FrobeniusAlgebraData {
        algebra,
        trace: trace.clone(),
        degree: degree.clone(),
        gram,
        gram_inverse,
    }))
}

fn gram_matrix(alg: &GradedSuperAlgebra, trace: &GradedLinearMap) -> Matrix {
    let dim = alg.dim();
    let mut g = Matrix::zeros(alg.field(), dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut s = alg.field().zero();
            for (k, c) in alg.product_of_basis(i, j) {
                s = &s + &(c * trace.matrix.get(0, *k));
            }
            g.set(i, j, s);
        }
    }
    g
}

impl FrobeniusAlgebraData {
    pub fn algebra(&self) -> &Arc<GradedSuperAlgebra> {
        &self.algebra
    }

    pub fn trace(&self) -> &GradedLinearMap {
        &self.trace
    }

    /// `(λ_A, π_A)`.
    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    /// `G_{ij} = tr_A(e_i e_j)`.
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn trace_of(&self, a: &[Scalar]) -> Scalar {
        self.trace.apply(a).pop().expect("1-dim target")
    }

    /// Elements `e_j^∨` with `tr_A(e_i e_j^∨) = δ_ij`, in basis order.
    pub fn right_dual_basis(&self) -> Vec<Vector> {
        (0..self.algebra.dim()).map(|j| self.gram_inverse.column(j)).collect()
    }

    /// The unique `ψ_A` with `tr_A(a₁a₂) = (-1)^{|a₁||a₂|} tr_A(a₂ ψ_A(a₁))`.
    pub fn nakayama_automorphism(&self) -> GradedLinearMap {
        let alg = &self.algebra;
        let field = alg.field();
        let dim = alg.dim();
        // Σ_k G_{jk} ψ(e_i)_k = (-1)^{|e_i||e_j|} G_{ij}.
        let images: Vec<Vector> = (0..dim)
            .map(|i| {
                let rhs: Vector = (0..dim)
                    .map(|j| &field.sign(alg.parity(i) * alg.parity(j)) * self.gram.get(i, j))
                    .collect();
                self.gram_inverse.mul_vec(&rhs)
            })
            .collect();
        GradedLinearMap::from_images(field, dim, Degree::zero(alg.rank()), &images)
    }

    /// Re-checks the defining identity of `ψ` on every basis pair and that `ψ`
    /// is an automorphism.
    pub fn verify_nakayama(&self, psi: &GradedLinearMap) -> Result<bool, AlgebraError> {
        let alg = &self.algebra;
        let field = alg.field();
        for i in 0..alg.dim() {
            let pi = psi.image_of_basis(i);
            for j in 0..alg.dim() {
                let lhs = self.gram.get(i, j).clone();
                let rhs = &field.sign(alg.parity(i) * alg.parity(j))
                    * &self.trace_of(&alg.multiply(&alg.basis(j), &pi));
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(check_automorphism(alg, psi)?.is_automorphism())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Field;

    const Q: Field = Field::Rational;

    fn n2() -> Arc<GradedSuperAlgebra> {
        Arc::new(
            GradedSuperAlgebra::new(
                Q,
                1,
                vec!["1".into(), "u1".into()],
                vec![Degree::scalar(0, 0), Degree::scalar(1, 1)],
                [(0, 0, 0, Q.one()), (0, 1, 1, Q.one()), (1, 0, 1, Q.one())],
                vec![Q.one(), Q.zero()],
            )
            .unwrap(),
        )
    }

    fn row(v: &[i64]) -> Matrix {
        Matrix::from_i64(Q, &[v])
    }

    #[test]
    fn n2_top_coefficient_is_frobenius() {
        let tr = GradedLinearMap::new(Degree::scalar(-1, 1), row(&[0, 1]));
        let data = check_frobenius(n2(), &tr, &Degree::scalar(1, 1)).unwrap().unwrap();
        assert_eq!(data.gram(), &Matrix::from_i64(Q, &[&[0, 1], &[1, 0]]));
        let psi = data.nakayama_automorphism();
        assert_eq!(psi, GradedLinearMap::identity(&data.algebra()));
        assert!(data.verify_nakayama(&psi).unwrap());
        let duals = data.right_dual_basis();
        assert_eq!(duals, vec![vec![Q.zero(), Q.one()], vec![Q.one(), Q.zero()]]);
    }

    #[test]
    fn n2_unit_coefficient_is_not_frobenius() {
        let tr = GradedLinearMap::new(Degree::scalar(0, 0), row(&[1, 0]));
        assert!(check_frobenius(n2(), &tr, &Degree::scalar(0, 0)).unwrap().is_none());
    }

    #[test]
    fn declared_degree_must_match_support() {
        let tr = GradedLinearMap::new(Degree::scalar(-1, 1), row(&[0, 1]));
        let err = check_frobenius(n2(), &tr, &Degree::scalar(2, 0)).unwrap_err();
        assert!(matches!(err, FrobeniusError::ShiftMismatch { .. }));
        let bad = GradedLinearMap::new(Degree::scalar(-1, 1), row(&[1, 1]));
        assert!(matches!(
            check_frobenius(n2(), &bad, &Degree::scalar(1, 1)).unwrap_err(),
            FrobeniusError::OffDegree(_)
        ));
    }
}
