//! Unit and counit of the adjunction between induction `A ⊗_B -` and the
//! twisted shifted restriction `{-λ,π}^β A ⊗_A -`, checked on the
//! representing bimodules.
//!
//! Tensor products over `B` or `A` are computed as quotients of `A ⊗_F A`
//! (basis `e_i ⊗ e_j`, index `i · dim A + j`) by explicit relations.

use crate::exactmath::{axpy, Echelon, Matrix, Scalar, SparseRow, Vector};
use crate::extension::{DualGenerators, ExtensionData, ExtensionError};
use crate::gsalg::GradedLinearMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorSide {
    /// `A ⊗_B {-λ,π}^β A`.
    One,
    /// `{-λ,π}^β A^α ⊗_A A`.
    Two,
}

#[derive(Debug, Clone)]
pub struct BalancedTensor {
    side: TensorSide,
    dim: usize,
    relations: Echelon,
    representatives: Vec<usize>,
}

fn tensor_row(dim: usize, left: &[Scalar], right: &[Scalar], coeff: &Scalar, row: &mut std::collections::BTreeMap<usize, Scalar>) {
    for (i, l) in left.iter().enumerate() {
        if l.is_zero() {
            continue;
        }
        let li = l * coeff;
        for (j, r) in right.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let e = row.entry(i * dim + j).or_insert_with(|| coeff.field().zero());
            *e = &*e + &(&li * r);
        }
    }
}

/// Builds the quotient of `A ⊗_F A` by the balancing relations of `side`.
pub fn build_balanced_tensor(ext: &ExtensionData, side: TensorSide) -> BalancedTensor {
    let a = ext.big();
    let b = ext.small();
    let field = a.field();
    let dim = a.dim();
    let mut relations = Echelon::new(field, dim * dim);
    let one = field.one();
    let minus_one = -field.one();
    let mut push = |row: std::collections::BTreeMap<usize, Scalar>| {
        let sparse: SparseRow = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if !sparse.is_empty() {
            relations.insert_sparse(&sparse);
        }
    };
    match side {
        TensorSide::One => {
            // x b ⊗ m − (−1)^{π|b|} x ⊗ β(b) m
            for k in 0..b.dim() {
                let ib = ext.include(&b.basis(k));
                let ibeta = ext.include(&ext.beta().apply(&b.basis(k)));
                let sign = field.sign(ext.parity() * b.parity(k));
                for x in 0..dim {
                    let xb = a.multiply(&a.basis(x), &ib);
                    for m in 0..dim {
                        let bm = a.multiply(&ibeta, &a.basis(m));
                        let mut row = std::collections::BTreeMap::new();
                        tensor_row(dim, &xb, &a.basis(m), &one, &mut row);
                        tensor_row(dim, &a.basis(x), &bm, &(&minus_one * &sign), &mut row);
                        push(row);
                    }
                }
            }
        }
        TensorSide::Two => {
            // a₁ α(a) ⊗ a₂ − a₁ ⊗ a a₂
            for x in 0..dim {
                let ax = ext.alpha().apply(&a.basis(x));
                for a1 in 0..dim {
                    let left = a.multiply(&a.basis(a1), &ax);
                    for a2 in 0..dim {
                        let right = a.multiply(&a.basis(x), &a.basis(a2));
                        let mut row = std::collections::BTreeMap::new();
                        tensor_row(dim, &left, &a.basis(a2), &one, &mut row);
                        tensor_row(dim, &a.basis(a1), &right, &minus_one, &mut row);
                        push(row);
                    }
                }
            }
        }
    }
    let representatives = relations.free_columns();
    BalancedTensor { side, dim, relations, representatives }
}

impl BalancedTensor {
    pub fn side(&self) -> TensorSide {
        self.side
    }

    pub fn dimension(&self) -> usize {
        self.representatives.len()
    }

    pub fn relation_rank(&self) -> usize {
        self.relations.rank()
    }

    /// `(i, j)` with `e_i ⊗ e_j` the `k`-th representative.
    pub fn representative(&self, k: usize) -> (usize, usize) {
        let idx = self.representatives[k];
        (idx / self.dim, idx % self.dim)
    }

    /// Quotient coordinates of a vector in `A ⊗_F A`.
    pub fn project(&self, v: &[Scalar]) -> Vector {
        let mut w = v.to_vec();
        self.relations.reduce_dense(&mut w);
        self.representatives.iter().map(|&i| w[i].clone()).collect()
    }

    /// `Σ_t u_t ⊗ v_t` in `A ⊗_F A`.
    pub fn pure_sum(&self, pairs: &[(Vector, Vector)]) -> Vector {
        let field = pairs.first().map(|p| p.0[0].field());
        let Some(field) = field else { return Vec::new() };
        let mut row = std::collections::BTreeMap::new();
        for (u, v) in pairs {
            tensor_row(self.dim, u, v, &field.one(), &mut row);
        }
        let mut out = vec![field.zero(); self.dim * self.dim];
        for (i, c) in row {
            out[i] = c;
        }
        out
    }

    /// The lift `Σ_k c_k e_{i_k} ⊗ e_{j_k}` as `(i, j, c)` triples.
    pub fn lift(&self, coords: &[Scalar]) -> Vec<(usize, usize, Scalar)> {
        coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let (i, j) = self.representative(k);
                (i, j, c.clone())
            })
            .collect()
    }
}

/// `η(1) = Σ_i α⁻¹(y_i) ⊗ x_i` and the centrality check.
#[derive(Debug, Clone)]
pub struct UnitEta {
    pub tensor: BalancedTensor,
    /// Quotient coordinates of `η(1)`.
    pub eta_one: Vector,
    /// Basis indices `a'` with `a'·η(1) ≠ η(1)·α(a')`.
    pub central_failures: Vec<usize>,
}

impl UnitEta {
    pub fn is_bimodule_map(&self) -> bool {
        self.central_failures.is_empty()
    }
}

fn eta_pairs(ext: &ExtensionData, dg: &DualGenerators) -> Vec<(Vector, Vector)> {
    dg.x
        .iter()
        .zip(&dg.y)
        .map(|(x, y)| (ext.alpha_inverse().apply(y), x.clone()))
        .collect()
}

/// `η(a) = Σ_i a α⁻¹(y_i) ⊗ x_i` in quotient coordinates.
pub fn eta(ext: &ExtensionData, tensor: &BalancedTensor, dg: &DualGenerators, a_elt: &[Scalar]) -> Vector {
    let a = ext.big();
    let pairs: Vec<(Vector, Vector)> = eta_pairs(ext, dg)
        .into_iter()
        .map(|(u, v)| (a.multiply(a_elt, &u), v))
        .collect();
    tensor.project(&tensor.pure_sum(&pairs))
}

pub fn unit_eta(ext: &ExtensionData, dg: &DualGenerators) -> UnitEta {
    unit_eta_with(ext, build_balanced_tensor(ext, TensorSide::One), dg)
}

pub fn unit_eta_with(ext: &ExtensionData, tensor: BalancedTensor, dg: &DualGenerators) -> UnitEta {
    let a = ext.big();
    let eta_one = eta(ext, &tensor, dg, &a.unit());
    let base = eta_pairs(ext, dg);
    let mut central_failures = Vec::new();
    for j in 0..a.dim() {
        let e = a.basis(j);
        let left = eta(ext, &tensor, dg, &e);
        let ae = ext.alpha().apply(&e);
        let right_pairs: Vec<(Vector, Vector)> =
            base.iter().map(|(u, v)| (u.clone(), a.multiply(v, &ae))).collect();
        let right = tensor.project(&tensor.pure_sum(&right_pairs));
        if left != right {
            central_failures.push(j);
        }
    }
    UnitEta { tensor, eta_one, central_failures }
}

/// `ε({-λ,π}a₁ ⊗ a₂) = tr(a₁ α(a₂))` with its well-definedness and
/// `(B, B)`-equivariance checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounitEpsilon {
    pub relations_checked: usize,
    pub relation_failures: usize,
    pub equivariance_failures: usize,
}

impl CounitEpsilon {
    pub fn holds(&self) -> bool {
        self.relation_failures == 0 && self.equivariance_failures == 0
    }
}

pub fn epsilon(ext: &ExtensionData, tr: &GradedLinearMap, a1: &[Scalar], a2: &[Scalar]) -> Vector {
    tr.apply(&ext.big().multiply(a1, &ext.alpha().apply(a2)))
}

pub fn counit_epsilon(ext: &ExtensionData, tr: &GradedLinearMap) -> CounitEpsilon {
    let a = ext.big();
    let b = ext.small();
    let field = a.field();
    let dim = a.dim();
    // ε on e_i ⊗ e_j, extended linearly to the relation generators.
    let values: Vec<Vec<Vector>> =
        (0..dim).map(|i| (0..dim).map(|j| epsilon(ext, tr, &a.basis(i), &a.basis(j))).collect()).collect();
    let eval = |left: &[Scalar], right: &[Scalar]| -> Vector {
        let mut out = b.zero();
        for (i, l) in left.iter().enumerate() {
            if l.is_zero() {
                continue;
            }
            for (j, r) in right.iter().enumerate() {
                if !r.is_zero() {
                    axpy(&mut out, &(l * r), &values[i][j]);
                }
            }
        }
        out
    };
    let mut checked = 0;
    let mut relation_failures = 0;
    for x in 0..dim {
        let ax = ext.alpha().apply(&a.basis(x));
        for a1 in 0..dim {
            let left = a.multiply(&a.basis(a1), &ax);
            for a2 in 0..dim {
                checked += 1;
                let lhs = eval(&left, &a.basis(a2));
                let rhs = eval(&a.basis(a1), &a.multiply(&a.basis(x), &a.basis(a2)));
                if lhs != rhs {
                    relation_failures += 1;
                }
            }
        }
    }
    let mut equivariance_failures = 0;
    for k in 0..b.dim() {
        let sign = field.sign(ext.parity() * b.parity(k));
        let ibeta = ext.include(&ext.beta().apply(&b.basis(k)));
        let ib = ext.include(&b.basis(k));
        for a1 in 0..dim {
            let moved: Vector = a.multiply(&ibeta, &a.basis(a1)).iter().map(|v| &sign * v).collect();
            for a2 in 0..dim {
                let base = &values[a1][a2];
                if eval(&moved, &a.basis(a2)) != b.multiply(&b.basis(k), base) {
                    equivariance_failures += 1;
                }
                if eval(&a.basis(a1), &a.multiply(&a.basis(a2), &ib)) != b.multiply(base, &b.basis(k)) {
                    equivariance_failures += 1;
                }
            }
        }
    }
    CounitEpsilon { relations_checked: checked, relation_failures, equivariance_failures }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleReport {
    /// `{-λ,π}A → {-λ,π}A`: `(ε ⊗ id)(id ⊗ η)`.
    pub first: Matrix,
    /// `A → A`: `(id ⊗ ε)(η ⊗ id)`.
    pub second: Matrix,
}

impl TriangleReport {
    pub fn first_is_identity(&self) -> bool {
        self.first == Matrix::identity(self.first.field(), self.first.rows())
    }

    pub fn second_is_identity(&self) -> bool {
        self.second == Matrix::identity(self.second.field(), self.second.rows())
    }

    pub fn holds(&self) -> bool {
        self.first_is_identity() && self.second_is_identity()
    }
}

/// Evaluates both triangle compositions through the quotient representative
/// of `η(1)`.
pub fn check_triangle_identities(
    ext: &ExtensionData,
    tr: &GradedLinearMap,
    dg: &DualGenerators,
) -> Result<TriangleReport, ExtensionError> {
    let unit = unit_eta(ext, dg);
    triangle_from_unit(ext, tr, &unit)
}

pub fn triangle_from_unit(ext: &ExtensionData, tr: &GradedLinearMap, unit: &UnitEta) -> Result<TriangleReport, ExtensionError> {
    let a = ext.big();
    let field = a.field();
    let dim = a.dim();
    let lift = unit.tensor.lift(&unit.eta_one);
    let mut first_cols = Vec::with_capacity(dim);
    let mut second_cols = Vec::with_capacity(dim);
    for m in 0..dim {
        let e = a.basis(m);
        // m ↦ Σ c ε(m ⊗ e_i) · e_j, with w · v = (−1)^{π|w|} β(w) v.
        let mut first = a.zero();
        for (i, j, c) in &lift {
            let w = epsilon(ext, tr, &e, &a.basis(*i));
            let pw = ext.small().parity_of(&w)?;
            let s = field.sign(ext.parity() * pw);
            let acted = a.multiply(&ext.include(&ext.beta().apply(&w)), &a.basis(*j));
            axpy(&mut first, &(c * &s), &acted);
        }
        first_cols.push(first);
        // a ↦ Σ c e_i ε(e_j ⊗ a).
        let mut second = a.zero();
        for (i, j, c) in &lift {
            let w = epsilon(ext, tr, &a.basis(*j), &e);
            axpy(&mut second, c, &a.multiply(&a.basis(*i), &ext.include(&w)));
        }
        second_cols.push(second);
    }
    Ok(TriangleReport {
        first: Matrix::from_columns(field, dim, &first_cols),
        second: Matrix::from_columns(field, dim, &second_cols),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{nilcoxeter, nilcoxeter_fixture, trivial_fixture};
    use crate::extension::{find_dual_generators, find_projective_basis};

    fn dual(fx: &crate::examples::Fixture) -> DualGenerators {
        let pb = find_projective_basis(fx.ext.embedding()).unwrap();
        find_dual_generators(&fx.ext, &fx.trace.map, &pb).unwrap()
    }

    #[test]
    fn trivial_tensor_has_dimension_of_a() {
        let fx = trivial_fixture(&nilcoxeter(3).unwrap());
        assert_eq!(build_balanced_tensor(&fx.ext, TensorSide::One).dimension(), 6);
        assert_eq!(build_balanced_tensor(&fx.ext, TensorSide::Two).dimension(), 6);
    }

    #[test]
    fn n2_over_field() {
        let fx = nilcoxeter_fixture(1, 2).unwrap();
        let t = build_balanced_tensor(&fx.ext, TensorSide::One);
        assert_eq!(t.dimension(), 4);
        let dg = dual(&fx);
        let unit = unit_eta(&fx.ext, &dg);
        assert!(unit.is_bimodule_map());
        let a = fx.ext.big();
        // ε({-1,1}u₁ ⊗ 1) = tr(u₁) = 1.
        assert_eq!(epsilon(&fx.ext, &fx.trace.map, &a.basis(1), &a.unit()), vec![a.field().one()]);
        assert!(counit_epsilon(&fx.ext, &fx.trace.map).holds());
        assert!(check_triangle_identities(&fx.ext, &fx.trace.map, &dg).unwrap().holds());
    }

    #[test]
    fn n3_over_n2_tensor_dimension() {
        let fx = nilcoxeter_fixture(2, 3).unwrap();
        assert_eq!(build_balanced_tensor(&fx.ext, TensorSide::One).dimension(), 18);
        let dg = dual(&fx);
        assert!(unit_eta(&fx.ext, &dg).is_bimodule_map());
    }
}
