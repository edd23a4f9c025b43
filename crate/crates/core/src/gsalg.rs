//! Finite-dimensional Λ×Z₂-graded superalgebras with Λ = Z^r.
//!
//! An algebra is stored as a homogeneous basis, one degree per basis element,
//! and sparse structure constants. Elements are coordinate vectors over that
//! basis. Signs for super actions are always computed from stored parities.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::exactmath::{
    axpy, is_zero_vector, unit_vector, zero_vector, Field, MathError, Matrix, Scalar, SparseRow,
    Vector,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("basis element `{label}` has a degree of rank {found}, expected {expected}")]
    DegreeRank { label: String, expected: usize, found: usize },
    #[error("basis index {index} out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("map has shift {found}, expected {expected}")]
    ShiftMismatch { expected: Degree, found: Degree },
    #[error("map column {column} is not supported in degree {expected}")]
    NotGraded { column: usize, expected: Degree },
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Math(#[from] MathError),
}

/// A degree in Z^r × Z₂.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree {
    pub lambda: Vec<i64>,
    pub parity: u8,
}

impl Degree {
    pub fn new(lambda: Vec<i64>, parity: u8) -> Self {
        Degree { lambda, parity: parity % 2 }
    }

    pub fn zero(rank: usize) -> Self {
        Degree { lambda: vec![0; rank], parity: 0 }
    }

    /// Rank-one shorthand.
    pub fn scalar(lambda: i64, parity: u8) -> Self {
        Degree::new(vec![lambda], parity)
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_zero(&self) -> bool {
        self.parity == 0 && self.lambda.iter().all(|&x| x == 0)
    }
}

impl Add for &Degree {
    type Output = Degree;
    fn add(self, rhs: &Degree) -> Degree {
        assert_eq!(self.rank(), rhs.rank(), "degree rank mismatch");
        Degree {
            lambda: self.lambda.iter().zip(&rhs.lambda).map(|(a, b)| a + b).collect(),
            parity: (self.parity + rhs.parity) % 2,
        }
    }
}

impl Sub for &Degree {
    type Output = Degree;
    fn sub(self, rhs: &Degree) -> Degree {
        self + &(-rhs)
    }
}

impl Neg for &Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree { lambda: self.lambda.iter().map(|a| -a).collect(), parity: self.parity }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lambda.iter().map(ToString::to_string).collect();
        write!(f, "({},{})", parts.join(","), self.parity)
    }
}

/// One of the ways a table can fail to define a unital graded associative
/// algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `e_i e_j` has a nonzero coefficient on `e_k` of the wrong degree.
    Grading { i: usize, j: usize, k: usize },
    Associativity { i: usize, j: usize, k: usize },
    UnitNotHomogeneousOfDegreeZero,
    UnitLeft { i: usize },
    UnitRight { i: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Grading { i, j, k } => write!(f, "grading violated by triple ({i},{j},{k})"),
            Violation::Associativity { i, j, k } => {
                write!(f, "associativity fails on triple ({i},{j},{k})")
            }
            Violation::UnitNotHomogeneousOfDegreeZero => write!(f, "unit is not of degree zero"),
            Violation::UnitLeft { i } => write!(f, "1*e_{i} != e_{i}"),
            Violation::UnitRight { i } => write!(f, "e_{i}*1 != e_{i}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSuperAlgebra {
    field: Field,
    rank: usize,
    labels: Vec<String>,
    degrees: Vec<Degree>,
    /// `table[i * dim + j]` holds `e_i e_j`.
    table: Vec<SparseRow>,
    unit: Vector,
}

fn sign(field: Field, parity: u8) -> Scalar {
    field.sign(parity)
}

impl GradedSuperAlgebra {
    /// Assembles an algebra from structure constants `(i, j, k, c)` meaning
    /// `e_i e_j` has coefficient `c` on `e_k`. Repeated triples accumulate.
    /// Only structural problems are errors here; algebraic ones are reported
    /// by [`GradedSuperAlgebra::validate`].
    pub fn new(
        field: Field,
        rank: usize,
        labels: Vec<String>,
        degrees: Vec<Degree>,
        products: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
        unit: Vector,
    ) -> Result<Self, AlgebraError> {
        let dim = labels.len();
        if degrees.len() != dim {
            return Err(AlgebraError::DimensionMismatch { expected: dim, found: degrees.len() });
        }
        if unit.len() != dim {
            return Err(AlgebraError::DimensionMismatch { expected: dim, found: unit.len() });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(AlgebraError::DuplicateLabel(l.clone()));
            }
        }
        for (l, d) in labels.iter().zip(&degrees) {
            if d.rank() != rank {
                return Err(AlgebraError::DegreeRank {
                    label: l.clone(),
                    expected: rank,
                    found: d.rank(),
                });
            }
        }
        if let Some(x) = unit.iter().find(|x| x.field() != field) {
            return Err(MathError::FieldMismatch(field, x.field()).into());
        }
        let mut dense: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); dim * dim];
        for (i, j, k, c) in products {
            for idx in [i, j, k] {
                if idx >= dim {
                    return Err(AlgebraError::IndexOutOfRange { index: idx, dim });
                }
            }
            if c.field() != field {
                return Err(MathError::FieldMismatch(field, c.field()).into());
            }
            let entry = dense[i * dim + j].entry(k).or_insert_with(|| field.zero());
            *entry = &*entry + &c;
        }
        let table = dense
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, c)| !c.is_zero()).collect())
            .collect();
        Ok(GradedSuperAlgebra { field, rank, labels, degrees, table, unit })
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground_field(field: Field, rank: usize) -> Self {
        GradedSuperAlgebra::new(
            field,
            rank,
            vec!["1".into()],
            vec![Degree::zero(rank)],
            [(0, 0, 0, field.one())],
            vec![field.one()],
        )
        .expect("ground field is well formed")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn degrees(&self) -> &[Degree] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> &Degree {
        &self.degrees[i]
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.degrees[i].parity
    }

    /// Structure constants of `e_i e_j`.
    pub fn product_of_basis(&self, i: usize, j: usize) -> &SparseRow {
        &self.table[i * self.dim() + j]
    }

    pub fn unit(&self) -> Vector {
        self.unit.clone()
    }

    pub fn zero(&self) -> Vector {
        zero_vector(self.field, self.dim())
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vector(self.field, self.dim(), i)
    }

    /// Distinct degrees of basis elements, sorted.
    pub fn distinct_degrees(&self) -> Vec<Degree> {
        let mut ds = self.degrees.clone();
        ds.sort();
        ds.dedup();
        ds
    }

    pub fn indices_of_degree(&self, d: &Degree) -> Vec<usize> {
        (0..self.dim()).filter(|&i| &self.degrees[i] == d).collect()
    }

    /// Structure-constant triples `(i, j, k, c)` with nonzero `c`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let dim = self.dim();
        let mut out = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for (k, c) in self.product_of_basis(i, j) {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    /// Bilinear extension of the structure constants.
    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let dim = self.dim();
        let mut out = self.zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, s) in &self.table[i * dim + j] {
                    out[*k] = &out[*k] + &(&c * s);
                }
            }
        }
        out
    }

    /// Degree of a homogeneous element; `Ok(None)` for zero.
    pub fn degree_of(&self, v: &[Scalar]) -> Result<Option<Degree>, AlgebraError> {
        let mut found: Option<&Degree> = None;
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match found {
                None => found = Some(&self.degrees[i]),
                Some(d) if d == &self.degrees[i] => {}
                Some(_) => return Err(AlgebraError::NotHomogeneous),
            }
        }
        Ok(found.cloned())
    }

    /// Parity of a homogeneous element (zero counts as even).
    pub fn parity_of(&self, v: &[Scalar]) -> Result<u8, AlgebraError> {
        Ok(self.degree_of(v)?.map_or(0, |d| d.parity))
    }

    /// Splits an element into its homogeneous components.
    pub fn components(&self, v: &[Scalar]) -> BTreeMap<Degree, Vector> {
        let mut out: BTreeMap<Degree, Vector> = BTreeMap::new();
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let comp = out.entry(self.degrees[i].clone()).or_insert_with(|| self.zero());
            comp[i] = x.clone();
        }
        out
    }

    /// Confirms grading compatibility, associativity on all basis triples and
    /// that the unit is a two-sided identity of degree zero.
    pub fn validate(&self) -> ValidationReport {
        let dim = self.dim();
        let mut violations = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let expected = &self.degrees[i] + &self.degrees[j];
                for (k, _) in self.product_of_basis(i, j) {
                    if self.degrees[*k] != expected {
                        violations.push(Violation::Grading { i, j, k: *k });
                    }
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let ij = self.product_of_basis(i, j);
                for k in 0..dim {
                    let jk = self.product_of_basis(j, k);
                    let mut left = self.zero();
                    for (m, c) in ij {
                        for (n, s) in self.product_of_basis(*m, k) {
                            left[*n] = &left[*n] + &(c * s);
                        }
                    }
                    let mut right = self.zero();
                    for (m, c) in jk {
                        for (n, s) in self.product_of_basis(i, *m) {
                            right[*n] = &right[*n] + &(c * s);
                        }
                    }
                    if left != right {
                        violations.push(Violation::Associativity { i, j, k });
                    }
                }
            }
        }
        match self.degree_of(&self.unit) {
            Ok(Some(d)) if d.is_zero() => {}
            _ => violations.push(Violation::UnitNotHomogeneousOfDegreeZero),
        }
        for i in 0..dim {
            let e = self.basis(i);
            if self.multiply(&self.unit, &e) != e {
                violations.push(Violation::UnitLeft { i });
            }
            if self.multiply(&e, &self.unit) != e {
                violations.push(Violation::UnitRight { i });
            }
        }
        ValidationReport { violations }
    }

    /// Matrix of `m ↦ a m`.
    pub fn left_mult_matrix(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.multiply(a, &self.basis(j))).collect();
        Matrix::from_columns(self.field, self.dim(), &cols)
    }

    /// Matrix of `m ↦ m a` (no sign).
    pub fn right_mult_matrix(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.multiply(&self.basis(j), a)).collect();
        Matrix::from_columns(self.field, self.dim(), &cols)
    }

    /// Left multiplication `λ_a` as a graded map of shift `deg a`.
    pub fn left_mult(&self, a: &[Scalar]) -> Result<GradedLinearMap, AlgebraError> {
        let shift = self.degree_of(a)?.unwrap_or_else(|| Degree::zero(self.rank));
        Ok(GradedLinearMap::new(shift, self.left_mult_matrix(a)))
    }

    /// The signed right action `ρ_a(m) = (-1)^{|a||m|} m a` for homogeneous `a`.
    pub fn signed_right_mult(&self, a: &[Scalar]) -> Result<GradedLinearMap, AlgebraError> {
        let shift = self.degree_of(a)?.unwrap_or_else(|| Degree::zero(self.rank));
        let cols: Vec<Vector> = (0..self.dim())
            .map(|j| {
                let s = sign(self.field, shift.parity * self.parity(j));
                self.multiply(&self.basis(j), a).iter().map(|x| &s * x).collect()
            })
            .collect();
        Ok(GradedLinearMap::new(shift, Matrix::from_columns(self.field, self.dim(), &cols)))
    }

    /// Left action of homogeneous `a` on the shifted module `{μ,γ}A`:
    /// `a · m = (-1)^{γ|a|} a m`.
    pub fn shifted_left_action(&self, a: &[Scalar], gamma: u8) -> Result<GradedLinearMap, AlgebraError> {
        let mut map = self.left_mult(a)?;
        let s = sign(self.field, gamma * map.shift.parity);
        map.matrix = map.matrix.scale(&s);
        Ok(map)
    }

    /// Two-sided inverse, if `a` is invertible.
    pub fn inverse_of(&self, a: &[Scalar]) -> Option<Vector> {
        let x = self.left_mult_matrix(a).solve(&self.unit).ok()??;
        (self.multiply(&x, a) == self.unit).then_some(x)
    }

    pub fn is_invertible(&self, a: &[Scalar]) -> bool {
        self.inverse_of(a).is_some()
    }

    /// Whether `v` is a scalar multiple of the unit.
    pub fn is_scalar(&self, v: &[Scalar]) -> bool {
        let Some(pos) = self.unit.iter().position(|x| !x.is_zero()) else {
            return is_zero_vector(v);
        };
        let c = &v[pos] / &self.unit[pos];
        v.iter().zip(&self.unit).all(|(x, u)| *x == &c * u)
    }
}

/// A linear map between graded algebras, homogeneous of degree `shift`.
/// Column `j` of `matrix` holds the image of source basis element `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLinearMap {
    pub shift: Degree,
    pub matrix: Matrix,
}

impl GradedLinearMap {
    pub fn new(shift: Degree, matrix: Matrix) -> Self {
        GradedLinearMap { shift, matrix }
    }

    pub fn identity(alg: &GradedSuperAlgebra) -> Self {
        GradedLinearMap::new(Degree::zero(alg.rank()), Matrix::identity(alg.field(), alg.dim()))
    }

    pub fn zero(source: &GradedSuperAlgebra, target: &GradedSuperAlgebra, shift: Degree) -> Self {
        GradedLinearMap::new(shift, Matrix::zeros(source.field(), target.dim(), source.dim()))
    }

    /// Builds a map from the images of the source basis.
    pub fn from_images(field: Field, target_dim: usize, shift: Degree, images: &[Vector]) -> Self {
        GradedLinearMap::new(shift, Matrix::from_columns(field, target_dim, images))
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        self.matrix.mul_vec(v)
    }

    pub fn image_of_basis(&self, j: usize) -> Vector {
        self.matrix.column(j)
    }

    /// `self ∘ inner`; shifts add.
    pub fn compose(&self, inner: &GradedLinearMap) -> GradedLinearMap {
        GradedLinearMap::new(&self.shift + &inner.shift, self.matrix.matmul(&inner.matrix))
    }

    pub fn scale(&self, c: &Scalar) -> GradedLinearMap {
        GradedLinearMap::new(self.shift.clone(), self.matrix.scale(c))
    }

    pub fn inverse(&self) -> Option<GradedLinearMap> {
        let inv = self.matrix.invert().ok()??;
        Some(GradedLinearMap::new(-&self.shift, inv))
    }

    /// Checks that every source basis element of degree `d` lands in degree
    /// `d + shift` of the target.
    pub fn check_graded(
        &self,
        source: &GradedSuperAlgebra,
        target: &GradedSuperAlgebra,
    ) -> Result<(), AlgebraError> {
        if self.source_dim() != source.dim() {
            return Err(AlgebraError::DimensionMismatch { expected: source.dim(), found: self.source_dim() });
        }
        if self.target_dim() != target.dim() {
            return Err(AlgebraError::DimensionMismatch { expected: target.dim(), found: self.target_dim() });
        }
        for j in 0..source.dim() {
            let expected = source.degree(j) + &self.shift;
            for k in 0..target.dim() {
                if !self.matrix.get(k, j).is_zero() && target.degree(k) != &expected {
                    return Err(AlgebraError::NotGraded { column: j, expected });
                }
            }
        }
        Ok(())
    }
}

/// Outcome of [`check_automorphism`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismReport {
    pub bijective: bool,
    pub unit_preserving: bool,
    pub degree_preserving: bool,
    /// First basis pair `(i, j)` on which `f(e_i e_j) != f(e_i) f(e_j)`.
    pub multiplicative_failure: Option<(usize, usize)>,
}

impl AutomorphismReport {
    pub fn is_automorphism(&self) -> bool {
        self.bijective
            && self.unit_preserving
            && self.degree_preserving
            && self.multiplicative_failure.is_none()
    }
}

/// Checks that an endomap of degree zero is a graded superalgebra automorphism.
pub fn check_automorphism(
    alg: &GradedSuperAlgebra,
    f: &GradedLinearMap,
) -> Result<AutomorphismReport, AlgebraError> {
    if !f.shift.is_zero() {
        return Err(AlgebraError::ShiftMismatch { expected: Degree::zero(alg.rank()), found: f.shift.clone() });
    }
    if f.source_dim() != alg.dim() || f.target_dim() != alg.dim() {
        return Err(AlgebraError::DimensionMismatch { expected: alg.dim(), found: f.source_dim() });
    }
    let bijective = f.matrix.rank() == alg.dim();
    let unit_preserving = f.apply(&alg.unit()) == alg.unit();
    let degree_preserving = f.check_graded(alg, alg).is_ok();
    let images: Vec<Vector> = (0..alg.dim()).map(|j| f.image_of_basis(j)).collect();
    let mut multiplicative_failure = None;
    'outer: for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let lhs = f.apply(&alg.multiply(&alg.basis(i), &alg.basis(j)));
            let rhs = alg.multiply(&images[i], &images[j]);
            if lhs != rhs {
                multiplicative_failure = Some((i, j));
                break 'outer;
            }
        }
    }
    Ok(AutomorphismReport { bijective, unit_preserving, degree_preserving, multiplicative_failure })
}

/// A graded unital subalgebra `B ⊆ A`.
#[derive(Debug, Clone)]
pub struct SubalgebraEmbedding {
    big: Arc<GradedSuperAlgebra>,
    small: Arc<GradedSuperAlgebra>,
    inclusion: GradedLinearMap,
    /// Left inverse of the inclusion matrix.
    retraction: Matrix,
}

impl SubalgebraEmbedding {
    /// Validates injectivity, unit preservation, degree preservation and
    /// multiplicativity of `inclusion` (a `dim A × dim B` matrix).
    pub fn new(
        big: Arc<GradedSuperAlgebra>,
        small: Arc<GradedSuperAlgebra>,
        inclusion: Matrix,
    ) -> Result<Self, AlgebraError> {
        if big.field() != small.field() {
            return Err(MathError::FieldMismatch(big.field(), small.field()).into());
        }
        if big.rank() != small.rank() {
            return Err(AlgebraError::InvalidEmbedding("grading ranks differ".into()));
        }
        let inclusion = GradedLinearMap::new(Degree::zero(big.rank()), inclusion);
        inclusion
            .check_graded(&small, &big)
            .map_err(|e| AlgebraError::InvalidEmbedding(format!("not degree preserving: {e}")))?;
        if inclusion.matrix.rank() != small.dim() {
            return Err(AlgebraError::InvalidEmbedding("inclusion is not injective".into()));
        }
        if inclusion.apply(&small.unit()) != big.unit() {
            return Err(AlgebraError::InvalidEmbedding("unit not preserved".into()));
        }
        for i in 0..small.dim() {
            for j in 0..small.dim() {
                let lhs = inclusion.apply(&small.multiply(&small.basis(i), &small.basis(j)));
                let rhs = big.multiply(&inclusion.image_of_basis(i), &inclusion.image_of_basis(j));
                if lhs != rhs {
                    return Err(AlgebraError::InvalidEmbedding(format!(
                        "not multiplicative on ({}, {})",
                        small.label(i),
                        small.label(j)
                    )));
                }
            }
        }
        let retraction = left_inverse(&inclusion.matrix);
        Ok(SubalgebraEmbedding { big, small, inclusion, retraction })
    }

    /// The degenerate extension `A ⊆ A`.
    pub fn identity(alg: Arc<GradedSuperAlgebra>) -> Self {
        let m = Matrix::identity(alg.field(), alg.dim());
        SubalgebraEmbedding::new(alg.clone(), alg, m).expect("identity embedding is valid")
    }

    /// `F ⊆ A` via the unit.
    pub fn scalars(alg: Arc<GradedSuperAlgebra>) -> Self {
        let f = Arc::new(GradedSuperAlgebra::ground_field(alg.field(), alg.rank()));
        let m = Matrix::from_columns(alg.field(), alg.dim(), &[alg.unit()]);
        SubalgebraEmbedding::new(alg, f, m).expect("unit embedding is valid")
    }

    pub fn big(&self) -> &Arc<GradedSuperAlgebra> {
        &self.big
    }

    pub fn small(&self) -> &Arc<GradedSuperAlgebra> {
        &self.small
    }

    pub fn inclusion(&self) -> &GradedLinearMap {
        &self.inclusion
    }

    pub fn embed(&self, b: &[Scalar]) -> Vector {
        self.inclusion.apply(b)
    }

    /// Images of the small basis in the big algebra.
    pub fn embedded_basis(&self) -> Vec<Vector> {
        (0..self.small.dim()).map(|j| self.inclusion.image_of_basis(j)).collect()
    }

    /// B-coordinates of `a`, or `None` when `a ∉ B`.
    pub fn restrict(&self, a: &[Scalar]) -> Option<Vector> {
        let b = self.retraction.mul_vec(a);
        (self.embed(&b) == a).then_some(b)
    }
}

/// `P` with `P M = I` for a matrix of full column rank.
fn left_inverse(m: &Matrix) -> Matrix {
    let field = m.field();
    let n = m.cols();
    let rows = m.transpose().echelon().pivots();
    debug_assert_eq!(rows.len(), n);
    let mut sub = Matrix::zeros(field, n, n);
    for (i, &r) in rows.iter().enumerate() {
        for c in 0..n {
            sub.set(i, c, m.get(r, c).clone());
        }
    }
    let inv = sub.invert().expect("square").expect("independent rows");
    let mut p = Matrix::zeros(field, n, m.rows());
    for (i, &r) in rows.iter().enumerate() {
        for c in 0..n {
            p.set(c, r, inv.get(c, i).clone());
        }
    }
    p
}

/// Homogeneous basis of the super-centralizer
/// `{a : a s = (-1)^{|a||s|} s a for all s}` of a set of homogeneous elements.
///
/// The result is computed degree by degree and each block is the canonical
/// kernel basis of that degree's linear system.
pub fn supercentralizer(
    alg: &GradedSuperAlgebra,
    elements: &[Vector],
) -> Result<Vec<Vector>, AlgebraError> {
    let parities: Vec<u8> =
        elements.iter().map(|s| alg.parity_of(s)).collect::<Result<_, _>>()?;
    let left: Vec<Matrix> = elements.iter().map(|s| alg.left_mult_matrix(s)).collect();
    let right: Vec<Matrix> = elements.iter().map(|s| alg.right_mult_matrix(s)).collect();
    let mut out = Vec::new();
    for d in alg.distinct_degrees() {
        let idx = alg.indices_of_degree(&d);
        let mut rows: Vec<Vector> = Vec::new();
        for (s_idx, p) in parities.iter().enumerate() {
            let sgn = sign(alg.field(), d.parity * p);
            for r in 0..alg.dim() {
                let row: Vector = idx
                    .iter()
                    .map(|&j| right[s_idx].get(r, j) - &(&sgn * left[s_idx].get(r, j)))
                    .collect();
                if !is_zero_vector(&row) {
                    rows.push(row);
                }
            }
        }
        let system = if rows.is_empty() {
            Matrix::zeros(alg.field(), 0, idx.len())
        } else {
            Matrix::from_rows(alg.field(), rows)?
        };
        for k in system.kernel_basis() {
            let mut v = alg.zero();
            for (&j, x) in idx.iter().zip(&k) {
                v[j] = x.clone();
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// `C_A(B)` for an embedding.
pub fn centralizer(emb: &SubalgebraEmbedding) -> Vec<Vector> {
    supercentralizer(emb.big(), &emb.embedded_basis()).expect("embedded basis is homogeneous")
}

/// How a [`UnitScan`] verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certainty {
    Certified,
    BasisPointHeuristic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitScan {
    pub holds: bool,
    pub certainty: Certainty,
    /// A homogeneous non-scalar invertible element when `holds` is false.
    pub witness: Option<Vector>,
}

const GRID_LIMIT: u128 = 1_000_000;

/// Decides whether every homogeneous invertible element is a multiple of the
/// unit.
///
/// A degree-`d` element can only be invertible if `A_{-d}` is nonzero, which
/// settles most components outright. Remaining components are handled by
/// treating `det λ_a` as a polynomial in the coordinates of `a`: it has degree
/// at most `dim A` in each variable, so vanishing on a grid with `dim A + 1`
/// points per axis proves it is identically zero. Over small prime fields the
/// whole component is enumerated instead.
pub fn homogeneous_invertibles_are_scalars(alg: &GradedSuperAlgebra) -> UnitScan {
    let field = alg.field();
    let degrees = alg.distinct_degrees();
    let mut certainty = Certainty::Certified;
    for d in &degrees {
        let idx = alg.indices_of_degree(d);
        if d.is_zero() {
            // Non-scalar part of A_{0,0}: try e + t·1 for a non-scalar basis e.
            let Some(&e) = idx.iter().find(|&&i| !alg.is_scalar(&alg.basis(i))) else {
                continue;
            };
            let trials: Vec<Scalar> = match field {
                Field::Rational => (0..=alg.dim() as i64).map(|t| field.from_i64(t)).collect(),
                Field::Prime(p) => (0..p.min(alg.dim() as u64 + 1)).map(|t| field.from_i64(t as i64)).collect(),
            };
            for t in trials {
                let mut a = alg.basis(e);
                axpy(&mut a, &t, &alg.unit());
                if alg.is_invertible(&a) {
                    return UnitScan { holds: false, certainty: Certainty::Certified, witness: Some(a) };
                }
            }
            match scan_component(alg, &idx, true) {
                ScanOutcome::Found(a) => {
                    return UnitScan { holds: false, certainty: Certainty::Certified, witness: Some(a) }
                }
                ScanOutcome::Exhausted => {}
                ScanOutcome::Sampled => certainty = Certainty::BasisPointHeuristic,
            }
            continue;
        }
        let neg = -d;
        if alg.indices_of_degree(&neg).is_empty() {
            continue;
        }
        match scan_component(alg, &idx, false) {
            ScanOutcome::Found(a) => {
                return UnitScan { holds: false, certainty: Certainty::Certified, witness: Some(a) }
            }
            ScanOutcome::Exhausted => {}
            ScanOutcome::Sampled => certainty = Certainty::BasisPointHeuristic,
        }
    }
    UnitScan { holds: true, certainty, witness: None }
}

enum ScanOutcome {
    Found(Vector),
    Exhausted,
    Sampled,
}

fn scan_component(alg: &GradedSuperAlgebra, idx: &[usize], skip_scalars: bool) -> ScanOutcome {
    let field = alg.field();
    let k = idx.len() as u32;
    let values: Vec<Scalar> = match field {
        Field::Rational => (0..=alg.dim() as i64).map(|t| field.from_i64(t)).collect(),
        Field::Prime(p) => (0..p).map(|t| field.from_i64(t as i64)).collect(),
    };
    let points = (values.len() as u128).checked_pow(k).unwrap_or(u128::MAX);
    let test = |a: &Vector| {
        !(skip_scalars && alg.is_scalar(a)) && !is_zero_vector(a) && alg.is_invertible(a)
    };
    if points <= GRID_LIMIT {
        let mut counter = vec![0usize; idx.len()];
        loop {
            let mut a = alg.zero();
            for (pos, &i) in idx.iter().enumerate() {
                a[i] = values[counter[pos]].clone();
            }
            if test(&a) {
                return ScanOutcome::Found(a);
            }
            let mut pos = 0;
            loop {
                if pos == counter.len() {
                    return ScanOutcome::Exhausted;
                }
                counter[pos] += 1;
                if counter[pos] < values.len() {
                    break;
                }
                counter[pos] = 0;
                pos += 1;
            }
        }
    }
    for &i in idx {
        let a = alg.basis(i);
        if test(&a) {
            return ScanOutcome::Found(a);
        }
    }
    let mut all = alg.zero();
    for &i in idx {
        all[i] = field.one();
    }
    if test(&all) {
        return ScanOutcome::Found(all);
    }
    ScanOutcome::Sampled
}

/// Result of [`twisted_equivariance_check`]: the first violating triple, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivarianceReport {
    pub triples_checked: usize,
    /// `(b, x, b')` basis indices of the first failure.
    pub failure: Option<(usize, usize, usize)>,
}

impl EquivarianceReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks `f(L(b)·x·R(b')) = (-1)^{γ|b|} b f(x) b'` for all basis `b, b' ∈ B`
/// and `x ∈ A`, where `L` and `R` are the left/right twisted inclusions
/// `B → A` and `(λ, γ) = target_shift` is the shift of the codomain `{λ,γ}B`.
/// Equivalently, `f` is a bimodule map `^L A^R → {λ,γ}B` of shift `(-λ, γ)`.
pub fn twisted_equivariance_check(
    f: &GradedLinearMap,
    left_twist: &GradedLinearMap,
    right_twist: &GradedLinearMap,
    emb: &SubalgebraEmbedding,
    target_shift: &Degree,
) -> Result<EquivarianceReport, AlgebraError> {
    let a = emb.big();
    let b = emb.small();
    let expected = Degree::new(target_shift.lambda.iter().map(|x| -x).collect(), target_shift.parity);
    if f.shift != expected {
        return Err(AlgebraError::ShiftMismatch { expected, found: f.shift.clone() });
    }
    f.check_graded(a, b)?;
    for m in [left_twist, right_twist] {
        m.check_graded(b, a)?;
    }
    let field = a.field();
    let gamma = target_shift.parity;
    let mut checked = 0;
    for bi in 0..b.dim() {
        let lb = left_twist.image_of_basis(bi);
        let s = sign(field, gamma * b.parity(bi));
        for x in 0..a.dim() {
            let lx = a.multiply(&lb, &a.basis(x));
            let fx = f.image_of_basis(x);
            let bfx = b.multiply(&b.basis(bi), &fx);
            for bj in 0..b.dim() {
                checked += 1;
                let arg = a.multiply(&lx, &right_twist.image_of_basis(bj));
                let lhs = f.apply(&arg);
                let rhs: Vector = b.multiply(&bfx, &b.basis(bj)).iter().map(|v| &s * v).collect();
                if lhs != rhs {
                    return Ok(EquivarianceReport { triples_checked: checked, failure: Some((bi, x, bj)) });
                }
            }
        }
    }
    Ok(EquivarianceReport { triples_checked: checked, failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    /// N₂: basis {1, u}, u² = 0, |u| = (1, 1).
    pub(crate) fn n2() -> GradedSuperAlgebra {
        GradedSuperAlgebra::new(
            Q,
            1,
            vec!["1".into(), "u".into()],
            vec![Degree::scalar(0, 0), Degree::scalar(1, 1)],
            [(0, 0, 0, Q.one()), (0, 1, 1, Q.one()), (1, 0, 1, Q.one())],
            vec![Q.one(), Q.zero()],
        )
        .unwrap()
    }

    #[test]
    fn n2_validates_on_all_eight_triples() {
        let a = n2();
        assert!(a.validate().is_valid());
        let u = a.basis(1);
        assert!(is_zero_vector(&a.multiply(&u, &u)));
        assert_eq!(a.multiply(&a.unit(), &u), u);
    }

    #[test]
    fn grading_violation_is_reported() {
        // e1 e1 = e2 with deg e2 = 1 != 2 deg e1.
        let a = GradedSuperAlgebra::new(
            Q,
            1,
            vec!["1".into(), "x".into(), "y".into()],
            vec![Degree::scalar(0, 0), Degree::scalar(1, 0), Degree::scalar(1, 0)],
            [
                (0, 0, 0, Q.one()),
                (0, 1, 1, Q.one()),
                (1, 0, 1, Q.one()),
                (0, 2, 2, Q.one()),
                (2, 0, 2, Q.one()),
                (1, 1, 2, Q.one()),
            ],
            vec![Q.one(), Q.zero(), Q.zero()],
        )
        .unwrap();
        let report = a.validate();
        assert!(report.violations.contains(&Violation::Grading { i: 1, j: 1, k: 2 }));
    }

    #[test]
    fn ground_field_is_valid() {
        assert!(GradedSuperAlgebra::ground_field(Q, 1).validate().is_valid());
    }

    #[test]
    fn duplicate_label_rejected() {
        let err = GradedSuperAlgebra::new(
            Q,
            1,
            vec!["a".into(), "a".into()],
            vec![Degree::zero(1), Degree::zero(1)],
            [],
            vec![Q.one(), Q.zero()],
        )
        .unwrap_err();
        assert_eq!(err, AlgebraError::DuplicateLabel("a".into()));
    }

    #[test]
    fn signed_right_mult_cases() {
        let a = n2();
        let id = a.signed_right_mult(&a.unit()).unwrap();
        assert_eq!(id, GradedLinearMap::identity(&a));
        let rho = a.signed_right_mult(&a.basis(1)).unwrap();
        assert!(is_zero_vector(&rho.apply(&a.basis(1))));
        assert_eq!(rho.apply(&a.unit()), a.basis(1));
        assert_eq!(rho.shift, Degree::scalar(1, 1));
        assert!(a.signed_right_mult(&[Q.one(), Q.one()]).is_err());
    }

    #[test]
    fn automorphism_checks() {
        let a = n2();
        let id = GradedLinearMap::identity(&a);
        assert!(check_automorphism(&a, &id).unwrap().is_automorphism());
        let kill = GradedLinearMap::from_images(Q, 2, Degree::zero(1), &[a.unit(), a.zero()]);
        let r = check_automorphism(&a, &kill).unwrap();
        assert!(!r.bijective && !r.is_automorphism());
        let shifted = GradedLinearMap::new(Degree::scalar(1, 1), Matrix::identity(Q, 2));
        assert!(check_automorphism(&a, &shifted).is_err());
    }

    #[test]
    fn centralizer_of_n2_in_itself() {
        let a = Arc::new(n2());
        let emb = SubalgebraEmbedding::identity(a.clone());
        let c = centralizer(&emb);
        // u u = 0 = -u u, so u super-commutes with itself.
        assert_eq!(c, vec![a.basis(0), a.basis(1)]);
        let scalars = SubalgebraEmbedding::scalars(a.clone());
        assert_eq!(centralizer(&scalars).len(), 2);
    }

    #[test]
    fn n2_units_are_scalars() {
        let scan = homogeneous_invertibles_are_scalars(&n2());
        assert!(scan.holds);
        assert_eq!(scan.certainty, Certainty::Certified);
        assert!(homogeneous_invertibles_are_scalars(&GradedSuperAlgebra::ground_field(Q, 1)).holds);
    }

    #[test]
    fn embedding_restrict_round_trip() {
        let a = Arc::new(n2());
        let emb = SubalgebraEmbedding::scalars(a.clone());
        assert_eq!(emb.restrict(&a.unit()), Some(vec![Q.one()]));
        assert_eq!(emb.restrict(&a.basis(1)), None);
    }
}
