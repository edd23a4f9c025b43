//! Twisted Frobenius extensions `B ⊆ A` with automorphisms `α` of `A`, `β` of
//! `B` and shift `(λ, π)`: projective bases, trace maps, dual generators,
//! Nakayama isomorphisms and uniqueness witnesses.
//!
//! A left trace is stored as a map `A → B` of shift `(-λ, π)`. It must satisfy
//! `tr(β(b) x) = (-1)^{π|b|} b tr(x)` and `tr(x α(b)) = tr(x) b`.

use std::fmt;

use thiserror::Error;

use crate::candidates::{combine, Candidates, DEFAULT_CANDIDATE_CAP};
use crate::exactmath::{is_zero_vector, Echelon, Matrix, Scalar, Vector};
use crate::frobenius::FrobeniusAlgebraData;
use crate::gsalg::{
    check_automorphism, homogeneous_invertibles_are_scalars, supercentralizer, twisted_equivariance_check,
    AlgebraError, Certainty, Degree, EquivarianceReport, GradedLinearMap, GradedSuperAlgebra,
    SubalgebraEmbedding,
};
use crate::homspace::{equivariant_dimension, equivariant_maps, possible_shifts, Condition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0} is not a graded automorphism")]
    NotAutomorphism(&'static str),
    #[error("trace has shift {found}, expected {expected}")]
    ShiftMismatch { expected: Degree, found: Degree },
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
    #[error("dual generator pair {0} violates the degree pairing")]
    DegreePairing(usize),
    #[error("no dual generator solves the system for index {0}: the trace does not represent every equivariant map")]
    Unsolvable(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceMap {
    pub map: GradedLinearMap,
    pub side: Side,
}

impl TraceMap {
    pub fn left(map: GradedLinearMap) -> Self {
        TraceMap { map, side: Side::Left }
    }

    pub fn right(map: GradedLinearMap) -> Self {
        TraceMap { map, side: Side::Right }
    }
}

/// `B ⊆ A` together with `α ∈ Aut(A)`, `β ∈ Aut(B)` and the shift `(λ, π)`.
/// The extension degree is `(-λ, π)`.
#[derive(Debug, Clone)]
pub struct ExtensionData {
    embedding: SubalgebraEmbedding,
    alpha: GradedLinearMap,
    beta: GradedLinearMap,
    alpha_inv: GradedLinearMap,
    beta_inv: GradedLinearMap,
    shift: Degree,
}

impl ExtensionData {
    pub fn new(
        embedding: SubalgebraEmbedding,
        alpha: GradedLinearMap,
        beta: GradedLinearMap,
        shift: Degree,
    ) -> Result<Self, ExtensionError> {
        if !check_automorphism(embedding.big(), &alpha)?.is_automorphism() {
            return Err(ExtensionError::NotAutomorphism("alpha"));
        }
        if !check_automorphism(embedding.small(), &beta)?.is_automorphism() {
            return Err(ExtensionError::NotAutomorphism("beta"));
        }
        if shift.rank() != embedding.big().rank() {
            return Err(ExtensionError::Incompatible("shift rank differs from grading rank".into()));
        }
        let alpha_inv = alpha.inverse().expect("automorphism");
        let beta_inv = beta.inverse().expect("automorphism");
        Ok(ExtensionData { embedding, alpha, beta, alpha_inv, beta_inv, shift })
    }

    pub fn embedding(&self) -> &SubalgebraEmbedding {
        &self.embedding
    }

    pub fn big(&self) -> &GradedSuperAlgebra {
        self.embedding.big()
    }

    pub fn small(&self) -> &GradedSuperAlgebra {
        self.embedding.small()
    }

    pub fn alpha(&self) -> &GradedLinearMap {
        &self.alpha
    }

    pub fn beta(&self) -> &GradedLinearMap {
        &self.beta
    }

    pub fn alpha_inverse(&self) -> &GradedLinearMap {
        &self.alpha_inv
    }

    pub fn beta_inverse(&self) -> &GradedLinearMap {
        &self.beta_inv
    }

    /// `(λ, π)`.
    pub fn shift(&self) -> &Degree {
        &self.shift
    }

    pub fn parity(&self) -> u8 {
        self.shift.parity
    }

    /// `(-λ, π)`: the extension degree and the shift of a trace map.
    pub fn degree(&self) -> Degree {
        Degree::new(self.shift.lambda.iter().map(|x| -x).collect(), self.shift.parity)
    }

    pub fn include(&self, b: &[Scalar]) -> Vector {
        self.embedding.embed(b)
    }

    /// `ι ∘ β : B → A`, the left action on `^β A^α`.
    pub fn left_twist(&self) -> GradedLinearMap {
        self.embedding.inclusion().compose(&self.beta)
    }

    /// `α ∘ ι : B → A`, the right action on `^β A^α`.
    pub fn right_twist(&self) -> GradedLinearMap {
        self.alpha.compose(self.embedding.inclusion())
    }

    /// `α⁻¹ ∘ ι`, the left action on `^{α⁻¹} A^{β⁻¹}`.
    pub fn mirror_left_twist(&self) -> GradedLinearMap {
        self.alpha_inv.compose(self.embedding.inclusion())
    }

    /// `ι ∘ β⁻¹`, the right action on `^{α⁻¹} A^{β⁻¹}`.
    pub fn mirror_right_twist(&self) -> GradedLinearMap {
        self.embedding.inclusion().compose(&self.beta_inv)
    }

    fn check_trace_shift(&self, tr: &GradedLinearMap) -> Result<(), ExtensionError> {
        let expected = self.degree();
        if tr.shift != expected {
            return Err(ExtensionError::ShiftMismatch { expected, found: tr.shift.clone() });
        }
        if tr.source_dim() != self.big().dim() || tr.target_dim() != self.small().dim() {
            return Err(ExtensionError::Incompatible("trace has the wrong matrix shape".into()));
        }
        Ok(())
    }
}

/// Column-major coordinates of a map's matrix.
fn flatten(m: &Matrix) -> Vector {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for c in 0..m.cols() {
        for r in 0..m.rows() {
            out.push(m.get(r, c).clone());
        }
    }
    out
}

/// `table[x][y] = f(e_x e_y)` for a map `f: A → B`.
fn product_table(alg: &GradedSuperAlgebra, f: &GradedLinearMap) -> Vec<Vec<Vector>> {
    let dim = alg.dim();
    let field = alg.field();
    let cols: Vec<Vector> = (0..dim).map(|k| f.image_of_basis(k)).collect();
    (0..dim)
        .map(|x| {
            (0..dim)
                .map(|y| {
                    let mut v = vec![field.zero(); f.target_dim()];
                    for (k, c) in alg.product_of_basis(x, y) {
                        crate::exactmath::axpy(&mut v, c, &cols[*k]);
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// `tr ∘ ρ_{e_k}` flattened, read off a product table.
fn tau_basis(alg: &GradedSuperAlgebra, table: &[Vec<Vector>], k: usize) -> Vector {
    let field = alg.field();
    let mut out = Vec::new();
    for (x, row) in table.iter().enumerate() {
        let s = field.sign(alg.parity(k) * alg.parity(x));
        out.extend(row[k].iter().map(|v| &s * v));
    }
    out
}

/// `tr ∘ λ_{e_k}` flattened.
fn lambda_basis(table: &[Vec<Vector>], k: usize) -> Vector {
    let mut out = Vec::new();
    for x in 0..table.len() {
        out.extend(table[k][x].iter().cloned());
    }
    out
}

/// `tr ∘ ρ_a` for homogeneous `a`.
pub fn trace_times_right(ext: &ExtensionData, tr: &GradedLinearMap, a: &[Scalar]) -> Result<GradedLinearMap, ExtensionError> {
    Ok(tr.compose(&ext.big().signed_right_mult(a)?))
}

/// Result of a dimension comparison for one shift in the L4/R4 check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftCheck {
    pub shift: Degree,
    pub hom_dimension: usize,
    pub realized_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceReport {
    pub side: Side,
    pub equivariance: EquivarianceReport,
    /// L3 (left) or R3 (right).
    pub nondegenerate: bool,
    /// L4 (left) or R4 (right), per shift.
    pub representability: Vec<ShiftCheck>,
}

impl TraceReport {
    pub fn representable(&self) -> bool {
        self.representability.iter().all(|s| s.hom_dimension == s.realized_rank)
    }

    pub fn passes(&self) -> bool {
        self.equivariance.holds() && self.nondegenerate && self.representable()
    }
}

/// Dimensions of the one-sided equivariant hom spaces, which do not depend on
/// the trace being tested.
struct Representability {
    side: Side,
    dims: Vec<(Degree, usize)>,
}

impl Representability {
    fn new(ext: &ExtensionData, side: Side) -> Self {
        let a = ext.big();
        let b = ext.small();
        let twist = match side {
            Side::Left => ext.left_twist(),
            Side::Right => ext.mirror_right_twist(),
        };
        let cond = match side {
            Side::Left => Condition::Left(&twist),
            Side::Right => Condition::Right(&twist),
        };
        let dims = possible_shifts(a, b)
            .into_iter()
            .map(|s| {
                let d = equivariant_dimension(a, b, &s, &[cond]);
                (s, d)
            })
            .collect();
        Representability { side, dims }
    }

    fn check(&self, ext: &ExtensionData, table: &[Vec<Vector>]) -> Vec<ShiftCheck> {
        let a = ext.big();
        self.dims
            .iter()
            .map(|(s, d)| {
                let source = s + ext.shift();
                let mut ech = Echelon::new(a.field(), a.dim() * ext.small().dim());
                for k in a.indices_of_degree(&source) {
                    let v = match self.side {
                        Side::Left => tau_basis(a, table, k),
                        Side::Right => lambda_basis(table, k),
                    };
                    ech.insert_dense(v);
                }
                ShiftCheck { shift: s.clone(), hom_dimension: *d, realized_rank: ech.rank() }
            })
            .collect()
    }
}

fn injective_pairing(alg: &GradedSuperAlgebra, table: &[Vec<Vector>], side: Side) -> bool {
    let mut ech = Echelon::new(alg.field(), alg.dim() * table[0][0].len());
    for a in 0..alg.dim() {
        let v: Vector = (0..alg.dim())
            .flat_map(|x| match side {
                Side::Left => table[x][a].clone(),
                Side::Right => table[a][x].clone(),
            })
            .collect();
        if !ech.insert_dense(v) {
            return false;
        }
    }
    true
}

fn check_trace_with(
    ext: &ExtensionData,
    tr: &GradedLinearMap,
    side: Side,
    rep: &Representability,
) -> Result<TraceReport, ExtensionError> {
    ext.check_trace_shift(tr)?;
    let (lt, rt) = match side {
        Side::Left => (ext.left_twist(), ext.right_twist()),
        Side::Right => (ext.mirror_left_twist(), ext.mirror_right_twist()),
    };
    let equivariance = twisted_equivariance_check(tr, &lt, &rt, ext.embedding(), ext.shift())?;
    let table = product_table(ext.big(), tr);
    let nondegenerate = injective_pairing(ext.big(), &table, side);
    let representability = if nondegenerate { rep.check(ext, &table) } else { Vec::new() };
    let mut report = TraceReport { side, equivariance, nondegenerate, representability };
    if !nondegenerate {
        // Still report the dimensions so failures are legible.
        report.representability = rep.check(ext, &table);
    }
    Ok(report)
}

/// Bimodule equivariance, L3 and L4 for a left trace `^β A^α → {λ,π}B`.
pub fn check_left_trace(ext: &ExtensionData, tr: &GradedLinearMap) -> Result<TraceReport, ExtensionError> {
    check_trace_with(ext, tr, Side::Left, &Representability::new(ext, Side::Left))
}

/// Bimodule equivariance, R3 and R4 for a right trace `^{α⁻¹} A^{β⁻¹} → {λ,π}B`.
pub fn check_right_trace(ext: &ExtensionData, tr: &GradedLinearMap) -> Result<TraceReport, ExtensionError> {
    check_trace_with(ext, tr, Side::Right, &Representability::new(ext, Side::Right))
}

/// `tr^R = β ∘ tr^L ∘ α`.
pub fn left_to_right(ext: &ExtensionData, tr: &TraceMap) -> Result<TraceMap, ExtensionError> {
    if tr.side != Side::Left {
        return Err(ExtensionError::Precondition("expected a left trace".into()));
    }
    if !check_left_trace(ext, &tr.map)?.passes() {
        return Err(ExtensionError::Precondition("left trace fails its checks".into()));
    }
    Ok(TraceMap::right(ext.beta().compose(&tr.map).compose(ext.alpha())))
}

/// Elements `x_i` and functionals `φ_i ∈ HOM^L_B(A, B)` of shift `(-μ_i, γ_i)`
/// with `x = Σ_i (-1)^{|x| γ_i} φ_i(x) x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveBasis {
    pub elements: Vec<Vector>,
    pub functionals: Vec<GradedLinearMap>,
}

impl ProjectiveBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Checks degrees, left `B`-equivariance of every `φ_i` and the
    /// reconstruction identity on every basis element of `A`.
    pub fn verify(&self, emb: &SubalgebraEmbedding) -> bool {
        let a = emb.big();
        let b = emb.small();
        let field = a.field();
        if self.elements.len() != self.functionals.len() {
            return false;
        }
        let mut gammas = Vec::new();
        for (x, phi) in self.elements.iter().zip(&self.functionals) {
            let Ok(Some(d)) = a.degree_of(x) else { return false };
            if phi.shift != Degree::new(d.lambda.iter().map(|v| -v).collect(), d.parity) {
                return false;
            }
            if phi.check_graded(a, b).is_err() {
                return false;
            }
            for bi in 0..b.dim() {
                let s = field.sign(d.parity * b.parity(bi));
                let ib = emb.embed(&b.basis(bi));
                for m in 0..a.dim() {
                    let lhs = phi.apply(&a.multiply(&ib, &a.basis(m)));
                    let rhs: Vector =
                        b.multiply(&b.basis(bi), &phi.image_of_basis(m)).iter().map(|v| &s * v).collect();
                    if lhs != rhs {
                        return false;
                    }
                }
            }
            gammas.push(d.parity);
        }
        (0..a.dim()).all(|j| {
            let mut sum = a.zero();
            for ((x, phi), g) in self.elements.iter().zip(&self.functionals).zip(&gammas) {
                let coeff = emb.embed(&phi.image_of_basis(j));
                let term = a.multiply(&coeff, x);
                crate::exactmath::axpy(&mut sum, &field.sign(a.parity(j) * g), &term);
            }
            sum == a.basis(j)
        })
    }
}

/// Basis elements of `A`, in basis order, forming a minimal generating set of
/// `A` as a left `B`-module: `e_j` is kept when it is not in the `B`-span of
/// those already kept.
pub fn greedy_generators(emb: &SubalgebraEmbedding) -> Vec<usize> {
    let a = emb.big();
    let b_basis = emb.embedded_basis();
    let mut span = Echelon::new(a.field(), a.dim());
    let mut chosen = Vec::new();
    for j in 0..a.dim() {
        if span.rank() == a.dim() {
            break;
        }
        if span.contains(&a.basis(j)) {
            continue;
        }
        chosen.push(j);
        for b in &b_basis {
            span.insert_dense(a.multiply(b, &a.basis(j)));
        }
    }
    chosen
}

/// Decides whether `A` is projective as a left `B`-module by searching for a
/// projective basis supported on a generating set.
pub fn find_projective_basis(emb: &SubalgebraEmbedding) -> Option<ProjectiveBasis> {
    let a = emb.big();
    let b = emb.small();
    let field = a.field();
    let gens = greedy_generators(emb);
    let inclusion = emb.inclusion();
    let homs: Vec<Vec<GradedLinearMap>> = gens
        .iter()
        .map(|&g| {
            let d = a.degree(g);
            let shift = Degree::new(d.lambda.iter().map(|v| -v).collect(), d.parity);
            equivariant_maps(a, b, &shift, &[Condition::Left(inclusion)])
        })
        .collect();
    // Unknowns c_{i,t}: φ_i = Σ_t c_{i,t} h_{i,t}. One equation per (x, coordinate).
    let mut columns: Vec<Vector> = Vec::new();
    for (i, &g) in gens.iter().enumerate() {
        let gamma = a.parity(g);
        for h in &homs[i] {
            let mut col = Vec::with_capacity(a.dim() * a.dim());
            for x in 0..a.dim() {
                let s = field.sign(a.parity(x) * gamma);
                let term = a.multiply(&emb.embed(&h.image_of_basis(x)), &a.basis(g));
                col.extend(term.iter().map(|v| &s * v));
            }
            columns.push(col);
        }
    }
    let rhs: Vector = (0..a.dim()).flat_map(|x| a.basis(x)).collect();
    let system = Matrix::from_columns(field, rhs.len(), &columns);
    let sol = system.solve(&rhs).expect("consistent shapes")?;
    let mut pos = 0;
    let mut functionals = Vec::new();
    for (i, &g) in gens.iter().enumerate() {
        let d = a.degree(g);
        let shift = Degree::new(d.lambda.iter().map(|v| -v).collect(), d.parity);
        let mut m = Matrix::zeros(field, b.dim(), a.dim());
        for h in &homs[i] {
            m = m.add(&h.matrix.scale(&sol[pos]));
            pos += 1;
        }
        functionals.push(GradedLinearMap::new(shift, m));
    }
    Some(ProjectiveBasis { elements: gens.iter().map(|&g| a.basis(g)).collect(), functionals })
}

/// Dual sets of generators `{x_i}`, `{y_i}` with `|y_i| = (λ, π) - |x_i|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGenerators {
    pub x: Vec<Vector>,
    pub y: Vec<Vector>,
}

/// Solves `(-1)^{πγ_i} β⁻¹∘φ_i = tr ∘ ρ_{y_i}` for each `i`.
pub fn find_dual_generators(
    ext: &ExtensionData,
    tr: &GradedLinearMap,
    pb: &ProjectiveBasis,
) -> Result<DualGenerators, ExtensionError> {
    ext.check_trace_shift(tr)?;
    let a = ext.big();
    let field = a.field();
    let table = product_table(a, tr);
    let mut ys = Vec::new();
    for (i, (x, phi)) in pb.elements.iter().zip(&pb.functionals).enumerate() {
        let d = a.degree_of(x)?.ok_or(ExtensionError::DegreePairing(i))?;
        let target_degree = ext.shift() - &d;
        let twisted = ext.beta_inverse().compose(phi).scale(&field.sign(ext.parity() * d.parity));
        let idx = a.indices_of_degree(&target_degree);
        let rhs = flatten(&twisted.matrix);
        let cols: Vec<Vector> = idx.iter().map(|&k| tau_basis(a, &table, k)).collect();
        let system = Matrix::from_columns(field, rhs.len(), &cols);
        let sol = system.solve(&rhs).expect("consistent shapes").ok_or(ExtensionError::Unsolvable(i))?;
        let mut y = a.zero();
        for (&k, c) in idx.iter().zip(sol) {
            y[k] = c;
        }
        ys.push(y);
    }
    Ok(DualGenerators { x: pb.elements.clone(), y: ys })
}

/// Basis indices of `A` on which each dual-basis identity fails.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DualGeneratorReport {
    pub identity_one_failures: Vec<usize>,
    pub identity_two_failures: Vec<usize>,
}

impl DualGeneratorReport {
    pub fn holds(&self) -> bool {
        self.identity_one_failures.is_empty() && self.identity_two_failures.is_empty()
    }
}

/// `(-1)^{π|a|} Σ_i (-1)^{π|x_i|} β(tr(a y_i)) x_i`.
pub fn dual_identity_one(ext: &ExtensionData, tr: &GradedLinearMap, dg: &DualGenerators, a_elt: &[Scalar]) -> Result<Vector, ExtensionError> {
    let a = ext.big();
    let field = a.field();
    let pi = ext.parity();
    let pa = a.parity_of(a_elt)?;
    let mut sum = a.zero();
    for (x, y) in dg.x.iter().zip(&dg.y) {
        let px = a.parity_of(x)?;
        let coeff = ext.include(&ext.beta().apply(&tr.apply(&a.multiply(a_elt, y))));
        let s = field.sign(pi * (pa + px));
        crate::exactmath::axpy(&mut sum, &s, &a.multiply(&coeff, x));
    }
    Ok(sum)
}

/// `Σ_i α⁻¹(y_i) tr(x_i α(a))`.
pub fn dual_identity_two(ext: &ExtensionData, tr: &GradedLinearMap, dg: &DualGenerators, a_elt: &[Scalar]) -> Vector {
    let a = ext.big();
    let alpha_a = ext.alpha().apply(a_elt);
    let mut sum = a.zero();
    for (x, y) in dg.x.iter().zip(&dg.y) {
        let coeff = ext.include(&tr.apply(&a.multiply(x, &alpha_a)));
        let term = a.multiply(&ext.alpha_inverse().apply(y), &coeff);
        crate::exactmath::axpy(&mut sum, &a.field().one(), &term);
    }
    sum
}

/// Checks the degree pairing, then both dual-basis identities on every basis
/// element of `A`.
pub fn verify_dual_generators(
    ext: &ExtensionData,
    tr: &GradedLinearMap,
    dg: &DualGenerators,
) -> Result<DualGeneratorReport, ExtensionError> {
    ext.check_trace_shift(tr)?;
    let a = ext.big();
    if dg.x.len() != dg.y.len() {
        return Err(ExtensionError::DegreePairing(dg.x.len().min(dg.y.len())));
    }
    for (i, (x, y)) in dg.x.iter().zip(&dg.y).enumerate() {
        let dx = a.degree_of(x).map_err(|_| ExtensionError::DegreePairing(i))?;
        let dy = a.degree_of(y).map_err(|_| ExtensionError::DegreePairing(i))?;
        if let (Some(dx), Some(dy)) = (dx, dy) {
            if dy != ext.shift() - &dx {
                return Err(ExtensionError::DegreePairing(i));
            }
        }
    }
    let mut report = DualGeneratorReport::default();
    for j in 0..a.dim() {
        let e = a.basis(j);
        if dual_identity_one(ext, tr, dg, &e)? != e {
            report.identity_one_failures.push(j);
        }
        if dual_identity_two(ext, tr, dg, &e) != e {
            report.identity_two_failures.push(j);
        }
    }
    Ok(report)
}

/// Everything needed to re-verify that `A` is an `(α, β)`-Frobenius extension.
#[derive(Debug, Clone)]
pub struct ExtensionCertificate {
    pub ext: ExtensionData,
    pub projective_basis: ProjectiveBasis,
    pub trace: TraceMap,
    pub dual: DualGenerators,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub projective_basis: bool,
    pub trace: TraceReport,
    pub dual: DualGeneratorReport,
}

impl CertificateReport {
    pub fn holds(&self) -> bool {
        self.projective_basis && self.trace.passes() && self.dual.holds()
    }
}

impl ExtensionCertificate {
    /// Re-checks every component independently of how it was produced.
    pub fn verify(&self) -> Result<CertificateReport, ExtensionError> {
        if self.trace.side != Side::Left {
            return Err(ExtensionError::Precondition("certificate trace must be a left trace".into()));
        }
        let projective_basis = self.projective_basis.verify(self.ext.embedding());
        let trace = check_left_trace(&self.ext, &self.trace.map)?;
        let dual = verify_dual_generators(&self.ext, &self.trace.map, &self.dual)?;
        Ok(CertificateReport { projective_basis, trace, dual })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// `A` is not finitely generated projective over `B`.
    L1,
    /// No bimodule map of the right shift is nondegenerate and representing.
    TraceSearch,
    /// A trace was found but dual generators could not be solved or verified.
    DualGenerators,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::L1 => "L1",
            Stage::TraceSearch => "trace",
            Stage::DualGenerators => "dual-generators",
        })
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Certified { certificate: Box<ExtensionCertificate>, candidates_tried: usize },
    Refuted { stage: Stage, reason: String },
    Inconclusive { candidates_tried: usize, space_dimension: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub candidate_cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { candidate_cap: DEFAULT_CANDIDATE_CAP }
    }
}

/// Basis of all bimodule maps `^β A^α → {λ,π}B`.
pub fn equivariant_trace_space(ext: &ExtensionData) -> Vec<GradedLinearMap> {
    let lt = ext.left_twist();
    let rt = ext.right_twist();
    equivariant_maps(ext.big(), ext.small(), &ext.degree(), &[Condition::Left(&lt), Condition::Right(&rt)])
}

/// Full pipeline: projective basis, trace (trying `hint` first, then a
/// deterministic scan of the equivariant space), dual generators, and a final
/// independent verification.
pub fn is_twisted_frobenius(ext: &ExtensionData, hint: Option<&GradedLinearMap>, opts: SearchOptions) -> Verdict {
    let Some(pb) = find_projective_basis(ext.embedding()) else {
        return Verdict::Refuted {
            stage: Stage::L1,
            reason: "no projective basis exists: A is not projective as a left B-module".into(),
        };
    };
    let rep = Representability::new(ext, Side::Left);
    let passes = |tr: &GradedLinearMap| {
        check_trace_with(ext, tr, Side::Left, &rep).map(|r| r.passes()).unwrap_or(false)
    };
    let mut tried = 0;
    let mut found = None;
    if let Some(h) = hint {
        tried += 1;
        if passes(h) {
            found = Some(h.clone());
        }
    }
    if found.is_none() {
        let space = equivariant_trace_space(ext);
        if space.is_empty() {
            return Verdict::Refuted {
                stage: Stage::TraceSearch,
                reason: format!("no nonzero bimodule map of shift {} exists", ext.degree()),
            };
        }
        let field = ext.big().field();
        let flat: Vec<Vector> = space.iter().map(|m| flatten(&m.matrix)).collect();
        let rows = ext.small().dim();
        let cols = ext.big().dim();
        for coeffs in Candidates::new(field, space.len()).take(opts.candidate_cap) {
            tried += 1;
            let v = combine(field, rows * cols, &coeffs, &flat);
            let mut m = Matrix::zeros(field, rows, cols);
            for (i, x) in v.into_iter().enumerate() {
                m.set(i % rows, i / rows, x);
            }
            let cand = GradedLinearMap::new(ext.degree(), m);
            if passes(&cand) {
                found = Some(cand);
                break;
            }
        }
        if found.is_none() {
            if space.len() == 1 {
                return Verdict::Refuted {
                    stage: Stage::TraceSearch,
                    reason: "the bimodule maps form a line and its generator fails L3/L4".into(),
                };
            }
            return Verdict::Inconclusive { candidates_tried: tried, space_dimension: space.len() };
        }
    }
    let tr = found.expect("set above");
    let dual = match find_dual_generators(ext, &tr, &pb) {
        Ok(d) => d,
        Err(e) => return Verdict::Refuted { stage: Stage::DualGenerators, reason: e.to_string() },
    };
    let certificate = ExtensionCertificate {
        ext: ext.clone(),
        projective_basis: pb,
        trace: TraceMap::left(tr),
        dual,
    };
    match certificate.verify() {
        Ok(r) if r.holds() => Verdict::Certified { certificate: Box::new(certificate), candidates_tried: tried },
        Ok(_) => Verdict::Refuted {
            stage: Stage::DualGenerators,
            reason: "assembled certificate failed re-verification".into(),
        },
        Err(e) => Verdict::Refuted { stage: Stage::DualGenerators, reason: e.to_string() },
    }
}

/// `tr(a) = Σ_b tr_A(ψ_B(b) a) b^∨`, a left trace
/// `^{ψ_B} A^{ψ_A} → {λ_A - λ_B, π_A + π_B}B`.
pub fn induced_trace(
    fa: &FrobeniusAlgebraData,
    fb: &FrobeniusAlgebraData,
    emb: &SubalgebraEmbedding,
) -> Result<TraceMap, ExtensionError> {
    let a = fa.algebra();
    let b = fb.algebra();
    if a.field() != b.field() || a.rank() != b.rank() {
        return Err(ExtensionError::Incompatible("field or grading rank mismatch".into()));
    }
    if **b != **emb.small() || **a != **emb.big() {
        return Err(ExtensionError::Incompatible("Frobenius data do not match the embedding".into()));
    }
    let psi_b = fb.nakayama_automorphism();
    let duals = fb.right_dual_basis();
    let twisted: Vec<Vector> = (0..b.dim()).map(|k| emb.embed(&psi_b.image_of_basis(k))).collect();
    let images: Vec<Vector> = (0..a.dim())
        .map(|j| {
            let mut out = b.zero();
            for (k, tb) in twisted.iter().enumerate() {
                let c = fa.trace_of(&a.multiply(tb, &a.basis(j)));
                if !c.is_zero() {
                    crate::exactmath::axpy(&mut out, &c, &duals[k]);
                }
            }
            out
        })
        .collect();
    let shift = fb.degree() - fa.degree();
    let map = GradedLinearMap::from_images(a.field(), b.dim(), shift, &images);
    map.check_graded(a, b)?;
    Ok(TraceMap::left(map))
}

/// The pairing `⟨x, y⟩ = tr(xy)` with its associativity, nondegeneracy (L3)
/// and representability (L4) properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    /// `table[i][j] = tr(e_i e_j)` in `B`-coordinates.
    pub table: Vec<Vec<Vector>>,
    pub associative: bool,
    pub nondegenerate: bool,
    pub representable: bool,
}

pub fn bilinear_form(ext: &ExtensionData, tr: &GradedLinearMap) -> Result<BilinearForm, ExtensionError> {
    ext.check_trace_shift(tr)?;
    let a = ext.big();
    let table = product_table(a, tr);
    let mut associative = true;
    'outer: for x in 0..a.dim() {
        for y in 0..a.dim() {
            for z in 0..a.dim() {
                let mut lhs = ext.small().zero();
                for (k, c) in a.product_of_basis(x, y) {
                    crate::exactmath::axpy(&mut lhs, c, &table[*k][z]);
                }
                let mut rhs = ext.small().zero();
                for (k, c) in a.product_of_basis(y, z) {
                    crate::exactmath::axpy(&mut rhs, c, &table[x][*k]);
                }
                if lhs != rhs {
                    associative = false;
                    break 'outer;
                }
            }
        }
    }
    let nondegenerate = injective_pairing(a, &table, Side::Left);
    let representable = Representability::new(ext, Side::Left)
        .check(ext, &table)
        .iter()
        .all(|s| s.hom_dimension == s.realized_rank);
    Ok(BilinearForm { table, associative, nondegenerate, representable })
}

/// `C_A(α(B))`.
pub fn twisted_centralizer(ext: &ExtensionData) -> Vec<Vector> {
    let rt = ext.right_twist();
    let elems: Vec<Vector> = (0..ext.small().dim()).map(|k| rt.image_of_basis(k)).collect();
    supercentralizer(ext.big(), &elems).expect("twisted basis is homogeneous")
}

/// `C_A(B)`.
pub fn untwisted_centralizer(ext: &ExtensionData) -> Vec<Vector> {
    crate::gsalg::centralizer(ext.embedding())
}

/// Solves `tr(cx) = (-1)^{|x||c|} tr(x ψ(c))` for `ψ(c)` with `c` homogeneous.
pub fn solve_nakayama(ext: &ExtensionData, tr: &GradedLinearMap, c: &[Scalar]) -> Result<Option<Vector>, ExtensionError> {
    let a = ext.big();
    let field = a.field();
    let Some(d) = a.degree_of(c)? else { return Ok(Some(a.zero())) };
    let table = product_table(a, tr);
    let mut rhs = Vec::new();
    for x in 0..a.dim() {
        let s = field.sign(a.parity(x) * d.parity);
        rhs.extend(tr.apply(&a.multiply(c, &a.basis(x))).iter().map(|v| &s * v));
    }
    let idx = a.indices_of_degree(&d);
    let cols: Vec<Vector> = idx.iter().map(|&k| (0..a.dim()).flat_map(|x| table[x][k].clone()).collect()).collect();
    let system = Matrix::from_columns(field, rhs.len(), &cols);
    Ok(system.solve(&rhs).expect("consistent shapes").map(|sol| {
        let mut y = a.zero();
        for (&k, v) in idx.iter().zip(sol) {
            y[k] = v;
        }
        y
    }))
}

/// The Nakayama isomorphism `ψ: C_A(B) → C_A(α(B))` on a basis, with the
/// checks that it is a degree-preserving ring isomorphism onto its target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NakayamaIsomorphism {
    pub domain: Vec<Vector>,
    pub images: Vec<Vector>,
    pub target: Vec<Vector>,
    pub unit_preserving: bool,
    pub multiplicative: bool,
    pub degree_preserving: bool,
    pub injective: bool,
    pub image_spans_target: bool,
}

impl NakayamaIsomorphism {
    pub fn holds(&self) -> bool {
        self.unit_preserving
            && self.multiplicative
            && self.degree_preserving
            && self.injective
            && self.image_spans_target
    }
}

fn same_span(field: crate::exactmath::Field, dim: usize, u: &[Vector], v: &[Vector]) -> bool {
    let mut eu = Echelon::new(field, dim);
    for x in u {
        eu.insert_dense(x.clone());
    }
    let mut ev = Echelon::new(field, dim);
    for x in v {
        ev.insert_dense(x.clone());
    }
    eu.rank() == ev.rank() && v.iter().all(|x| eu.contains(x))
}

pub fn nakayama_isomorphism(ext: &ExtensionData, tr: &GradedLinearMap) -> Result<NakayamaIsomorphism, ExtensionError> {
    ext.check_trace_shift(tr)?;
    let a = ext.big();
    let field = a.field();
    let domain = untwisted_centralizer(ext);
    let target = twisted_centralizer(ext);
    let solve = |c: &[Scalar]| -> Result<Vector, ExtensionError> {
        solve_nakayama(ext, tr, c)?
            .ok_or_else(|| ExtensionError::Precondition("Nakayama system is singular".into()))
    };
    let images: Vec<Vector> = domain.iter().map(|c| solve(c)).collect::<Result<_, _>>()?;
    let unit_preserving = solve(&a.unit())? == a.unit();
    let mut multiplicative = true;
    'outer: for (c1, p1) in domain.iter().zip(&images) {
        for (c2, p2) in domain.iter().zip(&images) {
            if solve(&a.multiply(c1, c2))? != a.multiply(p1, p2) {
                multiplicative = false;
                break 'outer;
            }
        }
    }
    let degree_preserving = domain
        .iter()
        .zip(&images)
        .all(|(c, p)| is_zero_vector(p) || a.degree_of(c).ok() == a.degree_of(p).ok());
    let mut ech = Echelon::new(field, a.dim());
    let injective = images.iter().all(|p| ech.insert_dense(p.clone()));
    let image_spans_target = same_span(field, a.dim(), &images, &target);
    Ok(NakayamaIsomorphism {
        domain,
        images,
        target,
        unit_preserving,
        multiplicative,
        degree_preserving,
        injective,
        image_spans_target,
    })
}

/// `ψ(a) = Σ_i (-1)^{|a||x_i|} y_i α(tr(a x_i))` for homogeneous `a`.
pub fn nakayama_explicit_apply(
    ext: &ExtensionData,
    tr: &GradedLinearMap,
    dg: &DualGenerators,
    a_elt: &[Scalar],
) -> Result<Vector, ExtensionError> {
    let a = ext.big();
    let field = a.field();
    let pa = a.parity_of(a_elt)?;
    let mut sum = a.zero();
    for (x, y) in dg.x.iter().zip(&dg.y) {
        let s = field.sign(pa * a.parity_of(x)?);
        let coeff = ext.alpha().apply(&ext.include(&tr.apply(&a.multiply(a_elt, x))));
        crate::exactmath::axpy(&mut sum, &s, &a.multiply(y, &coeff));
    }
    Ok(sum)
}

/// `ψ⁻¹(a) = Σ_i (-1)^{(|a|+π)|x_i|} β(tr(y_i a)) x_i` for homogeneous `a`.
pub fn nakayama_explicit_inverse(
    ext: &ExtensionData,
    tr: &GradedLinearMap,
    dg: &DualGenerators,
    a_elt: &[Scalar],
) -> Result<Vector, ExtensionError> {
    let a = ext.big();
    let field = a.field();
    let pa = a.parity_of(a_elt)?;
    let mut sum = a.zero();
    for (x, y) in dg.x.iter().zip(&dg.y) {
        let s = field.sign((pa + ext.parity()) * a.parity_of(x)?);
        let coeff = ext.include(&ext.beta().apply(&tr.apply(&a.multiply(y, a_elt))));
        crate::exactmath::axpy(&mut sum, &s, &a.multiply(&coeff, x));
    }
    Ok(sum)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NakayamaExplicitReport {
    /// Indices of `C_A(B)` basis elements where formula and solver disagree.
    pub mismatches: Vec<usize>,
    /// `ψ ∘ ψ⁻¹ = id` on `C_A(α(B))`.
    pub right_inverse: bool,
    /// `ψ⁻¹ ∘ ψ = id` on `C_A(B)`.
    pub left_inverse: bool,
}

impl NakayamaExplicitReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty() && self.right_inverse && self.left_inverse
    }
}

pub fn nakayama_explicit(
    ext: &ExtensionData,
    tr: &GradedLinearMap,
    dg: &DualGenerators,
) -> Result<NakayamaExplicitReport, ExtensionError> {
    let iso = nakayama_isomorphism(ext, tr)?;
    let mut mismatches = Vec::new();
    let mut left_inverse = true;
    for (i, (c, p)) in iso.domain.iter().zip(&iso.images).enumerate() {
        let q = nakayama_explicit_apply(ext, tr, dg, c)?;
        if &q != p {
            mismatches.push(i);
        }
        if nakayama_explicit_inverse(ext, tr, dg, &q)? != *c {
            left_inverse = false;
        }
    }
    let mut right_inverse = true;
    for t in &iso.target {
        let back = nakayama_explicit_inverse(ext, tr, dg, t)?;
        if nakayama_explicit_apply(ext, tr, dg, &back)? != *t {
            right_inverse = false;
        }
    }
    Ok(NakayamaExplicitReport { mismatches, right_inverse, left_inverse })
}

/// Degree-(0,0) part of `C_A(α(B))`.
pub fn twisted_centralizer_degree_zero(ext: &ExtensionData) -> Vec<Vector> {
    let zero = Degree::zero(ext.big().rank());
    twisted_centralizer(ext)
        .into_iter()
        .filter(|v| ext.big().degree_of(v).ok().flatten().as_ref() == Some(&zero))
        .collect()
}

/// Finds the invertible `a ∈ C_A(α(B))_{0,0}` with `tr2 = tr1 ∘ ρ_a`.
pub fn trace_uniqueness_witness(
    ext: &ExtensionData,
    tr1: &GradedLinearMap,
    tr2: &GradedLinearMap,
) -> Result<Option<Vector>, ExtensionError> {
    ext.check_trace_shift(tr1)?;
    ext.check_trace_shift(tr2)?;
    let a = ext.big();
    let field = a.field();
    let basis = twisted_centralizer_degree_zero(ext);
    let cols: Vec<Vector> = basis
        .iter()
        .map(|z| Ok(flatten(&trace_times_right(ext, tr1, z)?.matrix)))
        .collect::<Result<_, ExtensionError>>()?;
    let rhs = flatten(&tr2.matrix);
    let system = Matrix::from_columns(field, rhs.len(), &cols);
    let Some(sol) = system.solve(&rhs).expect("consistent shapes") else { return Ok(None) };
    let w = combine(field, a.dim(), &sol, &basis);
    Ok(a.is_invertible(&w).then_some(w))
}

/// Alternative twisting data `(α', β', λ', π')`.
#[derive(Debug, Clone)]
pub struct AlternativeData {
    pub alpha: GradedLinearMap,
    pub beta: GradedLinearMap,
    pub shift: Degree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSearch {
    Found(Vector),
    /// Certified absence.
    NoneExists(String),
    /// The scan hit its cap without finding an invertible element.
    Inconclusive { candidates_tried: usize },
}

impl WitnessSearch {
    pub fn found(&self) -> Option<&Vector> {
        match self {
            WitnessSearch::Found(v) => Some(v),
            _ => None,
        }
    }
}

/// Basis of `{μ ∈ A_{(λ'-λ, π'-π)} : μ σ(b) = ς(b) μ}` with
/// `σ = α'⁻¹α` and `ς = β'⁻¹β`.
pub fn conjugation_space(ext: &ExtensionData, alt: &AlternativeData) -> Result<(Degree, Vec<Vector>), ExtensionError> {
    let a = ext.big();
    let b = ext.small();
    let field = a.field();
    if !check_automorphism(a, &alt.alpha)?.is_automorphism() {
        return Err(ExtensionError::NotAutomorphism("alternative alpha"));
    }
    if !check_automorphism(b, &alt.beta)?.is_automorphism() {
        return Err(ExtensionError::NotAutomorphism("alternative beta"));
    }
    let sigma = alt.alpha.inverse().expect("automorphism").compose(ext.alpha());
    let varsigma = alt.beta.inverse().expect("automorphism").compose(ext.beta());
    let d = &alt.shift - ext.shift();
    let idx = a.indices_of_degree(&d);
    let mut rows: Vec<Vector> = Vec::new();
    for k in 0..b.dim() {
        let sb = sigma.apply(&ext.include(&b.basis(k)));
        let vb = ext.include(&varsigma.apply(&b.basis(k)));
        let cols: Vec<Vector> = idx
            .iter()
            .map(|&j| crate::exactmath::sub_vectors(&a.multiply(&a.basis(j), &sb), &a.multiply(&vb, &a.basis(j))))
            .collect();
        for r in 0..a.dim() {
            let row: Vector = cols.iter().map(|c| c[r].clone()).collect();
            if !is_zero_vector(&row) {
                rows.push(row);
            }
        }
    }
    let system = if rows.is_empty() { Matrix::zeros(field, 0, idx.len()) } else { Matrix::from_rows(field, rows).expect("rectangular") };
    let basis = system
        .kernel_basis()
        .into_iter()
        .map(|k| {
            let mut v = a.zero();
            for (&j, c) in idx.iter().zip(k) {
                v[j] = c;
            }
            v
        })
        .collect();
    Ok((d, basis))
}

/// Searches for a homogeneous invertible `μ` relating two sets of twisting
/// data. Order: `1_A`, then single basis elements from the highest index
/// down, then the generic candidate scan.
pub fn data_uniqueness_witness(
    ext: &ExtensionData,
    alt: &AlternativeData,
    opts: SearchOptions,
) -> Result<WitnessSearch, ExtensionError> {
    let a = ext.big();
    let field = a.field();
    let (d, space) = conjugation_space(ext, alt)?;
    if space.is_empty() {
        return Ok(WitnessSearch::NoneExists(format!("no nonzero solution in degree {d}")));
    }
    if !d.is_zero() {
        let scan = homogeneous_invertibles_are_scalars(a);
        if scan.holds && scan.certainty == Certainty::Certified {
            return Ok(WitnessSearch::NoneExists(format!(
                "homogeneous units are scalars and the required degree {d} is nonzero"
            )));
        }
    }
    let mut span = Echelon::new(field, a.dim());
    for v in &space {
        span.insert_dense(v.clone());
    }
    if span.contains(&a.unit()) && a.is_invertible(&a.unit()) {
        return Ok(WitnessSearch::Found(a.unit()));
    }
    for j in a.indices_of_degree(&d).into_iter().rev() {
        let e = a.basis(j);
        if span.contains(&e) && a.is_invertible(&e) {
            return Ok(WitnessSearch::Found(e));
        }
    }
    let mut tried = 0;
    for coeffs in Candidates::new(field, space.len()).take(opts.candidate_cap) {
        tried += 1;
        let v = combine(field, a.dim(), &coeffs, &space);
        if a.is_invertible(&v) {
            return Ok(WitnessSearch::Found(v));
        }
    }
    if space.len() == 1 {
        return Ok(WitnessSearch::NoneExists("the solution space is a line of non-units".into()));
    }
    Ok(WitnessSearch::Inconclusive { candidates_tried: tried })
}

/// Checks `μ σ(b) = ς(b) μ` for every basis `b`, and invertibility of `μ`.
pub fn verify_data_witness(ext: &ExtensionData, alt: &AlternativeData, mu: &[Scalar]) -> bool {
    let a = ext.big();
    let b = ext.small();
    let Some(sigma) = alt.alpha.inverse().map(|i| i.compose(ext.alpha())) else { return false };
    let Some(varsigma) = alt.beta.inverse().map(|i| i.compose(ext.beta())) else { return false };
    a.is_invertible(mu)
        && (0..b.dim()).all(|k| {
            let sb = sigma.apply(&ext.include(&b.basis(k)));
            let vb = ext.include(&varsigma.apply(&b.basis(k)));
            a.multiply(mu, &sb) == a.multiply(&vb, mu)
        })
}

/// `Φ(a) = tr ∘ ρ_{α(a)}` for homogeneous `a`.
pub fn bimodule_iso_from_trace(ext: &ExtensionData, tr: &GradedLinearMap, a_elt: &[Scalar]) -> Result<GradedLinearMap, ExtensionError> {
    trace_times_right(ext, tr, &ext.alpha().apply(a_elt))
}

/// `Ψ(a)(x) = (-1)^{|a||x|} β(Φ(x)(a))` for homogeneous `a`.
pub fn right_iso_from_trace(ext: &ExtensionData, tr: &GradedLinearMap, a_elt: &[Scalar]) -> Result<GradedLinearMap, ExtensionError> {
    let a = ext.big();
    let field = a.field();
    let pa = a.parity_of(a_elt)?;
    let shift = a.degree_of(a_elt)?.unwrap_or_else(|| Degree::zero(a.rank()));
    let images: Vec<Vector> = (0..a.dim())
        .map(|x| {
            let phi = bimodule_iso_from_trace(ext, tr, &a.basis(x))?;
            let s = field.sign(pa * a.parity(x));
            Ok(ext.beta().apply(&phi.apply(a_elt)).iter().map(|v| &s * v).collect())
        })
        .collect::<Result<_, ExtensionError>>()?;
    Ok(GradedLinearMap::from_images(field, ext.small().dim(), &ext.degree() + &shift, &images))
}

/// `β⁻¹ Ψ(1)(α⁻¹(a₁) a₂) = Φ(1)(a₁ α(a₂))` on all basis pairs.
pub fn check_bil_form(ext: &ExtensionData, tr: &GradedLinearMap) -> Result<bool, ExtensionError> {
    let a = ext.big();
    let psi1 = right_iso_from_trace(ext, tr, &a.unit())?;
    let phi1 = bimodule_iso_from_trace(ext, tr, &a.unit())?;
    for i in 0..a.dim() {
        let ai = ext.alpha_inverse().apply(&a.basis(i));
        for j in 0..a.dim() {
            let lhs = ext.beta_inverse().apply(&psi1.apply(&a.multiply(&ai, &a.basis(j))));
            let rhs = phi1.apply(&a.multiply(&a.basis(i), &ext.alpha().apply(&a.basis(j))));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{nilcoxeter, nilcoxeter_fixture, non_projective_pair, trivial_fixture};
    use crate::exactmath::Field;

    const Q: Field = Field::Rational;

    #[test]
    fn trivial_extension_projective_basis_is_unit() {
        let n2 = nilcoxeter(2).unwrap();
        let fx = trivial_fixture(&n2);
        let pb = find_projective_basis(fx.ext.embedding()).unwrap();
        assert_eq!(pb.elements, vec![n2.algebra().unit()]);
        assert_eq!(pb.functionals, vec![GradedLinearMap::identity(n2.algebra())]);
        assert!(pb.verify(fx.ext.embedding()));
        let dg = find_dual_generators(&fx.ext, &fx.trace.map, &pb).unwrap();
        assert_eq!(dg.y, vec![n2.algebra().unit()]);
    }

    #[test]
    fn non_projective_pair_has_no_projective_basis() {
        assert!(find_projective_basis(&non_projective_pair()).is_none());
    }

    #[test]
    fn n2_over_field_dual_generators() {
        let fx = nilcoxeter_fixture(1, 2).unwrap();
        let a = fx.ext.big();
        assert!(check_left_trace(&fx.ext, &fx.trace.map).unwrap().passes());
        let pb = find_projective_basis(fx.ext.embedding()).unwrap();
        let dg = find_dual_generators(&fx.ext, &fx.trace.map, &pb).unwrap();
        assert_eq!(dg.x, vec![a.basis(0), a.basis(1)]);
        assert_eq!(dg.y, vec![a.basis(1), a.basis(0)]);
        assert!(verify_dual_generators(&fx.ext, &fx.trace.map, &dg).unwrap().holds());
        let swapped = DualGenerators { x: dg.x.clone(), y: vec![dg.y[1].clone(), dg.y[0].clone()] };
        assert!(verify_dual_generators(&fx.ext, &fx.trace.map, &swapped).is_err());
    }

    #[test]
    fn zero_trace_fails_nondegeneracy() {
        let fx = nilcoxeter_fixture(1, 2).unwrap();
        let zero = GradedLinearMap::new(fx.ext.degree(), Matrix::zeros(Q, 1, 2));
        let l = check_left_trace(&fx.ext, &zero).unwrap();
        assert!(!l.nondegenerate && !l.passes());
        let r = check_right_trace(&fx.ext, &zero).unwrap();
        assert!(!r.nondegenerate);
    }

    #[test]
    fn shift_mismatch_is_an_error() {
        let fx = nilcoxeter_fixture(1, 2).unwrap();
        let bad = GradedLinearMap::new(Degree::scalar(0, 0), Matrix::zeros(Q, 1, 2));
        assert!(matches!(check_left_trace(&fx.ext, &bad), Err(ExtensionError::ShiftMismatch { .. })));
    }

    #[test]
    fn n2_bilinear_form_table() {
        let fx = nilcoxeter_fixture(1, 2).unwrap();
        let form = bilinear_form(&fx.ext, &fx.trace.map).unwrap();
        let flat: Vec<String> = form.table.iter().flatten().flatten().map(ToString::to_string).collect();
        assert_eq!(flat, vec!["0", "1", "1", "0"]);
        assert!(form.associative && form.nondegenerate && form.representable);
    }

    #[test]
    fn phi_of_unit_is_the_trace() {
        let fx = nilcoxeter_fixture(1, 2).unwrap();
        let a = fx.ext.big();
        let phi = bimodule_iso_from_trace(&fx.ext, &fx.trace.map, &a.unit()).unwrap();
        assert_eq!(phi, fx.trace.map);
        for j in 0..a.dim() {
            let phi_a = bimodule_iso_from_trace(&fx.ext, &fx.trace.map, &a.basis(j)).unwrap();
            assert_eq!(phi_a.apply(&a.unit()), fx.trace.map.apply(&fx.ext.alpha().apply(&a.basis(j))));
        }
        assert!(check_bil_form(&fx.ext, &fx.trace.map).unwrap());
    }
}
