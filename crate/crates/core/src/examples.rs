//! Fixture algebras and extensions: nilcoxeter algebras, symmetric group
//! algebras, truncated polynomial rings and exterior algebras.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::exactmath::{Field, Matrix, Scalar, Vector};
use crate::extension::{induced_trace, ExtensionData, ExtensionError, TraceMap};
use crate::frobenius::{check_frobenius, FrobeniusAlgebraData};
use crate::gsalg::{Degree, GradedLinearMap, GradedSuperAlgebra, SubalgebraEmbedding};

pub const SYMMETRIC_CAP: usize = 4;
pub const NILCOXETER_CAP: usize = 6;
pub const EXTERIOR_CAP: usize = 4;

#[derive(Debug, Error)]
pub enum ExampleError {
    #[error("{what}({n}) exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
}

/// Permutations of `{0, …, n-1}` in one-line notation.
pub mod perm {
    pub type Perm = Vec<usize>;

    pub fn identity(n: usize) -> Perm {
        (0..n).collect()
    }

    /// `(w ∘ v)(i) = w(v(i))`.
    pub fn compose(w: &[usize], v: &[usize]) -> Perm {
        v.iter().map(|&i| w[i]).collect()
    }

    pub fn inverse(w: &[usize]) -> Perm {
        let mut inv = vec![0; w.len()];
        for (i, &x) in w.iter().enumerate() {
            inv[x] = i;
        }
        inv
    }

    /// Number of inversions.
    pub fn length(w: &[usize]) -> usize {
        let mut l = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    l += 1;
                }
            }
        }
        l
    }

    /// The simple transposition `s_i` (1-based), swapping `i-1` and `i`.
    pub fn simple(n: usize, i: usize) -> Perm {
        let mut w = identity(n);
        w.swap(i - 1, i);
        w
    }

    /// Lexicographically smallest reduced word `[i₁, …, i_k]` with
    /// `w = s_{i₁} ⋯ s_{i_k}`.
    pub fn reduced_word(w: &[usize]) -> Vec<usize> {
        let n = w.len();
        let mut cur = w.to_vec();
        let mut word = Vec::new();
        while let Some(i) = (1..n).find(|&i| {
            let inv = inverse(&cur);
            inv[i - 1] > inv[i]
        }) {
            word.push(i);
            cur = compose(&simple(n, i), &cur);
        }
        word
    }

    pub fn longest(n: usize) -> Perm {
        (0..n).rev().collect()
    }

    /// All of `S_n`, ordered by length and then by reduced word.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = vec![identity(n)];
        let mut i = 0;
        while i < out.len() {
            let w = out[i].clone();
            for s in 1..n {
                let v = compose(&w, &simple(n, s));
                if !out.contains(&v) {
                    out.push(v);
                }
            }
            i += 1;
        }
        out.sort_by_cached_key(|w| (length(w), reduced_word(w)));
        out
    }

    /// Extends `w ∈ S_m` to `S_n` by fixing the remaining points.
    pub fn pad(w: &[usize], n: usize) -> Perm {
        let mut v = w.to_vec();
        v.extend(w.len()..n);
        v
    }
}

fn word_label(prefix: &str, word: &[usize], empty: &str) -> String {
    if word.is_empty() {
        return empty.to_string();
    }
    word.iter().map(|i| format!("{prefix}{i}")).collect()
}

fn top_trace(alg: &GradedSuperAlgebra, top: usize, degree: &Degree) -> GradedLinearMap {
    let field = alg.field();
    let mut m = Matrix::zeros(field, 1, alg.dim());
    m.set(0, top, field.one());
    GradedLinearMap::new(-degree, m)
}

fn frobenius(alg: GradedSuperAlgebra, top: usize, degree: Degree) -> FrobeniusAlgebraData {
    let alg = Arc::new(alg);
    let tr = top_trace(&alg, top, &degree);
    check_frobenius(alg, &tr, &degree)
        .expect("well-formed trace")
        .expect("fixture trace is nondegenerate")
}

fn binomial2(n: usize) -> i64 {
    (n * n.saturating_sub(1) / 2) as i64
}

fn permutation_algebra(n: usize, graded: bool) -> (GradedSuperAlgebra, Vec<perm::Perm>) {
    let field = Field::Rational;
    let n = n.max(1);
    let perms = perm::all(n);
    let index: HashMap<&perm::Perm, usize> = perms.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let lengths: Vec<usize> = perms.iter().map(|w| perm::length(w)).collect();
    let (prefix, empty) = if graded { ("u", "1") } else { ("s", "e") };
    let labels = perms.iter().map(|w| word_label(prefix, &perm::reduced_word(w), empty)).collect();
    let degrees = lengths
        .iter()
        .map(|&l| if graded { Degree::scalar(l as i64, (l % 2) as u8) } else { Degree::scalar(0, 0) })
        .collect();
    let mut products = Vec::new();
    for (i, w) in perms.iter().enumerate() {
        for (j, v) in perms.iter().enumerate() {
            let wv = perm::compose(w, v);
            let k = index[&wv];
            if !graded || lengths[k] == lengths[i] + lengths[j] {
                products.push((i, j, k, field.one()));
            }
        }
    }
    let mut unit = vec![field.zero(); perms.len()];
    unit[0] = field.one();
    let alg = GradedSuperAlgebra::new(field, 1, labels, degrees, products, unit).expect("well-formed table");
    (alg, perms)
}

/// The nilcoxeter algebra `N_n` with trace the coefficient of the longest
/// element, of degree `(C(n,2), C(n,2) mod 2)`. `N_0 = N_1 = F`.
pub fn nilcoxeter(n: usize) -> Result<FrobeniusAlgebraData, ExampleError> {
    if n > NILCOXETER_CAP {
        return Err(ExampleError::CapExceeded { what: "nilcoxeter", n, cap: NILCOXETER_CAP });
    }
    let (alg, perms) = permutation_algebra(n, true);
    let c = binomial2(n);
    Ok(frobenius(alg, perms.len() - 1, Degree::scalar(c, (c % 2) as u8)))
}

/// The group algebra `F S_n`, trivially graded, with trace the coefficient of
/// the longest element.
pub fn symmetric_group_algebra(n: usize) -> Result<FrobeniusAlgebraData, ExampleError> {
    if n > SYMMETRIC_CAP {
        return Err(ExampleError::CapExceeded { what: "symmetric", n, cap: SYMMETRIC_CAP });
    }
    let (alg, perms) = permutation_algebra(n, false);
    Ok(frobenius(alg, perms.len() - 1, Degree::scalar(0, 0)))
}

/// `F[x]/x^k` with `|x| = (1, 0)` and trace the top coefficient.
pub fn truncated_polynomial(k: usize) -> Result<FrobeniusAlgebraData, ExampleError> {
    if k == 0 {
        return Err(ExampleError::InvalidParameters("truncated polynomial needs k >= 1".into()));
    }
    let field = Field::Rational;
    let labels = (0..k)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x{i}"),
        })
        .collect();
    let degrees = (0..k).map(|i| Degree::scalar(i as i64, 0)).collect();
    let mut products = Vec::new();
    for i in 0..k {
        for j in 0..k - i {
            products.push((i, j, i + j, field.one()));
        }
    }
    let unit = crate::exactmath::unit_vector(field, k, 0);
    let alg = GradedSuperAlgebra::new(field, 1, labels, degrees, products, unit).expect("well-formed table");
    Ok(frobenius(alg, k - 1, Degree::scalar(k as i64 - 1, 0)))
}

/// The exterior algebra on `m` odd generators of degree `(1, 1)`.
pub fn exterior_algebra(m: usize) -> Result<FrobeniusAlgebraData, ExampleError> {
    if m == 0 {
        return Err(ExampleError::InvalidParameters("exterior algebra needs m >= 1".into()));
    }
    if m > EXTERIOR_CAP {
        return Err(ExampleError::CapExceeded { what: "exterior", n: m, cap: EXTERIOR_CAP });
    }
    let field = Field::Rational;
    let mut masks: Vec<u32> = (0..1u32 << m).collect();
    let members = |s: u32| -> Vec<usize> { (0..m).filter(|i| s >> i & 1 == 1).collect() };
    masks.sort_by_key(|&s| (s.count_ones(), members(s)));
    let index: HashMap<u32, usize> = masks.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let labels = masks
        .iter()
        .map(|&s| word_label("t", &members(s).iter().map(|i| i + 1).collect::<Vec<_>>(), "1"))
        .collect();
    let degrees = masks
        .iter()
        .map(|&s| Degree::scalar(s.count_ones() as i64, (s.count_ones() % 2) as u8))
        .collect();
    let mut products = Vec::new();
    for (i, &s) in masks.iter().enumerate() {
        for (j, &t) in masks.iter().enumerate() {
            if s & t != 0 {
                continue;
            }
            // Sorting θ_S θ_T costs one sign per pair (a ∈ S, b ∈ T) with a > b.
            let swaps: usize = members(s)
                .iter()
                .map(|&a| members(t).iter().filter(|&&b| a > b).count())
                .sum();
            products.push((i, j, index[&(s | t)], field.sign((swaps % 2) as u8)));
        }
    }
    let unit = crate::exactmath::unit_vector(field, masks.len(), 0);
    let alg = GradedSuperAlgebra::new(field, 1, labels, degrees, products, unit).expect("well-formed table");
    Ok(frobenius(alg, masks.len() - 1, Degree::scalar(m as i64, (m % 2) as u8)))
}

fn permutation_embedding(
    big: &FrobeniusAlgebraData,
    small: &FrobeniusAlgebraData,
    m: usize,
    n: usize,
) -> SubalgebraEmbedding {
    let big_perms = perm::all(n.max(1));
    let small_perms = perm::all(m.max(1));
    let index: HashMap<&perm::Perm, usize> = big_perms.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let field = big.algebra().field();
    let cols: Vec<Vector> = small_perms
        .iter()
        .map(|w| crate::exactmath::unit_vector(field, big_perms.len(), index[&perm::pad(w, n.max(1))]))
        .collect();
    let inclusion = Matrix::from_columns(field, big_perms.len(), &cols);
    SubalgebraEmbedding::new(big.algebra().clone(), small.algebra().clone(), inclusion)
        .expect("S_m ⊆ S_n induces a subalgebra")
}

/// An extension together with the trace used to certify it.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub ext: ExtensionData,
    pub trace: TraceMap,
}

fn frobenius_pair_fixture(
    name: String,
    big: &FrobeniusAlgebraData,
    small: &FrobeniusAlgebraData,
    emb: SubalgebraEmbedding,
) -> Result<Fixture, ExampleError> {
    let alpha = big.nakayama_automorphism();
    let beta = small.nakayama_automorphism();
    let shift = big.degree() - small.degree();
    let ext = ExtensionData::new(emb.clone(), alpha, beta, shift)?;
    let trace = induced_trace(big, small, &emb)?;
    Ok(Fixture { name, ext, trace })
}

/// `N_m ⊆ N_n` with twists `(ψ_n, ψ_m)` and shift
/// `(C(n,2) - C(m,2), C(n,2) + C(m,2) mod 2)`.
pub fn nilcoxeter_extension(m: usize, n: usize) -> Result<ExtensionData, ExampleError> {
    Ok(nilcoxeter_fixture(m, n)?.ext)
}

/// [`nilcoxeter_extension`] with its induced trace.
pub fn nilcoxeter_fixture(m: usize, n: usize) -> Result<Fixture, ExampleError> {
    if m >= n {
        return Err(ExampleError::InvalidParameters(format!("need m < n, got m = {m}, n = {n}")));
    }
    let big = nilcoxeter(n)?;
    let small = nilcoxeter(m)?;
    let emb = permutation_embedding(&big, &small, m, n);
    frobenius_pair_fixture(format!("nilcoxeter:{m}:{n}"), &big, &small, emb)
}

/// `F S_m ⊆ F S_n` with twists `(ψ_n, ψ_m)` (conjugation by longest elements).
pub fn symmetric_fixture(m: usize, n: usize) -> Result<Fixture, ExampleError> {
    if m >= n {
        return Err(ExampleError::InvalidParameters(format!("need m < n, got m = {m}, n = {n}")));
    }
    let big = symmetric_group_algebra(n)?;
    let small = symmetric_group_algebra(m)?;
    let emb = permutation_embedding(&big, &small, m, n);
    frobenius_pair_fixture(format!("symmetric:{m}:{n}"), &big, &small, emb)
}

/// `B = A` with identity twists, zero shift and `tr = id`.
pub fn trivial_fixture(data: &FrobeniusAlgebraData) -> Fixture {
    let alg = data.algebra().clone();
    let emb = SubalgebraEmbedding::identity(alg.clone());
    let id = GradedLinearMap::identity(&alg);
    let ext = ExtensionData::new(emb, id.clone(), id.clone(), Degree::zero(alg.rank()))
        .expect("identity twists are automorphisms");
    Fixture { name: "trivial".into(), ext, trace: TraceMap::left(id) }
}

/// `F[x]/x³` over its subalgebra `span{1, x²}`.
///
/// The subalgebra is read as the one generated by `x²`; the unital subalgebra
/// generated by `x` would be all of `A`.
pub fn non_projective_pair() -> SubalgebraEmbedding {
    let big = truncated_polynomial(3).expect("k = 3");
    let small = non_projective_subalgebra();
    let field = Field::Rational;
    let inclusion = Matrix::from_i64(field, &[&[1, 0], &[0, 0], &[0, 1]]);
    SubalgebraEmbedding::new(big.algebra().clone(), small.algebra().clone(), inclusion)
        .expect("span{1, x^2} is a subalgebra")
}

/// `span{1, y}` with `y = x²`, a copy of the dual numbers in degree 2.
pub fn non_projective_subalgebra() -> FrobeniusAlgebraData {
    let field = Field::Rational;
    let alg = GradedSuperAlgebra::new(
        field,
        1,
        vec!["1".into(), "y".into()],
        vec![Degree::scalar(0, 0), Degree::scalar(2, 0)],
        [(0, 0, 0, field.one()), (0, 1, 1, field.one()), (1, 0, 1, field.one())],
        vec![field.one(), field.zero()],
    )
    .expect("well-formed table");
    frobenius(alg, 1, Degree::scalar(2, 0))
}

/// [`non_projective_pair`] as an extension with identity twists and the
/// shift its Frobenius degrees would induce.
pub fn non_projective_fixture() -> Result<Fixture, ExampleError> {
    let big = truncated_polynomial(3)?;
    let small = non_projective_subalgebra();
    let emb = non_projective_pair();
    let id_a = GradedLinearMap::identity(big.algebra());
    let id_b = GradedLinearMap::identity(small.algebra());
    let ext = ExtensionData::new(emb.clone(), id_a, id_b, Degree::scalar(0, 0))?;
    let trace = induced_trace(&big, &small, &emb)?;
    Ok(Fixture { name: "nonproj".into(), ext, trace })
}

/// A resolved builtin name.
#[derive(Debug, Clone)]
pub enum Builtin {
    Algebra { name: String, data: FrobeniusAlgebraData },
    Extension(Fixture),
}

/// Resolves names such as `nilcoxeter:3`, `nilcoxeter:2:3`, `symmetric:2:3`,
/// `truncated:3`, `exterior:2` and `nonproj`.
pub fn builtin(name: &str) -> Result<Builtin, ExampleError> {
    if let Some(inner) = name.strip_prefix("trivial:") {
        return match builtin(inner)? {
            Builtin::Algebra { data, .. } => {
                let mut fx = trivial_fixture(&data);
                fx.name = name.to_string();
                Ok(Builtin::Extension(fx))
            }
            Builtin::Extension(_) => Err(ExampleError::UnknownBuiltin(name.to_string())),
        };
    }
    let parts: Vec<&str> = name.split(':').collect();
    let nums: Option<Vec<usize>> = parts[1..].iter().map(|p| p.parse().ok()).collect();
    let unknown = || ExampleError::UnknownBuiltin(name.to_string());
    let nums = nums.ok_or_else(unknown)?;
    let algebra = |data: FrobeniusAlgebraData| Builtin::Algebra { name: name.to_string(), data };
    match (parts[0], nums.as_slice()) {
        ("nilcoxeter", [n]) => Ok(algebra(nilcoxeter(*n)?)),
        ("nilcoxeter", [m, n]) => Ok(Builtin::Extension(nilcoxeter_fixture(*m, *n)?)),
        ("symmetric", [n]) => Ok(algebra(symmetric_group_algebra(*n)?)),
        ("symmetric", [m, n]) => Ok(Builtin::Extension(symmetric_fixture(*m, *n)?)),
        ("truncated", [k]) => Ok(algebra(truncated_polynomial(*k)?)),
        ("exterior", [m]) => Ok(algebra(exterior_algebra(*m)?)),
        ("nonproj", []) => Ok(Builtin::Extension(non_projective_fixture()?)),
        _ => Err(unknown()),
    }
}

/// Automorphisms `e ↦ t^{λ(e)} (±1)^{parity(e)} e` scaled from the grading,
/// composed with `base`, for `t` in a fixed list of nonzero rationals.
pub fn grading_automorphisms(alg: &GradedSuperAlgebra, base: &GradedLinearMap) -> Vec<GradedLinearMap> {
    let field = alg.field();
    let ts: Vec<Scalar> = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (3, 1), (-1, 3)]
        .iter()
        .map(|&(p, q)| field.ratio(p, q))
        .collect();
    let mut out = Vec::new();
    for t in &ts {
        for flip in [0u8, 1] {
            let mut m = Matrix::zeros(field, alg.dim(), alg.dim());
            for i in 0..alg.dim() {
                let l = alg.degree(i).lambda.first().copied().unwrap_or(0);
                let mut c = field.sign(flip * alg.parity(i));
                for _ in 0..l.unsigned_abs() {
                    c = if l >= 0 { &c * t } else { &c / t };
                }
                m.set(i, i, c);
            }
            let scaling = GradedLinearMap::new(Degree::zero(alg.rank()), m);
            out.push(base.compose(&scaling));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gsalg::check_automorphism;

    #[test]
    fn permutation_helpers() {
        assert_eq!(perm::all(3).len(), 6);
        assert_eq!(perm::reduced_word(&perm::longest(3)), vec![1, 2, 1]);
        let w = perm::compose(&perm::simple(3, 1), &perm::simple(3, 2));
        assert_eq!(perm::reduced_word(&w), vec![1, 2]);
        assert_eq!(perm::length(&perm::longest(4)), 6);
    }

    #[test]
    fn nilcoxeter_small_cases() {
        let n1 = nilcoxeter(1).unwrap();
        assert_eq!(n1.algebra().dim(), 1);
        let n3 = nilcoxeter(3).unwrap();
        let a = n3.algebra();
        assert_eq!(a.labels(), &["1", "u1", "u2", "u1u2", "u2u1", "u1u2u1"]);
        assert!(a.validate().is_valid());
        let u1 = a.basis(1);
        assert!(crate::exactmath::is_zero_vector(&a.multiply(&u1, &u1)));
        assert_eq!(n3.degree(), &Degree::scalar(3, 1));
    }

    #[test]
    fn constructors_validate() {
        for data in [
            nilcoxeter(0).unwrap(),
            nilcoxeter(2).unwrap(),
            symmetric_group_algebra(3).unwrap(),
            truncated_polynomial(3).unwrap(),
            exterior_algebra(2).unwrap(),
            non_projective_subalgebra(),
        ] {
            assert!(data.algebra().validate().is_valid());
            let psi = data.nakayama_automorphism();
            assert!(data.verify_nakayama(&psi).unwrap());
        }
    }

    #[test]
    fn caps_are_enforced() {
        assert!(matches!(symmetric_group_algebra(5), Err(ExampleError::CapExceeded { .. })));
        assert!(matches!(exterior_algebra(5), Err(ExampleError::CapExceeded { .. })));
        assert!(nilcoxeter_extension(3, 3).is_err());
    }

    #[test]
    fn nilcoxeter_extension_degrees() {
        assert_eq!(nilcoxeter_extension(1, 2).unwrap().shift(), &Degree::scalar(1, 1));
        assert_eq!(nilcoxeter_extension(2, 3).unwrap().shift(), &Degree::scalar(2, 0));
        let trivial = nilcoxeter_extension(0, 1).unwrap();
        assert_eq!(trivial.big().dim(), 1);
    }

    #[test]
    fn grading_automorphisms_are_automorphisms() {
        let n2 = nilcoxeter(2).unwrap();
        let id = GradedLinearMap::identity(n2.algebra());
        for f in grading_automorphisms(n2.algebra(), &id) {
            assert!(check_automorphism(n2.algebra(), &f).unwrap().is_automorphism());
        }
    }

    #[test]
    fn builtin_names_resolve() {
        assert!(matches!(builtin("nilcoxeter:3").unwrap(), Builtin::Algebra { .. }));
        assert!(matches!(builtin("nilcoxeter:2:3").unwrap(), Builtin::Extension(_)));
        assert!(matches!(builtin("trivial:nilcoxeter:2").unwrap(), Builtin::Extension(_)));
        assert!(builtin("nilcoxeter:x").is_err());
        assert!(builtin("quaternions").is_err());
    }
}
