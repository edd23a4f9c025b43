use frobx_core::examples::{exterior_algebra, nilcoxeter, symmetric_group_algebra, truncated_polynomial};
use frobx_core::exactmath::{Field, Matrix, Scalar, Vector};
use frobx_core::gsalg::{
    check_automorphism, homogeneous_invertibles_are_scalars, supercentralizer, Certainty, GradedLinearMap,
    GradedSuperAlgebra,
};
use proptest::prelude::*;

const Q: Field = Field::Rational;

/// Nakayama map solved straight from `tr(ab) = (-1)^{|a||b|} tr(b ψ(a))`,
/// i.e. `G ψ(a) = ((-1)^{|a||b|} tr(a e_b))_b` with `G[b][c] = tr(e_b e_c)`.
fn naive_nakayama(alg: &GradedSuperAlgebra, trace: &[Scalar]) -> Vec<Vector> {
    let n = alg.dim();
    let tr = |v: &Vector| -> Scalar {
        v.iter().zip(trace).fold(Q.zero(), |acc, (x, t)| &acc + &(x * t))
    };
    let gram: Vec<Vec<Scalar>> =
        (0..n).map(|b| (0..n).map(|c| tr(&alg.multiply(&alg.basis(b), &alg.basis(c)))).collect()).collect();
    let g = Matrix::from_rows(Q, gram).unwrap();
    (0..n)
        .map(|a| {
            let rhs: Vector = (0..n)
                .map(|b| {
                    let s = if alg.parity(a) * alg.parity(b) == 1 { Q.from_i64(-1) } else { Q.one() };
                    &s * &tr(&alg.multiply(&alg.basis(a), &alg.basis(b)))
                })
                .collect();
            g.solve(&rhs).unwrap().expect("nondegenerate")
        })
        .collect()
}

#[test]
fn exterior_nakayama_is_identity_under_super_signs() {
    for m in 1..=4 {
        let data = exterior_algebra(m).unwrap();
        let alg = data.algebra();
        let trace: Vec<Scalar> = data.trace().matrix.row(0).to_vec();
        let oracle = naive_nakayama(alg, &trace);
        let psi = data.nakayama_automorphism();
        for (i, col) in oracle.iter().enumerate() {
            assert_eq!(&psi.image_of_basis(i), col, "m = {m}, basis {}", alg.label(i));
            assert_eq!(col, &alg.basis(i), "exterior({m}) psi should fix {}", alg.label(i));
        }
    }
}

#[test]
fn nakayama_matches_naive_solver_on_every_builtin() {
    let algebras = [
        nilcoxeter(2).unwrap(),
        nilcoxeter(3).unwrap(),
        nilcoxeter(4).unwrap(),
        symmetric_group_algebra(3).unwrap(),
        truncated_polynomial(4).unwrap(),
        exterior_algebra(3).unwrap(),
    ];
    for data in &algebras {
        let alg = data.algebra();
        let oracle = naive_nakayama(alg, data.trace().matrix.row(0));
        let psi = data.nakayama_automorphism();
        assert!(check_automorphism(alg, &psi).unwrap().is_automorphism());
        for (i, col) in oracle.iter().enumerate() {
            assert_eq!(&psi.image_of_basis(i), col);
        }
    }
}

#[test]
fn nilcoxeter_three_psi_swaps_generators() {
    let data = nilcoxeter(3).unwrap();
    let alg = data.algebra();
    let psi = data.nakayama_automorphism();
    let u1 = alg.index_of("u1").unwrap();
    let u2 = alg.index_of("u2").unwrap();
    assert_eq!(psi.image_of_basis(u1), alg.basis(u2));
    assert_eq!(psi.image_of_basis(u2), alg.basis(u1));
}

#[test]
fn symmetric_group_center_has_class_count_dimension() {
    let s3 = symmetric_group_algebra(3).unwrap();
    let alg = s3.algebra();
    let all: Vec<Vector> = (0..alg.dim()).map(|i| alg.basis(i)).collect();
    assert_eq!(supercentralizer(alg, &all).unwrap().len(), 3);
}

#[test]
fn unit_scans() {
    let s2 = symmetric_group_algebra(2).unwrap();
    let scan = homogeneous_invertibles_are_scalars(s2.algebra());
    assert!(!scan.holds);
    let w = scan.witness.expect("s1 or similar is a non-scalar unit");
    assert!(s2.algebra().is_invertible(&w));
    for n in 2..=4 {
        let scan = homogeneous_invertibles_are_scalars(nilcoxeter(n).unwrap().algebra());
        assert!(scan.holds);
        assert_eq!(scan.certainty, Certainty::Certified);
    }
}

fn element(alg: &GradedSuperAlgebra, coeffs: &[i64]) -> Vector {
    coeffs.iter().take(alg.dim()).map(|&c| Q.from_i64(c)).chain(std::iter::repeat(Q.zero())).take(alg.dim()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative_and_unital(
        x in prop::collection::vec(-3i64..=3, 6),
        y in prop::collection::vec(-3i64..=3, 6),
        z in prop::collection::vec(-3i64..=3, 6),
    ) {
        let alg = nilcoxeter(3).unwrap();
        let alg = alg.algebra();
        let (x, y, z) = (element(alg, &x), element(alg, &y), element(alg, &z));
        prop_assert_eq!(
            alg.multiply(&alg.multiply(&x, &y), &z),
            alg.multiply(&x, &alg.multiply(&y, &z))
        );
        prop_assert_eq!(alg.multiply(&alg.unit(), &x), x.clone());
        prop_assert_eq!(alg.multiply(&x, &alg.unit()), x);
    }

    #[test]
    fn nakayama_is_multiplicative(
        x in prop::collection::vec(-3i64..=3, 8),
        y in prop::collection::vec(-3i64..=3, 8),
    ) {
        let data = exterior_algebra(3).unwrap();
        let alg = data.algebra();
        let psi = data.nakayama_automorphism();
        let (x, y) = (element(alg, &x), element(alg, &y));
        prop_assert_eq!(psi.apply(&alg.multiply(&x, &y)), alg.multiply(&psi.apply(&x), &psi.apply(&y)));
    }

    #[test]
    fn inverse_map_round_trips(scale in 1i64..=5, flip in 0u8..=1) {
        let data = nilcoxeter(3).unwrap();
        let alg = data.algebra();
        let mut m = Matrix::zeros(Q, alg.dim(), alg.dim());
        for i in 0..alg.dim() {
            let l = alg.degree(i).lambda[0];
            let mut c = Q.sign(flip * alg.parity(i));
            for _ in 0..l {
                c = &c * &Q.from_i64(scale);
            }
            m.set(i, i, c);
        }
        let f = GradedLinearMap::new(frobx_core::Degree::zero(1), m);
        prop_assert!(check_automorphism(alg, &f).unwrap().is_automorphism());
        let g = f.inverse().unwrap();
        prop_assert_eq!(g.compose(&f).matrix, Matrix::identity(Q, alg.dim()));
    }
}
