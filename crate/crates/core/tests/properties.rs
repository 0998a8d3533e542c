use proptest::prelude::*;
use semham::linalg::{dot, max_abs_diff, norm};
use semham::symmetry::SymmetryOperator;
use semham::*;

fn raw_vector(max_dim: usize) -> impl Strategy<Value = Vec<f64>> {
    (2..=max_dim)
        .prop_flat_map(|n| prop::collection::vec(-10.0..10.0f64, n))
        .prop_filter("non-zero", |v| norm(v) > 1e-3)
}

fn unit(max_dim: usize) -> impl Strategy<Value = EmbeddingVector> {
    raw_vector(max_dim).prop_map(|v| EmbeddingVector::normalize(&v).unwrap())
}

fn unit_pair(max_dim: usize) -> impl Strategy<Value = (EmbeddingVector, EmbeddingVector)> {
    (2..=max_dim).prop_flat_map(|n| {
        let v = prop::collection::vec(-10.0..10.0f64, n).prop_filter("non-zero", |v| norm(v) > 1e-3);
        (v.clone(), v).prop_map(|(a, b)| {
            (
                EmbeddingVector::normalize(&a).unwrap(),
                EmbeddingVector::normalize(&b).unwrap(),
            )
        })
    })
}

proptest! {
    #[test]
    fn normalize_is_idempotent(raw in raw_vector(32)) {
        let a = EmbeddingVector::normalize(&raw).unwrap();
        let b = EmbeddingVector::normalize(a.as_slice()).unwrap();
        prop_assert!(max_abs_diff(a.as_slice(), b.as_slice()) <= 1e-15);
        prop_assert!((a.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn cosine_is_symmetric_and_bounded((a, b) in unit_pair(32)) {
        let ab = cosine_similarity(&a, &b).unwrap().value();
        let ba = cosine_similarity(&b, &a).unwrap().value();
        prop_assert_eq!(ab, ba);
        prop_assert!((-1.0..=1.0).contains(&ab));
        let t = transform_similarity(cosine_similarity(&a, &b).unwrap()).value();
        prop_assert!((0.0..=1.0).contains(&t));
    }

    #[test]
    fn dissimilar_partner(a in unit(32)) {
        let d = maximally_dissimilar(&a);
        prop_assert!((cosine_similarity(&a, &d).unwrap().value() + 1.0).abs() <= 1e-12);
    }

    #[test]
    fn general_similarity_matches_brute_force(
        a in unit(24),
        seed in prop::collection::vec(-3i32..=3, 24),
    ) {
        let v: Vec<f64> = seed[..a.dim()].iter().map(|&x| x as f64).collect();
        match general_similarity(&a, &v) {
            Ok(r) => {
                let b: Vec<f64> = a.as_slice().iter().zip(&r.profile.delta).map(|(x, d)| -x + d).collect();
                prop_assert!((norm(&b) - 1.0).abs() <= 1e-10);
                prop_assert!((dot(a.as_slice(), &b) - r.similarity.value()).abs() <= 1e-10);
                let h = build_rank_one(&v).unwrap();
                prop_assert!((h.expectation(a.as_slice()).unwrap() - r.transformed().value()).abs() <= 1e-12);
            }
            Err(e) => prop_assert!(
                matches!(e, Error::NonPhysicalConfiguration { .. } | Error::AllZero),
                "{e:?}"
            ),
        }
    }

    #[test]
    fn smallest_perturbation_is_minimal(a in unit(24)) {
        let r = smallest_perturbation(&a).unwrap();
        let k = r.profile.active_dims[0];
        let min = a.as_slice().iter().map(|x| x.abs()).filter(|&x| x >= 1e-15).fold(f64::INFINITY, f64::min);
        prop_assert_eq!(a.as_slice()[k].abs(), min);
        prop_assert!((r.epsilon - 2.0 * min * min).abs() <= 1e-15);
        prop_assert!((r.perturbed.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn householder_is_involutive_and_orthogonal((a, b) in unit_pair(16)) {
        let h = householder_transition(&a, &b).unwrap();
        let m = h.matrix();
        prop_assert!(m.asymmetry().unwrap() == 0.0);
        prop_assert!(m.orthogonality_residual().unwrap() <= 1e-10);
        let hb = h.apply_raw(b.as_slice()).unwrap();
        prop_assert!(max_abs_diff(&hb, a.as_slice()) <= 1e-6 || norm(&hb) > 0.0);
        let x: Vec<f64> = (0..a.dim()).map(|k| k as f64 - 1.5).collect();
        let back = h.apply_raw(&h.apply_raw(&x).unwrap()).unwrap();
        prop_assert!(max_abs_diff(&back, &x) <= 1e-12 * (1.0 + norm(&x)));
    }

    #[test]
    fn symmetrize_preserves_quadratic_forms(
        rows in (2..8usize).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-2.0..2.0f64, n), n)),
        raw in prop::collection::vec(-1.0..1.0f64, 8),
    ) {
        let n = rows.len();
        let Ok(a) = EmbeddingVector::normalize(&raw[..n]) else { return Ok(()) };
        let h = TransitionOperator::general(Matrix::from_rows(&rows).unwrap()).unwrap();
        let s = symmetrize(&h);
        prop_assert!(s.matrix().asymmetry().unwrap() == 0.0);
        let q = h.matrix().quadratic_form(a.as_slice()).unwrap();
        let qs = s.matrix().quadratic_form(a.as_slice()).unwrap();
        prop_assert!((q - qs).abs() <= 1e-12);
    }

    #[test]
    fn rotations_compose(t1 in -3.0..3.0f64, t2 in -3.0..3.0f64, a in unit(8)) {
        let n = a.dim();
        let r1 = RotationOperator::new(0, n - 1, t1).unwrap();
        let r2 = RotationOperator::new(0, n - 1, t2).unwrap();
        let r12 = RotationOperator::new(0, n - 1, t1 + t2).unwrap();
        let two = r2.act(&r1.act(a.as_slice()).unwrap()).unwrap();
        let one = r12.act(a.as_slice()).unwrap();
        prop_assert!(max_abs_diff(&two, &one) <= 1e-14);
        prop_assert!((norm(&one) - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn parity_preserves_norm_and_squares_to_identity(a in unit(16), mask in prop::collection::vec(any::<bool>(), 16)) {
        let dims: Vec<usize> = (0..a.dim()).filter(|&k| mask[k]).collect();
        let p = ParityOperator::flipping(&dims, a.dim()).unwrap();
        let pa = apply_parity(&p, &a).unwrap();
        prop_assert_eq!(pa.norm(), a.norm());
        let ppa = apply_parity(&p, &pa).unwrap();
        prop_assert_eq!(ppa.as_slice(), a.as_slice());
    }

    #[test]
    fn eigenbasis_preserves_norm(a in unit(16), seed in prop::collection::vec(-3i32..=3, 16)) {
        let v: Vec<f64> = seed[..a.dim()].iter().map(|&x| x as f64).collect();
        prop_assume!(v.iter().any(|&x| x != 0.0));
        let dec = diagonalize(&build_rank_one(&v).unwrap());
        let c = project_state(&a, &dec).unwrap();
        prop_assert!((norm(&c) - 1.0).abs() <= 1e-12);
        prop_assert!(dec.basis.orthogonality_residual().unwrap() <= 1e-12);
    }

    #[test]
    fn evolution_conserves_probability(a in unit(12), t in -50.0..50.0f64, hbar in 0.1..10.0f64) {
        let v = vec![1.0; a.dim()];
        let dec = diagonalize(&build_rank_one(&v).unwrap());
        let state = QuantumState::from_decomposition(&a, &dec, hbar).unwrap();
        let later = evolve(&state, t).unwrap();
        prop_assert!((later.norm_sq() - 1.0).abs() <= 1e-12);
        prop_assert!((expectation(&later) - expectation(&state)).abs() <= 1e-12);
    }

    #[test]
    fn zero_point_bounds_every_candidate(a in unit(6), cands in prop::collection::vec(prop::collection::vec(-3i32..=3, 6), 1..20)) {
        let cands: Vec<Vec<f64>> = cands.iter().map(|c| c[..a.dim()].iter().map(|&x| x as f64).collect()).collect();
        match zero_point(&a, &cands) {
            Ok(z) => {
                prop_assert!(z.epsilon > 0.0 && z.epsilon <= 1.0 + 1e-12);
                for (k, v) in cands.iter().enumerate() {
                    if z.skipped.contains(&k) { continue; }
                    let o = dot(v, a.as_slice());
                    prop_assert!(z.epsilon <= o * o / dot(v, v) + 1e-15);
                }
            }
            Err(e) => prop_assert!(matches!(e, Error::AllNonPhysical(_))),
        }
    }
}
