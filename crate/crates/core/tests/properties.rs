//! Property tests of the forms and collision modules.

mod common;

use nalgebra::DVector;
use proptest::prelude::*;

use signed_billiards::collision::{
    apply_collision_map, collision_matrix, mu, reflect, resolve_collision, WallNormal,
};
use signed_billiards::forms::{self, ClassTag, MassVector};

fn nonzero_mass() -> impl Strategy<Value = f64> {
    prop_oneof![-2.0..-0.05_f64, 0.05..2.0_f64]
}

fn separated(m: &[f64]) -> bool {
    let scale = m.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    (0..m.len()).all(|i| (i + 1..m.len()).all(|j| (m[i] + m[j]).abs() >= 0.05 * scale))
}

/// Masses with all pair sums bounded away from zero.
fn masses(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    n.prop_flat_map(|n| prop::collection::vec(nonzero_mass(), n))
        .prop_filter("pair sums near zero", |m| separated(m))
}

/// Masses, an ordered pair of distinct indices and a vector.
fn system_pair_vector() -> impl Strategy<Value = (Vec<f64>, usize, usize, Vec<f64>)> {
    masses(2..=6).prop_flat_map(|m| {
        let n = m.len();
        (
            Just(m),
            0..n,
            1..n,
            prop::collection::vec(-10.0..10.0_f64, n),
        )
            .prop_map(move |(m, i, d, v)| (m, i, (i + d) % n, v))
    })
}

fn mv(m: &[f64]) -> MassVector {
    MassVector::new(m.to_vec()).unwrap()
}

fn amax(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bilinear_is_symmetric(
        (m, y, z) in masses(2..=6).prop_flat_map(|m| {
            let n = m.len();
            (Just(m), prop::collection::vec(-5.0..5.0_f64, n), prop::collection::vec(-5.0..5.0_f64, n))
        })
    ) {
        let masses = mv(&m);
        prop_assert_eq!(forms::bilinear(&masses, &y, &z).unwrap(), forms::bilinear(&masses, &z, &y).unwrap());
        let e = forms::kinetic_energy(&masses, &y).unwrap();
        let scale: f64 = m.iter().zip(&y).map(|(m, y)| (m * y * y).abs()).sum();
        prop_assert!((e - 0.5 * common::b(&m, &y, &y)).abs() <= 1e-14 * scale);
    }

    #[test]
    fn restricted_signature_matches_orthogonalization(
        m in (2..=6_usize).prop_flat_map(|n| prop::collection::vec(nonzero_mass(), n))
    ) {
        let s = forms::restricted_signature(&MassVector::for_analysis(m.clone()).unwrap());
        prop_assert_eq!((s.p, s.q, s.degenerate), common::p0_signature_by_orthogonalization(&m));
    }

    #[test]
    fn full_signature_counts_signs(m in masses(2..=6)) {
        let s = forms::full_signature(&mv(&m));
        prop_assert_eq!(s.p, m.iter().filter(|x| **x > 0.0).count());
        prop_assert_eq!(s.q, m.iter().filter(|x| **x < 0.0).count());
        prop_assert!(!s.degenerate);
    }

    #[test]
    fn definiteness_agrees_with_signature(m in masses(3..=6)) {
        let masses = mv(&m);
        let s = forms::restricted_signature(&masses);
        let by_signature = !s.degenerate && (s.p == 0 || s.q == 0);
        prop_assert_eq!(forms::is_definite_on_p0(&masses), by_signature);
    }

    #[test]
    fn gas_neg_implies_cone(m in masses(3..=6)) {
        let masses = mv(&m);
        if forms::gas_neg(&masses) {
            prop_assert!(forms::cone_condition(&masses));
        }
        let c = forms::classify(&masses);
        match c.tag {
            ClassTag::Graviton | ClassTag::Compressor => prop_assert!(c.gas_neg && c.cone),
            _ => {}
        }
    }

    #[test]
    fn classification_is_scale_invariant(m in masses(3..=6), a in 0.1..10.0_f64) {
        let masses = mv(&m);
        let base = forms::classify(&masses);
        prop_assert_eq!(forms::classify(&masses.scaled(a).unwrap()), base);

        let flipped = forms::classify(&masses.scaled(-a).unwrap());
        prop_assert_eq!(flipped.tag, base.tag);
        if matches!(base.tag, ClassTag::Graviton | ClassTag::Compressor) {
            prop_assert_eq!(flipped.sign_flipped, !base.sign_flipped);
        }
        let (s, t) = (
            forms::restricted_signature(&masses),
            forms::restricted_signature(&masses.scaled(-a).unwrap()),
        );
        prop_assert_eq!((s.p, s.q), (t.q, t.p));
    }

    #[test]
    fn collision_preserves_q((m, i, j, v) in system_pair_vector()) {
        let masses = mv(&m);
        let t = collision_matrix(&masses, i, j).unwrap();
        let w = &t * DVector::from_vec(v.clone());
        let size = amax(&v).max(w.amax());
        let scale: f64 = m.iter().map(|x| x.abs()).sum::<f64>() * size * size;
        prop_assert!((common::b(&m, &v, &v) - common::b(&m, w.as_slice(), w.as_slice())).abs() <= 1e-12 * scale);
    }

    #[test]
    fn reflection_equals_collision_map((m, i, j, v) in system_pair_vector()) {
        let masses = mv(&m);
        let normal = WallNormal::new(&masses, i, j).unwrap();
        let r = reflect(&masses, &normal, &v).unwrap();
        let mut w = v.clone();
        apply_collision_map(&masses, i, j, &mut w).unwrap();
        let size = amax(&v).max(amax(&w));
        for (a, b) in r.iter().zip(&w) {
            prop_assert!((a - b).abs() <= 1e-12 * size);
        }
        let oracle = common::collision_matrix_oracle(&m, i, j) * DVector::from_vec(v.clone());
        for (a, b) in oracle.iter().zip(&w) {
            prop_assert!((a - b).abs() <= 1e-12 * size);
        }
    }

    #[test]
    fn wall_is_fixed_and_map_is_involution((m, i, j, mut v) in system_pair_vector()) {
        let masses = mv(&m);
        let t = collision_matrix(&masses, i, j).unwrap();
        let id = &t * &t;
        let err = (id - nalgebra::DMatrix::<f64>::identity(m.len(), m.len())).amax();
        prop_assert!(err <= 1e-12 * t.amax().powi(2));

        v[j] = v[i];
        let mut w = v.clone();
        apply_collision_map(&masses, i, j, &mut w).unwrap();
        for (a, b) in v.iter().zip(&w) {
            prop_assert!((a - b).abs() <= 1e-14 * amax(&v));
        }
    }

    #[test]
    fn normal_formula_list(m in masses(4..=6), pick in prop::sample::subsequence((0..4).collect::<Vec<usize>>(), 4).prop_shuffle()) {
        let masses = mv(&m);
        let (i, j, k, l) = (pick[0], pick[1], pick[2], pick[3]);
        let nij = WallNormal::new(&masses, i, j).unwrap();
        let njk = WallNormal::new(&masses, j, k).unwrap();
        let nkl = WallNormal::new(&masses, k, l).unwrap();
        let tol = 1e-12 * (1.0 / m.iter().fold(f64::INFINITY, |a, x| a.min(x.abs()))).powi(2);

        let q_ij = common::b(&m, &nij.n, &nij.n);
        prop_assert!((q_ij - (m[i] + m[j]) / (m[i] * m[j])).abs() <= tol);
        prop_assert!((nij.norm_sq(&masses) - q_ij).abs() <= tol);
        let b_ij_jk = common::b(&m, &nij.n, &njk.n);
        prop_assert!((b_ij_jk + 1.0 / m[j]).abs() <= tol);
        prop_assert!(common::b(&m, &nij.n, &nkl.n).abs() <= tol);

        let q_jk = common::b(&m, &njk.n, &njk.n);
        let normalized = b_ij_jk * b_ij_jk / (q_ij * q_jk);
        let ratio = m[i] / (m[i] + m[j]) * m[k] / (m[j] + m[k]);
        prop_assert!((normalized - ratio).abs() <= 1e-12 * (1.0 + ratio.abs()));
        // with μ_ab = 2 m_b / (m_a + m_b) the same product is μ_ji μ_jk / 4
        let mus = mu(m[j], m[i]).unwrap() * mu(m[j], m[k]).unwrap();
        prop_assert!((normalized - mus / 4.0).abs() <= 1e-12 * (1.0 + ratio.abs()));

        // B(x, n_ij) = x_j - x_i
        let x: Vec<f64> = (0..m.len()).map(|t| t as f64 * 0.7 - 1.1).collect();
        prop_assert!((common::b(&m, &x, &nij.n) - (x[j] - x[i])).abs() <= 1e-12 * tol.max(1.0));
    }

    #[test]
    fn two_body_law(mi in nonzero_mass(), mj in nonzero_mass(), vi in -10.0..10.0_f64, vj in -10.0..10.0_f64) {
        prop_assume!((mi + mj).abs() >= 0.05 * mi.abs().max(mj.abs()));
        let (wi, wj) = resolve_collision(mi, mj, vi, vj).unwrap();
        let size = vi.abs().max(vj.abs()).max(wi.abs()).max(wj.abs());
        prop_assert!(((wj - wi) + (vj - vi)).abs() <= 1e-14 * size.max(1.0) * 4.0);
        prop_assert!((mu(mi, mj).unwrap() + mu(mj, mi).unwrap() - 2.0).abs() <= 1e-14 * 50.0);
        let p_scale = mi.abs() * size + mj.abs() * size;
        prop_assert!(((mi * wi + mj * wj) - (mi * vi + mj * vj)).abs() <= 1e-12 * p_scale);
    }

    #[test]
    fn reversed_cauchy_schwarz_on_indefinite_planes(
        (x, y) in (prop::collection::vec(-3.0..3.0_f64, 2), prop::collection::vec(-3.0..3.0_f64, 2))
    ) {
        // project onto P0 of the graviton (1, -0.5, 1)
        let masses = mv(&[1.0, -0.5, 1.0]);
        let lift = |c: &[f64]| {
            let mut u = vec![c[0], c[1], 0.0];
            u[2] = -(u[0] - 0.5 * u[1]);
            u
        };
        let (u, w) = (lift(&x), lift(&y));
        let (qu, qw, buw) = (common::b(masses.as_slice(), &u, &u), common::b(masses.as_slice(), &w, &w), common::b(masses.as_slice(), &u, &w));
        // the plane spanned by u, w is indefinite iff its Gram determinant is negative
        prop_assume!(qu * qw - buw * buw < -1e-9);
        prop_assert!(forms::reversed_cs_holds(&masses, &u, &w).unwrap());
    }
}

#[test]
fn glashow_mittag_equals_definiteness_for_three_masses() {
    let mut r = signed_billiards::sampling::rng(1234);
    use rand::Rng;
    let mut checked = 0;
    while checked < 1000 {
        let m: Vec<f64> = (0..3)
            .map(|_| {
                let x: f64 = r.random_range(0.05..2.0);
                if r.random_bool(0.5) { x } else { -x }
            })
            .collect();
        if !separated(&m) || m.iter().sum::<f64>().abs() < 0.05 {
            continue;
        }
        let masses = mv(&m);
        assert_eq!(
            forms::glashow_mittag(m[0], m[1], m[2]),
            forms::is_definite_on_p0(&masses),
            "{m:?}"
        );
        checked += 1;
    }
}

#[test]
fn spec_examples_for_forms() {
    let g = mv(&[1.0, -0.5, 1.0]);
    assert_eq!(forms::kinetic_energy(&g, &[0.0, 2.0, 0.0]).unwrap(), -1.0);
    assert_eq!(forms::kinetic_energy(&mv(&[1.0, 1.0]), &[1.0, -1.0]).unwrap(), 1.0);
    let s = forms::restricted_signature(&g);
    assert_eq!((s.p, s.q, s.degenerate), (1, 1, false));
    assert!(forms::restricted_signature(&MassVector::for_analysis(vec![1.0, -1.0]).unwrap()).degenerate);
    assert!(forms::is_definite_on_p0(&mv(&[-1.0, -2.0, 5.0])));
    assert!(!forms::is_definite_on_p0(&g));
    assert!(forms::glashow_mittag(1.0, -2.0, 0.5));
    assert!(forms::cone_condition(&g));
    assert!(!forms::cone_condition(&mv(&[1.0, -2.0, 0.5])));
    assert_eq!(forms::classify(&g).tag, ClassTag::Graviton);
    assert_eq!(forms::classify(&mv(&[1.0, -0.4, -0.4, -0.4])).tag, ClassTag::Compressor);
    assert_eq!(forms::classify(&mv(&[1.0, 1.0, 1.0])).tag, ClassTag::AllSameSign);
    let d = MassVector::for_analysis(vec![1.0, -1.0]).unwrap();
    assert!(forms::reversed_cs_holds(&d, &[1.0, 0.0], &[0.0, 1.0]).unwrap());
}
