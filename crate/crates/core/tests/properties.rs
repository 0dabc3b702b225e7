use proptest::prelude::*;

use damek_ricci::clifford_algebra::{build_algebra, j2_satisfied, predict_j2_set, CliffordSpec, IrrepKind};
use damek_ricci::focal::{upsilon, FocalVariety, J2_TOL};
use damek_ricci::geodesic::{cross_ratio, geodesic_point, harmonic_partner, ExtReal, ProlongedGeodesic};
use damek_ricci::isoparametric::{eval_d, tube_radius, tube_radius_quadrature, IsoFn};
use damek_ricci::model::{distance, inverse, left_translate, multiply, AffinePoint, Point};
use damek_ricci::sampling;
use damek_ricci::{DamekRicciAlgebra, Vector};

fn specs() -> Vec<CliffordSpec> {
    vec![
        CliffordSpec::tagged(1, &[(IrrepKind::D, 1)]),
        CliffordSpec::tagged(2, &[(IrrepKind::D, 1)]),
        CliffordSpec::tagged(3, &[(IrrepKind::D1, 1), (IrrepKind::D2, 1)]),
        CliffordSpec::tagged(5, &[(IrrepKind::D, 1)]),
        CliffordSpec::tagged(7, &[(IrrepKind::D1, 1), (IrrepKind::D1, 1)]),
    ]
}

fn algebra(index: usize) -> DamekRicciAlgebra {
    build_algebra(&specs()[index % 5]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_anticommute(idx in 0usize..5, seed in any::<u64>()) {
        let alg = algebra(idx);
        let mut rng = sampling::rng(seed);
        let z = sampling::gaussian_vector(&mut rng, alg.m());
        let w = sampling::gaussian_vector(&mut rng, alg.m());
        let v = sampling::unit_vector(&mut rng, alg.n());
        let lhs = alg.j(&z, &alg.j(&w, &v)) + alg.j(&w, &alg.j(&z, &v));
        let rhs = &v * (-2.0 * z.dot(&w));
        prop_assert!((lhs - rhs).amax() <= 1e-12 * (1.0 + z.norm() * w.norm()));
    }

    #[test]
    fn group_law(idx in 0usize..5, seed in any::<u64>()) {
        let alg = algebra(idx);
        let mut rng = sampling::rng(seed);
        let p = sampling::sample_point(&mut rng, &alg);
        let q = sampling::sample_point(&mut rng, &alg);
        let r = sampling::sample_point(&mut rng, &alg);
        let e = Point::identity(alg.n(), alg.m());
        prop_assert!(multiply(&alg, &p, &inverse(&p)).to_affine().max_diff(&e.to_affine()) < 1e-9);
        let left = multiply(&alg, &multiply(&alg, &p, &q), &r).to_affine();
        let right = multiply(&alg, &p, &multiply(&alg, &q, &r)).to_affine();
        let scale = 1.0 + left.v.amax().max(left.z.amax()).max(left.t);
        prop_assert!(left.max_diff(&right) <= 1e-12 * scale * scale);
    }

    #[test]
    fn distance_is_symmetric_and_left_invariant(idx in 0usize..5, seed in any::<u64>()) {
        let alg = algebra(idx);
        let mut rng = sampling::rng(seed);
        let p = sampling::sample_point_scaled(&mut rng, &alg, 0.5, 2.0, 0.5);
        let x = sampling::sample_point(&mut rng, &alg);
        let y = sampling::sample_point(&mut rng, &alg);
        let d = distance(&alg, &x, &y);
        prop_assert!(d >= 0.0);
        prop_assert!((d - distance(&alg, &y, &x)).abs() <= 1e-9);
        let moved = |a: &Point| left_translate(&alg, &p, &a.to_affine()).to_point().unwrap();
        prop_assert!((d - distance(&alg, &moved(&x), &moved(&y))).abs() <= 1e-8 * (1.0 + d));
        prop_assert!(distance(&alg, &x, &x) <= 1e-7);
    }

    #[test]
    fn geodesics_have_unit_speed(idx in 0usize..5, seed in any::<u64>(), t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        let alg = algebra(idx);
        let mut rng = sampling::rng(seed);
        let base = sampling::sample_point_scaled(&mut rng, &alg, 0.2, 5.0, 1.0);
        let g = ProlongedGeodesic::new(base, sampling::unit_tangent(&mut rng, &alg)).unwrap();
        let d = distance(&alg, &geodesic_point(&alg, &g, t1), &geodesic_point(&alg, &g, t2));
        prop_assert!((d - (t1 - t2).abs()).abs() <= 1e-9);
    }

    #[test]
    fn distorted_distance_lower_bound(idx in 0usize..5, seed in any::<u64>(), t0 in -3.0f64..3.0) {
        let alg = algebra(idx);
        let mut rng = sampling::rng(seed);
        let x0 = AffinePoint::new(
            sampling::gaussian_vector(&mut rng, alg.n()),
            sampling::gaussian_vector(&mut rng, alg.m()),
            t0,
        );
        let x = sampling::sample_point(&mut rng, &alg);
        prop_assert!(eval_d(&alg, &x0, &x) >= x.t() + 2.0 * t0);
    }

    #[test]
    fn harmonic_partner_has_cross_ratio_minus_one(theta in prop_oneof![-50.0f64..-1.01, -0.99f64..-0.01, 0.01f64..0.99, 1.01f64..50.0]) {
        let a = ExtReal::Finite(theta);
        let cr = cross_ratio(a, harmonic_partner(a), ExtReal::Finite(1.0), ExtReal::Finite(-1.0)).unwrap();
        prop_assert!((cr + 1.0).abs() <= 1e-12);
    }

    #[test]
    fn tube_radius_matches_quadrature(m in 1usize..8, n in 1usize..17, t0 in -4.0f64..-0.1, c in 1e-6f64..1e3) {
        let f = IsoFn::distorted_distance(AffinePoint::new(Vector::zeros(n), Vector::zeros(m), t0));
        let closed = tube_radius(&f, m, n, c).unwrap();
        prop_assert!((closed - tube_radius_quadrature(&f, m, n, c).unwrap()).abs() <= 1e-8);
        prop_assert!(tube_radius(&f, m, n, c * 1.5).unwrap() > closed);
    }

    #[test]
    fn upsilon_lies_on_focal_variety(idx in 0usize..5, seed in any::<u64>(), frac in 0.0f64..0.99) {
        let alg = algebra(idx);
        let mut rng = sampling::rng(seed);
        let x0 = AffinePoint::new(
            sampling::gaussian_vector(&mut rng, alg.n()),
            sampling::gaussian_vector(&mut rng, alg.m()),
            -1.5,
        );
        let f = FocalVariety::fx0(x0.clone()).unwrap();
        let vbar = &x0.v + sampling::unit_vector(&mut rng, alg.n()) * (2.0 * 1.5f64.sqrt() * frac);
        let p = upsilon(&alg, &f, &vbar).unwrap();
        let scale = 1.0 + p.v.amax().max(p.z.amax()).max(p.t());
        prop_assert!(f.membership_residual(&alg, &p.to_affine()) <= 1e-12 * scale * scale);
    }

    #[test]
    fn isotypic_vectors_satisfy_j2(seed in any::<u64>(), second in any::<bool>()) {
        let spec = CliffordSpec::tagged(3, &[(IrrepKind::D1, 1), (IrrepKind::D2, 1)]);
        let alg = build_algebra(&spec).unwrap();
        let mut rng = sampling::rng(seed);
        let mut v = Vector::zeros(8);
        let offset = if second { 4 } else { 0 };
        v.rows_mut(offset, 4).copy_from(&sampling::gaussian_vector(&mut rng, 4));
        prop_assert!(predict_j2_set(&spec, &v).unwrap());
        prop_assert!(j2_satisfied(&alg, &v, J2_TOL).0);
        let mut mixed = v.clone();
        mixed.rows_mut(4 - offset, 4).copy_from(&sampling::gaussian_vector(&mut rng, 4));
        prop_assert!(!predict_j2_set(&spec, &mixed).unwrap());
        prop_assert!(!j2_satisfied(&alg, &mixed, J2_TOL).0);
    }

    #[test]
    fn j2_is_scale_invariant(idx in 0usize..5, seed in any::<u64>(), scale in 1e-3f64..1e3) {
        let alg = algebra(idx);
        let mut rng = sampling::rng(seed);
        let v = sampling::gaussian_vector(&mut rng, alg.n());
        prop_assert_eq!(j2_satisfied(&alg, &v, J2_TOL).0, j2_satisfied(&alg, &(&v * scale), J2_TOL).0);
    }
}
