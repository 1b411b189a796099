//! Property suites for the geometric kernel: group laws, the tangent-basis
//! side oracle, boundary equivariance, and the two uniform-dynamics
//! properties of order-two rotations.

mod common;

use adsquake::adsgeom::{
    bilinear, plane_from_affine, q_form, AdSBoundaryPoint, AdSIsometry, AdSPlane, SideSign,
};
use adsquake::circlemap::{two_plane_map, TwoPlaneVariant};
use adsquake::mobius::{
    elliptic_about, exp_sl2, log_hyperbolic, mobius_from_triples, rotation_about, translate_side,
    triple_orientation, FixedPoints, MobiusClass, Orientation, Side,
};
use adsquake::{GenericMat2, Geodesic, H2Point, Mobius, RP1Point};
use common::{random_boundary_point, random_mobius, rng, TAU};
use num_complex::Complex;
use proptest::prelude::*;
use rand::Rng;

type Mat2 = GenericMat2<f64>;

fn arb_mobius() -> impl Strategy<Value = Mobius> {
    (prop::array::uniform4(-1.5f64..1.5))
        .prop_filter("positive determinant", |e| e[0] * e[3] - e[1] * e[2] > 0.05)
        .prop_map(|e| Mobius::new(e[0], e[1], e[2], e[3]).unwrap())
}

fn arb_boundary_point() -> impl Strategy<Value = RP1Point> {
    (-std::f64::consts::PI..std::f64::consts::PI).prop_map(RP1Point::from_angle)
}

fn arb_h2_point() -> impl Strategy<Value = H2Point> {
    (-3.0f64..3.0, 0.05f64..4.0).prop_map(|(x, y)| H2Point::new(x, y).unwrap())
}

proptest! {
    #[test]
    fn composition_acts_as_iterated_application(
        m1 in arb_mobius(),
        m2 in arb_mobius(),
        x in arb_boundary_point(),
        z in arb_h2_point(),
    ) {
        let composed = m1.compose(&m2);
        prop_assert!(composed
            .apply_rp1(&x)
            .approx_eq(&m1.apply_rp1(&m2.apply_rp1(&x)), 1e-9));
        prop_assert!(composed
            .apply_h2(&z)
            .approx_eq(&m1.apply_h2(&m2.apply_h2(&z)), 1e-9));
    }

    #[test]
    fn half_turns_are_involutions(z in arb_h2_point()) {
        let r = rotation_about(&z);
        prop_assert!(r.compose(&r).is_identity(1e-9));
        prop_assert!(r.fix_elliptic().unwrap().approx_eq(&z, 1e-9));
    }

    #[test]
    fn triple_transport_is_exact(
        a in arb_boundary_point(),
        b in arb_boundary_point(),
        c in arb_boundary_point(),
        m in arb_mobius(),
    ) {
        // skip degenerate triples
        prop_assume!(a.circle_dist(&b) > 1e-3 && b.circle_dist(&c) > 1e-3 && c.circle_dist(&a) > 1e-3);
        let src = [a, b, c];
        let dst = [m.apply_rp1(&a), m.apply_rp1(&b), m.apply_rp1(&c)];
        let rebuilt = mobius_from_triples(&src, &dst).unwrap();
        for p in &src {
            prop_assert!(rebuilt.apply_rp1(p).approx_eq(&m.apply_rp1(p), 1e-7));
        }
    }

    #[test]
    fn exp_log_interpolates_on_the_axis(
        a1 in -3.1f64..3.1,
        gap in 0.2f64..3.0,
        len in 0.1f64..2.5,
        t in 0.05f64..0.95,
    ) {
        let m = adsquake::mobius::hyperbolic_along(
            &RP1Point::from_angle(a1),
            &RP1Point::from_angle(a1 + gap),
            len,
        )
        .unwrap();
        prop_assume!(m.classify() == MobiusClass::Hyperbolic);
        let a = log_hyperbolic(&m).unwrap();
        prop_assert!(exp_sl2(1.0, &a).approx_eq(&m, 1e-9));
        let part = exp_sl2(t, &a);
        // same axis: the fixed points agree
        let (f1, f2) = match (m.fixed_points().unwrap(), part.fixed_points().unwrap()) {
            (
                FixedPoints::Hyperbolic { attracting: a1, repelling: r1, .. },
                FixedPoints::Hyperbolic { attracting: a2, repelling: r2, .. },
            ) => ((a1, r1), (a2, r2)),
            _ => return Err(TestCaseError::fail("expected hyperbolic")),
        };
        prop_assert!(f1.0.approx_eq(&f2.0, 1e-6));
        prop_assert!(f1.1.approx_eq(&f2.1, 1e-6));
    }

    #[test]
    fn q_form_is_negated_determinant(e in prop::array::uniform4(-3.0f64..3.0)) {
        let m = Mat2::new(e[0], e[1], e[2], e[3]);
        prop_assert!((q_form(&m) + m.det()).abs() <= 1e-12 * (1.0 + m.norm() * m.norm()));
        prop_assert!((bilinear(&m, &m) - q_form(&m)).abs() <= 1e-12 * (1.0 + m.norm() * m.norm()));
    }
}

#[test]
fn fix_elliptic_round_trips_ten_thousand_points() {
    let mut rng = rng(11);
    for _ in 0..10_000 {
        let z = H2Point::new(rng.random_range(-5.0..5.0), rng.random_range(0.01..5.0)).unwrap();
        let back = rotation_about(&z).fix_elliptic().unwrap();
        assert!(back.approx_eq(&z, 1e-9), "fixed point drifted at {z:?}");
    }
}

#[test]
fn translate_side_is_order_independent() {
    let mut rng = rng(12);
    let mut checked = 0;
    while checked < 1000 {
        let g = random_mobius(&mut rng);
        if g.classify() != MobiusClass::Hyperbolic {
            continue;
        }
        let s = random_boundary_point(&mut rng);
        let sp = random_boundary_point(&mut rng);
        let (Ok(side1), Ok(side2)) =
            (translate_side(&g, &s, &sp), translate_side(&g.inverse(), &sp, &s))
        else {
            continue;
        };
        assert_eq!(side1, side2, "order independence failed for {g:?}");
        checked += 1;
    }
}

/// The tangent-basis definition evaluated numerically in the disc model:
/// a straight segment crossing the axis, the crossing tangent `v`, the axis
/// tangent `w` toward the attracting endpoint; left means `(v, w)` positive.
#[test]
fn translate_side_matches_tangent_basis_oracle() {
    let mut rng = rng(13);
    let mut checked = 0;
    while checked < 1000 {
        // random hyperbolic with well-separated, non-antipodal axis endpoints
        let t1 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let gap = rng.random_range(0.3..(std::f64::consts::PI - 0.1));
        let t2 = t1 + gap;
        let att = RP1Point::from_angle(t1);
        let rep = RP1Point::from_angle(t2);
        let length = rng.random_range(0.2..2.5);
        let g = adsquake::mobius::hyperbolic_along(&att, &rep, length).unwrap();
        // boundary points strictly inside the two complementary arcs
        let u1 = rng.random_range(0.08..0.92);
        let u2 = rng.random_range(0.08..0.92);
        let s = RP1Point::from_angle(t1 + gap * u1);
        let sp = RP1Point::from_angle(t2 + (TAU - gap) * u2);
        let Ok(side) = translate_side(&g, &s, &sp) else { continue };

        // oracle in the closed disc
        let e1 = Complex::from_polar(1.0, t1);
        let e2 = Complex::from_polar(1.0, t2);
        let dot = e1.re * e2.re + e1.im * e2.im;
        let c = (e1 + e2) / (1.0 + dot);
        let r2 = (c.norm_sqr() - 1.0).max(0.0);
        let ws = Complex::from_polar(0.995, s.angle());
        let wsp = Complex::from_polar(0.995, sp.angle());
        // segment ws + t (wsp - ws) meets |w - c|^2 = r2 at one t in (0,1)
        let d = wsp - ws;
        let m0 = ws - c;
        let (qa, qb, qc) = (d.norm_sqr(), 2.0 * (m0.re * d.re + m0.im * d.im), m0.norm_sqr() - r2);
        let disc = qb * qb - 4.0 * qa * qc;
        if disc <= 0.0 {
            continue;
        }
        let sq = disc.sqrt();
        let roots = [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)];
        let Some(&tc) = roots.iter().find(|&&t| (0.0..=1.0).contains(&t)) else { continue };
        let w0 = ws + d * tc;
        // axis tangent toward the attracting endpoint
        let phi0 = (w0 - c).arg();
        let phi_plus = (e1 - c).arg();
        let dphi = (phi_plus - phi0 + std::f64::consts::PI).rem_euclid(TAU) - std::f64::consts::PI;
        let tangent = Complex::new(0.0, 1.0) * (w0 - c) * dphi.signum();
        let det = d.re * tangent.im - d.im * tangent.re;
        let oracle = if det > 0.0 { Side::Left } else { Side::Right };
        assert_eq!(side, oracle, "tangent-basis oracle disagrees (axis {t1:.3},{t2:.3})");
        checked += 1;
    }
}

#[test]
fn half_turns_converge_uniformly_for_interior_limits() {
    // w_n = w + direction/n: the rotations converge uniformly on the closed
    // disc; some n below 10^6 must reach sup error 1e-3 on a 10^4 grid
    let w = H2Point::new(-0.4, 1.3).unwrap();
    let n = common::uniform_convergence_n(w, 1e-3, 1e6);
    assert!(n.is_some(), "no n ≤ 1e6 reached uniform error 1e-3");
}

#[test]
fn half_turns_develop_north_south_dynamics_for_boundary_limits() {
    // w_n → ŵ on the boundary: eventually the complement of any ball
    // around ŵ maps into the ball, stably in n
    for radius in [0.5, 0.1, 0.02] {
        let n0 = common::north_south_n0(0.7, radius, 1e6);
        assert!(n0.is_some(), "no stable n0 found for radius {radius}");
    }
}

// ---------------------------------------------------------------------------
// Boundary identification and planes
// ---------------------------------------------------------------------------

#[test]
fn boundary_identification_is_equivariant() {
    let mut rng = rng(21);
    for _ in 0..10_000 {
        let alpha = random_mobius(&mut rng);
        let beta = random_mobius(&mut rng);
        let x = random_boundary_point(&mut rng);
        let y = random_boundary_point(&mut rng);
        let b = AdSBoundaryPoint::new(x, y);
        let iso = AdSIsometry::new(alpha, beta);
        let direct = iso.apply_boundary(&b);
        let through_matrix = AdSBoundaryPoint::decode(&iso.apply_mat(&b.encode())).unwrap();
        assert!(direct.approx_eq(&through_matrix, 1e-9));
    }
}

#[test]
fn spacelike_plane_boundary_incidence_is_tight() {
    let mut rng = rng(22);
    for _ in 0..10_000 {
        let gamma = random_mobius(&mut rng);
        let x = random_boundary_point(&mut rng);
        let b = AdSBoundaryPoint::new(x, gamma.inverse().apply_rp1(&x));
        let enc = b.encode();
        let value = bilinear(&enc, &gamma.mat());
        assert!(
            value.abs() <= 1e-12 * enc.norm() * gamma.mat().norm(),
            "incidence violated: {value:e}"
        );
    }
}

#[test]
fn chart_points_converge_to_their_boundary_target() {
    // divergent sequences of isometries approaching a boundary point (x, y)
    // send i to x and their inverses send i to y
    let x = RP1Point::from_real(2.0);
    let y = RP1Point::from_real(-0.5);
    let enc = AdSBoundaryPoint::new(x, y).encode();
    let bump = rotation_about(&H2Point::new(0.3, 1.1).unwrap()).mat();
    let eye = H2Point::i();
    let boundary_dist = |u: Complex<f64>, target: &RP1Point| {
        (u - Complex::from_polar(1.0, target.angle())).norm()
    };
    let mut prev = (f64::INFINITY, f64::INFINITY);
    for n in [10.0, 100.0, 1000.0, 10000.0] {
        let mut m = enc + bump.scale(1.0 / n);
        if m.det() <= 0.0 {
            m = enc - bump.scale(1.0 / n);
        }
        let gn = Mobius::from_mat2(m).unwrap();
        let fwd = boundary_dist(gn.apply_h2(&eye).to_disc(), &x);
        let bwd = boundary_dist(gn.inverse().apply_h2(&eye).to_disc(), &y);
        assert!(fwd < prev.0 + 1e-12 && bwd < prev.1 + 1e-12, "not improving at n={n}");
        prev = (fwd, bwd);
    }
    assert!(prev.0 < 1e-2 && prev.1 < 1e-2, "sequence did not reach its target: {prev:?}");
}

#[test]
fn affine_plane_round_trip_on_random_planes() {
    let mut rng = rng(23);
    let mut checked = 0;
    while checked < 500 {
        let base = random_mobius(&mut rng);
        let m = Mat2::new(
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
        );
        if m.det().abs() < 0.05 {
            continue;
        }
        let plane = AdSPlane::from_mat(m).unwrap();
        let (n, k) = adsquake::adsgeom::affine_from_plane(&base, &plane);
        if (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt() < 1e-6 * k.abs() {
            continue; // the plane is the chart plane itself
        }
        let back = plane_from_affine(&base, n, k).unwrap();
        assert!(plane.approx_eq(&back, 1e-9));
        checked += 1;
    }
}

#[test]
fn side_sign_is_isometry_invariant() {
    let mut rng = rng(24);
    let mut checked = 0;
    while checked < 1000 {
        let dual = random_mobius(&mut rng);
        let p = random_mobius(&mut rng);
        // stay away from the plane itself and the elliptic/hyperbolic edge
        let comp = dual.inverse().compose(&p);
        let tr = comp.abs_trace();
        if tr < 1e-3 || (tr - 2.0).abs() < 1e-3 {
            continue;
        }
        let plane = AdSPlane::from_dual(&dual);
        let before = adsquake::adsgeom::side_sign(&plane, &p).unwrap();
        let iso = AdSIsometry::new(random_mobius(&mut rng), random_mobius(&mut rng));
        let after =
            adsquake::adsgeom::side_sign(&iso.apply_plane(&plane), &iso.apply_point(&p)).unwrap();
        assert_eq!(before, after);
        assert_ne!(before, SideSign::On);
        checked += 1;
    }
}

#[test]
fn side_sign_flows_future_from_every_dual() {
    let mut rng = rng(25);
    for _ in 0..200 {
        let dual = random_mobius(&mut rng);
        let plane = AdSPlane::from_dual(&dual);
        let u = adsquake::mobius::SL2Tangent::new(0.0, -1.0, 1.0);
        let flowed = exp_sl2(0.2, &u).compose(&dual);
        // left translation by a future rotation moves the dual into its future
        assert_eq!(
            adsquake::adsgeom::side_sign(&plane, &flowed).unwrap(),
            SideSign::Future
        );
    }
}

// ---------------------------------------------------------------------------
// Circle maps
// ---------------------------------------------------------------------------

#[test]
fn synthesized_maps_validate_and_preserve_cyclic_order() {
    let mut rng = rng(31);
    for _ in 0..60 {
        let f = common::random_piecewise_map(&mut rng, 6);
        assert!(f.validate().is_valid());
        for _ in 0..17 {
            let a = random_boundary_point(&mut rng);
            let b = random_boundary_point(&mut rng);
            let c = random_boundary_point(&mut rng);
            let Ok(before) = triple_orientation(&a, &b, &c) else { continue };
            let after =
                triple_orientation(&f.eval(&a), &f.eval(&b), &f.eval(&c)).expect("images distinct");
            assert_eq!(before, after, "cyclic order broken");
        }
    }
}

#[test]
fn two_plane_pieces_are_the_exact_inverses() {
    let g1 = elliptic_about(&H2Point::new(0.4, 1.2).unwrap(), 0.6);
    let g2 = adsquake::mobius::hyperbolic_along(
        &RP1Point::from_real(-2.0),
        &RP1Point::from_real(0.5),
        1.1,
    )
    .unwrap()
    .compose(&g1);
    let f = two_plane_map(&g1, &g2, TwoPlaneVariant::Plus).unwrap();
    // the piece on I₁ is γ₁⁻¹ as a stored class, not an approximation
    assert!(f.pieces().iter().any(|p| p.dist(&g1.inverse()) == 0.0));
    assert!(f.pieces().iter().any(|p| p.dist(&g2.inverse()) == 0.0));
}

#[test]
fn separating_planes_state_positive_margins() {
    let mut rng = rng(32);
    for _ in 0..100 {
        let f = common::random_piecewise_map(&mut rng, 5);
        let gamma = adsquake::circlemap::separating_plane(&f).expect("certified plane");
        let margin = adsquake::circlemap::separation_margin(&f, &gamma, 1000);
        assert!(margin > 0.0, "sampled margin must be positive");
    }
}

#[test]
fn geodesic_transport_sides_are_consistent() {
    let mut rng = rng(33);
    for _ in 0..500 {
        let a = random_boundary_point(&mut rng);
        let b = random_boundary_point(&mut rng);
        if a.circle_dist(&b) < 0.1 {
            continue;
        }
        let g = Geodesic::new(a, b).unwrap();
        let z = H2Point::new(rng.random_range(-3.0..3.0), rng.random_range(0.05..3.0)).unwrap();
        let side_interior = g.side_of(&z, 1e-9);
        if side_interior == 0 {
            continue;
        }
        // pushing z toward the boundary radially keeps the side
        let disc = z.to_disc();
        let near = H2Point::from_disc(disc / disc.norm() * 0.9999).unwrap();
        let xb = RP1Point::from_angle(disc.arg());
        if g.side_of_boundary(&xb, 1e-9) != 0 {
            assert_eq!(g.side_of(&near, 1e-9), g.side_of_boundary(&xb, 1e-9));
        }
        let _ = side_interior;
    }
}

#[test]
fn orientation_is_antisymmetric_under_swaps() {
    let mut rng = rng(34);
    for _ in 0..2000 {
        let a = random_boundary_point(&mut rng);
        let b = random_boundary_point(&mut rng);
        let c = random_boundary_point(&mut rng);
        let (Ok(o1), Ok(o2)) = (triple_orientation(&a, &b, &c), triple_orientation(&b, &a, &c))
        else {
            continue;
        };
        assert_ne!(o1, o2);
        // cyclic invariance
        assert_eq!(o1, triple_orientation(&b, &c, &a).unwrap());
        let _ = Orientation::Positive;
    }
}
