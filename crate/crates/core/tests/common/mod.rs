//! Shared helpers for the integration suites: seeded random laminations,
//! random isometries, and random piecewise-Möbius maps.

#![allow(dead_code)]

use adsquake::circlemap::{finite_earthquake_boundary, LaminationSpec, PiecewiseMobiusCircleMap};
use adsquake::mobius::Side;
use adsquake::{Geodesic, Mobius, RP1Point};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const TAU: f64 = std::f64::consts::TAU;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `2k` circle angles with a minimum pairwise gap, sorted.
pub fn spaced_angles(rng: &mut ChaCha8Rng, count: usize, min_gap: f64) -> Vec<f64> {
    loop {
        let mut angles: Vec<f64> =
            (0..count).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ok = (0..count).all(|i| {
            let next = angles[(i + 1) % count];
            (next - angles[i]).rem_euclid(TAU) >= min_gap
        });
        if ok {
            return angles;
        }
    }
}

/// Random non-crossing perfect matching of sorted angle indices
/// (uniform over the Catalan family by recursive splitting).
fn non_crossing_pairing(rng: &mut ChaCha8Rng, lo: usize, hi: usize, out: &mut Vec<(usize, usize)>) {
    if lo >= hi {
        return;
    }
    let count = (hi - lo).div_ceil(2);
    let pick = rng.random_range(0..count);
    let partner = lo + 1 + 2 * pick;
    out.push((lo, partner));
    non_crossing_pairing(rng, lo + 1, partner - 1, out);
    non_crossing_pairing(rng, partner + 1, hi, out);
}

/// Random disjoint lamination with `k` leaves, weights in `[0.1, 2]`.
pub fn random_lamination(rng: &mut ChaCha8Rng, k: usize, side: Side) -> LaminationSpec {
    if k == 0 {
        return LaminationSpec { leaves: vec![], weights: vec![], side, base: None };
    }
    let angles = spaced_angles(rng, 2 * k, 0.06);
    let mut pairs = Vec::new();
    non_crossing_pairing(rng, 0, 2 * k - 1, &mut pairs);
    let leaves: Vec<Geodesic> = pairs
        .iter()
        .map(|&(i, j)| {
            Geodesic::new(RP1Point::from_angle(angles[i]), RP1Point::from_angle(angles[j]))
                .expect("spaced endpoints")
        })
        .collect();
    let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..2.0)).collect();
    let spec = LaminationSpec { leaves, weights, side, base: None };
    spec.validate().expect("construction is non-crossing");
    spec
}

/// Random valid piecewise-Möbius map: the boundary of a random finite
/// earthquake, optionally warped by a random isometry on each side.
pub fn random_piecewise_map(rng: &mut ChaCha8Rng, max_leaves: usize) -> PiecewiseMobiusCircleMap {
    let k = rng.random_range(1..=max_leaves);
    let side = if rng.random_bool(0.5) { Side::Left } else { Side::Right };
    let spec = random_lamination(rng, k, side);
    let (f, _) = finite_earthquake_boundary(&spec).expect("valid spec");
    let alpha = random_mobius(rng);
    let beta = random_mobius(rng);
    f.post_compose(&beta).compose(&PiecewiseMobiusCircleMap::global(alpha))
}

pub fn random_mobius(rng: &mut ChaCha8Rng) -> Mobius {
    loop {
        let e: [f64; 4] = [
            rng.random_range(-1.5..1.5),
            rng.random_range(-1.5..1.5),
            rng.random_range(-1.5..1.5),
            rng.random_range(-1.5..1.5),
        ];
        if e[0] * e[3] - e[1] * e[2] > 0.05 {
            return Mobius::new(e[0], e[1], e[2], e[3]).unwrap();
        }
    }
}

pub fn random_boundary_point(rng: &mut ChaCha8Rng) -> RP1Point {
    RP1Point::from_angle(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// Time budget scaled up for unoptimized builds.
pub fn budget(seconds: f64) -> f64 {
    if cfg!(debug_assertions) {
        seconds * 25.0
    } else {
        seconds
    }
}

/// Smallest `n ≤ n_max` (in doubling steps) at which the rotations about
/// `w + dir/n` are within `tol` of the rotation about `w`, uniformly over a
/// grid of the closed disc.
pub fn uniform_convergence_n(w: adsquake::H2Point, tol: f64, n_max: f64) -> Option<f64> {
    use adsquake::mobius::rotation_about;
    use num_complex::Complex;
    let rw = rotation_about(&w);
    let dir = Complex::new(1.0, 0.5) / Complex::new(1.0, 0.5).norm();
    let sup_err = |n: f64| -> f64 {
        let wn = adsquake::H2Point::from_complex(w.complex() + dir / n).unwrap();
        let rwn = rotation_about(&wn);
        let mut sup: f64 = 0.0;
        for i in 0..100 {
            for j in 0..100 {
                let rad = i as f64 / 99.0;
                let phi = TAU * j as f64 / 100.0;
                let d = if rad >= 1.0 - 1e-12 {
                    let x = adsquake::RP1Point::from_angle(phi);
                    let a = rwn.apply_rp1(&x);
                    let b = rw.apply_rp1(&x);
                    (Complex::from_polar(1.0, a.angle()) - Complex::from_polar(1.0, b.angle()))
                        .norm()
                } else {
                    let z = adsquake::H2Point::from_disc(Complex::from_polar(rad, phi)).unwrap();
                    (rwn.apply_h2(&z).to_disc() - rw.apply_h2(&z).to_disc()).norm()
                };
                sup = sup.max(d);
            }
        }
        sup
    };
    let mut n = 1.0;
    while n <= n_max {
        if sup_err(n) < tol {
            return Some(n);
        }
        n *= 4.0;
    }
    None
}

/// Smallest `n₀ ≤ n_max` (in doubling steps) at which the rotation about
/// `(1 - 1/n)·ŵ` maps the whole grid of the complement of the `radius`-ball
/// around the boundary point `ŵ` into that ball; confirms stability at
/// `2n₀` and `4n₀`.
pub fn north_south_n0(boundary_angle: f64, radius: f64, n_max: f64) -> Option<f64> {
    use adsquake::mobius::rotation_about;
    use num_complex::Complex;
    let target = Complex::from_polar(1.0, boundary_angle);
    let maps_inside = |n: f64| -> bool {
        let wn = adsquake::H2Point::from_disc(target * (1.0 - 1.0 / n)).unwrap();
        let rwn = rotation_about(&wn);
        for i in 0..60 {
            for j in 0..60 {
                let rad = (i as f64 / 59.0).min(1.0 - 1e-9);
                let phi = TAU * j as f64 / 60.0;
                let u = Complex::from_polar(rad, phi);
                if (u - target).norm() <= radius {
                    continue;
                }
                let img = rwn.apply_h2(&adsquake::H2Point::from_disc(u).unwrap()).to_disc();
                if (img - target).norm() > radius {
                    return false;
                }
            }
            let phi = TAU * i as f64 / 60.0;
            let x = adsquake::RP1Point::from_angle(phi);
            if (Complex::from_polar(1.0, x.angle()) - target).norm() <= radius {
                continue;
            }
            let img = rwn.apply_rp1(&x);
            if (Complex::from_polar(1.0, img.angle()) - target).norm() > radius {
                return false;
            }
        }
        true
    };
    let mut n = 2.0;
    while n <= n_max {
        if maps_inside(n) {
            if maps_inside(2.0 * n) && maps_inside(4.0 * n) {
                return Some(n);
            }
            return None;
        }
        n *= 2.0;
    }
    None
}
