//! Piecewise-Möbius circle homeomorphisms: the input class of the pipeline.
//!
//! A map is a cyclic list of breakpoints with one Möbius piece per arc.
//! These are exactly the boundary maps of finite earthquakes, which this
//! module can also synthesize ([`finite_earthquake_boundary`]) together with
//! the ground-truth earthquake for round-trip validation.

use crate::earthquake::{EarthquakeMap, LeafChoice, Stratum};
use crate::mobius::{
    exp_sl2, hyperbolic_along, log_hyperbolic, mobius_from_triples, translate_side, FixedPoints,
    Mobius, MobiusClass, MobiusError, RP1Point, Side,
};
use crate::{Geodesic, Mat2};
use thiserror::Error;

const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircleMapError {
    #[error("need one piece per breakpoint arc (got {pieces} pieces for {breakpoints} breakpoints)")]
    PieceCountMismatch { breakpoints: usize, pieces: usize },
    #[error("breakpoints must be distinct and cyclically ordered")]
    BreakpointsNotCyclic,
    #[error("point lies on the graph of the map")]
    OnGraph,
    #[error("separating plane verification found a crossing")]
    SeparationFailed,
    #[error("no elliptic isometry satisfies the two constraints")]
    NoEllipticSolution,
    #[error("the composition of the two plane duals is not hyperbolic")]
    NotHyperbolicComposition,
    #[error("lamination leaves cross (or share an endpoint)")]
    CrossingLeaves,
    #[error("leaf weights must be positive (and match the leaf count)")]
    NonPositiveWeight,
    #[error("base stratum index {0} out of range")]
    BadBaseIndex(usize),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
}

/// First invariant violation found by [`PiecewiseMobiusCircleMap::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum MapViolation {
    /// Pieces `k` and `k+1` disagree at breakpoint `k+1` by `gap` (circle metric).
    Continuity { breakpoint: usize, gap: f64 },
    /// Images of the breakpoints are not in the same cyclic order.
    ImagesOutOfOrder { breakpoint: usize },
    /// A sampled triple inside one arc has its image orientation reversed.
    OrientationReversed { piece: usize },
}

impl std::fmt::Display for MapViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MapViolation::Continuity { breakpoint, gap } => {
                write!(f, "pieces disagree at breakpoint {breakpoint} by {gap:.3e}")
            }
            MapViolation::ImagesOutOfOrder { breakpoint } => {
                write!(f, "breakpoint images out of cyclic order near index {breakpoint}")
            }
            MapViolation::OrientationReversed { piece } => {
                write!(f, "piece {piece} reverses orientation")
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violation: Option<MapViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Orientation-preserving homeomorphism of the circle given by `n ≥ 0`
/// cyclically ordered breakpoints and one Möbius piece per arc (piece `k`
/// acts on the counterclockwise arc from breakpoint `k` to breakpoint
/// `k+1`). Zero breakpoints mean a single global Möbius map.
#[derive(Debug, Clone)]
pub struct PiecewiseMobiusCircleMap {
    breakpoints: Vec<RP1Point<f64>>,
    angles: Vec<f64>,
    pieces: Vec<Mobius<f64>>,
}

impl PiecewiseMobiusCircleMap {
    pub fn global(m: Mobius<f64>) -> Self {
        Self { breakpoints: Vec::new(), angles: Vec::new(), pieces: vec![m] }
    }

    pub fn identity() -> Self {
        Self::global(Mobius::identity())
    }

    /// Build from a cyclically ordered breakpoint list (any rotation) and
    /// matching pieces. Semantic invariants are checked by
    /// [`validate`](Self::validate), not here.
    pub fn new(
        breakpoints: Vec<RP1Point<f64>>,
        pieces: Vec<Mobius<f64>>,
    ) -> Result<Self, CircleMapError> {
        if breakpoints.is_empty() {
            if pieces.len() != 1 {
                return Err(CircleMapError::PieceCountMismatch {
                    breakpoints: 0,
                    pieces: pieces.len(),
                });
            }
            return Ok(Self::global(pieces[0]));
        }
        if pieces.len() != breakpoints.len() {
            return Err(CircleMapError::PieceCountMismatch {
                breakpoints: breakpoints.len(),
                pieces: pieces.len(),
            });
        }
        let n = breakpoints.len();
        let raw_angles: Vec<f64> = breakpoints.iter().map(|p| p.angle()).collect();
        let start = raw_angles
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite angles"))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let order: Vec<usize> = (0..n).map(|i| (i + start) % n).collect();
        let breakpoints: Vec<_> = order.iter().map(|&i| breakpoints[i]).collect();
        let pieces: Vec<_> = order.iter().map(|&i| pieces[i]).collect();
        let angles: Vec<f64> = breakpoints.iter().map(|p| p.angle()).collect();
        for k in 1..n {
            if !(angles[k] > angles[k - 1] + 1e-12) {
                return Err(CircleMapError::BreakpointsNotCyclic);
            }
        }
        Ok(Self { breakpoints, angles, pieces })
    }

    pub fn breakpoints(&self) -> &[RP1Point<f64>] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Mobius<f64>] {
        &self.pieces
    }

    /// The single Möbius class when the map has no breakpoints.
    pub fn as_global(&self) -> Option<Mobius<f64>> {
        if self.breakpoints.is_empty() {
            Some(self.pieces[0])
        } else {
            None
        }
    }

    fn piece_index_at_angle(&self, theta: f64) -> usize {
        let n = self.breakpoints.len();
        if n == 0 {
            return 0;
        }
        // angles are sorted ascending; piece k covers [angles[k], angles[k+1])
        match self.angles.binary_search_by(|a| a.partial_cmp(&theta).expect("finite")) {
            Ok(k) => k,
            Err(0) => n - 1, // before the first breakpoint: wrap onto the last arc
            Err(k) => k - 1,
        }
    }

    pub fn piece_at(&self, x: &RP1Point<f64>) -> &Mobius<f64> {
        &self.pieces[self.piece_index_at_angle(x.angle())]
    }

    pub fn eval(&self, x: &RP1Point<f64>) -> RP1Point<f64> {
        self.piece_at(x).apply_rp1(x)
    }

    /// Check all structural invariants; reports the first violation.
    pub fn validate(&self) -> ValidationReport {
        let n = self.breakpoints.len();
        for k in 0..n {
            let j = (k + 1) % n;
            let bp = &self.breakpoints[j];
            let gap = self.pieces[k].apply_rp1(bp).circle_dist(&self.pieces[j].apply_rp1(bp));
            if gap > 1e-9 {
                return ValidationReport {
                    violation: Some(MapViolation::Continuity { breakpoint: j, gap }),
                };
            }
        }
        if n >= 2 {
            // breakpoint images in the same cyclic order with total degree one
            let imgs: Vec<f64> = (0..n)
                .map(|k| self.pieces[k].apply_rp1(&self.breakpoints[k]).angle())
                .collect();
            let mut total = 0.0;
            for k in 0..n {
                let inc = (imgs[(k + 1) % n] - imgs[k]).rem_euclid(TAU);
                if !(inc > 0.0) {
                    return ValidationReport {
                        violation: Some(MapViolation::ImagesOutOfOrder { breakpoint: k }),
                    };
                }
                total += inc;
            }
            if (total - TAU).abs() > 1e-6 {
                return ValidationReport {
                    violation: Some(MapViolation::ImagesOutOfOrder { breakpoint: 0 }),
                };
            }
        }
        for k in 0..self.pieces.len() {
            let (lo, len) = self.arc_span(k);
            let sample = |t: f64| RP1Point::from_angle(lo + t * len);
            let (fa, fb, fc) = (
                self.pieces[k].apply_rp1(&sample(0.2)),
                self.pieces[k].apply_rp1(&sample(0.5)),
                self.pieces[k].apply_rp1(&sample(0.8)),
            );
            let ok = matches!(
                crate::mobius::triple_orientation(&fa, &fb, &fc),
                Ok(crate::mobius::Orientation::Positive)
            );
            if !ok {
                return ValidationReport {
                    violation: Some(MapViolation::OrientationReversed { piece: k }),
                };
            }
        }
        ValidationReport::default()
    }

    /// Start angle and angular length of arc `k`.
    pub fn arc_span(&self, k: usize) -> (f64, f64) {
        let n = self.breakpoints.len();
        if n == 0 {
            return (-std::f64::consts::PI, TAU);
        }
        let lo = self.angles[k];
        let hi = self.angles[(k + 1) % n];
        let len = (hi - lo).rem_euclid(TAU);
        let len = if len <= 1e-15 { TAU } else { len };
        (lo, len)
    }

    /// Merge adjacent arcs whose pieces agree; a map that became a single
    /// class everywhere collapses to a global map.
    pub fn canonicalize(&self) -> Self {
        let n = self.breakpoints.len();
        if n == 0 {
            return self.clone();
        }
        let mut keep_bp = Vec::new();
        let mut keep_piece = Vec::new();
        for k in 0..n {
            let prev = (k + n - 1) % n;
            if !self.pieces[prev].approx_eq(&self.pieces[k], 1e-9) {
                keep_bp.push(self.breakpoints[k]);
                keep_piece.push(self.pieces[k]);
            }
        }
        if keep_bp.is_empty() {
            return Self::global(self.pieces[0]);
        }
        Self::new(keep_bp, keep_piece).expect("subset of a cyclic list stays cyclic")
    }

    /// Post-compose with a single Möbius map: `m ∘ f`.
    pub fn post_compose(&self, m: &Mobius<f64>) -> Self {
        let pieces = self.pieces.iter().map(|p| m.compose(p)).collect();
        Self { breakpoints: self.breakpoints.clone(), angles: self.angles.clone(), pieces }
    }

    /// Composition `self ∘ g`: breakpoints refine to those of `g` plus the
    /// `g`-preimages of those of `self`.
    pub fn compose(&self, g: &Self) -> Self {
        if self.breakpoints.is_empty() && g.breakpoints.is_empty() {
            return Self::global(self.pieces[0].compose(&g.pieces[0]));
        }
        let g_inv = g.invert();
        let mut cuts: Vec<RP1Point<f64>> = g.breakpoints.clone();
        cuts.extend(self.breakpoints.iter().map(|bp| g_inv.eval(bp)));
        cuts.sort_by(|a, b| a.angle().partial_cmp(&b.angle()).expect("finite"));
        cuts.dedup_by(|a, b| a.circle_dist(b) <= 1e-12);
        if cuts.len() >= 2 && cuts[0].circle_dist(cuts.last().expect("nonempty")) <= 1e-12 {
            cuts.pop();
        }
        let m = cuts.len();
        let mut pieces = Vec::with_capacity(m);
        for k in 0..m {
            let lo = cuts[k].angle();
            let len = (cuts[(k + 1) % m].angle() - lo).rem_euclid(TAU);
            let len = if len <= 1e-15 { TAU } else { len };
            let mid = RP1Point::from_angle(lo + len / 2.0);
            let inner = g.piece_at(&mid);
            let outer = self.piece_at(&g.eval(&mid));
            pieces.push(outer.compose(inner));
        }
        Self::new(cuts, pieces).expect("cuts sorted and distinct").canonicalize()
    }

    /// Inverse homeomorphism: breakpoints map to their images, pieces invert.
    pub fn invert(&self) -> Self {
        if self.breakpoints.is_empty() {
            return Self::global(self.pieces[0].inverse());
        }
        let bps: Vec<_> = (0..self.breakpoints.len())
            .map(|k| self.pieces[k].apply_rp1(&self.breakpoints[k]))
            .collect();
        let pieces: Vec<_> = self.pieces.iter().map(|p| p.inverse()).collect();
        Self::new(bps, pieces).expect("images of a cyclic list stay cyclic")
    }

    pub fn approx_eq(&self, other: &Self, samples: usize, tol: f64) -> bool {
        (0..samples).all(|k| {
            let x = RP1Point::from_angle(
                -std::f64::consts::PI + TAU * (k as f64 + 0.37) / samples as f64,
            );
            self.eval(&x).circle_dist(&other.eval(&x)) <= tol
        })
    }
}

// ---------------------------------------------------------------------------
// Separating planes
// ---------------------------------------------------------------------------

/// Normalize by post-composition: returns `(α, f̃ = α ∘ f)` with
/// `f̃(0) = 0` and `f̃(∞) = ∞`. When `f` already fixes `0` and `∞` the
/// correction is the identity.
pub fn normalize(
    f: &PiecewiseMobiusCircleMap,
) -> Result<(Mobius<f64>, PiecewiseMobiusCircleMap), CircleMapError> {
    let zero = RP1Point::from_real(0.0);
    let one = RP1Point::from_real(1.0);
    let inf = RP1Point::infinity();
    let (f0, f1, finf) = (f.eval(&zero), f.eval(&one), f.eval(&inf));
    if f0.circle_dist(&zero) <= 1e-12 && finf.circle_dist(&inf) <= 1e-12 {
        return Ok((Mobius::identity(), f.clone()));
    }
    let alpha = mobius_from_triples(&[f0, f1, finf], &[zero, one, inf])?;
    Ok((alpha, f.post_compose(&alpha)))
}

/// Real projective roots of `det(A·p, B·p) = 0`: the crossings of the two
/// homographies. Returns `None` when the quadratic vanishes identically
/// (the maps coincide as projective classes).
fn crossing_roots(a: &Mat2, b: &Mat2) -> Option<Vec<RP1Point<f64>>> {
    let q20 = a.a * b.c - a.c * b.a;
    let q11 = a.a * b.d + a.b * b.c - a.c * b.b - a.d * b.a;
    let q02 = a.b * b.d - a.d * b.b;
    let eps = 1e-13 * a.norm() * b.norm();
    if q20.abs() <= eps && q11.abs() <= eps && q02.abs() <= eps {
        return None;
    }
    let mut roots = Vec::new();
    if q20.abs() <= eps {
        roots.push(RP1Point::infinity());
        if q11.abs() > eps {
            roots.push(RP1Point::new(-q02, q11).expect("nonzero"));
        }
        return Some(roots);
    }
    let disc = q11 * q11 - 4.0 * q20 * q02;
    if disc < 0.0 {
        return Some(roots);
    }
    let sq = disc.sqrt();
    let s = -(q11 + if q11 >= 0.0 { sq } else { -sq }) / 2.0;
    if s.abs() > eps {
        roots.push(RP1Point::new(s, q20).expect("nonzero"));
        roots.push(RP1Point::new(q02, s).expect("nonzero"));
    } else {
        // q11 ≈ 0 and disc ≈ 0: double root at the vertex
        roots.push(RP1Point::new(-q11 / 2.0, q20).expect("nonzero"));
    }
    Some(roots)
}

fn angle_in_arc(theta: f64, lo: f64, len: f64, slack: f64) -> bool {
    let off = (theta - lo).rem_euclid(TAU);
    off <= len + slack || off >= TAU - slack
}

/// All crossings of `f` with the homography of a nonzero real matrix `g`,
/// found arc by arc in closed form. `SeparationFailed` when a whole arc
/// coincides with `g`.
fn crossings_with(
    f: &PiecewiseMobiusCircleMap,
    g: &Mat2,
) -> Result<Vec<RP1Point<f64>>, CircleMapError> {
    let mut found: Vec<RP1Point<f64>> = Vec::new();
    for k in 0..f.pieces.len() {
        let (lo, len) = f.arc_span(k);
        let roots = crossing_roots(&f.pieces[k].mat(), g).ok_or(CircleMapError::SeparationFailed)?;
        for r in roots {
            if angle_in_arc(r.angle(), lo, len, 1e-12)
                && !found.iter().any(|p| p.circle_dist(&r) <= 1e-9)
            {
                found.push(r);
            }
        }
    }
    Ok(found)
}

/// A spacelike plane whose boundary graph avoids the graph of `f`: the
/// half-turn at `i` composed with the normalizing correction, certified
/// crossing-free by per-arc root isolation.
pub fn separating_plane(f: &PiecewiseMobiusCircleMap) -> Result<Mobius<f64>, CircleMapError> {
    let (alpha, _) = normalize(f)?;
    let gamma = Mobius::half_turn_at_i().compose(&alpha);
    if !crossings_with(f, &gamma.inverse().mat())?.is_empty() {
        return Err(CircleMapError::SeparationFailed);
    }
    Ok(gamma)
}

/// Smallest sampled distance between `f` and the boundary graph of the
/// plane dual to `gamma` (diagnostic margin for a separating plane).
pub fn separation_margin(f: &PiecewiseMobiusCircleMap, gamma: &Mobius<f64>, samples: usize) -> f64 {
    let ginv = gamma.inverse();
    let mut margin = f64::INFINITY;
    for k in 0..samples {
        let x =
            RP1Point::from_angle(-std::f64::consts::PI + TAU * (k as f64 + 0.5) / samples as f64);
        margin = margin.min(f.eval(&x).circle_dist(&ginv.apply_rp1(&x)));
    }
    margin
}

/// A separating spacelike plane through a prescribed boundary point
/// `(x₀, y₀)` off the graph.
///
/// An orientation-reversing auxiliary map through `(x₀, y₀)` crosses the
/// graph exactly twice; sending the crossings and the prescribed point to
/// reference triples reduces to the half-turn construction.
pub fn separating_plane_through(
    f: &PiecewiseMobiusCircleMap,
    x0: &RP1Point<f64>,
    y0: &RP1Point<f64>,
) -> Result<Mobius<f64>, CircleMapError> {
    if f.eval(x0).circle_dist(y0) <= 1e-9 {
        return Err(CircleMapError::OnGraph);
    }
    // orientation-reversing g with g(x0) = y0: conjugate of x ↦ 1/x by the
    // rigid disc rotations taking 1 to x0 and to y0
    let one_angle = RP1Point::from_real(1.0).angle();
    let rot_to = |p: &RP1Point<f64>| {
        crate::mobius::elliptic_about(&crate::mobius::H2Point::i(), one_angle - p.angle())
    };
    let j = Mat2::new(0.0, 1.0, 1.0, 0.0);
    let g = rot_to(y0).mat() * j * rot_to(x0).inverse().mat();
    let mut crossings = crossings_with(f, &g)?;
    if crossings.len() != 2 {
        return Err(CircleMapError::SeparationFailed);
    }
    let (mut x, mut xp) = (crossings.remove(0), crossings.remove(0));
    if crate::mobius::triple_orientation(&x, x0, &xp)? == crate::mobius::Orientation::Negative {
        std::mem::swap(&mut x, &mut xp);
    }
    let (fx, fxp) = (f.eval(&x), f.eval(&xp));
    if crate::mobius::triple_orientation(&fx, y0, &fxp)? != crate::mobius::Orientation::Negative {
        return Err(CircleMapError::SeparationFailed);
    }
    let zero = RP1Point::from_real(0.0);
    let inf = RP1Point::infinity();
    let a = mobius_from_triples(&[x, *x0, xp], &[zero, RP1Point::from_real(1.0), inf])?;
    let b = mobius_from_triples(&[fx, *y0, fxp], &[zero, RP1Point::from_real(-1.0), inf])?;
    let gamma = a.inverse().compose(&Mobius::half_turn_at_i()).compose(&b);
    // certify disjointness and incidence
    if !crossings_with(f, &gamma.inverse().mat())?.is_empty() {
        return Err(CircleMapError::SeparationFailed);
    }
    if gamma.inverse().apply_rp1(x0).circle_dist(y0) > 1e-9 {
        return Err(CircleMapError::SeparationFailed);
    }
    Ok(gamma)
}

/// An elliptic isometry with `σ(x) = y` and `σ(x') = y'`, picked from the
/// one-parameter family of maps with those two constraints (the member of
/// smallest absolute trace, which is the most robustly elliptic one).
pub fn elliptic_two_pairs(
    x: &RP1Point<f64>,
    y: &RP1Point<f64>,
    xp: &RP1Point<f64>,
    yp: &RP1Point<f64>,
) -> Result<Mobius<f64>, CircleMapError> {
    // columns [x' | x]: sends 0 ↦ x and ∞ ↦ x'
    let col_map = |p: &RP1Point<f64>, q: &RP1Point<f64>| -> Result<Mobius<f64>, CircleMapError> {
        let (pu, pv) = p.coords();
        let (qu, qv) = q.coords();
        let m = Mat2::new(qu, pu, qv, pv);
        let m = if m.det() >= 0.0 { m } else { Mat2::new(qu, -pu, qv, -pv) };
        Ok(Mobius::from_mat2(m)?)
    };
    let a = col_map(x, xp)?;
    let b = col_map(y, yp)?;
    let c = a.inverse().compose(&b);
    let [c11, _, _, c22] = c.entries();
    let eps = 1e-12;
    let diag = |s: f64| Mat2::new((s / 2.0).exp(), 0.0, 0.0, (-s / 2.0).exp());
    let sigma_at = |s: f64| -> Result<Mobius<f64>, CircleMapError> {
        Ok(Mobius::from_mat2(b.mat() * diag(s) * a.inverse().mat())?)
    };
    let sigma = if c11.abs() <= eps && c22.abs() <= eps {
        sigma_at(0.0)?
    } else if c11.abs() <= eps {
        // trace e^{-s/2}·c22 never vanishes but tends to 0; aim at |tr| = 1/2
        sigma_at(2.0 * (c22.abs() / 0.5).ln())?
    } else if c22.abs() <= eps {
        sigma_at(-2.0 * (c11.abs() / 0.5).ln())?
    } else if c11 * c22 < 0.0 {
        sigma_at((-c22 / c11).ln())?
    } else {
        let min_abs_tr = 2.0 * (c11 * c22).sqrt();
        if min_abs_tr >= 2.0 - 1e-9 {
            return Err(CircleMapError::NoEllipticSolution);
        }
        sigma_at((c22 / c11).ln())?
    };
    if sigma.classify() != MobiusClass::Elliptic {
        return Err(CircleMapError::NoEllipticSolution);
    }
    debug_assert!(sigma.apply_rp1(x).circle_dist(y) < 1e-9);
    debug_assert!(sigma.apply_rp1(xp).circle_dist(yp) < 1e-9);
    Ok(sigma)
}

/// The two ways of combining the restrictions of `γ₁⁻¹` and `γ₂⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPlaneVariant {
    Plus,
    Minus,
}

/// The boundary map combining `γ₁⁻¹` and `γ₂⁻¹` on the two arcs cut by the
/// fixed points of `γ₂ ∘ γ₁⁻¹` (which must be hyperbolic). The arc from the
/// repelling to the attracting fixed point (counterclockwise) carries
/// `γ₁⁻¹` in the `Plus` variant; `Minus` swaps the pieces. Continuity at
/// the breakpoints holds automatically because both pieces agree at the
/// fixed points.
pub fn two_plane_map(
    gamma1: &Mobius<f64>,
    gamma2: &Mobius<f64>,
    variant: TwoPlaneVariant,
) -> Result<PiecewiseMobiusCircleMap, CircleMapError> {
    let comp = gamma2.compose(&gamma1.inverse());
    let (attracting, repelling) = match comp.fixed_points() {
        Ok(FixedPoints::Hyperbolic { attracting, repelling, .. }) => (attracting, repelling),
        _ => return Err(CircleMapError::NotHyperbolicComposition),
    };
    let (p1, p2) = match variant {
        TwoPlaneVariant::Plus => (gamma1.inverse(), gamma2.inverse()),
        TwoPlaneVariant::Minus => (gamma2.inverse(), gamma1.inverse()),
    };
    let f = PiecewiseMobiusCircleMap::new(vec![repelling, attracting], vec![p1, p2])?;
    debug_assert!(f.validate().is_valid());
    Ok(f)
}

// ---------------------------------------------------------------------------
// Finite laminations and their boundary maps
// ---------------------------------------------------------------------------

/// Finite measured lamination: disjoint weighted geodesics, a side, and the
/// stratum that carries the identity.
#[derive(Debug, Clone)]
pub struct LaminationSpec {
    pub leaves: Vec<Geodesic>,
    pub weights: Vec<f64>,
    pub side: Side,
    /// Index into the deterministic stratum enumeration of
    /// [`finite_earthquake_boundary`]; `None` picks the stratum owning the
    /// longest free boundary arc.
    pub base: Option<usize>,
}

impl LaminationSpec {
    pub fn validate(&self) -> Result<(), CircleMapError> {
        if self.weights.len() != self.leaves.len() || self.weights.iter().any(|w| !(*w > 0.0)) {
            return Err(CircleMapError::NonPositiveWeight);
        }
        for i in 0..self.leaves.len() {
            for j in (i + 1)..self.leaves.len() {
                if leaves_linked(&self.leaves[i], &self.leaves[j]) {
                    return Err(CircleMapError::CrossingLeaves);
                }
            }
        }
        Ok(())
    }
}

/// Two chords cross iff exactly one endpoint of the second lies in the open
/// arc cut by the first. Shared endpoints also count as crossing here: the
/// synthesis requires strictly disjoint leaves.
fn leaves_linked(l1: &Geodesic, l2: &Geodesic) -> bool {
    let (a, b) = l1.endpoints();
    let (c, d) = l2.endpoints();
    for p in [&c, &d] {
        if p.circle_dist(&a) <= 1e-12 || p.circle_dist(&b) <= 1e-12 {
            return true;
        }
    }
    let la = a.angle();
    let len = (b.angle() - la).rem_euclid(TAU);
    let inside = |p: &RP1Point<f64>| {
        let off = (p.angle() - la).rem_euclid(TAU);
        off > 0.0 && off < len
    };
    inside(&c) != inside(&d)
}

/// The complementary regions of a disjoint chord family, as cycles of
/// elementary boundary arcs, plus the chord adjacency between them.
struct FaceStructure {
    /// endpoint circle points, sorted counterclockwise
    endpoints: Vec<RP1Point<f64>>,
    /// per face: the elementary arcs `(endpoint j, endpoint j+1)` on its boundary
    face_arcs: Vec<Vec<usize>>,
    /// arc index -> face index
    face_of_arc: Vec<usize>,
    /// per leaf: the two incident faces
    faces_of_leaf: Vec<(usize, usize)>,
}

fn face_structure(leaves: &[Geodesic]) -> FaceStructure {
    let k = leaves.len();
    if k == 0 {
        return FaceStructure {
            endpoints: Vec::new(),
            face_arcs: vec![Vec::new()],
            face_of_arc: Vec::new(),
            faces_of_leaf: Vec::new(),
        };
    }
    let mut items: Vec<(f64, RP1Point<f64>, usize)> = Vec::with_capacity(2 * k);
    for (li, leaf) in leaves.iter().enumerate() {
        let (a, b) = leaf.endpoints();
        items.push((a.angle(), a, li));
        items.push((b.angle(), b, li));
    }
    items.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite angles"));
    let endpoints: Vec<_> = items.iter().map(|it| it.1).collect();
    let leaf_of: Vec<_> = items.iter().map(|it| it.2).collect();
    let n = endpoints.len();
    let mut partner = vec![usize::MAX; n];
    for i in 0..n {
        for j in 0..n {
            if j != i && leaf_of[j] == leaf_of[i] {
                partner[i] = j;
            }
        }
    }
    // face walk: arc j ends at endpoint j+1; the face continues along the
    // chord to the partner endpoint and resumes with the arc starting there
    let next_arc = |j: usize| partner[(j + 1) % n];
    let mut face_of_arc = vec![usize::MAX; n];
    let mut face_arcs: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if face_of_arc[start] != usize::MAX {
            continue;
        }
        let fi = face_arcs.len();
        let mut cycle = Vec::new();
        let mut j = start;
        loop {
            face_of_arc[j] = fi;
            cycle.push(j);
            j = next_arc(j);
            if j == start {
                break;
            }
        }
        face_arcs.push(cycle);
    }
    let mut faces_of_leaf = vec![(usize::MAX, usize::MAX); k];
    for j in 0..n {
        let end = (j + 1) % n;
        let li = leaf_of[end];
        let (f1, f2) = (face_of_arc[j], face_of_arc[end]);
        if f1 != f2 {
            faces_of_leaf[li] = (f1.min(f2), f1.max(f2));
        }
    }
    FaceStructure { endpoints, face_arcs, face_of_arc, faces_of_leaf }
}

/// Boundary map of the finite earthquake determined by a lamination spec,
/// together with the exact earthquake itself (the ground truth for
/// round-trip tests).
///
/// The base stratum carries the identity; crossing a leaf multiplies by the
/// hyperbolic map along it with translation length equal to the weight,
/// translating to the requested side seen from the nearer stratum.
pub fn finite_earthquake_boundary(
    spec: &LaminationSpec,
) -> Result<(PiecewiseMobiusCircleMap, EarthquakeMap), CircleMapError> {
    spec.validate()?;
    // canonical leaf order
    let mut order: Vec<usize> = (0..spec.leaves.len()).collect();
    order.sort_by(|&i, &j| {
        let (a1, b1) = spec.leaves[i].endpoints();
        let (a2, b2) = spec.leaves[j].endpoints();
        (a1.angle(), b1.angle())
            .partial_cmp(&(a2.angle(), b2.angle()))
            .expect("finite angles")
    });
    let leaves: Vec<Geodesic> = order.iter().map(|&i| spec.leaves[i]).collect();
    let weights: Vec<f64> = order.iter().map(|&i| spec.weights[i]).collect();

    if leaves.is_empty() {
        let eq = EarthquakeMap {
            side: spec.side,
            leaves: Vec::new(),
            strata: vec![Stratum { vertices: Vec::new(), isometry: Mobius::identity() }],
            leaf_choices: Vec::new(),
        };
        return Ok((PiecewiseMobiusCircleMap::identity(), eq));
    }

    let fs = face_structure(&leaves);
    let n_faces = fs.face_arcs.len();
    let n = fs.endpoints.len();
    let arc_len = |j: usize| -> f64 {
        let lo = fs.endpoints[j].angle();
        let len = (fs.endpoints[(j + 1) % n].angle() - lo).rem_euclid(TAU);
        if len <= 1e-15 {
            TAU
        } else {
            len
        }
    };
    let arc_mid = |j: usize| -> RP1Point<f64> {
        RP1Point::from_angle(fs.endpoints[j].angle() + arc_len(j) / 2.0)
    };

    let base = match spec.base {
        Some(i) if i < n_faces => i,
        Some(i) => return Err(CircleMapError::BadBaseIndex(i)),
        None => {
            let best = (0..n)
                .max_by(|&a, &b| arc_len(a).partial_cmp(&arc_len(b)).expect("finite"))
                .expect("at least one arc");
            fs.face_of_arc[best]
        }
    };

    // BFS over the face tree assigning stratum isometries
    let mut isom: Vec<Option<Mobius<f64>>> = vec![None; n_faces];
    isom[base] = Some(Mobius::identity());
    let mut queue = std::collections::VecDeque::from([base]);
    let mut crossing: Vec<Option<Mobius<f64>>> = vec![None; leaves.len()];
    let mut crossing_from: Vec<usize> = vec![usize::MAX; leaves.len()];
    while let Some(cur) = queue.pop_front() {
        for (li, leaf) in leaves.iter().enumerate() {
            let (f1, f2) = fs.faces_of_leaf[li];
            let other = if f1 == cur {
                f2
            } else if f2 == cur {
                f1
            } else {
                continue;
            };
            if isom[other].is_some() {
                continue;
            }
            let (a, b) = leaf.endpoints();
            let s = arc_mid(fs.face_arcs[cur][0]);
            let sp = arc_mid(fs.face_arcs[other][0]);
            let mut h = hyperbolic_along(&a, &b, weights[li])?;
            if translate_side(&h, &s, &sp)? != spec.side {
                h = h.inverse();
            }
            let cur_isom = isom[cur].expect("visited");
            isom[other] = Some(cur_isom.compose(&h));
            crossing[li] = Some(h);
            crossing_from[li] = cur;
            queue.push_back(other);
        }
    }

    // boundary map: one piece per elementary arc
    let pieces: Vec<Mobius<f64>> = (0..n)
        .map(|j| isom[fs.face_of_arc[j]].expect("face tree is connected"))
        .collect();
    let f = PiecewiseMobiusCircleMap::new(fs.endpoints.clone(), pieces)?.canonicalize();
    debug_assert!(f.validate().is_valid());

    let mut strata = Vec::with_capacity(n_faces);
    for fi in 0..n_faces {
        let mut vertices = Vec::new();
        for &j in &fs.face_arcs[fi] {
            vertices.push(fs.endpoints[j]);
            vertices.push(fs.endpoints[(j + 1) % n]);
        }
        strata.push(Stratum { vertices, isometry: isom[fi].expect("connected") });
    }
    let mut leaf_choices = Vec::with_capacity(leaves.len());
    for li in 0..leaves.len() {
        let h = crossing[li].expect("spanning tree covers all leaves");
        let half = exp_sl2(0.5, &log_hyperbolic(&h)?);
        let from = crossing_from[li];
        leaf_choices.push(LeafChoice {
            leaf: li,
            t: 0.5,
            isometry: isom[from].expect("visited").compose(&half),
        });
    }
    let eq = EarthquakeMap { side: spec.side, leaves, strata, leaf_choices };
    Ok((f, eq))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64) -> RP1Point<f64> {
        RP1Point::from_real(x)
    }

    fn scaling(k: f64) -> Mobius<f64> {
        Mobius::new(k, 0.0, 0.0, 1.0 / k).unwrap()
    }

    /// id on the negative arc, z ↦ 4z on the positive arc
    fn simple_map() -> PiecewiseMobiusCircleMap {
        PiecewiseMobiusCircleMap::new(
            vec![p(0.0), RP1Point::infinity()],
            vec![scaling(2.0), Mobius::identity()],
        )
        .unwrap()
    }

    #[test]
    fn eval_simple_map() {
        let f = simple_map();
        assert!(f.eval(&p(1.0)).approx_eq(&p(4.0), 1e-12));
        assert!(f.eval(&p(-1.0)).approx_eq(&p(-1.0), 1e-12));
        assert!(f.validate().is_valid());
    }

    #[test]
    fn invert_and_compose_cancel() {
        let f = simple_map();
        assert!(f.invert().eval(&p(4.0)).approx_eq(&p(1.0), 1e-12));
        let id = f.compose(&f.invert());
        assert!(id.as_global().is_some(), "composition must canonicalize to a global map");
        assert!(id.as_global().unwrap().is_identity(1e-9));
    }

    #[test]
    fn validate_catches_discontinuity() {
        let f = PiecewiseMobiusCircleMap::new(
            vec![p(0.0), RP1Point::infinity()],
            vec![Mobius::new(1.0, 1.0, 0.0, 1.0).unwrap(), Mobius::identity()],
        )
        .unwrap();
        match f.validate().violation {
            Some(MapViolation::Continuity { gap, .. }) => assert!(gap > 1e-3),
            other => panic!("expected continuity violation, got {other:?}"),
        }
    }

    #[test]
    fn validate_catches_image_disorder() {
        let f = PiecewiseMobiusCircleMap::new(
            vec![p(0.0), p(1.0), RP1Point::infinity()],
            vec![scaling(2.0), scaling(0.5), Mobius::identity()],
        )
        .unwrap();
        assert!(!f.validate().is_valid());
    }

    #[test]
    fn normalize_fixes_zero_and_infinity() {
        let f = PiecewiseMobiusCircleMap::global(Mobius::new(1.0, 1.0, 0.0, 1.0).unwrap());
        let (alpha, ft) = normalize(&f).unwrap();
        assert!(ft.eval(&p(0.0)).approx_eq(&p(0.0), 1e-9));
        assert!(ft.eval(&RP1Point::infinity()).approx_eq(&RP1Point::infinity(), 1e-9));
        assert!(!alpha.is_identity(1e-9));
        // idempotence
        let (alpha2, _) = normalize(&ft).unwrap();
        assert!(alpha2.is_identity(1e-9));
        // already normalized input returns the identity correction
        let (alpha3, _) = normalize(&simple_map()).unwrap();
        assert!(alpha3.is_identity(1e-12));
    }

    #[test]
    fn separating_plane_simple_cases() {
        let f = simple_map();
        let gamma = separating_plane(&f).unwrap();
        assert!(separation_margin(&f, &gamma, 1000) > 1e-3);

        let f = PiecewiseMobiusCircleMap::global(scaling(2.0));
        let gamma = separating_plane(&f).unwrap();
        assert!(separation_margin(&f, &gamma, 1000) > 1e-3);

        // an elliptic map has no fixed point at all; the construction still
        // returns the half-turn composition and verification passes
        let f = PiecewiseMobiusCircleMap::global(crate::mobius::elliptic_about(
            &crate::mobius::H2Point::<f64>::new(0.3, 1.4).unwrap(),
            1.1,
        ));
        let gamma = separating_plane(&f).unwrap();
        assert!(separation_margin(&f, &gamma, 1000) > 1e-4);
    }

    #[test]
    fn separating_plane_through_prescribed_point() {
        let f = PiecewiseMobiusCircleMap::global(scaling(2.0));
        let gamma = separating_plane_through(&f, &p(1.0), &p(-1.0)).unwrap();
        assert!(gamma.inverse().apply_rp1(&p(1.0)).approx_eq(&p(-1.0), 1e-9));
        // boundary-point incidence in the ambient bilinear form
        let b = crate::adsgeom::AdSBoundaryPoint::new(p(1.0), p(-1.0));
        assert!(crate::adsgeom::bilinear(&b.encode(), &gamma.mat()).abs() < 1e-9);
        assert!(separation_margin(&f, &gamma, 1000) > 0.0);

        assert_eq!(
            separating_plane_through(&f, &p(1.0), &p(4.0)).unwrap_err(),
            CircleMapError::OnGraph
        );
    }

    #[test]
    fn elliptic_two_pairs_cases() {
        let s = elliptic_two_pairs(&p(0.0), &RP1Point::infinity(), &RP1Point::infinity(), &p(0.0))
            .unwrap();
        assert_eq!(s.classify(), MobiusClass::Elliptic);
        assert!(s.apply_rp1(&p(0.0)).approx_eq(&RP1Point::infinity(), 1e-9));

        let s = elliptic_two_pairs(&p(0.0), &p(1.0), &RP1Point::infinity(), &p(-1.0)).unwrap();
        assert_eq!(s.classify(), MobiusClass::Elliptic);
        assert!(s.apply_rp1(&p(0.0)).approx_eq(&p(1.0), 1e-9));
        assert!(s.apply_rp1(&RP1Point::infinity()).approx_eq(&p(-1.0), 1e-9));
    }

    #[test]
    fn elliptic_two_pairs_graph_samples_match_scan() {
        // pairs sampled from the graph of z ↦ 4z; the closed form must agree
        // with a brute-force parameter scan of the family
        let g = scaling(2.0);
        for (x, xp) in [(1.0, 2.0), (-1.0, 3.0), (0.5, -2.0)] {
            let (x, xp) = (p(x), p(xp));
            let (y, yp) = (g.apply_rp1(&x), g.apply_rp1(&xp));
            let closed = elliptic_two_pairs(&x, &y, &xp, &yp);
            let col_map = |p0: &RP1Point<f64>, q0: &RP1Point<f64>| {
                let (pu, pv) = p0.coords();
                let (qu, qv) = q0.coords();
                let m = Mat2::new(qu, pu, qv, pv);
                let m = if m.det() >= 0.0 { m } else { Mat2::new(qu, -pu, qv, -pv) };
                Mobius::from_mat2(m).unwrap()
            };
            let (a, b) = (col_map(&x, &xp), col_map(&y, &yp));
            let scan_found = (-400..=400).map(|k| k as f64 * 0.01).any(|s| {
                let d = Mat2::new((s / 2.0).exp(), 0.0, 0.0, (-s / 2.0).exp());
                Mobius::from_mat2(b.mat() * d * a.inverse().mat()).unwrap().classify()
                    == MobiusClass::Elliptic
            });
            match closed {
                Ok(sigma) => {
                    assert_eq!(sigma.classify(), MobiusClass::Elliptic);
                    assert!(sigma.apply_rp1(&x).approx_eq(&y, 1e-9));
                    assert!(sigma.apply_rp1(&xp).approx_eq(&yp, 1e-9));
                    assert!(scan_found, "scan disagrees: no elliptic member found");
                }
                Err(CircleMapError::NoEllipticSolution) => {
                    assert!(!scan_found, "scan found an elliptic member the closed form missed");
                }
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn two_plane_map_reproduces_simple_example() {
        // γ₁ = id, γ₂ = z ↦ z/4: the composition is z ↦ z/4, repelling at ∞,
        // so the negative arc carries the identity
        let f = two_plane_map(&Mobius::identity(), &scaling(0.5), TwoPlaneVariant::Plus).unwrap();
        assert!(f.eval(&p(-1.0)).approx_eq(&p(-1.0), 1e-12));
        assert!(f.eval(&p(1.0)).approx_eq(&p(4.0), 1e-12));
        assert!(f.approx_eq(&simple_map(), 64, 1e-9));

        let fm = two_plane_map(&Mobius::identity(), &scaling(0.5), TwoPlaneVariant::Minus).unwrap();
        assert!(fm.eval(&p(-1.0)).approx_eq(&p(-4.0), 1e-12));
        assert!(fm.eval(&p(1.0)).approx_eq(&p(1.0), 1e-12));

        let elliptic = crate::mobius::elliptic_about(&crate::mobius::H2Point::<f64>::i(), 0.8);
        assert_eq!(
            two_plane_map(&Mobius::identity(), &elliptic, TwoPlaneVariant::Plus).unwrap_err(),
            CircleMapError::NotHyperbolicComposition
        );
    }

    #[test]
    fn finite_earthquake_single_leaf_is_simple_example() {
        let spec = LaminationSpec {
            leaves: vec![Geodesic::new(p(0.0), RP1Point::infinity()).unwrap()],
            weights: vec![4f64.ln()],
            side: Side::Left,
            base: None,
        };
        let (f, eq) = finite_earthquake_boundary(&spec).unwrap();
        assert!(f.approx_eq(&simple_map(), 128, 1e-9));
        assert_eq!(eq.strata.len(), 2);
        assert_eq!(eq.leaves.len(), 1);
        // the leaf choice at t = 1/2 is z ↦ 2z, inside the legal window
        assert!(eq.leaf_choices[0].isometry.approx_eq(&scaling(2f64.sqrt()), 1e-9));
    }

    #[test]
    fn finite_earthquake_empty_is_identity() {
        let spec = LaminationSpec { leaves: vec![], weights: vec![], side: Side::Left, base: None };
        let (f, eq) = finite_earthquake_boundary(&spec).unwrap();
        assert!(f.as_global().unwrap().is_identity(1e-12));
        assert_eq!(eq.strata.len(), 1);
    }

    #[test]
    fn finite_earthquake_rejects_bad_specs() {
        let crossing = LaminationSpec {
            leaves: vec![
                Geodesic::new(p(-1.0), p(1.0)).unwrap(),
                Geodesic::new(p(0.0), p(2.0)).unwrap(),
            ],
            weights: vec![1.0, 1.0],
            side: Side::Left,
            base: None,
        };
        assert_eq!(
            finite_earthquake_boundary(&crossing).unwrap_err(),
            CircleMapError::CrossingLeaves
        );
        let negative = LaminationSpec {
            leaves: vec![Geodesic::new(p(-1.0), p(1.0)).unwrap()],
            weights: vec![-0.5],
            side: Side::Left,
            base: None,
        };
        assert_eq!(
            finite_earthquake_boundary(&negative).unwrap_err(),
            CircleMapError::NonPositiveWeight
        );
    }

    #[test]
    fn finite_earthquake_nested_leaves_verify() {
        let spec = LaminationSpec {
            leaves: vec![
                Geodesic::new(p(-1.0), p(1.0)).unwrap(),
                Geodesic::new(p(-2.0), p(2.0)).unwrap(),
            ],
            weights: vec![0.8, 1.3],
            side: Side::Left,
            base: None,
        };
        let (f, eq) = finite_earthquake_boundary(&spec).unwrap();
        assert!(f.validate().is_valid());
        assert_eq!(eq.strata.len(), 3);
        // crossing maps are the adjacent-strata comparisons
        for li in 0..eq.leaves.len() {
            let (a, b) = eq.leaves[li].endpoints();
            let touching: Vec<usize> = (0..eq.strata.len())
                .filter(|&s| {
                    let vs = &eq.strata[s].vertices;
                    vs.iter().any(|v| v.approx_eq(&a, 1e-9))
                        && vs.iter().any(|v| v.approx_eq(&b, 1e-9))
                })
                .collect();
            assert_eq!(touching.len(), 2);
            let comp = eq.strata[touching[0]]
                .isometry
                .inverse()
                .compose(&eq.strata[touching[1]].isometry);
            assert_eq!(comp.classify(), MobiusClass::Hyperbolic);
        }
        // the verifier accepts the ground truth
        let report = crate::earthquake::verify_earthquake(&eq);
        assert!(report.pass, "failures: {:?}", report.failures().collect::<Vec<_>>());
        // and the boundary values agree with the assembled map
        assert!(crate::earthquake::boundary_agreement(&eq, &f, 400) < 1e-9);
    }
}
