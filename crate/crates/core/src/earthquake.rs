//! Earthquake maps: geodesic lamination plus one isometry per stratum,
//! with the left/right projections from pleated surfaces, the analytic
//! two-plane construction, and the axiom verifier.

use crate::adsgeom::{bilinear, AdSPoint, AdsError};
use crate::hull::{HullSide, PleatedSurface};
use crate::mobius::{
    exp_sl2, log_hyperbolic, translate_side, H2Point, Mobius, MobiusClass, MobiusError, RP1Point,
    Side,
};
use crate::Geodesic;
use thiserror::Error;

const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EarthquakeError {
    #[error("point does not lie on the plane dual to the given isometry")]
    NotOnPlane,
    #[error("projection contact is not elliptic (numerical failure)")]
    NotElliptic,
    #[error("the composition of the two duals is not hyperbolic")]
    NotHyperbolicComposition,
    #[error("ridge endpoints are not shared by both adjacent face boundaries")]
    InconsistentRidge,
    #[error("leaf parameter t must lie in [0, 1]")]
    BadLeafParameter,
    #[error(transparent)]
    Mobius(#[from] MobiusError),
    #[error(transparent)]
    Ads(#[from] AdsError),
}

/// Which projection from a pleated boundary to the hyperbolic plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    Left,
    Right,
}

/// Projection of a point on the plane dual to `gamma` to the hyperbolic
/// plane: the fixed point of `p∘γ⁻¹` (left) or `γ⁻¹∘p` (right). Both
/// compositions are order-two elliptic by the duality, which is checked.
pub fn project(
    p: &AdSPoint<f64>,
    gamma: &Mobius<f64>,
    which: Projection,
) -> Result<H2Point<f64>, EarthquakeError> {
    if bilinear(&p.mat(), &gamma.mat()).abs() > 1e-6 {
        return Err(EarthquakeError::NotOnPlane);
    }
    let comp = match which {
        Projection::Left => p.compose(&gamma.inverse()),
        Projection::Right => gamma.inverse().compose(p),
    };
    comp.fix_elliptic().map_err(|_| EarthquakeError::NotElliptic)
}

// ---------------------------------------------------------------------------
// Data model
// ---------------------------------------------------------------------------

/// Finite geodesic lamination, leaves ordered by endpoint angles.
#[derive(Debug, Clone, Default)]
pub struct Lamination {
    pub leaves: Vec<Geodesic>,
}

impl Lamination {
    pub fn new(mut leaves: Vec<Geodesic>) -> Self {
        leaves.sort_by(|a, b| {
            let (a1, a2) = (a.endpoints().0.angle(), a.endpoints().1.angle());
            let (b1, b2) = (b.endpoints().0.angle(), b.endpoints().1.angle());
            (a1, a2).partial_cmp(&(b1, b2)).expect("finite angles")
        });
        Self { leaves }
    }
}

/// One stratum of the lamination: an ideal polygon (or the whole plane when
/// empty) with the isometry the earthquake restricts to there.
///
/// Vertices are in counterclockwise order. A two-vertex stratum `(v₀, v₁)`
/// denotes the half-plane whose ideal boundary is the counterclockwise arc
/// from `v₀` to `v₁`; this convention is what distinguishes the two
/// half-planes cut by one geodesic.
#[derive(Debug, Clone)]
pub struct Stratum {
    pub vertices: Vec<RP1Point<f64>>,
    pub isometry: Mobius<f64>,
}

/// The isometry chosen on a discontinuity leaf: the interpolation parameter
/// `t ∈ [0, 1]` between the two adjacent strata and the resulting map.
#[derive(Debug, Clone)]
pub struct LeafChoice {
    pub leaf: usize,
    pub t: f64,
    pub isometry: Mobius<f64>,
}

/// An earthquake map: lamination, gap strata, and per-leaf choices.
#[derive(Debug, Clone)]
pub struct EarthquakeMap {
    pub side: Side,
    pub leaves: Vec<Geodesic>,
    pub strata: Vec<Stratum>,
    pub leaf_choices: Vec<LeafChoice>,
}

/// Where a point of the closed disc lands in the stratification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Located {
    Gap(usize),
    Leaf(usize),
}

impl EarthquakeMap {
    pub fn leaf_isometry(&self, leaf: usize) -> &Mobius<f64> {
        self.leaf_choices
            .iter()
            .find(|c| c.leaf == leaf)
            .map(|c| &c.isometry)
            .unwrap_or_else(|| &self.strata[0].isometry)
    }

    /// Comparison isometry `Comp(Sᵢ, Sⱼ) = (E|_{Sᵢ})⁻¹ ∘ E|_{Sⱼ}` between
    /// gap strata.
    pub fn comparison(&self, i: usize, j: usize) -> Mobius<f64> {
        self.strata[i].isometry.inverse().compose(&self.strata[j].isometry)
    }

    /// The inverse earthquake: image strata with inverted isometries, and
    /// the opposite side.
    pub fn inverse(&self) -> EarthquakeMap {
        let leaves: Vec<Geodesic> = (0..self.leaves.len())
            .map(|li| {
                let g = self.leaf_isometry(li);
                let (a, b) = self.leaves[li].endpoints();
                Geodesic::new(g.apply_rp1(&a), g.apply_rp1(&b)).expect("isometric image")
            })
            .collect();
        let strata = self
            .strata
            .iter()
            .map(|s| Stratum {
                vertices: s.vertices.iter().map(|v| s.isometry.apply_rp1(v)).collect(),
                isometry: s.isometry.inverse(),
            })
            .collect();
        let leaf_choices = self
            .leaf_choices
            .iter()
            .map(|c| LeafChoice { leaf: c.leaf, t: 1.0 - c.t, isometry: c.isometry.inverse() })
            .collect();
        EarthquakeMap { side: self.side.opposite(), leaves, strata, leaf_choices }
    }
}

// ---------------------------------------------------------------------------
// Point location
// ---------------------------------------------------------------------------

/// Boundary items of a stratum: its vertices plus the midpoints of the free
/// arcs it owns (the edges not matching a lamination leaf).
fn stratum_probe_points(eq: &EarthquakeMap, s: &Stratum) -> Vec<RP1Point<f64>> {
    let n = s.vertices.len();
    let mut probes = Vec::new();
    if n == 0 {
        for k in 0..4 {
            probes.push(RP1Point::from_angle(-std::f64::consts::PI + TAU * k as f64 / 4.0));
        }
        return probes;
    }
    if n == 2 {
        let lo = s.vertices[0].angle();
        let len = (s.vertices[1].angle() - lo).rem_euclid(TAU);
        probes.push(RP1Point::from_angle(lo + len / 2.0));
        probes.extend_from_slice(&s.vertices);
        return probes;
    }
    let is_leaf_edge = |a: &RP1Point<f64>, b: &RP1Point<f64>| {
        eq.leaves.iter().any(|l| {
            let (p, q) = l.endpoints();
            (a.approx_eq(&p, 1e-9) && b.approx_eq(&q, 1e-9))
                || (a.approx_eq(&q, 1e-9) && b.approx_eq(&p, 1e-9))
        })
    };
    for k in 0..n {
        let (a, b) = (&s.vertices[k], &s.vertices[(k + 1) % n]);
        if !is_leaf_edge(a, b) {
            let lo = a.angle();
            let len = (b.angle() - lo).rem_euclid(TAU);
            probes.push(RP1Point::from_angle(lo + len / 2.0));
        }
    }
    probes.extend_from_slice(&s.vertices);
    probes
}

/// Point-location structure: the side of every gap stratum with respect to
/// every leaf, computed once.
pub struct StratumLocator<'a> {
    eq: &'a EarthquakeMap,
    /// `sides[s][l]` ∈ {+1, -1}: which side of leaf `l` gap `s` lies on
    sides: Vec<Vec<i8>>,
}

impl<'a> StratumLocator<'a> {
    pub fn new(eq: &'a EarthquakeMap) -> Self {
        let sides = eq
            .strata
            .iter()
            .map(|s| {
                let probes = stratum_probe_points(eq, s);
                eq.leaves
                    .iter()
                    .map(|leaf| {
                        probes
                            .iter()
                            .map(|p| leaf.side_of_boundary(p, 1e-11))
                            .find(|&sg| sg != 0)
                            .unwrap_or(0)
                    })
                    .collect()
            })
            .collect();
        Self { eq, sides }
    }

    fn match_profile(&self, profile: &[i8]) -> Located {
        for (li, &sg) in profile.iter().enumerate() {
            if sg == 0 {
                return Located::Leaf(li);
            }
        }
        for (si, row) in self.sides.iter().enumerate() {
            if row.iter().zip(profile).all(|(&a, &b)| a == b) {
                return Located::Gap(si);
            }
        }
        // tolerate boundary-of-tolerance mismatches: closest profile
        let best = self
            .sides
            .iter()
            .enumerate()
            .max_by_key(|(_, row)| row.iter().zip(profile).filter(|(&a, &b)| a == b).count())
            .map(|(i, _)| i)
            .unwrap_or(0);
        Located::Gap(best)
    }

    pub fn locate_interior(&self, z: &H2Point<f64>) -> Located {
        let profile: Vec<i8> =
            self.eq.leaves.iter().map(|l| l.side_of(z, 1e-9)).collect();
        self.match_profile(&profile)
    }

    pub fn locate_boundary(&self, x: &RP1Point<f64>) -> Located {
        let profile: Vec<i8> =
            self.eq.leaves.iter().map(|l| l.side_of_boundary(x, 1e-11)).collect();
        self.match_profile(&profile)
    }
}

/// Evaluate the earthquake at an interior point: apply the isometry of the
/// stratum containing it (the chosen isometry on discontinuity leaves).
pub fn eval_earthquake(eq: &EarthquakeMap, z: &H2Point<f64>) -> H2Point<f64> {
    let loc = StratumLocator::new(eq);
    eval_earthquake_located(eq, &loc, z)
}

pub fn eval_earthquake_located(
    eq: &EarthquakeMap,
    loc: &StratumLocator<'_>,
    z: &H2Point<f64>,
) -> H2Point<f64> {
    match loc.locate_interior(z) {
        Located::Gap(i) => eq.strata[i].isometry.apply_h2(z),
        Located::Leaf(l) => eq.leaf_isometry(l).apply_h2(z),
    }
}

/// Evaluate the boundary extension of the earthquake.
pub fn eval_earthquake_boundary(eq: &EarthquakeMap, x: &RP1Point<f64>) -> RP1Point<f64> {
    let loc = StratumLocator::new(eq);
    eval_earthquake_boundary_located(eq, &loc, x)
}

pub fn eval_earthquake_boundary_located(
    eq: &EarthquakeMap,
    loc: &StratumLocator<'_>,
    x: &RP1Point<f64>,
) -> RP1Point<f64> {
    match loc.locate_boundary(x) {
        Located::Gap(i) => eq.strata[i].isometry.apply_rp1(x),
        Located::Leaf(l) => eq.leaf_isometry(l).apply_rp1(x),
    }
}

// ---------------------------------------------------------------------------
// Construction from pleated surfaces
// ---------------------------------------------------------------------------

/// Earthquake data read off a pleated boundary component of the convex
/// hull: one stratum per face (vertices are the first coordinates of its
/// ideal points, the isometry is the inverse of the face dual), one leaf
/// per ridge, and the `exp(t·a)` interpolant choice on each leaf.
/// Past surfaces give left earthquakes, future surfaces right ones.
pub fn strata_map(ps: &PleatedSurface, leaf_t: f64) -> Result<EarthquakeMap, EarthquakeError> {
    if !(0.0..=1.0).contains(&leaf_t) {
        return Err(EarthquakeError::BadLeafParameter);
    }
    let side = match ps.side {
        HullSide::Past => Side::Left,
        HullSide::Future => Side::Right,
    };
    let mut strata = Vec::with_capacity(ps.faces.len());
    for face in &ps.faces {
        let mut vertices: Vec<RP1Point<f64>> = face.ideal_vertices.iter().map(|b| b.x).collect();
        vertices.sort_by(|a, b| a.angle().partial_cmp(&b.angle()).expect("finite"));
        strata.push(Stratum { vertices, isometry: face.dual.inverse() });
    }
    // leaves from ridges, canonically ordered
    let mut ridge_data = Vec::with_capacity(ps.ridges.len());
    for ridge in &ps.ridges {
        let (i, j) = ridge.faces;
        let (p, q) = (&ridge.points.0, &ridge.points.1);
        for face in [i, j] {
            let dual = &ps.faces[face].dual;
            for pt in [p, q] {
                if bilinear(&pt.encode(), &dual.mat()).abs() > 1e-6 {
                    return Err(EarthquakeError::InconsistentRidge);
                }
            }
        }
        let leaf = Geodesic::new(p.x, q.x).map_err(|_| EarthquakeError::InconsistentRidge)?;
        let comp = ps.faces[j].dual.compose(&ps.faces[i].dual.inverse());
        let choice = if comp.classify() == MobiusClass::Hyperbolic {
            let interp = exp_sl2(leaf_t, &log_hyperbolic(&comp)?);
            interp.compose(&ps.faces[i].dual).inverse()
        } else if (comp.abs_trace() - 2.0).abs() <= 1e-6 {
            // the two support planes nearly coincide: bending across this
            // ridge is below sampling resolution and the interpolation
            // family collapses onto either dual
            ps.faces[i].dual.inverse()
        } else {
            return Err(EarthquakeError::NotHyperbolicComposition);
        };
        ridge_data.push((leaf, choice));
    }
    ridge_data.sort_by(|a, b| {
        let (a1, a2) = (a.0.endpoints().0.angle(), a.0.endpoints().1.angle());
        let (b1, b2) = (b.0.endpoints().0.angle(), b.0.endpoints().1.angle());
        (a1, a2).partial_cmp(&(b1, b2)).expect("finite")
    });
    let leaves: Vec<Geodesic> = ridge_data.iter().map(|r| r.0).collect();
    let leaf_choices: Vec<LeafChoice> = ridge_data
        .iter()
        .enumerate()
        .map(|(li, r)| LeafChoice { leaf: li, t: leaf_t, isometry: r.1 })
        .collect();
    Ok(EarthquakeMap { side, leaves, strata, leaf_choices })
}

/// The analytic earthquake of two intersecting spacelike planes, with no
/// hull computation: the lamination is the axis of `γ₂∘γ₁⁻¹`, the two
/// half-planes carry `γ₁⁻¹` and `γ₂⁻¹` (swapped for the `Minus` variant),
/// and the side is read off the comparison isometry.
pub fn simple_earthquake(
    gamma1: &Mobius<f64>,
    gamma2: &Mobius<f64>,
    variant: crate::circlemap::TwoPlaneVariant,
) -> Result<EarthquakeMap, EarthquakeError> {
    use crate::mobius::FixedPoints;
    let comp = gamma2.compose(&gamma1.inverse());
    let (attracting, repelling, axis) = match comp.fixed_points() {
        Ok(FixedPoints::Hyperbolic { attracting, repelling, axis }) => {
            (attracting, repelling, axis)
        }
        _ => return Err(EarthquakeError::NotHyperbolicComposition),
    };
    let (e1, e2) = match variant {
        crate::circlemap::TwoPlaneVariant::Plus => (gamma1.inverse(), gamma2.inverse()),
        crate::circlemap::TwoPlaneVariant::Minus => (gamma2.inverse(), gamma1.inverse()),
    };
    // first stratum owns the counterclockwise arc repelling -> attracting
    let strata = vec![
        Stratum { vertices: vec![repelling, attracting], isometry: e1 },
        Stratum { vertices: vec![attracting, repelling], isometry: e2 },
    ];
    let mid = |a: &RP1Point<f64>, b: &RP1Point<f64>| {
        let lo = a.angle();
        let len = (b.angle() - lo).rem_euclid(TAU);
        RP1Point::from_angle(lo + len / 2.0)
    };
    let s1 = mid(&repelling, &attracting);
    let s2 = mid(&attracting, &repelling);
    let comp_e = strata[0].isometry.inverse().compose(&strata[1].isometry);
    let side = translate_side(&comp_e, &s1, &s2)?;
    let interp = exp_sl2(0.5, &log_hyperbolic(&comp)?);
    let choice = interp.compose(gamma1).inverse();
    Ok(EarthquakeMap {
        side,
        leaves: vec![axis],
        strata,
        leaf_choices: vec![LeafChoice { leaf: 0, t: 0.5, isometry: choice }],
    })
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Result of checking one stratum pair against the earthquake axioms.
#[derive(Debug, Clone)]
pub struct PairRecord {
    pub first: String,
    pub second: String,
    pub class: MobiusClass,
    pub side: Option<Side>,
    /// `|tr| - 2` of the comparison (when not identity)
    pub trace_margin: f64,
    /// worst angular slack of the weak-separation test
    pub separation_margin: f64,
    pub ok: bool,
    pub note: String,
}

/// Outcome of [`verify_earthquake`]: per-pair records and headline margins.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub records: Vec<PairRecord>,
    pub pass: bool,
    pub worst_trace_margin: f64,
    pub worst_separation_margin: f64,
    pub boundary_sup_error: Option<f64>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &PairRecord> {
        self.records.iter().filter(|r| !r.ok)
    }
}

/// Boundary trace of a stratum for the separation test: closed arcs
/// (possibly degenerate) covering its ideal boundary set.
fn boundary_arcs(eq: &EarthquakeMap, vertices: &[RP1Point<f64>]) -> Vec<(f64, f64)> {
    let n = vertices.len();
    let mut arcs = Vec::new();
    if n == 0 {
        return vec![(-std::f64::consts::PI, TAU)];
    }
    if n == 1 {
        return vec![(vertices[0].angle(), 0.0)];
    }
    if n == 2 {
        // either a leaf stratum (two degenerate arcs) or a half-plane
        // owning the ccw arc; callers pass leaf strata as single leaves
        let lo = vertices[0].angle();
        let len = (vertices[1].angle() - lo).rem_euclid(TAU);
        arcs.push((lo, len));
        return arcs;
    }
    let is_leaf_edge = |a: &RP1Point<f64>, b: &RP1Point<f64>| {
        eq.leaves.iter().any(|l| {
            let (p, q) = l.endpoints();
            (a.approx_eq(&p, 1e-9) && b.approx_eq(&q, 1e-9))
                || (a.approx_eq(&q, 1e-9) && b.approx_eq(&p, 1e-9))
        })
    };
    for k in 0..n {
        let (a, b) = (&vertices[k], &vertices[(k + 1) % n]);
        if is_leaf_edge(a, b) {
            arcs.push((a.angle(), 0.0));
            arcs.push((b.angle(), 0.0));
        } else {
            let lo = a.angle();
            let len = (b.angle() - lo).rem_euclid(TAU);
            arcs.push((lo, len));
        }
    }
    arcs
}

/// Worst slack of fitting all `arcs` inside the closed arc `[lo, lo+len]`.
/// Items in the exterior count from whichever end of the arc is nearer, so
/// a start point slightly before `lo` reads as a small negative margin.
fn containment_margin(arcs: &[(f64, f64)], lo: f64, len: f64) -> f64 {
    let ext = TAU - len;
    let mut margin = f64::INFINITY;
    for &(a_lo, a_len) in arcs {
        let off = (a_lo - lo).rem_euclid(TAU);
        let off = if off > len + ext / 2.0 { off - TAU } else { off };
        margin = margin.min(off).min(len - (off + a_len));
    }
    margin
}

struct VStratum {
    name: String,
    vertices: Vec<RP1Point<f64>>,
    isometry: Mobius<f64>,
    is_leaf: Option<usize>,
}

/// Check the earthquake axioms on every stratum pair, leaves included:
/// comparisons are hyperbolic (identity only under closure containment),
/// their axes weakly separate the strata, and they translate to the map's
/// side. Tolerances: identity at `1e-9`, hyperbolic trace margin `1e-9`,
/// angular separation slack `-1e-9`.
pub fn verify_earthquake(eq: &EarthquakeMap) -> VerificationReport {
    let mut all: Vec<VStratum> = Vec::new();
    for (i, s) in eq.strata.iter().enumerate() {
        all.push(VStratum {
            name: format!("gap{i}"),
            vertices: s.vertices.clone(),
            isometry: s.isometry,
            is_leaf: None,
        });
    }
    for (li, leaf) in eq.leaves.iter().enumerate() {
        let (a, b) = leaf.endpoints();
        all.push(VStratum {
            name: format!("leaf{li}"),
            vertices: vec![a, b],
            isometry: *eq.leaf_isometry(li),
            is_leaf: Some(li),
        });
    }
    let mut records = Vec::new();
    let mut worst_trace = f64::INFINITY;
    let mut worst_sep = f64::INFINITY;
    for i in 0..all.len() {
        for j in (i + 1)..all.len() {
            let rec = check_pair(eq, &all[i], &all[j]);
            if rec.class == MobiusClass::Hyperbolic {
                worst_trace = worst_trace.min(rec.trace_margin);
                worst_sep = worst_sep.min(rec.separation_margin);
            }
            records.push(rec);
        }
    }
    let pass = records.iter().all(|r| r.ok);
    VerificationReport {
        records,
        pass,
        worst_trace_margin: worst_trace,
        worst_separation_margin: worst_sep,
        boundary_sup_error: None,
    }
}

fn check_pair(eq: &EarthquakeMap, s: &VStratum, sp: &VStratum) -> PairRecord {
    let comp = s.isometry.inverse().compose(&sp.isometry);
    let mut rec = PairRecord {
        first: s.name.clone(),
        second: sp.name.clone(),
        class: comp.classify(),
        side: None,
        trace_margin: comp.abs_trace() - 2.0,
        separation_margin: f64::INFINITY,
        ok: false,
        note: String::new(),
    };
    if comp.is_identity(1e-9) {
        // identity is allowed only when one stratum's closure contains the other
        let contained = match (s.is_leaf, sp.is_leaf) {
            (Some(_), None) => leaf_in_closure(&s.vertices, &sp.vertices),
            (None, Some(_)) => leaf_in_closure(&sp.vertices, &s.vertices),
            _ => false,
        };
        rec.class = MobiusClass::Identity;
        rec.ok = contained;
        rec.note = if contained {
            "identity with closure containment".into()
        } else {
            "identity comparison between non-nested strata".into()
        };
        return rec;
    }
    if rec.class != MobiusClass::Hyperbolic || rec.trace_margin < 1e-9 {
        rec.note = format!("comparison not hyperbolic with margin (|tr|-2 = {:.3e})", rec.trace_margin);
        return rec;
    }
    let (attracting, repelling) = match comp.fixed_points() {
        Ok(crate::mobius::FixedPoints::Hyperbolic { attracting, repelling, .. }) => {
            (attracting, repelling)
        }
        _ => {
            rec.note = "fixed points unavailable".into();
            return rec;
        }
    };
    // weak separation of the boundary traces by the axis; a leaf stratum
    // traces only its two endpoints
    let arcs_of = |v: &VStratum| -> Vec<(f64, f64)> {
        if v.is_leaf.is_some() {
            v.vertices.iter().map(|p| (p.angle(), 0.0)).collect()
        } else {
            boundary_arcs(eq, &v.vertices)
        }
    };
    let arcs_s = arcs_of(s);
    let arcs_sp = arcs_of(sp);
    let (t_r, t_a) = (repelling.angle(), attracting.angle());
    let len1 = (t_a - t_r).rem_euclid(TAU);
    let len2 = TAU - len1;
    let m1 = containment_margin(&arcs_s, t_r, len1).min(containment_margin(&arcs_sp, t_a, len2));
    let m2 = containment_margin(&arcs_s, t_a, len2).min(containment_margin(&arcs_sp, t_r, len1));
    rec.separation_margin = m1.max(m2);
    if rec.separation_margin < -1e-9 {
        rec.note = format!("axis fails to weakly separate (margin {:.3e})", rec.separation_margin);
        return rec;
    }
    // translation side, with off-axis representatives
    let axis = match Geodesic::new(attracting, repelling) {
        Ok(g) => g,
        Err(_) => {
            rec.note = "degenerate axis".into();
            return rec;
        }
    };
    // the axis endpoints are computed eigenvectors, so points within a
    // comfortably wider band count as on-axis when picking probes
    let probe = |v: &VStratum| -> Option<RP1Point<f64>> {
        stratum_probe_points_for(eq, v)
            .into_iter()
            .find(|p| axis.side_of_boundary(p, 1e-8) != 0)
    };
    let (rep_s, rep_sp) = (probe(s), probe(sp));
    let (ps, psp) = match (rep_s, rep_sp) {
        (Some(a), Some(b)) => (a, b),
        // a stratum lying on the axis itself: anchor the crossing on the
        // opposite side of the other representative
        (None, Some(b)) => match opposite_side_point(&axis, &b) {
            Some(a) => (a, b),
            None => {
                rec.note = "no off-axis representative".into();
                return rec;
            }
        },
        (Some(a), None) => match opposite_side_point(&axis, &a) {
            Some(b) => (a, b),
            None => {
                rec.note = "no off-axis representative".into();
                return rec;
            }
        },
        (None, None) => {
            rec.note = "both strata on the axis".into();
            return rec;
        }
    };
    match translate_side(&comp, &ps, &psp) {
        Ok(side) => {
            rec.side = Some(side);
            if side == eq.side {
                rec.ok = true;
            } else {
                rec.note = format!("translates {side:?}, expected {:?}", eq.side);
            }
        }
        Err(e) => rec.note = format!("side test failed: {e}"),
    }
    rec
}

fn stratum_probe_points_for(eq: &EarthquakeMap, v: &VStratum) -> Vec<RP1Point<f64>> {
    if v.is_leaf.is_some() {
        return v.vertices.clone();
    }
    stratum_probe_points(eq, &Stratum { vertices: v.vertices.clone(), isometry: v.isometry })
}

fn opposite_side_point(axis: &Geodesic, other: &RP1Point<f64>) -> Option<RP1Point<f64>> {
    let (a, b) = axis.endpoints();
    let lo1 = a.angle();
    let len1 = (b.angle() - lo1).rem_euclid(TAU);
    let c1 = RP1Point::from_angle(lo1 + len1 / 2.0);
    let lo2 = b.angle();
    let len2 = TAU - len1;
    let c2 = RP1Point::from_angle(lo2 + len2 / 2.0);
    let so = axis.side_of_boundary(other, 1e-8);
    [c1, c2].into_iter().find(|c| {
        let sc = axis.side_of_boundary(c, 1e-8);
        sc != 0 && sc != so
    })
}

fn leaf_in_closure(leaf_vertices: &[RP1Point<f64>], gap_vertices: &[RP1Point<f64>]) -> bool {
    leaf_vertices.iter().all(|lv| gap_vertices.iter().any(|gv| gv.approx_eq(lv, 1e-9)))
}

/// Supremum of the boundary disagreement between the earthquake extension
/// and a circle map, over equidistributed samples plus both one-sided
/// approaches to every breakpoint.
pub fn boundary_agreement(
    eq: &EarthquakeMap,
    f: &crate::circlemap::PiecewiseMobiusCircleMap,
    samples: usize,
) -> f64 {
    let loc = StratumLocator::new(eq);
    let mut worst: f64 = 0.0;
    let mut check = |x: RP1Point<f64>| {
        let d = eval_earthquake_boundary_located(eq, &loc, &x).circle_dist(&f.eval(&x));
        if d > worst {
            worst = d;
        }
    };
    for k in 0..samples {
        check(RP1Point::from_angle(-std::f64::consts::PI + TAU * (k as f64 + 0.5) / samples as f64));
    }
    for bp in f.breakpoints() {
        let t = bp.angle();
        check(RP1Point::from_angle(t + 1e-6));
        check(RP1Point::from_angle(t - 1e-6));
        check(*bp);
    }
    worst
}
