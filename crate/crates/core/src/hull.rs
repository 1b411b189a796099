//! Convex hull of the boundary graph in a spacelike affine chart: sampling,
//! quickhull with explicit tolerances, coplanar merging, future/past face
//! classification, and pleated-surface extraction.
//!
//! The quickhull is written in-repo with deterministic tie-breaking (lowest
//! index wins) because the tolerance policy has to be owned: hull vertices
//! lie on a quadric and whole coplanar clusters are the expected input, not
//! an edge case. A quartic brute-force oracle validates the facial
//! structure.

use crate::adsgeom::{
    left_translate_flow, plane_from_affine, AdSBoundaryPoint, AdsError, ChartCoords, PlaneKind,
};
use crate::circlemap::{separating_plane, CircleMapError, PiecewiseMobiusCircleMap};
use crate::mobius::{Mobius, RP1Point};
use std::collections::BTreeMap;
use thiserror::Error;

const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HullError {
    #[error("all points coplanar: the map is a single Möbius class")]
    DegenerateFlat,
    #[error("need at least four points")]
    TooFewPoints,
    #[error("round-off failure in hull construction: {0}")]
    RoundOff(String),
    #[error("face {face} has a plane that is neither spacelike nor near-lightlike (det {det:.3e})")]
    UnclassifiableFace { face: usize, det: f64 },
    #[error("brute-force oracle limited to 50 points (got {0})")]
    BruteForceTooLarge(usize),
    #[error("merged faces share more than two vertices: inconsistent ridge")]
    InconsistentRidge,
    #[error(transparent)]
    Chart(#[from] AdsError),
    #[error(transparent)]
    CircleMap(#[from] CircleMapError),
}

pub type V3 = [f64; 3];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: V3) -> V3 {
    scale(a, norm(a).recip())
}

fn diameter(points: &[V3]) -> f64 {
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    norm(sub(hi, lo))
}

/// Tolerances of the hull pipeline, derived from the spatial scale of the
/// embedded samples.
#[derive(Debug, Clone, Copy)]
pub struct HullTolerances {
    /// on-plane slack, `1e-9 ×` point-cloud diameter
    pub hull_eps: f64,
    /// normal agreement for coplanar merging
    pub merge_normal_eps: f64,
    /// slack for collecting the vertices of a merged face
    pub collect_eps: f64,
}

impl HullTolerances {
    pub fn for_points(points: &[V3]) -> Self {
        let d = diameter(points).max(1e-300);
        Self { hull_eps: 1e-9 * d, merge_normal_eps: 1e-7, collect_eps: 3e-9 * d }
    }
}

// ---------------------------------------------------------------------------
// Quickhull
// ---------------------------------------------------------------------------

/// Simplicial face of the raw hull, outward unit normal.
#[derive(Debug, Clone)]
pub struct TriFace {
    pub vertices: [usize; 3],
    pub normal: V3,
    pub offset: f64,
}

struct QhFace {
    v: [usize; 3],
    normal: V3,
    offset: f64,
    /// neighbor across the directed edge `(v[k], v[k+1])`
    nbr: [usize; 3],
    outside: Vec<usize>,
    alive: bool,
}

impl QhFace {
    fn new(points: &[V3], v: [usize; 3]) -> Result<Self, HullError> {
        let n = cross(sub(points[v[1]], points[v[0]]), sub(points[v[2]], points[v[0]]));
        let ln = norm(n);
        if !(ln > 0.0) || !ln.is_finite() {
            return Err(HullError::RoundOff("degenerate face normal".into()));
        }
        let normal = scale(n, ln.recip());
        let offset = dot(normal, points[v[0]]);
        Ok(Self { v, normal, offset, nbr: [usize::MAX; 3], outside: Vec::new(), alive: true })
    }

    fn dist(&self, p: V3) -> f64 {
        dot(self.normal, p) - self.offset
    }

    fn flip(&mut self) {
        self.v.swap(1, 2);
        self.normal = scale(self.normal, -1.0);
        self.offset = -self.offset;
    }

    fn edge(&self, k: usize) -> (usize, usize) {
        (self.v[k], self.v[(k + 1) % 3])
    }

    fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        (0..3).find(|&k| self.edge(k) == (a, b))
    }
}

/// Quickhull: simplicial faces of the convex hull, before coplanar merging.
/// Deterministic for a fixed input order; points within the tolerance of a
/// supporting plane count as on it.
pub fn convex_hull_3d(points: &[V3]) -> Result<Vec<TriFace>, HullError> {
    if points.len() < 4 {
        return Err(HullError::TooFewPoints);
    }
    let tol = HullTolerances::for_points(points);
    let eps = tol.hull_eps;

    // initial simplex from extreme points
    let mut candidates = Vec::new();
    for axis in 0..3 {
        let lo = (0..points.len())
            .min_by(|&a, &b| points[a][axis].partial_cmp(&points[b][axis]).expect("finite"))
            .expect("nonempty");
        let hi = (0..points.len())
            .max_by(|&a, &b| points[a][axis].partial_cmp(&points[b][axis]).expect("finite"))
            .expect("nonempty");
        candidates.push(lo);
        candidates.push(hi);
    }
    candidates.sort_unstable();
    candidates.dedup();
    let (mut p0, mut p1, mut best) = (candidates[0], candidates[0], -1.0);
    for &i in &candidates {
        for &j in &candidates {
            let d = norm(sub(points[i], points[j]));
            if d > best {
                best = d;
                p0 = i.min(j);
                p1 = i.max(j);
            }
        }
    }
    if best <= eps {
        return Err(HullError::DegenerateFlat);
    }
    let dir = normalize(sub(points[p1], points[p0]));
    let line_dist = |p: V3| {
        let d = sub(p, points[p0]);
        norm(sub(d, scale(dir, dot(d, dir))))
    };
    let p2 = (0..points.len())
        .max_by(|&a, &b| line_dist(points[a]).partial_cmp(&line_dist(points[b])).expect("finite"))
        .expect("nonempty");
    if line_dist(points[p2]) <= eps {
        return Err(HullError::DegenerateFlat);
    }
    let base_n = normalize(cross(sub(points[p1], points[p0]), sub(points[p2], points[p0])));
    let plane_dist = |p: V3| (dot(base_n, sub(p, points[p0]))).abs();
    let p3 = (0..points.len())
        .max_by(|&a, &b| {
            plane_dist(points[a]).partial_cmp(&plane_dist(points[b])).expect("finite")
        })
        .expect("nonempty");
    if plane_dist(points[p3]) <= eps {
        return Err(HullError::DegenerateFlat);
    }

    let simplex = [p0, p1, p2, p3];
    let mut faces: Vec<QhFace> = Vec::new();
    for skip in 0..4 {
        let v: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| simplex[k]).collect();
        let mut face = QhFace::new(points, [v[0], v[1], v[2]])?;
        if face.dist(points[simplex[skip]]) > 0.0 {
            face.flip();
        }
        faces.push(face);
    }
    // wire the initial neighbors through the directed edge map
    {
        let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                owner.insert(f.edge(k), fi);
            }
        }
        for fi in 0..4 {
            for k in 0..3 {
                let (a, b) = faces[fi].edge(k);
                faces[fi].nbr[k] = owner[&(b, a)];
            }
        }
    }
    for i in 0..points.len() {
        if simplex.contains(&i) {
            continue;
        }
        for face in faces.iter_mut() {
            if face.dist(points[i]) > eps {
                face.outside.push(i);
                break;
            }
        }
    }

    let mut pending: Vec<usize> = (0..faces.len()).collect();
    while let Some(fi) = pending.pop() {
        if !faces[fi].alive || faces[fi].outside.is_empty() {
            continue;
        }
        // furthest conflict point (ties: lowest index)
        let apex = *faces[fi]
            .outside
            .iter()
            .max_by(|&&a, &&b| {
                let da = faces[fi].dist(points[a]);
                let db = faces[fi].dist(points[b]);
                da.partial_cmp(&db).expect("finite").then(b.cmp(&a))
            })
            .expect("nonempty outside");
        let ap = points[apex];

        // visible patch: breadth-first over neighbors, so the horizon is a
        // closed curve even when distant faces also face the apex
        let mut visible: Vec<usize> = vec![fi];
        let mut seen = vec![false; faces.len()];
        seen[fi] = true;
        let mut queue = std::collections::VecDeque::from([fi]);
        while let Some(cur) = queue.pop_front() {
            for k in 0..3 {
                let nb = faces[cur].nbr[k];
                if !seen[nb] && faces[nb].alive && faces[nb].dist(ap) > eps {
                    seen[nb] = true;
                    visible.push(nb);
                    queue.push_back(nb);
                }
            }
        }
        // horizon: directed edges of visible faces whose neighbor is hidden
        let mut horizon: Vec<(usize, usize, usize)> = Vec::new(); // (a, b, hidden face)
        for &vi in &visible {
            for k in 0..3 {
                let nb = faces[vi].nbr[k];
                if !seen[nb] {
                    let (a, b) = faces[vi].edge(k);
                    horizon.push((a, b, nb));
                }
            }
        }
        if horizon.is_empty() {
            return Err(HullError::RoundOff("empty horizon".into()));
        }
        // collect orphaned conflict points and retire the visible patch
        let mut orphans: Vec<usize> = Vec::new();
        for &vi in &visible {
            orphans.extend(faces[vi].outside.iter().copied().filter(|&q| q != apex));
            faces[vi].outside.clear();
            faces[vi].alive = false;
        }
        orphans.sort_unstable();
        orphans.dedup();
        // cone over the horizon; edges keep their orientation so the new
        // faces (a, b, apex) are outward
        let base = faces.len();
        let mut start_of: BTreeMap<usize, usize> = BTreeMap::new();
        for (j, &(a, _, _)) in horizon.iter().enumerate() {
            if start_of.insert(a, base + j).is_some() {
                return Err(HullError::RoundOff("pinched horizon".into()));
            }
        }
        for &(a, b, hidden) in &horizon {
            let j = faces.len();
            let mut face = QhFace::new(points, [a, b, apex])?;
            // across (a, b): the hidden face, whose back pointer moves here
            face.nbr[0] = hidden;
            let back = faces[hidden]
                .edge_index(b, a)
                .ok_or_else(|| HullError::RoundOff("broken neighbor wiring".into()))?;
            faces[hidden].nbr[back] = j;
            // across (b, apex): the cone face whose horizon edge starts at b;
            // across (apex, a): the one whose horizon edge ends at a
            face.nbr[1] = start_of[&b];
            faces.push(face);
        }
        for j in base..faces.len() {
            let (a, _) = faces[j].edge(0);
            // the predecessor in the horizon loop ends at `a`
            let prev = (base..faces.len())
                .find(|&i| faces[i].edge(0).1 == a)
                .ok_or_else(|| HullError::RoundOff("open horizon loop".into()))?;
            faces[j].nbr[2] = prev;
        }
        for q in orphans {
            for j in base..faces.len() {
                if faces[j].dist(points[q]) > eps {
                    faces[j].outside.push(q);
                    break;
                }
            }
        }
        pending.extend(base..faces.len());
    }

    Ok(faces
        .into_iter()
        .filter(|f| f.alive)
        .map(|f| TriFace { vertices: f.v, normal: f.normal, offset: f.offset })
        .collect())
}

// ---------------------------------------------------------------------------
// Coplanar merging and the brute-force oracle
// ---------------------------------------------------------------------------

/// Polygonal face of the merged hull: fitted outward plane and all input
/// points lying on it, counterclockwise around the normal.
#[derive(Debug, Clone)]
pub struct MergedFace {
    pub normal: V3,
    pub offset: f64,
    pub vertices: Vec<usize>,
}

impl MergedFace {
    pub fn vertex_set(&self) -> Vec<usize> {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v
    }
}

fn order_on_plane(points: &[V3], normal: V3, members: &[usize]) -> Vec<usize> {
    let mut centroid = [0.0; 3];
    for &i in members {
        centroid = add(centroid, points[i]);
    }
    let centroid = scale(centroid, 1.0 / members.len() as f64);
    let axis = if normal[0].abs() <= normal[1].abs() && normal[0].abs() <= normal[2].abs() {
        [1.0, 0.0, 0.0]
    } else if normal[1].abs() <= normal[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let u = normalize(cross(normal, axis));
    let v = cross(normal, u);
    let mut keyed: Vec<(f64, f64, usize)> = members
        .iter()
        .map(|&i| {
            let d = sub(points[i], centroid);
            let (x, y) = (dot(d, u), dot(d, v));
            (y.atan2(x), x * x + y * y, i)
        })
        .collect();
    keyed.sort_by(|a, b| (a.0, a.1, a.2).partial_cmp(&(b.0, b.1, b.2)).expect("finite"));
    let mut out: Vec<usize> = keyed.into_iter().map(|k| k.2).collect();
    let start = out.iter().enumerate().min_by_key(|(_, &i)| i).map(|(k, _)| k).unwrap_or(0);
    out.rotate_left(start);
    out
}

fn canonical_face_sort(faces: &mut [MergedFace]) {
    faces.sort_by_key(|a| a.vertex_set());
}

/// Greedy region-merge of adjacent simplicial faces with agreeing planes;
/// each merged face collects every input point on its fitted plane.
pub fn merge_coplanar(points: &[V3], tris: &[TriFace], tol: &HullTolerances) -> Vec<MergedFace> {
    let nf = tris.len();
    let mut parent: Vec<usize> = (0..nf).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    let mut edges: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (fi, t) in tris.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (t.vertices[k], t.vertices[(k + 1) % 3]);
            edges.entry((a.min(b), a.max(b))).or_default().push(fi);
        }
    }
    let coplanar = |i: usize, j: usize| -> bool {
        if dot(tris[i].normal, tris[j].normal) < 1.0 - tol.merge_normal_eps {
            return false;
        }
        tris[i]
            .vertices
            .iter()
            .all(|&v| (dot(tris[j].normal, points[v]) - tris[j].offset).abs() <= tol.collect_eps)
            && tris[j].vertices.iter().all(|&v| {
                (dot(tris[i].normal, points[v]) - tris[i].offset).abs() <= tol.collect_eps
            })
    };
    for fs in edges.values() {
        if fs.len() == 2 && coplanar(fs[0], fs[1]) {
            let (a, b) = (find(&mut parent, fs[0]), find(&mut parent, fs[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..nf {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    // plane fit per preliminary group (area-weighted normals)
    let fit = |group: &[usize]| -> (V3, f64) {
        let mut n_acc = [0.0; 3];
        for &fi in group {
            let t = &tris[fi];
            n_acc = add(
                n_acc,
                cross(
                    sub(points[t.vertices[1]], points[t.vertices[0]]),
                    sub(points[t.vertices[2]], points[t.vertices[0]]),
                ),
            );
        }
        let normal = normalize(n_acc);
        let mut members: Vec<usize> = group.iter().flat_map(|&fi| tris[fi].vertices).collect();
        members.sort_unstable();
        members.dedup();
        let offset =
            members.iter().map(|&i| dot(normal, points[i])).sum::<f64>() / members.len() as f64;
        (normal, offset)
    };
    // second pass: the triangulation of one flat region need not be
    // edge-connected after tolerance-based insertions, so unify groups
    // whose fitted planes coincide even when no triangle edge joins them
    let prelim: Vec<(Vec<usize>, V3, f64)> = groups
        .into_values()
        .map(|g| {
            let (n, k) = fit(&g);
            (g, n, k)
        })
        .collect();
    let mut clusters: Vec<(Vec<usize>, V3, f64)> = Vec::new();
    for (g, n, k) in prelim {
        match clusters
            .iter_mut()
            .find(|(_, cn, ck)| dot(*cn, n) >= 1.0 - tol.merge_normal_eps && (ck - k).abs() <= tol.collect_eps)
        {
            Some((cg, _, _)) => cg.extend(g),
            None => clusters.push((g, n, k)),
        }
    }
    let mut out = Vec::with_capacity(clusters.len());
    for (group, _, _) in &clusters {
        let (mut normal, mut offset) = fit(group);
        // keep only genuine support planes: tolerance-based insertion can
        // leave sliver triangles whose planes cut through the cloud
        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        for p in points {
            let d = dot(normal, *p) - offset;
            hi = hi.max(d);
            lo = lo.min(d);
        }
        if hi > tol.collect_eps && lo < -tol.collect_eps {
            continue;
        }
        if hi > tol.collect_eps {
            normal = scale(normal, -1.0);
            offset = -offset;
        }
        let on_plane: Vec<usize> = (0..points.len())
            .filter(|&i| (dot(normal, points[i]) - offset).abs() <= tol.collect_eps)
            .collect();
        if on_plane.len() < 3 {
            continue;
        }
        let vertices = order_on_plane(points, normal, &on_plane);
        out.push(MergedFace { normal, offset, vertices });
    }
    // distinct support planes meet the cloud in at most two common points,
    // so equal vertex sets mean one face seen twice
    out.sort_by_key(|a| a.vertex_set());
    out.dedup_by(|a, b| a.vertex_set() == b.vertex_set());
    out
}

/// Quartic-time oracle: every point triple is a candidate support plane;
/// keep the planes with all points on one side and read the faces off them.
pub fn brute_force_hull(points: &[V3]) -> Result<Vec<MergedFace>, HullError> {
    let n = points.len();
    if n < 4 {
        return Err(HullError::TooFewPoints);
    }
    if n > 50 {
        return Err(HullError::BruteForceTooLarge(n));
    }
    let tol = HullTolerances::for_points(points);
    let scale_len = diameter(points);
    let mut seen: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut any_support = false;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let nvec = cross(sub(points[j], points[i]), sub(points[k], points[i]));
                if norm(nvec) <= 1e-12 * scale_len * scale_len {
                    continue;
                }
                let mut normal = normalize(nvec);
                let mut offset = dot(normal, points[i]);
                let mut above = 0usize;
                let mut below = 0usize;
                for p in points {
                    let d = dot(normal, *p) - offset;
                    if d > tol.hull_eps {
                        above += 1;
                    } else if d < -tol.hull_eps {
                        below += 1;
                    }
                }
                if above > 0 && below > 0 {
                    continue;
                }
                if above == 0 && below == 0 {
                    return Err(HullError::DegenerateFlat);
                }
                any_support = true;
                if above > 0 {
                    normal = scale(normal, -1.0);
                    offset = -offset;
                }
                let members: Vec<usize> = (0..n)
                    .filter(|&m| (dot(normal, points[m]) - offset).abs() <= tol.collect_eps)
                    .collect();
                if seen.insert(members.clone()) {
                    let vertices = order_on_plane(points, normal, &members);
                    out.push(MergedFace { normal, offset, vertices });
                }
            }
        }
    }
    if !any_support {
        return Err(HullError::DegenerateFlat);
    }
    canonical_face_sort(&mut out);
    Ok(out)
}

// ---------------------------------------------------------------------------
// The hull complex of a boundary graph
// ---------------------------------------------------------------------------

/// One vertex of the hull: chart coordinates and the boundary point it
/// samples.
#[derive(Debug, Clone)]
pub struct HullVertex {
    pub coords: V3,
    pub source: AdSBoundaryPoint<f64>,
}

/// Merged facial structure of the convex hull of a sampled boundary graph
/// in the affine chart of a separating plane.
#[derive(Debug, Clone)]
pub struct HullComplex {
    pub chart: Mobius<f64>,
    pub vertices: Vec<HullVertex>,
    pub faces: Vec<MergedFace>,
    pub tolerances: HullTolerances,
}

/// Boundary samples `(x, f(x))` equidistributed in angle; with `refine` the
/// breakpoints of `f` (the candidate ridge endpoints) are included exactly
/// and grid points colliding with them are dropped.
pub fn sample_graph(
    f: &PiecewiseMobiusCircleMap,
    n: usize,
    refine: bool,
    phase: f64,
) -> Vec<AdSBoundaryPoint<f64>> {
    let mut xs: Vec<RP1Point<f64>> = Vec::with_capacity(n + f.breakpoints().len());
    let frac = phase.rem_euclid(1.0);
    for j in 0..n {
        let theta = -std::f64::consts::PI + TAU * (j as f64 + 0.5 + frac) / n as f64;
        let x = RP1Point::from_angle(theta);
        if refine && f.breakpoints().iter().any(|bp| bp.circle_dist(&x) <= 1e-7) {
            continue;
        }
        xs.push(x);
    }
    if refine {
        xs.extend_from_slice(f.breakpoints());
    }
    xs.sort_by(|a, b| a.angle().partial_cmp(&b.angle()).expect("finite"));
    xs.dedup_by(|a, b| a.circle_dist(b) <= 1e-12);
    xs.iter().map(|x| AdSBoundaryPoint::new(*x, f.eval(x))).collect()
}

/// Which boundary component of the hull a face belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullSide {
    Future,
    Past,
}

/// Partition of the merged faces into the two boundary components.
#[derive(Debug, Clone, Default)]
pub struct FaceClassification {
    pub future: Vec<usize>,
    pub past: Vec<usize>,
    /// faces whose planes degenerated to (near-)lightlike; they touch the
    /// boundary curve only and belong to neither component
    pub lightlike_discarded: Vec<usize>,
}

/// One totally geodesic piece of a pleated boundary component.
#[derive(Debug, Clone)]
pub struct PleatedFace {
    pub dual: Mobius<f64>,
    pub ideal_vertices: Vec<AdSBoundaryPoint<f64>>,
}

/// Bending line between two adjacent faces: the shared pair of ideal points.
#[derive(Debug, Clone)]
pub struct PleatedRidge {
    pub faces: (usize, usize),
    pub points: (AdSBoundaryPoint<f64>, AdSBoundaryPoint<f64>),
}

/// A boundary component of the hull: spacelike faces with their duals, bent
/// along the ridges.
#[derive(Debug, Clone)]
pub struct PleatedSurface {
    pub side: HullSide,
    pub faces: Vec<PleatedFace>,
    pub ridges: Vec<PleatedRidge>,
}

impl HullComplex {
    /// Run the pipeline prefix: separating chart, sampling, quickhull,
    /// merging.
    pub fn build(
        f: &PiecewiseMobiusCircleMap,
        n_samples: usize,
        phase: f64,
    ) -> Result<Self, HullError> {
        let chart = separating_plane(f)?;
        let samples = sample_graph(f, n_samples.max(4), true, phase);
        Self::build_in_chart(chart, &samples)
    }

    pub fn build_in_chart(
        chart: Mobius<f64>,
        samples: &[AdSBoundaryPoint<f64>],
    ) -> Result<Self, HullError> {
        let mut vertices = Vec::with_capacity(samples.len());
        for s in samples {
            let cc = ChartCoords::embed(&chart, &s.encode())?;
            vertices.push(HullVertex { coords: cc.vec3(), source: *s });
        }
        let coords: Vec<V3> = vertices.iter().map(|v| v.coords).collect();
        let tolerances = HullTolerances::for_points(&coords);
        let tris = convex_hull_3d(&coords)?;
        let faces = merge_coplanar(&coords, &tris, &tolerances);
        Ok(Self { chart, vertices, faces, tolerances })
    }

    /// Centroid of the hull vertices: an interior point of the hull.
    pub fn interior_centroid(&self) -> V3 {
        let mut c = [0.0; 3];
        for v in &self.vertices {
            c = add(c, v.coords);
        }
        scale(c, 1.0 / self.vertices.len() as f64)
    }

    /// Split the faces into the future and past boundary components.
    ///
    /// Each face plane becomes a totally geodesic plane; a spacelike face is
    /// a future support plane exactly when the hull sits on its local past
    /// side, tested by flowing the face centroid with the future-directed
    /// left translation and comparing affine sides in the chart.
    pub fn classify_faces(&self) -> Result<FaceClassification, HullError> {
        let mut out = FaceClassification::default();
        let centroid = self.interior_centroid();
        for (fi, face) in self.faces.iter().enumerate() {
            // orient the plane so the hull is on the negative side
            let (mut n, mut k) = (face.normal, face.offset);
            if dot(n, centroid) - k > 0.0 {
                n = scale(n, -1.0);
                k = -k;
            }
            let plane = plane_from_affine(&self.chart, n, k)?;
            let amat = plane.mat();
            match plane.kind() {
                PlaneKind::Spacelike => {}
                PlaneKind::Lightlike => {
                    out.lightlike_discarded.push(fi);
                    continue;
                }
                PlaneKind::Timelike => {
                    // a sliver whose plane drifted just past the lightlike
                    // band is a sampling artifact touching the boundary curve
                    if amat.det() >= -1e-6 * amat.norm() * amat.norm() {
                        out.lightlike_discarded.push(fi);
                        continue;
                    }
                    return Err(HullError::UnclassifiableFace { face: fi, det: amat.det() });
                }
            }
            // face centroid, projected exactly onto the face plane
            let mut p0 = [0.0; 3];
            for &vi in &face.vertices {
                p0 = add(p0, self.vertices[vi].coords);
            }
            p0 = scale(p0, 1.0 / face.vertices.len() as f64);
            p0 = add(p0, scale(n, k - dot(n, p0)));
            let x = ChartCoords::from_vec3(&self.chart, p0).extract();
            let flowed = left_translate_flow(&x, 1e-3);
            let cc = ChartCoords::embed(&self.chart, &flowed)?;
            let sf = dot(n, cc.vec3()) - k;
            if sf == 0.0 {
                return Err(HullError::RoundOff("future flow tangent to face plane".into()));
            }
            // hull on the negative side: the flow exiting positively means
            // the hull is in the local past, i.e. a future support plane
            if sf > 0.0 {
                out.future.push(fi);
            } else {
                out.past.push(fi);
            }
        }
        Ok(out)
    }

    /// Extract one pleated boundary component: face duals, ideal vertices,
    /// and ridges with their shared ideal endpoints. Ridge endpoints within
    /// `1e-6` of a breakpoint of `f` snap to it exactly.
    pub fn extract_pleated(
        &self,
        side: HullSide,
        snap: Option<&PiecewiseMobiusCircleMap>,
    ) -> Result<PleatedSurface, HullError> {
        let classification = self.classify_faces()?;
        let picked: &[usize] = match side {
            HullSide::Future => &classification.future,
            HullSide::Past => &classification.past,
        };
        let snap_point = |b: &AdSBoundaryPoint<f64>| -> AdSBoundaryPoint<f64> {
            if let Some(f) = snap {
                for bp in f.breakpoints() {
                    if b.x.circle_dist(bp) <= 1e-6 {
                        return AdSBoundaryPoint::new(*bp, f.eval(bp));
                    }
                }
            }
            *b
        };
        let mut faces = Vec::with_capacity(picked.len());
        for &fi in picked {
            let face = &self.faces[fi];
            let plane = plane_from_affine(&self.chart, face.normal, face.offset)?;
            let dual = plane.dual()?;
            let mut ideal: Vec<AdSBoundaryPoint<f64>> =
                face.vertices.iter().map(|&vi| snap_point(&self.vertices[vi].source)).collect();
            ideal.sort_by(|a, b| a.x.angle().partial_cmp(&b.x.angle()).expect("finite"));
            faces.push(PleatedFace { dual, ideal_vertices: ideal });
        }
        // ridges: same-side merged faces sharing two hull vertices. Two
        // distinct support planes meet the boundary quadric in at most two
        // common points, so a larger shared set is collection-tolerance
        // smear between nearly coplanar slivers: its two angular extremes
        // are the ridge endpoints, and a point contact is no ridge at all.
        let mut ridges = Vec::new();
        for a in 0..picked.len() {
            for b in (a + 1)..picked.len() {
                let sa = self.faces[picked[a]].vertex_set();
                let sb = self.faces[picked[b]].vertex_set();
                let shared: Vec<usize> =
                    sa.iter().copied().filter(|v| sb.binary_search(v).is_ok()).collect();
                if shared.len() < 2 {
                    continue;
                }
                let angle_of = |i: usize| self.vertices[i].source.x.angle();
                let lo = shared
                    .iter()
                    .copied()
                    .min_by(|&x, &y| angle_of(x).partial_cmp(&angle_of(y)).expect("finite"))
                    .expect("nonempty");
                let hi = shared
                    .iter()
                    .copied()
                    .max_by(|&x, &y| angle_of(x).partial_cmp(&angle_of(y)).expect("finite"))
                    .expect("nonempty");
                let p = snap_point(&self.vertices[lo].source);
                let q = snap_point(&self.vertices[hi].source);
                if p.x.circle_dist(&q.x) <= 1e-9 {
                    continue;
                }
                ridges.push(PleatedRidge { faces: (a, b), points: (p, q) });
            }
        }
        Ok(PleatedSurface { side, faces, ridges })
    }

    /// ASCII OFF mesh of the merged hull in chart coordinates.
    pub fn to_off(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let _ = writeln!(s, "OFF");
        let _ = writeln!(s, "{} {} 0", self.vertices.len(), self.faces.len());
        for v in &self.vertices {
            let _ = writeln!(s, "{:.17e} {:.17e} {:.17e}", v.coords[0], v.coords[1], v.coords[2]);
        }
        for f in &self.faces {
            let _ = write!(s, "{}", f.vertices.len());
            for &vi in &f.vertices {
                let _ = write!(s, " {vi}");
            }
            let _ = writeln!(s);
        }
        s
    }
}
