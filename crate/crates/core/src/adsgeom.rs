//! The Lie-group model of Anti-de Sitter 3-space: the isometry group of the
//! hyperbolic plane with the Lorentzian structure induced by
//! `q(A) = -det(A)` on 2×2 matrices.
//!
//! Points are unit-determinant projective classes (the same normalization as
//! [`Mobius`], so [`AdSPoint`] is an alias), boundary points are pairs of
//! circle points through the image/kernel identification, and totally
//! geodesic planes are projective classes of nonzero matrices classified by
//! the sign of their determinant.

use crate::mat2::Mat2;
use crate::mobius::{AntiMobius, Mobius, MobiusError, RP1Point};
use crate::scalar::{Real, Tol};
use thiserror::Error;

/// A point of Anti-de Sitter space is exactly a unit-determinant projective
/// class, i.e. an isometry of the hyperbolic plane.
pub type AdSPoint<F> = Mobius<F>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdsError {
    #[error("matrix must be nonzero")]
    ZeroMatrix,
    #[error("matrix is not rank one")]
    NotRankOne,
    #[error("object lies on the projective plane removed by the chart")]
    OnChartPlane,
    #[error("affine data does not determine a plane")]
    SingularSystem,
    #[error("plane must be spacelike")]
    DegeneratePlane,
    #[error(transparent)]
    Mobius(#[from] MobiusError),
}

/// Oriented orthonormal basis of the tangent space at the identity.
/// `V`, `W` are spacelike, `U` is timelike and future-pointing; `U` is
/// tangent to the clockwise rotations about `i`.
pub fn basis_v<F: Real>() -> Mat2<F> {
    Mat2::new(F::zero(), F::one(), F::one(), F::zero())
}

pub fn basis_w<F: Real>() -> Mat2<F> {
    Mat2::new(F::one(), F::zero(), F::zero(), -F::one())
}

pub fn basis_u<F: Real>() -> Mat2<F> {
    Mat2::new(F::zero(), -F::one(), F::one(), F::zero())
}

/// The bilinear form `⟨A, B⟩ = -tr(A·adj(B)) / 2`; symmetric, with
/// `q(A) = ⟨A, A⟩ = -det(A)`.
pub fn bilinear<F: Real>(a: &Mat2<F>, b: &Mat2<F>) -> F {
    let p = *a * b.adj();
    -p.trace() / F::c(2.0)
}

/// The quadratic form `q(A) = -det(A)`.
pub fn q_form<F: Real>(a: &Mat2<F>) -> F {
    -a.det()
}

/// Left translation by `exp(tU)`: the future-directed flow used to fix the
/// time orientation.
pub fn left_translate_flow<F: Real>(x: &Mat2<F>, t: F) -> Mat2<F> {
    let r = Mat2::new(t.cos(), -t.sin(), t.sin(), t.cos());
    r * *x
}

// ---------------------------------------------------------------------------
// Boundary
// ---------------------------------------------------------------------------

/// Point of the boundary at infinity, identified with a pair of circle
/// points through `[X] ↦ (Im X, Ker X)` on rank-one matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdSBoundaryPoint<F> {
    pub x: RP1Point<F>,
    pub y: RP1Point<F>,
}

impl<F: Real> AdSBoundaryPoint<F> {
    pub fn new(x: RP1Point<F>, y: RP1Point<F>) -> Self {
        Self { x, y }
    }

    /// Rank-one representative `[[x₁y₂, -x₁y₁], [x₂y₂, -x₂y₁]]` with image
    /// `x` and kernel `y`.
    pub fn encode(&self) -> Mat2<F> {
        let (x1, x2) = self.x.coords();
        let (y1, y2) = self.y.coords();
        Mat2::new(x1 * y2, -(x1 * y1), x2 * y2, -(x2 * y1))
    }

    /// Inverse of [`encode`](Self::encode): image and kernel lines of a
    /// rank-one matrix.
    pub fn decode(m: &Mat2<F>) -> Result<Self, AdsError> {
        let n = m.norm();
        if n <= Tol::of::<F>(1e-300) {
            return Err(AdsError::ZeroMatrix);
        }
        if m.det().abs() > Tol::of::<F>(1e-9) * n * n {
            return Err(AdsError::NotRankOne);
        }
        let col1 = (m.a, m.c);
        let col2 = (m.b, m.d);
        let (ix, iy) = if col1.0 * col1.0 + col1.1 * col1.1 >= col2.0 * col2.0 + col2.1 * col2.1 {
            col1
        } else {
            col2
        };
        let row1 = (m.a, m.b);
        let row2 = (m.c, m.d);
        let (ku, kv) = if row1.0 * row1.0 + row1.1 * row1.1 >= row2.0 * row2.0 + row2.1 * row2.1 {
            (row1.1, -row1.0)
        } else {
            (row2.1, -row2.0)
        };
        Ok(Self::new(RP1Point::new(ix, iy)?, RP1Point::new(ku, kv)?))
    }

    pub fn approx_eq(&self, other: &Self, tol: F) -> bool {
        self.x.approx_eq(&other.x, tol) && self.y.approx_eq(&other.y, tol)
    }
}

// ---------------------------------------------------------------------------
// Planes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneKind {
    Spacelike,
    Timelike,
    Lightlike,
}

/// Classification of the totally geodesic plane `⟨X, A⟩ = 0` by the sign of
/// `det A`, with a relative threshold for the lightlike band.
pub fn plane_kind<F: Real>(a: &Mat2<F>) -> Result<PlaneKind, AdsError> {
    let n = a.norm();
    if n <= Tol::of::<F>(1e-300) {
        return Err(AdsError::ZeroMatrix);
    }
    let tau = Tol::of::<F>(1e-10) * n * n;
    let det = a.det();
    Ok(if det > tau {
        PlaneKind::Spacelike
    } else if det < -tau {
        PlaneKind::Timelike
    } else {
        PlaneKind::Lightlike
    })
}

/// Totally geodesic plane: the projective class `[A]`, stored at unit
/// Frobenius norm with canonical sign, plus its kind. Spacelike planes carry
/// their dual isometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdSPlane<F> {
    mat: Mat2<F>,
    kind: PlaneKind,
}

impl<F: Real> AdSPlane<F> {
    pub fn from_mat(a: Mat2<F>) -> Result<Self, AdsError> {
        let kind = plane_kind(&a)?;
        let mat = a.scale(a.norm().recip()).canonical_sign(Tol::of(1e-12));
        Ok(Self { mat, kind })
    }

    /// The plane dual to an isometry: always spacelike.
    pub fn from_dual(gamma: &Mobius<F>) -> Self {
        Self::from_mat(gamma.mat()).expect("unit determinant is spacelike")
    }

    pub fn kind(&self) -> PlaneKind {
        self.kind
    }

    /// Unit-norm canonical representative.
    pub fn mat(&self) -> Mat2<F> {
        self.mat
    }

    /// Dual isometry of a spacelike plane (det-1 normalization).
    pub fn dual(&self) -> Result<Mobius<F>, AdsError> {
        if self.kind != PlaneKind::Spacelike {
            return Err(AdsError::DegeneratePlane);
        }
        Ok(Mobius::from_mat2(self.mat)?)
    }

    /// Incidence `⟨X, A⟩ = 0` for a representative `X`.
    pub fn contains_mat(&self, x: &Mat2<F>, tol: F) -> bool {
        bilinear(x, &self.mat).abs() <= tol * x.norm()
    }

    pub fn boundary(&self) -> Result<PlaneBoundary<F>, AdsError> {
        match self.kind {
            PlaneKind::Spacelike => {
                // boundary is the graph of the inverse of the dual
                let g = Mobius::from_mat2(self.mat.adj())?;
                Ok(PlaneBoundary::Spacelike(g))
            }
            PlaneKind::Timelike => {
                let g = AntiMobius::from_mat2(self.mat.adj())?;
                Ok(PlaneBoundary::Timelike(g))
            }
            PlaneKind::Lightlike => {
                let b = AdSBoundaryPoint::decode(&self.mat)?;
                Ok(PlaneBoundary::Lightlike { im: b.x, ker: b.y })
            }
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: F) -> bool {
        self.mat.dist(&other.mat) <= tol
    }
}

/// Boundary at infinity of a totally geodesic plane.
///
/// Spacelike and timelike planes bound graphs of (orientation-preserving,
/// resp. reversing) circle maps; a lightlike plane bounds the union of the
/// two circles through its image and kernel.
#[derive(Debug, Clone, Copy)]
pub enum PlaneBoundary<F> {
    Spacelike(Mobius<F>),
    Timelike(AntiMobius<F>),
    Lightlike { im: RP1Point<F>, ker: RP1Point<F> },
}

// ---------------------------------------------------------------------------
// Isometries
// ---------------------------------------------------------------------------

/// Isometry `(α, β)` of Anti-de Sitter space, acting by `X ↦ αXβ⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdSIsometry<F> {
    pub alpha: Mobius<F>,
    pub beta: Mobius<F>,
}

impl<F: Real> AdSIsometry<F> {
    pub fn new(alpha: Mobius<F>, beta: Mobius<F>) -> Self {
        Self { alpha, beta }
    }

    pub fn identity() -> Self {
        Self::new(Mobius::identity(), Mobius::identity())
    }

    pub fn apply_mat(&self, x: &Mat2<F>) -> Mat2<F> {
        self.alpha.mat() * *x * self.beta.mat().adj()
    }

    pub fn apply_point(&self, p: &AdSPoint<F>) -> AdSPoint<F> {
        Mobius::from_mat2(self.apply_mat(&p.mat())).expect("isometries preserve det")
    }

    /// Boundary action `(x, y) ↦ (α·x, β·y)`, the equivariance of the
    /// image/kernel identification.
    pub fn apply_boundary(&self, p: &AdSBoundaryPoint<F>) -> AdSBoundaryPoint<F> {
        AdSBoundaryPoint::new(self.alpha.apply_rp1(&p.x), self.beta.apply_rp1(&p.y))
    }

    pub fn apply_plane(&self, p: &AdSPlane<F>) -> AdSPlane<F> {
        AdSPlane::from_mat(self.apply_mat(&p.mat())).expect("isometries preserve the kind")
    }
}

// ---------------------------------------------------------------------------
// Affine charts
// ---------------------------------------------------------------------------

/// Coordinates in the spacelike affine chart at `base`: the representative
/// `base⁻¹·X` is rescaled to trace 2 and written `[[1+w, b], [c, 1-w]]`.
/// Interior points satisfy `1 - w² - bc > 0`; boundary points lie on the
/// quadric `w² + bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartCoords<F> {
    pub base: Mobius<F>,
    pub w: F,
    pub b: F,
    pub c: F,
}

impl<F: Real> ChartCoords<F> {
    /// Embed a projective representative; fails when the object lies on the
    /// projective plane removed by the chart (trace ≈ 0).
    pub fn embed(base: &Mobius<F>, x: &Mat2<F>) -> Result<Self, AdsError> {
        let y = base.mat().adj() * *x;
        let tr = y.trace();
        if tr.abs() <= Tol::of::<F>(1e-9) * y.norm() {
            return Err(AdsError::OnChartPlane);
        }
        let y = y.scale(F::c(2.0) / tr);
        Ok(Self { base: *base, w: y.a - F::one(), b: y.b, c: y.c })
    }

    pub fn from_vec3(base: &Mobius<F>, v: [F; 3]) -> Self {
        Self { base: *base, w: v[0], b: v[1], c: v[2] }
    }

    pub fn vec3(&self) -> [F; 3] {
        [self.w, self.b, self.c]
    }

    /// Back to a projective representative `base · [[1+w, b], [c, 1-w]]`.
    pub fn extract(&self) -> Mat2<F> {
        let y = Mat2::new(F::one() + self.w, self.b, self.c, F::one() - self.w);
        self.base.mat() * y
    }

    /// `1 - w² - bc`: positive inside Anti-de Sitter space, zero on the
    /// boundary quadric.
    pub fn quadric_margin(&self) -> F {
        F::one() - self.w * self.w - self.b * self.c
    }
}

/// The plane `[A]` whose trace in the chart at `base` is the affine plane
/// `n · (w, b, c) = k`. Solved in closed form.
pub fn plane_from_affine<F: Real>(
    base: &Mobius<F>,
    n: [F; 3],
    k: F,
) -> Result<AdSPlane<F>, AdsError> {
    let two = F::c(2.0);
    let m = Mat2::new(k - n[0], -two * n[2], -two * n[1], k + n[0]);
    let a = (m * base.mat().adj()).adj();
    if a.norm() <= Tol::of::<F>(1e-300) {
        return Err(AdsError::SingularSystem);
    }
    AdSPlane::from_mat(a)
}

/// Affine coefficients `(n, k)` of the chart trace of a plane `[A]`:
/// the inverse of [`plane_from_affine`] up to scale.
pub fn affine_from_plane<F: Real>(base: &Mobius<F>, plane: &AdSPlane<F>) -> ([F; 3], F) {
    let m = plane.mat().adj() * base.mat();
    let half = F::c(0.5);
    let n = [
        -half * (m.a - m.d),
        -half * m.c,
        -half * m.b,
    ];
    let k = half * m.trace();
    (n, k)
}

/// Local position of a point relative to a spacelike plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideSign {
    Past,
    Future,
    On,
}

/// Side of the spacelike plane `P` seen from its dual: `Future` when the
/// comparison `dual⁻¹ ∘ p` is an elliptic rotation by a clockwise angle
/// less than π (the point is reached from the dual by the future-directed
/// flow within the injectivity radius), `Past` for more than π, `On` on the
/// plane itself.
///
/// The answer only depends on the conjugacy class of the comparison, so it
/// is invariant under isometries applied to both arguments. Points whose
/// comparison is not elliptic are not timelike-separated from the dual and
/// are reported `Future` by convention.
pub fn side_sign<F: Real>(plane: &AdSPlane<F>, p: &AdSPoint<F>) -> Result<SideSign, AdsError> {
    let dual = plane.dual()?;
    let comp = dual.inverse().compose(p);
    let tr = comp.mat().trace();
    if tr.abs() <= F::c(2.0) * Tol::of::<F>(1e-9) {
        return Ok(SideSign::On);
    }
    match comp.elliptic_angle() {
        Ok(theta) => {
            if theta < F::PI() {
                Ok(SideSign::Future)
            } else {
                Ok(SideSign::Past)
            }
        }
        Err(_) => Ok(SideSign::Future),
    }
}
