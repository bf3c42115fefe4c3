//! Planar geometry on image-plane landmark coordinates.
//!
//! Coordinates are pixels with `y` growing downward. Every operation here is a
//! pure function; angles cross the public boundary in degrees.

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GeometryError {
    #[error("non-finite coordinate ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
    #[error("slope undefined for a vertical segment")]
    VerticalLine,
    #[error("angle undefined for a zero-length vector")]
    ZeroVector,
    #[error("eye contour has zero horizontal span")]
    DegenerateEye,
    #[error("mouth contour has zero corner-to-corner span")]
    DegenerateMouth,
    #[error("expected {expected} points, got {got}")]
    WrongPointCount { expected: usize, got: usize },
}

/// A point in the image plane.
///
/// Fields are public so landmark buffers can be filled cheaply; use
/// [`Point2::try_new`] at trust boundaries to reject NaN and infinities.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn try_new(x: f64, y: f64) -> Result<Self, GeometryError> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(GeometryError::NonFinite { x, y })
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn midpoint(self, other: Point2) -> Point2 {
        Point2::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }

    /// Arithmetic mean of a non-empty point set. Returns `None` for an empty slice.
    pub fn centroid(points: &[Point2]) -> Option<Point2> {
        if points.is_empty() {
            return None;
        }
        let n = points.len() as f64;
        let (sx, sy) = points
            .iter()
            .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
        Some(Point2::new(sx / n, sy / n))
    }
}

impl Sub for Point2 {
    type Output = Vector2;

    fn sub(self, rhs: Point2) -> Vector2 {
        Vector2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add<Vector2> for Point2 {
    type Output = Point2;

    fn add(self, rhs: Vector2) -> Point2 {
        Point2::new(self.x + rhs.dx, self.y + rhs.dy)
    }
}

/// A displacement in the image plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vector2 {
    pub dx: f64,
    pub dy: f64,
}

impl Vector2 {
    /// Straight down in image coordinates: the eye-to-mouth direction of an
    /// upright frontal face.
    pub const FRONTAL: Vector2 = Vector2 { dx: 0.0, dy: 1.0 };

    pub const fn new(dx: f64, dy: f64) -> Self {
        Self { dx, dy }
    }

    pub fn dot(self, other: Vector2) -> f64 {
        self.dx * other.dx + self.dy * other.dy
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Vector2) -> f64 {
        self.dx * other.dy - self.dy * other.dx
    }

    pub fn norm(self) -> f64 {
        self.dx.hypot(self.dy)
    }
}

impl Neg for Vector2 {
    type Output = Vector2;

    fn neg(self) -> Vector2 {
        Vector2::new(-self.dx, -self.dy)
    }
}

impl Mul<f64> for Vector2 {
    type Output = Vector2;

    fn mul(self, k: f64) -> Vector2 {
        Vector2::new(self.dx * k, self.dy * k)
    }
}

/// An angle in degrees.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct AngleDeg(pub f64);

impl AngleDeg {
    pub fn degrees(self) -> f64 {
        self.0
    }
}

pub fn euclidean_distance(p: Point2, q: Point2) -> f64 {
    (p - q).norm()
}

/// Slope `Δy / Δx` of the line through two points.
pub fn calculate_slope(p1: Point2, p2: Point2) -> Result<f64, GeometryError> {
    if p1.x == p2.x {
        return Err(GeometryError::VerticalLine);
    }
    Ok((p2.y - p1.y) / (p2.x - p1.x))
}

/// Enclosed angle between two vectors, in `[0, 180]` degrees.
pub fn angle_between_vectors(v1: Vector2, v2: Vector2) -> Result<AngleDeg, GeometryError> {
    let n1 = v1.norm();
    let n2 = v2.norm();
    if n1 == 0.0 || n2 == 0.0 {
        return Err(GeometryError::ZeroVector);
    }
    // arccos(a.b / |a||b|) written as atan2(|a x b|, a.b): same angle, but
    // well-conditioned near 0 and 180 degrees where arccos loses ~1e-8 rad.
    let u1 = v1 * (1.0 / n1);
    let u2 = v2 * (1.0 / n2);
    let cross = u1.cross(u2).abs();
    let dot = u1.dot(u2).clamp(-1.0, 1.0);
    Ok(AngleDeg(cross.atan2(dot).to_degrees().clamp(0.0, 180.0)))
}

fn expect_len(points: &[Point2], expected: usize) -> Result<(), GeometryError> {
    if points.len() != expected {
        return Err(GeometryError::WrongPointCount {
            expected,
            got: points.len(),
        });
    }
    Ok(())
}

/// Eye aspect ratio over a 6-point eye contour `p1..p6`:
/// `(|p2-p6| + |p3-p5|) / (2 |p1-p4|)`.
///
/// `p1` and `p4` are the corners, `p2`/`p3` the upper lid, `p6`/`p5` the lower lid.
pub fn eye_aspect_ratio(eye: &[Point2]) -> Result<f64, GeometryError> {
    expect_len(eye, 6)?;
    let span = euclidean_distance(eye[0], eye[3]);
    if span == 0.0 {
        return Err(GeometryError::DegenerateEye);
    }
    let vertical = euclidean_distance(eye[1], eye[5]) + euclidean_distance(eye[2], eye[4]);
    Ok(vertical / (2.0 * span))
}

/// Mouth aspect ratio over 8 points ordered
/// `(left corner, top1, top2, top3, right corner, bottom3, bottom2, bottom1)`:
/// the three lip-to-lip distances over twice the corner span.
pub fn mouth_aspect_ratio(mouth: &[Point2]) -> Result<f64, GeometryError> {
    expect_len(mouth, 8)?;
    let span = euclidean_distance(mouth[0], mouth[4]);
    if span == 0.0 {
        return Err(GeometryError::DegenerateMouth);
    }
    let vertical = euclidean_distance(mouth[1], mouth[7])
        + euclidean_distance(mouth[2], mouth[6])
        + euclidean_distance(mouth[3], mouth[5]);
    Ok(vertical / (2.0 * span))
}
