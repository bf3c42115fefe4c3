//! The 68-point facial landmark layout and per-frame landmark records.
//!
//! Indices follow the usual 0-based 68-point annotation: jaw 0-16, brows
//! 17-26, nose 27-35, right eye 36-41, left eye 42-47, mouth 48-67.

use std::fmt;

use thiserror::Error;

use crate::geometry::Point2;

pub const LANDMARK_COUNT: usize = 68;

const RIGHT_EYE: [usize; 6] = [36, 37, 38, 39, 40, 41];
const LEFT_EYE: [usize; 6] = [42, 43, 44, 45, 46, 47];
const MOUTH_OUTER: [usize; 12] = [48, 49, 50, 51, 52, 53, 54, 55, 56, 57, 58, 59];
// left corner, top 1-3, right corner, bottom 3-1
const MOUTH_MAR: [usize; 8] = [48, 50, 51, 52, 54, 56, 57, 58];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaceRegion {
    RightEye,
    LeftEye,
    MouthOuter,
    /// The eight outer-lip points in the order `mouth_aspect_ratio` expects.
    MouthMarPoints,
}

impl FaceRegion {
    pub const ALL: [FaceRegion; 4] = [
        FaceRegion::RightEye,
        FaceRegion::LeftEye,
        FaceRegion::MouthOuter,
        FaceRegion::MouthMarPoints,
    ];
}

pub fn region_indices(region: FaceRegion) -> &'static [usize] {
    match region {
        FaceRegion::RightEye => &RIGHT_EYE,
        FaceRegion::LeftEye => &LEFT_EYE,
        FaceRegion::MouthOuter => &MOUTH_OUTER,
        FaceRegion::MouthMarPoints => &MOUTH_MAR,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LandmarkError {
    #[error("frame {frame_index} has no face")]
    NoFace { frame_index: u64 },
    #[error("frame {frame_index} has {got} landmarks, expected 68")]
    WrongPointCount { frame_index: u64, got: usize },
}

/// One timestamped observation from the landmark stream.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkFrame {
    pub frame_index: u64,
    /// Milliseconds since stream start.
    pub timestamp_ms: i64,
    /// `None` when no face was detected in this frame.
    pub points: Option<Vec<Point2>>,
}

impl LandmarkFrame {
    pub fn with_face(frame_index: u64, timestamp_ms: i64, points: Vec<Point2>) -> Self {
        Self {
            frame_index,
            timestamp_ms,
            points: Some(points),
        }
    }

    pub fn no_face(frame_index: u64, timestamp_ms: i64) -> Self {
        Self {
            frame_index,
            timestamp_ms,
            points: None,
        }
    }

    pub fn has_face(&self) -> bool {
        self.points.is_some()
    }

    /// The full 68-point set, or `NoFace`.
    pub fn face(&self) -> Result<&[Point2], LandmarkError> {
        match &self.points {
            None => Err(LandmarkError::NoFace {
                frame_index: self.frame_index,
            }),
            Some(p) if p.len() != LANDMARK_COUNT => Err(LandmarkError::WrongPointCount {
                frame_index: self.frame_index,
                got: p.len(),
            }),
            Some(p) => Ok(p),
        }
    }
}

pub fn extract_region(
    frame: &LandmarkFrame,
    region: FaceRegion,
) -> Result<Vec<Point2>, LandmarkError> {
    let face = frame.face()?;
    Ok(region_indices(region).iter().map(|&i| face[i]).collect())
}

fn region_centroid(face: &[Point2], region: FaceRegion) -> Point2 {
    let idx = region_indices(region);
    let n = idx.len() as f64;
    let (sx, sy) = idx
        .iter()
        .fold((0.0, 0.0), |(sx, sy), &i| (sx + face[i].x, sy + face[i].y));
    Point2::new(sx / n, sy / n)
}

/// Midpoint between the right-eye and left-eye centroids.
pub fn eye_midpoint(frame: &LandmarkFrame) -> Result<Point2, LandmarkError> {
    let face = frame.face()?;
    Ok(region_centroid(face, FaceRegion::RightEye)
        .midpoint(region_centroid(face, FaceRegion::LeftEye)))
}

/// Centroid of the outer lip contour (48-59).
pub fn mouth_midpoint(frame: &LandmarkFrame) -> Result<Point2, LandmarkError> {
    let face = frame.face()?;
    Ok(region_centroid(face, FaceRegion::MouthOuter))
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrameViolation {
    PointCount { got: usize },
    NonFiniteCoordinate { index: usize },
    NegativeTimestamp { timestamp_ms: i64 },
}

impl fmt::Display for FrameViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameViolation::PointCount { got } => {
                write!(f, "expected {LANDMARK_COUNT} points, got {got}")
            }
            FrameViolation::NonFiniteCoordinate { index } => {
                write!(f, "non-finite coordinate at index {index}")
            }
            FrameViolation::NegativeTimestamp { timestamp_ms } => {
                write!(f, "negative timestamp {timestamp_ms}")
            }
        }
    }
}

/// Checks the per-frame invariants. Ordering between frames is the stream
/// parser's job.
pub fn validate_frame(frame: &LandmarkFrame) -> Result<(), Vec<FrameViolation>> {
    let mut violations = Vec::new();
    if frame.timestamp_ms < 0 {
        violations.push(FrameViolation::NegativeTimestamp {
            timestamp_ms: frame.timestamp_ms,
        });
    }
    if let Some(points) = &frame.points {
        if points.len() != LANDMARK_COUNT {
            violations.push(FrameViolation::PointCount { got: points.len() });
        }
        violations.extend(
            points
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_finite())
                .map(|(index, _)| FrameViolation::NonFiniteCoordinate { index }),
        );
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
