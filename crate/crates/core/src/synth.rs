//! Synthetic 68-point faces with prescribed EAR, MAR and head tilt.
//!
//! Used to build replay fixtures and benchmark streams without a landmark
//! predictor. A face built from a [`FaceSpec`] yields back the requested
//! metrics through `compute_metrics` up to floating-point rounding.

use crate::detector::FaceMetrics;
use crate::geometry::Point2;
use crate::landmarks::{LandmarkFrame, LANDMARK_COUNT};

const EYE_HALF_WIDTH: f64 = 15.0;
const EYE_OFFSET_X: f64 = 45.0;
const MOUTH_HALF_WIDTH: f64 = 35.0;
const MOUTH_DROP: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceSpec {
    pub ear_left: f64,
    pub ear_right: f64,
    pub mar: f64,
    /// In-plane rotation about the eye midpoint, degrees.
    pub angle_deg: f64,
    /// Image position of the eye midpoint.
    pub eye_center: Point2,
    pub scale: f64,
}

impl Default for FaceSpec {
    fn default() -> Self {
        Self {
            ear_left: 0.3,
            ear_right: 0.3,
            mar: 0.3,
            angle_deg: 0.0,
            eye_center: Point2::new(320.0, 200.0),
            scale: 1.0,
        }
    }
}

impl FaceSpec {
    pub fn from_metrics(m: &FaceMetrics) -> Self {
        Self {
            ear_left: m.ear_left,
            ear_right: m.ear_right,
            mar: m.mar,
            angle_deg: m.angle_deg,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticFace {
    spec: FaceSpec,
}

impl SyntheticFace {
    pub fn new(spec: FaceSpec) -> Self {
        Self { spec }
    }

    pub fn spec(&self) -> &FaceSpec {
        &self.spec
    }

    pub fn frame(&self, frame_index: u64, timestamp_ms: i64) -> LandmarkFrame {
        LandmarkFrame::with_face(frame_index, timestamp_ms, self.points())
    }

    /// The 68 landmarks in image coordinates.
    pub fn points(&self) -> Vec<Point2> {
        let s = &self.spec;
        let mut pts = [(0.0f64, 0.0f64); LANDMARK_COUNT];

        // jaw: a lower arc from ear to ear
        for (i, p) in pts[0..17].iter_mut().enumerate() {
            let t = std::f64::consts::PI * i as f64 / 16.0;
            *p = (-90.0 * t.cos(), 10.0 + 140.0 * t.sin());
        }
        for (i, p) in pts[17..22].iter_mut().enumerate() {
            *p = (
                -70.0 + 12.0 * i as f64,
                -25.0 - 3.0 * (2.0 - i as f64).abs(),
            );
        }
        for (i, p) in pts[22..27].iter_mut().enumerate() {
            *p = (22.0 + 12.0 * i as f64, -25.0 - 3.0 * (2.0 - i as f64).abs());
        }
        for (i, p) in pts[27..31].iter_mut().enumerate() {
            *p = (0.0, 10.0 + 14.0 * i as f64);
        }
        for (i, p) in pts[31..36].iter_mut().enumerate() {
            *p = (-14.0 + 7.0 * i as f64, 62.0);
        }

        place_eye(&mut pts[36..42], -EYE_OFFSET_X, s.ear_right);
        place_eye(&mut pts[42..48], EYE_OFFSET_X, s.ear_left);
        place_mouth(&mut pts[48..68], s.mar);

        let (sin, cos) = s.angle_deg.to_radians().sin_cos();
        pts.iter()
            .map(|&(x, y)| {
                let rx = cos * x - sin * y;
                let ry = sin * x + cos * y;
                Point2::new(s.eye_center.x + s.scale * rx, s.eye_center.y + s.scale * ry)
            })
            .collect()
    }
}

// p1..p6: corner, upper lid x2, corner, lower lid x2; EAR = half-height / half-width
fn place_eye(out: &mut [(f64, f64)], cx: f64, ear: f64) {
    let w = EYE_HALF_WIDTH;
    let h = ear * w;
    out.copy_from_slice(&[
        (cx - w, 0.0),
        (cx - w / 2.0, -h),
        (cx + w / 2.0, -h),
        (cx + w, 0.0),
        (cx + w / 2.0, h),
        (cx - w / 2.0, h),
    ]);
}

// 48..59 outer lip (clockwise from left corner), 60..67 inner lip.
// The three vertical pairs are 2H apart, so MAR = 3*2H / (2*2W) = 1.5 H / W.
fn place_mouth(out: &mut [(f64, f64)], mar: f64) {
    let w = MOUTH_HALF_WIDTH;
    let h = mar * w / 1.5;
    let y = MOUTH_DROP;
    out.copy_from_slice(&[
        (-w, y),
        (-0.75 * w, y - h / 2.0),
        (-0.5 * w, y - h),
        (0.0, y - h),
        (0.5 * w, y - h),
        (0.75 * w, y - h / 2.0),
        (w, y),
        (0.75 * w, y + h / 2.0),
        (0.5 * w, y + h),
        (0.0, y + h),
        (-0.5 * w, y + h),
        (-0.75 * w, y + h / 2.0),
        (-0.6 * w, y),
        (-0.3 * w, y - h / 2.0),
        (0.0, y - h / 2.0),
        (0.3 * w, y - h / 2.0),
        (0.6 * w, y),
        (0.3 * w, y + h / 2.0),
        (0.0, y + h / 2.0),
        (-0.3 * w, y + h / 2.0),
    ]);
}

/// A deterministic stream of `len` frames at 30 fps cycling through open eyes,
/// blinks, yawns and brief dropouts. Used for throughput measurement.
pub fn cycling_stream(len: usize) -> impl Iterator<Item = LandmarkFrame> {
    (0..len).map(|i| {
        let idx = i as u64;
        let t = (i as i64 * 1000) / 30;
        let phase = i % 120;
        if phase == 119 {
            return LandmarkFrame::no_face(idx, t);
        }
        let ear = if (30..33).contains(&phase) { 0.12 } else { 0.3 };
        let mar = if (60..75).contains(&phase) { 0.8 } else { 0.3 };
        let angle = if (90..100).contains(&phase) {
            25.0
        } else {
            3.0
        };
        SyntheticFace::new(FaceSpec {
            ear_left: ear,
            ear_right: ear,
            mar,
            angle_deg: angle,
            ..Default::default()
        })
        .frame(idx, t)
    })
}
