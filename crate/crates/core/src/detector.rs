//! Per-frame drowsiness state machine.
//!
//! Each frame is reduced to [`FaceMetrics`] (or marked as face-absent) and
//! pushed through [`Detector::observe`], which applies, in order:
//!
//! 1. face-lost bookkeeping, with a grace period of `face_lost_reset_frames`
//!    before an in-progress closure or yawn episode is forgotten;
//! 2. the frontal-orientation gate: a face turned further than
//!    `align_angle_threshold_deg` raises one alert on entry, resets the
//!    closure run and skips eye and mouth analysis;
//! 3. eye closure: a sub-threshold run that ends before
//!    `drowsy_consec_frames` is a blink, a run that reaches it raises a
//!    single drowsiness alert;
//! 4. yawning, edge-triggered with re-arm once MAR drops back to threshold.
//!
//! Events produced by one frame come out in [`EventKind`] order.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geometry::{self, angle_between_vectors, GeometryError, Vector2};
use crate::landmarks::{self, FaceRegion, LandmarkError, LandmarkFrame};

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    pub ear_threshold: f64,
    pub drowsy_consec_frames: u32,
    pub mar_threshold: f64,
    pub align_angle_threshold_deg: f64,
    pub face_lost_reset_frames: u32,
    pub blink_min_frames: u32,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            ear_threshold: 0.25,
            drowsy_consec_frames: 48,
            mar_threshold: 0.60,
            align_angle_threshold_deg: 15.0,
            face_lost_reset_frames: 5,
            blink_min_frames: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{key} {reason}")]
pub struct ConfigError {
    pub key: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            reason: reason.into(),
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let open_unit = |v: f64| v.is_finite() && v > 0.0 && v < 1.0;
        if !open_unit(self.ear_threshold) {
            return Err(ConfigError::new("ear_threshold", "out of range (0, 1)"));
        }
        if !(self.mar_threshold.is_finite() && self.mar_threshold > 0.0) {
            return Err(ConfigError::new("mar_threshold", "must be positive"));
        }
        let a = self.align_angle_threshold_deg;
        if !(a.is_finite() && a > 0.0 && a < 90.0) {
            return Err(ConfigError::new(
                "align_angle_threshold_deg",
                "out of range (0, 90) degrees",
            ));
        }
        for (key, v) in [
            ("drowsy_consec_frames", self.drowsy_consec_frames),
            ("face_lost_reset_frames", self.face_lost_reset_frames),
            ("blink_min_frames", self.blink_min_frames),
        ] {
            if v < 1 {
                return Err(ConfigError::new(key, "must be at least 1"));
            }
        }
        if self.blink_min_frames >= self.drowsy_consec_frames {
            return Err(ConfigError::new(
                "blink_min_frames",
                "must be less than drowsy_consec_frames",
            ));
        }
        Ok(())
    }
}

/// Scalars derived from one face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceMetrics {
    pub ear_left: f64,
    pub ear_right: f64,
    pub ear_mean: f64,
    pub mar: f64,
    /// Deviation of the eye-to-mouth axis from straight down, degrees.
    pub angle_deg: f64,
}

impl FaceMetrics {
    pub fn new(ear_left: f64, ear_right: f64, mar: f64, angle_deg: f64) -> Self {
        Self {
            ear_left,
            ear_right,
            ear_mean: (ear_left + ear_right) / 2.0,
            mar,
            angle_deg,
        }
    }

    /// Both eyes at `ear`.
    pub fn uniform(ear: f64, mar: f64, angle_deg: f64) -> Self {
        Self::new(ear, ear, mar, angle_deg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum MetricsError {
    #[error(transparent)]
    Landmarks(#[from] LandmarkError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub fn compute_metrics(frame: &LandmarkFrame) -> Result<FaceMetrics, MetricsError> {
    let face = frame.face()?;
    let pick = |region| -> Vec<_> {
        landmarks::region_indices(region)
            .iter()
            .map(|&i| face[i])
            .collect()
    };
    let ear_left = geometry::eye_aspect_ratio(&pick(FaceRegion::LeftEye))?;
    let ear_right = geometry::eye_aspect_ratio(&pick(FaceRegion::RightEye))?;
    let mar = geometry::mouth_aspect_ratio(&pick(FaceRegion::MouthMarPoints))?;
    let axis = landmarks::mouth_midpoint(frame)? - landmarks::eye_midpoint(frame)?;
    let angle = angle_between_vectors(axis, Vector2::FRONTAL)?;
    Ok(FaceMetrics::new(ear_left, ear_right, mar, angle.degrees()))
}

/// Event kinds, declared in within-frame emission order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    FaceLost,
    FaceReacquired,
    MisalignmentAlert,
    Blink,
    DrowsinessAlert,
    YawnAlert,
}

impl EventKind {
    pub const ALL: [EventKind; 6] = [
        EventKind::FaceLost,
        EventKind::FaceReacquired,
        EventKind::MisalignmentAlert,
        EventKind::Blink,
        EventKind::DrowsinessAlert,
        EventKind::YawnAlert,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::FaceLost => "FACE_LOST",
            EventKind::FaceReacquired => "FACE_REACQUIRED",
            EventKind::MisalignmentAlert => "MISALIGNMENT_ALERT",
            EventKind::Blink => "BLINK",
            EventKind::DrowsinessAlert => "DROWSINESS_ALERT",
            EventKind::YawnAlert => "YAWN_ALERT",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown event type {0:?}")]
pub struct UnknownEventKind(pub String);

impl FromStr for EventKind {
    type Err = UnknownEventKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EventKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| UnknownEventKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionEvent {
    pub kind: EventKind,
    pub frame_index: u64,
    pub timestamp_ms: i64,
    /// For BLINK, the deepest frame of the closure; otherwise the frame
    /// that fired the event. Absent for face-lost events.
    pub metrics: Option<FaceMetrics>,
    pub detail: String,
}

impl DetectionEvent {
    /// The metric values this kind of event is about, as
    /// `(ear, mar, angle_deg)`. Unrelated metrics are `None`.
    pub fn trigger_values(&self) -> (Option<f64>, Option<f64>, Option<f64>) {
        let Some(m) = self.metrics else {
            return (None, None, None);
        };
        match self.kind {
            EventKind::Blink | EventKind::DrowsinessAlert => (Some(m.ear_mean), None, None),
            EventKind::YawnAlert => (None, Some(m.mar), None),
            EventKind::MisalignmentAlert => (None, None, Some(m.angle_deg)),
            EventKind::FaceLost | EventKind::FaceReacquired => (None, None, None),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateLabel {
    Active,
    EyesClosed,
    Drowsy,
    Yawning,
    Misaligned,
    FaceLost,
}

impl StateLabel {
    pub const ALL: [StateLabel; 6] = [
        StateLabel::Active,
        StateLabel::EyesClosed,
        StateLabel::Drowsy,
        StateLabel::Yawning,
        StateLabel::Misaligned,
        StateLabel::FaceLost,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StateLabel::Active => "ACTIVE",
            StateLabel::EyesClosed => "EYES_CLOSED",
            StateLabel::Drowsy => "DROWSY",
            StateLabel::Yawning => "YAWNING",
            StateLabel::Misaligned => "MISALIGNED",
            StateLabel::FaceLost => "FACE_LOST",
        }
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown state label {0:?}")]
pub struct UnknownStateLabel(pub String);

impl FromStr for StateLabel {
    type Err = UnknownStateLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StateLabel::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| UnknownStateLabel(s.to_string()))
    }
}

/// What the detector concluded about one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameAssessment {
    pub frame_index: u64,
    pub timestamp_ms: i64,
    pub face_present: bool,
    pub metrics: Option<FaceMetrics>,
    pub state: StateLabel,
}

/// Running counters. Read through [`Detector::state`].
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorState {
    pub closed_run: u32,
    pub yawn_armed: bool,
    pub drowsy_fired: bool,
    pub misaligned: bool,
    pub no_face_run: u32,
    pub blink_count: u64,
    pub frames_seen: u64,
    /// Deepest frame of the current closure run.
    closure_low: Option<FaceMetrics>,
    event_counts: [u64; 6],
    last_frame_index: Option<u64>,
}

impl Default for DetectorState {
    fn default() -> Self {
        Self {
            closed_run: 0,
            yawn_armed: true,
            drowsy_fired: false,
            misaligned: false,
            no_face_run: 0,
            blink_count: 0,
            frames_seen: 0,
            closure_low: None,
            event_counts: [0; 6],
            last_frame_index: None,
        }
    }
}

impl DetectorState {
    fn reset_closure(&mut self) {
        self.closed_run = 0;
        self.drowsy_fired = false;
        self.closure_low = None;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionSummary {
    pub frames_seen: u64,
    pub blink_count: u64,
    counts: [u64; 6],
}

impl SessionSummary {
    pub fn count(&self, kind: EventKind) -> u64 {
        self.counts[kind.slot()]
    }

    pub fn total_events(&self) -> u64 {
        self.counts.iter().sum()
    }
}

impl fmt::Display for SessionSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "frames={} blinks={}", self.frames_seen, self.blink_count)?;
        for kind in EventKind::ALL {
            write!(f, " {}={}", kind, self.count(kind))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetectorError {
    #[error("frame index {got} does not follow {previous}")]
    OutOfOrderFrame { previous: u64, got: u64 },
    #[error("frame {frame_index}: {source}")]
    Metrics {
        frame_index: u64,
        #[source]
        source: MetricsError,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameOutcome {
    pub assessment: FrameAssessment,
    pub events: Vec<DetectionEvent>,
}

/// One detector per stream. Cheap to construct; holds no shared state.
#[derive(Debug, Clone)]
pub struct Detector {
    config: DetectorConfig,
    state: DetectorState,
}

impl Detector {
    pub fn new(config: DetectorConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        Ok(Self {
            config,
            state: DetectorState::default(),
        })
    }

    pub fn config(&self) -> &DetectorConfig {
        &self.config
    }

    pub fn state(&self) -> &DetectorState {
        &self.state
    }

    /// Computes metrics for the frame and feeds them to [`Detector::observe`].
    pub fn process_frame(&mut self, frame: &LandmarkFrame) -> Result<FrameOutcome, DetectorError> {
        self.check_order(frame.frame_index)?;
        let metrics = match frame.points {
            None => None,
            Some(_) => Some(
                compute_metrics(frame).map_err(|source| DetectorError::Metrics {
                    frame_index: frame.frame_index,
                    source,
                })?,
            ),
        };
        self.observe(frame.frame_index, frame.timestamp_ms, metrics)
    }

    fn check_order(&self, frame_index: u64) -> Result<(), DetectorError> {
        match self.state.last_frame_index {
            Some(previous) if frame_index <= previous => Err(DetectorError::OutOfOrderFrame {
                previous,
                got: frame_index,
            }),
            _ => Ok(()),
        }
    }

    /// Advances the state machine by one frame given its precomputed metrics
    /// (`None` = no face).
    pub fn observe(
        &mut self,
        frame_index: u64,
        timestamp_ms: i64,
        metrics: Option<FaceMetrics>,
    ) -> Result<FrameOutcome, DetectorError> {
        self.check_order(frame_index)?;
        let cfg = &self.config;
        let st = &mut self.state;
        st.last_frame_index = Some(frame_index);
        st.frames_seen += 1;

        let mut events = Vec::new();
        let mut emit = |kind: EventKind, metrics: Option<FaceMetrics>, detail: String| {
            events.push(DetectionEvent {
                kind,
                frame_index,
                timestamp_ms,
                metrics,
                detail,
            });
        };

        let Some(m) = metrics else {
            st.no_face_run += 1;
            if st.no_face_run == 1 {
                emit(EventKind::FaceLost, None, "no face detected".into());
            }
            if st.no_face_run >= cfg.face_lost_reset_frames {
                st.reset_closure();
                st.yawn_armed = true;
            }
            return Ok(self.finish(
                frame_index,
                timestamp_ms,
                None,
                StateLabel::FaceLost,
                events,
            ));
        };

        if st.no_face_run > 0 {
            emit(
                EventKind::FaceReacquired,
                Some(m),
                format!("face back after {} frames", st.no_face_run),
            );
            st.no_face_run = 0;
        }

        if m.angle_deg > cfg.align_angle_threshold_deg {
            if !st.misaligned {
                emit(
                    EventKind::MisalignmentAlert,
                    Some(m),
                    format!(
                        "face turned beyond {:.1} deg",
                        cfg.align_angle_threshold_deg
                    ),
                );
                st.misaligned = true;
            }
            st.reset_closure();
            return Ok(self.finish(
                frame_index,
                timestamp_ms,
                Some(m),
                StateLabel::Misaligned,
                events,
            ));
        }
        st.misaligned = false;

        let mut label = StateLabel::Active;
        if m.ear_mean < cfg.ear_threshold {
            st.closed_run += 1;
            if st.closure_low.map_or(true, |low| m.ear_mean < low.ear_mean) {
                st.closure_low = Some(m);
            }
            if st.closed_run == cfg.drowsy_consec_frames && !st.drowsy_fired {
                emit(
                    EventKind::DrowsinessAlert,
                    Some(m),
                    format!("eyes closed for {} frames", st.closed_run),
                );
                st.drowsy_fired = true;
            }
            label = if st.drowsy_fired {
                StateLabel::Drowsy
            } else {
                StateLabel::EyesClosed
            };
        } else {
            let run = st.closed_run;
            if run >= cfg.blink_min_frames && run < cfg.drowsy_consec_frames {
                emit(
                    EventKind::Blink,
                    st.closure_low,
                    format!("recovered after {run} frames"),
                );
                st.blink_count += 1;
            }
            st.reset_closure();
        }

        if m.mar > cfg.mar_threshold {
            if st.yawn_armed {
                emit(
                    EventKind::YawnAlert,
                    Some(m),
                    format!("mar above {:.2}", cfg.mar_threshold),
                );
                st.yawn_armed = false;
            }
            if label == StateLabel::Active {
                label = StateLabel::Yawning;
            }
        } else {
            st.yawn_armed = true;
        }

        Ok(self.finish(frame_index, timestamp_ms, Some(m), label, events))
    }

    fn finish(
        &mut self,
        frame_index: u64,
        timestamp_ms: i64,
        metrics: Option<FaceMetrics>,
        state: StateLabel,
        events: Vec<DetectionEvent>,
    ) -> FrameOutcome {
        for e in &events {
            self.state.event_counts[e.kind.slot()] += 1;
        }
        FrameOutcome {
            assessment: FrameAssessment {
                frame_index,
                timestamp_ms,
                face_present: metrics.is_some(),
                metrics,
                state,
            },
            events,
        }
    }

    pub fn finalize(&self) -> SessionSummary {
        SessionSummary {
            frames_seen: self.state.frames_seen,
            blink_count: self.state.blink_count,
            counts: self.state.event_counts,
        }
    }
}
