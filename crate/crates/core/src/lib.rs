//! Drowsiness analysis over 68-point facial landmark streams.
//!
//! Frames flow through four stages:
//!
//! * [`stream_io`] parses `.vlm.jsonl` landmark streams and writes CSV logs;
//! * [`landmarks`] picks the eye and mouth regions out of each frame;
//! * [`geometry`] reduces them to eye/mouth aspect ratios and a head-tilt angle;
//! * [`detector`] turns the per-frame metrics into blink, drowsiness, yawn,
//!   misalignment and face-lost events.
//!
//! [`session`] ties these together for whole-stream replays.

pub mod detector;
pub mod geometry;
pub mod landmarks;
pub mod session;
pub mod stream_io;
pub mod synth;

pub use detector::{
    compute_metrics, ConfigError, DetectionEvent, Detector, DetectorConfig, DetectorError,
    DetectorState, EventKind, FaceMetrics, FrameAssessment, FrameOutcome, SessionSummary,
    StateLabel,
};
pub use geometry::{AngleDeg, GeometryError, Point2, Vector2};
pub use landmarks::{FaceRegion, LandmarkFrame, LANDMARK_COUNT};
pub use session::{
    run_replay, AccuracyPoint, GroundTruthLabel, Session, SessionError, SessionReport,
};
pub use stream_io::{StreamError, StreamHeader};
