//! Whole-stream runs: replay a landmark stream through one detector, collect
//! events and per-frame assessments, and score them against ground truth.

use std::collections::{HashMap, VecDeque};
use std::fs::File;
use std::io::{self, BufRead, BufWriter};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::detector::{
    ConfigError, DetectionEvent, Detector, DetectorConfig, DetectorError, FrameAssessment,
    SessionSummary, StateLabel,
};
use crate::landmarks::LandmarkFrame;
use crate::stream_io::{
    parse_landmark_stream, write_accuracy_csv, write_event_csv, write_metrics_csv, StreamError,
};

pub const DEFAULT_ACCURACY_WINDOW: usize = 30;

pub const EVENTS_FILE: &str = "events.csv";
pub const METRICS_FILE: &str = "metrics.csv";
pub const ACCURACY_FILE: &str = "accuracy.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundTruthLabel {
    pub frame_index: u64,
    pub label: StateLabel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyPoint {
    pub frame_index: u64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionReport {
    pub summary: SessionSummary,
    pub events: Vec<DetectionEvent>,
    pub metrics_rows: Vec<FrameAssessment>,
    /// Present only when ground-truth labels were supplied.
    pub accuracy_series: Option<Vec<AccuracyPoint>>,
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error("line {line}: {source}")]
    Detector {
        line: usize,
        #[source]
        source: DetectorError,
    },
    #[error("label for frame {frame_index} has no matching frame in the stream")]
    UnknownLabelFrame { frame_index: u64 },
}

/// Accumulates detector output for one stream.
#[derive(Debug, Clone)]
pub struct Session {
    detector: Detector,
    events: Vec<DetectionEvent>,
    rows: Vec<FrameAssessment>,
}

impl Session {
    pub fn new(config: DetectorConfig) -> Result<Self, ConfigError> {
        Ok(Self {
            detector: Detector::new(config)?,
            events: Vec::new(),
            rows: Vec::new(),
        })
    }

    /// Processes one frame and returns the events it produced.
    pub fn push(&mut self, frame: &LandmarkFrame) -> Result<&[DetectionEvent], DetectorError> {
        let outcome = self.detector.process_frame(frame)?;
        let first = self.events.len();
        self.events.extend(outcome.events);
        self.rows.push(outcome.assessment);
        Ok(&self.events[first..])
    }

    pub fn detector(&self) -> &Detector {
        &self.detector
    }

    pub fn events(&self) -> &[DetectionEvent] {
        &self.events
    }

    pub fn into_report(
        self,
        labels: Option<&[GroundTruthLabel]>,
    ) -> Result<SessionReport, SessionError> {
        let accuracy_series = match labels {
            None => None,
            Some(labels) => {
                for l in labels {
                    if self
                        .rows
                        .binary_search_by_key(&l.frame_index, |r| r.frame_index)
                        .is_err()
                    {
                        return Err(SessionError::UnknownLabelFrame {
                            frame_index: l.frame_index,
                        });
                    }
                }
                Some(rolling_accuracy(
                    &self.rows,
                    labels,
                    DEFAULT_ACCURACY_WINDOW,
                ))
            }
        };
        Ok(SessionReport {
            summary: self.detector.finalize(),
            events: self.events,
            metrics_rows: self.rows,
            accuracy_series,
        })
    }
}

/// Replays a whole landmark stream.
pub fn run_replay<R: BufRead>(
    source: R,
    config: DetectorConfig,
    labels: Option<&[GroundTruthLabel]>,
) -> Result<SessionReport, SessionError> {
    let mut session = Session::new(config)?;
    let (_header, mut frames) = parse_landmark_stream(source)?;
    while let Some(frame) = frames.next() {
        let frame = frame?;
        session
            .push(&frame)
            .map_err(|source| SessionError::Detector {
                line: frames.lines_read(),
                source,
            })?;
    }
    session.into_report(labels)
}

/// Label-match rate over the last `window` labeled frames, evaluated at every
/// labeled frame. Unlabeled frames are skipped; a `window` of 0 acts as 1.
pub fn rolling_accuracy(
    rows: &[FrameAssessment],
    labels: &[GroundTruthLabel],
    window: usize,
) -> Vec<AccuracyPoint> {
    let window = window.max(1);
    let truth: HashMap<u64, StateLabel> = labels.iter().map(|l| (l.frame_index, l.label)).collect();
    let mut recent: VecDeque<bool> = VecDeque::with_capacity(window);
    let mut hits = 0usize;
    let mut series = Vec::with_capacity(labels.len());
    for row in rows {
        let Some(&label) = truth.get(&row.frame_index) else {
            continue;
        };
        if recent.len() == window && recent.pop_front() == Some(true) {
            hits -= 1;
        }
        let hit = row.state == label;
        recent.push_back(hit);
        hits += usize::from(hit);
        series.push(AccuracyPoint {
            frame_index: row.frame_index,
            accuracy: hits as f64 / recent.len() as f64,
        });
    }
    series
}

fn create(dir: &Path, name: &str) -> io::Result<(PathBuf, BufWriter<File>)> {
    let path = dir.join(name);
    let file = File::create(&path)?;
    Ok((path, BufWriter::new(file)))
}

/// Writes `metrics.csv` and, for labeled sessions, `accuracy.csv` into `dir`.
pub fn emit_plot_data(report: &SessionReport, dir: &Path) -> io::Result<Vec<PathBuf>> {
    let accuracy = report.accuracy_series.as_deref().unwrap_or(&[]);
    let (metrics_path, sink) = create(dir, METRICS_FILE)?;
    write_metrics_csv(&report.metrics_rows, accuracy, sink)?;
    let mut written = vec![metrics_path];
    if let Some(series) = &report.accuracy_series {
        let (path, sink) = create(dir, ACCURACY_FILE)?;
        write_accuracy_csv(series, sink)?;
        written.push(path);
    }
    Ok(written)
}

/// `events.csv` plus everything [`emit_plot_data`] writes.
pub fn write_report(report: &SessionReport, dir: &Path) -> io::Result<Vec<PathBuf>> {
    let (events_path, sink) = create(dir, EVENTS_FILE)?;
    write_event_csv(&report.events, sink)?;
    let mut written = vec![events_path];
    written.extend(emit_plot_data(report, dir)?);
    Ok(written)
}
