//! CSV artifacts: event log, per-frame metrics, accuracy series and label files.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::detector::{DetectionEvent, EventKind, FrameAssessment, StateLabel};
use crate::session::{AccuracyPoint, GroundTruthLabel};

pub const EVENT_CSV_HEADER: &str = "timestamp_ms,frame_index,event_type,ear,mar,angle_deg,detail";
pub const METRICS_CSV_HEADER: &str =
    "frame_index,timestamp_ms,face_present,ear,mar,angle_deg,state,rolling_accuracy";
pub const ACCURACY_CSV_HEADER: &str = "frame_index,accuracy";

fn fixed4(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.4}")).unwrap_or_default()
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// One event-log row without the trailing newline.
pub fn event_row(event: &DetectionEvent) -> String {
    let (ear, mar, angle) = event.trigger_values();
    format!(
        "{},{},{},{},{},{},{}",
        event.timestamp_ms,
        event.frame_index,
        event.kind,
        fixed4(ear),
        fixed4(mar),
        fixed4(angle),
        quoted(&event.detail)
    )
}

pub struct EventCsvWriter<W: Write> {
    sink: W,
}

impl<W: Write> EventCsvWriter<W> {
    pub fn new(mut sink: W) -> io::Result<Self> {
        writeln!(sink, "{EVENT_CSV_HEADER}")?;
        Ok(Self { sink })
    }

    pub fn write(&mut self, event: &DetectionEvent) -> io::Result<()> {
        writeln!(self.sink, "{}", event_row(event))
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.sink.flush()
    }
}

/// Writes the header and one row per event, in the order given.
pub fn write_event_csv<'a, W: Write>(
    events: impl IntoIterator<Item = &'a DetectionEvent>,
    sink: W,
) -> io::Result<()> {
    let mut w = EventCsvWriter::new(sink)?;
    for e in events {
        w.write(e)?;
    }
    w.flush()
}

pub struct MetricsCsvWriter<W: Write> {
    sink: W,
}

impl<W: Write> MetricsCsvWriter<W> {
    pub fn new(mut sink: W) -> io::Result<Self> {
        writeln!(sink, "{METRICS_CSV_HEADER}")?;
        Ok(Self { sink })
    }

    pub fn write(&mut self, row: &FrameAssessment, accuracy: Option<f64>) -> io::Result<()> {
        let m = row.metrics;
        writeln!(
            self.sink,
            "{},{},{},{},{},{},{},{}",
            row.frame_index,
            row.timestamp_ms,
            row.face_present,
            fixed4(m.map(|m| m.ear_mean)),
            fixed4(m.map(|m| m.mar)),
            fixed4(m.map(|m| m.angle_deg)),
            row.state,
            fixed4(accuracy)
        )
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.sink.flush()
    }
}

/// Per-frame timeseries. `accuracy` must be ordered by frame index; frames
/// without an accuracy point get an empty `rolling_accuracy` field.
pub fn write_metrics_csv<W: Write>(
    rows: &[FrameAssessment],
    accuracy: &[AccuracyPoint],
    sink: W,
) -> io::Result<()> {
    let mut w = MetricsCsvWriter::new(sink)?;
    let mut acc = accuracy.iter().peekable();
    for row in rows {
        while acc.next_if(|a| a.frame_index < row.frame_index).is_some() {}
        let value = acc
            .next_if(|a| a.frame_index == row.frame_index)
            .map(|a| a.accuracy);
        w.write(row, value)?;
    }
    w.flush()
}

pub fn write_accuracy_csv<W: Write>(series: &[AccuracyPoint], mut sink: W) -> io::Result<()> {
    writeln!(sink, "{ACCURACY_CSV_HEADER}")?;
    for p in series {
        writeln!(sink, "{},{:.4}", p.frame_index, p.accuracy)?;
    }
    sink.flush()
}

#[derive(Debug, Error)]
pub enum CsvReadError {
    #[error("line {line}: {reason}")]
    Malformed { line: u64, reason: String },
    #[error("missing or unexpected header, expected `{expected}`")]
    Header { expected: &'static str },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CsvReadError {
    fn from_csv(e: csv::Error) -> Self {
        let line = e.position().map_or(0, |p| p.line());
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CsvReadError::Io(io),
            other => CsvReadError::Malformed {
                line,
                reason: format!("{other:?}"),
            },
        }
    }
}

/// A parsed event-log row.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub timestamp_ms: i64,
    pub frame_index: u64,
    pub kind: EventKind,
    pub ear: Option<f64>,
    pub mar: Option<f64>,
    pub angle_deg: Option<f64>,
    pub detail: String,
}

impl From<&DetectionEvent> for EventRecord {
    fn from(e: &DetectionEvent) -> Self {
        let (ear, mar, angle_deg) = e.trigger_values();
        Self {
            timestamp_ms: e.timestamp_ms,
            frame_index: e.frame_index,
            kind: e.kind,
            ear,
            mar,
            angle_deg,
            detail: e.detail.clone(),
        }
    }
}

fn records<R: Read>(
    source: R,
    expected: &'static str,
) -> Result<impl Iterator<Item = (u64, Result<csv::StringRecord, CsvReadError>)>, CsvReadError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(source);
    let header = rdr.headers().map_err(CsvReadError::from_csv)?;
    let want: Vec<&str> = expected.split(',').collect();
    if header.iter().collect::<Vec<_>>() != want {
        return Err(CsvReadError::Header { expected });
    }
    Ok(rdr.into_records().map(|r| match r {
        Ok(rec) => (rec.position().map_or(0, |p| p.line()), Ok(rec)),
        Err(e) => (
            e.position().map_or(0, |p| p.line()),
            Err(CsvReadError::from_csv(e)),
        ),
    }))
}

fn malformed(line: u64, reason: impl Into<String>) -> CsvReadError {
    CsvReadError::Malformed {
        line,
        reason: reason.into(),
    }
}

fn opt_number(line: u64, field: &str, text: &str) -> Result<Option<f64>, CsvReadError> {
    if text.is_empty() {
        return Ok(None);
    }
    text.parse()
        .map(Some)
        .map_err(|_| malformed(line, format!("{field}: not a number: {text:?}")))
}

pub fn read_event_csv<R: Read>(source: R) -> Result<Vec<EventRecord>, CsvReadError> {
    let mut out = Vec::new();
    for (line, rec) in records(source, EVENT_CSV_HEADER)? {
        let rec = rec?;
        let get = |i: usize| rec.get(i).unwrap_or_default();
        let kind = get(2)
            .parse::<EventKind>()
            .map_err(|e| malformed(line, e.to_string()))?;
        out.push(EventRecord {
            timestamp_ms: get(0)
                .parse()
                .map_err(|_| malformed(line, "timestamp_ms: not an integer"))?,
            frame_index: get(1)
                .parse()
                .map_err(|_| malformed(line, "frame_index: not an integer"))?,
            kind,
            ear: opt_number(line, "ear", get(3))?,
            mar: opt_number(line, "mar", get(4))?,
            angle_deg: opt_number(line, "angle_deg", get(5))?,
            detail: get(6).to_string(),
        });
    }
    Ok(out)
}

/// Reads a `frame_index,label` ground-truth file. Frame indices must be unique.
pub fn read_labels<R: Read>(source: R) -> Result<Vec<GroundTruthLabel>, CsvReadError> {
    let mut out: Vec<GroundTruthLabel> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (line, rec) in records(source, "frame_index,label")? {
        let rec = rec?;
        let frame_index: u64 = rec
            .get(0)
            .unwrap_or_default()
            .trim()
            .parse()
            .map_err(|_| malformed(line, "frame_index: not an integer"))?;
        let label: StateLabel = rec
            .get(1)
            .unwrap_or_default()
            .trim()
            .parse()
            .map_err(|e: crate::detector::UnknownStateLabel| malformed(line, e.to_string()))?;
        if !seen.insert(frame_index) {
            return Err(malformed(
                line,
                format!("duplicate label for frame {frame_index}"),
            ));
        }
        out.push(GroundTruthLabel { frame_index, label });
    }
    Ok(out)
}

pub fn write_labels<W: Write>(labels: &[GroundTruthLabel], mut sink: W) -> io::Result<()> {
    writeln!(sink, "frame_index,label")?;
    for l in labels {
        writeln!(sink, "{},{}", l.frame_index, l.label)?;
    }
    sink.flush()
}
