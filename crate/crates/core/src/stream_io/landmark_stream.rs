//! The `.vlm.jsonl` landmark stream.
//!
//! ```text
//! {"version":1,"source":"cam0","fps_hint":30.0}
//! {"frame_index":0,"timestamp_ms":0,"points":[x0,y0,...,x67,y67]}
//! {"frame_index":1,"timestamp_ms":33,"points":null}
//! ```

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::geometry::Point2;
use crate::landmarks::{validate_frame, LandmarkFrame, LANDMARK_COUNT};

pub const STREAM_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamHeader {
    pub version: u32,
    pub source: String,
    #[serde(deserialize_with = "required_option")]
    pub fps_hint: Option<f64>,
}

impl StreamHeader {
    pub fn new(source: impl Into<String>, fps_hint: Option<f64>) -> Self {
        Self {
            version: STREAM_VERSION,
            source: source.into(),
            fps_hint,
        }
    }
}

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("malformed header: {reason}")]
    MalformedHeader { reason: String },
    #[error("line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("line {line}: frame_index {got} does not increase past {previous}")]
    NonMonotoneFrameIndex {
        line: usize,
        previous: u64,
        got: u64,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl StreamError {
    /// 1-based line number the error refers to, if any.
    pub fn line(&self) -> Option<usize> {
        match self {
            StreamError::MalformedHeader { .. } => Some(1),
            StreamError::MalformedRecord { line, .. }
            | StreamError::NonMonotoneFrameIndex { line, .. } => Some(*line),
            StreamError::Io(_) => None,
        }
    }
}

// A present-but-null field is None; a missing field is an error.
fn required_option<'de, D, T>(d: D) -> Result<Option<T>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    Option::<T>::deserialize(d)
}

#[derive(Deserialize)]
struct RawRecord {
    frame_index: u64,
    timestamp_ms: i64,
    #[serde(deserialize_with = "required_option")]
    points: Option<Vec<f64>>,
}

/// Line-at-a-time decoder. The first non-blank line must be the header.
#[derive(Debug, Default)]
pub struct StreamDecoder {
    line: usize,
    header: Option<StreamHeader>,
    last: Option<(u64, i64)>,
}

impl StreamDecoder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn header(&self) -> Option<&StreamHeader> {
        self.header.as_ref()
    }

    /// Number of lines consumed so far.
    pub fn lines_read(&self) -> usize {
        self.line
    }

    /// Decodes one line (without its terminator). Returns `Ok(None)` for the
    /// header line and for blank lines.
    pub fn feed(&mut self, line: &str) -> Result<Option<LandmarkFrame>, StreamError> {
        self.line += 1;
        let text = line.trim();
        if text.is_empty() {
            return Ok(None);
        }
        if self.header.is_none() {
            self.header = Some(parse_header(text)?);
            return Ok(None);
        }
        let frame = self.parse_record(text)?;
        Ok(Some(frame))
    }

    fn parse_record(&mut self, text: &str) -> Result<LandmarkFrame, StreamError> {
        let line = self.line;
        let malformed = |reason: String| StreamError::MalformedRecord { line, reason };

        let raw: RawRecord = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
        let points = match raw.points {
            None => None,
            Some(coords) => {
                if coords.len() != 2 * LANDMARK_COUNT {
                    return Err(malformed(format!(
                        "expected {} coordinates, got {}",
                        2 * LANDMARK_COUNT,
                        coords.len()
                    )));
                }
                Some(
                    coords
                        .chunks_exact(2)
                        .map(|c| Point2::new(c[0], c[1]))
                        .collect(),
                )
            }
        };
        let frame = LandmarkFrame {
            frame_index: raw.frame_index,
            timestamp_ms: raw.timestamp_ms,
            points,
        };
        if let Err(violations) = validate_frame(&frame) {
            let reasons: Vec<_> = violations.iter().map(ToString::to_string).collect();
            return Err(malformed(reasons.join("; ")));
        }
        if let Some((previous, last_ts)) = self.last {
            if frame.frame_index <= previous {
                return Err(StreamError::NonMonotoneFrameIndex {
                    line,
                    previous,
                    got: frame.frame_index,
                });
            }
            if frame.timestamp_ms < last_ts {
                return Err(malformed(format!(
                    "timestamp_ms {} is earlier than {}",
                    frame.timestamp_ms, last_ts
                )));
            }
        }
        self.last = Some((frame.frame_index, frame.timestamp_ms));
        Ok(frame)
    }
}

fn parse_header(text: &str) -> Result<StreamHeader, StreamError> {
    let malformed = |reason: String| StreamError::MalformedHeader { reason };
    let header: StreamHeader = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    if header.version != STREAM_VERSION {
        return Err(malformed(format!("unsupported version {}", header.version)));
    }
    if let Some(fps) = header.fps_hint {
        if !(fps.is_finite() && fps > 0.0) {
            return Err(malformed(format!("fps_hint must be positive, got {fps}")));
        }
    }
    Ok(header)
}

/// Lazily yields frames from a stream whose header has already been read.
/// Stops after the first error.
pub struct FrameReader<R> {
    reader: R,
    decoder: StreamDecoder,
    buf: String,
    done: bool,
}

impl<R: BufRead> FrameReader<R> {
    pub fn header(&self) -> &StreamHeader {
        self.decoder
            .header()
            .expect("header parsed on construction")
    }

    pub fn lines_read(&self) -> usize {
        self.decoder.lines_read()
    }
}

impl<R: BufRead> Iterator for FrameReader<R> {
    type Item = Result<LandmarkFrame, StreamError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.buf.clear();
            match self.reader.read_line(&mut self.buf) {
                Ok(0) => self.done = true,
                Ok(_) => match self.decoder.feed(&self.buf) {
                    Ok(Some(frame)) => return Some(Ok(frame)),
                    Ok(None) => {}
                    Err(e) => {
                        self.done = true;
                        return Some(Err(e));
                    }
                },
                Err(e) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
            }
        }
        None
    }
}

/// Reads the header and returns it along with a lazy frame iterator.
pub fn parse_landmark_stream<R: BufRead>(
    mut reader: R,
) -> Result<(StreamHeader, FrameReader<R>), StreamError> {
    let mut decoder = StreamDecoder::new();
    let mut buf = String::new();
    while decoder.header().is_none() {
        buf.clear();
        if reader.read_line(&mut buf)? == 0 {
            return Err(StreamError::MalformedHeader {
                reason: "missing header line".into(),
            });
        }
        if decoder.feed(&buf)?.is_some() {
            unreachable!("first record is always the header");
        }
    }
    let header = decoder.header().cloned().expect("loop exits once set");
    Ok((
        header,
        FrameReader {
            reader,
            decoder,
            buf,
            done: false,
        },
    ))
}

/// Incremental writer for the landmark stream format.
pub struct StreamWriter<W: Write> {
    sink: W,
    line: String,
}

impl<W: Write> StreamWriter<W> {
    pub fn new(mut sink: W, header: &StreamHeader) -> io::Result<Self> {
        serde_json::to_writer(&mut sink, header)?;
        sink.write_all(b"\n")?;
        Ok(Self {
            sink,
            line: String::with_capacity(2048),
        })
    }

    pub fn write_frame(&mut self, frame: &LandmarkFrame) -> io::Result<()> {
        self.line.clear();
        let _ = write!(
            self.line,
            "{{\"frame_index\":{},\"timestamp_ms\":{},\"points\":",
            frame.frame_index, frame.timestamp_ms
        );
        match &frame.points {
            None => self.line.push_str("null"),
            Some(points) => {
                self.line.push('[');
                for (i, p) in points.iter().enumerate() {
                    if i > 0 {
                        self.line.push(',');
                    }
                    let _ = write!(self.line, "{:.6},{:.6}", p.x, p.y);
                }
                self.line.push(']');
            }
        }
        self.line.push_str("}\n");
        self.sink.write_all(self.line.as_bytes())
    }

    pub fn into_inner(mut self) -> io::Result<W> {
        self.sink.flush()?;
        Ok(self.sink)
    }
}

pub fn write_landmark_stream<'a, W: Write>(
    header: &StreamHeader,
    frames: impl IntoIterator<Item = &'a LandmarkFrame>,
    sink: W,
) -> io::Result<()> {
    let mut writer = StreamWriter::new(sink, header)?;
    for frame in frames {
        writer.write_frame(frame)?;
    }
    writer.into_inner().map(drop)
}
