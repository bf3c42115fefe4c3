//! Shared inputs for the throughput benchmarks.

use vigil_core::stream_io::{write_landmark_stream, StreamHeader};
use vigil_core::synth::cycling_stream;
use vigil_core::{FaceMetrics, LandmarkFrame};

/// Encoded `.vlm.jsonl` bytes for `frames` synthetic frames at 30 fps.
pub fn synthetic_stream_bytes(frames: usize) -> Vec<u8> {
    let frames: Vec<LandmarkFrame> = cycling_stream(frames).collect();
    let mut out = Vec::with_capacity(frames.len() * 1600);
    write_landmark_stream(&StreamHeader::new("bench", Some(30.0)), &frames, &mut out)
        .expect("writing to a Vec cannot fail");
    out
}

/// Pre-computed metrics for the same cycle, for detector-only timing.
pub fn synthetic_metrics(frames: usize) -> Vec<Option<FaceMetrics>> {
    cycling_stream(frames)
        .map(|f| {
            f.points
                .as_ref()
                .map(|_| vigil_core::compute_metrics(&f).expect("valid face"))
        })
        .collect()
}
