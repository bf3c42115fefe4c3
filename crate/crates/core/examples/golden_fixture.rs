//! Writes the scripted 200-frame replay fixture and its ground-truth labels.
//!
//! ```text
//! cargo run -p vigil-core --example golden_fixture -- <stream.vlm.jsonl> <labels.csv>
//! ```
//!
//! Script at 30 fps with default thresholds:
//!
//! | frames  | pose                         | expected event          |
//! |---------|------------------------------|-------------------------|
//! | 20-22   | eyes closed                  | BLINK at 23             |
//! | 40-41   | eyes closed                  | BLINK at 42             |
//! | 60-109  | eyes closed (50 frames)      | DROWSINESS_ALERT at 107 |
//! | 125-134 | mouth open                   | YAWN_ALERT at 125       |
//! | 150-152 | eyes closed                  | BLINK at 153            |
//! | 165-179 | head turned 30 degrees       | MISALIGNMENT_ALERT at 165 |

use std::fs::File;
use std::io::BufWriter;

use vigil_core::stream_io::{write_labels, write_landmark_stream, StreamHeader};
use vigil_core::synth::{FaceSpec, SyntheticFace};
use vigil_core::{GroundTruthLabel, StateLabel};

fn main() -> std::io::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let [stream_path, labels_path] = args.as_slice() else {
        eprintln!("usage: golden_fixture <stream.vlm.jsonl> <labels.csv>");
        std::process::exit(2);
    };

    let mut frames = Vec::new();
    let mut labels = Vec::new();
    for i in 0..200u64 {
        // small deterministic wobble so the metrics are not perfectly flat
        let wobble = ((i * 7919) % 13) as f64 / 1000.0;
        let closed = matches!(i, 20..=22 | 40..=41 | 60..=109 | 150..=152);
        let yawning = (125..=134).contains(&i);
        let turned = (165..=179).contains(&i);
        let ear = if closed { 0.10 + wobble } else { 0.31 + wobble };
        let spec = FaceSpec {
            ear_left: ear,
            ear_right: ear - 0.005,
            mar: if yawning {
                0.80 + wobble
            } else {
                0.30 + wobble
            },
            angle_deg: if turned { 30.0 } else { 2.0 + 10.0 * wobble },
            eye_center: vigil_core::Point2::new(320.0 + wobble * 100.0, 200.0),
            scale: 1.2,
        };
        frames.push(SyntheticFace::new(spec).frame(i, (i as i64 * 1000) / 30));

        let label = if turned {
            StateLabel::Misaligned
        } else if (60..=109).contains(&i) {
            if i >= 107 {
                StateLabel::Drowsy
            } else {
                StateLabel::EyesClosed
            }
        } else if closed {
            StateLabel::EyesClosed
        } else if yawning {
            StateLabel::Yawning
        } else {
            StateLabel::Active
        };
        labels.push(GroundTruthLabel {
            frame_index: i,
            label,
        });
    }

    let header = StreamHeader::new("synthetic golden script", Some(30.0));
    write_landmark_stream(&header, &frames, BufWriter::new(File::create(stream_path)?))?;
    write_labels(&labels, BufWriter::new(File::create(labels_path)?))?;
    Ok(())
}
