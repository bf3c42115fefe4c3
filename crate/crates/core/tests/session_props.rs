use proptest::prelude::*;
use vigil_core::session::{rolling_accuracy, run_replay, Session};
use vigil_core::stream_io::{parse_landmark_stream, write_landmark_stream, StreamHeader};
use vigil_core::synth::{FaceSpec, SyntheticFace};
use vigil_core::{DetectorConfig, GroundTruthLabel, LandmarkFrame, StateLabel};

/// Face frames driven by a coarse script: each step holds one pose for a few frames.
fn scripted_frames(script: &[(u8, usize)]) -> Vec<LandmarkFrame> {
    let mut frames = Vec::new();
    for &(pose, n) in script {
        for _ in 0..n {
            let i = frames.len() as u64;
            let t = i as i64 * 33;
            let spec = match pose % 5 {
                0 => Some(FaceSpec::default()),
                1 => Some(FaceSpec {
                    ear_left: 0.1,
                    ear_right: 0.12,
                    ..Default::default()
                }),
                2 => Some(FaceSpec {
                    mar: 0.9,
                    ..Default::default()
                }),
                3 => Some(FaceSpec {
                    angle_deg: 25.0,
                    ..Default::default()
                }),
                _ => None,
            };
            frames.push(match spec {
                Some(s) => SyntheticFace::new(s).frame(i, t),
                None => LandmarkFrame::no_face(i, t),
            });
        }
    }
    frames
}

fn encode(frames: &[LandmarkFrame]) -> Vec<u8> {
    let mut out = Vec::new();
    write_landmark_stream(&StreamHeader::new("prop", Some(30.0)), frames, &mut out).unwrap();
    out
}

fn script() -> impl Strategy<Value = Vec<(u8, usize)>> {
    prop::collection::vec((0u8..5, 1usize..60), 0..20)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn replay_is_repeatable(s in script()) {
        let bytes = encode(&scripted_frames(&s));
        let a = run_replay(&bytes[..], DetectorConfig::default(), None).unwrap();
        let b = run_replay(&bytes[..], DetectorConfig::default(), None).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.metrics_rows.len(), scripted_frames(&s).len());
    }

    #[test]
    fn split_stream_equals_whole(s in script(), cut in any::<prop::sample::Index>()) {
        let frames = scripted_frames(&s);
        let whole = run_replay(&encode(&frames)[..], DetectorConfig::default(), None).unwrap();

        let k = if frames.is_empty() { 0 } else { cut.index(frames.len() + 1) };
        let mut session = Session::new(DetectorConfig::default()).unwrap();
        for half in [&frames[..k], &frames[k..]] {
            let bytes = encode(half);
            let (_, reader) = parse_landmark_stream(&bytes[..]).unwrap();
            for frame in reader {
                session.push(&frame.unwrap()).unwrap();
            }
        }
        prop_assert_eq!(session.into_report(None).unwrap(), whole);
    }

    #[test]
    fn accuracy_series_covers_labeled_frames(s in script(), every in 1usize..5) {
        let frames = scripted_frames(&s);
        let labels: Vec<_> = frames
            .iter()
            .step_by(every)
            .map(|f| GroundTruthLabel { frame_index: f.frame_index, label: StateLabel::Active })
            .collect();
        let report = run_replay(&encode(&frames)[..], DetectorConfig::default(), Some(&labels)).unwrap();
        let series = report.accuracy_series.unwrap();
        prop_assert_eq!(series.len(), labels.len());
        prop_assert!(series.iter().all(|p| (0.0..=1.0).contains(&p.accuracy)));
        prop_assert_eq!(&series, &rolling_accuracy(&report.metrics_rows, &labels, 30));
    }
}
