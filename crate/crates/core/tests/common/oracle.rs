//! Offline reference for the detector's event output.
//!
//! Instead of stepping a state machine, this looks at the whole metric
//! sequence at once and enumerates maximal runs:
//!
//! * face-lost runs give FACE_LOST at their first frame and FACE_REACQUIRED
//!   at the next face frame;
//! * a face-lost run of at least `face_lost_reset_frames` splits the stream
//!   into independent segments; shorter runs are transparent;
//! * misalignment alerts fire on each aligned-to-misaligned transition
//!   between consecutive face frames;
//! * inside a segment, misaligned frames split eye analysis into stretches;
//!   each maximal sub-threshold EAR run inside a stretch is a drowsiness alert
//!   (at its `drowsy_consec_frames`-th frame) when long enough, else a blink
//!   at the following frame of the stretch, if the stretch continues;
//! * inside a segment, misaligned frames are dropped for mouth analysis and
//!   each maximal above-threshold MAR run yields one yawn at its start.
#![allow(dead_code)]

use rand::Rng;
use vigil_core::{DetectorConfig, EventKind, FaceMetrics};

pub type Observation = Option<FaceMetrics>;

/// `(position in sequence, kind)`, sorted the way the detector emits them.
pub fn oracle_events(cfg: &DetectorConfig, seq: &[Observation]) -> Vec<(usize, EventKind)> {
    let mut out = Vec::new();

    // face-lost runs and segment boundaries
    let mut segments: Vec<Vec<usize>> = vec![Vec::new()];
    let mut i = 0;
    while i < seq.len() {
        if seq[i].is_some() {
            segments.last_mut().unwrap().push(i);
            i += 1;
            continue;
        }
        let start = i;
        while i < seq.len() && seq[i].is_none() {
            i += 1;
        }
        out.push((start, EventKind::FaceLost));
        if i < seq.len() {
            out.push((i, EventKind::FaceReacquired));
        }
        if (i - start) as u32 >= cfg.face_lost_reset_frames {
            segments.push(Vec::new());
        }
    }

    let misaligned = |p: usize| seq[p].unwrap().angle_deg > cfg.align_angle_threshold_deg;

    // misalignment transitions across all face frames
    let faces: Vec<usize> = (0..seq.len()).filter(|&p| seq[p].is_some()).collect();
    for (k, &p) in faces.iter().enumerate() {
        if misaligned(p) && (k == 0 || !misaligned(faces[k - 1])) {
            out.push((p, EventKind::MisalignmentAlert));
        }
    }

    for segment in &segments {
        // eyes: aligned stretches
        for stretch in segment.split(|&p| misaligned(p)) {
            let closed = |p: usize| seq[p].unwrap().ear_mean < cfg.ear_threshold;
            let mut k = 0;
            while k < stretch.len() {
                if !closed(stretch[k]) {
                    k += 1;
                    continue;
                }
                let start = k;
                while k < stretch.len() && closed(stretch[k]) {
                    k += 1;
                }
                let len = (k - start) as u32;
                if len >= cfg.drowsy_consec_frames {
                    let at = start + cfg.drowsy_consec_frames as usize - 1;
                    out.push((stretch[at], EventKind::DrowsinessAlert));
                } else if len >= cfg.blink_min_frames && k < stretch.len() {
                    out.push((stretch[k], EventKind::Blink));
                }
            }
        }

        // mouth: aligned frames only, misaligned ones are invisible
        let aligned: Vec<usize> = segment
            .iter()
            .copied()
            .filter(|&p| !misaligned(p))
            .collect();
        for (k, &p) in aligned.iter().enumerate() {
            let open = |q: usize| seq[q].unwrap().mar > cfg.mar_threshold;
            if open(p) && (k == 0 || !open(aligned[k - 1])) {
                out.push((p, EventKind::YawnAlert));
            }
        }
    }

    out.sort();
    out
}

/// A random detector config within the valid domain.
pub fn random_config<R: Rng>(rng: &mut R) -> DetectorConfig {
    let drowsy = rng.gen_range(2..=60);
    DetectorConfig {
        ear_threshold: [0.2, 0.25, 0.3][rng.gen_range(0..3)],
        drowsy_consec_frames: drowsy,
        mar_threshold: [0.5, 0.6][rng.gen_range(0..2)],
        align_angle_threshold_deg: [10.0, 15.0][rng.gen_range(0..2)],
        face_lost_reset_frames: rng.gen_range(1..=8),
        blink_min_frames: rng.gen_range(1..=3.min(drowsy - 1)),
    }
}

/// A random observation sequence of at most `max_len` frames built from
/// piecewise-constant spans, so that threshold crossings, long closures,
/// misalignment spans and face-loss gaps all occur. Span values sometimes sit
/// exactly on the thresholds.
pub fn random_sequence<R: Rng>(
    rng: &mut R,
    cfg: &DetectorConfig,
    max_len: usize,
) -> Vec<Observation> {
    let len = rng.gen_range(0..=max_len);
    let mut seq = Vec::with_capacity(len);
    let mut ear = 0.3;
    let mut mar = 0.3;
    let mut angle = 0.0;
    while seq.len() < len {
        let span = match rng.gen_range(0..10) {
            0 => rng.gen_range(
                cfg.drowsy_consec_frames as usize - 1..cfg.drowsy_consec_frames as usize + 20,
            ),
            1..=5 => rng.gen_range(1..6),
            _ => rng.gen_range(1..25),
        };
        let choice = rng.gen_range(0..12);
        if choice == 0 {
            let gap = rng.gen_range(1..=cfg.face_lost_reset_frames as usize + 2);
            seq.extend(std::iter::repeat(None).take(gap));
            continue;
        }
        match choice {
            1..=4 => {
                ear = match rng.gen_range(0..8) {
                    0 => cfg.ear_threshold,
                    1..=3 => rng.gen_range(0.02..cfg.ear_threshold),
                    _ => rng.gen_range(cfg.ear_threshold..0.45),
                }
            }
            5..=7 => {
                mar = match rng.gen_range(0..6) {
                    0 => cfg.mar_threshold,
                    1 | 2 => rng.gen_range(cfg.mar_threshold..1.2),
                    _ => rng.gen_range(0.05..cfg.mar_threshold),
                }
            }
            8 | 9 => {
                angle = match rng.gen_range(0..5) {
                    0 => cfg.align_angle_threshold_deg,
                    1 | 2 => rng.gen_range(cfg.align_angle_threshold_deg..60.0),
                    _ => rng.gen_range(0.0..cfg.align_angle_threshold_deg),
                }
            }
            _ => {}
        }
        for _ in 0..span {
            // per-frame jitter on EAR keeps runs from being perfectly flat
            let e = if ear == cfg.ear_threshold || rng.gen_bool(0.7) {
                ear
            } else {
                (ear + rng.gen_range(-0.01..0.01)).max(0.0)
            };
            seq.push(Some(FaceMetrics::new(e, e, mar, angle)));
        }
    }
    seq.truncate(len);
    seq
}

/// Streams `seq` through a fresh detector, using positions as frame indices.
pub fn run_detector(
    cfg: &DetectorConfig,
    seq: &[Observation],
) -> (
    Vec<vigil_core::DetectionEvent>,
    Vec<vigil_core::FrameAssessment>,
) {
    let mut det = vigil_core::Detector::new(cfg.clone()).expect("valid config");
    let mut events = Vec::new();
    let mut rows = Vec::with_capacity(seq.len());
    for (i, obs) in seq.iter().enumerate() {
        let out = det
            .observe(i as u64, i as i64 * 33, *obs)
            .expect("in-order frames");
        events.extend(out.events);
        rows.push(out.assessment);
    }
    (events, rows)
}

pub fn positions(events: &[vigil_core::DetectionEvent]) -> Vec<(usize, EventKind)> {
    events
        .iter()
        .map(|e| (e.frame_index as usize, e.kind))
        .collect()
}
