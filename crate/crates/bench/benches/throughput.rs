use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use vigil_bench::{synthetic_metrics, synthetic_stream_bytes};
use vigil_core::synth::cycling_stream;
use vigil_core::{run_replay, Detector, DetectorConfig, LandmarkFrame};

const FRAMES: usize = 100_000;

fn detector_only(c: &mut Criterion) {
    let metrics = synthetic_metrics(FRAMES);
    let mut group = c.benchmark_group("detector");
    group.throughput(Throughput::Elements(FRAMES as u64));
    group.sample_size(20);
    group.bench_function("observe", |b| {
        b.iter(|| {
            let mut det = Detector::new(DetectorConfig::default()).unwrap();
            for (i, m) in metrics.iter().enumerate() {
                black_box(det.observe(i as u64, 0, *m).unwrap());
            }
            det.finalize()
        })
    });

    let frames: Vec<LandmarkFrame> = cycling_stream(FRAMES).collect();
    group.bench_function("process_frame", |b| {
        b.iter(|| {
            let mut det = Detector::new(DetectorConfig::default()).unwrap();
            for f in &frames {
                black_box(det.process_frame(f).unwrap());
            }
            det.finalize()
        })
    });
    group.finish();
}

fn replay(c: &mut Criterion) {
    let mut group = c.benchmark_group("replay");
    group.sample_size(10);
    for n in [10_000, FRAMES] {
        let bytes = synthetic_stream_bytes(n);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &bytes, |b, bytes| {
            b.iter(|| run_replay(&bytes[..], DetectorConfig::default(), None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, detector_only, replay);
criterion_main!(benches);
