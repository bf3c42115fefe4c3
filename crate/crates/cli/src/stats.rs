use std::fs::File;
use std::io::BufReader;

use vigil_core::stream_io::{read_event_csv, EventRecord};
use vigil_core::EventKind;

use crate::args::StatsArgs;
use crate::error::CliError;

#[derive(Debug, Default, PartialEq)]
pub struct EventStats {
    pub counts: [u64; 6],
    pub duration_ms: i64,
}

impl EventStats {
    pub fn from_records(records: &[EventRecord]) -> Self {
        let mut stats = EventStats::default();
        for r in records {
            let slot = EventKind::ALL.iter().position(|&k| k == r.kind).unwrap();
            stats.counts[slot] += 1;
        }
        let first = records.iter().map(|r| r.timestamp_ms).min();
        let last = records.iter().map(|r| r.timestamp_ms).max();
        if let (Some(a), Some(b)) = (first, last) {
            stats.duration_ms = b - a;
        }
        stats
    }

    pub fn count(&self, kind: EventKind) -> u64 {
        let slot = EventKind::ALL.iter().position(|&k| k == kind).unwrap();
        self.counts[slot]
    }

    /// Blinks per minute over the span between the first and last logged event.
    pub fn blink_rate_per_minute(&self) -> Option<f64> {
        (self.duration_ms > 0)
            .then(|| self.count(EventKind::Blink) as f64 * 60_000.0 / self.duration_ms as f64)
    }

    pub fn render(&self) -> String {
        let line = |kinds: &[EventKind]| {
            kinds
                .iter()
                .map(|&k| format!("{k}: {}", self.count(k)))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let rate = self
            .blink_rate_per_minute()
            .map_or_else(|| "n/a".to_string(), |r| format!("{r:.2}"));
        format!(
            "{}\n{}\nsession duration: {:.3} s\nblink rate: {} per minute\n",
            line(&[
                EventKind::Blink,
                EventKind::DrowsinessAlert,
                EventKind::YawnAlert,
                EventKind::MisalignmentAlert
            ]),
            line(&[EventKind::FaceLost, EventKind::FaceReacquired]),
            self.duration_ms as f64 / 1000.0,
            rate
        )
    }
}

pub fn run(args: StatsArgs) -> Result<(), CliError> {
    let file = File::open(&args.events).map_err(|e| CliError::open(&args.events, e))?;
    let records = read_event_csv(BufReader::new(file))
        .map_err(|e| CliError::csv(args.events.display(), e))?;
    print!("{}", EventStats::from_records(&records).render());
    Ok(())
}
