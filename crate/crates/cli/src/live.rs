//! `vigil live`: frames are read from stdin on a separate thread and processed
//! in arrival order; each event is printed the moment its frame is processed.

use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;
use std::sync::mpsc;
use std::thread;

use vigil_core::session::{EVENTS_FILE, METRICS_FILE};
use vigil_core::stream_io::{EventCsvWriter, MetricsCsvWriter, StreamDecoder};
use vigil_core::{DetectionEvent, Detector, EventKind};

use crate::args::LiveArgs;
use crate::error::CliError;

enum Input {
    Line(String),
    Eof,
    Failed(io::Error),
    Interrupted,
}

/// `EVENT <kind> frame=<n> t=<ms> ear=<v|-> mar=<v|-> angle=<v|->`
pub fn event_line(event: &DetectionEvent) -> String {
    let (ear, mar, angle) = event.trigger_values();
    let v = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"));
    format!(
        "EVENT {} frame={} t={} ear={} mar={} angle={}",
        event.kind,
        event.frame_index,
        event.timestamp_ms,
        v(ear),
        v(mar),
        v(angle)
    )
}

struct Logs {
    events: EventCsvWriter<BufWriter<File>>,
    metrics: MetricsCsvWriter<BufWriter<File>>,
}

impl Logs {
    fn create(dir: &Path) -> Result<Self, CliError> {
        let io_err = |e| CliError::io(dir.display(), e);
        std::fs::create_dir_all(dir).map_err(io_err)?;
        let open = |name: &str| -> Result<BufWriter<File>, CliError> {
            File::create(dir.join(name))
                .map(BufWriter::new)
                .map_err(|e| CliError::io(dir.join(name).display(), e))
        };
        Ok(Self {
            events: EventCsvWriter::new(open(EVENTS_FILE)?).map_err(io_err)?,
            metrics: MetricsCsvWriter::new(open(METRICS_FILE)?).map_err(io_err)?,
        })
    }

    fn flush(&mut self) -> io::Result<()> {
        self.events.flush()?;
        self.metrics.flush()
    }
}

fn spawn_reader(tx: mpsc::SyncSender<Input>) {
    thread::spawn(move || {
        let mut stdin = io::stdin().lock();
        loop {
            let mut line = String::new();
            let msg = match stdin.read_line(&mut line) {
                Ok(0) => Input::Eof,
                Ok(_) => Input::Line(line),
                Err(e) => Input::Failed(e),
            };
            let last = !matches!(msg, Input::Line(_));
            if tx.send(msg).is_err() || last {
                break;
            }
        }
    });
}

pub fn run(args: LiveArgs) -> Result<(), CliError> {
    let config = args.config.resolve()?;
    let mut detector = Detector::new(config)?;
    let mut logs = args.out.as_deref().map(Logs::create).transpose()?;

    let (tx, rx) = mpsc::sync_channel(256);
    let interrupt = tx.clone();
    // Without a handler (e.g. one already installed) Ctrl-C just kills the
    // process, which loses only the unflushed tail of the logs.
    let _ = ctrlc::set_handler(move || {
        let _ = interrupt.try_send(Input::Interrupted);
    });
    spawn_reader(tx);

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut decoder = StreamDecoder::new();
    let stdout_err = |e| CliError::io("stdout", e);

    let outcome = loop {
        let line = match rx.recv() {
            Ok(Input::Line(line)) => line,
            Ok(Input::Eof | Input::Interrupted) | Err(_) => break Ok(()),
            Ok(Input::Failed(e)) => break Err(CliError::io("stdin", e)),
        };
        let frame = match decoder.feed(&line) {
            Ok(Some(frame)) => frame,
            Ok(None) => continue,
            Err(e) => break Err(CliError::stream("stdin", e)),
        };
        let result = match detector.process_frame(&frame) {
            Ok(r) => r,
            Err(e) => {
                break Err(CliError::input(
                    format!("stdin: line {}", decoder.lines_read()),
                    e,
                ))
            }
        };
        let mut written = Ok(());
        for event in &result.events {
            written = writeln!(out, "{}", event_line(event)).map_err(stdout_err);
            if written.is_err() {
                break;
            }
            if args.bell && event.kind == EventKind::DrowsinessAlert {
                // BEL on stderr keeps stdout a clean event stream
                let _ = io::stderr().write_all(b"\x07");
            }
            if let Some(logs) = logs.as_mut() {
                if let Err(e) = logs.events.write(event) {
                    written = Err(CliError::io(EVENTS_FILE, e));
                    break;
                }
            }
        }
        if let Err(e) = written.and_then(|_| out.flush().map_err(stdout_err)) {
            break Err(e);
        }
        if let Some(logs) = logs.as_mut() {
            if let Err(e) = logs.metrics.write(&result.assessment, None) {
                break Err(CliError::io(METRICS_FILE, e));
            }
        }
    };

    // logs are flushed even when the stream ended in an error
    let flushed = logs
        .as_mut()
        .map_or(Ok(()), |l| l.flush().map_err(|e| CliError::io("logs", e)));
    outcome?;
    flushed?;

    if !args.quiet {
        writeln!(out, "SUMMARY {}", detector.finalize()).map_err(stdout_err)?;
    }
    out.flush().map_err(stdout_err)
}
