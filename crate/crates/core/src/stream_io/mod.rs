//! Serialization: landmark streams, CSV logs and configuration files.

mod config;
mod csv_log;
mod landmark_stream;

pub use config::{apply_config, apply_pairs, load_config, CONFIG_KEYS};
pub use csv_log::{
    event_row, read_event_csv, read_labels, write_accuracy_csv, write_event_csv, write_labels,
    write_metrics_csv, CsvReadError, EventCsvWriter, EventRecord, MetricsCsvWriter,
    ACCURACY_CSV_HEADER, EVENT_CSV_HEADER, METRICS_CSV_HEADER,
};
pub use landmark_stream::{
    parse_landmark_stream, write_landmark_stream, FrameReader, StreamDecoder, StreamError,
    StreamHeader, StreamWriter, STREAM_VERSION,
};
