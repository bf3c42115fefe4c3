use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use vigil_core::stream_io::apply_config;
use vigil_core::DetectorConfig;

use crate::error::CliError;

pub const CONFIG_ENV: &str = "VIGIL_CONFIG";

/// Drowsiness analysis over 68-point facial landmark streams.
#[derive(Debug, Parser)]
#[command(name = "vigil", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replay a recorded landmark stream and write events.csv / metrics.csv.
    Replay(ReplayArgs),
    /// Analyse a landmark stream arriving on standard input, printing events as they fire.
    Live(LiveArgs),
    /// Summarise an events.csv log.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Landmark stream (.vlm.jsonl), or `-` for standard input.
    pub input: PathBuf,
    /// Output directory for events.csv, metrics.csv and accuracy.csv.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Ground-truth labels (`frame_index,label` CSV) for the accuracy series.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Print nothing on success.
    #[arg(long, short)]
    pub quiet: bool,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct LiveArgs {
    /// Also write events.csv and metrics.csv into this directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Ring the terminal bell on every drowsiness alert.
    #[arg(long)]
    pub bell: bool,
    /// Suppress the closing summary line.
    #[arg(long, short)]
    pub quiet: bool,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Event log written by `replay` or `live`.
    pub events: PathBuf,
}

/// Detector overrides. Applied on top of the file named by `VIGIL_CONFIG`.
#[derive(Debug, Args, Default)]
pub struct ConfigArgs {
    /// Mean EAR below which the eyes count as closed.
    #[arg(long)]
    pub ear_threshold: Option<f64>,
    /// Closed frames before a drowsiness alert.
    #[arg(long)]
    pub drowsy_consec_frames: Option<u32>,
    /// MAR above which a yawn is reported.
    #[arg(long)]
    pub mar_threshold: Option<f64>,
    /// Head-tilt angle in degrees beyond which the face is misaligned.
    #[arg(long)]
    pub align_angle_threshold: Option<f64>,
    /// Face-less frames after which an in-progress closure is forgotten.
    #[arg(long)]
    pub face_lost_reset_frames: Option<u32>,
    /// Shortest closure, in frames, that counts as a blink.
    #[arg(long)]
    pub blink_min_frames: Option<u32>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<DetectorConfig, CliError> {
        let mut cfg = DetectorConfig::default();
        if let Some(path) = std::env::var_os(CONFIG_ENV).filter(|p| !p.is_empty()) {
            let path = PathBuf::from(path);
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::open(&path, e))?;
            cfg = apply_config(cfg, &text)?;
        }
        if let Some(v) = self.ear_threshold {
            cfg.ear_threshold = v;
        }
        if let Some(v) = self.drowsy_consec_frames {
            cfg.drowsy_consec_frames = v;
        }
        if let Some(v) = self.mar_threshold {
            cfg.mar_threshold = v;
        }
        if let Some(v) = self.align_angle_threshold {
            cfg.align_angle_threshold_deg = v;
        }
        if let Some(v) = self.face_lost_reset_frames {
            cfg.face_lost_reset_frames = v;
        }
        if let Some(v) = self.blink_min_frames {
            cfg.blink_min_frames = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
