//! `key = value` detector configuration files.
//!
//! ```text
//! # thresholds
//! ear_threshold = 0.22
//! drowsy_consec_frames = 40
//! ```
//!
//! Blank lines and `#` comments are ignored. Unlisted keys keep their defaults.

use crate::detector::{ConfigError, DetectorConfig};

pub const CONFIG_KEYS: [&str; 6] = [
    "ear_threshold",
    "drowsy_consec_frames",
    "mar_threshold",
    "align_angle_threshold_deg",
    "face_lost_reset_frames",
    "blink_min_frames",
];

/// Parses a config file on top of [`DetectorConfig::default`].
pub fn load_config(source: &str) -> Result<DetectorConfig, ConfigError> {
    apply_config(DetectorConfig::default(), source)
}

/// Parses a config file on top of `base` and validates the result.
pub fn apply_config(base: DetectorConfig, source: &str) -> Result<DetectorConfig, ConfigError> {
    let mut pairs = Vec::new();
    for (n, raw) in source.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::new(
                format!("line {}", n + 1),
                "expected `key = value`",
            ));
        };
        pairs.push((key.trim(), value.trim()));
    }
    apply_pairs(base, pairs)
}

pub fn apply_pairs<'a>(
    mut config: DetectorConfig,
    pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> Result<DetectorConfig, ConfigError> {
    for (key, value) in pairs {
        set_key(&mut config, key, value)?;
    }
    config.validate()?;
    Ok(config)
}

fn set_key(config: &mut DetectorConfig, key: &str, value: &str) -> Result<(), ConfigError> {
    fn real(key: &str, v: &str) -> Result<f64, ConfigError> {
        v.parse::<f64>()
            .map_err(|_| ConfigError::new(key, format!("expects a number, got {v:?}")))
    }
    fn count(key: &str, v: &str) -> Result<u32, ConfigError> {
        match v.parse::<i64>() {
            Ok(n) if n < 1 => Err(ConfigError::new(key, "must be at least 1")),
            Ok(n) => u32::try_from(n).map_err(|_| ConfigError::new(key, "too large")),
            Err(_) => Err(ConfigError::new(
                key,
                format!("expects a whole number of frames, got {v:?}"),
            )),
        }
    }
    match key {
        "ear_threshold" => config.ear_threshold = real(key, value)?,
        "drowsy_consec_frames" => config.drowsy_consec_frames = count(key, value)?,
        "mar_threshold" => config.mar_threshold = real(key, value)?,
        "align_angle_threshold_deg" | "align_angle_threshold" => {
            config.align_angle_threshold_deg = real(key, value)?
        }
        "face_lost_reset_frames" => config.face_lost_reset_frames = count(key, value)?,
        "blink_min_frames" => config.blink_min_frames = count(key, value)?,
        _ => return Err(ConfigError::new(key, "is not a known setting")),
    }
    Ok(())
}
