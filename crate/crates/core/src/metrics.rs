//! Text-entry performance measures.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("transcribed text is empty")]
    EmptyTranscription,
    #[error("duration must be positive, got {0} s")]
    NonPositiveDuration(f64),
    #[error("end timestamp {end_ms} precedes start {start_ms}")]
    TimestampOrder { start_ms: u64, end_ms: u64 },
}

/// Words per minute: `((|T| - 1) / S) * 60 / 5`, with |T| in characters and
/// S in seconds.
pub fn words_per_minute(t_len: usize, seconds: f64) -> Result<f64, MetricsError> {
    if t_len == 0 {
        return Err(MetricsError::EmptyTranscription);
    }
    if seconds.is_nan() || seconds <= 0.0 {
        return Err(MetricsError::NonPositiveDuration(seconds));
    }
    Ok((t_len - 1) as f64 / seconds * 60.0 * (1.0 / 5.0))
}

/// Unit-cost Levenshtein distance over Unicode scalar values.
pub fn min_string_distance(p: &str, t: &str) -> usize {
    let p: Vec<char> = p.chars().collect();
    let t: Vec<char> = t.chars().collect();
    let mut prev: Vec<usize> = (0..=t.len()).collect();
    let mut cur = vec![0; t.len() + 1];
    for (i, pc) in p.iter().enumerate() {
        cur[0] = i + 1;
        for (j, tc) in t.iter().enumerate() {
            let substitute = prev[j] + usize::from(pc != tc);
            cur[j + 1] = substitute.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[t.len()]
}

/// One prescribed/transcribed pair with its timing and keystroke counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub prescribed: String,
    pub transcribed: String,
    pub start_ms: u64,
    pub end_ms: u64,
    /// Entry presses, excluding the press that ends the trial (Call/Send).
    pub press_total: u64,
    pub correction_total: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub wpm: f64,
    pub duration_s: f64,
    pub msd: usize,
    pub uncorrected_error_rate: f64,
    pub corrections: u64,
    /// Keystrokes per character; not one of the classic factors, reported
    /// as an extension.
    pub kspc: f64,
}

pub fn trial_metrics(rec: &TrialRecord) -> Result<MetricsReport, MetricsError> {
    if rec.end_ms < rec.start_ms {
        return Err(MetricsError::TimestampOrder {
            start_ms: rec.start_ms,
            end_ms: rec.end_ms,
        });
    }
    let t_len = rec.transcribed.chars().count();
    if t_len == 0 {
        return Err(MetricsError::EmptyTranscription);
    }
    let duration_s = (rec.end_ms - rec.start_ms) as f64 / 1000.0;
    let wpm = words_per_minute(t_len, duration_s)?;
    let msd = min_string_distance(&rec.prescribed, &rec.transcribed);
    let longest = rec.prescribed.chars().count().max(t_len);
    Ok(MetricsReport {
        wpm,
        duration_s,
        msd,
        uncorrected_error_rate: msd as f64 / longest as f64,
        corrections: rec.correction_total,
        kspc: rec.press_total as f64 / t_len as f64,
    })
}
