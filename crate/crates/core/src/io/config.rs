//! `key=value` config files. Parsing is strict: unknown keys, repeated
//! scalar keys and malformed values are errors. Missing keys keep their
//! defaults.

use std::collections::HashSet;
use std::path::Path;

use super::read_text;
use crate::error::{Error, Result};
use crate::simulator::{ForcedOcclusion, RotationEvent, ScenarioConfig};
use crate::tracker::{PrototypeMode, TrackerParams};

struct Entry<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
}

fn entries(text: &str) -> Result<Vec<Entry<'_>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| Error::parse(i + 1, format!("expected key=value, found `{line}`")))?;
        out.push(Entry { line: i + 1, key: key.trim(), value: value.trim() });
    }
    Ok(out)
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::config(key, format!("cannot parse `{value}`")))
}

fn float(key: &str, value: &str) -> Result<f64> {
    let v: f64 = num(key, value)?;
    if !v.is_finite() {
        return Err(Error::config(key, format!("`{value}` is not finite")));
    }
    Ok(v)
}

fn once<'a>(seen: &mut HashSet<&'a str>, e: &Entry<'a>) -> Result<()> {
    if !seen.insert(e.key) {
        return Err(Error::config(e.key, format!("set twice (line {})", e.line)));
    }
    Ok(())
}

/// Keys: `tau_s`, `tau_a`, `alpha`, `conf_min`, `ema_mode` (`ema` or
/// `mean`).
pub fn parse_params(text: &str) -> Result<TrackerParams> {
    let mut p = TrackerParams::default();
    let mut seen = HashSet::new();
    for e in entries(text)? {
        once(&mut seen, &e)?;
        match e.key {
            "tau_s" => p.tau_s = float(e.key, e.value)?,
            "tau_a" => p.tau_a = num(e.key, e.value)?,
            "alpha" => p.alpha = float(e.key, e.value)?,
            "conf_min" => p.conf_min = float(e.key, e.value)?,
            "ema_mode" => {
                p.mode = e.value.parse::<PrototypeMode>().map_err(|err| Error::config(e.key, err.to_string()))?
            }
            other => return Err(Error::config(other, format!("unknown key (line {})", e.line))),
        }
    }
    p.validate()?;
    Ok(p)
}

pub fn read_params(path: &Path) -> Result<TrackerParams> {
    parse_params(&read_text(path)?)
}

pub fn format_params(p: &TrackerParams) -> String {
    format!(
        "tau_s={}\ntau_a={}\nalpha={}\nconf_min={}\nema_mode={}\n",
        p.tau_s,
        p.tau_a,
        p.alpha,
        p.conf_min,
        p.mode.as_str()
    )
}

fn pair<'a>(key: &str, value: &'a str, sep: char) -> Result<(&'a str, &'a str)> {
    value
        .split_once(sep)
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| Error::config(key, format!("expected `a{sep}b`, found `{value}`")))
}

/// Scenario keys mirror the fields of [`ScenarioConfig`]. Repeatable keys:
/// `occlude=LEAF:FROM-TO` (inclusive frames), `rotation=FRAME:RADIANS` and
/// `rotation_deg=FRAME:DEGREES`.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let mut c = ScenarioConfig::default();
    let mut seen = HashSet::new();
    for e in entries(text)? {
        let (k, v) = (e.key, e.value);
        match k {
            "occlude" => {
                let (leaf, range) = pair(k, v, ':')?;
                let (from, to) = pair(k, range, '-')?;
                c.forced_occlusions.push(ForcedOcclusion {
                    leaf_id: num(k, leaf)?,
                    from: num(k, from)?,
                    to: num(k, to)?,
                });
                continue;
            }
            "rotation" | "rotation_deg" => {
                let (frame, angle) = pair(k, v, ':')?;
                let mut angle = float(k, angle)?;
                if k == "rotation_deg" {
                    angle = angle.to_radians();
                }
                c.rotation_events.push(RotationEvent { frame: num(k, frame)?, angle });
                continue;
            }
            _ => once(&mut seen, &e)?,
        }
        match k {
            "n_frames" => c.n_frames = num(k, v)?,
            "n_leaves" => c.n_leaves = num(k, v)?,
            "width" => c.width = float(k, v)?,
            "height" => c.height = float(k, v)?,
            "dim" => c.dim = num(k, v)?,
            "birth_window" => c.birth_window = num(k, v)?,
            "senescence_prob" => c.senescence_prob = float(k, v)?,
            "occlusion_prob" => c.occlusion_prob = float(k, v)?,
            "miss_prob" => c.detector.miss_prob = float(k, v)?,
            "fp_rate" => c.detector.fp_rate = float(k, v)?,
            "box_jitter_std" => c.detector.box_jitter_std = float(k, v)?,
            "conf_min" => c.detector.conf_min = float(k, v)?,
            "conf_max" => c.detector.conf_max = float(k, v)?,
            "fp_conf_min" => c.detector.fp_conf_min = float(k, v)?,
            "fp_conf_max" => c.detector.fp_conf_max = float(k, v)?,
            "noise_std" => c.embedding.noise_std = float(k, v)?,
            "drift_rate" => c.embedding.drift_rate = float(k, v)?,
            "shared_appearance" => c.embedding.shared_appearance = float(k, v)?,
            "seed" => c.seed = num(k, v)?,
            other => return Err(Error::config(other, format!("unknown key (line {})", e.line))),
        }
    }
    c.validate()?;
    Ok(c)
}

pub fn read_scenario(path: &Path) -> Result<ScenarioConfig> {
    parse_scenario(&read_text(path)?)
}
