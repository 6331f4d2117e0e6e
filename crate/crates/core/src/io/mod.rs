//! Text file formats.
//!
//! All formats are line-oriented, comma-separated, LF-terminated. Floats are
//! written in shortest round-trip decimal form, so every reader recovers the
//! written values bit-for-bit. Blank lines and lines starting with `#` are
//! ignored by readers (except for the detection header).
//!
//! | file | line layout |
//! |---|---|
//! | detections | `#dim=D` header, then `frame,track_id,x,y,w,h,conf,e_1,...,e_D` |
//! | ground truth | `frame,leaf_id,x,y,w,h` |
//! | tracker results | `frame,track_id,x,y,w,h,1.0` |
//! | triplets | `plant,leaf,t_a,t_p,neg_plant,neg_leaf,t_n` |
//! | truth map | `frame,detection_index,leaf_id` |
//! | configs | `key=value` |

mod config;
mod formats;
pub mod ppm;
mod report;

pub use config::{format_params, parse_params, parse_scenario, read_params, read_scenario};
pub use formats::{
    format_detections, format_gt, format_results, format_triplets, format_truth_map, parse_detections, parse_gt,
    parse_results, parse_triplets, read_detections, read_gt, read_results, read_triplets, write_detections, write_gt,
    write_results, write_triplets, write_truth_map,
};
pub use report::{format_leaf_matrix, format_report_human, format_report_machine};

use std::path::Path;

use crate::error::{Error, Result};

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_f64(line: usize, field: &str, what: &str) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| Error::parse(line, format!("{what}: `{field}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("{what}: `{field}` is not finite")));
    }
    Ok(v)
}

fn parse_int<T: std::str::FromStr>(line: usize, field: &str, what: &str) -> Result<T> {
    field.trim().parse().map_err(|_| Error::parse(line, format!("{what}: `{field}` is not a valid integer")))
}
