use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use super::{content_lines, parse_f64, parse_int, read_text, write_text};
use crate::embedding::{Embedding, LeafTime, TripletSpec};
use crate::error::{Error, Result};
use crate::geometry::BBox;
use crate::sequence::{GtAnnotation, LabeledBox, SequenceRecord};
use crate::tracker::{Detection, FrameResult};

fn split(line: &str) -> Vec<&str> {
    line.split(',').map(str::trim).collect()
}

fn expect_fields(line: usize, fields: &[&str], n: usize) -> Result<()> {
    if fields.len() != n {
        return Err(Error::parse(line, format!("expected {n} fields, found {}", fields.len())));
    }
    Ok(())
}

fn parse_box(line: usize, f: &[&str]) -> Result<BBox> {
    let x = parse_f64(line, f[0], "x")?;
    let y = parse_f64(line, f[1], "y")?;
    let w = parse_f64(line, f[2], "w")?;
    let h = parse_f64(line, f[3], "h")?;
    BBox::new(x, y, w, h).map_err(|e| Error::parse(line, e.to_string()))
}

fn push_box(out: &mut String, b: &BBox) {
    let _ = write!(out, "{},{},{},{}", b.u(), b.v(), b.w(), b.h());
}

// ---- detections ----

pub fn format_detections(seq: &SequenceRecord<Detection>, dim: usize) -> Result<String> {
    let mut out = format!("#dim={dim}\n");
    for (frame, dets) in seq.frames() {
        for d in dets {
            if d.embedding.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: d.embedding.dim() });
            }
            let _ = write!(out, "{frame},-1,");
            push_box(&mut out, &d.bbox);
            let _ = write!(out, ",{}", d.conf);
            for x in d.embedding.as_slice() {
                let _ = write!(out, ",{x}");
            }
            out.push('\n');
        }
    }
    Ok(out)
}

/// Parses a detection file. Returns the sequence and the header dimension.
pub fn parse_detections(text: &str) -> Result<(SequenceRecord<Detection>, usize)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `#dim=D` header"))?;
    let dim: usize = header
        .strip_prefix("#dim=")
        .ok_or_else(|| Error::parse(hline, "missing `#dim=D` header"))
        .and_then(|d| parse_int(hline, d, "dim"))?;
    if dim == 0 {
        return Err(Error::parse(hline, "dim must be >= 1"));
    }
    let mut seq = SequenceRecord::new(0);
    let mut last_frame = None;
    for (ln, l) in lines {
        if l.starts_with('#') {
            continue;
        }
        let f = split(l);
        if f.len() != 7 + dim {
            return Err(Error::parse(
                ln,
                format!("expected {} embedding values under #dim={dim}, found {}", dim, f.len().saturating_sub(7)),
            ));
        }
        let frame: u32 = parse_int(ln, f[0], "frame")?;
        if last_frame.is_some_and(|p| frame < p) {
            return Err(Error::parse(ln, format!("frame {frame} follows frame {}", last_frame.unwrap())));
        }
        last_frame = Some(frame);
        let _track: i64 = parse_int(ln, f[1], "track_id")?;
        let bbox = parse_box(ln, &f[2..6])?;
        let conf = parse_f64(ln, f[6], "conf")?;
        let values = f[7..].iter().map(|v| parse_f64(ln, v, "embedding")).collect::<Result<Vec<_>>>()?;
        let embedding = Embedding::new(values).map_err(|e| Error::parse(ln, e.to_string()))?;
        seq.push(frame, Detection { bbox, conf, embedding });
    }
    Ok((seq, dim))
}

pub fn read_detections(path: &Path) -> Result<(SequenceRecord<Detection>, usize)> {
    parse_detections(&read_text(path)?)
}

pub fn write_detections(seq: &SequenceRecord<Detection>, dim: usize, path: &Path) -> Result<()> {
    write_text(path, &format_detections(seq, dim)?)
}

// ---- ground truth ----

pub fn format_gt(gt: &SequenceRecord<GtAnnotation>) -> String {
    let mut out = String::new();
    for (frame, anns) in gt.frames() {
        let mut anns = anns.to_vec();
        anns.sort_by_key(|a| a.id);
        for a in anns {
            let _ = write!(out, "{frame},{},", a.id);
            push_box(&mut out, &a.bbox);
            out.push('\n');
        }
    }
    out
}

pub fn parse_gt(text: &str) -> Result<SequenceRecord<GtAnnotation>> {
    let mut seq = SequenceRecord::new(0);
    let mut seen = HashSet::new();
    for (ln, l) in content_lines(text) {
        let f = split(l);
        expect_fields(ln, &f, 6)?;
        let frame: u32 = parse_int(ln, f[0], "frame")?;
        let id: u64 = parse_int(ln, f[1], "leaf_id")?;
        if id == 0 {
            return Err(Error::parse(ln, "leaf_id must be >= 1"));
        }
        if !seen.insert((frame, id)) {
            return Err(Error::parse(ln, format!("leaf {id} annotated twice in frame {frame}")));
        }
        seq.push(frame, LabeledBox::new(id, parse_box(ln, &f[2..6])?));
    }
    Ok(seq)
}

pub fn read_gt(path: &Path) -> Result<SequenceRecord<GtAnnotation>> {
    parse_gt(&read_text(path)?)
}

pub fn write_gt(gt: &SequenceRecord<GtAnnotation>, path: &Path) -> Result<()> {
    write_text(path, &format_gt(gt))
}

// ---- tracker results ----

/// Matched and newly created tracks of every frame, sorted by
/// `(frame, track_id)`.
pub fn format_results(results: &[FrameResult]) -> String {
    let mut rows: Vec<(u32, LabeledBox)> = results
        .iter()
        .flat_map(|r| r.labeled().into_iter().map(move |a| (r.frame, LabeledBox::new(a.track_id, a.bbox))))
        .collect();
    rows.sort_by_key(|(f, b)| (*f, b.id));
    let mut out = String::new();
    for (frame, b) in rows {
        let _ = write!(out, "{frame},{},", b.id);
        push_box(&mut out, &b.bbox);
        out.push_str(",1.0\n");
    }
    out
}

pub fn parse_results(text: &str) -> Result<SequenceRecord<LabeledBox>> {
    let mut seq = SequenceRecord::new(0);
    let mut seen = HashSet::new();
    for (ln, l) in content_lines(text) {
        let f = split(l);
        expect_fields(ln, &f, 7)?;
        let frame: u32 = parse_int(ln, f[0], "frame")?;
        let id: u64 = parse_int(ln, f[1], "track_id")?;
        if !seen.insert((frame, id)) {
            return Err(Error::parse(ln, format!("track {id} appears twice in frame {frame}")));
        }
        let bbox = parse_box(ln, &f[2..6])?;
        parse_f64(ln, f[6], "score")?;
        seq.push(frame, LabeledBox::new(id, bbox));
    }
    Ok(seq)
}

pub fn read_results(path: &Path) -> Result<SequenceRecord<LabeledBox>> {
    parse_results(&read_text(path)?)
}

pub fn write_results(results: &[FrameResult], path: &Path) -> Result<()> {
    write_text(path, &format_results(results))
}

// ---- triplets ----

pub fn format_triplets(triplets: &[TripletSpec]) -> String {
    let mut out = String::new();
    for t in triplets {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            t.anchor.plant_id,
            t.anchor.leaf_id,
            t.anchor.t,
            t.positive.t,
            t.negative.plant_id,
            t.negative.leaf_id,
            t.negative.t
        );
    }
    out
}

pub fn parse_triplets(text: &str) -> Result<Vec<TripletSpec>> {
    let mut out = Vec::new();
    for (ln, l) in content_lines(text) {
        let f = split(l);
        expect_fields(ln, &f, 7)?;
        let plant_id: u64 = parse_int(ln, f[0], "plant")?;
        let leaf_id: u64 = parse_int(ln, f[1], "leaf")?;
        let anchor = LeafTime { plant_id, leaf_id, t: parse_int(ln, f[2], "t_a")? };
        let positive = LeafTime { plant_id, leaf_id, t: parse_int(ln, f[3], "t_p")? };
        let negative = LeafTime {
            plant_id: parse_int(ln, f[4], "neg_plant")?,
            leaf_id: parse_int(ln, f[5], "neg_leaf")?,
            t: parse_int(ln, f[6], "t_n")?,
        };
        out.push(TripletSpec { anchor, positive, negative });
    }
    Ok(out)
}

pub fn read_triplets(path: &Path) -> Result<Vec<TripletSpec>> {
    parse_triplets(&read_text(path)?)
}

pub fn write_triplets(triplets: &[TripletSpec], path: &Path) -> Result<()> {
    write_text(path, &format_triplets(triplets))
}

// ---- truth map ----

/// `frame,detection_index,leaf_id` for every detection that came from a
/// leaf. False positives are omitted.
pub fn format_truth_map(map: &SequenceRecord<Option<u64>>) -> String {
    let mut out = String::new();
    for (frame, items) in map.frames() {
        for (i, leaf) in items.iter().enumerate() {
            if let Some(leaf) = leaf {
                let _ = writeln!(out, "{frame},{i},{leaf}");
            }
        }
    }
    out
}

pub fn write_truth_map(map: &SequenceRecord<Option<u64>>, path: &Path) -> Result<()> {
    write_text(path, &format_truth_map(map))
}
