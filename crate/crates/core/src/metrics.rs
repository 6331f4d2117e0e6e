//! Ground-truth to prediction matching and the MOT scores built on it:
//! HOTA, DetA, AssA (single localization threshold), MOTA and IDF1, plus
//! the per-leaf daily accuracy matrix.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::assignment::{hungarian, CostMatrix};
use crate::error::{Error, Result};
use crate::geometry::iou;
use crate::sequence::{GtAnnotation, LabeledBox, SequenceRecord};

pub const DEFAULT_IOU_THRESHOLD: f64 = 0.5;
pub const DEFAULT_LEAF_IOU: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TpMatch {
    pub gt_id: u64,
    pub pred_id: u64,
    pub iou: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrameMatches {
    pub frame: u32,
    pub tp: Vec<TpMatch>,
    pub fp: Vec<u64>,
    pub fn_: Vec<u64>,
}

/// Per-frame TP/FP/FN classification of one sequence, frames ascending.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatchTable {
    pub frames: Vec<FrameMatches>,
}

impl MatchTable {
    pub fn tp(&self) -> usize {
        self.frames.iter().map(|f| f.tp.len()).sum()
    }

    pub fn fp(&self) -> usize {
        self.frames.iter().map(|f| f.fp.len()).sum()
    }

    pub fn fn_(&self) -> usize {
        self.frames.iter().map(|f| f.fn_.len()).sum()
    }

    pub fn num_gt(&self) -> usize {
        self.tp() + self.fn_()
    }

    pub fn num_pred(&self) -> usize {
        self.tp() + self.fp()
    }
}

fn check_unique(rec: &SequenceRecord<LabeledBox>) -> Result<()> {
    for (frame, items) in rec.frames() {
        let mut seen = BTreeSet::new();
        for it in items {
            if !seen.insert(it.id) {
                return Err(Error::DuplicateId { frame, id: it.id });
            }
        }
    }
    Ok(())
}

/// Matches predictions to ground truth frame by frame.
///
/// Within a frame, pairs with IoU at or above `iou_threshold` are eligible;
/// the assignment maximizes the summed IoU of eligible pairs. Matched pairs
/// are TPs, leftover predictions FPs, leftover ground truth FNs.
pub fn match_frames(
    gt: &SequenceRecord<GtAnnotation>,
    pred: &SequenceRecord<LabeledBox>,
    iou_threshold: f64,
) -> Result<MatchTable> {
    if !(iou_threshold > 0.0 && iou_threshold <= 1.0) {
        return Err(Error::InvalidParams(format!("iou threshold must lie in (0, 1], got {iou_threshold}")));
    }
    check_unique(gt)?;
    check_unique(pred)?;
    let frames: BTreeSet<u32> = gt.frame_indices().chain(pred.frame_indices()).collect();
    let mut table = MatchTable::default();
    for frame in frames {
        let mut g: Vec<&LabeledBox> = gt.frame(frame).iter().collect();
        let mut p: Vec<&LabeledBox> = pred.frame(frame).iter().collect();
        g.sort_by_key(|b| b.id);
        p.sort_by_key(|b| b.id);
        let ious = CostMatrix::from_fn(g.len(), p.len(), |r, c| iou(&g[r].bbox, &p[c].bbox));
        let cost = CostMatrix::from_fn(g.len(), p.len(), |r, c| {
            let v = ious.get(r, c);
            if v >= iou_threshold {
                1.0 - v
            } else {
                1.0
            }
        });
        let a = hungarian(&cost)?;
        let mut fm = FrameMatches { frame, ..Default::default() };
        let mut g_used = vec![false; g.len()];
        let mut p_used = vec![false; p.len()];
        for (r, c) in a.pairs {
            let v = ious.get(r, c);
            if v >= iou_threshold {
                fm.tp.push(TpMatch { gt_id: g[r].id, pred_id: p[c].id, iou: v });
                g_used[r] = true;
                p_used[c] = true;
            }
        }
        fm.fn_ = g.iter().zip(&g_used).filter(|(_, u)| !**u).map(|(b, _)| b.id).collect();
        fm.fp = p.iter().zip(&p_used).filter(|(_, u)| !**u).map(|(b, _)| b.id).collect();
        table.frames.push(fm);
    }
    Ok(table)
}

/// `TP / (TP + FP + FN)`; 1.0 for an empty table.
pub fn det_a(m: &MatchTable) -> f64 {
    let (tp, fp, fn_) = (m.tp(), m.fp(), m.fn_());
    if tp + fp + fn_ == 0 {
        return 1.0;
    }
    tp as f64 / (tp + fp + fn_) as f64
}

/// gt id to pred id correspondence fixed by majority vote over TP matches.
///
/// Pairs are taken greedily by descending TP count; equal counts go to the
/// pair established first in time, then to lower ids.
pub fn association_bijection(m: &MatchTable) -> BTreeMap<u64, u64> {
    let mut stats: BTreeMap<(u64, u64), (usize, u32)> = BTreeMap::new();
    for f in &m.frames {
        for t in &f.tp {
            let e = stats.entry((t.gt_id, t.pred_id)).or_insert((0, f.frame));
            e.0 += 1;
        }
    }
    let mut ranked: Vec<((u64, u64), (usize, u32))> = stats.into_iter().collect();
    ranked.sort_by(|a, b| b.1 .0.cmp(&a.1 .0).then(a.1 .1.cmp(&b.1 .1)).then(a.0.cmp(&b.0)));
    let mut gt_to_pred = BTreeMap::new();
    let mut pred_taken = BTreeSet::new();
    for ((g, p), _) in ranked {
        if !gt_to_pred.contains_key(&g) && !pred_taken.contains(&p) {
            gt_to_pred.insert(g, p);
            pred_taken.insert(p);
        }
    }
    gt_to_pred
}

/// Per-step association terms `(TPA, FPA, FNA)` for every frame with at
/// least one TP.
///
/// A TP agreeing with [`association_bijection`] is a TPA. A disagreeing TP
/// counts once: as an FPA when its predicted id is bound to another gt id,
/// otherwise as an FNA.
pub fn association_terms(m: &MatchTable) -> Vec<(usize, usize, usize)> {
    let bij = association_bijection(m);
    let bound_preds: BTreeSet<u64> = bij.values().copied().collect();
    m.frames
        .iter()
        .filter(|f| !f.tp.is_empty())
        .map(|f| {
            let (mut tpa, mut fpa, mut fna) = (0, 0, 0);
            for t in &f.tp {
                if bij.get(&t.gt_id) == Some(&t.pred_id) {
                    tpa += 1;
                } else if bound_preds.contains(&t.pred_id) {
                    fpa += 1;
                } else {
                    fna += 1;
                }
            }
            (tpa, fpa, fna)
        })
        .collect()
}

fn step_ratio((tpa, fpa, fna): (usize, usize, usize)) -> f64 {
    tpa as f64 / (tpa + fpa + fna) as f64
}

/// Mean over TP-bearing frames of `TPA / (TPA + FPA + FNA)`; 0.0 without
/// any TP.
pub fn ass_a(m: &MatchTable) -> f64 {
    let terms = association_terms(m);
    if terms.is_empty() {
        return 0.0;
    }
    terms.into_iter().map(step_ratio).sum::<f64>() / m.frames.iter().filter(|f| !f.tp.is_empty()).count() as f64
}

pub fn hota_from(deta: f64, assa: f64) -> f64 {
    (deta * assa).sqrt()
}

pub fn hota(m: &MatchTable) -> f64 {
    hota_from(det_a(m), ass_a(m))
}

/// TPs whose predicted id differs from the id of the same gt object's most
/// recent earlier TP.
pub fn id_switches(m: &MatchTable) -> usize {
    let mut last: HashMap<u64, u64> = HashMap::new();
    let mut switches = 0;
    for f in &m.frames {
        for t in &f.tp {
            if let Some(prev) = last.insert(t.gt_id, t.pred_id) {
                if prev != t.pred_id {
                    switches += 1;
                }
            }
        }
    }
    switches
}

fn mota_from(fn_: usize, fp: usize, idsw: usize, gt: usize) -> Result<f64> {
    if gt == 0 {
        return Err(Error::EmptyGroundTruth);
    }
    Ok(1.0 - (fn_ + fp + idsw) as f64 / gt as f64)
}

/// `1 - (FN + FP + IDSW) / GT`, unclamped.
pub fn mota(m: &MatchTable) -> Result<f64> {
    mota_from(m.fn_(), m.fp(), id_switches(m), m.num_gt())
}

/// Optimal gt id to pred id bijection maximizing the number of frames in
/// which the two are TP-matched. Returns `(gt_id, pred_id, overlap)` for
/// pairs with nonzero overlap.
pub fn identity_bijection(m: &MatchTable) -> Vec<(u64, u64, usize)> {
    let mut overlap: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    for f in &m.frames {
        for t in &f.tp {
            *overlap.entry((t.gt_id, t.pred_id)).or_insert(0) += 1;
        }
    }
    if overlap.is_empty() {
        return Vec::new();
    }
    let gts: Vec<u64> = overlap.keys().map(|k| k.0).collect::<BTreeSet<_>>().into_iter().collect();
    let preds: Vec<u64> = overlap.keys().map(|k| k.1).collect::<BTreeSet<_>>().into_iter().collect();
    let cost = CostMatrix::from_fn(gts.len(), preds.len(), |r, c| {
        -(overlap.get(&(gts[r], preds[c])).copied().unwrap_or(0) as f64)
    });
    let a = hungarian(&cost).expect("overlap counts are finite");
    a.pairs
        .into_iter()
        .filter_map(|(r, c)| {
            let n = overlap.get(&(gts[r], preds[c])).copied().unwrap_or(0);
            (n > 0).then_some((gts[r], preds[c], n))
        })
        .collect()
}

/// `(IDTP, IDFP, IDFN)` under [`identity_bijection`].
pub fn identity_counts(m: &MatchTable) -> (usize, usize, usize) {
    let idtp: usize = identity_bijection(m).iter().map(|p| p.2).sum();
    (idtp, m.num_pred() - idtp, m.num_gt() - idtp)
}

fn idf1_from(idtp: usize, idfp: usize, idfn: usize) -> f64 {
    let denom = 2 * idtp + idfp + idfn;
    if denom == 0 {
        return 1.0;
    }
    2.0 * idtp as f64 / denom as f64
}

/// `2 IDTP / (2 IDTP + IDFP + IDFN)`; 1.0 when there is neither ground
/// truth nor prediction.
pub fn idf1(m: &MatchTable) -> f64 {
    let (idtp, idfp, idfn) = identity_counts(m);
    idf1_from(idtp, idfp, idfn)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MetricCounts {
    pub gt: usize,
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub idsw: usize,
    pub idtp: usize,
    pub idfp: usize,
    pub idfn: usize,
}

/// Scores as fractions in `[0, 1]` (MOTA may be negative).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub hota: f64,
    pub deta: f64,
    pub assa: f64,
    pub mota: f64,
    pub idf1: f64,
    pub counts: MetricCounts,
}

pub fn evaluate(m: &MatchTable) -> Result<MetricReport> {
    evaluate_many(std::slice::from_ref(m))
}

/// Pools counts over sequences; AssA averages the per-step terms of every
/// step of every sequence. Identity bijections stay per sequence.
pub fn evaluate_many(tables: &[MatchTable]) -> Result<MetricReport> {
    let mut c = MetricCounts::default();
    let mut ratio_sum = 0.0;
    let mut steps = 0usize;
    for m in tables {
        c.tp += m.tp();
        c.fp += m.fp();
        c.fn_ += m.fn_();
        c.gt += m.num_gt();
        c.idsw += id_switches(m);
        let (idtp, idfp, idfn) = identity_counts(m);
        c.idtp += idtp;
        c.idfp += idfp;
        c.idfn += idfn;
        for term in association_terms(m) {
            ratio_sum += step_ratio(term);
            steps += 1;
        }
    }
    let deta = if c.tp + c.fp + c.fn_ == 0 { 1.0 } else { c.tp as f64 / (c.tp + c.fp + c.fn_) as f64 };
    let assa = if steps == 0 { 0.0 } else { ratio_sum / steps as f64 };
    Ok(MetricReport {
        hota: hota_from(deta, assa),
        deta,
        assa,
        mota: mota_from(c.fn_, c.fp, c.idsw, c.gt)?,
        idf1: idf1_from(c.idtp, c.idfp, c.idfn),
        counts: c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafCell {
    Correct,
    Failure,
    Absent,
}

/// Rows are gt leaf ids, columns are frames.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafMatrix {
    pub leaf_ids: Vec<u64>,
    pub frames: Vec<u32>,
    pub cells: Vec<Vec<LeafCell>>,
}

/// A cell is correct when the leaf is TP-matched that frame to its
/// persistent prediction (the IDF1 bijection partner) with IoU at least
/// `iou_min`; absent when the leaf is not annotated; failure otherwise.
pub fn leaf_accuracy_matrix(m: &MatchTable, iou_min: f64) -> LeafMatrix {
    let partner: HashMap<u64, u64> = identity_bijection(m).into_iter().map(|(g, p, _)| (g, p)).collect();
    let leaf_ids: Vec<u64> = m
        .frames
        .iter()
        .flat_map(|f| f.tp.iter().map(|t| t.gt_id).chain(f.fn_.iter().copied()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let row_of: HashMap<u64, usize> = leaf_ids.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let frames: Vec<u32> = m.frames.iter().map(|f| f.frame).collect();
    let mut cells = vec![vec![LeafCell::Absent; frames.len()]; leaf_ids.len()];
    for (col, f) in m.frames.iter().enumerate() {
        for g in &f.fn_ {
            cells[row_of[g]][col] = LeafCell::Failure;
        }
        for t in &f.tp {
            let ok = partner.get(&t.gt_id) == Some(&t.pred_id) && t.iou >= iou_min;
            cells[row_of[&t.gt_id]][col] = if ok { LeafCell::Correct } else { LeafCell::Failure };
        }
    }
    LeafMatrix { leaf_ids, frames, cells }
}

/// Per frame: `correct / (correct + failure)`; `None` when no leaf is
/// annotated in that frame.
pub fn daily_accuracy(matrix: &LeafMatrix) -> Vec<Option<f64>> {
    (0..matrix.frames.len())
        .map(|col| {
            let (mut ok, mut bad) = (0usize, 0usize);
            for row in &matrix.cells {
                match row[col] {
                    LeafCell::Correct => ok += 1,
                    LeafCell::Failure => bad += 1,
                    LeafCell::Absent => {}
                }
            }
            (ok + bad > 0).then(|| ok as f64 / (ok + bad) as f64)
        })
        .collect()
}
