//! Reference implementations by exhaustive search. Slow, small inputs only.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use leaftrack::{iou, BBox, LabeledBox, SequenceRecord};

/// Every injection of `0..k` into `0..n` (as `out[i] = image of i`).
pub fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                go(k, n, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(k, n, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

/// Minimum cost over all assignments of `min(rows, cols)` pairs, summed in
/// row order, with the pairs that attain it.
pub fn brute_force_assignment(cost: &[Vec<f64>]) -> (f64, Vec<(usize, usize)>) {
    let rows = cost.len();
    let cols = cost.first().map_or(0, Vec::len);
    let mut best = (f64::INFINITY, Vec::new());
    if rows <= cols {
        for inj in injections(rows, cols) {
            let pairs: Vec<(usize, usize)> = inj.iter().enumerate().map(|(r, &c)| (r, c)).collect();
            let total: f64 = pairs.iter().map(|&(r, c)| cost[r][c]).sum();
            if total < best.0 {
                best = (total, pairs);
            }
        }
    } else {
        for inj in injections(cols, rows) {
            let mut pairs: Vec<(usize, usize)> = inj.iter().enumerate().map(|(c, &r)| (r, c)).collect();
            pairs.sort_unstable();
            let total: f64 = pairs.iter().map(|&(r, c)| cost[r][c]).sum();
            if total < best.0 {
                best = (total, pairs);
            }
        }
    }
    best
}

/// Per-frame TP pairs `(gt_id, pred_id)`, FP and FN counts from exhaustive
/// search over partial matchings of pairs with IoU >= threshold, maximizing
/// summed IoU.
pub struct OracleFrame {
    pub tp: Vec<(u64, u64)>,
    pub fp: usize,
    pub fn_: usize,
}

fn best_partial_matching(gt: &[LabeledBox], pred: &[LabeledBox], thr: f64) -> Vec<(usize, usize)> {
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        gt: &[LabeledBox],
        pred: &[LabeledBox],
        thr: f64,
        used: &mut Vec<bool>,
        cur: &mut Vec<(usize, usize)>,
        cur_sum: f64,
        best: &mut (f64, Vec<(usize, usize)>),
    ) {
        if i == gt.len() {
            if cur_sum > best.0 {
                *best = (cur_sum, cur.clone());
            }
            return;
        }
        go(i + 1, gt, pred, thr, used, cur, cur_sum, best);
        for j in 0..pred.len() {
            let v = iou(&gt[i].bbox, &pred[j].bbox);
            if !used[j] && v >= thr {
                used[j] = true;
                cur.push((i, j));
                go(i + 1, gt, pred, thr, used, cur, cur_sum + v, best);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut best = (-1.0, Vec::new());
    go(0, gt, pred, thr, &mut vec![false; pred.len()], &mut Vec::new(), 0.0, &mut best);
    best.1
}

pub fn oracle_match(gt: &SequenceRecord<LabeledBox>, pred: &SequenceRecord<LabeledBox>, thr: f64) -> Vec<OracleFrame> {
    let frames: BTreeSet<u32> = gt.frame_indices().chain(pred.frame_indices()).collect();
    frames
        .into_iter()
        .map(|f| {
            let (g, p) = (gt.frame(f), pred.frame(f));
            let m = best_partial_matching(g, p, thr);
            OracleFrame {
                tp: m.iter().map(|&(i, j)| (g[i].id, p[j].id)).collect(),
                fp: p.len() - m.len(),
                fn_: g.len() - m.len(),
            }
        })
        .collect()
}

/// `1 - (FN + FP + IDSW) / GT` with IDSW counted against each object's most
/// recent matched id.
pub fn oracle_mota(frames: &[OracleFrame]) -> f64 {
    let mut last: HashMap<u64, u64> = HashMap::new();
    let (mut fn_, mut fp, mut idsw, mut gt) = (0usize, 0usize, 0usize, 0usize);
    for f in frames {
        fn_ += f.fn_;
        fp += f.fp;
        gt += f.tp.len() + f.fn_;
        for &(g, p) in &f.tp {
            if last.get(&g).is_some_and(|&q| q != p) {
                idsw += 1;
            }
            last.insert(g, p);
        }
    }
    1.0 - (fn_ + fp + idsw) as f64 / gt as f64
}

/// IDF1 maximized over every partial bijection between gt and predicted ids.
pub fn oracle_idf1(frames: &[OracleFrame]) -> f64 {
    let mut overlap: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    let (mut n_gt, mut n_pred) = (0usize, 0usize);
    for f in frames {
        n_gt += f.tp.len() + f.fn_;
        n_pred += f.tp.len() + f.fp;
        for &pair in &f.tp {
            *overlap.entry(pair).or_insert(0) += 1;
        }
    }
    if n_gt + n_pred == 0 {
        return 1.0;
    }
    let gts: Vec<u64> = overlap.keys().map(|k| k.0).collect::<BTreeSet<_>>().into_iter().collect();
    let preds: Vec<u64> = overlap.keys().map(|k| k.1).collect::<BTreeSet<_>>().into_iter().collect();
    // pad with "unassigned" slots so every partial bijection is an injection
    let slots = preds.len() + gts.len();
    let mut best = 0usize;
    for inj in injections(gts.len(), slots) {
        let idtp: usize = inj
            .iter()
            .enumerate()
            .filter(|(_, &j)| j < preds.len())
            .map(|(i, &j)| overlap.get(&(gts[i], preds[j])).copied().unwrap_or(0))
            .sum();
        best = best.max(idtp);
    }
    2.0 * best as f64 / (n_gt + n_pred) as f64
}

pub fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|k| {
            let mut up = x.to_vec();
            let mut down = x.to_vec();
            up[k] += h;
            down[k] -= h;
            (f(&up) - f(&down)) / (2.0 * h)
        })
        .collect()
}

pub fn bx(u: f64, v: f64, w: f64, h: f64) -> BBox {
    BBox::new(u, v, w, h).unwrap()
}
