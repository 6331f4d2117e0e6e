use std::fmt::Write as _;

use crate::metrics::{daily_accuracy, LeafCell, LeafMatrix, MetricReport};

/// Percentages with two decimals, then the raw counts.
pub fn format_report_human(r: &MetricReport) -> String {
    let c = &r.counts;
    let mut out = String::new();
    let _ = writeln!(out, "{:>8} {:>8} {:>8} {:>8} {:>8}", "HOTA", "DetA", "AssA", "MOTA", "IDF1");
    let _ = writeln!(
        out,
        "{:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2}",
        100.0 * r.hota,
        100.0 * r.deta,
        100.0 * r.assa,
        100.0 * r.mota,
        100.0 * r.idf1
    );
    let _ = writeln!(
        out,
        "GT {}  TP {}  FP {}  FN {}  IDSW {}  IDTP {}  IDFP {}  IDFN {}",
        c.gt, c.tp, c.fp, c.fn_, c.idsw, c.idtp, c.idfp, c.idfn
    );
    out
}

/// One `key=value` per line; scores as fractions in shortest round-trip form.
pub fn format_report_machine(r: &MetricReport) -> String {
    let c = &r.counts;
    format!(
        "hota={}\ndeta={}\nassa={}\nmota={}\nidf1={}\ntp={}\nfp={}\nfn={}\nidsw={}\nidtp={}\nidfp={}\nidfn={}\ngt={}\n",
        r.hota, r.deta, r.assa, r.mota, r.idf1, c.tp, c.fp, c.fn_, c.idsw, c.idtp, c.idfp, c.idfn, c.gt
    )
}

/// Header `leaf_id,<frame>...`, one row per leaf with `1` (correct), `0`
/// (failure) or an empty cell (absent), then a `daily_accuracy` row.
pub fn format_leaf_matrix(m: &LeafMatrix) -> String {
    let mut out = String::from("leaf_id");
    for f in &m.frames {
        let _ = write!(out, ",{f}");
    }
    out.push('\n');
    for (leaf, row) in m.leaf_ids.iter().zip(&m.cells) {
        let _ = write!(out, "{leaf}");
        for cell in row {
            out.push_str(match cell {
                LeafCell::Correct => ",1",
                LeafCell::Failure => ",0",
                LeafCell::Absent => ",",
            });
        }
        out.push('\n');
    }
    out.push_str("daily_accuracy");
    for acc in daily_accuracy(m) {
        match acc {
            Some(a) => {
                let _ = write!(out, ",{a}");
            }
            None => out.push(','),
        }
    }
    out.push('\n');
    out
}
