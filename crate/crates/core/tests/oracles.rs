mod common;

use leaftrack::metrics::{idf1, mota};
use leaftrack::*;
use proptest::prelude::*;

use common::*;

fn cost_rows(max_r: usize, max_c: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![0.0..10.0f64, (0u8..4).prop_map(f64::from)], c), r)
    })
}

/// Frames of up to three boxes per side on a small canvas so that overlaps
/// near the IoU threshold are common.
fn labeled_seq(max_id: u64) -> impl Strategy<Value = SequenceRecord<LabeledBox>> {
    prop::collection::btree_map((1u32..6, 1..=max_id), (0.0..30.0f64, 0.0..30.0f64), 0..14).prop_map(|m| {
        let mut s = SequenceRecord::new(0);
        for ((f, id), (u, v)) in m {
            s.push(f, LabeledBox::new(id, bx(u, v, 10.0, 10.0)));
        }
        s
    })
}

proptest! {
    #[test]
    fn hungarian_matches_exhaustive(rows in cost_rows(6, 6)) {
        let m = CostMatrix::from_rows(&rows).unwrap();
        let a = hungarian(&m).unwrap();
        let (best, _) = brute_force_assignment(&rows);
        prop_assert_eq!(a.total_cost(&m), best);
        prop_assert!(a.is_partition(rows.len(), rows[0].len()));
    }

    #[test]
    fn mota_and_idf1_match_exhaustive(gt in labeled_seq(3), pred in labeled_seq(4)) {
        let oracle = oracle_match(&gt, &pred, 0.5);
        let table = match_frames(&gt, &pred, 0.5).unwrap();
        prop_assert_eq!(idf1(&table), oracle_idf1(&oracle));
        if table.num_gt() > 0 {
            prop_assert_eq!(mota(&table).unwrap(), oracle_mota(&oracle));
        } else {
            prop_assert!(mota(&table).is_err());
        }
    }

    #[test]
    fn hota_is_geometric_mean(gt in labeled_seq(3), pred in labeled_seq(4)) {
        let table = match_frames(&gt, &pred, 0.5).unwrap();
        prop_assume!(table.num_gt() > 0);
        let r = evaluate(&table).unwrap();
        prop_assert!((r.hota - (r.deta * r.assa).sqrt()).abs() <= 1e-12);
        for x in [r.hota, r.deta, r.assa, r.idf1] {
            prop_assert!((0.0..=1.0).contains(&x));
        }
        prop_assert!(r.mota <= 1.0);
    }

    #[test]
    fn renamed_ids_score_perfectly(gt in labeled_seq(3), shift in 1u64..50) {
        let pred = gt.map(|_, b| LabeledBox::new(b.id + shift, b.bbox));
        let table = match_frames(&gt, &pred, 0.5).unwrap();
        prop_assume!(table.num_gt() > 0);
        let r = evaluate(&table).unwrap();
        prop_assert_eq!((r.hota, r.mota, r.idf1), (1.0, 1.0, 1.0));
    }
}
