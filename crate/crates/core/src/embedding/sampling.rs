use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sequence::{GtAnnotation, SequenceRecord};

/// Attempts per triplet before the corpus is declared unsatisfiable.
pub const MAX_ATTEMPTS: usize = 1000;

/// One annotated leaf instance: a leaf of a plant at a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeafTime {
    pub plant_id: u64,
    pub leaf_id: u64,
    pub t: u32,
}

impl LeafTime {
    fn same_leaf(&self, other: &LeafTime) -> bool {
        self.plant_id == other.plant_id && self.leaf_id == other.leaf_id
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripletSpec {
    pub anchor: LeafTime,
    pub positive: LeafTime,
    pub negative: LeafTime,
}

/// Where negatives are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingStrategy {
    /// Any other leaf anywhere in the corpus, including other plants.
    CrossPlantFlexible,
    /// Another leaf of the anchor's plant, any frame.
    IntraPlantFullCycle,
    /// Another leaf of the anchor's plant within `delta_t` frames of the
    /// anchor.
    IntraPlantTemporalWindow { delta_t: u32 },
}

impl SamplingStrategy {
    fn validate(&self) -> Result<()> {
        if let SamplingStrategy::IntraPlantTemporalWindow { delta_t: 0 } = self {
            return Err(Error::InvalidParams("temporal window delta_t must be >= 1".into()));
        }
        Ok(())
    }

    /// Checks the negative rule for this strategy.
    pub fn admits_negative(&self, anchor: &LeafTime, negative: &LeafTime) -> bool {
        match *self {
            SamplingStrategy::CrossPlantFlexible => !anchor.same_leaf(negative),
            SamplingStrategy::IntraPlantFullCycle => {
                anchor.plant_id == negative.plant_id && anchor.leaf_id != negative.leaf_id
            }
            SamplingStrategy::IntraPlantTemporalWindow { delta_t } => {
                anchor.plant_id == negative.plant_id
                    && anchor.leaf_id != negative.leaf_id
                    && anchor.t.abs_diff(negative.t) <= delta_t
            }
        }
    }
}

impl TripletSpec {
    /// True when the triplet obeys the positive rule and `strategy`'s
    /// negative rule.
    pub fn is_valid(&self, strategy: &SamplingStrategy) -> bool {
        self.anchor.same_leaf(&self.positive)
            && self.anchor.t != self.positive.t
            && strategy.admits_negative(&self.anchor, &self.negative)
    }
}

struct CorpusIndex {
    all: Vec<LeafTime>,
    by_plant: BTreeMap<u64, Vec<LeafTime>>,
    times: BTreeMap<(u64, u64), Vec<u32>>,
}

impl CorpusIndex {
    fn build(corpus: &[SequenceRecord<GtAnnotation>]) -> Self {
        let mut all = Vec::new();
        for rec in corpus {
            for (frame, anns) in rec.frames() {
                for a in anns {
                    all.push(LeafTime { plant_id: rec.plant_id, leaf_id: a.id, t: frame });
                }
            }
        }
        all.sort_unstable();
        all.dedup();
        let mut by_plant: BTreeMap<u64, Vec<LeafTime>> = BTreeMap::new();
        let mut times: BTreeMap<(u64, u64), Vec<u32>> = BTreeMap::new();
        for lt in &all {
            by_plant.entry(lt.plant_id).or_default().push(*lt);
            times.entry((lt.plant_id, lt.leaf_id)).or_default().push(lt.t);
        }
        Self { all, by_plant, times }
    }
}

fn pick_uniform<'a, R: Rng>(
    rng: &mut R,
    pool: &'a [LeafTime],
    keep: impl Fn(&LeafTime) -> bool,
) -> Option<&'a LeafTime> {
    let n = pool.iter().filter(|x| keep(x)).count();
    if n == 0 {
        return None;
    }
    let k = rng.random_range(0..n);
    pool.iter().filter(|x| keep(x)).nth(k)
}

/// Draws `count` triplets. Anchors are uniform over annotated leaf
/// instances; positives are uniform over the anchor leaf's other frames;
/// negatives are uniform over the instances admitted by `strategy`.
/// Identical inputs and seed give an identical list.
pub fn sample_triplets(
    corpus: &[SequenceRecord<GtAnnotation>],
    strategy: SamplingStrategy,
    count: u32,
    seed: u64,
) -> Result<Vec<TripletSpec>> {
    strategy.validate()?;
    let index = CorpusIndex::build(corpus);
    if !index.times.values().any(|t| t.len() >= 2) {
        return Err(Error::UnsatisfiableTriplet("no leaf is annotated at two or more frames".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count as usize);
    for _ in 0..count {
        out.push(draw_one(&index, &strategy, &mut rng)?);
    }
    Ok(out)
}

fn draw_one(index: &CorpusIndex, strategy: &SamplingStrategy, rng: &mut ChaCha8Rng) -> Result<TripletSpec> {
    for _ in 0..MAX_ATTEMPTS {
        let anchor = index.all[rng.random_range(0..index.all.len())];
        let times = &index.times[&(anchor.plant_id, anchor.leaf_id)];
        if times.len() < 2 {
            continue;
        }
        let pool: &[LeafTime] = match strategy {
            SamplingStrategy::CrossPlantFlexible => &index.all,
            _ => &index.by_plant[&anchor.plant_id],
        };
        let Some(negative) = pick_uniform(rng, pool, |c| strategy.admits_negative(&anchor, c)) else {
            continue;
        };
        let others: Vec<u32> = times.iter().copied().filter(|&t| t != anchor.t).collect();
        let t_p = others[rng.random_range(0..others.len())];
        return Ok(TripletSpec { anchor, positive: LeafTime { t: t_p, ..anchor }, negative: *negative });
    }
    Err(Error::UnsatisfiableTriplet(format!("no valid positive/negative found after {MAX_ATTEMPTS} attempts")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BBox;
    use crate::sequence::LabeledBox;
    use proptest::prelude::*;

    fn plant(plant_id: u64, leaves: &[(u64, std::ops::RangeInclusive<u32>)]) -> SequenceRecord<GtAnnotation> {
        let mut rec = SequenceRecord::new(plant_id);
        for (leaf, days) in leaves {
            for d in days.clone() {
                rec.push(d, LabeledBox::new(*leaf, BBox::new(0.0, 0.0, 5.0, 5.0).unwrap()));
            }
        }
        rec
    }

    #[test]
    fn single_leaf_intra_plant_is_unsatisfiable() {
        let corpus = vec![plant(1, &[(1, 1..=5)])];
        let err = sample_triplets(&corpus, SamplingStrategy::IntraPlantFullCycle, 3, 0).unwrap_err();
        assert!(err.to_string().contains("unsatisfiable triplet"));
    }

    #[test]
    fn no_repeated_leaf_is_unsatisfiable() {
        let corpus = vec![plant(1, &[(1, 1..=1), (2, 2..=2)])];
        assert!(sample_triplets(&corpus, SamplingStrategy::CrossPlantFlexible, 1, 0).is_err());
    }

    #[test]
    fn window_bounds_negatives() {
        let corpus = vec![plant(1, &[(1, 1..=10), (2, 1..=10)])];
        let strategy = SamplingStrategy::IntraPlantTemporalWindow { delta_t: 2 };
        let triplets = sample_triplets(&corpus, strategy, 2000, 3).unwrap();
        let mut saw_day5 = false;
        for t in &triplets {
            assert!(t.is_valid(&strategy));
            if t.anchor.t == 5 {
                saw_day5 = true;
                assert!((3..=7).contains(&t.negative.t));
            }
        }
        assert!(saw_day5);
    }

    #[test]
    fn cross_plant_reaches_other_plants() {
        let corpus = vec![plant(1, &[(1, 1..=6), (2, 1..=6)]), plant(2, &[(1, 1..=6), (2, 1..=6)])];
        let triplets = sample_triplets(&corpus, SamplingStrategy::CrossPlantFlexible, 1000, 11).unwrap();
        let cross = triplets.iter().filter(|t| t.negative.plant_id != t.anchor.plant_id).count();
        // 12 of the 18 admissible negatives sit on the other plant
        assert!(cross > 500 && cross < 850, "cross-plant negatives: {cross}");
        // the same leaf number on the other plant is a valid negative
        assert!(triplets
            .iter()
            .any(|t| t.negative.plant_id != t.anchor.plant_id && t.negative.leaf_id == t.anchor.leaf_id));
    }

    #[test]
    fn zero_window_is_rejected() {
        let corpus = vec![plant(1, &[(1, 1..=3), (2, 1..=3)])];
        let s = SamplingStrategy::IntraPlantTemporalWindow { delta_t: 0 };
        assert!(matches!(sample_triplets(&corpus, s, 1, 0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn same_seed_same_list() {
        let corpus = vec![plant(1, &[(1, 1..=8), (2, 3..=9), (3, 5..=6)])];
        let s = SamplingStrategy::IntraPlantFullCycle;
        assert_eq!(sample_triplets(&corpus, s, 200, 42).unwrap(), sample_triplets(&corpus, s, 200, 42).unwrap());
        assert_ne!(sample_triplets(&corpus, s, 200, 42).unwrap(), sample_triplets(&corpus, s, 200, 43).unwrap());
    }

    fn arb_corpus() -> impl Strategy<Value = Vec<SequenceRecord<GtAnnotation>>> {
        proptest::collection::vec(proptest::collection::vec((1u32..=12, 0u32..=12), 2..5), 1..4).prop_map(|plants| {
            plants
                .into_iter()
                .enumerate()
                .map(|(p, leaves)| {
                    let spans: Vec<(u64, std::ops::RangeInclusive<u32>)> = leaves
                        .into_iter()
                        .enumerate()
                        .map(|(l, (start, len))| (l as u64 + 1, start..=start + len.max(1)))
                        .collect();
                    plant(p as u64 + 1, &spans)
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn every_emitted_triplet_is_valid(corpus in arb_corpus(), seed in 0u64..1000, which in 0usize..3, dt in 1u32..4) {
            let strategy = [
                SamplingStrategy::CrossPlantFlexible,
                SamplingStrategy::IntraPlantFullCycle,
                SamplingStrategy::IntraPlantTemporalWindow { delta_t: dt },
            ][which];
            match sample_triplets(&corpus, strategy, 50, seed) {
                Ok(ts) => {
                    prop_assert_eq!(ts.len(), 50);
                    for t in ts {
                        prop_assert!(t.is_valid(&strategy));
                    }
                }
                Err(e) => prop_assert!(matches!(e, Error::UnsatisfiableTriplet(_))),
            }
        }
    }
}
