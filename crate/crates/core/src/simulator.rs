//! Seeded synthetic plant-growth sequences.
//!
//! Leaves sit at fixed polar positions around the plant (image) center and
//! grow along logistic area curves. A pot rotation is a pure angle offset
//! applied from its event frame on. Each leaf carries a latent unit-norm
//! appearance vector; observed embeddings add a slow drift along a per-leaf
//! direction and isotropic Gaussian noise, then renormalize.
//!
//! Random draws come from independent ChaCha streams (layout, visibility,
//! detector, appearance noise) so e.g. raising detector noise leaves the
//! leaf layout unchanged.

use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson, StandardNormal};

use crate::assignment::{hungarian, CostMatrix};
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::geometry::{iou, BBox};
use crate::sequence::{GtAnnotation, LabeledBox, SequenceRecord};
use crate::tracker::{Detection, FrameResult, TrackAssignment};

#[derive(Debug, Clone, PartialEq)]
pub struct LeafModel {
    pub leaf_id: u64,
    pub birth_frame: u32,
    /// First frame at which the leaf is gone.
    pub death_frame: Option<u32>,
    /// Distance from the plant center, px.
    pub radius: f64,
    /// Angle before any rotation event, rad.
    pub angle: f64,
    pub area_max: f64,
    pub rate: f64,
    pub midpoint: f64,
    pub latent: Embedding,
    pub drift_dir: Vec<f64>,
    pub drift_rate: f64,
}

impl LeafModel {
    pub fn alive(&self, frame: u32) -> bool {
        frame >= self.birth_frame && self.death_frame.is_none_or(|d| frame < d)
    }
}

/// `area_max / (1 + exp(-rate * (frame - midpoint)))`.
pub fn logistic_area(leaf: &LeafModel, frame: u32) -> Result<f64> {
    if frame < leaf.birth_frame {
        return Err(Error::InvalidScenario(format!(
            "frame {frame} precedes birth of leaf {} at {}",
            leaf.leaf_id, leaf.birth_frame
        )));
    }
    Ok(leaf.area_max / (1.0 + (-leaf.rate * (frame as f64 - leaf.midpoint)).exp()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcedOcclusion {
    pub leaf_id: u64,
    pub from: u32,
    pub to: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationEvent {
    pub frame: u32,
    pub angle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorNoise {
    pub miss_prob: f64,
    /// Mean false positives per frame.
    pub fp_rate: f64,
    pub box_jitter_std: f64,
    pub conf_min: f64,
    pub conf_max: f64,
    pub fp_conf_min: f64,
    pub fp_conf_max: f64,
}

impl Default for DetectorNoise {
    fn default() -> Self {
        Self {
            miss_prob: 0.0,
            fp_rate: 0.0,
            box_jitter_std: 0.0,
            conf_min: 0.6,
            conf_max: 1.0,
            fp_conf_min: 0.3,
            fp_conf_max: 0.8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EmbeddingNoise {
    /// Per-component Gaussian noise added before normalization.
    pub noise_std: f64,
    /// Drift length per frame since birth.
    pub drift_rate: f64,
    /// Target cosine similarity between latent vectors of different leaves
    /// of the plant.
    pub shared_appearance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n_frames: u32,
    pub n_leaves: u32,
    pub width: f64,
    pub height: f64,
    pub dim: usize,
    /// Leaves emerge uniformly over frames `1..=birth_window`.
    pub birth_window: u32,
    /// Probability that a leaf senesces before the sequence ends.
    pub senescence_prob: f64,
    pub occlusion_prob: f64,
    pub forced_occlusions: Vec<ForcedOcclusion>,
    pub rotation_events: Vec<RotationEvent>,
    pub detector: DetectorNoise,
    pub embedding: EmbeddingNoise,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    /// Noise-free: no misses, false positives, jitter, occlusion, rotation
    /// or appearance noise.
    fn default() -> Self {
        Self {
            n_frames: 31,
            n_leaves: 8,
            width: 1200.0,
            height: 1200.0,
            dim: crate::embedding::DEFAULT_DIM,
            birth_window: 1,
            senescence_prob: 0.0,
            occlusion_prob: 0.0,
            forced_occlusions: Vec::new(),
            rotation_events: Vec::new(),
            detector: DetectorNoise::default(),
            embedding: EmbeddingNoise::default(),
            seed: 0,
        }
    }
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidScenario(format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

fn check_nonneg(name: &str, x: f64) -> Result<()> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::InvalidScenario(format!("{name} must be finite and >= 0, got {x}")));
    }
    Ok(())
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_frames == 0 || self.n_leaves == 0 {
            return Err(Error::InvalidScenario("need at least one frame and one leaf".into()));
        }
        if self.dim == 0 {
            return Err(Error::InvalidScenario("embedding dimension must be >= 1".into()));
        }
        if !(self.width.is_finite() && self.height.is_finite() && self.width >= 16.0 && self.height >= 16.0) {
            return Err(Error::InvalidScenario(format!("frame size {}x{} too small", self.width, self.height)));
        }
        if self.birth_window == 0 || self.birth_window > self.n_frames {
            return Err(Error::InvalidScenario(format!(
                "birth_window must lie in 1..={}, got {}",
                self.n_frames, self.birth_window
            )));
        }
        check_prob("senescence_prob", self.senescence_prob)?;
        check_prob("occlusion_prob", self.occlusion_prob)?;
        check_prob("miss_prob", self.detector.miss_prob)?;
        check_prob("shared_appearance", self.embedding.shared_appearance)?;
        check_nonneg("fp_rate", self.detector.fp_rate)?;
        check_nonneg("box_jitter_std", self.detector.box_jitter_std)?;
        check_nonneg("noise_std", self.embedding.noise_std)?;
        check_nonneg("drift_rate", self.embedding.drift_rate)?;
        let d = &self.detector;
        for (name, lo, hi) in [("conf", d.conf_min, d.conf_max), ("fp_conf", d.fp_conf_min, d.fp_conf_max)] {
            check_prob(name, lo)?;
            check_prob(name, hi)?;
            if lo > hi {
                return Err(Error::InvalidScenario(format!("{name} range [{lo}, {hi}] is empty")));
            }
        }
        for r in &self.rotation_events {
            if !r.angle.is_finite() {
                return Err(Error::InvalidScenario(format!("rotation angle at frame {} is not finite", r.frame)));
            }
        }
        for o in &self.forced_occlusions {
            if o.from > o.to {
                return Err(Error::InvalidScenario(format!("occlusion of leaf {} has empty range", o.leaf_id)));
            }
        }
        Ok(())
    }

    /// Accumulated rotation applied to positions at `frame`.
    pub fn rotation_at(&self, frame: u32) -> f64 {
        self.rotation_events.iter().filter(|r| r.frame <= frame).map(|r| r.angle).sum()
    }

    fn forced_hidden(&self, leaf_id: u64, frame: u32) -> bool {
        self.forced_occlusions.iter().any(|o| o.leaf_id == leaf_id && (o.from..=o.to).contains(&frame))
    }
}

/// Generated ground truth and detections. `truth_map` runs parallel to
/// `detections`: the source leaf of each detection, `None` for false
/// positives.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedSequence {
    pub leaves: Vec<LeafModel>,
    pub gt: SequenceRecord<GtAnnotation>,
    pub detections: SequenceRecord<Detection>,
    pub truth_map: SequenceRecord<Option<u64>>,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        if let Ok(e) = Embedding::new(v) {
            return e.into_inner();
        }
    }
}

fn build_leaves(cfg: &ScenarioConfig, rng: &mut ChaCha8Rng) -> Vec<LeafModel> {
    let min_side = cfg.width.min(cfg.height);
    let n = cfg.n_leaves as usize;
    let shared = random_unit(rng, cfg.dim);
    let rho = cfg.embedding.shared_appearance;

    let mut births: Vec<u32> = (0..n).map(|_| rng.random_range(1..=cfg.birth_window)).collect();
    births.sort_unstable();
    let spacing = std::f64::consts::TAU / n as f64;

    (0..n)
        .map(|i| {
            let own = random_unit(rng, cfg.dim);
            let latent: Vec<f64> =
                shared.iter().zip(&own).map(|(s, o)| rho.sqrt() * s + (1.0 - rho).sqrt() * o).collect();
            let side_max = rng.random_range(0.06..0.11) * min_side;
            let birth = births[i];
            let death = (rng.random_bool(cfg.senescence_prob) && birth < cfg.n_frames)
                .then(|| rng.random_range(birth + 1..=cfg.n_frames));
            LeafModel {
                leaf_id: i as u64 + 1,
                birth_frame: birth,
                death_frame: death,
                radius: rng.random_range(0.2..0.42) * min_side,
                angle: i as f64 * spacing + rng.random_range(-0.25..0.25) * spacing,
                area_max: side_max * side_max,
                rate: rng.random_range(0.3..0.6),
                midpoint: birth as f64 + rng.random_range(2.0..6.0),
                latent: Embedding::new(latent).expect("latent mix of unit vectors is nonzero"),
                drift_dir: random_unit(rng, cfg.dim),
                drift_rate: cfg.embedding.drift_rate,
            }
        })
        .collect()
}

/// Ground-truth box of a leaf at `frame`, including rotation.
pub fn leaf_box(cfg: &ScenarioConfig, leaf: &LeafModel, frame: u32) -> Result<BBox> {
    let phi = leaf.angle + cfg.rotation_at(frame);
    let cx = cfg.width / 2.0 + leaf.radius * phi.cos();
    let cy = cfg.height / 2.0 + leaf.radius * phi.sin();
    let side = logistic_area(leaf, frame)?.sqrt();
    BBox::from_center(cx, cy, side, side)
}

fn observe(leaf: &LeafModel, frame: u32, noise_std: f64, rng: &mut ChaCha8Rng) -> Embedding {
    let t = (frame - leaf.birth_frame) as f64;
    let shift = leaf.drift_rate * t;
    let v: Vec<f64> = leaf
        .latent
        .as_slice()
        .iter()
        .zip(&leaf.drift_dir)
        .map(|(l, d)| {
            let noise: f64 = if noise_std > 0.0 { noise_std * rng.sample::<f64, _>(StandardNormal) } else { 0.0 };
            l + shift * d + noise
        })
        .collect();
    Embedding::new(v).unwrap_or_else(|_| leaf.latent.clone())
}

fn jitter(rng: &mut ChaCha8Rng, b: &BBox, std: f64) -> BBox {
    if std == 0.0 {
        return *b;
    }
    let n = Normal::new(0.0, std).expect("std validated");
    let (cx, cy) = b.center();
    let w = (b.w() + n.sample(rng)).max(1.0);
    let h = (b.h() + n.sample(rng)).max(1.0);
    BBox::from_center(cx + n.sample(rng), cy + n.sample(rng), w, h).expect("finite jittered box")
}

/// Generates one synthetic sequence over frames `1..=n_frames`.
pub fn generate(cfg: &ScenarioConfig) -> Result<SimulatedSequence> {
    cfg.validate()?;
    let mut layout = stream(cfg.seed, 0);
    let mut visibility = stream(cfg.seed, 1);
    let mut detector = stream(cfg.seed, 2);
    let mut appearance = stream(cfg.seed, 3);

    let leaves = build_leaves(cfg, &mut layout);
    let d = &cfg.detector;
    let fp_count = (d.fp_rate > 0.0).then(|| Poisson::new(d.fp_rate).expect("fp_rate validated"));
    let min_side = cfg.width.min(cfg.height);

    let mut gt = SequenceRecord::new(1);
    let mut detections = SequenceRecord::new(1);
    let mut truth_map = SequenceRecord::new(1);

    for frame in 1..=cfg.n_frames {
        gt.touch(frame);
        let mut frame_dets: Vec<(Detection, Option<u64>)> = Vec::new();
        for leaf in &leaves {
            // drawn for every leaf-frame so streams stay aligned across configs
            let occluded = visibility.random_bool(cfg.occlusion_prob);
            if !leaf.alive(frame) || occluded || cfg.forced_hidden(leaf.leaf_id, frame) {
                continue;
            }
            let bbox = leaf_box(cfg, leaf, frame)?;
            gt.push(frame, LabeledBox::new(leaf.leaf_id, bbox));

            if detector.random_bool(d.miss_prob) {
                continue;
            }
            let det_box = jitter(&mut detector, &bbox, d.box_jitter_std);
            let conf = detector.random_range(d.conf_min..=d.conf_max);
            let embedding = observe(leaf, frame, cfg.embedding.noise_std, &mut appearance);
            frame_dets.push((Detection { bbox: det_box, conf, embedding }, Some(leaf.leaf_id)));
        }
        if let Some(p) = &fp_count {
            let k = p.sample(&mut detector) as usize;
            for _ in 0..k {
                let side = detector.random_range(0.02..0.1) * min_side;
                let u = detector.random_range(0.0..cfg.width - side);
                let v = detector.random_range(0.0..cfg.height - side);
                let conf = detector.random_range(d.fp_conf_min..=d.fp_conf_max);
                let embedding = Embedding::new(random_unit(&mut appearance, cfg.dim))?;
                frame_dets.push((Detection { bbox: BBox::new(u, v, side, side)?, conf, embedding }, None));
            }
        }
        frame_dets.shuffle(&mut detector);
        let (dets, labels): (Vec<_>, Vec<_>) = frame_dets.into_iter().unzip();
        detections.insert_frame(frame, dets);
        truth_map.insert_frame(frame, labels);
    }
    Ok(SimulatedSequence { leaves, gt, detections, truth_map })
}

/// IoU-only association: each frame's detections are matched to the
/// previous frame's labeled boxes (Hungarian on `1 - IoU`, pairs below
/// `iou_gate` rejected). Nothing is remembered beyond one frame, so an
/// unmatched box ends its track immediately.
pub fn baseline_iou_tracker(det: &SequenceRecord<Detection>, iou_gate: f64) -> Result<Vec<FrameResult>> {
    let (Some(first), Some(last)) = (det.first_frame(), det.last_frame()) else {
        return Ok(Vec::new());
    };
    let mut next_id = 1u64;
    let mut prev: Vec<(u64, BBox)> = Vec::new();
    let mut out = Vec::new();
    for frame in first..=last {
        let dets = det.frame(frame);
        let mut result = FrameResult { frame, ..Default::default() };
        let ious = CostMatrix::from_fn(prev.len(), dets.len(), |r, c| iou(&prev[r].1, &dets[c].bbox));
        let cost = CostMatrix::from_fn(prev.len(), dets.len(), |r, c| 1.0 - ious.get(r, c));
        let a = hungarian(&cost)?;
        let mut det_matched = vec![false; dets.len()];
        let mut prev_matched = vec![false; prev.len()];
        for (r, c) in a.pairs {
            if ious.get(r, c) >= iou_gate && ious.get(r, c) > 0.0 {
                det_matched[c] = true;
                prev_matched[r] = true;
                result.assignments.push(TrackAssignment {
                    track_id: prev[r].0,
                    detection_index: c,
                    bbox: dets[c].bbox,
                });
            }
        }
        result.assignments.sort_by_key(|a| a.detection_index);
        result.pruned_track_ids = prev.iter().zip(&prev_matched).filter(|(_, m)| !**m).map(|(p, _)| p.0).collect();
        for (c, d) in dets.iter().enumerate() {
            if !det_matched[c] {
                result.new_tracks.push(TrackAssignment { track_id: next_id, detection_index: c, bbox: d.bbox });
                next_id += 1;
            }
        }
        prev = result.labeled().iter().map(|a| (a.track_id, a.bbox)).collect();
        out.push(result);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn leaf(area_max: f64, rate: f64, midpoint: f64) -> LeafModel {
        LeafModel {
            leaf_id: 1,
            birth_frame: 1,
            death_frame: None,
            radius: 100.0,
            angle: 0.0,
            area_max,
            rate,
            midpoint,
            latent: Embedding::new(vec![1.0, 0.0]).unwrap(),
            drift_dir: vec![0.0, 1.0],
            drift_rate: 0.0,
        }
    }

    #[test]
    fn logistic_fixtures() {
        assert!((logistic_area(&leaf(400.0, 0.5, 10.0), 10).unwrap() - 200.0).abs() < 1e-12);
        let v = logistic_area(&leaf(400.0, 0.5, 10.0), 12).unwrap();
        assert!((v - 400.0 / (1.0 + (-1.0f64).exp())).abs() < 1e-12);
        assert!((v - 292.423).abs() < 1e-3);
        let steep = logistic_area(&leaf(400.0, 50.0, 10.0), 12).unwrap();
        assert!((steep - 400.0).abs() < 1e-9);
        let mut late = leaf(400.0, 0.5, 10.0);
        late.birth_frame = 5;
        assert!(logistic_area(&late, 4).is_err());
    }

    #[test]
    fn noise_free_detections_equal_gt() {
        let sim = generate(&ScenarioConfig::default()).unwrap();
        for (frame, dets) in sim.detections.frames() {
            let labels = sim.truth_map.frame(frame);
            assert_eq!(dets.len(), sim.gt.frame(frame).len());
            for (d, l) in dets.iter().zip(labels) {
                let leaf = l.expect("no false positives");
                let g = sim.gt.frame(frame).iter().find(|g| g.id == leaf).unwrap();
                assert_eq!(d.bbox, g.bbox);
            }
        }
    }

    #[test]
    fn rejects_empty_scenarios() {
        assert!(generate(&ScenarioConfig { n_leaves: 0, ..Default::default() }).is_err());
        assert!(generate(&ScenarioConfig { n_frames: 0, ..Default::default() }).is_err());
        let bad = ScenarioConfig { occlusion_prob: 1.5, ..Default::default() };
        assert!(generate(&bad).is_err());
    }

    #[test]
    fn rotation_rotates_centers_about_plant_center() {
        let quarter = std::f64::consts::FRAC_PI_2;
        let cfg =
            ScenarioConfig { rotation_events: vec![RotationEvent { frame: 10, angle: quarter }], ..Default::default() };
        let sim = generate(&cfg).unwrap();
        let (cx0, cy0) = (cfg.width / 2.0, cfg.height / 2.0);
        for before in sim.gt.frame(9) {
            let (x, y) = before.bbox.center();
            let (dx, dy) = (x - cx0, y - cy0);
            let (rx, ry) =
                (cx0 + dx * quarter.cos() - dy * quarter.sin(), cy0 + dx * quarter.sin() + dy * quarter.cos());
            for f in 10..=cfg.n_frames {
                let after = sim.gt.frame(f).iter().find(|g| g.id == before.id).unwrap();
                let (ax, ay) = after.bbox.center();
                assert!((ax - rx).abs() < 1e-9 && (ay - ry).abs() < 1e-9);
            }
            let at10 = sim.gt.frame(10).iter().find(|g| g.id == before.id).unwrap();
            let leaf = &sim.leaves[(before.id - 1) as usize];
            assert!((at10.bbox.area() - logistic_area(leaf, 10).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn forced_occlusion_hides_leaf() {
        let cfg = ScenarioConfig {
            forced_occlusions: vec![ForcedOcclusion { leaf_id: 3, from: 5, to: 7 }],
            ..Default::default()
        };
        let sim = generate(&cfg).unwrap();
        for f in 5..=7 {
            assert!(sim.gt.frame(f).iter().all(|g| g.id != 3));
        }
        assert!(sim.gt.frame(4).iter().any(|g| g.id == 3));
        assert!(sim.gt.frame(8).iter().any(|g| g.id == 3));
    }

    #[test]
    fn truth_map_covers_exactly_true_detections() {
        let cfg = ScenarioConfig {
            detector: DetectorNoise { fp_rate: 2.0, miss_prob: 0.2, box_jitter_std: 3.0, ..Default::default() },
            ..Default::default()
        };
        let sim = generate(&cfg).unwrap();
        let mut fps = 0;
        for (frame, dets) in sim.detections.frames() {
            let labels = sim.truth_map.frame(frame);
            assert_eq!(labels.len(), dets.len());
            fps += labels.iter().filter(|l| l.is_none()).count();
            for l in labels.iter().flatten() {
                assert!(sim.gt.frame(frame).iter().any(|g| g.id == *l));
            }
        }
        assert!(fps > 0);
    }

    #[test]
    fn same_seed_same_output() {
        let cfg = ScenarioConfig {
            seed: 17,
            birth_window: 10,
            occlusion_prob: 0.1,
            detector: DetectorNoise { fp_rate: 1.0, miss_prob: 0.1, box_jitter_std: 2.0, ..Default::default() },
            embedding: EmbeddingNoise { noise_std: 0.05, drift_rate: 0.01, shared_appearance: 0.2 },
            ..Default::default()
        };
        assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
        let other = ScenarioConfig { seed: 18, ..cfg.clone() };
        assert_ne!(generate(&cfg).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn shared_appearance_sets_cross_leaf_similarity() {
        let cfg = ScenarioConfig {
            n_leaves: 40,
            embedding: EmbeddingNoise { shared_appearance: 0.25, ..Default::default() },
            ..Default::default()
        };
        let sim = generate(&cfg).unwrap();
        let mut sum = 0.0;
        let mut n = 0;
        for a in 0..sim.leaves.len() {
            for b in a + 1..sim.leaves.len() {
                sum += crate::embedding::cosine_similarity(&sim.leaves[a].latent, &sim.leaves[b].latent).unwrap();
                n += 1;
            }
        }
        let mean = sum / n as f64;
        assert!((mean - 0.25).abs() < 0.05, "mean cross-leaf similarity {mean}");
    }

    #[test]
    fn baseline_tracks_static_boxes() {
        let sim = generate(&ScenarioConfig::default()).unwrap();
        let out = baseline_iou_tracker(&sim.detections, 0.3).unwrap();
        assert_eq!(out[0].new_tracks.len(), 8);
        for r in &out[1..] {
            assert!(r.new_tracks.is_empty());
            assert_eq!(r.assignments.len(), 8);
        }
    }

    #[test]
    fn baseline_loses_ids_on_rotation() {
        let cfg = ScenarioConfig {
            rotation_events: vec![RotationEvent { frame: 10, angle: std::f64::consts::FRAC_PI_2 }],
            ..Default::default()
        };
        let sim = generate(&cfg).unwrap();
        let out = baseline_iou_tracker(&sim.detections, 0.3).unwrap();
        let track_of_leaf = |frame: u32| -> HashMap<u64, u64> {
            let r = out.iter().find(|r| r.frame == frame).unwrap();
            r.labeled().iter().map(|a| (sim.truth_map.frame(frame)[a.detection_index].unwrap(), a.track_id)).collect()
        };
        let (before, after) = (track_of_leaf(9), track_of_leaf(10));
        assert_eq!(before.len(), 8);
        for (leaf, track) in &before {
            assert_ne!(after[leaf], *track, "leaf {leaf} kept its id through the rotation");
        }
    }

    #[test]
    fn baseline_breaks_ties_deterministically() {
        let mut rec = SequenceRecord::new(1);
        let e = Embedding::new(vec![1.0]).unwrap();
        let b = BBox::new(0.0, 0.0, 10.0, 10.0).unwrap();
        for f in 1..=3 {
            for _ in 0..2 {
                rec.push(f, Detection { bbox: b, conf: 1.0, embedding: e.clone() });
            }
        }
        let a = baseline_iou_tracker(&rec, 0.5).unwrap();
        assert_eq!(a, baseline_iou_tracker(&rec, 0.5).unwrap());
        let ids: Vec<u64> = a[2].assignments.iter().map(|x| x.track_id).collect();
        assert_eq!(ids, vec![1, 2]);
    }
}
