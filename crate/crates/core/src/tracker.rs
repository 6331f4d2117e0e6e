//! Sequential memory-bank tracker.
//!
//! Each active track holds a unit-norm prototype embedding and an age
//! counter (consecutive frames without a match). Per frame the tracker
//! builds the track-by-detection cosine similarity matrix, solves the
//! assignment on `1 - S`, drops pairs below `tau_s`, then:
//!
//! * matched tracks blend the detection into the prototype and reset age,
//! * unmatched detections open new tracks,
//! * unmatched tracks keep their prototype and age by one; tracks whose age
//!   exceeds `tau_a` are removed for good.

use crate::assignment::{cost_from_similarity, gate_assignment, hungarian, SimilarityMatrix};
use crate::embedding::{cosine_similarity, Embedding};
use crate::error::{Error, Result};
use crate::geometry::BBox;
use crate::sequence::{LabeledBox, SequenceRecord};

/// One detector output for one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub bbox: BBox,
    pub conf: f64,
    pub embedding: Embedding,
}

/// How a matched track folds a new observation into its prototype.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrototypeMode {
    /// `normalize(alpha * p + (1 - alpha) * e)`.
    #[default]
    Ema,
    /// Normalized uniform mean of every embedding the track has matched.
    Mean,
}

impl PrototypeMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            PrototypeMode::Ema => "ema",
            PrototypeMode::Mean => "mean",
        }
    }
}

impl std::str::FromStr for PrototypeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ema" => Ok(PrototypeMode::Ema),
            "mean" => Ok(PrototypeMode::Mean),
            other => Err(Error::InvalidParams(format!("unknown prototype mode `{other}` (expected ema or mean)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerParams {
    /// Minimum similarity for an assigned pair to count as a match.
    pub tau_s: f64,
    /// Tracks unmatched for more than this many consecutive frames are pruned.
    pub tau_a: u32,
    /// Weight of the previous prototype in the EMA update.
    pub alpha: f64,
    /// Detections with confidence below this are ignored.
    pub conf_min: f64,
    pub mode: PrototypeMode,
}

impl Default for TrackerParams {
    fn default() -> Self {
        Self { tau_s: 0.4, tau_a: 5, alpha: 0.5, conf_min: 0.5, mode: PrototypeMode::Ema }
    }
}

impl TrackerParams {
    pub fn validate(&self) -> Result<()> {
        if !(-1.0..=1.0).contains(&self.tau_s) {
            return Err(Error::InvalidParams(format!("tau_s must lie in [-1, 1], got {}", self.tau_s)));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParams(format!("alpha must lie in [0, 1], got {}", self.alpha)));
        }
        // conf_min above 1 is allowed: it filters every detection.
        if !(self.conf_min.is_finite() && self.conf_min >= 0.0) {
            return Err(Error::InvalidParams(format!("conf_min must be >= 0, got {}", self.conf_min)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    pub id: u64,
    pub prototype: Embedding,
    pub age: u32,
    pub born_at: u32,
    pub last_box: BBox,
    // Running sum of matched embeddings, kept only in mean mode.
    history_sum: Option<Vec<f64>>,
}

impl Track {
    fn new(id: u64, det: &Detection, frame: u32, mode: PrototypeMode) -> Self {
        Self {
            id,
            prototype: det.embedding.clone(),
            age: 0,
            born_at: frame,
            last_box: det.bbox,
            history_sum: match mode {
                PrototypeMode::Ema => None,
                PrototypeMode::Mean => Some(det.embedding.as_slice().to_vec()),
            },
        }
    }

    fn absorb(&mut self, det: &Detection, alpha: f64) -> Result<()> {
        self.prototype = match &mut self.history_sum {
            None => self.prototype.blend(&det.embedding, alpha)?,
            Some(sum) => {
                sum.iter_mut().zip(det.embedding.as_slice()).for_each(|(s, e)| *s += e);
                Embedding::new(sum.clone()).unwrap_or_else(|_| det.embedding.clone())
            }
        };
        self.age = 0;
        self.last_box = det.bbox;
        Ok(())
    }
}

/// A detection labeled with the track it was attached to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackAssignment {
    pub track_id: u64,
    pub detection_index: usize,
    pub bbox: BBox,
}

/// Outcome of one tracker step. Every detection that passed the confidence
/// filter appears exactly once, in either `assignments` (matched to an
/// existing track) or `new_tracks`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrameResult {
    pub frame: u32,
    pub assignments: Vec<TrackAssignment>,
    pub new_tracks: Vec<TrackAssignment>,
    pub pruned_track_ids: Vec<u64>,
}

impl FrameResult {
    pub fn new_track_ids(&self) -> Vec<u64> {
        self.new_tracks.iter().map(|a| a.track_id).collect()
    }

    /// Matched and newly created labels together, sorted by track id.
    pub fn labeled(&self) -> Vec<TrackAssignment> {
        let mut all: Vec<TrackAssignment> = self.assignments.iter().chain(&self.new_tracks).copied().collect();
        all.sort_by_key(|a| a.track_id);
        all
    }
}

/// Converts tracker output into a per-frame record of predicted boxes.
pub fn to_predictions(results: &[FrameResult]) -> SequenceRecord<LabeledBox> {
    let mut rec = SequenceRecord::new(0);
    for r in results {
        rec.touch(r.frame);
        for a in r.labeled() {
            rec.push(r.frame, LabeledBox::new(a.track_id, a.bbox));
        }
    }
    rec
}

/// Active tracks plus the id allocator. Step calls on one bank must be
/// serialized; independent sequences use independent banks.
#[derive(Debug, Clone)]
pub struct MemoryBank {
    tracks: Vec<Track>,
    next_id: u64,
    params: TrackerParams,
    dim: Option<usize>,
    last_frame: Option<u32>,
}

impl MemoryBank {
    pub fn new(params: TrackerParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { tracks: Vec::new(), next_id: 1, params, dim: None, last_frame: None })
    }

    pub fn tracks(&self) -> &[Track] {
        &self.tracks
    }

    pub fn params(&self) -> &TrackerParams {
        &self.params
    }

    pub fn next_id(&self) -> u64 {
        self.next_id
    }

    pub fn last_frame(&self) -> Option<u32> {
        self.last_frame
    }

    fn check_dims(&mut self, detections: &[Detection]) -> Result<()> {
        for d in detections {
            match self.dim {
                None => self.dim = Some(d.embedding.dim()),
                Some(dim) if dim != d.embedding.dim() => {
                    return Err(Error::DimensionMismatch { expected: dim, found: d.embedding.dim() })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    fn spawn(&mut self, det: &Detection, index: usize, frame: u32) -> TrackAssignment {
        let id = self.next_id;
        self.next_id += 1;
        self.tracks.push(Track::new(id, det, frame, self.params.mode));
        TrackAssignment { track_id: id, detection_index: index, bbox: det.bbox }
    }

    /// Processes one frame. Frames must be strictly increasing.
    pub fn step(&mut self, detections: &[Detection], frame: u32) -> Result<FrameResult> {
        if let Some(last) = self.last_frame {
            if frame <= last {
                return Err(Error::FrameOrder { frame, last });
            }
        }
        self.check_dims(detections)?;
        self.last_frame = Some(frame);

        let kept: Vec<usize> = (0..detections.len()).filter(|&i| detections[i].conf >= self.params.conf_min).collect();

        let mut result = FrameResult { frame, ..Default::default() };
        let mut det_matched = vec![false; kept.len()];
        let mut track_matched = vec![false; self.tracks.len()];

        if !self.tracks.is_empty() && !kept.is_empty() {
            let mut values = Vec::with_capacity(self.tracks.len() * kept.len());
            for t in &self.tracks {
                for &i in &kept {
                    values.push(cosine_similarity(&t.prototype, &detections[i].embedding)?);
                }
            }
            let sim = SimilarityMatrix::new(self.tracks.len(), kept.len(), values)?;
            let assignment = hungarian(&cost_from_similarity(&sim))?;
            let gated = gate_assignment(&assignment, &sim, self.params.tau_s);
            for &(ti, dj) in &gated.pairs {
                let det = &detections[kept[dj]];
                self.tracks[ti].absorb(det, self.params.alpha)?;
                track_matched[ti] = true;
                det_matched[dj] = true;
                result.assignments.push(TrackAssignment {
                    track_id: self.tracks[ti].id,
                    detection_index: kept[dj],
                    bbox: det.bbox,
                });
            }
        }
        result.assignments.sort_by_key(|a| a.detection_index);

        let tau_a = self.params.tau_a;
        let mut survivors = Vec::with_capacity(self.tracks.len());
        for (t, matched) in std::mem::take(&mut self.tracks).into_iter().zip(track_matched) {
            let mut t = t;
            if !matched {
                t.age += 1;
            }
            if t.age > tau_a {
                result.pruned_track_ids.push(t.id);
            } else {
                survivors.push(t);
            }
        }
        self.tracks = survivors;

        for (j, &i) in kept.iter().enumerate() {
            if !det_matched[j] {
                let a = self.spawn(&detections[i], i, frame);
                result.new_tracks.push(a);
            }
        }
        Ok(result)
    }
}

/// Opens the bank on the first frame: every confident detection becomes a
/// track, ids ascending from 1 in detection order.
pub fn init_bank(detections: &[Detection], params: TrackerParams, frame: u32) -> Result<(MemoryBank, FrameResult)> {
    let mut bank = MemoryBank::new(params)?;
    let result = bank.step(detections, frame)?;
    Ok((bank, result))
}

pub fn step(bank: &mut MemoryBank, detections: &[Detection], frame: u32) -> Result<FrameResult> {
    bank.step(detections, frame)
}

/// Runs the tracker over every frame from the record's first to its last
/// frame index. Frame indices missing from the record count as frames with
/// no detections.
pub fn run_sequence(frames: &SequenceRecord<Detection>, params: TrackerParams) -> Result<Vec<FrameResult>> {
    let (Some(first), Some(last)) = (frames.first_frame(), frames.last_frame()) else {
        params.validate()?;
        return Ok(Vec::new());
    };
    let wrap = |frame: u32| move |e: Error| Error::AtFrame { frame, source: Box::new(e) };
    let (mut bank, head) = init_bank(frames.frame(first), params, first).map_err(wrap(first))?;
    let mut out = Vec::with_capacity((last - first + 1) as usize);
    out.push(head);
    for frame in first + 1..=last {
        out.push(bank.step(frames.frame(frame), frame).map_err(wrap(frame))?);
    }
    Ok(out)
}
