use std::collections::BTreeMap;

/// Frames of per-frame items (detections, annotations, tracked boxes) for a
/// single plant, ordered by frame index.
///
/// Frames may be present with an empty item list; this matters for the
/// tracker, which ages unmatched tracks once per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceRecord<T> {
    pub plant_id: u64,
    frames: BTreeMap<u32, Vec<T>>,
}

impl<T> Default for SequenceRecord<T> {
    fn default() -> Self {
        Self { plant_id: 0, frames: BTreeMap::new() }
    }
}

impl<T> SequenceRecord<T> {
    pub fn new(plant_id: u64) -> Self {
        Self { plant_id, frames: BTreeMap::new() }
    }

    pub fn push(&mut self, frame: u32, item: T) {
        self.frames.entry(frame).or_default().push(item);
    }

    /// Registers a frame without adding items to it.
    pub fn touch(&mut self, frame: u32) {
        self.frames.entry(frame).or_default();
    }

    pub fn insert_frame(&mut self, frame: u32, items: Vec<T>) {
        self.frames.insert(frame, items);
    }

    pub fn frame(&self, frame: u32) -> &[T] {
        self.frames.get(&frame).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn frames(&self) -> impl Iterator<Item = (u32, &[T])> + '_ {
        self.frames.iter().map(|(&f, v)| (f, v.as_slice()))
    }

    pub fn frame_indices(&self) -> impl Iterator<Item = u32> + '_ {
        self.frames.keys().copied()
    }

    pub fn first_frame(&self) -> Option<u32> {
        self.frames.keys().next().copied()
    }

    pub fn last_frame(&self) -> Option<u32> {
        self.frames.keys().next_back().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.values().all(Vec::is_empty)
    }

    /// Total number of items over all frames.
    pub fn len(&self) -> usize {
        self.frames.values().map(Vec::len).sum()
    }

    pub fn map<U>(&self, mut f: impl FnMut(u32, &T) -> U) -> SequenceRecord<U> {
        SequenceRecord {
            plant_id: self.plant_id,
            frames: self.frames.iter().map(|(&fr, items)| (fr, items.iter().map(|it| f(fr, it)).collect())).collect(),
        }
    }
}

/// A box carrying a persistent identity: a ground-truth leaf id or a
/// predicted track id, depending on the record it sits in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledBox {
    pub id: u64,
    pub bbox: crate::geometry::BBox,
}

impl LabeledBox {
    pub fn new(id: u64, bbox: crate::geometry::BBox) -> Self {
        Self { id, bbox }
    }
}

/// Ground-truth annotation of one leaf in one frame.
pub type GtAnnotation = LabeledBox;
