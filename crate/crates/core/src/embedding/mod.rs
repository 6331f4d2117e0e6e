//! Unit-norm appearance embeddings, the triplet margin loss and triplet
//! sampling over annotated sequences.

mod sampling;

pub use sampling::{sample_triplets, LeafTime, SamplingStrategy, TripletSpec, MAX_ATTEMPTS};

use crate::error::{Error, Result};

/// Embedding size used when a run does not configure one.
pub const DEFAULT_DIM: usize = 128;

/// Triplet margin used during training.
pub const DEFAULT_MARGIN: f64 = 0.3;

const UNIT_SLACK: f64 = 4.0 * f64::EPSILON;

/// An L2-normalized feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding(Vec<f64>);

impl Embedding {
    /// Normalizes `values` to unit length. Zero, empty or non-finite vectors
    /// are rejected. Vectors already unit-norm to within rounding are kept
    /// bit-for-bit, so normalization is idempotent.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        let norm = l2_norm(&values);
        if values.is_empty() || !norm.is_finite() || norm == 0.0 {
            return Err(Error::DegenerateEmbedding);
        }
        if (norm - 1.0).abs() > UNIT_SLACK {
            values.iter_mut().for_each(|x| *x /= norm);
        }
        Ok(Self(values))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.0)
    }

    /// `normalize(alpha * self + (1 - alpha) * other)`.
    ///
    /// Falls back to `other` when the blend cancels out (antipodal inputs at
    /// `alpha = 0.5`).
    pub fn blend(&self, other: &Embedding, alpha: f64) -> Result<Embedding> {
        check_dim(self.dim(), other.dim())?;
        let mixed: Vec<f64> = self.0.iter().zip(&other.0).map(|(p, e)| alpha * p + (1.0 - alpha) * e).collect();
        match Embedding::new(mixed) {
            Err(Error::DegenerateEmbedding) => Ok(other.clone()),
            r => r,
        }
    }
}

pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Cosine similarity; on unit vectors this is the dot product.
pub fn cosine_similarity(a: &Embedding, b: &Embedding) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    Ok(dot(&a.0, &b.0).clamp(-1.0, 1.0))
}

/// Hinge loss value and its subgradient with respect to each input.
#[derive(Debug, Clone, PartialEq)]
pub struct TripletLoss {
    pub loss: f64,
    pub grad_anchor: Vec<f64>,
    pub grad_positive: Vec<f64>,
    pub grad_negative: Vec<f64>,
}

/// `max(0, |a - p|^2 - |a - n|^2 + margin)` on normalized embeddings.
pub fn triplet_margin_loss(
    anchor: &Embedding,
    positive: &Embedding,
    negative: &Embedding,
    margin: f64,
) -> Result<TripletLoss> {
    triplet_margin_loss_raw(&anchor.0, &positive.0, &negative.0, margin)
}

/// Triplet margin loss on unconstrained vectors. Gradients treat each input
/// as a free vector; they are all zero when the hinge is inactive.
pub fn triplet_margin_loss_raw(anchor: &[f64], positive: &[f64], negative: &[f64], margin: f64) -> Result<TripletLoss> {
    check_dim(anchor.len(), positive.len())?;
    check_dim(anchor.len(), negative.len())?;
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(Error::InvalidParams(format!("margin must be >= 0, got {margin}")));
    }
    let d_ap = squared_distance(anchor, positive);
    let d_an = squared_distance(anchor, negative);
    let raw = d_ap - d_an + margin;
    let d = anchor.len();
    if raw <= 0.0 {
        return Ok(TripletLoss {
            loss: 0.0,
            grad_anchor: vec![0.0; d],
            grad_positive: vec![0.0; d],
            grad_negative: vec![0.0; d],
        });
    }
    let mut grad_anchor = Vec::with_capacity(d);
    let mut grad_positive = Vec::with_capacity(d);
    let mut grad_negative = Vec::with_capacity(d);
    for k in 0..d {
        grad_anchor.push(2.0 * (negative[k] - positive[k]));
        grad_positive.push(2.0 * (positive[k] - anchor[k]));
        grad_negative.push(2.0 * (anchor[k] - negative[k]));
    }
    Ok(TripletLoss { loss: raw, grad_anchor, grad_positive, grad_negative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(v: &[f64]) -> Embedding {
        Embedding::new(v.to_vec()).unwrap()
    }

    fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        Embedding::new(v).unwrap().into_inner()
    }

    #[test]
    fn normalizes_on_construction() {
        let x = e(&[3.0, 4.0]);
        assert_eq!(x.as_slice(), &[0.6, 0.8]);
        assert!(Embedding::new(vec![0.0, 0.0]).is_err());
        assert!(Embedding::new(vec![]).is_err());
        assert!(Embedding::new(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn normalization_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let x = random_unit(&mut rng, 16);
            assert_eq!(Embedding::new(x.clone()).unwrap().into_inner(), x);
        }
    }

    #[test]
    fn cosine_fixtures() {
        let a = e(&[0.3, -0.2, 0.9]);
        assert!((cosine_similarity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        let neg = e(&[-0.3, 0.2, -0.9]);
        assert!((cosine_similarity(&a, &neg).unwrap() + 1.0).abs() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = cosine_similarity(&e(&[1.0, 0.0]), &e(&[h, h])).unwrap();
        assert!((s - h).abs() < 1e-12);
        assert!(cosine_similarity(&e(&[1.0, 0.0]), &e(&[1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn blend_renormalizes() {
        let p = e(&[1.0, 0.0]);
        let b = p.blend(&e(&[0.0, 1.0]), 0.5).unwrap();
        assert!((b.as_slice()[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((b.as_slice()[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(p.blend(&p, 0.5).unwrap(), p);
    }

    #[test]
    fn loss_inactive_hinge() {
        // a = p, |a - n|^2 = 1
        let a = [1.0, 0.0];
        let n = [1.0, 1.0];
        let out = triplet_margin_loss_raw(&a, &a, &n, 0.3).unwrap();
        assert_eq!(out.loss, 0.0);
        assert!(out.grad_anchor.iter().chain(&out.grad_positive).chain(&out.grad_negative).all(|&g| g == 0.0));
    }

    #[test]
    fn loss_with_coincident_negative() {
        // a = n, |a - p|^2 = 0.5 -> 0.5 - 0 + 0.3
        let a = [1.0, 0.0];
        let p = [1.0 - 0.5f64.sqrt(), 0.0];
        let out = triplet_margin_loss_raw(&a, &p, &a, 0.3).unwrap();
        assert!((out.loss - 0.8).abs() < 1e-12);
    }

    #[test]
    fn loss_rejects_bad_inputs() {
        assert!(triplet_margin_loss_raw(&[1.0], &[1.0, 0.0], &[1.0], 0.3).is_err());
        assert!(triplet_margin_loss_raw(&[1.0], &[1.0], &[1.0], -0.1).is_err());
    }

    fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
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

    fn rel_err(a: &[f64], b: &[f64]) -> f64 {
        let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        let scale = l2_norm(a).max(l2_norm(b));
        if scale == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }

    #[test]
    fn gradients_match_finite_differences_d8() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut checked = 0;
        while checked < 20 {
            let (a, p, n) = (random_unit(&mut rng, 8), random_unit(&mut rng, 8), random_unit(&mut rng, 8));
            let m = 0.3;
            let hinge = squared_distance(&a, &p) - squared_distance(&a, &n) + m;
            if hinge.abs() < 1e-3 {
                continue;
            }
            let out = triplet_margin_loss_raw(&a, &p, &n, m).unwrap();
            let fa = central_difference(|x| triplet_margin_loss_raw(x, &p, &n, m).unwrap().loss, &a, 1e-6);
            let fp = central_difference(|x| triplet_margin_loss_raw(&a, x, &n, m).unwrap().loss, &p, 1e-6);
            let fn_ = central_difference(|x| triplet_margin_loss_raw(&a, &p, x, m).unwrap().loss, &n, 1e-6);
            assert!(rel_err(&out.grad_anchor, &fa) < 1e-5);
            assert!(rel_err(&out.grad_positive, &fp) < 1e-5);
            assert!(rel_err(&out.grad_negative, &fn_) < 1e-5);
            checked += 1;
        }
    }

    proptest! {
        #[test]
        fn loss_is_nonnegative_and_zero_iff_separated(
            seed in 0u64..10_000, m in 0.0..1.0f64,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, p, n) = (random_unit(&mut rng, 6), random_unit(&mut rng, 6), random_unit(&mut rng, 6));
            let out = triplet_margin_loss_raw(&a, &p, &n, m).unwrap();
            prop_assert!(out.loss >= 0.0);
            let separated = squared_distance(&a, &p) + m <= squared_distance(&a, &n);
            prop_assert_eq!(out.loss == 0.0, separated);
        }
    }
}
