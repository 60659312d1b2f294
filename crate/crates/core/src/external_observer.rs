//! The keyless observer: bag-of-ngram features and a softmax classifier
//! trained to guess the source entity from text alone.
//!
//! This observer never sees a watermark key. Whatever it learns comes
//! from distributional fingerprints the embedding leaves in token and
//! token-pair frequencies, which is exactly the leakage the experiments
//! quantify.
//!
//! The classifier is multinomial logistic regression trained by
//! mini-batch gradient descent. Weights are stored feature-major
//! (`weights[feature * n_classes + class]`) so the sparse update for one
//! example touches contiguous memory. A dense reference implementation of
//! the objective and gradient, [`dense_loss_and_grad`], backs the
//! optimized path in tests.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, RandomStream};
use crate::toylm::TokenSeq;

/// Largest usable vocabulary; bigram indices must fit in 32 bits.
pub const MAX_FEATURE_VOCAB: usize = u16::MAX as usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureConfig {
    /// Include adjacent-pair counts next to the unigram counts.
    pub use_bigrams: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig { use_bigrams: true }
    }
}

impl FeatureConfig {
    /// Feature space width for a vocabulary: `V` unigram slots, plus
    /// `V * V` bigram slots when enabled.
    pub fn dim(&self, vocab_size: usize) -> usize {
        if self.use_bigrams {
            vocab_size + vocab_size * vocab_size
        } else {
            vocab_size
        }
    }
}

/// A sparse L2-normalized feature vector; `indices` ascend.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub indices: Vec<u32>,
    pub values: Vec<f64>,
    pub dim: usize,
}

/// Counts unigrams (and adjacent bigrams when enabled) over the generated
/// tokens of `x` and L2-normalizes. Token `t` maps to index `t`; the pair
/// `(a, b)` maps to `V + a * V + b`.
pub fn featurize(x: &TokenSeq, vocab_size: usize, cfg: &FeatureConfig) -> Result<FeatureVector> {
    if vocab_size < 2 || vocab_size > MAX_FEATURE_VOCAB {
        return Err(Error::InvalidSpec(format!(
            "feature vocabulary must lie in [2, {MAX_FEATURE_VOCAB}], got {vocab_size}"
        )));
    }
    if x.tokens.is_empty() {
        return Err(Error::EmptyOutput);
    }
    if let Some(&t) = x.tokens.iter().find(|&&t| t as usize >= vocab_size) {
        return Err(Error::InvalidSpec(format!(
            "token {t} is outside the vocabulary of {vocab_size}"
        )));
    }
    let v = vocab_size as u64;
    let mut counts: std::collections::HashMap<u32, u64> = std::collections::HashMap::new();
    for &t in &x.tokens {
        *counts.entry(t).or_insert(0) += 1;
    }
    if cfg.use_bigrams {
        for pair in x.tokens.windows(2) {
            let idx = v + pair[0] as u64 * v + pair[1] as u64;
            *counts.entry(idx as u32).or_insert(0) += 1;
        }
    }
    let mut entries: Vec<(u32, u64)> = counts.into_iter().collect();
    entries.sort_unstable_by_key(|&(i, _)| i);
    let norm = entries
        .iter()
        .map(|&(_, c)| (c * c) as f64)
        .sum::<f64>()
        .sqrt();
    Ok(FeatureVector {
        indices: entries.iter().map(|&(i, _)| i).collect(),
        values: entries.iter().map(|&(_, c)| c as f64 / norm).collect(),
        dim: cfg.dim(vocab_size),
    })
}

/// Labeled feature vectors with a fixed class roster.
#[derive(Clone, Debug)]
pub struct LabeledDataset {
    pub examples: Vec<(Arc<FeatureVector>, usize)>,
    pub n_classes: usize,
}

impl LabeledDataset {
    pub fn new(examples: Vec<(Arc<FeatureVector>, usize)>, n_classes: usize) -> Result<Self> {
        if n_classes < 2 {
            return Err(Error::InvalidCount(format!(
                "need at least 2 classes, got {n_classes}"
            )));
        }
        let mut dim = None;
        for (x, y) in &examples {
            if *y >= n_classes {
                return Err(Error::InvalidCount(format!(
                    "label {y} is off a roster of {n_classes} classes"
                )));
            }
            match dim {
                None => dim = Some(x.dim),
                Some(d) if d != x.dim => {
                    return Err(Error::SizeMismatch(format!(
                        "feature widths differ, {d} against {}",
                        x.dim
                    )))
                }
                _ => {}
            }
        }
        Ok(LabeledDataset { examples, n_classes })
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainHyper {
    pub learning_rate: f64,
    pub l2: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainHyper {
    fn default() -> Self {
        TrainHyper {
            learning_rate: 2.0,
            l2: 1e-4,
            epochs: 30,
            batch_size: 32,
            seed: 7,
        }
    }
}

impl TrainHyper {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "learning_rate must be positive and finite, got {}",
                self.learning_rate
            )));
        }
        if !(self.l2.is_finite() && self.l2 >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "l2 must be nonnegative and finite, got {}",
                self.l2
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidCount("batch_size must be positive".into()));
        }
        Ok(())
    }
}

/// A trained softmax classifier over sparse features.
#[derive(Clone, Debug, PartialEq)]
pub struct Classifier {
    pub n_classes: usize,
    pub dim: usize,
    /// Feature-major weights, `weights[feature * n_classes + class]`.
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl Classifier {
    pub fn weight(&self, feature: usize, class: usize) -> f64 {
        self.weights[feature * self.n_classes + class]
    }

    pub fn bias(&self, class: usize) -> f64 {
        self.bias[class]
    }

    /// Class logits for one example.
    pub fn logits(&self, x: &FeatureVector) -> Result<Vec<f64>> {
        if x.dim != self.dim {
            return Err(Error::SizeMismatch(format!(
                "feature width {} against classifier width {}",
                x.dim, self.dim
            )));
        }
        let n = self.n_classes;
        let mut logits = self.bias.clone();
        for (j, &i) in x.indices.iter().enumerate() {
            let xv = x.values[j];
            let row = &self.weights[i as usize * n..(i as usize + 1) * n];
            for (l, &w) in logits.iter_mut().zip(row) {
                *l += w * xv;
            }
        }
        Ok(logits)
    }
}

/// Numerically stable softmax, in place.
fn softmax(logits: &mut [f64]) {
    let top = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for l in logits.iter_mut() {
        *l = (*l - top).exp();
        total += *l;
    }
    for l in logits.iter_mut() {
        *l /= total;
    }
}

/// Trains multinomial logistic regression from a zero initialization.
///
/// Each epoch shuffles the examples with a stream derived from
/// `(seed, epoch)` and walks them in mini-batches. A batch is exact
/// gradient descent: probabilities for every member are computed at the
/// incoming weights, then the averaged update is applied. L2 decay
/// multiplies the weight matrix by `1 - learning_rate * l2` per batch,
/// tracked as a lazy scalar so the sparse path never sweeps the dense
/// matrix; the bias is not regularized.
pub fn train(data: &LabeledDataset, hyper: &TrainHyper) -> Result<Classifier> {
    hyper.validate()?;
    if data.is_empty() {
        return Err(Error::InvalidCount("empty training set".into()));
    }
    let n = data.n_classes;
    let dim = data.examples[0].0.dim;
    let mut present = vec![false; n];
    for (_, y) in &data.examples {
        present[*y] = true;
    }
    if let Some(missing) = present.iter().position(|&p| !p) {
        return Err(Error::MissingClass(format!(
            "class {missing} has no training examples"
        )));
    }
    let mut weights = vec![0.0f64; dim * n];
    let mut bias = vec![0.0f64; n];
    let mut scale = 1.0f64;
    let decay = 1.0 - hyper.learning_rate * hyper.l2;
    if decay <= 0.0 {
        return Err(Error::InvalidSpec(format!(
            "learning_rate {} with l2 {} wipes the weights each batch",
            hyper.learning_rate, hyper.l2
        )));
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut probs_buf: Vec<Vec<f64>> = Vec::new();
    for epoch in 0..hyper.epochs {
        let mut stream = RandomStream::from_seed(derive_seed(hyper.seed, &[epoch as u32]));
        stream.shuffle(&mut order);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(hyper.batch_size) {
            probs_buf.clear();
            for &idx in batch {
                let (x, y) = &data.examples[idx];
                let mut logits = bias.clone();
                for (j, &i) in x.indices.iter().enumerate() {
                    let sx = scale * x.values[j];
                    let row = &weights[i as usize * n..(i as usize + 1) * n];
                    for (l, &w) in logits.iter_mut().zip(row) {
                        *l += w * sx;
                    }
                }
                softmax(&mut logits);
                epoch_loss += -logits[*y].ln();
                probs_buf.push(logits);
            }
            if hyper.l2 > 0.0 {
                scale *= decay;
                // Fold the scalar back in before it loses precision.
                if scale < 1e-12 {
                    for w in weights.iter_mut() {
                        *w *= scale;
                    }
                    scale = 1.0;
                }
            }
            let step = hyper.learning_rate / batch.len() as f64;
            for (&idx, probs) in batch.iter().zip(&probs_buf) {
                let (x, y) = &data.examples[idx];
                for (c, b) in bias.iter_mut().enumerate() {
                    let delta = probs[c] - f64::from(c == *y);
                    *b -= step * delta;
                }
                for (j, &i) in x.indices.iter().enumerate() {
                    let f = step * x.values[j] / scale;
                    let row = &mut weights[i as usize * n..(i as usize + 1) * n];
                    for (c, w) in row.iter_mut().enumerate() {
                        *w -= f * (probs[c] - f64::from(c == *y));
                    }
                }
            }
        }
        if !epoch_loss.is_finite() {
            return Err(Error::NonFiniteLoss(format!(
                "training loss diverged in epoch {epoch}"
            )));
        }
    }
    if scale != 1.0 {
        for w in weights.iter_mut() {
            *w *= scale;
        }
    }
    Ok(Classifier {
        n_classes: n,
        dim,
        weights,
        bias,
    })
}

/// Mean cross-entropy with an L2 penalty, and its exact gradient, over a
/// full example set at the given dense parameters. The reference
/// implementation for the optimized training path.
///
/// Objective: `mean_i -ln p(y_i | x_i) + (l2 / 2) ||W||^2`, bias
/// unpenalized. Weight layout matches [`Classifier`], feature-major.
pub fn dense_loss_and_grad(
    weights: &[f64],
    bias: &[f64],
    examples: &[(Arc<FeatureVector>, usize)],
    n_classes: usize,
    l2: f64,
) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    if examples.is_empty() {
        return Err(Error::InvalidCount("empty example set".into()));
    }
    let dim = examples[0].0.dim;
    if weights.len() != dim * n_classes || bias.len() != n_classes {
        return Err(Error::SizeMismatch(format!(
            "parameter shape ({}, {}) against dim {dim} and {n_classes} classes",
            weights.len(),
            bias.len()
        )));
    }
    let m = examples.len() as f64;
    let mut loss = 0.0;
    let mut grad_w = vec![0.0f64; dim * n_classes];
    let mut grad_b = vec![0.0f64; n_classes];
    for (x, y) in examples {
        if x.dim != dim {
            return Err(Error::SizeMismatch(format!(
                "feature widths differ, {dim} against {}",
                x.dim
            )));
        }
        let mut logits = bias.to_vec();
        for (j, &i) in x.indices.iter().enumerate() {
            let xv = x.values[j];
            let row = &weights[i as usize * n_classes..(i as usize + 1) * n_classes];
            for (l, &w) in logits.iter_mut().zip(row) {
                *l += w * xv;
            }
        }
        softmax(&mut logits);
        loss += -logits[*y].ln() / m;
        for c in 0..n_classes {
            let delta = (logits[c] - f64::from(c == *y)) / m;
            grad_b[c] += delta;
            for (j, &i) in x.indices.iter().enumerate() {
                grad_w[i as usize * n_classes + c] += delta * x.values[j];
            }
        }
    }
    if l2 > 0.0 {
        for (g, &w) in grad_w.iter_mut().zip(weights) {
            *g += l2 * w;
        }
        loss += 0.5 * l2 * weights.iter().map(|w| w * w).sum::<f64>();
    }
    Ok((loss, grad_w, grad_b))
}

/// The `k` most probable classes for `x`, descending, ties to the lower
/// class id.
pub fn predict_topk(clf: &Classifier, x: &FeatureVector, k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > clf.n_classes {
        return Err(Error::BadK(format!(
            "k must lie in [1, {}], got {k}",
            clf.n_classes
        )));
    }
    let logits = clf.logits(x)?;
    let mut order: Vec<usize> = (0..clf.n_classes).collect();
    order.sort_by(|&a, &b| {
        logits[b]
            .partial_cmp(&logits[a])
            .expect("logits are finite")
            .then(a.cmp(&b))
    });
    order.truncate(k);
    Ok(order)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalMetrics {
    pub top1: f64,
    pub topk: f64,
    pub k: usize,
}

/// Top-1 and top-k accuracy over a labeled test set, with
/// `k = min(3, n_classes)`.
pub fn evaluate(clf: &Classifier, test: &LabeledDataset) -> Result<EvalMetrics> {
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    if test.n_classes != clf.n_classes {
        return Err(Error::SizeMismatch(format!(
            "test roster of {} classes against classifier with {}",
            test.n_classes, clf.n_classes
        )));
    }
    let k = 3.min(clf.n_classes);
    let mut top1 = 0usize;
    let mut topk = 0usize;
    for (x, y) in &test.examples {
        let picks = predict_topk(clf, x, k)?;
        if picks[0] == *y {
            top1 += 1;
        }
        if picks.contains(y) {
            topk += 1;
        }
    }
    Ok(EvalMetrics {
        top1: top1 as f64 / test.len() as f64,
        topk: topk as f64 / test.len() as f64,
        k,
    })
}

/// Accuracy as a function of training set size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearningCurve {
    /// Training samples per entity at each point.
    pub counts: Vec<usize>,
    pub top1: Vec<f64>,
    pub topk: Vec<f64>,
    pub k: usize,
}

/// Trains a fresh classifier on the first `c` pool samples of every
/// entity for each `c` in `counts` and evaluates each on `test`.
///
/// The pool must be entity-major: all of entity 0's samples, then entity
/// 1's, and so on, in equal numbers. Counts must be strictly increasing
/// and fit the pool.
pub fn learning_curve(
    pool: &LabeledDataset,
    test: &LabeledDataset,
    counts: &[usize],
    hyper: &TrainHyper,
) -> Result<LearningCurve> {
    if counts.is_empty() {
        return Err(Error::InvalidCount("no curve points requested".into()));
    }
    if counts[0] == 0 || counts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidCount(format!(
            "counts must be positive and strictly increasing, got {counts:?}"
        )));
    }
    let n = pool.n_classes;
    if pool.is_empty() || pool.len() % n != 0 {
        return Err(Error::InsufficientPool(format!(
            "pool of {} does not split evenly over {n} entities",
            pool.len()
        )));
    }
    let per_entity = pool.len() / n;
    for (i, (_, y)) in pool.examples.iter().enumerate() {
        if *y != i / per_entity {
            return Err(Error::InvalidSpec(format!(
                "pool must be entity-major, example {i} has label {y}"
            )));
        }
    }
    let top = *counts.last().unwrap();
    if top > per_entity {
        return Err(Error::InsufficientPool(format!(
            "largest count {top} exceeds the {per_entity} pool samples per entity"
        )));
    }
    let mut top1 = Vec::with_capacity(counts.len());
    let mut topk = Vec::with_capacity(counts.len());
    let mut k = 3.min(n);
    for &c in counts {
        let mut subset = Vec::with_capacity(c * n);
        for e in 0..n {
            subset.extend_from_slice(&pool.examples[e * per_entity..e * per_entity + c]);
        }
        let clf = train(&LabeledDataset::new(subset, n)?, hyper)?;
        let metrics = evaluate(&clf, test)?;
        top1.push(metrics.top1);
        topk.push(metrics.topk);
        k = metrics.k;
    }
    Ok(LearningCurve {
        counts: counts.to_vec(),
        top1,
        topk,
        k,
    })
}
