//! The key-holding observer: calibration, attribution, linking, and usage
//! monitoring against a detector bank.
//!
//! This observer owns every deployment key, so it can score a text under
//! each entity's detector and compare. All decisions run through
//! per-entity thresholds calibrated on null scores, which pins the
//! per-detector false positive rate without distributional assumptions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry::DetectorBank;
use crate::toylm::TokenSeq;

/// Fewest null scores per key accepted for calibration; below this the
/// empirical quantile is too coarse to hold a small false positive rate.
pub const MIN_NULLS_PER_KEY: usize = 100;

/// Per-entity decision thresholds at a common target false positive rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTable {
    /// Threshold for entity `e` at index `e`; a score attributes to `e`
    /// only if it exceeds `thresholds[e]` strictly.
    pub thresholds: Vec<f64>,
    pub target_fpr: f64,
    /// Smallest per-key null sample count that went into the table.
    pub null_sample_count: usize,
}

/// Upper-tail order-statistic threshold: with `n` sorted null scores, the
/// rank `ceil((1 - alpha)(n + 1))` value (1-indexed, clamped to `[1, n]`),
/// so that a fresh null exceeds it with probability at most `alpha`.
pub fn order_stat_threshold(nulls: &[f64], target_fpr: f64) -> Result<f64> {
    if nulls.is_empty() {
        return Err(Error::InsufficientNulls("no null scores supplied".into()));
    }
    if !(target_fpr > 0.0 && target_fpr < 1.0) {
        return Err(Error::InvalidSpec(format!(
            "target false positive rate must lie in (0, 1), got {target_fpr}"
        )));
    }
    if nulls.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSpec("null scores must be finite".into()));
    }
    let mut sorted = nulls.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let rank = ((1.0 - target_fpr) * (n + 1) as f64).ceil() as usize;
    let rank = rank.clamp(1, n);
    Ok(sorted[rank - 1])
}

/// Builds a calibration table from per-key null scores, in entity order.
/// Each key needs at least [`MIN_NULLS_PER_KEY`] samples.
pub fn calibrate(nulls_per_key: &[Vec<f64>], target_fpr: f64) -> Result<CalibrationTable> {
    if nulls_per_key.is_empty() {
        return Err(Error::InsufficientNulls("no keys to calibrate".into()));
    }
    let mut smallest = usize::MAX;
    for (e, nulls) in nulls_per_key.iter().enumerate() {
        if nulls.len() < MIN_NULLS_PER_KEY {
            return Err(Error::InsufficientNulls(format!(
                "key {e} has {} null scores, need at least {MIN_NULLS_PER_KEY}",
                nulls.len()
            )));
        }
        smallest = smallest.min(nulls.len());
    }
    let thresholds = nulls_per_key
        .iter()
        .map(|nulls| order_stat_threshold(nulls, target_fpr))
        .collect::<Result<Vec<_>>>()?;
    Ok(CalibrationTable {
        thresholds,
        target_fpr,
        null_sample_count: smallest,
    })
}

/// Scores `x` under every detector in the bank, ascending entity order.
pub fn score_all(bank: &DetectorBank, x: &TokenSeq) -> Result<Vec<f64>> {
    (0..bank.n_entities()).map(|e| Ok(bank.score_one(e, x)?.z)).collect()
}

/// Argmax attribution over a score vector, ties to the lowest entity id.
pub fn attribute(scores: &[f64]) -> Result<usize> {
    if scores.is_empty() {
        return Err(Error::InvalidCount("empty score vector".into()));
    }
    if scores.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSpec("scores must be finite".into()));
    }
    let mut best = 0usize;
    for (e, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = e;
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribution {
    Entity(usize),
    Unattributed,
}

/// Argmax attribution gated by the winner's own threshold: the best-scoring
/// entity is returned only when its score strictly exceeds its calibrated
/// threshold; otherwise the text stays unattributed.
pub fn attribute_thresholded(scores: &[f64], table: &CalibrationTable) -> Result<Attribution> {
    if scores.len() != table.thresholds.len() {
        return Err(Error::SizeMismatch(format!(
            "{} scores against {} thresholds",
            scores.len(),
            table.thresholds.len()
        )));
    }
    let best = attribute(scores)?;
    if scores[best] > table.thresholds[best] {
        Ok(Attribution::Entity(best))
    } else {
        Ok(Attribution::Unattributed)
    }
}

/// Attribution quality over a labeled test set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributionReport {
    pub n_entities: usize,
    pub samples_per_entity: usize,
    /// Fraction of all test samples whose thresholded attribution named
    /// their true entity.
    pub top1_tpr_at_fpr: f64,
    pub target_fpr: f64,
    /// `confusion[t][a]`: samples of true entity `t` attributed to `a`.
    pub confusion: Vec<Vec<usize>>,
    /// Samples of each true entity left unattributed.
    pub unattributed: Vec<usize>,
    pub unattributed_count: usize,
}

/// Runs thresholded attribution over a labeled test set and tallies the
/// confusion structure. Every sample must carry a true entity label and
/// every entity must contribute the same number of samples, so the rate is
/// an unweighted average.
pub fn evaluate_attribution(
    bank: &DetectorBank,
    table: &CalibrationTable,
    test: &[TokenSeq],
) -> Result<AttributionReport> {
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let n = bank.n_entities();
    if table.thresholds.len() != n {
        return Err(Error::SizeMismatch(format!(
            "bank of {n} entities against {} thresholds",
            table.thresholds.len()
        )));
    }
    let mut per_entity = vec![0usize; n];
    for x in test {
        match x.true_entity {
            Some(e) if e < n => per_entity[e] += 1,
            Some(e) => {
                return Err(Error::InvalidCount(format!(
                    "label {e} is off a roster of {n} entities"
                )))
            }
            None => return Err(Error::MissingLabel("test sample lacks an entity label".into())),
        }
    }
    let samples_per_entity = per_entity[0];
    if samples_per_entity == 0 || per_entity.iter().any(|&c| c != samples_per_entity) {
        return Err(Error::InvalidCount(format!(
            "uneven per-entity test counts {per_entity:?}"
        )));
    }
    let mut confusion = vec![vec![0usize; n]; n];
    let mut unattributed = vec![0usize; n];
    let mut correct = 0usize;
    for x in test {
        let truth = x.true_entity.unwrap();
        let scores = score_all(bank, x)?;
        match attribute_thresholded(&scores, table)? {
            Attribution::Entity(e) => {
                confusion[truth][e] += 1;
                if e == truth {
                    correct += 1;
                }
            }
            Attribution::Unattributed => unattributed[truth] += 1,
        }
    }
    let unattributed_count = unattributed.iter().sum();
    Ok(AttributionReport {
        n_entities: n,
        samples_per_entity,
        top1_tpr_at_fpr: correct as f64 / test.len() as f64,
        target_fpr: table.target_fpr,
        confusion,
        unattributed,
        unattributed_count,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkDecision {
    Linked,
    Unlinked,
    Undecided,
}

/// Decides whether two texts came from the same entity: linked when both
/// attribute to the same entity, unlinked when both attribute but to
/// different entities, undecided when either stays unattributed.
pub fn link(
    bank: &DetectorBank,
    table: &CalibrationTable,
    a: &TokenSeq,
    b: &TokenSeq,
) -> Result<LinkDecision> {
    let attr_a = attribute_thresholded(&score_all(bank, a)?, table)?;
    let attr_b = attribute_thresholded(&score_all(bank, b)?, table)?;
    Ok(match (attr_a, attr_b) {
        (Attribution::Entity(x), Attribution::Entity(y)) if x == y => LinkDecision::Linked,
        (Attribution::Entity(_), Attribution::Entity(_)) => LinkDecision::Unlinked,
        _ => LinkDecision::Undecided,
    })
}

/// Attributed usage per time bucket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UsageTable {
    pub bucket_len: u64,
    pub n_entities: usize,
    /// Bucket index (timestamp / bucket_len) to per-entity counts; the
    /// final slot counts unattributed events. Every event lands in exactly
    /// one slot of one bucket.
    pub buckets: BTreeMap<u64, Vec<usize>>,
}

impl UsageTable {
    /// Total events recorded across all buckets and slots.
    pub fn total_events(&self) -> usize {
        self.buckets.values().map(|c| c.iter().sum::<usize>()).sum()
    }
}

/// Buckets timestamped events by `timestamp / bucket_len` and counts the
/// thresholded attribution of each event's text within its bucket.
pub fn monitor_usage(
    bank: &DetectorBank,
    table: &CalibrationTable,
    events: &[(u64, TokenSeq)],
    bucket_len: u64,
) -> Result<UsageTable> {
    if bucket_len == 0 {
        return Err(Error::InvalidLength("bucket_len must be positive".into()));
    }
    let n = bank.n_entities();
    if table.thresholds.len() != n {
        return Err(Error::SizeMismatch(format!(
            "bank of {n} entities against {} thresholds",
            table.thresholds.len()
        )));
    }
    let mut buckets: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (ts, x) in events {
        let slot = match attribute_thresholded(&score_all(bank, x)?, table)? {
            Attribution::Entity(e) => e,
            Attribution::Unattributed => n,
        };
        buckets.entry(ts / bucket_len).or_insert_with(|| vec![0; n + 1])[slot] += 1;
    }
    Ok(UsageTable {
        bucket_len,
        n_entities: n,
        buckets,
    })
}
