//! Scenario orchestration: one config in, one reproducible report out.
//!
//! A scenario builds a model, a prompt pool, and a key registry from a
//! master seed, generates per-entity train and test corpora, runs the
//! requested observers, and assembles the results into a serializable
//! report. Every random decision flows through seeds derived from the
//! master seed along tagged paths, so a report is a pure function of its
//! config; concurrent generation only partitions work, never reorders
//! draws.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::external_observer::{
    self, FeatureConfig, LabeledDataset, LearningCurve, TrainHyper, MAX_FEATURE_VOCAB,
};
use crate::internal_observer::{self, AttributionReport, MIN_NULLS_PER_KEY};
use crate::registry::{assign_keys, detector_bank, DeploymentMode, EntityRegistry};
use crate::rng::{derive_seed, fnv1a64_bytes, splitmix64, RandomStream};
use crate::schemes::{ExpSampler, KgwSampler, SchemeConfig, SchemeKind};
use crate::toylm::{
    build_model, build_prompt_pool, generate, Model, ModelSpec, PlainSampler, Prompt, PromptPool,
    TokenSampler, TokenSeq,
};

/// Seed-path tags. Each derived stream hangs off the master seed under
/// one of these words, so no two stages ever share a stream.
pub const TAG_MODEL: u32 = 1;
pub const TAG_POOL: u32 = 2;
pub const TAG_SPLIT: u32 = 3;
pub const TAG_SCHEDULE: u32 = 4;
pub const TAG_SAMPLE: u32 = 5;
pub const TAG_TRAIN: u32 = 6;

/// Corpus salts keep train and test generation streams disjoint even for
/// equal entity and sample indices.
pub const TRAIN_SALT: u32 = 1;
pub const TEST_SALT: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observer {
    Internal,
    External,
}

/// Watermark parameters as they appear in a scenario config; the vocab
/// comes from the model spec.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SchemeSettings {
    pub kind: SchemeKind,
    pub gamma: f64,
    pub delta: f64,
    pub context_h: usize,
}

impl Default for SchemeSettings {
    fn default() -> Self {
        SchemeSettings {
            kind: SchemeKind::Kgw,
            gamma: 0.25,
            delta: 2.0,
            context_h: 1,
        }
    }
}

impl SchemeSettings {
    pub fn to_config(self, vocab_size: usize) -> SchemeConfig {
        SchemeConfig {
            kind: self.kind,
            gamma: self.gamma,
            delta: self.delta,
            context_h: self.context_h,
            vocab_size,
        }
    }
}

fn default_n_entities() -> usize {
    4
}
fn default_deployment() -> DeploymentMode {
    DeploymentMode::PerEntity
}
fn default_gen_length() -> usize {
    256
}
fn default_pool_size() -> usize {
    64
}
fn default_prompt_len() -> usize {
    8
}
fn default_train_frac() -> f64 {
    0.8
}
fn default_train_samples() -> usize {
    200
}
fn default_test_samples() -> usize {
    100
}
fn default_target_fpr() -> f64 {
    0.01
}
fn default_observers() -> Vec<Observer> {
    vec![Observer::Internal, Observer::External]
}
fn default_curve_counts() -> Vec<usize> {
    vec![50, 100, 200]
}
fn default_workers() -> usize {
    1
}

/// Everything a scenario run depends on. Serializable, and a report is a
/// pure function of it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_n_entities")]
    pub n_entities: usize,
    #[serde(default = "default_deployment")]
    pub deployment: DeploymentMode,
    #[serde(default)]
    pub scheme: SchemeSettings,
    #[serde(default)]
    pub model: ModelSpec,
    #[serde(default = "default_gen_length")]
    pub gen_length: usize,
    #[serde(default = "default_pool_size")]
    pub prompt_pool_size: usize,
    #[serde(default = "default_prompt_len")]
    pub prompt_len: usize,
    #[serde(default = "default_train_frac")]
    pub prompt_train_frac: f64,
    #[serde(default = "default_train_samples")]
    pub train_samples_per_entity: usize,
    #[serde(default = "default_test_samples")]
    pub test_samples_per_entity: usize,
    #[serde(default = "default_target_fpr")]
    pub target_fpr: f64,
    #[serde(default = "default_observers")]
    pub observers: Vec<Observer>,
    #[serde(default = "default_curve_counts")]
    pub curve_counts: Vec<usize>,
    #[serde(default)]
    pub features: FeatureConfig,
    #[serde(default)]
    pub hyper: TrainHyper,
    #[serde(default)]
    pub emit_secrets: bool,
    /// Thread count for corpus generation. Execution plumbing, not part of
    /// the experiment identity: never serialized, so reports and scenario
    /// ids are invariant to it.
    #[serde(default = "default_workers", skip_serializing)]
    pub workers: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config deserializes to defaults")
    }
}

impl ScenarioConfig {
    pub fn has_observer(&self, o: Observer) -> bool {
        self.observers.contains(&o)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_entities == 0 {
            return Err(Error::InvalidCount("n_entities must be positive".into()));
        }
        self.model.validate()?;
        self.scheme.to_config(self.model.vocab_size).validate()?;
        if self.gen_length == 0 {
            return Err(Error::InvalidLength("gen_length must be positive".into()));
        }
        if self.gen_length <= self.scheme.context_h {
            return Err(Error::InvalidLength(format!(
                "gen_length {} leaves no scored positions behind a context of {}",
                self.gen_length, self.scheme.context_h
            )));
        }
        if self.prompt_pool_size < 2 {
            return Err(Error::PoolTooSmall(format!(
                "prompt pool of {} cannot split into train and test",
                self.prompt_pool_size
            )));
        }
        if !(self.prompt_train_frac > 0.0 && self.prompt_train_frac < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "prompt_train_frac must lie in (0, 1), got {}",
                self.prompt_train_frac
            )));
        }
        if self.train_samples_per_entity == 0 || self.test_samples_per_entity == 0 {
            return Err(Error::InvalidCount(
                "train and test samples per entity must be positive".into(),
            ));
        }
        if !(self.target_fpr > 0.0 && self.target_fpr < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "target_fpr must lie in (0, 1), got {}",
                self.target_fpr
            )));
        }
        if self.workers == 0 {
            return Err(Error::InvalidCount("workers must be positive".into()));
        }
        self.hyper.validate()?;
        if self.has_observer(Observer::Internal) {
            if self.deployment == DeploymentMode::None {
                return Err(Error::NoKeys(
                    "the internal observer needs a keyed deployment".into(),
                ));
            }
            let nulls = (self.n_entities - 1) * self.train_samples_per_entity;
            if nulls < MIN_NULLS_PER_KEY {
                return Err(Error::InsufficientNulls(format!(
                    "cross-key calibration would see {nulls} nulls per key, need {MIN_NULLS_PER_KEY}"
                )));
            }
        }
        if self.has_observer(Observer::External) {
            if self.n_entities < 2 {
                return Err(Error::InvalidCount(
                    "the external observer needs at least 2 entities".into(),
                ));
            }
            if self.model.vocab_size > MAX_FEATURE_VOCAB {
                return Err(Error::InvalidSpec(format!(
                    "vocab {} exceeds the feature limit {MAX_FEATURE_VOCAB}",
                    self.model.vocab_size
                )));
            }
            if self.curve_counts.is_empty() {
                return Err(Error::InvalidCount(
                    "the external observer needs at least one curve count".into(),
                ));
            }
            if self.curve_counts[0] == 0
                || self.curve_counts.windows(2).any(|w| w[1] <= w[0])
            {
                return Err(Error::InvalidCount(format!(
                    "curve_counts must be positive and strictly increasing, got {:?}",
                    self.curve_counts
                )));
            }
            if *self.curve_counts.last().unwrap() > self.train_samples_per_entity {
                return Err(Error::InsufficientPool(format!(
                    "largest curve count {} exceeds train_samples_per_entity {}",
                    self.curve_counts.last().unwrap(),
                    self.train_samples_per_entity
                )));
            }
        }
        Ok(())
    }

    /// Hex fingerprint of the canonical config serialization; two runs
    /// share a scenario id exactly when their configs are identical.
    pub fn scenario_id(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        format!("{:016x}", fnv1a64_bytes(json.as_bytes()))
    }
}

/// Splits a prompt pool into train and test prompts by seeded shuffle.
/// The train side gets `round(frac * len)` prompts, clamped so both sides
/// stay nonempty.
pub fn split_prompts(
    pool: &PromptPool,
    frac: f64,
    seed: u64,
) -> Result<(Vec<Prompt>, Vec<Prompt>)> {
    let len = pool.prompts.len();
    if len < 2 {
        return Err(Error::PoolTooSmall(format!(
            "{len} prompts cannot split into train and test"
        )));
    }
    if !(frac > 0.0 && frac < 1.0) {
        return Err(Error::InvalidSpec(format!(
            "train fraction must lie in (0, 1), got {frac}"
        )));
    }
    let mut order: Vec<usize> = (0..len).collect();
    RandomStream::from_seed(seed).shuffle(&mut order);
    let n_train = ((frac * len as f64 + 0.5).floor() as usize).clamp(1, len - 1);
    let train = order[..n_train].iter().map(|&i| pool.prompts[i].clone()).collect();
    let test = order[n_train..].iter().map(|&i| pool.prompts[i].clone()).collect();
    Ok((train, test))
}

fn entity_sampler(
    cfg: &ScenarioConfig,
    registry: &EntityRegistry,
    scheme: &SchemeConfig,
    e: usize,
) -> Result<Box<dyn TokenSampler>> {
    let Some(key) = registry.key_for(e) else {
        return Ok(Box::new(PlainSampler));
    };
    Ok(match cfg.scheme.kind {
        SchemeKind::Exp => Box::new(ExpSampler::new(key, scheme)?),
        _ => Box::new(KgwSampler::new(key, scheme)?),
    })
}

/// Generates `count` samples for every entity over a prompt split.
///
/// Outputs are entity-major: entity `e`'s samples occupy indices
/// `e * count .. (e + 1) * count`. Sample `i` of every entity answers the
/// same prompt (the schedule is derived from `(master, salt, i)` alone),
/// so entities differ only in their keys, never in prompt mix. Each
/// (entity, sample) pair draws from its own derived stream, which makes
/// the corpus independent of worker count.
pub fn generate_corpus(
    cfg: &ScenarioConfig,
    model: &Model,
    registry: &EntityRegistry,
    prompts: &[Prompt],
    count: usize,
    corpus_salt: u32,
) -> Result<Vec<TokenSeq>> {
    if prompts.is_empty() {
        return Err(Error::PoolTooSmall("no prompts to generate from".into()));
    }
    if count == 0 {
        return Err(Error::InvalidCount("count must be positive".into()));
    }
    let n = registry.n_entities();
    let scheme = cfg.scheme.to_config(cfg.model.vocab_size);
    let samplers: Vec<Box<dyn TokenSampler>> = (0..n)
        .map(|e| entity_sampler(cfg, registry, &scheme, e))
        .collect::<Result<Vec<_>>>()?;
    let schedule: Vec<usize> = (0..count)
        .map(|i| {
            (derive_seed(cfg.master_seed, &[TAG_SCHEDULE, corpus_salt, i as u32])
                % prompts.len() as u64) as usize
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidSpec(format!("worker pool: {e}")))?;
    pool.install(|| {
        (0..n * count)
            .into_par_iter()
            .map(|j| {
                let e = j / count;
                let i = j % count;
                let seed =
                    derive_seed(cfg.master_seed, &[TAG_SAMPLE, corpus_salt, e as u32, i as u32]);
                let mut stream = RandomStream::from_seed(seed);
                let mut x = generate(
                    model,
                    &prompts[schedule[i]],
                    cfg.gen_length,
                    samplers[e].as_ref(),
                    &mut stream,
                )?;
                x.true_entity = Some(e);
                Ok(x)
            })
            .collect()
    })
}

/// Registry echo in a report; keys appear only when the config opted in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegistryEcho {
    pub mode: DeploymentMode,
    pub n_entities: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub keys: Option<Vec<u64>>,
}

/// Which control arm a scenario ran, derived from the deployment mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlFlags {
    pub shared_key: bool,
    pub no_watermark: bool,
}

/// Seeds derived for each stage, echoed for reproducibility audits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedProvenance {
    pub master_seed: u64,
    pub model_seed: u64,
    pub pool_seed: u64,
    pub split_seed: u64,
    pub train_seed: u64,
}

/// The complete result of one scenario run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub scenario_id: String,
    pub config: ScenarioConfig,
    pub registry: RegistryEcho,
    pub control: ControlFlags,
    pub seeds: SeedProvenance,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub attribution: Option<AttributionReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub curve: Option<LearningCurve>,
    pub metrics: BTreeMap<String, f64>,
    /// Wall time is observed, not derived, so it stays out of the
    /// serialized form; identical configs must serialize identically.
    #[serde(skip)]
    pub wall_clock_ms: u64,
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Runs one scenario end to end.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunReport> {
    let started = Instant::now();
    cfg.validate().map_err(|e| e.in_stage("config"))?;
    let seeds = SeedProvenance {
        master_seed: cfg.master_seed,
        model_seed: derive_seed(cfg.master_seed, &[TAG_MODEL]),
        pool_seed: derive_seed(cfg.master_seed, &[TAG_POOL]),
        split_seed: derive_seed(cfg.master_seed, &[TAG_SPLIT]),
        train_seed: derive_seed(cfg.master_seed, &[TAG_TRAIN]),
    };
    let model = build_model(&cfg.model, seeds.model_seed).map_err(|e| e.in_stage("model"))?;
    let pool = build_prompt_pool(&model, cfg.prompt_pool_size, cfg.prompt_len, seeds.pool_seed)
        .map_err(|e| e.in_stage("prompts"))?;
    let (train_prompts, test_prompts) =
        split_prompts(&pool, cfg.prompt_train_frac, seeds.split_seed)
            .map_err(|e| e.in_stage("prompts"))?;
    let registry = assign_keys(cfg.master_seed, cfg.n_entities, cfg.deployment)
        .map_err(|e| e.in_stage("registry"))?;
    let train_corpus = generate_corpus(
        cfg,
        &model,
        &registry,
        &train_prompts,
        cfg.train_samples_per_entity,
        TRAIN_SALT,
    )
    .map_err(|e| e.in_stage("generate"))?;
    let test_corpus = generate_corpus(
        cfg,
        &model,
        &registry,
        &test_prompts,
        cfg.test_samples_per_entity,
        TEST_SALT,
    )
    .map_err(|e| e.in_stage("generate"))?;

    let mut metrics = BTreeMap::new();
    let mut attribution = None;
    if cfg.has_observer(Observer::Internal) {
        let report = run_internal(cfg, &registry, &train_corpus, &test_corpus)
            .map_err(|e| e.in_stage("internal"))?;
        metrics.insert("internal.top1_tpr_at_fpr".to_string(), report.top1_tpr_at_fpr);
        attribution = Some(report);
    }
    let mut curve = None;
    if cfg.has_observer(Observer::External) {
        let train_seed = seeds.train_seed;
        let lc = run_external(cfg, &train_corpus, &test_corpus, train_seed)
            .map_err(|e| e.in_stage("external"))?;
        for (idx, &c) in lc.counts.iter().enumerate() {
            metrics.insert(format!("external.top1@{c}"), lc.top1[idx]);
            metrics.insert(format!("external.top{}@{c}", lc.k), lc.topk[idx]);
        }
        curve = Some(lc);
    }

    Ok(RunReport {
        schema_version: REPORT_SCHEMA_VERSION,
        scenario_id: cfg.scenario_id(),
        config: cfg.clone(),
        registry: RegistryEcho {
            mode: registry.mode(),
            n_entities: registry.n_entities(),
            keys: cfg
                .emit_secrets
                .then(|| registry.keys().iter().map(|k| k.0).collect()),
        },
        control: ControlFlags {
            shared_key: cfg.deployment == DeploymentMode::Shared,
            no_watermark: cfg.deployment == DeploymentMode::None,
        },
        seeds,
        attribution,
        curve,
        metrics,
        wall_clock_ms: started.elapsed().as_millis() as u64,
    })
}

/// Calibrates per-key thresholds on cross-key train scores and evaluates
/// thresholded attribution on the test corpus. The nulls for key `v` are
/// the train outputs of entities other than `v`; under a per-entity
/// deployment those carry foreign keys or none, which is exactly the null
/// hypothesis the thresholds must bound.
fn run_internal(
    cfg: &ScenarioConfig,
    registry: &EntityRegistry,
    train_corpus: &[TokenSeq],
    test_corpus: &[TokenSeq],
) -> Result<AttributionReport> {
    let scheme = cfg.scheme.to_config(cfg.model.vocab_size);
    let bank = detector_bank(registry, &scheme)?;
    let n = bank.n_entities();
    let mut nulls = vec![Vec::new(); n];
    for x in train_corpus {
        let e = x.true_entity.ok_or_else(|| {
            Error::MissingLabel("train sample lacks an entity label".into())
        })?;
        let scores = internal_observer::score_all(&bank, x)?;
        for (v, z) in scores.into_iter().enumerate() {
            if v != e {
                nulls[v].push(z);
            }
        }
    }
    let table = internal_observer::calibrate(&nulls, cfg.target_fpr)?;
    internal_observer::evaluate_attribution(&bank, &table, test_corpus)
}

/// Featurizes both corpora and traces the classifier's learning curve.
fn run_external(
    cfg: &ScenarioConfig,
    train_corpus: &[TokenSeq],
    test_corpus: &[TokenSeq],
    train_seed: u64,
) -> Result<LearningCurve> {
    let featurize_all = |corpus: &[TokenSeq]| -> Result<LabeledDataset> {
        let examples = corpus
            .iter()
            .map(|x| {
                let label = x.true_entity.ok_or_else(|| {
                    Error::MissingLabel("sample lacks an entity label".into())
                })?;
                let f = external_observer::featurize(x, cfg.model.vocab_size, &cfg.features)?;
                Ok((std::sync::Arc::new(f), label))
            })
            .collect::<Result<Vec<_>>>()?;
        LabeledDataset::new(examples, cfg.n_entities)
    };
    let pool = featurize_all(train_corpus)?;
    let test = featurize_all(test_corpus)?;
    let hyper = TrainHyper {
        seed: train_seed,
        ..cfg.hyper
    };
    external_observer::learning_curve(&pool, &test, &cfg.curve_counts, &hyper)
}

/// Pretty JSON form of a report, newline-terminated.
pub fn report_json(report: &RunReport) -> Result<String> {
    let body = serde_json::to_string_pretty(report)
        .map_err(|e| Error::InvalidSpec(format!("report serialization: {e}")))?;
    Ok(format!("{body}\n"))
}

/// Flat CSV over one or more reports, one row per scalar metric.
///
/// Columns: scenario_id, scheme, deployment, n_entities,
/// samples_per_entity, observer, metric, value, seed. Internal rows carry
/// the test sample count; external rows carry their curve point's
/// training count.
pub fn report_csv(reports: &[RunReport]) -> String {
    let mut out = String::from(
        "scenario_id,scheme,deployment,n_entities,samples_per_entity,observer,metric,value,seed\n",
    );
    for r in reports {
        let prefix = |samples: usize, observer: &str, metric: &str, value: f64| {
            format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.scenario_id,
                r.config.scheme.kind.as_str(),
                r.config.deployment.as_str(),
                r.config.n_entities,
                samples,
                observer,
                metric,
                value,
                r.seeds.master_seed
            )
        };
        if let Some(a) = &r.attribution {
            out.push_str(&prefix(
                a.samples_per_entity,
                "internal",
                "top1_tpr_at_fpr",
                a.top1_tpr_at_fpr,
            ));
        }
        if let Some(c) = &r.curve {
            for (idx, &count) in c.counts.iter().enumerate() {
                out.push_str(&prefix(count, "external", "top1", c.top1[idx]));
                out.push_str(&prefix(
                    count,
                    "external",
                    &format!("top{}", c.k),
                    c.topk[idx],
                ));
            }
        }
    }
    out
}

/// Applies one sweep value to a copy of the base config.
fn apply_axis(base: &ScenarioConfig, axis: &str, value: f64) -> Result<ScenarioConfig> {
    let mut cfg = base.clone();
    let as_count = |name: &str| -> Result<usize> {
        if value.fract() != 0.0 || value < 1.0 || value > u32::MAX as f64 {
            return Err(Error::InvalidSpec(format!(
                "axis {name} needs a positive integer, got {value}"
            )));
        }
        Ok(value as usize)
    };
    match axis {
        "n_entities" => cfg.n_entities = as_count(axis)?,
        "train_samples_per_entity" => cfg.train_samples_per_entity = as_count(axis)?,
        "gen_length" => cfg.gen_length = as_count(axis)?,
        "delta" => {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "axis delta needs a nonnegative value, got {value}"
                )));
            }
            cfg.scheme.delta = value;
        }
        other => {
            return Err(Error::BadAxis(format!(
                "unknown sweep axis {other:?}; known axes: n_entities, \
                 train_samples_per_entity, gen_length, delta"
            )))
        }
    }
    Ok(cfg)
}

/// Reads the value a sweep axis has in a config, for plotting sweep
/// results against the swept quantity. Accepts exactly the axes
/// `sweep` accepts.
pub fn axis_value(cfg: &ScenarioConfig, axis: &str) -> Result<f64> {
    match axis {
        "n_entities" => Ok(cfg.n_entities as f64),
        "train_samples_per_entity" => Ok(cfg.train_samples_per_entity as f64),
        "gen_length" => Ok(cfg.gen_length as f64),
        "delta" => Ok(cfg.scheme.delta),
        other => Err(Error::BadAxis(format!(
            "unknown sweep axis {other:?}; known axes: n_entities, \
             train_samples_per_entity, gen_length, delta"
        ))),
    }
}

/// Expands a sweep into its per-point configs without running anything.
/// Point `i` reseeds with `SplitMix64(master_seed XOR i)`, so sweep
/// points are independent but reproducible, and re-running any single
/// point standalone with that seed gives the identical report. Each
/// expanded config is validated, so this doubles as a dry check.
pub fn sweep_points(
    base: &ScenarioConfig,
    axis: &str,
    values: &[f64],
) -> Result<Vec<ScenarioConfig>> {
    if values.is_empty() {
        return Err(Error::InvalidCount("a sweep needs at least one value".into()));
    }
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut cfg = apply_axis(base, axis, v)?;
            cfg.master_seed = splitmix64(base.master_seed ^ i as u64);
            cfg.validate()?;
            Ok(cfg)
        })
        .collect()
}

/// Runs the base scenario once per axis value, reseeding each point as
/// described on [`sweep_points`].
pub fn sweep(base: &ScenarioConfig, axis: &str, values: &[f64]) -> Result<Vec<RunReport>> {
    sweep_points(base, axis, values)?
        .iter()
        .map(run_scenario)
        .collect()
}
