//! Seeded Markov toy language model.
//!
//! The model is an order-`order` Markov chain over a vocabulary of integer
//! tokens. Transition rows are derived lazily: the row for a context is a
//! pure function of (spec, seed, context), so a model over a large context
//! space costs nothing to build and identical (spec, seed) pairs always
//! describe identical tables.
//!
//! Row construction, given the context-keyed stream u_1..u_V:
//!
//! ```text
//! w_i  = (-ln(1 - u_i)) ^ (1 / concentration)
//! row  = (1 - smoothing) * w / sum(w)  +  smoothing / V
//! ```
//!
//! Concentration 1 makes the normalized weights uniform on the simplex;
//! smaller values concentrate mass on fewer tokens. Contexts shorter than
//! `order` (and contexts absent from an explicit table) fall back to the
//! uniform row so generation is total.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, fnv1a64, RandomStream};

/// Upper bound on memoized transition rows per model. Rows beyond the cap
/// are recomputed on demand; values are identical either way.
const ROW_CACHE_CAP: usize = 200_000;
const ROW_CACHE_SHARDS: usize = 16;

fn default_vocab() -> usize {
    512
}
fn default_order() -> usize {
    2
}
fn default_concentration() -> f64 {
    0.5
}
fn default_smoothing() -> f64 {
    0.1
}

/// Shape of a derived model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    #[serde(default = "default_vocab")]
    pub vocab_size: usize,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default = "default_concentration")]
    pub concentration: f64,
    #[serde(default = "default_smoothing")]
    pub smoothing: f64,
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec {
            vocab_size: default_vocab(),
            order: default_order(),
            concentration: default_concentration(),
            smoothing: default_smoothing(),
        }
    }
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        if self.vocab_size < 2 {
            return Err(Error::InvalidSpec(format!(
                "vocab_size must be at least 2, got {}",
                self.vocab_size
            )));
        }
        if !(self.concentration.is_finite() && self.concentration > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "concentration must be positive and finite, got {}",
                self.concentration
            )));
        }
        if !(0.0..=1.0).contains(&self.smoothing) || !self.smoothing.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "smoothing must lie in [0, 1], got {}",
                self.smoothing
            )));
        }
        Ok(())
    }
}

enum RowSource {
    Seeded { seed: u64, cache: RowCache },
    Table { rows: HashMap<Vec<u32>, Arc<[f64]>> },
}

struct RowCache {
    shards: Vec<RwLock<HashMap<Box<[u32]>, Arc<[f64]>>>>,
}

impl RowCache {
    fn new() -> Self {
        RowCache {
            shards: (0..ROW_CACHE_SHARDS).map(|_| RwLock::new(HashMap::new())).collect(),
        }
    }

    fn get(&self, ctx: &[u32]) -> Option<Arc<[f64]>> {
        let shard = &self.shards[(fnv1a64(ctx) as usize) % ROW_CACHE_SHARDS];
        shard.read().expect("row cache lock").get(ctx).cloned()
    }

    fn insert(&self, ctx: &[u32], row: Arc<[f64]>) {
        let shard = &self.shards[(fnv1a64(ctx) as usize) % ROW_CACHE_SHARDS];
        let mut guard = shard.write().expect("row cache lock");
        if guard.len() < ROW_CACHE_CAP / ROW_CACHE_SHARDS {
            guard.insert(ctx.into(), row);
        }
    }
}

/// A Markov model with lazily derived or explicitly provided rows.
pub struct Model {
    spec: ModelSpec,
    rows: RowSource,
    uniform: OnceLock<Arc<[f64]>>,
}

/// Builds a derived model. The table is a deterministic function of
/// (spec, seed).
pub fn build_model(spec: &ModelSpec, seed: u64) -> Result<Model> {
    spec.validate()?;
    Ok(Model {
        spec: spec.clone(),
        rows: RowSource::Seeded {
            seed,
            cache: RowCache::new(),
        },
        uniform: OnceLock::new(),
    })
}

impl Model {
    /// Builds a model from an explicit transition table. Row keys must have
    /// exactly `order` tokens; rows must be valid distributions over the
    /// vocabulary. Contexts absent from the table use the uniform row.
    pub fn from_rows(spec: &ModelSpec, rows: HashMap<Vec<u32>, Vec<f64>>) -> Result<Model> {
        spec.validate()?;
        let mut table = HashMap::with_capacity(rows.len());
        for (ctx, row) in rows {
            if ctx.len() != spec.order {
                return Err(Error::InvalidSpec(format!(
                    "row context length {} does not match order {}",
                    ctx.len(),
                    spec.order
                )));
            }
            if row.len() != spec.vocab_size {
                return Err(Error::InvalidSpec(format!(
                    "row width {} does not match vocab_size {}",
                    row.len(),
                    spec.vocab_size
                )));
            }
            let mut total = 0.0;
            for &p in &row {
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::InvalidSpec(format!("bad row entry {p}")));
                }
                total += p;
            }
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidSpec(format!(
                    "row mass {total} is not 1 within 1e-9"
                )));
            }
            table.insert(ctx, row.into());
        }
        Ok(Model {
            spec: spec.clone(),
            rows: RowSource::Table { rows: table },
            uniform: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn vocab_size(&self) -> usize {
        self.spec.vocab_size
    }

    fn uniform_row(&self) -> Arc<[f64]> {
        self.uniform
            .get_or_init(|| {
                let v = self.spec.vocab_size;
                vec![1.0 / v as f64; v].into()
            })
            .clone()
    }

    fn derive_row(&self, seed: u64, ctx: &[u32]) -> Arc<[f64]> {
        let v = self.spec.vocab_size;
        let mut stream = RandomStream::from_seed(derive_seed(seed, ctx));
        let exponent = 1.0 / self.spec.concentration;
        let mut w = vec![0.0f64; v];
        let mut total = 0.0;
        for slot in w.iter_mut() {
            let u = stream.next_f64();
            let e = -(1.0 - u).ln();
            let val = e.powf(exponent);
            *slot = val;
            total += val;
        }
        let smooth = self.spec.smoothing;
        let base = smooth / v as f64;
        let scale = (1.0 - smooth) / total;
        for slot in w.iter_mut() {
            *slot = *slot * scale + base;
        }
        w.into()
    }

    /// The next-token distribution for `context`, truncated to its last
    /// `order` tokens. Shorter contexts (and contexts missing from an
    /// explicit table) yield the uniform row.
    pub fn row(&self, context: &[u32]) -> Arc<[f64]> {
        let order = self.spec.order;
        if context.len() < order {
            return self.uniform_row();
        }
        let tail = &context[context.len() - order..];
        match &self.rows {
            RowSource::Seeded { seed, cache } => {
                if let Some(hit) = cache.get(tail) {
                    return hit;
                }
                let row = self.derive_row(*seed, tail);
                cache.insert(tail, row.clone());
                row
            }
            RowSource::Table { rows } => match rows.get(tail) {
                Some(r) => r.clone(),
                None => self.uniform_row(),
            },
        }
    }

    /// Owned copy of [`Model::row`].
    pub fn next_dist(&self, context: &[u32]) -> Vec<f64> {
        self.row(context).to_vec()
    }
}

/// A prompt from a pool, identified by its index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prompt {
    pub id: usize,
    pub tokens: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromptPool {
    pub prompts: Vec<Prompt>,
}

/// Samples `pool_size` prompts of `prompt_len` tokens each from the model
/// under plain multinomial sampling. Prompt ids are 0..pool_size.
pub fn build_prompt_pool(
    model: &Model,
    pool_size: usize,
    prompt_len: usize,
    seed: u64,
) -> Result<PromptPool> {
    if pool_size == 0 {
        return Err(Error::InvalidCount("prompt pool must be nonempty".into()));
    }
    let mut prompts = Vec::with_capacity(pool_size);
    for id in 0..pool_size {
        let mut stream = RandomStream::from_seed(derive_seed(seed, &[id as u32]));
        let mut tokens = Vec::with_capacity(prompt_len);
        for _ in 0..prompt_len {
            let row = model.row(&tokens);
            let tok = multinomial_index(&row, stream.next_f64()) as u32;
            tokens.push(tok);
        }
        prompts.push(Prompt { id, tokens });
    }
    Ok(PromptPool { prompts })
}

/// Scheme identity carried on generated sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeTag {
    None,
    Kgw,
    Unigram,
    Exp,
}

impl SchemeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeTag::None => "none",
            SchemeTag::Kgw => "kgw",
            SchemeTag::Unigram => "unigram",
            SchemeTag::Exp => "exp",
        }
    }
}

/// A generated sequence. `tokens` holds only generated tokens; the prompt
/// is referenced by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenSeq {
    pub tokens: Vec<u32>,
    pub prompt_id: usize,
    pub true_entity: Option<usize>,
    pub scheme_tag: SchemeTag,
}

/// Next-token selection strategy used by [`generate`].
///
/// `context` is the full prefix (prompt plus tokens generated so far) and
/// `position` the index of the token being produced within the generated
/// sequence. Implementations may ignore `stream` if selection is
/// deterministic given the context.
pub trait TokenSampler: Sync {
    fn step(
        &self,
        dist: &[f64],
        context: &[u32],
        position: usize,
        stream: &mut RandomStream,
    ) -> Result<u32>;

    fn tag(&self) -> SchemeTag;
}

/// Plain multinomial sampling from the model distribution.
pub struct PlainSampler;

impl TokenSampler for PlainSampler {
    fn step(
        &self,
        dist: &[f64],
        _context: &[u32],
        _position: usize,
        stream: &mut RandomStream,
    ) -> Result<u32> {
        Ok(multinomial_index(dist, stream.next_f64()) as u32)
    }

    fn tag(&self) -> SchemeTag {
        SchemeTag::None
    }
}

/// Inverse-CDF lookup: the smallest index whose cumulative mass exceeds
/// `u * sum(dist)`. Falls back to the last positive entry if rounding
/// pushes the target past the final cumulative sum.
pub fn multinomial_index(dist: &[f64], u: f64) -> usize {
    debug_assert!(!dist.is_empty());
    let total: f64 = dist.iter().sum();
    let target = u * total;
    let mut cum = 0.0;
    let mut last_positive = 0;
    for (i, &p) in dist.iter().enumerate() {
        if p > 0.0 {
            last_positive = i;
        }
        cum += p;
        if cum > target {
            return i;
        }
    }
    last_positive
}

/// Generates exactly `length` tokens after the prompt. The prompt seeds the
/// context but is excluded from the output tokens.
pub fn generate(
    model: &Model,
    prompt: &Prompt,
    length: usize,
    sampler: &dyn TokenSampler,
    stream: &mut RandomStream,
) -> Result<TokenSeq> {
    if length == 0 {
        return Err(Error::InvalidLength("generation length must be positive".into()));
    }
    let mut context = prompt.tokens.clone();
    let mut out = Vec::with_capacity(length);
    for position in 0..length {
        let row = model.row(&context);
        let tok = sampler.step(&row, &context, position, stream)?;
        context.push(tok);
        out.push(tok);
    }
    Ok(TokenSeq {
        tokens: out,
        prompt_id: prompt.id,
        true_entity: None,
        scheme_tag: sampler.tag(),
    })
}
