//! Keyed token-level watermark schemes and their detectors.
//!
//! Three zero-bit schemes are implemented, plus a multi-bit wrapper:
//!
//! * `Kgw`: a green-list scheme. Each (key, context window) pair selects a
//!   pseudorandom green subset of the vocabulary; the sampler boosts green
//!   token logits by `delta`, and the detector counts green hits.
//! * `Unigram`: the same construction with the context window ignored, so
//!   one fixed green set per key.
//! * `Exp`: a distribution-preserving scheme. The sampler picks
//!   `argmax_i u_i^(1/p_i)` over keyed uniforms `u_i`, which leaves the
//!   marginal token distribution exactly `p` when keys are random, and the
//!   detector sums `-ln(1 - u)` over emitted tokens.
//!
//! PRF pipeline, byte for byte:
//!
//! 1. `h` = FNV-1a-64 over the little-endian 4-byte encoding of each
//!    context token in order, then of the salt word.
//! 2. `s` = SplitMix64(`key` XOR `h`), where SplitMix64 adds the golden
//!    gamma 0x9e3779b97f4a7c15 and applies the two-round multiply-xor
//!    finalizer.
//! 3. `u` = (`s` >> 11) * 2^-53, a uniform double in [0, 1).
//!
//! The pipeline is pure integer arithmetic until the final scaling, so
//! embedders and detectors agree bit for bit across platforms.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{fnv1a64, fnv1a64_word, splitmix64, unit_f64, RandomStream, FNV_OFFSET_BASIS};
use crate::toylm::{generate, multinomial_index, Model, Prompt, SchemeTag, TokenSampler, TokenSeq};

/// A 64-bit watermark key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WatermarkKey(pub u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Kgw,
    Unigram,
    Exp,
}

impl SchemeKind {
    pub fn tag(self) -> SchemeTag {
        match self {
            SchemeKind::Kgw => SchemeTag::Kgw,
            SchemeKind::Unigram => SchemeTag::Unigram,
            SchemeKind::Exp => SchemeTag::Exp,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Kgw => "kgw",
            SchemeKind::Unigram => "unigram",
            SchemeKind::Exp => "exp",
        }
    }
}

/// Parameters shared by embedders and detectors.
///
/// `gamma` is the green fraction, `delta` the logit boost, `context_h` the
/// number of preceding tokens hashed into the PRF. `Unigram` requires
/// `context_h == 0`. For `Exp`, `gamma` and `delta` are unused.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    pub gamma: f64,
    pub delta: f64,
    pub context_h: usize,
    pub vocab_size: usize,
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.vocab_size < 2 {
            return Err(Error::InvalidSpec(format!(
                "vocab_size must be at least 2, got {}",
                self.vocab_size
            )));
        }
        if self.vocab_size > u16::MAX as usize + 1 {
            return Err(Error::InvalidSpec(format!(
                "vocab_size must fit 16 bits, got {}",
                self.vocab_size
            )));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "gamma must lie strictly inside (0, 1), got {}",
                self.gamma
            )));
        }
        if !(self.delta.is_finite() && self.delta >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "delta must be finite and nonnegative, got {}",
                self.delta
            )));
        }
        if self.kind == SchemeKind::Unigram && self.context_h != 0 {
            return Err(Error::InvalidSpec(format!(
                "unigram scheme ignores context, context_h must be 0, got {}",
                self.context_h
            )));
        }
        if self.kind != SchemeKind::Exp && self.green_count() == 0 {
            return Err(Error::InvalidSpec(format!(
                "gamma {} with vocab {} yields an empty green set",
                self.gamma, self.vocab_size
            )));
        }
        Ok(())
    }

    /// Exact green-set size, floor(gamma * V).
    pub fn green_count(&self) -> usize {
        (self.gamma * self.vocab_size as f64).floor() as usize
    }

    /// Effective context window: 0 for `Unigram`, `context_h` otherwise.
    pub fn window(&self) -> usize {
        match self.kind {
            SchemeKind::Unigram => 0,
            _ => self.context_h,
        }
    }
}

/// FNV state after folding the context window, before the salt. Hoisted
/// out of per-token loops that share one context.
#[inline]
fn prf_prefix(context: &[u32]) -> u64 {
    let mut h = FNV_OFFSET_BASIS;
    for &w in context {
        h = fnv1a64_word(h, w);
    }
    h
}

#[inline]
fn prf_uniform_salted(key: WatermarkKey, prefix: u64, salt: u32) -> f64 {
    unit_f64(splitmix64(key.0 ^ fnv1a64_word(prefix, salt)))
}

/// Keyed uniform draw for (context window, salt).
#[inline]
pub fn prf_uniform(key: WatermarkKey, context: &[u32], salt: u32) -> f64 {
    prf_uniform_salted(key, prf_prefix(context), salt)
}

/// A green subset of the vocabulary, stored as a bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenSet {
    vocab_size: usize,
    count: usize,
    bits: Vec<u64>,
}

impl GreenSet {
    #[inline]
    pub fn contains(&self, token: u32) -> bool {
        let t = token as usize;
        t < self.vocab_size && (self.bits[t >> 6] >> (t & 63)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Member tokens in ascending order.
    pub fn members(&self) -> Vec<u32> {
        (0..self.vocab_size as u32).filter(|&t| self.contains(t)).collect()
    }
}

/// The green set for (key, context window): the floor(gamma * V) tokens
/// with the smallest PRF values, ties broken by token id. `Unigram`
/// ignores the context entirely.
pub fn green_set(key: WatermarkKey, context: &[u32], cfg: &SchemeConfig) -> Result<GreenSet> {
    if cfg.kind == SchemeKind::Exp {
        return Err(Error::WrongScheme("green sets are undefined for exp".into()));
    }
    cfg.validate()?;
    Ok(green_set_unchecked(key, context, cfg))
}

fn green_set_unchecked(key: WatermarkKey, context: &[u32], cfg: &SchemeConfig) -> GreenSet {
    let v = cfg.vocab_size;
    let k = cfg.green_count();
    let window = cfg.window();
    let tail = &context[context.len().saturating_sub(window)..];
    let prefix = prf_prefix(tail);
    let mut scored: Vec<(f64, u32)> = (0..v as u32)
        .map(|t| (prf_uniform_salted(key, prefix, t), t))
        .collect();
    scored.select_nth_unstable_by(k - 1, |a, b| {
        a.0.partial_cmp(&b.0).expect("prf values are finite").then(a.1.cmp(&b.1))
    });
    let mut bits = vec![0u64; v.div_ceil(64)];
    for &(_, t) in &scored[..k] {
        bits[(t as usize) >> 6] |= 1u64 << (t & 63);
    }
    GreenSet {
        vocab_size: v,
        count: k,
        bits,
    }
}

/// Applies the green boost to a distribution and renormalizes:
/// `p'_i = p_i * e^delta / Z` for green `i`, `p_i / Z` otherwise.
/// `delta == 0` returns the input unchanged.
pub fn kgw_embed_step(dist: &[f64], green: &GreenSet, delta: f64) -> Result<Vec<f64>> {
    if dist.len() != green.vocab_size {
        return Err(Error::SizeMismatch(format!(
            "distribution width {} does not match green set vocab {}",
            dist.len(),
            green.vocab_size
        )));
    }
    if delta == 0.0 {
        return Ok(dist.to_vec());
    }
    let boost = delta.exp();
    let mut out = Vec::with_capacity(dist.len());
    let mut total = 0.0;
    for (t, &p) in dist.iter().enumerate() {
        let w = if green.contains(t as u32) { p * boost } else { p };
        out.push(w);
        total += w;
    }
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::DegenerateDist(format!(
            "boosted mass {total} is not positive and finite"
        )));
    }
    for w in out.iter_mut() {
        *w /= total;
    }
    Ok(out)
}

/// Detector output: the standardized statistic, its raw value, and the
/// number of scored positions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorScore {
    pub z: f64,
    pub raw: f64,
    pub positions_scored: usize,
}

/// Green-hit detector for `Kgw` and `Unigram`.
///
/// Positions `h..len` are scored, each against the green set of its
/// preceding `h` generated tokens, so the statistic never depends on the
/// prompt. With `g` green hits over `T` scored positions,
/// `z = (g - gamma T) / sqrt(T gamma (1 - gamma))`.
pub fn kgw_score(key: WatermarkKey, x: &TokenSeq, cfg: &SchemeConfig) -> Result<DetectorScore> {
    if cfg.kind == SchemeKind::Exp {
        return Err(Error::WrongScheme("kgw_score expects a green-list scheme".into()));
    }
    cfg.validate()?;
    let h = cfg.window();
    if x.tokens.len() < h + 1 {
        return Err(Error::TooShort(format!(
            "need more than {h} tokens to score, got {}",
            x.tokens.len()
        )));
    }
    let mut hits = 0usize;
    for t in h..x.tokens.len() {
        let set = green_set_unchecked(key, &x.tokens[t - h..t], cfg);
        if set.contains(x.tokens[t]) {
            hits += 1;
        }
    }
    let scored = x.tokens.len() - h;
    Ok(DetectorScore {
        z: green_hit_z(hits, scored, cfg.gamma),
        raw: hits as f64,
        positions_scored: scored,
    })
}

#[inline]
fn green_hit_z(hits: usize, scored: usize, gamma: f64) -> f64 {
    let t = scored as f64;
    (hits as f64 - gamma * t) / (t * gamma * (1.0 - gamma)).sqrt()
}

/// Memoized green sets for one (key, config) pair.
///
/// For windows of at most one token the context space is tiny, so sets are
/// computed once per distinct window and reused; wider windows fall back to
/// direct computation. Values are identical to [`green_set`] either way.
pub struct CachedGreen {
    key: WatermarkKey,
    cfg: SchemeConfig,
    slots: Vec<OnceLock<GreenSet>>,
}

impl CachedGreen {
    pub fn new(key: WatermarkKey, cfg: &SchemeConfig) -> Result<Self> {
        if cfg.kind == SchemeKind::Exp {
            return Err(Error::WrongScheme("green caches are undefined for exp".into()));
        }
        cfg.validate()?;
        let slots = if cfg.window() <= 1 {
            // One slot per possible single-token window, plus one for the
            // empty window.
            (0..=cfg.vocab_size).map(|_| OnceLock::new()).collect()
        } else {
            Vec::new()
        };
        Ok(CachedGreen {
            key,
            cfg: *cfg,
            slots,
        })
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    pub fn key(&self) -> WatermarkKey {
        self.key
    }

    /// Runs `f` against the green set for `context`.
    pub fn with_set<R>(&self, context: &[u32], f: impl FnOnce(&GreenSet) -> R) -> R {
        let window = self.cfg.window();
        let tail = &context[context.len().saturating_sub(window)..];
        if window <= 1 {
            let slot = match tail.first() {
                Some(&t) => t as usize,
                None => self.cfg.vocab_size,
            };
            let set = self.slots[slot]
                .get_or_init(|| green_set_unchecked(self.key, tail, &self.cfg));
            f(set)
        } else {
            f(&green_set_unchecked(self.key, tail, &self.cfg))
        }
    }

    /// Green-hit score over `x`, identical to [`kgw_score`].
    pub fn score(&self, x: &TokenSeq) -> Result<DetectorScore> {
        let h = self.cfg.window();
        if x.tokens.len() < h + 1 {
            return Err(Error::TooShort(format!(
                "need more than {h} tokens to score, got {}",
                x.tokens.len()
            )));
        }
        let mut hits = 0usize;
        for t in h..x.tokens.len() {
            if self.with_set(&x.tokens[t - h..t], |set| set.contains(x.tokens[t])) {
                hits += 1;
            }
        }
        let scored = x.tokens.len() - h;
        Ok(DetectorScore {
            z: green_hit_z(hits, scored, self.cfg.gamma),
            raw: hits as f64,
            positions_scored: scored,
        })
    }
}

/// The exponential-scheme selection rule: `argmax_i u_i^(1/p_i)` over
/// tokens with positive mass, ties to the lowest index. Exposed separately
/// from the PRF so the rule itself can be exercised on explicit uniforms.
pub fn exp_select(dist: &[f64], us: &[f64]) -> Result<usize> {
    if dist.len() != us.len() {
        return Err(Error::SizeMismatch(format!(
            "distribution width {} does not match uniforms width {}",
            dist.len(),
            us.len()
        )));
    }
    exp_select_by(dist, |i| us[i])
}

/// Streaming form of [`exp_select`]; `u_of` supplies the uniform for each
/// index. Maximizing u^(1/p) is equivalent to minimizing (-ln u) / p.
fn exp_select_by(dist: &[f64], u_of: impl Fn(usize) -> f64) -> Result<usize> {
    let mut best: Option<(f64, usize)> = None;
    for (i, &p) in dist.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        let u = u_of(i);
        let cost = -u.ln() / p;
        match best {
            None => best = Some((cost, i)),
            Some((c, _)) if cost < c => best = Some((cost, i)),
            _ => {}
        }
    }
    match best {
        Some((_, i)) => Ok(i),
        None => Err(Error::DegenerateDist("no token has positive mass".into())),
    }
}

/// One exponential-scheme embedding step: deterministic in
/// (key, context window, dist), no sampling stream involved.
pub fn exp_embed_step(
    dist: &[f64],
    key: WatermarkKey,
    context: &[u32],
    cfg: &SchemeConfig,
) -> Result<u32> {
    if cfg.kind != SchemeKind::Exp {
        return Err(Error::WrongScheme("exp_embed_step expects the exp scheme".into()));
    }
    if dist.len() != cfg.vocab_size {
        return Err(Error::SizeMismatch(format!(
            "distribution width {} does not match vocab {}",
            dist.len(),
            cfg.vocab_size
        )));
    }
    let window = cfg.window();
    let tail = &context[context.len().saturating_sub(window)..];
    let prefix = prf_prefix(tail);
    let idx = exp_select_by(dist, |i| prf_uniform_salted(key, prefix, i as u32))?;
    Ok(idx as u32)
}

/// Exponential-scheme detector. Positions `h..len` are scored;
/// `S = sum -ln(1 - u_t)` with `u_t` the keyed uniform of the emitted
/// token, and `z = (S - T) / sqrt(T)` since each term is Exp(1) under the
/// null.
pub fn exp_score(key: WatermarkKey, x: &TokenSeq, cfg: &SchemeConfig) -> Result<DetectorScore> {
    if cfg.kind != SchemeKind::Exp {
        return Err(Error::WrongScheme("exp_score expects the exp scheme".into()));
    }
    let h = cfg.window();
    if x.tokens.len() < h + 1 {
        return Err(Error::TooShort(format!(
            "need more than {h} tokens to score, got {}",
            x.tokens.len()
        )));
    }
    let mut sum = 0.0;
    for t in h..x.tokens.len() {
        let u = prf_uniform(key, &x.tokens[t - h..t], x.tokens[t]);
        sum += -(1.0 - u).ln();
    }
    let scored = x.tokens.len() - h;
    Ok(DetectorScore {
        z: (sum - scored as f64) / (scored as f64).sqrt(),
        raw: sum,
        positions_scored: scored,
    })
}

/// Green-list sampler usable with [`generate`].
pub struct KgwSampler {
    cache: CachedGreen,
    delta: f64,
    tag: SchemeTag,
}

impl KgwSampler {
    pub fn new(key: WatermarkKey, cfg: &SchemeConfig) -> Result<Self> {
        let cache = CachedGreen::new(key, cfg)?;
        Ok(KgwSampler {
            delta: cfg.delta,
            tag: cfg.kind.tag(),
            cache,
        })
    }
}

/// Draws from `dist` with green entries boosted by `e^delta`, consuming one
/// stream draw. `delta == 0` reproduces plain sampling arithmetic exactly.
fn sample_boosted(
    dist: &[f64],
    green: &GreenSet,
    delta: f64,
    stream: &mut RandomStream,
) -> Result<u32> {
    if delta == 0.0 {
        return Ok(multinomial_index(dist, stream.next_f64()) as u32);
    }
    let boost = delta.exp();
    let mut total = 0.0;
    for (t, &p) in dist.iter().enumerate() {
        total += if green.contains(t as u32) { p * boost } else { p };
    }
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::DegenerateDist(format!(
            "boosted mass {total} is not positive and finite"
        )));
    }
    let target = stream.next_f64() * total;
    let mut cum = 0.0;
    let mut last_positive = 0u32;
    for (t, &p) in dist.iter().enumerate() {
        let w = if green.contains(t as u32) { p * boost } else { p };
        if w > 0.0 {
            last_positive = t as u32;
        }
        cum += w;
        if cum > target {
            return Ok(t as u32);
        }
    }
    Ok(last_positive)
}

impl TokenSampler for KgwSampler {
    fn step(
        &self,
        dist: &[f64],
        context: &[u32],
        _position: usize,
        stream: &mut RandomStream,
    ) -> Result<u32> {
        self.cache
            .with_set(context, |green| sample_boosted(dist, green, self.delta, stream))
    }

    fn tag(&self) -> SchemeTag {
        self.tag
    }
}

/// Exponential-scheme sampler usable with [`generate`]. Ignores the
/// sampling stream; selection is deterministic in (key, context, dist).
pub struct ExpSampler {
    key: WatermarkKey,
    cfg: SchemeConfig,
}

impl ExpSampler {
    pub fn new(key: WatermarkKey, cfg: &SchemeConfig) -> Result<Self> {
        if cfg.kind != SchemeKind::Exp {
            return Err(Error::WrongScheme("ExpSampler expects the exp scheme".into()));
        }
        cfg.validate()?;
        Ok(ExpSampler { key, cfg: *cfg })
    }
}

impl TokenSampler for ExpSampler {
    fn step(
        &self,
        dist: &[f64],
        context: &[u32],
        _position: usize,
        _stream: &mut RandomStream,
    ) -> Result<u32> {
        exp_embed_step(dist, self.key, context, &self.cfg)
    }

    fn tag(&self) -> SchemeTag {
        SchemeTag::Exp
    }
}

/// A multi-bit payload: `bits` are embedded round-robin over blocks of
/// `block_len` consecutive positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageBits {
    pub bits: Vec<u8>,
    pub block_len: usize,
}

impl MessageBits {
    pub fn new(bits: Vec<u8>, block_len: usize) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyMessage);
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidSpec("message bits must be 0 or 1".into()));
        }
        if block_len == 0 {
            return Err(Error::InvalidLength("block_len must be positive".into()));
        }
        Ok(MessageBits { bits, block_len })
    }
}

/// The key for (slot, bit value): SplitMix64 of
/// `base XOR FNV-1a-64(slot, value)`.
pub fn slot_key(base: WatermarkKey, slot: usize, bit_value: u8) -> WatermarkKey {
    WatermarkKey(splitmix64(base.0 ^ fnv1a64(&[slot as u32, u32::from(bit_value)])))
}

/// Position-sliced green-list sampler carrying a multi-bit message.
/// Position `t` belongs to slot `(t / block_len) mod num_bits` and is
/// embedded under the slot key for that slot's message bit.
pub struct MultibitSampler {
    caches: Vec<CachedGreen>,
    block_len: usize,
    delta: f64,
    tag: SchemeTag,
}

impl MultibitSampler {
    pub fn new(base: WatermarkKey, msg: &MessageBits, cfg: &SchemeConfig) -> Result<Self> {
        if cfg.kind == SchemeKind::Exp {
            return Err(Error::WrongScheme(
                "multi-bit embedding runs on green-list schemes".into(),
            ));
        }
        let caches = msg
            .bits
            .iter()
            .enumerate()
            .map(|(slot, &bit)| CachedGreen::new(slot_key(base, slot, bit), cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultibitSampler {
            caches,
            block_len: msg.block_len,
            delta: cfg.delta,
            tag: cfg.kind.tag(),
        })
    }
}

impl TokenSampler for MultibitSampler {
    fn step(
        &self,
        dist: &[f64],
        context: &[u32],
        position: usize,
        stream: &mut RandomStream,
    ) -> Result<u32> {
        let slot = (position / self.block_len) % self.caches.len();
        self.caches[slot]
            .with_set(context, |green| sample_boosted(dist, green, self.delta, stream))
    }

    fn tag(&self) -> SchemeTag {
        self.tag
    }
}

/// Generates a sequence carrying `msg` under the multi-bit sampler.
pub fn multibit_embed(
    model: &Model,
    prompt: &Prompt,
    base: WatermarkKey,
    msg: &MessageBits,
    cfg: &SchemeConfig,
    length: usize,
    stream: &mut RandomStream,
) -> Result<TokenSeq> {
    let sampler = MultibitSampler::new(base, msg, cfg)?;
    generate(model, prompt, length, &sampler, stream)
}

/// A decoded payload with per-bit confidences.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodedMessage {
    pub bits: Vec<u8>,
    pub confidences: Vec<f64>,
}

/// Decodes a multi-bit payload: for each slot, green hits are counted
/// under both candidate slot keys and the bit with the larger standardized
/// count wins; ties decode to 0. Confidence is `|z_1 - z_0|`.
///
/// Both counts are standardized against the full scored length, which
/// keeps per-bit confidences on a common scale no matter how positions
/// divide among slots.
pub fn multibit_decode(
    base: WatermarkKey,
    x: &TokenSeq,
    num_bits: usize,
    block_len: usize,
    cfg: &SchemeConfig,
) -> Result<DecodedMessage> {
    if num_bits == 0 {
        return Err(Error::EmptyMessage);
    }
    if block_len == 0 {
        return Err(Error::InvalidLength("block_len must be positive".into()));
    }
    if cfg.kind == SchemeKind::Exp {
        return Err(Error::WrongScheme(
            "multi-bit decoding runs on green-list schemes".into(),
        ));
    }
    cfg.validate()?;
    let h = cfg.window();
    if x.tokens.len() < h + 1 {
        return Err(Error::TooShort(format!(
            "need more than {h} tokens to decode, got {}",
            x.tokens.len()
        )));
    }
    let caches: Vec<[CachedGreen; 2]> = (0..num_bits)
        .map(|slot| {
            Ok([
                CachedGreen::new(slot_key(base, slot, 0), cfg)?,
                CachedGreen::new(slot_key(base, slot, 1), cfg)?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut hits = vec![[0usize; 2]; num_bits];
    let mut scored = vec![0usize; num_bits];
    for t in h..x.tokens.len() {
        let slot = (t / block_len) % num_bits;
        let ctx = &x.tokens[t - h..t];
        let tok = x.tokens[t];
        scored[slot] += 1;
        for v in 0..2 {
            if caches[slot][v].with_set(ctx, |set| set.contains(tok)) {
                hits[slot][v] += 1;
            }
        }
    }
    let total = (x.tokens.len() - h) as f64;
    let denom = (total * cfg.gamma * (1.0 - cfg.gamma)).sqrt();
    let mut bits = Vec::with_capacity(num_bits);
    let mut confidences = Vec::with_capacity(num_bits);
    for slot in 0..num_bits {
        if scored[slot] == 0 {
            return Err(Error::TooShort(format!(
                "slot {slot} has no scored positions at length {}",
                x.tokens.len()
            )));
        }
        let expected = cfg.gamma * scored[slot] as f64;
        let z0 = (hits[slot][0] as f64 - expected) / denom;
        let z1 = (hits[slot][1] as f64 - expected) / denom;
        bits.push(u8::from(z1 > z0));
        confidences.push((z1 - z0).abs());
    }
    Ok(DecodedMessage { bits, confidences })
}
