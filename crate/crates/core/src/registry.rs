//! Entity key assignment and the per-entity detector bank.
//!
//! A deployment hands watermark keys to entities in one of three modes:
//! every entity gets its own key, all entities share one key, or nobody
//! watermarks at all. Key derivation is deterministic in the master seed,
//! so a registry can be rebuilt from configuration alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, splitmix64};
use crate::schemes::{
    exp_score, CachedGreen, DetectorScore, SchemeConfig, SchemeKind, WatermarkKey,
};
use crate::toylm::TokenSeq;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeploymentMode {
    PerEntity,
    Shared,
    None,
}

impl DeploymentMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DeploymentMode::PerEntity => "per_entity",
            DeploymentMode::Shared => "shared",
            DeploymentMode::None => "none",
        }
    }
}

/// Key assignment for a fixed roster of entities `0..n_entities`.
///
/// Invariants, enforced at construction and deserialization: per-entity
/// registries hold one key per entity, pairwise distinct; shared
/// registries hold the same key for every entity; no-watermark registries
/// hold no keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RegistryData")]
pub struct EntityRegistry {
    n_entities: usize,
    mode: DeploymentMode,
    keys: Vec<WatermarkKey>,
}

#[derive(Deserialize)]
struct RegistryData {
    n_entities: usize,
    mode: DeploymentMode,
    keys: Vec<WatermarkKey>,
}

impl TryFrom<RegistryData> for EntityRegistry {
    type Error = Error;

    fn try_from(d: RegistryData) -> Result<Self> {
        let reg = EntityRegistry {
            n_entities: d.n_entities,
            mode: d.mode,
            keys: d.keys,
        };
        reg.validate()?;
        Ok(reg)
    }
}

impl EntityRegistry {
    fn validate(&self) -> Result<()> {
        if self.n_entities == 0 {
            return Err(Error::InvalidCount("a registry needs at least one entity".into()));
        }
        match self.mode {
            DeploymentMode::PerEntity => {
                if self.keys.len() != self.n_entities {
                    return Err(Error::InvalidSpec(format!(
                        "per-entity registry has {} keys for {} entities",
                        self.keys.len(),
                        self.n_entities
                    )));
                }
                let mut seen = std::collections::HashSet::with_capacity(self.keys.len());
                for (e, k) in self.keys.iter().enumerate() {
                    if !seen.insert(k.0) {
                        return Err(Error::InvalidSpec(format!(
                            "per-entity keys must be pairwise distinct, entity {e} repeats one"
                        )));
                    }
                }
            }
            DeploymentMode::Shared => {
                if self.keys.len() != self.n_entities {
                    return Err(Error::InvalidSpec(format!(
                        "shared registry has {} keys for {} entities",
                        self.keys.len(),
                        self.n_entities
                    )));
                }
                if self.keys.windows(2).any(|w| w[0] != w[1]) {
                    return Err(Error::InvalidSpec(
                        "shared registry must repeat one key for every entity".into(),
                    ));
                }
            }
            DeploymentMode::None => {
                if !self.keys.is_empty() {
                    return Err(Error::InvalidSpec(format!(
                        "no-watermark registry must hold no keys, got {}",
                        self.keys.len()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n_entities(&self) -> usize {
        self.n_entities
    }

    pub fn mode(&self) -> DeploymentMode {
        self.mode
    }

    pub fn keys(&self) -> &[WatermarkKey] {
        &self.keys
    }

    /// The embedding key for entity `e`; `None` when the deployment does
    /// not watermark or `e` is off the roster.
    pub fn key_for(&self, e: usize) -> Option<WatermarkKey> {
        if self.mode == DeploymentMode::None {
            return None;
        }
        self.keys.get(e).copied()
    }
}

/// Derives the registry for a master seed.
///
/// Per-entity: `key_e = SplitMix64(master_seed XOR FNV-1a-64(e))`, i.e.
/// the standard seed derivation with the entity id as the path word.
/// Shared: `SplitMix64(master_seed)` for everyone.
pub fn assign_keys(
    master_seed: u64,
    n_entities: usize,
    mode: DeploymentMode,
) -> Result<EntityRegistry> {
    if n_entities == 0 {
        return Err(Error::InvalidCount("a registry needs at least one entity".into()));
    }
    let keys = match mode {
        DeploymentMode::PerEntity => (0..n_entities)
            .map(|e| WatermarkKey(derive_seed(master_seed, &[e as u32])))
            .collect(),
        DeploymentMode::Shared => vec![WatermarkKey(splitmix64(master_seed)); n_entities],
        DeploymentMode::None => Vec::new(),
    };
    let reg = EntityRegistry {
        n_entities,
        mode,
        keys,
    };
    reg.validate()?;
    Ok(reg)
}

enum EntityScorer {
    Green(CachedGreen),
    Exp {
        key: WatermarkKey,
        cfg: SchemeConfig,
    },
}

impl EntityScorer {
    fn score(&self, x: &TokenSeq) -> Result<DetectorScore> {
        match self {
            EntityScorer::Green(cache) => cache.score(x),
            EntityScorer::Exp { key, cfg } => exp_score(*key, x, cfg),
        }
    }
}

/// One detector per entity, in ascending entity order. Entity `e` of the
/// bank scores with the key the registry assigned to entity `e`.
pub struct DetectorBank {
    scorers: Vec<EntityScorer>,
    cfg: SchemeConfig,
}

impl DetectorBank {
    pub fn n_entities(&self) -> usize {
        self.scorers.len()
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    /// Detector score of entity `e` on `x`.
    pub fn score_one(&self, e: usize, x: &TokenSeq) -> Result<DetectorScore> {
        let scorer = self.scorers.get(e).ok_or_else(|| {
            Error::InvalidCount(format!("entity {e} is off a bank of {}", self.scorers.len()))
        })?;
        scorer.score(x)
    }
}

/// Builds the detector bank for a registry. Fails with `NoKeys` when the
/// deployment does not watermark; there is nothing to detect against.
pub fn detector_bank(reg: &EntityRegistry, cfg: &SchemeConfig) -> Result<DetectorBank> {
    cfg.validate()?;
    if reg.mode() == DeploymentMode::None || reg.keys().is_empty() {
        return Err(Error::NoKeys(
            "a no-watermark deployment has no detector keys".into(),
        ));
    }
    let scorers = reg
        .keys()
        .iter()
        .map(|&key| -> Result<EntityScorer> {
            Ok(match cfg.kind {
                SchemeKind::Exp => EntityScorer::Exp { key, cfg: *cfg },
                _ => EntityScorer::Green(CachedGreen::new(key, cfg)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DetectorBank {
        scorers,
        cfg: *cfg,
    })
}
