//! Run configuration: command-line flags, optionally seeded from a JSON file.

use std::path::{Path, PathBuf};

use clap::Args;
use congwb::{Error, Family, FamilySpec};
use serde::Deserialize;

/// Flags shared by every command that works on one instance.
#[derive(Args, Clone, Debug, Default)]
pub struct SpecArgs {
    /// Family tag, e.g. T, OP-T, P, PB, Motzkin, B, TL, TLpm, J, Jpm, L, PL.
    #[arg(long)]
    pub family: Option<String>,
    /// Comma-separated object sizes.
    #[arg(long, value_delimiter = ',')]
    pub objects: Option<Vec<usize>>,
    /// Prime field size for L and PL.
    #[arg(long)]
    pub field: Option<u8>,
    /// Rank of the ideal I_r (defaults to the top rank).
    #[arg(long)]
    pub rank: Option<usize>,
    /// Skip the size guards.
    #[arg(long)]
    pub force: bool,
}

/// The JSON form of a run configuration; every field is optional and flags take precedence.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: Option<String>,
    pub objects: Option<Vec<usize>>,
    pub field: Option<u8>,
    pub rank: Option<usize>,
    #[serde(default)]
    pub force: bool,
    pub threads: Option<usize>,
    pub json: Option<PathBuf>,
    pub dot: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Validation(format!("bad config {}: {e}", path.display())))
    }
}

impl SpecArgs {
    pub fn merged(&self, cfg: &RunConfig) -> SpecArgs {
        SpecArgs {
            family: self.family.clone().or_else(|| cfg.family.clone()),
            objects: self.objects.clone().or_else(|| cfg.objects.clone()),
            field: self.field.or(cfg.field),
            rank: self.rank.or(cfg.rank),
            force: self.force || cfg.force,
        }
    }

    pub fn spec(&self) -> Result<FamilySpec, Error> {
        let family: Family = self.family.as_deref().ok_or_else(|| Error::Validation("--family is required".into()))?.parse()?;
        let objects = self.objects.clone().ok_or_else(|| Error::Validation("--objects is required".into()))?;
        let spec = FamilySpec { family, objects, p: self.field };
        spec.validate()?;
        Ok(spec)
    }
}
