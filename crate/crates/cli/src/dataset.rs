//! Scaled datasets and the two bench presets.

use std::fs::{self, File};
use std::path::{Path, PathBuf};

use gccl_core::scaling::{parse_schema, ManyValuedContext, MissingPolicy, NominalScale};
use gccl_core::{BitSet, FormalContext};
use log::info;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::CliError;

/// Where a dataset lives and how to scale it.
#[derive(Clone, Debug)]
pub struct DatasetSpec {
    pub label: String,
    pub csv: PathBuf,
    pub schema: PathBuf,
    pub has_header: bool,
    pub exclude: Vec<String>,
    pub policy: MissingPolicy,
    /// Shuffle rows with this seed instead of keeping file order.
    pub seed: Option<u64>,
}

/// Every row of a dataset, already scaled, in selection order.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub label: String,
    pub original_attributes: usize,
    pub scale: NominalScale,
    rows: Vec<(String, BitSet)>,
}

impl Dataset {
    pub fn load(spec: &DatasetSpec) -> Result<Self, CliError> {
        let schema_text =
            fs::read_to_string(&spec.schema).map_err(|e| CliError::io(&spec.schema, e))?;
        let columns = parse_schema(&schema_text)?;
        let file = File::open(&spec.csv).map_err(|e| CliError::io(&spec.csv, e))?;
        let mvc = ManyValuedContext::from_csv(file, columns, spec.has_header)?
            .without_columns(&spec.exclude)?;
        let scale = NominalScale::build(&mvc, spec.policy)?;
        let mut rows = mvc
            .objects()
            .iter()
            .zip(mvc.cells())
            .enumerate()
            .map(|(r, (name, cells))| Ok((name.clone(), scale.scale_row(r, cells)?)))
            .collect::<Result<Vec<_>, gccl_core::Error>>()?;
        if let Some(seed) = spec.seed {
            rows.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        info!(
            "{}: {} rows, {} columns scaled to {} attributes",
            spec.label,
            rows.len(),
            mvc.columns().len(),
            scale.attributes().len()
        );
        Ok(Dataset {
            label: spec.label.clone(),
            original_attributes: mvc.columns().len(),
            scale,
            rows,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn scaled_attributes(&self) -> usize {
        self.scale.attributes().len()
    }

    /// Rows `start..start + count`, or `None` when the dataset is too short.
    pub fn rows(&self, start: usize, count: usize) -> Option<&[(String, BitSet)]> {
        self.rows.get(start..start.checked_add(count)?)
    }

    /// Context of the first `n` rows.
    pub fn context(&self, n: usize) -> Result<FormalContext, CliError> {
        let rows = self.rows(0, n).ok_or_else(|| {
            CliError::Data(format!(
                "{} has {} rows, {n} requested",
                self.label,
                self.rows.len()
            ))
        })?;
        Ok(FormalContext::new(
            rows.iter().map(|(name, _)| name.clone()).collect(),
            self.scale.attributes().to_vec(),
            rows.iter().map(|(_, bits)| bits.clone()).collect(),
        )?)
    }

    /// Source columns in which some row has more than one scaled bit.
    pub fn overfull_columns(&self) -> Vec<String> {
        self.scale
            .blocks()
            .filter(|(_, block)| {
                self.rows
                    .iter()
                    .any(|(_, bits)| block.clone().filter(|&m| bits.contains(m)).count() > 1)
            })
            .map(|(name, _)| name.to_owned())
            .collect()
    }
}

/// Published figures for one initial size: concept count, initial build
/// seconds, and seconds for 10, 100 and 1000 added instances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PublishedRow {
    pub instances: usize,
    pub original_attributes: usize,
    pub scaled_attributes: usize,
    pub concepts: usize,
    pub initial_seconds: f64,
    pub batch_seconds: [Option<f64>; 3],
}

pub const PUBLISHED_BATCH_SIZES: [usize; 3] = [10, 100, 1000];

#[derive(Clone, Copy, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub csv: &'static str,
    pub schema: &'static str,
    pub exclude: &'static [&'static str],
    pub published: &'static [PublishedRow],
}

const fn row(
    instances: usize,
    original_attributes: usize,
    scaled_attributes: usize,
    concepts: usize,
    initial_seconds: f64,
    batch_seconds: [Option<f64>; 3],
) -> PublishedRow {
    PublishedRow {
        instances,
        original_attributes,
        scaled_attributes,
        concepts,
        initial_seconds,
        batch_seconds,
    }
}

pub const VOTING: Preset = Preset {
    name: "voting",
    csv: "voting/house-votes-84.data",
    schema: "voting/house-votes-84.schema",
    exclude: &["class"],
    published: &[
        row(20, 16, 32, 55, 0.0659, [Some(0.2186), Some(0.3658), None]),
        row(50, 16, 32, 97, 0.1122, [Some(0.2177), Some(0.3734), None]),
        row(100, 16, 32, 144, 0.2248, [Some(0.2192), Some(0.4070), None]),
    ],
};

pub const MUSHROOM: Preset = Preset {
    name: "mushroom",
    csv: "mushroom/agaricus-lepiota-complete.data",
    schema: "mushroom/agaricus-lepiota.schema",
    exclude: &["class"],
    published: &[
        row(
            200,
            22,
            128,
            311,
            2.7160,
            [Some(0.2576), Some(0.8398), Some(12.8152)],
        ),
        row(
            500,
            22,
            128,
            628,
            9.3878,
            [Some(0.2800), Some(1.1008), Some(15.1078)],
        ),
        row(
            1000,
            22,
            128,
            1141,
            26.0752,
            [Some(0.3162), Some(1.5070), Some(20.0294)],
        ),
        row(
            2000,
            22,
            128,
            2149,
            81.2578,
            [Some(0.4056), Some(2.4696), Some(28.6650)],
        ),
    ],
};

pub const PRESETS: [Preset; 2] = [VOTING, MUSHROOM];

impl Preset {
    pub fn find(name: &str) -> Option<Preset> {
        PRESETS.iter().copied().find(|p| p.name == name)
    }

    pub fn spec(&self, data_dir: &Path, seed: Option<u64>) -> DatasetSpec {
        DatasetSpec {
            label: self.name.to_owned(),
            csv: data_dir.join(self.csv),
            schema: data_dir.join(self.schema),
            has_header: false,
            exclude: self.exclude.iter().map(|s| (*s).to_owned()).collect(),
            policy: MissingPolicy::NoAttribute,
            seed,
        }
    }

    pub fn published_row(&self, instances: usize) -> Option<PublishedRow> {
        self.published
            .iter()
            .copied()
            .find(|r| r.instances == instances)
    }
}

/// `data/` at the workspace root.
pub fn default_data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}
