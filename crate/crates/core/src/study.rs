//! Run configurations: one JSON file naming the catalog, profile files, policy
//! trajectories, study switches and solver backend of a study.
//!
//! ```json
//! {
//!   "name": "desk",
//!   "catalog": "desk_catalog.json",
//!   "grid": { "intervals_per_day": 6, "years": 2, "block_years": 1 },
//!   "bases": [{ "name": "likely", "profile": "profiles/desk_likely.csv" }],
//!   "policies": [{ "name": "constant" }],
//!   "study": { "elec_purchase_cap": 1600 },
//!   "backend": { "kind": "exact" }
//! }
//! ```
//!
//! Relative paths are resolved against the directory holding the configuration.

use std::collections::BTreeMap;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::catalog::{default_catalog, load_catalog, Catalog, ResourceId, ResourcePrice};
use crate::error::{Error, Result};
use crate::model::{build_instance, MilpInstance, StudyConfig};
use crate::scenarios::{assemble_scenarios, build_trajectory, load_profiles, PolicyPair, ScenarioSet, TimeGrid};
use crate::solve::{Backend, Limits, SOLVER_ENV};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub intervals_per_day: usize,
    pub years: usize,
    pub block_years: usize,
    #[serde(default = "default_days")]
    pub days_per_year: f64,
}

fn default_days() -> f64 {
    365.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub name: String,
    pub profile: PathBuf,
}

/// Per-block fractional changes applied to the carbon price and the emission limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub name: String,
    #[serde(default)]
    pub cet_change: f64,
    #[serde(default)]
    pub emission_change: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BackendSpec {
    Exact {
        /// Seconds.
        #[serde(default)]
        time_limit: Option<f64>,
    },
    External {
        /// Falls back to the environment variable when absent.
        #[serde(default)]
        command: Option<String>,
    },
}

impl Default for BackendSpec {
    fn default() -> Self {
        BackendSpec::Exact { time_limit: None }
    }
}

impl BackendSpec {
    /// Resolves the solver. An external backend without a command uses the template in
    /// the environment.
    pub fn backend(&self) -> Result<Backend> {
        match self {
            BackendSpec::Exact { time_limit } => Ok(Backend::Exact(Limits {
                time: *time_limit,
                ..Limits::default()
            })),
            BackendSpec::External { command: Some(c) } => Ok(Backend::External(c.clone())),
            BackendSpec::External { command: None } => std::env::var(SOLVER_ENV)
                .map(Backend::External)
                .map_err(|_| Error::Invalid(format!("external backend needs a command or {SOLVER_ENV}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    /// Catalog JSON; the bundled catalog when absent.
    #[serde(default)]
    pub catalog: Option<PathBuf>,
    /// Restricts the catalog to these ids, in this order.
    #[serde(default)]
    pub equipment: Option<Vec<String>>,
    /// Field-level patches per equipment id, e.g. `{"Electrolyzer": {"p_frac_min": 0.2}}`.
    #[serde(default)]
    pub catalog_overrides: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub prices: BTreeMap<ResourceId, ResourcePrice>,
    pub grid: GridSpec,
    pub bases: Vec<BaseSpec>,
    pub policies: Vec<PolicySpec>,
    #[serde(default)]
    pub study: StudyConfig,
    #[serde(default)]
    pub backend: BackendSpec,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(skip)]
    root: PathBuf,
}

/// Everything needed to build and solve one study.
#[derive(Debug, Clone)]
pub struct Study {
    pub name: String,
    pub catalog: Catalog,
    pub set: ScenarioSet,
    pub config: StudyConfig,
}

impl Study {
    pub fn instance(&self) -> Result<MilpInstance> {
        build_instance(&self.catalog, &self.set, &self.config)
    }
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<RunConfig> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
        RunConfig::from_json(&text, root).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str, root: impl Into<PathBuf>) -> Result<RunConfig> {
        let mut cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.root = root.into();
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run config serializes")
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.root.join(path)
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        match &self.out_dir {
            Some(p) => self.resolve(p),
            None => self.root.join("out").join(&self.name),
        }
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        let mut grid = TimeGrid::new(self.grid.intervals_per_day, self.grid.years, self.grid.block_years)?;
        grid.days_per_year = self.grid.days_per_year;
        grid.validate()?;
        Ok(grid)
    }

    /// Every referenced file, in the order they are read.
    pub fn referenced_files(&self) -> Vec<PathBuf> {
        self.catalog
            .iter()
            .chain(self.bases.iter().map(|b| &b.profile))
            .map(|p| self.resolve(p))
            .collect()
    }

    /// Fails with an I/O error naming the first referenced file that does not exist.
    pub fn check_files(&self) -> Result<()> {
        for path in self.referenced_files() {
            if !path.is_file() {
                return Err(Error::io(&path, std::io::Error::new(ErrorKind::NotFound, "file not found")));
            }
        }
        Ok(())
    }

    pub fn load_catalog(&self) -> Result<Catalog> {
        let mut catalog = match &self.catalog {
            Some(p) => load_catalog(self.resolve(p))?,
            None => default_catalog(),
        };
        if let Some(ids) = &self.equipment {
            catalog = catalog.subset(ids)?;
        }
        for (id, patch) in &self.catalog_overrides {
            let spec = catalog.lookup_mut(id)?;
            let mut value = serde_json::to_value(&*spec).map_err(|e| Error::Parse(e.to_string()))?;
            let (Some(target), Some(fields)) = (value.as_object_mut(), patch.as_object()) else {
                return Err(Error::Parse(format!("override for {id} must be an object")));
            };
            for (k, v) in fields {
                target.insert(k.clone(), v.clone());
            }
            *spec = serde_json::from_value(value).map_err(|e| Error::Parse(format!("override for {id}: {e}")))?;
        }
        for (r, price) in &self.prices {
            catalog.resource_prices.insert(*r, *price);
        }
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn policy_pairs(&self, grid: &TimeGrid) -> Result<Vec<PolicyPair>> {
        self.policies
            .iter()
            .map(|p| {
                Ok(PolicyPair {
                    name: p.name.clone(),
                    cet_price: build_trajectory(self.study.cet_base, p.cet_change, grid)?,
                    emission_limit: build_trajectory(self.study.emission_base, p.emission_change, grid)?,
                })
            })
            .collect()
    }

    /// Loads the catalog and profiles and assembles the scenario set.
    pub fn assemble(&self) -> Result<Study> {
        self.check_files()?;
        let grid = self.time_grid()?;
        let catalog = self.load_catalog()?;
        let bases = self
            .bases
            .iter()
            .map(|b| {
                let mut base = load_profiles(self.resolve(&b.profile), &grid)?;
                base.name = b.name.clone();
                Ok(base)
            })
            .collect::<Result<Vec<_>>>()?;
        let set = assemble_scenarios(&bases, &self.policy_pairs(&grid)?, &grid, &catalog)?;
        self.study.validate()?;
        Ok(Study {
            name: self.name.clone(),
            catalog,
            set,
            config: self.study.clone(),
        })
    }
}
