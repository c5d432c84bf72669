//! Candidate equipment data model, the bundled default dataset and catalog file I/O.

mod defaults;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use defaults::default_catalog;

/// The closed set of resources that flow through the hub.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ResourceId {
    Electricity,
    Heat,
    Biomass,
    Gas,
    Oil,
    #[serde(rename = "CO2")]
    Co2,
    WoodFuel,
    Coal,
    H2,
    Water,
}

impl ResourceId {
    pub const ALL: [ResourceId; 10] = [
        ResourceId::Electricity,
        ResourceId::Heat,
        ResourceId::Biomass,
        ResourceId::Gas,
        ResourceId::Oil,
        ResourceId::Co2,
        ResourceId::WoodFuel,
        ResourceId::Coal,
        ResourceId::H2,
        ResourceId::Water,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ResourceId::Electricity => "Electricity",
            ResourceId::Heat => "Heat",
            ResourceId::Biomass => "Biomass",
            ResourceId::Gas => "Gas",
            ResourceId::Oil => "Oil",
            ResourceId::Co2 => "CO2",
            ResourceId::WoodFuel => "WoodFuel",
            ResourceId::Coal => "Coal",
            ResourceId::H2 => "H2",
            ResourceId::Water => "Water",
        }
    }
}

impl fmt::Display for ResourceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ResourceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ResourceId::ALL
            .into_iter()
            .find(|r| r.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown resource `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquipmentKind {
    Generator,
    Storage,
    RenewableWind,
    RenewablePV,
}

impl EquipmentKind {
    pub fn is_renewable(self) -> bool {
        matches!(self, EquipmentKind::RenewableWind | EquipmentKind::RenewablePV)
    }
}

/// Wind turbine power curve speeds in m/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindParams {
    pub cut_in: f64,
    pub rated: f64,
    pub cut_out: f64,
}

/// Photovoltaic cell parameters: efficiency, temperature coefficient (1/°C) and
/// reference cell temperature (°C).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PvParams {
    pub efficiency: f64,
    pub temp_coeff: f64,
    pub t_ref: f64,
}

impl Default for WindParams {
    fn default() -> Self {
        WindParams {
            cut_in: 3.0,
            rated: 12.0,
            cut_out: 25.0,
        }
    }
}

impl Default for PvParams {
    fn default() -> Self {
        PvParams {
            efficiency: 0.18,
            temp_coeff: 0.004,
            t_ref: 25.0,
        }
    }
}

fn default_frac_max() -> f64 {
    1.0
}

/// One candidate device.
///
/// Power limits are in kW, capacities in kWh. Costs are in an opaque currency unit:
/// `alpha0`/`beta0`/`gamma0` are one-off build costs per kW, per kWh and fixed,
/// `alpha_k`/`beta_k`/`gamma_k` the matching yearly maintenance costs. `gen` and
/// `cons` hold the amount of each resource produced or consumed per kW of operating
/// power per hour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquipmentSpec {
    pub id: String,
    pub kind: EquipmentKind,
    pub rp_min: f64,
    pub rp_max: f64,
    #[serde(default)]
    pub cap_min: f64,
    #[serde(default)]
    pub cap_max: f64,
    #[serde(default)]
    pub alpha0: f64,
    #[serde(default)]
    pub beta0: f64,
    #[serde(default)]
    pub gamma0: f64,
    #[serde(default)]
    pub alpha_k: f64,
    #[serde(default)]
    pub beta_k: f64,
    #[serde(default)]
    pub gamma_k: f64,
    #[serde(default)]
    pub gen: BTreeMap<ResourceId, f64>,
    #[serde(default)]
    pub cons: BTreeMap<ResourceId, f64>,
    #[serde(default)]
    pub p_frac_min: f64,
    #[serde(default = "default_frac_max")]
    pub p_frac_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wind_params: Option<WindParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pv_params: Option<PvParams>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourcePrice {
    pub purchase: f64,
    pub surplus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Gen,
    Cons,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    pub equipment: Vec<EquipmentSpec>,
    #[serde(default)]
    pub resource_prices: BTreeMap<ResourceId, ResourcePrice>,
}

impl Catalog {
    pub fn lookup(&self, id: &str) -> Result<&EquipmentSpec> {
        self.equipment
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownEquipment(id.to_string()))
    }

    pub fn lookup_mut(&mut self, id: &str) -> Result<&mut EquipmentSpec> {
        self.equipment
            .iter_mut()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownEquipment(id.to_string()))
    }

    /// Rate of `resource` produced or consumed by `equip` at unit power; zero when the
    /// resource is absent from the table.
    pub fn coefficient(&self, equip: &str, resource: ResourceId, direction: Direction) -> Result<f64> {
        Ok(self.lookup(equip)?.rate(resource, direction))
    }

    pub fn purchase_price(&self, resource: ResourceId) -> f64 {
        self.resource_prices.get(&resource).map_or(0.0, |p| p.purchase)
    }

    pub fn surplus_price(&self, resource: ResourceId) -> f64 {
        self.resource_prices.get(&resource).map_or(0.0, |p| p.surplus)
    }

    /// Keeps only the listed equipment, in catalog order.
    pub fn subset(&self, ids: &[String]) -> Result<Catalog> {
        for id in ids {
            self.lookup(id)?;
        }
        Ok(Catalog {
            equipment: self
                .equipment
                .iter()
                .filter(|e| ids.contains(&e.id))
                .cloned()
                .collect(),
            resource_prices: self.resource_prices.clone(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for e in &self.equipment {
            if !seen.insert(e.id.as_str()) {
                return Err(Error::validation(&e.id, "id", "duplicate equipment id"));
            }
            e.validate()?;
        }
        for (resource, price) in &self.resource_prices {
            if !price.purchase.is_finite() || !price.surplus.is_finite() {
                return Err(Error::Invalid(format!("non-finite price for {resource}")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }

    pub fn from_json(text: &str) -> Result<Catalog> {
        let catalog: Catalog = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        catalog.validate()?;
        Ok(catalog)
    }
}

impl EquipmentSpec {
    pub fn rate(&self, resource: ResourceId, direction: Direction) -> f64 {
        let table = match direction {
            Direction::Gen => &self.gen,
            Direction::Cons => &self.cons,
        };
        table.get(&resource).copied().unwrap_or(0.0)
    }

    pub fn is_storage(&self) -> bool {
        self.kind == EquipmentKind::Storage
    }

    pub fn is_generator(&self) -> bool {
        self.kind == EquipmentKind::Generator
    }

    pub fn is_renewable(&self) -> bool {
        self.kind.is_renewable()
    }

    /// Resources this device touches in either direction.
    pub fn resources(&self) -> impl Iterator<Item = ResourceId> + '_ {
        self.gen.keys().chain(self.cons.keys()).copied()
    }

    fn validate(&self) -> Result<()> {
        let id = self.id.as_str();
        let finite = [
            ("rp_min", self.rp_min),
            ("rp_max", self.rp_max),
            ("cap_min", self.cap_min),
            ("cap_max", self.cap_max),
            ("alpha0", self.alpha0),
            ("beta0", self.beta0),
            ("gamma0", self.gamma0),
            ("alpha_k", self.alpha_k),
            ("beta_k", self.beta_k),
            ("gamma_k", self.gamma_k),
            ("p_frac_min", self.p_frac_min),
            ("p_frac_max", self.p_frac_max),
        ];
        for (field, v) in finite {
            if !v.is_finite() {
                return Err(Error::validation(id, field, "must be finite"));
            }
        }
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(Error::validation(id, "id", "must be non-empty without whitespace"));
        }
        if self.rp_min < 0.0 || self.rp_min > self.rp_max {
            return Err(Error::validation(id, "rp_min", "need 0 <= rp_min <= rp_max"));
        }
        if self.cap_min < 0.0 || self.cap_min > self.cap_max {
            return Err(Error::validation(id, "cap_min", "need 0 <= cap_min <= cap_max"));
        }
        if !self.is_storage() && self.cap_max != 0.0 {
            return Err(Error::validation(id, "cap_max", "only storage may have capacity"));
        }
        if self.p_frac_min < 0.0 || self.p_frac_min > self.p_frac_max || self.p_frac_max > 1.0 {
            return Err(Error::validation(
                id,
                "p_frac_min",
                "need 0 <= p_frac_min <= p_frac_max <= 1",
            ));
        }
        for (field, table) in [("gen", &self.gen), ("cons", &self.cons)] {
            for (resource, rate) in table {
                if !rate.is_finite() || *rate < 0.0 {
                    return Err(Error::validation(
                        id,
                        field,
                        format!("rate for {resource} must be finite and >= 0"),
                    ));
                }
            }
        }
        match self.kind {
            EquipmentKind::RenewableWind => {
                let w = self
                    .wind_params
                    .ok_or_else(|| Error::validation(id, "wind_params", "required for wind turbines"))?;
                if !(w.cut_in >= 0.0 && w.cut_in < w.rated && w.rated <= w.cut_out) {
                    return Err(Error::validation(
                        id,
                        "wind_params",
                        "need 0 <= cut_in < rated <= cut_out",
                    ));
                }
            }
            EquipmentKind::RenewablePV => {
                let p = self
                    .pv_params
                    .ok_or_else(|| Error::validation(id, "pv_params", "required for PV"))?;
                if !(p.efficiency.is_finite() && p.temp_coeff.is_finite() && p.t_ref.is_finite())
                    || p.efficiency < 0.0
                {
                    return Err(Error::validation(id, "pv_params", "must be finite, efficiency >= 0"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Catalog::from_json(&text)
}

pub fn save_catalog(catalog: &Catalog, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, catalog.to_json()).map_err(|e| Error::io(path, e))
}
