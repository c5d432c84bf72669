use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::ResourceId;
use crate::error::{Error, Result};

/// Install an equipment unconditionally with at least `min_rated_kw` of rated power.
/// With `forced_on` its commitment binaries are pinned to one in every interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcedInstall {
    pub equipment: String,
    pub min_rated_kw: f64,
    #[serde(default)]
    pub forced_on: bool,
}

/// Study switches: income terms, purchase and surplus limits, financial rates and
/// relaxations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    pub include_cap_trade_income: bool,
    pub include_sng_income: bool,
    /// Escalate cap-and-trade income with inflation like the other cash flows.
    pub cap_trade_inflation: bool,
    pub max_equipment: usize,
    /// Grid electricity energy per interval, kWh.
    pub elec_purchase_cap: f64,
    pub purchasable: BTreeMap<ResourceId, bool>,
    /// Surplus energy per interval; resources without an entry are unbounded.
    pub surplus_cap: BTreeMap<ResourceId, f64>,
    pub discount_rate: f64,
    pub inflation: f64,
    pub peak_coeff: f64,
    pub spin_fraction: f64,
    /// gCO₂/kWh base used when building emission-limit trajectories.
    pub emission_base: f64,
    /// Currency per gCO₂ used as the first value of carbon-price trajectories.
    pub cet_base: f64,
    pub forced_installs: Vec<ForcedInstall>,
    pub relax_elec_purchase_cap: bool,
    pub relax_surplus_cap: bool,
}

impl Default for StudyConfig {
    fn default() -> Self {
        let purchasable = ResourceId::ALL
            .into_iter()
            .map(|r| (r, !matches!(r, ResourceId::Heat | ResourceId::H2 | ResourceId::Co2)))
            .collect();
        StudyConfig {
            include_cap_trade_income: false,
            include_sng_income: false,
            cap_trade_inflation: false,
            max_equipment: 10,
            elec_purchase_cap: 2500.0,
            purchasable,
            surplus_cap: BTreeMap::from([(ResourceId::Electricity, 0.0)]),
            discount_rate: 0.12,
            inflation: 0.0,
            peak_coeff: 0.01,
            spin_fraction: 0.03,
            emission_base: 280.0,
            cet_base: 0.0025,
            forced_installs: Vec::new(),
            relax_elec_purchase_cap: false,
            relax_surplus_cap: false,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_equipment < 1 {
            return Err(Error::Invalid("max_equipment must be at least 1".into()));
        }
        if !(self.discount_rate > -1.0) || !(self.inflation > -1.0) {
            return Err(Error::Invalid("discount and inflation rates must exceed -1".into()));
        }
        let caps = std::iter::once(self.elec_purchase_cap)
            .chain(self.surplus_cap.values().copied())
            .chain([self.peak_coeff, self.spin_fraction]);
        for c in caps {
            if !(c >= 0.0) {
                return Err(Error::Invalid(format!("caps and coefficients must be >= 0, got {c}")));
            }
        }
        for f in &self.forced_installs {
            if !(f.min_rated_kw >= 0.0) {
                return Err(Error::Invalid(format!("forced install {} needs min_rated_kw >= 0", f.equipment)));
            }
        }
        Ok(())
    }

    pub fn is_purchasable(&self, resource: ResourceId) -> bool {
        self.purchasable.get(&resource).copied().unwrap_or(true)
    }

    /// The same study with the grid input cap and the surplus bounds lifted.
    pub fn relaxed(&self) -> StudyConfig {
        StudyConfig {
            relax_elec_purchase_cap: true,
            relax_surplus_cap: true,
            ..self.clone()
        }
    }

    pub fn forced(&self, equip: &str) -> Option<&ForcedInstall> {
        self.forced_installs.iter().find(|f| f.equipment == equip)
    }

    /// Discount factor applied to cash flows of 0-based year `k`.
    pub fn discount(&self, year: usize) -> f64 {
        (1.0 + self.discount_rate).powi(-(year as i32))
    }

    pub fn escalation(&self, year: usize) -> f64 {
        (1.0 + self.inflation).powi(year as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_study_setup() {
        let c = StudyConfig::default();
        assert!(!c.is_purchasable(ResourceId::Heat));
        assert!(!c.is_purchasable(ResourceId::H2));
        assert!(!c.is_purchasable(ResourceId::Co2));
        assert!(c.is_purchasable(ResourceId::Gas));
        assert_eq!(c.max_equipment, 10);
        assert_eq!(c.discount(0), 1.0);
        assert!((c.discount(2) - 1.0 / 1.2544).abs() < 1e-15);
        c.validate().unwrap();
    }

    #[test]
    fn json_is_partial_and_strict() {
        let c: StudyConfig = serde_json::from_str(r#"{"include_sng_income": true}"#).unwrap();
        assert!(c.include_sng_income);
        assert_eq!(c.spin_fraction, 0.03);
        assert!(serde_json::from_str::<StudyConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn rejects_bad_rates() {
        let c = StudyConfig { discount_rate: -1.5, ..StudyConfig::default() };
        assert!(c.validate().is_err());
        let c = StudyConfig { max_equipment: 0, ..StudyConfig::default() };
        assert!(c.validate().is_err());
    }
}
