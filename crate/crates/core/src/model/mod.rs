//! Compilation of catalog, scenarios and study switches into the deterministic
//! equivalent MILP, plus the derived instances used for value-of-information studies.

mod build;
mod config;
mod instance;
mod variants;

pub use build::{
    add_balance_constraints, add_commitment_constraints, add_installation_constraints,
    add_peak_and_emission_constraints, add_storage_constraints, build_instance, build_objective,
    emission_allowance, instance_resources, register_variables, SNG_PRICE_SHARE, SOC_MAX_FRACTION,
    SOC_MIN_FRACTION,
};
pub use config::{ForcedInstall, StudyConfig};
pub use instance::{Constraint, Family, MilpInstance, Sense, Symbol, VarIndex, VarKey, Variable};
pub use variants::{
    build_mean_value_instance, design_from_values, fix_first_stage, mean_value_scenarios, Design,
};
