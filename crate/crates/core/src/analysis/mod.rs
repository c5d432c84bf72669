//! Reading designs, dispatch, emissions and costs back out of solutions, and the
//! value-of-information procedures.

mod report;
mod vss;
mod write;

pub use report::{
    annual_emissions, cost_breakdown, dispatch_table, extract_design, renewable_share, CostBreakdown, DesignItem,
    DesignReport, DispatchRow, Flow, RenewableShare,
};
pub use vss::{compute_evpi, compute_vss, EvpiResult, Extended, VssResult};
pub use write::{write_design_csv, write_dispatch_csv, write_emissions_csv, write_vss_csv, EmissionRow};
