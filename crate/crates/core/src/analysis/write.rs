//! CSV renderings of the reports.

use std::io::Write;

use serde::Serialize;

use super::report::{DesignReport, DispatchRow};
use super::vss::VssResult;
use crate::error::{Error, Result};

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(format!("csv output: {e}"))
}

fn flush<W: Write>(writer: csv::Writer<W>) -> Result<()> {
    writer
        .into_inner()
        .map_err(|e| Error::Parse(format!("csv output: {}", e.error())))?
        .flush()
        .map_err(|e| Error::io("<csv>", e))
}

/// `scenario,year,interval,source,kWh`; indices are written 1-based.
pub fn write_dispatch_csv<W: Write>(out: W, scenario: usize, year: usize, rows: &[DispatchRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scenario", "year", "interval", "source", "kWh"]).map_err(csv_error)?;
    for row in rows {
        let prefix = [(scenario + 1).to_string(), (year + 1).to_string(), (row.interval + 1).to_string()];
        for f in &row.flows {
            w.write_record(prefix.iter().cloned().chain([f.source.clone(), f.kwh.to_string()]))
                .map_err(csv_error)?;
        }
        w.write_record(prefix.iter().cloned().chain(["demand".to_string(), (-row.demand_kwh).to_string()]))
            .map_err(csv_error)?;
    }
    flush(w)
}

/// `equipment,rated_kW,capacity_kWh`; capacity is empty for non-storage rows.
pub fn write_design_csv<W: Write>(out: W, design: &DesignReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["equipment", "rated_kW", "capacity_kWh"]).map_err(csv_error)?;
    for item in &design.items {
        let cap = item.capacity_kwh.map(|c| c.to_string()).unwrap_or_default();
        w.write_record([item.equipment.clone(), item.rated_kw.to_string(), cap])
            .map_err(csv_error)?;
    }
    flush(w)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmissionRow {
    /// 1-based.
    pub scenario: usize,
    /// 1-based.
    pub year: usize,
    #[serde(rename = "tCO2")]
    pub tco2: f64,
}

/// `scenario,year,tCO2`.
pub fn write_emissions_csv<W: Write>(out: W, rows: &[EmissionRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    if rows.is_empty() {
        w.write_record(["scenario", "year", "tCO2"]).map_err(csv_error)?;
    }
    flush(w)
}

/// `ss,evs,vss,relaxed`; an infinite value is written as `inf`.
pub fn write_vss_csv<W: Write>(out: W, results: &[VssResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["ss", "evs", "vss", "relaxed"]).map_err(csv_error)?;
    for r in results {
        w.write_record([r.ss.to_string(), r.evs.to_string(), r.vss.to_string(), r.relaxed.to_string()])
            .map_err(csv_error)?;
    }
    flush(w)
}
