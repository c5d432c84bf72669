//! Profile CSV: `year,interval,wind_speed,irradiance,temperature,demand_electricity,demand_heat`,
//! one row per (year, interval), both 1-based.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BaseCase, TimeGrid};
use crate::catalog::ResourceId;
use crate::error::{Error, Result};

const HEADER: [&str; 7] = [
    "year",
    "interval",
    "wind_speed",
    "irradiance",
    "temperature",
    "demand_electricity",
    "demand_heat",
];

#[derive(Debug, Serialize, Deserialize)]
struct ProfileRow {
    year: usize,
    interval: usize,
    wind_speed: f64,
    irradiance: f64,
    temperature: f64,
    demand_electricity: f64,
    demand_heat: f64,
}

pub fn load_profiles(path: impl AsRef<Path>, grid: &TimeGrid) -> Result<BaseCase> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_profiles(file, &name, grid)
}

pub fn parse_profiles(reader: impl Read, name: &str, grid: &TimeGrid) -> Result<BaseCase> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse(format!("{name}: {e}")))?;
    for col in HEADER {
        if !headers.iter().any(|h| h == col) {
            return Err(Error::Parse(format!("{name}: missing column `{col}`")));
        }
    }
    if headers.len() != HEADER.len() {
        return Err(Error::Parse(format!(
            "{name}: expected columns {}",
            HEADER.join(",")
        )));
    }

    let n = grid.len();
    let mut slots: Vec<Option<ProfileRow>> = (0..n).map(|_| None).collect();
    let mut rows = 0usize;
    for (line, rec) in rdr.deserialize::<ProfileRow>().enumerate() {
        let row = rec.map_err(|e| Error::Parse(format!("{name}: row {}: {e}", line + 2)))?;
        rows += 1;
        if row.year == 0 || row.year > grid.years || row.interval == 0 || row.interval > grid.intervals_per_day {
            return Err(Error::Length(format!(
                "{name}: row {} (year {}, interval {}) outside {} years x {} intervals",
                line + 2,
                row.year,
                row.interval,
                grid.years,
                grid.intervals_per_day
            )));
        }
        let slot = grid.slot(row.year - 1, row.interval - 1);
        if slots[slot].is_some() {
            return Err(Error::Parse(format!(
                "{name}: duplicate row for year {}, interval {}",
                row.year, row.interval
            )));
        }
        slots[slot] = Some(row);
    }
    if rows != n {
        return Err(Error::Length(format!(
            "{name}: {rows} rows, expected {n} ({} years x {} intervals)",
            grid.years, grid.intervals_per_day
        )));
    }
    let rows: Vec<ProfileRow> = slots.into_iter().map(|r| r.expect("every slot filled")).collect();
    let collect = |f: fn(&ProfileRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let base = BaseCase {
        name: name.to_string(),
        wind_speed: collect(|r| r.wind_speed),
        irradiance: collect(|r| r.irradiance),
        temperature: collect(|r| r.temperature),
        demand: BTreeMap::from([
            (ResourceId::Electricity, collect(|r| r.demand_electricity)),
            (ResourceId::Heat, collect(|r| r.demand_heat)),
        ]),
    };
    base.validate(grid)?;
    Ok(base)
}

pub fn write_profiles(base: &BaseCase, grid: &TimeGrid, writer: impl Write) -> Result<()> {
    base.validate(grid)?;
    let mut wtr = csv::Writer::from_writer(writer);
    for year in 0..grid.years {
        for interval in 0..grid.intervals_per_day {
            let s = grid.slot(year, interval);
            wtr.serialize(ProfileRow {
                year: year + 1,
                interval: interval + 1,
                wind_speed: base.wind_speed[s],
                irradiance: base.irradiance[s],
                temperature: base.temperature[s],
                demand_electricity: base.demand(ResourceId::Electricity, s),
                demand_heat: base.demand(ResourceId::Heat, s),
            })
            .map_err(|e| Error::Parse(e.to_string()))?;
        }
    }
    wtr.flush().map_err(|e| Error::io("<profile writer>", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::synthetic::{synthetic_base, Outlook};

    fn csv_for(grid: &TimeGrid, per_day: usize) -> String {
        let mut s = HEADER.join(",");
        s.push('\n');
        for y in 1..=grid.years {
            for t in 1..=per_day {
                s.push_str(&format!("{y},{t},6.5,0.4,21.0,1200,0\n"));
            }
        }
        s
    }

    #[test]
    fn full_file_is_accepted() {
        let grid = TimeGrid::default();
        let base = parse_profiles(csv_for(&grid, 48).as_bytes(), "x", &grid).unwrap();
        assert_eq!(base.wind_speed.len(), 960);
        assert_eq!(base.demand(ResourceId::Electricity, 959), 1200.0);
    }

    #[test]
    fn short_day_is_a_length_error() {
        let grid = TimeGrid::default();
        let err = parse_profiles(csv_for(&grid, 47).as_bytes(), "x", &grid).unwrap_err();
        assert!(matches!(err, Error::Length(_)), "{err}");
    }

    #[test]
    fn missing_series_is_a_parse_error() {
        let grid = TimeGrid::new(2, 1, 1).unwrap();
        let text = "year,interval,wind_speed,irradiance,temperature,demand_electricity\n1,1,1,1,1,1\n1,2,1,1,1,1\n";
        assert!(matches!(parse_profiles(text.as_bytes(), "x", &grid), Err(Error::Parse(_))));
        let text = "year,interval,wind_speed,irradiance,temperature,demand_electricity,demand_heat\n1,1,1,1,1,1,oops\n";
        assert!(matches!(parse_profiles(text.as_bytes(), "x", &grid), Err(Error::Parse(_))));
    }

    #[test]
    fn write_then_read() {
        let grid = TimeGrid::new(6, 2, 1).unwrap();
        let base = synthetic_base(Outlook::Likely, &grid, 1000.0, 0.1);
        let mut buf = Vec::new();
        write_profiles(&base, &grid, &mut buf).unwrap();
        let back = parse_profiles(buf.as_slice(), &base.name, &grid).unwrap();
        assert_eq!(back, base);
    }
}
