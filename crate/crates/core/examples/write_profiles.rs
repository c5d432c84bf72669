//! Regenerates the synthetic profile CSVs shipped under `presets/profiles`.
//!
//! ```text
//! cargo run -p mgplan-core --example write_profiles -- presets/profiles
//! ```

use std::fs::File;
use std::path::PathBuf;

use mgplan::scenarios::synthetic::{synthetic_base, Outlook};
use mgplan::scenarios::{write_profiles, TimeGrid};

struct Family {
    prefix: &'static str,
    intervals: usize,
    years: usize,
    block_years: usize,
    peak_kw: f64,
    heat_fraction: f64,
}

const FAMILIES: &[Family] = &[
    Family { prefix: "desk", intervals: 6, years: 2, block_years: 1, peak_kw: 600.0, heat_fraction: 0.0 },
    Family { prefix: "desk_chp", intervals: 6, years: 2, block_years: 1, peak_kw: 600.0, heat_fraction: 0.2 },
    Family { prefix: "case", intervals: 6, years: 4, block_years: 1, peak_kw: 40000.0, heat_fraction: 0.25 },
];

fn main() -> mgplan::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "presets/profiles".into()));
    std::fs::create_dir_all(&dir).map_err(|e| mgplan::Error::Io { path: dir.clone(), source: e })?;
    for f in FAMILIES {
        let grid = TimeGrid::new(f.intervals, f.years, f.block_years)?;
        for outlook in Outlook::ALL {
            let base = synthetic_base(outlook, &grid, f.peak_kw, f.heat_fraction);
            let path = dir.join(format!("{}_{}.csv", f.prefix, outlook.name()));
            let file = File::create(&path).map_err(|e| mgplan::Error::Io { path: path.clone(), source: e })?;
            write_profiles(&base, &grid, file)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
