use std::collections::BTreeMap;

use super::{Catalog, EquipmentKind, EquipmentSpec, PvParams, ResourceId, ResourcePrice, WindParams};

use ResourceId::*;

struct Row {
    id: &'static str,
    kind: EquipmentKind,
    rp: (f64, f64),
    cap: (f64, f64),
    // alpha0, beta0, alpha_k, beta_k
    cost: (f64, f64, f64, f64),
    cons: &'static [(ResourceId, f64)],
    gen: &'static [(ResourceId, f64)],
}

const WIND: EquipmentKind = EquipmentKind::RenewableWind;
const PV: EquipmentKind = EquipmentKind::RenewablePV;
const GEN: EquipmentKind = EquipmentKind::Generator;
const STORE: EquipmentKind = EquipmentKind::Storage;

// Power/capacity limits, first-year build and maintenance costs and the unit-power
// consumption/generation tables of the eighteen candidates.
const ROWS: &[Row] = &[
    Row { id: "WindTurbine-1", kind: WIND, rp: (100.0, 200000.0), cap: (0.0, 0.0), cost: (20039.04, 0.0, 403.2, 0.0), cons: &[], gen: &[(Electricity, 1.0)] },
    Row { id: "WindTurbine-2", kind: WIND, rp: (100.0, 200000.0), cap: (0.0, 0.0), cost: (20039.04, 0.0, 403.2, 0.0), cons: &[], gen: &[(Electricity, 1.0)] },
    Row { id: "WindTurbine-3", kind: WIND, rp: (100.0, 200000.0), cap: (0.0, 0.0), cost: (20039.04, 0.0, 403.2, 0.0), cons: &[], gen: &[(Electricity, 1.0)] },
    Row { id: "Photovoltaic-1", kind: PV, rp: (100.0, 200000.0), cap: (0.0, 0.0), cost: (20744.64, 0.0, 248.6, 0.0), cons: &[], gen: &[(Electricity, 1.0)] },
    Row { id: "Photovoltaic-2", kind: PV, rp: (100.0, 200000.0), cap: (0.0, 0.0), cost: (20744.64, 0.0, 248.6, 0.0), cons: &[], gen: &[(Electricity, 1.0)] },
    Row { id: "Photovoltaic-3", kind: PV, rp: (100.0, 200000.0), cap: (0.0, 0.0), cost: (20744.64, 0.0, 248.6, 0.0), cons: &[], gen: &[(Electricity, 1.0)] },
    Row { id: "BiomassGenerator", kind: GEN, rp: (2500.0, 500000.0), cap: (0.0, 0.0), cost: (28082.88, 0.0, 1814.4, 0.0), cons: &[(Biomass, 20.07)], gen: &[(Electricity, 1.0), (Co2, 79.0)] },
    Row { id: "GasCogenerator-1", kind: GEN, rp: (3350.0, 670000.0), cap: (0.0, 0.0), cost: (8537.76, 0.0, 672.0, 0.0), cons: &[(Gas, 3.81)], gen: &[(Electricity, 1.0), (Heat, 5.7), (Co2, 599.0)] },
    Row { id: "OilCogenerator-1", kind: GEN, rp: (750.0, 150000.0), cap: (0.0, 0.0), cost: (9172.8, 0.0, 530.9, 0.0), cons: &[(Oil, 11.3)], gen: &[(Electricity, 1.0), (Heat, 2.5), (Co2, 738.0)] },
    Row { id: "LithiumIonBattery", kind: STORE, rp: (1000.0, 500000.0), cap: (100000.0, 500000.0), cost: (0.0, 12096.0, 134.4, 336.0), cons: &[(Electricity, 1.05)], gen: &[(Electricity, 0.95)] },
    Row { id: "RecipEngine3", kind: GEN, rp: (9341.0, 9341.0), cap: (0.0, 0.0), cost: (10031.0, 0.0, 514.1, 0.0), cons: &[(Gas, 2.4)], gen: &[(Electricity, 1.0), (Heat, 3.02), (Co2, 448.2)] },
    Row { id: "GasTurbine-1", kind: GEN, rp: (3304.0, 3304.0), cap: (0.0, 0.0), cost: (22967.0, 0.0, 762.05, 0.0), cons: &[(Gas, 4.18)], gen: &[(Electricity, 1.0), (Heat, 6.32), (Co2, 361.5)] },
    Row { id: "SteamTurbine-1", kind: GEN, rp: (500.0, 500.0), cap: (0.0, 0.0), cost: (7952.0, 0.0, 604.8, 0.0), cons: &[(Oil, 57.4)], gen: &[(Electricity, 1.0), (Heat, 41.9), (Co2, 247.6)] },
    Row { id: "MicroTurbine-3", kind: GEN, rp: (950.0, 950.0), cap: (0.0, 0.0), cost: (17500.0, 0.0, 725.8, 0.0), cons: &[(Gas, 3.76)], gen: &[(Electricity, 1.0), (Heat, 4.93), (Co2, 369.7)] },
    Row { id: "FuelCell-1", kind: GEN, rp: (1400.0, 1400.0), cap: (0.0, 0.0), cost: (32200.0, 0.0, 2419.2, 0.0), cons: &[(Gas, 2.35)], gen: &[(Electricity, 1.0), (Heat, 3.33), (Co2, 235.9)] },
    Row { id: "Biogasifier-1", kind: GEN, rp: (6600.0, 6600.0), cap: (0.0, 0.0), cost: (34392.0, 0.0, 2693.4, 0.0), cons: &[(WoodFuel, 20.5)], gen: &[(Electricity, 1.0), (Co2, 106.5)] },
    Row { id: "Electrolyzer", kind: GEN, rp: (10000.0, 100000.0), cap: (0.0, 0.0), cost: (5355.0, 0.0, 289.0, 0.0), cons: &[(Electricity, 1.32)], gen: &[(H2, 1.0)] },
    Row { id: "MethanationReactor", kind: GEN, rp: (51300.0, 51300.0), cap: (0.0, 0.0), cost: (5580.1, 0.0, 210.6, 0.0), cons: &[(Co2, 177.14), (H2, 1.28), (Water, 0.748)], gen: &[(Electricity, 0.002), (Gas, 1.0)] },
];

// Not from the tabulated dataset: purchase prices per resource unit (kWh, MJ, g, kg).
// They are placeholders so the default catalog is usable out of the box.
const PRICES: &[(ResourceId, f64)] = &[
    (Electricity, 2.5),
    (Heat, 0.0),
    (Biomass, 0.15),
    (Gas, 1.5),
    (Oil, 0.9),
    (Co2, 0.0),
    (WoodFuel, 0.12),
    (Coal, 0.1),
    (H2, 0.0),
    (Water, 0.02),
];

fn rate_table(rates: &[(ResourceId, f64)]) -> BTreeMap<ResourceId, f64> {
    rates.iter().copied().collect()
}

/// The bundled eighteen-device catalog.
///
/// Fixed build and maintenance costs (`gamma0`, `gamma_k`) are zero and generator
/// operating fractions span `[0, 1]` since the dataset does not list them. Wind speeds
/// (3/12/25 m/s) and PV parameters (0.18, 0.004/°C, 25 °C) are likewise not from the
/// dataset; they are ordinary textbook values.
pub fn default_catalog() -> Catalog {
    let equipment = ROWS
        .iter()
        .map(|row| EquipmentSpec {
            id: row.id.to_string(),
            kind: row.kind,
            rp_min: row.rp.0,
            rp_max: row.rp.1,
            cap_min: row.cap.0,
            cap_max: row.cap.1,
            alpha0: row.cost.0,
            beta0: row.cost.1,
            gamma0: 0.0,
            alpha_k: row.cost.2,
            beta_k: row.cost.3,
            gamma_k: 0.0,
            gen: rate_table(row.gen),
            cons: rate_table(row.cons),
            p_frac_min: 0.0,
            p_frac_max: 1.0,
            wind_params: (row.kind == WIND).then(WindParams::default),
            pv_params: (row.kind == PV).then(PvParams::default),
        })
        .collect();
    let resource_prices = PRICES
        .iter()
        .map(|&(r, purchase)| (r, ResourcePrice { purchase, surplus: 0.0 }))
        .collect();
    Catalog {
        equipment,
        resource_prices,
    }
}
