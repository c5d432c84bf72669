mod common;

use common::*;
use mgplan::analysis::cost_breakdown;
use mgplan::model::{build_instance, design_from_values, fix_first_stage, Family, MilpInstance, Sense, StudyConfig, VarKey, Variable};
use mgplan::scenarios::{build_trajectory, TimeGrid};
use mgplan::solve::mps::number;
use mgplan::solve::{check_solution, solve_exact_small, Limits, SolveStatus};
use mgplan::study::Study;
use proptest::prelude::*;

/// Random pure-binary program: minimise c·x subject to a few ≥ and ≤ rows.
#[derive(Debug, Clone)]
struct BinaryProgram {
    cost: Vec<f64>,
    rows: Vec<(Vec<f64>, Sense, f64)>,
}

fn binary_program() -> impl Strategy<Value = BinaryProgram> {
    (2usize..=7).prop_flat_map(|n| {
        let cost = prop::collection::vec(-10i32..=10, n);
        let row = (prop::collection::vec(-5i32..=5, n), prop::bool::ANY, -6i32..=8);
        (cost, prop::collection::vec(row, 1..=3)).prop_map(|(cost, rows)| BinaryProgram {
            cost: cost.into_iter().map(f64::from).collect(),
            rows: rows
                .into_iter()
                .map(|(a, ge, b)| (a.into_iter().map(f64::from).collect(), if ge { Sense::Ge } else { Sense::Le }, f64::from(b)))
                .collect(),
        })
    })
}

impl BinaryProgram {
    fn instance(&self) -> MilpInstance {
        let vars = (0..self.cost.len())
            .map(|j| Variable {
                key: VarKey::a(&format!("x{j}")),
                lb: 0.0,
                ub: 1.0,
                integer: true,
            })
            .collect();
        let mut m = MilpInstance::new("random", vars).unwrap();
        for (i, (a, sense, b)) in self.rows.iter().enumerate() {
            m.add_constraint(format!("r{i}"), Family::Install, a.iter().copied().enumerate(), *sense, *b);
        }
        for (j, c) in self.cost.iter().enumerate() {
            m.add_cost(j, *c);
        }
        m
    }

    fn brute_force(&self) -> Option<f64> {
        let n = self.cost.len();
        (0u32..1 << n)
            .filter_map(|mask| {
                let x: Vec<f64> = (0..n).map(|j| f64::from((mask >> j) & 1)).collect();
                let ok = self.rows.iter().all(|(a, sense, b)| {
                    let lhs: f64 = a.iter().zip(&x).map(|(a, x)| a * x).sum();
                    match sense {
                        Sense::Ge => lhs >= *b,
                        Sense::Le => lhs <= *b,
                        Sense::Eq => lhs == *b,
                    }
                });
                ok.then(|| self.cost.iter().zip(&x).map(|(c, x)| c * x).sum())
            })
            .min_by(f64::total_cmp)
    }
}

fn tiny_study(demand: &[f64], years: usize) -> Study {
    let catalog = engine_and_battery();
    let grid = TimeGrid::new(demand.len(), years, 1).unwrap();
    let base = flat_base("b", &grid, |s| demand[s % demand.len()]);
    let set = scenario_set(&catalog, &grid, &[base]);
    Study {
        name: "tiny".into(),
        catalog,
        set,
        config: StudyConfig::default(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_solver_matches_enumeration(p in binary_program()) {
        let solution = solve_exact_small(&p.instance(), Limits::default()).unwrap();
        match p.brute_force() {
            Some(best) => {
                prop_assert_eq!(&solution.status, &SolveStatus::Optimal);
                prop_assert!((solution.objective - best).abs() < 1e-9, "{} vs {}", solution.objective, best);
                prop_assert!(check_solution(&p.instance(), &solution, 1e-6).is_clean());
            }
            None => prop_assert_eq!(&solution.status, &SolveStatus::Infeasible),
        }
    }

    #[test]
    fn mps_numbers_round_trip(x in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
        let text = number(x);
        prop_assert_eq!(text.parse::<f64>().unwrap(), if x == 0.0 { 0.0 } else { x });
        prop_assert!(!text.contains(char::is_whitespace));
    }

    #[test]
    fn trajectories_change_once_per_block(
        base in 1.0f64..1000.0,
        change in -0.9f64..1.0,
        blocks in 1usize..6,
        block_years in 1usize..6,
    ) {
        let grid = TimeGrid::new(4, blocks * block_years, block_years).unwrap();
        let t = build_trajectory(base, change, &grid).unwrap();
        prop_assert_eq!(t.values.len(), grid.years);
        prop_assert_eq!(t.values[0], base);
        for k in 1..grid.years {
            let ratio = t.values[k] / t.values[k - 1];
            if k % block_years == 0 {
                prop_assert!((ratio - (1.0 + change)).abs() < 1e-12);
            } else {
                prop_assert_eq!(ratio, 1.0);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn optimal_plans_are_physically_consistent(
        demand in prop::collection::vec(0.0f64..600.0, 2..=4),
        years in 1usize..=2,
    ) {
        let study = tiny_study(&demand, years);
        let instance = study.instance().unwrap();
        let solution = solve_exact_small(&instance, Limits::default()).unwrap();
        prop_assert_eq!(&solution.status, &SolveStatus::Optimal);
        let report = check_solution(&instance, &solution, 1e-6);
        prop_assert!(report.is_clean(), "{:?}", report.violations);
        prop_assert!(report.objective_error() < 1e-9);
        let bad = physical_violations(&study, &solution, 1e-6);
        prop_assert!(bad.is_empty(), "{:?}", bad);
        prop_assert!(solution.objective >= 0.0);
        let c = cost_breakdown(&solution, &study.catalog, &study.set, &study.config).unwrap();
        prop_assert!(relative_gap(c.net_present_cost, solution.objective) < 1e-6);

        let fixed = fix_first_stage(&instance, &design_from_values(&instance, &solution.values)).unwrap();
        let again = solve_exact_small(&fixed, Limits::default()).unwrap();
        prop_assert!(relative_gap(again.objective, solution.objective) < 1e-9);
    }

    #[test]
    fn builds_are_reproducible(demand in prop::collection::vec(0.0f64..600.0, 2..=4)) {
        let study = tiny_study(&demand, 1);
        let a = build_instance(&study.catalog, &study.set, &study.config).unwrap();
        let b = build_instance(&study.catalog, &study.set, &study.config).unwrap();
        prop_assert_eq!(mgplan::solve::mps_string(&a), mgplan::solve::mps_string(&b));
    }
}
