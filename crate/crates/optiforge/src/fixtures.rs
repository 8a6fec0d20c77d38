//! Golden worked examples used throughout the test suites: a farming LP, a
//! warehouse MILP, and a six-type pump network instance.
//!
//! The LP and MILP ground truths are frozen constants, verified offline by
//! exact-arithmetic oracles (vertex enumeration for the LP, exhaustive
//! pattern search for the MILP) and re-checked against the embedded solvers
//! in the test suites. The pump ground truth is produced by the enumeration
//! solver at first use and cached.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::problem::{
    Assignment, Category, Comparator, Difficulty, FormulationIR, LinearConstraint, Metadata,
    Objective, Sense, Variable, WorldDescriptor,
};
use crate::pump::{PumpInstance, PumpTypeParams};

/// Optimal objective of the farming cooperative LP (exact value
/// 1471000000/2847, confirmed by exact vertex enumeration).
pub const FARMING_OBJECTIVE: f64 = 516_684.229_012_996_13;

/// Optimal objective of the warehouse allocation MILP (confirmed by
/// exhaustive search over open/close patterns and product counts).
pub const WAREHOUSE_OBJECTIVE: f64 = 14_070.0;

/// Cost the pump instance's tabulated reference configuration achieves
/// (five active types, two in series each, one parallel line).
pub const PUMP_REFERENCE_COST: f64 = 796_603.26;

/// Per-type powers of the tabulated reference configuration, in active-type
/// order (types 0, 1, 2, 3, 5).
pub const PUMP_REFERENCE_POWERS: [f64; 5] = [31.54, 45.02, 44.79, 27.77, 37.79];

fn assignment(pairs: &[(&str, f64)]) -> Assignment {
    pairs.iter().map(|(n, v)| (n.to_string(), *v)).collect()
}

/// A farming cooperative plans land, sales, and cattle for maximum profit:
/// six continuous variables, seven constraints.
pub fn farming_lp() -> WorldDescriptor {
    let variables = vec![
        Variable::continuous("x_corn_acres", 0.0, None),
        Variable::continuous("x_soy_acres", 0.0, None),
        Variable::continuous("x_wheat_acres", 0.0, None),
        Variable::continuous("x_corn_sold", 0.0, None),
        Variable::continuous("x_soy_sold", 0.0, None),
        Variable::continuous("x_cattle_units", 0.0, None),
    ];
    let constraints = vec![
        LinearConstraint::new(
            &[
                ("x_corn_acres", 1.0),
                ("x_soy_acres", 1.0),
                ("x_wheat_acres", 1.0),
            ],
            Comparator::Le,
            2000.0,
        ),
        LinearConstraint::new(
            &[
                ("x_corn_acres", 3.0),
                ("x_soy_acres", 2.0),
                ("x_wheat_acres", 1.5),
                ("x_cattle_units", 10.0),
            ],
            Comparator::Le,
            5000.0,
        ),
        LinearConstraint::new(
            &[
                ("x_corn_acres", 2.5),
                ("x_soy_acres", 2.0),
                ("x_wheat_acres", 1.0),
                ("x_cattle_units", 15.0),
            ],
            Comparator::Le,
            4000.0,
        ),
        LinearConstraint::new(
            &[
                ("x_corn_sold", 1.0),
                ("x_cattle_units", 50.0),
                ("x_corn_acres", -180.0),
            ],
            Comparator::Le,
            0.0,
        ),
        LinearConstraint::new(
            &[
                ("x_soy_sold", 1.0),
                ("x_cattle_units", 20.0),
                ("x_soy_acres", -50.0),
            ],
            Comparator::Le,
            0.0,
        ),
        LinearConstraint::new(
            &[
                ("x_corn_acres", -0.2),
                ("x_soy_acres", -0.2),
                ("x_wheat_acres", 0.8),
            ],
            Comparator::Ge,
            0.0,
        ),
        LinearConstraint::new(
            &[("x_corn_sold", 1.0), ("x_soy_sold", 1.0)],
            Comparator::Le,
            100_000.0,
        ),
    ];
    let objective = Objective::new(
        Sense::Max,
        &[
            ("x_corn_sold", 4.0),
            ("x_soy_sold", 10.0),
            ("x_wheat_acres", 160.0),
            ("x_cattle_units", 1000.0),
            ("x_corn_acres", -300.0),
            ("x_soy_acres", -250.0),
        ],
        0.0,
    );
    let mut metadata = Metadata {
        scenario: "farming cooperative".into(),
        ..Metadata::default()
    };
    for (name, unit) in [
        ("x_corn_acres", "acres"),
        ("x_soy_acres", "acres"),
        ("x_wheat_acres", "acres"),
        ("x_corn_sold", "bushels"),
        ("x_soy_sold", "bushels"),
        ("x_cattle_units", "cattle units"),
    ] {
        metadata.units.insert(name.into(), unit.into());
    }
    for (i, label) in [
        "total land",
        "water availability",
        "labor hours",
        "corn production balance",
        "soybean production balance",
        "crop diversity program",
        "silo and transport capacity",
    ]
    .iter()
    .enumerate()
    {
        metadata.constraint_labels.insert(i, (*label).into());
    }
    WorldDescriptor {
        id: "fixture-farming-lp".into(),
        formulation: FormulationIR {
            variables,
            constraints,
            objective,
            category: Category::Lp,
            pump: None,
        },
        solution: assignment(&[
            ("x_corn_acres", 576.044_959_606_603_5),
            ("x_soy_acres", 29.504_741_833_508_955),
            ("x_wheat_acres", 1_394.450_298_559_887_6),
            ("x_corn_sold", 100_000.0),
            ("x_soy_sold", 0.0),
            ("x_cattle_units", 73.761_854_583_772_39),
        ]),
        objective_value: FARMING_OBJECTIVE,
        metadata,
        difficulty: Difficulty::Easy,
    }
}

/// Warehouse opening and cargo allocation: three binary open flags, nine
/// integer product counts, volume windows, and a product-mix requirement.
pub fn warehouse_milp() -> WorldDescriptor {
    let warehouses = [
        ("north", 500.0, 1000.0),
        ("south", 400.0, 800.0),
        ("east", 300.0, 600.0),
    ];
    let product_bounds: BTreeMap<&str, [f64; 3]> = [
        ("widget_a", [100.0, 80.0, 60.0]),
        ("gadget_b", [41.0, 33.0, 25.0]),
        ("gizmo_c", [62.0, 50.0, 37.0]),
    ]
    .into_iter()
    .collect();
    let volumes: BTreeMap<&str, f64> = [("widget_a", 5.0), ("gadget_b", 12.0), ("gizmo_c", 8.0)]
        .into_iter()
        .collect();
    let profits: BTreeMap<&str, f64> =
        [("widget_a", 60.0), ("gadget_b", 150.0), ("gizmo_c", 110.0)]
            .into_iter()
            .collect();

    let mut variables = Vec::new();
    let mut constraints = Vec::new();
    let mut obj_terms: Vec<(String, f64)> = Vec::new();

    for (w, _, cost) in warehouses.iter() {
        let open = format!("open_{w}");
        variables.push(Variable::binary(&open));
        obj_terms.push((open, -cost));
    }
    for (wi, (w, cap, _)) in warehouses.iter().enumerate() {
        let mut upper: Vec<(String, f64)> = Vec::new();
        for (p, bounds) in product_bounds.iter() {
            let name = format!("{p}_{w}");
            variables.push(Variable::integer(&name, 0.0, Some(bounds[wi])));
            obj_terms.push((name.clone(), profits[p]));
            upper.push((name, volumes[p]));
        }
        // volume window: used <= cap * open and used >= 0.1 * cap * open
        let mut le: Vec<(&str, f64)> = upper.iter().map(|(n, v)| (n.as_str(), *v)).collect();
        let open = format!("open_{w}");
        le.push((open.as_str(), -cap));
        constraints.push(LinearConstraint::new(&le, Comparator::Le, 0.0));
        let mut ge: Vec<(&str, f64)> = upper.iter().map(|(n, v)| (n.as_str(), *v)).collect();
        ge.push((open.as_str(), -0.1 * cap));
        constraints.push(LinearConstraint::new(&ge, Comparator::Ge, 0.0));
    }
    // gadget_b total >= 0.2 * widget_a total
    let mix: Vec<(String, f64)> = warehouses
        .iter()
        .flat_map(|(w, _, _)| {
            vec![
                (format!("gadget_b_{w}"), 1.0),
                (format!("widget_a_{w}"), -0.2),
            ]
        })
        .collect();
    constraints.push(LinearConstraint {
        coeffs: mix.into_iter().collect(),
        cmp: Comparator::Ge,
        rhs: 0.0,
    });

    let objective = Objective {
        sense: Sense::Max,
        coeffs: obj_terms.into_iter().collect(),
        offset: 0.0,
    };

    let mut metadata = Metadata {
        scenario: "warehouse logistics".into(),
        ..Metadata::default()
    };
    for v in &variables {
        if v.name.starts_with("open_") {
            metadata
                .roles
                .insert(v.name.clone(), "binary open/close switch".into());
        } else {
            metadata.units.insert(v.name.clone(), "units".into());
        }
    }
    for (i, label) in [
        "north volume capacity",
        "north minimum utilization",
        "south volume capacity",
        "south minimum utilization",
        "east volume capacity",
        "east minimum utilization",
        "product mix requirement",
    ]
    .iter()
    .enumerate()
    {
        metadata.constraint_labels.insert(i, (*label).into());
    }

    WorldDescriptor {
        id: "fixture-warehouse-milp".into(),
        formulation: FormulationIR {
            variables,
            constraints,
            objective,
            category: Category::Milp,
            pump: None,
        },
        solution: assignment(&[
            ("open_north", 1.0),
            ("open_south", 1.0),
            ("open_east", 1.0),
            ("widget_a_north", 0.0),
            ("widget_a_south", 0.0),
            ("widget_a_east", 0.0),
            ("gadget_b_north", 1.0),
            ("gadget_b_south", 0.0),
            ("gadget_b_east", 1.0),
            ("gizmo_c_north", 61.0),
            ("gizmo_c_south", 50.0),
            ("gizmo_c_east", 36.0),
        ]),
        objective_value: WAREHOUSE_OBJECTIVE,
        metadata,
        difficulty: Difficulty::Easy,
    }
}

/// The six-type pump network instance: total flow 407, pressure rise 640,
/// speed cap 3294 RPM, at most two pumps in series and two parallel lines.
pub fn pump_reference_instance() -> PumpInstance {
    let rows: [[f64; 9]; 6] = [
        [
            165.0, 8200.0, 1950.0, 21.5, 0.17, 0.00058, 0.72, 345.0, 0.0125,
        ],
        [
            185.0, 9800.0, 1850.0, 28.0, 0.24, 0.00065, 0.88, 410.0, 0.0190,
        ],
        [
            210.0, 11500.0, 1750.0, 36.5, 0.31, 0.00082, 1.05, 465.0, 0.0260,
        ],
        [
            155.0, 7800.0, 2050.0, 19.8, 0.15, 0.00049, 0.68, 325.0, 0.0110,
        ],
        [
            230.0, 13000.0, 1650.0, 42.0, 0.36, 0.00095, 1.15, 520.0, 0.0320,
        ],
        [
            175.0, 9100.0, 1900.0, 24.5, 0.21, 0.00062, 0.82, 375.0, 0.0175,
        ],
    ];
    PumpInstance {
        v_total: 407.0,
        dp_total: 640.0,
        omega_max: 3294.0,
        series_max: 2,
        parallel_max: 2,
        types: rows
            .iter()
            .map(|r| PumpTypeParams {
                p_max: r[0],
                fixed_cost: r[1],
                power_cost: r[2],
                m1: r[3],
                m2: r[4],
                m3: r[5],
                m4: r[6],
                m5: r[7],
                m6: r[8],
            })
            .collect(),
    }
}

/// World descriptor for the pump instance. Ground truth is the enumeration
/// solver's global optimum, computed once and cached.
pub fn pump_reference() -> WorldDescriptor {
    static CACHE: OnceLock<WorldDescriptor> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let inst = pump_reference_instance();
            let (config, cost) = crate::solver::solve_pump(&inst).expect("fixture solves");
            let formulation = pump_formulation(inst.clone());
            let mut metadata = Metadata {
                scenario: "centrifugal pump network".into(),
                ..Metadata::default()
            };
            for i in 0..inst.types.len() {
                metadata
                    .roles
                    .insert(crate::pump::var_name("z", i), "binary on/off switch".into());
                metadata
                    .roles
                    .insert(crate::pump::var_name("x", i), "flow fraction".into());
            }
            WorldDescriptor {
                id: "fixture-pump-network".into(),
                solution: config.to_assignment(),
                objective_value: cost,
                formulation,
                metadata,
                difficulty: Difficulty::Hard,
            }
        })
        .clone()
}

/// Wrap a pump instance in a category-tagged formulation with the derived
/// flattened variable list.
pub fn pump_formulation(inst: PumpInstance) -> FormulationIR {
    FormulationIR {
        variables: inst.derive_variables(),
        constraints: Vec::new(),
        objective: Objective {
            sense: Sense::Min,
            coeffs: BTreeMap::new(),
            offset: 0.0,
        },
        category: Category::Pump,
        pump: Some(inst),
    }
}

/// All three fixtures.
pub fn all() -> Vec<WorldDescriptor> {
    vec![farming_lp(), warehouse_milp(), pump_reference()]
}
