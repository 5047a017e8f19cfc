use blockade_core::{HilbertConfig, SystemParams};
use blockade_lab::config::parse_config;
use blockade_lab::csv_io::{read_sweep, sweep_to_string};
use blockade_lab::sweep::{run_sweep, Axis, Column, PointStatus, SweepParam, SweepResult};
use proptest::prelude::*;

fn value() -> impl Strategy<Value = f64> {
    prop_oneof![
        8 => proptest::num::f64::ANY,
        1 => Just(f64::NAN),
        1 => Just(f64::NEG_INFINITY),
        1 => Just(-0.0),
        1 => Just(5e-324),
    ]
}

fn status() -> impl Strategy<Value = PointStatus> {
    prop_oneof![
        3 => Just(PointStatus::default()),
        1 => Just(PointStatus { flags: vec!["g2_numeric:vacuum_state".into()] }),
        1 => Just(PointStatus {
            flags: vec!["params:invalid_parameter".into(), "coh_numeric:singular_system".into()],
        }),
    ]
}

fn axis(param: SweepParam) -> impl Strategy<Value = Axis> {
    (-1e3..1e3f64, 1e-6..1e3f64, 2usize..7)
        .prop_map(move |(min, span, n)| Axis::new(param, min, min + span, n).unwrap())
}

fn result() -> impl Strategy<Value = SweepResult> {
    let axes = prop_oneof![
        axis(SweepParam::Delta).prop_map(|a| vec![a]),
        (axis(SweepParam::Kappa), axis(SweepParam::Delta)).prop_map(|(a, b)| vec![a, b]),
    ];
    (axes, 1usize..4).prop_flat_map(|(axes, ncols)| {
        let rows: usize = axes.iter().map(|a| a.count).product();
        let names = ["g2_analytic", "coh_numeric", "mean_photon"];
        (
            proptest::collection::vec(proptest::collection::vec(value(), rows), ncols),
            proptest::collection::vec(status(), rows),
        )
            .prop_map(move |(cols, status)| SweepResult {
                axes: axes.clone(),
                columns: cols
                    .into_iter()
                    .zip(names)
                    .map(|(values, name)| Column {
                        name: name.into(),
                        values,
                    })
                    .collect(),
                status,
            })
    })
}

proptest! {
    #[test]
    fn csv_round_trip_is_exact(r in result()) {
        let text = sweep_to_string(&r).unwrap();
        let back = read_sweep(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(sweep_to_string(&back).unwrap(), text);
    }
}

#[test]
fn identical_specs_give_identical_bytes() {
    let spec = parse_config(
        "g = 1\nkappa = 0.2\ngamma = 0.1\neta = 0.01\n\
         axis1 = gamma 0.05 0.2 3\naxis2 = Delta -1.5 1.5 7\nnmax = 3\n",
    )
    .unwrap();
    let a = sweep_to_string(&run_sweep(&spec).unwrap()).unwrap();
    let b = sweep_to_string(&run_sweep(&spec).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with(
        "gamma,Delta,g2_analytic,g2_numeric,coh_analytic,coh_numeric,mean_photon,\
         log10_g2_analytic,log10_g2_numeric,status\n"
    ));
    assert_eq!(a.lines().count(), 1 + 21);
}

#[test]
fn converged_rows_have_no_nan() {
    let spec =
        parse_config("g = 1\nkappa = 0.05\ngamma = 0.05\neta = 0.01\naxis1 = Delta -2 2 41\n")
            .unwrap();
    let r = run_sweep(&spec).unwrap();
    assert_eq!(r.rows(), 41);
    for (i, s) in r.status.iter().enumerate() {
        assert!(s.is_ok());
        assert!(r.columns.iter().all(|c| !c.values[i].is_nan()));
    }
}

#[test]
fn coherent_limit_sweep() {
    // two points over the drive with the atom decoupled
    let spec = blockade_lab::sweep::SweepSpec {
        base: SystemParams::resonant(0.0, 1.0, 0.5, 0.01, 0.3).unwrap(),
        axis1: Axis::new(SweepParam::Eta, 0.005, 0.01, 2).unwrap(),
        axis2: None,
        hilbert: HilbertConfig::default(),
        outputs: Default::default(),
    };
    let spec = blockade_lab::sweep::SweepSpec {
        outputs: blockade_lab::sweep::OutputSet {
            g2_analytic: true,
            g2_numeric: true,
            ..Default::default()
        },
        ..spec
    };
    let r = run_sweep(&spec).unwrap();
    for col in ["g2_analytic", "g2_numeric"] {
        for v in r.column(col).unwrap() {
            assert!((v - 1.0).abs() <= 1e-6, "{col}: {v}");
        }
    }
}
