use qbounds_core::detector::Param;
use qbounds_core::sweep::{
    detect_crossover, format_value, parse_csv, render_svg_to, run_sweep, to_csv_string, write_csv,
    SvgStyle, SweepConfig, SweepResult, SweepRow, SweepVariable,
};
use qbounds_core::variational::detector_report;
use qbounds_core::{DetectorParams, Error};

const FIG_1A: &str = r#"{
    "scenario": "unbounded",
    "params_to_estimate": ["theta", "phi"],
    "fixed": {"theta": 1.5708, "tau": 0.4},
    "sweep": {"variable": "a_inv", "from": 0.05, "to": 1.0, "points": 60},
    "bounds": ["sld", "rld", "hcrb", "nagaoka"],
    "output": {"csv_path": "fig1a.csv", "svg_path": "fig1a.svg"}
}"#;

fn small_config(points: usize) -> SweepConfig {
    SweepConfig::parse(&format!(
        r#"{{
            "scenario": "unbounded",
            "params_to_estimate": ["theta", "phi"],
            "fixed": {{"theta": 1.2, "phi": 0.1, "a_inv": 0.4}},
            "sweep": {{"variable": "tau", "from": 0.2, "to": 1.0, "points": {points}}},
            "bounds": ["sld", "hcrb"]
        }}"#
    ))
    .unwrap()
}

fn synthetic(columns: &[&str], rows: &[(f64, Vec<Option<f64>>)]) -> SweepResult {
    SweepResult {
        variable: SweepVariable::Theta,
        columns: columns.iter().map(|s| s.to_string()).collect(),
        rows: rows
            .iter()
            .map(|(x, v)| SweepRow {
                sweep_value: *x,
                values: v.clone(),
                hierarchy_ok: true,
                solver_failure: false,
                notes: vec![],
            })
            .collect(),
    }
}

#[test]
fn example_config_is_valid() {
    let cfg = SweepConfig::parse(FIG_1A).unwrap();
    assert_eq!(cfg.params, [Param::Theta, Param::Phi]);
    assert_eq!(cfg.columns(), ["sld", "rld", "hcrb", "nagaoka"]);
    assert_eq!(cfg.sweep.grid().len(), 60);
}

#[test]
fn schema_errors_carry_a_pointer() {
    let cases = [
        (
            FIG_1A.replace("\"a_inv\", \"from\"", "\"omega\", \"from\""),
            "/sweep/variable",
        ),
        (
            FIG_1A.replace("\"points\": 60", "\"points\": \"many\""),
            "/sweep/points",
        ),
        (
            FIG_1A.replace("\"tau\": 0.4", "\"tau\": 0.4, \"psi\": 1.0"),
            "/fixed",
        ),
        (FIG_1A.replace("\"hcrb\"", "\"fisher\""), "/bounds/2"),
        (
            FIG_1A.replace("\"params_to_estimate\": [\"theta\", \"phi\"],", ""),
            "",
        ),
    ];
    for (text, want) in cases {
        match SweepConfig::parse(&text) {
            Err(Error::Schema { pointer, .. }) => {
                assert!(pointer.starts_with(want), "{pointer} vs {want}")
            }
            other => panic!("expected a schema error at {want}, got {other:?}"),
        }
    }
}

#[test]
fn range_errors() {
    let cases = [
        FIG_1A.replace("\"tau\": 0.4", "\"tau\": 0.4, \"a_inv\": 0.2"),
        FIG_1A.replace("\"unbounded\"", "\"bounded\""),
        FIG_1A.replace("\"from\": 0.05", "\"from\": 1.5"),
        FIG_1A.replace("\"points\": 60", "\"points\": 1"),
        FIG_1A.replace("\"from\": 0.05", "\"from\": -0.5"),
        FIG_1A.replace("[\"theta\", \"phi\"]", "[\"theta\", \"theta\"]"),
        FIG_1A
            .replace("\"hcrb\"", "\"analytic\"")
            .replace("[\"theta\", \"phi\"]", "[\"theta\"]"),
    ];
    for text in cases {
        assert!(
            matches!(SweepConfig::parse(&text), Err(Error::Range(_))),
            "{text}"
        );
    }
}

#[test]
fn csv_has_header_and_one_line_per_point() {
    let result = run_sweep(&small_config(3)).unwrap();
    let csv = to_csv_string(&result);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "sweep_var,sld,hcrb,hierarchy_ok");
    assert!(!csv.contains('\r'));
    assert!(csv.ends_with('\n'));
    for line in &lines[1..] {
        assert_eq!(line.split(',').count(), 4);
        assert!(line.ends_with(",true"));
    }
}

#[test]
fn csv_round_trips_to_twelve_digits() {
    let result = run_sweep(&small_config(5)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    write_csv(&result, &path).unwrap();
    let (columns, rows) = parse_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(columns, ["sweep_var", "sld", "hcrb", "hierarchy_ok"]);
    assert_eq!(rows.len(), result.rows.len());
    for ((values, ok), row) in rows.iter().zip(&result.rows) {
        assert_eq!(*ok, row.hierarchy_ok);
        let x = values[0].unwrap();
        assert!((x - row.sweep_value).abs() <= 5e-12 * row.sweep_value.abs());
        for (got, want) in values[1..].iter().zip(&row.values) {
            let (got, want) = (got.unwrap(), want.unwrap());
            assert!((got - want).abs() <= 5e-12 * want.abs(), "{got} vs {want}");
        }
    }
}

#[test]
fn absent_values_are_empty_fields() {
    let r = synthetic(
        &["a", "b"],
        &[(0.0, vec![Some(1.0), None]), (1.0, vec![None, Some(1e-7)])],
    );
    let csv = to_csv_string(&r);
    assert_eq!(csv, "sweep_var,a,b,hierarchy_ok\n0,1,,true\n1,,1e-7,true\n");
    let (_, rows) = parse_csv(&csv).unwrap();
    assert_eq!(rows[0].0, [Some(0.0), Some(1.0), None]);
    assert_eq!(format_value(1e-7), "1e-7");
}

#[test]
fn svg_is_well_formed_with_one_polyline_per_column() {
    let result = run_sweep(&small_config(4)).unwrap();
    let style = SvgStyle {
        title: "tau <sweep> & bounds".into(),
        ..SvgStyle::default()
    };
    let svg = render_svg_to(&result, &style).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let lines: Vec<_> = doc
        .descendants()
        .filter(|n| n.has_tag_name("polyline"))
        .collect();
    assert_eq!(lines.len(), 2);
    for (node, col) in lines.iter().zip(["sld", "hcrb"]) {
        assert_eq!(node.attribute("data-column"), Some(col));
        assert_eq!(node.attribute("points").unwrap().split(' ').count(), 4);
    }
    let texts: Vec<&str> = doc.descendants().filter_map(|n| n.text()).collect();
    assert!(
        texts.contains(&"sld")
            && texts.contains(&"hcrb")
            && texts.contains(&"tau <sweep> & bounds")
    );
    assert!(!svg.contains("href"));
}

#[test]
fn crossover_is_interpolated() {
    let r = synthetic(
        &["a", "b"],
        &[
            (0.0, vec![Some(1.0), Some(2.0)]),
            (1.0, vec![Some(3.0), Some(2.0)]),
            (2.0, vec![Some(3.0), Some(2.0)]),
            (3.0, vec![Some(1.0), Some(3.0)]),
        ],
    );
    let xs = detect_crossover(&r, "a", "b").unwrap();
    assert_eq!(xs.len(), 2);
    assert!((xs[0] - 0.5).abs() < 1e-15);
    assert!((xs[1] - (2.0 + 1.0 / 3.0)).abs() < 1e-15);
}

#[test]
fn separated_columns_have_no_crossover() {
    let r = synthetic(
        &["a", "b"],
        &(0..10)
            .map(|i| (i as f64, vec![Some(i as f64), Some(i as f64 + 1.0)]))
            .collect::<Vec<_>>(),
    );
    assert!(detect_crossover(&r, "a", "b").unwrap().is_empty());
}

#[test]
fn crossover_on_missing_columns_is_an_error() {
    let r = synthetic(
        &["a", "b"],
        &[
            (0.0, vec![Some(1.0), None]),
            (1.0, vec![Some(2.0), Some(1.0)]),
            (2.0, vec![Some(0.0), None]),
        ],
    );
    assert!(matches!(detect_crossover(&r, "a", "b"), Err(Error::ColumnAbsent(c)) if c == "b"));
    assert!(matches!(detect_crossover(&r, "a", "zzz"), Err(Error::ColumnAbsent(c)) if c == "zzz"));
}

#[test]
fn sweep_rows_equal_point_reports() {
    let cfg = small_config(2);
    let result = run_sweep(&cfg).unwrap();
    for (row, tau) in result.rows.iter().zip([0.2, 1.0]) {
        assert_eq!(row.sweep_value, tau);
        let r = detector_report(
            &DetectorParams::unbounded(1.2, 0.1, 0.4, tau).unwrap(),
            &cfg.params,
        )
        .unwrap();
        assert_eq!(row.values, [r.c_sld, r.c_hcrb]);
    }
}

#[test]
fn sweeps_are_deterministic() {
    let cfg = small_config(6);
    let a = to_csv_string(&run_sweep(&cfg).unwrap());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    let b = pool.install(|| to_csv_string(&run_sweep(&cfg).unwrap()));
    assert_eq!(a, b);
}
