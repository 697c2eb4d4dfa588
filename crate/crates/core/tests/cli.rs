use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_infogeom");

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("infogeom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> PathBuf {
    let p = scratch(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn parse(text: &str) -> Self {
        let mut lines = text.lines().filter(|l| !l.starts_with('#'));
        let header = lines.next().unwrap().split(',').map(String::from).collect();
        let rows = lines
            .map(|l| l.split(',').map(String::from).collect())
            .collect();
        Self { header, rows }
    }

    fn column(&self, name: &str) -> Vec<f64> {
        let k = self.header.iter().position(|h| h == name).unwrap();
        self.rows.iter().map(|r| r[k].parse().unwrap()).collect()
    }

    fn lookup(&self, quantity: &str, name: &str) -> f64 {
        let row = self
            .rows
            .iter()
            .find(|r| r[0] == quantity && r[1] == name)
            .unwrap();
        row[2].parse().unwrap()
    }
}

fn matrix(diag: &[f64]) -> String {
    let d = diag.len();
    let rows: Vec<String> = (0..d)
        .map(|i| {
            let r: Vec<String> = (0..d)
                .map(|j| {
                    if i == j {
                        diag[i].to_string()
                    } else {
                        "0".into()
                    }
                })
                .collect();
            format!("[{}]", r.join(","))
        })
        .collect();
    format!(r#"{{"dim": {d}, "re": [{}]}}"#, rows.join(","))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn metric_identical_states_are_at_zero_divergence() {
    let p = write(
        "same.json",
        &format!(r#"{{"rho": {0}, "sigma": {0}}}"#, matrix(&[0.3, 0.7])),
    );
    let o = run(&["metric", path_str(&p)]);
    assert!(o.status.success());
    let t = Table::parse(&stdout(&o));
    for r in &t.rows {
        let v: f64 = r[2].parse().unwrap();
        assert!(v.abs() < 1e-7, "{r:?}");
    }
}

#[test]
fn metric_classical_values() {
    let p = write(
        "pair.json",
        &format!(
            r#"{{"rho": {}, "sigma": {}}}"#,
            matrix(&[0.5, 0.5]),
            matrix(&[0.75, 0.25])
        ),
    );
    let t = Table::parse(&stdout(&run(&["metric", path_str(&p)])));
    let want = 0.5 * (0.5f64 / 0.75).ln() + 0.5 * (0.5f64 / 0.25).ln();
    assert!((t.lookup("divergence", "relative-entropy") - want).abs() < 1e-6);
    assert!((want - 0.1438).abs() < 1e-4);

    // commuting perturbation: every monotone reduces to Σ δ_i² / p_i
    let q = write(
        "commuting.json",
        &format!(
            r#"{{"rho": {}, "delta": {}}}"#,
            matrix(&[0.5, 0.5]),
            matrix(&[0.1, -0.1])
        ),
    );
    let o = run(&[
        "metric",
        path_str(&q),
        "--f",
        "bures,harmonic,sqrt,kmb,wy,alpha:0.3,heinz-lt:0.2",
        "--assert",
    ]);
    assert!(o.status.success());
    let t = Table::parse(&stdout(&o));
    let oracle = 0.1f64.powi(2) / 0.5 * 2.0;
    for r in t.rows.iter().filter(|r| r[0] == "fisher") {
        assert!(
            (r[2].parse::<f64>().unwrap() - oracle).abs() < 1e-12,
            "{r:?}"
        );
    }
    assert!((oracle - 0.04).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    let rank = write(
        "rank.json",
        &format!(
            r#"{{"rho": {}, "sigma": {}}}"#,
            matrix(&[1.0, 0.0]),
            matrix(&[0.5, 0.5])
        ),
    );
    assert_eq!(run(&["metric", path_str(&rank)]).status.code(), Some(3));
    let schema = write("schema.json", r#"{"rho": {"dim": 2, "re": [[1.0]]}}"#);
    let o = run(&["metric", path_str(&schema)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema"));
    assert_eq!(
        run(&["metric", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["garden", "--tolerance", "-1"]).status.code(), Some(2));
    assert_eq!(
        run(&["evolve", "--preset", "depolarizing:markov", "--dt", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    let o = run(&[
        "evolve",
        "--preset",
        "depolarizing:markov",
        "--f",
        "variance",
        "--T",
        "0.1",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--fd-only"));
    let o = run(&[
        "evolve",
        "--preset",
        "depolarizing:markov",
        "--f",
        "variance",
        "--T",
        "0.1",
        "--fd-only",
    ]);
    assert!(o.status.success());
    let o = run(&[
        "markov",
        "--preset",
        "depolarizing:nonmarkov",
        "--T",
        "4",
        "--samples",
        "0",
        "--assert",
    ]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("NON-MARKOVIAN"));
}

#[test]
fn evolve_presets() {
    let t = Table::parse(&stdout(&run(&[
        "evolve",
        "--preset",
        "depolarizing:markov",
        "--T",
        "5",
        "--dt",
        "0.01",
    ])));
    let f = t.column("fisher");
    assert_eq!(f.len(), 501);
    assert!(f.windows(2).all(|w| w[1] < w[0]));

    let t = Table::parse(&stdout(&run(&[
        "evolve",
        "--preset",
        "depolarizing:markov",
        "--T",
        "0",
    ])));
    assert_eq!(t.rows.len(), 1);

    let o = run(&[
        "evolve",
        "--preset",
        "depolarizing:nonmarkov",
        "--T",
        "4",
        "--dt",
        "0.001",
        "--assert",
    ]);
    assert!(o.status.success());
    let t = Table::parse(&stdout(&o));
    let d = t.column("fisher_dot_analytic");
    let flips = d.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    // F ∝ η² at the maximally mixed state, so F′ ∝ η η̇: count roots of both
    let eta = |t: f64| (-t).exp() * (2.0 * t).cos();
    let eta_dot = |t: f64| -(-t).exp() * ((2.0 * t).cos() + 2.0 * (2.0 * t).sin());
    let roots = |g: &dyn Fn(f64) -> f64| {
        (0..4000)
            .filter(|&k| g(k as f64 * 1e-3) * g((k + 1) as f64 * 1e-3) < 0.0)
            .count()
    };
    assert_eq!(flips, roots(&eta) + roots(&eta_dot));
    assert_eq!(flips, 5);
}

#[test]
fn evolve_from_generator_file() {
    let g = write(
        "damping.json",
        r#"{"H": {"dim": 2, "re": [[0.5,0],[0,-0.5]]},
            "jumps": [{"dim": 2, "re": [[0,1],[0,0]]}],
            "rates": [1.0],
            "schedule": [[0.0, [1.0]], [1.0, [0.5]]]}"#,
    );
    let s = write(
        "point.json",
        &format!(
            r#"{{"pi": {}, "delta": {}}}"#,
            matrix(&[0.6, 0.4]),
            matrix(&[0.05, -0.05])
        ),
    );
    let o = run(&[
        "evolve",
        "--generator",
        path_str(&g),
        "--state",
        path_str(&s),
        "--f",
        "kmb",
        "--T",
        "1",
        "--dt",
        "0.01",
        "--assert",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let t = Table::parse(&stdout(&o));
    assert!(t.column("current_0").iter().all(|&i| i <= 1e-12));
    let rate = t.column("rate_0");
    assert!((rate[rate.len() - 1] - 0.5).abs() < 1e-12);
}

#[test]
fn golden_stability_and_threads() {
    let args = [
        "markov",
        "--preset",
        "amplitude-damping:0.5",
        "--T",
        "1",
        "--dt",
        "0.1",
        "--samples",
        "4",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = Command::new(BIN)
        .args(args)
        .env("INFOGEOM_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[
        "markov",
        "--preset",
        "amplitude-damping:0.5",
        "--T",
        "1",
        "--dt",
        "0.1",
        "--samples",
        "4",
        "--seed",
        "8",
    ]);
    assert_ne!(a.stdout, c.stdout, "the seed enters the config hash");

    let out = scratch("garden.csv");
    let o = run(&["garden", "--out", path_str(&out)]);
    assert!(o.status.success());
    let first = std::fs::read(&out).unwrap();
    run(&["garden", "--out", path_str(&out)]);
    assert_eq!(first, std::fs::read(&out).unwrap());
}

#[test]
fn tolerance_is_recorded() {
    let text = stdout(&run(&["garden", "--tolerance", "1e-6"]));
    assert!(text
        .lines()
        .any(|l| l == "# tolerance 9.9999999999999995e-7"));
    assert!(text.starts_with("# config-hash "));
    let text = stdout(&run(&["garden", "--format", "json", "--tolerance", "1e-6"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["tolerance"], 1e-6);
    assert_eq!(v["config"]["tolerance"], 1e-6);
}

#[test]
fn garden_normalization() {
    let o = run(&["garden", "--assert"]);
    assert!(o.status.success());
    let t = Table::parse(&stdout(&o));
    assert_eq!(t.column("f_at_one"), vec![1.0; t.rows.len()]);
    let norms: Vec<f64> = t
        .column("normalization")
        .into_iter()
        .filter(|v| v.is_finite())
        .collect();
    assert!(norms.len() >= 7);
    assert!(norms.iter().all(|v| (v - 1.0).abs() < 1e-9));
    assert!(t.rows.iter().all(|r| r[1] == "PASS"));
}

#[test]
fn dbalance_counterexample_preset() {
    let o = run(&["dbalance", "--preset", "fisher-not-alicki", "--assert"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("fisher: PASS, alicki: FAIL"));
    let out = scratch("db.json");
    let o = run(&[
        "dbalance",
        "--preset",
        "fisher-not-alicki:0.5",
        "--format",
        "json",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(stdout(&o).trim(), "fisher: PASS, alicki: FAIL");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["fisher_holds"], true);
    assert_eq!(v["result"]["alicki_holds"], false);
    assert!(
        v["result"]["report"]["alicki"]["self_adjoint"]
            .as_f64()
            .unwrap()
            > 1e-6
    );
    assert_eq!(
        v["result"]["report"]["structural"]["transpose_terms"]
            .as_array()
            .unwrap()
            .len(),
        2
    );
}

#[test]
fn dbalance_generator_file() {
    // thermal qubit: decay at rate 1, excitation at e^{-1}
    let e = (-1.0f64).exp();
    let g = write(
        "thermal.json",
        &format!(
            r#"{{"H": {{"dim": 2, "re": [[0,0],[0,1]]}},
                "jumps": [{{"dim": 2, "re": [[0,1],[0,0]]}}, {{"dim": 2, "re": [[0,0],[1,0]]}}],
                "rates": [1.0, {e}]}}"#
        ),
    );
    let pi = write(
        "thermal_pi.json",
        &matrix(&[1.0 / (1.0 + e), e / (1.0 + e)]),
    );
    let o = run(&[
        "dbalance",
        "--generator",
        path_str(&g),
        "--state",
        path_str(&pi),
        "--assert",
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("fisher: PASS, alicki: PASS"));
    let other = write("other_pi.json", &matrix(&[0.5, 0.5]));
    let o = run(&[
        "dbalance",
        "--generator",
        path_str(&g),
        "--state",
        path_str(&other),
        "--assert",
    ]);
    assert_eq!(o.status.code(), Some(5));
    assert_eq!(
        run(&["dbalance", "--generator", path_str(&g)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn geodesic_and_estimate() {
    let p = write(
        "geo_same.json",
        &format!(r#"{{"rho": {0}, "sigma": {0}}}"#, matrix(&[0.2, 0.3, 0.5])),
    );
    let o = run(&["geodesic", path_str(&p), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["result"]["bures_distance"].as_f64().unwrap().abs() < 1e-7);
    assert!(v["result"]["wy_distance"].as_f64().unwrap().abs() < 1e-7);

    let q = write(
        "geo.json",
        &format!(
            r#"{{"rho": {}, "sigma": {}}}"#,
            matrix(&[0.2, 0.3, 0.5]),
            matrix(&[0.6, 0.3, 0.1])
        ),
    );
    let o = run(&["geodesic", path_str(&q), "--assert"]);
    assert!(o.status.success());
    let t = Table::parse(&stdout(&o));
    let wy = t.column("wy_from_rho");
    assert!(wy.windows(2).all(|w| w[1] >= w[0]));
    let b = t.column("bures_from_rho");
    assert!(b.iter().zip(&wy).all(|(b, w)| *b <= w + 1e-7));

    let s = write(
        "est.json",
        &format!(
            r#"{{"rho": {}, "delta": {}}}"#,
            matrix(&[0.4, 0.6]),
            matrix(&[0.5, -0.5])
        ),
    );
    let o = run(&["estimate", path_str(&s), "--assert"]);
    assert!(o.status.success());
    let t = Table::parse(&stdout(&o));
    // classical Fisher information Σ δ²/p
    let info = 0.25 / 0.4 + 0.25 / 0.6;
    assert!((t.lookup("fisher", "kmb") - info).abs() < 1e-12);
    assert!((t.lookup("cramer_rao", "bures") - 1.0 / info).abs() < 1e-12);
    assert!((t.lookup("chernoff", "s_opt") - 0.5).abs() < 1e-2);
}

#[test]
fn recover_presets_and_files() {
    let o = run(&[
        "recover",
        "--preset",
        "depolarizing:0.4",
        "--assert",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["result"]["spectrum"]["contains_one"].as_bool().unwrap());

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let k = write(
        "kraus.json",
        &format!(
            r#"{{"kraus": [{{"dim": 2, "re": [[{h},0],[0,{h}]]}}, {{"dim": 2, "re": [[0,{h}],[{h},0]]}}]}}"#
        ),
    );
    let prior = write("prior.json", &matrix(&[0.7, 0.3]));
    let sigma = write("sigma.json", &matrix(&[0.4, 0.6]));
    let o = run(&[
        "recover",
        "--channel",
        path_str(&k),
        "--prior",
        path_str(&prior),
        "--sigma",
        path_str(&sigma),
        "--f",
        "bures",
        "--fprime",
        "harmonic",
        "--assert",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("# chi2 chain"));
    // f′ must not exceed f
    let o = run(&[
        "recover",
        "--preset",
        "depolarizing:0.4",
        "--f",
        "harmonic",
        "--fprime",
        "bures",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        run(&["recover", "--preset", "nope:1"]).status.code(),
        Some(2)
    );
}
