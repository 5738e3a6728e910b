use std::process::{Command, Output};

fn discrim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discrim"))
        .args(args)
        .env_remove("DISCRIM_MAX_DIM")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--output", "json"]);
    let o = discrim(&all);
    serde_json::from_str(&stdout(&o)).expect("valid JSON")
}

#[test]
fn kernel_reports() {
    let o = discrim(&["kernel", "--m", "1,1", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("kernel=1 cokernel=2"), "{s}");
    assert!(s.contains("predicted-match=true"));

    let v = json(&["kernel", "--m", "1,1,1", "--k", "2"]);
    assert_eq!(
        (v["ker_computed"].as_u64(), v["coker_computed"].as_u64()),
        (Some(0), Some(3))
    );

    let v = json(&["kernel", "--m", "0", "--k", "1"]);
    assert_eq!(
        (v["ker_computed"].as_u64(), v["coker_computed"].as_u64()),
        (Some(1), Some(1))
    );
}

#[test]
fn multiplicities() {
    let v = json(&["w", "--m", "1,1,1"]);
    assert_eq!(v["w_tensor"], serde_json::json!({"0": 1, "1": 2}));
    assert_eq!(v["agree"], true);
    let v = json(&["w", "--m", "2,1,1", "--j", "2"]);
    assert_eq!(v["w_recursion"]["2"], 1);
    let v = json(&["w", "--m", "5"]);
    assert_eq!(v["w_tensor"], serde_json::json!({"0": 1}));
}

#[test]
fn aomoto_reports() {
    let o = discrim(&["aomoto", "--m", "1,1", "--k", "2", "--skew", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify: pass"));

    let v = json(&["aomoto", "--m", "3,3", "--k", "2"]);
    assert_eq!(v["full"], serde_json::json!([0, 0, 2]));
    let v = json(&["aomoto", "--m", "1,1,1", "--k", "1"]);
    assert_eq!(v["full"], serde_json::json!([0, 2]));

    let v = json(&[
        "aomoto", "--m", "1,1", "--k", "2", "--z", "-1/2,3", "--skew", "--full", "--verify",
    ]);
    assert_eq!(v["skew"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["z"], serde_json::json!(["-1/2", "3"]));
    assert_eq!(v["verify"]["pass"], true);
}

#[test]
fn dense_reports() {
    let v = json(&["dense", "--m", "3,3", "--k", "3"]);
    assert_eq!(v["a"], serde_json::json!([0, 0]));
    assert_eq!(v["nonres"], true);

    let v = json(&["dense", "--m", "1,1", "--k", "2", "--bruteforce"]);
    assert_eq!(v["bruteforce"]["weights_match"], true);
    assert_eq!(v["bruteforce"]["edges_match"], true);

    let v = json(&["dense", "--m", "1,4", "--k", "2"]);
    assert_eq!(v["a"], serde_json::json!([-1, 0]));
    assert_eq!(v["nonres"], true);
    let first = &v["edges"][0];
    for key in ["kind", "codim", "hyperplanes", "weight", "dense"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    assert!(first["weight"]["q0"].is_string());

    let v = json(&["dense", "--m", "1,1", "--k", "2", "--a", "0,0"]);
    assert_eq!(v["shift_source"], "given");
}

#[test]
fn euler_reports() {
    let v = json(&["euler", "--k", "2", "--n", "3", "--compute"]);
    assert_eq!(v["euler_characteristic"], "6");
    assert_eq!(v["poincare"], serde_json::json!(["1", "7", "12"]));
    assert_eq!(v["computed"], serde_json::json!([1, 7, 12]));
    assert_eq!(v["pass"], true);
}

#[test]
fn dump_matrix() {
    let o = discrim(&["dump-matrix", "--m", "2,0", "--k", "1", "--kind", "e"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v,
        serde_json::json!({"rows": 2, "cols": 1, "entries": [[0, 0, "1"], [1, 0, "1"]]})
    );
    let o = discrim(&["dump-matrix", "--m", "1,1", "--k", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entries"], serde_json::json!([[0, 0, "1"], [0, 1, "1"]]));
}

#[test]
fn exit_codes() {
    assert_eq!(
        discrim(&["kernel", "--m", "a", "--k", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(discrim(&["kernel", "--m", "1"]).status.code(), Some(2));
    assert_eq!(
        discrim(&["dense", "--m", "1,1", "--k", "2", "--a", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        discrim(&["euler", "--k", "0", "--n", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(discrim(&["--help"]).status.code(), Some(0));

    let o = Command::new(env!("CARGO_BIN_EXE_discrim"))
        .args(["aomoto", "--m", "1,1,1", "--k", "3"])
        .env("DISCRIM_MAX_DIM", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(
        discrim(&["aomoto", "--m", "1,1,1", "--k", "3", "--max-dim", "10"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn json_is_deterministic() {
    for args in [
        vec![
            "aomoto", "--m", "2,1", "--k", "2", "--skew", "--verify", "--output", "json",
        ],
        vec![
            "dense",
            "--m",
            "2,2,1",
            "--k",
            "3",
            "--bruteforce",
            "--output",
            "json",
        ],
        vec![
            "sweep", "--n-max", "2", "--m-max", "2", "--k-max", "3", "--output", "json",
        ],
    ] {
        assert_eq!(discrim(&args).stdout, discrim(&args).stdout);
    }
}

#[test]
fn sweeps() {
    let o = discrim(&["sweep", "--n-max", "4", "--m-max", "4", "--k-max", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(
        s.lines().next().unwrap(),
        "n,k,m,|m|,regime,ker_computed,ker_predicted,coker_computed,coker_predicted,w_tensor,w_recursion,pass"
    );
    assert_eq!(s.lines().count(), 3901);
    assert!(s.lines().skip(1).all(|l| l.ends_with(",true")));

    let serial = discrim(&[
        "sweep", "--aomoto", "--k-max", "3", "--n-max", "3", "--m-max", "3",
    ]);
    let parallel = discrim(&[
        "sweep",
        "--aomoto",
        "--k-max",
        "3",
        "--n-max",
        "3",
        "--m-max",
        "3",
        "--parallelism",
        "4",
    ]);
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(serial.stdout, parallel.stdout);
    let mut reader = csv::Reader::from_reader(serial.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[12], "skew_dims");
    let mut checked = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        assert_eq!(&rec[11], "true");
        assert_eq!(&rec[13], "true", "{rec:?}");
        checked += 1;
    }
    assert!(checked > 0);

    let empty = discrim(&["sweep", "--n-max", "0", "--m-max", "3", "--k-max", "3"]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(stdout(&empty).lines().count(), 1);
}
