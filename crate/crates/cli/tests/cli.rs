use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

const SL2_Q2: &str = r#"{"family":"SL","rank":2,"field":{"kind":"mixed","p":2},
    "target":{"kind":"equal","p":2},"eisenstein":["2","2"]}"#;

struct Run {
    dir: TempDir,
}

impl Run {
    fn new(config: &str) -> Self {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("run.json"), config).unwrap();
        Run { dir }
    }

    fn out(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn hecke(&self, cmd: &str, out: &str, extra: &[&str]) -> (i32, String) {
        let o = Command::new(env!("CARGO_BIN_EXE_hecke"))
            .arg(cmd)
            .arg("--config")
            .arg(self.dir.path().join("run.json"))
            .arg("--out")
            .arg(self.out(out))
            .args(extra)
            .output()
            .unwrap();
        let text =
            String::from_utf8_lossy(&o.stdout).into_owned() + &String::from_utf8_lossy(&o.stderr);
        (o.status.code().unwrap(), text)
    }
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn outputs_are_deterministic() {
    let r = Run::new(SL2_Q2);
    for out in ["a", "b"] {
        for cmd in ["enumerate", "convolve", "verify"] {
            assert_eq!(r.hecke(cmd, out, &["--threads", "2"]).0, 0);
        }
    }
    for f in [
        "quotient.csv",
        "census.csv",
        "summary.json",
        "structure_constants.csv",
        "verify.json",
    ] {
        assert_eq!(read(&r.out("a").join(f)), read(&r.out("b").join(f)), "{f}");
    }
    assert_eq!(
        std::fs::read(r.out("a").join("quotient.hklq")).unwrap(),
        std::fs::read(r.out("b").join("quotient.hklq")).unwrap()
    );
}

#[test]
fn volumes_match_closed_form() {
    let r = Run::new(SL2_Q2);
    assert_eq!(r.hecke("volume", "o", &[]).0, 0);
    let v = read(&r.out("o").join("volume.csv"));
    assert!(v.contains("\"(0,0)\",1,1,true"), "{v}");
    assert!(v.contains("\"(-1,1)\",4,4,true"), "{v}");

    let res = Run::new(
        r#"{"family":"SL","rank":2,"restriction":true,"window":[[-1,1]],
            "field":{"kind":"mixed","p":2,"eisenstein":["-2","0","1"]}}"#,
    );
    assert_eq!(res.hecke("volume", "o", &[]).0, 0);
    assert!(read(&res.out("o").join("volume.csv")).contains("\"(-1,1)\",16,16,true"));
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("q.hklq");
    let cfg = SL2_Q2.replace(
        "\"eisenstein\"",
        &format!("\"cache\":{:?},\"eisenstein\"", cache.to_str().unwrap()),
    );
    let r = Run::new(&cfg);
    assert_eq!(r.hecke("enumerate", "a", &[]).0, 0);
    assert!(cache.exists());
    assert_eq!(r.hecke("enumerate", "b", &[]).0, 0);
    assert_eq!(
        read(&r.out("a").join("census.csv")),
        read(&r.out("b").join("census.csv"))
    );

    let mut bytes = std::fs::read(&cache).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0xff;
    bytes[0] = b'X';
    std::fs::write(&cache, &bytes).unwrap();
    let (code, err) = r.hecke("enumerate", "c", &[]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("cache"), "{err}");
}

#[test]
fn guards_give_exit_two() {
    let r = Run::new(
        r#"{"family":"SL","rank":2,"field":{"kind":"mixed","p":2},"guards":{"pairs":10}}"#,
    );
    let (code, err) = r.hecke("convolve", "o", &[]);
    assert_eq!(code, 2, "{err}");
    let big = Run::new(r#"{"family":"GL","rank":3,"m":3,"field":{"kind":"equal","p":3}}"#);
    assert_eq!(big.hecke("enumerate", "o", &[]).0, 2);
    let over = Run::new(
        r#"{"family":"SL","rank":2,"field":{"kind":"mixed","p":2},"guards":{"quotient":1000000000000}}"#,
    );
    assert_eq!(over.hecke("enumerate", "o", &[]).0, 1);
}

#[test]
fn identity_transfer_is_clean() {
    let r = Run::new(r#"{"family":"GL","rank":2,"field":{"kind":"equal","p":3},"target":{"kind":"equal","p":3},"window":"box:1:1"}"#
        .replace("\"box:1:1\"", "{\"bound\":1,\"max_spread\":1}").as_str());
    let (code, text) = r.hecke("transfer", "o", &[]);
    assert_eq!(code, 0, "{text}");
    let v: serde_json::Value =
        serde_json::from_str(&read(&r.out("o").join("transfer.json"))).unwrap();
    assert_eq!(v["outcome"], "match");
    assert_eq!(v["mismatches"].as_array().unwrap().len(), 0);
    assert!(v["pairs_checked"].as_u64().unwrap() > 0);
}

#[test]
fn transfer_below_closeness() {
    let cfg = r#"{"family":"SL","rank":2,"m":2,"field":{"kind":"mixed","p":2},"target":{"kind":"equal","p":2}}"#;
    assert_ne!(Run::new(cfg).hecke("transfer", "o", &[]).0, 0);
    let probe = Run::new(&cfg.replace("\"m\":2", "\"m\":2,\"theorem_applicable\":false"));
    let (code, text) = probe.hecke("transfer", "o", &[]);
    assert_eq!(code, 0, "{text}");
    assert!(read(&probe.out("o").join("transfer.json")).contains("not close"));
}

#[test]
fn eisenstein_transfer() {
    let r = Run::new(SL2_Q2);
    let (code, text) = r.hecke("eisenstein", "o", &[]);
    assert_eq!(code, 0, "{text}");
    let v: serde_json::Value =
        serde_json::from_str(&read(&r.out("o").join("eisenstein.json"))).unwrap();
    assert_eq!(v["image"], "x^2 + t·x + t");
    let bad = Run::new(&SL2_Q2.replace("[\"2\",\"2\"]", "[\"4\",\"2\"]"));
    assert_eq!(bad.hecke("eisenstein", "o", &[]).0, 1);
}

#[test]
fn empty_window_is_vacuous() {
    let r = Run::new(SL2_Q2);
    let (code, text) = r.hecke("verify", "o", &["--window", ""]);
    assert_eq!(code, 0, "{text}");
    assert_eq!(r.hecke("convolve", "o", &["--window", ""]).0, 0);
    assert_eq!(
        read(&r.out("o").join("structure_constants.csv")),
        "x,y,z,c\n"
    );
}

#[test]
fn convolve_two_elements() {
    let r = Run::new(SL2_Q2);
    let t = r#"{"level":1,"terms":[{"id":{"lambda":[-1,1],"a":0,"b":0},"coeff":"1/2"}]}"#;
    std::fs::write(r.out("t.json"), t).unwrap();
    let l = r.out("t.json");
    let (code, text) = r.hecke(
        "convolve",
        "o",
        &[
            "--left",
            l.to_str().unwrap(),
            "--right",
            l.to_str().unwrap(),
        ],
    );
    assert_eq!(code, 0, "{text}");
    let half: serde_json::Value =
        serde_json::from_str(&read(&r.out("o").join("product.json"))).unwrap();
    std::fs::write(&l, t.replace("1/2", "1")).unwrap();
    assert_eq!(
        r.hecke(
            "convolve",
            "p",
            &[
                "--left",
                l.to_str().unwrap(),
                "--right",
                l.to_str().unwrap()
            ]
        )
        .0,
        0
    );
    let whole: serde_json::Value =
        serde_json::from_str(&read(&r.out("p").join("product.json"))).unwrap();
    let coeffs = |v: &serde_json::Value| -> Vec<(String, num_rational::Ratio<i64>)> {
        v["terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| {
                (
                    t["id"].to_string(),
                    t["coeff"].as_str().unwrap().parse().unwrap(),
                )
            })
            .collect()
    };
    let quarter = num_rational::Ratio::new(1, 4);
    let scaled: Vec<_> = coeffs(&whole)
        .into_iter()
        .map(|(id, c)| (id, c * quarter))
        .collect();
    assert!(!scaled.is_empty());
    assert_eq!(coeffs(&half), scaled);
}

#[test]
fn bad_config_exits_one() {
    let r = Run::new(r#"{"family":"SL","rank":2,"field":{"kind":"mixed","p":2},"typo":1}"#);
    assert_eq!(r.hecke("enumerate", "o", &[]).0, 1);
}
