//! End-to-end tests against the built binary.

use std::process::{Command, Output};

fn spectral(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectral"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn curve_latex_g6() {
    let out = spectral(&["curve", "halphen", "--g", "6", "--format", "latex"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "w^3 = z^7 - 2992 g_3 z^5 + 2972416 g_3^2 z^3 - 1003622400 g_3^3 z\n"
    );
}

#[test]
fn curve_invalid_genus_exits_2() {
    let out = spectral(&["curve", "halphen", "--g", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("g != 2 (mod 3)"), "stderr: {}", err);
}

#[test]
fn curve_lame_text_g1() {
    let out = spectral(&["curve", "lame", "--g", "1", "--format", "text"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "w^2 = (4*z^3 - g2*z + g3)/4\n");
}

#[test]
fn curve_json_parses_back() {
    let out = spectral(&["curve", "halphen", "--g", "6", "--format", "json"]);
    assert!(out.status.success());
    let parsed = spectral::emit::halphen_curve_from_json(stdout(&out).trim()).unwrap();
    assert_eq!(parsed, spectral::halphen::spectral_curve(6).unwrap());
}

#[test]
fn verify_halphen_g18() {
    let out = spectral(&["verify", "--operator", "halphen", "--g", "18"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    for name in ["compat-1", "compat-2", "s-ode", "h-vanishes", "f-constant", "corpus"] {
        assert!(text.contains(name), "missing check {} in: {}", name, text);
    }
}

#[test]
fn verify_deep_g4() {
    let out = spectral(&["verify", "--operator", "halphen", "--g", "4", "--deep"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("chi-equation"));
}

#[test]
fn verify_invalid_genus_exits_2() {
    let out = spectral(&["verify", "--operator", "halphen", "--g", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_json_format() {
    let out = spectral(&["verify", "--operator", "lame", "--g", "2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["operator"], "lame");
    assert_eq!(v["passed"], true);
}

#[test]
fn table_rows_and_determinism() {
    let out = spectral(&["table", "--operator", "halphen", "--g-max", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let gs: Vec<u64> = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["g"].as_u64().unwrap())
        .collect();
    assert_eq!(gs, vec![1, 3, 4, 6, 7]);

    // row for g = 6 equals the single-curve JSON byte-for-byte
    let single = spectral(&["curve", "halphen", "--g", "6", "--format", "json"]);
    let row6 = text.lines().find(|l| l.contains("\"g\":6")).unwrap();
    assert_eq!(format!("{}\n", row6), stdout(&single));

    // identical invocations give byte-identical output
    let again = spectral(&["table", "--operator", "halphen", "--g-max", "7"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn table_small_bound() {
    let out = spectral(&["table", "--operator", "halphen", "--g-max", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    assert!(text.contains("\"g\":1"));
}

#[test]
fn curve_out_file() {
    let dir = std::env::temp_dir().join("spectral-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c6.json");
    let out = spectral(&[
        "curve", "halphen", "--g", "6", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.contains("\"operator\":\"halphen\""));
    std::fs::remove_file(path).ok();
}
