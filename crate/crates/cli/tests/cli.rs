use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fdszt_core::{parse_pgm, write_pgm, GrayImage};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn fdszt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdszt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write(dir: &Path, name: &str, img: &GrayImage) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, write_pgm(img)).unwrap();
    path
}

#[test]
fn embed_reports_json_in_fixed_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("stego.pgm");
    let res = fdszt(&[
        "embed",
        "--cover",
        p(&data("cover32.pgm")),
        "--secret",
        p(&data("secret4.pgm")),
        "--out",
        p(&out),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let text = stdout(&res);
    let keys = [
        "\"bits_used\":160",
        "\"bits_available\":256",
        "\"mse\"",
        "\"psnr_db\"",
        "\"if\"",
        "\"peak_mode\":\"Fixed255\"",
    ];
    let mut last = 0;
    for k in keys {
        let pos = text
            .find(k)
            .unwrap_or_else(|| panic!("{k} missing in {text}"));
        assert!(pos >= last, "{k} out of order in {text}");
        last = pos;
    }
    assert_eq!(
        std::fs::read(&out).unwrap(),
        std::fs::read(data("stego32.golden.pgm")).unwrap()
    );
}

#[test]
fn insufficient_capacity_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    // 8x8 cover: 16 masks; a 1x1 secret needs 40 bits
    let cover = write(dir.path(), "c.pgm", &GrayImage::filled(8, 8, 100).unwrap());
    let secret = write(dir.path(), "s.pgm", &GrayImage::filled(1, 1, 7).unwrap());
    let res = fdszt(&[
        "embed",
        "--cover",
        p(&cover),
        "--secret",
        p(&secret),
        "--out",
        p(&dir.path().join("o.pgm")),
    ]);
    assert_eq!(res.status.code(), Some(2));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("required=40 bits available=16"), "{err}");
    assert!(!dir.path().join("o.pgm").exists());
}

#[test]
fn embed_failure_exits_3_and_names_mask() {
    let dir = tempfile::tempdir().unwrap();
    let cover = write(dir.path(), "c.pgm", &GrayImage::filled(16, 16, 0).unwrap());
    let secret = write(dir.path(), "s.pgm", &GrayImage::filled(1, 1, 0).unwrap());
    let res = fdszt(&[
        "embed",
        "--cover",
        p(&cover),
        "--secret",
        p(&secret),
        "--out",
        p(&dir.path().join("o.pgm")),
    ]);
    assert_eq!(res.status.code(), Some(3));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("row 1, col 7"), "{err}");
}

#[test]
fn missing_and_malformed_inputs_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let res = fdszt(&[
        "embed",
        "--cover",
        "/nonexistent/c.pgm",
        "--secret",
        p(&data("secret4.pgm")),
        "--out",
        p(&dir.path().join("o.pgm")),
    ]);
    assert_eq!(res.status.code(), Some(1));

    let bad = dir.path().join("bad.pgm");
    std::fs::write(&bad, b"P5\n4 4\n255\n\x01\x02").unwrap();
    assert_eq!(
        fdszt(&["capacity", "--cover", p(&bad)]).status.code(),
        Some(1)
    );
    assert_eq!(
        fdszt(&["extract", "--stego", "/nonexistent", "--out", "x.pgm"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(fdszt(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        fdszt(&["metrics", "--ref", "a", "--test", "b", "--peak", "min"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(fdszt(&["--help"]).status.code(), Some(0));
}

#[test]
fn extract_roundtrip_and_no_payload() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rec.pgm");
    let res = fdszt(&[
        "extract",
        "--stego",
        p(&data("stego32.golden.pgm")),
        "--out",
        p(&out),
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert_eq!(stdout(&res).trim(), r#"{"width":4,"height":4}"#);
    assert_eq!(
        std::fs::read(&out).unwrap(),
        std::fs::read(data("secret4.pgm")).unwrap()
    );

    let uniform = write(
        dir.path(),
        "u.pgm",
        &GrayImage::filled(32, 32, 128).unwrap(),
    );
    let res = fdszt(&[
        "extract",
        "--stego",
        p(&uniform),
        "--out",
        p(&dir.path().join("x.pgm")),
    ]);
    assert_eq!(res.status.code(), Some(4));
    // too small to hold a header
    let tiny = write(dir.path(), "t.pgm", &GrayImage::filled(4, 4, 128).unwrap());
    let res = fdszt(&[
        "extract",
        "--stego",
        p(&tiny),
        "--out",
        p(&dir.path().join("x.pgm")),
    ]);
    assert_eq!(res.status.code(), Some(4));
}

#[test]
fn capacity_output() {
    let dir = tempfile::tempdir().unwrap();
    let big = write(
        dir.path(),
        "big.pgm",
        &GrayImage::filled(512, 512, 90).unwrap(),
    );
    let res = fdszt(&["capacity", "--cover", p(&big)]);
    assert_eq!(res.status.code(), Some(0));
    assert_eq!(stdout(&res).trim(), "bits=65536 max_secret_pixels=8188");

    let small = write(dir.path(), "s.pgm", &GrayImage::filled(5, 7, 90).unwrap());
    assert_eq!(
        stdout(&fdszt(&["capacity", "--cover", p(&small)])).trim(),
        "bits=6 max_secret_pixels=0"
    );
}

#[test]
fn metrics_identical_and_peak_modes() {
    let cover = data("cover32.pgm");
    let res = fdszt(&["metrics", "--ref", p(&cover), "--test", p(&cover)]);
    assert_eq!(res.status.code(), Some(0));
    assert_eq!(
        stdout(&res).trim(),
        r#"{"mse":0.0,"psnr_db":"inf","if":1.0,"peak_mode":"Fixed255"}"#
    );
    let res = fdszt(&[
        "metrics",
        "--ref",
        p(&cover),
        "--test",
        p(&data("stego32.golden.pgm")),
        "--peak",
        "max",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&res).trim()).unwrap();
    assert_eq!(v["peak_mode"], "ObservedMax");
    assert!(v["psnr_db"].as_f64().unwrap() > 30.0);

    let res = fdszt(&[
        "metrics",
        "--ref",
        p(&cover),
        "--test",
        p(&data("secret4.pgm")),
    ]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn verify_pass() {
    let res = fdszt(&[
        "verify",
        "--cover",
        p(&data("cover32.pgm")),
        "--secret",
        p(&data("secret4.pgm")),
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert_eq!(stdout(&res).lines().last(), Some("PASS"));
}

#[test]
fn png_output_decodes_to_same_image() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("stego.png");
    let res = fdszt(&[
        "embed",
        "--cover",
        p(&data("cover32.pgm")),
        "--secret",
        p(&data("secret4.pgm")),
        "--out",
        p(&out),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let png = fdszt_core::read_image(&out).unwrap();
    let golden = parse_pgm(&std::fs::read(data("stego32.golden.pgm")).unwrap()).unwrap();
    assert_eq!(png, golden);

    let rec = dir.path().join("rec.png");
    assert_eq!(
        fdszt(&["extract", "--stego", p(&out), "--out", p(&rec)])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        fdszt_core::read_image(&rec).unwrap(),
        parse_pgm(&std::fs::read(data("secret4.pgm")).unwrap()).unwrap()
    );
}
