use std::process::{Command, Output};

const SEED: &str = "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f";

fn qsafe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsafe"))
        .args(args)
        .output()
        .expect("spawn qsafe")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn latin_square_n2() {
    let o = qsafe(&["qpp", "latin-square", "--n", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n");
}

#[test]
fn argument_errors_exit_two() {
    for args in [
        &[][..],
        &["qpp", "latin-square", "--n", "9"][..],
        &["qpp", "keygen", "--seed", "abc", "--out", "x"][..],
        &["qeps", "simulate", "--seed", SEED, "--order", "8"][..],
        &["mdep", "demo", "--seed", SEED, "--p", "4"][..],
        &["mdep", "demo", "--seed", SEED, "--p", "101", "--m", "5"][..],
        &["qpp", "commute-stats", "--n", "3"][..],
        &["qpp", "foundations", "--i1", "1", "--i2", "1"][..],
        &["bogus"][..],
    ] {
        assert_eq!(qsafe(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let plain: Vec<u8> = (0..10_000u32).map(|i| (i * 31 % 251) as u8).collect();
    std::fs::write(path("msg"), &plain).unwrap();

    let o = qsafe(&[
        "qpp",
        "keygen",
        "--seed",
        SEED,
        "--n",
        "8",
        "--out",
        &path("pad"),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = qsafe(&[
        "qpp",
        "encrypt",
        "--pad",
        &path("pad"),
        "--seed",
        SEED,
        "--in",
        &path("msg"),
        "--out",
        &path("ct"),
    ]);
    assert!(o.status.success());
    let ct = std::fs::read(path("ct")).unwrap();
    assert_eq!(ct.len(), plain.len());
    assert_ne!(ct, plain);
    let o = qsafe(&[
        "qpp",
        "decrypt",
        "--pad",
        &path("pad"),
        "--seed",
        SEED,
        "--in",
        &path("ct"),
        "--out",
        &path("back"),
    ]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(path("back")).unwrap(), plain);
}

#[test]
fn missing_input_is_runtime_error() {
    let o = qsafe(&[
        "qpp",
        "encrypt",
        "--pad",
        "/nonexistent/pad",
        "--seed",
        SEED,
        "--in",
        "/nonexistent/x",
        "--out",
        "-",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn foundations_output() {
    let o = qsafe(&["qpp", "foundations", "--i1", "2", "--i2", "-1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("commutator=[[0,3],[-3,0]]"), "{s}");
    assert!(s.contains("hadamard_diagonalizes_xor=true"));
}

#[test]
fn commute_stats_exhaustive() {
    let o = qsafe(&["qpp", "commute-stats", "--n", "2"]);
    assert!(stdout(&o).contains("commuting=120,total=576"));
}

#[test]
fn kat_run_shipped_and_file() {
    let o = qsafe(&["kat", "run"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("status=pass"));

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.kat");
    std::fs::write(&f, format!("pad:{SEED}:{}\n", "00".repeat(64))).unwrap();
    let o = qsafe(&["kat", "run", "--file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("FAIL line=1"), "{s}");
    assert!(s.contains("vectors=1,failures=1,status=fail"));
}

#[test]
fn kat_regen_matches_shipped() {
    let o = qsafe(&["kat", "regen"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), qsafe::kat::SHIPPED);
}

#[test]
fn cost_table_csv() {
    let o = qsafe(&["mdep", "cost-table", "--pairs", "2:1,3:2,5:3"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "p,m,guess_ops,algebraic_ops\n2,1,2,2\n3,2,3,9\n5,3,5,125\n"
    );
}

#[test]
fn multiplicity_law_holds() {
    let o = qsafe(&[
        "mdep",
        "multiplicity",
        "--seed",
        SEED,
        "--p",
        "7",
        "--m",
        "3",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("law_holds=true"));
}

#[test]
fn qeps_simulate_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = qsafe(&[
        "qeps",
        "simulate",
        "--seed",
        SEED,
        "--symbols",
        "2000",
        "--snr",
        "noiseless",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("ber_bob=0,ber_eve="), "{s}");
    let csv = std::fs::read_to_string(out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("stage,index,i,q,tx_bits,rx_bits"));
    assert_eq!(lines.count(), 6 * 2000);
}
