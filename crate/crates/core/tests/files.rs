use std::fs;

use greedyvote::bench::{run_benchmark, BenchConfig};
use greedyvote::io::write_native;
use greedyvote::*;
use tempfile::TempDir;

#[test]
fn parses_both_formats_from_disk() {
    let dir = TempDir::new().unwrap();
    let native = dir.path().join("ex5.toc");
    fs::write(&native, write_native(&fixtures::ex5())).unwrap();
    let soc = dir.path().join("ex5.soc");
    fs::write(&soc, "# NUMBER ALTERNATIVES: 5\n2: 1,2,3,4,5\n2: 4,1,5,3,2\n1: 3,5,2,4,1\n").unwrap();

    for path in [&native, &soc] {
        let p = parse_profile(path, BallotFormat::from_path(path)).unwrap();
        assert_eq!(p, fixtures::ex5());
    }
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    let err = parse_profile(&dir.path().join("absent.toc"), BallotFormat::Native).unwrap_err();
    assert_eq!(err.kind(), "io");
}

#[test]
fn non_permutation_row_names_its_line() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.toc");
    fs::write(&path, "# header comment\n3 2\n1 2 3\n3 3 1\n").unwrap();
    match parse_profile(&path, BallotFormat::Native) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("{other:?}"),
    }
}

#[test]
fn bench_config_paths_are_relative_to_the_config() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("ex5.toc"), write_native(&fixtures::ex5())).unwrap();
    let config_path = dir.path().join("bench.toml");
    fs::write(&config_path, "rule = \"young\"\nprofiles = [\"ex5.toc\"]\ncsv = \"rows.csv\"\n").unwrap();

    let config = BenchConfig::from_file(&config_path).unwrap();
    assert_eq!(config.profiles, vec![dir.path().join("ex5.toc")]);
    assert_eq!(config.csv, Some(dir.path().join("rows.csv")));

    let report = run_benchmark(&config).unwrap();
    let d = report.rows.iter().find(|r| r.candidate == 4).unwrap();
    assert_eq!(d.ratio, 1.0);
    let mut out = fs::File::create(config.csv.as_ref().unwrap()).unwrap();
    report.write_csv(&mut out).unwrap();
    assert_eq!(fs::read_to_string(dir.path().join("rows.csv")).unwrap(), report.csv_string());
}

#[test]
fn bench_config_rejects_unknown_keys() {
    let err = BenchConfig::from_toml("rule = \"dodgson\"\ntrails = 3\n").unwrap_err();
    assert_eq!(err.kind(), "config");
}
