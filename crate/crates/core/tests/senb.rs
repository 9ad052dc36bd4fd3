use phasefield::cli::Benchmark;

#[test]
fn senb_crack_starts_at_the_right_corner_and_curves_to_the_support() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = Benchmark::SenbQualitative.config().unwrap();
    config.output.directory = dir.path().join("senb");
    let report = Benchmark::SenbQualitative.run(&config).unwrap();
    assert!(!report.artifacts.outcome.aborted);
    for check in &report.checks {
        assert!(check.passed, "{}: {}", check.name, check.detail);
    }
    // load drops after the crack has run through
    let record = &report.artifacts.outcome.record;
    let (_, peak) = record.peak().unwrap();
    assert!(record.rows.last().unwrap().reaction.abs() < 0.2 * peak);
}
