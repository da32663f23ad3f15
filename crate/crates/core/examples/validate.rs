//! Runs a reduced validation grid and prints the audit records.

use collective_decay::harness::validate::{validate, RecordKind, ValidateOptions};
use collective_decay::MemorySpec;

fn main() -> Result<(), collective_decay::harness::HarnessError> {
    let opts = ValidateOptions {
        a_grid: vec![0.0, 0.5, 1.0],
        n_grid: vec![0.0, 1.0],
        memory_grid: vec![MemorySpec::Markov, MemorySpec::Finite(1.0)],
        x_grid: vec![0.5],
        random_cases: 200,
        ..ValidateOptions::default()
    };
    let report = validate(&opts)?;
    let passed = report
        .records
        .iter()
        .filter(|r| r.kind == RecordKind::Pass && r.passed)
        .count();
    println!(
        "{} records, {passed} checks passed, all passed: {}",
        report.records.len(),
        report.all_passed()
    );
    for r in report.records.iter().filter(|r| r.kind == RecordKind::Info) {
        let fields: Vec<String> = r.fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!("{}: {}", r.id, fields.join(" "));
    }
    Ok(())
}
