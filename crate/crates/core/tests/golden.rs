//! Byte-for-byte regression against checked-in outputs.

use collective_decay::harness::cli::main_with_args;

fn run(args: &[&str]) -> String {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = main_with_args(
        std::iter::once("collective-decay").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    String::from_utf8(out).unwrap()
}

fn golden(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

const EVOLVE: &[&str] = &[
    "evolve",
    "--werner",
    "0.5",
    "--a",
    "0.75",
    "--n",
    "0.5",
    "--lambda",
    "1",
    "--t-end",
    "2",
    "--samples",
    "9",
];

#[test]
fn evolve_matches_golden() {
    assert_eq!(run(EVOLVE), golden("evolve_werner.csv"));
}

#[test]
fn sweep_matches_golden() {
    assert_eq!(
        run(&[
            "sweep",
            "--werner",
            "0.5",
            "--axis",
            "a=0,0.5,1",
            "--axis",
            "n=0,1"
        ]),
        golden("sweep_a_n.csv")
    );
}

#[test]
fn positivity_matches_golden() {
    assert_eq!(
        run(&["positivity", "--k0r", "2", "--cos-mu-r", "0.3"]),
        golden("positivity_geometry.txt")
    );
}

#[test]
fn repeated_runs_are_identical() {
    assert_eq!(run(EVOLVE), run(EVOLVE));
    let validate = [
        "validate",
        "--a-grid",
        "0.5",
        "--n-grid",
        "0",
        "--lambda-grid",
        "markov",
        "--x-grid",
        "0.5",
        "--random-cases",
        "20",
    ];
    assert_eq!(run(&validate), run(&validate));
}
