//! Scans one Grassmannian and lists the problems where the criterion fails.
//!
//! `cargo run --release --example census -- 3 7`

use schubert::criterion::{scan_grassmannian, Assertions, ScanOptions};
use schubert::partition::GrassmannianShape;

fn main() -> schubert::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("k and n must be integers"))
        .collect();
    let (k, n) = match args[..] {
        [k, n] => (k, n),
        _ => (3, 6),
    };
    let shape = GrassmannianShape::new(k, n)?;
    let report = scan_grassmannian(shape, &Assertions::default(), &ScanOptions::default())?;
    println!(
        "{shape}: {} problems, {} failures",
        report.total_problems,
        report.failures().len()
    );
    for r in report.failures() {
        let tag = if r.primitive { "primitive" } else { "induced" };
        println!(
            "  {} degree {} ({tag})",
            r.problem.conditions_string(),
            r.degree
        );
    }
    Ok(())
}
