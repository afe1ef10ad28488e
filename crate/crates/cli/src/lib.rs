//! Batch driver: named verification suites over the model triples with
//! structured reports and scan tables.

pub mod checks;
pub mod config;
pub mod scans;

use std::io::Write;
use std::path::Path;

pub use checks::{catalog, CheckSpec};
pub use config::{CheckResult, ConfigError, Report, SuiteConfig, SUITES};

/// Runs the configured suites. Checks within a batch run concurrently (the
/// thread count capped by the TWISTBENCH_THREADS environment variable);
/// report assembly is single-threaded and ordered by catalog position, so
/// the output is deterministic for a fixed config and seed.
pub fn run_suites(cfg: &SuiteConfig) -> Report {
    let selected: Vec<&'static CheckSpec> = catalog()
        .iter()
        .filter(|c| cfg.suites.iter().any(|s| s == c.suite))
        .collect();
    let threads: usize = std::env::var("TWISTBENCH_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or(4);
    let mut results: Vec<Option<CheckResult>> = vec![None; selected.len()];
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results_mx = std::sync::Mutex::new(&mut results);
    std::thread::scope(|scope| {
        for _ in 0..threads.min(selected.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= selected.len() {
                    break;
                }
                let r = (selected[i].run)(cfg);
                results_mx.lock().unwrap()[i] = Some(r);
            });
        }
    });
    let checks: Vec<CheckResult> = results.into_iter().map(|r| r.expect("ran")).collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    let failed = checks.len() - passed;
    Report {
        config: cfg.clone(),
        checks,
        passed,
        failed,
    }
}

pub fn write_report(report: &Report, dir: &Path) -> std::io::Result<std::path::PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join("report.json");
    let mut f = std::fs::File::create(&path)?;
    writeln!(f, "{}", serde_json::to_string_pretty(report)?)?;
    Ok(path)
}

pub fn print_catalog() {
    for c in catalog() {
        println!("{:28} [{}] \"{}\"", c.name, c.suite, c.anchor);
    }
}
