use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cli::{print_catalog, run_suites, write_report, SuiteConfig};

#[derive(Parser)]
#[command(
    name = "twistbench",
    about = "Verification suites for twisted spectral calculus on finite model triples"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured suites and write report.json.
    Verify { config: PathBuf },
    /// Print every available check with its anchor phrase.
    ListChecks,
    /// Write a scan table (epsilon, t or u) as CSV.
    Scan {
        #[arg(value_parser = ["epsilon", "t", "u"])]
        kind: String,
        config: PathBuf,
    },
    /// Export the configured model's operator and generators.
    ExportModel { config: PathBuf },
}

fn main() -> ExitCode {
    let args = Args::parse();
    match args.command {
        Command::ListChecks => {
            print_catalog();
            ExitCode::SUCCESS
        }
        Command::Verify { config } => match SuiteConfig::from_path(&config) {
            Err(e) => {
                eprintln!("config error ({}): {}", config.display(), e);
                ExitCode::from(2)
            }
            Ok(cfg) => {
                let report = run_suites(&cfg);
                for c in &report.checks {
                    println!(
                        "{} {:28} [{}] {}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.suite,
                        c.value
                    );
                }
                match write_report(&report, &cfg.output_dir) {
                    Ok(path) => println!(
                        "{} passed, {} failed; report at {}",
                        report.passed,
                        report.failed,
                        path.display()
                    ),
                    Err(e) => {
                        eprintln!("cannot write report: {e}");
                        return ExitCode::from(2);
                    }
                }
                if report.failed == 0 {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                }
            }
        },
        Command::Scan { kind, config } => match SuiteConfig::from_path(&config) {
            Err(e) => {
                eprintln!("config error: {e}");
                ExitCode::from(2)
            }
            Ok(cfg) => {
                let out = match kind.as_str() {
                    "epsilon" => cli::scans::scan_epsilon(&cfg, &cfg.output_dir),
                    "t" => cli::scans::scan_scale(&cfg, &cfg.output_dir),
                    _ => cli::scans::scan_family(&cfg, &cfg.output_dir),
                };
                match out {
                    Ok(path) => {
                        println!("wrote {}", path.display());
                        ExitCode::SUCCESS
                    }
                    Err(e) => {
                        eprintln!("scan failed: {e}");
                        ExitCode::from(2)
                    }
                }
            }
        },
        Command::ExportModel { config } => match SuiteConfig::from_path(&config) {
            Err(e) => {
                eprintln!("config error: {e}");
                ExitCode::from(2)
            }
            Ok(cfg) => match cli::scans::export_model(&cfg, &cfg.output_dir) {
                Ok(paths) => {
                    for p in paths {
                        println!("wrote {}", p.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("export failed: {e}");
                    ExitCode::from(2)
                }
            },
        },
    }
}
