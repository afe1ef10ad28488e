//! Scan tables: bracket values over epsilon, scale and family grids,
//! written as CSV.

use std::io::Write;
use std::path::Path;

use jlo::{BracketEntry, Family};
use models::ModelConfig;

use crate::config::SuiteConfig;

fn circle(cfg: &SuiteConfig) -> models::ModelTriple {
    match cfg.model {
        ModelConfig::Circle {
            cutoff,
            inner_fraction,
        } => models::build_circle(cutoff, inner_fraction).expect("validated"),
        _ => models::build_circle(64, 0.5).expect("static"),
    }
}

fn winding_pair(m: &models::ModelTriple) -> Vec<BracketEntry> {
    vec![
        BracketEntry::plain(m.algebra["u*"].clone()),
        BracketEntry::plain(m.algebra["u"].clone()),
    ]
}

pub fn scan_epsilon(cfg: &SuiteConfig, dir: &Path) -> std::io::Result<std::path::PathBuf> {
    let m = circle(cfg);
    let slots = winding_pair(&m);
    let entries = jlo::j_entries(&m.d_matrix(), &slots);
    std::fs::create_dir_all(dir)?;
    let path = dir.join("scan_epsilon.csv");
    let mut f = std::fs::File::create(&path)?;
    writeln!(f, "epsilon,re,im,error_bound")?;
    for i in 0..28 {
        let eps = 3e-3 * 1.25f64.powi(i);
        let v = jlo::eval_bracket_epsilon(&m, &entries, eps, 1)
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        writeln!(
            f,
            "{:.12e},{:.17e},{:.17e},{:.3e}",
            eps, v.value.re, v.value.im, v.error_bound
        )?;
    }
    Ok(path)
}

pub fn scan_scale(cfg: &SuiteConfig, dir: &Path) -> std::io::Result<std::path::PathBuf> {
    let m = circle(cfg);
    let slots = winding_pair(&m);
    std::fs::create_dir_all(dir)?;
    let path = dir.join("scan_t.csv");
    let mut f = std::fs::File::create(&path)?;
    writeln!(f, "t,re,im")?;
    for i in 0..30 {
        let t = 0.1 * 1.2f64.powi(i);
        let v = jlo::j_cochain(&m, &slots, Family::Scale, t)
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        writeln!(f, "{:.12e},{:.17e},{:.17e}", t, v.re, v.im)?;
    }
    Ok(path)
}

pub fn scan_family(cfg: &SuiteConfig, dir: &Path) -> std::io::Result<std::path::PathBuf> {
    let m = circle(cfg);
    std::fs::create_dir_all(dir)?;
    let path = dir.join("scan_u.csv");
    let mut f = std::fs::File::create(&path)?;
    writeln!(f, "u,re,im")?;
    for i in 0..=20 {
        let u = i as f64 / 20.0;
        let v = residue::family_pairing(&m, &m.algebra["u*"], &m.algebra["u"], u);
        writeln!(f, "{:.6},{:.17e},{:.17e}", u, v.re, v.im)?;
    }
    Ok(path)
}

pub fn export_model(cfg: &SuiteConfig, dir: &Path) -> std::io::Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    match cfg.model.build().map_err(|e| std::io::Error::other(e.to_string()))? {
        models::BuiltModel::Plain(m) => {
            let d = m.d_matrix();
            let p = dir.join("d_operator.csv");
            models::export_matrix_csv(&p, &d)?;
            written.push(p);
            let p = dir.join("d_operator.ncm");
            models::export_matrix_bin(&p, &d)?;
            written.push(p);
            for (name, a) in &m.algebra {
                let safe = name.replace('*', "_star");
                let p = dir.join(format!("gen_{}.csv", safe));
                models::export_matrix_csv(&p, a)?;
                written.push(p);
            }
        }
        models::BuiltModel::Conformal(c) => {
            let p = dir.join("d_perturbed.csv");
            models::export_matrix_csv(&p, &c.d_h)?;
            written.push(p);
            let p = dir.join("conformal_factor.csv");
            models::export_matrix_csv(&p, &c.e)?;
            written.push(p);
        }
    }
    Ok(written)
}
