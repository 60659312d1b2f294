//! Subcommand implementations. Printing goes to stdout, one line per
//! artifact written; errors bubble to `main` for exit-code mapping.

use std::path::{Path, PathBuf};

use wmobs_core::harness::{
    report_csv, report_json, run_scenario, sweep, RunReport, REPORT_SCHEMA_VERSION,
};

use crate::config::parse_config;
use crate::plot::{plot_curves, AxisSpec};
use crate::{CliError, Result};

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::WriteIo {
        path: path.display().to_string(),
        source: e,
    })
}

/// Effective master seed: an explicit `--seed` flag beats the
/// `WM_OBS_SEED` environment variable, which beats the config value.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>, config: u64) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        None => Ok(config),
        Some(text) => text.trim().parse::<u64>().map_err(|_| {
            CliError::Schema(format!(
                "WM_OBS_SEED must be an unsigned integer, got {text:?}"
            ))
        }),
    }
}

/// Runs the scenario (or sweep) in the config file and writes
/// report.json / report_NNN.json, report.csv, and plot.svg into the
/// output directory.
pub fn cmd_run(
    config_path: &Path,
    out_override: Option<&Path>,
    seed_flag: Option<u64>,
    workers_flag: Option<usize>,
) -> Result<()> {
    let mut cfg = parse_config(config_path)?;
    let env = std::env::var("WM_OBS_SEED").ok();
    cfg.scenario.master_seed = resolve_seed(seed_flag, env.as_deref(), cfg.scenario.master_seed)?;
    if let Some(w) = workers_flag {
        cfg.scenario.workers = w;
    }
    // Overrides can invalidate a config that parsed fine.
    cfg.validate()?;

    let out_dir: PathBuf = out_override
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(&cfg.out_dir));
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::WriteIo {
        path: out_dir.display().to_string(),
        source: e,
    })?;

    let reports = match &cfg.sweep {
        None => vec![run_scenario(&cfg.scenario)?],
        Some(s) => sweep(&cfg.scenario, &s.axis, &s.values)?,
    };

    for (i, report) in reports.iter().enumerate() {
        let name = if reports.len() == 1 {
            "report.json".to_string()
        } else {
            format!("report_{i:03}.json")
        };
        let path = out_dir.join(name);
        write_file(&path, &report_json(report)?)?;
        crate::sayln!(
            "wrote {} (scenario {}, {} ms)",
            path.display(),
            report.scenario_id,
            report.wall_clock_ms
        );
    }

    let csv_path = out_dir.join("report.csv");
    write_file(&csv_path, &report_csv(&reports))?;
    crate::sayln!("wrote {}", csv_path.display());

    let axis = match &cfg.sweep {
        Some(s) => AxisSpec::Config(s.axis.clone()),
        None => AxisSpec::Samples,
    };
    match plot_curves(&reports, &axis) {
        Ok(svg) => {
            let svg_path = out_dir.join("plot.svg");
            write_file(&svg_path, &svg)?;
            crate::sayln!("wrote {}", svg_path.display());
        }
        Err(CliError::MetricMissing(_)) => {
            crate::sayln!("note: reports carry no plottable payload, skipped plot.svg");
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

/// Parses and validates a config, then prints the resolved experiment
/// shape without running anything.
pub fn cmd_validate(config_path: &Path) -> Result<()> {
    let cfg = parse_config(config_path)?;
    let s = &cfg.scenario;
    crate::sayln!("ok: scenario {}", s.scenario_id());
    crate::sayln!(
        "  scheme={} deployment={} n_entities={} gen_length={} vocab={}",
        s.scheme.kind.as_str(),
        s.deployment.as_str(),
        s.n_entities,
        s.gen_length,
        s.model.vocab_size
    );
    crate::sayln!(
        "  train={}/entity test={}/entity target_fpr={} out_dir={}",
        s.train_samples_per_entity, s.test_samples_per_entity, s.target_fpr, cfg.out_dir
    );
    if let Some(sw) = &cfg.sweep {
        crate::sayln!("  sweep axis={} over {} values", sw.axis, sw.values.len());
    }
    Ok(())
}

/// Re-renders a chart from previously written report.json files.
pub fn cmd_plot(report_paths: &[PathBuf], out: &Path, x_axis: &str) -> Result<()> {
    if report_paths.is_empty() {
        return Err(CliError::EmptyReport);
    }
    let mut reports = Vec::with_capacity(report_paths.len());
    for path in report_paths {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::ReadIo {
            path: path.display().to_string(),
            source: e,
        })?;
        let report: RunReport = serde_json::from_str(&text)
            .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
        if report.schema_version != REPORT_SCHEMA_VERSION {
            return Err(CliError::Schema(format!(
                "{}: report schema {} unsupported, this tool reads {}",
                path.display(),
                report.schema_version,
                REPORT_SCHEMA_VERSION
            )));
        }
        reports.push(report);
    }
    let axis = if x_axis == "samples" {
        AxisSpec::Samples
    } else {
        AxisSpec::Config(x_axis.to_string())
    };
    let svg = plot_curves(&reports, &axis)?;
    write_file(out, &svg)?;
    crate::sayln!("wrote {}", out.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_precedence_is_flag_env_config() {
        assert_eq!(resolve_seed(Some(3), Some("9"), 1).unwrap(), 3);
        assert_eq!(resolve_seed(None, Some("9"), 1).unwrap(), 9);
        assert_eq!(resolve_seed(None, None, 1).unwrap(), 1);
        let err = resolve_seed(None, Some("ten"), 1).unwrap_err();
        assert!(matches!(err, CliError::Schema(_)));
        assert!(err.to_string().contains("WM_OBS_SEED"));
    }
}
