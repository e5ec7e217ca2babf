use clap::Args;
use fhaci_core::cpfsk::{RateThresholdTable, TableSpec};
use serde::Serialize;

use super::table_path;
use crate::manifest::Run;
use crate::Common;

#[derive(Debug, Clone, Args, Serialize)]
pub struct BuildTableArgs {
    /// Noise realizations per grid point.
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Modulation-index grid spacing.
    #[arg(long, default_value_t = 0.05)]
    pub h_step: f64,
    /// Lowest and highest SNR in dB, and the spacing.
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    pub snr_min: f64,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    pub snr_max: f64,
    #[arg(long, default_value_t = 0.5)]
    pub snr_step: f64,
}

fn grid(first: f64, last: f64, step: f64) -> Vec<f64> {
    let n = ((last - first) / step + 1e-9).floor().max(0.0) as usize;
    (0..=n).map(|i| ((first + step * i as f64) * 1e9).round() / 1e9).collect()
}

pub fn build(common: &Common, args: &BuildTableArgs) -> anyhow::Result<()> {
    let spec = TableSpec {
        h_grid: grid(0.0, 1.0, args.h_step),
        snr_db_grid: grid(args.snr_min, args.snr_max, args.snr_step),
        trials: args.trials,
        seed: common.seed,
    };
    let mut run = Run::start(&common.out, "build-table", common.config.as_deref(), common.seed)?;
    run.set_parameters(&spec)?;
    let table = RateThresholdTable::build(&spec)?;
    let path = table_path(common);
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    table.save(&path)?;
    run.record(&path);
    run.finish()?;
    println!("table={}", path.display());
    Ok(())
}
