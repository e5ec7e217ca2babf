use clap::{Args, ValueEnum};
use fhaci_core::channel::{PerInterferer, SystemConfig, WaveformParams};
use fhaci_core::optimize::simplex::{minimize, SimplexOptions};
use fhaci_core::optimize::{
    nelder_mead, profile_curve, psi_vs_distance, Coordinate, MctcObjective, NelderMeadOptions, Objective,
    SplatterModel,
};
use fhaci_core::outage::ShadowedOptions;
use serde::Serialize;

use super::{load_config, load_table, parse_values, Failure};
use crate::manifest::Run;
use crate::Common;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fading {
    /// m0 = 1, m_i = 1.
    Rayleigh,
    /// m0 = 4, m_i = 4.
    Nakagami,
    /// m0 = 4, m_i = 1.
    Mixed,
}

impl Fading {
    fn apply(self, cfg: &SystemConfig) -> SystemConfig {
        let (m0, mi) = match self {
            Fading::Rayleigh => (1, 1.0),
            Fading::Nakagami => (4, 4.0),
            Fading::Mixed => (4, 1.0),
        };
        SystemConfig {
            m0,
            m_i: PerInterferer::Shared(mi),
            ..cfg.clone()
        }
    }

    fn name(self) -> &'static str {
        match self {
            Fading::Rayleigh => "rayleigh",
            Fading::Nakagami => "nakagami",
            Fading::Mixed => "mixed",
        }
    }
}

fn values(flag: &str, text: &str) -> anyhow::Result<Vec<f64>> {
    parse_values(text).map_err(|e| Failure::Config(format!("--{flag}: {e}")).into())
}

fn shadowed(draws: u64, seed: u64) -> ShadowedOptions {
    ShadowedOptions {
        mc_draws: draws,
        seed,
        ..Default::default()
    }
}

fn m_i_label(cfg: &SystemConfig) -> String {
    match &cfg.m_i {
        PerInterferer::Shared(m) => m.to_string(),
        PerInterferer::Each(_) => "list".into(),
    }
}

/// Best `(R, h)` with `L` and `ψ` pinned.
fn best_rate_and_index(obj: &MctcObjective, l: f64, psi: f64, nm: &NelderMeadOptions) -> anyhow::Result<(f64, f64, f64)> {
    let pick = |a: &[f64; 4]| [a[1], a[2]];
    let mut opts = SimplexOptions::new(pick(&nm.steps), pick(&nm.lower), pick(&nm.upper));
    opts.diameter_tol = nm.diameter_tol;
    opts.cost_tol = nm.cost_tol;
    opts.max_iterations = nm.max_iterations;
    let wf = |x: &[f64; 2]| WaveformParams::from_array([l, x[0], x[1], psi]);
    let start = NelderMeadOptions::default_start();
    let out = minimize(|x: &[f64; 2]| Ok(-obj.tau(&wf(x))?), [start.rate, start.h], &opts)?;
    Ok((out.best[0], out.best[1], obj.tau(&wf(&out.best))?))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepLArgs {
    /// Fractional in-band power of each curve.
    #[arg(long, default_value = "0.96,0.99")]
    pub psi: String,
    /// Also emit the curve with adjacent-channel splatter neglected.
    #[arg(long)]
    pub no_aci: bool,
    /// Containment used for the bandwidth of the splatter-free curve.
    #[arg(long, default_value_t = 0.99)]
    pub no_aci_bandwidth_psi: f64,
    /// Channel counts as `first:last:step` or a list.
    #[arg(long = "L-range", default_value = "1:80:1")]
    pub l_range: String,
    /// Source-shadowing draws for shadowed configurations.
    #[arg(long, default_value_t = 2000)]
    pub draws: u64,
}

#[derive(Serialize)]
struct SweepLRow {
    psi: f64,
    #[serde(rename = "L")]
    channels: f64,
    #[serde(rename = "R_opt")]
    rate: f64,
    h_opt: f64,
    tau_opt: f64,
    splatter: &'static str,
}

pub fn sweep_l(common: &Common, args: &SweepLArgs) -> anyhow::Result<()> {
    let cfg = load_config(common)?;
    let psis = values("psi", &args.psi)?;
    let ls = values("L-range", &args.l_range)?;
    if ls.iter().any(|&l| l < 1.0 || l.fract() != 0.0) {
        return Err(Failure::Config("--L-range: channel counts must be positive integers".into()).into());
    }
    let (table, table_path) = load_table(common)?;
    let mut run = Run::start(&common.out, "sweep-l", common.config.as_deref(), common.seed)?;
    run.set_table(&table_path);
    run.set_parameters(serde_json::json!({ "config": cfg, "args": args }))?;
    let nm = NelderMeadOptions::default();
    let base = MctcObjective::new(cfg.clone(), &table)?.with_shadowed_options(shadowed(args.draws, common.seed));
    let neglected = MctcObjective::new(cfg, &table)?
        .with_shadowed_options(shadowed(args.draws, common.seed))
        .with_splatter(SplatterModel::Neglected {
            bandwidth_psi: args.no_aci_bandwidth_psi,
        });
    let mut curves: Vec<(&MctcObjective, f64, &'static str)> = psis.iter().map(|&p| (&base, p, "included")).collect();
    if args.no_aci {
        curves.push((&neglected, args.no_aci_bandwidth_psi, "neglected"));
    }
    let mut w = run.csv("sweep-l.csv", "fhaci-sweep-l/1")?;
    for (obj, psi, splatter) in curves {
        for &l in &ls {
            let (rate, h, tau) = best_rate_and_index(obj, l, psi, &nm)?;
            w.serialize(SweepLRow {
                psi,
                channels: l,
                rate,
                h_opt: h,
                tau_opt: tau,
                splatter,
            })?;
        }
    }
    w.flush()?;
    drop(w);
    run.finish()?;
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepPsiArgs {
    /// ψ values as `first:last:step` or a list.
    #[arg(long, default_value = "0.90:0.995:0.005")]
    pub psi: String,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "mixed,nakagami,rayleigh")]
    pub fading: Vec<Fading>,
    /// Shadowing deviations to cover; defaults to the configuration's.
    #[arg(long)]
    pub sigma_db: Option<String>,
    #[arg(long, default_value_t = 2000)]
    pub draws: u64,
}

#[derive(Serialize)]
struct OptimumRow {
    fading: &'static str,
    r_net: f64,
    sigma_s_db: f64,
    m0: u32,
    m_i: String,
    #[serde(rename = "L")]
    channels: f64,
    #[serde(rename = "R")]
    rate: f64,
    h: f64,
    psi: f64,
    tau_opt: f64,
    /// `τ′` in units of 10⁻³, the scale capacity tables are usually quoted in.
    tau_opt_e3: f64,
}

impl OptimumRow {
    fn new(fading: Fading, cfg: &SystemConfig, theta: &WaveformParams, tau: f64) -> Self {
        Self {
            fading: fading.name(),
            r_net: cfg.r_net,
            sigma_s_db: cfg.sigma_s_db,
            m0: cfg.m0,
            m_i: m_i_label(cfg),
            channels: theta.channels,
            rate: theta.rate,
            h: theta.h,
            psi: theta.psi,
            tau_opt: tau,
            tau_opt_e3: tau * 1e3,
        }
    }
}

pub fn sweep_psi(common: &Common, args: &SweepPsiArgs) -> anyhow::Result<()> {
    let cfg = load_config(common)?;
    let psis = values("psi", &args.psi)?;
    let sigmas = match &args.sigma_db {
        Some(s) => values("sigma-db", s)?,
        None => vec![cfg.sigma_s_db],
    };
    let (table, table_path) = load_table(common)?;
    let mut run = Run::start(&common.out, "sweep-psi", common.config.as_deref(), common.seed)?;
    run.set_table(&table_path);
    run.set_parameters(serde_json::json!({ "config": cfg, "args": args }))?;
    let mut w = run.csv("sweep-psi.csv", "fhaci-sweep-psi/1")?;
    let nm = NelderMeadOptions::default();
    for &fading in &args.fading {
        for &sigma in &sigmas {
            let c = SystemConfig {
                sigma_s_db: sigma,
                ..fading.apply(&cfg)
            };
            let obj = MctcObjective::new(c.clone(), &table)?.with_shadowed_options(shadowed(args.draws, common.seed));
            let curve = profile_curve(&obj, &NelderMeadOptions::default_start(), Coordinate::Psi, &psis, &nm)?;
            for p in curve {
                w.serialize(OptimumRow::new(fading, &c, &p.result.theta_opt, p.result.tau_opt))?;
            }
        }
    }
    w.flush()?;
    drop(w);
    run.finish()?;
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Table1Args {
    #[arg(long, default_value = "2,4")]
    pub r_net: String,
    #[arg(long, default_value = "0,8")]
    pub sigma_db: String,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "rayleigh,nakagami,mixed")]
    pub fading: Vec<Fading>,
    #[arg(long, default_value_t = 2000)]
    pub draws: u64,
}

pub fn table1(common: &Common, args: &Table1Args) -> anyhow::Result<()> {
    let cfg = load_config(common)?;
    let r_nets = values("r-net", &args.r_net)?;
    let sigmas = values("sigma-db", &args.sigma_db)?;
    let (table, table_path) = load_table(common)?;
    let mut run = Run::start(&common.out, "table1", common.config.as_deref(), common.seed)?;
    run.set_table(&table_path);
    run.set_parameters(serde_json::json!({ "config": cfg, "args": args }))?;
    let mut w = run.csv("table1.csv", "fhaci-table1/1")?;
    let nm = NelderMeadOptions::default();
    for &r_net in &r_nets {
        for &sigma in &sigmas {
            for &fading in &args.fading {
                let c = SystemConfig {
                    r_net,
                    sigma_s_db: sigma,
                    ..fading.apply(&cfg)
                };
                c.validate()?;
                let obj =
                    MctcObjective::new(c.clone(), &table)?.with_shadowed_options(shadowed(args.draws, common.seed));
                let best = nelder_mead(&obj, &NelderMeadOptions::default_start(), &nm)?;
                let row = OptimumRow::new(fading, &c, &best.theta_opt, best.tau_opt);
                eprintln!(
                    "r_net {r_net} sigma {sigma} {}: L {} R {:.3} h {:.3} psi {:.4} tau' {:.3}e-3",
                    fading.name(),
                    row.channels,
                    row.rate,
                    row.h,
                    row.psi,
                    row.tau_opt_e3
                );
                w.serialize(row)?;
            }
        }
    }
    w.flush()?;
    drop(w);
    run.finish()?;
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Fig3Args {
    /// Normalized source distances `|X0|/r_net`.
    #[arg(long, default_value = "0.25,0.5,0.75")]
    pub r: String,
    /// Path-loss exponents.
    #[arg(long, default_value = "3,3.5,4")]
    pub alpha: String,
    #[arg(long, default_value_t = 2000)]
    pub draws: u64,
}

#[derive(Serialize)]
struct Fig3Row {
    r: f64,
    alpha: f64,
    r_net: f64,
    #[serde(rename = "L")]
    channels: f64,
    #[serde(rename = "R")]
    rate: f64,
    h: f64,
    psi_opt: f64,
    tau_opt: f64,
}

pub fn fig3(common: &Common, args: &Fig3Args) -> anyhow::Result<()> {
    let cfg = load_config(common)?;
    let rs = values("r", &args.r)?;
    let alphas = values("alpha", &args.alpha)?;
    let (table, table_path) = load_table(common)?;
    let mut run = Run::start(&common.out, "fig3", common.config.as_deref(), common.seed)?;
    run.set_table(&table_path);
    run.set_parameters(serde_json::json!({ "config": cfg, "args": args }))?;
    let pts = psi_vs_distance(
        &cfg,
        &table,
        &rs,
        &alphas,
        &shadowed(args.draws, common.seed),
        &NelderMeadOptions::default(),
    )?;
    let mut w = run.csv("fig3.csv", "fhaci-fig3/1")?;
    for p in pts {
        w.serialize(Fig3Row {
            r: p.r,
            alpha: p.alpha,
            r_net: p.r_net,
            channels: p.theta_opt.channels,
            rate: p.theta_opt.rate,
            h: p.theta_opt.h,
            psi_opt: p.theta_opt.psi,
            tau_opt: p.tau_opt,
        })?;
    }
    w.flush()?;
    drop(w);
    run.finish()?;
    Ok(())
}
