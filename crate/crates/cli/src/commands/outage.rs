use clap::{Args, ValueEnum};
use fhaci_core::channel::{db_to_linear, linear_to_db, CollisionModel, WaveformParams};
use fhaci_core::cpfsk::sinr_threshold;
use fhaci_core::outage::{
    avg_outage_shadowed, avg_outage_unshadowed, conditional_outage, ConditionalContext, ShadowedOptions,
};
use fhaci_core::simkit::{frozen_powers, simulate_network_outage_with, CollisionDraw, Resample, RngSpec};
use serde::Serialize;

use super::{load_config, load_table};
use crate::manifest::Run;
use crate::Common;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Closed form with positions and shadowing frozen from the seed.
    Conditional,
    /// Closed-form spatial average (requires sigma_s_db = 0).
    Unshadowed,
    /// Quadrature over interferers, Monte-Carlo over source shadowing.
    Shadowed,
    /// Direct simulation.
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResampleArg {
    /// Network frozen from the seed; fading and collisions vary.
    Link,
    /// Positions and shadowing redrawn every trial as well.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollisionArg {
    Marginal,
    Explicit,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutageArgs {
    /// Number of frequency channels.
    #[arg(long = "L")]
    pub channels: f64,
    /// Code rate.
    #[arg(long = "R")]
    pub rate: f64,
    /// Modulation index.
    #[arg(long)]
    pub h: f64,
    /// Fractional in-band power.
    #[arg(long)]
    pub psi: f64,
    /// SINR threshold in dB; taken from the rate table at (R, h) when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub beta_db: Option<f64>,
    /// Defaults to unshadowed or shadowed according to the configuration.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Monte-Carlo trials for `--method mc`.
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Source-shadowing draws for `--method shadowed`.
    #[arg(long, default_value_t = 10_000)]
    pub draws: u64,
    #[arg(long, value_enum, default_value = "link")]
    pub resample: ResampleArg,
    #[arg(long, value_enum, default_value = "marginal")]
    pub collisions: CollisionArg,
}

#[derive(Serialize)]
struct Report {
    method: Method,
    value: f64,
    std_err: f64,
    trials: u64,
    beta: f64,
    beta_db: f64,
    waveform: WaveformParams,
}

pub fn run(common: &Common, args: &OutageArgs) -> anyhow::Result<()> {
    let cfg = load_config(common)?;
    let wf = WaveformParams::new(args.channels, args.rate, args.h, args.psi)?;
    let mut run = Run::start(&common.out, "outage", common.config.as_deref(), common.seed)?;
    let beta = match args.beta_db {
        Some(db) => db_to_linear(db),
        None => {
            let (table, path) = load_table(common)?;
            run.set_table(&path);
            sinr_threshold(wf.rate, wf.h, &table)?
        }
    };
    let method = args.method.unwrap_or(if cfg.sigma_s_db == 0.0 {
        Method::Unshadowed
    } else {
        Method::Shadowed
    });
    let spec = RngSpec::new(common.seed);
    let (value, std_err, trials) = match method {
        Method::Conditional => {
            let ctx = ConditionalContext {
                omegas: frozen_powers(&cfg, &spec)?,
                beta,
                collision: CollisionModel::new(wf.channels, cfg.duty_factor, wf.psi)?,
                psi: wf.psi,
                m0: cfg.m0 as f64,
                m_i: (0..cfg.num_interferers).map(|i| cfg.nakagami(i)).collect(),
                snr_linear: cfg.snr_linear(),
            };
            (conditional_outage(&ctx)?.value, 0.0, 0)
        }
        Method::Unshadowed => (avg_outage_unshadowed(&cfg, &wf, beta)?.value, 0.0, 0),
        Method::Shadowed => {
            let opts = ShadowedOptions {
                mc_draws: args.draws,
                seed: common.seed,
                ..Default::default()
            };
            let r = avg_outage_shadowed(&cfg, &wf, beta, &opts)?;
            (r.value, r.mc_std_err, r.trials)
        }
        Method::Mc => {
            let resample = match args.resample {
                ResampleArg::Link => Resample::LINK,
                ResampleArg::All => Resample::ALL,
            };
            let draw = match args.collisions {
                CollisionArg::Marginal => CollisionDraw::Marginal,
                CollisionArg::Explicit => CollisionDraw::ExplicitChannels,
            };
            let r = simulate_network_outage_with(&cfg, &wf, beta, args.trials, &spec, resample, draw)?;
            (r.epsilon_hat, r.std_err, r.trials)
        }
    };
    run.set_parameters(serde_json::json!({ "config": cfg, "args": args, "method": method }))?;
    let out = run.json(
        "outage.json",
        Report {
            method,
            value,
            std_err,
            trials,
            beta,
            beta_db: linear_to_db(beta),
            waveform: wf,
        },
    )?;
    run.finish()?;
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}
