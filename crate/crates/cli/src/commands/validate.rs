use clap::{Args, ValueEnum};
use fhaci_core::channel::{CollisionModel, SystemConfig, WaveformParams};
use fhaci_core::cpfsk::fractional_power_bandwidth;
use fhaci_core::numerics::{gauss_2f1, simpson, QuadratureSpec};
use fhaci_core::outage::{
    avg_outage_shadowed, avg_outage_shadowed_with, avg_outage_unshadowed, avg_outage_unshadowed_with,
    conditional_outage, nakagami_ccdf, ConditionalContext, ShadowedOptions,
};
use fhaci_core::simkit::{frozen_powers, simulate_network_outage, Resample, RngSpec};
use serde::Serialize;

use super::{load_config, Failure};
use crate::manifest::Run;
use crate::Common;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Special-function identities, quadrature and bandwidth anchors.
    Numerics,
    /// Analytic outage against simulation.
    Oracle,
    /// Collision model at ψ = 1 against the model without adjacent channels.
    Specialization,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ValidateArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "numerics,specialization,oracle")]
    pub suite: Vec<Suite>,
    /// Simulation trials per oracle comparison.
    #[arg(long, default_value_t = 200_000)]
    pub trials: u64,
}

#[derive(Debug, Serialize)]
struct Check {
    suite: Suite,
    name: String,
    value: f64,
    reference: f64,
    tolerance: f64,
    pass: bool,
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, suite: Suite, name: impl Into<String>, value: f64, reference: f64, tolerance: f64) {
        let pass = (value - reference).abs() <= tolerance;
        self.0.push(Check {
            suite,
            name: name.into(),
            value,
            reference,
            tolerance,
            pass,
        });
    }

    fn relative(&mut self, suite: Suite, name: impl Into<String>, value: f64, reference: f64, rel: f64) {
        self.push(suite, name, value, reference, rel * reference.abs());
    }
}

fn numerics(c: &mut Checks) -> anyhow::Result<()> {
    let s = Suite::Numerics;
    // one point in each evaluation regime of the series
    for z in [-0.3, -2.0, -20.0, -500.0] {
        let (a, b) = (1.7, 0.8);
        c.relative(s, format!("2F1(a,b;b;{z}) = (1-z)^-a"), gauss_2f1(a, b, b, z)?, (1.0 - z).powf(-a), 1e-12);
        c.relative(s, format!("2F1(1,1;2;{z}) = -ln(1-z)/z"), gauss_2f1(1.0, 1.0, 2.0, z)?, -(1.0 - z).ln() / z, 1e-10);
    }
    let spec = QuadratureSpec {
        rel_tol: 1e-12,
        ..Default::default()
    };
    c.relative(s, "integral of sin over [0, pi]", simpson(f64::sin, 0.0, std::f64::consts::PI, &spec)?, 2.0, 1e-10);
    let x: f64 = 1.2;
    c.relative(
        s,
        "Gamma(3) complementary cdf",
        nakagami_ccdf(4.0, 0.3, &[1.0, 0.0, 0.0]),
        (-x).exp() * (1.0 + x + x * x / 2.0),
        1e-14,
    );
    c.push(s, "99% bandwidth at h = 0.5", fractional_power_bandwidth(0.5, 0.99)?, 1.1818, 1e-3);
    Ok(())
}

fn specialization(cfg: &SystemConfig, c: &mut Checks) -> anyhow::Result<()> {
    let s = Suite::Specialization;
    let unshadowed = SystemConfig {
        sigma_s_db: 0.0,
        ..cfg.clone()
    };
    let shadowed = SystemConfig {
        sigma_s_db: if cfg.sigma_s_db > 0.0 { cfg.sigma_s_db } else { 8.0 },
        ..cfg.clone()
    };
    let opts = ShadowedOptions {
        mc_draws: 2000,
        ..Default::default()
    };
    for l in [1.0, 2.0, 10.0, 38.0, 200.0] {
        let with = CollisionModel::new(l, cfg.duty_factor, 1.0)?;
        let without = with.without_adjacent();
        let ctx = |collision| ConditionalContext {
            omegas: vec![1.0, 0.8, 2.5, 0.1],
            beta: 2.0,
            collision,
            psi: 1.0,
            m0: cfg.m0 as f64,
            m_i: vec![1.0, 2.0, 1.5],
            snr_linear: cfg.snr_linear(),
        };
        let a = conditional_outage(&ctx(with))?.value;
        let b = conditional_outage(&ctx(without))?.value;
        c.relative(s, format!("conditional, L = {l}"), a, b, 1e-12);
        let a = avg_outage_unshadowed_with(&unshadowed, 1.0, 2.0, &with)?.value;
        let b = avg_outage_unshadowed_with(&unshadowed, 1.0, 2.0, &without)?.value;
        c.relative(s, format!("unshadowed, L = {l}"), a, b, 1e-12);
        let a = avg_outage_shadowed_with(&shadowed, 1.0, 2.0, &with, &opts)?.value;
        let b = avg_outage_shadowed_with(&shadowed, 1.0, 2.0, &without, &opts)?.value;
        c.relative(s, format!("shadowed, L = {l}"), a, b, 1e-12);
    }
    Ok(())
}

fn oracle(cfg: &SystemConfig, trials: u64, seed: u64, c: &mut Checks) -> anyhow::Result<()> {
    let s = Suite::Oracle;
    let wf = WaveformParams::new(38.0, 0.64, 0.81, 0.96)?;
    let beta = 3.0;
    let spec = RngSpec::new(seed);

    let ctx = ConditionalContext {
        omegas: frozen_powers(cfg, &spec)?,
        beta,
        collision: CollisionModel::new(wf.channels, cfg.duty_factor, wf.psi)?,
        psi: wf.psi,
        m0: cfg.m0 as f64,
        m_i: (0..cfg.num_interferers).map(|i| cfg.nakagami(i)).collect(),
        snr_linear: cfg.snr_linear(),
    };
    let exact = conditional_outage(&ctx)?.value;
    let sim = simulate_network_outage(cfg, &wf, beta, trials, &spec, Resample::LINK)?;
    c.push(s, "conditional vs fixed-network simulation (3 sigma)", sim.epsilon_hat, exact, 3.0 * sim.std_err);

    let unshadowed = SystemConfig {
        sigma_s_db: 0.0,
        ..cfg.clone()
    };
    let exact = avg_outage_unshadowed(&unshadowed, &wf, beta)?.value;
    let sim = simulate_network_outage(&unshadowed, &wf, beta, trials, &spec, Resample::ALL)?;
    c.push(s, "unshadowed average vs simulation (3 sigma)", sim.epsilon_hat, exact, 3.0 * sim.std_err);

    if cfg.sigma_s_db > 0.0 {
        let opts = ShadowedOptions {
            seed,
            ..Default::default()
        };
        let hybrid = avg_outage_shadowed(cfg, &wf, beta, &opts)?;
        let sim = simulate_network_outage(cfg, &wf, beta, trials, &spec, Resample::ALL)?;
        let tol = (3.0 * hybrid.mc_std_err.hypot(sim.std_err)).max(0.01);
        c.push(s, "shadowed hybrid vs simulation", sim.epsilon_hat, hybrid.value, tol);
    }
    Ok(())
}

pub fn run(common: &Common, args: &ValidateArgs) -> anyhow::Result<()> {
    let cfg = load_config(common)?;
    let mut run = Run::start(&common.out, "validate", common.config.as_deref(), common.seed)?;
    run.set_parameters(serde_json::json!({ "config": cfg, "args": args }))?;
    let mut checks = Checks(Vec::new());
    for suite in &args.suite {
        match suite {
            Suite::Numerics => numerics(&mut checks)?,
            Suite::Specialization => specialization(&cfg, &mut checks)?,
            Suite::Oracle => oracle(&cfg, args.trials, common.seed, &mut checks)?,
        }
    }
    for ch in &checks.0 {
        println!(
            "{} {:?}: {} (value {:.10e}, reference {:.10e}, tolerance {:.1e})",
            if ch.pass { "PASS" } else { "FAIL" },
            ch.suite,
            ch.name,
            ch.value,
            ch.reference,
            ch.tolerance
        );
    }
    let failed = checks.0.iter().filter(|c| !c.pass).count();
    run.json(
        "validate.json",
        serde_json::json!({ "checks": checks.0, "failed": failed }),
    )?;
    run.finish()?;
    if failed > 0 {
        return Err(Failure::Numeric(format!("{failed} of {} checks failed", checks.0.len())).into());
    }
    Ok(())
}
