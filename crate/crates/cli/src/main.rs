//! `lawson`: certificates, spectra, variation sweeps and constant tables for the
//! exceptional Lawson cones.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use lawson_core::certification::{certify_pointwise, CertStatus};
use lawson_core::constants::default_epsilons;
use lawson_core::montecarlo::DEFAULT_SEED;
use lawson_core::report::{constants_report, spectrum_run, variation_sweep, SCALING_TOL};
use lawson_core::variation::{QuadSpec, DEFAULT_AMPLITUDES};
use lawson_core::ConeParams;

const MC_SAMPLES: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "lawson", version, about = "Sub-calibration certificates and stability checks for Lawson cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Cone pair `k,h` (repeatable) or `all-S` for the twelve certified orderings.
    #[arg(long, global = true, default_value = "all-S")]
    cones: Vec<String>,

    /// Angular boxes for the interval sweep (power of two, at least 16).
    #[arg(long, global = true, default_value_t = 16384)]
    subdivisions: usize,

    /// Spectrum grid size; also the panel count of variation quadratures.
    #[arg(long, global = true, default_value_t = 4096)]
    grid: usize,

    /// Window radius.
    #[arg(long = "R", global = true, default_value_t = 1.0)]
    r: f64,

    /// Comma-separated slab widths, relative to R.
    #[arg(long, global = true, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,

    /// Comma-separated normal-graph amplitudes.
    #[arg(long, global = true, value_delimiter = ',')]
    amplitudes: Option<Vec<f64>>,

    /// Seed for Monte Carlo cross-checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Output directory.
    #[arg(long, global = true, default_value = "lawson-out")]
    out: PathBuf,

    /// Format of the summary printed to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Interval certificates of the pointwise divergence bound.
    Certify,
    /// Radial stability eigenvalue and its scaling.
    Spectrum,
    /// Normal-graph competitors: perimeter identity, second variation, stability inequality.
    Variations,
    /// Slab bounds, per-cone coefficients and the final constant.
    Constants,
    /// All of the above.
    All,
}

struct Config {
    cones: Vec<ConeParams>,
    subdivisions: usize,
    grid: usize,
    r: f64,
    epsilons: Vec<f64>,
    amplitudes: Vec<f64>,
    seed: u64,
    out: PathBuf,
    format: Format,
}

fn parse_cone(s: &str) -> Result<ConeParams> {
    let (k, h) = s.split_once(',').with_context(|| format!("cone `{s}` is not of the form k,h"))?;
    let k: usize = k.trim().parse().with_context(|| format!("bad k in `{s}`"))?;
    let h: usize = h.trim().parse().with_context(|| format!("bad h in `{s}`"))?;
    Ok(ConeParams::certified(k, h)?)
}

fn config(cli: &Cli) -> Result<Config> {
    let mut cones = Vec::new();
    for spec in &cli.cones {
        if spec.eq_ignore_ascii_case("all-S") {
            cones.extend(ConeParams::all_certified());
        } else {
            cones.push(parse_cone(spec)?);
        }
    }
    cones.dedup();
    if !(cli.r > 0.0 && cli.r.is_finite()) {
        bail!("--R must be positive, got {}", cli.r);
    }
    let epsilons = cli.epsilons.clone().unwrap_or_else(default_epsilons);
    if epsilons.iter().any(|e| !(*e > 0.0)) {
        bail!("--epsilons must be positive");
    }
    let amplitudes = cli.amplitudes.clone().unwrap_or_else(|| DEFAULT_AMPLITUDES.to_vec());
    if amplitudes.iter().any(|a| !a.is_finite()) {
        bail!("--amplitudes must be finite");
    }
    Ok(Config {
        cones,
        subdivisions: cli.subdivisions,
        grid: cli.grid,
        r: cli.r,
        epsilons: epsilons.iter().map(|e| e * cli.r).collect(),
        amplitudes,
        seed: cli.seed,
        out: cli.out.clone(),
        format: cli.format,
    })
}

fn write(dir: &Path, name: &str, body: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
}

/// One summary line per item; `ok` is the pass flag.
struct Summary {
    format: Format,
    lines: Vec<(String, bool, String)>,
}

impl Summary {
    fn new(format: Format) -> Self {
        Summary { format, lines: Vec::new() }
    }

    fn push(&mut self, item: String, ok: bool, detail: String) {
        self.lines.push((item, ok, detail));
    }

    fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.1)
    }

    fn print(&self) {
        if self.format == Format::Csv {
            println!("item,status,detail");
        }
        for (item, ok, detail) in &self.lines {
            let status = if *ok { "PASS" } else { "FAIL" };
            match self.format {
                Format::Text => println!("{status} {item} {detail}"),
                Format::Csv => println!("{item},{status},\"{}\"", detail.replace('"', "\"\"")),
            }
        }
    }
}

fn tag(cone: &ConeParams) -> String {
    format!("{}-{}", cone.k(), cone.h())
}

fn cmd_certify(cfg: &Config, s: &mut Summary) -> Result<()> {
    for cone in &cfg.cones {
        let cert = certify_pointwise(*cone, cfg.subdivisions)?;
        let name = format!("certificate-{}.txt", tag(cone));
        write(&cfg.out, &name, &cert.to_text())?;
        let detail = format!("claimed_c={} margin={:e} boxes={}", cert.claimed_c, cert.margin, cert.boxes);
        s.push(name, cert.status == CertStatus::Pass, detail);
    }
    Ok(())
}

fn cmd_spectrum(cfg: &Config, s: &mut Summary) -> Result<()> {
    for cone in &cfg.cones {
        let run = spectrum_run(*cone, cfg.r, cfg.grid)?;
        let name = format!("spectrum-{}.txt", tag(cone));
        write(&cfg.out, &name, &run.to_text())?;
        let ok = run.bound_ok() && run.margin_ok() && run.hardy_ok() && run.scaling_rel_dev() <= SCALING_TOL;
        let detail = format!(
            "lambda_r2={:e} hardy_floor={:e} margin_factor={:e}",
            run.report.lambda_r2,
            run.report.hardy_floor,
            run.report.margin_factor.unwrap_or(f64::NAN)
        );
        s.push(name, ok, detail);
    }
    Ok(())
}

fn cmd_variations(cfg: &Config, s: &mut Summary) -> Result<()> {
    let quad = QuadSpec { panels: cfg.grid, ..QuadSpec::default() };
    for cone in &cfg.cones {
        let sweep = variation_sweep(*cone, cfg.r, &cfg.amplitudes, &cfg.epsilons, quad)?;
        let name = format!("variations-{}.csv", tag(cone));
        write(&cfg.out, &name, &sweep.to_csv()?)?;
        let violations = sweep.violations();
        for v in &violations {
            eprintln!("violation: {v}");
        }
        let vol_slopes: Vec<String> = sweep.taylor.iter().map(|(_, t)| format!("{:.3}", t.volume_slope)).collect();
        let detail = format!("rows={} violations={} dist_volume_slopes={}", sweep.rows.len(), violations.len(), vol_slopes.join("/"));
        s.push(name, violations.is_empty(), detail);
    }
    Ok(())
}

fn cmd_constants(cfg: &Config, s: &mut Summary) -> Result<()> {
    let rep = constants_report(&cfg.cones, cfg.r, &cfg.epsilons, MC_SAMPLES, cfg.seed)?;
    write(&cfg.out, "constants.csv", &rep.slab_csv()?)?;
    write(&cfg.out, "constants.txt", &rep.trace_text())?;
    let failed = rep.slab.iter().filter(|r| !r.holds()).count();
    for co in &rep.coefficients {
        if !(co.perimeter_within_display && co.slab_eps_within_display && co.slab_r_within_display) {
            eprintln!("note: coefficient of cone {} exceeds an intermediate display value", co.cone);
        }
    }
    s.push("constants.csv".into(), rep.passes(), format!("slab_rows={} failed={failed} C=7^2*12^2*10^20", rep.slab.len()));
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = config(&cli)?;
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let mut s = Summary::new(cfg.format);
    match cli.command {
        Command::Certify => cmd_certify(&cfg, &mut s)?,
        Command::Spectrum => cmd_spectrum(&cfg, &mut s)?,
        Command::Variations => cmd_variations(&cfg, &mut s)?,
        Command::Constants => cmd_constants(&cfg, &mut s)?,
        Command::All => {
            cmd_certify(&cfg, &mut s)?;
            cmd_spectrum(&cfg, &mut s)?;
            cmd_variations(&cfg, &mut s)?;
            cmd_constants(&cfg, &mut s)?;
        }
    }
    s.print();
    Ok(s.passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
