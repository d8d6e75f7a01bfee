//! `robin-bound`: command-line front end for the Robin/Steklov bound checks.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use robin_core::bounds::{self, sig12, BoundReport};
use robin_core::diskmodes::{disk_lambda1, disk_lambda2};
use robin_core::domains::{default_gallery, load_gallery, DomainSpec};
use robin_core::femrobin::build_disk_mesh;
use robin_core::trial::{self, TrialContext};
use robin_core::WeightedRobinProblem;

#[derive(Parser)]
#[command(name = "robin-bound", version, about = "Third Robin eigenvalue and Steklov bounds for planar domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form λ₁, λ₂ of the unit disk with Robin parameter ALPHA (optionally FEM too).
    DiskSpectrum {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_real)]
        alpha: f64,
        #[arg(long)]
        fem: bool,
        #[arg(long, default_value_t = 30)]
        rings: usize,
    },
    /// λ₃(Ω; α/L)·A against 2π·λ₂(𝔻; α/4π) over a gallery.
    VerifyMain {
        /// JSON gallery; the built-in gallery when omitted.
        #[arg(long)]
        gallery: Option<PathBuf>,
        /// Comma-separated values in [-4pi, 0]; `pi` suffixes are accepted.
        #[arg(long, allow_hyphen_values = true, default_value = "-4pi,-2pi,-pi,0")]
        alpha: String,
        #[arg(long, default_value_t = 16)]
        rings: usize,
        /// CSV output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// σ₂(Ω)·L(Ω) for every gallery domain.
    Steklov {
        #[arg(long)]
        gallery: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        rings: usize,
    },
    /// Lower bounds for the pulled-apart double disk, j = 3.
    Saturation {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_real, default_value = "-2pi")]
        alpha: f64,
        #[arg(long, default_value = "0.4,0.2,0.1,0.05")]
        eps: String,
        #[arg(long, default_value_t = 30)]
        rings: usize,
    },
    /// Hersch point, orthogonal cap and trial quotient for one domain.
    Hersch {
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_real)]
        alpha: f64,
        #[arg(long)]
        gallery: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        rings: usize,
        /// Write Φ on a 64×33 grid of caps to this CSV file.
        #[arg(long)]
        dump_phi: Option<PathBuf>,
    },
}

/// A real number, optionally with a `pi` factor: `-4pi`, `-2*pi`, `pi`, `0.5`.
fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    let (num, factor) = match t.strip_suffix("pi") {
        Some(rest) => (rest.trim_end_matches('*'), PI),
        None => (t, 1.0),
    };
    let value = match num {
        "" | "+" => 1.0,
        "-" => -1.0,
        n => n.parse::<f64>().map_err(|e| format!("invalid number {s:?}: {e}"))?,
    };
    Ok(value * factor)
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| parse_real(x).map_err(|e| anyhow!(e)))
        .collect()
}

fn gallery(path: Option<&Path>) -> Result<Vec<DomainSpec>> {
    let Some(path) = path else {
        return Ok(default_gallery());
    };
    let (domains, rejected) = load_gallery(path)?;
    for r in &rejected {
        eprintln!("rejected {}: {}", r.name, r.reason);
    }
    if domains.is_empty() {
        bail!("no valid domains in {}", path.display());
    }
    Ok(domains)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn disk_spectrum(alpha: f64, fem: bool, rings: usize) -> Result<ExitCode> {
    let l1 = disk_lambda1(alpha)?;
    let l2 = disk_lambda2(alpha)?;
    println!("alpha,lambda1,lambda2,source");
    println!("{},{},{},closed-form", sig12(alpha), sig12(l1), sig12(l2));
    if fem {
        let mesh = build_disk_mesh(rings)?;
        let s = WeightedRobinProblem::constant(alpha).solve(&mesh, 2)?;
        println!(
            "{},{},{},fem-{rings}",
            sig12(alpha),
            sig12(s.eigenvalues[0]),
            sig12(s.eigenvalues[1])
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_main(gallery_path: Option<&Path>, alpha: &str, rings: usize, out: Option<&Path>) -> Result<ExitCode> {
    let domains = gallery(gallery_path)?;
    let alphas = parse_list(alpha)?;
    let reports = bounds::sweep_main(&domains, &alphas, rings)?;
    let mut w = output(out)?;
    bounds::write_reports_csv(&mut w, &reports)?;
    w.flush()?;
    let bad: Vec<&BoundReport> = reports.iter().filter(|r| r.margin <= 0.0).collect();
    for r in &bad {
        eprintln!("nonpositive margin: {} alpha={} margin={}", r.name, r.alpha, r.margin);
    }
    Ok(if bad.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn steklov(gallery_path: Option<&Path>, rings: usize) -> Result<ExitCode> {
    let domains = gallery(gallery_path)?;
    let mut rows = Vec::with_capacity(domains.len());
    for d in &domains {
        let s = bounds::steklov_sigma2(d, rings)?;
        rows.push((d.name().to_string(), s, d.perimeter()));
    }
    println!("name,rings,sigma2,perimeter,sigma2_l");
    let mut exceeded = false;
    for (name, s, l) in &rows {
        println!("{name},{rings},{},{},{}", sig12(*s), sig12(*l), sig12(s * l));
        exceeded |= s * l >= 4.0 * PI;
    }
    Ok(if exceeded { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn saturation(alpha: f64, eps: &str, rings: usize) -> Result<ExitCode> {
    let eps = parse_list(eps)?;
    let rows = bounds::saturation_table(alpha, &eps, rings)?;
    let target = 2.0 * PI * disk_lambda2(alpha / (4.0 * PI))?;
    println!("eps,perimeter,area,lower,lower_4pi,limit,gap,lower_times_area,target");
    for r in &rows {
        println!(
            "{},{},{},{},{},{},{},{},{}",
            sig12(r.eps),
            sig12(r.perimeter),
            sig12(r.area),
            sig12(r.lower),
            sig12(r.lower_4pi),
            sig12(r.limit),
            sig12(r.gap),
            sig12(r.normalized()),
            sig12(target)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn hersch(name: &str, alpha: f64, gallery_path: Option<&Path>, rings: usize, dump: Option<&Path>) -> Result<ExitCode> {
    let domain = gallery(gallery_path)?
        .into_iter()
        .find(|d| d.name() == name)
        .ok_or_else(|| anyhow!("no domain named {name:?}"))?;
    let mesh = build_disk_mesh(rings)?;
    let ctx = TrialContext::new(&domain, &mesh, alpha)?;
    println!("domain: {name}");
    println!("alpha: {}", sig12(alpha));
    println!("rings: {rings}");
    println!("lambda3: {}", sig12(ctx.eigenvalues[2]));
    println!("w0: {} {}", sig12(ctx.w0.re), sig12(ctx.w0.im));
    println!("zeta: {} {}", sig12(ctx.zeta.re), sig12(ctx.zeta.im));
    let (quotient, sol) = trial::trial_quotient(&ctx)?;
    match sol {
        None => println!("case: 1"),
        Some(s) => {
            println!("case: 2");
            println!("cap: p_angle={} t={}", sig12(s.cap.p_angle()), sig12(s.cap.t()));
            println!("w: {} {}", sig12(s.w.re), sig12(s.w.im));
            println!("phi_residual: {}", sig12(s.phi.norm()));
        }
    }
    println!("trial_quotient: {}", sig12(quotient));
    if let Some(path) = dump {
        let sizes: Vec<f64> = (0..33).map(|k| 0.95 - 1.9 * k as f64 / 32.0).collect();
        let grid = trial::phi_grid(&ctx, 64, &sizes)?;
        let mut w = output(Some(path))?;
        trial::write_phi_csv(&mut w, &grid)?;
        w.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::DiskSpectrum { alpha, fem, rings } => disk_spectrum(alpha, fem, rings),
        Command::VerifyMain {
            gallery,
            alpha,
            rings,
            out,
        } => verify_main(gallery.as_deref(), &alpha, rings, out.as_deref()),
        Command::Steklov { gallery, rings } => steklov(gallery.as_deref(), rings),
        Command::Saturation { alpha, eps, rings } => saturation(alpha, &eps, rings),
        Command::Hersch {
            domain,
            alpha,
            gallery,
            rings,
            dump_phi,
        } => hersch(&domain, alpha, gallery.as_deref(), rings, dump_phi.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
