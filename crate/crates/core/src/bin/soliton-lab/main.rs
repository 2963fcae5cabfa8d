//! `soliton-lab`: builds steady Ricci solitons, verifies identities on them and
//! runs the curvature probes.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage, validation, input
//! or output error, 3 numerical failure.

mod config;

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use soliton_lab::bryant::{solve_bryant_with, RadialProfile, SolveOptions};
use soliton_lab::exact::FlatPotential;
use soliton_lab::identity::{verify_frames, Verification};
use soliton_lab::io::{
    fmt_num, model_rows, profile_rows, read_profile_csv, svg_plot, write_atomic, write_csv,
    write_profile_csv, Json, ProfileRow, Series,
};
use soliton_lab::model::{Cigar, FlatSoliton, SolitonModel};
use soliton_lab::numerics::log_grid;
use soliton_lab::probe::{
    decay_classifier, flux_series, pinching_profile, reconstruct_psi, sigma_constant,
    FluxIntegrand, Margin,
};

use config::{CommonArgs, Format, RunConfig};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A rejected command line or input file; exits with code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(
    name = "soliton-lab",
    version,
    about = "Steady gradient Ricci solitons: construction, identities, probes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the n-dimensional Bryant soliton (n >= 3).
    Bryant {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Tabulate Hamilton's cigar, optionally times a flat factor.
    Cigar {
        /// Dimension of the flat factor; defaults to `--dim - 2`, else 0.
        #[arg(long)]
        k_extra: Option<usize>,
        /// Scale to `R + |∇f|² = 1` instead of 4.
        #[arg(long)]
        normalized: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Tabulate a flat steady soliton.
    Flat {
        #[arg(long, value_enum)]
        potential: PotentialArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Check the soliton identities on a profile CSV.
    Verify {
        path: PathBuf,
        /// First-integral constant; read from the sidecar metadata when omitted, else 1.
        #[arg(long)]
        c0: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Curvature probes.
    Probe {
        #[command(subcommand)]
        probe: ProbeCommand,
    },
}

#[derive(Subcommand)]
enum ProbeCommand {
    /// The pinching constant σ(n).
    Sigma {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Pinching margins along the radial direction.
    Pinch {
        #[arg(long, value_enum, default_value_t = Source::Bryant)]
        source: Source,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Fluxes through geodesic spheres with decay fits.
    Flux {
        #[arg(long, value_enum, default_value_t = Source::Bryant)]
        source: Source,
        /// gradR_plus_RgradF, gradR_plus_2RgradF or one_minus_R_weighted.
        #[arg(long, default_value = "gradR_plus_RgradF")]
        integrand: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reconstruct ψ with ∇R = -ψ(R)∇f on the Bryant soliton.
    Psi {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Classify the decay of |Rm| (Bryant) or R (cigar).
    Decay {
        #[arg(long, value_enum, default_value_t = Source::Bryant)]
        source: Source,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PotentialArg {
    Constant,
    Linear,
}

impl From<PotentialArg> for FlatPotential {
    fn from(p: PotentialArg) -> Self {
        match p {
            PotentialArg::Constant => FlatPotential::Constant,
            PotentialArg::Linear => FlatPotential::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Source {
    Bryant,
    /// `R + |∇f|² = 4`
    Cigar,
    /// `R + |∇f|² = 1`
    CigarNormalized,
    FlatConstant,
    FlatLinear,
}

impl Source {
    fn tag(self) -> &'static str {
        match self {
            Source::Bryant => "bryant",
            Source::Cigar => "cigar",
            Source::CigarNormalized => "cigar_normalized",
            Source::FlatConstant => "flat_constant",
            Source::FlatLinear => "flat_linear",
        }
    }
}

/// Exit code for an error: 2 for rejected input, 3 for numerical failure.
fn exit_code(err: &anyhow::Error) -> u8 {
    use soliton_lab::Error as E;
    for cause in err.chain() {
        if cause.downcast_ref::<UsageError>().is_some()
            || cause.downcast_ref::<std::io::Error>().is_some()
        {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e.root() {
                E::Dimension { .. } | E::InvalidParameter(_) | E::Parse(_) | E::Range { .. } => 2,
                _ => 3,
            };
        }
    }
    3
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Returns `Ok(false)` on a verification failure.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Bryant { common } => {
            cmd_bryant(&common.resolve(&[Format::Csv, Format::Json])?).map(|_| true)
        }
        Command::Cigar {
            k_extra,
            normalized,
            common,
        } => cmd_cigar(
            &common.resolve(&[Format::Csv, Format::Json])?,
            k_extra,
            normalized,
        )
        .map(|_| true),
        Command::Flat { potential, common } => cmd_flat(
            &common.resolve(&[Format::Csv, Format::Json])?,
            potential.into(),
        )
        .map(|_| true),
        Command::Verify { path, c0, common } => {
            cmd_verify(&common.resolve(&[Format::Json])?, &path, c0)
        }
        Command::Probe { probe } => {
            let defaults = [Format::Csv, Format::Json];
            match probe {
                ProbeCommand::Sigma { common } => cmd_sigma(&common.resolve(&[Format::Json])?),
                ProbeCommand::Pinch { source, common } => {
                    cmd_pinch(&common.resolve(&defaults)?, source)
                }
                ProbeCommand::Flux {
                    source,
                    integrand,
                    common,
                } => {
                    let integrand: FluxIntegrand =
                        integrand.parse().map_err(|e| UsageError(format!("{e}")))?;
                    cmd_flux(&common.resolve(&defaults)?, source, integrand)
                }
                ProbeCommand::Psi { common } => cmd_psi(&common.resolve(&defaults)?),
                ProbeCommand::Decay { source, common } => {
                    cmd_decay(&common.resolve(&defaults)?, source)
                }
            }
            .map(|_| true)
        }
    }
}

fn write_out(cfg: &RunConfig, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    std::fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let path = cfg.out.join(name);
    write_atomic(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows)?;
    Ok(buf)
}

fn json_bytes(j: &Json) -> Vec<u8> {
    let mut s = j.render();
    s.push('\n');
    s.into_bytes()
}

fn write_profile_outputs(
    cfg: &RunConfig,
    stem: &str,
    rows: &[ProfileRow],
    meta: &Json,
) -> Result<()> {
    if cfg.wants(Format::Csv) {
        let mut buf = Vec::new();
        write_profile_csv(&mut buf, rows)?;
        write_out(cfg, &format!("{stem}.csv"), &buf)?;
    }
    if cfg.wants(Format::Json) {
        write_out(cfg, &format!("{stem}.json"), &json_bytes(meta))?;
    }
    if cfg.wants(Format::Svg) {
        let col = |f: fn(&ProfileRow) -> f64| rows.iter().map(|r| (r.r, f(r))).collect::<Vec<_>>();
        let series = [
            Series {
                name: "R".into(),
                points: col(|r| r.scal),
            },
            Series {
                name: "|∇f|".into(),
                points: col(|r| r.fp.abs()),
            },
            Series {
                name: "|Rm|".into(),
                points: col(|r| r.rm_norm),
            },
        ];
        write_out(
            cfg,
            &format!("{stem}.svg"),
            svg_plot(stem, "r", "value", &series).as_bytes(),
        )?;
    }
    Ok(())
}

fn solve(cfg: &RunConfig) -> Result<RadialProfile> {
    if cfg.dim < 3 {
        return Err(UsageError(format!(
            "the Bryant soliton needs --dim >= 3, got {}; the 2-dimensional steady soliton is the cigar (`soliton-lab cigar`)",
            cfg.dim
        ))
        .into());
    }
    let opts = SolveOptions {
        switch_radius: cfg.switch_radius,
        ..SolveOptions::default()
    };
    Ok(solve_bryant_with(cfg.dim, cfg.r_max, cfg.tol, &opts)?)
}

fn cmd_bryant(cfg: &RunConfig) -> Result<()> {
    let profile = solve(cfg)?;
    let stats = profile.stats();
    let meta = Json::obj([
        ("n", Json::Int(cfg.dim as i64)),
        ("source", Json::str("bryant")),
        ("c0", Json::Num(profile.c0())),
        ("c0_drift", Json::Num(stats.conservation_drift)),
        ("r_max", Json::Num(profile.r_max())),
        ("tol", Json::Num(profile.tol())),
        ("switch_radius", Json::Num(profile.switch_radius())),
        ("grid_points", Json::Int(profile.grid().len() as i64)),
        ("accepted_steps", Json::Int(stats.accepted_steps as i64)),
        ("rejected_steps", Json::Int(stats.rejected_steps as i64)),
        ("version", Json::str(VERSION)),
    ]);
    write_profile_outputs(
        cfg,
        &format!("bryant_n{}", cfg.dim),
        &profile_rows(&profile)?,
        &meta,
    )?;
    println!(
        "bryant n={}: {} grid points on [0, {}], first-integral drift {:.3e}",
        cfg.dim,
        profile.grid().len(),
        profile.r_max(),
        stats.conservation_drift
    );
    Ok(())
}

/// `0` followed by `samples` log-spaced radii up to `r_max`.
fn table_radii(cfg: &RunConfig) -> Result<Vec<f64>> {
    let lo = (cfg.r_max * 1e-5).min(1e-3);
    let mut radii = vec![0.0];
    radii.extend(log_grid(lo, cfg.r_max, cfg.samples)?);
    Ok(radii)
}

fn cmd_cigar(cfg: &RunConfig, k_extra: Option<usize>, normalized: bool) -> Result<()> {
    let k = match (k_extra, cfg.dim_given) {
        (Some(k), true) if k + 2 != cfg.dim => {
            return Err(
                UsageError(format!("--k-extra {k} conflicts with --dim {}", cfg.dim)).into(),
            )
        }
        (Some(k), _) => k,
        (None, true) if cfg.dim < 2 => {
            return Err(UsageError(format!("cigar needs --dim >= 2, got {}", cfg.dim)).into())
        }
        (None, true) => cfg.dim - 2,
        (None, false) => 0,
    };
    let base = if normalized {
        Cigar::normalized()
    } else {
        Cigar::standard()
    };
    let model = base.with_flat_factor(k);
    let rows = model_rows(&model, &table_radii(cfg)?, |_| None)?;
    let stem = format!("cigar_k{k}{}", if normalized { "_normalized" } else { "" });
    let meta = Json::obj([
        ("n", Json::Int(model.dim() as i64)),
        ("source", Json::str("cigar")),
        ("c0", Json::Num(model.c0())),
        ("k_extra", Json::Int(k as i64)),
        ("scale", Json::Num(model.scale)),
        ("r", Json::str("geodesic distance from the tip")),
        ("r_max", Json::Num(cfg.r_max)),
        ("version", Json::str(VERSION)),
    ]);
    write_profile_outputs(cfg, &stem, &rows, &meta)?;
    println!(
        "cigar x R^{k}: {} rows, R + |∇f|^2 = {}",
        rows.len(),
        model.c0()
    );
    Ok(())
}

/// `(w, w')` of a closed-form model written as a warped product.
type WarpedFn = fn(f64) -> Option<(f64, f64)>;

fn cmd_flat(cfg: &RunConfig, potential: FlatPotential) -> Result<()> {
    let model = FlatSoliton {
        n: cfg.dim,
        potential,
    };
    let (tag, warped): (&str, WarpedFn) = match potential {
        FlatPotential::Constant => ("constant", |r| Some((r, 1.0))),
        FlatPotential::Linear => ("linear", |_| Some((1.0, 0.0))),
    };
    let rows = model_rows(&model, &table_radii(cfg)?, warped)?;
    let meta = Json::obj([
        ("n", Json::Int(cfg.dim as i64)),
        ("source", Json::str(format!("flat_{tag}"))),
        ("c0", Json::Num(model.c0())),
        ("r_max", Json::Num(cfg.r_max)),
        ("switch_radius", Json::Num(0.0)),
        ("version", Json::str(VERSION)),
    ]);
    write_profile_outputs(cfg, &format!("flat_{tag}_n{}", cfg.dim), &rows, &meta)?;
    println!("flat {tag} n={}: {} rows", cfg.dim, rows.len());
    Ok(())
}

/// Metadata written next to a profile CSV by the generating subcommands.
struct Sidecar {
    n: Option<usize>,
    c0: Option<f64>,
    switch_radius: Option<f64>,
}

fn read_sidecar(csv: &Path) -> Result<Sidecar> {
    let path = csv.with_extension("json");
    if !path.exists() {
        return Ok(Sidecar {
            n: None,
            c0: None,
            switch_radius: None,
        });
    }
    let text =
        std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    Ok(Sidecar {
        n: v.get("n").and_then(|x| x.as_u64()).map(|x| x as usize),
        c0: v.get("c0").and_then(|x| x.as_f64()),
        switch_radius: v.get("switch_radius").and_then(|x| x.as_f64()),
    })
}

fn verification_json(v: &Verification) -> Json {
    Json::Arr(
        v.summary
            .iter()
            .map(|s| {
                Json::obj([
                    ("identity", Json::str(s.identity.name())),
                    ("max_abs", Json::Num(s.max_abs)),
                    ("max_rel", Json::Num(s.max_rel)),
                    ("worst_r", Json::Num(s.worst_r)),
                ])
            })
            .collect(),
    )
}

fn cmd_verify(cfg: &RunConfig, path: &Path, c0: Option<f64>) -> Result<bool> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let rows = read_profile_csv(BufReader::new(file))
        .with_context(|| format!("reading {}", path.display()))?;
    let side = read_sidecar(path)?;
    let n = if cfg.dim_given {
        cfg.dim
    } else {
        side.n.unwrap_or(cfg.dim)
    };
    let c0 = c0.or(side.c0).unwrap_or(1.0);
    let frames = rows
        .iter()
        .map(|r| r.to_frame(n))
        .collect::<soliton_lab::Result<Vec<_>>>()?;
    let v = verify_frames(&frames, c0, side.switch_radius.unwrap_or(0.0))?;
    let json = json_bytes(&verification_json(&v));
    print!("{}", String::from_utf8_lossy(&json));
    write_out(cfg, "verify.json", &json)?;
    for s in v.summary.iter().filter(|s| !s.passed()) {
        eprintln!(
            "FAIL {}: max relative residual {:e} at r = {} (tolerance {:e})",
            s.identity,
            s.max_rel,
            s.worst_r,
            s.identity.tolerance()
        );
    }
    Ok(v.passed())
}

fn cmd_sigma(cfg: &RunConfig) -> Result<()> {
    let sigma = sigma_constant(cfg.dim)?;
    println!("sigma(n={}) = {:.16}", cfg.dim, sigma);
    if cfg.wants(Format::Json) {
        let j = Json::obj([
            ("n", Json::Int(cfg.dim as i64)),
            ("sigma", Json::Num(sigma)),
        ]);
        write_out(
            cfg,
            &format!("probe_sigma_n{}.json", cfg.dim),
            &json_bytes(&j),
        )?;
    }
    Ok(())
}

fn build_model(cfg: &RunConfig, source: Source) -> Result<Box<dyn SolitonModel>> {
    let cigar_k = || -> Result<usize> {
        if !cfg.dim_given {
            return Ok(0);
        }
        cfg.dim
            .checked_sub(2)
            .ok_or_else(|| UsageError(format!("cigar needs --dim >= 2, got {}", cfg.dim)).into())
    };
    Ok(match source {
        Source::Bryant => Box::new(solve(cfg)?),
        Source::Cigar => Box::new(Cigar::standard().with_flat_factor(cigar_k()?)),
        Source::CigarNormalized => Box::new(Cigar::normalized().with_flat_factor(cigar_k()?)),
        Source::FlatConstant => Box::new(FlatSoliton {
            n: cfg.dim,
            potential: FlatPotential::Constant,
        }),
        Source::FlatLinear => Box::new(FlatSoliton {
            n: cfg.dim,
            potential: FlatPotential::Linear,
        }),
    })
}

fn cmd_pinch(cfg: &RunConfig, source: Source) -> Result<()> {
    let model = build_model(cfg, source)?;
    let radii = log_grid(cfg.r_max * 1e-4, cfg.r_max, cfg.samples)?;
    let p = pinching_profile(model.as_ref(), &radii)?;
    let stem = format!("probe_pinch_{}_n{}", source.tag(), model.dim());
    let mut header = vec!["r", "delta"];
    header.extend(Margin::ALL.iter().map(|m| m.name()));
    if cfg.wants(Format::Csv) {
        let rows = (0..p.radii.len()).map(|i| {
            let mut row = vec![fmt_num(p.radii[i]), fmt_num(p.delta[i])];
            row.extend(Margin::ALL.iter().map(|&m| fmt_num(p.margin(m)[i])));
            row
        });
        write_out(cfg, &format!("{stem}.csv"), &csv_bytes(&header, rows)?)?;
    }
    if cfg.wants(Format::Json) {
        let changes = p
            .sign_changes
            .iter()
            .map(|c| {
                Json::obj([
                    ("margin", Json::str(c.margin.name())),
                    ("r", Json::Num(c.r)),
                    ("becomes_negative", Json::Bool(c.becomes_negative)),
                ])
            })
            .collect();
        let mut fields = vec![
            ("n".to_string(), Json::Int(p.n as i64)),
            ("source".to_string(), Json::str(source.tag())),
            ("sigma".to_string(), Json::Num(sigma_constant(p.n)?)),
            ("r".to_string(), Json::nums(&p.radii)),
            ("delta".to_string(), Json::nums(&p.delta)),
        ];
        fields.extend(
            Margin::ALL
                .iter()
                .map(|&m| (m.name().to_string(), Json::nums(p.margin(m)))),
        );
        fields.push(("sign_changes".to_string(), Json::Arr(changes)));
        write_out(
            cfg,
            &format!("{stem}.json"),
            &json_bytes(&Json::Obj(fields)),
        )?;
    }
    if cfg.wants(Format::Svg) {
        let series: Vec<Series> = Margin::ALL
            .iter()
            .map(|&m| Series {
                name: m.name().into(),
                points: p
                    .radii
                    .iter()
                    .copied()
                    .zip(p.margin(m).iter().copied())
                    .collect(),
            })
            .collect();
        write_out(
            cfg,
            &format!("{stem}.svg"),
            svg_plot(&stem, "r", "margin", &series).as_bytes(),
        )?;
    }
    println!(
        "pinching on {} n={}: {} sample radii",
        source.tag(),
        p.n,
        p.radii.len()
    );
    if p.sign_changes.is_empty() {
        println!("  no sign changes");
    }
    for c in &p.sign_changes {
        let dir = if c.becomes_negative {
            "to negative"
        } else {
            "to nonnegative"
        };
        println!(
            "  {} changes sign {dir} at r = {}",
            c.margin.name(),
            fmt_num(c.r)
        );
    }
    Ok(())
}

fn cmd_flux(cfg: &RunConfig, source: Source, integrand: FluxIntegrand) -> Result<()> {
    let model = build_model(cfg, source)?;
    let radii = log_grid(cfg.r_max * 1e-2, cfg.r_max, cfg.samples)?;
    let fs = flux_series(model.as_ref(), integrand, &radii)?;
    let stem = format!(
        "probe_flux_{}_{}_n{}",
        source.tag(),
        integrand.name(),
        model.dim()
    );
    if cfg.wants(Format::Csv) {
        let rows = fs
            .radii
            .iter()
            .zip(&fs.flux)
            .map(|(&r, &f)| vec![fmt_num(r), fmt_num(f)]);
        write_out(
            cfg,
            &format!("{stem}.csv"),
            &csv_bytes(&["r", "flux"], rows)?,
        )?;
    }
    let exponent = fs.fitted_exponent.map(|f| f.slope);
    let rate = fs.fitted_rate.map(|f| f.slope);
    if cfg.wants(Format::Json) {
        let j = Json::obj([
            ("n", Json::Int(model.dim() as i64)),
            ("source", Json::str(source.tag())),
            ("integrand", Json::str(integrand.name())),
            ("identically_zero", Json::Bool(fs.identically_zero())),
            ("fitted_exponent", Json::opt_num(exponent)),
            (
                "fitted_exponent_r_squared",
                Json::opt_num(fs.fitted_exponent.map(|f| f.r_squared)),
            ),
            ("fitted_rate", Json::opt_num(rate)),
            (
                "fitted_rate_r_squared",
                Json::opt_num(fs.fitted_rate.map(|f| f.r_squared)),
            ),
            ("r", Json::nums(&fs.radii)),
            ("flux", Json::nums(&fs.flux)),
        ]);
        write_out(cfg, &format!("{stem}.json"), &json_bytes(&j))?;
    }
    if cfg.wants(Format::Svg) {
        let s = Series {
            name: integrand.name().into(),
            points: fs
                .radii
                .iter()
                .copied()
                .zip(fs.flux.iter().copied())
                .collect(),
        };
        write_out(
            cfg,
            &format!("{stem}.svg"),
            svg_plot(&stem, "r", "flux", &[s]).as_bytes(),
        )?;
    }
    let show = |x: Option<f64>| x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6}"));
    if fs.identically_zero() {
        println!(
            "flux of {} on {}: identically zero",
            integrand.name(),
            source.tag()
        );
    } else {
        println!(
            "flux of {} on {}: power exponent {}, exponential rate {}",
            integrand.name(),
            source.tag(),
            show(exponent),
            show(rate)
        );
    }
    Ok(())
}

fn cmd_psi(cfg: &RunConfig) -> Result<()> {
    let profile = solve(cfg)?;
    let t = reconstruct_psi(&profile, cfg.samples)?;
    let stem = format!("probe_psi_n{}", t.n);
    if cfg.wants(Format::Csv) {
        let rows = (0..t.s.len()).map(|i| {
            vec![
                fmt_num(t.s[i]),
                fmt_num(t.r[i]),
                fmt_num(t.psi[i]),
                fmt_num(t.u[i]),
            ]
        });
        write_out(
            cfg,
            &format!("{stem}.csv"),
            &csv_bytes(&["R", "r", "psi", "u"], rows)?,
        )?;
    }
    if cfg.wants(Format::Json) {
        let j = Json::obj([
            ("n", Json::Int(t.n as i64)),
            ("s_min", Json::Num(t.s_min)),
            ("s_max", Json::Num(t.s_max)),
            ("x_residual", Json::Num(t.x_residual)),
            ("x_residual_rel", Json::Num(t.x_residual_rel)),
            ("quadrature_change", Json::Num(t.quadrature_change)),
            ("R", Json::nums(&t.s)),
            ("psi", Json::nums(&t.psi)),
            ("u", Json::nums(&t.u)),
        ]);
        write_out(cfg, &format!("{stem}.json"), &json_bytes(&j))?;
    }
    if cfg.wants(Format::Svg) {
        let series = [
            Series {
                name: "psi".into(),
                points: t.s.iter().copied().zip(t.psi.iter().copied()).collect(),
            },
            Series {
                name: "u".into(),
                points: t.s.iter().copied().zip(t.u.iter().copied()).collect(),
            },
        ];
        write_out(
            cfg,
            &format!("{stem}.svg"),
            svg_plot(&stem, "R", "value", &series).as_bytes(),
        )?;
    }
    println!(
        "psi on R in [{:.6e}, {:.6e}]: max |X| relative {:.3e}, quadrature change {:.3e}",
        t.s_min, t.s_max, t.x_residual_rel, t.quadrature_change
    );
    Ok(())
}

fn cmd_decay(cfg: &RunConfig, source: Source) -> Result<()> {
    let model = build_model(cfg, source)?;
    let radii = log_grid(cfg.r_max * 0.1, cfg.r_max, cfg.samples)?;
    // |Rm| on the Bryant soliton, R on the closed-form ones
    let quantity = if source == Source::Bryant {
        "rm_norm"
    } else {
        "R"
    };
    let values = radii
        .iter()
        .map(|&r| {
            let f = model.frame_at(r)?;
            Ok(if source == Source::Bryant {
                f.rm_norm
            } else {
                f.scal
            })
        })
        .collect::<soliton_lab::Result<Vec<_>>>()?;
    let fit = decay_classifier(&radii, &values, model.dim())?;
    let stem = format!("probe_decay_{}_n{}", source.tag(), model.dim());
    if cfg.wants(Format::Csv) {
        let rows = radii
            .iter()
            .zip(&values)
            .map(|(&r, &v)| vec![fmt_num(r), fmt_num(v)]);
        write_out(
            cfg,
            &format!("{stem}.csv"),
            &csv_bytes(&["r", quantity], rows)?,
        )?;
    }
    if cfg.wants(Format::Json) {
        let j = Json::obj([
            ("n", Json::Int(model.dim() as i64)),
            ("source", Json::str(source.tag())),
            ("quantity", Json::str(quantity)),
            ("class", Json::str(fit.class.name())),
            ("power_exponent", Json::Num(fit.power.slope)),
            ("power_r_squared", Json::Num(fit.power.r_squared)),
            ("exponential_rate", Json::Num(fit.exponential.slope)),
            (
                "exponential_r_squared",
                Json::Num(fit.exponential.r_squared),
            ),
            ("envelope_log_max", Json::Num(fit.envelope_log_max)),
            ("envelope_tail_slope", Json::Num(fit.envelope_tail_slope)),
            ("envelope_bounded", Json::Bool(fit.envelope_bounded())),
        ]);
        write_out(cfg, &format!("{stem}.json"), &json_bytes(&j))?;
    }
    if cfg.wants(Format::Svg) {
        let s = Series {
            name: quantity.into(),
            points: radii.iter().copied().zip(values.iter().copied()).collect(),
        };
        write_out(
            cfg,
            &format!("{stem}.svg"),
            svg_plot(&stem, "r", quantity, &[s]).as_bytes(),
        )?;
    }
    println!(
        "decay of {quantity} on {} over [{}, {}]: {} (power exponent {:.6}, exponential rate {:.6})",
        source.tag(),
        radii[0],
        cfg.r_max,
        fit.class.name(),
        fit.power.slope,
        fit.exponential.slope
    );
    Ok(())
}
