use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperarea_core::diagram::all_crossings;
use hyperarea_core::fixtures;
use hyperarea_core::geometry::validate_timelike;
use hyperarea_core::kappa::{convergence_study, QuadratureConfig, Side, Target, DEFAULT_SCHEDULE};
use hyperarea_core::observables::{area_operator, wilson_loop_detailed};
use hyperarea_core::piercing::find_hyperlink_piercings;
use hyperarea_core::{ColoredHyperlink, Hyperlink, PlanarSurface};
use serde::Serialize;

use crate::docs::{load_colored, load_hyperlink, load_surface, to_text, HyperlinkDoc, SurfaceDoc};
use crate::error::{CliError, EXIT_MALFORMED, EXIT_OK};
use crate::manifest::RunManifest;
use crate::report::{
    csv_table, AreaOut, ConvergenceCsvRow, CrossingRow, PiercingRow, ValidationOut, WilsonOut,
};

/// Worker count override for the quadrature engine.
pub const THREADS_ENV: &str = "HYPERAREA_THREADS";

#[derive(Debug, Parser)]
#[command(name = "hyperarea", version, about = "Hyperlinking numbers, piercings, Wilson loops and area operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Single worker, no timestamp: identical inputs give identical bytes.
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the time-likeness conditions; exit 2 if violated.
    Validate {
        /// Hyperlink documents; several are validated as one hyperlink.
        #[arg(long, required = true)]
        hyperlink: Vec<PathBuf>,
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Crossing table and hyperlinking number of every pair of loops (CSV).
    Sk {
        #[arg(long)]
        hyperlink: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Piercing table, linking numbers and counts against a surface (CSV).
    Lk {
        #[arg(long)]
        hyperlink: PathBuf,
        #[arg(long)]
        surface: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form Wilson loop observable.
    Wilson {
        #[arg(long)]
        matter: PathBuf,
        /// Geometric hyperlink (default: empty).
        #[arg(long)]
        geometric: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form area operator acting on the Wilson loop.
    Area {
        #[arg(long)]
        matter: PathBuf,
        #[arg(long)]
        geometric: Option<PathBuf>,
        /// Surface document (default: no surface, which gives the Wilson loop).
        #[arg(long)]
        surface: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Finite-kappa quadrature against the combinatorial limit (CSV).
    Verify(VerifyArgs),
    /// Emit a bundled example: one JSON bundle, or separate files with --dir.
    Example {
        name: String,
        #[arg(long)]
        dir: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyTarget {
    Sk,
    Lk,
    /// The absolute-value piercing integral, converging to the count.
    Count,
    Holonomy,
    Wilson,
    Area,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Plus,
    Minus,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    target: VerifyTarget,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SCHEDULE.to_vec())]
    kappa: Vec<f64>,
    /// Gauss–Legendre nodes per cell and axis.
    #[arg(long, default_value_t = 8)]
    nodes: usize,
    #[arg(long, default_value_t = 6.0)]
    refinement_radius: f64,
    #[arg(long, default_value_t = 4)]
    refinement_factor: usize,
    #[arg(long)]
    allow_large_kappa: bool,
    /// Skip the unrefined comparison run.
    #[arg(long)]
    no_refinement_check: bool,
    #[arg(long)]
    hyperlink: Option<PathBuf>,
    #[arg(long)]
    matter: Option<PathBuf>,
    #[arg(long)]
    geometric: Option<PathBuf>,
    #[arg(long)]
    surface: Option<PathBuf>,
    /// First loop (sk) or the loop under study (lk, count, holonomy).
    #[arg(long = "loop", default_value_t = 0)]
    loop_index: usize,
    /// Second loop for sk.
    #[arg(long, default_value_t = 1)]
    other: usize,
    #[arg(long, value_enum, default_value_t = SideArg::Plus)]
    side: SideArg,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    q: f64,
    /// Partition disk radii relative to the default.
    #[arg(long, default_value_t = 1.0)]
    partition_scale: f64,
    #[command(flatten)]
    common: Common,
}

/// Parse `args` (including the program name), execute, and return the exit
/// code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn threads(deterministic: bool) -> Result<usize, CliError> {
    if deterministic {
        return Ok(1);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

fn in_pool<R: Send>(n: usize, f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn manifest(name: &str, common: &Common) -> Result<RunManifest, CliError> {
    Ok(RunManifest::new(name, common.deterministic, threads(common.deterministic)?))
}

/// Refuse to work on inputs violating time-likeness; the report goes to
/// stderr.
fn require_valid(h: &Hyperlink, m: &RunManifest) -> Result<(), CliError> {
    let r = validate_timelike(h, h.default_eps());
    if r.valid() {
        return Ok(());
    }
    eprint!("{}", to_text(&ValidationOut::new(m.clone(), &r)));
    Err(CliError::Invalid(r.violations.len()))
}

fn geometric_or_empty(path: Option<&Path>, m: &mut RunManifest) -> Result<Hyperlink, CliError> {
    match path {
        Some(p) => {
            m.input(p);
            load_hyperlink(p)
        }
        None => Ok(Hyperlink::empty()),
    }
}

fn execute(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Validate { hyperlink, eps, common } => {
            let mut m = manifest("validate", &common)?;
            let mut h = Hyperlink::empty();
            for p in &hyperlink {
                m.input(p);
                h = h.join(&load_hyperlink(p)?);
            }
            let eps = eps.unwrap_or_else(|| h.default_eps());
            m.param("eps", eps);
            let r = validate_timelike(&h, eps);
            emit(common.out.as_deref(), &to_text(&ValidationOut::new(m, &r)))?;
            if r.valid() {
                Ok(())
            } else {
                Err(CliError::Invalid(r.violations.len()))
            }
        }
        Command::Sk { hyperlink, common } => {
            let mut m = manifest("sk", &common)?;
            m.input(&hyperlink);
            let h = load_hyperlink(&hyperlink)?;
            require_valid(&h, &m)?;
            let mut rows = Vec::new();
            let mut trailer = Vec::new();
            let loops = h.loops();
            for i in 0..loops.len() {
                for j in i + 1..loops.len() {
                    let pair = Hyperlink::new(vec![loops[i].clone(), loops[j].clone()]);
                    let cs = all_crossings(&loops[i], &loops[j], pair.default_eps())?;
                    let sk: i32 = cs.iter().map(|c| c.product()).sum();
                    rows.extend(cs.iter().map(|c| CrossingRow::new(i, j, c)));
                    trailer.push(format!("sk,{i},{j},{sk}"));
                }
            }
            let header = [
                "loop_a",
                "loop_b",
                "plane",
                "s",
                "t",
                "u",
                "v",
                "orientation",
                "height",
                "time_lag",
                "product",
            ];
            emit(common.out.as_deref(), &csv_table(&m, &rows, &header, &trailer))
        }
        Command::Lk {
            hyperlink,
            surface,
            common,
        } => {
            let mut m = manifest("lk", &common)?;
            m.input(&hyperlink);
            m.input(&surface);
            let h = load_hyperlink(&hyperlink)?;
            let s = load_surface(&surface)?;
            require_valid(&h, &m)?;
            let ps = find_hyperlink_piercings(&h, &s)?;
            let rows: Vec<PiercingRow> = ps.iter().map(Into::into).collect();
            let trailer = (0..h.len())
                .map(|u| {
                    let mine = ps.iter().filter(|p| p.loop_index == u);
                    let lk: i32 = mine.clone().map(|p| p.epsilon()).sum();
                    format!("lk,{u},{lk},{}", mine.count())
                })
                .collect::<Vec<_>>();
            let header = ["loop", "s", "x2", "x3", "orientation", "height", "epsilon"];
            emit(common.out.as_deref(), &csv_table(&m, &rows, &header, &trailer))
        }
        Command::Wilson {
            matter,
            geometric,
            q,
            common,
        } => {
            let mut m = manifest("wilson", &common)?;
            m.input(&matter);
            let mh = load_colored(&matter)?;
            let g = geometric_or_empty(geometric.as_deref(), &mut m)?;
            m.param("q", q);
            require_valid(&mh.base().join(&g), &m)?;
            let w = wilson_loop_detailed(q, &mh, &g)?;
            emit(common.out.as_deref(), &to_text(&WilsonOut::new(m, &w)))
        }
        Command::Area {
            matter,
            geometric,
            surface,
            q,
            common,
        } => {
            let mut m = manifest("area", &common)?;
            m.input(&matter);
            let mh = load_colored(&matter)?;
            let g = geometric_or_empty(geometric.as_deref(), &mut m)?;
            let s = match &surface {
                Some(p) => {
                    m.input(p);
                    Some(load_surface(p)?)
                }
                None => None,
            };
            m.param("q", q);
            require_valid(&mh.base().join(&g), &m)?;
            let a = area_operator(q, &mh, &g, s.as_ref())?;
            emit(common.out.as_deref(), &to_text(&AreaOut::new(m, &a)))
        }
        Command::Verify(args) => verify(args),
        Command::Example { name, dir, common } => example(&name, dir.as_deref(), &common),
    }
}

struct VerifyInputs {
    hyperlink: Option<Hyperlink>,
    matter: Option<ColoredHyperlink>,
    geometric: Hyperlink,
    surface: Option<PlanarSurface>,
}

fn need<'a, T>(x: &'a Option<T>, flag: &str, target: VerifyTarget) -> Result<&'a T, CliError> {
    x.as_ref()
        .ok_or_else(|| CliError::Usage(format!("--target {target:?} needs --{flag}").to_lowercase()))
}

fn verify(args: VerifyArgs) -> Result<(), CliError> {
    let mut m = manifest("verify", &args.common)?;
    let inputs = VerifyInputs {
        hyperlink: args
            .hyperlink
            .as_deref()
            .map(|p| {
                m.input(p);
                load_hyperlink(p)
            })
            .transpose()?,
        matter: args
            .matter
            .as_deref()
            .map(|p| {
                m.input(p);
                load_colored(p)
            })
            .transpose()?,
        geometric: geometric_or_empty(args.geometric.as_deref(), &mut m)?,
        surface: args
            .surface
            .as_deref()
            .map(|p| {
                m.input(p);
                load_surface(p)
            })
            .transpose()?,
    };
    let cfg = QuadratureConfig {
        kappa: args.kappa.first().copied().unwrap_or(DEFAULT_SCHEDULE[0]),
        base_points: args.nodes,
        refinement_radius: args.refinement_radius,
        refinement_factor: args.refinement_factor,
        allow_large_kappa: args.allow_large_kappa,
        check_refinement: !args.no_refinement_check,
    };
    if args.kappa.is_empty() {
        return Err(CliError::Usage("--kappa needs at least one value".into()));
    }
    for &kappa in &args.kappa {
        QuadratureConfig { kappa, ..cfg }.validate()?;
    }
    m.param("target", format!("{:?}", args.target).to_lowercase());
    m.param("kappa", &args.kappa);
    m.param("nodes", args.nodes);
    m.param("refinement_radius", args.refinement_radius);
    m.param("refinement_factor", args.refinement_factor);
    m.param("refinement_check", cfg.check_refinement);

    let t = args.target;
    let pick = |h: &Hyperlink, i: usize| {
        h.loops()
            .get(i)
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("loop index {i} out of range ({} loops)", h.len())))
    };
    let rows = match t {
        VerifyTarget::Sk => {
            let h = need(&inputs.hyperlink, "hyperlink", t)?;
            require_valid(h, &m)?;
            let (a, b) = (pick(h, args.loop_index)?, pick(h, args.other)?);
            if args.loop_index == args.other {
                return Err(CliError::Usage("--loop and --other must differ".into()));
            }
            m.param("loops", [args.loop_index, args.other]);
            let target = Target::Sk { a: &a, b: &b };
            in_pool(m.threads, || convergence_study(&target, &args.kappa, &cfg))??
        }
        VerifyTarget::Lk | VerifyTarget::Count => {
            let h = match (&inputs.hyperlink, &inputs.matter) {
                (Some(h), _) => h.clone(),
                (None, Some(mh)) => mh.base().clone(),
                (None, None) => return Err(CliError::Usage(format!("--target {t:?} needs --hyperlink").to_lowercase())),
            };
            let s = need(&inputs.surface, "surface", t)?;
            require_valid(&h, &m)?;
            let l = pick(&h, args.loop_index)?;
            m.param("loop", args.loop_index);
            let target = if t == VerifyTarget::Lk {
                Target::Lk { l: &l, surface: s }
            } else {
                Target::PiercingCount { l: &l, surface: s }
            };
            in_pool(m.threads, || convergence_study(&target, &args.kappa, &cfg))??
        }
        VerifyTarget::Holonomy | VerifyTarget::Wilson | VerifyTarget::Area => {
            let mh = need(&inputs.matter, "matter", t)?;
            let g = &inputs.geometric;
            require_valid(&mh.base().join(g), &m)?;
            m.param("q", args.q);
            let target = match t {
                VerifyTarget::Holonomy => {
                    pick(mh.base(), args.loop_index)?;
                    m.param("loop", args.loop_index);
                    m.param("side", format!("{:?}", args.side).to_lowercase());
                    Target::Holonomy {
                        q: args.q,
                        matter: mh,
                        loop_index: args.loop_index,
                        geometric: g,
                        side: match args.side {
                            SideArg::Plus => Side::Plus,
                            SideArg::Minus => Side::Minus,
                        },
                    }
                }
                VerifyTarget::Wilson => Target::Wilson {
                    q: args.q,
                    matter: mh,
                    geometric: g,
                },
                _ => {
                    m.param("partition_scale", args.partition_scale);
                    Target::Area {
                        q: args.q,
                        matter: mh,
                        geometric: g,
                        surface: need(&inputs.surface, "surface", t)?,
                        partition_scale: args.partition_scale,
                    }
                }
            };
            in_pool(m.threads, || convergence_study(&target, &args.kappa, &cfg))??
        }
    };
    let out: Vec<ConvergenceCsvRow> = rows.iter().map(Into::into).collect();
    let header = [
        "kappa",
        "estimate_re",
        "estimate_im",
        "reference_re",
        "reference_im",
        "abs_error",
        "rel_error",
        "warning",
    ];
    emit(args.common.out.as_deref(), &csv_table(&m, &out, &header, &[]))
}

/// The parts of an example, in file order.
#[derive(Debug, Serialize)]
struct Bundle {
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    hyperlink: Option<HyperlinkDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matter: Option<HyperlinkDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    geometric: Option<HyperlinkDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    surface: Option<SurfaceDoc>,
}

fn example(name: &str, dir: Option<&Path>, common: &Common) -> Result<(), CliError> {
    let ex = fixtures::by_name(name).ok_or_else(|| {
        CliError::Usage(format!("unknown example {name:?}; expected one of {}", fixtures::NAMES.join(", ")))
    })?;
    let b = Bundle {
        name: name.to_string(),
        hyperlink: ex.hyperlink.as_ref().map(HyperlinkDoc::from_hyperlink),
        matter: ex.matter.as_ref().map(HyperlinkDoc::from_colored),
        geometric: ex.geometric.as_ref().map(HyperlinkDoc::from_hyperlink),
        surface: ex.surface.as_ref().map(SurfaceDoc::from_surface),
    };
    let Some(dir) = dir else {
        return emit(common.out.as_deref(), &to_text(&b));
    };
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let files: [(&str, Option<String>); 4] = [
        ("hyperlink.json", b.hyperlink.as_ref().map(to_text)),
        ("matter.json", b.matter.as_ref().map(to_text)),
        ("geometric.json", b.geometric.as_ref().map(to_text)),
        ("surface.json", b.surface.as_ref().map(to_text)),
    ];
    let mut written = Vec::new();
    for (file, text) in files {
        if let Some(text) = text {
            let p = dir.join(file);
            emit(Some(&p), &text)?;
            written.push(p.display().to_string());
        }
    }
    eprintln!("wrote {}", written.join(", "));
    Ok(())
}
