//! Command line front end.

use std::fs::{self, File};
use std::io::BufWriter;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ricci_rev::fit::{fit_power_law, fit_power_law_pinned, fit_table, FitConfig, Quantity};
use ricci_rev::flow2d::{Flow2DConfig, StepOutcome, SurfaceFlow, DEFAULT_SURFACE_NODES};
use ricci_rev::flow3d::{
    fd_flow_3d, neck_initial_profile, series_flow, FdConfig, SeriesFlowConfig, SeriesState,
    DEFAULT_FD_NODES, LARGE_STEP_SCHEDULE,
};
use ricci_rev::geometry::generating_curve;
use ricci_rev::mesh::revolve_mesh;
use ricci_rev::snapshot::Snapshot;
use ricci_rev::{make_initial_surface, ShapeParams};

use crate::api::{router, AppState};
use crate::error::{Result, ServiceError};
use crate::runfile::{
    fit_samples, read_series_run, report_rows, write_diagnostics, write_fit_rows,
    write_series_run, FitCsvRow,
};
use crate::session::DEFAULT_HISTORY;

/// Exit code of a surface flow that halted on instability.
pub const EXIT_UNSTABLE: u8 = 3;

pub const DEFAULT_PORT: u16 = 8737;

#[derive(Debug, Parser)]
#[command(name = "ricci-rev", version, about = "Ricci flow of metrics of revolution")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Surfaces of revolution.
    #[command(subcommand)]
    Surface(SurfaceCommand),
    /// The 3-manifold neck pinch.
    #[command(subcommand)]
    M3(M3Command),
    /// Local HTTP session service.
    Serve(ServeArgs),
}

#[derive(Debug, Subcommand)]
pub enum SurfaceCommand {
    /// Write the initial surface for shape parameters.
    Init(InitArgs),
    /// Flow a surface snapshot.
    Flow(FlowArgs),
    /// Revolve a snapshot into a triangle mesh.
    Mesh(MeshArgs),
}

#[derive(Debug, Args)]
pub struct InitArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c3: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c5: f64,
    #[arg(long, default_value_t = DEFAULT_SURFACE_NODES)]
    pub grid: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub dt: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub snapshot_every: usize,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub n_h: Option<usize>,
    #[arg(long)]
    pub n_m: Option<usize>,
    #[arg(long)]
    pub k_pole: Option<f64>,
    #[arg(long)]
    pub filter_every: Option<usize>,
    #[arg(long)]
    pub reparam_every: Option<usize>,
}

impl FlowArgs {
    pub fn config(&self) -> Flow2DConfig {
        let mut cfg = Flow2DConfig::with_dt(self.dt);
        if let Some(v) = self.n_h {
            cfg.n_h = v;
        }
        if let Some(v) = self.n_m {
            cfg.n_m = v;
        }
        if let Some(v) = self.k_pole {
            cfg.k_pole = v;
        }
        if let Some(v) = self.filter_every {
            cfg.filter_every = v;
        }
        if let Some(v) = self.reparam_every {
            cfg.reparam_every = v;
        }
        cfg
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeshFormat {
    Obj,
    Json,
}

#[derive(Debug, Args)]
pub struct MeshArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 64)]
    pub segments: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to the extension of `--out`, else OBJ.
    #[arg(long, value_enum)]
    pub format: Option<MeshFormat>,
}

#[derive(Debug, Subcommand)]
pub enum M3Command {
    /// Integrate the neck with finite differences or power series.
    Flow(M3FlowArgs),
    /// Fit power laws to a series run.
    Fit(M3FitArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum M3Mode {
    Fd,
    Series,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum M3Profile {
    /// `h = 1`, `m = 10⁻⁴ + sin²(9πρ/40)`, `K₂ = 1`.
    Paper,
}

#[derive(Debug, Args)]
pub struct M3FlowArgs {
    #[arg(long, value_enum)]
    pub mode: M3Mode,
    #[arg(long, value_enum, default_value = "paper")]
    pub profile: M3Profile,
    /// Series mode: a CSV file. Finite-difference mode: a directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_FD_NODES)]
    pub nodes: usize,
    /// Largest finite-difference step; by default one step per target time.
    #[arg(long)]
    pub substep: Option<f64>,
    /// Finite-difference target times (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub schedule: Option<Vec<f64>>,
    #[arg(long)]
    pub continue_after_pinch: bool,
    /// Series step bound.
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub record_every: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuantityArg {
    One(Quantity),
    All,
}

impl FromStr for QuantityArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(QuantityArg::All);
        }
        Quantity::from_str(s)
            .map(QuantityArg::One)
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Args)]
pub struct M3FitArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// m, h, R, Kab, Kbc or all.
    #[arg(long, default_value = "all")]
    pub quantity: QuantityArg,
    /// `.json` writes JSON, anything else CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Fix the pinch time instead of fitting it.
    #[arg(long)]
    pub pin_t: Option<f64>,
    #[arg(long, default_value_t = FitConfig::default().grid)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: IpAddr,
    #[arg(long, env = "RICCI_REV_PORT", default_value_t = DEFAULT_PORT)]
    pub port: u16,
    #[arg(long, default_value_t = DEFAULT_HISTORY)]
    pub history: usize,
}

/// Runs a parsed command line and maps the outcome to an exit code.
pub fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Surface(SurfaceCommand::Init(a)) => surface_init(&a).map(|_| ExitCode::SUCCESS),
        Command::Surface(SurfaceCommand::Flow(a)) => surface_flow(&a).map(|s| s.exit_code()),
        Command::Surface(SurfaceCommand::Mesh(a)) => surface_mesh(&a).map(|_| ExitCode::SUCCESS),
        Command::M3(M3Command::Flow(a)) => m3_flow(&a).map(|_| ExitCode::SUCCESS),
        Command::M3(M3Command::Fit(a)) => m3_fit(&a).map(|_| ExitCode::SUCCESS),
        Command::Serve(a) => serve(&a).map(|_| ExitCode::SUCCESS),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::FAILURE
    })
}

pub fn surface_init(a: &InitArgs) -> Result<()> {
    let p = make_initial_surface(ShapeParams::new(a.c3, a.c5), a.grid)?;
    Snapshot::of(&p)?.save(&a.out)?;
    Ok(())
}

/// How a surface flow run ended.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowSummary {
    pub steps: usize,
    pub snapshots: Vec<PathBuf>,
    pub halt_reason: Option<String>,
}

impl FlowSummary {
    pub fn exit_code(&self) -> ExitCode {
        match self.halt_reason {
            None => ExitCode::SUCCESS,
            Some(_) => ExitCode::from(EXIT_UNSTABLE),
        }
    }
}

/// Writes `snapshot_NNNNNN.json` every `snapshot_every` accepted steps and
/// `diagnostics.csv` with a row for the input and each accepted step. A
/// halted run also writes the last good state, marked unstable.
pub fn surface_flow(a: &FlowArgs) -> Result<FlowSummary> {
    if a.snapshot_every == 0 {
        return Err(ServiceError::BadRequest("--snapshot-every must be at least 1".into()));
    }
    let p = Snapshot::load(&a.input)?.to_profile()?;
    let mut flow = SurfaceFlow::new(p, a.config())?;
    fs::create_dir_all(&a.out_dir)?;
    let mut diags = vec![flow.diagnostics()?];
    let mut snapshots = Vec::new();
    let mut save = |flow: &SurfaceFlow| -> Result<()> {
        let path = a.out_dir.join(format!("snapshot_{:06}.json", flow.steps()));
        Snapshot::of(flow.profile())?.save(&path)?;
        snapshots.push(path);
        Ok(())
    };
    let mut halt_reason = None;
    for _ in 0..a.steps {
        match flow.step()? {
            StepOutcome::Advanced(d) => {
                diags.push(d);
                if flow.steps() % a.snapshot_every == 0 {
                    save(&flow)?;
                }
            }
            StepOutcome::Halted(reason) => {
                eprintln!("halted after {} steps: {reason}", flow.steps());
                save(&flow)?;
                halt_reason = Some(reason);
                break;
            }
        }
    }
    let csv = BufWriter::new(File::create(a.out_dir.join("diagnostics.csv"))?);
    write_diagnostics(&diags, csv)?;
    Ok(FlowSummary {
        steps: flow.steps(),
        snapshots,
        halt_reason,
    })
}

pub fn surface_mesh(a: &MeshArgs) -> Result<()> {
    let p = Snapshot::load(&a.input)?.to_profile()?;
    let mesh = revolve_mesh(&generating_curve(&p), a.segments)?.welded();
    let format = a.format.unwrap_or_else(|| match extension(&a.out).as_deref() {
        Some("json") => MeshFormat::Json,
        _ => MeshFormat::Obj,
    });
    let w = BufWriter::new(File::create(&a.out)?);
    match format {
        MeshFormat::Obj => mesh.write_obj(w)?,
        MeshFormat::Json => serde_json::to_writer(w, &mesh)?,
    }
    Ok(())
}

fn extension(p: &Path) -> Option<String> {
    p.extension().map(|e| e.to_string_lossy().to_ascii_lowercase())
}

pub fn m3_flow(a: &M3FlowArgs) -> Result<()> {
    match a.mode {
        M3Mode::Series => {
            let mut cfg = SeriesFlowConfig::reference();
            if let Some(eta) = a.eta {
                cfg.eta = eta;
            }
            if a.record_every.is_some() {
                cfg.record_every = a.record_every;
            }
            let traj = series_flow(&SeriesState::example_neck(), &cfg)?;
            if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            write_series_run(&traj, BufWriter::new(File::create(&a.out)?))?;
            println!(
                "steps {} status {} last t {:.10e} m0 {:.3e} extrapolated T {:.10e}",
                traj.steps,
                traj.status,
                traj.last.t,
                traj.last.m0(),
                traj.extrapolated_pinch_time()
            );
        }
        M3Mode::Fd => {
            let p = neck_initial_profile(a.nodes)?;
            let schedule = a.schedule.clone().unwrap_or_else(|| LARGE_STEP_SCHEDULE.to_vec());
            let cfg = FdConfig {
                max_substep: a.substep,
                continue_after_pinch: a.continue_after_pinch,
            };
            let snaps = fd_flow_3d(&p, &schedule, &cfg)?;
            fs::create_dir_all(&a.out)?;
            let mut neck = csv::Writer::from_path(a.out.join("neck.csv"))?;
            neck.write_record(["index", "t", "m0", "h0", "status", "non_geometric"])?;
            for (i, s) in snaps.iter().enumerate() {
                Snapshot::of(&s.profile)?.save(a.out.join(format!("snapshot_{i:03}.json")))?;
                let flagged = s.non_geometric.iter().filter(|&&b| b).count();
                neck.write_record([
                    i.to_string(),
                    s.profile.t.to_string(),
                    s.profile.m[0].to_string(),
                    s.profile.h[0].to_string(),
                    s.profile.status.to_string(),
                    flagged.to_string(),
                ])?;
            }
            neck.flush()?;
            println!("{} snapshots (qualitative)", snaps.len());
        }
    }
    Ok(())
}

pub fn m3_fit(a: &M3FitArgs) -> Result<()> {
    let rows = read_series_run(File::open(&a.input)?)?;
    let k2 = rows.last().map_or(1.0, |r| r.k2);
    let cfg = FitConfig {
        grid: a.grid,
        ..FitConfig::default()
    };
    let fit_one = |q: Quantity| {
        let s = fit_samples(&rows, q);
        match a.pin_t {
            Some(t) => fit_power_law_pinned(&s, t),
            None => fit_power_law(&s, &cfg),
        }
    };
    let (out_rows, notes) = match a.quantity {
        QuantityArg::One(q) => (vec![FitCsvRow::new(q.name(), &fit_one(q)?, Some(q))], vec![]),
        QuantityArg::All if a.pin_t.is_some() => {
            let mut v = Vec::new();
            for q in Quantity::ALL {
                v.push(FitCsvRow::new(q.name(), &fit_one(q)?, Some(q)));
            }
            (v, vec![])
        }
        QuantityArg::All => {
            let report = fit_table(|q| fit_samples(&rows, q), k2, &cfg)?;
            (report_rows(&report), report.notes)
        }
    };
    for r in &out_rows {
        println!(
            "{:>8}  c {:>9.4}  p {:>8.4}  T {:.7e}  conditioning {:.3}",
            r.quantity, r.c, r.p, r.t_pinch, r.conditioning
        );
    }
    for n in &notes {
        println!("note: {n}");
    }
    let w = BufWriter::new(File::create(&a.out)?);
    if extension(&a.out).as_deref() == Some("json") {
        serde_json::to_writer_pretty(w, &json!({ "fits": out_rows, "notes": notes }))?;
    } else {
        write_fit_rows(&out_rows, w)?;
    }
    Ok(())
}

pub fn serve(a: &ServeArgs) -> Result<()> {
    let addr = SocketAddr::new(a.bind, a.port);
    let state = AppState::new(Flow2DConfig::default(), a.history);
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, router(state))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}
