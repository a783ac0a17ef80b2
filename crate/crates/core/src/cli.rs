//! `nula` command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 certification failure,
//! 3 I/O error.

use crate::design::{
    design_nula, enumerate_designs, optimize_finite_n, verify_cancellation, CancellationReport,
    DesignOverrides, DesignRequest, NulaDesign,
};
use crate::error::Error;
use crate::geometry::{Angle, ArrayGeometry};
use crate::grating::gl_enumerate;
use crate::io::{pattern_table, sweep_to_delimited, write_atomic, ScenarioFile};
use crate::scenario::{compute_sinr, fp_convergence_sweep, GeometryFamily};
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNCERTIFIED: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "nula",
    version,
    about = "Grating-lobe-free block NULA design and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List grating lobes of a uniform spacing for one steering angle.
    Gl {
        #[arg(long)]
        d: f64,
        /// Main-beam direction in degrees.
        #[arg(long, allow_negative_numbers = true)]
        theta1: f64,
    },
    /// Pick (N_b, p) and certify grating-lobe cancellation.
    Design(DesignArgs),
    /// List all certified designs up to a block count.
    Enumerate {
        #[arg(long)]
        d: f64,
        #[arg(long = "theta-max")]
        theta_max: f64,
        #[arg(long = "max-nb")]
        max_nb: u64,
        /// Largest inter-block gap, in wavelengths.
        #[arg(long = "max-gap")]
        max_gap: f64,
        /// Subarray size for the finite-N choice among the listed designs.
        #[arg(long)]
        n: Option<usize>,
        /// Steering angle for the finite-N choice, degrees.
        #[arg(long, allow_negative_numbers = true)]
        theta1: Option<f64>,
    },
    /// Certify a given (N_b, p).
    Verify {
        #[arg(long)]
        d: f64,
        #[arg(long = "theta-max")]
        theta_max: f64,
        #[arg(long)]
        nb: u64,
        #[arg(long)]
        p: u64,
    },
    /// Write the array factor |AF(θ)| over [-90°, 90°].
    Pattern {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, allow_negative_numbers = true)]
        theta1: f64,
        #[arg(long, default_value_t = 0.01)]
        resolution: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Matched-filter SINR of a scenario file.
    Sinr {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Leakage and SINR as the subarray length grows.
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        scenario: PathBuf,
        /// Comma-separated subarray lengths.
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write an example scenario file.
    Scaffold {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct DesignArgs {
    #[arg(long)]
    d: f64,
    #[arg(long = "theta-max")]
    theta_max: f64,
    #[arg(long)]
    nb: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    /// Cap on the total element count N·N_b.
    #[arg(long)]
    budget: Option<u64>,
    /// Subarray size, for reporting the pitch and aperture.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long)]
    d: f64,
    #[arg(long)]
    nb: Option<usize>,
    #[arg(long)]
    p: Option<u64>,
    /// Explicit inter-block gap in wavelengths (instead of p·d/N_b).
    #[arg(long)]
    gap: Option<f64>,
}

#[derive(Debug, Args)]
struct GeometryArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Elements per subarray (or in the ULA).
    #[arg(long)]
    n: usize,
}

impl FamilyArgs {
    fn family(&self) -> Result<GeometryFamily, Error> {
        match (self.nb, self.p, self.gap) {
            (None, None, None) => Ok(GeometryFamily::Ula { d: self.d }),
            (None, _, _) => Err(Error::InvalidRequest("--p/--gap need --nb".into())),
            (Some(_), Some(_), Some(_)) => Err(Error::InvalidRequest(
                "give either --p or --gap, not both".into(),
            )),
            (Some(nb), p, gap) => {
                let block_gap = match (p, gap) {
                    (Some(p), _) => p as f64 * self.d / nb as f64,
                    (_, Some(g)) => g,
                    _ => return Err(Error::InvalidRequest("--nb needs --p or --gap".into())),
                };
                Ok(GeometryFamily::Nula {
                    n_blocks: nb,
                    d: self.d,
                    block_gap,
                })
            }
        }
    }
}

impl GeometryArgs {
    fn geometry(&self) -> Result<ArrayGeometry, Error> {
        self.family.family()?.at(self.n)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Io(_) => EXIT_IO,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn angle_deg(name: &str, value: f64) -> Result<Angle, Error> {
    Angle::from_degrees(value)
        .map_err(|_| Error::InvalidRequest(format!("--{name} {value} is outside [-90, 90]")))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Error> {
    match command {
        Command::Gl { d, theta1 } => cmd_gl(d, theta1, out),
        Command::Design(args) => cmd_design(&args, out),
        Command::Enumerate {
            d,
            theta_max,
            max_nb,
            max_gap,
            n,
            theta1,
        } => cmd_enumerate(d, theta_max, max_nb, max_gap, n, theta1, out),
        Command::Verify {
            d,
            theta_max,
            nb,
            p,
        } => {
            let req = DesignRequest::new(d, angle_deg("theta-max", theta_max)?, None)?;
            let design = NulaDesign::new(nb, p, d)?;
            let report = verify_cancellation(&design, d, req.theta_max());
            print_design(&design, None, out)?;
            print_report(&report, out)
        }
        Command::Pattern {
            geometry,
            theta1,
            resolution,
            out: path,
        } => {
            let geom = geometry.geometry()?;
            let table = pattern_table(&geom, angle_deg("theta1", theta1)?, resolution)?;
            write_atomic(&path, &table.to_delimited())?;
            writeln!(out, "wrote {} rows to {}", table.rows.len(), path.display())?;
            Ok(EXIT_OK)
        }
        Command::Sinr { geometry, scenario } => {
            let geom = geometry.geometry()?;
            let sc = ScenarioFile::read(&scenario)?.to_scenario()?;
            let r = compute_sinr(&geom, &sc)?;
            writeln!(out, "SINR = {:.6} linear ({:.3} dB)", r.sinr, r.sinr_db())?;
            for (i, a2) in &r.per_user_leakage {
                writeln!(out, "user {i}: |alpha|^2 = {a2:.6e}")?;
            }
            writeln!(out, "total leakage = {:.6e}", r.total_leakage)?;
            writeln!(out, "FP gap = {:.6e}", r.fp_gap)?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            family,
            scenario,
            n_list,
            out: path,
        } => {
            if n_list.contains(&0) {
                return Err(Error::InvalidRequest(
                    "--n-list entries must be positive".into(),
                ));
            }
            let fam = family.family()?;
            let sc = ScenarioFile::read(&scenario)?.to_scenario()?;
            let rows = fp_convergence_sweep(&fam, &sc, &n_list)?;
            let text = sweep_to_delimited(&rows);
            match path {
                Some(p) => {
                    write_atomic(&p, &text)?;
                    writeln!(out, "wrote {} rows to {}", rows.len(), p.display())?;
                }
                None => write!(out, "{text}")?,
            }
            Ok(EXIT_OK)
        }
        Command::Scaffold { out: path } => {
            write_atomic(&path, &ScenarioFile::scaffold().to_toml())?;
            writeln!(out, "wrote {}", path.display())?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_gl(d: f64, theta1: f64, out: &mut dyn Write) -> Result<i32, Error> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidRequest(format!(
            "--d must be positive, got {d}"
        )));
    }
    let set = gl_enumerate(d, angle_deg("theta1", theta1)?);
    if set.is_empty() {
        writeln!(out, "no grating lobes")?;
    } else {
        writeln!(out, "{} grating lobe(s)", set.len())?;
        for l in set.lobes() {
            writeln!(out, "k={} phi={:.2}deg", l.k, l.direction.degrees())?;
        }
    }
    Ok(EXIT_OK)
}

fn print_design(
    design: &NulaDesign,
    n_sub: Option<usize>,
    out: &mut dyn Write,
) -> Result<(), Error> {
    writeln!(
        out,
        "N_b={} p={} coprime={}",
        design.n_blocks(),
        design.p(),
        design.is_coprime()
    )?;
    writeln!(out, "delta_D={}", design.block_gap())?;
    match n_sub {
        Some(n) => {
            let g = design.geometry(n)?;
            writeln!(
                out,
                "N={n} D={} total_elements={}",
                g.pitch(),
                g.total_elements()
            )?;
            writeln!(out, "aperture={}", g.aperture())?;
        }
        None => writeln!(out, "D=(N-1)*{}+{}", design.d(), design.block_gap())?,
    }
    Ok(())
}

fn print_report(report: &CancellationReport, out: &mut dyn Write) -> Result<i32, Error> {
    for c in &report.checks {
        writeln!(
            out,
            "check theta1={:.6}deg k={} pk/N_b_integer={} |alpha_b|={:.3e} {}",
            c.theta1.degrees(),
            c.k,
            c.ratio_is_integer,
            c.block_leakage,
            if c.passed() { "ok" } else { "FAIL" }
        )?;
    }
    writeln!(
        out,
        "checked {} lobes over {} steering angles",
        report.checks.len(),
        report.steering_grid.len()
    )?;
    if report.pass {
        writeln!(out, "certified")?;
        Ok(EXIT_OK)
    } else {
        writeln!(
            out,
            "certification FAILED ({} lobe checks)",
            report.failures().count()
        )?;
        Ok(EXIT_UNCERTIFIED)
    }
}

fn cmd_design(args: &DesignArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let req = DesignRequest::new(args.d, angle_deg("theta-max", args.theta_max)?, args.budget)?;
    let design = design_nula(
        &req,
        DesignOverrides {
            n_blocks: args.nb,
            p: args.p,
        },
    )?;
    let n_sub = args
        .n
        .or_else(|| args.budget.map(|b| (b / design.n_blocks()) as usize));
    if let (Some(n), Some(b)) = (n_sub, args.budget) {
        if (n as u64) * design.n_blocks() > b {
            return Err(Error::Infeasible(format!(
                "{n} x {} elements exceed the budget {b}",
                design.n_blocks()
            )));
        }
    }
    print_design(&design, n_sub, out)?;
    let report = verify_cancellation(&design, args.d, req.theta_max());
    print_report(&report, out)
}

fn cmd_enumerate(
    d: f64,
    theta_max: f64,
    max_nb: u64,
    max_gap: f64,
    n: Option<usize>,
    theta1: Option<f64>,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    let req = DesignRequest::new(d, angle_deg("theta-max", theta_max)?, None)?;
    let designs = enumerate_designs(&req, max_nb, max_gap)?;
    for x in &designs {
        writeln!(
            out,
            "N_b={} p={} delta_D={}",
            x.n_blocks(),
            x.p(),
            x.block_gap()
        )?;
    }
    writeln!(out, "{} certified designs", designs.len())?;
    match (n, theta1) {
        (Some(n), Some(t1)) => {
            let choice = optimize_finite_n(&req, n, &designs, angle_deg("theta1", t1)?)?;
            writeln!(
                out,
                "best for N={n}: N_b={} p={} worst_residual={:.6e}",
                choice.design.n_blocks(),
                choice.design.p(),
                choice.objective
            )?;
        }
        (None, None) => {}
        _ => return Err(Error::InvalidRequest("--n and --theta1 go together".into())),
    }
    Ok(EXIT_OK)
}
