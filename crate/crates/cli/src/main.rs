//! Command-line front end: simulate, analyze, sweep, and verify workflows
//! with reproducible file outputs.
//!
//! Exit codes: 0 on success, 2 on argument or I/O problems, 1 when the
//! verify battery reports a failing property.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bipartite_walk::{analysis, CurveSource, Layout, VerifyLimits, WalkParams};

#[derive(Parser)]
#[command(
    name = "bipartite-walk",
    about = "State transfer by discrete-time quantum walk on complete bipartite graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full simulation and emit a fidelity curve.
    Simulate(SimulateArgs),
    /// Compute the transfer report: optimal step count, envelope, attained peak.
    Analyze(AnalyzeArgs),
    /// Evaluate the fidelity envelope over ranges of part sizes.
    Sweep(SweepArgs),
    /// Run the cross-validation battery (simulator vs dense reference vs closed forms).
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    Same,
    Opposite,
}

impl From<LayoutArg> for Layout {
    fn from(value: LayoutArg) -> Layout {
        match value {
            LayoutArg::Same => Layout::SamePart,
            LayoutArg::Opposite => Layout::OppositePart,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct GraphArgs {
    /// Vertices in part 1 (the sender's part).
    #[arg(long)]
    m: usize,
    /// Vertices in part 2.
    #[arg(long)]
    n: usize,
    /// Receiver placement relative to the sender.
    #[arg(long, value_enum, default_value = "opposite")]
    layout: LayoutArg,
    /// Sender vertex in part 1 (1-based).
    #[arg(long)]
    sender: Option<usize>,
    /// Receiver vertex (1-based; part 1 for same, part 2 for opposite).
    #[arg(long)]
    receiver: Option<usize>,
}

impl GraphArgs {
    fn params(&self) -> Result<WalkParams, String> {
        let layout = Layout::from(self.layout);
        let sender = self.sender.unwrap_or(1);
        let receiver = self.receiver.unwrap_or(match layout {
            Layout::SamePart => 2,
            Layout::OppositePart => 1,
        });
        WalkParams::new(self.m, self.n, layout, sender, receiver).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Steps to simulate; defaults to 4x the optimal step count.
    #[arg(long)]
    steps: Option<usize>,
    /// Comma-separated curve sources: full, reduced, closed.
    #[arg(long, value_delimiter = ',', default_value = "full")]
    sources: Vec<String>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the final state snapshot as CSV.
    #[arg(long)]
    state_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Suppress progress notes on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Scan window for the peak search; defaults to max(4*T_opt, 100).
    #[arg(long)]
    steps: Option<usize>,
    /// Include the scanned curve in the report.
    #[arg(long)]
    curve: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Part-1 sizes, inclusive range `a:b` or a single value.
    #[arg(long)]
    m: String,
    /// Part-2 sizes, inclusive range `a:b` or a single value.
    #[arg(long)]
    n: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest m*n compared against the dense reference.
    #[arg(long, default_value_t = 36)]
    max_product: usize,
    /// Steps per dense-vs-simulator comparison.
    #[arg(long, default_value_t = 50)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Suppress the per-property result lines.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => run_simulate(args),
        Command::Analyze(args) => run_analyze(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Verify(args) => return run_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Write through a closure either to a file or to stdout.
fn write_output<F>(out: &Option<PathBuf>, write: F) -> Result<(), String>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            let mut w = BufWriter::new(file);
            write(&mut w).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            w.flush()
                .map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w).map_err(|e| format!("cannot write to stdout: {e}"))
        }
    }
}

fn default_steps(params: &WalkParams) -> usize {
    match bipartite_walk::transfer_time(params) {
        Ok(report) => 4 * report.t_opt,
        // Sizes outside the analytic layer (opposite part with m = 1 or
        // n = 1) fall back to the standard scan floor.
        Err(_) => 100,
    }
}

fn run_simulate(args: SimulateArgs) -> Result<(), String> {
    let params = args.graph.params()?;
    let steps = args.steps.unwrap_or_else(|| default_steps(&params));
    if steps == 0 {
        return Err("--steps must be at least 1".into());
    }
    let sources = args
        .sources
        .iter()
        .map(|s| s.parse::<CurveSource>())
        .collect::<Result<Vec<_>, _>>()?;
    let curves = analysis::curve(&params, steps, &sources).map_err(|e| e.to_string())?;
    if !args.quiet {
        eprintln!(
            "simulated {steps} steps on K_{{{},{}}} ({})",
            params.m, params.n, params.layout
        );
    }
    write_output(&args.out, |w| match args.format {
        FormatArg::Csv => analysis::write_curves_csv(&curves, w),
        FormatArg::Json => write_curves_json(&curves, w),
    })?;
    if let Some(path) = &args.state_out {
        let state = bipartite_walk::evolve(params, steps).map_err(|e| e.to_string())?;
        let file =
            File::create(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        state
            .write_csv(BufWriter::new(file))
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn write_curves_json(curves: &[analysis::FidelityCurve], w: &mut dyn Write) -> io::Result<()> {
    write!(w, "[")?;
    for (k, curve) in curves.iter().enumerate() {
        if k > 0 {
            write!(w, ",")?;
        }
        write!(
            w,
            "{{\"m\":{},\"n\":{},\"layout\":\"{}\",\"source\":\"{}\",\"points\":[",
            curve.params.m, curve.params.n, curve.params.layout, curve.source
        )?;
        for (i, (step, fidelity)) in curve.points.iter().enumerate() {
            if i > 0 {
                write!(w, ",")?;
            }
            write!(w, "[{},{:.16e}]", step, fidelity)?;
        }
        write!(w, "]}}")?;
    }
    writeln!(w, "]")
}

fn run_analyze(args: AnalyzeArgs) -> Result<(), String> {
    let params = args.graph.params()?;
    let mut report = analysis::transfer_report(&params, args.steps).map_err(|e| {
        format!("{e}; the `simulate` command covers sizes outside the analytic layer")
    })?;
    if !args.curve {
        report.curve = None;
    }
    if !args.quiet {
        eprintln!(
            "K_{{{},{}}} {}: T_opt={} F_max={:.6} F(T)={:.6}",
            params.m, params.n, params.layout, report.t_opt, report.f_max_analytic, report.f_at_t
        );
    }
    write_output(&args.out, |w| match args.format {
        FormatArg::Json => report.write_json(w),
        FormatArg::Csv => write_report_csv(&report, w),
    })
}

fn write_report_csv(report: &bipartite_walk::TransferReport, w: &mut dyn Write) -> io::Result<()> {
    writeln!(w, "key,value")?;
    writeln!(w, "m,{}", report.params.m)?;
    writeln!(w, "n,{}", report.params.n)?;
    writeln!(w, "layout,{}", report.params.layout)?;
    if let Some(omega) = report.omega {
        writeln!(w, "omega,{omega:.16e}")?;
    }
    writeln!(w, "T_opt,{}", report.t_opt)?;
    writeln!(w, "F_max_analytic,{:.16e}", report.f_max_analytic)?;
    writeln!(w, "F_at_T,{:.16e}", report.f_at_t)?;
    if let Some(step) = report.peak_step {
        writeln!(w, "peak_step,{step}")?;
    }
    if let Some(f) = report.peak_fidelity {
        writeln!(w, "peak_fidelity,{f:.16e}")?;
    }
    Ok(())
}

/// Inclusive `a:b` range or a single value; sweep sizes must be >= 2.
fn parse_range(text: &str) -> Result<Vec<usize>, String> {
    let (lo, hi) = match text.split_once(':') {
        Some((a, b)) => {
            let lo = a
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("bad range '{text}'"))?;
            let hi = b
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("bad range '{text}'"))?;
            (lo, hi)
        }
        None => {
            let v = text
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("bad range '{text}'"))?;
            (v, v)
        }
    };
    if lo < 2 {
        return Err(format!("sweep sizes start at 2, got {lo}"));
    }
    if hi < lo {
        return Err(format!("empty range '{text}'"));
    }
    Ok((lo..=hi).collect())
}

fn run_sweep(args: SweepArgs) -> Result<(), String> {
    let m_values = parse_range(&args.m)?;
    let n_values = parse_range(&args.n)?;
    let grid = analysis::sweep_fmax(&m_values, &n_values);
    if !args.quiet {
        eprintln!(
            "swept {} x {} envelope grid",
            m_values.len(),
            n_values.len()
        );
    }
    write_output(&args.out, |w| match args.format {
        FormatArg::Csv => grid.write_csv(w),
        FormatArg::Json => grid.write_json(w),
    })
}

fn run_verify(args: VerifyArgs) -> ExitCode {
    let limits = VerifyLimits {
        max_product: args.max_product,
        oracle_steps: args.steps,
        ..VerifyLimits::default()
    };
    let report = analysis::verify(&limits);
    // Per-property lines go to stderr so the structured report can be piped.
    if !args.quiet {
        for check in &report.checks {
            eprintln!(
                "{} {:<28} worst {:>12.3e}  tol {:>8.0e}  ({} cases)",
                if check.passed { "PASS" } else { "FAIL" },
                check.name,
                check.worst_residual,
                check.tolerance,
                check.cases
            );
        }
    }
    let write_result = write_output(&args.out, |w| match args.format {
        FormatArg::Json => report.write_json(w),
        FormatArg::Csv => report.write_csv(w),
    });
    if let Err(message) = write_result {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
