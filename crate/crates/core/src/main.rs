use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stablab::cli::{error_exit_code, parse_config, render_human, run, Command, Job};
use stablab::Error;

#[derive(Parser)]
#[command(name = "stablab", version, about = "Exact stable envelopes, R-matrices, quantum multiplication and groupoid checks")]
struct Cli {
    /// Machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Torus fixed points and tangent weights.
    FixedPoints(Flags),
    /// Equivariant roots.
    Roots(Flags),
    /// Root or Kähler arrangement as JSON.
    Arrangement(Flags),
    /// Alcove boundaries of a periodic arrangement.
    Alcoves(Flags),
    /// Walls crossed by a straight segment.
    Path(Flags),
    /// Stable envelope in a chamber.
    Stab(Flags),
    /// Slopes where the K-theoretic envelope jumps.
    JumpScan(Flags),
    /// R-matrix between two chambers.
    Rmatrix(Flags),
    /// Yang-Baxter equation for a two-site R-matrix.
    YbCheck(Flags),
    /// Wall factorization across one root wall.
    WallCheck(Flags),
    /// Quantum multiplication by a divisor.
    Qmult(Flags),
    /// Flatness and structural checks of the quantum connection.
    ConnectionCheck(Flags),
    /// Hopf and R-matrix identities in the truncated Fock module.
    HeisenbergCheck(Flags),
    /// Groupoid relations for a wall assignment.
    GroupoidCheck(Flags),
    /// Run a job file.
    Run { jobfile: String },
}

// Every flag any command takes; each command accepts only its own subset.
#[derive(Args, Default)]
struct Flags {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Heisenberg truncation degree.
    #[arg(long = "N")]
    big_n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    chamber: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    target: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    slope: Option<String>,
    #[arg(long)]
    polarization: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    interval: Option<String>,
    #[arg(long = "max-den")]
    max_den: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambdas: Option<String>,
    #[arg(long)]
    kappa: bool,
    #[arg(long = "z-symbolic")]
    z_symbolic: bool,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long)]
    identities: Option<String>,
    #[arg(long)]
    walls: Option<String>,
    #[arg(long)]
    kind: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    arrangement: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    from: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    shift: Option<String>,
    /// Two-site R-matrix as a JSON array of strings.
    #[arg(long)]
    r: Option<String>,
}

impl Flags {
    fn pairs(self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k.to_string(), v));
            }
        };
        put("family", self.family);
        put("k", self.k);
        put("n", self.n);
        put("N", self.big_n);
        put("chamber", self.chamber);
        put("target", self.target);
        put("mode", self.mode);
        put("slope", self.slope);
        put("polarization", self.polarization);
        put("interval", self.interval);
        put("max-den", self.max_den);
        put("lambda", self.lambda);
        put("lambdas", self.lambdas);
        put("kappa", self.kappa.then(|| "true".into()));
        put("z-symbolic", self.z_symbolic.then(|| "true".into()));
        put("z", self.z);
        put("identities", self.identities);
        put("walls", self.walls);
        put("kind", self.kind);
        put("window", self.window);
        put("arrangement", self.arrangement);
        put("from", self.from);
        put("shift", self.shift);
        put("r", self.r);
        out
    }
}

fn job_of(cmd: Cmd) -> Result<Job, Error> {
    let (c, flags) = match cmd {
        Cmd::Run { jobfile } => {
            let text = std::fs::read_to_string(&jobfile).map_err(|e| Error::Io(format!("{jobfile}: {e}")))?;
            return parse_config(&text);
        }
        Cmd::FixedPoints(f) => (Command::FixedPoints, f),
        Cmd::Roots(f) => (Command::Roots, f),
        Cmd::Arrangement(f) => (Command::Arrangement, f),
        Cmd::Alcoves(f) => (Command::Alcoves, f),
        Cmd::Path(f) => (Command::Path, f),
        Cmd::Stab(f) => (Command::Stab, f),
        Cmd::JumpScan(f) => (Command::JumpScan, f),
        Cmd::Rmatrix(f) => (Command::Rmatrix, f),
        Cmd::YbCheck(f) => (Command::YbCheck, f),
        Cmd::WallCheck(f) => (Command::WallCheck, f),
        Cmd::Qmult(f) => (Command::Qmult, f),
        Cmd::ConnectionCheck(f) => (Command::ConnectionCheck, f),
        Cmd::HeisenbergCheck(f) => (Command::HeisenbergCheck, f),
        Cmd::GroupoidCheck(f) => (Command::GroupoidCheck, f),
    };
    Job::from_flags(c, flags.pairs())
}

fn threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("STABLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Usage(format!("STABLAB_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = threads().and_then(|_| job_of(cli.command)).and_then(|job| {
        let out = run(&job)?;
        let text = if cli.json {
            serde_json::to_string_pretty(&out.value).expect("values serialize") + "\n"
        } else {
            render_human(&out.value)
        };
        match cli.output.as_ref().or(job.output.as_ref()) {
            Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{path}: {e}")))?,
            None => print!("{text}"),
        }
        Ok(out.status.exit_code())
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("stablab: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
