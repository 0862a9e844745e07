//! `distancing`: command-line access to the social-distancing game toolkit.
//!
//! Exit status is 0 on success (including empty findings), 1 for bad input
//! and 2 when an internal consistency check fails.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use distancing::analysis::{analyze, emit_report, AnalysisOptions, Format};
use distancing::dynamics::{converged_certificate, replicator_descent, seeded_start, ReplicatorParams};
use distancing::equilibrium::{construct_equilibrium, enumerate_nash, verify_nash, DEFAULT_NASH_MAX_N, DEFAULT_TOL};
use distancing::graph::to_labels;
use distancing::io::{
    parse_label_list, parse_network, payoff_csv, CertificateJson, ConstructionJson, EdgeListOptions, NetworkFile,
    StabilityJson, StrategyFile, SupportJson, TrajectoryJson,
};
use distancing::search::{
    check_support_conditions, enumerate_r_regular_supports, find_maximal_r_regular, DEFAULT_ENUMERATION_MAX_N,
    DEFAULT_RESTARTS,
};
use distancing::stability::{classify, SPECTRAL_TOL};
use distancing::{Error, Method, Network, Scheme};

#[derive(Parser, Debug)]
#[command(name = "distancing", version, about = "Equilibrium social-distancing strategies on contact networks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Network file: JSON, or an edge list (`n`, then `i j` per line). `-` reads stdin.
    #[arg(long, global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Numerical tolerance for Nash checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Weighting scheme; overrides the file's setting.
    #[arg(long, global = true, value_enum)]
    scheme: Option<SchemeArg>,
    /// Comma-separated node weights; overrides the file's setting.
    #[arg(long, global = true, value_name = "W1,W2,...")]
    weights: Option<String>,
    /// Self-contact on the diagonal; overrides the file's setting.
    #[arg(long, global = true)]
    diag: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Unweighted,
    Additive,
    Multiplicative,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Unweighted => Scheme::Unweighted,
            SchemeArg::Additive => Scheme::Additive,
            SchemeArg::Multiplicative => Scheme::Multiplicative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Structural,
    Spectral,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Structural => Method::Structural,
            MethodArg::Spectral => Method::Spectral,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Complement network (diagonal becomes 1 − diag).
    Complement,
    /// Search for a maximal r-regular support.
    Find {
        #[arg(long, default_value_t = 0)]
        r: usize,
        /// Enumerate every maximal r-regular support (n ≤ 16).
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
    },
    /// Build the equilibrium strategy on a support.
    Equilibrium {
        /// Comma-separated 1-based node labels.
        #[arg(long, value_name = "LABELS")]
        support: String,
        /// Regularity degree; taken from the support when omitted.
        #[arg(long)]
        r: Option<usize>,
    },
    /// Check the Nash conditions for a strategy.
    Verify {
        /// JSON file `{"x": [...]}`.
        #[arg(long, value_name = "FILE")]
        strategy: PathBuf,
    },
    /// Rigidity class of an equilibrium.
    Classify {
        #[arg(long, value_name = "FILE")]
        strategy: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Every equilibrium, by exhaustive support enumeration.
    Enumerate {
        #[arg(long, default_value_t = DEFAULT_NASH_MAX_N)]
        max_n: usize,
    },
    /// Replicator descent from a given or random interior start.
    Simulate {
        /// Strategy file or `random`.
        #[arg(long, default_value = "random")]
        x0: String,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        /// Step fraction in (0, 1].
        #[arg(long, default_value_t = 1.0)]
        dt: f64,
        /// Stop when the largest coordinate change falls below this.
        #[arg(long, default_value_t = 1e-10)]
        conv_tol: f64,
        /// Write `step,payoff` rows here.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Search, construct, verify and classify for several r.
    Analyze {
        /// Comma-separated regularity degrees.
        #[arg(long, default_value = "0", value_delimiter = ',')]
        r: Vec<usize>,
        /// Exhaustive search plus the Nash oracle cross-check.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        /// Largest network reconciled with the oracle.
        #[arg(long, default_value_t = DEFAULT_NASH_MAX_N)]
        oracle_max_n: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(m) => Failure::Invariant(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn read_text(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }
}

fn load_network(g: &Global) -> Result<Network, Failure> {
    let path = g
        .input
        .as_ref()
        .ok_or_else(|| Failure::Input("--input is required".into()))?;
    let weights = g
        .weights
        .as_deref()
        .map(|w| {
            w.split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Input(format!("--weights: {e}")))
        })
        .transpose()?;
    let opts = EdgeListOptions { diag: g.diag, weights, scheme: g.scheme.map(Scheme::from) };
    parse_network(&read_text(path)?, &opts)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn certificate_text(c: &CertificateJson) -> String {
    let slack = c.ineq_slack.map_or("none".to_string(), |s| format!("{s:e}"));
    format!(
        "nash: {}\nlambda: {}\nsupport: {:?}\neq_residual: {:e}\nineq_slack: {slack}\nx: {:?}\n",
        c.is_nash, c.lambda, c.support, c.eq_residual, c.x
    )
}

fn support_text(s: &SupportJson) -> String {
    format!(
        "nodes: {:?}\nr: {}\ncomponents: {:?}\nminimal: {:?}\noutside_ok: {}\nmaximal_ok: {}\nmode: {:?}\n",
        s.nodes, s.r, s.components, s.minimal, s.outside_ok, s.maximal_ok, s.mode
    )
}

fn run(cli: Cli) -> Result<String, Failure> {
    let g = &cli.global;
    let net = load_network(g)?;
    let text = g.format == OutputFormat::Text;
    let out = match cli.command {
        Command::Complement => {
            let c = NetworkFile::from_network(&net.complement());
            if text {
                let mut s = format!("{}\n", c.n);
                for [a, b] in &c.edges {
                    let _ = writeln!(s, "{a} {b}");
                }
                s
            } else {
                json(&c)
            }
        }
        Command::Find { r, exact, restarts } => {
            if r >= net.n() {
                return Err(Failure::Input(format!("r = {r} is infeasible on {} nodes", net.n())));
            }
            if exact {
                let all: Vec<SupportJson> = enumerate_r_regular_supports(&net, r, DEFAULT_ENUMERATION_MAX_N)?
                    .iter()
                    .map(SupportJson::from)
                    .collect();
                if text {
                    if all.is_empty() {
                        format!("no supports found for r={r}\n")
                    } else {
                        all.iter().map(support_text).collect::<Vec<_>>().join("\n")
                    }
                } else {
                    json(&all)
                }
            } else {
                let found = find_maximal_r_regular(&net, r, g.seed, restarts).map(|s| SupportJson::from(&s));
                match (&found, text) {
                    (None, true) => format!("no supports found for r={r}\n"),
                    (Some(s), true) => support_text(s),
                    (_, false) => json(&found),
                }
            }
        }
        Command::Equilibrium { support, r } => {
            let nodes = parse_label_list(&support, net.n())?;
            let r = r.unwrap_or_else(|| {
                net.neighbors(nodes[0]).iter().filter(|u| nodes.contains(u)).count()
            });
            let s = check_support_conditions(&net, &nodes, r)?;
            let c = construct_equilibrium(&net, &s)?;
            let is_nash = verify_nash(&net, &c.strategy, g.tol)?.is_nash;
            let out = ConstructionJson::new(&c, &s, is_nash);
            if text {
                format!(
                    "lambda: {}\nsupport: {:?}\nr: {}\nsufficient_conditions: {}\nnash: {}\nx: {:?}\n",
                    out.lambda, out.support, out.r, out.sufficient_conditions, out.is_nash, out.x
                )
            } else {
                json(&out)
            }
        }
        Command::Verify { strategy } => {
            let x = StrategyFile::parse(&read_text(&strategy)?)?;
            let cert = CertificateJson::from(&verify_nash(&net, &x, g.tol)?);
            if text {
                certificate_text(&cert)
            } else {
                json(&cert)
            }
        }
        Command::Classify { strategy, method } => {
            let x = StrategyFile::parse(&read_text(&strategy)?)?;
            let report = StabilityJson::from(&classify(&net, &x, None, method.into(), SPECTRAL_TOL)?);
            if text {
                format!(
                    "class: {}\nflexible: {}\neig_min: {:?}\neig_max: {:?}\nmethod: {:?}\nwitness: {:?}\n",
                    serde_json::to_value(report.class).expect("class serializes").as_str().unwrap_or_default(),
                    report.flexible,
                    report.eig_min,
                    report.eig_max,
                    report.method,
                    report.witness
                )
            } else {
                json(&report)
            }
        }
        Command::Enumerate { max_n } => {
            let all = enumerate_nash(&net, g.tol, max_n)?;
            let certs: Vec<CertificateJson> = all.equilibria.iter().map(CertificateJson::from).collect();
            if text {
                let mut s = format!(
                    "{} equilibria over {} supports ({} singular, {} inconsistent)\n",
                    certs.len(),
                    all.supports_checked,
                    all.singular,
                    all.inconsistent
                );
                for c in &certs {
                    let _ = writeln!(s, "{:>12.10}  {:?}", c.lambda, c.support);
                }
                s
            } else {
                json(&certs)
            }
        }
        Command::Simulate { x0, steps, dt, conv_tol, csv } => {
            let start = if x0 == "random" {
                seeded_start(net.n(), g.seed, 0)
            } else {
                StrategyFile::parse(&read_text(&PathBuf::from(&x0))?)?
            };
            let params = ReplicatorParams { dt, max_steps: steps, conv_tol, record_states: false };
            let traj = replicator_descent(&net, &start, &params)?;
            let cert = if traj.converged { Some(converged_certificate(&traj, &net, g.tol)?) } else { None };
            if let Some(path) = csv {
                std::fs::write(&path, payoff_csv(&traj))
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            let summary = TrajectoryJson::new(&traj, cert.as_ref());
            if text {
                let mut s = format!(
                    "steps: {}\nconverged: {}\ninitial_payoff: {}\nfinal_payoff: {}\n",
                    summary.steps, summary.converged, summary.initial_payoff, summary.final_payoff
                );
                if let Some(c) = &cert {
                    let _ = writeln!(s, "endpoint support: {:?}", to_labels(&c.support));
                    let _ = writeln!(s, "endpoint nash: {}", c.is_nash);
                }
                s
            } else {
                json(&summary)
            }
        }
        Command::Analyze { r, exact, restarts, oracle_max_n } => {
            let opts = AnalysisOptions { r_values: r, exact, tol: g.tol, seed: g.seed, restarts, oracle_max_n };
            let report = analyze(&net, &opts)?;
            emit_report(&report, if text { Format::Text } else { Format::Json })
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
