//! Command-line surface for the tropical periodic Toda toolkit.
//!
//! Subcommands: `evolve`, `curve`, `theta`, `fay`, `solve`, `discrete`,
//! `udlimit`. Inputs are JSON (a file path, inline JSON, or `-` for stdin);
//! outputs are JSON or CSV with rationals as exact `p/q` strings.
//!
//! Exit codes: 0 ok, 2 input error, 3 precondition failure (non-generic
//! data, invalid state, ...), 4 numeric non-convergence.

use std::fs;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use troptoda::curve::{build_graph, curve_data};
use troptoda::dtoda::{ud_trajectory_compare, DEFAULT_DIGITS};
use troptoda::error::Error;
use troptoda::fay::FayProblem;
use troptoda::hyperell::{
    a_period_matrix, b_period_limits, basis_change, root_limit_error, scaled_curve,
};
use troptoda::io::*;
use troptoda::rational::{fmt_rat, parse_rat_vec, Rat};
use troptoda::taudyn::{iota, sigma};
use troptoda::theta::{in_domain, theta, theta_char};
use troptoda::udtoda::{evolve_step, invariants};

#[derive(Parser)]
#[command(name = "troptoda", version, about = "Exact tropical periodic Toda toolkit")]
struct Cli {
    /// Input: a file path, inline JSON, or '-' for stdin
    #[arg(long, global = true)]
    input: Option<String>,

    /// Output file; stdout when omitted
    #[arg(long, global = true)]
    output: Option<String>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed echoed into outputs; all subcommands are deterministic
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Working precision (decimal digits) for the numeric harnesses
    #[arg(long, global = true)]
    precision: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run a piecewise-linear trajectory with invariant columns
    Evolve {
        /// Number of steps
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Spectral curve data and metric graph from invariants
    Curve,
    /// Evaluate the min-plus theta function (with optional characteristic
    /// and optional domain query)
    Theta,
    /// Check the three-term trisecant identity on a point configuration
    Fay,
    /// Run the theta-function solution and verify it against the direct
    /// evolution
    Solve,
    /// Compare the discrete lattice against its ultra-discrete limit
    Discrete,
    /// Hyperelliptic-limit harness: root scaling and period matrices
    Udlimit,
}

fn read_input(cli: &Cli) -> Result<String, Error> {
    let spec = cli
        .input
        .as_deref()
        .ok_or_else(|| Error::Input("--input is required".into()))?;
    if spec == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Input(format!("stdin: {e}")))?;
        Ok(buf)
    } else if spec.trim_start().starts_with('{') {
        Ok(spec.to_string())
    } else {
        fs::read_to_string(spec).map_err(|e| Error::Input(format!("{spec}: {e}")))
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))
}

fn write_output(cli: &Cli, content: &str) -> Result<(), Error> {
    match &cli.output {
        Some(path) => fs::write(path, content).map_err(|e| Error::Input(format!("{path}: {e}"))),
        None => {
            print!("{content}");
            std::io::stdout()
                .flush()
                .map_err(|e| Error::Input(format!("stdout: {e}")))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Input(_) => 2,
        Error::RootOrderingFailed(_) | Error::QuadratureNotConverged(_) => 4,
        _ => 3,
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    match cli.command {
        Command::Evolve { steps } => cmd_evolve(cli, steps),
        Command::Curve => cmd_curve(cli),
        Command::Theta => cmd_theta(cli),
        Command::Fay => cmd_fay(cli),
        Command::Solve => cmd_solve(cli),
        Command::Discrete => cmd_discrete(cli),
        Command::Udlimit => cmd_udlimit(cli),
    }
}

fn cmd_evolve(cli: &Cli, steps: usize) -> Result<(), Error> {
    let input: StateJson = parse_json(&read_input(cli)?)?;
    let mut state = input.to_state()?;
    let c0 = invariants(&state);
    let mut rows = Vec::new();
    for t in 0..=steps {
        for n in 0..state.sites() {
            rows.push((t, n + 1, fmt_rat(&state.q()[n]), fmt_rat(&state.w()[n])));
        }
        if invariants(&state) != c0 {
            return Err(Error::InvalidState(format!(
                "invariant drift detected at step {t}"
            )));
        }
        if t < steps {
            state = evolve_step(&state);
        }
    }
    let inv_json = InvariantsJson::from_invariants(&c0);
    match cli.format {
        Format::Csv => {
            let mut out = format!("# invariants C = {:?}\nt,n,Q,W\n", inv_json.c);
            for (t, n, q, w) in rows {
                out.push_str(&format!("{t},{n},{q},{w}\n"));
            }
            write_output(cli, &out)
        }
        Format::Json => {
            let doc = json!({
                "invariants": inv_json,
                "seed": cli.seed,
                "rows": rows.iter().map(|(t, n, q, w)| json!({
                    "t": t, "n": n, "Q": q, "W": w
                })).collect::<Vec<_>>(),
            });
            write_output(cli, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
    }
}

fn cmd_curve(cli: &Cli) -> Result<(), Error> {
    let input: InvariantsJson = parse_json(&read_input(cli)?)?;
    let inv = input.to_invariants()?;
    let cd = curve_data(&inv)?;
    let graph = build_graph(&cd)?;
    match cli.format {
        Format::Json => {
            let doc = curve_to_json(&cd, &graph);
            write_output(cli, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
        Format::Csv => {
            // corner locus for plotting: bounded edges then rays
            let mut out = String::from("kind,x1,y1,x2,y2,dir_x,dir_y,length\n");
            for e in graph.edges() {
                let a = &graph.vertices()[e.from];
                let b = &graph.vertices()[e.to];
                out.push_str(&format!(
                    "edge,{},{},{},{},{},{},{}\n",
                    fmt_rat(&a.x),
                    fmt_rat(&a.y),
                    fmt_rat(&b.x),
                    fmt_rat(&b.y),
                    e.dir.0,
                    e.dir.1,
                    fmt_rat(&e.length)
                ));
            }
            for r in graph.rays() {
                out.push_str(&format!(
                    "ray,{},{},,,{},{},\n",
                    fmt_rat(&r.origin.0),
                    fmt_rat(&r.origin.1),
                    r.dir.0,
                    r.dir.1
                ));
            }
            write_output(cli, &out)
        }
    }
}

fn cmd_theta(cli: &Cli) -> Result<(), Error> {
    let input: ThetaQueryJson = parse_json(&read_input(cli)?)?;
    let k = input.parse_k()?;
    let z = input.parse_z()?;
    let result = match input.parse_beta()? {
        Some(beta) => theta_char(&k, &beta, &z)?,
        None => theta(&k, &z)?,
    };
    let domain = match &input.m {
        Some(m) => Some(in_domain(&k, &z, m)?),
        None => None,
    };
    let doc = ThetaResultJson::from_result(&result, domain);
    write_output(cli, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
}

fn cmd_fay(cli: &Cli) -> Result<(), Error> {
    let input: FayInputJson = parse_json(&read_input(cli)?)?;
    if input.points.len() != 4 {
        return Err(Error::Input("exactly four points required".into()));
    }
    let inv = InvariantsJson {
        g: input.g,
        c: input.c.clone(),
    }
    .to_invariants()?;
    let cd = curve_data(&inv)?;
    let graph = build_graph(&cd)?;
    let points = [
        input.points[0].resolve(&graph, input.g)?,
        input.points[1].resolve(&graph, input.g)?,
        input.points[2].resolve(&graph, input.g)?,
        input.points[3].resolve(&graph, input.g)?,
    ];
    let beta = parse_rat_vec(&input.beta)?;
    let z = parse_rat_vec(&input.z)?;
    let problem = FayProblem::new(cd, points, beta, z)?;
    let verdict = problem.check();
    let doc = FayVerdictJson::from_verdict(&verdict);
    write_output(cli, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
}

fn cmd_solve(cli: &Cli) -> Result<(), Error> {
    let input: SolveInputJson = parse_json(&read_input(cli)?)?;
    let inv = InvariantsJson {
        g: input.g,
        c: input.c.clone(),
    }
    .to_invariants()?;
    let cd = curve_data(&inv)?;
    let z0 = parse_rat_vec(&input.z0)?;
    if z0.len() != input.g {
        return Err(Error::Input(format!("Z0 must have length {}", input.g)));
    }

    // direct orbit alongside the theta rows
    let mut direct = sigma(&iota(&cd, &z0, 0)?)?;
    let mut rows: Vec<(usize, usize, String, String, String, bool)> = Vec::new();
    for t in 0..=input.steps {
        let w = iota(&cd, &z0, t as i64)?;
        let s = sigma(&w)?;
        let verified = s == direct;
        for n in 0..=input.g {
            rows.push((
                t,
                n,
                fmt_rat(&w.value(n as i64, t as i64)),
                fmt_rat(&s.q()[n]),
                fmt_rat(&s.w()[n]),
                verified,
            ));
        }
        if t < input.steps {
            direct = evolve_step(&direct);
        }
    }
    match cli.format {
        Format::Csv => {
            let mut out = String::from("t,n,T,Q,W,verified\n");
            for (t, n, tau, q, w, ok) in rows {
                out.push_str(&format!("{t},{n},{tau},{q},{w},{ok}\n"));
            }
            write_output(cli, &out)
        }
        Format::Json => {
            let doc = json!({
                "seed": cli.seed,
                "rows": rows.iter().map(|(t, n, tau, q, w, ok)| json!({
                    "t": t, "n": n, "T": tau, "Q": q, "W": w, "verified": ok
                })).collect::<Vec<_>>(),
            });
            write_output(cli, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
    }
}

fn cmd_discrete(cli: &Cli) -> Result<(), Error> {
    let input: DiscreteInputJson = parse_json(&read_input(cli)?)?;
    let state = StateJson {
        g: input.g,
        q: input.q.clone(),
        w: input.w.clone(),
    }
    .to_state()?;
    let eps = parse_rat_vec(&input.eps)?;
    let digits = cli.precision.unwrap_or(DEFAULT_DIGITS);
    let report = ud_trajectory_compare(&state, &eps, input.steps, digits)?;
    let summary = json!({
        "digits": report.digits,
        "sup": report.sup.iter().map(|(e, q, w)| json!({
            "eps": fmt_rat(e), "err_Q": q, "err_W": w
        })).collect::<Vec<_>>(),
    });
    match cli.format {
        Format::Csv => {
            let mut out = String::from("eps,t,n,I,V,err_Q,err_W\n");
            for r in &report.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{:e},{:e}\n",
                    fmt_rat(&r.eps),
                    r.t,
                    r.n,
                    r.i_dec,
                    r.v_dec,
                    r.err_q,
                    r.err_w
                ));
            }
            write_output(cli, &out)?;
            // summary goes to stderr so the CSV stream stays clean
            eprintln!("{summary}");
            Ok(())
        }
        Format::Json => {
            let doc = json!({
                "digits": report.digits,
                "rows": report.rows.iter().map(|r| json!({
                    "eps": fmt_rat(&r.eps), "t": r.t, "n": r.n,
                    "I": r.i_dec, "V": r.v_dec,
                    "err_Q": r.err_q, "err_W": r.err_w
                })).collect::<Vec<_>>(),
                "summary": summary,
            });
            write_output(cli, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
    }
}

fn cmd_udlimit(cli: &Cli) -> Result<(), Error> {
    let input: UdLimitInputJson = parse_json(&read_input(cli)?)?;
    let inv = InvariantsJson {
        g: input.g,
        c: input.c.clone(),
    }
    .to_invariants()?;
    let cd = curve_data(&inv)?;
    let graph = build_graph(&cd)?;
    let bc = basis_change(&cd, &graph);
    let digits = cli
        .precision
        .or(input.precision)
        .unwrap_or(troptoda::hyperell::DEFAULT_DIGITS);
    let eps_list = parse_rat_vec(&input.eps)?;

    struct Row {
        eps: Rat,
        quantity: String,
        computed: f64,
        target: f64,
    }
    let mut rows: Vec<Row> = Vec::new();
    for eps in &eps_list {
        let sc = scaled_curve(&inv, eps, digits)?;
        rows.push(Row {
            eps: eps.clone(),
            quantity: "root_sup_err".into(),
            computed: root_limit_error(&sc)?,
            target: 0.0,
        });
        let a = a_period_matrix(&sc)?;
        let (p, _) = b_period_limits(&sc)?;
        for i in 0..input.g {
            for j in 0..input.g {
                rows.push(Row {
                    eps: eps.clone(),
                    quantity: format!("a[{},{}]", i + 1, j + 1),
                    computed: a[i][j],
                    target: if i == j { 1.0 } else { 0.0 },
                });
                let kt = bc.k_tilde[i][j]
                    .numer()
                    .to_string()
                    .parse::<f64>()
                    .unwrap_or(0.0)
                    / bc.k_tilde[i][j]
                        .denom()
                        .to_string()
                        .parse::<f64>()
                        .unwrap_or(1.0);
                rows.push(Row {
                    eps: eps.clone(),
                    quantity: format!("b[{},{}]", i + 1, j + 1),
                    computed: p[i][j],
                    target: kt,
                });
            }
        }
    }
    match cli.format {
        Format::Csv => {
            let mut out = format!("# precision digits = {digits}\n");
            out.push_str("eps,quantity,computed,target,abs_err\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{:.12},{:.12},{:.3e}\n",
                    fmt_rat(&r.eps),
                    r.quantity,
                    r.computed,
                    r.target,
                    (r.computed - r.target).abs()
                ));
            }
            write_output(cli, &out)
        }
        Format::Json => {
            let doc = json!({
                "digits": digits,
                "K_tilde": bc.k_tilde.iter().map(|row| row.iter().map(fmt_rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "rows": rows.iter().map(|r| json!({
                    "eps": fmt_rat(&r.eps),
                    "quantity": r.quantity,
                    "computed": r.computed,
                    "target": r.target,
                    "abs_err": (r.computed - r.target).abs(),
                })).collect::<Vec<_>>(),
            });
            write_output(cli, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = format!("{e:?}");
            let kind = kind.split('(').next().unwrap_or("Error");
            eprintln!(
                "{}",
                json!({"error": e.to_string(), "kind": kind})
            );
            ExitCode::from(exit_code_for(&e))
        }
    }
}
