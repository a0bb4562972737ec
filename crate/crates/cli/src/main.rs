use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jacobi_core::algebra::{RatExpr, Scalar};
use jacobi_core::contact::{BracketTable, CoefficientMode, JacobiPair};
use jacobi_core::exterior::Chart;
use jacobi_core::geodesic::{peierls_bracket, At, DeltaFunctional, Geodesic};
use jacobi_core::models::poincare::Labelled;
use jacobi_core::models::{
    build_lagrangian, build_mass_shell, build_two_point, poincare_generators, Corruption, Mass, StructureConstants,
};
use jacobi_core::operators::{iterated_symbol, plane_wave_conjugation, DifferentialOperator};
use jacobi_core::report::VerificationReport;
use jacobi_core::Error;

mod args;

#[derive(Parser, Debug)]
#[command(
    name = "jacobi",
    version,
    about = "Exact contact and Jacobi structures of relativistic particles"
)]
struct Cli {
    /// Also write the result as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Fix a symbol to a rational value, e.g. `m=1`. Repeatable.
    #[arg(long, global = true, value_name = "NAME=RATIONAL")]
    specialize: Vec<String>,
    /// Coefficient convention of the volume bracket formula.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Negate one component of a mass-shell tensor before verifying.
    #[arg(long, global = true, value_name = "TENSOR")]
    corrupt: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Paper,
    Standard,
}

impl From<ModeArg> for CoefficientMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Paper => CoefficientMode::Paper,
            ModeArg::Standard => CoefficientMode::Standard,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    MassShell,
    TwoPoint,
    Lagrangian,
    Operator,
    Peierls,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    MassShell,
    TwoPoint,
    Lagrangian,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite.
    Verify { suite: Suite },
    /// Print the bracket of two functions on a model chart.
    Bracket { model: ModelArg, f: String, g: String },
    /// Print the coordinate bracket table and generator structure constants.
    Table { model: ModelArg },
    /// Principal symbol of an operator on Minkowski space, evaluated on `dS`,
    /// or its plane-wave polynomial in `p` when no phase is given.
    Symbol { operator: String, phase: Option<String> },
    /// Bracket of two point functionals on a time-like geodesic.
    Peierls {
        /// `symbolic`, or `x0=[a,b,c,d],k=[e,f,g,h]` with rationals.
        #[arg(long, default_value = "symbolic")]
        geodesic: String,
        /// First functional, e.g. `x0 @ s=1`.
        #[arg(long)]
        a: String,
        /// Second functional.
        #[arg(long)]
        b: String,
    },
}

/// A failed run: message for stderr and the exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::UnknownSymbol(_) | Error::NotACoordinate(_) | Error::Invalid(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

struct Options {
    mass: Mass,
    values: HashMap<String, Scalar>,
    mode: Option<CoefficientMode>,
    corrupt: Option<Corruption>,
    json: Option<PathBuf>,
}

fn parse_options(cli: &Cli) -> Result<Options, Failure> {
    let mut values = HashMap::new();
    for item in &cli.specialize {
        let (name, value) = args::assignment(item).map_err(Failure::usage)?;
        values.insert(name, value);
    }
    let mass = match values.remove("m") {
        Some(v) => {
            let m = Mass::Value(v);
            m.validate()?;
            m
        }
        None => Mass::Symbolic,
    };
    let corrupt = cli
        .corrupt
        .as_deref()
        .map(|t| t.parse::<Corruption>().map_err(|e| Failure::usage(e.to_string())))
        .transpose()?;
    Ok(Options {
        mass,
        values,
        mode: cli.mode.map(Into::into),
        corrupt,
        json: cli.json.clone(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let opts = parse_options(cli)?;
    if opts.corrupt.is_some()
        && !matches!(
            cli.command,
            Command::Verify {
                suite: Suite::MassShell | Suite::All
            }
        )
    {
        return Err(Failure::usage(
            "--corrupt only applies to `verify mass-shell` and `verify all`",
        ));
    }
    match &cli.command {
        Command::Verify { suite } => verify(*suite, &opts),
        Command::Bracket { model, f, g } => {
            let value = bracket(*model, f, g, &opts)?;
            emit("bracket", &value, &opts)
        }
        Command::Table { model } => {
            let text = table(*model, &opts)?;
            print!("{text}");
            write_json(&opts, &serde_json::json!({ "command": "table", "value": text }))?;
            Ok(0)
        }
        Command::Symbol { operator, phase } => {
            let value = symbol(operator, phase.as_deref(), &opts)?;
            emit("symbol", &value, &opts)
        }
        Command::Peierls { geodesic, a, b } => {
            let value = peierls(geodesic, a, b, &opts)?;
            emit("peierls", &value, &opts)
        }
    }
}

fn emit(command: &str, value: &str, opts: &Options) -> Result<u8, Failure> {
    println!("{value}");
    write_json(opts, &serde_json::json!({ "command": command, "value": value }))?;
    Ok(0)
}

fn write_json(opts: &Options, value: &serde_json::Value) -> Result<(), Failure> {
    if let Some(path) = &opts.json {
        let text = serde_json::to_string_pretty(value).expect("json value serializes");
        fs::write(path, text + "\n").map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn verify(suite: Suite, opts: &Options) -> Result<u8, Failure> {
    let mass_shell = || -> Result<VerificationReport, Failure> {
        let model = build_mass_shell(opts.mass.clone())?;
        Ok(match opts.corrupt {
            Some(c) => model.corrupted(c)?.verify(),
            None => model.verify(),
        })
    };
    let report = match suite {
        Suite::MassShell => mass_shell()?,
        Suite::TwoPoint => build_two_point(opts.mass.clone())?.verify(),
        Suite::Lagrangian => build_lagrangian()?.verify(),
        Suite::Operator => jacobi_core::operators::suite::verify(),
        Suite::Peierls => jacobi_core::geodesic::suite::verify(),
        Suite::All => {
            let mut all = VerificationReport::new("all");
            all.merge(mass_shell()?);
            all.merge(build_two_point(opts.mass.clone())?.verify());
            all.merge(build_lagrangian()?.verify());
            all.merge(jacobi_core::operators::suite::verify());
            all.merge(jacobi_core::geodesic::suite::verify());
            all
        }
    };
    print!("{}", report.to_text());
    if let Some(path) = &opts.json {
        fs::write(path, report.to_json() + "\n")
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}

/// Model pieces the bracket and table commands need.
struct Loaded {
    chart: std::sync::Arc<Chart>,
    pair: JacobiPair,
    volume: jacobi_core::contact::ContactModel,
    functions: Vec<Labelled>,
    generators: Vec<Labelled>,
}

fn load(model: ModelArg, opts: &Options) -> Result<Loaded, Failure> {
    Ok(match model {
        ModelArg::MassShell => {
            let m = build_mass_shell(opts.mass.clone())?;
            Loaded {
                chart: m.chart().clone(),
                pair: m.pair().clone(),
                volume: m.contact().clone(),
                functions: m.coordinate_functions()?,
                generators: m.generators()?,
            }
        }
        ModelArg::TwoPoint => {
            let m = build_two_point(opts.mass.clone())?;
            Loaded {
                chart: m.chart().clone(),
                pair: m.pair().clone(),
                volume: m.contact().clone(),
                functions: m.sum_difference_functions()?,
                generators: m.generators()?,
            }
        }
        ModelArg::Lagrangian => {
            if opts.mass != Mass::Symbolic {
                return Err(Failure::usage(
                    "the lagrangian model has unit mass; drop --specialize m=...",
                ));
            }
            let m = build_lagrangian()?;
            let x = ["x0", "x1", "x2", "x3"].map(String::from);
            let v = ["v0", "v1", "v2", "v3"].map(String::from);
            Loaded {
                chart: m.chart().clone(),
                pair: m.pair().clone(),
                volume: m.contact().clone(),
                functions: m.coordinate_functions()?,
                generators: poincare_generators(m.chart(), &x, &v)?,
            }
        }
    })
}

fn specialized(e: &RatExpr, opts: &Options) -> Result<RatExpr, Failure> {
    if opts.values.is_empty() {
        return Ok(e.clone());
    }
    for name in opts.values.keys() {
        if !e.context().has(name) {
            return Err(Failure::usage(format!("unknown symbol `{name}` in --specialize")));
        }
    }
    Ok(e.specialize(&opts.values)?)
}

fn bracket(model: ModelArg, f: &str, g: &str, opts: &Options) -> Result<String, Failure> {
    let m = load(model, opts)?;
    let f = m.chart.expr(f)?;
    let g = m.chart.expr(g)?;
    let v = match opts.mode {
        Some(mode) => m.volume.bracket_from_volume(&f, &g, mode)?,
        None => m.pair.bracket(&f, &g)?,
    };
    Ok(specialized(&v, opts)?.to_string())
}

fn table(model: ModelArg, opts: &Options) -> Result<String, Failure> {
    let m = load(model, opts)?;
    let mut t = match opts.mode {
        Some(mode) => {
            let mut entries = BracketTable::compute(&m.pair, &m.functions)?;
            for e in entries.entries.iter_mut() {
                let f = &m.functions.iter().find(|(l, _)| *l == e.left).expect("listed").1;
                let g = &m.functions.iter().find(|(l, _)| *l == e.right).expect("listed").1;
                e.value = m.volume.bracket_from_volume(f, g, mode)?;
            }
            entries
        }
        None => BracketTable::compute(&m.pair, &m.functions)?,
    };
    for e in t.entries.iter_mut() {
        e.value = specialized(&e.value, opts)?;
    }
    let sc = StructureConstants::compute(&m.pair, &m.generators)?;
    Ok(format!("{t}\n{sc}"))
}

fn symbol(operator: &str, phase: Option<&str>, opts: &Options) -> Result<String, Failure> {
    let chart = jacobi_core::operators::suite::minkowski_chart()?;
    let d = DifferentialOperator::parse(operator, &chart)?;
    let value = match phase {
        Some(s) => iterated_symbol(&d, &chart.expr(s)?)?,
        None => {
            let params: Vec<&str> = chart
                .context()
                .names()
                .iter()
                .map(String::as_str)
                .filter(|n| !n.starts_with('x'))
                .collect();
            let p = jacobi_core::algebra::Context::free(&["p0", "p1", "p2", "p3"], &params);
            let covector = ["p0", "-p1", "-p2", "-p3"]
                .iter()
                .map(|t| RatExpr::parse(t, &p))
                .collect::<Result<Vec<_>, _>>()?;
            plane_wave_conjugation(&d, &covector, &p)?.normalized
        }
    };
    Ok(specialized(&value, opts)?.to_string())
}

fn peierls(geodesic: &str, a: &str, b: &str, opts: &Options) -> Result<String, Failure> {
    let a: DeltaFunctional = a.parse()?;
    let b: DeltaFunctional = b.parse()?;
    let mut extra: Vec<String> = Vec::new();
    for atom in a.atoms.iter().chain(&b.atoms) {
        if let At::Symbol(s) = &atom.at {
            if !extra.contains(s) {
                extra.push(s.clone());
            }
        }
    }
    let extra: Vec<&str> = extra.iter().map(String::as_str).collect();
    let geo = match args::geodesic(geodesic).map_err(Failure::usage)? {
        None => Geodesic::symbolic(&extra)?,
        Some((x, k)) => Geodesic::from_values(x, k, &extra).map_err(|e| Failure::usage(e.to_string()))?,
    };
    let v = peierls_bracket(&geo, &a, &b, None)?;
    Ok(specialized(&v, opts)?.to_string())
}
