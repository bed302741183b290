use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use limid::bench::{load_suite, report_csv, run_bench};
use limid::generators::{gen_partition, gen_random, gen_sat, gen_urn, parse_dimacs, RandomParams, UrnVariant};
use limid::io::{format_g12, parse_diagram, parse_strategy, serialize_diagram, serialize_strategy, StatsDocument};
use limid::lve::DEFAULT_TRANSFORM_THRESHOLD;
use limid::oracle::{brute_force_meu, DEFAULT_ENUMERATION_CAP};
use limid::preprocess::minimize;
use limid::transform::make_decisions_parentless;
use limid::{expected_utility, solve_with, Diagram, ErrorKind, LimidError, OrderHeuristic, SolveOptions};

#[derive(Parser)]
#[command(name = "limid", version, about = "Solve limited memory influence diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the maximum expected utility and an optimal strategy.
    Solve(SolveArgs),
    /// Expected utility of a given strategy.
    Eval {
        file: String,
        #[arg(long)]
        strategy: PathBuf,
    },
    /// Remove nonrequisite arcs and barren nodes.
    Minimize {
        file: String,
        #[arg(short, long)]
        output: String,
    },
    /// Replace every decision that has parents by a gadget of parentless decisions.
    Transform {
        file: String,
        #[arg(short, long)]
        output: String,
    },
    /// Maximum expected utility by enumerating every strategy.
    Oracle {
        file: String,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },
    /// Generate a diagram.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run a benchmark suite and write a CSV report.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        /// Per-instance time limit in seconds.
        #[arg(long)]
        timeout: f64,
        #[arg(long)]
        report: String,
    },
}

#[derive(Args)]
struct SolveArgs {
    file: String,
    #[arg(long, default_value = "rev-topo")]
    order: OrderHeuristic,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    stats_out: Option<String>,
    #[arg(long)]
    strategy_out: Option<String>,
    /// Refuse decisions with too many policies instead of transforming them.
    #[arg(long)]
    no_transform: bool,
    #[arg(long, default_value_t = DEFAULT_TRANSFORM_THRESHOLD)]
    transform_threshold: u64,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Random diagram with bounded family domains and width.
    Random {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        omega_d: usize,
        #[arg(long)]
        omega_c: usize,
        #[arg(long, default_value_t = 10)]
        width_cap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        min_states: usize,
        #[arg(long, default_value_t = 4)]
        max_states: usize,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Sequential urn game with `n` participants.
    Urn {
        #[arg(long)]
        n: usize,
        /// 1, 2 or 5.
        #[arg(long, default_value = "5")]
        variant: UrnVariant,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Partition instance over positive integers.
    Partition {
        #[arg(long, value_delimiter = ',', required = true)]
        numbers: Vec<u64>,
        /// Use exact weights instead of rounding them to a finite grid.
        #[arg(long)]
        idealized: bool,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Instance from a CNF formula in DIMACS format.
    Sat {
        #[arg(long)]
        cnf: String,
        /// Number of replicas.
        #[arg(long, default_value_t = 1)]
        q: usize,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
}

fn read_input(path: &str) -> limid::Result<String> {
    if path == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        read_file(Path::new(path))
    }
}

fn read_file(path: &Path) -> limid::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

fn write_output(path: &str, text: &str) -> limid::Result<()> {
    if path == "-" {
        io::stdout().write_all(text.as_bytes())?;
    } else {
        std::fs::write(path, text)
            .map_err(|e| io::Error::new(e.kind(), format!("{path}: {e}")))?;
    }
    Ok(())
}

fn load(path: &str) -> limid::Result<Diagram> {
    parse_diagram(&read_input(path)?)
}

fn solve(args: SolveArgs) -> limid::Result<()> {
    let diagram = load(&args.file)?;
    let options = SolveOptions {
        order: args.order,
        epsilon: args.epsilon,
        transform: !args.no_transform,
        transform_threshold: args.transform_threshold,
        ..SolveOptions::default()
    };
    let result = solve_with(&diagram, &options)?;
    println!("{}", format_g12(result.meu));
    if let Some(path) = &args.strategy_out {
        write_output(path, &serialize_strategy(&diagram, &result.strategy)?)?;
    }
    if let Some(path) = &args.stats_out {
        write_output(path, &StatsDocument::new(result.meu, &result.stats).to_json())?;
    }
    Ok(())
}

fn generate(command: GenCommand) -> limid::Result<()> {
    let (diagram, output) = match command {
        GenCommand::Random {
            d,
            c,
            omega_d,
            omega_c,
            width_cap,
            seed,
            min_states,
            max_states,
            output,
        } => {
            let mut params = RandomParams::new(d, c, omega_d, omega_c, seed).with_states(min_states, max_states);
            params.width_cap = width_cap;
            (gen_random(&params)?, output)
        }
        GenCommand::Urn { n, variant, output } => (gen_urn(n, variant)?, output),
        GenCommand::Partition {
            numbers,
            idealized,
            output,
        } => (gen_partition(&numbers, idealized)?, output),
        GenCommand::Sat { cnf, q, output } => (gen_sat(&parse_dimacs(&read_input(&cnf)?)?, q)?, output),
    };
    write_output(&output, &serialize_diagram(&diagram))
}

fn bench(suite: &Path, timeout: f64, report: &str) -> limid::Result<()> {
    if !(timeout > 0.0 && timeout.is_finite()) {
        return Err(LimidError::Parse("--timeout must be a positive number of seconds".into()));
    }
    let (suite, base) = load_suite(suite)?;
    let rows = run_bench(&suite, &base, Duration::from_secs_f64(timeout))?;
    write_output(report, &report_csv(&rows))
}

fn run(cli: Cli) -> limid::Result<()> {
    match cli.command {
        Command::Solve(args) => solve(args),
        Command::Eval { file, strategy } => {
            let diagram = load(&file)?;
            let strategy = parse_strategy(&diagram, &read_file(&strategy)?)?;
            println!("{}", format_g12(expected_utility(&diagram, &strategy)?));
            Ok(())
        }
        Command::Minimize { file, output } => {
            let diagram = minimize(&load(&file)?)?;
            write_output(&output, &serialize_diagram(&diagram))
        }
        Command::Transform { file, output } => {
            let (diagram, _) = make_decisions_parentless(&load(&file)?)?;
            write_output(&output, &serialize_diagram(&diagram))
        }
        Command::Oracle { file, cap } => {
            let result = brute_force_meu(&load(&file)?, cap)?;
            println!("{}", format_g12(result.meu));
            Ok(())
        }
        Command::Gen(command) => generate(command),
        Command::Bench {
            suite,
            timeout,
            report,
        } => bench(&suite, timeout, &report),
    }
}

fn exit_code(err: &LimidError) -> u8 {
    match err.kind() {
        ErrorKind::Input => 2,
        ErrorKind::Resource => 3,
        ErrorKind::Numeric => 4,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
