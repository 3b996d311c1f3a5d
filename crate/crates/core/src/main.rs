use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use quadchi::cli::{parse_input, run, CliError, Mode, RunSettings};
use quadchi::pipeline::EpsMode;
use quadchi::Exec;

/// Euler characteristic of a set defined by quadratic inequalities.
#[derive(Debug, Parser)]
#[command(name = "quadchi", version)]
struct Args {
    /// Problem file in JSON; `-` reads standard input.
    input: PathBuf,
    /// Override the mode given in the problem file.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Use a fixed rational ε instead of stabilizing.
    #[arg(long, value_name = "RATIONAL", conflicts_with = "eps_stabilize")]
    eps: Option<String>,
    /// Halve ε until the result stabilizes (default).
    #[arg(long)]
    eps_stabilize: bool,
    /// Cap on the number of cells per decomposition.
    #[arg(long, value_name = "N")]
    max_cells: Option<usize>,
    /// Cross-check against a direct decomposition.
    #[arg(long)]
    oracle: bool,
    /// Write the cells of every decomposition to this file.
    #[arg(long, value_name = "PATH")]
    dump_cells: Option<PathBuf>,
    /// Print only the Euler characteristic.
    #[arg(long)]
    quiet: bool,
    /// Run without data parallelism.
    #[arg(long)]
    sequential: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(args: &Args) -> Result<i32, CliError> {
    let text = if args.input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(&args.input)?
    };
    let problem = parse_input(&text)?;
    let eps_mode = match (&args.eps, args.eps_stabilize) {
        (Some(e), _) => Some(EpsMode::Fixed(
            e.trim().parse().map_err(|_| quadchi::Error::Invalid(format!("eps: not a rational number: {e:?}")))?,
        )),
        (None, true) => Some(EpsMode::SubstituteStabilize),
        (None, false) => None,
    };
    let settings = RunSettings {
        mode: args.mode,
        eps_mode,
        max_cells: args.max_cells,
        oracle: args.oracle,
        dump_cells: args.dump_cells.is_some(),
        exec: if args.sequential { Exec::Sequential } else { Exec::default() },
    };
    let out = run(&problem, &settings)?;
    if let (Some(path), Some(dump)) = (&args.dump_cells, &out.dump) {
        std::fs::write(path, dump)?;
    }
    if args.quiet {
        println!("{}", out.chi);
    } else {
        println!("{}", serde_json::to_string_pretty(&out.report).expect("serializable"));
    }
    if out.exit_code == 3 {
        eprintln!("oracle disagrees with the computed characteristic");
    }
    Ok(out.exit_code)
}
