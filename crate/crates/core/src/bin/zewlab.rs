use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};

use zewlab::catalog;
use zewlab::codes::SearchOptions;
use zewlab::experiments::{self, recipes, RecipeOptions, Simulation};
use zewlab::{ChannelFile, Error, Result};

#[derive(Parser)]
#[command(
    name = "zewlab",
    version,
    about = "Zero-error wiretap codes and secure estimation"
)]
struct Cli {
    /// Search time budget in milliseconds.
    #[arg(
        long,
        global = true,
        env = "ZEWLAB_BUDGET_MS",
        default_value_t = 60_000
    )]
    budget_ms: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Channel inspection.
    Channel {
        #[command(subcommand)]
        action: ChannelCmd,
    },
    /// Code search.
    Code {
        #[command(subcommand)]
        action: CodeCmd,
    },
    /// Round-by-round elimination trace at blocklength n.
    Eliminate {
        #[arg(long, default_value_t = 1)]
        n: usize,
        channel: String,
    },
    /// Secrecy capacity, exactly or by searching blocklengths up to n.
    Capacity {
        #[arg(long, default_value_t = 2)]
        n: usize,
        channel: String,
    },
    /// Runs a simulation config and writes the transcript CSV.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a canned reproduction: example1, example2, example3, fig4, fig5, elim-fig7.
    Reproduce {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ChannelCmd {
    Info { channel: String },
}

#[derive(Subcommand)]
enum CodeCmd {
    Search {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        wiretap: bool,
        #[arg(long)]
        singleton_only: bool,
        channel: String,
    },
}

/// A channel file path, or a built-in name such as `fig2b`.
fn load_channel(arg: &str) -> Result<ChannelFile> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some(wt) = catalog::by_name(arg) {
            return Ok(ChannelFile {
                name: wt.name.clone(),
                tb: wt.tb,
                tc: Some(wt.tc),
            });
        }
        return Err(Error::InvalidInput(format!("no such channel file: {arg}")));
    }
    ChannelFile::load(path)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let search = SearchOptions {
        budget: Duration::from_millis(cli.budget_ms),
        ..SearchOptions::default()
    };
    match cli.command {
        Command::Channel {
            action: ChannelCmd::Info { channel },
        } => println!("{}", experiments::channel_info(&load_channel(&channel)?)),
        Command::Code {
            action:
                CodeCmd::Search {
                    n,
                    wiretap,
                    singleton_only,
                    channel,
                },
        } => {
            let file = load_channel(&channel)?;
            let opts = SearchOptions {
                singleton_only,
                ..search
            };
            let r = experiments::code_search(&file, n, wiretap, &opts)?;
            println!("{}", experiments::format_search(&file, &r)?);
        }
        Command::Eliminate { n, channel } => {
            println!("{}", experiments::eliminate(&load_channel(&channel)?, n)?)
        }
        Command::Capacity { n, channel } => {
            println!(
                "{}",
                experiments::capacity(&load_channel(&channel)?, n, &search)?
            )
        }
        Command::Simulate { config, seed, out } => {
            let mut sim = Simulation::load(&config, &search)?;
            if let Some(s) = seed {
                sim.scheme.seed = s;
            }
            let (transcript, report) = experiments::simulate(&sim)?;
            let csv = transcript.csv_string()?;
            match &out {
                Some(dir) => write_file(dir, "simulate.csv", &csv)?,
                None => print!("{csv}"),
            }
            if let Some(r) = report {
                eprintln!("{r}");
                if r.reliability_violations > 0 {
                    return Err(Error::Contract(format!(
                        "{} sample errors exceed kappa/2",
                        r.reliability_violations
                    )));
                }
                if !r.v_certified() {
                    return Err(Error::Contract(
                        "measured volume below the certified bound".into(),
                    ));
                }
            }
        }
        Command::Reproduce { name, out } => {
            let outcome = recipes::run(
                &name,
                &RecipeOptions {
                    budget: search.budget,
                    ..RecipeOptions::default()
                },
            )?;
            println!("{outcome}");
            for (file, contents) in &outcome.artifacts {
                match &out {
                    Some(dir) => write_file(dir, file, contents)?,
                    None => print!("# {file}\n{contents}"),
                }
            }
            if !outcome.passed() {
                return Err(Error::Contract(format!("reproduction {name} failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
