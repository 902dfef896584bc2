use std::io::{self, BufWriter, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crossout::identities::{run_suites, Suite};
use crossout::probability::rational_to_string;
use crossout::{alice_probability, decode, encode, new_game, CrossoutTuple, GameSetup, Permutation, Player};
use crossout_cli::{play, service};

#[derive(Parser)]
#[command(
    name = "crossout",
    version,
    about = "Permutations as pairs of labeled Dyck paths, and the dinner game they solve"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the crossout tuple of a permutation as JSON.
    Encode {
        /// One-line notation, e.g. "2 6 4 1 3" or "[2,6,4,1,3]".
        w: String,
    },
    /// Recover a permutation from a crossout tuple.
    Decode(DecodeArgs),
    /// Run identity checks for every n up to the given bound.
    Verify(VerifyArgs),
    /// Exact probability that Alice ends up with the given ranks.
    Prob {
        /// Alice eats n morsels out of 2n.
        #[arg(long)]
        n: usize,
        /// Comma separated ranks, e.g. 3,4.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        ranks: Vec<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Play the dinner game against the crossout engine in the terminal.
    Play(PlayArgs),
    /// Start the local JSON service used by the web UI.
    Serve {
        #[arg(long, default_value_t = 8787)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Append every request to this JSON-lines file.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Feed a request log to a fresh service and print each response.
    Replay { log: PathBuf },
}

#[derive(Args)]
struct DecodeArgs {
    /// Tuple JSON as printed by `encode`.
    tuple: Option<String>,
    #[arg(long, conflicts_with = "tuple", requires_all = ["pb", "ell", "em"])]
    pa: Option<String>,
    #[arg(long)]
    pb: Option<String>,
    #[arg(long, value_delimiter = ',')]
    ell: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    em: Option<Vec<usize>>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma separated suites, or "all".
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, alias = "max-n")]
    n: usize,
    /// Run exhaustive sweeps past the size guard.
    #[arg(long)]
    force: bool,
    /// Print one JSON report per line.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PlayArgs {
    /// Number of morsels for a random game.
    #[arg(long, conflicts_with = "w")]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Preferences as a permutation instead of a random one.
    #[arg(long)]
    w: Option<String>,
    /// alice, bob, or none to let the engine play both sides.
    #[arg(long, default_value = "alice")]
    role: String,
}

fn parse_w(s: &str) -> anyhow::Result<Permutation> {
    s.parse().with_context(|| format!("cannot read permutation {s:?}"))
}

fn run_decode(args: DecodeArgs) -> anyhow::Result<()> {
    let tuple: CrossoutTuple = match (args.tuple, args.pa) {
        (Some(text), _) => serde_json::from_str(&text).context("invalid tuple JSON")?,
        (None, Some(pa)) => {
            let raw = json!({
                "pa": pa,
                "pb": args.pb,
                "ell": args.ell,
                "em": args.em,
                "parity": if args.pb.as_ref().map(|p| p.len()) == Some(pa.len()) { "odd" } else { "even" },
            });
            serde_json::from_value(raw).context("invalid tuple")?
        }
        (None, None) => bail!("give a tuple JSON argument or --pa/--pb/--ell/--em"),
    };
    let w = decode(&tuple)?;
    if args.json {
        println!("{}", serde_json::to_string(&json!({ "w": w }))?);
    } else {
        println!("{w}");
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> anyhow::Result<bool> {
    let suites = Suite::parse_list(&args.suite)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let (mut total, mut failed) = (0usize, 0usize);
    let mut write_err = None;
    run_suites(&suites, args.n, args.force, &mut |report| {
        total += 1;
        if !report.is_equal() {
            failed += 1;
        }
        let line =
            if args.json { serde_json::to_string(&report).expect("report serializes") } else { report.to_string() };
        if let Err(e) = writeln!(out, "{line}").and_then(|_| out.flush()) {
            write_err.get_or_insert(e);
        }
    })?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    eprintln!("{total} checks, {failed} unequal");
    Ok(failed == 0)
}

fn run_play(args: PlayArgs) -> anyhow::Result<()> {
    let setup = match (args.w, args.n) {
        (Some(w), _) => GameSetup::Permutation(parse_w(&w)?),
        (None, Some(size)) => GameSetup::Random { size, seed: args.seed },
        (None, None) => bail!("give --n or --w"),
    };
    let human = match args.role.as_str() {
        "none" | "engine" => None,
        r => Some(r.parse::<Player>()?),
    };
    let state = new_game(setup, human)?;
    let stdin = io::stdin();
    let stdout = io::stdout();
    play::play(state, stdin.lock(), &mut stdout.lock())?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Encode { w } => {
            println!("{}", serde_json::to_string(&encode(&parse_w(&w)?))?);
        }
        Command::Decode(args) => run_decode(args)?,
        Command::Verify(args) => return run_verify(args),
        Command::Prob { n, ranks, json } => {
            let p = alice_probability(n, &ranks)?;
            if json {
                println!("{}", json!({ "n": n, "ranks": ranks, "probability": rational_to_string(&p) }));
            } else {
                println!("{}", rational_to_string(&p));
            }
        }
        Command::Play(args) => run_play(args)?,
        Command::Serve { port, host, log } => {
            let app = match log {
                Some(path) => service::AppState::with_log(&path)?,
                None => service::AppState::new(),
            };
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(service::serve(SocketAddr::new(host, port), Arc::new(app)))?;
        }
        Command::Replay { log } => {
            let requests = service::read_log(&log)?;
            let rt = tokio::runtime::Runtime::new()?;
            for (status, body) in rt.block_on(service::replay(&requests))? {
                println!("{status} {body}");
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
