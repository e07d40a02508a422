use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mnesor_cli::commands::{self, exit, AxiomsArgs, EvalArgs};

/// Relational queries and axiom checks over mnesor spaces.
#[derive(Parser)]
#[command(name = "mnesor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a table query and print the result as CSV.
    Eval(EvalCmd),
    /// Check bitrop and mnesor-space properties on a built-in model.
    Axioms(AxiomsCmd),
}

#[derive(Args)]
struct EvalCmd {
    /// Membership CSV: `key,<Org1>,...` with 0/1 cells.
    #[arg(short, long)]
    membership: PathBuf,
    /// Table binding `name=path`; repeatable.
    #[arg(short, long = "table", value_parser = parse_binding)]
    tables: Vec<(String, PathBuf)>,
    /// Query such as `europe[NATO] + europe[!NATO]`.
    query: String,
}

#[derive(Args)]
struct AxiomsCmd {
    /// subset, minplus, extended-minplus, truncated-tropical or relation.
    #[arg(long)]
    model: String,
    /// Universe size for subset and relation.
    #[arg(long)]
    universe: Option<usize>,
    /// Integer window `lo..hi` for the min-plus models.
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    /// Enumerate every assignment (the default).
    #[arg(long, conflicts_with = "random")]
    exhaustive: bool,
    /// Sample N assignments per property instead.
    #[arg(long, value_name = "N")]
    random: Option<u64>,
    #[arg(long, value_name = "S", requires = "random")]
    seed: Option<u64>,
    /// Comma-separated property labels or groups (`bitrop`, `space`).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Refuse exhaustive plans with more cases than this.
    #[arg(long)]
    cap: Option<u64>,
}

fn parse_binding(s: &str) -> Result<(String, PathBuf), String> {
    let (name, path) = s.split_once('=').ok_or("expected name=path")?;
    let mut chars = name.chars();
    let ident = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !ident {
        return Err(format!("`{name}` is not a table name"));
    }
    Ok((name.to_owned(), PathBuf::from(path)))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::PARSE as u8 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut err = io::stderr().lock();
    let code = match cli.command {
        Command::Eval(c) => {
            let args = EvalArgs {
                membership: c.membership,
                tables: c.tables,
                query: c.query,
            };
            commands::eval(&args, &mut out, &mut err)
        }
        Command::Axioms(c) => {
            let args = AxiomsArgs {
                model: c.model,
                universe: c.universe,
                range: c.range,
                random: c.random,
                seed: c.seed,
                only: c.only,
                cap: c.cap,
            };
            commands::axioms(&args, &mut out, &mut err)
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
