use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hodge_core::commands::{
    cmd_build_hodge, cmd_transfer, cmd_trees, cmd_verify, CommandOutput, Status, TransferOptions,
};
use serde_json::json;

/// Hodge decompositions and cyclic A∞ minimal models over the rationals.
#[derive(Parser)]
#[command(name = "hodge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Compact single-line JSON.
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON (the default).
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the form, the Stasheff relations, cyclicity and any Hodge data in the file.
    Verify {
        /// Algebra file, or `-` for stdin.
        file: String,
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Build a harmonious Hodge decomposition for the file's dg space and form.
    BuildHodge { file: String },
    /// Transfer the structure to homology along harmonious Hodge data.
    Transfer {
        file: String,
        #[arg(long)]
        cutoff: Option<usize>,
        /// With `false`, emit the raw transferred structure on V instead of the minimal model.
        #[arg(long, value_name = "BOOL")]
        require_harmonious: Option<bool>,
        /// Sum trees on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Count planar rooted trees with n leaves.
    Trees {
        n: usize,
        /// Also print every tree in canonical form.
        #[arg(long)]
        list: bool,
    },
}

fn read_input(file: &str) -> Result<String, String> {
    if file == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(text)
    } else {
        std::fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))
    }
}

fn input_error(message: String) -> CommandOutput {
    CommandOutput {
        report: json!({ "pass": false, "error": { "kind": "input", "message": message } }),
        status: Status::InputError,
    }
}

fn with_input(file: &str, f: impl FnOnce(&str) -> CommandOutput) -> CommandOutput {
    match read_input(file) {
        Ok(text) => f(&text),
        Err(e) => input_error(e),
    }
}

fn run(command: Command) -> CommandOutput {
    match command {
        Command::Verify { file, cutoff } => with_input(&file, |text| cmd_verify(text, cutoff)),
        Command::BuildHodge { file } => with_input(&file, cmd_build_hodge),
        Command::Transfer {
            file,
            cutoff,
            require_harmonious,
            sequential,
        } => {
            let options = TransferOptions {
                cutoff,
                require_harmonious,
                parallel: !sequential,
            };
            with_input(&file, |text| cmd_transfer(text, options))
        }
        Command::Trees { n, list } => cmd_trees(n, list),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(cli.command);
    let text = out.render(cli.output.pretty || !cli.output.json);
    match &cli.output.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("{}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(out.status.exit_code() as u8)
}
