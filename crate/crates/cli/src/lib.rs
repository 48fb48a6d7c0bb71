//! Instance files and the `sigmacat` commands.

pub mod commands;
pub mod format;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use sigma_cat::testkit::GenParams;

use commands::{Claim, Construction, GenKind, Io};

#[derive(Debug, Parser)]
#[command(name = "sigmacat", version, about = "Finite categories, presheaves and Σ-constructions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an instance file against its laws.
    Validate {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build a construction from instance files.
    Construct {
        kind: Construction,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Object for `slice` and `yoneda`.
        #[arg(long)]
        object: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest category (in objects) handed to functor enumeration.
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Check a claim on instance files, or on `--seeds` generated instances.
    Check {
        claim: Claim,
        inputs: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        bound: Option<usize>,
        /// First seed when generating.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        seeds: Option<u64>,
    },
    /// Generate a random valid instance.
    Gen {
        kind: GenKind,
        #[arg(long, default_value_t = 3)]
        objects: usize,
        #[arg(long, default_value_t = 5)]
        extra_morphisms: usize,
        #[arg(long, default_value_t = 2)]
        fiber_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// The cat_presheaf a q-presheaf lives over.
        #[arg(long)]
        over: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cli: &Cli, io: &mut Io) -> i32 {
    match &cli.command {
        Command::Validate { path, json } => commands::validate(path, *json, io),
        Command::Construct { kind, inputs, object, out, bound, json } => commands::construct(
            &commands::ConstructArgs {
                kind: *kind,
                inputs,
                object: object.as_deref(),
                out: out.as_deref(),
                bound: *bound,
                json: *json,
            },
            io,
        ),
        Command::Check { claim, inputs, json, bound, seed, seeds } => commands::check(
            &commands::CheckArgs { claim: *claim, inputs, json: *json, bound: *bound, seed: *seed, seeds: *seeds },
            io,
        ),
        Command::Gen { kind, objects, extra_morphisms, fiber_size, seed, over, out } => commands::gen(
            &commands::GenArgs {
                kind: *kind,
                params: GenParams {
                    max_objects: *objects,
                    max_extra_morphisms: *extra_morphisms,
                    max_fiber_size: *fiber_size,
                    seed: *seed,
                },
                over: over.as_deref(),
                out: out.as_deref(),
            },
            io,
        ),
    }
}
