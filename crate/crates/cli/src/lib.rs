//! Command-line front end: file formats, configuration and the subcommands.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod mesh;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{FrameKind, Shape, ShapeParams};
use crate::config::RunArgs;
use crate::error::Result;

#[derive(Debug, Parser)]
#[command(name = "framecurve", version, about = "Shape analysis of framed space curves")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a synthetic curve.
    Generate {
        shape: Shape,
        #[command(flatten)]
        params: ShapeParams,
        #[arg(long, value_enum, default_value = "frenet")]
        frame: FrameKind,
        /// Apply a random rotation drawn from --seed.
        #[arg(long)]
        rotate: bool,
        /// Twist the frame by this amplitude times sin(pi t).
        #[arg(long, default_value_t = 0.0)]
        twist: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute a Frenet or rotation-minimizing framing.
    Frames {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "rmf")]
        kind: FrameKind,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the quaternionic path of a curve.
    Lift {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Map a quaternionic path back to a framed curve.
    Hopf {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Normalized shape distance between two curves.
    Dist { a: PathBuf, b: PathBuf },
    /// Geodesic between two curves: one curve file per step plus a summary.
    Geodesic {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Matrix of pairwise normalized distances.
    Distmat {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mean shape of closed curves.
    Mean {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// k-medoids clustering of a distance matrix file.
    Cluster {
        matrix: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tube meshes (OBJ) for every step of a geodesic directory.
    Export {
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        radius: f64,
        #[arg(long, default_value_t = 16)]
        sides: usize,
    },
}

/// Runs a parsed command line, returning what should go to standard output.
pub fn run(cli: &Cli) -> Result<String> {
    let cfg = cli.run.resolve()?;
    use commands::*;
    Ok(match &cli.command {
        Command::Generate {
            shape,
            params,
            frame,
            rotate,
            twist,
            out,
        } => {
            cmd_generate(*shape, params, *frame, *rotate, *twist, out, &cfg)?;
            String::new()
        }
        Command::Frames { input, kind, out } => {
            cmd_frames(input, *kind, out)?;
            String::new()
        }
        Command::Lift { input, out } => cmd_lift(input, out)?,
        Command::Hopf { input, out } => {
            cmd_hopf(input, out)?;
            String::new()
        }
        Command::Dist { a, b } => cmd_dist(a, b, &cfg)?,
        Command::Geodesic { a, b, out } => cmd_geodesic(a, b, out, &cfg)?,
        Command::Distmat { inputs, out } => {
            for w in cmd_distmat(inputs, out, &cfg)? {
                eprintln!("warning: {w}");
            }
            String::new()
        }
        Command::Mean { inputs, out } => cmd_mean(inputs, out, &cfg)?,
        Command::Cluster { matrix, k, out } => {
            cmd_cluster(matrix, *k, out, &cfg)?;
            String::new()
        }
        Command::Export {
            dir,
            out,
            radius,
            sides,
        } => format!("meshes {}\n", cmd_export(dir, out, *radius, *sides)?),
    })
}
