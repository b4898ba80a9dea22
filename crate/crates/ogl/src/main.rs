use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ogl::campaigns::{self, CampaignParams};
use ogl::{catalog, fixtures};
use ortho_grassmann::grassmann::{FiniteUniverse, GraphKind};
use ortho_grassmann::subspace::Subspace;

#[derive(Parser)]
#[command(name = "ogl")]
#[command(about = "Exact verification harness for Grassmann and ortho-Grassmann graph geometry")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EdgeKind {
    Grassmann,
    Ortho,
}

#[derive(Args)]
struct VerifyArgs {
    /// Registered lemma id (see `list-lemmas`)
    lemma: String,

    /// Ambient dimension, where the campaign takes one
    #[arg(long)]
    n: Option<usize>,

    /// Subspace dimension, where the campaign takes one
    #[arg(long)]
    k: Option<usize>,

    /// Operator spectrum as comma-separated rationals, e.g. 0,1,2
    #[arg(long, value_delimiter = ',')]
    sigma: Option<Vec<String>>,

    /// Eigenspace multiplicities, e.g. 3,3,2
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<usize>>,

    /// Number of trials (campaign default when omitted)
    #[arg(long)]
    trials: Option<usize>,

    /// Campaign seed
    #[arg(long, env = "OGL_DEFAULT_SEED")]
    seed: Option<u64>,

    /// Distinct witnesses requested where a family is infinite
    #[arg(long)]
    witness_budget: Option<usize>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Commands {
    /// Run a verification campaign for a registered lemma
    Verify(VerifyArgs),

    /// List every registered lemma with its claim and command template
    ListLemmas {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Write a named fixture to disk and validate it
    EmitFixture {
        /// One of the registered fixture names
        name: String,
        /// Output directory
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },

    /// Validate a subspace / universe / operator JSON file
    ValidateFile { path: PathBuf },

    /// Run a demonstration
    Demo {
        #[command(subcommand)]
        what: DemoCommands,
    },

    /// Finite-universe utilities
    Universe {
        #[command(subcommand)]
        what: UniverseCommands,
    },

    /// Graph queries over finite universes
    Graph {
        #[command(subcommand)]
        what: GraphCommands,
    },
}

#[derive(Subcommand)]
enum DemoCommands {
    /// The exceptional automorphisms of the plane graph of C^4
    Dim4Exceptional {
        #[arg(long, env = "OGL_DEFAULT_SEED")]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum UniverseCommands {
    /// Build the universe of all coordinate k-subspaces of C^n
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = EdgeKind::Grassmann)]
        edges: EdgeKind,
        #[arg(long)]
        out: PathBuf,
        /// Also write a DOT rendering next to the JSON
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Subcommand)]
enum GraphCommands {
    /// BFS distance between two subspaces inside a universe file
    Bfs {
        #[arg(long)]
        universe: PathBuf,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                // Distinct from usage errors (clap exits with 2).
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Commands::Verify(args) => {
            let params = CampaignParams {
                n: args.n,
                k: args.k,
                sigma: args.sigma.clone(),
                d: args.d.clone(),
                trials: args.trials,
                seed: args.seed,
                witness_budget: args.witness_budget,
            };
            let report = campaigns::run_campaign(&args.lemma, &params)?;
            let rendered = match args.format {
                Format::Json => serde_json::to_string_pretty(&report)?,
                Format::Text => report.to_text(),
            };
            match &args.out {
                Some(path) => fs::write(path, rendered)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => println!("{rendered}"),
            }
            Ok(report.pass)
        }
        Commands::ListLemmas { format } => {
            match format {
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(catalog::CATALOG)?);
                }
                Format::Text => {
                    for info in catalog::CATALOG {
                        println!("{}\n  claim: {}\n  run:   {}\n", info.id, info.claim, info.command);
                    }
                }
            }
            Ok(true)
        }
        Commands::EmitFixture { name, dir } => {
            let paths = fixtures::emit_fixture(&name, &dir)?;
            for p in paths {
                println!("{}", p.display());
            }
            Ok(true)
        }
        Commands::ValidateFile { path } => {
            let summary = fixtures::validate_file(&path)?;
            println!("{summary}");
            Ok(true)
        }
        Commands::Demo { what } => match what {
            DemoCommands::Dim4Exceptional { seed } => {
                let payload = campaigns::demo_dim4(seed.unwrap_or(campaigns::DEFAULT_SEED))?;
                println!("{}", serde_json::to_string_pretty(&payload)?);
                Ok(true)
            }
        },
        Commands::Universe { what } => match what {
            UniverseCommands::Build { n, k, edges, out, dot } => {
                let kind = match edges {
                    EdgeKind::Grassmann => GraphKind::Grassmann,
                    EdgeKind::Ortho => GraphKind::OrthoGrassmann,
                };
                let u = FiniteUniverse::johnson(n, k, kind).map_err(|e| anyhow!(e.to_string()))?;
                fs::write(&out, serde_json::to_string_pretty(&u)?)
                    .with_context(|| format!("cannot write {}", out.display()))?;
                println!("wrote {} ({} vertices, {} edges)", out.display(), u.len(), u.edge_count());
                if dot {
                    let dot_path = out.with_extension("dot");
                    fs::write(&dot_path, u.to_dot())?;
                    println!("wrote {}", dot_path.display());
                }
                Ok(true)
            }
        },
        Commands::Graph { what } => match what {
            GraphCommands::Bfs { universe, from, to } => {
                let u: FiniteUniverse = serde_json::from_str(
                    &fs::read_to_string(&universe)
                        .with_context(|| format!("cannot read {}", universe.display()))?,
                )?;
                let x: Subspace = serde_json::from_str(&fs::read_to_string(&from)?)?;
                let y: Subspace = serde_json::from_str(&fs::read_to_string(&to)?)?;
                match u.bfs_distance(&x, &y).map_err(|e| anyhow!(e.to_string()))? {
                    Some(d) => println!("distance: {d}"),
                    None => println!("unreachable"),
                }
                Ok(true)
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn lemma_ids_bail_cleanly() {
        let err = campaigns::run_campaign("no-such-lemma", &CampaignParams::default());
        assert!(err.is_err());
    }
}
