use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use copref::pipeline::{project_networks, rescore, run_pipeline, PipelineConfig};
use copref::Result;

#[derive(Parser)]
#[command(
    name = "copref",
    version,
    about = "Co-preference networks and their communities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the networks and run community detection on each.
    Run(GridArgs),
    /// Build the networks and write them without detecting communities.
    Project(GridArgs),
    /// Recompute modularity from a GraphML network and a communities CSV.
    Score {
        #[arg(long)]
        graphml: PathBuf,
        #[arg(long)]
        communities: PathBuf,
    },
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct GridArgs {
    /// Flat `key = value` configuration file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    emoji: Option<PathBuf>,
    #[arg(long)]
    ratings: Option<PathBuf>,
    /// scent, longevity, sillage, a comma list, or all.
    #[arg(long)]
    category: Option<String>,
    /// primary, sentiment, blend, a comma list, or all.
    #[arg(long)]
    variant: Option<String>,
    /// louvain, fastgreedy, walktrap, spinglass, spectral, a comma list, or all.
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    resolution: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    /// Spectral cluster count (default: eigengap).
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    laplacian: Option<String>,
    #[arg(long)]
    min_comments: Option<String>,
    #[arg(long)]
    min_edge_weight: Option<String>,
    #[arg(long, requires = "blend_count")]
    blend_rating: Option<String>,
    #[arg(long, requires = "blend_rating")]
    blend_count: Option<String>,
    /// blended or raw.
    #[arg(long)]
    filter_mode: Option<String>,
    /// weighted or binarized.
    #[arg(long)]
    modularity_mode: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl GridArgs {
    fn config(&self) -> Result<PipelineConfig> {
        let mut c = match &self.config {
            Some(path) => PipelineConfig::from_file(path)?,
            None => PipelineConfig::default(),
        };
        let paths = [
            ("input", &self.input),
            ("emoji", &self.emoji),
            ("ratings", &self.ratings),
            ("out", &self.out),
        ];
        for (key, value) in paths {
            if let Some(p) = value {
                c.set(key, &p.to_string_lossy())?;
            }
        }
        let values = [
            ("categories", &self.category),
            ("variants", &self.variant),
            ("algorithms", &self.algorithm),
            ("resolution", &self.resolution),
            ("gamma", &self.gamma),
            ("k", &self.k),
            ("laplacian", &self.laplacian),
            ("min_comments", &self.min_comments),
            ("min_edge_weight", &self.min_edge_weight),
            ("blend_rating", &self.blend_rating),
            ("blend_count", &self.blend_count),
            ("filter_mode", &self.filter_mode),
            ("modularity_mode", &self.modularity_mode),
            ("seed", &self.seed),
            ("workers", &self.workers),
        ];
        for (key, value) in values {
            if let Some(v) = value {
                c.set(key, v)?;
            }
        }
        Ok(c)
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run(args) => {
            let config = args.config()?;
            let reports = run_pipeline(&config)?;
            println!("algorithm\tvariant\tcategory\tmodularity\tcommunities\tseconds");
            for r in &reports {
                println!(
                    "{}\t{}\t{}\t{:.6}\t{}\t{:.3}",
                    r.report.algorithm,
                    r.variant,
                    r.category_label(),
                    r.modularity,
                    r.report.community_count,
                    r.duration.as_secs_f64()
                );
            }
        }
        Command::Project(args) => {
            let config = args.config()?;
            println!("variant\tcategory\titems\tedges");
            for n in project_networks(&config)? {
                println!(
                    "{}\t{}\t{}\t{}",
                    n.variant,
                    n.category_label(),
                    n.graph.item_count(),
                    n.graph.edge_count()
                );
            }
        }
        Command::Score {
            graphml,
            communities,
        } => {
            println!("{}", rescore(graphml, communities)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // usage errors are input errors; 2 is reserved for algorithm failures
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
