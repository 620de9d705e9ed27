mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    BuildGraphsArgs, EvalArgs, GnnTrainArgs, InferArgs, LabelArgs, RenderArgs, ReprTrainArgs,
    SynthArgs,
};

#[derive(Parser)]
#[command(name = "tabgraph", version, about = "Token-level table extraction and layout analysis")]
struct Cli {
    /// Worker threads for per-page work.
    #[arg(long, global = true, env = "TABGRAPH_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Label tokens from region annotations.
    Label(LabelArgs),
    /// Generate a synthetic labeled corpus.
    Synth(SynthArgs),
    /// Build page graphs and write a graph cache.
    BuildGraphs(BuildGraphsArgs),
    /// Induce prototypes and train representation embeddings.
    ReprTrain(ReprTrainArgs),
    /// Train the node classifier.
    GnnTrain(GnnTrainArgs),
    /// Predict token labels with a trained model.
    Infer(InferArgs),
    /// Compare predicted labels with gold labels.
    Eval(EvalArgs),
    /// Draw SVG overlays of labels or blocks.
    Render(RenderArgs),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set up {n} threads: {e}");
            return ExitCode::FAILURE;
        }
    }
    let result = match &cli.command {
        Command::Label(a) => commands::label(a),
        Command::Synth(a) => commands::synth(a),
        Command::BuildGraphs(a) => commands::build_graphs(a),
        Command::ReprTrain(a) => commands::repr_train(a),
        Command::GnnTrain(a) => commands::gnn_train(a),
        Command::Infer(a) => commands::infer(a),
        Command::Eval(a) => commands::eval(a),
        Command::Render(a) => commands::render(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
