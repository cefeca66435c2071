//! Command-line front end for the wordworld simulator: run experiments from
//! config files, generate curriculum datasets, describe scenes with a saved
//! learner, and inspect learner state.
//!
//! Data goes to files and standard output; logging goes to standard error.
//! Exit codes are a stable contract: 0 success, 1 validation error, 2 I/O
//! error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wordworld_core::assets::{load_bundle, AssetBundle};
use wordworld_core::experiment::{
    resolve_stage, run_experiment, sample_experiment_config, write_artifacts, ExperimentConfig,
    Instance, InstantiationStrategy, ObserverEvent, ObserverEventKind, Stage, StageSource,
};
use wordworld_core::graphs::to_graph;
use wordworld_core::learners::{ConceptKind, IntegratedLearner};
use wordworld_core::perception::PerceptualRepresentation;
use wordworld_core::persist::{from_versioned_ron, to_versioned_ron};
use wordworld_core::{Error, Result};

/// Environment variable naming the default output root, consulted when
/// neither `--out` nor the config file provides an output directory.
const OUTPUT_ROOT_ENV: &str = "WORDWORLD_OUT";

#[derive(Parser)]
#[command(
    name = "wordworld",
    version,
    about = "Grounded word-learning simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Log progress to standard error.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Args)]
struct CommonOpts {
    /// Path to a versioned RON config file (bundled sample when omitted).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides config and the WORDWORLD_OUT variable).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override a scalar config field, e.g. `--set master_seed=7`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment: train a learner, test it, write artifacts.
    Run(CommonOpts),
    /// Instantiate a curriculum stage into (situation, utterance, perception)
    /// tuples, or dump the bundled assets.
    Generate {
        #[command(flatten)]
        opts: CommonOpts,
        /// Write the bundled ontology, lexicon and sample experiment config
        /// instead of generating a dataset.
        #[arg(long)]
        dump_assets: bool,
    },
    /// Print a saved learner's ranked descriptions of a scene.
    Describe {
        /// Saved learner state file.
        state: PathBuf,
        /// Scene file: a generated instance or a bare perception dump.
        scene: PathBuf,
    },
    /// Dump a saved learner's lexicon entries and their meaning patterns.
    Inspect {
        /// Saved learner state file.
        state: PathBuf,
        /// Only list entries whose word contains this substring.
        filter: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            // Bad arguments are a validation error under the exit-code
            // contract, not clap's default status 2.
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let verbose = cli.verbose;
    let result = match cli.command {
        Command::Run(opts) => cmd_run(&opts, verbose),
        Command::Generate { opts, dump_assets } => cmd_generate(&opts, dump_assets, verbose),
        Command::Describe { state, scene } => cmd_describe(&state, &scene),
        Command::Inspect { state, filter } => cmd_inspect(&state, filter.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wordworld: {e}");
            match e {
                Error::Io(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

/// Parse each `--set` item into a `(key, value)` pair.
fn parse_overrides(set: &[String]) -> Result<Vec<(String, String)>> {
    set.iter()
        .map(|item| {
            item.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::Invalid(format!("`--set {item}` is not KEY=VALUE")))
        })
        .collect()
}

fn parse_u64(key: &str, value: &str) -> Result<u64> {
    value
        .parse()
        .map_err(|_| Error::Invalid(format!("`{key}` expects an integer, got `{value}`")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::Invalid(format!("`{key}` expects an integer, got `{value}`")))
}

/// The output directory for a command: the `--out` flag, then the config's
/// own directory, then the `WORDWORLD_OUT` environment variable.
fn resolve_output_dir(opts: &CommonOpts, from_config: Option<&Path>) -> Option<PathBuf> {
    opts.out
        .clone()
        .or_else(|| from_config.map(Path::to_path_buf))
        .or_else(|| std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from))
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn load_experiment_config(opts: &CommonOpts) -> Result<ExperimentConfig> {
    let mut config = match &opts.config {
        Some(path) => from_versioned_ron(&read_to_string(path)?)?,
        None => sample_experiment_config(0),
    };
    for (key, value) in parse_overrides(&opts.set)? {
        match key.as_str() {
            "master_seed" => config.master_seed = parse_u64(&key, &value)?,
            "output_dir" => config.output_dir = Some(PathBuf::from(value)),
            _ => return Err(Error::Invalid(format!("unknown config key `{key}`"))),
        }
    }
    if let Some(seed) = opts.seed {
        config.master_seed = seed;
    }
    Ok(config)
}

fn cmd_run(opts: &CommonOpts, verbose: bool) -> Result<()> {
    let bundle = load_bundle()?;
    let mut config = load_experiment_config(opts)?;
    // Artifacts go to the resolved directory, but the config the report
    // echoes stays exactly as loaded: runs that differ only in where they
    // write are byte-identical.
    let output_dir = resolve_output_dir(opts, config.output_dir.as_deref());
    config.output_dir = None;
    let mut log = |event: &ObserverEvent| {
        if !verbose {
            return;
        }
        match event.kind {
            ObserverEventKind::BeforeTrainInstance => {}
            ObserverEventKind::AfterTrainInstance => {
                eprintln!("trained {}/{}", event.stage, event.index);
            }
            ObserverEventKind::AfterTraining => eprintln!("training complete"),
            ObserverEventKind::AfterTestInstance => {
                eprintln!("tested {}/{}", event.stage, event.index);
            }
        }
    };
    let report = run_experiment(
        &config,
        &bundle.ontology,
        &bundle.generator,
        &mut [&mut log],
    )?;
    println!(
        "test instances: {}\ntop-choice accuracy: {:.4}\ngold-in-candidates accuracy: {:.4}",
        report.metrics.test_instances,
        report.metrics.top_choice_accuracy,
        report.metrics.gold_in_candidates_accuracy
    );
    if let Some(dir) = &output_dir {
        write_artifacts(&report, dir)?;
        eprintln!("artifacts written to {}", dir.display());
    }
    Ok(())
}

fn dump_assets(bundle: &AssetBundle, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut files: BTreeMap<String, String> = bundle
        .dump()?
        .into_iter()
        .map(|(name, text)| (name.to_string(), text))
        .collect();
    files.insert(
        "sample-experiment.ron".to_string(),
        to_versioned_ron(&sample_experiment_config(0))?,
    );
    for (name, text) in &files {
        fs::write(dir.join(name), text)?;
    }
    Ok(())
}

fn cmd_generate(opts: &CommonOpts, dump: bool, verbose: bool) -> Result<()> {
    let bundle = load_bundle()?;
    let dir = resolve_output_dir(opts, None).ok_or_else(|| {
        Error::Invalid(format!(
            "no output directory: pass --out or set {OUTPUT_ROOT_ENV}"
        ))
    })?;
    if dump {
        dump_assets(&bundle, &dir)?;
        if verbose {
            eprintln!("assets dumped to {}", dir.display());
        }
        return Ok(());
    }
    let path = opts
        .config
        .as_ref()
        .ok_or_else(|| Error::Invalid("generate needs --config <stage file>".into()))?;
    let mut stage: Stage = from_versioned_ron(&read_to_string(path)?)?;
    for (key, value) in parse_overrides(&opts.set)? {
        match key.as_str() {
            "repeat" => stage.repeat = parse_usize(&key, &value)?,
            "sample" => {
                if let StageSource::Templates { strategy, .. } = &mut stage.source {
                    *strategy = InstantiationStrategy::Sample {
                        n: parse_usize(&key, &value)?,
                    };
                }
            }
            _ => return Err(Error::Invalid(format!("unknown stage key `{key}`"))),
        }
    }
    let seed = opts.seed.unwrap_or(0);
    let instances = resolve_stage(&stage, &bundle.ontology, &bundle.generator, seed)?;
    // A sample of zero is a legitimately empty dataset; anything else coming
    // back empty means the template's instantiation space is empty.
    let requested_zero = matches!(
        &stage.source,
        StageSource::Templates {
            strategy: InstantiationStrategy::Sample { n: 0 },
            ..
        }
    );
    if instances.is_empty() && !requested_zero {
        return Err(Error::EmptyInstantiationSpace);
    }
    fs::create_dir_all(&dir)?;
    for (i, instance) in instances.iter().enumerate() {
        fs::write(
            dir.join(format!("instance-{i:03}.ron")),
            to_versioned_ron(instance)?,
        )?;
    }
    if verbose {
        eprintln!("{} instances written to {}", instances.len(), dir.display());
    }
    Ok(())
}

/// A scene file is either a full generated instance or a bare perception dump.
fn load_scene(path: &Path) -> Result<PerceptualRepresentation> {
    let text = read_to_string(path)?;
    match from_versioned_ron::<Instance>(&text) {
        Ok(instance) => Ok(instance.perception),
        Err(Error::UnknownFormatVersion { found, supported }) => {
            Err(Error::UnknownFormatVersion { found, supported })
        }
        Err(_) => from_versioned_ron(&text),
    }
}

fn cmd_describe(state: &Path, scene: &Path) -> Result<()> {
    let learner = IntegratedLearner::load_from_string(&read_to_string(state)?)?;
    let perception = load_scene(scene)?;
    let descriptions = learner.describe(&to_graph(&perception));
    if descriptions.is_empty() {
        println!("no descriptions");
        return Ok(());
    }
    for (tokens, score) in &descriptions {
        println!("{}\t{score:.6}", tokens.join(" "));
    }
    Ok(())
}

fn kind_label(kind: ConceptKind) -> &'static str {
    match kind {
        ConceptKind::Object => "object",
        ConceptKind::Attribute => "attribute",
        ConceptKind::Relation => "relation",
        ConceptKind::Action => "action",
    }
}

fn cmd_inspect(state: &Path, filter: Option<&str>) -> Result<()> {
    let learner = IntegratedLearner::load_from_string(&read_to_string(state)?)?;
    for (kind, word, entry) in learner.entries() {
        if filter.is_some_and(|f| !word.contains(f)) {
            continue;
        }
        println!(
            "{word}  kind={} observations={} hypotheses={} lexicalized={}",
            kind_label(kind),
            entry.store.observations,
            entry.store.hypotheses.len(),
            learner.is_lexicalized(entry),
        );
        if let Some(leader) = entry.store.leader() {
            let hypothesis = &entry.store.hypotheses[leader];
            println!("leading hypothesis (score {:.6}):", hypothesis.score);
            println!("{}", to_versioned_ron(&hypothesis.meaning)?);
        }
        println!();
    }
    Ok(())
}
