//! `hodep`: train, parse, evaluate, and verify high-order projective
//! dependency parsers.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use log::info;
use rayon::prelude::*;

use hodep::conll::{projectivize, read_conll, write_conll, ConllSentence};
use hodep::eval::{evaluate, PunctProfile, SentencePair};
use hodep::features::LanguageProfile;
use hodep::train::{train, Model, TrainConfig};
use hodep::verify::verify_all;
use hodep::{Factorization, ProjectiveTree, Sentence};

#[derive(Parser)]
#[command(name = "hodep", version, about = "High-order projective dependency parser")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model on a CoNLL-X treebank.
    Train(TrainArgs),
    /// Parse a CoNLL-X file with a trained model.
    Parse(ParseArgs),
    /// Score predicted trees against gold trees.
    Eval(EvalArgs),
    /// Check every inference routine against brute-force enumeration.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long, value_name = "CONLL")]
    train: PathBuf,
    #[arg(long, value_name = "PATH")]
    model_out: PathBuf,
    #[arg(long, value_parser = parse_from_str::<Factorization>)]
    factorization: Factorization,
    /// Development set; its UAS is reported after training.
    #[arg(long, value_name = "CONLL")]
    dev: Option<PathBuf>,
    /// L2 regularization coefficient.
    #[arg(long, default_value_t = 0.01)]
    c: f64,
    /// Maximum L-BFGS iterations.
    #[arg(long, default_value_t = 200)]
    iters: usize,
    /// Training worker threads.
    #[arg(long, env = "HODEP_THREADS", default_value_t = 1)]
    threads: usize,
    /// Training sentences longer than this are skipped.
    #[arg(long, default_value_t = 100)]
    max_len: usize,
    #[arg(long, value_parser = parse_from_str::<LanguageProfile>, default_value = "generic")]
    lang_profile: LanguageProfile,
}

#[derive(Args)]
struct ParseArgs {
    #[arg(long, value_name = "PATH")]
    model: PathBuf,
    /// Input file, or `-` for standard input.
    #[arg(long, value_name = "CONLL")]
    input: String,
    /// Output file, or `-` for standard output.
    #[arg(long, value_name = "PATH", default_value = "-")]
    output: String,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_name = "CONLL")]
    gold: String,
    #[arg(long, value_name = "CONLL")]
    pred: String,
    #[arg(long, value_parser = parse_from_str::<PunctProfile>, default_value = "none")]
    punct: PunctProfile,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest sentence length enumerated (1 to 6).
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=6))]
    max_n: u64,
    /// Random score tables per sentence length and factorization.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_from_str<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| e.to_string())
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_VERIFY: u8 = 3;

fn data<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure {
        code: EXIT_DATA,
        error: e.into(),
    }
}

fn usage(msg: String) -> Failure {
    Failure {
        code: EXIT_USAGE,
        error: anyhow!(msg),
    }
}

fn open_input(path: &str) -> anyhow::Result<Box<dyn BufRead>> {
    if path == "-" {
        Ok(Box::new(BufReader::new(io::stdin())))
    } else {
        let f = File::open(path).with_context(|| format!("cannot open {path}"))?;
        Ok(Box::new(BufReader::new(f)))
    }
}

fn read_corpus(path: &str, profile: LanguageProfile) -> anyhow::Result<Vec<ConllSentence>> {
    let reader = open_input(path)?;
    read_conll(reader, profile).with_context(|| format!("reading {path}"))
}

fn punct_for(profile: LanguageProfile) -> PunctProfile {
    match profile {
        LanguageProfile::English => PunctProfile::English,
        LanguageProfile::Chinese => PunctProfile::Chinese,
        _ => PunctProfile::None,
    }
}

fn parse_all(model: &Model, sentences: &[ConllSentence]) -> Vec<Vec<usize>> {
    sentences
        .par_iter()
        .map(|s| model.parse(&s.sentence).into_heads())
        .collect()
}

fn cmd_train(args: TrainArgs) -> Result<(), Failure> {
    if args.threads == 0 {
        return Err(usage("--threads must be at least 1".into()));
    }
    if !(args.c >= 0.0 && args.c.is_finite()) {
        return Err(usage("--c must be a finite non-negative number".into()));
    }
    let path = args.train.to_string_lossy();
    let raw = read_corpus(&path, args.lang_profile).map_err(data)?;
    let mut corpus: Vec<(Sentence, ProjectiveTree)> = Vec::with_capacity(raw.len());
    let mut changed = 0;
    for (k, s) in raw.into_iter().enumerate() {
        let tree = projectivize(&s.tree)
            .map_err(|e| data(anyhow!("{path}: sentence {}: {e}", k + 1)))?;
        if tree.heads() != s.tree.heads() {
            changed += 1;
        }
        corpus.push((s.sentence, tree));
    }
    if changed > 0 {
        info!("projectivized {changed} non-projective training trees");
    }
    let config = TrainConfig {
        regularizer_c: args.c,
        max_iterations: args.iters,
        worker_count: args.threads,
        max_len: args.max_len,
        ..TrainConfig::default()
    };
    let (weights, dictionary, report) = train(&corpus, args.factorization, &config).map_err(data)?;
    let model = Model::new(args.factorization, args.lang_profile, args.c, dictionary, weights).map_err(data)?;
    model
        .save(&args.model_out)
        .map_err(|e| data(anyhow!("writing {}: {e}", args.model_out.display())))?;
    println!("objective={:.10e}", report.regularized_objective);
    println!("log_likelihood={:.10e}", report.log_likelihood);
    println!("iterations={}", report.iterations);
    println!("converged={}", report.converged);
    println!("features={}", model.dictionary.len());
    println!("excluded={}", report.excluded_sentences);

    if let Some(dev) = args.dev {
        let dev_path = dev.to_string_lossy();
        let sentences = read_corpus(&dev_path, args.lang_profile).map_err(data)?;
        let predicted = parse_all(&model, &sentences);
        let pos: Vec<Vec<String>> = sentences.iter().map(ConllSentence::gold_pos).collect();
        let metrics = evaluate(
            sentences.iter().zip(&predicted).zip(&pos).map(|((s, p), pos)| SentencePair {
                gold: s.tree.heads(),
                predicted: p,
                gold_pos: pos,
            }),
            &punct_for(args.lang_profile).tags(),
        )
        .map_err(data)?;
        println!("dev_uas={:.4}", metrics.uas());
    }
    Ok(())
}

fn cmd_parse(args: ParseArgs) -> Result<(), Failure> {
    let model = Model::load(Path::new(&args.model))
        .with_context(|| format!("loading model {}", args.model.display()))
        .map_err(data)?;
    info!("loaded {} model with {} features", model.factorization, model.dictionary.len());
    let sentences = read_corpus(&args.input, model.profile).map_err(data)?;
    let predicted = parse_all(&model, &sentences);
    let pairs = sentences.iter().zip(predicted.iter().map(Vec::as_slice));
    let result = if args.output == "-" {
        let stdout = io::stdout();
        let mut w = BufWriter::new(stdout.lock());
        write_conll(&mut w, pairs).and_then(|_| w.flush())
    } else {
        File::create(&args.output).and_then(|f| {
            let mut w = BufWriter::new(f);
            write_conll(&mut w, pairs)?;
            w.flush()
        })
    };
    result.with_context(|| format!("writing {}", args.output)).map_err(data)?;
    info!("parsed {} sentences", sentences.len());
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<(), Failure> {
    let gold = read_corpus(&args.gold, LanguageProfile::Generic).map_err(data)?;
    let pred = read_corpus(&args.pred, LanguageProfile::Generic).map_err(data)?;
    if gold.len() != pred.len() {
        return Err(data(anyhow!(
            "{} has {} sentences but {} has {}",
            args.gold,
            gold.len(),
            args.pred,
            pred.len()
        )));
    }
    let pos: Vec<Vec<String>> = gold.iter().map(ConllSentence::gold_pos).collect();
    let metrics = evaluate(
        gold.iter().zip(&pred).zip(&pos).map(|((g, p), pos)| SentencePair {
            gold: g.tree.heads(),
            predicted: p.tree.heads(),
            gold_pos: pos,
        }),
        &args.punct.tags(),
    )
    .map_err(data)?;
    println!("{metrics}");
    print!("{}", metrics.key_values());
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let reports = verify_all(args.max_n as usize, args.trials, args.seed).map_err(data)?;
    let mut ok = true;
    for r in &reports {
        println!("{r}");
        ok &= r.passed();
    }
    let worst = reports.iter().map(|r| r.log_partition_error).fold(0.0, f64::max);
    println!("max_logz_rel_error={worst:.3e}");
    if ok {
        println!("verification passed");
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VERIFY,
            error: anyhow!("verification failed: a tolerance was exceeded"),
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let result = match cli.command {
        Command::Train(a) => cmd_train(a),
        Command::Parse(a) => cmd_parse(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
