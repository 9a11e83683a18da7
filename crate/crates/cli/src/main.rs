use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use morphud::conllu::{self, ParseMode, Sentence};
use morphud::eval::{analyze, Analysis, AnalysisOptions, ConfusionFilter, DepthConvention, Direction, LabelMatch};
use morphud::{export_corpus, ExportMode, TagMap};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "morphud",
    version,
    about = "Convert Korean UD treebanks between eojeol and morpheme level, and score parser output"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert a word-level treebank to morpheme level.
    W2m(W2m),
    /// Convert a morpheme-level treebank back to word level using a skeleton.
    M2w(M2w),
    /// Attachment scores of a system file against gold.
    Eval(Eval),
    /// Scores plus arc-direction and arc-depth confusion matrices.
    Analyze(Analyze),
    /// Write one sentence per line of words or morphemes.
    ExportCorpus(ExportCorpus),
    /// Check that files are well-formed single-rooted trees.
    Validate(Validate),
}

#[derive(Args, Debug)]
struct W2m {
    /// Tag map file, or `sejong` / `kaist` for a bundled profile.
    #[arg(long, env = "MORPHUD_TAGMAP")]
    tagmap: String,
    /// Drop sentences that cannot be converted instead of failing.
    #[arg(long)]
    skip_bad: bool,
    /// Print the summary as JSON.
    #[arg(long)]
    json: bool,
    input: PathBuf,
    output: PathBuf,
}

#[derive(Args, Debug)]
struct M2w {
    /// Word-level file supplying segmentation and every column except HEAD and DEPREL.
    #[arg(long)]
    skeleton: PathBuf,
    /// Tag map used to re-detect heads; defaults to the bundled Sejong profile.
    #[arg(long, env = "MORPHUD_TAGMAP")]
    tagmap: Option<String>,
    input: PathBuf,
    output: PathBuf,
    /// Write repair counts as JSON to this file.
    #[arg(long)]
    repair_report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Scoring {
    gold: PathBuf,
    system: PathBuf,
    /// Compare full relation labels instead of the part before `:`.
    #[arg(long)]
    exact_labels: bool,
}

#[derive(Args, Debug)]
struct Eval {
    #[command(flatten)]
    scoring: Scoring,
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Filter {
    Errors,
    All,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum DepthOrigin {
    /// The virtual root has depth 0, the root token 1.
    VirtualRoot,
    /// The root token has depth 0.
    RootToken,
}

#[derive(Args, Debug)]
struct Analyze {
    #[command(flatten)]
    scoring: Scoring,
    #[arg(long, value_enum, default_value = "errors")]
    filter: Filter,
    #[arg(long, default_value_t = 10)]
    depth_cap: usize,
    #[arg(long, value_enum, default_value = "virtual-root")]
    depth_origin: DepthOrigin,
    #[arg(long, conflicts_with = "tsv")]
    json: bool,
    #[arg(long)]
    tsv: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Mode {
    Word,
    Morpheme,
}

#[derive(Args, Debug)]
struct ExportCorpus {
    #[arg(long, value_enum, default_value = "morpheme")]
    mode: Mode,
    input: PathBuf,
    /// Output file; standard output when omitted.
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Validate {
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

fn read(path: &Path, mode: ParseMode) -> Result<Vec<Sentence>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    conllu::parse_conllu(BufReader::new(file), mode).with_context(|| format!("{}", path.display()))
}

fn load_tagmap(source: &str) -> Result<TagMap> {
    TagMap::resolve(source).with_context(|| format!("loading tag map `{}`", source))
}

fn run_w2m(args: W2m) -> Result<()> {
    let tagmap = load_tagmap(&args.tagmap)?;
    let summary = morphud::convert_treebank(&args.input, &tagmap, &args.output, args.skip_bad)?;
    if summary.mismatches > 0 {
        log::warn!("{} words kept whole (lemma/XPOS segment mismatch)", summary.mismatches);
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&summary)?);
    } else {
        println!("{}", summary);
    }
    Ok(())
}

fn run_m2w(args: M2w) -> Result<()> {
    let tagmap = match &args.tagmap {
        Some(source) => load_tagmap(source)?,
        None => TagMap::sejong(),
    };
    let report = morphud::revert_treebank(&args.input, &args.skeleton, &tagmap, &args.output)?;
    if !report.is_clean() {
        log::warn!("{} repairs applied to malformed morpheme trees", report.total());
    }
    if let Some(path) = &args.repair_report {
        let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        serde_json::to_writer_pretty(BufWriter::new(file), &report)?;
    }
    println!("{} repairs", report.total());
    Ok(())
}

fn load_pair(scoring: &Scoring) -> Result<(Vec<Sentence>, Vec<Sentence>)> {
    let gold = read(&scoring.gold, ParseMode::Strict)?;
    let system = read(&scoring.system, ParseMode::Lenient)?;
    Ok((gold, system))
}

fn label_match(scoring: &Scoring) -> LabelMatch {
    if scoring.exact_labels {
        LabelMatch::Exact
    } else {
        LabelMatch::MainRelation
    }
}

fn run_eval(args: Eval) -> Result<()> {
    let (gold, system) = load_pair(&args.scoring)?;
    let report = morphud::score(&gold, &system, label_match(&args.scoring))?;
    if args.json {
        let value = json!({
            "total": report.total,
            "uas_correct": report.uas_correct,
            "las_correct": report.las_correct,
            "uas": report.uas(),
            "las": report.las(),
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        println!("{}", report);
    }
    Ok(())
}

fn analysis_json(analysis: &Analysis, filter: Filter) -> serde_json::Value {
    json!({
        "total": analysis.report.total,
        "uas_correct": analysis.report.uas_correct,
        "las_correct": analysis.report.las_correct,
        "uas": analysis.report.uas(),
        "las": analysis.report.las(),
        "filter": match filter { Filter::Errors => "errors", Filter::All => "all" },
        "direction_labels": Direction::ALL.map(Direction::short),
        "direction_matrix": analysis.direction.counts,
        "depth_cap": analysis.depth.cap,
        "depth_matrix": analysis.depth.counts,
    })
}

fn write_tsv(out: &mut impl Write, analysis: &Analysis) -> io::Result<()> {
    let r = &analysis.report;
    writeln!(out, "metric\tvalue")?;
    writeln!(out, "total\t{}", r.total)?;
    writeln!(out, "uas\t{:.4}", r.uas())?;
    writeln!(out, "las\t{:.4}", r.las())?;
    writeln!(out)?;
    writeln!(out, "direction\tgold\tsystem\tcount")?;
    for g in Direction::ALL {
        for s in Direction::ALL {
            writeln!(out, "direction\t{}\t{}\t{}", g.short(), s.short(), analysis.direction.get(g, s))?;
        }
    }
    writeln!(out)?;
    writeln!(out, "depth\tgold\tsystem\tcount")?;
    for (g, row) in analysis.depth.counts.iter().enumerate() {
        for (s, count) in row.iter().enumerate() {
            writeln!(out, "depth\t{}\t{}\t{}", g, s, count)?;
        }
    }
    Ok(())
}

fn write_text(out: &mut impl Write, analysis: &Analysis) -> io::Result<()> {
    writeln!(out, "{} ({} tokens)", analysis.report, analysis.report.total)?;
    writeln!(out)?;
    writeln!(out, "arc direction (rows gold, columns system)")?;
    writeln!(out, "\tL\tR\tO")?;
    for g in Direction::ALL {
        let row = analysis.direction.counts[g.index()].map(|c| c.to_string()).join("\t");
        writeln!(out, "{}\t{}", g.short(), row)?;
    }
    writeln!(out)?;
    writeln!(out, "arc depth (rows gold, columns system; last bucket includes deeper arcs)")?;
    let header: Vec<String> = (0..=analysis.depth.cap).map(|d| d.to_string()).collect();
    writeln!(out, "\t{}", header.join("\t"))?;
    for (g, row) in analysis.depth.counts.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        writeln!(out, "{}\t{}", g, cells.join("\t"))?;
    }
    Ok(())
}

fn run_analyze(args: Analyze) -> Result<()> {
    let (gold, system) = load_pair(&args.scoring)?;
    let options = AnalysisOptions {
        labels: label_match(&args.scoring),
        filter: match args.filter {
            Filter::Errors => ConfusionFilter::ErrorsOnly,
            Filter::All => ConfusionFilter::All,
        },
        depth_cap: args.depth_cap,
        convention: match args.depth_origin {
            DepthOrigin::VirtualRoot => DepthConvention::VirtualRoot,
            DepthOrigin::RootToken => DepthConvention::RootToken,
        },
    };
    let analysis = analyze(&gold, &system, options)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&analysis_json(&analysis, args.filter))?)?;
    } else if args.tsv {
        write_tsv(&mut out, &analysis)?;
    } else {
        write_text(&mut out, &analysis)?;
    }
    Ok(())
}

fn run_export(args: ExportCorpus) -> Result<()> {
    let sentences = read(&args.input, ParseMode::Strict)?;
    let mode = match args.mode {
        Mode::Word => ExportMode::Word,
        Mode::Morpheme => ExportMode::Morpheme,
    };
    let text = export_corpus(&sentences, mode);
    match &args.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run_validate(args: Validate) -> Result<()> {
    for path in &args.files {
        let sentences = read(path, ParseMode::Strict)?;
        let tokens: usize = sentences.iter().map(Sentence::len).sum();
        println!("{}: {} sentences, {} tokens, valid", path.display(), sentences.len(), tokens);
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::W2m(args) => run_w2m(args),
        Command::M2w(args) => run_m2w(args),
        Command::Eval(args) => run_eval(args),
        Command::Analyze(args) => run_analyze(args),
        Command::ExportCorpus(args) => run_export(args),
        Command::Validate(args) => run_validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(1)
        }
    }
}
