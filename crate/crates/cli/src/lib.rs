//! Command implementations shared by the `signilp`, `signscene` and
//! `factext` binaries.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser};
use signilp::factext::{extract_manifest, facts_program, ExtractConfig};
use signilp::harness::{
    learn, learning_curve, plot_svg_from_csv, robustness_eval, write_curve_csv, write_predictions_csv,
    write_robust_csv, Corpus, Engine, ExperimentConfig, LearnOutput, BUNDLED_METARULES, BUNDLED_MODES,
};
use signilp::lptext::{parse_examples, parse_metarules, parse_modes, parse_program, serialize_clauses, serialize_program};
use signilp::mdie::ModeDecl;
use signilp::mil::Metarule;
use signilp::scene::{generate_dataset, read_manifest, write_dataset, DatasetConfig, Variant, DEFAULT_SCALE};

/// What went wrong, and so which exit code to use.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    Learning(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Learning(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Learning(m) => m,
        }
    }
}

fn data(e: impl Display) -> Failure {
    Failure::Data(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::Data(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

/// Parses arguments the clap way, but with usage errors on exit code 1.
pub fn parse_args<T: Parser>() -> Result<T, ExitCode> {
    T::try_parse().map_err(|e| {
        let _ = e.print();
        if e.use_stderr() {
            ExitCode::from(1)
        } else {
            ExitCode::SUCCESS
        }
    })
}

pub fn finish(result: Result<(), Failure>) -> ExitCode {
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub pos: usize,
    #[arg(long)]
    pub neg: usize,
    #[arg(long, default_value = "base", value_parser = parse_variant)]
    pub variant: Variant,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Nominal sign size in pixels.
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    pub scale: usize,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

pub fn generate(args: &GenerateArgs) -> Result<(), Failure> {
    let cfg = DatasetConfig { pos: args.pos, neg: args.neg, variant: args.variant, seed: args.seed, scale: args.scale };
    let items = generate_dataset(&cfg).map_err(data)?;
    write_dataset(&items, &args.out).map_err(data)?;
    eprintln!("wrote {} signs to {}", items.len(), args.out.display());
    Ok(())
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    /// Directory holding the images.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Manifest path; `<in>/manifest.json` when omitted.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn extract(args: &ExtractArgs) -> Result<(), Failure> {
    let cfg = ExtractConfig::default();
    let manifest = args.manifest.clone().unwrap_or_else(|| args.input.join("manifest.json"));
    let sets = extract_manifest(&args.input, &manifest, &cfg).map_err(data)?;
    write(&args.out, &serialize_program(&facts_program(&sets, &cfg.lexicon)))?;
    eprintln!("extracted {} signs to {}", sets.len(), args.out.display());
    Ok(())
}

#[derive(Args, Debug)]
pub struct LearnArgs {
    #[arg(long, value_parser = parse_engine)]
    pub engine: Engine,
    #[arg(long)]
    pub bk: PathBuf,
    #[arg(long)]
    pub examples: PathBuf,
    /// Mode declarations for mdie; the bundled ones when omitted.
    #[arg(long, conflicts_with = "metarules")]
    pub modes: Option<PathBuf>,
    /// Metarules for mil; the bundled ones when omitted.
    #[arg(long)]
    pub metarules: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    pub timeout_ms: u64,
}

fn parse_engine(s: &str) -> Result<Engine, String> {
    s.parse()
}

fn load_modes(path: Option<&Path>) -> Result<Vec<ModeDecl>, Failure> {
    let text = match path {
        Some(p) => read(p)?,
        None => BUNDLED_MODES.to_string(),
    };
    parse_modes(&text).map_err(data)
}

fn load_metarules(path: Option<&Path>) -> Result<Vec<Metarule>, Failure> {
    let text = match path {
        Some(p) => read(p)?,
        None => BUNDLED_METARULES.to_string(),
    };
    parse_metarules(&text).map_err(data)
}

pub fn learn_cmd(args: &LearnArgs) -> Result<(), Failure> {
    let bk = parse_program(&read(&args.bk)?).map_err(|e| Failure::Data(format!("{}: {e}", args.bk.display())))?;
    let examples =
        parse_examples(&read(&args.examples)?).map_err(|e| Failure::Data(format!("{}: {e}", args.examples.display())))?;
    let (modes, metarules) = match args.engine {
        Engine::Mil => {
            if args.modes.is_some() {
                return Err(Failure::Usage("--modes is for mdie; mil takes --metarules".into()));
            }
            (Vec::new(), load_metarules(args.metarules.as_deref())?)
        }
        Engine::Mdie => {
            if args.metarules.is_some() {
                return Err(Failure::Usage("--metarules is for mil; mdie takes --modes".into()));
            }
            (load_modes(args.modes.as_deref())?, Vec::new())
        }
    };
    let mut config = ExperimentConfig::new(&[args.engine], &[1], 1, 0);
    config.timeout_ms = args.timeout_ms;
    let deadline = Instant::now() + Duration::from_millis(args.timeout_ms);
    match learn(args.engine, &bk, &examples, &modes, &metarules, &config, Some(deadline)) {
        LearnOutput::Hypothesis(clauses) => {
            let text = serialize_clauses(&clauses);
            write(&args.out, &text)?;
            print!("{text}");
            Ok(())
        }
        LearnOutput::NoHypothesis => Err(Failure::Learning("no hypothesis consistent with the examples".into())),
        LearnOutput::TimedOut => Err(Failure::Learning(format!("timed out after {} ms", args.timeout_ms))),
    }
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    #[arg(long)]
    pub config: PathBuf,
}

/// Paths inside a config file are relative to the file.
fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

pub fn curve(args: &CurveArgs) -> Result<(), Failure> {
    let text = read(&args.config)?;
    let config = ExperimentConfig::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", args.config.display())))?;
    let base = args.config.parent().unwrap_or(Path::new("."));
    let extract = ExtractConfig::default();
    let corpus = match &config.data.dir {
        Some(d) => Corpus::from_dir(&resolve(base, d), &extract),
        None => {
            let d = &config.data;
            Corpus::generate(&DatasetConfig::new(d.pos, d.neg, d.variant, d.seed), &extract)
        }
    }
    .map_err(data)?;
    let modes = load_modes(config.modes.as_ref().map(|p| resolve(base, p)).as_deref())?;
    let metarules = load_metarules(config.metarules.as_ref().map(|p| resolve(base, p)).as_deref())?;
    let report = learning_curve(&config, &corpus, &modes, &metarules).map_err(data)?;
    let mut csv = Vec::new();
    write_curve_csv(&report, &mut csv).map_err(data)?;
    let csv = String::from_utf8(csv).expect("csv is utf-8");
    match &config.out {
        Some(p) => write(&resolve(base, p), &csv)?,
        None => print!("{csv}"),
    }
    if let Some(p) = &config.predictions {
        let mut buf = Vec::new();
        write_predictions_csv(&report, &mut buf).map_err(data)?;
        write(&resolve(base, p), &String::from_utf8(buf).expect("csv is utf-8"))?;
    }
    if let Some(p) = &config.plot {
        write(&resolve(base, p), &plot_svg_from_csv(&csv).map_err(data)?)?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct RobustArgs {
    #[arg(long)]
    pub hypothesis: PathBuf,
    /// A dataset directory, or a directory of dataset directories.
    #[arg(long)]
    pub data: PathBuf,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = signilp::logic::DEFAULT_DEPTH_BOUND)]
    pub depth_bound: usize,
}

fn dataset_dirs(root: &Path) -> Result<Vec<PathBuf>, Failure> {
    if root.join("manifest.json").is_file() {
        return Ok(vec![root.to_path_buf()]);
    }
    let mut dirs: Vec<PathBuf> = fs::read_dir(root)
        .map_err(|e| Failure::Data(format!("{}: {e}", root.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join("manifest.json").is_file())
        .collect();
    dirs.sort();
    if dirs.is_empty() {
        return Err(Failure::Data(format!("{}: no manifest.json found", root.display())));
    }
    Ok(dirs)
}

pub fn robust(args: &RobustArgs) -> Result<(), Failure> {
    let hyp = parse_program(&read(&args.hypothesis)?)
        .map_err(|e| Failure::Data(format!("{}: {e}", args.hypothesis.display())))?;
    let extract = ExtractConfig::default();
    // Sign ids repeat across directories, so each keeps its own facts.
    let mut sets: Vec<(Variant, Corpus)> = Vec::new();
    for dir in dataset_dirs(&args.data)? {
        let entries = read_manifest(&dir.join("manifest.json")).map_err(data)?;
        let corpus = Corpus::from_dir(&dir, &extract).map_err(data)?;
        let mut by_variant: BTreeMap<Variant, Corpus> = BTreeMap::new();
        for (entry, item) in entries.iter().zip(&corpus.items) {
            by_variant.entry(entry.variant).or_default().items.push(item.clone());
        }
        for (v, mut c) in by_variant {
            c.bk = corpus.bk.clone();
            sets.push((v, c));
        }
    }
    let rows = robustness_eval(hyp.clauses(), &sets, args.depth_bound);
    let mut buf = Vec::new();
    write_robust_csv(&rows, &mut buf).map_err(data)?;
    let csv = String::from_utf8(buf).expect("csv is utf-8");
    match &args.out {
        Some(p) => write(p, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn plot(args: &PlotArgs) -> Result<(), Failure> {
    let svg = plot_svg_from_csv(&read(&args.csv)?).map_err(|e| Failure::Data(format!("{}: {e}", args.csv.display())))?;
    write(&args.out, &svg)
}
