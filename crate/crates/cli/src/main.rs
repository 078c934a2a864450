mod args;

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use lid_core::lexicon::builtin_diacritic_rows;
use lid_core::{
    augment_with_stripped_variants, classify, emit_report, evaluate, load_corpus, load_lexicon,
    normalize_text, save_lexicon, strip_diacritics, validate_lexicon, CorpusError, EvalError,
    LexiconError, LexiconSet, Preset, ScoringConfig, Severity,
};

use args::{Cli, Command, DetectArgs, DictCommand, EvaluateArgs, ScoringArgs};

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_LEXICON: u8 = 3;
const EXIT_CORPUS: u8 = 4;

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn io(context: &Path, err: io::Error) -> Self {
        Failure::new(EXIT_IO, format!("{}: {err}", context.display()))
    }
}

impl From<LexiconError> for Failure {
    fn from(err: LexiconError) -> Self {
        let code = match err {
            LexiconError::Io { .. } => EXIT_IO,
            _ => EXIT_LEXICON,
        };
        Failure::new(code, err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let result = match cli.command {
        Command::Detect(a) => detect(a),
        Command::Evaluate(a) => run_evaluate(a),
        Command::Dict(d) => dict(d),
        Command::Presets => presets(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("lid: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn scoring_config(a: &ScoringArgs) -> Result<ScoringConfig, Failure> {
    if let Some(preset) = a.preset {
        return Ok(preset.config());
    }
    // clap guarantees p, tf and weight are present without --preset
    let (Some(p), Some(tf), Some(weight)) = (a.p, a.tf, a.weight) else {
        return Err(Failure::new(
            EXIT_USAGE,
            "need --preset or all of --p, --tf, --weight",
        ));
    };
    ScoringConfig::new(p, tf, weight, a.fallback.unwrap_or(true))
        .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))
}

/// Load a lexicon for scoring. Loader warnings go to stderr; error-severity
/// findings are fatal.
fn scoring_lexicon(path: &Path) -> Result<LexiconSet, Failure> {
    let loaded = load_lexicon(path)?;
    for w in &loaded.warnings {
        eprintln!("lid: {w}");
    }
    let errors: Vec<String> = validate_lexicon(&loaded.lexicon)
        .into_iter()
        .filter(|f| f.severity == Severity::Error)
        .map(|f| f.to_string())
        .collect();
    if !errors.is_empty() {
        return Err(Failure::new(
            EXIT_LEXICON,
            format!(
                "{}: unusable lexicon\n{}",
                path.display(),
                errors.join("\n")
            ),
        ));
    }
    Ok(loaded.lexicon)
}

fn detect(a: DetectArgs) -> Result<(), Failure> {
    let cfg = scoring_config(&a.scoring)?;
    let lex = scoring_lexicon(&a.lexicon)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let emit = |out: &mut dyn Write, text: &str| -> Result<(), Failure> {
        let (verdict, scores) = classify(&normalize_text(text), &lex, &cfg)
            .map_err(|e| Failure::new(EXIT_LEXICON, e.to_string()))?;
        let res = if a.scores {
            let json = serde_json::to_string(&scores).expect("scores serialize");
            writeln!(out, "{}\t{json}", verdict.code())
        } else {
            writeln!(out, "{}", verdict.code())
        };
        res.map_err(|e| Failure::new(EXIT_IO, format!("stdout: {e}")))
    };

    if let Some(text) = &a.text {
        return emit(&mut out, text);
    }
    let (reader, source): (Box<dyn BufRead>, &Path) = match &a.file {
        Some(path) => {
            let f = fs::File::open(path).map_err(|e| Failure::io(path, e))?;
            (Box::new(io::BufReader::new(f)), path.as_path())
        }
        None => (Box::new(io::stdin().lock()), Path::new("stdin")),
    };
    for line in reader.split(b'\n') {
        let mut bytes = line.map_err(|e| Failure::io(source, e))?;
        if bytes.last() == Some(&b'\r') {
            bytes.pop();
        }
        emit(&mut out, &String::from_utf8_lossy(&bytes))?;
    }
    Ok(())
}

fn run_evaluate(a: EvaluateArgs) -> Result<(), Failure> {
    let cfg = scoring_config(&a.scoring)?;
    let lex = scoring_lexicon(&a.lexicon)?;
    let corpus = load_corpus(&a.corpus, a.format).map_err(|e| match e {
        CorpusError::TooManyMalformed { .. } => Failure::new(EXIT_CORPUS, e.to_string()),
        _ => Failure::new(EXIT_IO, e.to_string()),
    })?;
    const SHOWN: usize = 10;
    for s in corpus.skipped.iter().take(SHOWN) {
        eprintln!(
            "lid: {}:{}: skipped ({:?}): {}",
            a.corpus.display(),
            s.line,
            s.reason,
            s.detail
        );
    }
    if corpus.skipped.len() > SHOWN {
        eprintln!(
            "lid: ... {} more skipped lines",
            corpus.skipped.len() - SHOWN
        );
    }

    let report = evaluate(&corpus.documents, &lex, &cfg, usize::from(a.jobs)).map_err(|e| {
        let code = match e {
            EvalError::Score(_) => EXIT_LEXICON,
            _ => EXIT_IO,
        };
        Failure::new(code, format!("{}: {e}", a.corpus.display()))
    })?;
    let bytes = emit_report(&report, a.report);
    match &a.out {
        Some(path) => fs::write(path, &bytes).map_err(|e| Failure::io(path, e))?,
        None => io::stdout()
            .lock()
            .write_all(&bytes)
            .map_err(|e| Failure::new(EXIT_IO, format!("stdout: {e}")))?,
    }

    let m = &report.matrix;
    let unclassified: u64 = m.gold_languages().map(|g| m.count(g, None)).sum();
    eprintln!(
        "overall accuracy {} ({} of {} documents correct, {} unclassified, {} lines skipped)",
        lid_core::evaluation::format_percent(m.trace(), m.total()),
        m.trace(),
        m.total(),
        unclassified,
        corpus.skipped.len()
    );
    Ok(())
}

fn dict(cmd: DictCommand) -> Result<(), Failure> {
    match cmd {
        DictCommand::Strip { input, out } => {
            let text = fs::read_to_string(&input).map_err(|e| Failure::io(&input, e))?;
            let mut seen = BTreeSet::new();
            let mut folded = String::new();
            for line in text.lines() {
                let entry = line.trim().trim_start_matches('\u{feff}');
                if entry.is_empty() || entry.starts_with('#') {
                    continue;
                }
                let s = strip_diacritics(entry);
                if seen.insert(s.clone()) {
                    folded.push_str(&s);
                    folded.push('\n');
                }
            }
            fs::write(&out, folded).map_err(|e| Failure::io(&out, e))
        }
        DictCommand::Augment { lexicon, out } => {
            let loaded = load_lexicon(&lexicon)?;
            for w in &loaded.warnings {
                eprintln!("lid: {w}");
            }
            save_lexicon(&augment_with_stripped_variants(&loaded.lexicon), &out)?;
            Ok(())
        }
        DictCommand::Validate { lexicon } => {
            let loaded = load_lexicon(&lexicon)?;
            let findings: Vec<_> = loaded
                .warnings
                .into_iter()
                .chain(validate_lexicon(&loaded.lexicon))
                .collect();
            let stdout = io::stdout();
            let mut out = stdout.lock();
            for f in &findings {
                writeln!(out, "{f}").map_err(|e| Failure::new(EXIT_IO, format!("stdout: {e}")))?;
            }
            let errors = findings
                .iter()
                .filter(|f| f.severity == Severity::Error)
                .count();
            if errors > 0 {
                return Err(Failure::new(
                    EXIT_LEXICON,
                    format!("{}: {errors} error(s)", lexicon.display()),
                ));
            }
            Ok(())
        }
        DictCommand::ShowBuiltinDiacritics => {
            let mut out = String::new();
            for (code, letters) in builtin_diacritic_rows() {
                out.push_str(&format!("{code}\t{letters}\n"));
            }
            write_stdout(&out)
        }
    }
}

fn presets() -> Result<(), Failure> {
    let mut out = String::new();
    for preset in Preset::ALL {
        let cfg = preset.config();
        out.push_str(&format!(
            "{} --p {} --tf {} --weight {} --fallback {}\n",
            preset.name(),
            preset.p_label(),
            cfg.tf_mode(),
            cfg.weight_mode(),
            if cfg.stopword_fallback() { "on" } else { "off" },
        ));
    }
    write_stdout(&out)
}

fn write_stdout(s: &str) -> Result<(), Failure> {
    io::stdout()
        .lock()
        .write_all(s.as_bytes())
        .map_err(|e| Failure::new(EXIT_IO, format!("stdout: {e}")))
}
