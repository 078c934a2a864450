use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lid_core::{CorpusFormat, Preset, ReportFormat, TfMode, WeightMode};

/// Identify the language of short texts from stop words and diacritics.
#[derive(Debug, Parser)]
#[command(name = "lid", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a text, or every line of a file or of stdin.
    Detect(DetectArgs),
    /// Score a labeled corpus and report accuracy and confusion.
    Evaluate(EvaluateArgs),
    /// Lexicon utilities.
    #[command(subcommand)]
    Dict(DictCommand),
    /// List the built-in scoring presets as equivalent flags.
    Presets,
}

#[derive(Debug, Args)]
pub struct ScoringArgs {
    /// Named configuration (test1 ... test9).
    #[arg(long, conflicts_with_all = ["p", "tf", "weight", "fallback"])]
    pub preset: Option<Preset>,

    /// Stop-word share of the score, in [0, 1]. Accepts fractions like 1/3.
    #[arg(long, value_parser = parse_p, required_unless_present = "preset")]
    pub p: Option<f64>,

    /// Term frequency mode: raw or log.
    #[arg(long, required_unless_present = "preset")]
    pub tf: Option<TfMode>,

    /// Language weight mode: unit, ratio or log_ratio.
    #[arg(long, required_unless_present = "preset")]
    pub weight: Option<WeightMode>,

    /// Score with stop words only when a text has no diacritics [default: on].
    #[arg(long, value_parser = parse_switch)]
    pub fallback: Option<bool>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Lexicon directory with one subdirectory per language.
    #[arg(long, env = "LID_LEXICON")]
    pub lexicon: PathBuf,

    #[command(flatten)]
    pub scoring: ScoringArgs,

    /// Also print the per-language scores as a JSON object.
    #[arg(long)]
    pub scores: bool,

    /// Read one document per line from stdin.
    #[arg(long, conflicts_with_all = ["file", "text"])]
    pub stdin: bool,

    /// Read one document per line from a file.
    #[arg(long, conflicts_with = "text")]
    pub file: Option<PathBuf>,

    /// Text to classify.
    #[arg(required_unless_present_any = ["stdin", "file"])]
    pub text: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long, env = "LID_LEXICON")]
    pub lexicon: PathBuf,

    #[command(flatten)]
    pub scoring: ScoringArgs,

    /// Labeled corpus file.
    #[arg(long)]
    pub corpus: PathBuf,

    /// Corpus format: tsv (label<TAB>text) or jsonl ({"label", "text"}).
    #[arg(long, default_value = "tsv")]
    pub format: CorpusFormat,

    /// Worker threads. Output does not depend on this.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,

    /// Report format: table, csv or json.
    #[arg(long, default_value = "table")]
    pub report: ReportFormat,

    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DictCommand {
    /// Fold the diacritics out of a word list.
    Strip {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a copy of a lexicon with stripped stop-word variants added.
    Augment {
        #[arg(long, env = "LID_LEXICON")]
        lexicon: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report problems in a lexicon.
    Validate {
        #[arg(long, env = "LID_LEXICON")]
        lexicon: PathBuf,
    },
    /// Print the built-in diacritic table.
    ShowBuiltinDiacritics,
}

fn parse_p(s: &str) -> Result<f64, String> {
    let bad = || format!("expected a number or fraction in [0, 1], got {s:?}");
    let p = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            if den == 0.0 {
                return Err(bad());
            }
            num / den
        }
        None => s.trim().parse().map_err(|_| bad())?,
    };
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(bad())
    }
}

fn parse_switch(s: &str) -> Result<bool, String> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(format!("expected on or off, got {s:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions() {
        assert_eq!(parse_p("1/3"), Ok(1.0 / 3.0));
        assert_eq!(parse_p("1/2"), Ok(0.5));
        assert_eq!(parse_p("0"), Ok(0.0));
        assert_eq!(parse_p("0.25"), Ok(0.25));
        assert!(parse_p("4/3").is_err());
        assert!(parse_p("1/0").is_err());
        assert!(parse_p("NaN").is_err());
        assert!(parse_p("-0.1").is_err());
    }

    #[test]
    fn preset_flags_parse_back() {
        for preset in Preset::ALL {
            let cfg = preset.config();
            assert_eq!(parse_p(preset.p_label()), Ok(cfg.p()));
        }
    }

    #[test]
    fn command_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
