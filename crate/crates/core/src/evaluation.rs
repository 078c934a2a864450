//! Corpus evaluation: labeled corpora in, accuracy and confusion reports out.
//!
//! Classification is independent per document, so it runs on a rayon pool of
//! the requested size. Results are collected in document order and reduced
//! sequentially, which makes every report byte-identical for any
//! parallelism level.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CorpusError, EvalError, ScoreError};
use crate::lexicon::{LanguageId, LexiconSet};
use crate::normalize::normalize_text;
use crate::scorer::{classify, ScoringConfig, TfMode, UnclassifiedReason, Verdict, WeightMode};

/// Share of malformed lines above which loading aborts.
pub const MAX_MALFORMED_FRACTION: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDocument {
    pub id: usize,
    pub gold: LanguageId,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Tsv,
    Jsonl,
}

impl FromStr for CorpusFormat {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(CorpusFormat::Tsv),
            "jsonl" => Ok(CorpusFormat::Jsonl),
            _ => Err(CorpusError::UnknownFormat(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    /// Missing tab, bad JSON, bad label.
    Malformed,
    /// Well-formed line with an empty label or empty text.
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedLine {
    pub line: usize,
    pub reason: SkipReason,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub documents: Vec<LabeledDocument>,
    pub skipped: Vec<SkippedLine>,
}

impl Corpus {
    pub fn malformed_count(&self) -> usize {
        self.skipped
            .iter()
            .filter(|s| s.reason == SkipReason::Malformed)
            .count()
    }
}

#[derive(Deserialize)]
struct JsonLine {
    label: String,
    text: String,
}

/// Read a labeled corpus. Blank lines are ignored; malformed and empty
/// lines are skipped and recorded; more than 10% malformed lines is an error.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let corpus = parse_corpus(&text, format);
    let total = text.lines().filter(|l| !l.trim().is_empty()).count();
    let malformed = corpus.malformed_count();
    if total > 0 && malformed as f64 > MAX_MALFORMED_FRACTION * total as f64 {
        let first = corpus
            .skipped
            .iter()
            .find(|s| s.reason == SkipReason::Malformed)
            .expect("malformed count is positive");
        return Err(CorpusError::TooManyMalformed {
            path: path.to_path_buf(),
            malformed,
            total,
            first_line: first.line,
            reason: first.detail.clone(),
        });
    }
    Ok(corpus)
}

/// Parse corpus text without the malformed-line limit.
pub fn parse_corpus(text: &str, format: CorpusFormat) -> Corpus {
    let mut corpus = Corpus::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let parsed = match format {
            CorpusFormat::Tsv => match raw.split_once('\t') {
                Some((label, text)) => Ok((label.trim().to_owned(), text.to_owned())),
                None => Err("no tab separator".to_owned()),
            },
            CorpusFormat::Jsonl => serde_json::from_str::<JsonLine>(raw)
                .map(|j| (j.label.trim().to_owned(), j.text))
                .map_err(|e| e.to_string()),
        };
        let skip = |reason, detail: String| SkippedLine {
            line,
            reason,
            detail,
        };
        let (label, text) = match parsed {
            Ok(pair) => pair,
            Err(detail) => {
                corpus.skipped.push(skip(SkipReason::Malformed, detail));
                continue;
            }
        };
        if label.is_empty() || text.trim().is_empty() {
            corpus
                .skipped
                .push(skip(SkipReason::Empty, "empty label or text".into()));
            continue;
        }
        match LanguageId::new(&label) {
            Ok(gold) => corpus.documents.push(LabeledDocument {
                id: corpus.documents.len(),
                gold,
                text,
            }),
            Err(e) => corpus
                .skipped
                .push(skip(SkipReason::Malformed, e.to_string())),
        }
    }
    corpus
}

/// Gold-major confusion counts with an unclassified bucket per gold row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    /// Predicted-language columns, in lexicon order.
    columns: Vec<LanguageId>,
    /// Only gold languages that occur in the corpus, in lexicon order.
    rows: IndexMap<LanguageId, MatrixRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct MatrixRow {
    predicted: Vec<u64>,
    no_evidence: u64,
    tie: u64,
}

impl MatrixRow {
    fn total(&self) -> u64 {
        self.predicted.iter().sum::<u64>() + self.unclassified()
    }

    fn unclassified(&self) -> u64 {
        self.no_evidence + self.tie
    }
}

impl ConfusionMatrix {
    fn new(columns: Vec<LanguageId>) -> Self {
        ConfusionMatrix {
            columns,
            rows: IndexMap::new(),
        }
    }

    fn record(&mut self, gold: &LanguageId, verdict: &Verdict) {
        let width = self.columns.len();
        let row = self.rows.entry(gold.clone()).or_insert_with(|| MatrixRow {
            predicted: vec![0; width],
            no_evidence: 0,
            tie: 0,
        });
        match verdict {
            Verdict::Classified(pred) => {
                let col = self
                    .columns
                    .iter()
                    .position(|c| c == pred)
                    .expect("prediction is a lexicon language");
                row.predicted[col] += 1;
            }
            Verdict::Unclassified(UnclassifiedReason::NoEvidence) => row.no_evidence += 1,
            Verdict::Unclassified(UnclassifiedReason::Tie) => row.tie += 1,
        }
    }

    pub fn columns(&self) -> &[LanguageId] {
        &self.columns
    }

    /// Gold languages with at least one document.
    pub fn gold_languages(&self) -> impl Iterator<Item = &LanguageId> {
        self.rows.keys()
    }

    /// Documents of `gold` predicted as `predicted`; `None` is the
    /// unclassified bucket.
    pub fn count(&self, gold: &LanguageId, predicted: Option<&LanguageId>) -> u64 {
        let Some(row) = self.rows.get(gold) else {
            return 0;
        };
        match predicted {
            None => row.unclassified(),
            Some(p) => self
                .columns
                .iter()
                .position(|c| c == p)
                .map_or(0, |i| row.predicted[i]),
        }
    }

    pub fn unclassified_by_reason(&self, gold: &LanguageId, reason: UnclassifiedReason) -> u64 {
        self.rows.get(gold).map_or(0, |r| match reason {
            UnclassifiedReason::NoEvidence => r.no_evidence,
            UnclassifiedReason::Tie => r.tie,
        })
    }

    pub fn row_total(&self, gold: &LanguageId) -> u64 {
        self.rows.get(gold).map_or(0, MatrixRow::total)
    }

    pub fn correct(&self, gold: &LanguageId) -> u64 {
        self.count(gold, Some(gold))
    }

    pub fn total(&self) -> u64 {
        self.rows.values().map(MatrixRow::total).sum()
    }

    pub fn trace(&self) -> u64 {
        self.rows.keys().map(|g| self.correct(g)).sum()
    }
}

/// Everything needed to reproduce a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub p: f64,
    pub tf_mode: TfMode,
    pub weight_mode: WeightMode,
    pub stopword_fallback: bool,
    pub lexicon_fingerprint: String,
    pub languages: Vec<LanguageId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub per_language_accuracy: IndexMap<LanguageId, f64>,
    pub unclassified_rate: IndexMap<LanguageId, f64>,
    pub overall_accuracy: f64,
    pub matrix: ConfusionMatrix,
    pub config_echo: ConfigEcho,
}

impl EvaluationReport {
    /// Share of `gold` documents assigned to another language.
    pub fn misclassified_rate(&self, gold: &LanguageId) -> f64 {
        let total = self.matrix.row_total(gold);
        if total == 0 {
            return 0.0;
        }
        let wrong = total - self.matrix.correct(gold) - self.matrix.count(gold, None);
        wrong as f64 / total as f64
    }

    pub fn documents(&self) -> u64 {
        self.matrix.total()
    }
}

/// Classify every document and aggregate the results.
pub fn evaluate(
    corpus: &[LabeledDocument],
    lex: &LexiconSet,
    cfg: &ScoringConfig,
    parallelism: usize,
) -> Result<EvaluationReport, EvalError> {
    if parallelism == 0 {
        return Err(EvalError::ZeroParallelism);
    }
    if lex.len() < 2 {
        return Err(ScoreError::TooFewLanguages(lex.len()).into());
    }
    if let Some(doc) = corpus.iter().find(|d| lex.get(&d.gold).is_none()) {
        return Err(EvalError::UnknownGold {
            id: doc.id,
            label: doc.gold.clone(),
        });
    }

    let run = |doc: &LabeledDocument| -> Result<Verdict, ScoreError> {
        classify(&normalize_text(&doc.text), lex, cfg).map(|(v, _)| v)
    };
    let verdicts: Vec<Verdict> = if parallelism == 1 {
        corpus.iter().map(run).collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism)
            .build()
            .map_err(|e| EvalError::ThreadPool(e.to_string()))?;
        pool.install(|| corpus.par_iter().map(run).collect::<Result<_, _>>())?
    };

    let columns: Vec<LanguageId> = lex.language_ids().cloned().collect();
    let mut matrix = ConfusionMatrix::new(columns.clone());
    for id in &columns {
        if corpus.iter().any(|d| &d.gold == id) {
            matrix.rows.insert(
                id.clone(),
                MatrixRow {
                    predicted: vec![0; columns.len()],
                    no_evidence: 0,
                    tie: 0,
                },
            );
        }
    }
    for (doc, verdict) in corpus.iter().zip(&verdicts) {
        matrix.record(&doc.gold, verdict);
    }

    let mut per_language_accuracy = IndexMap::new();
    let mut unclassified_rate = IndexMap::new();
    for gold in matrix.gold_languages() {
        let total = matrix.row_total(gold) as f64;
        per_language_accuracy.insert(gold.clone(), matrix.correct(gold) as f64 / total);
        unclassified_rate.insert(gold.clone(), matrix.count(gold, None) as f64 / total);
    }
    let overall_accuracy = match matrix.total() {
        0 => 0.0,
        n => matrix.trace() as f64 / n as f64,
    };

    Ok(EvaluationReport {
        per_language_accuracy,
        unclassified_rate,
        overall_accuracy,
        matrix,
        config_echo: ConfigEcho {
            p: cfg.p(),
            tf_mode: cfg.tf_mode(),
            weight_mode: cfg.weight_mode(),
            stopword_fallback: cfg.stopword_fallback(),
            lexicon_fingerprint: lex.fingerprint(),
            languages: columns,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(format!(
                "unknown report format {s:?} (expected table, csv or json)"
            )),
        }
    }
}

/// Render a report. Output depends only on the report contents.
pub fn emit_report(report: &EvaluationReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Table => emit_table(report).into_bytes(),
        ReportFormat::Csv => emit_csv(report).into_bytes(),
        ReportFormat::Json => {
            let mut out =
                serde_json::to_vec_pretty(&JsonReport::from(report)).expect("report serializes");
            out.push(b'\n');
            out
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    documents: u64,
    overall_accuracy: f64,
    per_language_accuracy: &'a IndexMap<LanguageId, f64>,
    unclassified_rate: &'a IndexMap<LanguageId, f64>,
    misclassified_rate: IndexMap<&'a LanguageId, f64>,
    /// gold -> predicted (or "unclassified") -> count
    confusion: IndexMap<&'a LanguageId, IndexMap<&'a str, u64>>,
    unclassified_reasons: IndexMap<&'a LanguageId, ReasonSplit>,
    config: &'a ConfigEcho,
}

#[derive(Serialize)]
struct ReasonSplit {
    no_evidence: u64,
    tie: u64,
}

impl<'a> From<&'a EvaluationReport> for JsonReport<'a> {
    fn from(r: &'a EvaluationReport) -> Self {
        let m = &r.matrix;
        let mut confusion = IndexMap::new();
        let mut reasons = IndexMap::new();
        let mut misclassified = IndexMap::new();
        for gold in m.gold_languages() {
            let mut row: IndexMap<&str, u64> = m
                .columns()
                .iter()
                .map(|c| (c.as_str(), m.count(gold, Some(c))))
                .collect();
            row.insert("unclassified", m.count(gold, None));
            confusion.insert(gold, row);
            reasons.insert(
                gold,
                ReasonSplit {
                    no_evidence: m.unclassified_by_reason(gold, UnclassifiedReason::NoEvidence),
                    tie: m.unclassified_by_reason(gold, UnclassifiedReason::Tie),
                },
            );
            misclassified.insert(gold, r.misclassified_rate(gold));
        }
        JsonReport {
            documents: m.total(),
            overall_accuracy: r.overall_accuracy,
            per_language_accuracy: &r.per_language_accuracy,
            unclassified_rate: &r.unclassified_rate,
            misclassified_rate: misclassified,
            confusion,
            unclassified_reasons: reasons,
            config: &r.config_echo,
        }
    }
}

/// Decimal rendering of a rate in `[0, 1]` with at least 12 significant
/// digits.
pub fn format_rate(x: f64) -> String {
    if x == 0.0 {
        return format!("{:.12}", 0.0);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(12) as usize;
    format!("{x:.decimals$}")
}

/// `num / den` as a percentage with two decimals, rounded half up from the
/// exact counts.
pub fn format_percent(num: u64, den: u64) -> String {
    if den == 0 {
        return "-".into();
    }
    let bp = (u128::from(num) * 20_000 + u128::from(den)) / (2 * u128::from(den));
    format!("{}.{:02}%", bp / 100, bp % 100)
}

/// Split 100.00% over `counts` in hundredths of a percent so the parts
/// always add up to exactly 10000 (largest remainder; ties to the earlier
/// index).
fn apportion_basis_points(counts: &[u64]) -> Vec<u64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return vec![0; counts.len()];
    }
    let scaled: Vec<(u64, u64)> = counts
        .iter()
        .map(|&c| {
            let x = u128::from(c) * 10_000;
            (
                (x / u128::from(total)) as u64,
                (x % u128::from(total)) as u64,
            )
        })
        .collect();
    let mut parts: Vec<u64> = scaled.iter().map(|&(q, _)| q).collect();
    let missing = 10_000 - parts.iter().sum::<u64>();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| scaled[b].1.cmp(&scaled[a].1).then(a.cmp(&b)));
    for &i in order.iter().take(missing as usize) {
        parts[i] += 1;
    }
    parts
}

fn bp_string(bp: u64) -> String {
    format!("{}.{:02}%", bp / 100, bp % 100)
}

fn config_line(c: &ConfigEcho) -> String {
    format!(
        "p={} tf={} weight={} fallback={} lexicon={}",
        format_rate(c.p),
        c.tf_mode,
        c.weight_mode,
        if c.stopword_fallback { "on" } else { "off" },
        &c.lexicon_fingerprint[..c.lexicon_fingerprint.len().min(16)],
    )
}

fn emit_table(r: &EvaluationReport) -> String {
    let m = &r.matrix;
    let mut out = String::new();
    let _ = writeln!(out, "config: {}", config_line(&r.config_echo));
    if m.total() == 0 {
        let _ = writeln!(out, "no documents evaluated (0 documents)");
        return out;
    }

    let _ = writeln!(out);
    let _ = writeln!(out, "Accuracy");
    let _ = writeln!(
        out,
        "{:<16}{:>10}{:>12}{:>14}",
        "Language", "Documents", "Accuracy", "Unclassified"
    );
    for gold in m.gold_languages() {
        let total = m.row_total(gold);
        let _ = writeln!(
            out,
            "{:<16}{:>10}{:>12}{:>14}",
            gold.as_str(),
            total,
            format_percent(m.correct(gold), total),
            format_percent(m.count(gold, None), total),
        );
    }
    let unclassified: u64 = m.gold_languages().map(|g| m.count(g, None)).sum();
    let _ = writeln!(
        out,
        "{:<16}{:>10}{:>12}{:>14}",
        "overall",
        m.total(),
        format_percent(m.trace(), m.total()),
        format_percent(unclassified, m.total()),
    );

    // predicted rows x gold columns, each column normalized to 100%
    let golds: Vec<&LanguageId> = m.gold_languages().collect();
    let columns: Vec<Vec<u64>> = golds
        .iter()
        .map(|g| {
            let mut col: Vec<u64> = m.columns().iter().map(|p| m.count(g, Some(p))).collect();
            col.push(m.count(g, None));
            apportion_basis_points(&col)
        })
        .collect();
    let _ = writeln!(out);
    let _ = writeln!(out, "Confusion (predicted rows, % of gold column)");
    let _ = write!(out, "{:<16}", "Predicted");
    for g in &golds {
        let _ = write!(out, "{:>10}", g.as_str());
    }
    let _ = writeln!(out);
    let labels = m
        .columns()
        .iter()
        .map(LanguageId::as_str)
        .chain(std::iter::once("Not Classified"));
    for (row, label) in labels.enumerate() {
        let _ = write!(out, "{label:<16}");
        for col in &columns {
            let _ = write!(out, "{:>10}", bp_string(col[row]));
        }
        let _ = writeln!(out);
    }
    out
}

fn emit_csv(r: &EvaluationReport) -> String {
    let m = &r.matrix;
    let c = &r.config_echo;
    let mut out = String::new();
    let _ = writeln!(out, "section,CONFIG");
    let _ = writeln!(
        out,
        "p,tf_mode,weight_mode,stopword_fallback,lexicon_fingerprint"
    );
    let _ = writeln!(
        out,
        "{},{},{},{},{}",
        format_rate(c.p),
        c.tf_mode,
        c.weight_mode,
        c.stopword_fallback,
        c.lexicon_fingerprint
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "section,ACCURACY");
    let _ = writeln!(
        out,
        "language,documents,correct,misclassified,unclassified,accuracy,misclassified_rate,unclassified_rate"
    );
    for gold in m.gold_languages() {
        let total = m.row_total(gold);
        let correct = m.correct(gold);
        let unclassified = m.count(gold, None);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            gold,
            total,
            correct,
            total - correct - unclassified,
            unclassified,
            format_rate(r.per_language_accuracy[gold]),
            format_rate(r.misclassified_rate(gold)),
            format_rate(r.unclassified_rate[gold]),
        );
    }
    let total = m.total();
    let unclassified: u64 = m.gold_languages().map(|g| m.count(g, None)).sum();
    let rate = |x: u64| {
        format_rate(if total == 0 {
            0.0
        } else {
            x as f64 / total as f64
        })
    };
    let _ = writeln!(
        out,
        "overall,{},{},{},{},{},{},{}",
        total,
        m.trace(),
        total - m.trace() - unclassified,
        unclassified,
        format_rate(r.overall_accuracy),
        rate(total - m.trace() - unclassified),
        rate(unclassified),
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "section,CONFUSION");
    let _ = write!(out, "gold");
    for p in m.columns() {
        let _ = write!(out, ",{p}");
    }
    let _ = writeln!(
        out,
        ",unclassified,unclassified_no_evidence,unclassified_tie"
    );
    for gold in m.gold_languages() {
        let _ = write!(out, "{gold}");
        for p in m.columns() {
            let _ = write!(out, ",{}", m.count(gold, Some(p)));
        }
        let _ = writeln!(
            out,
            ",{},{},{}",
            m.count(gold, None),
            m.unclassified_by_reason(gold, UnclassifiedReason::NoEvidence),
            m.unclassified_by_reason(gold, UnclassifiedReason::Tie),
        );
    }
    out
}
