//! Question tracks, answer judging and recall.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnswerMode {
    #[default]
    Precise,
    Sentence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionRecord {
    pub id: String,
    pub question: String,
    #[serde(rename = "gold")]
    pub gold_answers: Vec<String>,
    #[serde(rename = "mode", default)]
    pub answer_mode: AnswerMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Judgment {
    pub question_id: String,
    pub answer: Option<String>,
    pub correct: bool,
    pub relevant: bool,
    pub complete: bool,
    pub matched_gold: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub mode: Option<AnswerMode>,
    pub total_questions: usize,
    pub correct_count: usize,
    pub recall_percent: f64,
    pub per_question: Vec<Judgment>,
}

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("question track is empty")]
    EmptyTrack,
    #[error("cannot read track {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("track line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("invalid track: {0}")]
    Invalid(String),
}

/// The rank-1 answer of a system under evaluation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TopAnswer {
    pub precise: Option<String>,
    pub sentence: Option<String>,
}

pub trait Answerer {
    fn top_answer(&self, question: &str) -> TopAnswer;
}

impl<F: Fn(&str) -> TopAnswer> Answerer for F {
    fn top_answer(&self, question: &str) -> TopAnswer {
        self(question)
    }
}

const ARTICLES: [&str; 3] = ["a", "an", "the"];

/// Lowercase, punctuation to spaces, articles dropped, whitespace collapsed.
pub fn normalize(text: &str) -> String {
    let cleaned: String = text
        .to_lowercase()
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    cleaned
        .split_whitespace()
        .filter(|w| !ARTICLES.contains(w))
        .collect::<Vec<_>>()
        .join(" ")
}

fn contains_words(haystack: &str, needle: &str) -> bool {
    !needle.is_empty() && format!(" {haystack} ").contains(&format!(" {needle} "))
}

/// Judge one answer against a record's gold list. Precise mode needs an
/// exact normalized match; sentence mode needs a gold answer as a whole-word
/// run inside the sentence. A partial answer is never correct.
pub fn judge(answer: Option<&str>, record: &QuestionRecord, mode: AnswerMode) -> Judgment {
    let normalized = answer.map(normalize).unwrap_or_default();
    let matched_gold = record
        .gold_answers
        .iter()
        .find(|g| {
            let g = normalize(g);
            match mode {
                AnswerMode::Precise => !g.is_empty() && g == normalized,
                AnswerMode::Sentence => contains_words(&normalized, &g),
            }
        })
        .cloned();
    let correct = matched_gold.is_some();
    let words: BTreeSet<&str> = normalized.split(' ').filter(|w| !w.is_empty()).collect();
    let relevant = correct
        || record
            .gold_answers
            .iter()
            .any(|g| normalize(g).split(' ').any(|w| !w.is_empty() && words.contains(w)));
    Judgment {
        question_id: record.id.clone(),
        answer: answer.map(str::to_string),
        correct,
        relevant,
        complete: correct,
        matched_gold,
    }
}

/// `100 · correct / total`, rounded half-up to one decimal.
pub fn compute_recall(correct: usize, total: usize) -> Result<f64, EvalError> {
    if total == 0 {
        return Err(EvalError::EmptyTrack);
    }
    let (c, t) = (correct as u128, total as u128);
    let tenths = (2000 * c + t) / (2 * t);
    Ok(tenths as f64 / 10.0)
}

pub fn parse_track(text: &str) -> Result<Vec<QuestionRecord>, EvalError> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: QuestionRecord = serde_json::from_str(line).map_err(|e| EvalError::Malformed {
            line: i + 1,
            message: e.to_string(),
        })?;
        if record.gold_answers.is_empty() {
            return Err(EvalError::Malformed {
                line: i + 1,
                message: format!("question `{}` has no gold answer", record.id),
            });
        }
        records.push(record);
    }
    Ok(records)
}

pub fn load_track(path: &Path) -> Result<Vec<QuestionRecord>, EvalError> {
    let text = std::fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_track(&text)
}

/// Ask every question and judge the rank-1 answer, in each record's own
/// mode unless `mode` overrides it.
pub fn run_track(
    track: &[QuestionRecord],
    answerer: &dyn Answerer,
    mode: Option<AnswerMode>,
) -> Result<EvalReport, EvalError> {
    if track.is_empty() {
        return Err(EvalError::EmptyTrack);
    }
    let mut ids = BTreeSet::new();
    for r in track {
        if !ids.insert(r.id.as_str()) {
            return Err(EvalError::Invalid(format!("duplicate question id `{}`", r.id)));
        }
        if r.gold_answers.is_empty() {
            return Err(EvalError::Invalid(format!("question `{}` has no gold answer", r.id)));
        }
    }
    let mut per_question: Vec<Judgment> = track
        .iter()
        .map(|r| {
            let top = answerer.top_answer(&r.question);
            let m = mode.unwrap_or(r.answer_mode);
            let answer = match m {
                AnswerMode::Precise => top.precise,
                AnswerMode::Sentence => top.sentence,
            };
            judge(answer.as_deref(), r, m)
        })
        .collect();
    per_question.sort_by(|a, b| a.question_id.cmp(&b.question_id));
    let correct_count = per_question.iter().filter(|j| j.correct).count();
    Ok(EvalReport {
        mode,
        total_questions: track.len(),
        correct_count,
        recall_percent: compute_recall(correct_count, track.len())?,
        per_question,
    })
}

impl EvalReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let width = self
            .per_question
            .iter()
            .map(|j| j.question_id.len())
            .max()
            .unwrap_or(2)
            .max(2);
        let _ = writeln!(out, "{:<width$}  ok  rel  answer", "id");
        for j in &self.per_question {
            let _ = writeln!(
                out,
                "{:<width$}  {:<2}  {:<3}  {}",
                j.question_id,
                if j.correct { "y" } else { "n" },
                if j.relevant { "y" } else { "n" },
                j.answer.as_deref().unwrap_or("-")
            );
        }
        let mode = match self.mode {
            Some(AnswerMode::Precise) => "precise",
            Some(AnswerMode::Sentence) => "sentence",
            None => "per-question",
        };
        let _ = writeln!(
            out,
            "{mode} mode: {}/{} correct, recall {:.1}%",
            self.correct_count, self.total_questions, self.recall_percent
        );
        out
    }
}
