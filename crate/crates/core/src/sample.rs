//! Finite words, samples and the trace file format.
//!
//! A trace file holds one letter per line as a comma-separated list of
//! propositions (`nil` for the empty letter). Traces are separated by a line
//! containing exactly `--`; lines starting with `#` are comments.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::formula::Prop;

#[derive(Debug, thiserror::Error)]
pub enum SampleError {
    #[error("input contains no traces")]
    EmptyInput,
    #[error("empty trace ending at line {line}")]
    EmptyTrace { line: usize },
    #[error("blank line {line}; write `nil` for an empty letter")]
    BlankLine { line: usize },
    #[error("malformed identifier `{token}` at line {line}, column {col}")]
    MalformedIdentifier { token: String, line: usize, col: usize },
    #[error("positive trace {positive} also appears as negative trace {negative}")]
    SampleOverlap { positive: usize, negative: usize },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// One time point: a sorted set of propositions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Letter(Vec<Prop>);

impl Letter {
    pub fn new(mut props: Vec<Prop>) -> Self {
        props.sort();
        props.dedup();
        Letter(props)
    }

    pub fn contains(&self, p: &Prop) -> bool {
        self.0.binary_search(p).is_ok()
    }

    pub fn props(&self) -> &[Prop] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("nil");
        }
        let names: Vec<&str> = self.0.iter().map(Prop::as_str).collect();
        f.write_str(&names.join(","))
    }
}

/// A non-empty finite word. Positions are 1-based in the public API.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self, SampleError> {
        if letters.is_empty() {
            return Err(SampleError::EmptyTrace { line: 0 });
        }
        Ok(Word { letters })
    }

    /// Convenience constructor from proposition names.
    pub fn from_names(letters: &[&[&str]]) -> Result<Self, SampleError> {
        let mut out = Vec::with_capacity(letters.len());
        for (t, l) in letters.iter().enumerate() {
            let mut props = Vec::with_capacity(l.len());
            for name in *l {
                if !Prop::is_valid_name(name) {
                    return Err(SampleError::MalformedIdentifier {
                        token: name.to_string(),
                        line: t + 1,
                        col: 1,
                    });
                }
                props.push(Prop::new(name));
            }
            out.push(Letter::new(props));
        }
        Word::new(out)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Always false for a constructed word; kept for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Letter at 1-based position `t`.
    pub fn letter(&self, t: usize) -> &Letter {
        &self.letters[t - 1]
    }
}

/// Interned propositions in first-seen order; the id of a proposition is its
/// index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    props: Vec<Prop>,
    index: HashMap<Prop, usize>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, p: &Prop) -> usize {
        if let Some(&id) = self.index.get(p) {
            return id;
        }
        let id = self.props.len();
        self.props.push(p.clone());
        self.index.insert(p.clone(), id);
        id
    }

    pub fn id(&self, p: &Prop) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn props(&self) -> &[Prop] {
        &self.props
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    fn extend_from(&mut self, words: &[Word]) {
        for w in words {
            for l in w.letters() {
                for p in l.props() {
                    self.intern(p);
                }
            }
        }
    }
}

/// Result of parsing a trace file.
#[derive(Clone, Debug)]
pub struct Traces {
    pub words: Vec<Word>,
    pub alphabet: Alphabet,
}

pub fn parse_traces(text: &str) -> Result<Traces, SampleError> {
    let mut words = Vec::new();
    let mut alphabet = Alphabet::new();
    let mut current: Vec<Letter> = Vec::new();
    let mut last_line = 0;
    let mut saw_content = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            return Err(SampleError::BlankLine { line });
        }
        saw_content = true;
        if trimmed == "--" {
            if current.is_empty() {
                return Err(SampleError::EmptyTrace { line });
            }
            words.push(Word { letters: std::mem::take(&mut current) });
            continue;
        }
        if trimmed == "nil" {
            current.push(Letter::default());
            continue;
        }
        let mut props = Vec::new();
        let mut col = 1 + (raw.len() - raw.trim_start().len());
        for tok in trimmed.split(',') {
            let name = tok.trim();
            let lead = tok.len() - tok.trim_start().len();
            if !Prop::is_valid_name(name) || name == "nil" {
                return Err(SampleError::MalformedIdentifier {
                    token: name.to_string(),
                    line,
                    col: col + lead,
                });
            }
            let p = Prop::new(name);
            if props.contains(&p) {
                log::warn!("line {line}: duplicate proposition `{name}` in one letter ignored");
            } else {
                alphabet.intern(&p);
                props.push(p);
            }
            col += tok.len() + 1;
        }
        current.push(Letter::new(props));
    }

    if !current.is_empty() {
        words.push(Word { letters: current });
    } else if saw_content && !words.is_empty() {
        // the input ended right after a separator
        return Err(SampleError::EmptyTrace { line: last_line });
    }
    if words.is_empty() {
        return Err(SampleError::EmptyInput);
    }
    Ok(Traces { words, alphabet })
}

/// Inverse of [`parse_traces`].
pub fn print_traces(words: &[Word]) -> String {
    let mut out = String::new();
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            out.push_str("--\n");
        }
        for l in w.letters() {
            out.push_str(&l.to_string());
            out.push('\n');
        }
    }
    out
}

/// Positive and negative words with their joint alphabet.
#[derive(Clone, Debug)]
pub struct Sample {
    positives: Vec<Word>,
    negatives: Vec<Word>,
    alphabet: Alphabet,
}

impl Sample {
    /// Builds a sample, rejecting words that occur on both sides. Indices in
    /// the error are 1-based.
    pub fn new(positives: Vec<Word>, negatives: Vec<Word>) -> Result<Self, SampleError> {
        let pos_index: HashMap<&Word, usize> =
            positives.iter().enumerate().rev().map(|(i, w)| (w, i)).collect();
        for (j, w) in negatives.iter().enumerate() {
            if let Some(&i) = pos_index.get(w) {
                return Err(SampleError::SampleOverlap { positive: i + 1, negative: j + 1 });
            }
        }
        let mut alphabet = Alphabet::new();
        alphabet.extend_from(&positives);
        alphabet.extend_from(&negatives);
        Ok(Sample { positives, negatives, alphabet })
    }

    pub fn positives(&self) -> &[Word] {
        &self.positives
    }

    pub fn negatives(&self) -> &[Word] {
        &self.negatives
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
}

/// All propositions of the sample in first-seen order.
pub fn alphabet(s: &Sample) -> Vec<Prop> {
    if s.positives.is_empty() && s.negatives.is_empty() {
        log::warn!("empty sample: no positive or negative traces");
    }
    s.alphabet.props().to_vec()
}

fn read(path: &Path) -> Result<String, SampleError> {
    std::fs::read_to_string(path).map_err(|source| SampleError::Io { path: path.to_path_buf(), source })
}

pub fn load_sample(pos_path: &Path, neg_path: Option<&Path>) -> Result<Sample, SampleError> {
    let pos = parse_traces(&read(pos_path)?)?.words;
    let neg = match neg_path {
        Some(p) => parse_traces(&read(p)?)?.words,
        None => Vec::new(),
    };
    Sample::new(pos, neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_blocks() {
        let t = parse_traces("p\np,q\n--\nq\n").unwrap();
        assert_eq!(t.words.len(), 2);
        assert_eq!(t.words[0], Word::from_names(&[&["p"], &["p", "q"]]).unwrap());
        assert_eq!(t.words[1], Word::from_names(&[&["q"]]).unwrap());
        let names: Vec<&str> = t.alphabet.props().iter().map(Prop::as_str).collect();
        assert_eq!(names, ["p", "q"]);
    }

    #[test]
    fn empty_input() {
        assert!(matches!(parse_traces(""), Err(SampleError::EmptyInput)));
        assert!(matches!(parse_traces("# only a comment\n"), Err(SampleError::EmptyInput)));
    }

    #[test]
    fn nil_comments_and_spaces() {
        let t = parse_traces("# header\nnil\n a , b \n").unwrap();
        assert!(t.words[0].letter(1).is_empty());
        assert_eq!(t.words[0].letter(2).props().len(), 2);
    }

    #[test]
    fn malformed_identifier_position() {
        match parse_traces("p\np, 9q\n") {
            Err(SampleError::MalformedIdentifier { token, line, col }) => {
                assert_eq!(token, "9q");
                assert_eq!((line, col), (2, 4));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_traces("p,,q\n"), Err(SampleError::MalformedIdentifier { .. })));
    }

    #[test]
    fn empty_blocks_and_blank_lines() {
        assert!(matches!(parse_traces("p\n--\n--\nq\n"), Err(SampleError::EmptyTrace { line: 3 })));
        assert!(matches!(parse_traces("--\np\n"), Err(SampleError::EmptyTrace { line: 1 })));
        assert!(matches!(parse_traces("p\n--\n"), Err(SampleError::EmptyTrace { .. })));
        assert!(matches!(parse_traces("p\n\nq\n"), Err(SampleError::BlankLine { line: 2 })));
    }

    #[test]
    fn duplicate_in_letter_is_deduplicated() {
        let t = parse_traces("p,p,q\n").unwrap();
        assert_eq!(t.words[0].letter(1).props().len(), 2);
    }

    #[test]
    fn overlap_reports_indices() {
        let a = Word::from_names(&[&["p"]]).unwrap();
        let b = Word::from_names(&[&["q"]]).unwrap();
        let e = Sample::new(vec![b.clone(), a.clone()], vec![a]).unwrap_err();
        assert!(matches!(e, SampleError::SampleOverlap { positive: 2, negative: 1 }));
        assert!(Sample::new(vec![b], vec![]).is_ok());
    }

    #[test]
    fn alphabet_order() {
        let s = Sample::new(
            vec![Word::from_names(&[&["p"]]).unwrap()],
            vec![Word::from_names(&[&["q"], &["p"]]).unwrap()],
        )
        .unwrap();
        let names: Vec<String> = alphabet(&s).iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["p", "q"]);
        let empty = Sample::new(vec![], vec![]).unwrap();
        assert!(alphabet(&empty).is_empty());
    }

    #[test]
    fn load_from_files() {
        let dir = tempfile::tempdir().unwrap();
        let pos = dir.path().join("pos.txt");
        let neg = dir.path().join("neg.txt");
        std::fs::write(&pos, "p\n--\np\nq\n").unwrap();
        std::fs::write(&neg, "q\n").unwrap();
        let s = load_sample(&pos, Some(&neg)).unwrap();
        assert_eq!((s.positives().len(), s.negatives().len()), (2, 1));
        let s = load_sample(&pos, None).unwrap();
        assert!(s.negatives().is_empty());
        std::fs::write(&neg, "p\n").unwrap();
        assert!(matches!(load_sample(&pos, Some(&neg)), Err(SampleError::SampleOverlap { .. })));
        assert!(matches!(load_sample(&dir.path().join("missing"), None), Err(SampleError::Io { .. })));
    }
}
