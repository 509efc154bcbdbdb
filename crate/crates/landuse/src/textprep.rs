//! Text pipeline: noise stripping, hashtag/mention handling, abbreviation
//! expansion, spell correction gated by longest-common-substring ratio,
//! stopword removal, and lexicon-driven lemmatization with PoS tags.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::geo::GeoPoint;
use crate::ingest::RawPost;

pub const DEFAULT_SPELL_THRESHOLD: f64 = 0.71;
const UNKNOWN_TAG: &str = "NC";

/// Pipeline output for one post: aligned surface tokens, lemmas and PoS
/// tags, plus the coordinates carried through from the raw post.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleanPost {
    pub id: String,
    pub tokens: Vec<String>,
    pub lemmas: Vec<String>,
    pub pos_tags: Vec<String>,
    #[serde(flatten)]
    pub point: GeoPoint,
}

#[derive(Debug, thiserror::Error)]
pub enum TextError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed TSV line: {message}")]
    MalformedTsv {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("empty input to lcs_ratio")]
    EmptyInput,
    #[error("spell threshold must lie in (0, 1], got {0}")]
    InvalidThreshold(f64),
}

/// Phrase-to-phrase replacements for abbreviations, slang and
/// establishment names. Keys and replacements are lowercase token
/// sequences; replacement is longest-match-first.
#[derive(Debug, Clone, Default)]
pub struct ReplacementDictionary {
    entries: HashMap<Vec<String>, Vec<String>>,
    max_key_len: usize,
}

impl ReplacementDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, source: &str, replacement: &str) {
        let key: Vec<String> = source.split_whitespace().map(str::to_lowercase).collect();
        let value: Vec<String> = replacement
            .split_whitespace()
            .map(str::to_lowercase)
            .collect();
        if key.is_empty() || key == value {
            return;
        }
        self.max_key_len = self.max_key_len.max(key.len());
        self.entries.insert(key, value);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `source<TAB>replacement` per line; `#` comments and blanks skipped.
    pub fn from_tsv(path: &Path) -> Result<Self, TextError> {
        let mut dict = Self::new();
        for_each_tsv_line(path, |line_no, fields| {
            if fields.len() != 2 || fields[0].is_empty() || fields[1].is_empty() {
                return Err(TextError::MalformedTsv {
                    path: path.to_path_buf(),
                    line: line_no,
                    message: "expected `source<TAB>replacement`".to_string(),
                });
            }
            dict.insert(fields[0], fields[1]);
            Ok(())
        })?;
        Ok(dict)
    }

    fn replacement_tokens(&self) -> impl Iterator<Item = &String> {
        self.entries.values().flatten()
    }
}

/// Surface-to-(lemma, tag) lexicon. Multiword surface keys are allowed;
/// on match the surface tokens are joined with underscores in the output.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, (String, String)>,
    max_key_len: usize,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, surface: &str, lemma: &str, tag: &str) {
        let key = surface.to_lowercase();
        let words = key.split_whitespace().count();
        self.max_key_len = self.max_key_len.max(words);
        self.entries
            .insert(key, (lemma.to_lowercase(), tag.to_uppercase()));
    }

    pub fn get(&self, surface: &str) -> Option<&(String, String)> {
        self.entries.get(surface)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `surface<TAB>lemma<TAB>tag` per line.
    pub fn from_tsv(path: &Path) -> Result<Self, TextError> {
        let mut lexicon = Self::new();
        for_each_tsv_line(path, |line_no, fields| {
            if fields.len() != 3 || fields.iter().any(|f| f.is_empty()) {
                return Err(TextError::MalformedTsv {
                    path: path.to_path_buf(),
                    line: line_no,
                    message: "expected `surface<TAB>lemma<TAB>tag`".to_string(),
                });
            }
            lexicon.insert(fields[0], fields[1], fields[2]);
            Ok(())
        })?;
        Ok(lexicon)
    }

    fn surface_tokens(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().flat_map(|k| k.split_whitespace())
    }
}

/// Vocabulary plus per-word suggestion lists for the spell stage.
///
/// When an unknown word has no explicit suggestion list, candidates are
/// generated from the vocabulary at Levenshtein distance <= 2, ordered by
/// (distance, word) so the choice is deterministic.
#[derive(Debug, Clone)]
pub struct SpellResources {
    pub vocabulary: BTreeSet<String>,
    pub suggestions: HashMap<String, Vec<String>>,
    pub acceptance_threshold: f64,
}

impl SpellResources {
    pub fn new(
        vocabulary: BTreeSet<String>,
        suggestions: HashMap<String, Vec<String>>,
        acceptance_threshold: f64,
    ) -> Result<Self, TextError> {
        if !(acceptance_threshold > 0.0 && acceptance_threshold <= 1.0) {
            return Err(TextError::InvalidThreshold(acceptance_threshold));
        }
        Ok(SpellResources {
            vocabulary,
            suggestions,
            acceptance_threshold,
        })
    }

    /// `word<TAB>candidate,candidate,...` per line.
    pub fn suggestions_from_tsv(path: &Path) -> Result<HashMap<String, Vec<String>>, TextError> {
        let mut map = HashMap::new();
        for_each_tsv_line(path, |line_no, fields| {
            if fields.len() != 2 || fields[0].is_empty() {
                return Err(TextError::MalformedTsv {
                    path: path.to_path_buf(),
                    line: line_no,
                    message: "expected `word<TAB>candidate,candidate,...`".to_string(),
                });
            }
            let candidates: Vec<String> = fields[1]
                .split(',')
                .map(|c| c.trim().to_lowercase())
                .filter(|c| !c.is_empty())
                .collect();
            map.insert(fields[0].to_lowercase(), candidates);
            Ok(())
        })?;
        Ok(map)
    }
}

/// Everything the pipeline needs, immutable after load.
#[derive(Debug, Clone)]
pub struct TextResources {
    pub replacements: ReplacementDictionary,
    pub spell: SpellResources,
    pub stoplist: HashSet<String>,
    pub lexicon: Lexicon,
}

impl TextResources {
    /// Loads the four TSV resource files. The spell vocabulary is derived
    /// from the lexicon surface tokens, the stoplist and the replacement
    /// targets, so every word the resources can produce is also valid.
    pub fn load(
        dictionary: &Path,
        stoplist: &Path,
        lexicon: &Path,
        suggestions: &Path,
        spell_threshold: f64,
    ) -> Result<Self, TextError> {
        let replacements = ReplacementDictionary::from_tsv(dictionary)?;
        let stoplist_set = load_stoplist(stoplist)?;
        let lexicon = Lexicon::from_tsv(lexicon)?;
        let suggestions = SpellResources::suggestions_from_tsv(suggestions)?;

        let mut vocabulary: BTreeSet<String> = BTreeSet::new();
        vocabulary.extend(lexicon.surface_tokens().map(str::to_string));
        vocabulary.extend(stoplist_set.iter().cloned());
        vocabulary.extend(replacements.replacement_tokens().cloned());

        let spell = SpellResources::new(vocabulary, suggestions, spell_threshold)?;
        Ok(TextResources {
            replacements,
            spell,
            stoplist: stoplist_set,
            lexicon,
        })
    }
}

/// One word per line.
pub fn load_stoplist(path: &Path) -> Result<HashSet<String>, TextError> {
    let mut set = HashSet::new();
    for_each_tsv_line(path, |line_no, fields| {
        if fields.len() != 1 || fields[0].is_empty() {
            return Err(TextError::MalformedTsv {
                path: path.to_path_buf(),
                line: line_no,
                message: "expected one word per line".to_string(),
            });
        }
        set.insert(fields[0].to_lowercase());
        Ok(())
    })?;
    Ok(set)
}

fn for_each_tsv_line<F>(path: &Path, mut f: F) -> Result<(), TextError>
where
    F: FnMut(usize, &[&str]) -> Result<(), TextError>,
{
    let text = fs::read_to_string(path).map_err(|source| TextError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        f(idx + 1, &fields)?;
    }
    Ok(())
}

fn url_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)\b(?:https?://|www\.|t\.co/)\S+").unwrap())
}

fn html_tag_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"<[^>]*>").unwrap())
}

/// Removes URLs, HTML tags, emoji and all symbols except `#`, `@` and
/// whitespace, then collapses runs of whitespace.
pub fn strip_noise(text: &str) -> String {
    let no_urls = url_regex().replace_all(text, " ");
    let no_tags = html_tag_regex().replace_all(&no_urls, " ");
    let filtered: String = no_tags
        .chars()
        .map(|c| {
            if c.is_alphanumeric() || c.is_whitespace() || c == '#' || c == '@' {
                c
            } else {
                ' '
            }
        })
        .collect();
    collapse_whitespace(&filtered)
}

/// Unwraps hashtags (`#word` -> `word`), turns each `@` — standalone or
/// prefixing a handle — into the token "en", removes any remaining
/// punctuation and lowercases.
pub fn process_hashtags_and_mentions(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 8);
    for c in text.chars() {
        match c {
            '@' => out.push_str(" en "),
            '#' => {}
            c if c.is_alphanumeric() || c.is_whitespace() => out.push(c),
            _ => out.push(' '),
        }
    }
    collapse_whitespace(&out.to_lowercase())
}

fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Longest-match-first phrase replacement over a token list.
pub fn expand_abbreviations(tokens: &[String], dict: &ReplacementDictionary) -> Vec<String> {
    if dict.is_empty() {
        return tokens.to_vec();
    }
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let max_len = dict.max_key_len.min(tokens.len() - i);
        let mut matched = false;
        for len in (1..=max_len).rev() {
            if let Some(replacement) = dict.entries.get(&tokens[i..i + len]) {
                out.extend(replacement.iter().cloned());
                i += len;
                matched = true;
                break;
            }
        }
        if !matched {
            out.push(tokens[i].clone());
            i += 1;
        }
    }
    out
}

fn normalize_for_lcs(s: &str) -> Vec<char> {
    s.to_lowercase()
        .chars()
        .filter(|c| *c != ' ' && *c != '-')
        .collect()
}

/// Length of the longest common contiguous substring between the two
/// strings (case-insensitive, spaces and hyphens removed first), divided
/// by the normalized length of `misspelled`.
pub fn lcs_ratio(candidate: &str, misspelled: &str) -> Result<f64, TextError> {
    let a = normalize_for_lcs(candidate);
    let b = normalize_for_lcs(misspelled);
    if a.is_empty() || b.is_empty() {
        return Err(TextError::EmptyInput);
    }
    // Classic O(|a|*|b|) DP over substring lengths, one rolling row.
    let mut prev = vec![0usize; b.len() + 1];
    let mut best = 0usize;
    for &ca in &a {
        let mut row = vec![0usize; b.len() + 1];
        for (j, &cb) in b.iter().enumerate() {
            if ca == cb {
                row[j + 1] = prev[j] + 1;
                best = best.max(row[j + 1]);
            }
        }
        prev = row;
    }
    Ok(best as f64 / b.len() as f64)
}

fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut row = vec![i + 1];
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            row.push(sub.min(prev[j + 1] + 1).min(row[j] + 1));
        }
        prev = row;
    }
    prev[b.len()]
}

fn fallback_candidates(token: &str, vocabulary: &BTreeSet<String>) -> Vec<String> {
    let mut scored: Vec<(usize, &String)> = vocabulary
        .iter()
        .filter_map(|word| {
            let d = levenshtein(token, word);
            (d <= 2).then_some((d, word))
        })
        .collect();
    scored.sort();
    scored.into_iter().map(|(_, w)| w.clone()).collect()
}

/// Returns the token unchanged when it is a known word; otherwise the
/// best suggestion whose LCS ratio reaches the acceptance threshold, or
/// `None` (the word is deleted). Ties keep the earliest candidate.
pub fn spell_correct(token: &str, resources: &SpellResources) -> Option<String> {
    if resources.vocabulary.contains(token) {
        return Some(token.to_string());
    }
    let candidates = match resources.suggestions.get(token) {
        Some(listed) => listed.clone(),
        None => fallback_candidates(token, &resources.vocabulary),
    };
    let mut best: Option<(f64, &String)> = None;
    for candidate in &candidates {
        let Ok(ratio) = lcs_ratio(candidate, token) else {
            continue;
        };
        if best.is_none_or(|(b, _)| ratio > b) {
            best = Some((ratio, candidate));
        }
    }
    match best {
        Some((ratio, candidate)) if ratio >= resources.acceptance_threshold => {
            Some(candidate.clone())
        }
        _ => None,
    }
}

/// Removes stoplist tokens, except "en" and "de" which are spatial
/// indicators and always survive.
pub fn remove_stopwords(tokens: &[String], stoplist: &HashSet<String>) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| t.as_str() == "en" || t.as_str() == "de" || !stoplist.contains(*t))
        .cloned()
        .collect()
}

struct Analyzed {
    surface: String,
    lemma: String,
    tag: String,
}

// Greedy longest-match against the lexicon; multiword matches join their
// surface tokens with underscores.
fn analyze(tokens: &[String], lexicon: &Lexicon) -> Vec<Analyzed> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let max_len = lexicon.max_key_len.max(1).min(tokens.len() - i);
        let mut advanced = false;
        for len in (2..=max_len).rev() {
            let key = tokens[i..i + len].join(" ");
            if let Some((lemma, tag)) = lexicon.get(&key) {
                out.push(Analyzed {
                    surface: tokens[i..i + len].join("_"),
                    lemma: lemma.clone(),
                    tag: tag.clone(),
                });
                i += len;
                advanced = true;
                break;
            }
        }
        if advanced {
            continue;
        }
        let token = &tokens[i];
        match lexicon.get(token) {
            Some((lemma, tag)) => out.push(Analyzed {
                surface: token.clone(),
                lemma: lemma.clone(),
                tag: tag.clone(),
            }),
            None => out.push(Analyzed {
                surface: token.clone(),
                lemma: token.clone(),
                tag: UNKNOWN_TAG.to_string(),
            }),
        }
        i += 1;
    }
    out
}

/// Lemma and PoS lists for a token sequence; unknown words keep their
/// surface form and default to the NC tag.
pub fn lemmatize_and_tag(tokens: &[String], lexicon: &Lexicon) -> (Vec<String>, Vec<String>) {
    let analyzed = analyze(tokens, lexicon);
    let lemmas = analyzed.iter().map(|a| a.lemma.clone()).collect();
    let tags = analyzed.into_iter().map(|a| a.tag).collect();
    (lemmas, tags)
}

/// Full pipeline over one post. A post whose token list empties out is
/// returned with empty lists; the caller decides whether to drop it.
pub fn preprocess(post: &RawPost, resources: &TextResources) -> CleanPost {
    preprocess_with_hook(post, resources, |text| text.to_string())
}

/// Variant of [`preprocess`] with a pluggable translation /
/// language-normalization hook applied to the raw text first. The default
/// hook is the identity.
pub fn preprocess_with_hook<F>(post: &RawPost, resources: &TextResources, hook: F) -> CleanPost
where
    F: Fn(&str) -> String,
{
    let text = hook(&post.text);
    let text = strip_noise(&text);
    let text = process_hashtags_and_mentions(&text);
    let tokens: Vec<String> = text.split_whitespace().map(str::to_string).collect();
    let tokens = expand_abbreviations(&tokens, &resources.replacements);
    let tokens: Vec<String> = tokens
        .iter()
        .filter_map(|t| spell_correct(t, &resources.spell))
        // A correction may be a multiword phrase; split it back into tokens.
        .flat_map(|t| {
            t.split_whitespace()
                .map(str::to_string)
                .collect::<Vec<_>>()
        })
        .collect();
    let tokens = remove_stopwords(&tokens, &resources.stoplist);
    let analyzed = analyze(&tokens, &resources.lexicon);

    CleanPost {
        id: post.id.clone(),
        tokens: analyzed.iter().map(|a| a.surface.clone()).collect(),
        lemmas: analyzed.iter().map(|a| a.lemma.clone()).collect(),
        pos_tags: analyzed.into_iter().map(|a| a.tag).collect(),
        point: post.point(),
    }
}
