//! Sparse feature extraction: word/lemma n-grams, optional Bag-of-PoS
//! n-grams, raw counts or smoothed TF-IDF with L2 normalization.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::textprep::CleanPost;

/// Namespace prefix for PoS n-gram terms, keeping them disjoint from word
/// n-grams in a shared vocabulary.
pub const POS_PREFIX: &str = "POS:";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub ngram_min: usize,
    pub ngram_max: usize,
    /// Build n-grams from lemmas instead of surface tokens.
    pub use_lemmas: bool,
    /// TF-IDF weighting with L2 normalization; raw counts otherwise.
    pub use_tfidf: bool,
    pub include_pos_ngrams: bool,
    pub pos_ngram_min: usize,
    pub pos_ngram_max: usize,
    /// Minimum document frequency for a term to enter the vocabulary.
    pub min_df: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            ngram_min: 1,
            ngram_max: 3,
            use_lemmas: true,
            use_tfidf: true,
            include_pos_ngrams: false,
            pos_ngram_min: 2,
            pos_ngram_max: 3,
            min_df: 1,
        }
    }
}

impl FeatureConfig {
    pub fn validate(&self) -> Result<(), FeatureError> {
        if self.ngram_min < 1 || self.ngram_min > self.ngram_max {
            return Err(FeatureError::InvalidConfig(format!(
                "ngram range {}..{} is invalid",
                self.ngram_min, self.ngram_max
            )));
        }
        if self.include_pos_ngrams
            && (self.pos_ngram_min < 1 || self.pos_ngram_min > self.pos_ngram_max)
        {
            return Err(FeatureError::InvalidConfig(format!(
                "PoS ngram range {}..{} is invalid",
                self.pos_ngram_min, self.pos_ngram_max
            )));
        }
        if self.min_df < 1 {
            return Err(FeatureError::InvalidConfig(
                "min_df must be at least 1".to_string(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    #[error("cannot fit a vocabulary on an empty document list")]
    EmptyCorpus,
    #[error("invalid feature configuration: {0}")]
    InvalidConfig(String),
}

/// Term-to-column mapping with document frequencies, in first-appearance
/// order so fitting is deterministic. Persistence goes through the model
/// file, which stores (term, index, df) triples and rebuilds the lookup
/// via [`Vocabulary::from_parts`].
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    doc_freq: Vec<usize>,
    n_docs: usize,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn doc_freq(&self, index: usize) -> Option<usize> {
        self.doc_freq.get(index).copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, usize, usize)> {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str(), i, self.doc_freq[i]))
    }

    /// Rebuilds the lookup index; needed after deserialization.
    pub fn from_parts(
        terms: Vec<String>,
        doc_freq: Vec<usize>,
        n_docs: usize,
    ) -> Result<Self, FeatureError> {
        if terms.len() != doc_freq.len() {
            return Err(FeatureError::InvalidConfig(
                "vocabulary terms and doc_freq lengths differ".to_string(),
            ));
        }
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Ok(Vocabulary {
            terms,
            doc_freq,
            n_docs,
            index,
        })
    }

    fn smoothed_idf(&self, index: usize) -> f64 {
        let df = self.doc_freq[index] as f64;
        ((1.0 + self.n_docs as f64) / (1.0 + df)).ln() + 1.0
    }
}

/// Sparse vector of term weights, keyed by vocabulary column.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureVector {
    pub entries: BTreeMap<usize, f64>,
}

impl FeatureVector {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries.values().map(|w| w * w).sum::<f64>().sqrt()
    }
}

/// Contiguous n-grams joined by single spaces, for every n in
/// `n_min..=n_max` in ascending order. A sequence of m tokens yields
/// max(0, m - n + 1) grams per n.
pub fn extract_ngrams(tokens: &[String], n_min: usize, n_max: usize) -> Vec<String> {
    let mut grams = Vec::new();
    for n in n_min..=n_max {
        if n == 0 || n > tokens.len() {
            continue;
        }
        for window in tokens.windows(n) {
            grams.push(window.join(" "));
        }
    }
    grams
}

/// N-grams over PoS tags, namespaced with [`POS_PREFIX`].
pub fn extract_pos_ngrams(tags: &[String], n_min: usize, n_max: usize) -> Vec<String> {
    extract_ngrams(tags, n_min, n_max)
        .into_iter()
        .map(|g| format!("{POS_PREFIX}{g}"))
        .collect()
}

/// All terms the configuration extracts from one document.
pub fn document_terms(doc: &CleanPost, config: &FeatureConfig) -> Vec<String> {
    let source = if config.use_lemmas {
        &doc.lemmas
    } else {
        &doc.tokens
    };
    let mut terms = extract_ngrams(source, config.ngram_min, config.ngram_max);
    if config.include_pos_ngrams {
        terms.extend(extract_pos_ngrams(
            &doc.pos_tags,
            config.pos_ngram_min,
            config.pos_ngram_max,
        ));
    }
    terms
}

/// Indexes every distinct term over all documents in first-appearance
/// order and counts document frequencies. Terms below `min_df` are
/// dropped, preserving the order of the survivors.
pub fn fit_vocabulary(
    docs: &[CleanPost],
    config: &FeatureConfig,
) -> Result<Vocabulary, FeatureError> {
    config.validate()?;
    if docs.is_empty() {
        return Err(FeatureError::EmptyCorpus);
    }

    let mut terms: Vec<String> = Vec::new();
    let mut df: HashMap<String, usize> = HashMap::new();
    for doc in docs {
        let mut seen: HashSet<String> = HashSet::new();
        for term in document_terms(doc, config) {
            if !df.contains_key(&term) {
                terms.push(term.clone());
                df.insert(term.clone(), 0);
            }
            if seen.insert(term.clone()) {
                *df.get_mut(&term).unwrap() += 1;
            }
        }
    }

    let kept: Vec<String> = terms.into_iter().filter(|t| df[t] >= config.min_df).collect();
    let doc_freq: Vec<usize> = kept.iter().map(|t| df[t]).collect();
    Vocabulary::from_parts(kept, doc_freq, docs.len())
}

/// Weighs one document against a fitted vocabulary. Unknown terms are
/// ignored. With TF-IDF, weight = tf * (ln((1 + N) / (1 + df)) + 1),
/// then the vector is L2-normalized.
pub fn vectorize(doc: &CleanPost, vocab: &Vocabulary, config: &FeatureConfig) -> FeatureVector {
    let mut entries: BTreeMap<usize, f64> = BTreeMap::new();
    for term in document_terms(doc, config) {
        if let Some(index) = vocab.index_of(&term) {
            *entries.entry(index).or_insert(0.0) += 1.0;
        }
    }
    if config.use_tfidf {
        for (index, weight) in entries.iter_mut() {
            *weight *= vocab.smoothed_idf(*index);
        }
        let norm = entries.values().map(|w| w * w).sum::<f64>().sqrt();
        if norm > 0.0 {
            for weight in entries.values_mut() {
                *weight /= norm;
            }
        }
    }
    FeatureVector { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::GeoPoint;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    fn doc(words: &[&str]) -> CleanPost {
        CleanPost {
            id: "d".to_string(),
            tokens: toks(words),
            lemmas: toks(words),
            pos_tags: words.iter().map(|_| "NC".to_string()).collect(),
            point: GeoPoint { lat: 0.0, lon: 0.0 },
        }
    }

    fn unigram_counts() -> FeatureConfig {
        FeatureConfig {
            ngram_min: 1,
            ngram_max: 1,
            use_lemmas: false,
            use_tfidf: false,
            include_pos_ngrams: false,
            pos_ngram_min: 2,
            pos_ngram_max: 2,
            min_df: 1,
        }
    }

    #[test]
    fn bigrams_of_three_tokens() {
        assert_eq!(
            extract_ngrams(&toks(&["tomorrow", "is", "thursday"]), 2, 2),
            toks(&["tomorrow is", "is thursday"])
        );
    }

    #[test]
    fn too_short_sequence_gives_no_grams() {
        assert!(extract_ngrams(&toks(&["a"]), 2, 3).is_empty());
    }

    #[test]
    fn mixed_range_counts_sum() {
        assert_eq!(extract_ngrams(&toks(&["a", "b", "c"]), 1, 3).len(), 6);
    }

    #[test]
    fn pos_ngrams_are_namespaced() {
        assert_eq!(
            extract_pos_ngrams(&toks(&["VMI", "SP", "NC"]), 2, 2),
            toks(&["POS:VMI SP", "POS:SP NC"])
        );
    }

    #[test]
    fn pos_ngrams_of_empty_are_empty() {
        assert!(extract_pos_ngrams(&[], 2, 3).is_empty());
    }

    #[test]
    fn vocabulary_of_one_doc() {
        let vocab = fit_vocabulary(&[doc(&["a", "b"])], &unigram_counts()).unwrap();
        assert_eq!(vocab.len(), 2);
        assert_eq!(vocab.doc_freq(0), Some(1));
        assert_eq!(vocab.doc_freq(1), Some(1));
    }

    #[test]
    fn doc_freq_counts_documents_not_occurrences() {
        let docs = vec![doc(&["a", "b"]), doc(&["b", "b", "c"])];
        let vocab = fit_vocabulary(&docs, &unigram_counts()).unwrap();
        let b = vocab.index_of("b").unwrap();
        assert_eq!(vocab.doc_freq(b), Some(2));
    }

    #[test]
    fn fitting_is_deterministic() {
        let docs = vec![doc(&["x", "y"]), doc(&["y", "z"])];
        let a = fit_vocabulary(&docs, &unigram_counts()).unwrap();
        let b = fit_vocabulary(&docs, &unigram_counts()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.index_of("x"), Some(0));
        assert_eq!(a.index_of("y"), Some(1));
        assert_eq!(a.index_of("z"), Some(2));
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(matches!(
            fit_vocabulary(&[], &unigram_counts()),
            Err(FeatureError::EmptyCorpus)
        ));
    }

    #[test]
    fn min_df_prunes_rare_terms() {
        let docs = vec![doc(&["a", "b"]), doc(&["a", "c"])];
        let mut config = unigram_counts();
        config.min_df = 2;
        let vocab = fit_vocabulary(&docs, &config).unwrap();
        assert_eq!(vocab.len(), 1);
        assert_eq!(vocab.index_of("a"), Some(0));
    }

    #[test]
    fn unknown_terms_are_ignored() {
        let vocab = fit_vocabulary(&[doc(&["a"])], &unigram_counts()).unwrap();
        let v = vectorize(&doc(&["q", "r"]), &vocab, &unigram_counts());
        assert!(v.is_empty());
    }

    #[test]
    fn raw_counts_mode() {
        let vocab = fit_vocabulary(&[doc(&["a", "b"])], &unigram_counts()).unwrap();
        let v = vectorize(&doc(&["a", "a", "b"]), &vocab, &unigram_counts());
        assert_eq!(v.entries[&0], 2.0);
        assert_eq!(v.entries[&1], 1.0);
    }

    #[test]
    fn tfidf_matches_hand_computation() {
        // Corpus: "a b", "a c", "a a d". N = 3.
        // df: a=3, b=1, c=1, d=1.
        let docs = vec![doc(&["a", "b"]), doc(&["a", "c"]), doc(&["a", "a", "d"])];
        let mut config = unigram_counts();
        config.use_tfidf = true;
        let vocab = fit_vocabulary(&docs, &config).unwrap();

        let idf_a = (4.0f64 / 4.0).ln() + 1.0; // 1.0
        let idf_b = (4.0f64 / 2.0).ln() + 1.0;
        let raw_a = 1.0 * idf_a;
        let raw_b = 1.0 * idf_b;
        let norm = (raw_a * raw_a + raw_b * raw_b).sqrt();

        let v = vectorize(&doc(&["a", "b"]), &vocab, &config);
        let a = vocab.index_of("a").unwrap();
        let b = vocab.index_of("b").unwrap();
        assert!((v.entries[&a] - raw_a / norm).abs() < 1e-9);
        assert!((v.entries[&b] - raw_b / norm).abs() < 1e-9);
        assert!((v.l2_norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn training_docs_vectorize_onto_known_indices() {
        let docs = vec![doc(&["a", "b", "c"]), doc(&["c", "d"])];
        let mut config = unigram_counts();
        config.ngram_max = 2;
        let vocab = fit_vocabulary(&docs, &config).unwrap();
        for d in &docs {
            let v = vectorize(d, &vocab, &config);
            assert!(v.entries.keys().all(|i| *i < vocab.len()));
            assert!(!v.is_empty());
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn ngram_counts_satisfy_window_formula(
                len in 0usize..40,
                n_min in 1usize..4,
                span in 0usize..3,
            ) {
                let tokens: Vec<String> = (0..len).map(|i| format!("t{i}")).collect();
                let n_max = n_min + span;
                let grams = extract_ngrams(&tokens, n_min, n_max);
                // max(0, m - n + 1) per n.
                let expected: usize = (n_min..=n_max).map(|n| len.saturating_sub(n - 1)).sum();
                prop_assert_eq!(grams.len(), expected);
            }

            #[test]
            fn tfidf_vectors_have_unit_norm_and_scale_invariance(
                words in proptest::collection::vec("[a-d]", 1..12),
                k in 2usize..5,
            ) {
                let base: Vec<&str> = words.iter().map(String::as_str).collect();
                let mut config = unigram_counts();
                config.use_tfidf = true;
                let vocab = fit_vocabulary(&[doc(&base)], &config).unwrap();

                let v = vectorize(&doc(&base), &vocab, &config);
                prop_assert!((v.l2_norm() - 1.0).abs() < 1e-9);

                // Repeating the whole document k times scales every count
                // uniformly; the normalized vector must not move.
                let repeated: Vec<&str> = base
                    .iter()
                    .cycle()
                    .take(base.len() * k)
                    .copied()
                    .collect();
                let v_scaled = vectorize(&doc(&repeated), &vocab, &config);
                prop_assert_eq!(v.entries.len(), v_scaled.entries.len());
                for (i, w) in &v.entries {
                    prop_assert!((w - v_scaled.entries[i]).abs() < 1e-9);
                }
            }
        }
    }
}
