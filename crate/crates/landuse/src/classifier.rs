//! Multinomial naive Bayes over sparse feature vectors, gated by a
//! PoS-sequence prefilter that decides whether a post talks about being
//! at a location, with a confidence cut-off producing the abstention label.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::features::{extract_ngrams, vectorize, FeatureConfig, FeatureVector, Vocabulary};
use crate::ingest::{LandUseClass, ParentClass, Subcategory};
use crate::textprep::CleanPost;

pub const MODEL_FORMAT_VERSION: u32 = 1;
pub const DEFAULT_ALPHA: f64 = 1.0;
pub const DEFAULT_THRESHOLD: f64 = 0.5;
pub const DEFAULT_TOP_SEQUENCES: usize = 50;

#[derive(Debug, thiserror::Error)]
pub enum ClassifierError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("smoothing alpha must be positive, got {0}")]
    InvalidAlpha(f64),
    #[error("confidence threshold must lie in (0, 1], got {0}")]
    InvalidThreshold(f64),
    #[error("vocabulary is empty; no features were extracted from the training set")]
    EmptyVocabulary,
    #[error("prefilter needs a non-empty corpus on both sides")]
    EmptyPrefilterCorpus,
    #[error("prefilter top-i must be at least 1")]
    InvalidTopI,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("model file is corrupt: {0}")]
    CorruptModel(String),
    #[error("model format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
}

/// Trained multinomial naive Bayes model.
#[derive(Debug, Clone, PartialEq)]
pub struct MnbModel {
    pub classes: Vec<Subcategory>,
    pub log_prior: Vec<f64>,
    /// Per class, per vocabulary column: ln P(term | class) with Laplace
    /// smoothing, so each row exponentiates and sums to one.
    pub log_likelihood: Vec<Vec<f64>>,
    pub vocab: Vocabulary,
    pub config: FeatureConfig,
    pub alpha: f64,
    pub threshold: f64,
}

/// PoS n-gram sets that separate "is at a location" posts from chatter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosSequenceFilter {
    pub location_sequences: BTreeSet<String>,
    pub nonlocation_sequences: BTreeSet<String>,
    /// Top-i frequency cut used when the filter was fitted.
    pub top_i: usize,
    pub ngram_min: usize,
    pub ngram_max: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionResult {
    pub label: LandUseClass,
    pub sub_label: Option<Subcategory>,
    /// Normalized posterior per model class; absent when the prefilter
    /// rejected the post before the classifier ran.
    pub posterior: Option<Vec<f64>>,
    pub confidence: Option<f64>,
}

impl PredictionResult {
    fn non_classified() -> Self {
        PredictionResult {
            label: LandUseClass::from_parent(ParentClass::NonClassified),
            sub_label: None,
            posterior: None,
            confidence: None,
        }
    }
}

/// Trains the model: priors from class document counts, likelihoods from
/// Laplace-smoothed per-class term weight sums. Deterministic: classes are
/// ordered canonically and sums accumulate in vocabulary-column order.
pub fn train_mnb(
    train: &[(FeatureVector, Subcategory)],
    alpha: f64,
    vocab: Vocabulary,
    config: FeatureConfig,
    threshold: f64,
) -> Result<MnbModel, ClassifierError> {
    if train.is_empty() {
        return Err(ClassifierError::EmptyTrainingSet);
    }
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(ClassifierError::InvalidAlpha(alpha));
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(ClassifierError::InvalidThreshold(threshold));
    }
    if vocab.is_empty() {
        return Err(ClassifierError::EmptyVocabulary);
    }

    let classes: Vec<Subcategory> = Subcategory::ALL
        .into_iter()
        .filter(|sub| train.iter().any(|(_, s)| s == sub))
        .collect();
    let class_index: HashMap<Subcategory, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i))
        .collect();

    let n_terms = vocab.len();
    let mut doc_counts = vec![0usize; classes.len()];
    let mut weight_sums = vec![vec![0.0f64; n_terms]; classes.len()];
    for (vector, sub) in train {
        let c = class_index[sub];
        doc_counts[c] += 1;
        for (term, weight) in &vector.entries {
            weight_sums[c][*term] += weight;
        }
    }

    let total = train.len() as f64;
    let log_prior: Vec<f64> = doc_counts
        .iter()
        .map(|n| (*n as f64 / total).ln())
        .collect();

    let mut log_likelihood = Vec::with_capacity(classes.len());
    for sums in &weight_sums {
        let denom: f64 = sums.iter().sum::<f64>() + alpha * n_terms as f64;
        log_likelihood.push(sums.iter().map(|w| ((w + alpha) / denom).ln()).collect());
    }

    Ok(MnbModel {
        classes,
        log_prior,
        log_likelihood,
        vocab,
        config,
        alpha,
        threshold,
    })
}

fn log_sum_exp(scores: &[f64]) -> f64 {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln()
}

/// Scores the document against every class and normalizes into a
/// posterior. Below the confidence threshold the label is NonClassified,
/// with the posterior still reported. Ties keep the earlier class.
pub fn predict(model: &MnbModel, doc: &CleanPost) -> PredictionResult {
    let vector = vectorize(doc, &model.vocab, &model.config);
    let scores: Vec<f64> = model
        .classes
        .iter()
        .enumerate()
        .map(|(c, _)| {
            let mut score = model.log_prior[c];
            for (term, weight) in &vector.entries {
                score += weight * model.log_likelihood[c][*term];
            }
            score
        })
        .collect();

    let log_z = log_sum_exp(&scores);
    let posterior: Vec<f64> = scores.iter().map(|s| (s - log_z).exp()).collect();

    let mut best = 0;
    for (i, p) in posterior.iter().enumerate() {
        if *p > posterior[best] {
            best = i;
        }
    }
    let confidence = posterior[best];

    if confidence < model.threshold {
        return PredictionResult {
            label: LandUseClass::from_parent(ParentClass::NonClassified),
            sub_label: None,
            posterior: Some(posterior),
            confidence: Some(confidence),
        };
    }

    let sub = model.classes[best];
    PredictionResult {
        label: LandUseClass::from_sub(sub),
        sub_label: Some(sub),
        posterior: Some(posterior),
        confidence: Some(confidence),
    }
}

fn pos_sequences(tags: &[String], n_min: usize, n_max: usize) -> Vec<String> {
    extract_ngrams(tags, n_min, n_max)
}

fn top_sequences(docs: &[CleanPost], i: usize, n_min: usize, n_max: usize) -> BTreeSet<String> {
    let mut counts: HashMap<String, usize> = HashMap::new();
    for doc in docs {
        for seq in pos_sequences(&doc.pos_tags, n_min, n_max) {
            *counts.entry(seq).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<(String, usize)> = counts.into_iter().collect();
    // Highest count first; ties resolve lexicographically.
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.into_iter().take(i).map(|(seq, _)| seq).collect()
}

/// Takes the top-i most frequent PoS n-grams of each corpus and removes
/// the intersection from both sides, leaving the discriminative sequences.
pub fn fit_pos_filter(
    location_docs: &[CleanPost],
    other_docs: &[CleanPost],
    i: usize,
    n_min: usize,
    n_max: usize,
) -> Result<PosSequenceFilter, ClassifierError> {
    if location_docs.is_empty() || other_docs.is_empty() {
        return Err(ClassifierError::EmptyPrefilterCorpus);
    }
    if i == 0 {
        return Err(ClassifierError::InvalidTopI);
    }
    let location = top_sequences(location_docs, i, n_min, n_max);
    let other = top_sequences(other_docs, i, n_min, n_max);
    let shared: BTreeSet<String> = location.intersection(&other).cloned().collect();
    Ok(PosSequenceFilter {
        location_sequences: location.difference(&shared).cloned().collect(),
        nonlocation_sequences: other.difference(&shared).cloned().collect(),
        top_i: i,
        ngram_min: n_min,
        ngram_max: n_max,
    })
}

/// Score is location-set matches minus non-location-set matches over the
/// document's PoS n-grams (with multiplicity); positive means the post
/// refers to being at a location. A zero score — including no matches at
/// all — is rejected.
pub fn is_location_post(
    filter: &PosSequenceFilter,
    tags: &[String],
    n_min: usize,
    n_max: usize,
) -> bool {
    let mut score = 0i64;
    for seq in pos_sequences(tags, n_min, n_max) {
        if filter.location_sequences.contains(&seq) {
            score += 1;
        } else if filter.nonlocation_sequences.contains(&seq) {
            score -= 1;
        }
    }
    score > 0
}

/// Full prediction path: prefilter first, classifier second.
pub fn classify_pipeline(
    model: &MnbModel,
    filter: &PosSequenceFilter,
    doc: &CleanPost,
) -> PredictionResult {
    if !is_location_post(filter, &doc.pos_tags, filter.ngram_min, filter.ngram_max) {
        return PredictionResult::non_classified();
    }
    predict(model, doc)
}

#[derive(Serialize, Deserialize)]
struct VocabularyFile {
    n_docs: usize,
    terms: Vec<VocabularyTerm>,
}

#[derive(Serialize, Deserialize)]
struct VocabularyTerm {
    term: String,
    index: usize,
    df: usize,
}

#[derive(Serialize, Deserialize)]
struct PosFilterFile {
    i: usize,
    n_min: usize,
    n_max: usize,
    location_sequences: Vec<String>,
    nonlocation_sequences: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    alpha: f64,
    threshold: f64,
    classes: Vec<Subcategory>,
    log_prior: Vec<f64>,
    vocabulary: VocabularyFile,
    /// Class name to {term: ln P(term | class)}; every vocabulary term is
    /// present because smoothing leaves nothing at exactly zero.
    log_likelihood: BTreeMap<String, BTreeMap<String, f64>>,
    feature_config: FeatureConfig,
    pos_filter: PosFilterFile,
}

/// Writes model and prefilter as versioned, self-describing JSON.
pub fn save_model(
    model: &MnbModel,
    filter: &PosSequenceFilter,
    path: &Path,
) -> Result<(), ClassifierError> {
    let mut terms: Vec<VocabularyTerm> = model
        .vocab
        .terms()
        .map(|(term, index, df)| VocabularyTerm {
            term: term.to_string(),
            index,
            df,
        })
        .collect();
    terms.sort_by_key(|t| t.index);

    let mut log_likelihood = BTreeMap::new();
    for (c, sub) in model.classes.iter().enumerate() {
        let mut row = BTreeMap::new();
        for (term, index, _) in model.vocab.terms() {
            row.insert(term.to_string(), model.log_likelihood[c][index]);
        }
        log_likelihood.insert(sub.name().to_string(), row);
    }

    let file = ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        alpha: model.alpha,
        threshold: model.threshold,
        classes: model.classes.clone(),
        log_prior: model.log_prior.clone(),
        vocabulary: VocabularyFile {
            n_docs: model.vocab.n_docs(),
            terms,
        },
        log_likelihood,
        feature_config: model.config.clone(),
        pos_filter: PosFilterFile {
            i: filter.top_i,
            n_min: filter.ngram_min,
            n_max: filter.ngram_max,
            location_sequences: filter.location_sequences.iter().cloned().collect(),
            nonlocation_sequences: filter.nonlocation_sequences.iter().cloned().collect(),
        },
    };

    let json = serde_json::to_string_pretty(&file)
        .map_err(|e| ClassifierError::CorruptModel(e.to_string()))?;
    fs::write(path, json + "\n").map_err(|source| ClassifierError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a model file back; predictions after a round trip are
/// bit-identical to the saved model's.
pub fn load_model(path: &Path) -> Result<(MnbModel, PosSequenceFilter), ClassifierError> {
    let text = fs::read_to_string(path).map_err(|source| ClassifierError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: ModelFile =
        serde_json::from_str(&text).map_err(|e| ClassifierError::CorruptModel(e.to_string()))?;
    if file.format_version != MODEL_FORMAT_VERSION {
        return Err(ClassifierError::VersionMismatch {
            found: file.format_version,
            expected: MODEL_FORMAT_VERSION,
        });
    }

    let mut terms = file.vocabulary.terms;
    terms.sort_by_key(|t| t.index);
    if terms.iter().enumerate().any(|(i, t)| t.index != i) {
        return Err(ClassifierError::CorruptModel(
            "vocabulary indices are not a contiguous 0-based range".to_string(),
        ));
    }
    let vocab = Vocabulary::from_parts(
        terms.iter().map(|t| t.term.clone()).collect(),
        terms.iter().map(|t| t.df).collect(),
        file.vocabulary.n_docs,
    )
    .map_err(|e| ClassifierError::CorruptModel(e.to_string()))?;

    let mut log_likelihood = Vec::with_capacity(file.classes.len());
    for sub in &file.classes {
        let row_map = file.log_likelihood.get(sub.name()).ok_or_else(|| {
            ClassifierError::CorruptModel(format!("missing likelihoods for class {sub}"))
        })?;
        let mut row = vec![0.0f64; vocab.len()];
        for (term, value) in row_map {
            let index = vocab.index_of(term).ok_or_else(|| {
                ClassifierError::CorruptModel(format!("likelihood term {term:?} not in vocabulary"))
            })?;
            row[index] = *value;
        }
        if row_map.len() != vocab.len() {
            return Err(ClassifierError::CorruptModel(format!(
                "class {sub} has {} likelihood terms, vocabulary has {}",
                row_map.len(),
                vocab.len()
            )));
        }
        log_likelihood.push(row);
    }

    if file.log_prior.len() != file.classes.len() {
        return Err(ClassifierError::CorruptModel(
            "log_prior length does not match classes".to_string(),
        ));
    }

    let model = MnbModel {
        classes: file.classes,
        log_prior: file.log_prior,
        log_likelihood,
        vocab,
        config: file.feature_config,
        alpha: file.alpha,
        threshold: file.threshold,
    };
    let filter = PosSequenceFilter {
        location_sequences: file.pos_filter.location_sequences.into_iter().collect(),
        nonlocation_sequences: file.pos_filter.nonlocation_sequences.into_iter().collect(),
        top_i: file.pos_filter.i,
        ngram_min: file.pos_filter.n_min,
        ngram_max: file.pos_filter.n_max,
    };
    Ok((model, filter))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::fit_vocabulary;
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

    fn tagged(tags: &[&str]) -> CleanPost {
        CleanPost {
            id: "d".to_string(),
            tokens: tags.iter().map(|_| "w".to_string()).collect(),
            lemmas: tags.iter().map(|_| "w".to_string()).collect(),
            pos_tags: toks(tags),
            point: GeoPoint { lat: 0.0, lon: 0.0 },
        }
    }

    fn counts_config() -> FeatureConfig {
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

    fn toy_model() -> MnbModel {
        // Two docs, two classes, two terms, alpha = 1.
        let config = counts_config();
        let docs = vec![doc(&["tienda", "tienda"]), doc(&["casa"])];
        let vocab = fit_vocabulary(&docs, &config).unwrap();
        let train = vec![
            (
                vectorize(&docs[0], &vocab, &config),
                Subcategory::Commercial,
            ),
            (
                vectorize(&docs[1], &vocab, &config),
                Subcategory::Residential,
            ),
        ];
        train_mnb(&train, 1.0, vocab, config, 0.5).unwrap()
    }

    #[test]
    fn toy_model_matches_hand_arithmetic() {
        let model = toy_model();
        // Canonical class order puts Commercial before Residential.
        assert_eq!(
            model.classes,
            vec![Subcategory::Commercial, Subcategory::Residential]
        );
        assert!((model.log_prior[0] - 0.5f64.ln()).abs() < 1e-9);
        assert!((model.log_prior[1] - 0.5f64.ln()).abs() < 1e-9);

        let tienda = model.vocab.index_of("tienda").unwrap();
        let casa = model.vocab.index_of("casa").unwrap();
        // Commercial sums: tienda 2, casa 0; denom 2 + 2 = 4.
        assert!((model.log_likelihood[0][tienda] - (3.0f64 / 4.0).ln()).abs() < 1e-9);
        assert!((model.log_likelihood[0][casa] - (1.0f64 / 4.0).ln()).abs() < 1e-9);
        // Residential sums: tienda 0, casa 1; denom 1 + 2 = 3.
        assert!((model.log_likelihood[1][tienda] - (1.0f64 / 3.0).ln()).abs() < 1e-9);
        assert!((model.log_likelihood[1][casa] - (2.0f64 / 3.0).ln()).abs() < 1e-9);
    }

    #[test]
    fn likelihood_rows_sum_to_one() {
        let model = toy_model();
        for row in &model.log_likelihood {
            let sum: f64 = row.iter().map(|l| l.exp()).sum();
            assert!((sum - 1.0).abs() < 1e-9, "row sums to {sum}");
        }
        let prior_sum: f64 = model.log_prior.iter().map(|l| l.exp()).sum();
        assert!((prior_sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn single_class_prior_is_one() {
        let config = counts_config();
        let docs = vec![doc(&["a"]), doc(&["b"])];
        let vocab = fit_vocabulary(&docs, &config).unwrap();
        let train: Vec<(FeatureVector, Subcategory)> = docs
            .iter()
            .map(|d| (vectorize(d, &vocab, &config), Subcategory::UnbuiltLand))
            .collect();
        let model = train_mnb(&train, 1.0, vocab, config, 0.5).unwrap();
        assert_eq!(model.classes, vec![Subcategory::UnbuiltLand]);
        assert!((model.log_prior[0].exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_training_set_is_an_error() {
        let config = counts_config();
        let vocab = fit_vocabulary(&[doc(&["a"])], &config).unwrap();
        assert!(matches!(
            train_mnb(&[], 1.0, vocab, config, 0.5),
            Err(ClassifierError::EmptyTrainingSet)
        ));
    }

    #[test]
    fn non_positive_alpha_is_an_error() {
        let config = counts_config();
        let docs = vec![doc(&["a"])];
        let vocab = fit_vocabulary(&docs, &config).unwrap();
        let train = vec![(
            vectorize(&docs[0], &vocab, &config),
            Subcategory::Commercial,
        )];
        assert!(matches!(
            train_mnb(&train, 0.0, vocab, config, 0.5),
            Err(ClassifierError::InvalidAlpha(_))
        ));
    }

    #[test]
    fn prediction_prefers_exclusive_terms() {
        let model = toy_model();
        let result = predict(&model, &doc(&["tienda"]));
        assert_eq!(result.sub_label, Some(Subcategory::Commercial));
        assert_eq!(result.label.parent(), ParentClass::Commercial);
        // P(Commercial | tienda) = (1/2 * 3/4) / (1/2 * 3/4 + 1/2 * 1/3).
        let expected = (0.5 * 0.75) / (0.5 * 0.75 + 0.5 / 3.0);
        assert!((result.confidence.unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn posterior_sums_to_one() {
        let model = toy_model();
        let result = predict(&model, &doc(&["tienda", "casa", "tienda"]));
        let sum: f64 = result.posterior.unwrap().iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unknown_terms_fall_back_to_priors_and_cutoff() {
        // Five equally likely classes; a doc with no known terms gets a
        // flat posterior of 0.2, below the 0.5 cut-off.
        let config = counts_config();
        let docs: Vec<CleanPost> = (0..5).map(|i| doc(&[&format!("w{i}")])).collect();
        let vocab = fit_vocabulary(&docs, &config).unwrap();
        let subs = [
            Subcategory::Commercial,
            Subcategory::Institutional,
            Subcategory::IndustrialOffices,
            Subcategory::Residential,
            Subcategory::UnbuiltLand,
        ];
        let train: Vec<(FeatureVector, Subcategory)> = docs
            .iter()
            .zip(subs)
            .map(|(d, s)| (vectorize(d, &vocab, &config), s))
            .collect();
        let model = train_mnb(&train, 1.0, vocab, config, 0.5).unwrap();

        let result = predict(&model, &doc(&["zzz"]));
        let posterior = result.posterior.unwrap();
        for p in &posterior {
            assert!((p - 0.2).abs() < 1e-9);
        }
        assert_eq!(result.label.parent(), ParentClass::NonClassified);
        assert_eq!(result.sub_label, None);
        assert_eq!(result.confidence, Some(0.2));
    }

    #[test]
    fn retraining_is_deterministic() {
        let config = counts_config();
        let docs = vec![doc(&["a", "b"]), doc(&["b", "c"]), doc(&["c", "a"])];
        let vocab = fit_vocabulary(&docs, &config).unwrap();
        let train: Vec<(FeatureVector, Subcategory)> = docs
            .iter()
            .zip([
                Subcategory::Commercial,
                Subcategory::Residential,
                Subcategory::Commercial,
            ])
            .map(|(d, s)| (vectorize(d, &vocab, &config), s))
            .collect();
        let a = train_mnb(&train, 1.0, vocab.clone(), config.clone(), 0.5).unwrap();
        let b = train_mnb(&train, 1.0, vocab, config, 0.5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shared_sequences_leave_both_sets() {
        let loc = vec![tagged(&["VMI", "SP", "NC"])];
        let non = vec![tagged(&["VMI", "SP", "NC"])];
        let filter = fit_pos_filter(&loc, &non, 10, 2, 2).unwrap();
        assert!(filter.location_sequences.is_empty());
        assert!(filter.nonlocation_sequences.is_empty());
    }

    #[test]
    fn dominant_location_pattern_is_captured() {
        let loc = vec![
            tagged(&["VMI", "SP", "NC"]),
            tagged(&["VMI", "SP", "NP"]),
            tagged(&["VMI", "SP"]),
        ];
        let non = vec![tagged(&["AQ", "NC"]), tagged(&["AQ", "NC", "RG"])];
        let filter = fit_pos_filter(&loc, &non, 2, 2, 2).unwrap();
        assert!(filter.location_sequences.contains("VMI SP"));
        assert!(filter.nonlocation_sequences.contains("AQ NC"));
    }

    #[test]
    fn top_i_larger_than_distinct_takes_all() {
        let loc = vec![tagged(&["VMI", "SP"])];
        let non = vec![tagged(&["AQ", "NC"])];
        let filter = fit_pos_filter(&loc, &non, 100, 2, 2).unwrap();
        assert_eq!(filter.location_sequences.len(), 1);
        assert_eq!(filter.nonlocation_sequences.len(), 1);
    }

    fn sample_filter() -> PosSequenceFilter {
        PosSequenceFilter {
            location_sequences: ["VMI SP", "SP NC"].iter().map(|s| s.to_string()).collect(),
            nonlocation_sequences: ["AQ AQ"].iter().map(|s| s.to_string()).collect(),
            top_i: 10,
            ngram_min: 2,
            ngram_max: 2,
        }
    }

    #[test]
    fn location_matches_only_gives_true() {
        let filter = sample_filter();
        assert!(is_location_post(&filter, &toks(&["VMI", "SP", "NC"]), 2, 2));
    }

    #[test]
    fn no_matches_is_rejected() {
        let filter = sample_filter();
        assert!(!is_location_post(&filter, &toks(&["NC", "NC"]), 2, 2));
        assert!(!is_location_post(&filter, &[], 2, 2));
    }

    #[test]
    fn mixed_matches_follow_the_score() {
        let filter = sample_filter();
        // Four location hits against one non-location hit: score +3.
        let tags = toks(&["VMI", "SP", "NC", "VMI", "SP", "NC", "AQ", "AQ"]);
        assert!(is_location_post(&filter, &tags, 2, 2));
        // Two non-location hits, nothing else: score -2.
        let mostly_non = toks(&["AQ", "AQ", "AQ", "NC"]);
        assert!(!is_location_post(&filter, &mostly_non, 2, 2));
    }

    #[test]
    fn pipeline_covers_all_three_paths() {
        let model = toy_model();
        let filter = sample_filter();

        let mut at_location = doc(&["tienda"]);
        at_location.pos_tags = toks(&["VMI", "SP", "NC"]);
        at_location.tokens = toks(&["w", "w", "tienda"]);
        at_location.lemmas = at_location.tokens.clone();
        let r = classify_pipeline(&model, &filter, &at_location);
        assert_eq!(r.label.parent(), ParentClass::Commercial);

        let mut chatter = doc(&["tienda"]);
        chatter.pos_tags = toks(&["AQ", "AQ"]);
        let r = classify_pipeline(&model, &filter, &chatter);
        assert_eq!(r.label.parent(), ParentClass::NonClassified);
        assert!(r.posterior.is_none());
        assert!(r.confidence.is_none());

        // With two classes a no-evidence posterior is (0.5, 0.5), so the
        // cut-off has to sit above 0.5 to exercise the abstention path.
        let mut strict = toy_model();
        strict.threshold = 0.9;
        let mut vague = doc(&["zzz", "qqq"]);
        vague.pos_tags = toks(&["VMI", "SP"]);
        let r = classify_pipeline(&strict, &filter, &vague);
        assert_eq!(r.label.parent(), ParentClass::NonClassified);
        assert!(r.posterior.is_some());
        assert_eq!(r.confidence, Some(0.5));
    }

    #[test]
    fn model_roundtrip_is_identical() {
        let model = toy_model();
        let filter = sample_filter();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        save_model(&model, &filter, &path).unwrap();
        let (loaded_model, loaded_filter) = load_model(&path).unwrap();
        assert_eq!(model, loaded_model);
        assert_eq!(filter, loaded_filter);
    }

    #[test]
    fn corrupt_model_file_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        fs::write(&path, "{not json").unwrap();
        assert!(matches!(
            load_model(&path),
            Err(ClassifierError::CorruptModel(_))
        ));
    }

    #[test]
    fn version_mismatch_is_an_error() {
        let model = toy_model();
        let filter = sample_filter();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        save_model(&model, &filter, &path).unwrap();
        let text = fs::read_to_string(&path)
            .unwrap()
            .replace("\"format_version\": 1", "\"format_version\": 99");
        fs::write(&path, text).unwrap();
        assert!(matches!(
            load_model(&path),
            Err(ClassifierError::VersionMismatch { found: 99, .. })
        ));
    }

    #[test]
    fn huge_alpha_washes_out_evidence_toward_priors() {
        let config = counts_config();
        let docs = vec![
            doc(&["tienda", "ropa"]),
            doc(&["tienda", "precio"]),
            doc(&["casa", "hogar"]),
        ];
        let vocab = fit_vocabulary(&docs, &config).unwrap();
        let train: Vec<(FeatureVector, Subcategory)> = docs
            .iter()
            .zip([
                Subcategory::Commercial,
                Subcategory::Commercial,
                Subcategory::Residential,
            ])
            .map(|(d, s)| (vectorize(d, &vocab, &config), s))
            .collect();
        let model = train_mnb(&train, 1e6, vocab, config, 0.5).unwrap();

        let result = predict(&model, &doc(&["tienda", "tienda", "ropa"]));
        let posterior = result.posterior.unwrap();
        let priors: Vec<f64> = model.log_prior.iter().map(|l| l.exp()).collect();
        for (p, prior) in posterior.iter().zip(&priors) {
            assert!(
                (p - prior).abs() < 1e-3,
                "posterior {p} drifted from prior {prior}"
            );
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        // Balanced two-class model over four terms.
        fn balanced_model() -> MnbModel {
            let config = counts_config();
            let docs = vec![
                doc(&["a", "b", "a"]),
                doc(&["a", "b", "b"]),
                doc(&["c", "d", "c"]),
                doc(&["c", "d", "d"]),
            ];
            let vocab = fit_vocabulary(&docs, &config).unwrap();
            let train: Vec<(FeatureVector, Subcategory)> = docs
                .iter()
                .zip([
                    Subcategory::Commercial,
                    Subcategory::Commercial,
                    Subcategory::Residential,
                    Subcategory::Residential,
                ])
                .map(|(d, s)| (vectorize(d, &vocab, &config), s))
                .collect();
            train_mnb(&train, 1.0, vocab, config, 0.01).unwrap()
        }

        proptest! {
            #[test]
            fn posterior_always_normalized(words in proptest::collection::vec("[a-e]", 0..10)) {
                let model = balanced_model();
                let d = doc(&words.iter().map(String::as_str).collect::<Vec<_>>());
                let result = predict(&model, &d);
                let sum: f64 = result.posterior.unwrap().iter().sum();
                prop_assert!((sum - 1.0).abs() < 1e-9);
            }

            #[test]
            fn count_scaling_keeps_argmax_under_equal_priors(
                words in proptest::collection::vec("[a-d]", 1..8),
                k in 2usize..6,
            ) {
                let model = balanced_model();
                let base: Vec<&str> = words.iter().map(String::as_str).collect();
                let scaled: Vec<&str> = base
                    .iter()
                    .cycle()
                    .take(base.len() * k)
                    .copied()
                    .collect();
                let r1 = predict(&model, &doc(&base));
                // Exact class ties have no well-defined argmax; only a
                // real margin must survive the scaling.
                let posterior = r1.posterior.as_ref().unwrap();
                prop_assume!((posterior[0] - posterior[1]).abs() > 1e-9);
                let rk = predict(&model, &doc(&scaled));
                prop_assert_eq!(r1.sub_label, rk.sub_label);
            }
        }
    }
}
