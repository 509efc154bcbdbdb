//! Identification of land-use categories (residential, commercial,
//! industrial-offices, institutional-governmental, unbuilt land) from
//! geo-tagged short-text posts.
//!
//! The pipeline: ingest and deduplicate posts, normalize the text into
//! tokens/lemmas/PoS tags, keep only posts inside the study region and
//! assign them to city blocks, extract n-gram / TF-IDF / Bag-of-PoS
//! features, classify with multinomial naive Bayes behind a PoS-sequence
//! location prefilter, and evaluate with per-class and macro metrics.

pub mod classifier;
pub mod eval;
pub mod features;
pub mod geo;
pub mod ingest;
pub mod textprep;

pub use classifier::{
    classify_pipeline, fit_pos_filter, is_location_post, load_model, predict, save_model,
    MnbModel, PosSequenceFilter, PredictionResult,
};
pub use eval::{confusion, metrics, metrics_excluding, ConfusionMatrix, MetricsReport};
pub use features::{
    extract_ngrams, extract_pos_ngrams, fit_vocabulary, vectorize, FeatureConfig, FeatureVector,
    Vocabulary,
};
pub use geo::{
    assign_blocks, filter_by_region, load_geojson, point_in_polygon, Block, BlockMap, GeoPoint,
    Polygon,
};
pub use ingest::{
    dedupe_and_filter, label_posts, load_labels, load_posts, split_corpus, LabeledPost,
    LandUseClass, ParentClass, RawPost, Subcategory,
};
pub use textprep::{
    expand_abbreviations, lcs_ratio, lemmatize_and_tag, preprocess, preprocess_with_hook,
    process_hashtags_and_mentions, remove_stopwords, spell_correct, strip_noise, CleanPost,
    Lexicon, ReplacementDictionary, SpellResources, TextResources,
};
