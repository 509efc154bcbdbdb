//! Run configuration: a flat `section.key = value` file, every key
//! overridable by a command-line flag.

use std::fs;
use std::path::{Path, PathBuf};

use landuse::FeatureConfig;

use crate::CliError;

#[derive(Debug, Clone)]
pub struct Paths {
    pub posts: PathBuf,
    pub corpus: PathBuf,
    pub labels: PathBuf,
    pub geojson: PathBuf,
    pub dictionary: PathBuf,
    pub stoplist: PathBuf,
    pub lexicon: PathBuf,
    pub suggestions: PathBuf,
    pub model: PathBuf,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone)]
pub struct ClassifierSettings {
    pub alpha: f64,
    pub threshold: f64,
    /// Top-i frequency cut for the PoS prefilter.
    pub top_i: usize,
    pub pos_ngram_min: usize,
    pub pos_ngram_max: usize,
}

#[derive(Debug, Clone)]
pub struct SplitSettings {
    pub test_fraction: f64,
    /// No built-in default: reproducible runs must state their seed.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub paths: Paths,
    pub features: FeatureConfig,
    pub classifier: ClassifierSettings,
    pub split: SplitSettings,
    pub spell_threshold: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            paths: Paths {
                posts: "fixtures/posts.jsonl".into(),
                corpus: "fixtures/corpus.jsonl".into(),
                labels: "fixtures/labels.jsonl".into(),
                geojson: "fixtures/blocks.geojson".into(),
                dictionary: "resources/abbreviations.tsv".into(),
                stoplist: "resources/stoplist.tsv".into(),
                lexicon: "resources/lexicon.tsv".into(),
                suggestions: "resources/suggestions.tsv".into(),
                model: "out/model.json".into(),
                out_dir: "out".into(),
            },
            features: FeatureConfig::default(),
            classifier: ClassifierSettings {
                alpha: landuse::classifier::DEFAULT_ALPHA,
                threshold: landuse::classifier::DEFAULT_THRESHOLD,
                top_i: landuse::classifier::DEFAULT_TOP_SEQUENCES,
                pos_ngram_min: 2,
                pos_ngram_max: 3,
            },
            split: SplitSettings {
                test_fraction: 0.2,
                seed: None,
            },
            spell_threshold: landuse::textprep::DEFAULT_SPELL_THRESHOLD,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::config(format!("invalid value {value:?} for key {key}")))
}

impl RunConfig {
    /// Reads a config file and applies it over the defaults.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let mut config = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::config(format!(
                    "{}:{}: expected `key = value`, got {raw:?}",
                    path.display(),
                    idx + 1
                )));
            };
            config.set(key.trim(), value.trim())?;
        }
        Ok(config)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "paths.posts" => self.paths.posts = value.into(),
            "paths.corpus" => self.paths.corpus = value.into(),
            "paths.labels" => self.paths.labels = value.into(),
            "paths.geojson" => self.paths.geojson = value.into(),
            "paths.dictionary" => self.paths.dictionary = value.into(),
            "paths.stoplist" => self.paths.stoplist = value.into(),
            "paths.lexicon" => self.paths.lexicon = value.into(),
            "paths.suggestions" => self.paths.suggestions = value.into(),
            "paths.model" => self.paths.model = value.into(),
            "paths.out_dir" => self.paths.out_dir = value.into(),
            "features.ngram_min" => self.features.ngram_min = parse_value(key, value)?,
            "features.ngram_max" => self.features.ngram_max = parse_value(key, value)?,
            "features.use_lemmas" => self.features.use_lemmas = parse_value(key, value)?,
            "features.use_tfidf" => self.features.use_tfidf = parse_value(key, value)?,
            "features.include_pos_ngrams" => {
                self.features.include_pos_ngrams = parse_value(key, value)?
            }
            "features.pos_ngram_min" => self.features.pos_ngram_min = parse_value(key, value)?,
            "features.pos_ngram_max" => self.features.pos_ngram_max = parse_value(key, value)?,
            "features.min_df" => self.features.min_df = parse_value(key, value)?,
            "classifier.alpha" => self.classifier.alpha = parse_value(key, value)?,
            "classifier.threshold" => self.classifier.threshold = parse_value(key, value)?,
            "classifier.i" => self.classifier.top_i = parse_value(key, value)?,
            "classifier.pos_ngram_min" => {
                self.classifier.pos_ngram_min = parse_value(key, value)?
            }
            "classifier.pos_ngram_max" => {
                self.classifier.pos_ngram_max = parse_value(key, value)?
            }
            "split.test_fraction" => self.split.test_fraction = parse_value(key, value)?,
            "split.seed" => self.split.seed = Some(parse_value(key, value)?),
            "spell.threshold" => self.spell_threshold = parse_value(key, value)?,
            other => {
                return Err(CliError::config(format!("unknown configuration key {other:?}")))
            }
        }
        Ok(())
    }

    pub fn stage_path(&self, file: &str) -> PathBuf {
        self.paths.out_dir.join(file)
    }
}

/// Optional command-line overrides, one flag per configuration key.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    #[arg(long, global = true, help_heading = "Path overrides")]
    pub posts: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Path overrides")]
    pub corpus: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Path overrides")]
    pub labels: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Path overrides")]
    pub geojson: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Path overrides")]
    pub dictionary: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Path overrides")]
    pub stoplist: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Path overrides")]
    pub lexicon: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Path overrides")]
    pub suggestions: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Path overrides")]
    pub model: Option<PathBuf>,
    #[arg(long, global = true, help_heading = "Path overrides")]
    pub out_dir: Option<PathBuf>,

    #[arg(long, global = true, help_heading = "Feature overrides")]
    pub ngram_min: Option<usize>,
    #[arg(long, global = true, help_heading = "Feature overrides")]
    pub ngram_max: Option<usize>,
    #[arg(long, global = true, help_heading = "Feature overrides")]
    pub use_lemmas: Option<bool>,
    #[arg(long, global = true, help_heading = "Feature overrides")]
    pub use_tfidf: Option<bool>,
    #[arg(long, global = true, help_heading = "Feature overrides")]
    pub include_pos_ngrams: Option<bool>,
    #[arg(long, global = true, help_heading = "Feature overrides")]
    pub pos_ngram_min: Option<usize>,
    #[arg(long, global = true, help_heading = "Feature overrides")]
    pub pos_ngram_max: Option<usize>,
    #[arg(long, global = true, help_heading = "Feature overrides")]
    pub min_df: Option<usize>,

    #[arg(long, global = true, help_heading = "Classifier overrides")]
    pub alpha: Option<f64>,
    #[arg(long, global = true, help_heading = "Classifier overrides")]
    pub threshold: Option<f64>,
    /// Top-i most frequent PoS sequences kept per corpus in the prefilter.
    #[arg(long = "i", global = true, help_heading = "Classifier overrides")]
    pub top_i: Option<usize>,
    #[arg(long, global = true, help_heading = "Classifier overrides")]
    pub filter_ngram_min: Option<usize>,
    #[arg(long, global = true, help_heading = "Classifier overrides")]
    pub filter_ngram_max: Option<usize>,

    #[arg(long, global = true, help_heading = "Split overrides")]
    pub test_fraction: Option<f64>,
    #[arg(long, global = true, help_heading = "Spell overrides")]
    pub spell_threshold: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, config: &mut RunConfig) {
        macro_rules! set {
            ($field:expr, $target:expr) => {
                if let Some(v) = &$field {
                    $target = v.clone();
                }
            };
        }
        set!(self.posts, config.paths.posts);
        set!(self.corpus, config.paths.corpus);
        set!(self.labels, config.paths.labels);
        set!(self.geojson, config.paths.geojson);
        set!(self.dictionary, config.paths.dictionary);
        set!(self.stoplist, config.paths.stoplist);
        set!(self.lexicon, config.paths.lexicon);
        set!(self.suggestions, config.paths.suggestions);
        set!(self.model, config.paths.model);
        set!(self.out_dir, config.paths.out_dir);
        set!(self.ngram_min, config.features.ngram_min);
        set!(self.ngram_max, config.features.ngram_max);
        set!(self.use_lemmas, config.features.use_lemmas);
        set!(self.use_tfidf, config.features.use_tfidf);
        set!(self.include_pos_ngrams, config.features.include_pos_ngrams);
        set!(self.pos_ngram_min, config.features.pos_ngram_min);
        set!(self.pos_ngram_max, config.features.pos_ngram_max);
        set!(self.min_df, config.features.min_df);
        set!(self.alpha, config.classifier.alpha);
        set!(self.threshold, config.classifier.threshold);
        set!(self.top_i, config.classifier.top_i);
        set!(self.filter_ngram_min, config.classifier.pos_ngram_min);
        set!(self.filter_ngram_max, config.classifier.pos_ngram_max);
        set!(self.test_fraction, config.split.test_fraction);
        set!(self.spell_threshold, config.spell_threshold);
    }
}
