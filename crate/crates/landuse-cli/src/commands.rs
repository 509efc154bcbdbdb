//! The pipeline commands: ingest, preprocess, geofilter, train, classify,
//! export-geojson and the end-to-end run.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use landuse::classifier::{
    classify_pipeline, fit_pos_filter, load_model, predict, save_model, MnbModel,
    PosSequenceFilter,
};
use landuse::eval::{confusion, metrics_excluding, MetricsReport};
use landuse::features::{fit_vocabulary, vectorize, FeatureConfig};
use landuse::geo::{assign_blocks, filter_by_region, load_geojson};
use landuse::ingest::{
    dedupe_and_filter, label_posts, load_labels, load_posts, split_corpus, LabeledPost,
    ParentClass, RawPost, Subcategory,
};
use landuse::textprep::{preprocess, CleanPost, TextResources};

use crate::config::RunConfig;
use crate::CliError;

/// A region-filtered post with its block assignment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssignedRow {
    #[serde(flatten)]
    pub post: CleanPost,
    pub block_id: String,
}

/// One classified post, as written by `classify`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabeledRow {
    pub id: String,
    pub label: String,
    pub sub_label: Option<String>,
    pub confidence: Option<f64>,
    pub lat: f64,
    pub lon: f64,
    pub block_id: String,
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(line).map_err(|e| {
            CliError::input(format!("{}:{}: {e}", path.display(), idx + 1))
        })?;
        rows.push(row);
    }
    Ok(rows)
}

fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    let mut out = String::new();
    for row in rows {
        let line = serde_json::to_string(row)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        out.push_str(&line);
        out.push('\n');
    }
    write_file(path, &out)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::input(format!("{}: {e}", parent.display())))?;
        }
    }
    fs::write(path, contents).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn load_resources(config: &RunConfig) -> Result<TextResources, CliError> {
    Ok(TextResources::load(
        &config.paths.dictionary,
        &config.paths.stoplist,
        &config.paths.lexicon,
        &config.paths.suggestions,
        config.spell_threshold,
    )?)
}

pub fn cmd_ingest(config: &RunConfig, quiet: bool) -> Result<(), CliError> {
    let load = load_posts(&config.paths.posts)?;
    for warning in &load.warnings {
        eprintln!("warning: {}: {warning}", config.paths.posts.display());
    }
    let total = load.posts.len();
    let kept = dedupe_and_filter(load.posts);
    let out = config.stage_path("ingested.jsonl");
    write_jsonl(&out, &kept)?;
    if !quiet {
        println!("ingest: {} retained, {} removed", kept.len(), total - kept.len());
    }
    Ok(())
}

pub fn cmd_preprocess(config: &RunConfig, quiet: bool) -> Result<(), CliError> {
    let resources = load_resources(config)?;
    let posts: Vec<RawPost> = read_jsonl(&config.stage_path("ingested.jsonl"))?;
    let clean: Vec<CleanPost> = posts.iter().map(|p| preprocess(p, &resources)).collect();
    write_jsonl(&config.stage_path("clean.jsonl"), &clean)?;
    if !quiet {
        println!("preprocess: {} posts processed", clean.len());
    }
    Ok(())
}

pub fn cmd_geofilter(config: &RunConfig, quiet: bool) -> Result<(), CliError> {
    let map = load_geojson(&config.paths.geojson)?;
    let clean: Vec<CleanPost> = read_jsonl(&config.stage_path("clean.jsonl"))?;
    let in_region = filter_by_region(clean, &map.region)?;
    let n_region = in_region.len();
    let assigned = assign_blocks(in_region, &map)?;
    let rows: Vec<AssignedRow> = assigned
        .into_iter()
        .map(|(post, block_id)| AssignedRow { post, block_id })
        .collect();
    write_jsonl(&config.stage_path("geofiltered.jsonl"), &rows)?;
    if !quiet {
        println!(
            "geofilter: {n_region} in region, {} assigned to blocks",
            rows.len()
        );
    }
    Ok(())
}

/// The ten feature combinations reported by the sweep, in a fixed order.
pub fn sweep_rows() -> Vec<(&'static str, FeatureConfig)> {
    let base = |tfidf: bool, min: usize, max: usize, lemmas: bool| FeatureConfig {
        ngram_min: min,
        ngram_max: max,
        use_lemmas: lemmas,
        use_tfidf: tfidf,
        include_pos_ngrams: false,
        pos_ngram_min: 2,
        pos_ngram_max: 3,
        min_df: 1,
    };
    vec![
        ("TF-IDF", base(true, 1, 1, false)),
        ("TF-IDF / lemma", base(true, 1, 1, true)),
        ("Unigram", base(false, 1, 1, false)),
        ("Unigram / lemma", base(false, 1, 1, true)),
        ("Bigram", base(false, 2, 2, false)),
        ("Bigram / lemma", base(false, 2, 2, true)),
        ("Trigram", base(false, 3, 3, false)),
        ("Trigram / lemma", base(false, 3, 3, true)),
        ("N-gram (1,2,3)", base(false, 1, 3, false)),
        ("N-gram (1,2,3) / lemma", base(false, 1, 3, true)),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub feature: String,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn train_one(
    train_docs: &[(CleanPost, Subcategory)],
    features: &FeatureConfig,
    config: &RunConfig,
) -> Result<MnbModel, CliError> {
    let docs: Vec<CleanPost> = train_docs.iter().map(|(d, _)| d.clone()).collect();
    let vocab = fit_vocabulary(&docs, features)?;
    let vectors: Vec<_> = train_docs
        .iter()
        .map(|(d, sub)| (vectorize(d, &vocab, features), *sub))
        .collect();
    Ok(landuse::classifier::train_mnb(
        &vectors,
        config.classifier.alpha,
        vocab,
        features.clone(),
        config.classifier.threshold,
    )?)
}

/// Parent-level (or subcategory-level) evaluation of a model on held-out
/// documents. NonClassified appears as a prediction column; it stays out
/// of the macro averages unless `include_non_classified` is set.
fn evaluate(
    model: &MnbModel,
    test_docs: &[(CleanPost, Subcategory)],
    by_subcategory: bool,
    include_non_classified: bool,
) -> Result<MetricsReport, CliError> {
    let non = ParentClass::NonClassified.name().to_string();
    let mut classes: Vec<String> = if by_subcategory {
        Subcategory::ALL.iter().map(|s| s.name().to_string()).collect()
    } else {
        ParentClass::REPORTED.iter().map(|p| p.name().to_string()).collect()
    };
    classes.push(non.clone());

    let pairs: Vec<(String, String)> = test_docs
        .iter()
        .map(|(doc, sub)| {
            let result = predict(model, doc);
            let truth = if by_subcategory {
                sub.name().to_string()
            } else {
                sub.parent().name().to_string()
            };
            let predicted = if by_subcategory {
                result
                    .sub_label
                    .map(|s| s.name().to_string())
                    .unwrap_or_else(|| non.clone())
            } else {
                result.label.parent().name().to_string()
            };
            (truth, predicted)
        })
        .collect();

    let cm = confusion(&classes, &pairs)?;
    let excluded = if include_non_classified { vec![] } else { vec![non] };
    Ok(metrics_excluding(&cm, &excluded)?)
}

struct TrainingData {
    train: Vec<(CleanPost, Subcategory)>,
    test: Vec<(CleanPost, Subcategory)>,
    /// Unlabeled corpus posts, preprocessed: the non-location side of the
    /// PoS prefilter.
    chatter: Vec<CleanPost>,
}

fn prepare_training(config: &RunConfig) -> Result<TrainingData, CliError> {
    let resources = load_resources(config)?;
    let load = load_posts(&config.paths.corpus)?;
    for warning in &load.warnings {
        eprintln!("warning: {}: {warning}", config.paths.corpus.display());
    }
    let corpus = dedupe_and_filter(load.posts);
    let labels = load_labels(&config.paths.labels)?;
    let (labeled, unlabeled) = label_posts(corpus, &labels)?;
    if labeled.is_empty() {
        return Err(CliError::config(
            "corpus has no labeled posts; nothing to train on".to_string(),
        ));
    }

    let seed = config
        .split
        .seed
        .ok_or_else(|| CliError::config("split.seed is required (set it explicitly)".to_string()))?;
    let (train, test) = split_corpus(labeled, config.split.test_fraction, seed)?;

    let clean_pair = |items: Vec<LabeledPost>| -> Vec<(CleanPost, Subcategory)> {
        items
            .iter()
            .map(|lp| (preprocess(&lp.post, &resources), lp.label.sub().unwrap()))
            .collect()
    };
    Ok(TrainingData {
        train: clean_pair(train),
        test: clean_pair(test),
        chatter: unlabeled.iter().map(|p| preprocess(p, &resources)).collect(),
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TrainOptions {
    /// Evaluate all ten feature combinations, not just the configured one.
    pub sweep: bool,
    /// Report at subcategory level instead of collapsing to parents.
    pub by_subcategory: bool,
    /// Let the abstention label into the macro averages.
    pub include_non_classified: bool,
}

pub fn cmd_train(config: &RunConfig, options: TrainOptions, quiet: bool) -> Result<(), CliError> {
    let TrainingData {
        train: train_docs,
        test: test_docs,
        chatter,
    } = prepare_training(config)?;

    if options.sweep {
        let mut rows = Vec::new();
        for (name, features) in sweep_rows() {
            let mut features = features;
            features.min_df = config.features.min_df;
            let model = train_one(&train_docs, &features, config)?;
            let report = evaluate(
                &model,
                &test_docs,
                options.by_subcategory,
                options.include_non_classified,
            )?;
            rows.push(SweepRow {
                feature: name.to_string(),
                accuracy: report.accuracy,
                precision: report.macro_precision,
                recall: report.macro_recall,
                f1: report.macro_f1,
            });
        }
        let json = serde_json::to_string_pretty(&rows)
            .map_err(|e| CliError::config(e.to_string()))?;
        write_file(&config.stage_path("sweep.json"), &(json + "\n"))?;

        let mut table = format!(
            "{:<24}  {:>8}  {:>9}  {:>6}  {:>8}\n",
            "Feature", "Accuracy", "Precision", "Recall", "F1-score"
        );
        for row in &rows {
            table.push_str(&format!(
                "{:<24}  {:>8.3}  {:>9.3}  {:>6.3}  {:>8.3}\n",
                row.feature, row.accuracy, row.precision, row.recall, row.f1
            ));
        }
        write_file(&config.stage_path("sweep.txt"), &table)?;
        if !quiet {
            print!("{table}");
        }
    }

    let model = train_one(&train_docs, &config.features, config)?;
    if chatter.is_empty() {
        return Err(CliError::config(
            "corpus has no unlabeled posts to fit the location prefilter".to_string(),
        ));
    }
    let location_docs: Vec<CleanPost> = train_docs.iter().map(|(d, _)| d.clone()).collect();
    let filter = fit_pos_filter(
        &location_docs,
        &chatter,
        config.classifier.top_i,
        config.classifier.pos_ngram_min,
        config.classifier.pos_ngram_max,
    )?;
    if let Some(parent) = config.paths.model.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::input(format!("{}: {e}", parent.display())))?;
        }
    }
    save_model(&model, &filter, &config.paths.model)?;

    let report = evaluate(
        &model,
        &test_docs,
        options.by_subcategory,
        options.include_non_classified,
    )?;
    let json =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::config(e.to_string()))?;
    write_file(&config.stage_path("metrics.json"), &(json + "\n"))?;
    write_file(&config.stage_path("metrics.txt"), &report.to_table())?;

    if !quiet {
        println!(
            "train: {} train / {} test, accuracy {:.3}, macro-F1 {:.3}",
            train_docs.len(),
            test_docs.len(),
            report.accuracy,
            report.macro_f1
        );
        print!("{}", report.to_table());
        println!("model written to {}", config.paths.model.display());
    }
    Ok(())
}

fn classify_rows(
    model: &MnbModel,
    filter: &PosSequenceFilter,
    rows: &[AssignedRow],
) -> Vec<LabeledRow> {
    rows.iter()
        .map(|row| {
            let result = classify_pipeline(model, filter, &row.post);
            LabeledRow {
                id: row.post.id.clone(),
                label: result.label.parent().name().to_string(),
                sub_label: result.sub_label.map(|s| s.name().to_string()),
                confidence: result.confidence,
                lat: row.post.point.lat,
                lon: row.post.point.lon,
                block_id: row.block_id.clone(),
            }
        })
        .collect()
}

fn label_counts(rows: &[LabeledRow]) -> String {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for row in rows {
        *counts.entry(row.label.as_str()).or_insert(0) += 1;
    }
    let mut parts = Vec::new();
    for parent in ParentClass::ALL {
        if let Some(n) = counts.get(parent.name()) {
            parts.push(format!("{} {n}", parent.name()));
        }
    }
    format!("{} ({} total)", parts.join(", "), rows.len())
}

pub fn cmd_classify(config: &RunConfig, quiet: bool) -> Result<(), CliError> {
    let (model, filter) = load_model(&config.paths.model)?;
    if model.config != config.features {
        return Err(CliError::config(format!(
            "model feature configuration {:?} does not match the run configuration {:?}",
            model.config, config.features
        )));
    }
    let rows: Vec<AssignedRow> = read_jsonl(&config.stage_path("geofiltered.jsonl"))?;
    let labeled = classify_rows(&model, &filter, &rows);
    write_jsonl(&config.stage_path("labeled.jsonl"), &labeled)?;
    if !quiet {
        println!("classify: {}", label_counts(&labeled));
    }
    Ok(())
}

#[derive(Serialize)]
struct GjFeature {
    #[serde(rename = "type")]
    kind: &'static str,
    properties: serde_json::Map<String, serde_json::Value>,
    geometry: serde_json::Value,
}

fn close_ring(ring: &[landuse::GeoPoint]) -> Vec<[f64; 2]> {
    let mut out: Vec<[f64; 2]> = ring.iter().map(|p| [p.lon, p.lat]).collect();
    if let Some(first) = out.first().copied() {
        out.push(first);
    }
    out
}

fn polygon_geometry(polygon: &landuse::Polygon) -> serde_json::Value {
    let mut rings = vec![close_ring(&polygon.exterior)];
    for hole in &polygon.holes {
        rings.push(close_ring(hole));
    }
    serde_json::json!({"type": "Polygon", "coordinates": rings})
}

/// Majority parent label among a block's posts; ties abstain.
pub fn majority_label(labels: &[&str]) -> Option<String> {
    if labels.is_empty() {
        return None;
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for label in labels {
        *counts.entry(label).or_insert(0) += 1;
    }
    let best = *counts.values().max().unwrap();
    let winners: Vec<&str> = ParentClass::ALL
        .iter()
        .map(|p| p.name())
        .filter(|name| counts.get(name) == Some(&best))
        .collect();
    if winners.len() == 1 {
        Some(winners[0].to_string())
    } else {
        Some(ParentClass::NonClassified.name().to_string())
    }
}

pub fn cmd_export_geojson(config: &RunConfig, quiet: bool) -> Result<(), CliError> {
    let map = load_geojson(&config.paths.geojson)?;
    let labeled: Vec<LabeledRow> = read_jsonl(&config.stage_path("labeled.jsonl"))?;

    let mut features = Vec::new();
    for row in &labeled {
        let mut properties = serde_json::Map::new();
        properties.insert("id".to_string(), row.id.clone().into());
        properties.insert("label".to_string(), row.label.clone().into());
        if let Some(sub) = &row.sub_label {
            properties.insert("sub_label".to_string(), sub.clone().into());
        }
        properties.insert(
            "confidence".to_string(),
            serde_json::to_value(row.confidence).unwrap_or(serde_json::Value::Null),
        );
        properties.insert("block_id".to_string(), row.block_id.clone().into());
        features.push(GjFeature {
            kind: "Feature",
            properties,
            geometry: serde_json::json!({"type": "Point", "coordinates": [row.lon, row.lat]}),
        });
    }

    for block in &map.blocks {
        let block_labels: Vec<&str> = labeled
            .iter()
            .filter(|r| r.block_id == block.block_id)
            .map(|r| r.label.as_str())
            .collect();
        let mut properties = serde_json::Map::new();
        properties.insert("block_id".to_string(), block.block_id.clone().into());
        if let Some(cadastre) = &block.cadastre_label {
            properties.insert(
                "cadastre_label".to_string(),
                cadastre.parent().name().into(),
            );
        }
        if let Some(majority) = majority_label(&block_labels) {
            properties.insert("majority_label".to_string(), majority.into());
        }
        properties.insert("post_count".to_string(), block_labels.len().into());
        features.push(GjFeature {
            kind: "Feature",
            properties,
            geometry: polygon_geometry(&block.polygon),
        });
    }

    let collection = serde_json::json!({
        "type": "FeatureCollection",
        "features": features,
    });
    let out = config.stage_path("map.geojson");
    let json = serde_json::to_string_pretty(&collection)
        .map_err(|e| CliError::input(e.to_string()))?;
    write_file(&out, &(json + "\n"))?;
    if !quiet {
        println!(
            "export-geojson: {} points, {} blocks -> {}",
            labeled.len(),
            map.blocks.len(),
            out.display()
        );
    }
    Ok(())
}

pub fn cmd_run(config: &RunConfig, options: TrainOptions, quiet: bool) -> Result<(), CliError> {
    cmd_ingest(config, quiet)?;
    cmd_preprocess(config, quiet)?;
    cmd_geofilter(config, quiet)?;
    cmd_train(config, options, quiet)?;
    cmd_classify(config, quiet)?;
    cmd_export_geojson(config, quiet)?;
    Ok(())
}
