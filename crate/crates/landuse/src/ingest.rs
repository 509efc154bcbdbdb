//! Loading, validation, deduplication and labeling of geo-tagged posts,
//! plus the stratified train/test split.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::geo::GeoPoint;

/// One geo-tagged message as captured from the source platform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawPost {
    pub id: String,
    pub user_id: String,
    pub text: String,
    /// ISO-8601 timestamp, kept as a string (never interpreted).
    pub timestamp: String,
    pub lat: f64,
    pub lon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lang: Option<String>,
}

impl RawPost {
    pub fn point(&self) -> GeoPoint {
        GeoPoint {
            lat: self.lat,
            lon: self.lon,
        }
    }
}

/// The five reported land-use categories plus the abstention label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ParentClass {
    Residential,
    Commercial,
    IndustrialOffices,
    InstitutionalGovernmental,
    UnbuiltLand,
    NonClassified,
}

impl ParentClass {
    pub const ALL: [ParentClass; 6] = [
        ParentClass::Residential,
        ParentClass::Commercial,
        ParentClass::IndustrialOffices,
        ParentClass::InstitutionalGovernmental,
        ParentClass::UnbuiltLand,
        ParentClass::NonClassified,
    ];

    /// The five real categories, without the abstention label.
    pub const REPORTED: [ParentClass; 5] = [
        ParentClass::Residential,
        ParentClass::Commercial,
        ParentClass::IndustrialOffices,
        ParentClass::InstitutionalGovernmental,
        ParentClass::UnbuiltLand,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParentClass::Residential => "Residential",
            ParentClass::Commercial => "Commercial",
            ParentClass::IndustrialOffices => "IndustrialOffices",
            ParentClass::InstitutionalGovernmental => "InstitutionalGovernmental",
            ParentClass::UnbuiltLand => "UnbuiltLand",
            ParentClass::NonClassified => "NonClassified",
        }
    }
}

impl fmt::Display for ParentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The nine training subcategories. Classification is trained at this
/// level and collapsed to [`ParentClass`] for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Subcategory {
    Commercial,
    CommercialRestaurant,
    CommercialService,
    Institutional,
    InstitutionalEducation,
    InstitutionalCultural,
    IndustrialOffices,
    Residential,
    UnbuiltLand,
}

impl Subcategory {
    pub const ALL: [Subcategory; 9] = [
        Subcategory::Commercial,
        Subcategory::CommercialRestaurant,
        Subcategory::CommercialService,
        Subcategory::Institutional,
        Subcategory::InstitutionalEducation,
        Subcategory::InstitutionalCultural,
        Subcategory::IndustrialOffices,
        Subcategory::Residential,
        Subcategory::UnbuiltLand,
    ];

    pub fn parent(self) -> ParentClass {
        match self {
            Subcategory::Commercial
            | Subcategory::CommercialRestaurant
            | Subcategory::CommercialService => ParentClass::Commercial,
            Subcategory::Institutional
            | Subcategory::InstitutionalEducation
            | Subcategory::InstitutionalCultural => ParentClass::InstitutionalGovernmental,
            Subcategory::IndustrialOffices => ParentClass::IndustrialOffices,
            Subcategory::Residential => ParentClass::Residential,
            Subcategory::UnbuiltLand => ParentClass::UnbuiltLand,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Subcategory::Commercial => "Commercial",
            Subcategory::CommercialRestaurant => "CommercialRestaurant",
            Subcategory::CommercialService => "CommercialService",
            Subcategory::Institutional => "Institutional",
            Subcategory::InstitutionalEducation => "InstitutionalEducation",
            Subcategory::InstitutionalCultural => "InstitutionalCultural",
            Subcategory::IndustrialOffices => "IndustrialOffices",
            Subcategory::Residential => "Residential",
            Subcategory::UnbuiltLand => "UnbuiltLand",
        }
    }
}

impl fmt::Display for Subcategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A land-use label: a parent category with an optional subcategory.
///
/// The subcategory, when present, always agrees with the parent, and
/// `NonClassified` never carries one; both are enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LandUseClass {
    parent: ParentClass,
    sub: Option<Subcategory>,
}

impl LandUseClass {
    pub fn from_parent(parent: ParentClass) -> Self {
        LandUseClass { parent, sub: None }
    }

    pub fn from_sub(sub: Subcategory) -> Self {
        LandUseClass {
            parent: sub.parent(),
            sub: Some(sub),
        }
    }

    pub fn new(parent: ParentClass, sub: Option<Subcategory>) -> Result<Self, IngestError> {
        match sub {
            Some(s) if s.parent() != parent => Err(IngestError::LabelMismatch {
                parent: parent.name(),
                sub: s.name(),
            }),
            Some(_) if parent == ParentClass::NonClassified => Err(IngestError::LabelMismatch {
                parent: parent.name(),
                sub: sub.unwrap().name(),
            }),
            _ => Ok(LandUseClass { parent, sub }),
        }
    }

    pub fn parent(&self) -> ParentClass {
        self.parent
    }

    pub fn sub(&self) -> Option<Subcategory> {
        self.sub
    }
}

/// A post paired with its ground-truth land-use label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPost {
    pub post: RawPost,
    pub label: LandUseClass,
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {message}")]
    MalformedLine {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("subcategory {sub} does not belong to parent {parent}")]
    LabelMismatch {
        parent: &'static str,
        sub: &'static str,
    },
    #[error("unknown class name {0:?}")]
    UnknownClass(String),
    #[error("training label for post {0} is missing a subcategory")]
    MissingSubcategory(String),
    #[error("training label for post {0} must not be NonClassified")]
    NonClassifiedTrainingLabel(String),
    #[error("test fraction must lie in (0, 1), got {0}")]
    InvalidFraction(f64),
    #[error("subcategory {sub} has only {count} member(s); at least 2 are required to split")]
    SubcategoryTooSmall { sub: &'static str, count: usize },
}

/// Non-fatal problems found while loading; the offending record is skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadWarning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LoadWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Result of [`load_posts`]: accepted records plus collected warnings.
#[derive(Debug, Clone, Default)]
pub struct PostLoad {
    pub posts: Vec<RawPost>,
    pub warnings: Vec<LoadWarning>,
}

/// Reads a JSONL file of posts, in file order.
///
/// A syntactically malformed line is a hard error naming the line.
/// Records with out-of-range coordinates, empty or duplicate ids are
/// skipped with a warning; texts longer than 280 code points are kept
/// but flagged.
pub fn load_posts(path: &Path) -> Result<PostLoad, IngestError> {
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = BufReader::new(file);

    let mut out = PostLoad::default();
    let mut seen_ids: HashSet<String> = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let post: RawPost =
            serde_json::from_str(&line).map_err(|e| IngestError::MalformedLine {
                path: path.to_path_buf(),
                line: line_no,
                message: e.to_string(),
            })?;

        if post.id.is_empty() {
            out.warnings.push(LoadWarning {
                line: line_no,
                message: "empty id, record skipped".to_string(),
            });
            continue;
        }
        if !(-90.0..=90.0).contains(&post.lat) || !(-180.0..=180.0).contains(&post.lon) {
            out.warnings.push(LoadWarning {
                line: line_no,
                message: format!(
                    "coordinates ({}, {}) out of range, record skipped",
                    post.lat, post.lon
                ),
            });
            continue;
        }
        if !seen_ids.insert(post.id.clone()) {
            out.warnings.push(LoadWarning {
                line: line_no,
                message: format!("duplicate id {:?}, record skipped", post.id),
            });
            continue;
        }
        if post.text.chars().count() > 280 {
            out.warnings.push(LoadWarning {
                line: line_no,
                message: format!("text of post {:?} exceeds 280 code points", post.id),
            });
        }
        out.posts.push(post);
    }
    Ok(out)
}

fn normalized_text(text: &str) -> String {
    text.trim().to_lowercase()
}

fn is_removable(text: &str) -> bool {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return true;
    }
    if trimmed.split_whitespace().count() == 1 {
        return true;
    }
    trimmed.chars().all(|c| !c.is_alphabetic())
}

/// Drops duplicates, blanks, single-word posts and posts made only of
/// digits, punctuation or whitespace. The first occurrence of a duplicate
/// text wins; relative order is preserved.
///
/// Duplicate detection compares trimmed, lowercased text so retweet-style
/// copies collapse.
pub fn dedupe_and_filter(posts: Vec<RawPost>) -> Vec<RawPost> {
    let mut seen: HashSet<String> = HashSet::new();
    posts
        .into_iter()
        .filter(|post| {
            if is_removable(&post.text) {
                return false;
            }
            seen.insert(normalized_text(&post.text))
        })
        .collect()
}

/// One row of the labels file: `{"id": ..., "parent": ..., "sub": ...}`.
#[derive(Debug, Deserialize, Serialize)]
struct LabelRecord {
    id: String,
    parent: ParentClass,
    #[serde(default)]
    sub: Option<Subcategory>,
}

/// Loads the labels file (JSONL with keys id, parent, sub) into an
/// id-to-label map.
pub fn load_labels(path: &Path) -> Result<HashMap<String, LandUseClass>, IngestError> {
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut labels = HashMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: LabelRecord =
            serde_json::from_str(&line).map_err(|e| IngestError::MalformedLine {
                path: path.to_path_buf(),
                line: idx + 1,
                message: e.to_string(),
            })?;
        let class = LandUseClass::new(record.parent, record.sub)?;
        labels.insert(record.id, class);
    }
    Ok(labels)
}

/// Splits posts into the labeled (training corpus) and unlabeled remainder.
///
/// Labeled posts must carry a real subcategory; unlabeled ones are returned
/// untouched so callers can use them as the non-location corpus.
pub fn label_posts(
    posts: Vec<RawPost>,
    labels: &HashMap<String, LandUseClass>,
) -> Result<(Vec<LabeledPost>, Vec<RawPost>), IngestError> {
    let mut labeled = Vec::new();
    let mut unlabeled = Vec::new();
    for post in posts {
        match labels.get(&post.id) {
            Some(class) => {
                if class.parent() == ParentClass::NonClassified {
                    return Err(IngestError::NonClassifiedTrainingLabel(post.id));
                }
                if class.sub().is_none() {
                    return Err(IngestError::MissingSubcategory(post.id));
                }
                labeled.push(LabeledPost {
                    post,
                    label: *class,
                });
            }
            None => unlabeled.push(post),
        }
    }
    Ok((labeled, unlabeled))
}

// Fisher-Yates over the ChaCha8 stream; kept inline so the split only
// depends on the cipher-defined sequence, not on a library shuffle.
fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}

/// Stratified train/test split, deterministic for a fixed seed.
///
/// Each subcategory contributes `round(test_fraction * count)` members to
/// the test side, clamped so that both sides keep at least one member of
/// every subcategory (that is why subcategories need two members). Both
/// halves retain the original data order.
pub fn split_corpus(
    data: Vec<LabeledPost>,
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<LabeledPost>, Vec<LabeledPost>), IngestError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(IngestError::InvalidFraction(test_fraction));
    }

    let mut by_sub: HashMap<Subcategory, Vec<usize>> = HashMap::new();
    for (i, item) in data.iter().enumerate() {
        let sub = item
            .label
            .sub()
            .ok_or_else(|| IngestError::MissingSubcategory(item.post.id.clone()))?;
        by_sub.entry(sub).or_default().push(i);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut test_indices: HashSet<usize> = HashSet::new();
    // Iterate subcategories in canonical order so the RNG stream is
    // consumed identically on every run.
    for sub in Subcategory::ALL {
        let Some(indices) = by_sub.get(&sub) else {
            continue;
        };
        if indices.len() < 2 {
            return Err(IngestError::SubcategoryTooSmall {
                sub: sub.name(),
                count: indices.len(),
            });
        }
        let n_test = ((test_fraction * indices.len() as f64).round() as usize)
            .clamp(1, indices.len() - 1);
        let mut pool = indices.clone();
        shuffle(&mut pool, &mut rng);
        test_indices.extend(pool.into_iter().take(n_test));
    }

    let mut train = Vec::new();
    let mut test = Vec::new();
    for (i, item) in data.into_iter().enumerate() {
        if test_indices.contains(&i) {
            test.push(item);
        } else {
            train.push(item);
        }
    }
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn post(id: &str, text: &str) -> RawPost {
        RawPost {
            id: id.to_string(),
            user_id: "u".to_string(),
            text: text.to_string(),
            timestamp: "2019-04-01T10:00:00Z".to_string(),
            lat: -16.39,
            lon: -71.53,
            lang: None,
        }
    }

    fn labeled(id: &str, sub: Subcategory) -> LabeledPost {
        LabeledPost {
            post: post(id, "texto de prueba"),
            label: LandUseClass::from_sub(sub),
        }
    }

    fn write_jsonl(lines: &[&str]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        for line in lines {
            writeln!(f, "{line}").unwrap();
        }
        f
    }

    #[test]
    fn load_empty_file_gives_empty_list() {
        let f = write_jsonl(&[]);
        let loaded = load_posts(f.path()).unwrap();
        assert!(loaded.posts.is_empty());
        assert!(loaded.warnings.is_empty());
    }

    #[test]
    fn load_parses_fields_verbatim() {
        let f = write_jsonl(&[
            r#"{"id":"1","user_id":"u","text":"hola","timestamp":"2019-04-01T10:00:00Z","lat":-16.39,"lon":-71.53}"#,
        ]);
        let loaded = load_posts(f.path()).unwrap();
        assert_eq!(loaded.posts.len(), 1);
        let p = &loaded.posts[0];
        assert_eq!(p.id, "1");
        assert_eq!(p.text, "hola");
        assert_eq!(p.lat, -16.39);
        assert_eq!(p.lon, -71.53);
        assert_eq!(p.lang, None);
    }

    #[test]
    fn malformed_line_error_names_the_line() {
        let f = write_jsonl(&[
            r#"{"id":"1","user_id":"u","text":"hola mundo","timestamp":"t","lat":0.0,"lon":0.0}"#,
            r#"{"id":"2", broken"#,
        ]);
        let err = load_posts(f.path()).unwrap_err();
        match err {
            IngestError::MalformedLine { line, .. } => assert_eq!(line, 2),
            other => panic!("expected MalformedLine, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_coordinates_warn_instead_of_failing() {
        let f = write_jsonl(&[
            r#"{"id":"1","user_id":"u","text":"hola mundo","timestamp":"t","lat":95.0,"lon":0.0}"#,
            r#"{"id":"2","user_id":"u","text":"otro texto","timestamp":"t","lat":0.0,"lon":0.0}"#,
        ]);
        let loaded = load_posts(f.path()).unwrap();
        assert_eq!(loaded.posts.len(), 1);
        assert_eq!(loaded.posts[0].id, "2");
        assert_eq!(loaded.warnings.len(), 1);
        assert_eq!(loaded.warnings[0].line, 1);
    }

    #[test]
    fn duplicate_ids_are_skipped_with_warning() {
        let f = write_jsonl(&[
            r#"{"id":"1","user_id":"u","text":"hola mundo","timestamp":"t","lat":0.0,"lon":0.0}"#,
            r#"{"id":"1","user_id":"u","text":"otra cosa distinta","timestamp":"t","lat":0.0,"lon":0.0}"#,
        ]);
        let loaded = load_posts(f.path()).unwrap();
        assert_eq!(loaded.posts.len(), 1);
        assert_eq!(loaded.warnings.len(), 1);
    }

    #[test]
    fn dedupe_removes_duplicate_texts_keeping_first() {
        let posts = vec![post("1", "hola mundo"), post("2", "hola mundo")];
        let kept = dedupe_and_filter(posts);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].id, "1");
    }

    #[test]
    fn dedupe_is_case_insensitive() {
        let posts = vec![post("1", "Hola Mundo"), post("2", "hola mundo ")];
        assert_eq!(dedupe_and_filter(posts).len(), 1);
    }

    #[test]
    fn only_numbers_is_removed() {
        let posts = vec![post("1", "12345")];
        assert!(dedupe_and_filter(posts).is_empty());
    }

    #[test]
    fn digits_and_punctuation_only_is_removed() {
        let posts = vec![post("1", "12 34 !?")];
        assert!(dedupe_and_filter(posts).is_empty());
    }

    #[test]
    fn all_four_rules_apply() {
        let posts = vec![
            post("1", "a b"),
            post("2", "c"),
            post("3", ""),
            post("4", "x y z"),
        ];
        let kept = dedupe_and_filter(posts);
        let ids: Vec<&str> = kept.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, vec!["1", "4"]);
    }

    #[test]
    fn dedupe_is_idempotent() {
        let posts = vec![
            post("1", "hola mundo"),
            post("2", "hola mundo"),
            post("3", "solo"),
            post("4", "otra frase"),
        ];
        let once = dedupe_and_filter(posts);
        let twice = dedupe_and_filter(once.clone());
        assert_eq!(once, twice);
    }

    #[test]
    fn subcategory_parents_match_the_taxonomy() {
        assert_eq!(Subcategory::Commercial.parent(), ParentClass::Commercial);
        assert_eq!(
            Subcategory::CommercialRestaurant.parent(),
            ParentClass::Commercial
        );
        assert_eq!(
            Subcategory::InstitutionalCultural.parent(),
            ParentClass::InstitutionalGovernmental
        );
        assert_eq!(
            Subcategory::IndustrialOffices.parent(),
            ParentClass::IndustrialOffices
        );
        assert_eq!(Subcategory::Residential.parent(), ParentClass::Residential);
        assert_eq!(Subcategory::UnbuiltLand.parent(), ParentClass::UnbuiltLand);
    }

    #[test]
    fn parent_counts_aggregate_subcategory_counts() {
        // Corpus distribution used as the reference taxonomy check.
        let sub_counts: Vec<(Subcategory, u32)> = vec![
            (Subcategory::Commercial, 1177),
            (Subcategory::CommercialRestaurant, 874),
            (Subcategory::CommercialService, 488),
            (Subcategory::Institutional, 497),
            (Subcategory::InstitutionalEducation, 371),
            (Subcategory::InstitutionalCultural, 344),
            (Subcategory::IndustrialOffices, 138),
            (Subcategory::Residential, 219),
            (Subcategory::UnbuiltLand, 431),
        ];
        let mut parents: HashMap<ParentClass, u32> = HashMap::new();
        for (sub, n) in &sub_counts {
            *parents.entry(sub.parent()).or_default() += n;
        }
        assert_eq!(parents[&ParentClass::Commercial], 2539);
        assert_eq!(parents[&ParentClass::InstitutionalGovernmental], 1212);
        assert_eq!(parents[&ParentClass::IndustrialOffices], 138);
        assert_eq!(parents[&ParentClass::Residential], 219);
        assert_eq!(parents[&ParentClass::UnbuiltLand], 431);
    }

    #[test]
    fn nonclassified_never_accepts_a_subcategory() {
        let err = LandUseClass::new(
            ParentClass::NonClassified,
            Some(Subcategory::Commercial),
        );
        assert!(err.is_err());
    }

    #[test]
    fn mismatched_sub_and_parent_is_rejected() {
        let err = LandUseClass::new(ParentClass::Residential, Some(Subcategory::Commercial));
        assert!(err.is_err());
    }

    #[test]
    fn split_is_deterministic_and_sized() {
        let data: Vec<LabeledPost> = (0..10)
            .map(|i| labeled(&format!("p{i}"), Subcategory::Commercial))
            .collect();
        let (train_a, test_a) = split_corpus(data.clone(), 0.2, 7).unwrap();
        let (train_b, test_b) = split_corpus(data, 0.2, 7).unwrap();
        assert_eq!(train_a.len(), 8);
        assert_eq!(test_a.len(), 2);
        assert_eq!(train_a, train_b);
        assert_eq!(test_a, test_b);
    }

    #[test]
    fn split_stratifies_per_subcategory() {
        let mut data = Vec::new();
        for i in 0..10 {
            data.push(labeled(&format!("a{i}"), Subcategory::Commercial));
        }
        for i in 0..5 {
            data.push(labeled(&format!("b{i}"), Subcategory::Residential));
        }
        let (_, test) = split_corpus(data, 0.2, 3).unwrap();
        let commercial = test
            .iter()
            .filter(|p| p.label.sub() == Some(Subcategory::Commercial))
            .count();
        let residential = test
            .iter()
            .filter(|p| p.label.sub() == Some(Subcategory::Residential))
            .count();
        assert_eq!(commercial, 2);
        assert_eq!(residential, 1);
    }

    #[test]
    fn split_of_two_member_class_at_half() {
        let data = vec![
            labeled("a", Subcategory::UnbuiltLand),
            labeled("b", Subcategory::UnbuiltLand),
        ];
        let (train, test) = split_corpus(data, 0.5, 1).unwrap();
        assert_eq!(train.len(), 1);
        assert_eq!(test.len(), 1);
    }

    #[test]
    fn split_rejects_singleton_subcategory() {
        let data = vec![
            labeled("a", Subcategory::Commercial),
            labeled("b", Subcategory::Commercial),
            labeled("c", Subcategory::Residential),
        ];
        let err = split_corpus(data, 0.5, 1).unwrap_err();
        match err {
            IngestError::SubcategoryTooSmall { sub, count } => {
                assert_eq!(sub, "Residential");
                assert_eq!(count, 1);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn label_posts_partitions_by_label_presence() {
        let mut labels = HashMap::new();
        labels.insert(
            "1".to_string(),
            LandUseClass::from_sub(Subcategory::Commercial),
        );
        let (labeled, unlabeled) =
            label_posts(vec![post("1", "a b"), post("2", "c d")], &labels).unwrap();
        assert_eq!(labeled.len(), 1);
        assert_eq!(unlabeled.len(), 1);
        assert_eq!(unlabeled[0].id, "2");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn dedupe_idempotent(texts in proptest::collection::vec("[a-c ]{0,8}", 0..20)) {
                let posts: Vec<RawPost> = texts
                    .iter()
                    .enumerate()
                    .map(|(i, t)| post(&format!("p{i}"), t))
                    .collect();
                let once = dedupe_and_filter(posts);
                let twice = dedupe_and_filter(once.clone());
                prop_assert_eq!(once, twice);
            }

            #[test]
            fn split_union_and_disjointness(
                sizes in proptest::collection::vec(2usize..12, 1..5),
                frac in 0.1f64..0.9,
                seed in any::<u64>(),
            ) {
                let mut data = Vec::new();
                for (s, n) in sizes.iter().enumerate() {
                    for i in 0..*n {
                        data.push(labeled(&format!("s{s}-{i}"), Subcategory::ALL[s]));
                    }
                }
                let (train, test) = split_corpus(data.clone(), frac, seed).unwrap();
                prop_assert_eq!(train.len() + test.len(), data.len());
                let train_ids: HashSet<&str> =
                    train.iter().map(|p| p.post.id.as_str()).collect();
                let test_ids: HashSet<&str> =
                    test.iter().map(|p| p.post.id.as_str()).collect();
                prop_assert!(train_ids.is_disjoint(&test_ids));
                let all: HashSet<&str> = data.iter().map(|p| p.post.id.as_str()).collect();
                let union: HashSet<&str> =
                    train_ids.union(&test_ids).copied().collect();
                prop_assert_eq!(union, all);
            }

            #[test]
            fn split_same_seed_reproducible(seed in any::<u64>()) {
                let data: Vec<LabeledPost> = (0..9)
                    .map(|i| labeled(&format!("p{i}"), Subcategory::Institutional))
                    .collect();
                let a = split_corpus(data.clone(), 0.3, seed).unwrap();
                let b = split_corpus(data, 0.3, seed).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }
}
