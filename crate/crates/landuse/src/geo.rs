//! Two-stage spatial filter: posts are kept when they fall inside the
//! study region, then assigned to the first city block that contains them.
//!
//! Geometry is planar over raw WGS84 degrees. At city scale the distortion
//! is far below the size of a block, so no projection is applied; this is
//! a documented limitation, not an oversight.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ingest::{LandUseClass, ParentClass, Subcategory};
use crate::textprep::CleanPost;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

/// A simple polygon: an exterior ring plus optional holes. Rings are
/// implicitly closed (first vertex is not repeated at the end).
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub exterior: Vec<GeoPoint>,
    pub holes: Vec<Vec<GeoPoint>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub block_id: String,
    pub polygon: Polygon,
    pub cadastre_label: Option<LandUseClass>,
}

/// The study region boundary and its blocks, in file order.
#[derive(Debug, Clone)]
pub struct BlockMap {
    pub region: Polygon,
    pub blocks: Vec<Block>,
}

#[derive(Debug, thiserror::Error)]
pub enum GeoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid GeoJSON: {0}")]
    Json(String),
    #[error("degenerate polygon ring with {0} vertices (need at least 3)")]
    DegeneratePolygon(usize),
    #[error("no region feature (expected one feature with property role=\"region\")")]
    NoRegionFeature,
    #[error("more than one region feature")]
    MultipleRegionFeatures,
    #[error("duplicate block_id {0:?}")]
    DuplicateBlockId(String),
    #[error("feature {context}: malformed geometry: {message}")]
    MalformedGeometry { context: String, message: String },
}

fn check_ring(ring: &[GeoPoint]) -> Result<(), GeoError> {
    if ring.len() < 3 {
        return Err(GeoError::DegeneratePolygon(ring.len()));
    }
    Ok(())
}

// Exact test for p lying on the segment a-b, treating degrees as planar x/y.
fn on_segment(p: GeoPoint, a: GeoPoint, b: GeoPoint) -> bool {
    let cross = (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon);
    if cross != 0.0 {
        return false;
    }
    p.lon >= a.lon.min(b.lon)
        && p.lon <= a.lon.max(b.lon)
        && p.lat >= a.lat.min(b.lat)
        && p.lat <= a.lat.max(b.lat)
}

fn on_ring_boundary(p: GeoPoint, ring: &[GeoPoint]) -> bool {
    let n = ring.len();
    (0..n).any(|i| on_segment(p, ring[i], ring[(i + 1) % n]))
}

// Even-odd ray cast along +lon. Boundary points must be handled before
// calling this; for off-boundary points the parity is exact.
fn ray_cast(p: GeoPoint, ring: &[GeoPoint]) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let a = ring[i];
        let b = ring[j];
        if (a.lat > p.lat) != (b.lat > p.lat) {
            let x = (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon;
            if p.lon < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Ray-casting containment with inclusive boundaries: points exactly on an
/// edge or vertex of any ring count as inside. Holes subtract interior.
pub fn point_in_polygon(p: GeoPoint, poly: &Polygon) -> Result<bool, GeoError> {
    check_ring(&poly.exterior)?;
    for hole in &poly.holes {
        check_ring(hole)?;
    }

    if on_ring_boundary(p, &poly.exterior) || poly.holes.iter().any(|h| on_ring_boundary(p, h)) {
        return Ok(true);
    }
    if !ray_cast(p, &poly.exterior) {
        return Ok(false);
    }
    Ok(!poly.holes.iter().any(|h| ray_cast(p, h)))
}

/// Keeps exactly the posts located inside the region, in input order.
pub fn filter_by_region(
    posts: Vec<CleanPost>,
    region: &Polygon,
) -> Result<Vec<CleanPost>, GeoError> {
    check_ring(&region.exterior)?;
    let mut kept = Vec::new();
    for post in posts {
        if point_in_polygon(post.point, region)? {
            kept.push(post);
        }
    }
    Ok(kept)
}

/// Pairs each post with the first block (in file order) that contains its
/// point. Posts that fall in no block — in the middle of a street — are
/// dropped.
pub fn assign_blocks(
    posts: Vec<CleanPost>,
    map: &BlockMap,
) -> Result<Vec<(CleanPost, String)>, GeoError> {
    let mut assigned = Vec::new();
    for post in posts {
        let mut hit = None;
        for block in &map.blocks {
            if point_in_polygon(post.point, &block.polygon)? {
                hit = Some(block.block_id.clone());
                break;
            }
        }
        if let Some(block_id) = hit {
            assigned.push((post, block_id));
        }
    }
    Ok(assigned)
}

#[derive(Deserialize)]
struct GjFeatureCollection {
    #[serde(rename = "type")]
    kind: String,
    features: Vec<GjFeature>,
}

#[derive(Deserialize)]
struct GjFeature {
    #[serde(default)]
    properties: serde_json::Map<String, serde_json::Value>,
    geometry: serde_json::Value,
}

fn parse_ring(value: &serde_json::Value, context: &str) -> Result<Vec<GeoPoint>, GeoError> {
    let raw = value
        .as_array()
        .ok_or_else(|| GeoError::MalformedGeometry {
            context: context.to_string(),
            message: "ring is not an array".to_string(),
        })?;
    let mut ring = Vec::with_capacity(raw.len());
    for pos in raw {
        let pair = pos.as_array().filter(|a| a.len() >= 2).ok_or_else(|| {
            GeoError::MalformedGeometry {
                context: context.to_string(),
                message: "position is not a [lon, lat] array".to_string(),
            }
        })?;
        let lon = pair[0].as_f64();
        let lat = pair[1].as_f64();
        match (lon, lat) {
            (Some(lon), Some(lat)) => ring.push(GeoPoint { lat, lon }),
            _ => {
                return Err(GeoError::MalformedGeometry {
                    context: context.to_string(),
                    message: "non-numeric coordinate".to_string(),
                })
            }
        }
    }
    // GeoJSON closes rings explicitly; we store them open.
    if ring.len() >= 2 && ring.first() == ring.last() {
        ring.pop();
    }
    check_ring(&ring)?;
    Ok(ring)
}

fn parse_polygon_rings(
    rings: &serde_json::Value,
    context: &str,
) -> Result<Polygon, GeoError> {
    let rings = rings
        .as_array()
        .ok_or_else(|| GeoError::MalformedGeometry {
            context: context.to_string(),
            message: "polygon coordinates are not an array of rings".to_string(),
        })?;
    if rings.is_empty() {
        return Err(GeoError::MalformedGeometry {
            context: context.to_string(),
            message: "polygon has no rings".to_string(),
        });
    }
    let exterior = parse_ring(&rings[0], context)?;
    let mut holes = Vec::new();
    for ring in &rings[1..] {
        holes.push(parse_ring(ring, context)?);
    }
    Ok(Polygon { exterior, holes })
}

/// Polygons of a feature: one for `Polygon`, one per member for
/// `MultiPolygon`.
fn parse_geometry(
    geometry: &serde_json::Value,
    context: &str,
) -> Result<Vec<Polygon>, GeoError> {
    let kind = geometry
        .get("type")
        .and_then(|t| t.as_str())
        .ok_or_else(|| GeoError::MalformedGeometry {
            context: context.to_string(),
            message: "geometry has no type".to_string(),
        })?;
    let coordinates = geometry
        .get("coordinates")
        .ok_or_else(|| GeoError::MalformedGeometry {
            context: context.to_string(),
            message: "geometry has no coordinates".to_string(),
        })?;
    match kind {
        "Polygon" => Ok(vec![parse_polygon_rings(coordinates, context)?]),
        "MultiPolygon" => {
            let members = coordinates.as_array().ok_or_else(|| {
                GeoError::MalformedGeometry {
                    context: context.to_string(),
                    message: "MultiPolygon coordinates are not an array".to_string(),
                }
            })?;
            members
                .iter()
                .map(|m| parse_polygon_rings(m, context))
                .collect()
        }
        other => Err(GeoError::MalformedGeometry {
            context: context.to_string(),
            message: format!("unsupported geometry type {other:?}"),
        }),
    }
}

fn parse_cadastre_label(value: &serde_json::Value) -> Option<LandUseClass> {
    let name = value.as_str()?;
    for parent in ParentClass::ALL {
        if parent.name() == name {
            return Some(LandUseClass::from_parent(parent));
        }
    }
    for sub in Subcategory::ALL {
        if sub.name() == name {
            return Some(LandUseClass::from_sub(sub));
        }
    }
    None
}

/// Loads a GeoJSON FeatureCollection holding one `role="region"` feature
/// and any number of `role="block"` features (properties `block_id` and
/// optional `cadastre_label`). MultiPolygon blocks are split into one
/// entry per member polygon, ids suffixed `#1`, `#2`, ...
pub fn load_geojson(path: &Path) -> Result<BlockMap, GeoError> {
    let text = fs::read_to_string(path).map_err(|source| GeoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let collection: GjFeatureCollection =
        serde_json::from_str(&text).map_err(|e| GeoError::Json(e.to_string()))?;
    if collection.kind != "FeatureCollection" {
        return Err(GeoError::Json(format!(
            "expected FeatureCollection, got {:?}",
            collection.kind
        )));
    }

    let mut region: Option<Polygon> = None;
    let mut blocks: Vec<Block> = Vec::new();
    let mut seen_ids: HashSet<String> = HashSet::new();

    for (idx, feature) in collection.features.iter().enumerate() {
        let role = feature
            .properties
            .get("role")
            .and_then(|r| r.as_str())
            .unwrap_or("");
        match role {
            "region" => {
                if region.is_some() {
                    return Err(GeoError::MultipleRegionFeatures);
                }
                let mut polys = parse_geometry(&feature.geometry, "region")?;
                if polys.len() != 1 {
                    return Err(GeoError::MalformedGeometry {
                        context: "region".to_string(),
                        message: "region must be a single Polygon".to_string(),
                    });
                }
                region = Some(polys.remove(0));
            }
            "block" => {
                let base_id = feature
                    .properties
                    .get("block_id")
                    .and_then(|v| v.as_str())
                    .ok_or_else(|| GeoError::MalformedGeometry {
                        context: format!("feature {idx}"),
                        message: "block feature without block_id".to_string(),
                    })?;
                let cadastre_label = feature
                    .properties
                    .get("cadastre_label")
                    .and_then(parse_cadastre_label);
                let polys = parse_geometry(&feature.geometry, base_id)?;
                let multi = polys.len() > 1;
                for (n, polygon) in polys.into_iter().enumerate() {
                    let block_id = if multi {
                        format!("{base_id}#{}", n + 1)
                    } else {
                        base_id.to_string()
                    };
                    if !seen_ids.insert(block_id.clone()) {
                        return Err(GeoError::DuplicateBlockId(block_id));
                    }
                    blocks.push(Block {
                        block_id,
                        polygon,
                        cadastre_label,
                    });
                }
            }
            other => {
                return Err(GeoError::Json(format!(
                    "feature {idx}: expected role \"region\" or \"block\", got {other:?}"
                )));
            }
        }
    }

    let region = region.ok_or(GeoError::NoRegionFeature)?;
    Ok(BlockMap { region, blocks })
}
