//! Named fixtures: the worked configurations, written as JSON files and
//! re-validated after emission.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use serde_json::Value;

use ortho_grassmann::grassmann::{FiniteUniverse, GraphKind};
use ortho_grassmann::subspace::Subspace;

use crate::campaigns::c6_operator_pair;

pub const FIXTURE_NAMES: &[&str] = &[
    "c4-adjacent-noncompatible",
    "c4-compatible-codim2",
    "c5-unique-partner",
    "c6-operator-pair",
    "johnson-6-3",
];

fn sp(ambient: usize, rows: &[&[&str]]) -> anyhow::Result<Subspace> {
    Subspace::parse(ambient, rows).map_err(|e| anyhow!(e.to_string()))
}

/// Writes the named fixture into `dir`, returning the created paths. Every
/// file is parsed back and validated before the function returns.
pub fn emit_fixture(name: &str, dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files: Vec<(String, Value)> = Vec::new();
    match name {
        "c4-adjacent-noncompatible" => {
            let x = sp(4, &[&["1", "0", "0", "0"], &["0", "1", "0", "0"]])?;
            let y = sp(4, &[&["1", "0", "0", "0"], &["0", "1", "1", "0"]])?;
            files.push(("X.json".into(), serde_json::to_value(&x)?));
            files.push(("Y.json".into(), serde_json::to_value(&y)?));
        }
        "c4-compatible-codim2" => {
            let x = Subspace::coordinate(4, &[0, 1]);
            let y = Subspace::coordinate(4, &[2, 3]);
            let z = Subspace::coordinate(4, &[0, 2]);
            files.push(("X.json".into(), serde_json::to_value(&x)?));
            files.push(("Y.json".into(), serde_json::to_value(&y)?));
            files.push(("Z.json".into(), serde_json::to_value(&z)?));
        }
        "c5-unique-partner" => {
            let x = sp(5, &[&["1", "0", "0", "0", "0"], &["0", "1", "0", "0", "0"]])?;
            let y = sp(5, &[&["1", "0", "0", "0", "0"], &["0", "1", "1", "0", "0"]])?;
            let z = Subspace::coordinate(5, &[0, 3]);
            files.push(("X.json".into(), serde_json::to_value(&x)?));
            files.push(("Y.json".into(), serde_json::to_value(&y)?));
            files.push(("Z.json".into(), serde_json::to_value(&z)?));
        }
        "c6-operator-pair" => {
            let (a, b) = c6_operator_pair()?;
            files.push(("A.json".into(), serde_json::to_value(&a)?));
            files.push(("B.json".into(), serde_json::to_value(&b)?));
        }
        "johnson-6-3" => {
            let u = FiniteUniverse::johnson(6, 3, GraphKind::Grassmann)
                .map_err(|e| anyhow!(e.to_string()))?;
            files.push(("universe.json".into(), serde_json::to_value(&u)?));
        }
        other => bail!(
            "unknown fixture `{other}`; available: {}",
            FIXTURE_NAMES.join(", ")
        ),
    }
    let mut paths = Vec::new();
    for (file, value) in files {
        let path = dir.join(format!("{name}-{file}"));
        fs::write(&path, serde_json::to_string_pretty(&value)?)?;
        // Regenerate-and-revalidate: the emitted file must load cleanly.
        validate_file(&path).with_context(|| format!("fixture {path:?} failed validation"))?;
        paths.push(path);
    }
    Ok(paths)
}

/// Parses a JSON file as one of the three documented shapes (subspace,
/// finite universe, operator) based on its keys, running the full invariant
/// validation of the matching type. Malformed JSON is reported with line
/// and column.
pub fn validate_file(path: &Path) -> anyhow::Result<String> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| anyhow!("malformed JSON at line {}, column {}: {e}", e.line(), e.column()))?;
    let object = value
        .as_object()
        .ok_or_else(|| anyhow!("expected a JSON object at the top level"))?;
    if object.contains_key("eigenvalues") {
        let op: ortho_grassmann::conjclass::SelfAdjointOperator =
            serde_json::from_value(value.clone())
                .map_err(|e| anyhow!("invalid operator: {e}"))?;
        Ok(format!(
            "valid operator on C^{} with {} eigenvalues",
            op.ambient_dim(),
            op.eigenvalues().len()
        ))
    } else if object.contains_key("vertices") {
        let u: FiniteUniverse = serde_json::from_value(value.clone())
            .map_err(|e| anyhow!("invalid universe: {e}"))?;
        Ok(format!(
            "valid universe with {} vertices and {} edges",
            u.len(),
            u.edge_count()
        ))
    } else if object.contains_key("basis") {
        let s: Subspace = serde_json::from_value(value.clone())
            .map_err(|e| anyhow!("invalid subspace: {e}"))?;
        Ok(format!(
            "valid {}-dimensional subspace of C^{}",
            s.dim(),
            s.ambient_dim()
        ))
    } else {
        bail!("unrecognised shape: expected keys `basis`, `vertices` or `eigenvalues`")
    }
}
