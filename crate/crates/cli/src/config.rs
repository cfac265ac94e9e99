use std::collections::BTreeMap;

use isoflow_core::numlin::Tolerances;

use crate::error::CliError;

/// One `[section]` of a configuration file before validation against the
/// catalog.
#[derive(Clone, Debug)]
pub struct ScenarioSpec {
    pub name: String,
    pub construction: String,
    pub tolerances: Tolerances,
    pub params: BTreeMap<String, toml::Value>,
}

const TOL_KEYS: [&str; 3] = ["rank_rel", "resid_abs", "angle"];

/// Parses a configuration: each table is a scenario named by its header.
/// `construction` selects the catalog entry (default: the header itself);
/// `rank_rel`, `resid_abs` and `angle` override tolerances; every other key
/// is a construction parameter. Sections keep their file order.
pub fn parse_config(text: &str) -> Result<Vec<ScenarioSpec>, CliError> {
    let doc: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
    if doc.is_empty() {
        return Err(CliError::Config("configuration defines no scenarios".into()));
    }
    let mut out = Vec::with_capacity(doc.len());
    for (name, body) in doc {
        let table = body
            .as_table()
            .ok_or_else(|| CliError::Config(format!("`{name}` must be a [section]")))?;
        let mut construction = name.clone();
        let mut tolerances = Tolerances::default();
        let mut params = BTreeMap::new();
        for (key, value) in table {
            if key == "construction" {
                construction = value
                    .as_str()
                    .ok_or_else(|| CliError::Config(format!("[{name}]: construction must be a string")))?
                    .to_string();
            } else if TOL_KEYS.contains(&key.as_str()) {
                let v = value
                    .as_float()
                    .ok_or_else(|| CliError::Config(format!("[{name}]: {key} must be a real number")))?;
                match key.as_str() {
                    "rank_rel" => tolerances.rank_rel = v,
                    "resid_abs" => tolerances.resid_abs = v,
                    _ => tolerances.angle = v,
                }
            } else {
                params.insert(key.clone(), value.clone());
            }
        }
        tolerances
            .validate()
            .map_err(|e| CliError::Config(format!("[{name}]: {e}")))?;
        out.push(ScenarioSpec {
            name,
            construction,
            tolerances,
            params,
        });
    }
    Ok(out)
}
