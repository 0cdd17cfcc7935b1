use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{OrderMode, PreorderModel};
use crate::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureMode {
    #[default]
    Auto,
    Strict,
}

/// On-disk model layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub worlds: Vec<String>,
    pub order: Vec<(String, String)>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub closure: ClosureMode,
}

impl ModelFile {
    pub fn into_model(self) -> Result<PreorderModel, Error> {
        let mode = match self.closure {
            ClosureMode::Auto => OrderMode::Close,
            ClosureMode::Strict => OrderMode::Strict,
        };
        PreorderModel::new(self.worlds, &self.order, &self.valuation, mode)
    }

    /// Full relation listed explicitly, so the file loads in strict mode.
    pub fn from_model(m: &PreorderModel) -> ModelFile {
        let name = |i: usize| m.name(i).to_string();
        ModelFile {
            worlds: m.names().to_vec(),
            order: m
                .pairs()
                .into_iter()
                .map(|(a, b)| (name(a), name(b)))
                .collect(),
            valuation: m
                .valuation()
                .iter()
                .map(|(a, s)| (a.clone(), s.iter().map(name).collect()))
                .collect(),
            closure: ClosureMode::Strict,
        }
    }
}

pub fn model_from_json(text: &str) -> Result<PreorderModel, Error> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))?;
    file.into_model()
}

pub fn model_to_json(m: &PreorderModel) -> String {
    serde_json::to_string_pretty(&ModelFile::from_model(m)).expect("model serializes")
}
