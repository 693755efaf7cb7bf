//! Versioned JSON model files shared by every trained predictor.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::baselines::{LinearKind, LinearModel};
use crate::dprr::{DprrModel, ModelKind};
use crate::error::{Error, Result};
use crate::features::{Dataset, Standardizer};

pub const MODEL_FORMAT: &str = "reciprocity-delay/model/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "model", rename_all = "snake_case")]
pub enum SavedModel {
    Dprr(DprrModel),
    Pd(DprrModel),
    Ridge(LinearModel),
    Lasso(LinearModel),
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    format: String,
    #[serde(flatten)]
    model: SavedModel,
}

impl SavedModel {
    pub fn kind_name(&self) -> &'static str {
        match self {
            SavedModel::Dprr(_) => "dprr",
            SavedModel::Pd(_) => "pd",
            SavedModel::Ridge(_) => "ridge",
            SavedModel::Lasso(_) => "lasso",
        }
    }

    pub fn standardizer(&self) -> Option<&Standardizer> {
        match self {
            SavedModel::Dprr(m) | SavedModel::Pd(m) => m.standardizer.as_ref(),
            SavedModel::Ridge(m) | SavedModel::Lasso(m) => m.standardizer.as_ref(),
        }
    }

    pub fn fill_value(&self) -> f64 {
        match self {
            SavedModel::Dprr(m) | SavedModel::Pd(m) => m.fill_value,
            SavedModel::Ridge(m) | SavedModel::Lasso(m) => m.fill_value,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SavedModel::Dprr(m) | SavedModel::Pd(m) => m.d,
            SavedModel::Ridge(m) | SavedModel::Lasso(m) => m.w.len(),
        }
    }

    /// Predictions for rows already in the model's feature space.
    pub fn predict_dataset(&self, ds: &Dataset) -> Result<Vec<f64>> {
        match self {
            SavedModel::Dprr(m) | SavedModel::Pd(m) => m.predict_dataset(ds),
            SavedModel::Ridge(m) | SavedModel::Lasso(m) => m.predict_dataset(ds),
        }
    }
}

impl From<DprrModel> for SavedModel {
    fn from(m: DprrModel) -> Self {
        match m.kind {
            ModelKind::Dprr => SavedModel::Dprr(m),
            ModelKind::PersonalOnly => SavedModel::Pd(m),
        }
    }
}

impl From<LinearModel> for SavedModel {
    fn from(m: LinearModel) -> Self {
        match m.kind {
            LinearKind::Ridge => SavedModel::Ridge(m),
            LinearKind::Lasso => SavedModel::Lasso(m),
        }
    }
}

pub fn write_model<W: Write>(mut w: W, model: &SavedModel) -> Result<()> {
    let env = Envelope {
        format: MODEL_FORMAT.to_owned(),
        model: model.clone(),
    };
    serde_json::to_writer_pretty(&mut w, &env)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_model<R: Read>(r: R) -> Result<SavedModel> {
    let value: serde_json::Value = serde_json::from_reader(r)?;
    match value.get("format").and_then(|f| f.as_str()) {
        Some(MODEL_FORMAT) => {}
        Some(other) => return Err(Error::Format(format!("unsupported model format `{other}`"))),
        None => return Err(Error::Format("missing model format tag".into())),
    }
    let env: Envelope = serde_json::from_value(value)?;
    let model = env.model;
    let kind_ok = match &model {
        SavedModel::Dprr(m) => m.kind == ModelKind::Dprr,
        SavedModel::Pd(m) => m.kind == ModelKind::PersonalOnly,
        SavedModel::Ridge(m) => m.kind == LinearKind::Ridge,
        SavedModel::Lasso(m) => m.kind == LinearKind::Lasso,
    };
    if !kind_ok {
        return Err(Error::Format("model kind tag does not match its body".into()));
    }
    Ok(model)
}
