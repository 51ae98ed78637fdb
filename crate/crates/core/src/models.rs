//! Loading any of the three model files behind one interface.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read};
use std::path::Path;

use rayon::prelude::*;

use crate::dataset_io::LanguageLabel;
use crate::error::{Error, Result};
use crate::freq_classifier::{self, DistanceMetric, FreqModel, FREQ_MAGIC};
use crate::textcat::{self, TextCatModel, TEXTCAT_MAGIC};
use crate::tfidf_mlp::{self, MlpClassifier, MLP_MAGIC};

#[derive(Clone, Debug)]
pub enum Model {
    Freq(FreqModel),
    TextCat(TextCatModel),
    Mlp(MlpClassifier),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Freq(_) => "freq",
            Model::TextCat(_) => "textcat",
            Model::Mlp(_) => "mlp",
        }
    }

    /// Labels the model can output, sorted.
    pub fn labels(&self) -> Vec<LanguageLabel> {
        let mut labels: Vec<LanguageLabel> = match self {
            Model::Freq(m) => m.labels().cloned().collect(),
            Model::TextCat(m) => m.labels().cloned().collect(),
            Model::Mlp(m) => m.labels.clone(),
        };
        labels.sort();
        labels
    }

    /// `metric` overrides the frequency model's stored metric; other model
    /// kinds ignore it.
    pub fn predict(&self, text: &str, metric: Option<DistanceMetric>) -> Result<LanguageLabel> {
        match self {
            Model::Freq(m) => freq_classifier::predict(m, text, metric.unwrap_or(m.metric)),
            Model::TextCat(m) => textcat::predict_textcat(m, text),
            Model::Mlp(m) => Ok(m.predict(text)),
        }
    }

    /// Parallel prediction; output order matches input order.
    pub fn predict_batch<S: AsRef<str> + Sync>(
        &self,
        texts: &[S],
        metric: Option<DistanceMetric>,
    ) -> Result<Vec<LanguageLabel>> {
        texts
            .par_iter()
            .map(|t| self.predict(t.as_ref(), metric))
            .collect()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let out = BufWriter::new(file);
        match self {
            Model::Freq(m) => freq_classifier::write_freq_model(m, out),
            Model::TextCat(m) => textcat::write_textcat_model(m, out),
            Model::Mlp(m) => tfidf_mlp::write_mlp_model(m, out),
        }
    }

    /// Detects the model kind from the header line.
    pub fn load(path: impl AsRef<Path>) -> Result<Model> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = BufReader::new(file);
        let head = reader.fill_buf().map_err(|e| Error::io(path, e))?;
        let model = if head.starts_with(FREQ_MAGIC.as_bytes()) {
            Model::Freq(freq_classifier::read_freq_model(reader)?)
        } else if head.starts_with(TEXTCAT_MAGIC.as_bytes()) {
            Model::TextCat(textcat::read_textcat_model(reader)?)
        } else if head.starts_with(MLP_MAGIC.as_bytes()) {
            Model::Mlp(tfidf_mlp::read_mlp_model(reader.by_ref())?)
        } else {
            return Err(Error::model(format!(
                "{}: unrecognized model header",
                path.display()
            )));
        };
        Ok(model)
    }
}
