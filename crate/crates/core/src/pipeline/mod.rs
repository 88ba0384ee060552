//! The risk pipeline `Λ → X → Y → Λ̂`: a Markov risk source, an encoder,
//! a mapper and a decoder, each stage a [`Channel`].

mod aggregate;
mod audit;
mod decoder;
mod simulate;
mod source;

use serde::{Deserialize, Serialize};

pub use aggregate::aggregate_classes;
pub use audit::{dpi_audit, DpiReport};
pub use decoder::{
    map_decoder_from, pricing_errors, ClassError, ErrorMethod, ErrorReport, MapDecoder,
};
pub use simulate::{simulate, TrajectoryBatch};
pub use source::{stationary_distribution, MarkovRiskSource, Stationary};

use crate::prob::{joint_from, Alphabet, Channel, FiniteDistribution, JointDistribution};
use crate::{Error, Result};

/// Source, encoder, mapper and decoder with chained alphabets.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskPipeline {
    source: MarkovRiskSource,
    encoder: Channel,
    mapper: Channel,
    decoder: Channel,
}

impl RiskPipeline {
    pub fn new(
        source: MarkovRiskSource,
        encoder: Channel,
        mapper: Channel,
        decoder: Channel,
    ) -> Result<Self> {
        source.levels().ensure_same(encoder.input(), "levels vs encoder input")?;
        encoder.output().ensure_same(mapper.input(), "encoder output vs mapper input")?;
        mapper.output().ensure_same(decoder.input(), "mapper output vs decoder input")?;
        decoder.output().ensure_same(source.levels(), "decoder output vs levels")?;
        Ok(Self {
            source,
            encoder,
            mapper,
            decoder,
        })
    }

    /// Pipeline whose decoder is MAP for the stationary source.
    pub fn with_map_decoder(source: MarkovRiskSource, encoder: Channel, mapper: Channel) -> Result<Self> {
        source.levels().ensure_same(encoder.input(), "levels vs encoder input")?;
        let pi = stationary_distribution(&source)?.law;
        let y_lambda = joint_from(&pi, &encoder.compose(&mapper)?)?.transpose();
        let decoder = map_decoder_from(&y_lambda).channel;
        Self::new(source, encoder, mapper, decoder)
    }

    pub fn source(&self) -> &MarkovRiskSource {
        &self.source
    }

    pub fn encoder(&self) -> &Channel {
        &self.encoder
    }

    pub fn mapper(&self) -> &Channel {
        &self.mapper
    }

    pub fn decoder(&self) -> &Channel {
        &self.decoder
    }

    pub fn levels(&self) -> &Alphabet {
        self.source.levels()
    }

    pub fn x_alphabet(&self) -> &Alphabet {
        self.encoder.output()
    }

    pub fn y_alphabet(&self) -> &Alphabet {
        self.mapper.output()
    }

    pub fn with_mapper(&self, mapper: Channel) -> Result<Self> {
        Self::new(self.source.clone(), self.encoder.clone(), mapper, self.decoder.clone())
    }

    pub fn with_decoder(&self, decoder: Channel) -> Result<Self> {
        Self::new(self.source.clone(), self.encoder.clone(), self.mapper.clone(), decoder)
    }

    pub fn stage_laws(&self) -> Result<StageLaws> {
        exact_stage_laws(self)
    }

    pub fn from_config(config: PipelineConfig) -> Result<Self> {
        let levels = Alphabet::new(config.levels)?;
        let xs = match config.x_labels {
            Some(l) => Alphabet::new(l)?,
            None => Alphabet::indexed("x", config.encoder.first().map_or(0, Vec::len))?,
        };
        let ys = match config.y_labels {
            Some(l) => Alphabet::new(l)?,
            None => Alphabet::indexed("y", config.mapper.first().map_or(0, Vec::len))?,
        };
        let transition = Channel::new(levels.clone(), levels.clone(), config.transition)?;
        let initial = FiniteDistribution::new(levels.clone(), config.initial)?;
        let source = MarkovRiskSource::new(transition, initial)?;
        let encoder = Channel::new(levels.clone(), xs.clone(), config.encoder)?;
        let mapper = Channel::new(xs, ys.clone(), config.mapper)?;
        match config.decoder {
            DecoderSpec::Rule(rule) if rule == "map" => Self::with_map_decoder(source, encoder, mapper),
            DecoderSpec::Rule(rule) => Err(Error::InvalidParameter(format!(
                "unknown decoder rule `{rule}` (expected \"map\" or a matrix)"
            ))),
            DecoderSpec::Matrix(rows) => {
                let decoder = Channel::new(ys, levels, rows)?;
                Self::new(source, encoder, mapper, decoder)
            }
        }
    }

    pub fn to_config(&self) -> PipelineConfig {
        PipelineConfig {
            levels: self.levels().labels().to_vec(),
            transition: self.source.transition().rows().to_vec(),
            initial: self.source.initial().probs().to_vec(),
            encoder: self.encoder.rows().to_vec(),
            mapper: self.mapper.rows().to_vec(),
            decoder: DecoderSpec::Matrix(self.decoder.rows().to_vec()),
            x_labels: Some(self.x_alphabet().labels().to_vec()),
            y_labels: Some(self.y_alphabet().labels().to_vec()),
        }
    }
}

/// Pipeline config file.
///
/// `x_labels` / `y_labels` are optional and default to `x0, x1, ..` and `y0, y1, ..`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub levels: Vec<String>,
    pub transition: Vec<Vec<f64>>,
    pub initial: Vec<f64>,
    pub encoder: Vec<Vec<f64>>,
    pub mapper: Vec<Vec<f64>>,
    pub decoder: DecoderSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DecoderSpec {
    /// Only `"map"` is recognized.
    Rule(String),
    Matrix(Vec<Vec<f64>>),
}

/// Exact stage-wise laws under the stationary source.
#[derive(Debug, Clone, PartialEq)]
pub struct StageLaws {
    pub stationary: Stationary,
    pub lambda_x: JointDistribution,
    pub x_y: JointDistribution,
    pub y_lambdahat: JointDistribution,
    pub lambda_lambdahat: JointDistribution,
}

pub fn exact_stage_laws(p: &RiskPipeline) -> Result<StageLaws> {
    let stationary = stationary_distribution(&p.source)?;
    let pi = &stationary.law;
    let lambda_x = joint_from(pi, &p.encoder)?;
    let x_y = joint_from(&lambda_x.col_marginal(), &p.mapper)?;
    let y_lambdahat = joint_from(&x_y.col_marginal(), &p.decoder)?;
    let end_to_end = p.encoder.compose(&p.mapper)?.compose(&p.decoder)?;
    let lambda_lambdahat = joint_from(pi, &end_to_end)?;
    Ok(StageLaws {
        stationary,
        lambda_x,
        x_y,
        y_lambdahat,
        lambda_lambdahat,
    })
}
