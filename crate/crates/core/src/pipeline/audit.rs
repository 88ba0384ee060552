use serde::Serialize;

use super::{exact_stage_laws, RiskPipeline};
use crate::prob::{entropy, mutual_information};
use crate::Result;

/// Every quantity of the two data-processing chains, in bits:
///
/// ```text
/// I(Λ,Λ̂) ≤ I(Y,Λ̂) ≤ min{H(Λ̂), H(Y)}
/// I(Λ,Λ̂) ≤ I(X,Y) ≤ min{H(X), H(Y)}
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DpiReport {
    pub i_lambda_lambdahat: f64,
    pub i_y_lambdahat: f64,
    pub i_x_y: f64,
    pub h_y: f64,
    pub h_x: f64,
    pub h_lambdahat: f64,
    /// `I(Y,Λ̂) − I(Λ,Λ̂)`
    pub slack_decoder: f64,
    /// `I(X,Y) − I(Λ,Λ̂)`
    pub slack_mapper: f64,
}

impl DpiReport {
    /// Decoder-side chain holds with slack `tol`.
    pub fn decoder_chain_holds(&self, tol: f64) -> bool {
        self.slack_decoder >= -tol
            && self.i_y_lambdahat <= self.h_lambdahat.min(self.h_y) + tol
    }

    /// Mapper-side chain holds with slack `tol`.
    pub fn mapper_chain_holds(&self, tol: f64) -> bool {
        self.slack_mapper >= -tol && self.i_x_y <= self.h_x.min(self.h_y) + tol
    }
}

pub fn dpi_audit(p: &RiskPipeline) -> Result<DpiReport> {
    let laws = exact_stage_laws(p)?;
    let i_lambda_lambdahat = mutual_information(&laws.lambda_lambdahat);
    let i_y_lambdahat = mutual_information(&laws.y_lambdahat);
    let i_x_y = mutual_information(&laws.x_y);
    let (x, y) = laws.x_y.marginals();
    Ok(DpiReport {
        i_lambda_lambdahat,
        i_y_lambdahat,
        i_x_y,
        h_y: entropy(&y),
        h_x: entropy(&x),
        h_lambdahat: entropy(&laws.y_lambdahat.col_marginal()),
        slack_decoder: i_y_lambdahat - i_lambda_lambdahat,
        slack_mapper: i_x_y - i_lambda_lambdahat,
    })
}
