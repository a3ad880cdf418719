use thiserror::Error;

use crate::cut::CutError;
use crate::graph::GraphError;
use crate::inequality::IneqError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ineq(#[from] IneqError),
    #[error(transparent)]
    Cut(#[from] CutError),
}
