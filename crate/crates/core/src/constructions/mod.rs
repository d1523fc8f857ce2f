//! Explicit families: de Jonquières decompositions, conic bundle links of large odd depth
//! on del Pezzo surfaces of degree 5 and 6, and the refined target report.

mod biglink;
mod dejonquieres;
mod report;

pub use biglink::{
    c5_big_link, c6_big_link, mirror_pair, pencil_basis, pencil_parameter, BigLink, Certification,
    ConicAudit, PencilFamily,
};
pub use dejonquieres::{
    conjugate_to_p2, dejonquieres_decompose, BasePointRecord, CoordinateCheck, DeJonquieresAudit,
    DeJonquieresMap, Decomposition,
};
pub use report::{refined_target_report, ClassCounts, IndexWitness, RefinedTargetReport, WitnessWord};

use crate::exactfield::FieldError;
use crate::freeprod::HomoError;
use crate::galois_orbits::OrbitError;
use crate::mfs_catalog::CatalogError;
use crate::rewriting::RewriteError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Homo(#[from] HomoError),
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("degree {0} is even")]
    EvenDegree(usize),
    #[error("base points not in general position: {0}")]
    NotGeneralPosition(String),
    #[error("two conics coincide: {0}")]
    ConicCoincidence(String),
    #[error("endpoint {0} is not P1xP1")]
    EndpointMismatch(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("constructed link fails validation: {0}")]
    InvalidLink(String),
}

impl ConstructionError {
    pub fn kind(&self) -> &'static str {
        match self {
            ConstructionError::Field(e) => e.kind(),
            ConstructionError::Orbit(e) => e.kind(),
            ConstructionError::Catalog(e) => e.kind(),
            ConstructionError::Rewrite(e) => e.kind(),
            ConstructionError::Homo(e) => e.kind(),
            ConstructionError::NotIrreducible => "NotIrreducible",
            ConstructionError::EvenDegree(_) => "EvenDegree",
            ConstructionError::NotGeneralPosition(_) => "NotGeneralPosition",
            ConstructionError::ConicCoincidence(_) => "ConicCoincidence",
            ConstructionError::EndpointMismatch(_) => "EndpointMismatch",
            ConstructionError::Unsupported(_) => "Unsupported",
            ConstructionError::InvalidLink(_) => "InvalidLink",
        }
    }
}

fn require_irreducible(f: &crate::exactfield::PolynomialOverField) -> Result<(), ConstructionError> {
    match crate::exactfield::irreducible_check(f)?.verdict {
        crate::exactfield::Verdict::Irreducible => Ok(()),
        _ => Err(ConstructionError::NotIrreducible),
    }
}
