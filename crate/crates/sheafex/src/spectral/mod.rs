//! Weighted adjacency operator, its spectrum, Cheeger constants and the
//! mixing lemmas.

mod cheeger;
mod eml;
mod jacobi;
mod operators;
mod spectrum;

use serde::Serialize;

pub use cheeger::{check_cheeger_inequality, cheeger, cheeger_with, CheegerInequalityReport, CheegerReport, DEFAULT_CHEEGER_CAP};
pub use eml::{eml_check, partite_eml_check, EmlReport, DEFAULT_EML_CAP};
pub use jacobi::{jacobi_eigen, SymmetricEigen, MAX_SWEEPS};
pub use operators::{adjacency_apply, adjacency_matrix, inner_product, laplacian_apply};
pub use spectrum::{spectrum, spectrum_of, symmetrized, SpectrumReportOf};

pub type SpectrumReport = SpectrumReportOf<f64>;

/// How vertex subsets are visited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SubsetMode {
    Exhaustive,
    /// Each vertex joins a subset independently with probability 1/2.
    Sampled { seed: u64, trials: usize },
}
