//! Core domain types and their tab-separated file formats.
//!
//! All types are immutable once constructed. Loaders accept any [`BufRead`]
//! so they can be driven from files, memory or fuzzers alike.
//!
//! [`BufRead`]: std::io::BufRead

mod annotation;
mod covariates;
mod dataset;
mod genotype;
mod phenotype;
mod snplist;

pub use annotation::{
    Chromosome, Gene, GeneAnnotation, GeneInteractionList, InteractionLoadReport, SnpMap, SnpRecord,
};
pub use covariates::Covariates;
pub use dataset::{align, align_snps, AlignReport, Dataset, SnpAlignReport};
pub use genotype::{load_genotypes, GenotypeLoadReport, GenotypeMatrix, MISSING_TOKEN};
pub use phenotype::{Phenotype, PhenotypeLoadReport};
pub use snplist::{load_snp_list, read_snp_list, write_snp_list};

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use crate::{Error, Result};

pub(crate) fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}
