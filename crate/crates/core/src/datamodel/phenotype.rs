use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::Serialize;

use super::genotype::MISSING_TOKEN;
use crate::numfmt::fmt_num;
use crate::tsv::{expect_arity, parse_f64, TsvLines};
use crate::{Error, Result};

/// One real-valued trait measurement per individual.
#[derive(Debug, Clone, PartialEq)]
pub struct Phenotype {
    individual_ids: Vec<String>,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PhenotypeLoadReport {
    /// Individuals whose value was `NA`; they are left out of the phenotype.
    pub missing_dropped: usize,
}

impl Phenotype {
    pub fn new(individual_ids: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if individual_ids.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: individual_ids.len(),
                actual: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite phenotype value {v}")));
        }
        let mut seen = HashSet::new();
        for id in &individual_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::invalid(format!("duplicate individual id {id:?}")));
            }
        }
        Ok(Phenotype {
            individual_ids,
            values,
        })
    }

    pub fn individual_ids(&self) -> &[String] {
        &self.individual_ids
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Parses `iid<TAB>value` lines; an `iid<TAB>...` header line is optional.
    pub fn read_tsv<R: BufRead>(reader: R) -> Result<(Phenotype, PhenotypeLoadReport)> {
        let mut lines = TsvLines::new(reader, "phenotype file");
        let mut ids = Vec::new();
        let mut values = Vec::new();
        let mut report = PhenotypeLoadReport::default();
        let mut first = true;
        while let Some((line, fields)) = lines.next_record()? {
            expect_arity(lines.what(), line, &fields, 2)?;
            if std::mem::take(&mut first) && fields[0] == "iid" && fields[1].parse::<f64>().is_err()
            {
                continue;
            }
            if fields[0].is_empty() {
                return Err(lines.error(line, "empty individual id"));
            }
            if fields[1] == MISSING_TOKEN {
                report.missing_dropped += 1;
                continue;
            }
            values.push(parse_f64(lines.what(), line, &fields[1])?);
            ids.push(fields[0].clone());
        }
        if values.is_empty() {
            return Err(Error::Empty("phenotype file has no observed values".into()));
        }
        if report.missing_dropped > 0 {
            log::warn!(
                "dropped {} individuals with missing phenotype",
                report.missing_dropped
            );
        }
        Ok((Phenotype::new(ids, values)?, report))
    }

    pub fn load(path: &Path) -> Result<(Phenotype, PhenotypeLoadReport)> {
        Self::read_tsv(super::open(path)?)
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "iid\tvalue")?;
        for (id, v) in self.individual_ids.iter().zip(&self.values) {
            writeln!(out, "{id}\t{}", fmt_num(*v))?;
        }
        Ok(())
    }
}
