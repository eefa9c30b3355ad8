use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::tsv::{nonempty_id, TsvLines};
use crate::Result;

/// Parses a list of SNP ids, one per line (optional `snp_id` header).
/// Extra columns are ignored; duplicate ids are rejected.
pub fn read_snp_list<R: BufRead>(reader: R) -> Result<Vec<String>> {
    let mut lines = TsvLines::new(reader, "SNP list");
    let mut ids = Vec::new();
    let mut seen = HashSet::new();
    let mut first = true;
    while let Some((line, fields)) = lines.next_record()? {
        if first && fields[0] == "snp_id" {
            first = false;
            continue;
        }
        first = false;
        let id = nonempty_id(lines.what(), line, &fields[0])?;
        if !seen.insert(id.clone()) {
            return Err(lines.error(line, format!("duplicate SNP id `{id}`")));
        }
        ids.push(id);
    }
    Ok(ids)
}

pub fn load_snp_list(path: &Path) -> Result<Vec<String>> {
    read_snp_list(super::open(path)?)
}

pub fn write_snp_list<W: Write, S: AsRef<str>>(ids: &[S], mut out: W) -> std::io::Result<()> {
    writeln!(out, "snp_id")?;
    for id in ids {
        writeln!(out, "{}", id.as_ref())?;
    }
    Ok(())
}
