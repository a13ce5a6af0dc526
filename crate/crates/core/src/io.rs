//! FASTA-like text formats for genomes and read sets.
//!
//! Genome files hold exactly two records named `h0` and `h1`. Read files hold
//! one record per read, with an optional `hap=<0|1> start=<pos>` provenance
//! annotation in the header.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::genome::{CircularSequence, DiploidGenome, Read, ReadSet};

const LINE_WIDTH: usize = 80;

/// One `>name rest` record with its sequence lines joined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub name: String,
    pub description: String,
    pub seq: Vec<u8>,
}

pub fn read_records<R: BufRead>(input: R) -> Result<Vec<Record>> {
    let mut records: Vec<Record> = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            let (name, description) = match header.split_once(char::is_whitespace) {
                Some((n, d)) => (n.to_string(), d.trim().to_string()),
                None => (header.to_string(), String::new()),
            };
            records.push(Record {
                name,
                description,
                seq: Vec::new(),
            });
        } else {
            let rec = records.last_mut().ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: "sequence data before the first header".into(),
            })?;
            rec.seq
                .extend(line.trim().bytes().map(|b| b.to_ascii_uppercase()));
        }
    }
    Ok(records)
}

fn write_wrapped<W: Write>(out: &mut W, header: &str, seq: &[u8]) -> Result<()> {
    writeln!(out, ">{header}")?;
    for chunk in seq.chunks(LINE_WIDTH) {
        out.write_all(chunk)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads a single (first) sequence, e.g. a base haplotype for simulation.
pub fn read_sequence<R: BufRead>(input: R) -> Result<CircularSequence> {
    let rec = read_records(input)?
        .into_iter()
        .next()
        .ok_or(Error::EmptySequence)?;
    CircularSequence::new(rec.seq)
}

pub fn write_sequence<W: Write>(out: &mut W, name: &str, seq: &CircularSequence) -> Result<()> {
    write_wrapped(out, name, seq.as_bytes())
}

pub fn read_genome<R: BufRead>(input: R) -> Result<DiploidGenome> {
    let records = read_records(input)?;
    let find = |name: &str| {
        let mut hits = records.iter().filter(|r| r.name == name);
        match (hits.next(), hits.next()) {
            (Some(r), None) => Ok(r.seq.clone()),
            (None, _) => Err(Error::Parse {
                line: 0,
                message: format!("missing record `{name}`"),
            }),
            (Some(_), Some(_)) => Err(Error::Parse {
                line: 0,
                message: format!("duplicate record `{name}`"),
            }),
        }
    };
    if records.len() != 2 {
        return Err(Error::Parse {
            line: 0,
            message: format!(
                "expected exactly two records (h0, h1), found {}",
                records.len()
            ),
        });
    }
    DiploidGenome::new(
        CircularSequence::new(find("h0")?)?,
        CircularSequence::new(find("h1")?)?,
    )
}

pub fn write_genome<W: Write>(out: &mut W, genome: &DiploidGenome) -> Result<()> {
    write_wrapped(out, "h0", genome.hap(0).as_bytes())?;
    write_wrapped(out, "h1", genome.hap(1).as_bytes())
}

/// Writes haplotype-like sequences that need not have equal lengths.
pub fn write_haplotypes<W: Write>(out: &mut W, g0: &[u8], g1: &[u8]) -> Result<()> {
    write_wrapped(out, "g0", g0)?;
    write_wrapped(out, "g1", g1)
}

fn parse_provenance(description: &str, line: usize) -> Result<Option<(u8, usize)>> {
    let mut hap = None;
    let mut start = None;
    for field in description.split_whitespace() {
        let bad = |what: &str| Error::Parse {
            line,
            message: format!("bad {what} field `{field}`"),
        };
        if let Some(v) = field.strip_prefix("hap=") {
            match v {
                "0" => hap = Some(0u8),
                "1" => hap = Some(1u8),
                _ => return Err(bad("hap")),
            }
        } else if let Some(v) = field.strip_prefix("start=") {
            start = Some(v.parse::<usize>().map_err(|_| bad("start"))?);
        }
    }
    match (hap, start) {
        (Some(h), Some(s)) => Ok(Some((h, s))),
        (None, None) => Ok(None),
        _ => Err(Error::Parse {
            line,
            message: "provenance needs both hap= and start=".into(),
        }),
    }
}

pub fn read_reads<R: BufRead>(input: R) -> Result<ReadSet> {
    let records = read_records(input)?;
    let read_length = records.first().map(|r| r.seq.len()).unwrap_or(0);
    let mut reads = Vec::with_capacity(records.len());
    for (i, rec) in records.into_iter().enumerate() {
        let read = match parse_provenance(&rec.description, i + 1)? {
            Some((hap, start)) => Read::with_provenance(rec.seq, hap, start),
            None => Read::new(rec.seq),
        };
        reads.push(read);
    }
    ReadSet::new(reads, read_length)
}

pub fn write_reads<W: Write>(out: &mut W, rs: &ReadSet, keep_provenance: bool) -> Result<()> {
    for (i, r) in rs.iter().enumerate() {
        let header = match (keep_provenance, r.provenance) {
            (true, Some(p)) => format!("read{i} hap={} start={}", p.hap, p.start),
            _ => format!("read{i}"),
        };
        write_wrapped(out, &header, &r.seq)?;
    }
    Ok(())
}
