//! Line-oriented text format for functions, datasets, priors, loss tables,
//! and sampling distributions.
//!
//! One record per line, comma-separated fields, rationals rendered as
//! "num/den". The first field names the record type:
//!
//! ```text
//! domain,<x_size>,<y_size>
//! function,<out_0>,...,<out_{x-1}>
//! dataset,<weight>,<x_0>,<y_0>,<x_1>,<y_1>,...
//! prior,<weight>,<out_0>,...,<out_{x-1}>
//! loss,<L(r,0)>,...,<L(r,y-1)>          (one line per predicted output r)
//! pi,<w_0>,...,<w_{x-1}>
//! ```
//!
//! Round-trips are lossless: rationals are stored in lowest terms and read
//! back bit-identically.

use crate::costs::LossFunction;
use crate::domain::{Dataset, FiniteDomain, Prior, SamplingDistribution, TargetFunction};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_usize(field: &str, line: usize) -> Result<usize> {
    field
        .trim()
        .parse()
        .map_err(|e| parse_err(line, format!("bad integer {field:?}: {e}")))
}

fn parse_weight(field: &str, line: usize) -> Result<Rational> {
    parse_rational(field).map_err(|e| match e {
        Error::Parse { message, .. } => parse_err(line, message),
        other => other,
    })
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn write_domain(domain: FiniteDomain) -> String {
    format!("domain,{},{}", domain.x_size(), domain.y_size())
}

fn parse_domain_line(fields: &[&str], line: usize) -> Result<FiniteDomain> {
    if fields.len() != 3 {
        return Err(parse_err(line, "domain record needs exactly 2 fields"));
    }
    FiniteDomain::new(parse_usize(fields[1], line)?, parse_usize(fields[2], line)?)
}

/// A domain header followed by one `function` record per function.
pub fn write_functions(domain: FiniteDomain, functions: &[TargetFunction]) -> String {
    let mut out = write_domain(domain);
    out.push('\n');
    for f in functions {
        out.push_str("function,");
        let outputs: Vec<String> = f.outputs().iter().map(|y| y.to_string()).collect();
        out.push_str(&outputs.join(","));
        out.push('\n');
    }
    out
}

pub fn read_functions(text: &str) -> Result<(FiniteDomain, Vec<TargetFunction>)> {
    let mut domain = None;
    let mut functions = Vec::new();
    for (line, record) in records(text) {
        let fields: Vec<&str> = record.split(',').collect();
        match fields[0] {
            "domain" => domain = Some(parse_domain_line(&fields, line)?),
            "function" => {
                let domain =
                    domain.ok_or_else(|| parse_err(line, "function record before domain"))?;
                let outputs = fields[1..]
                    .iter()
                    .map(|f| parse_usize(f, line))
                    .collect::<Result<Vec<_>>>()?;
                functions.push(TargetFunction::new(domain, outputs)?);
            }
            other => return Err(parse_err(line, format!("unexpected record {other:?}"))),
        }
    }
    let domain = domain.ok_or_else(|| parse_err(0, "missing domain record"))?;
    Ok((domain, functions))
}

pub fn write_datasets(datasets: &[Dataset]) -> String {
    let mut out = String::new();
    for d in datasets {
        out.push_str("dataset,");
        out.push_str(&format_rational(d.weight()));
        for &(x, y) in d.pairs() {
            out.push_str(&format!(",{x},{y}"));
        }
        out.push('\n');
    }
    out
}

pub fn read_datasets(text: &str) -> Result<Vec<Dataset>> {
    let mut datasets = Vec::new();
    for (line, record) in records(text) {
        let fields: Vec<&str> = record.split(',').collect();
        if fields[0] != "dataset" {
            return Err(parse_err(
                line,
                format!("unexpected record {:?}", fields[0]),
            ));
        }
        if fields.len() < 4 || !fields.len().is_multiple_of(2) {
            return Err(parse_err(
                line,
                "dataset record needs a weight and at least one (x, y) pair",
            ));
        }
        let weight = parse_weight(fields[1], line)?;
        let pairs = fields[2..]
            .chunks(2)
            .map(|c| Ok((parse_usize(c[0], line)?, parse_usize(c[1], line)?)))
            .collect::<Result<Vec<_>>>()?;
        datasets.push(Dataset::new(pairs, weight)?);
    }
    Ok(datasets)
}

/// A domain header followed by one `prior` record per support function.
pub fn write_prior(domain: FiniteDomain, prior: &Prior) -> String {
    let mut out = write_domain(domain);
    out.push('\n');
    for (f, w) in prior.iter() {
        out.push_str("prior,");
        out.push_str(&format_rational(w));
        for y in f.outputs() {
            out.push_str(&format!(",{y}"));
        }
        out.push('\n');
    }
    out
}

pub fn read_prior(text: &str) -> Result<(FiniteDomain, Prior)> {
    let mut domain = None;
    let mut support = Vec::new();
    let mut weights = Vec::new();
    for (line, record) in records(text) {
        let fields: Vec<&str> = record.split(',').collect();
        match fields[0] {
            "domain" => domain = Some(parse_domain_line(&fields, line)?),
            "prior" => {
                let domain = domain.ok_or_else(|| parse_err(line, "prior record before domain"))?;
                if fields.len() < 3 {
                    return Err(parse_err(line, "prior record needs a weight and outputs"));
                }
                weights.push(parse_weight(fields[1], line)?);
                let outputs = fields[2..]
                    .iter()
                    .map(|f| parse_usize(f, line))
                    .collect::<Result<Vec<_>>>()?;
                support.push(TargetFunction::new(domain, outputs)?);
            }
            other => return Err(parse_err(line, format!("unexpected record {other:?}"))),
        }
    }
    let domain = domain.ok_or_else(|| parse_err(0, "missing domain record"))?;
    Ok((domain, Prior::new(support, weights)?))
}

pub fn write_loss(loss: &LossFunction) -> String {
    let mut out = String::new();
    for row in loss.rows() {
        out.push_str("loss");
        for v in row {
            out.push_str(&format!(",{}", format_rational(v)));
        }
        out.push('\n');
    }
    out
}

pub fn read_loss(text: &str) -> Result<LossFunction> {
    let mut rows = Vec::new();
    for (line, record) in records(text) {
        let fields: Vec<&str> = record.split(',').collect();
        if fields[0] != "loss" {
            return Err(parse_err(
                line,
                format!("unexpected record {:?}", fields[0]),
            ));
        }
        rows.push(
            fields[1..]
                .iter()
                .map(|f| parse_weight(f, line))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    LossFunction::new(rows)
}

pub fn write_sampling(pi: &SamplingDistribution) -> String {
    let mut out = String::from("pi");
    for w in pi.weights() {
        out.push_str(&format!(",{}", format_rational(w)));
    }
    out.push('\n');
    out
}

pub fn read_sampling(text: &str) -> Result<SamplingDistribution> {
    let Some((line, record)) = records(text).next() else {
        return Err(parse_err(0, "missing pi record"));
    };
    let fields: Vec<&str> = record.split(',').collect();
    if fields[0] != "pi" {
        return Err(parse_err(
            line,
            format!("unexpected record {:?}", fields[0]),
        ));
    }
    let weights = fields[1..]
        .iter()
        .map(|f| parse_weight(f, line))
        .collect::<Result<Vec<_>>>()?;
    SamplingDistribution::new(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::zero_one_loss;
    use crate::domain::enumerate_functions;
    use crate::rational::{rat_one, ratio};

    #[test]
    fn functions_round_trip() {
        let domain = FiniteDomain::new(3, 2).unwrap();
        let fs: Vec<_> = enumerate_functions(domain).unwrap().collect();
        let text = write_functions(domain, &fs);
        let (d2, back) = read_functions(&text).unwrap();
        assert_eq!(d2, domain);
        assert_eq!(back, fs);
    }

    #[test]
    fn datasets_round_trip() {
        let ds = vec![
            Dataset::new(vec![(0, 1), (2, 0)], ratio(1, 3)).unwrap(),
            Dataset::new(vec![(1, 1)], rat_one()).unwrap(),
        ];
        let text = write_datasets(&ds);
        assert_eq!(read_datasets(&text).unwrap(), ds);
    }

    #[test]
    fn prior_round_trip() {
        let domain = FiniteDomain::new(2, 2).unwrap();
        let prior = Prior::uniform_over_all(domain, 1 << 20).unwrap();
        let text = write_prior(domain, &prior);
        let (d2, back) = read_prior(&text).unwrap();
        assert_eq!(d2, domain);
        assert_eq!(back, prior);
    }

    #[test]
    fn loss_and_sampling_round_trip() {
        let domain = FiniteDomain::new(4, 2).unwrap();
        let loss = zero_one_loss(domain);
        assert_eq!(read_loss(&write_loss(&loss)).unwrap(), loss);
        let pi = SamplingDistribution::new(vec![ratio(1, 4), ratio(3, 4)]).unwrap();
        assert_eq!(read_sampling(&write_sampling(&pi)).unwrap(), pi);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = read_datasets("dataset,1/1,0,0\ndataset,banana,1,1\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
