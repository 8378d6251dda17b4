//! Comma-separated list parsers for command-line values.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::problems::ProblemId;

fn parse_list<T: FromStr>(input: &str, what: &str) -> Result<Vec<T>> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<T>()
                .map_err(|_| Error::Parse(format!("invalid {what} '{tok}'")))
        })
        .collect()
}

/// `"P1,p7p"` into problem ids, duplicates rejected.
pub fn parse_problems(input: &str) -> Result<Vec<ProblemId>> {
    let ids: Vec<ProblemId> = parse_list(input, "problem id")?;
    for (i, id) in ids.iter().enumerate() {
        if ids[..i].contains(id) {
            return Err(Error::Parse(format!("problem {id} listed twice")));
        }
    }
    Ok(ids)
}

/// Positive, strictly increasing integers.
pub fn parse_n_values(input: &str) -> Result<Vec<usize>> {
    let ns: Vec<usize> = parse_list(input, "integer")?;
    if ns.contains(&0) {
        return Err(Error::Parse("n values must be positive".into()));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parse("n values must be strictly increasing".into()));
    }
    Ok(ns)
}

/// Finite positive reals, e.g. Euler step sizes.
pub fn parse_f64_list(input: &str) -> Result<Vec<f64>> {
    let vs: Vec<f64> = parse_list(input, "number")?;
    if let Some(v) = vs.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Parse(format!("expected a positive finite number, got {v}")));
    }
    Ok(vs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_n_values("16, 32,64").unwrap(), vec![16, 32, 64]);
        assert!(parse_n_values("32,16").is_err());
        assert!(parse_n_values("0,4").is_err());
        assert!(parse_n_values("4,x").is_err());
        assert_eq!(parse_n_values("").unwrap(), Vec::<usize>::new());
        assert_eq!(
            parse_problems("p1,P7P").unwrap(),
            vec![ProblemId::P1, ProblemId::P7p]
        );
        assert!(parse_problems("P1,p1").is_err());
        assert_eq!(parse_f64_list("0.02,1e-2").unwrap(), vec![0.02, 0.01]);
        assert!(parse_f64_list("-1").is_err());
        assert!(parse_f64_list("nan").is_err());
    }
}
