//! Parsers for list-valued flags.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListError(String);

impl fmt::Display for ListError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ListError {}

fn items(s: &str) -> Result<Vec<&str>, ListError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(ListError(format!("empty entry in list {s:?}")));
    }
    Ok(parts)
}

/// Comma-separated finite floats.
pub fn parse_float_list(s: &str) -> Result<Vec<f64>, ListError> {
    items(s)?
        .into_iter()
        .map(|p| match p.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            Ok(_) => Err(ListError(format!("{p:?} is not finite"))),
            Err(e) => Err(ListError(format!("{p:?}: {e}"))),
        })
        .collect()
}

/// Comma-separated positive integers.
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>, ListError> {
    items(s)?
        .into_iter()
        .map(|p| match p.parse::<usize>() {
            Ok(0) => Err(ListError("entries must be positive".into())),
            Ok(v) => Ok(v),
            Err(e) => Err(ListError(format!("{p:?}: {e}"))),
        })
        .collect()
}

/// Values of `--n-list`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimList(pub Vec<usize>);

impl std::str::FromStr for DimList {
    type Err = ListError;
    fn from_str(s: &str) -> Result<Self, ListError> {
        parse_usize_list(s).map(DimList)
    }
}

/// Three ray vectors in `R^3`, given as nine comma-separated numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rays(pub [[f64; 3]; 3]);

impl std::str::FromStr for Rays {
    type Err = ListError;
    fn from_str(s: &str) -> Result<Self, ListError> {
        let v = parse_float_list(s)?;
        if v.len() != 9 {
            return Err(ListError(format!("expected 9 numbers, got {}", v.len())));
        }
        Ok(Rays([
            [v[0], v[1], v[2]],
            [v[3], v[4], v[5]],
            [v[6], v[7], v[8]],
        ]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_usize_list("100, 1000,10000").unwrap(), vec![100, 1000, 10000]);
        assert!(parse_usize_list("1,,2").is_err());
        assert!(parse_usize_list("0").is_err());
        assert!(parse_usize_list("-3").is_err());
        assert_eq!(parse_float_list("1e-3,-2").unwrap(), vec![1e-3, -2.0]);
        assert!(parse_float_list("nan").is_err());
        assert!(parse_float_list("").is_err());
    }

    #[test]
    fn rays() {
        let r: Rays = "1,0,0,0,1,0,0,0,1".parse().unwrap();
        assert_eq!(r.0[1], [0.0, 1.0, 0.0]);
        assert!("1,0,0".parse::<Rays>().is_err());
    }
}
