//! Parsers for the compact list and entry syntaxes used by the flags.

use ccrlab::linalg::{c64, C64};

use crate::error::CliError;

fn bad(what: &str, s: &str) -> CliError {
    CliError::Format(format!("cannot parse {what} from '{s}'"))
}

pub fn float(s: &str) -> Result<f64, CliError> {
    s.trim().parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| bad("a finite number", s))
}

/// `1.5,2,-0.25`.
pub fn floats(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(float).collect()
}

pub fn counts(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad("a count", x))).collect()
}

/// `re` or `re,im`.
pub fn complex(s: &str) -> Result<C64, CliError> {
    match floats(s)?.as_slice() {
        [re] => Ok(c64(*re, 0.0)),
        [re, im] => Ok(c64(*re, *im)),
        _ => Err(bad("a complex number (re or re,im)", s)),
    }
}

/// `k:l=value`, with `k != l` zero-based basis indices.
pub fn indexed(s: &str) -> Result<(usize, usize, &str), CliError> {
    let (key, value) = s.split_once('=').ok_or_else(|| bad("an entry k:l=value", s))?;
    let (k, l) = key.split_once(':').ok_or_else(|| bad("an entry k:l=value", s))?;
    let k = k.trim().parse::<usize>().map_err(|_| bad("an index", k))?;
    let l = l.trim().parse::<usize>().map_err(|_| bad("an index", l))?;
    if k == l {
        return Err(CliError::Format(format!("entry '{s}' must couple two different indices")));
    }
    Ok((k, l, value))
}

/// `12=value`, `13=value` or `23=value`; returns the slot `0`, `1` or `2`.
pub fn pair_slot(s: &str) -> Result<(usize, &str), CliError> {
    let (key, value) = s.split_once('=').ok_or_else(|| bad("an entry 12|13|23=value", s))?;
    let slot = match key.trim() {
        "12" => 0,
        "13" => 1,
        "23" => 2,
        _ => return Err(bad("an entry 12|13|23=value", s)),
    };
    Ok((slot, value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_entries() {
        assert_eq!(floats("0, 1,3.5").unwrap(), vec![0.0, 1.0, 3.5]);
        assert!(floats("0,x").is_err());
        assert!(float("inf").is_err());
        assert_eq!(counts("2,1").unwrap(), vec![2, 1]);
        assert_eq!(complex("0.5,-2").unwrap(), c64(0.5, -2.0));
        assert_eq!(complex("3").unwrap(), c64(3.0, 0.0));
        assert!(complex("1,2,3").is_err());
        assert_eq!(indexed("0:2=1.5").unwrap(), (0, 2, "1.5"));
        assert!(indexed("1:1=0").is_err());
        assert_eq!(pair_slot("23=0.1,0.2").unwrap(), (2, "0.1,0.2"));
        assert!(pair_slot("14=1").is_err());
    }
}
