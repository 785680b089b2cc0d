//! Sample files: one sample per line, `re` or `re im`.
//!
//! Blank lines and lines starting with `#` are skipped. A file with at least
//! one two-field line is read as complex; single-field lines in it get a
//! zero imaginary part.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use num_complex::Complex64;
use primeconv::Signal;

#[derive(Debug, Clone, PartialEq)]
pub enum Samples {
    Real(Signal<f64>),
    Complex(Signal<Complex64>),
}

impl Samples {
    pub fn len(&self) -> usize {
        match self {
            Samples::Real(s) => s.len(),
            Samples::Complex(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Samples::Complex(_))
    }

    pub fn to_complex(&self) -> Signal<Complex64> {
        match self {
            Samples::Complex(s) => s.clone(),
            Samples::Real(s) => Signal::new(s.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .expect("non-empty finite samples stay valid"),
        }
    }
}

fn parse_number(field: &str, line: usize) -> anyhow::Result<f64> {
    let x: f64 = field
        .parse()
        .with_context(|| format!("line {line}: '{field}' is not a number"))?;
    if !x.is_finite() {
        bail!("line {line}: '{field}' is not finite");
    }
    Ok(x)
}

pub fn parse_samples(text: &str) -> anyhow::Result<Samples> {
    let mut values = Vec::new();
    let mut complex = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (re, im) = match fields.as_slice() {
            [re] => (parse_number(re, idx + 1)?, 0.0),
            [re, im] => {
                complex = true;
                (parse_number(re, idx + 1)?, parse_number(im, idx + 1)?)
            }
            _ => bail!(
                "line {}: expected 1 or 2 fields, found {}",
                idx + 1,
                fields.len()
            ),
        };
        values.push(Complex64::new(re, im));
    }
    if values.is_empty() {
        bail!("no samples found");
    }
    Ok(if complex {
        Samples::Complex(Signal::new(values)?)
    } else {
        Samples::Real(Signal::new(values.into_iter().map(|c| c.re).collect())?)
    })
}

pub fn read_samples(path: &Path) -> anyhow::Result<Samples> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_samples(&text).with_context(|| format!("cannot parse {}", path.display()))
}

pub fn format_samples(samples: &Samples) -> String {
    let mut out = String::new();
    match samples {
        Samples::Real(s) => {
            for x in s {
                out.push_str(&format!("{x}\n"));
            }
        }
        Samples::Complex(s) => {
            for c in s {
                out.push_str(&format!("{} {}\n", c.re, c.im));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_file() {
        let s = parse_samples("1\n# comment\n\n2.5\n-3e-2\n").unwrap();
        assert_eq!(
            s,
            Samples::Real(Signal::new(vec![1.0, 2.5, -0.03]).unwrap())
        );
    }

    #[test]
    fn mixed_lines_become_complex() {
        let s = parse_samples("1 2\n3\n").unwrap();
        let expected = vec![Complex64::new(1.0, 2.0), Complex64::new(3.0, 0.0)];
        assert_eq!(s, Samples::Complex(Signal::new(expected).unwrap()));
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = parse_samples("1\nx\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(parse_samples("1 2 3\n").is_err());
        assert!(parse_samples("inf\n").is_err());
        assert!(parse_samples("# only a comment\n").is_err());
    }

    #[test]
    fn format_round_trips() {
        for text in ["31\n31\n28\n", "0.1 -2\n3 0\n"] {
            let s = parse_samples(text).unwrap();
            assert_eq!(format_samples(&s), text);
            assert_eq!(parse_samples(&format_samples(&s)).unwrap(), s);
        }
    }
}
