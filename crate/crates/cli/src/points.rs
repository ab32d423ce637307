use anyhow::{bail, Context, Result};
use multiwit::Complex64;

/// Parses `a`, `bi`, `a+bi` or `a-bi`; `i` alone stands for one.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        bail!("empty coordinate");
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('I')) else {
        return Ok(Complex64::new(real(&s)?, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => real(x)?,
    };
    Ok(Complex64::new(re, im))
}

fn real(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .with_context(|| format!("not a number: {s:?}"))
}

pub fn parse_point(s: &str, nvars: usize) -> Result<Vec<Complex64>> {
    let p: Vec<Complex64> = s.split(',').map(parse_complex).collect::<Result<_>>()?;
    if p.len() != nvars {
        bail!(
            "point has {} coordinates, the system has {nvars} variables",
            p.len()
        );
    }
    Ok(p)
}

/// Comma-separated nonnegative integers, optionally in parentheses.
pub fn parse_usizes(s: &str) -> Result<Vec<usize>> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .with_context(|| format!("not a nonnegative integer: {x:?}"))
        })
        .collect()
}

pub fn format_complex(z: Complex64) -> String {
    if z.im >= 0.0 || z.im.is_nan() {
        format!("{:e}+{:e}i", z.re, z.im)
    } else {
        format!("{:e}{:e}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("-1.5i").unwrap(), c(0.0, -1.5));
        assert_eq!(parse_complex("0.5-2i").unwrap(), c(0.5, -2.0));
        assert_eq!(parse_complex("1e-3+4E+2i").unwrap(), c(1e-3, 400.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("3+i").unwrap(), c(3.0, 1.0));
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn formatted_values_parse_back() {
        for z in [
            Complex64::new(1.25, -3e-17),
            Complex64::new(-0.0, 2.5),
            Complex64::new(1e300, 1e-300),
        ] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_usizes("(1,0)").unwrap(), vec![1, 0]);
        assert_eq!(parse_usizes(" 2 , 3 ").unwrap(), vec![2, 3]);
        assert!(parse_usizes("1,-1").is_err());
        assert!(parse_point("1,2", 3).is_err());
    }
}
