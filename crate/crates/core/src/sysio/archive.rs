use std::cmp::Ordering;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;

use super::parse::{parse_system, print_system};
use crate::error::ParseError;
use crate::poly::LinearForm;
use crate::witness::{Chart, LinearSlice, SliceType, WitnessCollection};

const VERSION: &str = "mwit 1";

fn push_numbers(out: &mut String, values: &[Complex64]) {
    for z in values {
        let _ = write!(out, " {:.17e} {:.17e}", z.re, z.im);
    }
}

fn point_order(p: &[Complex64], q: &[Complex64]) -> Ordering {
    for (a, b) in p.iter().zip(q) {
        match a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Serializes `collection` as a self-describing text document.
///
/// Records follow slice-type order and points are sorted by their chart
/// normalization, so equal collections give identical text. Coordinates are
/// written as stored.
pub fn write_archive(collection: &WitnessCollection) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{VERSION}");
    let _ = writeln!(out, "seed {}", collection.seed);
    let text = print_system(&collection.system);
    let _ = writeln!(out, "system {}", text.lines().count());
    out.push_str(&text);
    let _ = writeln!(out, "chart {}", collection.chart.forms.len());
    for h in &collection.chart.forms {
        out.push_str("form");
        push_numbers(&mut out, &h.coeffs);
        out.push('\n');
    }
    let sets: Vec<_> = collection.sets().filter(|(_, w)| !w.is_empty()).collect();
    let _ = writeln!(out, "sets {}", sets.len());
    for (e, w) in sets {
        let forms: Vec<&LinearForm> = w.slice.all().collect();
        let e_text: Vec<String> = e.0.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "set {} {}", e_text.join(","), w.len());
        for f in forms {
            let _ = write!(out, "slice {}", f.group);
            push_numbers(&mut out, &f.coeffs);
            out.push('\n');
        }
        let mut pts: Vec<(Vec<Complex64>, &Vec<Complex64>, usize)> = w
            .points
            .iter()
            .zip(&w.multiplicities)
            .map(|(p, &m)| {
                (
                    collection.chart.normalize(p).unwrap_or_else(|| p.clone()),
                    p,
                    m,
                )
            })
            .collect();
        pts.sort_by(|a, b| point_order(&a.0, &b.0));
        for (_, p, m) in pts {
            let _ = write!(out, "point {m}");
            push_numbers(&mut out, p);
            out.push('\n');
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<(usize, &'a str), ParseError> {
        match self.inner.next() {
            Some((i, l)) => {
                self.last = i + 1;
                Ok((i + 1, l))
            }
            None => Err(ParseError::Corrupted {
                line: self.last + 1,
                message: "unexpected end of archive".into(),
            }),
        }
    }
}

fn corrupt(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Corrupted {
        line,
        message: message.into(),
    }
}

fn keyed<'a>(line: usize, text: &'a str, key: &str) -> Result<Vec<&'a str>, ParseError> {
    let mut it = text.split_whitespace();
    if it.next() != Some(key) {
        return Err(corrupt(line, format!("expected `{key}` record")));
    }
    Ok(it.collect())
}

fn count(line: usize, s: Option<&&str>) -> Result<usize, ParseError> {
    s.and_then(|v| v.parse().ok())
        .ok_or_else(|| corrupt(line, "expected a count"))
}

fn numbers(line: usize, fields: &[&str], n: usize) -> Result<Vec<Complex64>, ParseError> {
    if fields.len() != 2 * n {
        return Err(corrupt(
            line,
            format!(
                "expected {n} complex numbers, found {} fields",
                fields.len()
            ),
        ));
    }
    fields
        .chunks(2)
        .map(|c| match (c[0].parse::<f64>(), c[1].parse::<f64>()) {
            (Ok(re), Ok(im)) => Ok(Complex64::new(re, im)),
            _ => Err(corrupt(line, "bad number")),
        })
        .collect()
}

/// Reads an archive written by [`write_archive`].
pub fn read_archive(text: &str) -> Result<WitnessCollection, ParseError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let (_, head) = lines.next()?;
    if head.trim() != VERSION {
        return Err(ParseError::Version(head.trim().to_string()));
    }
    let (ln, l) = lines.next()?;
    let seed: u64 = keyed(ln, l, "seed")?
        .first()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| corrupt(ln, "bad seed"))?;
    let (ln, l) = lines.next()?;
    let n_sys = count(ln, keyed(ln, l, "system")?.first())?;
    let mut sys_text = String::new();
    for _ in 0..n_sys {
        sys_text.push_str(lines.next()?.1);
        sys_text.push('\n');
    }
    let system = Arc::new(parse_system(&sys_text)?);
    let structure = system.structure().clone();

    let (ln, l) = lines.next()?;
    let k = count(ln, keyed(ln, l, "chart")?.first())?;
    if k != structure.group_count() {
        return Err(corrupt(ln, "chart size does not match the variable groups"));
    }
    let mut chart_forms = Vec::with_capacity(k);
    for i in 0..k {
        let (ln, l) = lines.next()?;
        let f = keyed(ln, l, "form")?;
        let coeffs = numbers(ln, &f, structure.group_size(i))?;
        chart_forms
            .push(LinearForm::new(&structure, i, coeffs).map_err(|e| corrupt(ln, e.to_string()))?);
    }
    let chart = Chart::new(&structure, chart_forms).map_err(|e| corrupt(ln, e.to_string()))?;
    let mut collection = WitnessCollection::new(system.clone(), chart, seed);

    let (ln, l) = lines.next()?;
    let n_sets = count(ln, keyed(ln, l, "sets")?.first())?;
    let dims = structure.dims();
    for _ in 0..n_sets {
        let (ln, l) = lines.next()?;
        let f = keyed(ln, l, "set")?;
        let e: Vec<usize> = f
            .first()
            .ok_or_else(|| corrupt(ln, "missing slice type"))?
            .split(',')
            .map(|v| v.parse().map_err(|_| corrupt(ln, "bad slice type")))
            .collect::<Result<_, _>>()?;
        let e = SliceType::new(e, &dims).map_err(|err| corrupt(ln, err.to_string()))?;
        let npts = count(ln, f.get(1))?;
        let mut forms = vec![Vec::new(); k];
        for _ in 0..e.abs() {
            let (ln, l) = lines.next()?;
            let f = keyed(ln, l, "slice")?;
            let g: usize = f
                .first()
                .and_then(|s| s.parse().ok())
                .filter(|&g| g < k)
                .ok_or_else(|| corrupt(ln, "bad group"))?;
            let coeffs = numbers(ln, &f[1..], structure.group_size(g))?;
            forms[g].push(
                LinearForm::new(&structure, g, coeffs)
                    .map_err(|err| corrupt(ln, err.to_string()))?,
            );
        }
        let slice =
            LinearSlice::new(&structure, forms).map_err(|err| corrupt(ln, err.to_string()))?;
        if slice.slice_type() != e {
            return Err(corrupt(ln, "slice forms do not match the slice type"));
        }
        let mut w = collection
            .empty_set(slice)
            .map_err(|err| corrupt(ln, err.to_string()))?;
        for _ in 0..npts {
            let (ln, l) = lines.next()?;
            let f = keyed(ln, l, "point")?;
            let m = count(ln, f.first()).and_then(|m| {
                if m == 0 {
                    Err(corrupt(ln, "zero multiplicity"))
                } else {
                    Ok(m)
                }
            })?;
            w.points.push(numbers(ln, &f[1..], structure.total_vars())?);
            w.multiplicities.push(m);
        }
        collection.insert(w);
    }
    for (i, rest) in lines.inner {
        if !rest.trim().is_empty() {
            return Err(corrupt(i + 1, "trailing data"));
        }
    }
    Ok(collection)
}
