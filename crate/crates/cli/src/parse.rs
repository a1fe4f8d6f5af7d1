//! Small value grammars used by flags and values files.

use num_complex::Complex64;

/// `1`, `-2.5`, `i`, `-i`, `3i`, `1+2i`, `0.5-1e-3i`.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let bytes = s.as_bytes();
    // split before the last sign that is not a leading sign or an exponent sign
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&s[..k], &s[k..]),
        None if s.ends_with('i') => ("", s.as_str()),
        None => (s.as_str(), ""),
    };
    let re = if re.is_empty() { 0.0 } else { re.parse::<f64>().ok()? };
    let im = match im {
        "" => 0.0,
        _ => {
            let body = im.strip_suffix('i')?;
            match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                b => b.parse::<f64>().ok()?,
            }
        }
    };
    (re.is_finite() && im.is_finite()).then_some(Complex64::new(re, im))
}

/// Comma-separated complex numbers.
pub fn parse_complex_list(text: &str) -> Option<Vec<Complex64>> {
    text.split(',').map(parse_complex).collect()
}

/// Integer matrix with rows separated by `;` and entries by `,`.
pub fn parse_matrix(text: &str) -> Option<Vec<Vec<i64>>> {
    let rows: Vec<Vec<i64>> = text
        .split(';')
        .map(|row| row.split(',').map(|e| e.trim().parse().ok()).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    let d = rows.len();
    rows.iter().all(|r| r.len() == d).then_some(rows)
}
