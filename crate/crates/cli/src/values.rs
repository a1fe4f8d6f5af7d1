//! Values files: one `<slot> <element> <re> <im>` line per element per slot.

use std::collections::BTreeMap;

use fneq::Slot;
use num_complex::Complex64;

use crate::carrier_file::{CarrierFile, ParseError};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, column, message: message.into() }
}

/// Parse a values file for exactly the slots in `slots` on a finite carrier.
pub fn parse_values(
    text: &str,
    file: &CarrierFile,
    slots: &[Slot],
) -> Result<BTreeMap<Slot, Vec<Complex64>>, ParseError> {
    let n = file.carrier.as_finite().map_or(0, |m| m.size());
    let mut table: BTreeMap<Slot, Vec<Option<Complex64>>> = slots.iter().map(|&s| (s, vec![None; n])).collect();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<(usize, &str)> = body
            .split_whitespace()
            .map(|t| (t.as_ptr() as usize - body.as_ptr() as usize + 1, t))
            .collect();
        match tokens.as_slice() {
            [] => continue,
            [(c0, slot), (c1, elem), (c2, re), (c3, im)] => {
                let s: Slot = slot.parse().map_err(|_| syntax(line, *c0, format!("unknown slot `{slot}`")))?;
                let values = table
                    .get_mut(&s)
                    .ok_or_else(|| syntax(line, *c0, format!("slot `{slot}` is not used by this equation")))?;
                let x = file.element(elem).ok_or_else(|| syntax(line, *c1, format!("unknown element `{elem}`")))?;
                let re: f64 = re.parse().map_err(|_| syntax(line, *c2, format!("bad real part `{re}`")))?;
                let im: f64 = im.parse().map_err(|_| syntax(line, *c3, format!("bad imaginary part `{im}`")))?;
                if values[x].is_some() {
                    return Err(syntax(line, *c1, format!("duplicate value for {slot}({elem})")));
                }
                values[x] = Some(Complex64::new(re, im));
            }
            [.., (c, _)] => return Err(syntax(line, *c, "expected `<slot> <element> <re> <im>`")),
        }
    }
    table
        .into_iter()
        .map(|(s, values)| {
            let missing = values.iter().position(Option::is_none);
            match missing {
                Some(x) => Err(syntax(text.lines().count() + 1, 1, format!("missing value for {s}({})", file.name(x)))),
                None => Ok((s, values.into_iter().map(Option::unwrap).collect())),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier_file::parse_carrier;

    fn z2() -> CarrierFile {
        parse_carrier("finite 2\n0 1\n1 0\nidentity 0\nnames e a").unwrap()
    }

    #[test]
    fn reads_all_slots() {
        let v = parse_values("f e 1 0\nf a -1 0\n# g\ng 0 0 1\ng 1 0 -1\n", &z2(), &[Slot::F, Slot::G]).unwrap();
        assert_eq!(v[&Slot::F], vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        assert_eq!(v[&Slot::G][1], Complex64::new(0.0, -1.0));
    }

    #[test]
    fn rejects_bad_lines() {
        let f = z2();
        let err = |t| parse_values(t, &f, &[Slot::F]).unwrap_err().to_string();
        assert_eq!(err("f e 1 0\nf e 1 0"), "line 2, column 3: duplicate value for f(e)");
        assert_eq!(err("f e 1 0\nh a 1 0"), "line 2, column 1: slot `h` is not used by this equation");
        assert_eq!(err("f b 1 0"), "line 1, column 3: unknown element `b`");
        assert_eq!(err("f e 1"), "line 1, column 5: expected `<slot> <element> <re> <im>`");
        assert_eq!(err("f e 1 0"), "line 2, column 1: missing value for f(a)");
    }
}
