//! Presentation files.
//!
//! ```text
//! # Hecke-like example
//! gen S 0 -1 1 0
//! gen T 1 1 0 1 parabolic
//! basepoint 0.4 0.9
//! ```
//!
//! Entries are integers or rationals `p/q`. Inverses are added
//! automatically. A presentation with integer entries is handled exactly;
//! any rational entry switches to floating elements.

use cuspidal::group::{FloatElement, GroupPresentation, Mat2};
use cuspidal::{Complex64, Mobius};

use crate::error::{CliError, Result};

/// A parsed presentation in whichever element type its entries allow.
#[derive(Debug, Clone)]
pub enum AnyPresentation {
    Integer(GroupPresentation<Mat2<i64>>),
    Float(GroupPresentation<FloatElement>),
}

fn parse_rational(s: &str) -> Option<(i128, i128)> {
    let (p, q): (i128, i128) = match s.split_once('/') {
        Some((p, q)) => (p.parse().ok()?, q.parse().ok()?),
        None => (s.parse().ok()?, 1),
    };
    if q == 0 {
        return None;
    }
    Some(if q < 0 { (-p, -q) } else { (p, q) })
}

pub fn parse(text: &str) -> Result<AnyPresentation> {
    let bad = |line: usize, msg: String| CliError::Config(format!("presentation line {line}: {msg}"));
    let mut gens: Vec<(String, [(i128, i128); 4], bool)> = Vec::new();
    let mut basepoint = None;
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "gen" => {
                if !(words.len() == 6 || words.len() == 7) {
                    return Err(bad(n, "expected `gen NAME a b c d [parabolic]`".into()));
                }
                if words.len() == 7 && words[6] != "parabolic" {
                    return Err(bad(n, format!("unknown marker {:?}", words[6])));
                }
                let mut e = [(0i128, 1i128); 4];
                for (j, w) in words[2..6].iter().enumerate() {
                    e[j] = parse_rational(w).ok_or_else(|| bad(n, format!("bad entry {w:?}")))?;
                }
                // ad − bc = 1 exactly
                let (a, b, c, d) = (e[0], e[1], e[2], e[3]);
                let num = a.0 * d.0 * b.1 * c.1 - b.0 * c.0 * a.1 * d.1;
                let den = a.1 * d.1 * b.1 * c.1;
                if num != den {
                    return Err(bad(n, format!("generator {} does not have determinant 1", words[1])));
                }
                gens.push((words[1].to_string(), e, words.len() == 7));
            }
            "basepoint" => {
                let xy: Vec<f64> = words[1..].iter().filter_map(|w| w.parse().ok()).collect();
                if words.len() != 3 || xy.len() != 2 {
                    return Err(bad(n, "expected `basepoint x y`".into()));
                }
                basepoint = Some(Complex64::new(xy[0], xy[1]));
            }
            w => return Err(bad(n, format!("unknown directive {w:?}"))),
        }
    }
    let basepoint = basepoint.ok_or_else(|| CliError::Config("presentation has no basepoint".into()))?;
    let integral = gens.iter().all(|g| g.1.iter().all(|e| e.1 == 1));
    let p = if integral {
        let g = gens
            .into_iter()
            .map(|(name, e, par)| {
                let m = Mat2::try_new(e[0].0 as i64, e[1].0 as i64, e[2].0 as i64, e[3].0 as i64)?;
                Ok((name, m, par))
            })
            .collect::<cuspidal::Result<Vec<_>>>()
            .map_err(|e| CliError::Config(e.to_string()))?;
        AnyPresentation::Integer(GroupPresentation::new(g, basepoint).map_err(|e| CliError::Config(e.to_string()))?)
    } else {
        let f = |e: (i128, i128)| e.0 as f64 / e.1 as f64;
        let g = gens
            .into_iter()
            .map(|(name, e, par)| {
                let m = Mobius::normalized(f(e[0]), f(e[1]), f(e[2]), f(e[3]))?;
                Ok((name, FloatElement::new(m), par))
            })
            .collect::<cuspidal::Result<Vec<_>>>()
            .map_err(|e| CliError::Config(e.to_string()))?;
        AnyPresentation::Float(GroupPresentation::new(g, basepoint).map_err(|e| CliError::Config(e.to_string()))?)
    };
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_file() {
        let p = parse("gen S 0 -1 1 0\ngen T 1 1 0 1 parabolic # cusp\nbasepoint 0.4 0.9\n").unwrap();
        match p {
            AnyPresentation::Integer(p) => {
                assert_eq!(p.len(), 3);
                assert_eq!(p.parabolic.iter().filter(|x| **x).count(), 2);
            }
            _ => panic!("expected integer presentation"),
        }
    }

    #[test]
    fn rational_entries_give_floats() {
        let p = parse("gen A 2 0 0 1/2\ngen B 1 2 0 1 parabolic\nbasepoint 0 1").unwrap();
        assert!(matches!(p, AnyPresentation::Float(_)));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse("gen A 2 0 0 1\nbasepoint 0 1").is_err());
        assert!(parse("gen A 1 1 0 1 cusp\nbasepoint 0 1").is_err());
        assert!(parse("gen A 1 1 0 1").is_err());
        assert!(parse("gen A 1 x 0 1\nbasepoint 0 1").is_err());
        assert!(parse("gen A 1 1/0 0 1\nbasepoint 0 1").is_err());
        assert!(parse("gen A 0 -1 1 0 parabolic\nbasepoint 0 1").is_err());
        assert!(parse("rel A A\nbasepoint 0 1").is_err());
    }
}
