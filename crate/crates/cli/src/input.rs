//! Flag value parsers: complex numbers, points, sweeps.

use num_complex::Complex64;
use pm_core::{ExtPoint2, ProjectiveCoord};

fn real(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("'{s}' is not a real number"))
}

/// `a`, `bi`, `a+bi`, `a-bi` or `a,b`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once(',') {
        return Ok(Complex64::new(real(a)?, real(b)?));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(real(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => real(t).map_err(|_| format!("'{s}' is not a complex number"))?,
    };
    Ok(Complex64::new(re, im))
}

fn coord(s: &str) -> Result<ProjectiveCoord<Complex64>, String> {
    match s.trim() {
        "inf" | "∞" => Ok(ProjectiveCoord::infinity()),
        t => complex(t).map(ProjectiveCoord::finite),
    }
}

/// `z;w` with each slot complex or `inf`; `a,b` is the real point (a, b).
pub fn point(s: &str) -> Result<ExtPoint2<Complex64>, String> {
    if let Some((z, w)) = s.split_once(';') {
        return Ok(ExtPoint2::new(coord(z)?, coord(w)?));
    }
    match s.split_once(',') {
        Some((z, w)) => Ok(ExtPoint2::new(coord(z)?, coord(w)?)),
        None => Err(format!("point '{s}' needs two coordinates, as z;w or a,b")),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub values: Vec<f64>,
}

/// `hbar=start:end:log|lin:count`
pub fn sweep(s: &str) -> Result<Sweep, String> {
    let spec = s.strip_prefix("hbar=").ok_or_else(|| format!("sweep '{s}' must start with hbar="))?;
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, scale, count] = parts[..] else {
        return Err(format!("sweep '{s}' must look like hbar=start:end:log:count"));
    };
    let (a, b) = (real(a)?, real(b)?);
    let count: usize = count.parse().map_err(|_| format!("sweep count '{count}' is not a positive integer"))?;
    if count == 0 {
        return Err("sweep count must be positive".into());
    }
    let t = |k: usize| if count == 1 { 0.0 } else { k as f64 / (count - 1) as f64 };
    let values = match scale {
        "log" => {
            if a <= 0.0 || b <= 0.0 {
                return Err("log sweep needs positive endpoints".into());
            }
            (0..count).map(|k| a * (b / a).powf(t(k))).collect()
        }
        "lin" => (0..count).map(|k| a + (b - a) * t(k)).collect(),
        other => return Err(format!("unknown sweep scale '{other}'")),
    };
    Ok(Sweep { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(complex("0.1").unwrap(), Complex64::new(0.1, 0.0));
        assert_eq!(complex("0.5-2i").unwrap(), Complex64::new(0.5, -2.0));
        assert_eq!(complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(complex("1e-3+2e-1i").unwrap(), Complex64::new(1e-3, 0.2));
        assert_eq!(complex("0.3,0.4").unwrap(), Complex64::new(0.3, 0.4));
        assert!(complex("x").is_err());
    }

    #[test]
    fn point_forms() {
        let p = point("0.5,0.25").unwrap();
        assert_eq!(p.finite_values(), Some((Complex64::new(0.5, 0.0), Complex64::new(0.25, 0.0))));
        let q = point("1+i;inf").unwrap();
        assert!(q.finite_values().is_none());
        assert!(point("0.5").is_err());
    }

    #[test]
    fn sweeps() {
        let s = sweep("hbar=1e-1:1e-3:log:3").unwrap();
        assert!((s.values[1] - 1e-2).abs() < 1e-15);
        assert!(sweep("h=1:2:lin:2").is_err());
    }
}
