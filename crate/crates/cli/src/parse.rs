//! Parsers for command-line values.

use frobkit::C64;

/// `re` or `re:im`.
pub fn complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number '{t}': {e}"));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected 're' or 're:im', got '{s}'")),
    }
}

/// Comma-separated list of `re` or `re:im` entries.
pub fn point(s: &str) -> Result<Vec<C64>, String> {
    s.split(',').map(complex).collect()
}

/// `a:b:n`, `n >= 1` evenly spaced values from `a` to `b` inclusive.
pub fn range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("expected 'start:end:count', got '{s}'"));
    };
    let a: f64 = a.trim().parse().map_err(|e| format!("bad start '{a}': {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("bad end '{b}': {e}"))?;
    let n: usize = n.trim().parse().map_err(|e| format!("bad count '{n}': {e}"))?;
    match n {
        0 => Err("count must be at least 1".into()),
        1 => Ok(vec![a]),
        _ => Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()),
    }
}

pub fn on_off(s: &str) -> Result<bool, String> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(format!("expected 'on' or 'off', got '{s}'")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points() {
        assert_eq!(point("0,2,1").unwrap(), vec![C64::new(0.0, 0.0), C64::new(2.0, 0.0), C64::new(1.0, 0.0)]);
        assert_eq!(point("1:-0.5, 2").unwrap(), vec![C64::new(1.0, -0.5), C64::new(2.0, 0.0)]);
        assert!(point("1,x").is_err());
        assert!(complex("1:2:3").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(range("1.5:3.0:4").unwrap(), vec![1.5, 2.0, 2.5, 3.0]);
        assert_eq!(range("2:5:1").unwrap(), vec![2.0]);
        assert!(range("1:2:0").is_err());
        assert!(range("1:2").is_err());
    }
}
