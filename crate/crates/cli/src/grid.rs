//! Grid specifications: `a:b:n` (linear, endpoints included) and
//! `log:a:b:n` (`10^a` to `10^b`, logarithmically spaced).

use crate::CliError;

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Usage(format!("grid `{spec}`: {why}"));
    let (log, body) = match spec.strip_prefix("log:") {
        Some(rest) => (true, rest),
        None => (false, spec),
    };
    let parts: Vec<&str> = body.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(bad("expected a:b:n or log:a:b:n"));
    };
    let a: f64 = a.trim().parse().map_err(|_| bad("start is not a number"))?;
    let b: f64 = b.trim().parse().map_err(|_| bad("end is not a number"))?;
    let n: usize = n.trim().parse().map_err(|_| bad("count is not a positive integer"))?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(bad("bounds must be finite"));
    }
    if n == 0 {
        return Err(bad("count must be at least 1"));
    }
    if n == 1 && a != b {
        return Err(bad("a single point needs a == b"));
    }
    let lin = |k: usize| {
        if n == 1 {
            a
        } else if k == n - 1 {
            b
        } else {
            a + (b - a) * k as f64 / (n - 1) as f64
        }
    };
    Ok((0..n)
        .map(|k| if log { 10f64.powf(lin(k)) } else { lin(k) })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_grid_hits_endpoints() {
        let g = parse_grid("-2:2:2001").unwrap();
        assert_eq!(g.len(), 2001);
        assert_eq!(g[0], -2.0);
        assert_eq!(g[1000], 0.0);
        assert_eq!(g[2000], 2.0);
    }

    #[test]
    fn log_grid() {
        let g = parse_grid("log:-3:4:701").unwrap();
        assert_eq!(g.len(), 701);
        assert!((g[0] - 1e-3).abs() < 1e-18);
        assert_eq!(g[700], 1e4);
        assert!((g[100] - 1e-2).abs() < 1e-15);
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "1:2", "a:2:3", "1:2:0", "1:2:x", "log:1:2", "1:2:1", "1:inf:3"] {
            assert!(parse_grid(s).is_err(), "{s}");
        }
        assert_eq!(parse_grid("3:3:1").unwrap(), vec![3.0]);
    }
}
