use crate::{Error, Result};

/// Seven log-spaced values from 1e-3 to 1e3.
pub fn default_grid() -> Vec<f64> {
    (0..7).map(|i| 10f64.powi(i - 3)).collect()
}

/// Parses a grid specification: either a comma-separated list of values or
/// `log:lo,hi,count` for `count` log-spaced values between `lo` and `hi`
/// inclusive. Values must be finite and nonnegative; the result is sorted
/// ascending with duplicates removed.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    let bad = |msg: String| Error::invalid(format!("grid `{text}`: {msg}"));
    let mut values = if let Some(rest) = text.strip_prefix("log:") {
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad("expected log:lo,hi,count".into()));
        }
        let lo: f64 = parts[0]
            .parse()
            .map_err(|_| bad(format!("bad lower bound `{}`", parts[0])))?;
        let hi: f64 = parts[1]
            .parse()
            .map_err(|_| bad(format!("bad upper bound `{}`", parts[1])))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| bad(format!("bad count `{}`", parts[2])))?;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
            return Err(bad("log grid needs 0 < lo <= hi".into()));
        }
        if count == 0 || count > 10_000 {
            return Err(bad("count must be in 1..=10000".into()));
        }
        if count == 1 {
            if lo != hi {
                return Err(bad("a single-value log grid needs lo == hi".into()));
            }
            vec![lo]
        } else {
            let (a, b) = (lo.log10(), hi.log10());
            let mut v: Vec<f64> = (0..count)
                .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
                .collect();
            // keep the endpoints exact
            v[0] = lo;
            v[count - 1] = hi;
            v
        }
    } else {
        text.split(',')
            .map(|s| {
                let s = s.trim();
                s.parse::<f64>()
                    .map_err(|_| bad(format!("bad value `{s}`")))
            })
            .collect::<Result<Vec<f64>>>()?
    };
    if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(bad("values must be finite and nonnegative".into()));
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_seven_decades() {
        let g = default_grid();
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[3], 1.0);
        assert_eq!(g[6], 1e3);
    }

    #[test]
    fn parses_lists_and_log_specs() {
        assert_eq!(parse_grid("3, 1,2,1").unwrap(), [1.0, 2.0, 3.0]);
        let g = parse_grid("log:0.001,1000,7").unwrap();
        for (a, b) in g.iter().zip(default_grid()) {
            assert!((a - b).abs() <= 1e-12 * b);
        }
        assert_eq!(parse_grid("log:2,2,1").unwrap(), [2.0]);
        for bad in [
            "",
            "a",
            "-1",
            "log:0,1,3",
            "log:1,2",
            "log:2,1,3",
            "log:1,2,0",
            "1,nan",
            "inf",
        ] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }
}
