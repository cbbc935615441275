//! Grid arguments: `start:step:end` (inclusive) or a comma-separated list.

use crate::error::{CliError, CliResult};

pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("bad grid {spec:?}: use start:step:end or a,b,c"));
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let grid = match parts.as_slice() {
        [start, step, end] => {
            let (a, h, b): (f64, f64, f64) = (
                start.parse().map_err(|_| bad())?,
                step.parse().map_err(|_| bad())?,
                end.parse().map_err(|_| bad())?,
            );
            if !(h > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
                return Err(bad());
            }
            let count = ((b - a) / h + 1e-9).floor() as usize;
            if count > 10_000_000 {
                return Err(bad());
            }
            // index times step avoids accumulated drift
            (0..=count).map(|i| a + i as f64 * h).collect()
        }
        [list] => list
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<CliResult<Vec<f64>>>()?,
        _ => return Err(bad()),
    };
    if grid.is_empty() || grid.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_grid("0:0.5:2").unwrap(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(parse_grid("0:0.1:1").unwrap().len(), 11);
        assert_eq!(parse_grid("0.3").unwrap(), vec![0.3]);
        assert_eq!(parse_grid("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_grid("1:0:2").is_err());
        assert!(parse_grid("2:1:1").is_err());
        assert!(parse_grid("a,b").is_err());
        assert!(parse_grid("1:2").is_err());
    }
}
