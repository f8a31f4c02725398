//! `VAR:START:STOP:COUNT[:log]` grid definitions and their products.

use std::str::FromStr;

use crate::Validation;

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub var: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.log {
            qnet::scenarios::logspace(self.start, self.stop, self.count)
        } else {
            let step = (self.stop - self.start) / (self.count - 1) as f64;
            (0..self.count)
                .map(|k| {
                    if k + 1 == self.count {
                        self.stop
                    } else {
                        self.start + step * k as f64
                    }
                })
                .collect()
        }
    }
}

impl FromStr for GridSpec {
    type Err = Validation;

    fn from_str(s: &str) -> Result<Self, Validation> {
        let bad = |msg: String| Validation(format!("grid '{s}': {msg}"));
        let parts: Vec<&str> = s.split(':').collect();
        if !(4..=5).contains(&parts.len()) {
            return Err(bad("expected VAR:START:STOP:COUNT[:log]".into()));
        }
        let var = parts[0].trim();
        if var.is_empty() {
            return Err(bad("empty variable name".into()));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(format!("'{t}' is not a finite number")))
        };
        let start = num(parts[1])?;
        let stop = num(parts[2])?;
        let count: usize = parts[3]
            .trim()
            .parse()
            .map_err(|_| bad(format!("'{}' is not a count", parts[3])))?;
        if count < 2 {
            return Err(bad(format!("count must be at least 2, got {count}")));
        }
        let log = match parts.get(4).map(|t| t.trim()) {
            None | Some("lin") | Some("linear") => false,
            Some("log") => true,
            Some(other) => return Err(bad(format!("unknown scale '{other}'"))),
        };
        if log && !(start > 0.0 && stop > 0.0) {
            return Err(bad("log scale needs positive endpoints".into()));
        }
        Ok(GridSpec {
            var: var.to_string(),
            start,
            stop,
            count,
            log,
        })
    }
}

/// Cartesian product in flag order, first grid outermost. Each point holds
/// one value per grid.
pub fn product(grids: &[GridSpec], allowed: &[&str]) -> Result<Vec<Vec<f64>>, Validation> {
    for (k, g) in grids.iter().enumerate() {
        if !allowed.contains(&g.var.as_str()) {
            return Err(Validation(format!(
                "grid variable '{}' not sweepable here (allowed: {})",
                g.var,
                allowed.join(", ")
            )));
        }
        if grids[..k].iter().any(|h| h.var == g.var) {
            return Err(Validation(format!("grid variable '{}' given twice", g.var)));
        }
    }
    let mut points = vec![Vec::new()];
    for g in grids {
        let vals = g.values();
        points = points
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_linear_and_log() {
        let g: GridSpec = "xi:0.25:1:4".parse().unwrap();
        assert_eq!(g.values(), vec![0.25, 0.5, 0.75, 1.0]);
        let l: GridSpec = "g_script:0.1:10:3:log".parse().unwrap();
        let v = l.values();
        assert!((v[1] - 1.0).abs() < 1e-14 && (v[2] - 10.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_grids() {
        for s in ["x:0:1:1", "x:0:1:0", "x:0:1", "x:a:1:3", "x:0:1:3:cubic", "x:-1:1:3:log", "x:0:1:3:log", ":0:1:3"] {
            assert!(s.parse::<GridSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn product_order() {
        let a: GridSpec = "a:0:1:2".parse().unwrap();
        let b: GridSpec = "b:10:30:3".parse().unwrap();
        let p = product(&[a.clone(), b], &["a", "b"]).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0.0, 10.0]);
        assert_eq!(p[1], vec![0.0, 20.0]);
        assert_eq!(p[3], vec![1.0, 10.0]);
        assert!(product(&[a.clone(), a.clone()], &["a"]).is_err());
        assert!(product(&[a], &["b"]).is_err());
    }
}
