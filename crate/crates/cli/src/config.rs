//! Optional `key = value` run configuration. Command-line flags take precedence.

use std::path::Path;

use pauli_sos::hierarchies::HierarchyOptions;

use crate::io::ParseError;

/// Default qubit cap for dense eigensolves.
pub const DEFAULT_DENSE_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub hierarchy: HierarchyOptions,
    pub dense_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { hierarchy: HierarchyOptions::default(), dense_cap: DEFAULT_DENSE_CAP }
    }
}

fn bad(line: usize, msg: String) -> ParseError {
    ParseError { line, message: msg }
}

impl Config {
    /// Recognized keys: `tol`, `max_iter`, `basis_cap`, `qubit_cap`, `dense_cap`.
    pub fn parse(text: &str) -> Result<Config, ParseError> {
        let mut cfg = Config::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| bad(line, format!("expected key = value, got `{body}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let int = || value.parse::<usize>().map_err(|_| bad(line, format!("`{key}` needs a non-negative integer")));
            match key {
                "tol" => {
                    let tol: f64 = value.parse().map_err(|_| bad(line, "`tol` needs a number".into()))?;
                    if !(tol > 0.0 && tol < 1.0) {
                        return Err(bad(line, format!("tol = {tol} outside (0, 1)")));
                    }
                    cfg.hierarchy.solver.tol = tol;
                }
                "max_iter" => cfg.hierarchy.solver.max_iter = int()?,
                "basis_cap" => cfg.hierarchy.basis_cap = int()?,
                "qubit_cap" => cfg.hierarchy.qubit_cap = int()?,
                "dense_cap" => cfg.dense_cap = int()?,
                other => return Err(bad(line, format!("unknown key `{other}`"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(0, format!("{}: {e}", path.display())))?;
        Config::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys() {
        let c = Config::parse("tol = 1e-9\n# note\nmax_iter=50 # inline\nqubit_cap = 3\n").unwrap();
        assert_eq!(c.hierarchy.solver.tol, 1e-9);
        assert_eq!(c.hierarchy.solver.max_iter, 50);
        assert_eq!(c.hierarchy.qubit_cap, 3);
        assert_eq!(c.dense_cap, DEFAULT_DENSE_CAP);
        assert_eq!(Config::parse("a=1").unwrap_err().line, 1);
        assert_eq!(Config::parse("\ntol=2").unwrap_err().line, 2);
    }
}
