//! The fenced `key=value` block appended to every report.

use std::collections::BTreeMap;

pub const OPEN: &str = "---machine---";
pub const CLOSE: &str = "---end---";

/// Decimal with 17 significant digits: round-trips any `f64` exactly.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MachineBlock {
    entries: Vec<(String, String)>,
}

impl MachineBlock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn put_num(&mut self, key: &str, value: f64) -> &mut Self {
        self.put(key, num(value))
    }

    pub fn put_opt_num(&mut self, key: &str, value: Option<f64>) -> &mut Self {
        match value {
            Some(v) => self.put_num(key, v),
            None => self.put(key, "undefined"),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(OPEN);
        out.push('\n');
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out.push_str(CLOSE);
        out.push('\n');
        out
    }
}

/// Extracts the first machine block of a report.
pub fn parse_machine_block(report: &str) -> Option<BTreeMap<String, String>> {
    let start = report.find(OPEN)? + OPEN.len();
    let end = start + report[start..].find(CLOSE)?;
    Some(
        report[start..end]
            .lines()
            .filter_map(|l| l.split_once('='))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
    )
}

/// The machine block text itself, markers included.
pub fn machine_block_text(report: &str) -> Option<&str> {
    let start = report.find(OPEN)?;
    let end = start + report[start..].find(CLOSE)? + CLOSE.len();
    Some(&report[start..end])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_and_parses() {
        let mut b = MachineBlock::new();
        b.put("mode", "excess").put_num("tau_star", 2f64.ln()).put_opt_num("x", None);
        let text = format!("human part\n{}", b.render());
        let parsed = parse_machine_block(&text).unwrap();
        assert_eq!(parsed["mode"], "excess");
        assert_eq!(parsed["tau_star"].parse::<f64>().unwrap(), 2f64.ln());
        assert_eq!(parsed["x"], "undefined");
        assert!(machine_block_text(&text).unwrap().ends_with(CLOSE));
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2f64.ln(), 1e-300, -5e-324, 123456.789] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }
}
