use serde::{Deserialize, Serialize};

use crate::exact::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

/// Output of one command. `elapsed_ms` is the only field that may differ
/// between runs on identical input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub verdict: bool,
    pub entries: Vec<Entry>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self { command: command.into(), verdict: true, entries: Vec::new(), elapsed_ms: 0 }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push(Entry { key: key.into(), value: value.to_string() });
        self
    }

    pub fn push_rational(&mut self, key: impl Into<String>, value: &Rational) -> &mut Self {
        self.push(key, format_rational(value))
    }

    pub fn push_float(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.push(key, format_float(value))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|e| e.key == key).map(|e| e.value.as_str())
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("command: {}\nverdict: {}\n", self.command, self.verdict);
        for e in &self.entries {
            out.push_str(&format!("{}: {}\n", e.key, e.value));
        }
        out.push_str(&format!("elapsed_ms: {}\n", self.elapsed_ms));
        out
    }

    pub fn render_structured(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn parse_structured(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Twelve significant digits; positional unless the magnitude is extreme.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    if (-4..12).contains(&magnitude) {
        let decimals = (11 - magnitude).max(0) as usize;
        let s = format!("{v:.decimals$}");
        // Rounding can carry into a new leading digit; that only adds a
        // trailing digit, which is dropped.
        let digits = s.chars().filter(char::is_ascii_digit).skip_while(|&c| c == '0').count();
        if digits > 12 && s.contains('.') {
            s[..s.len() - 1].trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.11e}")
    }
}
