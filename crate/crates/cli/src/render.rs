use ramicalc::exactmath::decimal_string;
use ramicalc::Rat;
use serde_json::Value;

/// Right-hand side of a table line.
pub enum Cell {
    Num(Rat),
    Text(String),
}

pub struct Line {
    key: String,
    rel: &'static str,
    value: Cell,
}

/// Everything a command prints: the JSON document and its table rendering.
pub struct Output {
    pub json: Value,
    pub lines: Vec<Line>,
}

impl Output {
    pub fn new(json: Value) -> Self {
        Self {
            json,
            lines: Vec::new(),
        }
    }

    pub fn num(mut self, key: impl Into<String>, rel: &'static str, v: Rat) -> Self {
        self.lines.push(Line {
            key: key.into(),
            rel,
            value: Cell::Num(v),
        });
        self
    }

    pub fn text(mut self, key: impl Into<String>, rel: &'static str, v: impl Into<String>) -> Self {
        self.lines.push(Line {
            key: key.into(),
            rel,
            value: Cell::Text(v.into()),
        });
        self
    }

    pub fn table(&self, decimal: bool) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let value = match &l.value {
                Cell::Num(v) if decimal => format!("{v}  ({})", decimal_string(v, 6)),
                Cell::Num(v) => v.to_string(),
                Cell::Text(t) => t.clone(),
            };
            out.push_str(&format!("{} {} {value}\n", l.key, l.rel));
        }
        out
    }

    pub fn json_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

pub fn rat(v: &Rat) -> Value {
    Value::String(v.to_string())
}
