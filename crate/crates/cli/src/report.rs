use serde_json::{Map, Value};

/// A table cell and how it is rendered.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    /// Six fixed decimals in CSV; rounded to six places in JSON.
    Dec(f64),
    /// Six significant decimals in scientific notation; full precision in JSON.
    Sci(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Dec(v) => format!("{:.6}", round6(*v)),
            Cell::Sci(v) => format!("{v:.6e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Dec(v) => Value::from(round6(*v)),
            Cell::Sci(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

fn round6(v: f64) -> f64 {
    let r = (v * 1e6).round() / 1e6;
    // avoid emitting -0.0
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// One command's output: metadata plus a rectangular table.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub seed: Option<u64>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Self { command, inputs: Map::new(), seed: None, columns, rows: Vec::new() }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_owned(), value.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let data = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    self.columns.iter().zip(row).map(|(c, v)| ((*c).to_owned(), v.json())).collect();
                Value::Object(obj)
            })
            .collect();
        let mut meta = Map::new();
        meta.insert("command".into(), self.command.into());
        meta.insert("inputs".into(), Value::Object(self.inputs.clone()));
        meta.insert("seed".into(), self.seed.map_or(Value::Null, Value::from));
        meta.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        let mut top = Map::new();
        top.insert("data".into(), Value::Array(data));
        top.insert("meta".into(), Value::Object(meta));
        Value::Object(top)
    }

    pub fn to_json(&self) -> String {
        render_json(&self.to_json_value())
    }
}

/// Canonical JSON text: sorted keys, two-space indent, trailing newline.
pub fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}
