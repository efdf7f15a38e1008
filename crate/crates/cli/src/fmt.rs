//! Output helpers: 17-significant-digit floats and flat JSON objects.

/// Formats with 17 significant digits, enough to round-trip any f64 exactly.
pub fn float17(value: f64) -> String {
    format!("{value:.16e}")
}

/// A flat JSON object printed with one field per line. Numeric fields go
/// through [`float17`] so output parses back to bit-identical values.
#[derive(Default)]
pub struct JsonObject {
    fields: Vec<(String, String)>,
}

impl JsonObject {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn float(mut self, key: &str, value: f64) -> Self {
        self.fields.push((key.to_string(), float17(value)));
        self
    }

    pub fn optional_float(mut self, key: &str, value: Option<f64>) -> Self {
        let rendered = value.map_or_else(|| "null".to_string(), float17);
        self.fields.push((key.to_string(), rendered));
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::from("{\n");
        for (idx, (key, value)) in self.fields.iter().enumerate() {
            let comma = if idx + 1 == self.fields.len() { "" } else { "," };
            out.push_str(&format!("  {key:?}: {value}{comma}\n"));
        }
        out.push('}');
        out
    }
}
