use std::fmt;
use std::str::FromStr;

/// Decimal places for numeric output, or the shortest round-trip form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Digits(usize),
    Full,
}

impl Default for Precision {
    fn default() -> Self {
        Precision::Digits(5)
    }
}

impl Precision {
    pub fn fmt(self, x: f64) -> String {
        if x.is_nan() {
            return "NaN".into();
        }
        if x.is_infinite() {
            return if x > 0.0 { "inf".into() } else { "-inf".into() };
        }
        // avoid printing "-0.00000" for tiny negatives
        let s = match self {
            Precision::Digits(p) => format!("{x:.p$}"),
            Precision::Full => format!("{x:?}"),
        };
        if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
            s[1..].to_string()
        } else {
            s
        }
    }
}

impl FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("full") {
            return Ok(Precision::Full);
        }
        match s.parse::<usize>() {
            Ok(p) if p <= 17 => Ok(Precision::Digits(p)),
            _ => Err(format!("expected a digit count 0..=17 or `full`, got `{s}`")),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Digits(p) => write!(f, "{p}"),
            Precision::Full => f.write_str("full"),
        }
    }
}

/// Header plus rows, `\n` line endings, quoting only where needed.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}
