//! Matrix input files.
//!
//! ```json
//! { "schema": 1, "name": "disk", "n": 2, "entries": [[[0, 1], "1"], ["0", "i"]] }
//! ```
//!
//! Entries are `[re, im]` pairs, `[w, x, y, z]` quaternions, or strings
//! such as `"1-2.5i"` or `"1+i-3k"`.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use qbild::linalg::CMatrix;
use qbild::quat::{QMatrix, Quaternion};
use qbild::SCHEMA_VERSION;
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Entry {
    Complex(Complex64),
    Quaternion(Quaternion),
}

impl Entry {
    fn arity(self) -> usize {
        match self {
            Entry::Complex(_) => 2,
            Entry::Quaternion(_) => 4,
        }
    }

    fn quaternion(self) -> Quaternion {
        match self {
            Entry::Complex(z) => Quaternion::from_complex(z),
            Entry::Quaternion(q) => q,
        }
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let values = match *self {
            Entry::Complex(z) => vec![z.re, z.im],
            Entry::Quaternion(q) => q.to_array().to_vec(),
        };
        let mut seq = serializer.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

struct EntryVisitor;

impl<'de> Visitor<'de> for EntryVisitor {
    type Value = Entry;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("[re, im], [w, x, y, z] or a string like \"1-2i\"")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Entry, A::Error> {
        let mut values = Vec::with_capacity(4);
        while let Some(v) = seq.next_element::<f64>()? {
            values.push(v);
        }
        match values[..] {
            [re, im] => Ok(Entry::Complex(Complex64::new(re, im))),
            [w, x, y, z] => Ok(Entry::Quaternion(Quaternion::new(w, x, y, z))),
            _ => Err(de::Error::invalid_length(values.len(), &self)),
        }
    }

    fn visit_str<E: de::Error>(self, s: &str) -> Result<Entry, E> {
        parse_entry(s).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(EntryVisitor)
    }
}

/// Parses `a+bi` style text; a `j` or `k` term makes the entry quaternionic.
pub fn parse_entry(text: &str) -> Result<Entry, String> {
    let t: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty entry".into());
    }
    let mut coeffs = [0.0; 4];
    let mut seen = [false; 4];
    let mut pos = 0;
    while pos < t.len() {
        let sign = match t[pos] {
            '+' => 1.0,
            '-' => -1.0,
            _ if pos == 0 => 1.0,
            c => return Err(format!("unexpected '{c}' in \"{text}\"")),
        };
        if matches!(t[pos], '+' | '-') {
            pos += 1;
        }
        let start = pos;
        while pos < t.len() {
            match t[pos] {
                '0'..='9' | '.' => pos += 1,
                'e' | 'E' if pos > start => {
                    pos += 1;
                    if pos < t.len() && matches!(t[pos], '+' | '-') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let digits: String = t[start..pos].iter().collect();
        let unit = match t.get(pos) {
            Some('i') => 1,
            Some('j') => 2,
            Some('k') => 3,
            _ => 0,
        };
        if unit > 0 {
            pos += 1;
        }
        let value = if digits.is_empty() {
            if unit == 0 {
                return Err(format!("missing number in \"{text}\""));
            }
            1.0
        } else {
            digits
                .parse::<f64>()
                .map_err(|_| format!("bad number \"{digits}\" in \"{text}\""))?
        };
        if seen[unit] {
            return Err(format!("repeated component in \"{text}\""));
        }
        seen[unit] = true;
        coeffs[unit] = sign * value;
    }
    Ok(if seen[2] || seen[3] {
        Entry::Quaternion(Quaternion::from_array(coeffs))
    } else {
        Entry::Complex(Complex64::new(coeffs[0], coeffs[1]))
    })
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    #[serde(default = "schema_version")]
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub entries: Vec<Vec<Entry>>,
}

impl MatrixFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| CliError::json(origin, e))?;
        let fail = |message: String| CliError::Format {
            path: origin.to_owned(),
            message,
        };
        if file.schema != SCHEMA_VERSION {
            return Err(fail(format!("unsupported schema {}", file.schema)));
        }
        if file.n == 0 {
            return Err(fail("n must be positive".into()));
        }
        if file.entries.len() != file.n {
            return Err(fail(format!("expected {} rows, found {}", file.n, file.entries.len())));
        }
        if let Some((r, row)) = file.entries.iter().enumerate().find(|(_, row)| row.len() != file.n) {
            return Err(fail(format!("row {r} has {} entries, expected {}", row.len(), file.n)));
        }
        let arity = file.entries[0][0].arity();
        if file.entries.iter().flatten().any(|e| e.arity() != arity) {
            return Err(fail("entries mix complex and quaternion arity".into()));
        }
        Ok(file)
    }

    pub fn is_complex(&self) -> bool {
        matches!(self.entries[0][0], Entry::Complex(_))
    }

    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("{n}x{n} matrix", n = self.n))
    }

    pub fn complex(&self) -> Result<CMatrix> {
        if !self.is_complex() {
            return Err(CliError::NotComplex(self.label()));
        }
        Ok(CMatrix::from_fn(self.n, self.n, |r, c| match self.entries[r][c] {
            Entry::Complex(z) => z,
            Entry::Quaternion(_) => unreachable!("arity checked on parse"),
        }))
    }

    pub fn quaternion(&self) -> QMatrix {
        QMatrix::from_fn(self.n, |r, c| self.entries[r][c].quaternion())
    }
}
