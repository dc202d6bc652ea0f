use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Names of the `x`-variables of a ring, in index order.
///
/// Names are `x`, `y` optionally followed by a decimal index (`x`, `x1`,
/// `y2`, ...). Inferred tables list names in canonical order: `x` names
/// before `y` names, the bare name first, then by numeric index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vars {
    names: Vec<String>,
}

fn split_name(name: &str) -> Option<(char, Option<u64>)> {
    let mut chars = name.chars();
    let head = chars.next()?;
    if head != 'x' && head != 'y' {
        return None;
    }
    let rest = chars.as_str();
    if rest.is_empty() {
        return Some((head, None));
    }
    if !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok().map(|i| (head, Some(i)))
}

/// Canonical ordering of variable names.
pub fn canonical_name_cmp(a: &str, b: &str) -> Ordering {
    match (split_name(a), split_name(b)) {
        (Some((ha, ia)), Some((hb, ib))) => ha
            .cmp(&hb)
            .then_with(|| ia.cmp(&ib))
            .then_with(|| a.cmp(b)),
        _ => a.cmp(b),
    }
}

impl Vars {
    pub fn new(names: Vec<String>) -> Result<Self> {
        for (i, n) in names.iter().enumerate() {
            if split_name(n).is_none() {
                return Err(Error::Format(format!("illegal variable name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::Format(format!("duplicate variable name `{n}`")));
            }
        }
        Ok(Vars { names })
    }

    /// `x` for one variable, `x, y` for two, `x1..xn` otherwise.
    pub fn standard(n: usize) -> Self {
        let names = match n {
            0 => vec![],
            1 => vec!["x".to_string()],
            2 => vec!["x".to_string(), "y".to_string()],
            _ => (1..=n).map(|i| format!("x{i}")).collect(),
        };
        Vars { names }
    }

    /// Collects every variable name occurring in `texts`, sorted canonically.
    pub fn infer<S: AsRef<str>>(texts: &[S]) -> Self {
        let mut names: Vec<String> = Vec::new();
        for t in texts {
            for n in scan_names(t.as_ref()) {
                if !names.contains(&n) {
                    names.push(n);
                }
            }
        }
        names.sort_by(|a, b| canonical_name_cmp(a, b));
        Vars { names }
    }

    /// Canonically sorted union of two tables.
    pub fn union(&self, other: &Vars) -> Vars {
        let mut names = self.names.clone();
        for n in &other.names {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
        names.sort_by(|a, b| canonical_name_cmp(a, b));
        Vars { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

fn scan_names(text: &str) -> Vec<String> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_alphabetic() {
            let start = i;
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if c == b'x' || c == b'y' {
                out.push(text[start..i].to_string());
            }
        } else {
            i += 1;
        }
    }
    out
}
