//! Neighborhood name canonicalization.
//!
//! Source tables spell the same place differently ("Bedford-Stuyvesant",
//! "Bedford Stuyvesant", "Hunts Point – Mott Haven"). Every name is folded to a
//! canonical form before any comparison: lowercase, every character that is not
//! a letter or digit becomes a space, and runs of whitespace collapse to one
//! space. An optional [`AliasTable`] is then applied to map known variants onto
//! one canonical spelling. Nothing else is inferred; "hunts point mott haven"
//! and "mott haven" stay distinct unless an alias says otherwise.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Normalizes a raw name without applying any alias table.
pub fn canonicalize_name(raw: &str) -> Result<String> {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for c in raw.chars().flat_map(char::to_lowercase) {
        if c.is_alphanumeric() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(c);
        } else {
            pending_space = true;
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidName(raw.to_string()));
    }
    Ok(out)
}

/// Maps alternative spellings onto a canonical neighborhood name.
///
/// Keys and aliases are both stored in normalized form. Construction rejects
/// tables where an alias points at two names or where a canonical name is
/// itself an alias, so a single lookup is always a fixed point.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasTable {
    lookup: BTreeMap<String, String>,
}

impl AliasTable {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a table from `canonical -> [alias, ...]` groups.
    pub fn from_groups<I, K, A, S>(groups: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, A)>,
        K: AsRef<str>,
        A: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut lookup: BTreeMap<String, String> = BTreeMap::new();
        let mut keys = Vec::new();
        for (key, aliases) in groups {
            let canonical = canonicalize_name(key.as_ref())
                .map_err(|_| Error::InvalidAliases(format!("empty canonical name {:?}", key.as_ref())))?;
            for alias in aliases {
                let folded = canonicalize_name(alias.as_ref()).map_err(|_| {
                    Error::InvalidAliases(format!("empty alias {:?} for {canonical:?}", alias.as_ref()))
                })?;
                if folded == canonical {
                    continue;
                }
                match lookup.get(&folded) {
                    Some(existing) if existing != &canonical => {
                        return Err(Error::InvalidAliases(format!(
                            "alias {folded:?} maps to both {existing:?} and {canonical:?}"
                        )));
                    }
                    _ => {
                        lookup.insert(folded, canonical.clone());
                    }
                }
            }
            keys.push(canonical);
        }
        if let Some(key) = keys.iter().find(|k| lookup.contains_key(*k)) {
            return Err(Error::InvalidAliases(format!(
                "{key:?} is used both as a canonical name and as an alias"
            )));
        }
        Ok(Self { lookup })
    }

    /// Parses the JSON alias file format `{"<canonical>": ["alias", ...]}`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let groups: BTreeMap<String, Vec<String>> = serde_json::from_str(text)
            .map_err(|e| Error::InvalidAliases(format!("malformed alias file: {e}")))?;
        Self::from_groups(groups)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    /// Canonicalizes `raw`, then resolves it through the alias table.
    pub fn canonicalize(&self, raw: &str) -> Result<String> {
        let folded = canonicalize_name(raw)?;
        Ok(self.lookup.get(&folded).cloned().unwrap_or(folded))
    }

    pub fn len(&self) -> usize {
        self.lookup.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lookup.is_empty()
    }
}
