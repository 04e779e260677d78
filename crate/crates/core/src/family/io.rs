//! Family file format.
//!
//! ```text
//! {
//!   "n": 7,
//!   "k": 3,
//!   "sets": [
//!     [1, 2, 4],
//!     ...
//!   ],
//!   "witness": [
//!     [2, 3, 4, 5, 6, 7, 1]
//!   ]
//! }
//! ```
//!
//! Elements and permutation images are 1-based. `k` may be `null`, `witness`
//! may be absent. Written files list sets in ascending lexicographic order of
//! their sorted element lists, so writing a re-read file reproduces its bytes.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{SetFamily, SubsetMask};
use crate::error::{Error, Result};
use crate::symmetry::{GroupWitness, Permutation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDocument {
    pub n: usize,
    pub k: Option<usize>,
    pub sets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<usize>>>,
}

impl FamilyDocument {
    pub fn from_family(family: &SetFamily, witness: Option<&GroupWitness>) -> Self {
        let mut sets: Vec<Vec<usize>> = family.iter().map(|s| s.to_one_based()).collect();
        sets.sort();
        FamilyDocument {
            n: family.n(),
            k: family.k(),
            sets,
            witness: witness.map(|w| w.generators().iter().map(|g| g.to_one_based()).collect()),
        }
    }

    pub fn to_family(&self) -> Result<(SetFamily, Option<GroupWitness>)> {
        let masks = self
            .sets
            .iter()
            .map(|s| {
                let mask = SubsetMask::from_one_based(self.n, s.iter().copied())?;
                if mask.len() != s.len() {
                    return Err(Error::Format(format!("repeated element in set {s:?}")));
                }
                Ok(mask)
            })
            .collect::<Result<Vec<_>>>()?;
        let family = match self.k {
            Some(k) => SetFamily::uniform(self.n, k, masks)?,
            None => SetFamily::new(self.n, masks)?,
        };
        let witness = match &self.witness {
            None => None,
            Some(gens) => {
                let perms = gens
                    .iter()
                    .map(|g| Permutation::from_one_based(g))
                    .collect::<Result<Vec<_>>>()?;
                Some(GroupWitness::new(self.n, perms)?)
            }
        };
        Ok((family, witness))
    }

    /// Canonical text: one set per line, elements ascending.
    pub fn to_canonical_string(&self) -> String {
        fn list(v: &[usize]) -> String {
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("[{}]", parts.join(", "))
        }
        fn block(out: &mut String, rows: &[Vec<usize>]) {
            if rows.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, r) in rows.iter().enumerate() {
                let sep = if i + 1 == rows.len() { "" } else { "," };
                let _ = writeln!(out, "    {}{}", list(r), sep);
            }
            out.push_str("  ]");
        }
        let mut out = String::new();
        let _ = writeln!(out, "{{");
        let _ = writeln!(out, "  \"n\": {},", self.n);
        match self.k {
            Some(k) => {
                let _ = writeln!(out, "  \"k\": {k},");
            }
            None => {
                let _ = writeln!(out, "  \"k\": null,");
            }
        }
        out.push_str("  \"sets\": ");
        block(&mut out, &self.sets);
        if let Some(w) = &self.witness {
            out.push_str(",\n  \"witness\": ");
            block(&mut out, w);
        }
        out.push_str("\n}\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

pub fn write_family(path: &Path, family: &SetFamily, witness: Option<&GroupWitness>) -> Result<()> {
    let doc = FamilyDocument::from_family(family, witness);
    std::fs::write(path, doc.to_canonical_string())
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn read_family(path: &Path) -> Result<(SetFamily, Option<GroupWitness>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    FamilyDocument::parse(&text)?.to_family()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::translates_family;

    #[test]
    fn canonical_text_round_trips() {
        let fano =
            translates_family(&SubsetMask::from_zero_based(7, [0, 1, 3]).unwrap()).unwrap();
        let rot = Permutation::rotation(7, 1);
        let w = GroupWitness::new(7, vec![rot]).unwrap();
        let doc = FamilyDocument::from_family(&fano, Some(&w));
        let text = doc.to_canonical_string();
        assert!(text.contains("\"sets\": [\n    [1, 2, 4],"));
        let back = FamilyDocument::parse(&text).unwrap();
        let (fam, wit) = back.to_family().unwrap();
        assert_eq!(fam, fano);
        assert_eq!(wit.unwrap(), w);
        assert_eq!(back.to_canonical_string(), text);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(FamilyDocument::parse(r#"{"n": 3, "k": 2, "sets": [[1, 4]]}"#)
            .unwrap()
            .to_family()
            .is_err());
        assert!(FamilyDocument::parse(r#"{"n": 3, "k": 2, "sets": [[1, 1]]}"#)
            .unwrap()
            .to_family()
            .is_err());
        assert!(FamilyDocument::parse(r#"{"n": 3, "k": 1, "sets": [], "extra": 1}"#).is_err());
        let doc = FamilyDocument::parse(r#"{"n": 3, "k": null, "sets": []}"#).unwrap();
        assert_eq!(doc.to_canonical_string(), "{\n  \"n\": 3,\n  \"k\": null,\n  \"sets\": []\n}\n");
    }
}
