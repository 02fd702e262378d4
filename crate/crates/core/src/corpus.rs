//! Bundled March algorithms.

use crate::march::{parse_march, MarchAlgorithm};

/// Coverage figures published for an algorithm over the 86 static primitives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Published {
    /// Headline count.
    pub detected: usize,
    /// Number of primitives actually itemized in the published table.
    pub itemized: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub file: &'static str,
    pub source: &'static str,
    pub published: Option<Published>,
}

impl CorpusEntry {
    pub fn algorithm(&self) -> MarchAlgorithm {
        parse_march(self.source).expect("bundled March parses").with_name(self.name)
    }
}

pub const CORPUS: [CorpusEntry; 5] = [
    CorpusEntry {
        name: "MATS+",
        file: "mats_plus.march",
        source: include_str!("../corpus/mats_plus.march"),
        published: None,
    },
    CorpusEntry {
        name: "March C-",
        file: "march_c_minus.march",
        source: include_str!("../corpus/march_c_minus.march"),
        published: None,
    },
    CorpusEntry {
        name: "March A",
        file: "march_a.march",
        source: include_str!("../corpus/march_a.march"),
        published: Some(Published { detected: 44, itemized: 44 }),
    },
    CorpusEntry {
        name: "March B",
        file: "march_b.march",
        source: include_str!("../corpus/march_b.march"),
        published: Some(Published { detected: 47, itemized: 47 }),
    },
    CorpusEntry {
        name: "March SR",
        file: "march_sr.march",
        source: include_str!("../corpus/march_sr.march"),
        published: Some(Published { detected: 62, itemized: 60 }),
    },
];

fn key(s: &str) -> String {
    s.chars()
        .map(|c| if c == '−' { '-' } else { c.to_ascii_lowercase() })
        .filter(|c| c.is_ascii_alphanumeric() || *c == '+' || *c == '-')
        .collect()
}

/// Finds a bundled algorithm by name (`"March A"`, `"march-a"`, `"mats+"`) or file stem.
pub fn lookup(name: &str) -> Option<&'static CorpusEntry> {
    let k = key(name);
    CORPUS.iter().find(|e| {
        let stem = e.file.trim_end_matches(".march");
        key(e.name) == k || key(stem) == k || stem == name
    })
}
