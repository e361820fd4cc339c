//! Badge-name -> action-class table. Stack Exchange names badges with
//! aliases per tier ("Editor" / "Strunk & White" / "Copy Editor" for edits),
//! so the mapping is data, supplied as a two-column tab-separated file.

use std::collections::BTreeMap;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::types::ActionClass;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassMap {
    map: BTreeMap<String, ActionClass>,
}

impl ClassMap {
    pub fn new(entries: impl IntoIterator<Item = (String, ActionClass)>) -> Self {
        ClassMap {
            map: entries.into_iter().collect(),
        }
    }

    /// The standard Stack Exchange aliases for the edit and vote ladders.
    pub fn stack_exchange_defaults() -> Self {
        let entries = [
            ("Editor", ActionClass::Edit),
            ("Strunk & White", ActionClass::Edit),
            ("Copy Editor", ActionClass::Edit),
            ("Supporter", ActionClass::Vote),
            ("Critic", ActionClass::Vote),
            ("Civic Duty", ActionClass::Vote),
            ("Electorate", ActionClass::Vote),
        ];
        ClassMap::new(entries.map(|(n, c)| (n.to_string(), c)))
    }

    /// Parse a `name<TAB>class` table. Blank lines and `#` comments are
    /// ignored; class is one of `edit`, `vote`, `other`.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (name, class) = trimmed.rsplit_once('\t').ok_or(Error::ClassMap {
                line: idx + 1,
                message: "expected `name<TAB>class`".to_string(),
            })?;
            let class: ActionClass = class.trim().parse().map_err(|e| Error::ClassMap {
                line: idx + 1,
                message: e,
            })?;
            map.insert(name.trim().to_string(), class);
        }
        Ok(ClassMap { map })
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for (name, class) in &self.map {
            out.push_str(&format!("{name}\t{class}\n"));
        }
        out
    }

    /// Look up a badge name; unmapped names are `Other`.
    pub fn lookup(&self, name: &str) -> ActionClass {
        self.map.get(name).copied().unwrap_or(ActionClass::Other)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_cover_the_badge_ladders() {
        let m = ClassMap::stack_exchange_defaults();
        assert_eq!(m.lookup("Strunk & White"), ActionClass::Edit);
        assert_eq!(m.lookup("Copy Editor"), ActionClass::Edit);
        assert_eq!(m.lookup("Civic Duty"), ActionClass::Vote);
        assert_eq!(m.lookup("Electorate"), ActionClass::Vote);
        assert_eq!(m.lookup("Nice Answer"), ActionClass::Other);
    }

    #[test]
    fn table_round_trip() {
        let m = ClassMap::stack_exchange_defaults();
        let text = m.to_table();
        let back = ClassMap::from_reader(text.as_bytes()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn parses_comments_and_blanks() {
        let text = "# mapping\n\nStrunk & White\tedit\nCivic Duty\tvote\n";
        let m = ClassMap::from_reader(text.as_bytes()).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.lookup("Civic Duty"), ActionClass::Vote);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(ClassMap::from_reader("no-tab-here".as_bytes()).is_err());
        assert!(ClassMap::from_reader("Name\tbogus".as_bytes()).is_err());
    }
}
