//! Finite relational vocabularies, structures and assignments, together with
//! the line-oriented structure file format.
//!
//! Universe elements are the indices `0..n`; their index order is the order
//! of the structure.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

/// Errors raised while building or parsing a [`Structure`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: tuple length {got} does not match arity {arity} of `{name}`")]
    ArityMismatch {
        line: usize,
        name: String,
        arity: usize,
        got: usize,
    },
    #[error("line {line}: element {element} out of range for universe of size {size}")]
    ElementOutOfRange {
        line: usize,
        element: usize,
        size: usize,
    },
    #[error("line {line}: duplicate relation block `{name}`")]
    DuplicateRelation { line: usize, name: String },
    #[error("invalid symbol `{name}`: {msg}")]
    InvalidSymbol { name: String, msg: String },
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
}

/// An ordered list of relation symbols with their arities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    symbols: Vec<(String, usize)>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a symbol; names must be unique identifiers and arities positive.
    pub fn add(&mut self, name: &str, arity: usize) -> Result<usize, ModelError> {
        if !is_identifier(name) {
            return Err(ModelError::InvalidSymbol {
                name: name.to_string(),
                msg: "not an identifier".into(),
            });
        }
        if arity == 0 {
            return Err(ModelError::InvalidSymbol {
                name: name.to_string(),
                msg: "arity must be at least 1".into(),
            });
        }
        if self.index_of(name).is_some() {
            return Err(ModelError::InvalidSymbol {
                name: name.to_string(),
                msg: "duplicate symbol".into(),
            });
        }
        self.symbols.push((name.to_string(), arity));
        Ok(self.symbols.len() - 1)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|(n, _)| n == name)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.symbols[i].1)
    }

    pub fn symbols(&self) -> &[(String, usize)] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Number of tuples in `A^arity`, or `None` on overflow.
pub fn tuple_space(universe_size: usize, arity: usize) -> Option<usize> {
    let mut total: usize = 1;
    for _ in 0..arity {
        total = total.checked_mul(universe_size)?;
    }
    Some(total)
}

/// Mixed-radix rank of a tuple; lexicographic tuple order equals rank order.
pub fn tuple_rank(universe_size: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &e| acc * universe_size + e)
}

/// Inverse of [`tuple_rank`].
pub fn tuple_unrank(universe_size: usize, arity: usize, mut rank: usize) -> Vec<usize> {
    let mut tuple = vec![0; arity];
    for slot in tuple.iter_mut().rev() {
        *slot = rank % universe_size;
        rank /= universe_size;
    }
    tuple
}

/// Iterates over `A^arity` in lexicographic order.
pub fn all_tuples(universe_size: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let count = tuple_space(universe_size, arity).expect("tuple space overflow");
    (0..count).map(move |r| tuple_unrank(universe_size, arity, r))
}

/// A finite relational structure over an ordered universe `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    vocabulary: Vocabulary,
    universe_size: usize,
    relations: Vec<BTreeSet<Vec<usize>>>,
    // Dense membership table per relation, indexed by tuple rank.
    dense: Vec<Vec<bool>>,
}

impl Structure {
    /// Builds a validated structure. Tuples are deduplicated.
    pub fn new(
        vocabulary: Vocabulary,
        universe_size: usize,
        relations: BTreeMap<String, Vec<Vec<usize>>>,
    ) -> Result<Self, ModelError> {
        for name in relations.keys() {
            if vocabulary.index_of(name).is_none() {
                return Err(ModelError::UnknownRelation(name.clone()));
            }
        }
        let mut builder = StructureBuilder::new(universe_size);
        for (name, arity) in vocabulary.symbols() {
            builder.relation(name, *arity)?;
            if let Some(tuples) = relations.get(name) {
                for t in tuples {
                    builder.tuple(name, t)?;
                }
            }
        }
        Ok(builder.build())
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    /// Tuples of the named relation in lexicographic order.
    pub fn relation(&self, name: &str) -> Option<&BTreeSet<Vec<usize>>> {
        self.vocabulary.index_of(name).map(|i| &self.relations[i])
    }

    pub fn relation_by_index(&self, index: usize) -> &BTreeSet<Vec<usize>> {
        &self.relations[index]
    }

    /// Membership test by relation index; the tuple must have the right arity.
    #[inline]
    pub fn holds(&self, index: usize, tuple: &[usize]) -> bool {
        self.dense[index][tuple_rank(self.universe_size, tuple)]
    }

    #[inline]
    pub fn holds_rank(&self, index: usize, rank: usize) -> bool {
        self.dense[index][rank]
    }

    pub fn contains(&self, name: &str, tuple: &[usize]) -> bool {
        match self.vocabulary.index_of(name) {
            Some(i) => {
                tuple.len() == self.vocabulary.symbols()[i].1
                    && tuple.iter().all(|&e| e < self.universe_size)
                    && self.holds(i, tuple)
            }
            None => false,
        }
    }
}

/// Incremental construction of a [`Structure`].
#[derive(Debug, Clone)]
pub struct StructureBuilder {
    vocabulary: Vocabulary,
    universe_size: usize,
    relations: Vec<BTreeSet<Vec<usize>>>,
}

impl StructureBuilder {
    pub fn new(universe_size: usize) -> Self {
        Self {
            vocabulary: Vocabulary::new(),
            universe_size,
            relations: Vec::new(),
        }
    }

    pub fn relation(&mut self, name: &str, arity: usize) -> Result<&mut Self, ModelError> {
        self.vocabulary.add(name, arity)?;
        self.relations.push(BTreeSet::new());
        Ok(self)
    }

    pub fn tuple(&mut self, name: &str, tuple: &[usize]) -> Result<&mut Self, ModelError> {
        let index = self
            .vocabulary
            .index_of(name)
            .ok_or_else(|| ModelError::UnknownRelation(name.to_string()))?;
        let arity = self.vocabulary.symbols()[index].1;
        if tuple.len() != arity {
            return Err(ModelError::ArityMismatch {
                line: 0,
                name: name.to_string(),
                arity,
                got: tuple.len(),
            });
        }
        if let Some(&e) = tuple.iter().find(|&&e| e >= self.universe_size) {
            return Err(ModelError::ElementOutOfRange {
                line: 0,
                element: e,
                size: self.universe_size,
            });
        }
        self.relations[index].insert(tuple.to_vec());
        Ok(self)
    }

    pub fn build(self) -> Structure {
        let n = self.universe_size;
        let dense = self
            .vocabulary
            .symbols()
            .iter()
            .zip(&self.relations)
            .map(|((_, arity), tuples)| {
                let mut table = vec![false; tuple_space(n, *arity).expect("relation too large")];
                for t in tuples {
                    table[tuple_rank(n, t)] = true;
                }
                table
            })
            .collect();
        Structure {
            vocabulary: self.vocabulary,
            universe_size: n,
            relations: self.relations,
            dense,
        }
    }
}

/// First-order assignment: variable name to element.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FoAssignment {
    bindings: HashMap<String, usize>,
}

impl FoAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, var: &str, element: usize) -> &mut Self {
        self.bindings.insert(var.to_string(), element);
        self
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.bindings.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Checks every bound element against the universe size.
    pub fn validate(&self, universe_size: usize) -> Result<(), ModelError> {
        match self.bindings.values().find(|&&e| e >= universe_size) {
            Some(&e) => Err(ModelError::ElementOutOfRange {
                line: 0,
                element: e,
                size: universe_size,
            }),
            None => Ok(()),
        }
    }
}

/// Second-order assignment: variable name to a relation of declared arity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SoAssignment {
    bindings: HashMap<String, (usize, BTreeSet<Vec<usize>>)>,
}

impl SoAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(
        &mut self,
        var: &str,
        arity: usize,
        tuples: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<&mut Self, ModelError> {
        let tuples: BTreeSet<Vec<usize>> = tuples.into_iter().collect();
        if let Some(t) = tuples.iter().find(|t| t.len() != arity) {
            return Err(ModelError::ArityMismatch {
                line: 0,
                name: var.to_string(),
                arity,
                got: t.len(),
            });
        }
        self.bindings.insert(var.to_string(), (arity, tuples));
        Ok(self)
    }

    pub fn get(&self, var: &str) -> Option<(usize, &BTreeSet<Vec<usize>>)> {
        self.bindings.get(var).map(|(a, t)| (*a, t))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize, &BTreeSet<Vec<usize>>)> {
        self.bindings
            .iter()
            .map(|(k, (a, t))| (k.as_str(), *a, t))
    }

    pub fn validate(&self, universe_size: usize) -> Result<(), ModelError> {
        for (_, tuples) in self.bindings.values() {
            if let Some(&e) = tuples.iter().flatten().find(|&&e| e >= universe_size) {
                return Err(ModelError::ElementOutOfRange {
                    line: 0,
                    element: e,
                    size: universe_size,
                });
            }
        }
        Ok(())
    }
}

/// Parses the structure file format.
///
/// ```text
/// structure
/// universe <n>
/// rel <name> <arity>
/// <e1> ... <ek>
/// end
/// end
/// ```
///
/// Lines starting with `#` and blank lines are ignored.
pub fn parse_structure(text: &str) -> Result<Structure, ModelError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let syntax = |line: usize, msg: &str| ModelError::Syntax {
        line,
        msg: msg.to_string(),
    };

    match lines.next() {
        Some((_, "structure")) => {}
        Some((line, _)) => return Err(syntax(line, "expected `structure`")),
        None => return Err(syntax(0, "empty input")),
    }
    let universe_size = match lines.next() {
        Some((line, l)) => {
            let mut words = l.split_whitespace();
            match (words.next(), words.next(), words.next()) {
                (Some("universe"), Some(n), None) => n
                    .parse::<usize>()
                    .map_err(|_| syntax(line, "universe size must be a non-negative integer"))?,
                _ => return Err(syntax(line, "expected `universe <n>`")),
            }
        }
        None => return Err(syntax(0, "missing `universe` line")),
    };

    let mut builder = StructureBuilder::new(universe_size);
    let mut current: Option<(String, usize)> = None;
    let mut finished = false;
    for (line, l) in lines.by_ref() {
        let words: Vec<&str> = l.split_whitespace().collect();
        match &current {
            None => match words.as_slice() {
                ["end"] => {
                    finished = true;
                    break;
                }
                ["rel", name, arity] => {
                    let arity: usize = arity
                        .parse()
                        .map_err(|_| syntax(line, "arity must be a positive integer"))?;
                    if builder.vocabulary.index_of(name).is_some() {
                        return Err(ModelError::DuplicateRelation {
                            line,
                            name: name.to_string(),
                        });
                    }
                    builder.relation(name, arity).map_err(|e| match e {
                        ModelError::InvalidSymbol { msg, .. } => syntax(line, &msg),
                        other => other,
                    })?;
                    current = Some((name.to_string(), arity));
                }
                _ => return Err(syntax(line, "expected `rel <name> <arity>` or `end`")),
            },
            Some((name, arity)) => {
                if words.as_slice() == ["end"] {
                    current = None;
                    continue;
                }
                let tuple = words
                    .iter()
                    .map(|w| w.parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| syntax(line, "tuple elements must be non-negative integers"))?;
                if tuple.len() != *arity {
                    return Err(ModelError::ArityMismatch {
                        line,
                        name: name.clone(),
                        arity: *arity,
                        got: tuple.len(),
                    });
                }
                if let Some(&e) = tuple.iter().find(|&&e| e >= universe_size) {
                    return Err(ModelError::ElementOutOfRange {
                        line,
                        element: e,
                        size: universe_size,
                    });
                }
                let name = name.clone();
                builder.tuple(&name, &tuple)?;
            }
        }
    }
    if let Some((name, _)) = current {
        return Err(syntax(0, &format!("unterminated relation block `{name}`")));
    }
    if !finished {
        return Err(syntax(0, "missing final `end`"));
    }
    if let Some((line, _)) = lines.next() {
        return Err(syntax(line, "trailing content after final `end`"));
    }
    Ok(builder.build())
}

/// Canonical serialization: relations in declaration order, tuples sorted.
/// No trailing newline.
pub fn serialize_structure(s: &Structure) -> String {
    let mut out = String::new();
    let _ = write!(out, "structure\nuniverse {}\n", s.universe_size);
    for ((name, arity), tuples) in s.vocabulary.symbols().iter().zip(&s.relations) {
        let _ = writeln!(out, "rel {name} {arity}");
        for t in tuples {
            let parts: Vec<String> = t.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "{}", parts.join(" "));
        }
        out.push_str("end\n");
    }
    out.push_str("end");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_structure() {
        let s = parse_structure("structure\nuniverse 2\nend").unwrap();
        assert_eq!(s.universe_size(), 2);
        assert!(s.vocabulary().is_empty());
        assert_eq!(serialize_structure(&s), "structure\nuniverse 2\nend");
    }

    #[test]
    fn triangle_encoding() {
        // K3: vertices 0..3, edges 3,4,5 = {0,1},{0,2},{1,2}
        let mut text = String::from("structure\nuniverse 6\nrel E 2\n");
        for (u, v) in [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)] {
            text += &format!("{u} {v}\n");
        }
        text += "end\nrel End 2\n";
        for (u, e) in [(0, 3), (1, 3), (0, 4), (2, 4), (1, 5), (2, 5)] {
            text += &format!("{u} {e}\n");
        }
        text += "end\nend\n";
        let s = parse_structure(&text).unwrap();
        assert_eq!(s.relation("E").unwrap().len(), 6);
        assert_eq!(s.relation("End").unwrap().len(), 6);
        assert!(s.contains("End", &[2, 5]));
        assert!(!s.contains("End", &[0, 5]));
    }

    #[test]
    fn arity_mismatch_reports_line() {
        let err = parse_structure("structure\nuniverse 3\nrel E 2\n0 1 2\nend\nend").unwrap_err();
        assert_eq!(
            err,
            ModelError::ArityMismatch {
                line: 4,
                name: "E".into(),
                arity: 2,
                got: 3
            }
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            parse_structure("structure\nuniverse 2\nrel E 1\n2\nend\nend"),
            Err(ModelError::ElementOutOfRange { line: 4, .. })
        ));
        assert!(matches!(
            parse_structure("structure\nuniverse 2\nrel E 1\nend\nrel E 1\nend\nend"),
            Err(ModelError::DuplicateRelation { line: 5, .. })
        ));
        assert!(matches!(
            parse_structure("structure\nuniverse 2\nrel E 0\nend\nend"),
            Err(ModelError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            parse_structure("structure\nuniverse x\nend"),
            Err(ModelError::Syntax { line: 2, .. })
        ));
        assert!(parse_structure("structure\nuniverse 2\nrel E 1\n0\nend").is_err());
        assert!(parse_structure("structure\nuniverse 2\nend\nrel").is_err());
    }

    #[test]
    fn comments_and_duplicates() {
        let s = parse_structure(
            "# header\nstructure\nuniverse 3\nrel R 1\n# c\n2\n0\n2\nend\nend\n",
        )
        .unwrap();
        assert_eq!(
            serialize_structure(&s),
            "structure\nuniverse 3\nrel R 1\n0\n2\nend\nend"
        );
    }

    #[test]
    fn permuted_tuples_serialize_identically() {
        let a = parse_structure("structure\nuniverse 3\nrel E 2\n2 1\n0 1\n1 0\nend\nend").unwrap();
        let b = parse_structure("structure\nuniverse 3\nrel E 2\n1 0\n2 1\n0 1\nend\nend").unwrap();
        assert_eq!(serialize_structure(&a), serialize_structure(&b));
    }

    #[test]
    fn rank_roundtrip() {
        for t in all_tuples(3, 3) {
            assert_eq!(tuple_unrank(3, 3, tuple_rank(3, &t)), t);
        }
        let ranks: Vec<usize> = all_tuples(2, 2).map(|t| tuple_rank(2, &t)).collect();
        assert_eq!(ranks, vec![0, 1, 2, 3]);
    }

    #[test]
    fn assignments_validate() {
        let mut v = FoAssignment::new();
        v.bind("x", 3);
        assert!(v.validate(3).is_err());
        assert!(v.validate(4).is_ok());
        let mut so = SoAssignment::new();
        assert!(so.bind("X", 2, vec![vec![0]]).is_err());
        so.bind("X", 1, vec![vec![5]]).unwrap();
        assert!(so.validate(5).is_err());
    }
}
