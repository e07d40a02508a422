//! Tables as relation mnesors.
//!
//! Union is mnesor addition, intersection is the mnesor intersection `∘`
//! and selection is scaling by a granular built from named memberships.
//! None of the three needs the operands to share a schema.

mod expr;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use expr::{parse_granular, GranularExpr, ParseError};

use crate::bitrop::SubsetBitrop;
use crate::error::AlgebraError;
use crate::mnesor::{MnesorSpace, Relation, RelationSpace, Row};
use crate::subset::Subset;

/// Name of the key column in every input file.
pub const KEY_COLUMN: &str = "key";

/// One input record with the line it started on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub line: u64,
    pub fields: Vec<String>,
}

impl Record {
    pub fn new(line: u64, fields: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Record {
            line,
            fields: fields.into_iter().map(Into::into).collect(),
        }
    }
}

/// Problems with membership or table data.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DataError {
    #[error("first column must be `{KEY_COLUMN}`, found `{found}`")]
    MissingKeyColumn { found: String },
    #[error("column `{column}` appears twice")]
    DuplicateColumn { column: String },
    #[error("organization name `{name}` is not an identifier or is reserved")]
    BadOrganization { name: String },
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: empty key")]
    EmptyKey { line: u64 },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { key: String, line: u64 },
    #[error("line {line}: key `{key}` is outside the universe")]
    UnknownKey { key: String, line: u64 },
    #[error("line {line}: cell `{column}` of `{key}` must be 0 or 1, found `{value}`")]
    CellNotBinary {
        key: String,
        column: String,
        value: String,
        line: u64,
    },
}

/// Failures while evaluating table operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelalgError {
    #[error("unknown granular `{name}`; known: {}", known.join(", "))]
    UnknownName { name: String, known: Vec<String> },
    #[error("rows for key `{key}` disagree on attribute `{attribute}`")]
    Conflict { key: String, attribute: String },
    #[error("intersection undefined: the right table extends rows of the left table with attributes it lacks")]
    Unabsorbed,
    #[error(transparent)]
    Algebra(AlgebraError),
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "TOP"
        && s != "BOT"
}

/// The key universe and the named membership granulars over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipEnv {
    keys: Vec<String>,
    index: BTreeMap<String, usize>,
    organizations: Vec<(String, Subset)>,
}

impl MembershipEnv {
    /// Builds the environment from a `key,<Org1>,<Org2>,...` header and
    /// rows of `0`/`1` cells. The universe keeps the file's key order.
    pub fn from_records(
        header: &[String],
        records: impl IntoIterator<Item = Record>,
    ) -> Result<Self, DataError> {
        check_header(header)?;
        let organizations: Vec<String> = header[1..].to_vec();
        if let Some(bad) = organizations.iter().find(|o| !is_identifier(o)) {
            return Err(DataError::BadOrganization { name: bad.clone() });
        }

        let mut keys = Vec::new();
        let mut index = BTreeMap::new();
        let mut cells: Vec<Vec<bool>> = Vec::new();
        for rec in records {
            check_width(&rec, header.len())?;
            let key = &rec.fields[0];
            if key.is_empty() {
                return Err(DataError::EmptyKey { line: rec.line });
            }
            if index.insert(key.clone(), keys.len()).is_some() {
                return Err(DataError::DuplicateKey {
                    key: key.clone(),
                    line: rec.line,
                });
            }
            let mut row = Vec::with_capacity(organizations.len());
            for (value, column) in rec.fields[1..].iter().zip(&organizations) {
                row.push(match value.as_str() {
                    "0" => false,
                    "1" => true,
                    _ => {
                        return Err(DataError::CellNotBinary {
                            key: key.clone(),
                            column: column.clone(),
                            value: value.clone(),
                            line: rec.line,
                        })
                    }
                });
            }
            keys.push(key.clone());
            cells.push(row);
        }

        let width = keys.len();
        let organizations = organizations
            .into_iter()
            .enumerate()
            .map(|(col, name)| {
                let members = cells
                    .iter()
                    .enumerate()
                    .filter(|(_, row)| row[col])
                    .map(|(k, _)| k);
                (
                    name,
                    Subset::from_indices(width, members).expect("row indices lie in the universe"),
                )
            })
            .collect();
        Ok(MembershipEnv {
            keys,
            index,
            organizations,
        })
    }

    /// Keys in file order.
    pub fn universe(&self) -> &[String] {
        &self.keys
    }

    pub fn key_index(&self, key: &str) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn key_name(&self, index: usize) -> Option<&str> {
        self.keys.get(index).map(String::as_str)
    }

    pub fn granular(&self, name: &str) -> Option<&Subset> {
        self.organizations
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }

    /// Organization names in header order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.organizations.iter().map(|(n, _)| n.as_str())
    }

    pub fn bitrop(&self) -> SubsetBitrop {
        SubsetBitrop::new(self.keys.len())
    }

    pub fn space(&self) -> RelationSpace {
        RelationSpace::new(self.keys.len())
    }

    /// Subset of the universe holding the named keys.
    pub fn subset_of<'a>(&self, keys: impl IntoIterator<Item = &'a str>) -> Option<Subset> {
        let idx: Option<Vec<usize>> = keys.into_iter().map(|k| self.key_index(k)).collect();
        Subset::from_indices(self.keys.len(), idx?)
    }

    pub fn key_names(&self, s: &Subset) -> Vec<&str> {
        s.iter().filter_map(|i| self.key_name(i)).collect()
    }
}

fn check_header(header: &[String]) -> Result<(), DataError> {
    match header.first() {
        Some(k) if k == KEY_COLUMN => {}
        other => {
            return Err(DataError::MissingKeyColumn {
                found: other.cloned().unwrap_or_default(),
            })
        }
    }
    let mut seen = BTreeSet::new();
    for column in header {
        if !seen.insert(column.as_str()) {
            return Err(DataError::DuplicateColumn {
                column: column.clone(),
            });
        }
    }
    Ok(())
}

fn check_width(rec: &Record, expected: usize) -> Result<(), DataError> {
    if rec.fields.len() == expected {
        Ok(())
    } else {
        Err(DataError::RaggedRow {
            line: rec.line,
            expected,
            found: rec.fields.len(),
        })
    }
}

/// A keyed table: ordered attribute columns over a relation mnesor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    attributes: Vec<String>,
    relation: Relation,
}

impl Table {
    /// Builds a table from a `key[,attr...]` header. Empty cells are nulls.
    pub fn from_records(
        header: &[String],
        records: impl IntoIterator<Item = Record>,
        env: &MembershipEnv,
    ) -> Result<Self, DataError> {
        check_header(header)?;
        let attributes: Vec<String> = header[1..].to_vec();
        let mut relation = Relation::empty(env.universe().len());
        for rec in records {
            check_width(&rec, header.len())?;
            let key = &rec.fields[0];
            let idx = env.key_index(key).ok_or_else(|| DataError::UnknownKey {
                key: key.clone(),
                line: rec.line,
            })?;
            let row: Row = attributes
                .iter()
                .zip(&rec.fields[1..])
                .filter(|(_, v)| !v.is_empty())
                .map(|(a, v)| (a.clone(), v.clone()))
                .collect();
            if relation.insert(idx, row).is_some() {
                return Err(DataError::DuplicateKey {
                    key: key.clone(),
                    line: rec.line,
                });
            }
        }
        Ok(Table {
            attributes,
            relation,
        })
    }

    /// A single-column table holding the given keys.
    pub fn from_keys(keys: &Subset) -> Self {
        Table {
            attributes: Vec::new(),
            relation: Relation::from_keys(keys),
        }
    }

    pub fn new(attributes: Vec<String>, relation: Relation) -> Self {
        Table {
            attributes,
            relation,
        }
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn keys(&self) -> Subset {
        self.relation.keys()
    }

    pub fn len(&self) -> usize {
        self.relation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relation.is_empty()
    }

    /// Rows as `(key, cells)` sorted byte-wise by key, one cell per
    /// attribute, `None` for nulls.
    pub fn sorted_rows<'a>(
        &'a self,
        env: &'a MembershipEnv,
    ) -> Vec<(&'a str, Vec<Option<&'a str>>)> {
        let mut rows: Vec<_> = self
            .relation
            .rows()
            .map(|(k, row)| {
                let cells = self
                    .attributes
                    .iter()
                    .map(|a| row.get(a).map(String::as_str))
                    .collect();
                (env.key_name(k).unwrap_or_default(), cells)
            })
            .collect();
        rows.sort_by(|a, b| a.0.as_bytes().cmp(b.0.as_bytes()));
        rows
    }
}

fn algebra_error(env: &MembershipEnv, e: AlgebraError) -> RelalgError {
    match e {
        AlgebraError::Conflict { key, attribute } => RelalgError::Conflict {
            key: env.key_name(key).unwrap_or_default().to_string(),
            attribute,
        },
        AlgebraError::NoWitness { .. } => RelalgError::Unabsorbed,
        e => RelalgError::Algebra(e),
    }
}

fn merged_attributes(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    out.extend(b.iter().filter(|x| !a.contains(x)).cloned());
    out
}

/// `t1 + t2`: rows merged by key, attribute sets unioned.
pub fn union(t1: &Table, t2: &Table, env: &MembershipEnv) -> Result<Table, RelalgError> {
    let relation = env
        .space()
        .add(&t1.relation, &t2.relation)
        .map_err(|e| algebra_error(env, e))?;
    Ok(Table {
        attributes: merged_attributes(&t1.attributes, &t2.attributes),
        relation,
    })
}

/// `t1 ∘ t2`: the rows of `t2` selected by the absorption witness of
/// `(t1, t2)`. Row identity is by key.
pub fn intersection(t1: &Table, t2: &Table, env: &MembershipEnv) -> Result<Table, RelalgError> {
    let relation = env
        .space()
        .intersect(&t1.relation, &t2.relation)
        .map_err(|e| algebra_error(env, e))?;
    Ok(Table {
        attributes: t2.attributes.clone(),
        relation,
    })
}

/// `t λ` with `λ` the value of `e`.
pub fn select(t: &Table, e: &GranularExpr, env: &MembershipEnv) -> Result<Table, RelalgError> {
    let lambda = e.eval(env)?;
    let relation = env
        .space()
        .scale(&t.relation, &lambda)
        .map_err(|e| algebra_error(env, e))?;
    Ok(Table {
        attributes: t.attributes.clone(),
        relation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    pub(crate) fn fixture() -> MembershipEnv {
        let header = strings(&["key", "EU", "NATO"]);
        let rows = [
            ["Sweden", "1", "0"],
            ["Germany", "1", "1"],
            ["Denmark", "1", "1"],
            ["France", "1", "1"],
            ["Australia", "0", "0"],
        ];
        MembershipEnv::from_records(
            &header,
            rows.iter()
                .enumerate()
                .map(|(i, r)| Record::new(i as u64 + 2, *r)),
        )
        .unwrap()
    }

    fn table(env: &MembershipEnv, keys: &[&str]) -> Table {
        Table::from_keys(&env.subset_of(keys.iter().copied()).unwrap())
    }

    fn key_list<'a>(t: &'a Table, env: &'a MembershipEnv) -> Vec<&'a str> {
        t.sorted_rows(env).into_iter().map(|(k, _)| k).collect()
    }

    #[test]
    fn fixture_memberships() {
        let env = fixture();
        assert_eq!(env.universe().len(), 5);
        assert_eq!(env.names().collect::<Vec<_>>(), ["EU", "NATO"]);
        let eu = parse_granular("EU").unwrap().eval(&env).unwrap();
        assert_eq!(
            env.key_names(&eu),
            ["Sweden", "Germany", "Denmark", "France"]
        );
        let all = parse_granular("NATO | !NATO").unwrap().eval(&env).unwrap();
        assert!(all.is_full());
        assert!(parse_granular("BOT")
            .unwrap()
            .eval(&env)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn unknown_granular_lists_known_names() {
        let env = fixture();
        let err = parse_granular("EU & OECD").unwrap().eval(&env).unwrap_err();
        assert_eq!(
            err,
            RelalgError::UnknownName {
                name: "OECD".into(),
                known: strings(&["EU", "NATO"])
            }
        );
        assert_eq!(
            alloc::format!("{err}"),
            "unknown granular `OECD`; known: EU, NATO"
        );
    }

    #[test]
    fn union_examples() {
        let env = fixture();
        let a = table(&env, &["Sweden", "Germany"]);
        let b = table(&env, &["France", "Sweden"]);
        let u = union(&a, &b, &env).unwrap();
        assert_eq!(key_list(&u, &env), ["France", "Germany", "Sweden"]);
        assert_eq!(union(&a, &a, &env).unwrap(), a);
        assert_eq!(union(&a, &table(&env, &[]), &env).unwrap(), a);
    }

    #[test]
    fn intersection_examples() {
        let env = fixture();
        let x = table(&env, &["Germany", "Denmark"]);
        let y = table(&env, &["Germany", "Sweden"]);
        assert_eq!(
            key_list(&intersection(&x, &y, &env).unwrap(), &env),
            ["Germany"]
        );
        assert_eq!(intersection(&x, &x, &env).unwrap(), x);
        assert!(
            intersection(&table(&env, &["France"]), &table(&env, &["Sweden"]), &env)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn selection_examples() {
        let env = fixture();
        let europe = table(&env, &["Sweden", "Germany", "Denmark", "France"]);
        let nato = parse_granular("NATO").unwrap();
        let not_nato = parse_granular("!NATO").unwrap();
        let eu = parse_granular("EU").unwrap();
        let parts = union(
            &select(&europe, &nato, &env).unwrap(),
            &select(&europe, &not_nato, &env).unwrap(),
            &env,
        )
        .unwrap();
        assert_eq!(parts, europe);
        let sweden = table(&env, &["Sweden"]);
        assert_eq!(select(&sweden, &eu, &env).unwrap(), sweden);
        assert!(select(&table(&env, &["Australia"]), &eu, &env)
            .unwrap()
            .is_empty());
        assert_eq!(select(&europe, &GranularExpr::Top, &env).unwrap(), europe);
        assert!(select(&europe, &GranularExpr::Bottom, &env)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn heterogeneous_union_merges_attributes() {
        let env = fixture();
        let capitals = Table::from_records(
            &strings(&["key", "capital"]),
            [
                Record::new(2, ["Sweden", "Stockholm"]),
                Record::new(3, ["France", "Paris"]),
            ],
            &env,
        )
        .unwrap();
        let currencies = Table::from_records(
            &strings(&["key", "currency"]),
            [
                Record::new(2, ["Sweden", "SEK"]),
                Record::new(3, ["Australia", "AUD"]),
            ],
            &env,
        )
        .unwrap();
        let u = union(&capitals, &currencies, &env).unwrap();
        assert_eq!(u.attributes(), ["capital", "currency"]);
        assert_eq!(
            u.sorted_rows(&env),
            vec![
                ("Australia", vec![None, Some("AUD")]),
                ("France", vec![Some("Paris"), None]),
                ("Sweden", vec![Some("Stockholm"), Some("SEK")]),
            ]
        );
    }

    #[test]
    fn conflicting_union_names_the_key() {
        let env = fixture();
        let a = Table::from_records(
            &strings(&["key", "capital"]),
            [Record::new(2, ["Sweden", "Stockholm"])],
            &env,
        )
        .unwrap();
        let b = Table::from_records(
            &strings(&["key", "capital"]),
            [Record::new(2, ["Sweden", "Uppsala"])],
            &env,
        )
        .unwrap();
        assert_eq!(
            union(&a, &b, &env).unwrap_err(),
            RelalgError::Conflict {
                key: "Sweden".into(),
                attribute: "capital".into()
            }
        );
    }

    #[test]
    fn intersection_with_extra_attributes_is_undefined() {
        let env = fixture();
        let keys_only = table(&env, &["Sweden"]);
        let capitals = Table::from_records(
            &strings(&["key", "capital"]),
            [Record::new(2, ["Sweden", "Stockholm"])],
            &env,
        )
        .unwrap();
        assert_eq!(
            intersection(&keys_only, &capitals, &env).unwrap_err(),
            RelalgError::Unabsorbed
        );
        // the other way round the right rows carry no new attributes
        let r = intersection(&capitals, &keys_only, &env).unwrap();
        assert_eq!(key_list(&r, &env), ["Sweden"]);
    }

    #[test]
    fn membership_errors() {
        let h = strings(&["key", "EU"]);
        assert_eq!(
            MembershipEnv::from_records(&h, [Record::new(2, ["Sweden", "2"])]).unwrap_err(),
            DataError::CellNotBinary {
                key: "Sweden".into(),
                column: "EU".into(),
                value: "2".into(),
                line: 2
            }
        );
        assert!(matches!(
            MembershipEnv::from_records(
                &h,
                [
                    Record::new(2, ["Sweden", "1"]),
                    Record::new(3, ["Sweden", "0"])
                ]
            ),
            Err(DataError::DuplicateKey { line: 3, .. })
        ));
        assert!(matches!(
            MembershipEnv::from_records(&strings(&["country", "EU"]), []),
            Err(DataError::MissingKeyColumn { .. })
        ));
        assert!(matches!(
            MembershipEnv::from_records(&strings(&["key", "TOP"]), []),
            Err(DataError::BadOrganization { .. })
        ));
        assert!(matches!(
            MembershipEnv::from_records(&strings(&["key", "EU", "EU"]), []),
            Err(DataError::DuplicateColumn { .. })
        ));
        assert!(matches!(
            MembershipEnv::from_records(&h, [Record::new(2, ["Sweden"])]),
            Err(DataError::RaggedRow {
                line: 2,
                expected: 2,
                found: 1
            })
        ));
        assert!(matches!(
            MembershipEnv::from_records(&h, [Record::new(2, ["", "1"])]),
            Err(DataError::EmptyKey { line: 2 })
        ));
    }

    #[test]
    fn table_errors() {
        let env = fixture();
        let h = strings(&["key"]);
        assert_eq!(
            Table::from_records(&h, [Record::new(2, ["Atlantis"])], &env).unwrap_err(),
            DataError::UnknownKey {
                key: "Atlantis".into(),
                line: 2
            }
        );
        assert_eq!(
            Table::from_records(
                &h,
                [Record::new(2, ["Sweden"]), Record::new(3, ["Sweden"])],
                &env
            )
            .unwrap_err(),
            DataError::DuplicateKey {
                key: "Sweden".into(),
                line: 3
            }
        );
    }
}
