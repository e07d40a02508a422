//! CSV ingestion and output for membership files and tables.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use mnesor_core::relalg::{DataError, MembershipEnv, Record, Table, KEY_COLUMN};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: malformed CSV: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{}: {source}", path.display())]
    Data { path: PathBuf, source: DataError },
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input)
}

/// Splits a CSV stream into its header and the remaining records. An empty
/// stream yields an empty header.
pub fn read_records<R: Read>(input: R) -> Result<(Vec<String>, Vec<Record>), csv::Error> {
    let mut rdr = reader(input);
    let mut header = Vec::new();
    let mut records = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let fields: Vec<String> = rec.iter().map(str::to_owned).collect();
        if i == 0 {
            header = fields;
        } else {
            let line = rec.position().map_or(0, |p| p.line());
            records.push(Record::new(line, fields));
        }
    }
    Ok((header, records))
}

fn open(path: &Path) -> Result<(Vec<String>, Vec<Record>), LoadError> {
    let file = File::open(path).map_err(|source| LoadError::Io {
        path: path.to_owned(),
        source,
    })?;
    read_records(file).map_err(|source| LoadError::Csv {
        path: path.to_owned(),
        source,
    })
}

pub fn load_membership(path: &Path) -> Result<MembershipEnv, LoadError> {
    let (header, records) = open(path)?;
    MembershipEnv::from_records(&header, records).map_err(|source| LoadError::Data {
        path: path.to_owned(),
        source,
    })
}

pub fn load_table(path: &Path, env: &MembershipEnv) -> Result<Table, LoadError> {
    let (header, records) = open(path)?;
    Table::from_records(&header, records, env).map_err(|source| LoadError::Data {
        path: path.to_owned(),
        source,
    })
}

/// Writes `key` plus the table's attributes, rows sorted by key, nulls as
/// empty cells.
pub fn write_table<W: Write>(table: &Table, env: &MembershipEnv, out: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let header = std::iter::once(KEY_COLUMN).chain(table.attributes().iter().map(String::as_str));
    w.write_record(header)?;
    for (key, cells) in table.sorted_rows(env) {
        let row = std::iter::once(key).chain(cells.into_iter().map(|c| c.unwrap_or("")));
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MEMBERS: &str =
        "key,EU,NATO\nSweden,1,0\nGermany,1,1\nDenmark,1,1\nFrance,1,1\nAustralia,0,0\n";

    fn env() -> MembershipEnv {
        let (h, r) = read_records(MEMBERS.as_bytes()).unwrap();
        MembershipEnv::from_records(&h, r).unwrap()
    }

    fn table(text: &str) -> Result<Table, DataError> {
        let (h, r) = read_records(text.as_bytes()).unwrap();
        Table::from_records(&h, r, &env())
    }

    fn render(t: &Table) -> String {
        let mut out = Vec::new();
        write_table(t, &env(), &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn records_carry_line_numbers() {
        let (h, r) = read_records("key,a\nx,1\n\"y\nz\",2\nw,3\n".as_bytes()).unwrap();
        assert_eq!(h, ["key", "a"]);
        let lines: Vec<u64> = r.iter().map(|r| r.line).collect();
        assert_eq!(lines, [2, 3, 5]);
        assert_eq!(r[1].fields[0], "y\nz");
    }

    #[test]
    fn membership_fixture() {
        let e = env();
        assert_eq!(e.universe().len(), 5);
        assert_eq!(e.names().collect::<Vec<_>>(), ["EU", "NATO"]);
    }

    #[test]
    fn output_is_sorted_with_nulls_empty() {
        let t = table("key,capital,pop\nSweden,Stockholm,\nFrance,Paris,68\n").unwrap();
        assert_eq!(
            render(&t),
            "key,capital,pop\nFrance,Paris,68\nSweden,Stockholm,\n"
        );
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = table("key\n").unwrap();
        assert_eq!(render(&t), "key\n");
    }

    #[test]
    fn quoting_round_trips() {
        let t = table("key,motto\nFrance,\"liberté, égalité\"\n").unwrap();
        assert_eq!(render(&t), "key,motto\nFrance,\"liberté, égalité\"\n");
    }

    #[test]
    fn data_errors() {
        assert!(matches!(
            table("key\nAtlantis\n"),
            Err(DataError::UnknownKey { line: 2, .. })
        ));
        assert!(matches!(
            table("key\nSweden\nSweden\n"),
            Err(DataError::DuplicateKey { line: 3, .. })
        ));
        assert!(matches!(
            table("key,a\nSweden\n"),
            Err(DataError::RaggedRow { .. })
        ));
        assert!(matches!(
            table("name\nSweden\n"),
            Err(DataError::MissingKeyColumn { .. })
        ));
        let (h, r) = read_records("key,EU\nSweden,2\n".as_bytes()).unwrap();
        assert!(matches!(
            MembershipEnv::from_records(&h, r),
            Err(DataError::CellNotBinary { .. })
        ));
    }

    #[test]
    fn invalid_utf8_is_a_csv_error() {
        assert!(read_records(&b"key\n\xff\n"[..]).is_err());
    }
}
