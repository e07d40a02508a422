//! The `eval` and `axioms` commands, writing to caller-supplied streams
//! and returning the process exit code.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use mnesor_core::checker::{self, CheckError, CheckPlan, ModelSelector, DEFAULT_CAP};

use crate::csvio::{load_membership, load_table, write_table};
use crate::query::{evaluate, parse_query};

pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 1;
    pub const RESOLUTION: i32 = 2;
    pub const DATA: i32 = 3;
    pub const PROPERTY_FAILED: i32 = 4;
    pub const CAP_EXCEEDED: i32 = 5;
}

#[derive(Debug, Clone)]
pub struct EvalArgs {
    pub membership: PathBuf,
    pub tables: Vec<(String, PathBuf)>,
    pub query: String,
}

macro_rules! fail {
    ($err:expr, $code:expr, $($arg:tt)*) => {{
        let _ = writeln!($err, "error: {}", format_args!($($arg)*));
        return $code;
    }};
}

pub fn eval(args: &EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let q = match parse_query(&args.query) {
        Ok(q) => q,
        Err(e) => fail!(err, exit::PARSE, "query {e}"),
    };

    let mut paths = BTreeMap::new();
    for (name, path) in &args.tables {
        if paths.insert(name.clone(), path.clone()).is_some() {
            fail!(err, exit::RESOLUTION, "table `{name}` is bound twice");
        }
    }
    for name in q.tables() {
        if !paths.contains_key(name) {
            let known: Vec<&str> = paths.keys().map(String::as_str).collect();
            fail!(
                err,
                exit::RESOLUTION,
                "unknown table `{name}`; bound: {}",
                known.join(", ")
            );
        }
    }

    let env = match load_membership(&args.membership) {
        Ok(env) => env,
        Err(e) => fail!(err, exit::DATA, "{e}"),
    };
    for name in q.granular_names() {
        if env.granular(name).is_none() {
            let known: Vec<&str> = env.names().collect();
            fail!(
                err,
                exit::RESOLUTION,
                "unknown granular `{name}`; known: {}",
                known.join(", ")
            );
        }
    }

    let mut tables = BTreeMap::new();
    for (name, path) in &paths {
        match load_table(path, &env) {
            Ok(t) => {
                tables.insert(name.clone(), t);
            }
            Err(e) => fail!(err, exit::DATA, "{e}"),
        }
    }

    let result = match evaluate(&q, &tables, &env) {
        Ok(t) => t,
        Err(e) if e.is_resolution() => fail!(err, exit::RESOLUTION, "{e}"),
        Err(e) => fail!(err, exit::DATA, "{e}"),
    };
    if let Err(e) = write_table(&result, &env, out) {
        fail!(err, exit::DATA, "writing result: {e}");
    }
    exit::OK
}

#[derive(Debug, Clone, Default)]
pub struct AxiomsArgs {
    pub model: String,
    pub universe: Option<usize>,
    pub range: Option<String>,
    pub random: Option<u64>,
    pub seed: Option<u64>,
    pub only: Vec<String>,
    pub cap: Option<u64>,
}

/// Parses `lo..hi` with optional signs on both ends.
pub fn parse_range(s: &str) -> Option<(i64, i64)> {
    let (lo, hi) = s.split_once("..")?;
    Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?))
}

impl AxiomsArgs {
    pub fn plan(&self) -> Result<CheckPlan, String> {
        let model = ModelSelector::parse(&self.model).ok_or_else(|| {
            let known: Vec<&str> = ModelSelector::ALL.iter().map(|m| m.as_str()).collect();
            format!(
                "unknown model `{}`; known: {}",
                self.model,
                known.join(", ")
            )
        })?;
        let mut plan = CheckPlan::new(model).cap(self.cap.unwrap_or(DEFAULT_CAP));
        if let Some(n) = self.universe {
            plan = plan.universe(n);
        }
        if let Some(r) = &self.range {
            let (lo, hi) =
                parse_range(r).ok_or_else(|| format!("range `{r}` is not of the form lo..hi"))?;
            plan = plan.range(lo, hi);
        }
        if let Some(cases) = self.random {
            plan = plan.random(cases, self.seed.unwrap_or(0));
        }
        if !self.only.is_empty() {
            plan = plan.only(self.only.iter().map(|s| s.trim().to_owned()));
        }
        Ok(plan)
    }
}

pub fn axioms(args: &AxiomsArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let plan = match args.plan() {
        Ok(p) => p,
        Err(e) => fail!(err, exit::PARSE, "{e}"),
    };
    let report = match checker::run_check(&plan) {
        Ok(r) => r,
        Err(e @ CheckError::CapExceeded { .. }) => fail!(err, exit::CAP_EXCEEDED, "{e}"),
        Err(e) => fail!(err, exit::PARSE, "{e}"),
    };
    let json = serde_json::to_string_pretty(&report).expect("reports serialize");
    if let Err(e) = writeln!(out, "{json}") {
        fail!(err, exit::DATA, "writing report: {e}");
    }
    for f in report.failures() {
        let _ = writeln!(err, "FAIL {} ({} violations)", f.label, f.violations);
    }
    if report.has_failures() {
        exit::PROPERTY_FAILED
    } else {
        exit::OK
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-8..8"), Some((-8, 8)));
        assert_eq!(parse_range("-6..0"), Some((-6, 0)));
        assert_eq!(parse_range("3"), None);
        assert_eq!(parse_range("a..1"), None);
    }

    #[test]
    fn unknown_model_is_a_usage_error() {
        let args = AxiomsArgs {
            model: "lattice".into(),
            ..Default::default()
        };
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(axioms(&args, &mut out, &mut err), exit::PARSE);
        assert!(out.is_empty());
        assert!(String::from_utf8(err).unwrap().contains("known: subset"));
    }

    #[test]
    fn cap_exceeded() {
        let args = AxiomsArgs {
            model: "relation".into(),
            universe: Some(4),
            cap: Some(10),
            ..Default::default()
        };
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(axioms(&args, &mut out, &mut err), exit::CAP_EXCEEDED);
        assert!(out.is_empty());
    }

    #[test]
    fn failing_report_exits_four() {
        let args = AxiomsArgs {
            model: "subset".into(),
            universe: Some(2),
            only: vec!["cancellation".into()],
            ..Default::default()
        };
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(axioms(&args, &mut out, &mut err), exit::PROPERTY_FAILED);
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v["properties"][0]["status"], "FAIL");
    }
}
