//! The identity registry and the verification driver.
//!
//! Identities ship as data (`data/catalog.toml`, embedded at build time):
//! each record is a pair of DSL expressions, a default verification order,
//! and a source attribution.  Extra records can be merged from user files
//! at run time, so adding identities needs no recompilation.
//!
//! Verification evaluates both sides to the requested order and compares
//! exact rational coefficients over every exponent from the record's
//! minimum up to the order.  [`Catalog::verify_all`] fans records out over
//! a thread pool (capped by `QHECKE_THREADS`; 0 or unset means automatic)
//! and returns reports in registry order regardless of scheduling.

use std::path::Path;
use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dsl::{eval, parse_expr, EvalError, Expr, ParseError};
use crate::series::LaurentSeries;

static BUILTIN_TOML: &str = include_str!("../data/catalog.toml");
static BUILTIN: OnceLock<Catalog> = OnceLock::new();

fn default_order() -> i64 {
    60
}

/// One catalog entry: an identity `lhs = rhs` with verification defaults.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
    /// Order used when the caller does not supply one; at least 10.
    #[serde(default = "default_order")]
    pub order: i64,
    /// Lowest exponent expected on either side (e.g. -1 for Laurent forms).
    #[serde(default)]
    pub min_exponent: i64,
    /// Source attribution.
    #[serde(rename = "ref", default)]
    pub reference: String,
}

#[derive(Deserialize)]
struct CatalogFile {
    #[serde(default)]
    identity: Vec<IdentityRecord>,
}

/// Outcome of checking one identity to one order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    /// Order actually checked.
    pub order: i64,
    pub equal: bool,
    /// First differing exponent, absent exactly when `equal` is true.
    pub first_mismatch_exponent: Option<i64>,
    /// Coefficients at the mismatch, as `numerator/denominator`.
    pub lhs_coeff: Option<String>,
    pub rhs_coeff: Option<String>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    /// The deterministic part of a report (everything but timing).
    pub fn outcome(&self) -> (&str, i64, bool, Option<i64>, Option<&String>, Option<&String>) {
        (
            &self.id,
            self.order,
            self.equal,
            self.first_mismatch_exponent,
            self.lhs_coeff.as_ref(),
            self.rhs_coeff.as_ref(),
        )
    }
}

/// Errors loading a catalog or verifying a record.
#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("failed to read catalog file: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse catalog TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("duplicate identity id `{0}`")]
    DuplicateId(String),
    #[error("identity `{id}` default order {order} is below the minimum of 10")]
    OrderTooSmall { id: String, order: i64 },
    #[error("identity `{id}` {side} does not parse: {source}")]
    BadExpression { id: String, side: &'static str, source: ParseError },
    #[error("unknown identity `{0}`")]
    UnknownId(String),
    #[error("identity `{id}` {side} failed to evaluate: {source}")]
    Eval { id: String, side: &'static str, source: EvalError },
}

/// A validated set of identity records.
#[derive(Clone, Debug)]
pub struct Catalog {
    records: Vec<IdentityRecord>,
}

impl Catalog {
    /// The built-in registry.
    pub fn builtin() -> &'static Catalog {
        BUILTIN.get_or_init(|| {
            Catalog::from_toml_str(BUILTIN_TOML).expect("embedded catalog must be valid")
        })
    }

    /// Parse and validate records from TOML text.
    pub fn from_toml_str(text: &str) -> Result<Catalog, CatalogError> {
        let file: CatalogFile = toml::from_str(text)?;
        let mut catalog = Catalog { records: Vec::new() };
        catalog.extend(file.identity)?;
        Ok(catalog)
    }

    /// Load a catalog file.
    pub fn load(path: &Path) -> Result<Catalog, CatalogError> {
        Catalog::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// The built-in registry plus the records of a user file.
    pub fn builtin_with_file(path: &Path) -> Result<Catalog, CatalogError> {
        let mut catalog = Catalog::builtin().clone();
        let file: CatalogFile = toml::from_str(&std::fs::read_to_string(path)?)?;
        catalog.extend(file.identity)?;
        Ok(catalog)
    }

    fn extend(&mut self, records: Vec<IdentityRecord>) -> Result<(), CatalogError> {
        for record in records {
            if self.records.iter().any(|r| r.id == record.id) {
                return Err(CatalogError::DuplicateId(record.id));
            }
            if record.order < 10 {
                return Err(CatalogError::OrderTooSmall { id: record.id, order: record.order });
            }
            parse_side(&record, &record.lhs, "lhs")?;
            parse_side(&record, &record.rhs, "rhs")?;
            self.records.push(record);
        }
        Ok(())
    }

    pub fn records(&self) -> &[IdentityRecord] {
        &self.records
    }

    pub fn find(&self, id: &str) -> Option<&IdentityRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    /// Verify one identity at `order` (or its default order).
    pub fn verify(&self, id: &str, order: Option<i64>) -> Result<VerificationReport, CatalogError> {
        let record = self.find(id).ok_or_else(|| CatalogError::UnknownId(id.to_string()))?;
        verify_record(record, order)
    }

    /// Verify every identity, reports in registry order.  Parallelism is
    /// capped by the `QHECKE_THREADS` environment variable.
    pub fn verify_all(&self, order: Option<i64>) -> Vec<Result<VerificationReport, CatalogError>> {
        self.verify_all_threaded(order, env_thread_cap())
    }

    /// As [`Self::verify_all`] with an explicit thread cap (`None` or
    /// `Some(0)` means automatic).
    pub fn verify_all_threaded(
        &self,
        order: Option<i64>,
        threads: Option<usize>,
    ) -> Vec<Result<VerificationReport, CatalogError>> {
        let run = || {
            self.records
                .par_iter()
                .map(|record| verify_record(record, order))
                .collect::<Vec<_>>()
        };
        match threads {
            Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool")
                .install(run),
            _ => run(),
        }
    }
}

fn env_thread_cap() -> Option<usize> {
    std::env::var("QHECKE_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok())
}

fn parse_side(record: &IdentityRecord, text: &str, side: &'static str) -> Result<Expr, CatalogError> {
    parse_expr(text).map_err(|source| CatalogError::BadExpression {
        id: record.id.clone(),
        side,
        source,
    })
}

fn eval_side(
    record: &IdentityRecord,
    text: &str,
    side: &'static str,
    order: i64,
) -> Result<LaurentSeries, CatalogError> {
    let expr = parse_side(record, text, side)?;
    eval(&expr, order).map_err(|source| CatalogError::Eval { id: record.id.clone(), side, source })
}

/// Verify a single record at `order` (or its default order): evaluate both
/// sides and compare coefficientwise over `[min_exponent, order]`, extended
/// down to any lower exponent either side actually carries.
pub fn verify_record(
    record: &IdentityRecord,
    order: Option<i64>,
) -> Result<VerificationReport, CatalogError> {
    let order = order.unwrap_or(record.order);
    let started = Instant::now();
    let lhs = eval_side(record, &record.lhs, "lhs", order)?;
    let rhs = eval_side(record, &record.rhs, "rhs", order)?;
    let lo = record
        .min_exponent
        .min(lhs.valuation().unwrap_or(0))
        .min(rhs.valuation().unwrap_or(0));
    let mismatch = lhs.first_mismatch(&rhs, lo, order);
    let elapsed_ms = started.elapsed().as_millis() as u64;
    let (lhs_coeff, rhs_coeff) = match mismatch {
        Some(e) => {
            let show = |s: &LaurentSeries| {
                let c = s.coefficient(e).expect("mismatch exponent within order");
                Some(format!("{}/{}", c.numer(), c.denom()))
            };
            (show(&lhs), show(&rhs))
        }
        None => (None, None),
    };
    Ok(VerificationReport {
        id: record.id.clone(),
        order,
        equal: mismatch.is_none(),
        first_mismatch_exponent: mismatch,
        lhs_coeff,
        rhs_coeff,
        elapsed_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_is_large_and_valid() {
        let catalog = Catalog::builtin();
        assert!(catalog.records().len() >= 28, "only {} records", catalog.records().len());
        for record in catalog.records() {
            assert!(record.order >= 10);
            assert!(parse_expr(&record.lhs).is_ok(), "{} lhs", record.id);
            assert!(parse_expr(&record.rhs).is_ok(), "{} rhs", record.id);
        }
    }

    #[test]
    fn lookup_warnaar() {
        let record = Catalog::builtin().find("warnaar").expect("registered");
        assert_eq!(record.lhs, "g(1,2,2; q, -q^3; q)");
    }

    #[test]
    fn listing_contains_chan_kim_theorem_3_6() {
        assert!(Catalog::builtin().find("chan-kim-3.6").is_some());
        assert!(Catalog::builtin().find("chan-kim-3.6-laurent").is_some());
    }

    #[test]
    fn verify_one_at_explicit_order() {
        let report = Catalog::builtin().verify("chan-kim-3.4a", Some(100)).unwrap();
        assert!(report.equal, "{:?}", report);
        assert_eq!(report.order, 100);
        assert_eq!(report.first_mismatch_exponent, None);
    }

    #[test]
    fn laurent_record_verifies_from_minus_one() {
        let record = Catalog::builtin().find("chan-kim-3.6-laurent").unwrap();
        assert_eq!(record.min_exponent, -1);
        let report = verify_record(record, Some(60)).unwrap();
        assert!(report.equal, "{:?}", report);
    }

    #[test]
    fn corrupted_rhs_reports_first_mismatch() {
        let mut record = Catalog::builtin().find("warnaar").unwrap().clone();
        record.rhs = format!("{} + q", record.rhs);
        let report = verify_record(&record, None).unwrap();
        assert!(!report.equal);
        assert_eq!(report.first_mismatch_exponent, Some(1));
        assert_eq!(report.lhs_coeff.as_deref(), Some("-2/1"));
        assert_eq!(report.rhs_coeff.as_deref(), Some("-1/1"));
    }

    #[test]
    fn unknown_id_is_an_error() {
        assert!(matches!(
            Catalog::builtin().verify("no-such-identity", None),
            Err(CatalogError::UnknownId(_))
        ));
    }

    #[test]
    fn user_file_records_merge_without_recompiling() {
        let extra = r#"
            [[identity]]
            id = "euler-pentagonal"
            lhs = "Jm(1)"
            rhs = "j(q; 3)"
            order = 40
            ref = "Euler product as a theta"
        "#;
        let mut catalog = Catalog::builtin().clone();
        let file: CatalogFile = toml::from_str(extra).unwrap();
        catalog.extend(file.identity).unwrap();
        let report = catalog.verify("euler-pentagonal", None).unwrap();
        assert!(report.equal);
    }

    #[test]
    fn duplicate_and_invalid_records_rejected() {
        let dup = r#"
            [[identity]]
            id = "x"
            lhs = "q"
            rhs = "q"
            [[identity]]
            id = "x"
            lhs = "q"
            rhs = "q"
        "#;
        assert!(matches!(Catalog::from_toml_str(dup), Err(CatalogError::DuplicateId(_))));

        let small = r#"
            [[identity]]
            id = "y"
            lhs = "q"
            rhs = "q"
            order = 5
        "#;
        assert!(matches!(Catalog::from_toml_str(small), Err(CatalogError::OrderTooSmall { .. })));

        let broken = r#"
            [[identity]]
            id = "z"
            lhs = "q +"
            rhs = "q"
        "#;
        assert!(matches!(Catalog::from_toml_str(broken), Err(CatalogError::BadExpression { .. })));
    }

    #[test]
    fn report_json_roundtrip() {
        let report = Catalog::builtin().verify("warnaar", Some(30)).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn reports_deterministic_across_thread_counts() {
        let catalog = Catalog::builtin();
        let order = Some(20);
        let single: Vec<_> = catalog
            .verify_all_threaded(order, Some(1))
            .into_iter()
            .map(|r| r.unwrap())
            .collect();
        let multi: Vec<_> = catalog
            .verify_all_threaded(order, Some(4))
            .into_iter()
            .map(|r| r.unwrap())
            .collect();
        assert_eq!(single.len(), catalog.records().len());
        for (a, b) in single.iter().zip(&multi) {
            assert_eq!(a.outcome(), b.outcome());
        }
        // registry order is preserved
        for (report, record) in single.iter().zip(catalog.records()) {
            assert_eq!(report.id, record.id);
        }
    }
}
