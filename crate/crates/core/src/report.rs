//! Line-delimited JSON report records.
//!
//! Each line is one JSON object with a `kind` field. Integers of any width
//! are written as plain decimal numbers. Serde's internally tagged enums
//! cannot read 128-bit integers back, so parsing reads the tag first and
//! then decodes the whole line as the matching payload.

use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::artin::{ArtinEvent, Base, Polynomial, RunReport, ScanOptions, VerificationReport};
use crate::search::{LeaderboardEntry, SearchStats};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportLine {
    Event(ArtinEvent),
    Summary(Summary),
    Progress(ProgressLine),
    Verification(VerificationReport),
    Leaderboard(LeaderboardLine),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub version: String,
    /// Hash of the inputs that determine the result.
    pub fingerprint: String,
    pub body: SummaryBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummaryBody {
    Run {
        f: Polynomial,
        g: Base,
        n_range: (u64, u64),
        report: RunReport,
    },
    Verify {
        instance: String,
        c: u64,
        passed: bool,
        inconclusive: bool,
    },
    Search {
        cursor: u128,
        total: u128,
        completed: bool,
        stats: SearchStats,
        best_c: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressLine {
    pub done: u128,
    pub total: u128,
    pub c: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeaderboardLine {
    /// 1-based position on the board.
    pub rank: usize,
    pub entry: LeaderboardEntry,
}

#[derive(Deserialize)]
struct Tag {
    kind: String,
}

impl ReportLine {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("report lines serialize")
    }

    pub fn parse(line: &str) -> Result<Self, serde_json::Error> {
        let tag: Tag = serde_json::from_str(line)?;
        Ok(match tag.kind.as_str() {
            "event" => ReportLine::Event(serde_json::from_str(line)?),
            "summary" => ReportLine::Summary(serde_json::from_str(line)?),
            "progress" => ReportLine::Progress(serde_json::from_str(line)?),
            "verification" => ReportLine::Verification(serde_json::from_str(line)?),
            "leaderboard" => ReportLine::Leaderboard(serde_json::from_str(line)?),
            other => {
                return Err(serde::de::Error::unknown_variant(
                    other,
                    &[
                        "event",
                        "summary",
                        "progress",
                        "verification",
                        "leaderboard",
                    ],
                ))
            }
        })
    }

    pub fn write_to(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{}", self.to_line())
    }
}

impl FromStr for ReportLine {
    type Err = serde_json::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ReportLine::parse(s)
    }
}

/// Hash of the parameters that determine a scan's result. Thread count and
/// segment length do not enter.
pub fn run_fingerprint(f: &Polynomial, g: &Base, range: (u64, u64), opts: &ScanOptions) -> String {
    #[derive(Serialize)]
    struct Key<'a> {
        f: &'a Polynomial,
        g: &'a Base,
        range: (u64, u64),
        stop_on_failure: bool,
        allow_negative: bool,
        sieve_bound: u64,
    }
    let key = Key {
        f,
        g,
        range,
        stop_on_failure: opts.stop_on_failure,
        allow_negative: opts.allow_negative,
        sieve_bound: opts.sieve_bound,
    };
    let json = serde_json::to_vec(&key).expect("fingerprint key serializes");
    hex::encode(Sha256::digest(json))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::{artin_run_collect, RecordInstance, Verdict};

    fn round_trip(line: &ReportLine) {
        let text = line.to_line();
        assert!(!text.contains('\n'));
        assert_eq!(&ReportLine::parse(&text).unwrap(), line, "{text}");
    }

    #[test]
    fn wide_event_round_trips() {
        round_trip(&ReportLine::Event(ArtinEvent {
            j: Some(38640),
            n: 1128633,
            p: 182215466740465011809,
            verdict: Verdict::NotPrimitiveRoot,
            duplicate: false,
        }));
        round_trip(&ReportLine::Event(ArtinEvent {
            j: None,
            n: 0,
            p: 2,
            verdict: Verdict::DividesG,
            duplicate: false,
        }));
    }

    #[test]
    fn summary_round_trips() {
        let rec = RecordInstance::gallot2004();
        let opts = ScanOptions::default();
        let (report, _) = artin_run_collect(&rec.g, &rec.f, 0..200, &opts).unwrap();
        round_trip(&ReportLine::Summary(Summary {
            version: TOOL_VERSION.into(),
            fingerprint: run_fingerprint(&rec.f, &rec.g, (0, 200), &opts),
            body: SummaryBody::Run {
                f: rec.f.clone(),
                g: rec.g,
                n_range: (0, 200),
                report,
            },
        }));
        round_trip(&ReportLine::Summary(Summary {
            version: TOOL_VERSION.into(),
            fingerprint: "00".into(),
            body: SummaryBody::Search {
                cursor: u128::MAX - 1,
                total: u128::MAX,
                completed: false,
                stats: SearchStats::default(),
                best_c: None,
            },
        }));
        round_trip(&ReportLine::Progress(ProgressLine {
            done: 5,
            total: 10,
            c: Some(2),
        }));
    }

    #[test]
    fn verification_round_trips() {
        let inst = RecordInstance {
            name: "small".into(),
            f: Polynomial::new(vec![1, 1]).unwrap(),
            g: Base::new(2).unwrap(),
            expected_c: 2,
            expected_n_range: (0, 19),
            tight: false,
        };
        let report = crate::artin::verify_record(&inst, &ScanOptions::default()).unwrap();
        round_trip(&ReportLine::Verification(report));
    }

    #[test]
    fn unknown_kind_is_rejected() {
        assert!(ReportLine::parse(r#"{"kind":"banana"}"#).is_err());
        assert!(ReportLine::parse("not json").is_err());
    }

    #[test]
    fn fingerprint_ignores_threads() {
        let f = Polynomial::new(vec![3, 2]).unwrap();
        let g = Base::new(2).unwrap();
        let one = ScanOptions::default();
        let many = ScanOptions {
            threads: 8,
            ..ScanOptions::default()
        };
        assert_eq!(
            run_fingerprint(&f, &g, (0, 10), &one),
            run_fingerprint(&f, &g, (0, 10), &many)
        );
        assert_ne!(
            run_fingerprint(&f, &g, (0, 10), &one),
            run_fingerprint(&f, &g, (0, 11), &one)
        );
    }
}
