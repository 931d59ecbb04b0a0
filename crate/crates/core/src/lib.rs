//! Exact-arithmetic q-series calculus over the truncated ring
//! `Z_p[[q-1]][[lambda]]` and a machine-checkable congruence suite for
//! the q-hypergeometric Frobenius structure it carries.
//!
//! Everything is computed over exact rationals at a configurable finite
//! precision window; divisibility and congruence claims are decided by
//! p-adic valuations, never by approximation. The verification surface
//! is organized into named suites (see [`suites::SUITE_IDS`]) runnable
//! from the companion command-line tool.

pub mod coeff;
pub mod dwork;
pub mod error;
pub mod frobstruct;
pub mod hyper;
pub mod qcalc;
pub mod qseries;
pub mod report;
pub mod suites;

pub use coeff::{gen_binom, vp, Dyadic, Rat, Valuation};
pub use error::{CoreError, Result};
pub use qseries::{LogSeries, Prec, QSeries};
pub use report::{CaseResult, CongruenceReport, SuiteResult, Verdict, Witness};
pub use suites::{run, RunConfig};
