//! Certificates, searches and spectral tools for finitely presented
//! preordered commutative semirings.

pub mod cert;
pub mod error;
pub mod expr;
pub mod presentation;
pub mod search;
pub mod spectrum;
pub mod asymptotic;
pub mod localization;
pub mod order_ext;
pub mod syntax;
pub mod document;
pub mod suite;

pub use cert::{nat_compare, replay, replay_expect, Certificate, Rule, Verdict};
pub use error::{Error, Result};
pub use expr::{Expr, Monomial};
pub use presentation::{ExponentConstraint, MonomialSet, Presentation};
pub use search::{check_nat_embedding, check_preorder, search_certificate, Budget};
