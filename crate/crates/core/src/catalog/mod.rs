//! Constructors for every factorization the engine knows about: the A and D
//! families (deformed and at the origin), the E-series tables, and the
//! universal flop of length 2.

mod a_series;
mod d_series;
mod e_series;
mod flop;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mcm::MatFac;

pub use a_series::{an_family, an_polys, an_split_family};
pub use d_series::{
    b0, b1, b2, b3, b3_partition, dn_family, dn_family_at_origin, dn_gsv, dn_invariants, dn_invariants_at_origin,
    dn_invariants_from_roots, xi1, xi2, xi3, xi3_as_printed, xi4, DnInvariantData,
};
pub use e_series::{e_labels, e_series, stabilize, EEntry};
pub use flop::{quadratic_form, universal_flop2, UniversalFlop, FLOP_VARS};

/// Largest rank accepted by the family constructors.
pub const MAX_RANK: u32 = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("index out of range: {0}")]
    BadIndex(String),
    #[error("unknown label `{label}` for {series}")]
    UnknownLabel { series: Series, label: String },
    #[error("not a factorization: {0}")]
    NotAFactorization(String),
    #[error("{0}")]
    Incomplete(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Series {
    A,
    D,
    E6,
    E7,
    E8,
    #[serde(rename = "UF2")]
    UniversalFlop2,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Series::A => "A",
            Series::D => "D",
            Series::E6 => "E6",
            Series::E7 => "E7",
            Series::E8 => "E8",
            Series::UniversalFlop2 => "UF2",
        })
    }
}

impl FromStr for Series {
    type Err = String;

    fn from_str(s: &str) -> Result<Series, String> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "D" => Ok(Series::D),
            "E6" => Ok(Series::E6),
            "E7" => Ok(Series::E7),
            "E8" => Ok(Series::E8),
            "UF2" | "FLOP" | "UNIVERSALFLOP2" => Ok(Series::UniversalFlop2),
            other => Err(format!("unknown series `{other}` (expected A, D, E6, E7, E8, UF2)")),
        }
    }
}

/// Which catalog entry to build.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub series: Series,
    pub n: Option<u32>,
    pub k: Option<u32>,
    pub deformed: bool,
    pub label: Option<String>,
}

impl FamilySpec {
    pub fn a(n: u32, k: u32, deformed: bool) -> FamilySpec {
        FamilySpec { series: Series::A, n: Some(n), k: Some(k), deformed, label: None }
    }

    pub fn d(n: u32, k: u32, deformed: bool) -> FamilySpec {
        FamilySpec { series: Series::D, n: Some(n), k: Some(k), deformed, label: None }
    }

    pub fn e(series: Series, label: &str) -> FamilySpec {
        FamilySpec { series, n: None, k: None, deformed: false, label: Some(label.to_string()) }
    }

    pub fn flop() -> FamilySpec {
        FamilySpec { series: Series::UniversalFlop2, n: None, k: None, deformed: true, label: None }
    }

    fn nk(&self) -> Result<(u32, u32), CatalogError> {
        match (self.n, self.k) {
            (Some(n), Some(k)) => Ok((n, k)),
            _ => Err(CatalogError::Incomplete(format!("{} needs both n and k", self.series))),
        }
    }

    /// Build the factorization. Undeformed D entries are the origin
    /// specialization of the deformed family.
    pub fn build(&self) -> Result<MatFac, CatalogError> {
        match self.series {
            Series::A => {
                let (n, k) = self.nk()?;
                an_family(n, k, self.deformed)
            }
            Series::D => {
                let (n, k) = self.nk()?;
                if self.deformed {
                    dn_family(n, k)
                } else {
                    dn_family_at_origin(n, k)
                }
            }
            Series::E6 | Series::E7 | Series::E8 => {
                let label = self
                    .label
                    .as_deref()
                    .ok_or_else(|| CatalogError::Incomplete(format!("{} needs a label", self.series)))?;
                Ok(e_series(self.series, label)?.matfac)
            }
            Series::UniversalFlop2 => Ok(universal_flop2().matfac),
        }
    }
}

pub(crate) fn check_a_bounds(n: u32, k: u32) -> Result<(), CatalogError> {
    if !(2..=MAX_RANK).contains(&n) {
        return Err(CatalogError::BadIndex(format!("A series needs 2 <= n <= {MAX_RANK}, got n = {n}")));
    }
    if !(1..n).contains(&k) {
        return Err(CatalogError::BadIndex(format!("A series needs 1 <= k <= n-1, got n = {n}, k = {k}")));
    }
    Ok(())
}

pub(crate) fn check_d_bounds(n: u32, k: u32) -> Result<(), CatalogError> {
    if !(2..=MAX_RANK).contains(&n) {
        return Err(CatalogError::BadIndex(format!("D series needs 2 <= n <= {MAX_RANK}, got n = {n}")));
    }
    if !(1..=n).contains(&k) {
        return Err(CatalogError::BadIndex(format!("D series needs 1 <= k <= n, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// Coefficient of the marked vertex in the maximal root.
pub fn vertex_length(series: Series, n: Option<u32>, k: Option<u32>, label: Option<&str>) -> Option<u32> {
    match series {
        Series::A => Some(1),
        Series::D => {
            let (n, k) = (n?, k?);
            Some(if k == 1 || k + 1 >= n { 1 } else { 2 })
        }
        Series::E6 | Series::E7 | Series::E8 => label.and_then(|l| l.chars().next()?.to_digit(10)),
        Series::UniversalFlop2 => Some(2),
    }
}

/// Tag for D-type ranks where the Dynkin diagram degenerates.
pub fn d_degenerate_tag(m: u32) -> Option<&'static str> {
    match m {
        0 => Some("D0 (empty)"),
        1 => Some("D1 (smooth)"),
        2 => Some("D2 = A1 u A1"),
        3 => Some("D3 = A3"),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub series: Series,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Dynkin coefficient of the vertex; factorizations have size `2·length`
    /// except the 2×2 A-series.
    pub length: u32,
    pub size: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<String>,
}

impl ManifestEntry {
    pub fn spec(&self, deformed: bool) -> FamilySpec {
        FamilySpec { series: self.series, n: self.n, k: self.k, deformed, label: self.label.clone() }
    }
}

/// Every catalog entry: A for `2 ≤ n ≤ max_a`, D for `2 ≤ n ≤ max_d`, the
/// E-series tables and the universal flop.
pub fn manifest(max_a: u32, max_d: u32) -> Vec<ManifestEntry> {
    let mut out = Vec::new();
    for n in 2..=max_a.min(MAX_RANK) {
        for k in 1..n {
            out.push(ManifestEntry {
                id: a_series::family_id(n, k),
                series: Series::A,
                n: Some(n),
                k: Some(k),
                label: None,
                length: 1,
                size: 2,
                degenerate: None,
            });
        }
    }
    for n in 2..=max_d.min(MAX_RANK) {
        for k in 1..=n {
            let length = vertex_length(Series::D, Some(n), Some(k), None).unwrap();
            let degenerate = if n <= 3 {
                Some(format!("rank: {}", d_degenerate_tag(n).unwrap()))
            } else {
                d_degenerate_tag(n - k).map(|t| format!("residual: {t}"))
            };
            out.push(ManifestEntry {
                id: d_series::family_id(n, k),
                series: Series::D,
                n: Some(n),
                k: Some(k),
                label: None,
                length,
                size: 4,
                degenerate,
            });
        }
    }
    for series in [Series::E6, Series::E7, Series::E8] {
        for &label in e_labels(series) {
            let length = vertex_length(series, None, None, Some(label)).unwrap();
            out.push(ManifestEntry {
                id: e_series::entry_id(series, label),
                series,
                n: None,
                k: None,
                label: Some(label.to_string()),
                length,
                size: 2 * length,
                degenerate: None,
            });
        }
    }
    out.push(ManifestEntry {
        id: "UF2".into(),
        series: Series::UniversalFlop2,
        n: None,
        k: None,
        label: None,
        length: 2,
        size: 4,
        degenerate: None,
    });
    out
}

pub(crate) fn names(prefix: &str, count: u32) -> Vec<String> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_names() {
        for s in [Series::A, Series::D, Series::E6, Series::E7, Series::E8, Series::UniversalFlop2] {
            assert_eq!(s.to_string().parse::<Series>().unwrap(), s);
        }
        assert!("F4".parse::<Series>().is_err());
        assert_eq!(serde_json::to_string(&Series::UniversalFlop2).unwrap(), "\"UF2\"");
    }

    #[test]
    fn lengths() {
        assert_eq!(vertex_length(Series::D, Some(6), Some(1), None), Some(1));
        assert_eq!(vertex_length(Series::D, Some(6), Some(3), None), Some(2));
        assert_eq!(vertex_length(Series::D, Some(6), Some(5), None), Some(1));
        assert_eq!(vertex_length(Series::D, Some(6), Some(6), None), Some(1));
        assert_eq!(vertex_length(Series::E8, None, None, Some("6")), Some(6));
        assert_eq!(vertex_length(Series::E7, None, None, Some("2''")), Some(2));
    }

    #[test]
    fn manifest_counts() {
        let m = manifest(4, 4);
        let count = |s: Series| m.iter().filter(|e| e.series == s).count();
        assert_eq!(count(Series::A), 1 + 2 + 3);
        assert_eq!(count(Series::D), 2 + 3 + 4);
        assert_eq!(count(Series::E6) + count(Series::E7) + count(Series::E8), 21);
        assert_eq!(count(Series::UniversalFlop2), 1);
        let d4k2 = m.iter().find(|e| e.id == "D(n=4,k=2)").unwrap();
        assert_eq!((d4k2.length, d4k2.degenerate.as_deref()), (2, Some("residual: D2 = A1 u A1")));
    }

    #[test]
    fn bounds() {
        assert!(matches!(FamilySpec::a(99999, 1, true).build(), Err(CatalogError::BadIndex(_))));
        assert!(matches!(FamilySpec::a(3, 3, true).build(), Err(CatalogError::BadIndex(_))));
        assert!(matches!(FamilySpec::d(4, 0, true).build(), Err(CatalogError::BadIndex(_))));
        let mut s = FamilySpec::a(3, 1, true);
        s.k = None;
        assert!(matches!(s.build(), Err(CatalogError::Incomplete(_))));
    }
}
