use crate::mcm::MatFac;
use crate::poly::Poly;
use crate::polymat::PolyMatrix;

use super::{CatalogError, Series};

type Rows = &'static [&'static [&'static str]];

enum Table {
    /// `φ`, `ψ` with `φψ = ψφ = −g·I`.
    Pair(Rows, Rows),
    /// `Ξ` given directly.
    Xi(Rows),
}

const E6: &[(&str, Table)] = &[
    ("1+", Table::Xi(&[&["i*Z^2", "-Y^2"], &["Y", "-i*Z^2"]])),
    ("2+", Table::Xi(&[
        &["i*Z^2", "0", "-Y^2", "0"],
        &["0", "i*Z^2", "Y*Z", "-Y^2"],
        &["Y", "0", "-i*Z^2", "0"],
        &["Z", "Y", "0", "-i*Z^2"],
    ])),
    ("3", Table::Pair(
        &[&["-Y^2", "-Z^3", "-Y*Z^2"], &["Y*Z", "-Y^2", "Z^3"], &["Z^2", "-Y*Z", "-Y^2"]],
        &[&["Y", "0", "-Z^2"], &["Z", "Y", "0"], &["0", "-Z", "Y"]],
    )),
    ("2", Table::Pair(&[&["Y^2", "-Z^3"], &["-Z", "-Y"]], &[&["-Y", "Z^3"], &["Z", "Y^2"]])),
    ("2-", Table::Xi(&[
        &["-i*Z^2", "0", "-Y^2", "0"],
        &["0", "-i*Z^2", "Y*Z", "-Y^2"],
        &["Y", "0", "i*Z^2", "0"],
        &["Z", "Y", "0", "i*Z^2"],
    ])),
    ("1-", Table::Xi(&[&["-i*Z^2", "-Y^2"], &["Y", "i*Z^2"]])),
];

const E7: &[(&str, Table)] = &[
    ("2'", Table::Pair(&[&["Y^2", "-Y*Z^2"], &["-Z", "-Y"]], &[&["-Y", "Y*Z^2"], &["Z", "Y^2"]])),
    ("3'", Table::Pair(
        &[&["Y^2", "-Y*Z^2", "Y^2*Z"], &["-Y*Z", "-Y^2", "-Y*Z^2"], &["-Z^2", "-Y*Z", "Y^2"]],
        &[&["-Y", "0", "Y*Z"], &["Z", "Y", "0"], &["0", "Z", "-Y"]],
    )),
    ("4", Table::Pair(
        &[
            &["0", "0", "Y^2", "-Y*Z^2"],
            &["0", "0", "-Y*Z", "-Y^2"],
            &["Y", "-Z^2", "0", "Y*Z"],
            &["-Z", "-Y", "-Y", "0"],
        ],
        &[
            &["0", "-Y*Z", "-Y^2", "Y*Z^2"],
            &["Y", "0", "Y*Z", "Y^2"],
            &["-Y", "Z^2", "0", "0"],
            &["Z", "Y", "0", "0"],
        ],
    )),
    ("2''", Table::Pair(&[&["Y^2", "-Y*Z^2"], &["-Y*Z", "-Y^2"]], &[&["-Y", "Z^2"], &["Z", "Y"]])),
    ("3", Table::Pair(
        &[&["-Y*Z", "-Y^2", "-Y*Z^2"], &["Z^2", "Y*Z", "-Y^2"], &["-Y", "Z^2", "-Y*Z"]],
        &[&["0", "-Y*Z", "Y^2"], &["Y", "0", "-Y*Z"], &["Z", "Y", "0"]],
    )),
    ("2", Table::Pair(&[&["-Y*Z", "Y^2"], &["-Y", "-Z^2"]], &[&["Z^2", "Y^2"], &["-Y", "Y*Z"]])),
    ("1", Table::Pair(&[&["-Y^2 - Z^3"]], &[&["Y"]])),
];

const E8: &[(&str, Table)] = &[
    ("2'", Table::Pair(&[&["-Z^3", "Y^2"], &["-Y", "-Z^2"]], &[&["Z^2", "Y^2"], &["-Y", "Z^3"]])),
    ("4'", Table::Pair(
        &[
            &["0", "-Z^3", "Y^2", "0"],
            &["-Z^2", "0", "-Y*Z", "-Y^2"],
            &["Y", "Z^2", "0", "-Z^3"],
            &["0", "-Y", "-Z^2", "0"],
        ],
        &[
            &["0", "Z^3", "-Y^2", "-Y*Z^2"],
            &["Z^2", "0", "0", "Y^2"],
            &["-Y", "0", "0", "Z^3"],
            &["Z", "Y", "Z^2", "0"],
        ],
    )),
    ("6", Table::Pair(
        &[
            &["0", "0", "0", "-Y^2", "-Y*Z^2", "-Z^4"],
            &["0", "0", "0", "-Z^3", "Y^2", "Y*Z^2"],
            &["0", "0", "0", "-Y*Z", "-Z^3", "Y^2"],
            &["-Y", "-Z^2", "0", "0", "0", "-Z^3"],
            &["0", "Y", "-Z^2", "Z^2", "0", "0"],
            &["-Z", "0", "Y", "0", "Z^2", "0"],
        ],
        &[
            &["0", "0", "Z^3", "Y^2", "Y*Z^2", "Z^4"],
            &["-Z^2", "0", "0", "Z^3", "-Y^2", "-Y*Z^2"],
            &["0", "Z^2", "0", "Y*Z", "Z^3", "-Y^2"],
            &["Y", "Z^2", "0", "0", "0", "0"],
            &["0", "-Y", "Z^2", "0", "0", "0"],
            &["Z", "0", "-Y", "0", "0", "0"],
        ],
    )),
    ("3''", Table::Pair(
        &[&["-Y^2", "-Y*Z^2", "-Z^4"], &["-Z^3", "Y^2", "Y*Z^2"], &["-Y*Z", "-Z^3", "Y^2"]],
        &[&["Y", "Z^2", "0"], &["0", "-Y", "Z^2"], &["Z", "0", "-Y"]],
    )),
    ("5", Table::Pair(
        &[
            &["Z^3", "Y^2", "0", "0", "0"],
            &["0", "-Z^3", "-Y^2", "Y*Z^2", "Z^4"],
            &["0", "-Y*Z", "Z^3", "Y^2", "Y*Z^2"],
            &["-Z^2", "0", "-Y*Z", "Z^3", "-Y^2"],
            &["Y", "-Z^2", "0", "0", "0"],
        ],
        &[
            &["-Z^2", "0", "0", "0", "-Y^2"],
            &["-Y", "0", "0", "0", "Z^3"],
            &["0", "Y", "-Z^2", "0", "0"],
            &["-Z", "0", "-Y", "-Z^2", "0"],
            &["0", "-Z", "0", "Y", "Z^2"],
        ],
    )),
    ("4", Table::Pair(
        &[&["Z^3", "-Y^2", "0", "0"], &["0", "-Y*Z", "Z^3", "Y^2"], &["Y", "Z^2", "0", "0"], &["-Z", "0", "Y", "-Z^2"]],
        &[
            &["-Z^2", "0", "-Y^2", "0"],
            &["Y", "0", "-Z^3", "0"],
            &["0", "-Z^2", "-Y*Z", "-Y^2"],
            &["Z", "-Y", "0", "Z^3"],
        ],
    )),
    ("3", Table::Pair(
        &[&["-Y^2", "-Z^4", "-Y*Z^3"], &["-Y*Z", "Y^2", "-Z^4"], &["-Z^2", "Y*Z", "Y^2"]],
        &[&["Y", "0", "Z^3"], &["Z", "-Y", "0"], &["0", "Z", "-Y"]],
    )),
    ("2", Table::Pair(&[&["Y^2", "-Z^4"], &["-Z", "-Y"]], &[&["-Y", "Z^4"], &["Z", "Y^2"]])),
];

fn table(series: Series) -> &'static [(&'static str, Table)] {
    match series {
        Series::E6 => E6,
        Series::E7 => E7,
        Series::E8 => E8,
        _ => &[],
    }
}

/// Labels of the E-series tables in Dynkin-diagram order.
pub fn e_labels(series: Series) -> &'static [&'static str] {
    match series {
        Series::E6 => &["1+", "2+", "3", "2", "2-", "1-"],
        Series::E7 => &["2'", "3'", "4", "2''", "3", "2", "1"],
        Series::E8 => &["2'", "4'", "6", "3''", "5", "4", "3", "2"],
        _ => &[],
    }
}

/// `g(Y, Z)` with `X² + g` the surface equation.
pub fn e_polynomial(series: Series) -> Option<Poly> {
    let s = match series {
        Series::E6 => "Y^3 + Z^4",
        Series::E7 => "Y^3 + Y*Z^3",
        Series::E8 => "Y^3 + Z^5",
        _ => return None,
    };
    Some(Poly::parse_in(s, &yz()).expect("literal"))
}

fn yz() -> Vec<String> {
    vec!["Y".to_string(), "Z".to_string()]
}

/// Accept typographic primes and `±` spellings.
fn normalize_label(label: &str) -> String {
    label
        .trim()
        .replace('″', "''")
        .replace('′', "'")
        .replace('⁺', "+")
        .replace('⁻', "-")
        .replace('−', "-")
        .replace('"', "''")
}

pub(crate) fn entry_id(series: Series, label: &str) -> String {
    format!("{series}[{label}]")
}

/// One appendix entry.
#[derive(Debug, Clone)]
pub struct EEntry {
    pub series: Series,
    pub label: &'static str,
    pub length: u32,
    pub g: Poly,
    /// `(φ, ψ)` when the table gives the small pair.
    pub pair: Option<(PolyMatrix, PolyMatrix)>,
    /// Split factorization of `X² + g` of size `2·length`.
    pub matfac: MatFac,
}

pub fn e_series(series: Series, label: &str) -> Result<EEntry, CatalogError> {
    let wanted = normalize_label(label);
    let g = e_polynomial(series)
        .ok_or_else(|| CatalogError::UnknownLabel { series, label: label.to_string() })?;
    let (name, t) = table(series)
        .iter()
        .find(|(l, _)| *l == wanted)
        .ok_or_else(|| CatalogError::UnknownLabel { series, label: label.to_string() })?;
    let length = name.chars().next().and_then(|c| c.to_digit(10)).expect("label starts with its length");
    let id = entry_id(series, name);
    let (pair, matfac) = match t {
        Table::Pair(phi, psi) => {
            let phi = PolyMatrix::parse_rows(phi, &yz());
            let psi = PolyMatrix::parse_rows(psi, &yz());
            let mut m = stabilize(&phi, &psi, &g)?;
            m.id = id;
            (Some((phi, psi)), m)
        }
        Table::Xi(xi) => {
            let xi = PolyMatrix::parse_rows(xi, &yz());
            (None, MatFac::from_split(id, "X", xi, &Poly::var("X").pow(2) + &g))
        }
    };
    Ok(EEntry { series, label: name, length, g, pair, matfac })
}

/// `Ξ = [[0, φ], [ψ, 0]]`, so `Ξ² = −g·I` and `(X·I − Ξ)(X·I + Ξ) = (X² + g)·I`.
/// Negating the lower block instead would give `Ξ² = g·I`.
pub fn stabilize(phi: &PolyMatrix, psi: &PolyMatrix, g: &Poly) -> Result<MatFac, CatalogError> {
    let n = phi.rows();
    let target = PolyMatrix::scalar(n, &-g);
    for (name, a, b) in [("phi*psi", phi, psi), ("psi*phi", psi, phi)] {
        let prod = a.matmul(b).map_err(|e| CatalogError::NotAFactorization(e.to_string()))?;
        if prod != target {
            let (r, c, d) = prod.differences(&target).into_iter().next().expect("differs");
            return Err(CatalogError::NotAFactorization(format!(
                "{name} + g*I is nonzero at ({r}, {c}): {d}; product is\n{prod}"
            )));
        }
    }
    let mut xi = PolyMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            xi.set(i, n + j, phi.get(i, j).clone());
            xi.set(n + i, j, psi.get(i, j).clone());
        }
    }
    Ok(MatFac::from_split("stabilized", "X", xi, &Poly::var("X").pow(2) + g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcm::{verify_factorization, xi_square_check};
    use crate::poly::p;

    #[test]
    fn every_entry_factors() {
        for series in [Series::E6, Series::E7, Series::E8] {
            assert_eq!(e_labels(series).len(), table(series).len());
            for label in e_labels(series) {
                let e = e_series(series, label).unwrap();
                let r = verify_factorization(&e.matfac);
                assert!(r.pass(), "{}", r);
                assert!(xi_square_check(&e.matfac).unwrap().pass);
                assert_eq!(e.matfac.size() as u32, 2 * e.length);
            }
        }
    }

    #[test]
    fn typographic_labels() {
        assert_eq!(e_series(Series::E7, "2″").unwrap().label, "2''");
        assert_eq!(e_series(Series::E6, "1⁻").unwrap().label, "1-");
        assert!(matches!(e_series(Series::E6, "4"), Err(CatalogError::UnknownLabel { .. })));
    }

    #[test]
    fn stabilization() {
        let e = stabilize(&PolyMatrix::parse_rows(&[&["-Y^2 - Z^3"]], &yz()), &PolyMatrix::parse_rows(&[&["Y"]], &yz()), &p("Y^3 + Y*Z^3"))
            .unwrap();
        assert_eq!(e.f, p("X^2 + Y^3 + Y*Z^3"));
        assert!(verify_factorization(&e).pass());
        let one = PolyMatrix::from_rows(vec![vec![p("1")]]);
        let triv = stabilize(&one, &one, &p("-1")).unwrap();
        assert_eq!(triv.f, p("X^2 - 1"));
        assert!(verify_factorization(&triv).pass());
        assert!(matches!(stabilize(&one, &one, &p("Y")), Err(CatalogError::NotAFactorization(_))));
    }

    #[test]
    fn negated_lower_block_squares_to_plus_g() {
        let e = e_series(Series::E6, "3").unwrap();
        let (phi, psi) = e.pair.unwrap();
        let mut xi = PolyMatrix::zeros(6, 6);
        for i in 0..3 {
            for j in 0..3 {
                xi.set(i, 3 + j, phi.get(i, j).clone());
                xi.set(3 + i, j, -psi.get(i, j));
            }
        }
        assert!(xi.matmul(&xi).unwrap().is_constant_diagonal_of(&e.g));
    }
}
