//! Matrix factorizations: verification, split form, the flop involution, and
//! direct-sum decomposition under explicit base changes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{GaussRat, Poly};
use crate::polymat::{MatrixError, PolyMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McmError {
    #[error("not splittable: {0}")]
    NotSplittable(String),
    #[error("{which} is not block diagonal: entry ({row}, {col}) is `{entry}`")]
    NotBlockDiagonal { which: &'static str, row: usize, col: usize, entry: String },
    #[error("not a factorization: {0}")]
    NotAFactorization(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Split form `Φ = x·I − Ξ`, `Ψ = x·I + Ξ` with `x` absent from `Ξ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub var: String,
    pub xi: PolyMatrix,
}

/// A pair of square matrices with `φψ = ψφ = f·I` (once verified).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatFac {
    pub id: String,
    pub phi: PolyMatrix,
    pub psi: PolyMatrix,
    pub f: Poly,
    pub split: Option<Split>,
    /// Deformation parameters: variables that are coefficients, not coordinates.
    pub params: Vec<String>,
}

impl MatFac {
    pub fn new(id: impl Into<String>, phi: PolyMatrix, psi: PolyMatrix, f: Poly) -> MatFac {
        MatFac { id: id.into(), phi, psi, f, split: None, params: Vec::new() }
    }

    /// `Φ = x·I − Ξ`, `Ψ = x·I + Ξ`.
    pub fn from_split(id: impl Into<String>, var: &str, xi: PolyMatrix, f: Poly) -> MatFac {
        let n = xi.rows();
        let x = PolyMatrix::scalar(n, &Poly::var(var));
        MatFac {
            id: id.into(),
            phi: &x - &xi,
            psi: &x + &xi,
            f,
            split: Some(Split { var: var.to_string(), xi }),
            params: Vec::new(),
        }
    }

    pub fn with_params(mut self, params: Vec<String>) -> MatFac {
        self.params = params;
        self
    }

    pub fn size(&self) -> usize {
        self.phi.rows()
    }

    pub fn xi(&self) -> Option<&PolyMatrix> {
        self.split.as_ref().map(|s| &s.xi)
    }

    /// The swapped factorization `(Ψ, Φ)`.
    pub fn swapped(&self) -> MatFac {
        let mut out = MatFac::new(format!("{}~swap", self.id), self.psi.clone(), self.phi.clone(), self.f.clone());
        out.params = self.params.clone();
        if let Some(s) = &self.split {
            out.split = Some(Split { var: s.var.clone(), xi: -&s.xi });
        }
        out
    }

    /// Apply a substitution to every matrix entry and to `f`.
    pub fn substitute(&self, id: impl Into<String>, bindings: &BTreeMap<String, Poly>) -> MatFac {
        MatFac {
            id: id.into(),
            phi: self.phi.substitute(bindings),
            psi: self.psi.substitute(bindings),
            f: self.f.substitute(bindings),
            split: self.split.as_ref().map(|s| Split { var: s.var.clone(), xi: s.xi.substitute(bindings) }),
            params: self.params.clone(),
        }
    }
}

/// Entry where two matrices disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub row: usize,
    pub col: usize,
    pub diff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub discrepancies: Vec<Discrepancy>,
}

impl Check {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check { name: name.into(), pass: true, detail: detail.into(), discrepancies: Vec::new() }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check { name: name.into(), pass: false, detail: detail.into(), discrepancies: Vec::new() }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), pass: ok, detail: detail.into(), discrepancies: Vec::new() }
    }

    /// Compare two matrices entrywise; the check fails with every differing entry located.
    pub fn matrices_equal(name: impl Into<String>, got: &PolyMatrix, want: &PolyMatrix) -> Check {
        if (got.rows(), got.cols()) != (want.rows(), want.cols()) {
            return Check::fail(
                name,
                format!("shape {}x{} against {}x{}", got.rows(), got.cols(), want.rows(), want.cols()),
            );
        }
        let diffs: Vec<Discrepancy> = got
            .differences(want)
            .into_iter()
            .map(|(row, col, d)| Discrepancy { row, col, diff: d.to_string() })
            .collect();
        let pass = diffs.is_empty();
        let detail = if pass {
            "exact".to_string()
        } else {
            let first = &diffs[0];
            format!("{} entries differ, first at ({}, {}): {}", diffs.len(), first.row, first.col, first.diff)
        };
        Check { name: name.into(), pass, detail, discrepancies: diffs }
    }

    pub fn polys_equal(name: impl Into<String>, got: &Poly, want: &Poly) -> Check {
        let d = got - want;
        if d.is_zero() {
            Check::pass(name, "exact")
        } else {
            Check::fail(name, format!("difference {d}"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub id: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(id: impl Into<String>) -> Report {
        Report { id: id.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{}] {} :: {} ({})", if c.pass { "PASS" } else { "FAIL" }, self.id, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Both product checks `φψ = f·I` and `ψφ = f·I`, plus split-shape
/// consistency when a split form is recorded.
pub fn verify_factorization(m: &MatFac) -> Report {
    let mut report = Report::new(&m.id);
    let n = m.size();
    let target = PolyMatrix::scalar(n, &m.f);
    for (name, a, b) in [("phi*psi = f*I", &m.phi, &m.psi), ("psi*phi = f*I", &m.psi, &m.phi)] {
        match a.matmul(b) {
            Ok(prod) => report.push(Check::matrices_equal(name, &prod, &target)),
            Err(e) => report.push(Check::fail(name, e.to_string())),
        }
    }
    if let Some(s) = &m.split {
        let x = PolyMatrix::scalar(n, &Poly::var(&s.var));
        let shape_ok = m.phi == &x - &s.xi && m.psi == &x + &s.xi && s.xi.entries().iter().all(|e| !e.occurs(&s.var));
        report.push(Check::from_bool("split shape", shape_ok, format!("phi = {0}I - Xi, psi = {0}I + Xi", s.var)));
    }
    report
}

/// `det(φ)·det(ψ) = f^size`.
pub fn determinant_check(m: &MatFac) -> Check {
    let name = "det(phi)*det(psi) = f^size";
    match (m.phi.determinant(), m.psi.determinant()) {
        (Ok(a), Ok(b)) => Check::polys_equal(name, &(&a * &b), &m.f.pow(m.size() as u32)),
        (Err(e), _) | (_, Err(e)) => Check::fail(name, e.to_string()),
    }
}

/// `Ξ² = −g·I` where `f = x² + g`.
pub fn xi_square_check(m: &MatFac) -> Option<Check> {
    let s = m.split.as_ref()?;
    let g = &m.f - &Poly::var(&s.var).pow(2);
    let sq = s.xi.matmul(&s.xi).ok()?;
    Some(Check::matrices_equal("Xi^2 = -g*I", &sq, &PolyMatrix::scalar(s.xi.rows(), &-g)))
}

/// Recover `Ξ = (ψ − φ)/2` when `φ + ψ = 2x·I`, `x ∉ Ξ`, and `f − x²` is `x`-free.
pub fn split_form(m: &MatFac, var: &str) -> Result<MatFac, McmError> {
    let n = m.size();
    let sum = m.phi.try_add(&m.psi)?;
    if sum != PolyMatrix::scalar(n, &Poly::var(var).scale(&GaussRat::from_int(2))) {
        return Err(McmError::NotSplittable(format!("phi + psi is not 2*{var}*I")));
    }
    let xi = m.psi.try_sub(&m.phi)?.scale_const(&GaussRat::from_frac(1, 2));
    if let Some(e) = xi.entries().iter().find(|e| e.occurs(var)) {
        return Err(McmError::NotSplittable(format!("`{var}` occurs in Xi entry `{e}`")));
    }
    let g = &m.f - &Poly::var(var).pow(2);
    if g.occurs(var) {
        return Err(McmError::NotSplittable(format!("f - {var}^2 still involves `{var}`")));
    }
    let mut out = m.clone();
    out.split = Some(Split { var: var.to_string(), xi });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Involution {
    Holds,
    Fails,
    Skipped,
}

/// Whether `x → −x` carries `(φ, ψ)` to `(−ψ, −φ)`; skipped without a split form.
pub fn involution_check(m: &MatFac) -> Involution {
    let Some(s) = &m.split else { return Involution::Skipped };
    let flip: BTreeMap<String, Poly> = [(s.var.clone(), -Poly::var(&s.var))].into();
    let ok = m.phi.substitute(&flip) == -&m.psi && m.psi.substitute(&flip) == -&m.phi;
    if ok {
        Involution::Holds
    } else {
        Involution::Fails
    }
}

/// Split `m` along `partition` after the base change `φ ↦ B_l·φ·B_r⁻¹`,
/// `ψ ↦ B_r·ψ·B_l⁻¹`. Each block becomes its own factorization of `f`; a
/// block inherits the split variable when its pair is in split form.
pub fn decompose(
    m: &MatFac,
    left: &PolyMatrix,
    right: &PolyMatrix,
    partition: &[Vec<usize>],
) -> Result<Vec<MatFac>, McmError> {
    let phi = PolyMatrix::conjugate2(left, &m.phi, right)?;
    let psi = PolyMatrix::conjugate2(right, &m.psi, left)?;
    for (which, mat) in [("phi", &phi), ("psi", &psi)] {
        if let Some((row, col)) = mat.block_violation(partition) {
            return Err(McmError::NotBlockDiagonal { which, row, col, entry: mat.get(row, col).to_string() });
        }
    }
    let mut out = Vec::with_capacity(partition.len());
    for (i, block) in partition.iter().enumerate() {
        let mut summand = MatFac::new(
            format!("{}/block{}", m.id, i),
            phi.submatrix(block, block),
            psi.submatrix(block, block),
            m.f.clone(),
        );
        summand.params = m.params.clone();
        if let Some(s) = &m.split {
            if let Ok(split) = split_form(&summand, &s.var) {
                summand = split;
            }
        }
        out.push(summand);
    }
    Ok(out)
}

/// Place square blocks at the index sets of `partition` inside an `n×n` zero matrix.
pub fn assemble(blocks: &[&PolyMatrix], partition: &[Vec<usize>], n: usize) -> PolyMatrix {
    let mut out = PolyMatrix::zeros(n, n);
    for (b, idx) in blocks.iter().zip(partition) {
        for (i, &r) in idx.iter().enumerate() {
            for (j, &c) in idx.iter().enumerate() {
                out.set(r, c, b.get(i, j).clone());
            }
        }
    }
    out
}

/// The direct sum of `summands`, conjugated back, reproduces `m`.
pub fn reassembles(
    m: &MatFac,
    left: &PolyMatrix,
    right: &PolyMatrix,
    partition: &[Vec<usize>],
    summands: &[MatFac],
) -> Result<bool, McmError> {
    let n = m.size();
    let phi = assemble(&summands.iter().map(|s| &s.phi).collect::<Vec<_>>(), partition, n);
    let psi = assemble(&summands.iter().map(|s| &s.psi).collect::<Vec<_>>(), partition, n);
    // φ = B_l⁻¹·φ'·B_r and ψ = B_r⁻¹·ψ'·B_l
    let back_phi = left.adjugate_inverse()?.matmul(&phi)?.matmul(right)?;
    let back_psi = right.adjugate_inverse()?.matmul(&psi)?.matmul(left)?;
    Ok(back_phi == m.phi && back_psi == m.psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::p;

    fn a1() -> MatFac {
        let phi = PolyMatrix::from_rows(vec![vec![p("x"), p("z")], vec![p("z"), p("y")]]);
        let psi = PolyMatrix::from_rows(vec![vec![p("y"), p("-z")], vec![p("-z"), p("x")]]);
        MatFac::new("A1", phi, psi, p("x*y - z^2"))
    }

    #[test]
    fn verifies_and_locates_tampering() {
        let m = a1();
        assert!(verify_factorization(&m).pass());
        assert!(determinant_check(&m).pass);
        let mut bad = m.clone();
        bad.phi.set(0, 0, p("x + 1"));
        let r = verify_factorization(&bad);
        assert!(!r.pass());
        let c = &r.checks[0];
        assert_eq!((c.discrepancies[0].row, c.discrepancies[0].col), (0, 0));
    }

    #[test]
    fn split_and_involution() {
        let m = a1();
        assert!(matches!(split_form(&m, "x"), Err(McmError::NotSplittable(_))));
        assert_eq!(involution_check(&m), Involution::Skipped);
        // x = u - v, y = u + v
        let uv: BTreeMap<String, Poly> = [("x".to_string(), p("u - v")), ("y".to_string(), p("u + v"))].into();
        let s = split_form(&m.substitute("A1uv", &uv), "u").unwrap();
        assert_eq!(s.xi().unwrap(), &PolyMatrix::from_rows(vec![vec![p("v"), p("-z")], vec![p("-z"), p("-v")]]));
        assert_eq!(involution_check(&s), Involution::Holds);
        assert!(xi_square_check(&s).unwrap().pass);
        let mut broken = s.clone();
        broken.psi.set(0, 1, p("z"));
        assert_eq!(involution_check(&broken), Involution::Fails);
    }

    #[test]
    fn trivial_decomposition() {
        let m = a1();
        let id = PolyMatrix::identity(2);
        let err = decompose(&m, &id, &id, &[vec![0], vec![1]]).unwrap_err();
        assert!(matches!(err, McmError::NotBlockDiagonal { which: "phi", row: 0, col: 1, .. }));
        let whole = decompose(&m, &id, &id, &[vec![0, 1]]).unwrap();
        assert_eq!(whole.len(), 1);
        assert!(reassembles(&m, &id, &id, &[vec![0, 1]], &whole).unwrap());
    }

    #[test]
    fn report_json_shape() {
        let r = verify_factorization(&a1());
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["id"], "A1");
        assert_eq!(v["checks"][0]["name"], "phi*psi = f*I");
        assert_eq!(v["checks"][0]["pass"], true);
        assert!(v["checks"][0].get("discrepancies").is_none());
    }
}
