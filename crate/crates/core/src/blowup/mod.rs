//! Affine charts of the Grassmann blowup of a matrix factorization.
//!
//! A chart is fixed by a pivot pattern: the kernel-basis matrix `K` has an
//! identity block in the pivot rows and unknowns elsewhere, and the chart
//! ideal is generated by the entries of `Ψ·K` (or `Φ·K`).

pub mod oracle;
pub mod pipeline;
pub mod tables;

use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::catalog::{d_degenerate_tag, DnInvariantData};
use crate::ideal::IdealError;
use crate::mcm::{Check, MatFac, Report};
use crate::poly::{GaussRat, Poly};
use crate::polymat::{MatrixError, PolyMatrix};

pub use tables::{GenerationIdentity, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("bad pivot rows {pivots:?} for a {size}x{size} factorization: {reason}")]
    BadPivot { pivots: Vec<usize>, size: usize, reason: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("witness for `{name}` fails: combination minus divisor*quotient is `{residual}`")]
    WitnessFailed { name: String, residual: String },
    #[error("generation identity for `{target}` fails: difference is `{residual}`")]
    GenerationFailed { target: String, residual: String },
    #[error("`{generator}` is not linear with constant coefficient in `{var}`")]
    NotLinearUnit { var: String, generator: String },
    #[error("identity fails: {0}")]
    IdentityFailed(String),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Phi,
    Psi,
}

/// A named chart generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub poly: Poly,
}

impl Generator {
    pub fn new(name: impl Into<String>, poly: Poly) -> Generator {
        Generator { name: name.into(), poly }
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Generator", 2)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("poly", &self.poly.to_string())?;
        st.end()
    }
}

/// One step of an elimination: `var = value`, read off from `generator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub var: String,
    pub generator: String,
    pub value: Poly,
}

impl Serialize for Elimination {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Elimination", 3)?;
        st.serialize_field("var", &self.var)?;
        st.serialize_field("generator", &self.generator)?;
        st.serialize_field("value", &self.value.to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Chart {
    pub source_id: String,
    #[serde(skip)]
    pub source: MatFac,
    pub side: Side,
    /// Zero-based rows carrying the identity block of `K`.
    pub pivots: Vec<usize>,
    pub unknowns: Vec<String>,
    #[serde(skip)]
    pub kernel: PolyMatrix,
    pub raw_gens: Vec<Generator>,
    pub extended_gens: Vec<Generator>,
    /// Current working generators of the chart ideal.
    pub basis: Vec<Generator>,
    pub elim_log: Vec<Elimination>,
    pub residual: Vec<Generator>,
}

/// Build the chart with the given pivot rows (zero-based). Unknowns are
/// `{unknown_prefix}{i}{j}` over non-pivot rows `i` and columns `j`
/// (1-based), or just the prefix when there is a single unknown; raw
/// generators are `{gen_prefix}{row}{col}`.
pub fn make_chart(
    m: &MatFac,
    side: Side,
    pivots: &[usize],
    unknown_prefix: &str,
    gen_prefix: &str,
) -> Result<Chart, BlowupError> {
    let size = m.size();
    let bad = |reason: &str| BlowupError::BadPivot { pivots: pivots.to_vec(), size, reason: reason.to_string() };
    if size % 2 != 0 {
        return Err(bad("odd size"));
    }
    let rank = size / 2;
    if pivots.len() != rank {
        return Err(bad(&format!("expected {rank} pivot rows")));
    }
    let mut sorted = pivots.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != pivots.len() || sorted.iter().any(|&r| r >= size) {
        return Err(bad("pivot rows must be distinct and in range"));
    }
    let free_rows: Vec<usize> = (0..size).filter(|r| !sorted.contains(r)).collect();
    let single = free_rows.len() * rank == 1;
    let mut unknowns = Vec::new();
    let mut kernel = PolyMatrix::zeros(size, rank);
    for (j, &r) in sorted.iter().enumerate() {
        kernel.set(r, j, Poly::one());
    }
    for (i, &r) in free_rows.iter().enumerate() {
        for j in 0..rank {
            let name = if single { unknown_prefix.to_string() } else { format!("{unknown_prefix}{}{}", i + 1, j + 1) };
            kernel.set(r, j, Poly::var(&name));
            unknowns.push(name);
        }
    }
    let mat = match side {
        Side::Psi => &m.psi,
        Side::Phi => &m.phi,
    };
    let product = mat.matmul(&kernel)?;
    let mut raw_gens = Vec::new();
    for r in 0..size {
        for c in 0..rank {
            raw_gens.push(Generator::new(format!("{gen_prefix}{}{}", r + 1, c + 1), product.get(r, c).clone()));
        }
    }
    Ok(Chart {
        source_id: m.id.clone(),
        source: m.clone(),
        side,
        pivots: sorted,
        unknowns,
        kernel,
        basis: raw_gens.clone(),
        raw_gens,
        extended_gens: Vec::new(),
        elim_log: Vec::new(),
        residual: Vec::new(),
    })
}

/// All `C(size, size/2)` pivot subsets in lexicographic order.
pub fn pivot_subsets(size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, size: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for r in start..=size - left {
            cur.push(r);
            go(r + 1, size, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, size, size / 2, &mut Vec::new(), &mut out);
    out
}

pub fn enumerate_charts(m: &MatFac, side: Side, unknown_prefix: &str, gen_prefix: &str) -> Result<Vec<Chart>, BlowupError> {
    pivot_subsets(m.size()).iter().map(|p| make_chart(m, side, p, unknown_prefix, gen_prefix)).collect()
}

impl Chart {
    /// Generator by name, searched in raw then extended generators.
    pub fn generator(&self, name: &str) -> Result<&Poly, BlowupError> {
        self.raw_gens
            .iter()
            .chain(self.extended_gens.iter())
            .find(|g| g.name == name)
            .map(|g| &g.poly)
            .ok_or_else(|| BlowupError::UnknownGenerator(name.to_string()))
    }

    pub fn raw_matrix(&self) -> PolyMatrix {
        let rank = self.kernel.cols();
        PolyMatrix::from_entries(self.kernel.rows(), rank, self.raw_gens.iter().map(|g| g.poly.clone()).collect())
    }

    /// The other factor times `Ψ·K` equals `f·K`, so `f·K` lies in the chart ideal.
    pub fn membership_certificate(&self) -> Check {
        let other = match self.side {
            Side::Psi => &self.source.phi,
            Side::Phi => &self.source.psi,
        };
        let name = format!("f-membership {}", self.label());
        match other.matmul(&self.raw_matrix()) {
            Ok(got) => Check::matrices_equal(name, &got, &self.kernel.scale(&self.source.f)),
            Err(e) => Check::fail(name, e.to_string()),
        }
    }

    /// Chart coordinates: every variable of the chart ring that is not a parameter.
    pub fn coordinates(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for g in &self.raw_gens {
            for v in g.poly.support() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        for v in self.source.phi.entries().iter().chain(self.source.psi.entries().iter()).flat_map(|p| p.support()) {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        for u in &self.unknowns {
            if !out.contains(u) {
                out.push(u.clone());
            }
        }
        out.retain(|v| !self.source.params.contains(v));
        out.sort();
        out
    }

    pub fn label(&self) -> String {
        let rows: Vec<String> = self.pivots.iter().map(|r| (r + 1).to_string()).collect();
        let side = match self.side {
            Side::Psi => "psi",
            Side::Phi => "phi",
        };
        format!("{}:{side}:{{{}}}", self.source_id, rows.join(","))
    }
}

/// Check each witness exactly and append its quotient as an extended generator.
pub fn verify_witnesses(chart: &mut Chart, witnesses: &[Witness]) -> Result<Report, BlowupError> {
    let mut report = Report::new(chart.label());
    for w in witnesses {
        let mut lhs = Poly::zero();
        for (g, c) in &w.cofactors {
            lhs = lhs + c * chart.generator(g)?;
        }
        let diff = &lhs - &(&w.divisor * &w.quotient);
        if !diff.is_zero() {
            return Err(BlowupError::WitnessFailed { name: w.name.clone(), residual: diff.to_string() });
        }
        report.push(Check::pass(format!("witness {}", w.name), format!("{} = ({})·({})", w.name, w.divisor, w.quotient)));
        chart.extended_gens.retain(|g| g.name != w.name);
        chart.extended_gens.push(Generator::new(&w.name, w.quotient.clone()));
    }
    Ok(report)
}

/// Check each raw generator against its combination, then replace the
/// working basis by the untargeted raw generators plus the extended ones.
pub fn verify_generation(chart: &mut Chart, identities: &[GenerationIdentity]) -> Result<Report, BlowupError> {
    let mut report = Report::new(chart.label());
    for id in identities {
        let target = chart.generator(&id.target)?.clone();
        let mut rhs = Poly::zero();
        for (g, c) in &id.terms {
            rhs = rhs + c * chart.generator(g)?;
        }
        let diff = &target - &rhs;
        if !diff.is_zero() {
            return Err(BlowupError::GenerationFailed { target: id.target.clone(), residual: diff.to_string() });
        }
        report.push(Check::pass(format!("generation {}", id.target), "exact"));
    }
    let targets: Vec<&str> = identities.iter().map(|i| i.target.as_str()).collect();
    chart.basis = chart
        .raw_gens
        .iter()
        .filter(|g| !targets.contains(&g.name.as_str()))
        .chain(chart.extended_gens.iter())
        .cloned()
        .collect();
    Ok(report)
}

/// Solve each generator for its variable and substitute everywhere; the
/// generators used are dropped and what remains is the residual.
pub fn eliminate(chart: &mut Chart, plan: &[(String, String)]) -> Result<(), BlowupError> {
    for (var, name) in plan {
        let pos = chart
            .basis
            .iter()
            .position(|g| &g.name == name)
            .ok_or_else(|| BlowupError::UnknownGenerator(name.clone()))?;
        let gen = &chart.basis[pos].poly;
        let not_linear = || BlowupError::NotLinearUnit { var: var.clone(), generator: name.clone() };
        if gen.degree_in(var) != 1 {
            return Err(not_linear());
        }
        let lead = gen.coeff_of(var, 1).constant_value().filter(|c| !c.is_zero()).ok_or_else(not_linear)?;
        let rest = gen.coeff_of(var, 0);
        let value = rest.scale(&-lead.inv().expect("nonzero"));
        chart.basis.remove(pos);
        for g in chart.basis.iter_mut() {
            g.poly = g.poly.subst(var, &value);
        }
        chart.basis.retain(|g| !g.poly.is_zero());
        chart.elim_log.push(Elimination { var: var.clone(), generator: name.clone(), value });
    }
    let mut residual: Vec<Generator> = Vec::new();
    for g in &chart.basis {
        if g.poly.is_constant() || residual.iter().any(|r| proportional(&r.poly, &g.poly)) {
            continue;
        }
        residual.push(g.clone());
    }
    chart.residual = residual;
    Ok(())
}

/// `a = c·b` for a nonzero constant `c`.
pub fn proportional(a: &Poly, b: &Poly) -> bool {
    match (a.leading(), b.leading()) {
        (Some((_, ca)), Some((_, cb))) => {
            let c = ca * &cb.inv().expect("nonzero");
            a == &b.scale(&c)
        }
        (None, None) => true,
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "m")]
pub enum ResidualKind {
    A(u32),
    D(u32),
    Smooth,
    Unknown,
}

impl fmt::Display for ResidualKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidualKind::A(m) => write!(f, "A({m})"),
            ResidualKind::D(m) => write!(f, "D({m})"),
            ResidualKind::Smooth => write!(f, "smooth"),
            ResidualKind::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidualClass {
    pub kind: ResidualKind,
    /// Matched relation and the renaming that puts it in normal form.
    pub witness: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<String>,
}

impl ResidualClass {
    fn new(kind: ResidualKind, witness: impl Into<String>) -> ResidualClass {
        let degenerate = match kind {
            ResidualKind::D(m) => d_degenerate_tag(m).map(str::to_string),
            ResidualKind::A(0) => Some("A0 (smooth)".to_string()),
            _ => None,
        };
        ResidualClass { kind, witness: witness.into(), degenerate }
    }
}

impl fmt::Display for ResidualClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(t) = &self.degenerate {
            write!(f, " [{t}]")?;
        }
        write!(f, " via {}", self.witness)
    }
}

pub fn classify_residual(chart: &Chart) -> ResidualClass {
    if chart.residual.is_empty() {
        return ResidualClass::new(ResidualKind::Smooth, "no relations");
    }
    if chart.residual.len() > 1 {
        return ResidualClass::new(ResidualKind::Unknown, format!("{} relations", chart.residual.len()));
    }
    classify_relation(&chart.residual[0].poly, &chart.source.params)
}

/// Match one relation against the D then A versal normal forms, treating
/// `params` as coefficients.
pub fn classify_relation(r: &Poly, params: &[String]) -> ResidualClass {
    let coords: Vec<String> = r.support().into_iter().filter(|v| !params.contains(v)).collect();
    let only_params = |p: &Poly| p.support().iter().all(|v| params.contains(v));
    let signs = [GaussRat::from_int(1), GaussRat::from_int(-1)];

    for s in &signs {
        let r = r.scale(s);
        for xv in &coords {
            for yv in &coords {
                for zv in &coords {
                    if xv == yv || xv == zv || yv == zv {
                        continue;
                    }
                    let (x, y, z) = (Poly::var(xv), Poly::var(yv), Poly::var(zv));
                    let rem = &(&r - &x.pow(2)) - &(&y.pow(2) * &z);
                    if rem.occurs(xv) || rem.degree_in(yv) > 1 {
                        continue;
                    }
                    let two_gamma = rem.coeff_of(yv, 1);
                    let big_f = -rem.coeff_of(yv, 0);
                    if !only_params(&two_gamma) {
                        continue;
                    }
                    if big_f.support().iter().any(|v| v != zv && !params.contains(v)) {
                        continue;
                    }
                    let m = if big_f.is_zero() {
                        0
                    } else {
                        let d = big_f.degree_in(zv);
                        if big_f.coeff_of(zv, d) != Poly::one() {
                            continue;
                        }
                        d + 1
                    };
                    let gamma = two_gamma.scale(&GaussRat::from_frac(1, 2));
                    return ResidualClass::new(
                        ResidualKind::D(m),
                        format!("X={xv}, Y={yv}, Z={zv}, gamma={gamma}, F={big_f}"),
                    );
                }
            }
        }
    }

    for a in &coords {
        for b in &coords {
            if a >= b {
                continue;
            }
            let Some(c) = r.coeff_of(a, 1).coeff_of(b, 1).constant_value() else { continue };
            if c.is_zero() || r.degree_in(a) != 1 || r.degree_in(b) != 1 {
                continue;
            }
            let ab = &Poly::var(a) * &Poly::var(b);
            let rest = &r.scale(&c.inv().expect("nonzero")) - &ab;
            if rest.occurs(a) || rest.occurs(b) {
                continue;
            }
            let poly = -rest;
            let others: Vec<String> = poly.support().into_iter().filter(|v| !params.contains(v)).collect();
            if others.is_empty() {
                if poly.constant_value().is_some_and(|v| !v.is_zero()) {
                    return ResidualClass::new(ResidualKind::Smooth, format!("{a}*{b} = {poly}"));
                }
                continue;
            }
            if others.len() != 1 {
                continue;
            }
            let cv = &others[0];
            let d = poly.degree_in(cv);
            let lead = poly.coeff_of(cv, d);
            if d == 0 || (lead != Poly::one() && lead != -Poly::one()) {
                continue;
            }
            let sign = if lead == Poly::one() { "" } else { "-" };
            return ResidualClass::new(ResidualKind::A(d - 1), format!("{sign}{a}*{b} - ({poly}), z={cv}"));
        }
    }
    ResidualClass::new(ResidualKind::Unknown, r.to_string())
}

/// `Ỹ = Y − η·S + G·h·β₁₂ + 2η·G`, with `G` evaluated at `β₂₂`.
pub fn tyurina_y(inv: &DnInvariantData, g_at_beta: &Poly) -> Poly {
    let b12 = Poly::var("beta12");
    let two = GaussRat::from_int(2);
    &(&(&Poly::var("Y") - &(&inv.eta * &inv.s)) + &(&(g_at_beta * &inv.h) * &b12))
        + &(&inv.eta * g_at_beta).scale(&two)
}

/// On the second D_n chart (after eliminating `X, β₁₁, β₂₁`), check
/// `μ₁₂ − G(Z, β₂₂)·μ₃ = Ỹ·β₁₂ + f(β₂₂)` and classify the result, treating
/// `Ỹ` as a new coordinate. `g` is `G(Z, U)`.
pub fn tyurina(chart: &Chart, inv: &DnInvariantData, g: &Poly) -> Result<(Report, ResidualClass), BlowupError> {
    let find = |name: &str| {
        chart
            .basis
            .iter()
            .find(|b| b.name == name)
            .map(|b| b.poly.clone())
            .ok_or_else(|| BlowupError::UnknownGenerator(name.to_string()))
    };
    let (mu12, mu3) = (find("mu12")?, find("mu3")?);
    let g_b = g.subst("U", &Poly::var("beta22"));
    let combined = &mu12 - &(&g_b * &mu3);
    let y_tilde = tyurina_y(inv, &g_b);
    let f_b = inv.f_at("beta22");
    let want = &(&y_tilde * &Poly::var("beta12")) + &f_b;
    let diff = &combined - &want;
    if !diff.is_zero() {
        return Err(BlowupError::IdentityFailed(format!("mu12 - G*mu3 - (Ytilde*beta12 + f(beta22)) = {diff}")));
    }
    let mut report = Report::new(chart.label());
    report.push(Check::pass("tyurina", format!("mu12 - G*mu3 = Ytilde*beta12 + ({f_b}), Ytilde = {y_tilde}")));
    let normal = &(&Poly::var("Ytilde") * &Poly::var("beta12")) + &f_b;
    let class = classify_relation(&normal, &inv.params);
    let want_kind = ResidualKind::A(inv.k.saturating_sub(1));
    report.push(Check::from_bool("tyurina class", class.kind == want_kind, format!("{class}")));
    Ok((report, class))
}

/// `(y, x+vt) − [[−z, −t], [ut, −z]]·(α₁₂, α₂₂)` equals `(λ₁₂, λ₂₂)`.
pub fn matrix_form_check(chart: &Chart) -> Check {
    let v = |s: &str| Poly::var(s);
    let (a12, a22) = (v("alpha12"), v("alpha22"));
    let top = &v("y") - &(&(-&v("z") * &a12) - &(&v("t") * &a22));
    let bottom = &(&v("x") + &(&v("v") * &v("t"))) - &(&(&(&v("u") * &v("t")) * &a12) - &(&v("z") * &a22));
    let (Ok(l12), Ok(l22)) = (chart.generator("lambda12"), chart.generator("lambda22")) else {
        return Check::fail("matrix form", "chart lacks lambda12/lambda22");
    };
    Check::from_bool("matrix form", &top == l12 && &bottom == l22, "(y, x+vt) = M·(alpha12, alpha22) + (lambda12, lambda22)")
}

/// `Φ·K = −(Ψ·K)|x→−x` for a split factorization in variable `x`.
pub fn symmetry_check(m: &MatFac, pivots: &[usize]) -> Result<Check, BlowupError> {
    let var = m.split.as_ref().map(|s| s.var.clone()).ok_or_else(|| BlowupError::IdentityFailed("not split".into()))?;
    let psi = make_chart(m, Side::Psi, pivots, "alpha", "lambda")?;
    let phi = make_chart(m, Side::Phi, pivots, "alpha", "lambda")?;
    let flip = -Poly::var(&var);
    let ok = psi.raw_gens.iter().zip(&phi.raw_gens).all(|(a, b)| b.poly == -a.poly.subst(&var, &flip));
    Ok(Check::from_bool(format!("symmetry {}", psi.label()), ok, format!("{var} -> -{var} exchanges the charts")))
}

#[cfg(test)]
mod tests {
    use super::tables::*;
    use super::*;
    use crate::catalog::{an_family, dn_family, dn_invariants, universal_flop2};
    use crate::poly::p;

    fn flop_chart(pivots: &[usize], up: &str, gp: &str) -> Chart {
        make_chart(&universal_flop2().matfac, Side::Psi, pivots, up, gp).unwrap()
    }

    #[test]
    fn flop_chart1_raw_gens() {
        let c = flop_chart(&[0, 1], "alpha", "lambda");
        assert_eq!(c.raw_gens.len(), 8);
        assert_eq!(c.generator("lambda12").unwrap(), &p("y + alpha12*z + alpha22*t"));
        assert_eq!(c.generator("lambda22").unwrap(), &p("x + v*t - alpha12*u*t + alpha22*z"));
        assert!(c.membership_certificate().pass);
        assert!(matrix_form_check(&c).pass);
    }

    #[test]
    fn flop_chart2_raw_gens() {
        let c = flop_chart(&[0, 2], "beta", "mu");
        assert_eq!(c.generator("mu12").unwrap(), &p("beta12*y + z + beta22*t"));
        assert_eq!(c.generator("mu32").unwrap(), &p("beta12*w*t + x - v*t - beta22*y"));
    }

    #[test]
    fn flop_pipeline() {
        let mut c = flop_chart(&[0, 1], "alpha", "lambda");
        assert!(verify_witnesses(&mut c, &flop_chart1_witnesses()).unwrap().pass());
        assert!(verify_generation(&mut c, &flop_chart1_generation()).unwrap().pass());
        eliminate(&mut c, &flop_chart1_plan()).unwrap();
        assert_eq!(classify_residual(&c).kind, ResidualKind::Smooth);

        let mut c = flop_chart(&[0, 2], "beta", "mu");
        assert!(verify_witnesses(&mut c, &flop_chart2_witnesses()).unwrap().pass());
        assert!(verify_generation(&mut c, &flop_chart2_generation()).unwrap().pass());
        eliminate(&mut c, &flop_chart2_plan()).unwrap();
        assert!(c.residual.is_empty());
    }

    #[test]
    fn perturbed_witness_fails() {
        let mut c = flop_chart(&[0, 1], "alpha", "lambda");
        let mut w = flop_chart1_witnesses();
        w[1].cofactors[0].1 = p("u*t + 1");
        assert!(matches!(verify_witnesses(&mut c, &w), Err(BlowupError::WitnessFailed { .. })));
        let mut c = flop_chart(&[0, 1], "alpha", "lambda");
        verify_witnesses(&mut c, &flop_chart1_witnesses()).unwrap();
        let mut g = flop_chart1_generation();
        g[0].terms[1].1 = p("t");
        assert!(matches!(verify_generation(&mut c, &g), Err(BlowupError::GenerationFailed { .. })));
    }

    #[test]
    fn enumeration_and_pivots() {
        let m = universal_flop2().matfac;
        let charts = enumerate_charts(&m, Side::Psi, "alpha", "lambda").unwrap();
        assert_eq!(charts.len(), 6);
        assert_eq!(charts[0].pivots, vec![0, 1]);
        assert_eq!(charts[5].pivots, vec![2, 3]);
        assert!(charts.iter().all(|c| c.membership_certificate().pass));
        assert!(matches!(make_chart(&m, Side::Psi, &[0], "a", "l"), Err(BlowupError::BadPivot { .. })));
        assert!(matches!(make_chart(&m, Side::Psi, &[1, 1], "a", "l"), Err(BlowupError::BadPivot { .. })));
        for pv in pivot_subsets(4) {
            assert!(symmetry_check(&m, &pv).unwrap().pass);
        }
    }

    #[test]
    fn elimination_shape() {
        let mut c = flop_chart(&[0, 1], "alpha", "lambda");
        let err = eliminate(&mut c, &[("alpha12".into(), "lambda12".into())]).unwrap_err();
        assert!(matches!(err, BlowupError::NotLinearUnit { .. }));
    }

    #[test]
    fn a_series_charts() {
        for n in 2..=6 {
            for k in 1..n {
                let m = an_family(n, k, true).unwrap();
                let (g, h) = (m.phi.get(0, 1).clone(), m.phi.get(1, 0).clone());
                let mut c1 = make_chart(&m, Side::Psi, &[1], "alpha", "lambda").unwrap();
                assert_eq!(c1.generator("lambda11").unwrap(), &(&p("y*alpha") - &g));
                eliminate(&mut c1, &[("x".into(), "lambda21".into())]).unwrap();
                assert_eq!(c1.residual.len(), 1);
                assert_eq!(classify_residual(&c1).kind, ResidualKind::A(k - 1));

                let mut c2 = make_chart(&m, Side::Psi, &[0], "beta", "mu").unwrap();
                eliminate(&mut c2, &[("y".into(), "mu11".into())]).unwrap();
                assert_eq!(c2.residual[0].poly, &p("x*beta") - &h);
                assert_eq!(classify_residual(&c2).kind, ResidualKind::A(n - k - 1));
            }
        }
    }

    fn d_chart1(n: u32, k: u32) -> (Chart, DnInvariantData) {
        let inv = dn_invariants(n, k).unwrap();
        let sub = inv.mainsub();
        let m = dn_family(n, k).unwrap();
        let mut c = make_chart(&m, Side::Psi, &[0, 1], "alpha", "lambda").unwrap();
        let w: Vec<_> = flop_chart1_witnesses().iter().map(|w| w.substitute(&sub)).collect();
        let g: Vec<_> = flop_chart1_generation().iter().map(|g| g.substitute(&sub)).collect();
        verify_witnesses(&mut c, &w).unwrap();
        verify_generation(&mut c, &g).unwrap();
        (c, inv)
    }

    #[test]
    fn d_chart1_residual() {
        for n in 2..=7 {
            for k in 1..=n {
                let (mut c, inv) = d_chart1(n, k);
                eliminate(&mut c, &dn_chart1_plan()).unwrap();
                let lambda3 = &(&p("alpha22^2 + alpha12^2*Z") - &(&inv.eta * &p("2*alpha12"))) - &inv.h;
                assert_eq!(c.residual.len(), 1, "n={n} k={k}");
                assert_eq!(c.residual[0].poly, lambda3);
                let class = classify_residual(&c);
                assert_eq!(class.kind, ResidualKind::D(n - k), "n={n} k={k}: {class}");
                assert!(class.witness.starts_with("X=alpha22, Y=alpha12, Z=Z"));
                assert_eq!(class.degenerate.is_some(), n - k <= 3);
            }
        }
    }

    fn d_chart2(n: u32, k: u32) -> (Chart, DnInvariantData) {
        let inv = dn_invariants(n, k).unwrap();
        let sub = inv.mainsub();
        let m = dn_family(n, k).unwrap();
        let mut c = make_chart(&m, Side::Psi, &[0, 2], "beta", "mu").unwrap();
        let w: Vec<_> = flop_chart2_witnesses().iter().map(|w| w.substitute(&sub)).collect();
        let g: Vec<_> = flop_chart2_generation().iter().map(|g| g.substitute(&sub)).collect();
        verify_witnesses(&mut c, &w).unwrap();
        verify_generation(&mut c, &g).unwrap();
        eliminate(&mut c, &dn_chart2_plan()).unwrap();
        (c, inv)
    }

    #[test]
    fn d_chart2_tyurina() {
        let (c, inv) = d_chart2(4, 2);
        assert_eq!(inv.g, p("-1"));
        let (report, class) = tyurina(&c, &inv, &inv.g).unwrap();
        assert!(report.pass());
        assert_eq!(class.kind, ResidualKind::A(1));

        let (c, inv) = d_chart2(6, 3);
        let (report, class) = tyurina(&c, &inv, &inv.g).unwrap();
        assert!(report.pass());
        assert_eq!(class.kind, ResidualKind::A(2));

        let wrong = &inv.g + &p("1");
        assert!(matches!(tyurina(&c, &inv, &wrong), Err(BlowupError::IdentityFailed(_))));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_relation(&p("x*y - z^3"), &[]).kind, ResidualKind::A(2));
        assert_eq!(classify_relation(&p("z^3 - x*y"), &[]).kind, ResidualKind::A(2));
        assert_eq!(classify_relation(&p("X^2 + Y^2*Z - Z^3 - a*Z"), &["a".into()]).kind, ResidualKind::D(4));
        assert_eq!(classify_relation(&p("x^3 + y^3 + z^3"), &[]).kind, ResidualKind::Unknown);
        assert!(proportional(&p("2*x - 4"), &p("x - 2")));
        assert!(!proportional(&p("x - 2"), &p("x + 2")));
    }

    #[test]
    fn chart_json() {
        let mut c = flop_chart(&[0, 1], "alpha", "lambda");
        verify_witnesses(&mut c, &flop_chart1_witnesses()).unwrap();
        let j = serde_json::to_value(&c).unwrap();
        assert_eq!(j["pivots"], serde_json::json!([0, 1]));
        assert_eq!(j["extended_gens"][0]["name"], "lambda1");
        assert_eq!(serde_json::to_value(ResidualKind::A(2)).unwrap(), serde_json::json!({"type": "A", "m": 2}));
    }
}
