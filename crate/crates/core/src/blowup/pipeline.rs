//! End-to-end runs of the charts with known closed forms.

use super::tables::*;
use super::{
    classify_residual, eliminate, make_chart, matrix_form_check, tyurina, verify_generation, verify_witnesses,
    BlowupError, Chart, ResidualClass, ResidualKind, Side,
};
use crate::catalog::{an_family, dn_family, dn_invariants, universal_flop2};
use crate::ideal::{Caps, Ideal, MonomialOrder};
use crate::mcm::{Check, Report};
use crate::poly::Poly;

#[derive(Debug, Clone)]
pub struct ChartRun {
    pub chart: Chart,
    pub report: Report,
    pub class: ResidualClass,
}

fn catalog_err(e: crate::catalog::CatalogError) -> BlowupError {
    BlowupError::IdentityFailed(e.to_string())
}

fn expect_class(report: &mut Report, class: &ResidualClass, want: ResidualKind) {
    report.push(Check::from_bool(format!("residual {want}"), class.kind == want, class.to_string()));
}

/// Pivot rows (zero-based) and names of the two displayed charts.
pub fn chart_layout(which: u8) -> (&'static [usize], &'static str, &'static str) {
    match which {
        1 => (&[0, 1], "alpha", "lambda"),
        _ => (&[0, 2], "beta", "mu"),
    }
}

/// Universal flop chart 1 or 2: witnesses, generation, elimination to a smooth chart.
pub fn flop_chart(which: u8) -> Result<ChartRun, BlowupError> {
    let uf = universal_flop2();
    let (pivots, up, gp) = chart_layout(which);
    let mut chart = make_chart(&uf.matfac, Side::Psi, pivots, up, gp)?;
    let mut report = Report::new(chart.label());
    report.push(chart.membership_certificate());
    let (w, g, plan) = if which == 1 {
        (flop_chart1_witnesses(), flop_chart1_generation(), flop_chart1_plan())
    } else {
        (flop_chart2_witnesses(), flop_chart2_generation(), flop_chart2_plan())
    };
    report.extend(verify_witnesses(&mut chart, &w)?);
    report.extend(verify_generation(&mut chart, &g)?);
    if which == 1 {
        report.push(matrix_form_check(&chart));
    }
    eliminate(&mut chart, &plan)?;
    let class = classify_residual(&chart);
    expect_class(&mut report, &class, ResidualKind::Smooth);
    Ok(ChartRun { chart, report, class })
}

/// A-series chart 1 (pivot row 2, eliminate `x`) or chart 2 (pivot row 1, eliminate `y`).
pub fn a_chart(n: u32, k: u32, which: u8) -> Result<ChartRun, BlowupError> {
    let m = an_family(n, k, true).map_err(catalog_err)?;
    let (g, h) = (m.phi.get(0, 1).clone(), m.phi.get(1, 0).clone());
    let (pivot, up, gp, var, gen, want, kind) = if which == 1 {
        (1, "alpha", "lambda", "x", "lambda21", &(&Poly::var("y") * &Poly::var("alpha")) - &g, ResidualKind::A(k - 1))
    } else {
        (0, "beta", "mu", "y", "mu11", &(&Poly::var("x") * &Poly::var("beta")) - &h, ResidualKind::A(n - k - 1))
    };
    let mut chart = make_chart(&m, Side::Psi, &[pivot], up, gp)?;
    let mut report = Report::new(chart.label());
    report.push(chart.membership_certificate());
    eliminate(&mut chart, &[(var.to_string(), gen.to_string())])?;
    let got = chart.residual.first().map(|r| r.poly.clone()).unwrap_or_else(Poly::zero);
    report.push(Check::polys_equal("closed-form residual", &got, &want));
    let class = classify_residual(&chart);
    expect_class(&mut report, &class, kind);
    Ok(ChartRun { chart, report, class })
}

fn dn_chart_prepared(n: u32, k: u32, which: u8) -> Result<(Chart, Report, crate::catalog::DnInvariantData), BlowupError> {
    let inv = dn_invariants(n, k).map_err(catalog_err)?;
    let sub = inv.mainsub();
    let m = dn_family(n, k).map_err(catalog_err)?;
    let (pivots, up, gp) = chart_layout(which);
    let mut chart = make_chart(&m, Side::Psi, pivots, up, gp)?;
    let mut report = Report::new(chart.label());
    report.push(chart.membership_certificate());
    let (w, g) = if which == 1 {
        (flop_chart1_witnesses(), flop_chart1_generation())
    } else {
        (flop_chart2_witnesses(), flop_chart2_generation())
    };
    let w: Vec<_> = w.iter().map(|w| w.substitute(&sub)).collect();
    let g: Vec<_> = g.iter().map(|g| g.substitute(&sub)).collect();
    report.extend(verify_witnesses(&mut chart, &w)?);
    report.extend(verify_generation(&mut chart, &g)?);
    Ok((chart, report, inv))
}

/// Witness and generation identities only, after substituting into the D_n family.
pub fn dn_identities(n: u32, k: u32, which: u8) -> Result<Report, BlowupError> {
    dn_chart_prepared(n, k, which).map(|(_, r, _)| r)
}

/// D_n chart 1: residual `λ₃ = α₂₂² + α₁₂²Z − 2ηα₁₂ − h`, classified `D(n−k)`.
pub fn dn_chart1(n: u32, k: u32) -> Result<ChartRun, BlowupError> {
    let (mut chart, mut report, inv) = dn_chart_prepared(n, k, 1)?;
    eliminate(&mut chart, &dn_chart1_plan())?;
    let want = &(&(&Poly::var("alpha22").pow(2) + &(&Poly::var("alpha12").pow(2) * &Poly::var("Z")))
        - &(&inv.eta * &Poly::var("alpha12")).scale(&crate::poly::GaussRat::from_int(2)))
        - &inv.h;
    let got = match chart.residual.as_slice() {
        [only] => only.poly.clone(),
        _ => Poly::zero(),
    };
    report.push(Check::polys_equal("lambda3 residual", &got, &want));
    let class = classify_residual(&chart);
    expect_class(&mut report, &class, ResidualKind::D(n - k));
    Ok(ChartRun { chart, report, class })
}

/// D_n chart 2: eliminate `X, β₁₁, β₂₁`, then the Tyurina combination gives `A(k−1)`.
pub fn dn_chart2(n: u32, k: u32) -> Result<ChartRun, BlowupError> {
    let (mut chart, mut report, inv) = dn_chart_prepared(n, k, 2)?;
    eliminate(&mut chart, &dn_chart2_plan())?;
    let (ty, class) = tyurina(&chart, &inv, &inv.g)?;
    report.extend(ty);
    Ok(ChartRun { chart, report, class })
}

/// Flop chart 1 at `x = y = z = t = 0`: eliminating `α₁₁, α₂₁` leaves the
/// principal ideal of the conic `w + α₂₂² + α₁₂²u − 2α₁₂v`.
pub fn conic_fiber_check(caps: Caps) -> Result<Check, BlowupError> {
    let run = flop_chart(1)?;
    let zero = Poly::zero();
    let fiber = |p: &Poly| ["x", "y", "z", "t"].iter().fold(p.clone(), |acc, v| acc.subst(v, &zero));
    let vars: Vec<String> =
        ["alpha11", "alpha21", "alpha12", "alpha22", "u", "v", "w"].iter().map(|s| s.to_string()).collect();
    let gens: Vec<Poly> = run.chart.raw_gens.iter().chain(run.chart.extended_gens.iter()).map(|g| fiber(&g.poly)).collect();
    let ideal = Ideal::new(vars.clone(), gens, MonomialOrder::Grlex)?;
    let keep = vars[2..].to_vec();
    let elim = ideal.elimination_ideal(&keep, caps)?;
    let conic = crate::poly::p("w + alpha22^2 + alpha12^2*u - 2*alpha12*v");
    let principal = Ideal::new(keep, vec![conic.clone()], MonomialOrder::Grlex)?;
    let same = elim.same_ideal(&principal, caps)?;
    Ok(Check::from_bool("conic fiber", same, format!("({conic})")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_charts() {
        assert!(flop_chart(1).unwrap().report.pass());
        assert!(flop_chart(2).unwrap().report.pass());
        assert!(a_chart(5, 2, 1).unwrap().report.pass());
        assert!(a_chart(5, 2, 2).unwrap().report.pass());
        let run = dn_chart1(6, 3).unwrap();
        assert!(run.report.pass(), "{}", run.report);
        assert_eq!(run.class.kind, ResidualKind::D(3));
        let run = dn_chart2(6, 3).unwrap();
        assert!(run.report.pass(), "{}", run.report);
        assert_eq!(run.class.kind, ResidualKind::A(2));
        assert!(conic_fiber_check(Caps::default()).unwrap().pass);
    }

    #[test]
    fn dn_chart2_all_k() {
        for n in 4..=6 {
            for k in 1..=n {
                let run = dn_chart2(n, k).unwrap();
                assert!(run.report.pass(), "n={n} k={k}: {}", run.report);
            }
        }
    }
}
