//! Buchberger cross-checks of the closed-form chart eliminations.

use std::time::Instant;

use serde::Serialize;

use super::tables::{chart1_divisor, dn_chart1_plan, flop_chart1_generation, flop_chart1_witnesses};
use super::{eliminate, make_chart, verify_generation, verify_witnesses, BlowupError, Chart, Side};
use crate::catalog::{an_family, dn_family, dn_invariants};
use crate::ideal::{Caps, Ideal, MonomialOrder};
use crate::mcm::{Check, Report};
use crate::poly::Poly;

#[derive(Debug, Clone, Serialize)]
pub struct OracleOutcome {
    pub id: String,
    pub agree: bool,
    pub closed_form: String,
    pub elimination: Vec<String>,
    pub elapsed_ms: u128,
    pub report: Report,
}

fn ring(chart: &Chart) -> Vec<String> {
    let mut vars = chart.coordinates();
    vars.extend(chart.source.params.iter().cloned());
    vars
}

fn ideal(vars: &[String], gens: impl IntoIterator<Item = Poly>) -> Result<Ideal, BlowupError> {
    Ok(Ideal::new(vars.to_vec(), gens.into_iter().collect(), MonomialOrder::Grlex)?)
}

/// A-series chart `chart` (1 or 2): eliminate `x` (resp. `y`) from the raw
/// generators by Buchberger and compare with the closed-form residual.
pub fn a_oracle(n: u32, k: u32, chart: u8, caps: Caps) -> Result<OracleOutcome, BlowupError> {
    let start = Instant::now();
    let m = an_family(n, k, true).map_err(|e| BlowupError::IdentityFailed(e.to_string()))?;
    let (pivot, up, gp, var, gen) = match chart {
        1 => (1, "alpha", "lambda", "x", "lambda21"),
        _ => (0, "beta", "mu", "y", "mu11"),
    };
    let mut c = make_chart(&m, Side::Psi, &[pivot], up, gp)?;
    let vars = ring(&c);
    let raw = ideal(&vars, c.raw_gens.iter().map(|g| g.poly.clone()))?;
    eliminate(&mut c, &[(var.to_string(), gen.to_string())])?;
    let keep: Vec<String> = vars.iter().filter(|v| *v != var).cloned().collect();
    let elim = raw.elimination_ideal(&keep, caps)?;
    let closed = ideal(&keep, c.residual.iter().map(|g| g.poly.clone()))?;
    let agree = elim.gens.len() == 1 && elim.same_ideal(&closed, caps)?;
    let id = format!("{} chart {chart}", m.id);
    let mut report = Report::new(&id);
    report.push(Check::from_bool("principal elimination ideal", agree, format!("{} generator(s)", elim.gens.len())));
    Ok(OracleOutcome {
        id,
        agree,
        closed_form: c.residual[0].poly.to_string(),
        elimination: elim.gens.iter().map(|g| g.to_string()).collect(),
        elapsed_ms: start.elapsed().as_millis(),
        report,
    })
}

/// D₄, k = 2, chart 1. The raw generators only cut out `λ₃` away from the
/// divisor `z² + u·t²`, so the comparison runs in three parts:
/// the divisor times each extended generator is in the raw ideal; the raw
/// elimination ideal is contained in `(λ₃)`; and eliminating from raw plus
/// extended generators gives exactly `(λ₃)`.
pub fn d4_oracle(caps: Caps) -> Result<OracleOutcome, BlowupError> {
    let start = Instant::now();
    let (n, k) = (4, 2);
    let inv = dn_invariants(n, k).map_err(|e| BlowupError::IdentityFailed(e.to_string()))?;
    let sub = inv.mainsub();
    let m = dn_family(n, k).map_err(|e| BlowupError::IdentityFailed(e.to_string()))?;
    let mut c = make_chart(&m, Side::Psi, &[0, 1], "alpha", "lambda")?;
    let witnesses: Vec<_> = flop_chart1_witnesses().iter().map(|w| w.substitute(&sub)).collect();
    let generation: Vec<_> = flop_chart1_generation().iter().map(|g| g.substitute(&sub)).collect();
    verify_witnesses(&mut c, &witnesses)?;
    let extended = c.extended_gens.clone();
    verify_generation(&mut c, &generation)?;
    let vars = ring(&c);
    let gone = ["X", "Y", "alpha11", "alpha21"];
    let keep: Vec<String> = vars.iter().filter(|v| !gone.contains(&v.as_str())).cloned().collect();

    let id = format!("{} chart 1", m.id);
    let mut report = Report::new(&id);

    let raw = ideal(&vars, c.raw_gens.iter().map(|g| g.poly.clone()))?;
    let divisor = chart1_divisor().substitute(&sub);
    let raw_gb = raw.buchberger(caps)?;
    for g in &extended {
        let inside = raw_gb.reduce(&(&divisor * &g.poly))?.is_zero();
        report.push(Check::from_bool(format!("divisor*{} in raw ideal", g.name), inside, divisor.to_string()));
    }

    let mut closed_chart = c.clone();
    eliminate(&mut closed_chart, &dn_chart1_plan())?;
    let lambda3 = closed_chart.residual[0].poly.clone();
    let closed = ideal(&keep, [lambda3.clone()])?;

    let raw_elim = raw.elimination_ideal(&keep, caps)?;
    let contained = raw_elim.gens.iter().all(|g| closed.reduce(g).map(|r| r.is_zero()).unwrap_or(false));
    report.push(Check::from_bool(
        "raw elimination inside (lambda3)",
        contained,
        format!("{} generator(s)", raw_elim.gens.len()),
    ));

    let full = ideal(&vars, c.raw_gens.iter().chain(extended.iter()).map(|g| g.poly.clone()))?;
    let elim = full.elimination_ideal(&keep, caps)?;
    let equal = elim.same_ideal(&closed, caps)?;
    report.push(Check::from_bool("extended elimination = (lambda3)", equal, lambda3.to_string()));

    Ok(OracleOutcome {
        id,
        agree: report.pass(),
        closed_form: lambda3.to_string(),
        elimination: elim.gens.iter().map(|g| g.to_string()).collect(),
        elapsed_ms: start.elapsed().as_millis(),
        report,
    })
}
