//! Verification suites: each is a list of independent tasks whose records
//! are merged in task order.

use std::time::Instant;

use rayon::prelude::*;

use mfk_core::blowup::pipeline::{a_chart, chart_layout, conic_fiber_check, dn_chart1, dn_chart2, dn_identities};
use mfk_core::blowup::tables::{
    flop_chart1_generation, flop_chart1_witnesses, flop_chart2_generation, flop_chart2_witnesses,
};
use mfk_core::blowup::{
    enumerate_charts, make_chart, symmetry_check, verify_generation, verify_witnesses, pivot_subsets, Side,
};
use mfk_core::catalog::{
    an_family, an_split_family, b0, b1, b2, b3, b3_partition, dn_family, dn_family_at_origin, dn_gsv, dn_invariants,
    e_labels, e_series, quadratic_form, universal_flop2, xi1, xi2, xi3, xi4, Series,
};
use mfk_core::ideal::Caps;
use mfk_core::mcm::{
    decompose, determinant_check, reassembles, verify_factorization, xi_square_check, Check, MatFac, Report,
};
use mfk_core::poly::{p, Poly};
use mfk_core::polymat::PolyMatrix;

use crate::report::{Record, RunReport};

pub const A_FACTORIZATION_MAX: u32 = 12;
pub const D_FACTORIZATION_MAX: u32 = 8;
pub const A_CHART_MAX: u32 = 8;
pub const D_MIN: u32 = 4;
pub const D_MAX: u32 = 8;
pub const E_SERIES: [Series; 3] = [Series::E6, Series::E7, Series::E8];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Factorizations,
    Witnesses,
    Charts,
    Decompositions,
    Specializations,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Factorizations => "factorizations",
            Suite::Witnesses => "witnesses",
            Suite::Charts => "charts",
            Suite::Decompositions => "decompositions",
            Suite::Specializations => "specializations",
            Suite::All => "all",
        }
    }
}

/// Restrict a suite to one series and optionally one `n` and `k`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Filter {
    pub series: Option<Series>,
    pub n: Option<u32>,
    pub k: Option<u32>,
}

impl Filter {
    fn series(&self, s: Series) -> bool {
        self.series.is_none_or(|f| f == s)
    }

    fn ns(&self, lo: u32, hi: u32) -> Vec<u32> {
        match self.n {
            Some(n) => vec![n],
            None => (lo..=hi).collect(),
        }
    }

    fn ks(&self, lo: u32, hi: u32) -> Vec<u32> {
        match self.k {
            Some(k) if (lo..=hi).contains(&k) => vec![k],
            Some(_) => Vec::new(),
            None => (lo..=hi).collect(),
        }
    }
}

/// Left and right base changes, the block partition, and expected split blocks by index.
type BaseChange = (PolyMatrix, PolyMatrix, Vec<Vec<usize>>, Vec<(usize, PolyMatrix)>);

type Job = Box<dyn Fn() -> Result<Vec<Record>, String> + Send + Sync>;

pub struct Task {
    pub id: String,
    job: Job,
}

impl Task {
    fn new(id: impl Into<String>, job: impl Fn() -> Result<Vec<Record>, String> + Send + Sync + 'static) -> Task {
        Task { id: id.into(), job: Box::new(job) }
    }

    fn report(id: impl Into<String>, job: impl Fn() -> Result<Report, String> + Send + Sync + 'static) -> Task {
        Task::new(id, move || job().map(|r| Record::from_report(&r)))
    }

    pub fn run(&self) -> Vec<Record> {
        let start = Instant::now();
        let mut records = match (self.job)() {
            Ok(r) => r,
            Err(e) => vec![Record::error(&self.id, e)],
        };
        let ms = start.elapsed().as_millis();
        for r in &mut records {
            r.wall_ms = ms;
        }
        records
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn tasks(suite: Suite, filter: &Filter) -> Vec<Task> {
    match suite {
        Suite::Factorizations => factorization_tasks(filter),
        Suite::Witnesses => witness_tasks(filter),
        Suite::Charts => chart_tasks(filter),
        Suite::Decompositions => decomposition_tasks(filter),
        Suite::Specializations => specialization_tasks(filter),
        Suite::All => [
            Suite::Factorizations,
            Suite::Witnesses,
            Suite::Charts,
            Suite::Decompositions,
            Suite::Specializations,
        ]
        .iter()
        .flat_map(|s| tasks(*s, filter))
        .collect(),
    }
}

/// Run a suite with `threads` workers; records come back in task order.
pub fn run(suite: Suite, filter: &Filter, threads: usize) -> RunReport {
    let tasks = tasks(suite, filter);
    let records: Vec<Record> = if threads > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| tasks.par_iter().map(Task::run).collect::<Vec<_>>()).into_iter().flatten().collect(),
            Err(e) => vec![Record::error("thread pool", e.to_string())],
        }
    } else {
        tasks.iter().flat_map(Task::run).collect()
    };
    RunReport::new(suite.name(), records)
}

fn full_check(m: &MatFac) -> Report {
    let mut r = verify_factorization(m);
    if let Some(c) = xi_square_check(m) {
        r.push(c);
    }
    r
}

pub fn factorization_tasks(filter: &Filter) -> Vec<Task> {
    let mut out = Vec::new();
    if filter.series(Series::A) {
        for n in filter.ns(2, A_FACTORIZATION_MAX) {
            for k in filter.ks(1, n.saturating_sub(1)) {
                out.push(Task::report(format!("A n={n} k={k}"), move || {
                    let mut r = verify_factorization(&an_family(n, k, true).map_err(err)?);
                    r.extend(full_check(&an_split_family(n, k, true).map_err(err)?));
                    r.extend(verify_factorization(&an_family(n, k, false).map_err(err)?));
                    Ok(r)
                }));
            }
        }
    }
    if filter.series(Series::D) {
        for n in filter.ns(2, D_FACTORIZATION_MAX) {
            for k in filter.ks(1, n) {
                out.push(Task::report(format!("D n={n} k={k}"), move || {
                    let m = dn_family(n, k).map_err(err)?;
                    let mut r = full_check(&m);
                    r.push(Check::polys_equal("f = surface", &m.f, &dn_invariants(n, k).map_err(err)?.surface()));
                    Ok(r)
                }));
            }
        }
        for n in filter.ns(D_MIN, D_MAX) {
            for k in filter.ks(1, n.saturating_sub(1)) {
                out.push(Task::report(format!("GSV n={n} k={k}"), move || Ok(full_check(&gsv_matfac(n, k)?))));
            }
        }
    }
    for s in E_SERIES {
        if !filter.series(s) {
            continue;
        }
        for label in e_labels(s) {
            out.push(Task::report(format!("{s} {label}"), move || {
                let e = e_series(s, label).map_err(err)?;
                let mut r = full_check(&e.matfac);
                r.push(determinant_check(&e.matfac));
                if let Some((phi, psi)) = &e.pair {
                    let prod = phi.matmul(psi).map_err(err)?;
                    r.push(Check::matrices_equal("phi*psi = -g*I", &prod, &PolyMatrix::scalar(phi.rows(), &-&e.g)));
                }
                Ok(r)
            }));
        }
    }
    if filter.series(Series::UniversalFlop2) {
        out.push(Task::report("UF2", || Ok(flop_identities())));
    }
    out
}

/// `Ξ` of the GSV closed form as a split factorization of `X² + Y²Z − Z^{n−1}`.
pub fn gsv_matfac(n: u32, k: u32) -> Result<MatFac, String> {
    let xi = dn_gsv(n, k).map_err(err)?;
    let f = &p("X^2 + Y^2*Z") - &Poly::var("Z").pow(n - 1);
    Ok(MatFac::from_split(format!("GSV(n={n},k={k})"), "X", xi, f))
}

/// `−Ξ² = (W − x²)·I`, `det C = (uw − v²)²`, `tr Ξ = 0`, `W = vᵀCv`.
pub fn flop_identities() -> Report {
    let uf = universal_flop2();
    let mut r = full_check(&uf.matfac);
    let g = &uf.w - &p("x^2");
    let sq = uf.xi.matmul(&uf.xi).expect("square");
    r.push(Check::matrices_equal("-Xi^2 = (W - x^2)*I", &-&sq, &PolyMatrix::scalar(4, &g)));
    match uf.coefficients.determinant() {
        Ok(d) => r.push(Check::polys_equal("discriminant", &d, &p("(u*w - v^2)^2"))),
        Err(e) => r.push(Check::fail("discriminant", e.to_string())),
    }
    r.push(Check::from_bool("trace Xi = 0", uf.xi.trace().is_zero(), "exact"));
    r.push(Check::polys_equal("W = quadratic form", &quadratic_form(&uf.coefficients), &uf.w));
    r
}

fn flop_identity_report(which: u8) -> Result<Report, String> {
    let uf = universal_flop2();
    let (pivots, up, gp) = chart_layout(which);
    let mut chart = make_chart(&uf.matfac, Side::Psi, pivots, up, gp).map_err(err)?;
    let (w, g) = if which == 1 {
        (flop_chart1_witnesses(), flop_chart1_generation())
    } else {
        (flop_chart2_witnesses(), flop_chart2_generation())
    };
    let mut r = verify_witnesses(&mut chart, &w).map_err(err)?;
    r.extend(verify_generation(&mut chart, &g).map_err(err)?);
    Ok(r)
}

pub fn witness_tasks(filter: &Filter) -> Vec<Task> {
    let mut out = Vec::new();
    if filter.series(Series::UniversalFlop2) {
        for which in [1, 2] {
            out.push(Task::report(format!("UF2 chart {which} identities"), move || flop_identity_report(which)));
        }
    }
    if filter.series(Series::D) {
        for n in filter.ns(D_MIN, D_MAX) {
            for k in filter.ks(1, n) {
                for which in [1, 2] {
                    out.push(Task::report(format!("D n={n} k={k} chart {which} identities"), move || {
                        dn_identities(n, k, which).map_err(err)
                    }));
                }
            }
        }
    }
    out
}

pub fn chart_tasks(filter: &Filter) -> Vec<Task> {
    let mut out = Vec::new();
    if filter.series(Series::A) {
        for n in filter.ns(2, A_CHART_MAX) {
            for k in filter.ks(1, n.saturating_sub(1)) {
                for which in [1, 2] {
                    out.push(Task::report(format!("A n={n} k={k} chart {which}"), move || {
                        a_chart(n, k, which).map(|run| run.report).map_err(err)
                    }));
                }
            }
        }
    }
    if filter.series(Series::D) {
        for n in filter.ns(D_MIN, D_MAX) {
            for k in filter.ks(1, n) {
                out.push(Task::report(format!("D n={n} k={k} chart 1"), move || {
                    dn_chart1(n, k).map(|run| run.report).map_err(err)
                }));
                out.push(Task::report(format!("D n={n} k={k} chart 2"), move || {
                    dn_chart2(n, k).map(|run| run.report).map_err(err)
                }));
            }
        }
    }
    if filter.series(Series::UniversalFlop2) {
        for which in [1, 2] {
            out.push(Task::report(format!("UF2 chart {which}"), move || {
                mfk_core::blowup::pipeline::flop_chart(which).map(|run| run.report).map_err(err)
            }));
        }
        out.push(Task::report("UF2 conic fiber", || {
            let mut r = Report::new("UF2 chart 1");
            r.push(conic_fiber_check(Caps::from_env()?).map_err(err)?);
            Ok(r)
        }));
        out.push(Task::report("UF2 symmetry", || {
            let m = universal_flop2().matfac;
            let mut r = Report::new("UF2");
            for pv in pivot_subsets(4) {
                r.push(symmetry_check(&m, &pv).map_err(err)?);
            }
            Ok(r)
        }));
        out.push(Task::report("UF2 all charts", || {
            let mut r = Report::new("UF2");
            for chart in enumerate_charts(&universal_flop2().matfac, Side::Psi, "alpha", "lambda").map_err(err)? {
                r.push(chart.membership_certificate());
            }
            Ok(r)
        }));
    }
    out
}

/// Base changes for `k = 1`, `k = n` and `k = n − 1` and the expected summands.
pub fn decomposition_report(n: u32, k: u32) -> Result<Report, String> {
    let inv = dn_invariants(n, k).map_err(err)?;
    let m = dn_family(n, k).map_err(err)?;
    let mut r = Report::new(format!("{} decomposition", m.id));
    let (left, right, partition, want): BaseChange = if k == 1 {
        (b0(&inv), b1(&inv), vec![vec![0], vec![1], vec![2, 3]], vec![(2, xi1(&inv))])
    } else if k == n {
        (b2(), b2(), b3_partition(), vec![(0, xi2(&inv)), (1, xi2(&inv))])
    } else if k + 1 == n {
        (b3(), b3(), b3_partition(), vec![(0, xi3(&inv)), (1, xi4(&inv))])
    } else {
        return Err(format!("no base change for n = {n}, k = {k}"));
    };
    let blocks = decompose(&m, &left, &right, &partition).map_err(err)?;
    r.push(Check::pass("block diagonal", format!("{} blocks", blocks.len())));
    if k == 1 {
        r.push(Check::polys_equal("rank-one block phi", blocks[0].phi.get(0, 0), &inv.surface()));
        r.push(Check::polys_equal("rank-one block psi", blocks[0].psi.get(0, 0), &Poly::one()));
        r.push(Check::polys_equal("trivial block phi", blocks[1].phi.get(0, 0), &Poly::one()));
    }
    for (i, xi) in want {
        match blocks[i].xi() {
            Some(got) => r.push(Check::matrices_equal(format!("block {i} Xi"), got, &xi)),
            None => r.push(Check::fail(format!("block {i} Xi"), "block is not in split form")),
        }
    }
    for b in &blocks {
        let v = verify_factorization(b);
        r.push(Check::from_bool(format!("{} re-verifies", b.id), v.pass(), format!("{} checks", v.checks.len())));
    }
    let back = reassembles(&m, &left, &right, &partition, &blocks).map_err(err)?;
    r.push(Check::from_bool("reassembles", back, "direct sum conjugated back"));
    Ok(r)
}

pub fn decomposition_tasks(filter: &Filter) -> Vec<Task> {
    let mut out = Vec::new();
    if !filter.series(Series::D) {
        return out;
    }
    for n in filter.ns(D_MIN, D_MAX) {
        let mut ks = vec![1, n - 1, n];
        ks.dedup();
        for k in ks {
            if filter.k.is_some_and(|f| f != k) {
                continue;
            }
            out.push(Task::report(format!("D n={n} k={k} decomposition"), move || decomposition_report(n, k)));
        }
    }
    out
}

pub fn specialization_tasks(filter: &Filter) -> Vec<Task> {
    let mut out = Vec::new();
    if !filter.series(Series::D) {
        return out;
    }
    for n in filter.ns(D_MIN, D_MAX) {
        for k in filter.ks(1, n.saturating_sub(1)) {
            out.push(Task::report(format!("D n={n} k={k} origin"), move || {
                let origin = dn_family_at_origin(n, k).map_err(err)?;
                let gsv = dn_gsv(n, k).map_err(err)?;
                let mut r = Report::new(&origin.id);
                match origin.xi() {
                    Some(xi) => r.push(Check::matrices_equal("origin = closed form", xi, &gsv)),
                    None => r.push(Check::fail("origin = closed form", "origin has no split form")),
                }
                r.push(Check::polys_equal("origin f", &origin.f, &gsv_matfac(n, k)?.f));
                Ok(r)
            }));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters() {
        let f = Filter { series: Some(Series::D), n: Some(6), k: Some(3) };
        let ids: Vec<String> = chart_tasks(&f).into_iter().map(|t| t.id).collect();
        assert_eq!(ids, vec!["D n=6 k=3 chart 1", "D n=6 k=3 chart 2"]);
        assert!(decomposition_tasks(&f).is_empty());
        let f = Filter { series: Some(Series::E6), ..Filter::default() };
        assert_eq!(factorization_tasks(&f).len(), 6);
    }

    #[test]
    fn threads_keep_order() {
        let f = Filter { series: Some(Series::A), n: Some(5), k: None };
        let one = run(Suite::Charts, &f, 1);
        let four = run(Suite::Charts, &f, 4);
        assert!(one.pass());
        let ids = |r: &RunReport| r.records.iter().map(|x| x.id.clone()).collect::<Vec<_>>();
        assert_eq!(ids(&one), ids(&four));
    }

    #[test]
    fn d_chart_instance() {
        let f = Filter { series: Some(Series::D), n: Some(6), k: Some(3) };
        let r = run(Suite::Charts, &f, 1);
        assert!(r.pass(), "{r}");
        let text = r.to_string();
        assert!(text.contains("residual D(3)"));
        assert!(text.contains("A(2)"));
    }
}
