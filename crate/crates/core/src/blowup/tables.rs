//! Witness and generation identities for the two displayed charts of the
//! universal flop, in the flop's coordinates `x, y, z, t, u, v, w`.

use std::collections::BTreeMap;

use crate::poly::{p, Poly};

/// `Σ cofactor·generator = divisor·quotient`; the quotient becomes a new
/// generator named `name` once the identity is checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub name: String,
    pub cofactors: Vec<(String, Poly)>,
    pub divisor: Poly,
    pub quotient: Poly,
}

/// `target = Σ coefficient·generator` over the working generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationIdentity {
    pub target: String,
    pub terms: Vec<(String, Poly)>,
}

impl Witness {
    pub fn substitute(&self, bindings: &BTreeMap<String, Poly>) -> Witness {
        Witness {
            name: self.name.clone(),
            cofactors: self.cofactors.iter().map(|(g, c)| (g.clone(), c.substitute(bindings))).collect(),
            divisor: self.divisor.substitute(bindings),
            quotient: self.quotient.substitute(bindings),
        }
    }
}

impl GenerationIdentity {
    pub fn substitute(&self, bindings: &BTreeMap<String, Poly>) -> GenerationIdentity {
        GenerationIdentity {
            target: self.target.clone(),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c.substitute(bindings))).collect(),
        }
    }
}

fn witness(name: &str, cofactors: &[(&str, &str)], divisor: &str, quotient: &str) -> Witness {
    Witness {
        name: name.to_string(),
        cofactors: cofactors.iter().map(|(g, c)| (g.to_string(), p(c))).collect(),
        divisor: p(divisor),
        quotient: p(quotient),
    }
}

fn generation(target: &str, terms: &[(&str, &str)]) -> GenerationIdentity {
    GenerationIdentity { target: target.to_string(), terms: terms.iter().map(|(g, c)| (g.to_string(), p(c))).collect() }
}

/// Divisor `z² + u·t²` of the first chart (`∂W/∂w`).
pub fn chart1_divisor() -> Poly {
    p("z^2 + u*t^2")
}

/// Divisor `y² + w·t²` of the second chart (`∂W/∂u`).
pub fn chart2_divisor() -> Poly {
    p("y^2 + w*t^2")
}

pub fn flop_chart1_witnesses() -> Vec<Witness> {
    let d = "z^2 + u*t^2";
    vec![
        witness(
            "lambda1",
            &[("lambda11", "z"), ("lambda12", "-u*t"), ("lambda21", "-t"), ("lambda22", "-z")],
            d,
            "alpha11 - alpha22",
        ),
        witness(
            "lambda2",
            &[("lambda11", "-u*t"), ("lambda12", "-u*z"), ("lambda21", "-z"), ("lambda22", "u*t")],
            d,
            "2*v - alpha12*u - alpha21",
        ),
        witness(
            "lambda3",
            &[
                ("lambda12", "alpha12*u*z + alpha22*u*t"),
                ("lambda22", "-alpha12*u*t + alpha22*z"),
                ("lambda32", "u*t"),
                ("lambda42", "-z"),
            ],
            d,
            "alpha22^2 + alpha12^2*u - 2*alpha12*v + w",
        ),
    ]
}

pub fn flop_chart1_generation() -> Vec<GenerationIdentity> {
    vec![
        generation("lambda11", &[("lambda22", "1"), ("lambda1", "z"), ("lambda2", "-t")]),
        generation("lambda21", &[("lambda12", "-u"), ("lambda1", "-u*t"), ("lambda2", "-z")]),
        generation(
            "lambda31",
            &[
                ("lambda12", "alpha12*u - 2*v"),
                ("lambda22", "alpha22"),
                ("lambda1", "x - v*t"),
                ("lambda2", "y"),
                ("lambda3", "-z"),
            ],
        ),
        generation("lambda32", &[("lambda12", "-alpha22"), ("lambda22", "alpha12"), ("lambda3", "t")]),
        generation(
            "lambda41",
            &[
                ("lambda12", "alpha11*u"),
                ("lambda22", "alpha21"),
                ("lambda1", "-alpha12*u*z - alpha22*u*t + 2*v*z"),
                ("lambda2", "alpha22*z - alpha12*u*t"),
                ("lambda3", "-u*t"),
            ],
        ),
        generation("lambda42", &[("lambda12", "alpha12*u"), ("lambda22", "alpha22"), ("lambda3", "-z")]),
    ]
}

pub fn flop_chart2_witnesses() -> Vec<Witness> {
    let d = "y^2 + w*t^2";
    vec![
        witness(
            "mu1",
            &[("mu11", "y"), ("mu12", "w*t"), ("mu31", "t"), ("mu32", "-y")],
            d,
            "beta11 + beta22",
        ),
        witness(
            "mu2",
            &[("mu11", "-w*t"), ("mu12", "w*y"), ("mu31", "y"), ("mu32", "w*t")],
            d,
            "-beta21 + beta12*w",
        ),
        witness(
            "mu3",
            &[
                ("mu12", "-2*v*y + beta12*w*y + beta22*w*t"),
                ("mu32", "beta12*w*t - beta22*y"),
                ("mu22", "-w*t"),
                ("mu42", "y"),
            ],
            d,
            "beta22^2 + u - 2*beta12*v + beta12^2*w",
        ),
    ]
}

pub fn flop_chart2_generation() -> Vec<GenerationIdentity> {
    vec![
        generation("mu11", &[("mu32", "1"), ("mu1", "y"), ("mu2", "-t")]),
        generation(
            "mu21",
            &[("mu12", "-2*v + beta12*w"), ("mu32", "-beta22"), ("mu1", "x + v*t"), ("mu2", "-z"), ("mu3", "-y")],
        ),
        generation("mu22", &[("mu12", "beta22"), ("mu32", "beta12"), ("mu3", "-t")]),
        generation("mu31", &[("mu12", "-w"), ("mu1", "w*t"), ("mu2", "y")]),
        generation(
            "mu41",
            &[("mu12", "beta22*w"), ("mu32", "beta12*w"), ("mu1", "-w*z"), ("mu2", "-x - v*t"), ("mu3", "-w*t")],
        ),
        generation("mu42", &[("mu12", "2*v - beta12*w"), ("mu32", "beta22"), ("mu3", "y")]),
    ]
}

/// Chart-1 elimination order on the flop: `y, x, α₁₁, α₂₁, w`.
pub fn flop_chart1_plan() -> Vec<(String, String)> {
    plan(&[("y", "lambda12"), ("x", "lambda22"), ("alpha11", "lambda1"), ("alpha21", "lambda2"), ("w", "lambda3")])
}

/// Chart-2 elimination order on the flop: `z, x, β₁₁, β₂₁, u`.
pub fn flop_chart2_plan() -> Vec<(String, String)> {
    plan(&[("z", "mu12"), ("x", "mu32"), ("beta11", "mu1"), ("beta21", "mu2"), ("u", "mu3")])
}

/// D_n chart 1: `α₁₁, α₂₁` via `λ₁, λ₂`, then `Y, X` via `λ₁₂, λ₂₂`.
pub fn dn_chart1_plan() -> Vec<(String, String)> {
    plan(&[("alpha11", "lambda1"), ("alpha21", "lambda2"), ("Y", "lambda12"), ("X", "lambda22")])
}

/// D_n chart 2: `X` via `μ₃₂`, then `β₁₁, β₂₁` via `μ₁, μ₂`.
pub fn dn_chart2_plan() -> Vec<(String, String)> {
    plan(&[("X", "mu32"), ("beta11", "mu1"), ("beta21", "mu2")])
}

fn plan(steps: &[(&str, &str)]) -> Vec<(String, String)> {
    steps.iter().map(|(v, g)| (v.to_string(), g.to_string())).collect()
}
