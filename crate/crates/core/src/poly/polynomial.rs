use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_poly, GaussRat, PolyError};

type Exps = Vec<u32>;

/// Graded-lexicographic comparison of two exponent vectors of equal length.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Sparse polynomial over ℚ(i).
///
/// Terms are kept sorted by graded-lex order, largest first, relative to the
/// declared variable list; zero coefficients are never stored. Variables that
/// are declared but unused are harmless. Binary operations on polynomials with
/// different variable lists work over the union of the two lists (left
/// operand's order first).
#[derive(Clone)]
pub struct Poly {
    vars: Arc<[String]>,
    terms: Vec<(Exps, GaussRat)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { vars: Arc::from(Vec::new()), terms: Vec::new() }
    }

    pub fn zero_in(vars: &[String]) -> Self {
        Poly { vars: Arc::from(vars.to_vec()), terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(GaussRat::one())
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(GaussRat::from_int(n))
    }

    pub fn constant(c: GaussRat) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(Vec::new(), c)] };
        Poly { vars: Arc::from(Vec::new()), terms }
    }

    pub fn var(name: &str) -> Self {
        Poly { vars: Arc::from(vec![name.to_string()]), terms: vec![(vec![1], GaussRat::one())] }
    }

    /// Build from raw terms over `vars`; duplicates are combined and zeros dropped.
    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Vec<u32>, GaussRat)>) -> Self {
        let n = vars.len();
        let mut acc: HashMap<Exps, GaussRat> = HashMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), n, "exponent vector length must match variable count");
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&e) {
                Some(slot) => *slot += &c,
                None => {
                    acc.insert(e, c);
                }
            }
        }
        Poly::from_map(Arc::from(vars.to_vec()), acc)
    }

    fn from_map(vars: Arc<[String]>, acc: HashMap<Exps, GaussRat>) -> Self {
        let mut terms: Vec<(Exps, GaussRat)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| grlex_cmp(&b.0, &a.0));
        Poly { vars, terms }
    }

    /// Parse a polynomial and embed it into a declared variable list.
    pub fn parse_in(s: &str, vars: &[String]) -> Result<Self, PolyError> {
        parse_poly(s)?.with_vars(vars)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &GaussRat)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().all(|&x| x == 0))
    }

    /// The value of a constant polynomial (zero included); `None` otherwise.
    pub fn constant_value(&self) -> Option<GaussRat> {
        match self.terms.as_slice() {
            [] => Some(GaussRat::zero()),
            [(e, c)] if e.iter().all(|&x| x == 0) => Some(c.clone()),
            _ => None,
        }
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&[u32], &GaussRat)> {
        self.terms.first().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max()
    }

    fn index_of(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    /// Degree in `var` (0 when absent or when the polynomial is zero).
    pub fn degree_in(&self, var: &str) -> u32 {
        match self.index_of(var) {
            Some(i) => self.terms.iter().map(|(e, _)| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn occurs(&self, var: &str) -> bool {
        self.degree_in(var) > 0
    }

    /// Variables that actually appear, in declared order.
    pub fn support(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| self.terms.iter().any(|(e, _)| e[i] > 0))
            .map(|i| self.vars[i].clone())
            .collect()
    }

    /// Coefficient of `var^deg`, as a polynomial in the remaining variables.
    pub fn coeff_of(&self, var: &str, deg: u32) -> Poly {
        let Some(i) = self.index_of(var) else {
            return if deg == 0 { self.clone() } else { Poly::zero_in(&self.vars) };
        };
        let terms = self.terms.iter().filter(|(e, _)| e[i] == deg).map(|(e, c)| {
            let mut e = e.clone();
            e[i] = 0;
            (e, c.clone())
        });
        Poly::from_terms(&self.vars, terms)
    }

    /// Re-embed into `vars`. Fails if a used variable is missing from the list.
    pub fn with_vars(&self, vars: &[String]) -> Result<Poly, PolyError> {
        if *self.vars == *vars {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match vars.iter().position(|w| w == v) {
                Some(j) => map.push(Some(j)),
                None if self.terms.iter().all(|(e, _)| e[i] == 0) => map.push(None),
                None => return Err(PolyError::UnknownVariable(v.clone())),
            }
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out = vec![0; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    out[j] = x;
                }
            }
            (out, c.clone())
        });
        Ok(Poly::from_terms(vars, terms))
    }

    /// Rename variables; names not in `map` are kept.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> Poly {
        let vars: Vec<String> = self.vars.iter().map(|v| map.get(v).unwrap_or(v).clone()).collect();
        let mut dedup: Vec<String> = Vec::new();
        for v in &vars {
            if !dedup.contains(v) {
                dedup.push(v.clone());
            }
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out = vec![0; dedup.len()];
            for (i, &x) in e.iter().enumerate() {
                let j = dedup.iter().position(|w| *w == vars[i]).expect("present");
                out[j] += x;
            }
            (out, c.clone())
        });
        Poly::from_terms(&dedup, terms)
    }

    /// Bring two polynomials onto a common variable list.
    fn unify<'a>(a: &'a Poly, b: &'a Poly) -> (Arc<[String]>, Cow<'a, [(Exps, GaussRat)]>, Cow<'a, [(Exps, GaussRat)]>) {
        if Arc::ptr_eq(&a.vars, &b.vars) || a.vars == b.vars {
            return (a.vars.clone(), Cow::Borrowed(&a.terms), Cow::Borrowed(&b.terms));
        }
        if b.terms.iter().all(|(e, _)| e.iter().all(|&x| x == 0)) && b.vars.iter().all(|v| a.vars.contains(v)) {
            let n = a.vars.len();
            let bt = b.terms.iter().map(|(_, c)| (vec![0; n], c.clone())).collect::<Vec<_>>();
            return (a.vars.clone(), Cow::Borrowed(&a.terms), Cow::Owned(bt));
        }
        let mut vars: Vec<String> = a.vars.to_vec();
        for v in b.vars.iter() {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        let n = vars.len();
        let at: Cow<'a, [(Exps, GaussRat)]> = if n == a.vars.len() {
            Cow::Borrowed(&a.terms)
        } else {
            // padding with trailing zeros preserves graded-lex order
            Cow::Owned(
                a.terms
                    .iter()
                    .map(|(e, c)| {
                        let mut e = e.clone();
                        e.resize(n, 0);
                        (e, c.clone())
                    })
                    .collect(),
            )
        };
        let pos: Vec<usize> = b.vars.iter().map(|v| vars.iter().position(|w| w == v).unwrap()).collect();
        let mut bt: Vec<(Exps, GaussRat)> = b
            .terms
            .iter()
            .map(|(e, c)| {
                let mut out = vec![0; n];
                for (i, &x) in e.iter().enumerate() {
                    out[pos[i]] = x;
                }
                (out, c.clone())
            })
            .collect();
        bt.sort_by(|x, y| grlex_cmp(&y.0, &x.0));
        (Arc::from(vars), at, Cow::Owned(bt))
    }

    fn merge(a: &Poly, b: &Poly, negate_b: bool) -> Poly {
        let (vars, at, bt) = Poly::unify(a, b);
        let mut out = Vec::with_capacity(at.len() + bt.len());
        let (mut i, mut j) = (0, 0);
        while i < at.len() && j < bt.len() {
            match grlex_cmp(&at[i].0, &bt[j].0) {
                Ordering::Greater => {
                    out.push(at[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_b { -&bt[j].1 } else { bt[j].1.clone() };
                    out.push((bt[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_b { &at[i].1 - &bt[j].1 } else { &at[i].1 + &bt[j].1 };
                    if !c.is_zero() {
                        out.push((at[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(at[i..].iter().cloned());
        out.extend(bt[j..].iter().map(|(e, c)| (e.clone(), if negate_b { -c } else { c.clone() })));
        Poly { vars, terms: out }
    }

    fn product(a: &Poly, b: &Poly) -> Poly {
        let (vars, at, bt) = Poly::unify(a, b);
        if at.is_empty() || bt.is_empty() {
            return Poly { vars, terms: Vec::new() };
        }
        let mut acc: HashMap<Exps, GaussRat> = HashMap::with_capacity(at.len() * bt.len());
        for (ea, ca) in at.iter() {
            for (eb, cb) in bt.iter() {
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                match acc.get_mut(&e) {
                    Some(slot) => *slot += &c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        Poly::from_map(vars, acc)
    }

    pub fn arith(&self, other: &Poly, kind: ArithKind) -> Poly {
        match kind {
            ArithKind::Add => self + other,
            ArithKind::Sub => self - other,
            ArithKind::Mul => self * other,
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero_in(&self.vars);
        }
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Simultaneous substitution of polynomials for variables. Bindings for
    /// names that do not occur are ignored.
    pub fn substitute(&self, bindings: &BTreeMap<String, Poly>) -> Poly {
        let bound: Vec<Option<&Poly>> = self.vars.iter().map(|v| bindings.get(v)).collect();
        if bound.iter().all(Option::is_none) {
            return self.clone();
        }
        let free: Vec<String> =
            self.vars.iter().zip(&bound).filter(|(_, b)| b.is_none()).map(|(v, _)| v.clone()).collect();
        let mut powers: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut acc = Poly::zero_in(&free);
        for (e, c) in &self.terms {
            let mono = free
                .iter()
                .map(|v| e[self.index_of(v).unwrap()])
                .collect::<Vec<u32>>();
            let mut term = Poly::from_terms(&free, [(mono, c.clone())]);
            for (i, b) in bound.iter().enumerate() {
                if let (Some(b), true) = (b, e[i] > 0) {
                    let pw = powers.entry((i, e[i])).or_insert_with(|| b.pow(e[i]));
                    term = &term * &*pw;
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Substitute a single variable.
    pub fn subst(&self, var: &str, value: &Poly) -> Poly {
        let mut m = BTreeMap::new();
        m.insert(var.to_string(), value.clone());
        self.substitute(&m)
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: &str) -> Poly {
        let Some(i) = self.index_of(var) else {
            return Poly::zero_in(&self.vars);
        };
        let terms = self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
            let mut e = e.clone();
            let k = e[i];
            e[i] -= 1;
            (e, c * &GaussRat::from_int(k as i64))
        });
        Poly::from_terms(&self.vars, terms)
    }

    /// Exact quotient `self / den`, or `NotDivisible` when the division leaves a remainder.
    pub fn exact_divide(&self, den: &Poly) -> Result<Poly, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (vars, nt, dt) = Poly::unify(self, den);
        let den = Poly { vars: vars.clone(), terms: dt.into_owned() };
        let mut rem = Poly { vars: vars.clone(), terms: nt.into_owned() };
        let (dl, dc) = (den.terms[0].0.clone(), den.terms[0].1.clone());
        let dinv = dc.inv().expect("nonzero leading coefficient");
        let mut quot: Vec<(Exps, GaussRat)> = Vec::new();
        while let Some((re, rc)) = rem.terms.first() {
            if !re.iter().zip(&dl).all(|(a, b)| a >= b) {
                return Err(PolyError::NotDivisible {
                    num: self.to_string(),
                    den: den.to_string(),
                    remainder: Poly { vars: vars.clone(), terms: vec![(re.clone(), rc.clone())] }.to_string(),
                });
            }
            let qe: Exps = re.iter().zip(&dl).map(|(a, b)| a - b).collect();
            let qc = rc * &dinv;
            let t = Poly { vars: vars.clone(), terms: vec![(qe.clone(), qc.clone())] };
            rem = &rem - &(&t * &den);
            quot.push((qe, qc));
        }
        Ok(Poly::from_terms(&vars, quot))
    }

    /// Divide by `u² + z`, treating `u` as the main variable: returns
    /// `(quotient, remainder)` with `self = (u²+z)·quotient + remainder` and the
    /// remainder of degree at most 1 in `u`.
    pub fn reduce_mod_usq(&self, u: &str, z: &str) -> (Poly, Poly) {
        let modulus = &Poly::var(u).pow(2) + &Poly::var(z);
        let mut rem = self.clone();
        let mut quot = Poly::zero_in(&self.vars);
        loop {
            let d = rem.degree_in(u);
            if d < 2 {
                break;
            }
            // peel off the top u-degree slice: c(z,…)·u^d = (u²+z)·c·u^(d-2) − z·c·u^(d-2)
            let top = rem.coeff_of(u, d);
            let t = &top * &Poly::var(u).pow(d - 2);
            quot = &quot + &t;
            rem = &rem - &(&modulus * &t);
        }
        (quot, rem)
    }

    /// Evaluate with every variable bound to a constant.
    pub fn eval(&self, point: &BTreeMap<String, GaussRat>) -> Option<GaussRat> {
        let b = point.iter().map(|(k, v)| (k.clone(), Poly::constant(v.clone()))).collect();
        self.substitute(&b).constant_value()
    }

    /// JSON mirror (`{"vars":[...],"terms":[{"c":..,"e":[..]}]}`).
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: self.vars.to_vec(),
            terms: self.terms.iter().map(|(e, c)| TermJson { c: c.to_string(), e: e.clone() }).collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Poly, PolyError> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.e.len() != j.vars.len() {
                return Err(PolyError::Parse { pos: 0, msg: "exponent vector length mismatch".into() });
            }
            terms.push((t.e.clone(), t.c.parse::<GaussRat>()?));
        }
        Ok(Poly::from_terms(&j.vars, terms))
    }

    fn fmt_monomial(&self, e: &[u32]) -> String {
        let mut parts = Vec::new();
        for (v, &x) in self.vars.iter().zip(e) {
            match x {
                0 => {}
                1 => parts.push(v.clone()),
                _ => parts.push(format!("{v}^{x}")),
            }
        }
        parts.join("*")
    }

    fn fmt_term(&self, e: &[u32], c: &GaussRat) -> String {
        let mono = self.fmt_monomial(e);
        if mono.is_empty() {
            c.to_string()
        } else if c.is_one() {
            mono
        } else if (-c).is_one() {
            format!("-{mono}")
        } else {
            format!("{c}*{mono}")
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let s = self.fmt_term(e, c);
            if k == 0 {
                f.write_str(&s)?;
            } else if let Some(rest) = s.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {s}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl FromStr for Poly {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        parse_poly(s)
    }
}

/// Equality is ring equality: the variable lists may differ.
impl PartialEq for Poly {
    fn eq(&self, other: &Poly) -> bool {
        let (_, a, b) = Poly::unify(self, other);
        a == b
    }
}

impl Eq for Poly {}

impl Default for Poly {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::merge(self, rhs, false)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::merge(self, rhs, true)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::product(self, rhs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly { (&self).$m(rhs) }
        }
        impl<'a> $tr<Poly> for &'a Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub e: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        Poly::from_json(&j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::p;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn cancellation() {
        assert_eq!(p("x+y") + p("x-y"), p("2*x"));
    }

    #[test]
    fn difference_of_squares() {
        // (z + t^n)(z - t^n) for n = 2
        assert_eq!(p("z + t^2") * p("z - t^2"), p("z^2 - t^4"));
    }

    #[test]
    fn canonical_text_is_graded_lex() {
        let f = Poly::parse_in("2 + x - 3*y^2 + x*y + 1/2*x^2", &names(&["x", "y"])).unwrap();
        assert_eq!(f.to_string(), "1/2*x^2 + x*y - 3*y^2 + x + 2");
        let g = Poly::parse_in("i*Z^2 - Y^2", &names(&["Y", "Z"])).unwrap();
        assert_eq!(g.to_string(), "-Y^2 + (i)*Z^2");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn substitute_identity_and_evaluation() {
        let w = p("x^2 + u*y^2 + 2*v*y*z + w*z^2 + (u*w - v^2)*t^2");
        assert_eq!(w.subst("x", &p("x")), w);
        let ones = ["x", "y", "z", "t", "u", "v", "w"]
            .iter()
            .map(|v| (v.to_string(), GaussRat::from_int(1)))
            .collect();
        assert_eq!(w.eval(&ones), Some(GaussRat::from_int(5)));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let f = p("x - y");
        let mut b = BTreeMap::new();
        b.insert("x".to_string(), p("y"));
        b.insert("y".to_string(), p("x"));
        assert_eq!(f.substitute(&b), p("y - x"));
    }

    #[test]
    fn exact_division() {
        let q = p("-Z + 2");
        assert_eq!((&q - &Poly::int(2)).exact_divide(&p("Z")).unwrap(), Poly::int(-1));
        let f = p("x^3 - y");
        assert_eq!(f.exact_divide(&Poly::one()).unwrap(), f);
        let num = p("(z^2 + u*t^2)*(a11 - a22)");
        assert_eq!(num.exact_divide(&p("z^2 + u*t^2")).unwrap(), p("a11 - a22"));
        assert!(matches!(p("x + 1").exact_divide(&p("x")), Err(PolyError::NotDivisible { .. })));
        assert!(matches!(p("x").exact_divide(&Poly::zero()), Err(PolyError::DivisionByZero)));
    }

    #[test]
    fn reduce_mod_u_squared_plus_z() {
        let f = p("U^2 - 3*U + 2");
        let (q, r) = f.reduce_mod_usq("U", "Z");
        assert_eq!(r, p("-3*U - Z + 2"));
        assert_eq!(q, Poly::one());
        let (q, r) = p("U").reduce_mod_usq("U", "Z");
        assert!(q.is_zero());
        assert_eq!(r, p("U"));
        // U^5 ≡ U·Z^2, U^4 ≡ Z^2 modulo U^2 + Z
        assert_eq!(p("U^5").reduce_mod_usq("U", "Z").1, p("U*Z^2"));
        assert_eq!(p("U^4").reduce_mod_usq("U", "Z").1, p("Z^2"));
        assert_eq!(p("U^3").reduce_mod_usq("U", "Z").1, p("-U*Z"));
    }

    #[test]
    fn derivatives_of_the_quadric() {
        let w = p("x^2 + u*y^2 + 2*v*y*z + w*z^2 + (u*w - v^2)*t^2");
        assert_eq!(w.derivative("w"), p("z^2 + u*t^2"));
        assert_eq!(w.derivative("u"), p("y^2 + w*t^2"));
        assert!(Poly::int(7).derivative("x").is_zero());
    }

    #[test]
    fn equality_across_variable_lists() {
        let a = Poly::parse_in("x + 1", &names(&["x", "y"])).unwrap();
        let b = Poly::parse_in("1 + x", &names(&["z", "x"])).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, p("x"));
        assert!(matches!(p("q").with_vars(&names(&["x"])), Err(PolyError::UnknownVariable(_))));
    }

    #[test]
    fn coefficient_extraction() {
        let f = p("3*U^2*Z + U^2 - U + 7");
        assert_eq!(f.coeff_of("U", 2), p("3*Z + 1"));
        assert_eq!(f.coeff_of("U", 0), p("7"));
        assert_eq!(f.degree_in("U"), 2);
        assert_eq!(f.support(), vec!["U".to_string(), "Z".to_string()]);
    }

    #[test]
    fn json_shape() {
        let f = Poly::parse_in("x^2 - 1/2*y", &names(&["x", "y"])).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"vars":["x","y"],"terms":[{"c":"1","e":[2,0]},{"c":"-1/2","e":[0,1]}]}"#);
        let back: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
