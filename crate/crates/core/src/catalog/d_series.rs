use std::collections::BTreeMap;

use crate::mcm::MatFac;
use crate::poly::{GaussRat, Poly};
use crate::polymat::PolyMatrix;

use super::flop::universal_flop2;
use super::{check_d_bounds, names, CatalogError};

pub(crate) fn family_id(n: u32, k: u32) -> String {
    format!("D(n={n},k={k})")
}

/// `(−Z)^e` as a signed monomial.
fn neg_z_pow(e: u32) -> Poly {
    let z = Poly::var("Z").pow(e);
    if e % 2 == 0 {
        z
    } else {
        -z
    }
}

/// Invariant-theory data for the D_n partial resolution at vertex `k`.
///
/// `f(U)` is monic of degree `k`, `h(Z)` monic of degree `n−k−1` (zero when
/// `k = n`), and the rest is derived:
/// `f(U) = Q(−U²) + U·P(−U²)`, `Q = Z·S + Q(0)`,
/// `U·P + Q = (U² + Z)·G + f`, `γ = η·Q(0)`,
/// `F = h·(Q² + Z·P²) + η²·(2·Q(0)·S + Z·S² + P²)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnInvariantData {
    pub n: u32,
    pub k: u32,
    pub f: Poly,
    pub h: Poly,
    pub eta: Poly,
    pub p: Poly,
    pub q: Poly,
    pub q0: Poly,
    pub s: Poly,
    /// `G(Z, U)`.
    pub g: Poly,
    /// `F(Z)`, monic of degree `n−1`.
    pub big_f: Poly,
    pub gamma: Poly,
    pub params: Vec<String>,
}

impl DnInvariantData {
    fn derive(n: u32, k: u32, f: Poly, h: Poly, eta: Poly, params: Vec<String>) -> DnInvariantData {
        let z = Poly::var("Z");
        let mut p = Poly::zero();
        let mut q = Poly::zero();
        for i in 0..=k {
            let c = f.coeff_of("U", i);
            if i % 2 == 0 {
                q = q + &c * &neg_z_pow(i / 2);
            } else {
                p = p + &c * &neg_z_pow((i - 1) / 2);
            }
        }
        let q0 = q.subst("Z", &Poly::zero());
        let s = (&q - &q0).exact_divide(&z).expect("Q - Q(0) is divisible by Z");
        let (quot, _) = f.reduce_mod_usq("U", "Z");
        let g = -quot;
        let norm = &q.pow(2) + &(&z * &p.pow(2));
        let tail = &(&(&q0 * &s).scale(&GaussRat::from_int(2)) + &(&z * &s.pow(2))) + &p.pow(2);
        let big_f = &(&h * &norm) + &(&eta.pow(2) * &tail);
        let gamma = &eta * &q0;
        DnInvariantData { n, k, f, h, eta, p, q, q0, s, g, big_f, gamma, params }
    }

    /// Re-derive after substituting values for the parameters.
    pub fn specialize(&self, bindings: &BTreeMap<String, Poly>) -> DnInvariantData {
        let params = self.params.iter().filter(|p| !bindings.contains_key(*p)).cloned().collect();
        DnInvariantData::derive(
            self.n,
            self.k,
            self.f.substitute(bindings),
            self.h.substitute(bindings),
            self.eta.substitute(bindings),
            params,
        )
    }

    /// `X² + Y²·Z + 2γ·Y − F(Z)`.
    pub fn surface(&self) -> Poly {
        let (x, y, z) = (Poly::var("X"), Poly::var("Y"), Poly::var("Z"));
        let two_gamma_y = (&self.gamma * &y).scale(&GaussRat::from_int(2));
        &(&(&x.pow(2) + &(&y.pow(2) * &z)) + &two_gamma_y) - &self.big_f
    }

    /// `Q(Z)² + Z·P(Z)²`, equal to `f(U)·f(−U)` at `Z = −U²`.
    pub fn norm(&self) -> Poly {
        &self.q.pow(2) + &(&Poly::var("Z") * &self.p.pow(2))
    }

    /// `G(Z, var)`.
    pub fn g_at(&self, var: &str) -> Poly {
        self.g.subst("U", &Poly::var(var))
    }

    /// `f(var)`.
    pub fn f_at(&self, var: &str) -> Poly {
        self.f.subst("U", &Poly::var(var))
    }

    /// Bindings carrying the universal flop's coordinates to the D_n family:
    /// `x = X, y = Y − η·S, z = Q, t = P, u = Z, v = η, w = −h`.
    pub fn mainsub(&self) -> BTreeMap<String, Poly> {
        [
            ("x", Poly::var("X")),
            ("y", &Poly::var("Y") - &(&self.eta * &self.s)),
            ("z", self.q.clone()),
            ("t", self.p.clone()),
            ("u", Poly::var("Z")),
            ("v", self.eta.clone()),
            ("w", -&self.h),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

fn monic(var: &str, degree: u32, coeffs: &[String]) -> Poly {
    let x = Poly::var(var);
    coeffs.iter().enumerate().fold(x.pow(degree), |acc, (i, c)| acc + &Poly::var(c) * &x.pow(i as u32))
}

/// Generic data: `f` has coefficients `fc0..`, `h` has `hc0..`, and `η` is `eta`.
pub fn dn_invariants(n: u32, k: u32) -> Result<DnInvariantData, CatalogError> {
    check_d_bounds(n, k)?;
    let fc = names("fc", k);
    let f = monic("U", k, &fc);
    let mut params = fc;
    let (h, eta) = if k == n {
        (Poly::zero(), Poly::one())
    } else {
        let hc = names("hc", n - k - 1);
        let h = monic("Z", n - k - 1, &hc);
        params.extend(hc);
        params.push("eta".into());
        (h, Poly::var("eta"))
    };
    Ok(DnInvariantData::derive(n, k, f, h, eta, params))
}

/// All parameters at zero (with `η = 1` forced when `k = n`).
pub fn dn_invariants_at_origin(n: u32, k: u32) -> Result<DnInvariantData, CatalogError> {
    let generic = dn_invariants(n, k)?;
    let zero: BTreeMap<String, Poly> = generic.params.iter().map(|p| (p.clone(), Poly::zero())).collect();
    Ok(generic.specialize(&zero))
}

/// Data over the resolution space at integer roots `t_1..t_n`:
/// `f = ∏_{j≤k} (U − t_j)`, `Z·h + η² = ∏_{j>k} (Z + t_j²)`,
/// `η = (−1)^{n−k}·t_{k+1}⋯t_n`.
pub fn dn_invariants_from_roots(n: u32, k: u32, roots: &[i64]) -> Result<DnInvariantData, CatalogError> {
    check_d_bounds(n, k)?;
    if roots.len() != n as usize {
        return Err(CatalogError::BadIndex(format!("expected {n} roots, got {}", roots.len())));
    }
    let (u, z) = (Poly::var("U"), Poly::var("Z"));
    let (first, rest) = roots.split_at(k as usize);
    let f = first.iter().fold(Poly::one(), |acc, &t| acc * (&u - &Poly::int(t)));
    let prod = rest.iter().fold(Poly::one(), |acc, &t| acc * (&z + &Poly::int(t * t)));
    let sign = if (n - k) % 2 == 0 { 1 } else { -1 };
    let eta = rest.iter().fold(Poly::int(sign), |acc, &t| acc * Poly::int(t));
    let h = (&prod - &eta.pow(2)).exact_divide(&z).expect("constant term of the product is eta^2");
    Ok(DnInvariantData::derive(n, k, f, h, eta, Vec::new()))
}

fn family_from(id: String, inv: &DnInvariantData) -> MatFac {
    let xi = universal_flop2().xi.substitute(&inv.mainsub());
    MatFac::from_split(id, "X", xi, inv.surface()).with_params(inv.params.clone())
}

/// The universal length-2 factorization pulled back along the invariant map.
pub fn dn_family(n: u32, k: u32) -> Result<MatFac, CatalogError> {
    Ok(family_from(family_id(n, k), &dn_invariants(n, k)?))
}

/// [`dn_family`] at the origin of the parameter space.
pub fn dn_family_at_origin(n: u32, k: u32) -> Result<MatFac, CatalogError> {
    Ok(family_from(format!("D(n={n},k={k},origin)"), &dn_invariants_at_origin(n, k)?))
}

/// The closed-form `Ξ` for D_n at vertex `k` over the origin.
pub fn dn_gsv(n: u32, k: u32) -> Result<PolyMatrix, CatalogError> {
    check_d_bounds(n, k)?;
    let (y, z) = (Poly::var("Y"), Poly::var("Z"));
    let yz = &y * &z;
    let zero = Poly::zero;
    let signed = |e: u32| if (n - 1) % 2 == 0 { neg_z_pow(e) } else { -neg_z_pow(e) };
    let rows = if k % 2 == 0 {
        let a = neg_z_pow(k / 2);
        let b = signed(n - (k + 2) / 2);
        vec![
            vec![zero(), y.clone(), a.clone(), zero()],
            vec![-&yz, zero(), zero(), a],
            vec![b.clone(), zero(), zero(), -&y],
            vec![zero(), b, yz, zero()],
        ]
    } else {
        if n < (k + 3) / 2 {
            return Err(CatalogError::BadIndex(format!("no closed form for n = {n}, k = {k}")));
        }
        let a = neg_z_pow((k - 1) / 2);
        let c = neg_z_pow((k + 1) / 2);
        let b = signed(n - (k + 3) / 2);
        let d = signed(n - (k + 1) / 2);
        vec![
            vec![zero(), y.clone(), zero(), a],
            vec![-&yz, zero(), c, zero()],
            vec![zero(), b, zero(), -&y],
            vec![d, zero(), yz, zero()],
        ]
    };
    Ok(PolyMatrix::from_rows(rows))
}

fn int(n: i64) -> Poly {
    Poly::int(n)
}

/// Base change used with `B_1` for `k = 1`.
pub fn b0(inv: &DnInvariantData) -> PolyMatrix {
    let (x, y) = (Poly::var("X"), Poly::var("Y"));
    PolyMatrix::from_rows(vec![
        vec![&x - &inv.eta, y.clone(), inv.q0.clone(), int(1)],
        vec![int(-1), int(0), int(0), int(0)],
        vec![-&inv.q0, int(1), int(0), int(0)],
        vec![y, int(0), int(1), int(0)],
    ])
}

/// Base change used with `B_0` for `k = 1`.
pub fn b1(inv: &DnInvariantData) -> PolyMatrix {
    let (x, y) = (Poly::var("X"), Poly::var("Y"));
    PolyMatrix::from_rows(vec![
        vec![int(1), int(0), int(0), int(0)],
        vec![&(-x) - &inv.eta, y.clone(), inv.q0.clone(), int(1)],
        vec![-&inv.q0, int(1), int(0), int(0)],
        vec![y, int(0), int(1), int(0)],
    ])
}

/// Base change for `k = n`.
pub fn b2() -> PolyMatrix {
    let half = GaussRat::from_frac(1, 2);
    PolyMatrix::from_rows(vec![
        vec![int(1), int(0), int(0), Poly::constant(-&half)],
        vec![int(0), int(1), Poly::var("Z").scale(&-&half), int(0)],
        vec![int(0), int(0), int(1), int(0)],
        vec![int(0), int(0), int(0), int(-1)],
    ])
}

/// Base change for `k = n − 1`.
pub fn b3() -> PolyMatrix {
    PolyMatrix::from_rows(vec![
        vec![int(1), int(0), int(1), int(0)],
        vec![int(0), int(-1), int(0), int(1)],
        vec![int(1), int(0), int(-1), int(0)],
        vec![int(0), int(-1), int(0), int(-1)],
    ])
}

/// Blocks of `B_3·Ξ·B_3⁻¹`: it is block diagonal in the given basis order.
pub fn b3_partition() -> Vec<Vec<usize>> {
    vec![vec![0, 1], vec![2, 3]]
}

/// Rank-1 summand for `k = 1`.
pub fn xi1(inv: &DnInvariantData) -> PolyMatrix {
    let (y, z) = (Poly::var("Y"), Poly::var("Z"));
    let d = &inv.eta - &(&inv.q0 * &y);
    PolyMatrix::from_rows(vec![
        vec![d.clone(), &(-z) - &inv.q0.pow(2)],
        vec![&y.pow(2) - &inv.h, -d],
    ])
}

/// Rank-1 summand (appearing twice) for `k = n`.
pub fn xi2(inv: &DnInvariantData) -> PolyMatrix {
    let (y, z) = (Poly::var("Y"), Poly::var("Z"));
    let lower = &(&(&z * &inv.s) - &(&y * &z)) - &inv.q.scale(&GaussRat::from_int(2));
    PolyMatrix::from_rows(vec![vec![-&inv.p, &y - &inv.s], vec![lower, inv.p.clone()]])
}

fn eta_p(inv: &DnInvariantData) -> Poly {
    &inv.eta * &inv.p
}

fn y_shift(inv: &DnInvariantData) -> Poly {
    &Poly::var("Y") - &(&inv.eta * &inv.s)
}

/// First summand for `k = n − 1`, with the trace-free upper-left entry `Q − ηP`.
pub fn xi3(inv: &DnInvariantData) -> PolyMatrix {
    let mut m = xi3_as_printed(inv);
    m.set(0, 0, &inv.q - &eta_p(inv));
    m
}

/// [`xi3`] with upper-left entry `ηP + Q`; not trace-free, kept for comparison.
pub fn xi3_as_printed(inv: &DnInvariantData) -> PolyMatrix {
    let z = Poly::var("Z");
    let two_eta_q = (&inv.eta * &inv.q).scale(&GaussRat::from_int(2));
    PolyMatrix::from_rows(vec![
        vec![&eta_p(inv) + &inv.q, &(-y_shift(inv)) + &inv.p],
        vec![&(&z * &(&y_shift(inv) + &inv.p)) + &two_eta_q, &eta_p(inv) - &inv.q],
    ])
}

/// Second summand for `k = n − 1`.
pub fn xi4(inv: &DnInvariantData) -> PolyMatrix {
    let z = Poly::var("Z");
    let two_eta_q = (&inv.eta * &inv.q).scale(&GaussRat::from_int(2));
    PolyMatrix::from_rows(vec![
        vec![&(-eta_p(inv)) - &inv.q, &(-y_shift(inv)) - &inv.p],
        vec![&(&z * &(&y_shift(inv) - &inv.p)) + &two_eta_q, &eta_p(inv) + &inv.q],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcm::{decompose, reassembles, verify_factorization, xi_square_check};
    use crate::poly::p;

    #[test]
    fn worked_instance() {
        let inv = dn_invariants_from_roots(4, 2, &[1, 2, 3, 4]).unwrap();
        assert_eq!(inv.f, p("U^2 - 3*U + 2"));
        assert_eq!(inv.p, p("-3"));
        assert_eq!(inv.q, p("-Z + 2"));
        assert_eq!(inv.s, p("-1"));
        assert_eq!(inv.eta, p("12"));
        assert_eq!(inv.h, p("Z + 25"));
        assert_eq!(inv.gamma, p("24"));
        assert_eq!(inv.norm(), p("(Z + 1)*(Z + 4)"));
        let prod = p("(Z + 1)*(Z + 4)*(Z + 9)*(Z + 16)");
        assert_eq!(&(&p("Z") * &inv.big_f) + &inv.gamma.pow(2), prod);
        assert_eq!(inv.g, p("-1"));
    }

    #[test]
    fn generic_invariants() {
        for n in 2..=7 {
            for k in 1..=n {
                let inv = dn_invariants(n, k).unwrap();
                let z = Poly::var("Z");
                // f(U) = Q(−U²) + U·P(−U²)
                let musq = p("-U^2");
                let back = &inv.q.subst("Z", &musq) + &(&p("U") * &inv.p.subst("Z", &musq));
                assert_eq!(back, inv.f);
                assert_eq!(&(&z * &inv.s) + &inv.q0, inv.q);
                // U·P + Q = (U² + Z)·G + f
                let lhs = &(&p("U") * &inv.p) + &inv.q;
                assert_eq!(lhs, &(&p("U^2 + Z") * &inv.g) + &inv.f);
                assert_eq!(inv.big_f.degree_in("Z"), n - 1);
                assert!(inv.big_f.coeff_of("Z", n - 1) == Poly::one());
                // Z·F + γ² = (Z·h + η²)(Q² + Z·P²)
                let lhs = &(&z * &inv.big_f) + &inv.gamma.pow(2);
                assert_eq!(lhs, &(&(&z * &inv.h) + &inv.eta.pow(2)) * &inv.norm());
            }
        }
        assert_eq!(dn_invariants(4, 2).unwrap().g, p("-1"));
        assert_eq!(dn_invariants(5, 3).unwrap().g, p("-U - fc2"));
    }

    #[test]
    fn family_factorizes_and_matches_the_quadric() {
        let uf = universal_flop2();
        for n in 2..=6 {
            for k in 1..=n {
                let inv = dn_invariants(n, k).unwrap();
                assert_eq!(uf.w.substitute(&inv.mainsub()), inv.surface());
                let m = dn_family(n, k).unwrap();
                assert!(verify_factorization(&m).pass(), "{}", m.id);
                assert!(xi_square_check(&m).unwrap().pass);
            }
        }
    }

    #[test]
    fn gsv_literal_and_specialization() {
        let want = PolyMatrix::from_rows(vec![
            vec![p("0"), p("Y"), p("-Z"), p("0")],
            vec![p("-Y*Z"), p("0"), p("0"), p("-Z")],
            vec![p("-Z^2"), p("0"), p("0"), p("-Y")],
            vec![p("0"), p("-Z^2"), p("Y*Z"), p("0")],
        ]);
        assert_eq!(dn_gsv(4, 2).unwrap(), want);
        for n in 4..=7 {
            for k in 1..n {
                let origin = dn_family_at_origin(n, k).unwrap();
                assert_eq!(origin.xi().unwrap(), &dn_gsv(n, k).unwrap(), "n={n} k={k}");
                assert_eq!(origin.f, &p("X^2 + Y^2*Z") - &Poly::var("Z").pow(n - 1));
            }
            // η is pinned to 1 when k = n, so the origin is not the closed form
            assert_ne!(dn_family_at_origin(n, n).unwrap().xi().unwrap(), &dn_gsv(n, n).unwrap());
        }
    }

    #[test]
    fn decompositions() {
        for n in 4..=5 {
            let inv = dn_invariants(n, 1).unwrap();
            let m = dn_family(n, 1).unwrap();
            assert!(b0(&inv).determinant().unwrap().is_constant());
            let part = vec![vec![0], vec![1], vec![2, 3]];
            let blocks = decompose(&m, &b0(&inv), &b1(&inv), &part).unwrap();
            assert_eq!(blocks[0].phi.get(0, 0), &inv.surface());
            assert_eq!(blocks[0].psi.get(0, 0), &Poly::one());
            assert_eq!(blocks[1].phi.get(0, 0), &Poly::one());
            assert_eq!(blocks[2].xi().unwrap(), &xi1(&inv));
            assert!(blocks.iter().all(|b| verify_factorization(b).pass()));
            assert!(reassembles(&m, &b0(&inv), &b1(&inv), &part, &blocks).unwrap());

            let inv = dn_invariants(n, n).unwrap();
            let m = dn_family(n, n).unwrap();
            let blocks = decompose(&m, &b2(), &b2(), &b3_partition()).unwrap();
            assert_eq!(blocks[0].xi().unwrap(), &xi2(&inv));
            assert_eq!(blocks[1].xi().unwrap(), &xi2(&inv));

            let inv = dn_invariants(n, n - 1).unwrap();
            let m = dn_family(n, n - 1).unwrap();
            let blocks = decompose(&m, &b3(), &b3(), &b3_partition()).unwrap();
            assert_eq!(blocks[0].xi().unwrap(), &xi3(&inv));
            assert_eq!(blocks[1].xi().unwrap(), &xi4(&inv));
            let printed = xi3_as_printed(&inv);
            assert!(!printed.trace().is_zero());
            assert_ne!(blocks[0].xi().unwrap(), &printed);
        }
    }
}
