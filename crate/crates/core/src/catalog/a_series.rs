use crate::mcm::MatFac;
use crate::poly::Poly;
use crate::polymat::PolyMatrix;

use super::{check_a_bounds, names, CatalogError};

pub(crate) fn family_id(n: u32, k: u32) -> String {
    format!("A(n={n},k={k})")
}

fn monic(var: &str, degree: u32, coeffs: &[Poly]) -> Poly {
    let z = Poly::var(var);
    coeffs.iter().enumerate().fold(z.pow(degree), |acc, (i, c)| acc + c * &z.pow(i as u32))
}

/// The factors `g` (degree `k`) and `h` (degree `n−k`) of `f_n(z) = g·h`, with
/// the parameters they use. `g` has free coefficients `gc0..gc{k-1}`; `h` has
/// free coefficients `hc0..hc{n-k-2}` and its `z^{n-k-1}` coefficient is
/// `-gc{k-1}`, so `g·h` has no `z^{n-1}` term.
pub fn an_polys(n: u32, k: u32, deformed: bool) -> Result<(Poly, Poly, Vec<String>), CatalogError> {
    check_a_bounds(n, k)?;
    if !deformed {
        return Ok((Poly::var("z").pow(k), Poly::var("z").pow(n - k), Vec::new()));
    }
    let gc = names("gc", k);
    let hc = names("hc", n - k - 1);
    let g_coeffs: Vec<Poly> = gc.iter().map(|s| Poly::var(s)).collect();
    let mut h_coeffs: Vec<Poly> = hc.iter().map(|s| Poly::var(s)).collect();
    h_coeffs.push(-Poly::var(&gc[k as usize - 1]));
    let g = monic("z", k, &g_coeffs);
    let h = monic("z", n - k, &h_coeffs);
    let mut params = gc;
    params.extend(hc);
    Ok((g, h, params))
}

/// `Φ = [[x, g], [h, y]]`, `Ψ = [[y, −g], [−h, x]]` for `xy − g·h`.
pub fn an_family(n: u32, k: u32, deformed: bool) -> Result<MatFac, CatalogError> {
    let (g, h, params) = an_polys(n, k, deformed)?;
    let (x, y) = (Poly::var("x"), Poly::var("y"));
    let phi = PolyMatrix::from_rows(vec![vec![x.clone(), g.clone()], vec![h.clone(), y.clone()]]);
    let psi = PolyMatrix::from_rows(vec![vec![y.clone(), -&g], vec![-&h, x.clone()]]);
    let f = &(&x * &y) - &(&g * &h);
    let id = if deformed { family_id(n, k) } else { format!("A(n={n},k={k},origin)") };
    Ok(MatFac::new(id, phi, psi, f).with_params(params))
}

/// Split form in `u = (x+y)/2`, `v = (y−x)/2` with `Ξ = [[v, h], [g, −v]]`.
/// This is the coordinate change of [`an_family`] followed by exchanging the
/// two basis vectors, which also exchanges the roles of `Φ` and `Ψ`.
pub fn an_split_family(n: u32, k: u32, deformed: bool) -> Result<MatFac, CatalogError> {
    let (g, h, params) = an_polys(n, k, deformed)?;
    let v = Poly::var("v");
    let xi = PolyMatrix::from_rows(vec![vec![v.clone(), h.clone()], vec![g.clone(), -&v]]);
    let f = &(&Poly::var("u").pow(2) - &v.pow(2)) - &(&g * &h);
    let id = format!("{}~split", if deformed { family_id(n, k) } else { format!("A(n={n},k={k},origin)") });
    Ok(MatFac::from_split(id, "u", xi, f).with_params(params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcm::{involution_check, split_form, verify_factorization, Involution, McmError};
    use crate::poly::p;
    use std::collections::BTreeMap;

    #[test]
    fn undeformed_a1_is_the_quadric_cone() {
        let m = an_family(2, 1, false).unwrap();
        assert_eq!(m.phi, PolyMatrix::from_rows(vec![vec![p("x"), p("z")], vec![p("z"), p("y")]]));
        assert_eq!(m.f, p("x*y - z^2"));
        assert!(verify_factorization(&m).pass());
    }

    #[test]
    fn deformed_products_and_constraint() {
        for n in 2..=7 {
            for k in 1..n {
                let m = an_family(n, k, true).unwrap();
                assert!(verify_factorization(&m).pass(), "{}", m.id);
                let (g, h, _) = an_polys(n, k, true).unwrap();
                let prod = &g * &h;
                assert_eq!(prod.degree_in("z"), n);
                assert!(prod.coeff_of("z", n - 1).is_zero(), "{}", m.id);
            }
        }
    }

    #[test]
    fn split_forms() {
        let m = an_family(4, 2, true).unwrap();
        assert!(matches!(split_form(&m, "x"), Err(McmError::NotSplittable(_))));
        let uv: BTreeMap<String, Poly> = [("x".to_string(), p("u - v")), ("y".to_string(), p("u + v"))].into();
        let raw = split_form(&m.substitute("A uv", &uv), "u").unwrap();
        let (g, h, _) = an_polys(4, 2, true).unwrap();
        let v = Poly::var("v");
        let raw_xi = PolyMatrix::from_rows(vec![vec![v.clone(), -&g], vec![-&h, -&v]]);
        assert_eq!(raw.xi().unwrap(), &raw_xi);

        let s = an_split_family(4, 2, true).unwrap();
        assert!(verify_factorization(&s).pass());
        assert_eq!(involution_check(&s), Involution::Holds);
        // swapping basis vectors of the negated raw form gives the stated Ξ
        let swap = PolyMatrix::from_rows(vec![vec![p("0"), p("1")], vec![p("1"), p("0")]]);
        assert_eq!(swap.matmul(&-&raw_xi).unwrap().matmul(&swap).unwrap(), *s.xi().unwrap());
        assert_eq!(s.f, raw.f);
    }
}
