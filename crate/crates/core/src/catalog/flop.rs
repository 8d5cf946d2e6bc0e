use crate::mcm::MatFac;
use crate::poly::{p, Poly};
use crate::polymat::PolyMatrix;

/// The universal flop of length 2: the quadric `W` in `x, y, z, t` over
/// `u, v, w`, its symmetric coefficient matrix, and the split factorization.
#[derive(Debug, Clone)]
pub struct UniversalFlop {
    pub w: Poly,
    pub coefficients: PolyMatrix,
    pub xi: PolyMatrix,
    pub matfac: MatFac,
}

pub const FLOP_VARS: [&str; 7] = ["x", "y", "z", "t", "u", "v", "w"];

pub fn universal_flop2() -> UniversalFlop {
    let vars: Vec<String> = FLOP_VARS.iter().map(|s| s.to_string()).collect();
    let w = Poly::parse_in("x^2 + u*y^2 + 2*v*y*z + w*z^2 + (u*w - v^2)*t^2", &vars).expect("literal");
    let coefficients = PolyMatrix::parse_rows(
        &[&["1", "0", "0", "0"], &["0", "u", "v", "0"], &["0", "v", "w", "0"], &["0", "0", "0", "u*w - v^2"]],
        &vars,
    );
    let xi = PolyMatrix::parse_rows(
        &[
            &["-v*t", "y", "z", "t"],
            &["-u*y - 2*v*z", "v*t", "-u*t", "z"],
            &["-w*z", "w*t", "-v*t", "-y"],
            &["-u*w*t", "-w*z", "u*y + 2*v*z", "v*t"],
        ],
        &vars,
    );
    let matfac = MatFac::from_split("UF2", "x", xi.clone(), w.clone()).with_params(vec!["u".into(), "v".into(), "w".into()]);
    UniversalFlop { w, coefficients, xi, matfac }
}

/// `W` as the quadratic form `[x y z t]·C·[x y z t]ᵀ`.
pub fn quadratic_form(c: &PolyMatrix) -> Poly {
    let v = [p("x"), p("y"), p("z"), p("t")];
    let mut out = Poly::zero();
    for i in 0..4 {
        for j in 0..4 {
            out = out + &(&v[i] * &v[j]) * c.get(i, j);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcm::{involution_check, split_form, verify_factorization, Involution};

    #[test]
    fn identities() {
        let uf = universal_flop2();
        assert_eq!(quadratic_form(&uf.coefficients), uf.w);
        assert_eq!(uf.coefficients.determinant().unwrap(), p("(u*w - v^2)^2"));
        assert!(uf.xi.trace().is_zero());
        let g = &uf.w - &p("x^2");
        assert!(uf.xi.matmul(&uf.xi).unwrap().is_constant_diagonal_of(&-g));
        assert!(verify_factorization(&uf.matfac).pass());
        assert_eq!(involution_check(&uf.matfac), Involution::Holds);
        assert_eq!(uf.xi.get(1, 1), &p("v*t"));
        assert_eq!(uf.xi.get(0, 0), &p("-v*t"));
        let mut plain = uf.matfac.clone();
        plain.split = None;
        assert_eq!(split_form(&plain, "x").unwrap().xi().unwrap(), &uf.xi);
    }

    #[test]
    fn w_at_ones() {
        let uf = universal_flop2();
        let ones = FLOP_VARS.iter().map(|v| (v.to_string(), crate::poly::GaussRat::from_int(1))).collect();
        assert_eq!(uf.w.eval(&ones).unwrap(), crate::poly::GaussRat::from_int(5));
    }
}
