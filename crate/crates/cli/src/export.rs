//! Canonical renderings of catalog matrices. Output depends only on the
//! inputs, so it can be compared byte for byte against golden files.

use serde::Serialize;

use mfk_core::catalog::{e_labels, e_series, universal_flop2, Series};
use mfk_core::mcm::MatFac;
use mfk_core::poly::Poly;
use mfk_core::polymat::PolyMatrix;

use crate::suites::{gsv_matfac, D_MAX, D_MIN, E_SERIES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Tex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    /// Every E-series table.
    Appendix,
    /// The GSV D matrices for 4 ≤ n ≤ 8.
    Gsv,
    /// The universal flop.
    Flop,
    All,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Appendix => "appendix",
            Target::Gsv => "gsv",
            Target::Flop => "flop",
            Target::All => "all",
        }
    }
}

/// A titled group of named polynomials and matrices.
#[derive(Debug, Clone, Serialize)]
pub struct Item {
    pub id: String,
    pub polys: Vec<(String, String)>,
    pub matrices: Vec<(String, Vec<Vec<String>>)>,
    #[serde(skip)]
    raw_polys: Vec<(String, Poly)>,
    #[serde(skip)]
    raw_matrices: Vec<(String, PolyMatrix)>,
}

impl Item {
    pub fn new(id: impl Into<String>) -> Item {
        Item { id: id.into(), polys: Vec::new(), matrices: Vec::new(), raw_polys: Vec::new(), raw_matrices: Vec::new() }
    }

    pub fn poly(mut self, name: &str, p: &Poly) -> Item {
        self.polys.push((name.to_string(), p.to_string()));
        self.raw_polys.push((name.to_string(), p.clone()));
        self
    }

    pub fn matrix(mut self, name: &str, m: &PolyMatrix) -> Item {
        let rows = (0..m.rows()).map(|r| m.row(r).iter().map(ToString::to_string).collect()).collect();
        self.matrices.push((name.to_string(), rows));
        self.raw_matrices.push((name.to_string(), m.clone()));
        self
    }

    /// `f`, `φ`, `ψ` and `Ξ` when split.
    pub fn matfac(m: &MatFac) -> Item {
        let mut item = Item::new(&m.id).poly("f", &m.f).matrix("phi", &m.phi).matrix("psi", &m.psi);
        if let Some(xi) = m.xi() {
            item = item.matrix("Xi", xi);
        }
        item
    }
}

pub fn appendix_items() -> Result<Vec<Item>, String> {
    let mut out = Vec::new();
    for s in E_SERIES {
        for label in e_labels(s) {
            let e = e_series(s, label).map_err(|e| e.to_string())?;
            let mut item = Item::new(&e.matfac.id).poly("g", &e.g);
            if let Some((phi, psi)) = &e.pair {
                item = item.matrix("phi", phi).matrix("psi", psi);
            }
            item = item.matrix("Xi", e.matfac.xi().expect("split"));
            out.push(item);
        }
    }
    Ok(out)
}

pub fn gsv_items() -> Result<Vec<Item>, String> {
    let mut out = Vec::new();
    for n in D_MIN..=D_MAX {
        for k in 1..n {
            let m = gsv_matfac(n, k)?;
            out.push(Item::new(&m.id).poly("f", &m.f).matrix("Xi", m.xi().expect("split")));
        }
    }
    Ok(out)
}

pub fn flop_items() -> Vec<Item> {
    let uf = universal_flop2();
    vec![Item::new(&uf.matfac.id).poly("W", &uf.w).matrix("C", &uf.coefficients).matrix("Xi", &uf.xi)]
}

pub fn items(target: Target) -> Result<Vec<Item>, String> {
    Ok(match target {
        Target::Appendix => appendix_items()?,
        Target::Gsv => gsv_items()?,
        Target::Flop => flop_items(),
        Target::All => {
            let mut v = appendix_items()?;
            v.extend(gsv_items()?);
            v.extend(flop_items());
            v
        }
    })
}

pub fn render(items: &[Item], format: Format) -> String {
    match format {
        Format::Text => items.iter().map(text).collect::<Vec<_>>().join("\n"),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(items).expect("plain data");
            s.push('\n');
            s
        }
        Format::Tex => items.iter().map(tex).collect::<Vec<_>>().join("\n"),
    }
}

pub fn export(target: Target, format: Format) -> Result<String, String> {
    Ok(render(&items(target)?, format))
}

fn text(item: &Item) -> String {
    let mut s = format!("# {}\n", item.id);
    for (name, p) in &item.polys {
        s.push_str(&format!("{name} = {p}\n"));
    }
    for (name, m) in &item.raw_matrices {
        s.push_str(&format!("{name} =\n{m}"));
    }
    s
}

const GREEK: [&str; 8] = ["alpha", "beta", "gamma", "eta", "lambda", "mu", "xi", "phi"];

/// `alpha12^2*Z` becomes `\alpha_{12}^{2} Z`.
pub fn tex_poly(p: &Poly) -> String {
    let src = p.to_string();
    let mut out = String::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            let letters: String = chars[start..i].iter().collect();
            let dstart = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[dstart..i].iter().collect();
            if GREEK.contains(&letters.as_str()) {
                out.push('\\');
            }
            out.push_str(&letters);
            if !digits.is_empty() {
                out.push_str(&format!("_{{{digits}}}"));
            }
        } else if c == '^' {
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let e: String = chars[start..i].iter().collect();
            out.push_str(&format!("^{{{e}}}"));
        } else if c == '*' {
            out.push(' ');
            i += 1;
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

fn tex_matrix(m: &PolyMatrix) -> String {
    let rows: Vec<String> = (0..m.rows()).map(|r| m.row(r).iter().map(tex_poly).collect::<Vec<_>>().join(" & ")).collect();
    format!("\\begin{{bmatrix}}\n{}\n\\end{{bmatrix}}", rows.join(" \\\\\n"))
}

fn tex(item: &Item) -> String {
    let mut s = format!("% {}\n", item.id);
    for (name, p) in &item.raw_polys {
        s.push_str(&format!("\\[ {name} = {} \\]\n", tex_poly(p)));
    }
    for (name, m) in &item.raw_matrices {
        let name = if name == "Xi" { "\\Xi".to_string() } else if GREEK.contains(&name.as_str()) { format!("\\{name}") } else { name.clone() };
        s.push_str(&format!("\\[ {name} = {} \\]\n", tex_matrix(m)));
    }
    s
}

/// Everything `catalog show` prints for one series entry.
pub fn show_items(series: Series, m: &MatFac) -> Vec<Item> {
    match series {
        Series::UniversalFlop2 => flop_items(),
        Series::E6 | Series::E7 | Series::E8 => {
            let label = m.id.split('[').nth(1).map(|s| s.trim_end_matches(']')).unwrap_or_default();
            match e_series(series, label) {
                Ok(e) => {
                    let mut item = Item::new(&m.id).poly("g", &e.g);
                    if let Some((phi, psi)) = &e.pair {
                        item = item.matrix("phi", phi).matrix("psi", psi);
                    }
                    vec![item.matrix("Xi", m.xi().expect("split"))]
                }
                Err(_) => vec![Item::matfac(m)],
            }
        }
        _ => vec![Item::matfac(m)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mfk_core::poly::p;

    #[test]
    fn tex_rendering() {
        assert_eq!(tex_poly(&p("alpha12^2*Z - 2*eta")), "\\alpha_{12}^{2} Z - 2 \\eta");
        assert_eq!(tex_poly(&p("x + y")), "x + y");
    }

    #[test]
    fn deterministic() {
        for f in [Format::Text, Format::Json, Format::Tex] {
            assert_eq!(export(Target::All, f).unwrap(), export(Target::All, f).unwrap());
        }
        let t = export(Target::Appendix, Format::Text).unwrap();
        assert_eq!(t.matches("\n# ").count() + 1, 21);
    }
}
