//! Deterministic plain-text and LaTeX rendering.
//!
//! Canonical term order is the derived order on exponent maps (variable index,
//! then exponent) and on jet multisets; both are the iteration order of the
//! underlying sorted maps, so rendered output is byte-stable across runs.

use crate::coeffring::{GaussRat, PuiseuxPoly, Rat, Scalar, ScalarField};
use crate::jetpoly::{DiffPoly, Jets};
use num_traits::{One, Signed, Zero};

fn rat_text(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn gauss_text(g: &GaussRat) -> String {
    format!("{}", g)
}

pub fn scalar_text(s: &Scalar) -> String {
    format!("{}", s)
}

/// One Puiseux monomial as `coeff*u1^(e)*...`; exponent 1 is left implicit.
fn monomial_text(c: &Scalar, e: &crate::coeffring::Exps, var: &str) -> String {
    let mut factors: Vec<String> = Vec::new();
    if !c.is_one() || e.is_one() {
        let cs = scalar_text(c);
        factors.push(if c.num_terms() > 1 { format!("({})", cs) } else { cs });
    }
    for (v, x) in e.entries() {
        if x.is_one() {
            factors.push(format!("{}{}", var, v));
        } else {
            factors.push(format!("{}{}^({})", var, v, rat_text(x)));
        }
    }
    factors.join("*")
}

pub fn poly_text(p: &PuiseuxPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = p.terms().map(|(e, c)| monomial_text(c, e, var)).collect();
    parts.join(" + ")
}

pub fn sf_text(f: &ScalarField, var: &str) -> String {
    if f.denominator().is_one() {
        poly_text(f.numerator(), var)
    } else {
        format!("({}) / ({})", poly_text(f.numerator(), var), poly_text(f.denominator(), var))
    }
}

fn jet_text(var: &str, index: usize, order: u32) -> String {
    match order {
        1 => format!("{}{}_x", var, index),
        2 => format!("{}{}_xx", var, index),
        3 => format!("{}{}_xxx", var, index),
        j => format!("{}{}_x{}", var, index, j),
    }
}

fn jets_text(jets: &Jets, var: &str) -> String {
    let mut parts = Vec::new();
    for ((index, order), mult) in jets.entries() {
        let base = jet_text(var, *index, *order);
        if *mult == 1 {
            parts.push(base);
        } else {
            parts.push(format!("{}^{}", base, mult));
        }
    }
    parts.join("*")
}

pub fn diffpoly_text(p: &DiffPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (jets, coeff) in p.terms() {
        let cs = sf_text(coeff, var);
        if jets.is_empty() {
            parts.push(cs);
        } else if coeff.is_one() {
            parts.push(jets_text(jets, var));
        } else {
            let c = if coeff.denominator().is_one() && coeff.numerator().num_terms() <= 1 {
                cs
            } else {
                format!("({})", cs)
            };
            parts.push(format!("{}*{}", c, jets_text(jets, var)));
        }
    }
    parts.join(" + ")
}

// ---------------------------------------------------------------------------
// LaTeX
// ---------------------------------------------------------------------------

fn rat_latex(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else if r.is_negative() {
        format!("-\\tfrac{{{}}}{{{}}}", -r.numer(), r.denom())
    } else {
        format!("\\tfrac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

/// Recognizes a monomial `c * (u^v)^e` with `c = q^e` for small rational `q`,
/// so densities print in the grouped shape `(q u^v)^e`.
fn grouped_power(c: &Scalar, e: &crate::coeffring::Exps, var: &str) -> Option<String> {
    let mut entries = e.entries();
    let (v, x) = entries.next()?;
    if entries.next().is_some() {
        return None;
    }
    for q in [2i64, 3, 4] {
        if let Ok(qe) = Scalar::pow_rat(&crate::coeffring::rat(q, 1), x) {
            if &qe == c {
                let inner = format!("{}{}^{}", q, var, v);
                return Some(if x.is_one() {
                    format!("({})", inner)
                } else if *x == crate::coeffring::rat(1, 2) {
                    format!("\\sqrt{{{}}}", inner)
                } else if x.is_negative() {
                    format!("\\frac{{1}}{{({})^{{{}}}}}", inner, rat_latex(&-x.clone()))
                } else {
                    format!("({})^{{{}}}", inner, rat_latex(x))
                });
            }
        }
    }
    None
}

pub fn scalar_latex(s: &Scalar) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (r, g) in s.terms() {
        let mut t = String::new();
        if r.is_one() {
            t.push_str(&gauss_latex(g));
        } else {
            if !g.is_one() {
                t.push_str(&gauss_latex(g));
                t.push_str(" ");
            }
            let rads: Vec<String> = r
                .entries()
                .map(|(p, e)| {
                    if *e == crate::coeffring::rat(1, 2) {
                        format!("\\sqrt{{{}}}", p)
                    } else {
                        format!("{}^{{{}}}", p, rat_latex(e))
                    }
                })
                .collect();
            t.push_str(&rads.join(" "));
        }
        parts.push(t);
    }
    parts.join(" + ")
}

fn gauss_latex(g: &GaussRat) -> String {
    if g.im.is_zero() {
        rat_latex(&g.re)
    } else if g.re.is_zero() {
        format!("{} i", rat_latex(&g.im))
    } else {
        format!("({} + {} i)", rat_latex(&g.re), rat_latex(&g.im))
    }
}

pub fn poly_latex(p: &PuiseuxPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    let mut first = true;
    for (e, c) in p.terms() {
        let (body, negated) = match grouped_power(c, e, var) {
            Some(g) => (g, false),
            None => match grouped_power(&c.neg(), e, var) {
                Some(g) => (g, true),
                None => {
                    let mut t = String::new();
                    let coeff_is_one = c.is_one();
                    let coeff_is_neg_one = c.neg().is_one();
                    if e.is_one() {
                        t.push_str(&scalar_latex(c));
                    } else {
                        if coeff_is_neg_one {
                            t.push('-');
                        } else if !coeff_is_one {
                            t.push_str(&scalar_latex(c));
                            t.push(' ');
                        }
                        let vars: Vec<String> = e
                            .entries()
                            .map(|(v, x)| {
                                if x.is_one() {
                                    format!("{}^{{{}}}", var, v)
                                } else {
                                    format!("({}^{{{}}})^{{{}}}", var, v, rat_latex(x))
                                }
                            })
                            .collect();
                        t.push_str(&vars.join(" "));
                    }
                    (t, false)
                }
            },
        };
        if first {
            if negated {
                out.push_str("-");
            }
            out.push_str(&body);
            first = false;
        } else if negated || body.starts_with('-') {
            out.push_str(" - ");
            out.push_str(body.trim_start_matches('-'));
        } else {
            out.push_str(" + ");
            out.push_str(&body);
        }
    }
    out
}

pub fn sf_latex(f: &ScalarField, var: &str) -> String {
    if f.denominator().is_one() {
        poly_latex(f.numerator(), var)
    } else {
        format!(
            "\\frac{{{}}}{{{}}}",
            poly_latex(f.numerator(), var),
            poly_latex(f.denominator(), var)
        )
    }
}

fn jet_latex(var: &str, index: usize, order: u32) -> String {
    match order {
        1 => format!("{}^{{{}}}_x", var, index),
        2 => format!("{}^{{{}}}_{{xx}}", var, index),
        j => format!("{}^{{{}}}_{{x^{}}}", var, index, j),
    }
}

pub fn diffpoly_latex(p: &DiffPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (jets, coeff) in p.terms() {
        let mut t = String::new();
        let one = coeff.is_one();
        if jets.is_empty() || !one {
            t.push_str(&sf_latex(coeff, var));
            if !jets.is_empty() {
                t.push_str(" \\, ");
            }
        }
        let mut jp = Vec::new();
        for ((index, order), mult) in jets.entries() {
            let base = jet_latex(var, *index, *order);
            jp.push(if *mult == 1 { base } else { format!("({})^{}", base, mult) });
        }
        t.push_str(&jp.join(" "));
        parts.push(t);
    }
    parts.join(" + ")
}

/// Renders an n x n matrix of strings as a LaTeX pmatrix.
pub fn pmatrix(entries: &[Vec<String>]) -> String {
    let rows: Vec<String> = entries.iter().map(|r| r.join(" & ")).collect();
    format!("\\begin{{pmatrix}} {} \\end{{pmatrix}}", rows.join(" \\\\ "))
}
