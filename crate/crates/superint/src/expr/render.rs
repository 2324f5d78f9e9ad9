//! Canonical plain-text and LaTeX rendering. Plain text is the byte-stable
//! format used by golden files: term order is the canonical term order and
//! every token has exactly one spelling.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::atom::{Atom, Dep, FunAtom};
use super::{Expr, GRat, Mono};

fn rational_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn mono_str(m: &Mono, with_i: bool) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut emitted_i = false;
    for &(a, e) in m.factors() {
        // The imaginary unit renders between ħ and the named constants.
        if with_i && !emitted_i && matches!(a, Atom::Const(_) | Atom::Fun(_)) {
            parts.push("i".to_string());
            emitted_i = true;
        }
        if e == 1 {
            parts.push(a.to_string());
        } else {
            parts.push(format!("{}^{}", a, e));
        }
    }
    if with_i && !emitted_i {
        parts.push("i".to_string());
    }
    parts.join("*")
}

/// One term as (is_negative, body) with the sign factored out when the
/// coefficient is real or purely imaginary.
fn term_str(m: &Mono, c: &GRat) -> (bool, String) {
    let (neg, abs_re, abs_im) = if c.im.is_zero() {
        (c.re.is_negative(), c.re.abs(), BigRational::zero())
    } else if c.re.is_zero() {
        (c.im.is_negative(), BigRational::zero(), c.im.abs())
    } else {
        (false, c.re.clone(), c.im.clone())
    };
    let body = if !abs_im.is_zero() && abs_re.is_zero() {
        // purely imaginary: q*i*mono
        if m.is_unit() {
            if abs_im.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", rational_str(&abs_im))
            }
        } else if abs_im.is_one() {
            mono_str(m, true)
        } else {
            format!("{}*{}", rational_str(&abs_im), mono_str(m, true))
        }
    } else if !abs_im.is_zero() {
        // mixed complex coefficient: keep it grouped
        let coeff = format!(
            "({}{}{}*i)",
            rational_str(&abs_re),
            if abs_im.is_negative() { "-" } else { "+" },
            rational_str(&abs_im.abs())
        );
        if m.is_unit() {
            coeff
        } else {
            format!("{}*{}", coeff, mono_str(m, false))
        }
    } else if m.is_unit() {
        rational_str(&abs_re)
    } else if abs_re.is_one() {
        mono_str(m, false)
    } else {
        format!("{}*{}", rational_str(&abs_re), mono_str(m, false))
    };
    (neg, body)
}

/// Canonical plain-text rendering.
pub fn plain(e: &Expr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in e.terms().enumerate() {
        let (neg, body) = term_str(m, c);
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

fn latex_name(name: &str) -> String {
    const GREEK: &[&str] = &[
        "alpha", "beta", "gamma", "delta", "epsilon", "kappa", "lambda", "mu", "omega", "wp",
        "sigma", "tau", "xi",
    ];
    let (stem, digits) = match name.find(|c: char| c.is_ascii_digit()) {
        Some(pos) => (&name[..pos], &name[pos..]),
        None => (name, ""),
    };
    let (stem, hat) = match stem.strip_suffix("hat") {
        Some(s) => (s, true),
        None => (stem, false),
    };
    let mut core = if GREEK.contains(&stem) {
        format!("\\{}", stem)
    } else {
        stem.to_string()
    };
    if hat {
        core = format!("\\hat{{{}}}", core);
    }
    if digits.is_empty() {
        core
    } else {
        format!("{}_{{{}}}", core, digits)
    }
}

fn latex_fun(fa: &FunAtom) -> String {
    let name = latex_name(fa.name.as_str());
    match fa.dep {
        Dep::X | Dep::Y => {
            let (k, arg) = if fa.dep == Dep::X { (fa.dx, "x") } else { (fa.dy, "y") };
            match k {
                0 => format!("{}({})", name, arg),
                1..=3 => format!("{}{}({})", name, "'".repeat(k as usize), arg),
                _ => format!("{}^{{({})}}({})", name, k, arg),
            }
        }
        Dep::XY => {
            if fa.dx == 0 && fa.dy == 0 {
                format!("{}(x,y)", name)
            } else {
                format!("{}^{{({},{})}}(x,y)", name, fa.dx, fa.dy)
            }
        }
    }
}

fn latex_atom(a: &Atom) -> String {
    match a {
        Atom::X => "x".to_string(),
        Atom::Y => "y".to_string(),
        Atom::Hbar => "\\hbar".to_string(),
        Atom::Const(s) => latex_name(s.as_str()),
        Atom::Fun(fa) => latex_fun(fa),
    }
}

fn latex_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

/// One-way LaTeX rendering in the paper's visual style.
pub fn latex(e: &Expr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in e.terms().enumerate() {
        let (neg, re_abs, im_abs) = if c.im.is_zero() {
            (c.re.is_negative(), c.re.abs(), BigRational::zero())
        } else if c.re.is_zero() {
            (c.im.is_negative(), BigRational::zero(), c.im.abs())
        } else {
            (false, c.re.clone(), c.im.clone())
        };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { "-" } else { "+" });
        }
        let mut factors: Vec<String> = Vec::new();
        if im_abs.is_zero() {
            if !re_abs.is_one() || m.is_unit() {
                factors.push(latex_rational(&re_abs));
            }
        } else if re_abs.is_zero() {
            if !im_abs.is_one() {
                factors.push(latex_rational(&im_abs));
            }
            factors.push("i".to_string());
        } else {
            factors.push(format!(
                "({}{}{} i)",
                latex_rational(&re_abs),
                if im_abs.is_negative() { "-" } else { "+" },
                latex_rational(&im_abs.abs())
            ));
        }
        for &(a, e) in m.factors() {
            if e == 1 {
                factors.push(latex_atom(&a));
            } else if e >= 0 {
                factors.push(format!("{}^{{{}}}", latex_atom(&a), e));
            } else {
                factors.push(format!("{}^{{{}}}", latex_atom(&a), e));
            }
        }
        out.push_str(&factors.join(" "));
    }
    out
}
