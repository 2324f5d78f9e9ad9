//! Noncommutative algebra of differential operators in the momenta
//! p₁ = −iħ∂x, p₂ = −iħ∂y with symbolic coefficients, kept in left normal
//! order (all coefficient functions to the left of the momenta).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{Atom, Coord, Expr, GRat, Mono};

/// Σ c_{i,j}(x,y) · p₁^i p₂^j with canonical `Expr` coefficients; zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct OperatorPoly {
    coeffs: BTreeMap<(u16, u16), Expr>,
}

impl OperatorPoly {
    pub fn zero() -> OperatorPoly {
        OperatorPoly::default()
    }

    /// Multiplication operator by a function/expression.
    pub fn from_expr(e: Expr) -> OperatorPoly {
        let mut coeffs = BTreeMap::new();
        if !e.is_zero() {
            coeffs.insert((0, 0), e);
        }
        OperatorPoly { coeffs }
    }

    pub fn one() -> OperatorPoly {
        OperatorPoly::from_expr(Expr::one())
    }

    /// c · p₁^i p₂^j
    pub fn monomial(c: Expr, i: u16, j: u16) -> OperatorPoly {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert((i, j), c);
        }
        OperatorPoly { coeffs }
    }

    pub fn p1() -> OperatorPoly {
        OperatorPoly::monomial(Expr::one(), 1, 0)
    }

    pub fn p2() -> OperatorPoly {
        OperatorPoly::monomial(Expr::one(), 0, 1)
    }

    pub fn momentum(coord: Coord) -> OperatorPoly {
        match coord {
            Coord::X => OperatorPoly::p1(),
            Coord::Y => OperatorPoly::p2(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.coeffs
            .keys()
            .map(|&(i, j)| i as u32 + j as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, i: u16, j: u16) -> Expr {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&(u16, u16), &Expr)> {
        self.coeffs.iter()
    }

    pub fn num_slots(&self) -> usize {
        self.coeffs.len()
    }

    fn insert_add(&mut self, key: (u16, u16), e: &Expr) {
        if e.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(key) {
            Entry::Vacant(v) => {
                v.insert(e.clone());
            }
            Entry::Occupied(mut o) => {
                let sum = &*o.get() + e;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &OperatorPoly) -> OperatorPoly {
        let mut out = self.clone();
        for (k, e) in &other.coeffs {
            out.insert_add(*k, e);
        }
        out
    }

    pub fn sub(&self, other: &OperatorPoly) -> OperatorPoly {
        let mut out = self.clone();
        for (k, e) in &other.coeffs {
            out.insert_add(*k, &-e);
        }
        out
    }

    pub fn neg(&self) -> OperatorPoly {
        OperatorPoly {
            coeffs: self.coeffs.iter().map(|(k, e)| (*k, -e)).collect(),
        }
    }

    pub fn scale(&self, e: &Expr) -> OperatorPoly {
        if e.is_zero() {
            return OperatorPoly::zero();
        }
        OperatorPoly {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, e * c)).collect(),
        }
    }

    pub fn scale_rat(&self, p: i64, q: i64) -> OperatorPoly {
        self.scale(&Expr::rat(p, q))
    }

    /// Normal-ordered product. Momenta commute past coefficients by the
    /// generalized Leibniz rule
    /// p₁^i p₂^j · c = Σ_{a≤i, b≤j} C(i,a) C(j,b) (−iħ)^{a+b} c^{(a,b)} p₁^{i−a} p₂^{j−b}.
    pub fn mul(&self, other: &OperatorPoly) -> OperatorPoly {
        let mut out = OperatorPoly::zero();
        for (&(i, j), c1) in &self.coeffs {
            for (&(k, l), c2) in &other.coeffs {
                // Precompute y-derivative chains of c2 lazily per (a,b).
                let mut dyb = c2.clone();
                for b in 0..=j {
                    let mut dxa = dyb.clone();
                    for a in 0..=i {
                        if !dxa.is_zero() {
                            let scalar = binom(i, a) * binom(j, b);
                            let phase = minus_i_hbar_pow((a + b) as u32);
                            let coeff = &(&dxa * &phase) * &Expr::int(scalar);
                            let moved = &coeff * c1;
                            out.insert_add((i - a + k, j - b + l), &moved);
                        }
                        dxa = dxa.diff(Coord::X);
                    }
                    dyb = dyb.diff(Coord::Y);
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &OperatorPoly) -> OperatorPoly {
        self.mul(other).sub(&other.mul(self))
    }

    /// ½{f, p₁^i p₂^j} expanded to normal order.
    pub fn symmetrize(f: &Expr, i: u16, j: u16) -> OperatorPoly {
        let fwd = OperatorPoly::monomial(f.clone(), i, j);
        let rev = OperatorPoly::monomial(Expr::one(), i, j).mul(&OperatorPoly::from_expr(f.clone()));
        fwd.add(&rev).scale_rat(1, 2)
    }

    /// Formal adjoint: momenta are self-adjoint, coefficients conjugate and
    /// move to the right, then everything is re-normal-ordered.
    pub fn adjoint(&self) -> OperatorPoly {
        let mut out = OperatorPoly::zero();
        for (&(i, j), c) in &self.coeffs {
            let p = OperatorPoly::monomial(Expr::one(), i, j);
            out = out.add(&p.mul(&OperatorPoly::from_expr(c.conj())));
        }
        out
    }

    pub fn is_formally_self_adjoint(&self) -> bool {
        self.adjoint() == *self
    }

    /// Substitutes/reduces every coefficient.
    pub fn map_coeffs<F: Fn(&Expr) -> Result<Expr>>(&self, f: F) -> Result<OperatorPoly> {
        let mut out = OperatorPoly::zero();
        for (k, e) in &self.coeffs {
            out.insert_add(*k, &f(e)?);
        }
        Ok(out)
    }

    /// Extracts the real coefficient system M_{i,j} of
    /// [·,·] = Σ (−iħ) M_{i,j} ∂x^i ∂y^j: momenta convert to derivatives via
    /// p₁^i p₂^j = (−iħ)^{i+j} ∂x^i ∂y^j and one global factor −iħ is divided
    /// out. Errors if any slot keeps an imaginary part, which signals a
    /// commutator of non-self-adjoint inputs.
    pub fn extract_m(&self) -> Result<DeterminingSystem> {
        let mut eqs = BTreeMap::new();
        for (&(i, j), c) in &self.coeffs {
            // c · (−iħ)^{i+j} / (−iħ) = c · (−iħ)^{i+j−1}
            let n = i as i32 + j as i32 - 1;
            let m = if n >= 0 {
                &minus_i_hbar_pow(n as u32) * c
            } else {
                // i = j = 0: divide by −iħ
                let inv = &Expr::imag_unit()
                    * &Expr::term(GRat::one(), Mono::atom_pow(Atom::Hbar, -1));
                &inv * c
            };
            if !m.is_real() {
                return Err(Error::ResidualImaginary(format!(
                    "slot ({}, {}): {}",
                    i, j, m
                )));
            }
            if !m.is_zero() {
                eqs.insert((i, j), m);
            }
        }
        Ok(DeterminingSystem { eqs, imposed: None })
    }
}

fn binom(n: u16, k: u16) -> i64 {
    let mut r: i64 = 1;
    for t in 0..k as i64 {
        r = r * (n as i64 - t) / (t + 1);
    }
    r
}

/// (−iħ)^n as an Expr.
fn minus_i_hbar_pow(n: u32) -> Expr {
    let phase = match n % 4 {
        0 => GRat::one(),
        1 => -&GRat::i(),
        2 => GRat::from_int(-1),
        _ => GRat::i(),
    };
    Expr::term(phase, Mono::atom_pow(Atom::Hbar, n as i32))
}

/// The indexed family M_{i,j} extracted from a commutator.
#[derive(Clone, Debug, Default)]
pub struct DeterminingSystem {
    eqs: BTreeMap<(u16, u16), Expr>,
    /// Which parity family {i+j even / all} was imposed, if restricted.
    pub imposed: Option<&'static str>,
}

impl DeterminingSystem {
    pub fn equations(&self) -> impl Iterator<Item = (&(u16, u16), &Expr)> {
        self.eqs.iter()
    }

    pub fn get(&self, i: u16, j: u16) -> Expr {
        self.eqs.get(&(i, j)).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn len(&self) -> usize {
        self.eqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty()
    }

    pub fn max_total(&self) -> u32 {
        self.eqs
            .keys()
            .map(|&(i, j)| i as u32 + j as u32)
            .max()
            .unwrap_or(0)
    }

    /// Restrict to slots with i+j of the given parity.
    pub fn parity(&self, even: bool) -> DeterminingSystem {
        DeterminingSystem {
            eqs: self
                .eqs
                .iter()
                .filter(|(&(i, j), _)| ((i + j) % 2 == 0) == even)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
            imposed: Some(if even { "i+j even" } else { "i+j odd" }),
        }
    }

    pub fn all_zero(&self) -> bool {
        self.eqs.values().all(|e| e.is_zero())
    }

    pub fn map<F: Fn(&Expr) -> Result<Expr>>(&self, f: F) -> Result<DeterminingSystem> {
        let mut eqs = BTreeMap::new();
        for (k, e) in &self.eqs {
            let v = f(e)?;
            if !v.is_zero() {
                eqs.insert(*k, v);
            }
        }
        Ok(DeterminingSystem { eqs, imposed: self.imposed })
    }
}

fn fmt_operator(op: &OperatorPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if op.coeffs.is_empty() {
        return f.write_str("0");
    }
    let mut first = true;
    for (&(i, j), c) in &op.coeffs {
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        write!(f, "[{}]", c)?;
        if i > 0 {
            write!(f, "*p1^{}", i)?;
        }
        if j > 0 {
            write!(f, "*p2^{}", j)?;
        }
    }
    Ok(())
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_operator(self, f)
    }
}

impl fmt::Debug for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_operator(self, f)
    }
}
