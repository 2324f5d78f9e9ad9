//! Exact symbolic expressions: Laurent polynomials over the atom set
//! {x, y, ħ, named constants, abstract function applications} with
//! Gaussian-rational coefficients. Every constructor and operation returns
//! the canonical form, so equality is plain structural equality.

pub mod atom;
pub mod calculus;
pub mod grat;
pub mod render;
pub mod sexpr;
pub mod symtab;

pub use atom::{Atom, Coord, Dep, FunAtom, Sym};
pub use calculus::{ReductionRule, RuleSet};
pub use grat::GRat;
pub use symtab::SymbolTable;

use num_rational::BigRational;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Power product of atoms with integer (possibly negative) exponents,
/// stored sorted by atom. The `Ord` impl is the canonical term order:
/// exponent vectors are compared from the highest atom downward and the
/// lower exponent comes first, which puts 1 before x before x², and sorts
/// terms by their highest constant/function atom ascending.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono {
    factors: Vec<(Atom, i32)>,
}

impl Mono {
    pub fn unit() -> Mono {
        Mono { factors: Vec::new() }
    }

    pub fn atom(a: Atom) -> Mono {
        Mono { factors: vec![(a, 1)] }
    }

    pub fn atom_pow(a: Atom, e: i32) -> Mono {
        if e == 0 {
            Mono::unit()
        } else {
            Mono { factors: vec![(a, e)] }
        }
    }

    pub fn from_factors(mut factors: Vec<(Atom, i32)>) -> Mono {
        factors.retain(|&(_, e)| e != 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Atom, i32)> = Vec::with_capacity(factors.len());
        for (a, e) in factors {
            match out.last_mut() {
                Some(last) if last.0 == a => last.1 += e,
                _ => out.push((a, e)),
            }
        }
        out.retain(|&(_, e)| e != 0);
        Mono { factors: out }
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, i32)] {
        &self.factors
    }

    pub fn exponent(&self, a: &Atom) -> i32 {
        self.factors
            .binary_search_by(|probe| probe.0.cmp(a))
            .map(|idx| self.factors[idx].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            match self.factors[i].0.cmp(&other.factors[j].0) {
                Ordering::Less => {
                    out.push(self.factors[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.factors[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = self.factors[i].1 + other.factors[j].1;
                    if e != 0 {
                        out.push((self.factors[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Mono { factors: out }
    }

    pub fn pow(&self, k: i32) -> Mono {
        if k == 0 {
            return Mono::unit();
        }
        Mono {
            factors: self.factors.iter().map(|&(a, e)| (a, e * k)).collect(),
        }
    }

    pub fn inv(&self) -> Mono {
        self.pow(-1)
    }

    /// Splits into (factors over `chosen`, remaining factors).
    pub fn split(&self, chosen: &[Atom]) -> (Mono, Mono) {
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        for &(a, e) in &self.factors {
            if chosen.contains(&a) {
                inside.push((a, e));
            } else {
                outside.push((a, e));
            }
        }
        (Mono { factors: inside }, Mono { factors: outside })
    }

    pub fn total_degree(&self) -> i64 {
        self.factors.iter().map(|&(_, e)| e as i64).sum()
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        // Walk both factor lists from the highest atom down; at the first
        // atom where the exponents differ the lower exponent sorts first.
        let mut i = self.factors.len();
        let mut j = other.factors.len();
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => {
                    let e = other.factors[j - 1].1;
                    return if e < 0 { Ordering::Greater } else { Ordering::Less };
                }
                (_, 0) => {
                    let e = self.factors[i - 1].1;
                    return if e < 0 { Ordering::Less } else { Ordering::Greater };
                }
                _ => {
                    let (a1, e1) = self.factors[i - 1];
                    let (a2, e2) = other.factors[j - 1];
                    match a1.cmp(&a2) {
                        Ordering::Greater => {
                            // other has exponent 0 at a1
                            return if e1 < 0 { Ordering::Less } else { Ordering::Greater };
                        }
                        Ordering::Less => {
                            return if e2 < 0 { Ordering::Greater } else { Ordering::Less };
                        }
                        Ordering::Equal => {
                            if e1 != e2 {
                                return e1.cmp(&e2);
                            }
                            i -= 1;
                            j -= 1;
                        }
                    }
                }
            }
        }
    }
}

/// Canonical multivariate Laurent polynomial. The term map never holds a
/// zero coefficient; iteration order is the canonical term order.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Expr {
    terms: BTreeMap<Mono, GRat>,
}

impl Expr {
    pub fn zero() -> Expr {
        Expr { terms: BTreeMap::new() }
    }

    pub fn one() -> Expr {
        Expr::from_grat(GRat::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::from_grat(GRat::from_int(n))
    }

    pub fn rat(p: i64, q: i64) -> Expr {
        Expr::from_grat(GRat::from_ratio(p, q))
    }

    pub fn imag_unit() -> Expr {
        Expr::from_grat(GRat::i())
    }

    pub fn from_grat(c: GRat) -> Expr {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::unit(), c);
        }
        Expr { terms }
    }

    pub fn from_rational(r: BigRational) -> Expr {
        Expr::from_grat(GRat::from_rational(r))
    }

    pub fn atom(a: Atom) -> Expr {
        Expr::term(GRat::one(), Mono::atom(a))
    }

    pub fn term(c: GRat, m: Mono) -> Expr {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Expr { terms }
    }

    pub fn x() -> Expr {
        Expr::atom(Atom::X)
    }

    pub fn y() -> Expr {
        Expr::atom(Atom::Y)
    }

    pub fn coord(c: Coord) -> Expr {
        match c {
            Coord::X => Expr::x(),
            Coord::Y => Expr::y(),
        }
    }

    pub fn hbar() -> Expr {
        Expr::atom(Atom::Hbar)
    }

    pub fn constant(name: &str) -> Expr {
        Expr::atom(Atom::constant(name))
    }

    pub fn fun_x(name: &str, order: u16) -> Expr {
        Expr::atom(Atom::fun_x(name, order))
    }

    pub fn fun_y(name: &str, order: u16) -> Expr {
        Expr::atom(Atom::fun_y(name, order))
    }

    pub fn fun_on(name: &str, coord: Coord, order: u16) -> Expr {
        Expr::atom(Atom::fun_on(name, coord, order))
    }

    pub fn fun_xy(name: &str, dx: u16, dy: u16) -> Expr {
        Expr::atom(Atom::fun_xy(name, dx, dy))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Mono::unit())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &GRat)> {
        self.terms.iter()
    }

    /// The single (coefficient, monomial) pair of a one-term expression.
    pub fn as_single_term(&self) -> Option<(&GRat, &Mono)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    /// The constant value of an atom-free expression.
    pub fn as_constant(&self) -> Option<GRat> {
        if self.terms.is_empty() {
            return Some(GRat::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Mono::unit()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn add_term(&mut self, m: Mono, c: &GRat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Identity by construction: every `Expr` is canonical. Exposed so the
    /// normal-form contract has a named entry point.
    pub fn normalize(&self) -> Expr {
        self.clone()
    }

    pub fn pow(&self, k: i32) -> Result<Expr> {
        if k == 0 {
            return Ok(Expr::one());
        }
        if k < 0 {
            let (c, m) = self
                .as_single_term()
                .ok_or_else(|| Error::NonInvertible(self.to_string()))?;
            let c = c.inv().pow((-k) as u32);
            return Ok(Expr::term(c, m.pow(k)));
        }
        let mut acc = Expr::one();
        let mut base = self.clone();
        let mut k = k as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn powi(&self, k: i32) -> Expr {
        self.pow(k).expect("inverting a non-monomial expression")
    }

    /// Exact division by a single-term expression.
    pub fn div_mono(&self, divisor: &Expr) -> Result<Expr> {
        let inv = divisor.pow(-1)?;
        Ok(self * &inv)
    }

    pub fn scale(&self, c: &GRat) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), c * v)).collect(),
        }
    }

    pub fn scale_rat(&self, p: i64, q: i64) -> Expr {
        self.scale(&GRat::from_ratio(p, q))
    }

    /// All atoms appearing in the expression.
    pub fn atoms(&self) -> std::collections::BTreeSet<Atom> {
        let mut set = std::collections::BTreeSet::new();
        for m in self.terms.keys() {
            for &(a, _) in m.factors() {
                set.insert(a);
            }
        }
        set
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        self.terms.keys().any(|m| m.exponent(a) != 0)
    }

    /// Highest derivative order of the named univariate function, if present.
    pub fn max_fun_order(&self, name: Sym) -> Option<u16> {
        let mut best: Option<u16> = None;
        for m in self.terms.keys() {
            for &(a, _) in m.factors() {
                if let Atom::Fun(fa) = a {
                    if fa.name == name && fa.dep != Dep::XY {
                        best = Some(best.map_or(fa.order(), |b| b.max(fa.order())));
                    }
                }
            }
        }
        best
    }

    /// Degree in a single atom (max exponent over terms); 0 for absent.
    pub fn degree_in(&self, a: &Atom) -> i32 {
        self.terms.keys().map(|m| m.exponent(a)).max().unwrap_or(0)
    }

    /// Coefficient of atom^k: the sum of terms with exactly that exponent,
    /// with the atom factor removed.
    pub fn coefficient_of(&self, a: &Atom, k: i32) -> Expr {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            if m.exponent(a) == k {
                let rest = Mono::from_factors(
                    m.factors().iter().cloned().filter(|(b, _)| b != a).collect(),
                );
                out.add_term(rest, c);
            }
        }
        out
    }

    /// True if every coefficient is real (no imaginary parts anywhere).
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    /// Replaces i by −i in all coefficients.
    pub fn conj(&self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $trait::$method(self, &rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render::plain(self))
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render::plain(self))
    }
}

/// Builds Σ cᵢ·mᵢ from parts.
pub fn expr_sum<I: IntoIterator<Item = Expr>>(parts: I) -> Expr {
    let mut out = Expr::zero();
    for p in parts {
        out = &out + &p;
    }
    out
}
