//! Differentiation, substitution, rule-based order reduction, and
//! collection for canonical expressions.

use std::collections::BTreeMap;

use super::atom::{Atom, Coord, Dep, FunAtom, Sym};
use super::{Expr, GRat, Mono};
use crate::error::{Error, Result};

/// Derivative of a single atom with respect to a coordinate.
/// Returns None when the derivative is zero.
fn atom_derivative(a: &Atom, coord: Coord) -> Option<Atom> {
    match (a, coord) {
        (Atom::X, Coord::X) | (Atom::Y, Coord::Y) => None, // handled by caller (derivative is 1)
        (Atom::X, Coord::Y) | (Atom::Y, Coord::X) => None,
        (Atom::Hbar, _) | (Atom::Const(_), _) => None,
        (Atom::Fun(fa), c) => {
            let depends = match fa.dep {
                Dep::X => c == Coord::X,
                Dep::Y => c == Coord::Y,
                Dep::XY => true,
            };
            if !depends {
                return None;
            }
            let mut next = *fa;
            match c {
                Coord::X => next.dx += 1,
                Coord::Y => next.dy += 1,
            }
            Some(Atom::Fun(next))
        }
    }
}

fn atom_depends(a: &Atom, coord: Coord) -> bool {
    match a {
        Atom::X => coord == Coord::X,
        Atom::Y => coord == Coord::Y,
        Atom::Hbar | Atom::Const(_) => false,
        Atom::Fun(fa) => match fa.dep {
            Dep::X => coord == Coord::X,
            Dep::Y => coord == Coord::Y,
            Dep::XY => true,
        },
    }
}

impl Expr {
    /// Exact partial derivative.
    pub fn diff(&self, coord: Coord) -> Expr {
        let mut out = Expr::zero();
        for (m, c) in self.terms() {
            for (k, &(a, e)) in m.factors().iter().enumerate() {
                if !atom_depends(&a, coord) {
                    continue;
                }
                // e · a^(e−1) · (da/dcoord) · rest
                let mut factors: Vec<(Atom, i32)> = Vec::with_capacity(m.factors().len() + 1);
                for (l, &(b, eb)) in m.factors().iter().enumerate() {
                    if l == k {
                        if eb != 1 {
                            factors.push((b, eb - 1));
                        }
                    } else {
                        factors.push((b, eb));
                    }
                }
                if let Some(da) = atom_derivative(&a, coord) {
                    factors.push((da, 1));
                }
                let coeff = c * &GRat::from_int(e as i64);
                out.add_term(Mono::from_factors(factors), &coeff);
            }
        }
        out
    }

    pub fn diff_n(&self, coord: Coord, n: u32) -> Expr {
        let mut e = self.clone();
        for _ in 0..n {
            e = e.diff(coord);
        }
        e
    }

    /// Simultaneous substitution of atoms by expressions. An atom occurring
    /// with a negative exponent can only be bound to an invertible
    /// (single-term) expression.
    pub fn substitute(&self, bindings: &BTreeMap<Atom, Expr>) -> Result<Expr> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut out = Expr::zero();
        for (m, c) in self.terms() {
            let mut acc = Expr::from_grat(c.clone());
            let mut plain: Vec<(Atom, i32)> = Vec::new();
            for &(a, e) in m.factors() {
                match bindings.get(&a) {
                    None => plain.push((a, e)),
                    Some(rep) => {
                        let p = rep.pow(e).map_err(|_| Error::NonInvertible(rep.to_string()))?;
                        acc = &acc * &p;
                    }
                }
            }
            let rest = Expr::term(GRat::one(), Mono::from_factors(plain));
            out = &out + &(&acc * &rest);
        }
        Ok(out)
    }

    pub fn substitute1(&self, a: Atom, rep: &Expr) -> Result<Expr> {
        let mut b = BTreeMap::new();
        b.insert(a, rep.clone());
        self.substitute(&b)
    }

    /// Replaces every derivative order of the named function by the
    /// corresponding derivative of a closed-form expression.
    pub fn substitute_fn(&self, name: Sym, dep: Dep, closed_form: &Expr) -> Result<Expr> {
        let mut orders: Vec<FunAtom> = Vec::new();
        for a in self.atoms() {
            if let Atom::Fun(fa) = a {
                if fa.name == name && fa.dep == dep {
                    orders.push(fa);
                }
            }
        }
        if orders.is_empty() {
            return Ok(self.clone());
        }
        let mut bindings = BTreeMap::new();
        for fa in orders {
            let rep = closed_form.diff_n(Coord::X, fa.dx as u32).diff_n(Coord::Y, fa.dy as u32);
            bindings.insert(Atom::Fun(fa), rep);
        }
        self.substitute(&bindings)
    }

    /// Binds named constants to expressions (e.g. exact rationals).
    pub fn bind_constants(&self, values: &BTreeMap<String, Expr>) -> Result<Expr> {
        let bindings: BTreeMap<Atom, Expr> = values
            .iter()
            .map(|(k, v)| (Atom::constant(k), v.clone()))
            .collect();
        self.substitute(&bindings)
    }

    /// Fixpoint reduction: rewrite until no function atom has derivative
    /// order at or above its rule's target order, then lower every matched
    /// square below exponent two.
    pub fn reduce(&self, rules: &RuleSet) -> Result<Expr> {
        let mut e = self.clone();
        loop {
            // Highest reducible derivative first keeps intermediate
            // expressions smallest.
            let mut target: Option<FunAtom> = None;
            for a in e.atoms() {
                if let Atom::Fun(fa) = a {
                    if let Some(rule) = rules.get(fa.name) {
                        if fa.dep == rule.dep() && fa.order() >= rule.order() {
                            let better = match target {
                                None => true,
                                Some(t) => fa.order() > t.order(),
                            };
                            if better {
                                target = Some(fa);
                            }
                        }
                    }
                }
            }
            if let Some(fa) = target {
                let rule = rules.get(fa.name).unwrap();
                let rep = rule.derived_replacement(fa.order())?;
                e = e.substitute1(Atom::Fun(fa), &rep)?;
                continue;
            }
            let mut applied = false;
            for pr in rules.powers() {
                let next = e.lower_square(pr)?;
                if next != e {
                    e = next;
                    applied = true;
                    break;
                }
            }
            if !applied {
                return Ok(e);
            }
        }
    }

    /// Replaces every pair of `rule.target` factors by `rule.replacement`
    /// until no exponent of the target is two or more.
    fn lower_square(&self, rule: &PowerRule) -> Result<Expr> {
        let mut out = Expr::zero();
        for (m, c) in self.terms() {
            let k = m.exponent(&rule.target);
            if k < 2 {
                out.add_term(m.clone(), c);
                continue;
            }
            let pairs = (k / 2) as usize;
            let rest = m.mul(&Mono::atom_pow(rule.target, -2 * (k / 2)));
            let mut acc = Expr::term(c.clone(), rest);
            for _ in 0..pairs {
                acc = &acc * &rule.replacement;
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Writes the expression as Σ monomial·coefficient over the chosen
    /// atoms, with coefficients free of those atoms.
    pub fn collect(&self, chosen: &[Atom]) -> Result<BTreeMap<Mono, Expr>> {
        let mut out: BTreeMap<Mono, Expr> = BTreeMap::new();
        for (m, c) in self.terms() {
            let (inside, outside) = m.split(chosen);
            if inside.factors().iter().any(|&(_, e)| e < 0) {
                return Err(Error::NonPolynomial(format!(
                    "negative power of a collection atom in {}",
                    m.factors()
                        .iter()
                        .map(|(a, e)| format!("{a}^{e}"))
                        .collect::<Vec<_>>()
                        .join("*")
                )));
            }
            out.entry(inside)
                .or_insert_with(Expr::zero)
                .add_term(outside, c);
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }
}

/// One oriented rewrite: FunApp(name, coord, order) → expression in strictly
/// lower orders of that function (other functions unrestricted).
#[derive(Clone, Debug)]
pub struct ReductionRule {
    target: FunAtom,
    replacement: Expr,
}

impl ReductionRule {
    pub fn new(name: &str, coord: Coord, order: u16, replacement: Expr) -> Result<ReductionRule> {
        let target = match coord {
            Coord::X => FunAtom { name: Sym::new(name), dep: Dep::X, dx: order, dy: 0 },
            Coord::Y => FunAtom { name: Sym::new(name), dep: Dep::Y, dx: 0, dy: order },
        };
        if let Some(max) = replacement.max_fun_order(target.name) {
            if max >= order {
                return Err(Error::BadRule(format!(
                    "replacement for {name}^({order}) contains order {max} of {name}"
                )));
            }
        }
        Ok(ReductionRule { target, replacement })
    }

    pub fn name(&self) -> Sym {
        self.target.name
    }

    pub fn dep(&self) -> Dep {
        self.target.dep
    }

    pub fn coord(&self) -> Coord {
        match self.target.dep {
            Dep::X => Coord::X,
            Dep::Y => Coord::Y,
            Dep::XY => unreachable!("rules are univariate"),
        }
    }

    pub fn order(&self) -> u16 {
        self.target.order()
    }

    pub fn replacement(&self) -> &Expr {
        &self.replacement
    }

    /// Replacement for order `k ≥ target order`, obtained by differentiating
    /// the rule k − order times and re-reducing the result so it only
    /// contains orders below the target.
    pub fn derived_replacement(&self, k: u16) -> Result<Expr> {
        let mut rep = self.replacement.clone();
        for _ in self.order()..k {
            rep = rep.diff(self.coord());
            // Differentiation can raise an order back to the target; push it
            // down again with the rule itself before continuing.
            let t = Atom::Fun(self.target);
            if rep.contains_atom(&t) {
                rep = rep.substitute1(t, &self.replacement)?;
            }
        }
        Ok(rep)
    }
}

/// One oriented square rewrite: `target² → expression` of degree at most one
/// in the target, used for first integrals such as `(℘')² = 4℘³ − g₁℘ − g₂`
/// and for sign constants with `ε² = 1`.
#[derive(Clone, Debug)]
pub struct PowerRule {
    target: Atom,
    replacement: Expr,
}

impl PowerRule {
    pub fn new(target: Atom, replacement: Expr) -> Result<PowerRule> {
        if replacement.degree_in(&target) > 1 {
            return Err(Error::BadRule(format!(
                "square replacement for {target} is not of lower degree"
            )));
        }
        Ok(PowerRule { target, replacement })
    }

    pub fn target(&self) -> &Atom {
        &self.target
    }

    pub fn replacement(&self) -> &Expr {
        &self.replacement
    }
}

/// Finite set of reduction rules, at most one per function name.
#[derive(Clone, Debug, Default)]
pub struct RuleSet {
    rules: BTreeMap<Sym, ReductionRule>,
    powers: Vec<PowerRule>,
}

impl RuleSet {
    pub fn new() -> RuleSet {
        RuleSet::default()
    }

    pub fn insert(&mut self, rule: ReductionRule) -> Result<()> {
        let name = rule.name();
        if self.rules.contains_key(&name) {
            return Err(Error::BadRule(format!("duplicate rule for {name}")));
        }
        self.rules.insert(name, rule);
        Ok(())
    }

    pub fn with(mut self, rule: ReductionRule) -> RuleSet {
        self.insert(rule).expect("duplicate rule");
        self
    }

    pub fn get(&self, name: Sym) -> Option<&ReductionRule> {
        self.rules.get(&name)
    }

    pub fn insert_power(&mut self, rule: PowerRule) {
        self.powers.push(rule);
    }

    pub fn with_power(mut self, rule: PowerRule) -> RuleSet {
        self.insert_power(rule);
        self
    }

    pub fn powers(&self) -> &[PowerRule] {
        &self.powers
    }

    pub fn iter(&self) -> impl Iterator<Item = &ReductionRule> {
        self.rules.values()
    }

    pub fn merged(&self, other: &RuleSet) -> Result<RuleSet> {
        let mut out = self.clone();
        for r in other.iter() {
            out.insert(r.clone())?;
        }
        for p in other.powers() {
            out.insert_power(p.clone());
        }
        Ok(out)
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty() && self.powers.is_empty()
    }
}
