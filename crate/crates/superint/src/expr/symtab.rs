//! Registry of named constants with optional exact rational bindings, plus
//! declarations of the abstract functions in play.

use num_rational::BigRational;
use std::collections::BTreeMap;

use super::atom::{Atom, Dep};
use super::Expr;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    constants: BTreeMap<String, Option<BigRational>>,
    functions: BTreeMap<String, Dep>,
}

impl SymbolTable {
    pub fn new() -> SymbolTable {
        SymbolTable::default()
    }

    /// All named constants of the derivation: the 21 leading-coefficient
    /// constants A_ijk (i+j+k = 5), the integration constants C, K, K̂, D, D̂,
    /// and the parameters of the nonlinear ODEs and transcendents.
    pub fn standard() -> SymbolTable {
        let mut t = SymbolTable::new();
        for i in 0..=5u32 {
            for j in 0..=(5 - i) {
                let k = 5 - i - j;
                t.register(&format!("A{}{}{}", i, j, k));
            }
        }
        for n in 1..=23 {
            t.register(&format!("C{}", n));
        }
        for n in 1..=3 {
            t.register(&format!("K{}", n));
            t.register(&format!("Khat{}", n));
            t.register(&format!("D{}", n));
            t.register(&format!("Dhat{}", n));
        }
        for name in [
            "kappa", "Ktilde", "K", "g1", "g2", "ghat1", "ghat2", "alpha", "alpha1", "alphahat",
            "beta", "betahat", "gamma", "gammahat", "delta", "deltahat", "mu", "muhat", "lambda",
            "omega", "omegahat", "epsilon1", "epsilon2", "B1", "B2", "Bhat1", "Bhat2", "eps",
        ] {
            t.register(name);
        }
        t
    }

    pub fn register(&mut self, name: &str) {
        self.constants.entry(name.to_string()).or_insert(None);
    }

    pub fn declare_function(&mut self, name: &str, dep: Dep) {
        self.functions.insert(name.to_string(), dep);
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.contains_key(name)
    }

    pub fn is_function(&self, name: &str) -> bool {
        self.functions.contains_key(name)
    }

    pub fn bind(&mut self, name: &str, value: BigRational) -> Result<()> {
        match self.constants.get_mut(name) {
            Some(slot) => {
                *slot = Some(value);
                Ok(())
            }
            None => Err(Error::InvalidInput(format!("unknown constant {name}"))),
        }
    }

    pub fn binding(&self, name: &str) -> Option<&BigRational> {
        self.constants.get(name).and_then(|b| b.as_ref())
    }

    pub fn constants(&self) -> impl Iterator<Item = (&String, &Option<BigRational>)> {
        self.constants.iter()
    }

    /// Substitution map carrying every bound constant to its exact value.
    pub fn bindings(&self) -> BTreeMap<Atom, Expr> {
        self.constants
            .iter()
            .filter_map(|(name, b)| {
                b.as_ref()
                    .map(|r| (Atom::constant(name), Expr::from_rational(r.clone())))
            })
            .collect()
    }

    /// Applies all bound constants to an expression.
    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        e.substitute(&self.bindings())
    }
}
