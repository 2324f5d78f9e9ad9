//! Atoms: the indeterminates of the expression kernel, with the fixed
//! canonical order x < y < ħ < named constants (alphabetical) < function
//! applications by (name, dependence, derivative orders).

use once_cell::sync::Lazy;
use std::collections::HashSet;
use std::fmt;
use std::sync::Mutex;

/// Interned immutable identifier. Ordering is alphabetical on the name.
#[derive(Copy, Clone)]
pub struct Sym(&'static str);

static INTERNER: Lazy<Mutex<HashSet<&'static str>>> = Lazy::new(|| Mutex::new(HashSet::new()));

impl Sym {
    pub fn new(name: &str) -> Sym {
        let mut set = INTERNER.lock().unwrap();
        if let Some(s) = set.get(name) {
            return Sym(s);
        }
        let s: &'static str = Box::leak(name.to_owned().into_boxed_str());
        set.insert(s);
        Sym(s)
    }

    pub fn as_str(&self) -> &'static str {
        self.0
    }
}

impl PartialEq for Sym {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0) || self.0 == other.0
    }
}
impl Eq for Sym {}

impl PartialOrd for Sym {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Sym {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp(other.0)
    }
}

impl std::hash::Hash for Sym {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Coord {
    X,
    Y,
}

impl Coord {
    pub fn other(self) -> Coord {
        match self {
            Coord::X => Coord::Y,
            Coord::Y => Coord::X,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Coord::X => "x",
            Coord::Y => "y",
        }
    }
}

/// Declared coordinate dependence of an abstract function.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Dep {
    X,
    Y,
    XY,
}

/// Abstract function application ∂x^dx ∂y^dy f. Univariate functions
/// (dep X or Y) keep the other derivative order pinned to zero.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FunAtom {
    pub name: Sym,
    pub dep: Dep,
    pub dx: u16,
    pub dy: u16,
}

impl FunAtom {
    pub fn total_order(&self) -> u32 {
        self.dx as u32 + self.dy as u32
    }

    /// The single derivative order of a univariate function.
    pub fn order(&self) -> u16 {
        match self.dep {
            Dep::X => self.dx,
            Dep::Y => self.dy,
            Dep::XY => panic!("order() on a bivariate function atom"),
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    X,
    Y,
    Hbar,
    Const(Sym),
    Fun(FunAtom),
}

impl Atom {
    pub fn constant(name: &str) -> Atom {
        Atom::Const(Sym::new(name))
    }

    pub fn fun_x(name: &str, order: u16) -> Atom {
        Atom::Fun(FunAtom { name: Sym::new(name), dep: Dep::X, dx: order, dy: 0 })
    }

    pub fn fun_y(name: &str, order: u16) -> Atom {
        Atom::Fun(FunAtom { name: Sym::new(name), dep: Dep::Y, dx: 0, dy: order })
    }

    pub fn fun_on(name: &str, coord: Coord, order: u16) -> Atom {
        match coord {
            Coord::X => Atom::fun_x(name, order),
            Coord::Y => Atom::fun_y(name, order),
        }
    }

    pub fn fun_xy(name: &str, dx: u16, dy: u16) -> Atom {
        Atom::Fun(FunAtom { name: Sym::new(name), dep: Dep::XY, dx, dy })
    }
}

fn fmt_orders(fa: &FunAtom, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match fa.dep {
        Dep::X | Dep::Y => {
            let (k, arg) = if fa.dep == Dep::X { (fa.dx, "x") } else { (fa.dy, "y") };
            match k {
                0 => write!(f, "{}({})", fa.name, arg),
                1..=3 => write!(f, "{}{}({})", fa.name, "'".repeat(k as usize), arg),
                _ => write!(f, "{}^({})({})", fa.name, k, arg),
            }
        }
        Dep::XY => {
            if fa.dx == 0 && fa.dy == 0 {
                write!(f, "{}(x,y)", fa.name)
            } else {
                write!(f, "{}^({},{})(x,y)", fa.name, fa.dx, fa.dy)
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::X => f.write_str("x"),
            Atom::Y => f.write_str("y"),
            Atom::Hbar => f.write_str("hbar"),
            Atom::Const(s) => write!(f, "{}", s),
            Atom::Fun(fa) => fmt_orders(fa, f),
        }
    }
}
