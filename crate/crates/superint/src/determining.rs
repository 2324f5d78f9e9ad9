//! Regeneration of the fifth-order determining system for a 2D Hamiltonian
//! `H = p1² + p2² + V(x,y)`.
//!
//! The pipeline builds the generic fifth-order operator
//! `X = ½ Σ_{l=0..2} Σ_{j=0..5-2l} {f_{j,2l}, p1^j p2^{5-2l-j}}`,
//! extracts the coefficients `M_{i,j}` of `[H, X]`, and organizes them:
//!
//! * the seven slots with `i+j = 6` are the Killing equations for the
//!   leading coefficients `f_{j,0}`, solved in closed form by
//!   [`killing_solution`];
//! * the five slots with `i+j = 4` give the equations `D1..D5`;
//! * the three slots with `i+j = 2`, after eliminating derivatives of the
//!   `f_{j,2}` through `D1..D5`, give `D6..D8`;
//! * the `(0,0)` slot, after eliminating derivatives of the `f_{j,4}`
//!   through `D6..D8`, gives `D9`.
//!
//! Cross-derivative combinations of `D1..D5` (resp. `D6..D8`) eliminate the
//! auxiliary functions entirely and yield the linear (resp. nonlinear)
//! compatibility PDE for the potential.  Specializing `V = V1(x) + V2(y)`
//! and collecting powers reduces the linear compatibility condition to four
//! seventh-order linear ODEs.

use crate::error::{Error, Result};
use crate::expr::atom::{Atom, Coord, Dep, Sym};
use crate::expr::{Expr, GRat, Mono, SymbolTable};
use crate::opalg::{DeterminingSystem, OperatorPoly};

/// Names of the leading coefficients `f_{j,0}`, indexed by `j`.
pub const LEADING_NAMES: [&str; 6] = ["f00", "f10", "f20", "f30", "f40", "f50"];
/// Names of the middle coefficients `f_{j,2}`, indexed by `j`.
pub const MIDDLE_NAMES: [&str; 4] = ["f02", "f12", "f22", "f32"];
/// Names of the lowest coefficients `f_{j,4}`, indexed by `j`.
pub const LOWEST_NAMES: [&str; 2] = ["f04", "f14"];
/// Name of the abstract potential.
pub const POTENTIAL_NAME: &str = "V";

/// Display labels for the nine determining equations.
pub const EQUATION_LABELS: [&str; 9] = ["D1", "D2", "D3", "D4", "D5", "D6", "D7", "D8", "D9"];

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut acc = 1i64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The six leading coefficients `f_{0,0}..f_{5,0}` of a fifth-order integral.
#[derive(Debug, Clone)]
pub struct KillingSolution {
    f: [Expr; 6],
}

impl KillingSolution {
    /// The coefficient `f_{j,0}`.
    pub fn f(&self, j: usize) -> &Expr {
        &self.f[j]
    }

    /// All six coefficients, indexed by `j`.
    pub fn all(&self) -> &[Expr; 6] {
        &self.f
    }

    /// Leading coefficients left as six abstract bivariate functions.
    pub fn abstract_form() -> Self {
        let f = std::array::from_fn(|j| Expr::fun_xy(LEADING_NAMES[j], 0, 0));
        KillingSolution { f }
    }

    /// Assemble a solution from six explicit coefficient expressions.
    pub fn from_parts(f: [Expr; 6]) -> Self {
        KillingSolution { f }
    }
}

/// Closed-form general solution of the Killing equations
/// `∂x f_{j-1,0} + ∂y f_{j,0} = 0`: polynomials of total degree ≤ 5 in
/// `x, y` whose coefficients are the 21 free constants `A_{ijk}`
/// (`i + j + k = 5`).
pub fn killing_solution(table: &SymbolTable) -> Result<KillingSolution> {
    let mut f = Vec::with_capacity(6);
    for j in 0..6i64 {
        let mut acc = Expr::zero();
        for n in 0..=(5 - j) {
            for m in 0..=j {
                let c = binom(5 - n - m, j - m);
                if c == 0 {
                    continue;
                }
                let name = format!("A{}{}{}", 5 - n - m, m, n);
                let sign = if (j - m) % 2 == 0 { 1 } else { -1 };
                let term = Expr::int(c * sign)
                    * Expr::x().powi((5 - j - n) as i32)
                    * Expr::y().powi((j - m) as i32)
                    * Expr::constant(&name);
                acc = acc + term;
            }
        }
        f.push(table.apply(&acc)?);
    }
    let f: [Expr; 6] = f.try_into().expect("six leading coefficients");
    Ok(KillingSolution { f })
}

/// The abstract potential `V(x,y)` as an expression atom.
pub fn potential() -> Expr {
    Expr::fun_xy(POTENTIAL_NAME, 0, 0)
}

/// `H = p1² + p2² + V` for a supplied potential expression.
pub fn hamiltonian(v: &Expr) -> OperatorPoly {
    free_hamiltonian().add(&OperatorPoly::from_expr(v.clone()))
}

/// The free part `p1² + p2²`.
pub fn free_hamiltonian() -> OperatorPoly {
    OperatorPoly::monomial(Expr::one(), 2, 0).add(&OperatorPoly::monomial(Expr::one(), 0, 2))
}

/// The generic fifth-order candidate integral
/// `X = ½ Σ_{l=0..2} Σ_j {f_{j,2l}, p1^j p2^{5-2l-j}}` with the supplied
/// leading coefficients and abstract `f_{j,2}`, `f_{j,4}`.
pub fn integral_x(leading: &KillingSolution) -> OperatorPoly {
    let mut x = OperatorPoly::zero();
    for j in 0..=5u16 {
        x = x.add(&OperatorPoly::symmetrize(
            leading.f(j as usize),
            j,
            5 - j,
        ));
    }
    for j in 0..=3u16 {
        let f = Expr::fun_xy(MIDDLE_NAMES[j as usize], 0, 0);
        x = x.add(&OperatorPoly::symmetrize(&f, j, 3 - j));
    }
    for j in 0..=1u16 {
        let f = Expr::fun_xy(LOWEST_NAMES[j as usize], 0, 0);
        x = x.add(&OperatorPoly::symmetrize(&f, j, 1 - j));
    }
    x
}

/// Coefficient of `atom` in the part of `eq` that is linear in `atom`,
/// which must be a single term (a rational times a power product).
fn linear_coefficient(eq: &Expr, atom: Atom) -> Result<Expr> {
    let parts = eq.collect(&[atom])?;
    match parts.get(&Mono::atom(atom)) {
        Some(c) if c.as_single_term().is_some() => Ok(c.clone()),
        Some(c) => Err(Error::InvalidInput(format!(
            "coefficient of {atom} is not a single term: {c}"
        ))),
        None => Err(Error::InvalidInput(format!("no linear term in {atom}"))),
    }
}

/// Rescale `eq` so that the linear term in `atom` has coefficient 1.
fn monic_in(eq: &Expr, atom: Atom) -> Result<Expr> {
    let c = linear_coefficient(eq, atom)?;
    eq.div_mono(&c)
}

fn fun_atom_xy(name: &str, dx: u16, dy: u16) -> Atom {
    Atom::fun_xy(name, dx, dy)
}

/// True when `m` is `ħ^k` times a single first-power derivative atom of one
/// of the named functions: the monomials targeted for exact cancellation.
fn is_bare_derivative(m: &Mono, names: &[&str]) -> bool {
    let mut seen = false;
    for &(a, e) in m.factors() {
        match a {
            Atom::Hbar => {}
            Atom::Fun(fa)
                if e == 1
                    && !seen
                    && fa.dep == Dep::XY
                    && (fa.dx, fa.dy) != (0, 0)
                    && names.contains(&fa.name.as_str()) =>
            {
                seen = true;
            }
            _ => return false,
        }
    }
    seen
}

/// One family of correction rows: `ħ^boost · ∂x^a ∂y^b eq` for every
/// derivative multi-index of total order at most `max_diff`.
struct RowFamily<'a> {
    equations: &'a [Expr],
    max_diff: u32,
    hbar_boost: i32,
}

/// Solve `A·λ = b` exactly over the rationals, returning a particular
/// solution with every free variable set to zero.
fn solve_exact(a: &[Vec<GRat>], b: &[GRat], nvars: usize) -> Result<Vec<GRat>> {
    let neq = a.len();
    let mut m: Vec<Vec<GRat>> = (0..neq)
        .map(|r| {
            let mut row = a[r].clone();
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut pivot_of: Vec<Option<usize>> = vec![None; nvars];
    let mut rank_row = 0usize;
    for col in 0..nvars {
        let Some(p) = (rank_row..neq).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank_row, p);
        let inv = m[rank_row][col].inv();
        for v in m[rank_row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..neq {
            if r != rank_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=nvars {
                    let delta = &factor * &m[rank_row][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        pivot_of[col] = Some(rank_row);
        rank_row += 1;
        if rank_row == neq {
            break;
        }
    }
    for r in rank_row..neq {
        if !m[r][nvars].is_zero() {
            return Err(Error::Other("inconsistent cancellation system".into()));
        }
    }
    let mut sol = vec![GRat::zero(); nvars];
    for (col, p) in pivot_of.iter().enumerate() {
        if let Some(r) = p {
            sol[col] = m[*r][nvars].clone();
        }
    }
    Ok(sol)
}

/// Remove every `ħ^k·∂f` monomial of the named functions from `expr` by
/// adding the unique exact rational combination of the supplied correction
/// rows.  Fails if no combination cancels them all.
fn cancel_derivatives(expr: &Expr, families: &[RowFamily], names: &[&str]) -> Result<Expr> {
    let mut rows: Vec<Expr> = Vec::new();
    for fam in families {
        for eq in fam.equations {
            for ax in 0..=fam.max_diff {
                for ay in 0..=(fam.max_diff - ax) {
                    let mut d = eq.diff_n(Coord::X, ax).diff_n(Coord::Y, ay);
                    if fam.hbar_boost > 0 {
                        d = &d * &Expr::term(GRat::one(), Mono::atom_pow(Atom::Hbar, fam.hbar_boost));
                    }
                    rows.push(d);
                }
            }
        }
    }
    let mut cols: std::collections::BTreeMap<Mono, usize> = std::collections::BTreeMap::new();
    let note = |e: &Expr, cols: &mut std::collections::BTreeMap<Mono, usize>| {
        for (m, _) in e.terms() {
            if is_bare_derivative(m, names) && !cols.contains_key(m) {
                let next = cols.len();
                cols.insert(m.clone(), next);
            }
        }
    };
    note(expr, &mut cols);
    for r in &rows {
        note(r, &mut cols);
    }
    if cols.is_empty() {
        return Ok(expr.clone());
    }
    let ncols = cols.len();
    let coords = |e: &Expr| -> Vec<GRat> {
        let mut v = vec![GRat::zero(); ncols];
        for (m, c) in e.terms() {
            if let Some(&i) = cols.get(m) {
                v[i] = c.clone();
            }
        }
        v
    };
    // One linear equation per column: Σ_r λ_r·row_r[col] = −expr[col].
    let mut a = vec![vec![GRat::zero(); rows.len()]; ncols];
    for (r, row) in rows.iter().enumerate() {
        for (i, c) in coords(row).into_iter().enumerate() {
            a[i][r] = c;
        }
    }
    let b: Vec<GRat> = coords(expr)
        .into_iter()
        .map(|c| &GRat::zero() - &c)
        .collect();
    let lambda = solve_exact(&a, &b, rows.len())?;
    let mut out = expr.clone();
    for (r, l) in lambda.iter().enumerate() {
        if !l.is_zero() {
            out = &out + &rows[r].scale(l);
        }
    }
    for (m, _) in out.terms() {
        if is_bare_derivative(m, names) {
            return Err(Error::Other(format!(
                "cancellation left a residual derivative term {m:?}"
            )));
        }
    }
    Ok(out)
}

/// The determining system of a fifth-order integral, organized by slot
/// parity and reduced to the nine canonical equations.
#[derive(Debug, Clone)]
pub struct DeterminingOutput {
    /// Every nonzero `M_{i,j}` of `[H, X]`, keyed by `(i, j)`.
    pub raw: DeterminingSystem,
    /// The seven `i+j = 6` equations, scaled so the first term is the bare
    /// gradient pairing of adjacent leading coefficients.
    pub killing: Vec<((u16, u16), Expr)>,
    /// `D1..D9` in solved normal form (`0 = eq`): each of `D1..D8` carries
    /// its lead derivative with coefficient 1; `D9` is scaled so the
    /// `f04·V_y` monomial has coefficient 2.
    pub nine: [Expr; 9],
}

/// Lead derivative atoms for `D1..D8`, in order.
fn lead_atoms() -> [Atom; 8] {
    [
        fun_atom_xy("f02", 0, 1),
        fun_atom_xy("f12", 0, 1),
        fun_atom_xy("f22", 0, 1),
        fun_atom_xy("f32", 0, 1),
        fun_atom_xy("f32", 1, 0),
        fun_atom_xy("f04", 0, 1),
        fun_atom_xy("f14", 0, 1),
        fun_atom_xy("f14", 1, 0),
    ]
}

/// Run the full derivation for the supplied leading coefficients (either
/// [`killing_solution`] output or [`KillingSolution::abstract_form`]).
pub fn derive(leading: &KillingSolution) -> Result<DeterminingOutput> {
    let h = hamiltonian(&potential());
    let x = integral_x(leading);
    let raw = h.commutator(&x).extract_m()?;

    let mut killing = Vec::new();
    for i in 0..=6u16 {
        let slot = (i, 6 - i);
        let eq = raw.get(slot.0, slot.1);
        if eq.is_zero() {
            killing.push((slot, eq));
            continue;
        }
        // Slot value is −2ħ⁶ × (∂x f_{i−1,0} + ∂y f_{i,0}); strip the scale.
        let divisor = Expr::term(GRat::from_int(-2), Mono::atom_pow(Atom::Hbar, 6));
        killing.push((slot, eq.div_mono(&divisor)?));
    }

    let leads = lead_atoms();
    let slot4 = [(0u16, 4u16), (1, 3), (2, 2), (3, 1), (4, 0)];
    let mut nine: Vec<Expr> = Vec::with_capacity(9);
    for (k, slot) in slot4.iter().enumerate() {
        let eq = raw.get(slot.0, slot.1);
        nine.push(monic_in(&eq, leads[k])?);
    }

    let middle_eqs: Vec<Expr> = nine[..5].to_vec();
    let slot2 = [(0u16, 2u16), (1, 1), (2, 0)];
    for (k, slot) in slot2.iter().enumerate() {
        let families = [RowFamily {
            equations: &middle_eqs,
            max_diff: 2,
            hbar_boost: 4,
        }];
        let eq = cancel_derivatives(&raw.get(slot.0, slot.1), &families, &MIDDLE_NAMES)?;
        nine.push(monic_in(&eq, leads[5 + k])?);
    }

    let lowest_eqs: Vec<Expr> = nine[5..8].to_vec();
    let families = [
        RowFamily {
            equations: &lowest_eqs,
            max_diff: 2,
            hbar_boost: 2,
        },
        RowFamily {
            equations: &middle_eqs,
            max_diff: 4,
            hbar_boost: 4,
        },
    ];
    let all_names = ["f02", "f12", "f22", "f32", "f04", "f14"];
    let eq00 = cancel_derivatives(&raw.get(0, 0), &families, &all_names)?;
    // Scale so the f04·V_y monomial carries coefficient 2.
    let probe = Mono::from_factors(vec![
        (fun_atom_xy("f04", 0, 0), 1),
        (fun_atom_xy(POTENTIAL_NAME, 0, 1), 1),
    ]);
    let c = eq00
        .terms()
        .find(|(m, _)| **m == probe)
        .map(|(_, c)| c.clone())
        .ok_or_else(|| Error::Other("lowest-slot equation lacks the f04·V_y term".into()))?;
    let two = GRat::from_int(2);
    nine.push(eq00.scale(&(&two * &c.inv())));

    let nine: [Expr; 9] = nine.try_into().expect("nine equations");
    Ok(DeterminingOutput { raw, killing, nine })
}

impl DeterminingOutput {
    /// `D1..D9` by 1-based label index.
    pub fn equation(&self, n: usize) -> &Expr {
        &self.nine[n - 1]
    }

    /// The linear compatibility PDE for the potential: the alternating
    /// fourth-order cross-derivative combination of `D1..D5` that cancels
    /// every `f_{j,2}`.
    pub fn linear_compatibility(&self) -> Result<Expr> {
        let d = &self.nine;
        let comb = d[0].diff_n(Coord::X, 4)
            - d[1].diff_n(Coord::X, 3).diff(Coord::Y)
            + d[2].diff_n(Coord::X, 2).diff_n(Coord::Y, 2)
            - d[3].diff(Coord::X).diff_n(Coord::Y, 3)
            + d[4].diff_n(Coord::Y, 4);
        let pde = -&comb;
        for name in MIDDLE_NAMES {
            if pde.atoms().iter().any(
                |a| matches!(a, Atom::Fun(fa) if fa.name.as_str() == name),
            ) {
                return Err(Error::Other(format!(
                    "middle coefficient {name} survived the compatibility combination"
                )));
            }
        }
        Ok(pde)
    }

    /// The nonlinear compatibility PDE: the second-order cross-derivative
    /// combination of `D6..D8` that cancels `f04` and `f14`.
    pub fn nonlinear_compatibility(&self) -> Result<Expr> {
        let d = &self.nine;
        let comb = d[5].diff_n(Coord::X, 2)
            - d[6].diff(Coord::X).diff(Coord::Y)
            + d[7].diff_n(Coord::Y, 2);
        let pde = -&comb;
        for name in LOWEST_NAMES {
            if pde.atoms().iter().any(
                |a| matches!(a, Atom::Fun(fa) if fa.name.as_str() == name),
            ) {
                return Err(Error::Other(format!(
                    "lowest coefficient {name} survived the compatibility combination"
                )));
            }
        }
        Ok(pde)
    }
}

/// Substitute a separable potential `V(x,y) = V1(x) + V2(y)` into an
/// expression containing derivatives of the abstract potential.
pub fn separate_potential(e: &Expr) -> Result<Expr> {
    let closed = Expr::fun_x("V1", 0) + Expr::fun_y("V2", 0);
    e.substitute_fn(Sym::new(POTENTIAL_NAME), Dep::XY, &closed)
}

/// The separable form of the linear compatibility PDE: substitute
/// `V = V1(x) + V2(y)`, scaled by four so that the coefficients of
/// `V1^(5)(x)` and `V2^(5)(y)` are `2*f10` and `2*f40`.
pub fn separable_compatibility(linear_compat: &Expr) -> Result<Expr> {
    Ok(separate_potential(linear_compat)?.scale_rat(4, 1))
}

/// The four seventh-order linear ODEs implied by the separable linear
/// compatibility condition: differentiate it twice in one variable and
/// split by powers of the other.  Returned in the order
/// `(x: power 0, x: power 1, y: power 0, y: power 1)`.
pub fn separable_reduction(linear_compat_separable: &Expr) -> Result<[Expr; 4]> {
    let dxx = linear_compat_separable.diff_n(Coord::X, 2);
    let dyy = linear_compat_separable.diff_n(Coord::Y, 2);
    if dxx.degree_in(&Atom::Y) > 1 || dyy.degree_in(&Atom::X) > 1 {
        return Err(Error::Other(
            "separable compatibility did not reduce to degree one in the opposite variable".into(),
        ));
    }
    Ok([
        dxx.coefficient_of(&Atom::Y, 0),
        dxx.coefficient_of(&Atom::Y, 1),
        dyy.coefficient_of(&Atom::X, 0),
        dyy.coefficient_of(&Atom::X, 1),
    ])
}
