use superint::determining::*;
use superint::expr::{render, SymbolTable};

fn main() {
    let which: Vec<String> = std::env::args().skip(1).collect();
    let ks = if which.iter().any(|w| w == "abstract") {
        KillingSolution::abstract_form()
    } else {
        let table = SymbolTable::standard();
        killing_solution(&table).unwrap()
    };
    let out = derive(&ks).unwrap();

    if which.iter().any(|w| w == "fs") {
        for (j, f) in ks.all().iter().enumerate() {
            println!("f{}0: {}", j, render::plain(f));
        }
    }
    if which.iter().any(|w| w == "killing") {
        for (slot, eq) in &out.killing {
            println!("K{:?}: {}", slot, render::plain(eq));
            println!();
        }
    }
    if which.iter().any(|w| w == "hb") {
        use superint::expr::atom::Atom;
        for ((i, j), eq) in out.raw.equations() {
            let mut powers: Vec<i32> = eq.terms().map(|(m, _)| m.exponent(&Atom::Hbar)).collect();
            powers.sort();
            powers.dedup();
            println!("M[{},{}] hbar powers {:?}", i, j, powers);
        }
    }
    if which.iter().any(|w| w == "raw") {
        println!("raw count = {}", out.raw.len());
        for ((i, j), eq) in out.raw.equations() {
            println!("M[{},{}] terms={} atoms={:?}", i, j, eq.num_terms(), ());
        }
    }
    for (tag, slot) in [("m02", (0u16, 2u16)), ("m11", (1, 1)), ("m20", (2, 0)), ("m00", (0, 0))] {
        if which.iter().any(|w| w == tag) {
            let eq = out.raw.get(slot.0, slot.1);
            let fs: Vec<String> = eq
                .atoms()
                .into_iter()
                .filter_map(|a| match a {
                    superint::expr::atom::Atom::Fun(fa)
                        if fa.name.as_str().starts_with('f') && (fa.dx, fa.dy) != (0, 0) =>
                    {
                        Some(format!("{}^({},{})", fa.name.as_str(), fa.dx, fa.dy))
                    }
                    _ => None,
                })
                .collect();
            println!("RAW{:?} f-derivative atoms: {}", slot, fs.join(" "));
            if which.iter().any(|w| w == "full") {
                println!("RAW{:?}: {}", slot, render::plain(&eq));
            } else {
                let mut lines = Vec::new();
                for (m, c) in eq.terms() {
                    let has_fderiv = m.factors().iter().any(|&(a, _)| match a {
                        superint::expr::atom::Atom::Fun(fa) => {
                            fa.name.as_str().starts_with('f') && (fa.dx, fa.dy) != (0, 0)
                        }
                        _ => false,
                    });
                    if has_fderiv {
                        lines.push(format!("  {} * {:?}", c, m));
                    }
                }
                println!("{}", lines.join("\n"));
            }
            println!();
        }
    }
    for n in 1..=9usize {
        if which.iter().any(|w| w == &format!("d{n}")) {
            println!("D{n}: {}", render::plain(out.equation(n)));
            println!();
        }
    }
    if which.iter().any(|w| w == "compat") {
        let c = out.linear_compatibility().unwrap();
        println!("COMPAT2: {}", render::plain(&c));
        println!();
    }
    if which.iter().any(|w| w == "compat3") {
        let c = out.linear_compatibility().unwrap();
        let c3 = separable_compatibility(&c).unwrap();
        println!("COMPAT3: {}", render::plain(&c3));
        println!();
    }
    if which.iter().any(|w| w == "odes") {
        let c = out.linear_compatibility().unwrap();
        let c3 = separable_compatibility(&c).unwrap();
        let odes = separable_reduction(&c3).unwrap();
        for (k, o) in odes.iter().enumerate() {
            println!("ODE[{k}]: {}", render::plain(o));
            println!();
        }
    }
    if which.iter().any(|w| w == "appen") {
        let c = out.nonlinear_compatibility().unwrap();
        println!("APPEN: {}", render::plain(&c));
        println!();
    }

    use superint::exotic;
    if which.iter().any(|w| w == "xleading") {
        let ks = exotic::reduced_leading().unwrap();
        for (j, f) in ks.all().iter().enumerate() {
            println!("f{}0: {}", j, render::plain(f));
        }
    }
    for n in 1..=9usize {
        if which.iter().any(|w| w == &format!("xd{n}")) {
            let nine = exotic::reduced_determining().unwrap();
            println!("D'{n}: {}", render::plain(&nine[n - 1]));
            println!();
        }
    }
    if which.iter().any(|w| w == "xmid") {
        for (k, f) in exotic::middle_coefficients().unwrap().iter().enumerate() {
            println!("mid[{k}]: {}", render::plain(f));
            println!();
        }
    }
    if which.iter().any(|w| w == "xlow") {
        for (k, f) in exotic::lowest_coefficients().unwrap().iter().enumerate() {
            println!("low[{k}]: {}", render::plain(f));
            println!();
        }
    }
    if which.iter().any(|w| w == "xclosure") {
        let rep = exotic::verify_coefficient_closure().unwrap();
        for (label, r) in &rep.residuals {
            println!("{label}: terms={} {}", r.num_terms(), render::plain(r));
        }
        println!();
        println!("middle: {}", render::plain(&rep.middle_condition));
        println!();
        println!("mixed: {}", render::plain(&rep.mixed_condition));
        println!();
    }
    if which.iter().any(|w| w == "xd9c") {
        let e = exotic::primitive_compatibility().unwrap();
        println!("D9'': {}", render::plain(&e));
        println!();
    }
    if which.iter().any(|w| w == "xpc") {
        let e = exotic::potential_condition().unwrap();
        println!("PC: {}", render::plain(&e));
        println!();
    }
    if which.iter().any(|w| w == "xop") {
        let xop = exotic::integral_operator().unwrap();
        for ((i, j), c) in xop.coeffs() {
            println!("X[{},{}] terms={}: {}", i, j, c.num_terms(), render::plain(c));
        }
    }
}
