//! Built-in quivers, potentials and relative pairs used by the test
//! batteries and the CLI.

use crate::error::{Error, Result};
use crate::poly::{Alphabet, NCPolynomial, Path, Potential};
use crate::quiver::Quiver;

/// Jordan quiver: one vertex, one loop `x`.
pub fn s1() -> Quiver {
    Quiver::new(vec!["1".into()], vec![("x".into(), "1".into(), "1".into())]).unwrap()
}

/// One vertex, two loops `x`, `y`.
pub fn s2() -> Quiver {
    Quiver::new(
        vec!["1".into()],
        vec![
            ("x".into(), "1".into(), "1".into()),
            ("y".into(), "1".into(), "1".into()),
        ],
    )
    .unwrap()
}

/// One vertex, three loops `x`, `y`, `z`.
pub fn s3() -> Quiver {
    Quiver::new(
        vec!["1".into()],
        vec![
            ("x".into(), "1".into(), "1".into()),
            ("y".into(), "1".into(), "1".into()),
            ("z".into(), "1".into(), "1".into()),
        ],
    )
    .unwrap()
}

/// Cyclic triangle: vertices 1,2,3 with `a: 1→2`, `b: 2→3`, `c: 3→1`.
pub fn a2tilde() -> Quiver {
    Quiver::new(
        vec!["1".into(), "2".into(), "3".into()],
        vec![
            ("a".into(), "1".into(), "2".into()),
            ("b".into(), "2".into(), "3".into()),
            ("c".into(), "3".into(), "1".into()),
        ],
    )
    .unwrap()
}

/// The A2 subquiver of `a2tilde`: vertices 1,2 and the single edge `a`.
pub fn a2() -> Quiver {
    Quiver::new(
        vec!["1".into(), "2".into()],
        vec![("a".into(), "1".into(), "2".into())],
    )
    .unwrap()
}

/// `W = abc` on `a2tilde`; returns the polynomial and its alphabet.
pub fn potential_abc() -> (NCPolynomial, Alphabet) {
    let q = a2tilde();
    let al = Alphabet::from_quiver(&q);
    let p = NCPolynomial::from_path(Path::from_edges(&al, vec![0, 1, 2]).unwrap());
    (p, al)
}

/// `W = [x,y]z = xyz − yxz` on `s3`.
pub fn potential_xyz_commutator() -> (NCPolynomial, Alphabet) {
    let q = s3();
    let al = Alphabet::from_quiver(&q);
    let mut p = NCPolynomial::from_path(Path::from_edges(&al, vec![0, 1, 2]).unwrap());
    p.add_term(
        Path::from_edges(&al, vec![1, 0, 2]).unwrap(),
        crate::scalar::rat_int(-1),
    );
    (p, al)
}

/// Named quiver lookup for the CLI and tests.
pub fn builtin_quiver(name: &str) -> Result<Quiver> {
    match name {
        "s1" => Ok(s1()),
        "s2" => Ok(s2()),
        "s3" => Ok(s3()),
        "a2" => Ok(a2()),
        "a2tilde" => Ok(a2tilde()),
        "s1-plus" => s1().frame(),
        "s2-plus" => s2().frame(),
        "s3-plus" => s3().frame(),
        _ => Err(Error::Parse(format!("unknown builtin quiver `{name}`"))),
    }
}

/// Named subquiver pairs `(D, Q)` for the relative constructions.
pub fn builtin_pair(name: &str) -> Result<(Quiver, Quiver)> {
    match name {
        "a2-in-a2tilde" => Ok((a2(), a2tilde())),
        "s1-in-s3" => Ok((s1(), s3())),
        "s1p-in-s3p" => {
            let d = s1().frame()?;
            let q = s3().frame()?;
            Ok((d, q))
        }
        _ => Err(Error::Parse(format!("unknown builtin pair `{name}`"))),
    }
}

/// Named potential on a given quiver. `zero` works everywhere; `abc` needs
/// the edges a,b,c forming a cycle; `xyz-commutator` needs loops x,y,z.
pub fn builtin_potential(name: &str, quiver: &Quiver) -> Result<Potential> {
    let al = Alphabet::from_quiver(quiver);
    match name {
        "zero" => Ok(Potential::zero()),
        "abc" => {
            let a = al.symbol_index("a")?;
            let b = al.symbol_index("b")?;
            let c = al.symbol_index("c")?;
            let p = NCPolynomial::from_path(Path::from_edges(&al, vec![a, b, c])?);
            Potential::new(&al, p)
        }
        "xyz-commutator" => {
            let x = al.symbol_index("x")?;
            let y = al.symbol_index("y")?;
            let z = al.symbol_index("z")?;
            let mut p = NCPolynomial::from_path(Path::from_edges(&al, vec![x, y, z])?);
            p.add_term(
                Path::from_edges(&al, vec![y, x, z])?,
                crate::scalar::rat_int(-1),
            );
            Potential::new(&al, p)
        }
        _ => Err(Error::Parse(format!("unknown builtin potential `{name}`"))),
    }
}

/// The dg-integrity corpus: every presentation the acceptance gate checks.
/// Returns (label, presentation) pairs.
pub fn dg_corpus() -> Vec<(String, crate::dg::DgPresentation)> {
    use crate::dg;
    let mut out = Vec::new();
    let absolutes = ["s1", "s2", "s3", "a2tilde", "s1-plus", "s3-plus"];
    for name in absolutes {
        let q = builtin_quiver(name).unwrap();
        out.push((format!("G2({name})"), dg::ginzburg2(&q).unwrap()));
        out.push((
            format!("G3({name},0)"),
            dg::ginzburg3(&q, &Potential::zero()).unwrap(),
        ));
    }
    for (qname, wname) in [("a2tilde", "abc"), ("s3", "xyz-commutator"), ("s3-plus", "xyz-commutator")] {
        let q = builtin_quiver(qname).unwrap();
        let w = builtin_potential(wname, &q).unwrap();
        out.push((
            format!("G3({qname},{wname})"),
            dg::ginzburg3(&q, &w).unwrap(),
        ));
    }
    for pair in ["a2-in-a2tilde", "s1-in-s3", "s1p-in-s3p"] {
        let (d, q) = builtin_pair(pair).unwrap();
        out.push((
            format!("G2rel({pair})"),
            dg::relative_ginzburg2(&d, &q).unwrap(),
        ));
        out.push((
            format!("G3rel({pair},0)"),
            dg::relative_ginzburg3(&q, &d, &Potential::zero()).unwrap(),
        ));
        let wname = match pair {
            "a2-in-a2tilde" => "abc",
            _ => "xyz-commutator",
        };
        let w = builtin_potential(wname, &q).unwrap();
        out.push((
            format!("G3rel({pair},{wname})"),
            dg::relative_ginzburg3(&q, &d, &w).unwrap(),
        ));
    }
    out
}

/// Quivers whose potentials feed the random cyclic-identity battery.
pub fn potential_corpus() -> Vec<(String, Quiver)> {
    ["s1", "s2", "s3", "a2tilde", "s1-plus", "s3-plus"]
        .iter()
        .map(|n| (n.to_string(), builtin_quiver(n).unwrap()))
        .collect()
}
