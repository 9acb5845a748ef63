//! Graded quiver-algebra presentations with differentials: the Ginzburg
//! completions, their relative variants, the d²-check and H⁰ relations.
//!
//! Sign convention (fixed by requiring d² = 0 on every constructed
//! presentation): d(pq) = d(p)q + (−1)^{deg p} p d(q).

use std::collections::BTreeMap;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Alphabet, NCPolynomial, Path, Potential, SymbolInfo};
use crate::quiver::Quiver;
use crate::scalar::{fmt_rat, parse_rat};

/// A generator of a dg presentation, as stored in its alphabet.
/// Degrees are ≤ 0; degree-0 generators are closed.
pub type GradedGenerator = SymbolInfo;

/// A free graded quiver algebra together with a differential assignment
/// generator → polynomial. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgPresentation {
    alphabet: Alphabet,
    differential: Vec<NCPolynomial>,
}

impl DgPresentation {
    /// Validates degree bookkeeping: d(g) is homogeneous of degree
    /// deg(g) + 1, and d vanishes on degree-0 generators.
    pub fn new(alphabet: Alphabet, differential: Vec<NCPolynomial>) -> Result<Self> {
        if differential.len() != alphabet.symbols.len() {
            return Err(Error::InvalidQuiver(
                "one differential per generator required".into(),
            ));
        }
        for (i, d) in differential.iter().enumerate() {
            let g = alphabet.symbol(i as u32);
            if g.degree > 0 {
                return Err(Error::InvalidQuiver(format!(
                    "generator `{}` has positive degree",
                    g.name
                )));
            }
            if g.degree == 0 && !d.is_zero() {
                return Err(Error::InvalidQuiver(format!(
                    "degree-0 generator `{}` must be closed",
                    g.name
                )));
            }
            if let Some(deg) = d.homogeneous_degree(&alphabet)? {
                if deg != g.degree + 1 {
                    return Err(Error::InvalidQuiver(format!(
                        "d({}) has degree {} instead of {}",
                        g.name,
                        deg,
                        g.degree + 1
                    )));
                }
            }
            if let Some((s, t)) = d.common_endpoints(&alphabet)? {
                if (s, t) != (g.src, g.tgt) {
                    return Err(Error::InvalidQuiver(format!(
                        "d({}) does not respect endpoints",
                        g.name
                    )));
                }
            }
        }
        Ok(DgPresentation {
            alphabet,
            differential,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn generators(&self) -> &[GradedGenerator] {
        &self.alphabet.symbols
    }

    pub fn differential(&self, gen: u32) -> &NCPolynomial {
        &self.differential[gen as usize]
    }

    pub fn generators_of_degree(&self, degree: i32) -> Vec<u32> {
        self.alphabet
            .symbols
            .iter()
            .enumerate()
            .filter(|(_, g)| g.degree == degree)
            .map(|(i, _)| i as u32)
            .collect()
    }

    /// Extends d to a homogeneous polynomial by the graded Leibniz rule.
    pub fn leibniz_extend(&self, p: &NCPolynomial) -> Result<NCPolynomial> {
        p.homogeneous_degree(&self.alphabet)?; // rejects mixed degrees
        let mut out = NCPolynomial::zero();
        for (path, coeff) in p.terms() {
            let letters = path.letters();
            let mut sign_deg = 0i32;
            for (i, &l) in letters.iter().enumerate() {
                let dl = &self.differential[l as usize];
                if !dl.is_zero() {
                    let prefix = if i == 0 {
                        NCPolynomial::from_path(Path::vertex(self.alphabet.symbol(l).src))
                    } else {
                        NCPolynomial::from_path(Path::Word(letters[..i].to_vec()))
                    };
                    let suffix = if i + 1 == letters.len() {
                        NCPolynomial::from_path(Path::vertex(self.alphabet.symbol(l).tgt))
                    } else {
                        NCPolynomial::from_path(Path::Word(letters[i + 1..].to_vec()))
                    };
                    let mut piece = prefix
                        .multiply(dl, &self.alphabet)
                        .multiply(&suffix, &self.alphabet)
                        .scale(coeff);
                    if sign_deg.rem_euclid(2) == 1 {
                        piece = piece.neg();
                    }
                    out = out.add(&piece);
                }
                sign_deg += self.alphabet.symbol(l).degree;
            }
        }
        Ok(out)
    }

    /// Images of the degree-(−1) generators: they generate the relation
    /// ideal of H⁰.
    pub fn h0_relations(&self) -> Result<Vec<NCPolynomial>> {
        if self.alphabet.symbols.iter().any(|g| g.degree > 0) {
            return Err(Error::Precondition(
                "presentation has positive-degree generators".into(),
            ));
        }
        Ok(self
            .generators_of_degree(-1)
            .into_iter()
            .map(|g| self.differential[g as usize].clone())
            .collect())
    }

    /// Degree-(−1) generators that occur linearly (a ±1-coefficient
    /// length-1 term) in the differential of some degree-(−2) generator.
    /// Each such generator is half of a contractible pair, and by d² = 0
    /// its truncation equation is implied by the remaining ones.
    pub fn eliminable_deg_neg1(&self) -> std::collections::BTreeSet<u32> {
        let mut out = std::collections::BTreeSet::new();
        for h in self.generators_of_degree(-2) {
            for (path, coeff) in self.differential[h as usize].terms() {
                if let Path::Word(w) = path {
                    if w.len() == 1
                        && self.alphabet.symbol(w[0]).degree == -1
                        && coeff.abs().is_one()
                    {
                        out.insert(w[0]);
                    }
                }
            }
        }
        out
    }

    /// Text table: generator, degree, endpoints, differential.
    pub fn table(&self) -> String {
        let mut s = String::new();
        s.push_str("generator  degree  src -> tgt  differential\n");
        for (i, g) in self.alphabet.symbols.iter().enumerate() {
            s.push_str(&format!(
                "{:<10} {:>6}  {} -> {}  d = {}\n",
                g.name,
                g.degree,
                self.alphabet.vertex_names[g.src],
                self.alphabet.vertex_names[g.tgt],
                self.differential[i].to_string(&self.alphabet)
            ));
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

fn check_fresh(names: &mut std::collections::BTreeSet<String>, name: &str) -> Result<()> {
    if !names.insert(name.to_string()) {
        return Err(Error::IdCollision(format!(
            "generator name `{name}` collides"
        )));
    }
    Ok(())
}

/// Σ_{e ∈ edges} e_v (e e♯ − e♯ e) e_v as a polynomial over `alphabet`,
/// where `pairs` lists (index of e, index of e♯).
fn moment_element(alphabet: &Alphabet, pairs: &[(u32, u32)], v: usize) -> NCPolynomial {
    let mut acc = NCPolynomial::zero();
    for &(e, es) in pairs {
        let fwd = NCPolynomial::from_path(Path::Word(vec![e]));
        let bwd = NCPolynomial::from_path(Path::Word(vec![es]));
        acc = acc.add(&fwd.commutator(&bwd, alphabet));
    }
    acc.localize(v, alphabet)
}

/// 𝒢₂ of a quiver: the doubled edges in degree 0, one degree-(−1) loop
/// `x_v` per vertex, and d(x_v) = Σ_e e_v(ee* − e*e)e_v.
///
/// H⁰ is the preprojective algebra of `Q`.
pub fn ginzburg2(q: &Quiver) -> Result<DgPresentation> {
    let doubled = q.double()?;
    let mut alphabet = Alphabet::from_quiver(&doubled);
    let mut names: std::collections::BTreeSet<String> =
        alphabet.symbols.iter().map(|s| s.name.clone()).collect();
    let n_edges = alphabet.symbols.len();
    for (v, name) in q.vertices().iter().enumerate() {
        let gname = format!("x_{name}");
        check_fresh(&mut names, &gname)?;
        alphabet.symbols.push(SymbolInfo {
            name: gname,
            src: v,
            tgt: v,
            degree: -1,
        });
    }
    let pairs: Vec<(u32, u32)> = (0..q.edge_count())
        .map(|i| (i as u32, (i + q.edge_count()) as u32))
        .collect();
    let mut differential = vec![NCPolynomial::zero(); n_edges];
    for v in 0..q.vertex_count() {
        differential.push(moment_element(&alphabet, &pairs, v));
    }
    DgPresentation::new(alphabet, differential)
}

/// 𝒢₃ of a quiver with potential: edges in degree 0, reversed generators
/// `e'` in degree −1 with d(e') = ∂_eW, and degree-(−2) loops `x_v'` with
/// d(x_v') = Σ_e e_v(ee' − e'e)e_v.
pub fn ginzburg3(q: &Quiver, w: &Potential) -> Result<DgPresentation> {
    let base = Alphabet::from_quiver(q);
    for (p, _) in w.poly().terms() {
        for &l in p.letters() {
            if l as usize >= base.symbols.len() {
                return Err(Error::NotAPotential("potential uses unknown edges".into()));
            }
        }
    }
    let mut alphabet = base.clone();
    let mut names: std::collections::BTreeSet<String> =
        alphabet.symbols.iter().map(|s| s.name.clone()).collect();
    let n_edges = q.edge_count();
    for e in q.edges() {
        let gname = format!("{}{}", e.id, crate::quiver::PRIME);
        check_fresh(&mut names, &gname)?;
        alphabet.symbols.push(SymbolInfo {
            name: gname,
            src: e.tgt,
            tgt: e.src,
            degree: -1,
        });
    }
    for (v, name) in q.vertices().iter().enumerate() {
        let gname = format!("x_{name}{}", crate::quiver::PRIME);
        check_fresh(&mut names, &gname)?;
        alphabet.symbols.push(SymbolInfo {
            name: gname,
            src: v,
            tgt: v,
            degree: -2,
        });
    }
    let mut differential = vec![NCPolynomial::zero(); n_edges];
    for e in 0..n_edges {
        differential.push(crate::poly::cyclic_derivative(&base, w, e as u32));
    }
    let pairs: Vec<(u32, u32)> = (0..n_edges)
        .map(|i| (i as u32, (n_edges + i) as u32))
        .collect();
    for v in 0..q.vertex_count() {
        differential.push(moment_element(&alphabet, &pairs, v));
    }
    DgPresentation::new(alphabet, differential)
}

/// Maps `D`-vertices and `D`-edges to their indices in `Q`.
fn subquiver_maps(d: &Quiver, q: &Quiver) -> Result<(Vec<usize>, Vec<usize>)> {
    if !q.contains_subquiver(d) {
        return Err(Error::SubquiverViolation(
            "D is not a subquiver of Q".into(),
        ));
    }
    let vmap = d
        .vertices()
        .iter()
        .map(|v| q.vertex_index(v))
        .collect::<Result<Vec<_>>>()?;
    let emap = d
        .edges()
        .iter()
        .map(|e| q.edge_index(&e.id))
        .collect::<Result<Vec<_>>>()?;
    Ok((vmap, emap))
}

/// 𝒢₂ of a subquiver inclusion `D ⊆ Q`: degree-0 generators E(Q) ∪ E(D)*,
/// one degree-(−1) loop per vertex of `D` carrying the D-moment relation.
pub fn relative_ginzburg2(d: &Quiver, q: &Quiver) -> Result<DgPresentation> {
    let (vmap, emap) = subquiver_maps(d, q)?;
    let mut alphabet = Alphabet::from_quiver(q);
    let mut names: std::collections::BTreeSet<String> =
        alphabet.symbols.iter().map(|s| s.name.clone()).collect();
    let mut pairs = Vec::new();
    for (de, &qe) in emap.iter().enumerate() {
        let _ = de;
        let e = &q.edges()[qe];
        let sname = format!("{}{}", e.id, crate::quiver::STAR);
        check_fresh(&mut names, &sname)?;
        let star_idx = alphabet.symbols.len() as u32;
        alphabet.symbols.push(SymbolInfo {
            name: sname,
            src: e.tgt,
            tgt: e.src,
            degree: 0,
        });
        pairs.push((qe as u32, star_idx));
    }
    let n_deg0 = alphabet.symbols.len();
    for &v in &vmap {
        let gname = format!("x_{}", q.vertices()[v]);
        check_fresh(&mut names, &gname)?;
        alphabet.symbols.push(SymbolInfo {
            name: gname,
            src: v,
            tgt: v,
            degree: -1,
        });
    }
    let mut differential = vec![NCPolynomial::zero(); n_deg0];
    for &v in &vmap {
        differential.push(moment_element(&alphabet, &pairs, v));
    }
    DgPresentation::new(alphabet, differential)
}

/// 𝒢₃ of a relative pair with potential. Generators and differentials:
///
/// * degree 0: `e ∈ E(Q)` and `e* ∈ E(D)*`;
/// * degree −1: `e'` for every `e ∈ E(Q)` (reversed), and loops `x_v` for
///   `v ∈ V(D)`, with d(e') = e* − ∂_eW when `e ∈ E(D)` and −∂_eW
///   otherwise, and d(x_v) = Σ_{e∈E(D)} e_v(ee* − e*e)e_v;
/// * degree −2: loops `x_v'` for `v ∈ V(Q)`, with
///   d(x_v') = x_v − Σ_{e∈E(Q)} e_v(ee' − e'e)e_v when `v ∈ V(D)` and the
///   same sum without `x_v` otherwise.
///
/// `V(D)` may be any subset, including empty: passing a vertex-empty `D`
/// gives the deformed completion with no `x_v` loops at all, while a
/// full-vertex, edge-empty `D` keeps one contractible pair `(x_v, x_v')`
/// per vertex. Both readings of a trivial constraint are thus available.
pub fn relative_ginzburg3(q: &Quiver, d: &Quiver, w: &Potential) -> Result<DgPresentation> {
    let (vmap, emap) = subquiver_maps(d, q)?;
    let base = Alphabet::from_quiver(q);
    let mut alphabet = base.clone();
    let mut names: std::collections::BTreeSet<String> =
        alphabet.symbols.iter().map(|s| s.name.clone()).collect();
    // stars for D-edges
    let mut star_of: BTreeMap<usize, u32> = BTreeMap::new();
    for &qe in &emap {
        let e = &q.edges()[qe];
        let sname = format!("{}{}", e.id, crate::quiver::STAR);
        check_fresh(&mut names, &sname)?;
        let idx = alphabet.symbols.len() as u32;
        alphabet.symbols.push(SymbolInfo {
            name: sname,
            src: e.tgt,
            tgt: e.src,
            degree: 0,
        });
        star_of.insert(qe, idx);
    }
    let n_deg0 = alphabet.symbols.len();
    // primes for all Q-edges
    let mut prime_of: Vec<u32> = Vec::with_capacity(q.edge_count());
    for e in q.edges() {
        let gname = format!("{}{}", e.id, crate::quiver::PRIME);
        check_fresh(&mut names, &gname)?;
        prime_of.push(alphabet.symbols.len() as u32);
        alphabet.symbols.push(SymbolInfo {
            name: gname,
            src: e.tgt,
            tgt: e.src,
            degree: -1,
        });
    }
    // x_v for D-vertices
    let mut xv_of: BTreeMap<usize, u32> = BTreeMap::new();
    for &v in &vmap {
        let gname = format!("x_{}", q.vertices()[v]);
        check_fresh(&mut names, &gname)?;
        xv_of.insert(v, alphabet.symbols.len() as u32);
        alphabet.symbols.push(SymbolInfo {
            name: gname,
            src: v,
            tgt: v,
            degree: -1,
        });
    }
    // x_v' for all Q-vertices
    let mut xvp_of: Vec<u32> = Vec::with_capacity(q.vertex_count());
    for (v, name) in q.vertices().iter().enumerate() {
        let gname = format!("x_{name}{}", crate::quiver::PRIME);
        check_fresh(&mut names, &gname)?;
        xvp_of.push(alphabet.symbols.len() as u32);
        alphabet.symbols.push(SymbolInfo {
            name: gname,
            src: v,
            tgt: v,
            degree: -2,
        });
    }

    let mut differential = vec![NCPolynomial::zero(); n_deg0];
    // d(e') = e* − ∂_eW on D, −∂_eW off D
    for (qe, &pidx) in prime_of.iter().enumerate() {
        let _ = pidx;
        let dw = crate::poly::cyclic_derivative(&base, w, qe as u32);
        let poly = match star_of.get(&qe) {
            Some(&star) => NCPolynomial::from_path(Path::Word(vec![star])).sub(&dw),
            None => dw.neg(),
        };
        differential.push(poly);
    }
    // d(x_v) = D-moment at v
    let dpairs: Vec<(u32, u32)> = emap
        .iter()
        .map(|&qe| (qe as u32, star_of[&qe]))
        .collect();
    for &v in &vmap {
        differential.push(moment_element(&alphabet, &dpairs, v));
    }
    // d(x_v') = [x_v] − Σ_e e_v(ee' − e'e)e_v
    let qpairs: Vec<(u32, u32)> = (0..q.edge_count())
        .map(|e| (e as u32, prime_of[e]))
        .collect();
    for v in 0..q.vertex_count() {
        let mut poly = moment_element(&alphabet, &qpairs, v).neg();
        if let Some(&xv) = xv_of.get(&v) {
            poly.add_term(Path::Word(vec![xv]), crate::scalar::rat_int(1));
        }
        differential.push(poly);
    }
    DgPresentation::new(alphabet, differential)
}

// ---------------------------------------------------------------------------
// d² report
// ---------------------------------------------------------------------------

/// Outcome of extending d by the Leibniz rule and squaring it on every
/// generator. Failures are data, not errors.
#[derive(Clone, Debug)]
pub struct DSquaredReport {
    pub failures: Vec<(String, String)>,
    pub checked: usize,
}

impl DSquaredReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies d(d(g)) = 0 exactly for every generator of the presentation.
pub fn check_d_squared(p: &DgPresentation) -> DSquaredReport {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (i, g) in p.generators().iter().enumerate() {
        let dd = p
            .leibniz_extend(p.differential(i as u32))
            .expect("differentials are homogeneous");
        checked += 1;
        if !dd.is_zero() {
            failures.push((g.name.clone(), dd.to_string(p.alphabet())));
        }
    }
    DSquaredReport { failures, checked }
}

// ---------------------------------------------------------------------------
// Structured document (round-trippable)
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GenDoc {
    id: String,
    src: String,
    tgt: String,
    degree: i32,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    coeff: String,
    word: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct PresentationDoc {
    vertices: Vec<String>,
    generators: Vec<GenDoc>,
    differential: BTreeMap<String, Vec<TermDoc>>,
}

pub fn presentation_doc_string(p: &DgPresentation) -> String {
    let al = p.alphabet();
    let doc = PresentationDoc {
        vertices: al.vertex_names.clone(),
        generators: al
            .symbols
            .iter()
            .map(|g| GenDoc {
                id: g.name.clone(),
                src: al.vertex_names[g.src].clone(),
                tgt: al.vertex_names[g.tgt].clone(),
                degree: g.degree,
            })
            .collect(),
        differential: al
            .symbols
            .iter()
            .enumerate()
            .filter(|(i, _)| !p.differential(*i as u32).is_zero())
            .map(|(i, g)| {
                (
                    g.name.clone(),
                    p.differential(i as u32)
                        .terms()
                        .map(|(path, c)| TermDoc {
                            coeff: fmt_rat(c),
                            word: match path {
                                Path::Vertex(v) => {
                                    vec![format!("e_{}", al.vertex_names[*v as usize])]
                                }
                                Path::Word(w) => w
                                    .iter()
                                    .map(|&l| al.symbol(l).name.clone())
                                    .collect(),
                            },
                        })
                        .collect(),
                )
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("presentation serialization")
}

pub fn parse_presentation_doc(text: &str) -> Result<DgPresentation> {
    let doc: PresentationDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("presentation: {e}")))?;
    let mut alphabet = Alphabet {
        vertex_names: doc.vertices.clone(),
        symbols: Vec::new(),
    };
    let vidx = |name: &str| -> Result<usize> {
        doc.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.into()))
    };
    for g in &doc.generators {
        alphabet.symbols.push(SymbolInfo {
            name: g.id.clone(),
            src: vidx(&g.src)?,
            tgt: vidx(&g.tgt)?,
            degree: g.degree,
        });
    }
    let mut differential = vec![NCPolynomial::zero(); alphabet.symbols.len()];
    for (gname, terms) in &doc.differential {
        let gi = alphabet.symbol_index(gname)?;
        let mut poly = NCPolynomial::zero();
        for t in terms {
            let coeff = parse_rat(&t.coeff)?;
            if t.word.len() == 1 && t.word[0].starts_with("e_") {
                let v = vidx(&t.word[0][2..])?;
                poly.add_term(Path::vertex(v), coeff);
            } else {
                let letters = t
                    .word
                    .iter()
                    .map(|w| alphabet.symbol_index(w))
                    .collect::<Result<Vec<_>>>()?;
                poly.add_term(Path::from_edges(&alphabet, letters)?, coeff);
            }
        }
        differential[gi as usize] = poly;
    }
    DgPresentation::new(alphabet, differential)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::rat_int;

    /// S1 with loop named `a`, matching the presentation examples.
    fn s1a() -> Quiver {
        Quiver::new(vec!["1".into()], vec![("a".into(), "1".into(), "1".into())]).unwrap()
    }

    #[test]
    fn ginzburg2_s1() {
        let p = ginzburg2(&s1a()).unwrap();
        let names: Vec<&str> = p.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["a", "a*", "x_1"]);
        let al = p.alphabet();
        let x = al.symbol_index("x_1").unwrap();
        let mut expect = NCPolynomial::zero();
        expect.add_term(Path::Word(vec![0, 1]), rat_int(1));
        expect.add_term(Path::Word(vec![1, 0]), rat_int(-1));
        assert_eq!(p.differential(x), &expect);
    }

    #[test]
    fn ginzburg2_edgeless() {
        let q = Quiver::new(vec!["1".into(), "2".into()], vec![]).unwrap();
        let p = ginzburg2(&q).unwrap();
        assert_eq!(p.generators_of_degree(-1).len(), 2);
        for g in p.generators_of_degree(-1) {
            assert!(p.differential(g).is_zero());
        }
    }

    #[test]
    fn ginzburg2_a2tilde_localizes() {
        let p = ginzburg2(&corpus::a2tilde()).unwrap();
        let al = p.alphabet();
        // d(x_1) = a a* - c* c
        let x1 = al.symbol_index("x_1").unwrap();
        let a = al.symbol_index("a").unwrap();
        let astar = al.symbol_index("a*").unwrap();
        let c = al.symbol_index("c").unwrap();
        let cstar = al.symbol_index("c*").unwrap();
        let mut expect = NCPolynomial::zero();
        expect.add_term(Path::Word(vec![a, astar]), rat_int(1));
        expect.add_term(Path::Word(vec![cstar, c]), rat_int(-1));
        assert_eq!(p.differential(x1), &expect);
    }

    #[test]
    fn ginzburg3_s3_differentials() {
        let q = corpus::s3();
        let w = corpus::builtin_potential("xyz-commutator", &q).unwrap();
        let p = ginzburg3(&q, &w).unwrap();
        let al = p.alphabet();
        let zp = al.symbol_index("z'").unwrap();
        let x = al.symbol_index("x").unwrap();
        let y = al.symbol_index("y").unwrap();
        let z = al.symbol_index("z").unwrap();
        let mut expect = NCPolynomial::zero();
        expect.add_term(Path::Word(vec![x, y]), rat_int(1));
        expect.add_term(Path::Word(vec![y, x]), rat_int(-1));
        assert_eq!(p.differential(zp), &expect);
        let yp = al.symbol_index("y'").unwrap();
        let mut expect = NCPolynomial::zero();
        expect.add_term(Path::Word(vec![z, x]), rat_int(1));
        expect.add_term(Path::Word(vec![x, z]), rat_int(-1));
        assert_eq!(p.differential(yp), &expect);
        // d(x_v') = sum over e of e e' - e' e, one vertex
        let xvp = al.symbol_index("x_1'").unwrap();
        assert_eq!(p.differential(xvp).n_terms(), 6);
        assert!(check_d_squared(&p).passed());
    }

    #[test]
    fn ginzburg3_zero_potential() {
        let q = corpus::a2tilde();
        let p = ginzburg3(&q, &Potential::zero()).unwrap();
        for e in ["a'", "b'", "c'"] {
            let g = p.alphabet().symbol_index(e).unwrap();
            assert!(p.differential(g).is_zero());
        }
    }

    #[test]
    fn ginzburg3_a2tilde_linex_equations() {
        let q = corpus::a2tilde();
        let w = corpus::builtin_potential("abc", &q).unwrap();
        let p = ginzburg3(&q, &w).unwrap();
        let al = p.alphabet();
        let ap = al.symbol_index("a'").unwrap();
        let b = al.symbol_index("b").unwrap();
        let c = al.symbol_index("c").unwrap();
        assert_eq!(
            p.differential(ap),
            &NCPolynomial::from_path(Path::Word(vec![b, c]))
        );
    }

    #[test]
    fn relative_g2_full_is_g2() {
        let q = corpus::s1();
        let abs = ginzburg2(&q).unwrap();
        let rel = relative_ginzburg2(&q, &q).unwrap();
        assert_eq!(abs, rel);
    }

    #[test]
    fn relative_g2_edge_empty() {
        let q = corpus::s3();
        let d = Quiver::new(vec!["1".into()], vec![]).unwrap();
        let p = relative_ginzburg2(&d, &q).unwrap();
        assert_eq!(p.generators_of_degree(0).len(), 3); // no stars
        let xs = p.generators_of_degree(-1);
        assert_eq!(xs.len(), 1);
        assert!(p.differential(xs[0]).is_zero());
    }

    #[test]
    fn relative_g2_s1_in_s3() {
        let (d, q) = corpus::builtin_pair("s1-in-s3").unwrap();
        let p = relative_ginzburg2(&d, &q).unwrap();
        let names: Vec<&str> = p.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["x", "y", "z", "x*", "x_1"]);
        let al = p.alphabet();
        let t = al.symbol_index("x_1").unwrap();
        let x = al.symbol_index("x").unwrap();
        let xs = al.symbol_index("x*").unwrap();
        let mut expect = NCPolynomial::zero();
        expect.add_term(Path::Word(vec![x, xs]), rat_int(1));
        expect.add_term(Path::Word(vec![xs, x]), rat_int(-1));
        assert_eq!(p.differential(t), &expect);
    }

    #[test]
    fn relative_g2_rejects_non_subquiver() {
        let d = corpus::s2();
        let q = corpus::s1();
        assert!(relative_ginzburg2(&d, &q).is_err());
        assert!(relative_ginzburg3(&q, &d, &Potential::zero()).is_err());
    }

    #[test]
    fn relative_g3_s1_in_s3() {
        let (d, q) = corpus::builtin_pair("s1-in-s3").unwrap();
        let w = corpus::builtin_potential("xyz-commutator", &q).unwrap();
        let p = relative_ginzburg3(&q, &d, &w).unwrap();
        let al = p.alphabet();
        // d(x') = x* - (yz - zy)
        let xp = al.symbol_index("x'").unwrap();
        let xs = al.symbol_index("x*").unwrap();
        let y = al.symbol_index("y").unwrap();
        let z = al.symbol_index("z").unwrap();
        let mut expect = NCPolynomial::zero();
        expect.add_term(Path::Word(vec![xs]), rat_int(1));
        expect.add_term(Path::Word(vec![y, z]), rat_int(-1));
        expect.add_term(Path::Word(vec![z, y]), rat_int(1));
        assert_eq!(p.differential(xp), &expect);
        // d(y') = -(zx - xz)
        let yp = al.symbol_index("y'").unwrap();
        let x = al.symbol_index("x").unwrap();
        let mut expect = NCPolynomial::zero();
        expect.add_term(Path::Word(vec![z, x]), rat_int(-1));
        expect.add_term(Path::Word(vec![x, z]), rat_int(1));
        assert_eq!(p.differential(yp), &expect);
        // d(x_1) = x x* - x* x
        let xv = al.symbol_index("x_1").unwrap();
        let mut expect = NCPolynomial::zero();
        expect.add_term(Path::Word(vec![x, xs]), rat_int(1));
        expect.add_term(Path::Word(vec![xs, x]), rat_int(-1));
        assert_eq!(p.differential(xv), &expect);
        // d(x_1') contains x_1 linearly
        let xvp = al.symbol_index("x_1'").unwrap();
        let has_linear = p
            .differential(xvp)
            .terms()
            .any(|(path, _)| path.letters() == [xv]);
        assert!(has_linear);
        assert!(check_d_squared(&p).passed());
        assert_eq!(p.eliminable_deg_neg1().len(), 1);
    }

    #[test]
    fn relative_g3_full_d_matches_resolution() {
        // with D = Q every e' has d(e') = e* - dW
        let q = corpus::a2tilde();
        let w = corpus::builtin_potential("abc", &q).unwrap();
        let p = relative_ginzburg3(&q, &q, &w).unwrap();
        let al = p.alphabet();
        for e in ["a", "b", "c"] {
            let ep = al.symbol_index(&format!("{e}'")).unwrap();
            let estar = al.symbol_index(&format!("{e}*")).unwrap();
            let d = p.differential(ep);
            let has_star = d.terms().any(|(path, c)| {
                path.letters() == [estar] && c == &rat_int(1)
            });
            assert!(has_star);
        }
    }

    #[test]
    fn relative_g3_vertex_empty_d() {
        let q = corpus::s3();
        let d = Quiver::new(vec![], vec![]).unwrap();
        let w = corpus::builtin_potential("xyz-commutator", &q).unwrap();
        let p = relative_ginzburg3(&q, &d, &w).unwrap();
        // no x_v loops, d(e') = -dW
        assert_eq!(p.generators_of_degree(-1).len(), 3);
        assert!(p.eliminable_deg_neg1().is_empty());
        assert!(check_d_squared(&p).passed());
    }

    #[test]
    fn corrupted_sign_fails_d_squared() {
        let q = corpus::s3();
        let w = corpus::builtin_potential("xyz-commutator", &q).unwrap();
        let good = ginzburg3(&q, &w).unwrap();
        // flip one sign in d(z'): xy - yx becomes xy + yx
        let al = good.alphabet().clone();
        let zp = al.symbol_index("z'").unwrap();
        let x = al.symbol_index("x").unwrap();
        let y = al.symbol_index("y").unwrap();
        let mut diffs: Vec<NCPolynomial> = (0..al.symbols.len())
            .map(|i| good.differential(i as u32).clone())
            .collect();
        let mut bad = NCPolynomial::zero();
        bad.add_term(Path::Word(vec![x, y]), rat_int(1));
        bad.add_term(Path::Word(vec![y, x]), rat_int(1));
        diffs[zp as usize] = bad;
        let corrupted = DgPresentation::new(al, diffs).unwrap();
        let report = check_d_squared(&corrupted);
        assert!(!report.passed());
        assert!(report.failures.iter().any(|(g, _)| g == "x_1'"));
    }

    #[test]
    fn leibniz_examples() {
        let p = ginzburg2(&s1a()).unwrap();
        let al = p.alphabet();
        let a = al.symbol_index("a").unwrap();
        let x = al.symbol_index("x_1").unwrap();
        let dx = p.differential(x).clone();
        // d(x) = aa* - a*a
        let lx = p
            .leibniz_extend(&NCPolynomial::from_path(Path::Word(vec![x])))
            .unwrap();
        assert_eq!(lx, dx);
        // d(ax) = a (aa* - a*a)
        let ax = NCPolynomial::from_path(Path::Word(vec![a, x]));
        let lax = p.leibniz_extend(&ax).unwrap();
        let a_poly = NCPolynomial::from_path(Path::Word(vec![a]));
        assert_eq!(lax, a_poly.multiply(&dx, al));
        // d(xx) = d(x) x - x d(x)
        let xx = NCPolynomial::from_path(Path::Word(vec![x, x]));
        let lxx = p.leibniz_extend(&xx).unwrap();
        let x_poly = NCPolynomial::from_path(Path::Word(vec![x]));
        let expect = dx
            .multiply(&x_poly, al)
            .sub(&x_poly.multiply(&dx, al));
        assert_eq!(lxx, expect);
        // non-homogeneous input rejected
        let mixed = a_poly.add(&x_poly);
        assert!(p.leibniz_extend(&mixed).is_err());
    }

    #[test]
    fn h0_relations_examples() {
        let p = ginzburg2(&s1a()).unwrap();
        let rels = p.h0_relations().unwrap();
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].n_terms(), 2);

        let q = corpus::a2tilde();
        let w = corpus::builtin_potential("abc", &q).unwrap();
        let p3 = ginzburg3(&q, &w).unwrap();
        let rels3 = p3.h0_relations().unwrap();
        assert_eq!(rels3.len(), 3); // bc, ca, ab

        let edgeless = Quiver::new(vec!["1".into()], vec![]).unwrap();
        let pe = ginzburg2(&edgeless).unwrap();
        assert!(pe.h0_relations().unwrap().iter().all(|r| r.is_zero()));
    }

    #[test]
    fn presentation_doc_roundtrip() {
        let q = corpus::a2tilde();
        let w = corpus::builtin_potential("abc", &q).unwrap();
        let d = corpus::a2();
        let p = relative_ginzburg3(&q, &d, &w).unwrap();
        let text = presentation_doc_string(&p);
        let p2 = parse_presentation_doc(&text).unwrap();
        assert_eq!(p, p2);
    }

    #[test]
    fn full_corpus_d_squared() {
        for (label, p) in corpus::dg_corpus() {
            let report = check_d_squared(&p);
            assert!(report.passed(), "d^2 != 0 for {label}");
        }
    }
}
