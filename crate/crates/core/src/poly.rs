//! Paths, noncommutative polynomials, potentials and necklaces over a
//! (graded) quiver alphabet.
//!
//! Composition convention, fixed globally: paths compose left to right, so
//! `pq` means "p, then q" and requires `tgt(p) = src(q)`. Every formula in
//! the crate (cyclic derivatives, moment elements `ee* - e*e`, differentials)
//! is stated in this convention.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::scalar::{fmt_rat, Rat};

/// A symbol of the alphabet: a named arrow with endpoints and a cohomological
/// degree (0 for plain quiver edges, ≤ 0 for dg generators).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolInfo {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
    pub degree: i32,
}

/// The ambient alphabet of an `NCPolynomial`: vertices plus graded symbols.
///
/// A plain quiver gives an alphabet with all degrees 0; a dg presentation
/// contributes its generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub vertex_names: Vec<String>,
    pub symbols: Vec<SymbolInfo>,
}

impl Alphabet {
    pub fn from_quiver(q: &Quiver) -> Self {
        Alphabet {
            vertex_names: q.vertices().to_vec(),
            symbols: q
                .edges()
                .iter()
                .map(|e| SymbolInfo {
                    name: e.id.clone(),
                    src: e.src,
                    tgt: e.tgt,
                    degree: 0,
                })
                .collect(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn symbol(&self, i: u32) -> &SymbolInfo {
        &self.symbols[i as usize]
    }

    pub fn symbol_index(&self, name: &str) -> Result<u32> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .map(|i| i as u32)
            .ok_or_else(|| Error::UnknownEdge(name.into()))
    }

    pub fn degree_zero_symbols(&self) -> impl Iterator<Item = (u32, &SymbolInfo)> {
        self.symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| s.degree == 0)
            .map(|(i, s)| (i as u32, s))
    }
}

/// A path: either the length-0 idempotent `e_v` anchored at a vertex, or a
/// nonempty composable word of symbols.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    Vertex(u32),
    Word(Vec<u32>),
}

impl Path {
    pub fn vertex(v: usize) -> Self {
        Path::Vertex(v as u32)
    }

    pub fn from_edges(alphabet: &Alphabet, letters: Vec<u32>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Parse("empty words need an anchor vertex".into()));
        }
        for w in letters.windows(2) {
            if alphabet.symbol(w[0]).tgt != alphabet.symbol(w[1]).src {
                return Err(Error::NotComposable);
            }
        }
        Ok(Path::Word(letters))
    }

    pub fn len(&self) -> usize {
        match self {
            Path::Vertex(_) => 0,
            Path::Word(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn letters(&self) -> &[u32] {
        match self {
            Path::Vertex(_) => &[],
            Path::Word(w) => w,
        }
    }

    pub fn src(&self, alphabet: &Alphabet) -> usize {
        match self {
            Path::Vertex(v) => *v as usize,
            Path::Word(w) => alphabet.symbol(w[0]).src,
        }
    }

    pub fn tgt(&self, alphabet: &Alphabet) -> usize {
        match self {
            Path::Vertex(v) => *v as usize,
            Path::Word(w) => alphabet.symbol(*w.last().unwrap()).tgt,
        }
    }

    pub fn degree(&self, alphabet: &Alphabet) -> i32 {
        self.letters()
            .iter()
            .map(|&l| alphabet.symbol(l).degree)
            .sum()
    }

    pub fn is_cycle(&self, alphabet: &Alphabet) -> bool {
        self.src(alphabet) == self.tgt(alphabet)
    }

    /// `p` then `q`, or `None` when the endpoints do not match.
    pub fn concat(&self, other: &Path, alphabet: &Alphabet) -> Option<Path> {
        if self.tgt(alphabet) != other.src(alphabet) {
            return None;
        }
        Some(match (self, other) {
            (Path::Vertex(_), q) => q.clone(),
            (p, Path::Vertex(_)) => p.clone(),
            (Path::Word(a), Path::Word(b)) => {
                let mut w = a.clone();
                w.extend_from_slice(b);
                Path::Word(w)
            }
        })
    }

    /// Rotation starting at position `k` (cycles only).
    pub fn rotate(&self, k: usize) -> Path {
        match self {
            Path::Vertex(_) => self.clone(),
            Path::Word(w) => {
                let mut r = w[k..].to_vec();
                r.extend_from_slice(&w[..k]);
                Path::Word(r)
            }
        }
    }

    pub fn to_string(&self, alphabet: &Alphabet) -> String {
        match self {
            Path::Vertex(v) => format!("e_{}", alphabet.vertex_names[*v as usize]),
            Path::Word(w) => w
                .iter()
                .map(|&l| alphabet.symbol(l).name.clone())
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}

/// Finite linear combination of paths with exact rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NCPolynomial {
    terms: BTreeMap<Path, Rat>,
}

impl NCPolynomial {
    pub fn zero() -> Self {
        NCPolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_path(p: Path) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p, Rat::from_integer(1.into()));
        NCPolynomial { terms }
    }

    pub fn monomial(p: Path, c: Rat) -> Self {
        let mut out = NCPolynomial::zero();
        out.add_term(p, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Rat)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, p: Path, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(p) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &NCPolynomial) -> NCPolynomial {
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NCPolynomial) -> NCPolynomial {
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.add_term(p.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> NCPolynomial {
        NCPolynomial {
            terms: self.terms.iter().map(|(p, c)| (p.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> NCPolynomial {
        if c.is_zero() {
            return NCPolynomial::zero();
        }
        NCPolynomial {
            terms: self.terms.iter().map(|(p, k)| (p.clone(), k * c)).collect(),
        }
    }

    /// Bilinear extension of path concatenation; non-composable products
    /// vanish and idempotents act as local units.
    pub fn multiply(&self, other: &NCPolynomial, alphabet: &Alphabet) -> NCPolynomial {
        let mut out = NCPolynomial::zero();
        for (p, a) in self.terms() {
            for (q, b) in other.terms() {
                if let Some(pq) = p.concat(q, alphabet) {
                    out.add_term(pq, a * b);
                }
            }
        }
        out
    }

    /// `e_v · p · e_v`: the terms running from `v` to `v`.
    pub fn localize(&self, v: usize, alphabet: &Alphabet) -> NCPolynomial {
        NCPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.src(alphabet) == v && p.tgt(alphabet) == v)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn commutator(&self, other: &NCPolynomial, alphabet: &Alphabet) -> NCPolynomial {
        self.multiply(other, alphabet)
            .sub(&other.multiply(self, alphabet))
    }

    /// Common degree of all terms, or `Err` when mixed.
    pub fn homogeneous_degree(&self, alphabet: &Alphabet) -> Result<Option<i32>> {
        let mut deg = None;
        for (p, _) in self.terms() {
            let d = p.degree(alphabet);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(Error::NonHomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// All terms share a source and a target; returns them.
    pub fn common_endpoints(&self, alphabet: &Alphabet) -> Result<Option<(usize, usize)>> {
        let mut ep = None;
        for (p, _) in self.terms() {
            let e = (p.src(alphabet), p.tgt(alphabet));
            match ep {
                None => ep = Some(e),
                Some(f) if f != e => return Err(Error::MixedEndpoints),
                _ => {}
            }
        }
        Ok(ep)
    }

    /// Scales so the coefficient of the least path is 1; used for
    /// sign/scale-insensitive structural comparison of equations.
    pub fn normalized(&self) -> NCPolynomial {
        match self.terms.iter().next() {
            None => NCPolynomial::zero(),
            Some((_, c)) => {
                let inv = Rat::from_integer(1.into()) / c.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn to_string(&self, alphabet: &Alphabet) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        // stable, human order: by length then display string
        let mut items: Vec<(&Path, &Rat)> = self.terms.iter().collect();
        items.sort_by_key(|(p, _)| (p.len(), p.to_string(alphabet)));
        for (i, (p, c)) in items.into_iter().enumerate() {
            let cs = fmt_rat(c);
            let body = p.to_string(alphabet);
            let piece = if cs == "1" {
                body
            } else if cs == "-1" {
                format!("-{body}")
            } else {
                format!("{cs} {body}")
            };
            if i == 0 {
                parts.push(piece);
            } else if let Some(rest) = piece.strip_prefix('-') {
                parts.push(format!("- {rest}"));
            } else {
                parts.push(format!("+ {piece}"));
            }
        }
        parts.join(" ")
    }
}

/// A potential: a linear combination of cycles of length ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential(NCPolynomial);

impl Potential {
    pub fn new(alphabet: &Alphabet, p: NCPolynomial) -> Result<Self> {
        for (path, _) in p.terms() {
            if path.is_empty() {
                return Err(Error::NotAPotential("length-0 term".into()));
            }
            if !path.is_cycle(alphabet) {
                return Err(Error::NotAPotential(format!(
                    "`{}` is not a cycle",
                    path.to_string(alphabet)
                )));
            }
            if path.degree(alphabet) != 0 {
                return Err(Error::NotAPotential("graded term in a potential".into()));
            }
        }
        Ok(Potential(p))
    }

    pub fn zero() -> Self {
        Potential(NCPolynomial::zero())
    }

    pub fn poly(&self) -> &NCPolynomial {
        &self.0
    }
}

/// The cyclic derivative: for each cycle `f_1 … f_L` of `W` and each position
/// `i` with `f_i = e`, contribute the path `f_{i+1} … f_L f_1 … f_{i-1}`.
///
/// The result is a sum of paths from `tgt(e)` to `src(e)`.
pub fn cyclic_derivative(alphabet: &Alphabet, w: &Potential, edge: u32) -> NCPolynomial {
    let mut out = NCPolynomial::zero();
    for (path, coeff) in w.poly().terms() {
        let letters = path.letters();
        for (i, &l) in letters.iter().enumerate() {
            if l == edge {
                let mut rest: Vec<u32> = letters[i + 1..].to_vec();
                rest.extend_from_slice(&letters[..i]);
                let p = if rest.is_empty() {
                    // removing the only letter of a length-1 loop leaves e_v
                    Path::vertex(alphabet.symbol(edge).tgt)
                } else {
                    Path::Word(rest)
                };
                out.add_term(p, coeff.clone());
            }
        }
    }
    out
}

/// Checks `Σ_e (e · ∂_eW − ∂_eW · e) = 0` exactly; an identity of the path
/// algebra that also certifies d² = 0 for the deformed dg-algebras.
pub fn sum_commutator_identity_check(alphabet: &Alphabet, w: &Potential) -> bool {
    let mut acc = NCPolynomial::zero();
    for (idx, _) in alphabet.degree_zero_symbols() {
        let dw = cyclic_derivative(alphabet, w, idx);
        let e = NCPolynomial::from_path(Path::Word(vec![idx]));
        acc = acc.add(&e.commutator(&dw, alphabet));
    }
    acc.is_zero()
}

/// Cyclic equivalence class of a cycle; the canonical representative is the
/// rotation minimal in the lexicographic order of edge-id sequences.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Necklace(Path);

impl Necklace {
    pub fn new(alphabet: &Alphabet, cycle: &Path) -> Result<Self> {
        if !cycle.is_cycle(alphabet) {
            return Err(Error::NotAPotential("necklace of a non-cycle".into()));
        }
        if cycle.is_empty() {
            return Ok(Necklace(cycle.clone()));
        }
        let names: Vec<&str> = cycle
            .letters()
            .iter()
            .map(|&l| alphabet.symbol(l).name.as_str())
            .collect();
        let n = names.len();
        let rotation = |k: usize| -> Vec<&str> { (0..n).map(|j| names[(k + j) % n]).collect() };
        let mut best = 0usize;
        for k in 1..n {
            if rotation(k) < rotation(best) {
                best = k;
            }
        }
        Ok(Necklace(cycle.rotate(best)))
    }

    pub fn representative(&self) -> &Path {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_string(&self, alphabet: &Alphabet) -> String {
        self.0.to_string(alphabet)
    }
}

/// All paths of exactly `len` letters starting at `from`.
fn paths_from(alphabet: &Alphabet, from: usize, len: usize) -> Vec<Vec<u32>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<u32>)> = vec![(from, vec![])];
    while let Some((at, word)) = stack.pop() {
        if word.len() == len {
            out.push(word);
            continue;
        }
        for (i, s) in alphabet.symbols.iter().enumerate() {
            if s.src == at {
                let mut w = word.clone();
                w.push(i as u32);
                stack.push((s.tgt, w));
            }
        }
    }
    out
}

/// All cycles (closed paths) of length `1..=max_len`, at every base vertex.
pub fn all_cycles(alphabet: &Alphabet, max_len: usize) -> Vec<Path> {
    let mut out = Vec::new();
    for v in 0..alphabet.n_vertices() {
        for len in 1..=max_len {
            for word in paths_from(alphabet, v, len) {
                if !word.is_empty() && alphabet.symbol(*word.last().unwrap()).tgt == v {
                    out.push(Path::Word(word));
                }
            }
        }
    }
    out
}

/// All necklaces of length ≤ `max_len`, each once; the length-0 necklaces
/// are the vertices.
pub fn necklace_basis(alphabet: &Alphabet, max_len: usize) -> Vec<Necklace> {
    let mut out: Vec<Necklace> = (0..alphabet.n_vertices())
        .map(|v| Necklace(Path::vertex(v)))
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    for cycle in all_cycles(alphabet, max_len) {
        let neck = Necklace::new(alphabet, &cycle).expect("cycle");
        if seen.insert(neck.clone()) {
            out.push(neck);
        }
    }
    out
}

/// A random potential: up to `max_terms` distinct cycles of length ≤
/// `max_len` with random nonzero small rational coefficients.
pub fn random_potential(
    alphabet: &Alphabet,
    max_len: usize,
    max_terms: usize,
    sampler: &mut crate::scalar::RatSampler,
) -> Potential {
    let cycles = all_cycles(alphabet, max_len);
    if cycles.is_empty() {
        return Potential::zero();
    }
    let mut p = NCPolynomial::zero();
    let k = sampler.rng().gen_range(1..=max_terms);
    for _ in 0..k {
        let i = sampler.rng().gen_range(0..cycles.len());
        let c = sampler.small_nonzero();
        p.add_term(cycles[i].clone(), c);
    }
    Potential::new(alphabet, p).expect("cycles are cycles")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::rat_int;

    #[test]
    fn multiply_basics() {
        let s1bar = corpus::s1().double().unwrap();
        let al = Alphabet::from_quiver(&s1bar);
        let a = NCPolynomial::from_path(Path::Word(vec![0]));
        let astar = NCPolynomial::from_path(Path::Word(vec![1]));
        let aa = a.multiply(&astar, &al);
        assert_eq!(aa.n_terms(), 1);
        let (p, c) = aa.terms().next().unwrap();
        assert_eq!(p, &Path::Word(vec![0, 1]));
        assert_eq!(c, &rat_int(1));
    }

    #[test]
    fn idempotents_orthogonal() {
        let q = corpus::a2tilde();
        let al = Alphabet::from_quiver(&q);
        let e1 = NCPolynomial::from_path(Path::vertex(0));
        let e2 = NCPolynomial::from_path(Path::vertex(1));
        assert!(e1.multiply(&e2, &al).is_zero());
        assert_eq!(e1.multiply(&e1, &al), e1);
    }

    #[test]
    fn composability_on_a2tilde() {
        let q = corpus::a2tilde();
        let al = Alphabet::from_quiver(&q);
        let a = NCPolynomial::from_path(Path::Word(vec![0]));
        let b = NCPolynomial::from_path(Path::Word(vec![1]));
        assert!(!a.multiply(&b, &al).is_zero()); // a then b composes
        assert!(b.multiply(&a, &al).is_zero()); // b then a does not
    }

    #[test]
    fn cyclic_derivative_abc() {
        let q = corpus::a2tilde();
        let al = Alphabet::from_quiver(&q);
        let (w, _) = corpus::potential_abc();
        let w = Potential::new(&al, w).unwrap();
        let da = cyclic_derivative(&al, &w, al.symbol_index("a").unwrap());
        assert_eq!(
            da,
            NCPolynomial::from_path(Path::from_edges(&al, vec![1, 2]).unwrap())
        );
        // edge not in W
        let q2 = corpus::s3();
        let al2 = Alphabet::from_quiver(&q2);
        let w0 = Potential::zero();
        assert!(cyclic_derivative(&al2, &w0, al2.symbol_index("x").unwrap()).is_zero());
    }

    #[test]
    fn cyclic_derivative_commutator_potential() {
        let q = corpus::s3();
        let al = Alphabet::from_quiver(&q);
        let (w, _) = corpus::potential_xyz_commutator();
        let w = Potential::new(&al, w).unwrap();
        let dz = cyclic_derivative(&al, &w, al.symbol_index("z").unwrap());
        // xy - yx
        let x = al.symbol_index("x").unwrap();
        let y = al.symbol_index("y").unwrap();
        let mut expect = NCPolynomial::zero();
        expect.add_term(Path::Word(vec![x, y]), rat_int(1));
        expect.add_term(Path::Word(vec![y, x]), rat_int(-1));
        assert_eq!(dz, expect);
    }

    #[test]
    fn necklaces_s1_s3_a2tilde() {
        let s1 = Alphabet::from_quiver(&corpus::s1());
        assert_eq!(necklace_basis(&s1, 3).len(), 4);
        let s3 = Alphabet::from_quiver(&corpus::s3());
        assert_eq!(necklace_basis(&s3, 2).len(), 10);
        let a2t = Alphabet::from_quiver(&corpus::a2tilde());
        assert_eq!(necklace_basis(&a2t, 2).len(), 3);
    }

    #[test]
    fn necklace_canonical_rotation_unique() {
        let s3 = Alphabet::from_quiver(&corpus::s3());
        let basis = necklace_basis(&s3, 4);
        // no two distinct necklaces are rotations of one another
        for (i, n1) in basis.iter().enumerate() {
            for n2 in basis.iter().skip(i + 1) {
                if n1.len() != n2.len() || n1.is_empty() {
                    continue;
                }
                for k in 0..n1.len() {
                    assert_ne!(&n1.representative().rotate(k), n2.representative());
                }
            }
        }
    }

    #[test]
    fn commutator_identity() {
        let s3 = Alphabet::from_quiver(&corpus::s3());
        let (w, _) = corpus::potential_xyz_commutator();
        let w = Potential::new(&s3, w).unwrap();
        assert!(sum_commutator_identity_check(&s3, &w));

        let a2t = Alphabet::from_quiver(&corpus::a2tilde());
        let (w, _) = corpus::potential_abc();
        let w = Potential::new(&a2t, w).unwrap();
        assert!(sum_commutator_identity_check(&a2t, &w));

        assert!(sum_commutator_identity_check(&s3, &Potential::zero()));
    }

    #[test]
    fn potential_rejects_non_cycles() {
        let q = corpus::a2tilde();
        let al = Alphabet::from_quiver(&q);
        let open = NCPolynomial::from_path(Path::Word(vec![0])); // a: 1 -> 2
        assert!(Potential::new(&al, open).is_err());
    }
}
