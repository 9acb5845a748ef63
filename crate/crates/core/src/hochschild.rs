//! Length-truncated small Hochschild complex of a free graded quiver
//! algebra, HH₀ bases, the canonical degree-(−1) cocycle of the 2-CY
//! completion, and the trace map on potentials.
//!
//! The complex is the cone of
//!   f : ⊕ M(s₁,s₀) ⊗ B(s₀,s₁) → ⊕_t B(t,t),
//!   f(g ⊗ q) = g·q − (−1)^{|g||q|} q·g,
//! truncated to monomials of length ≤ L. The truncation is a bounded-length
//! window, not a quotient complex: differentials are only asserted where
//! their images stay inside the window.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::dg::DgPresentation;
use crate::error::Result;
use crate::poly::{Alphabet, NCPolynomial, Path};
use crate::qmat::QMat;
use crate::quiver::Quiver;
use crate::repvar::{evaluate, MatrixRep};
use crate::scalar::Rat;

/// The path algebra of a quiver as a dg presentation with zero differential.
pub fn path_algebra_presentation(q: &Quiver) -> DgPresentation {
    let alphabet = Alphabet::from_quiver(q);
    let n = alphabet.symbols.len();
    DgPresentation::new(alphabet, vec![NCPolynomial::zero(); n]).expect("closed degree-0 algebra")
}

/// Basis element of the shifted "relations" term: a marked generator with a
/// closing path, i.e. `g ⊗ q` with `q : tgt(g) → src(g)`.
pub type Marker = (u32, Path);

pub struct SmallHHComplex {
    pres: DgPresentation,
    max_len: usize,
    loops: Vec<Path>,
    markers: Vec<Marker>,
    loop_index: BTreeMap<Path, usize>,
    marker_index: BTreeMap<Marker, usize>,
}

/// An element of the truncated total complex.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HHClass {
    pub loops: BTreeMap<usize, Rat>,
    pub markers: BTreeMap<usize, Rat>,
}

impl HHClass {
    pub fn is_zero(&self) -> bool {
        self.loops.values().all(Zero::is_zero) && self.markers.values().all(Zero::is_zero)
    }

    fn add_loop(&mut self, i: usize, c: Rat) {
        if c.is_zero() {
            return;
        }
        let v = self.loops.entry(i).or_insert_with(Rat::zero);
        *v += c;
        if v.is_zero() {
            self.loops.remove(&i);
        }
    }

    fn add_marker(&mut self, i: usize, c: Rat) {
        if c.is_zero() {
            return;
        }
        let v = self.markers.entry(i).or_insert_with(Rat::zero);
        *v += c;
        if v.is_zero() {
            self.markers.remove(&i);
        }
    }
}

impl SmallHHComplex {
    /// Builds the window of the complex: all cycles of length ≤ L and all
    /// markers `g ⊗ q` with total length ≤ L.
    pub fn new(pres: &DgPresentation, max_len: usize) -> Self {
        assert!(max_len >= 1, "truncation length must be at least 1");
        let al = pres.alphabet();
        let mut loops: Vec<Path> = (0..al.n_vertices()).map(Path::vertex).collect();
        loops.extend(crate::poly::all_cycles(al, max_len));
        let mut markers = Vec::new();
        for (g, info) in al.symbols.iter().enumerate() {
            // trailing path from tgt(g) back to src(g)
            if info.tgt == info.src {
                markers.push((g as u32, Path::vertex(info.src)));
            }
            for len in 1..max_len {
                for word in paths_between(al, info.tgt, info.src, len) {
                    markers.push((g as u32, Path::Word(word)));
                }
            }
        }
        let loop_index = loops
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let marker_index = markers
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        SmallHHComplex {
            pres: pres.clone(),
            max_len,
            loops,
            markers,
            loop_index,
            marker_index,
        }
    }

    pub fn loop_count(&self) -> usize {
        self.loops.len()
    }

    pub fn marker_count(&self) -> usize {
        self.markers.len()
    }

    pub fn loops(&self) -> &[Path] {
        &self.loops
    }

    pub fn markers(&self) -> &[Marker] {
        &self.markers
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.pres.alphabet()
    }

    pub fn loop_of(&self, p: &Path) -> Option<usize> {
        self.loop_index.get(p).copied()
    }

    pub fn marker_of(&self, m: &Marker) -> Option<usize> {
        self.marker_index.get(m).copied()
    }

    fn marker_degree(&self, m: &Marker) -> i32 {
        let al = self.pres.alphabet();
        al.symbol(m.0).degree + m.1.degree(al) - 1
    }

    /// Total differential of a single loop basis vector. Returns `None`
    /// when the image leaves the length window.
    pub fn d_loop(&self, i: usize) -> Option<HHClass> {
        let image = self
            .pres
            .leibniz_extend(&NCPolynomial::from_path(self.loops[i].clone()))
            .expect("homogeneous basis");
        let mut out = HHClass::default();
        for (path, c) in image.terms() {
            match self.loop_index.get(path) {
                Some(&j) => out.add_loop(j, c.clone()),
                None => return None,
            }
        }
        Some(out)
    }

    /// Total differential of a single marker basis vector: the cone formula
    /// d(g⊗q) = f(g⊗q) ⊕ (−d_X(g⊗q)). `None` when the image leaves the
    /// window.
    pub fn d_marker(&self, i: usize) -> Option<HHClass> {
        let al = self.pres.alphabet();
        let (g, q) = self.markers[i].clone();
        let ginfo = al.symbol(g).clone();
        let gpath = Path::Word(vec![g]);
        let mut out = HHClass::default();

        // f(g⊗q) = g·q − (−1)^{|g||q|} q·g
        let gq = gpath.concat(&q, al).expect("marker is composable");
        out.add_loop(*self.loop_index.get(&gq)?, Rat::from_integer(1.into()));
        let qg = q.concat(&gpath, al).expect("marker is composable");
        let sign = if (ginfo.degree * q.degree(al)).rem_euclid(2) == 1 {
            1
        } else {
            -1
        };
        out.add_loop(*self.loop_index.get(&qg)?, Rat::from_integer(sign.into()));

        // tail part of −d_X: −(−1)^{|g|} g ⊗ d(q)
        let dq = self
            .pres
            .leibniz_extend(&NCPolynomial::from_path(q.clone()))
            .expect("homogeneous basis");
        let tail_sign = if ginfo.degree.rem_euclid(2) == 1 { 1 } else { -1 };
        for (w, c) in dq.terms() {
            let key = (g, w.clone());
            let j = *self.marker_index.get(&key)?;
            out.add_marker(j, c * Rat::from_integer(tail_sign.into()));
        }

        // head part of −d_X: remark each letter of each term of d(g)
        for (w, c) in self.pres.differential(g).terms() {
            let letters = w.letters();
            let m = letters.len();
            for i in 0..m {
                let h = letters[i];
                let deg_u: i32 = letters[..i]
                    .iter()
                    .map(|&l| al.symbol(l).degree)
                    .sum();
                let deg_w = w.degree(al);
                let sigma = deg_u * (deg_w - deg_u + q.degree(al));
                // rest = h_{i+1..m} · q · h_{1..i}
                let mid = if i + 1 < m {
                    Path::Word(letters[i + 1..].to_vec())
                } else {
                    Path::vertex(al.symbol(h).tgt)
                };
                let end = if i > 0 {
                    Path::Word(letters[..i].to_vec())
                } else {
                    Path::vertex(al.symbol(letters[0]).src)
                };
                let rest = mid.concat(&q, al)?.concat(&end, al)?;
                let key = (h, rest);
                let j = *self.marker_index.get(&key)?;
                let s = if sigma.rem_euclid(2) == 1 { 1 } else { -1 };
                out.add_marker(j, c * Rat::from_integer(s.into()));
            }
        }
        Some(out)
    }

    /// Applies the total differential to a class; `None` when any needed
    /// image leaves the window.
    pub fn apply(&self, class: &HHClass) -> Option<HHClass> {
        let mut out = HHClass::default();
        for (&i, c) in &class.loops {
            let d = self.d_loop(i)?;
            for (j, v) in d.loops {
                out.add_loop(j, v * c);
            }
            for (j, v) in d.markers {
                out.add_marker(j, v * c);
            }
        }
        for (&i, c) in &class.markers {
            let d = self.d_marker(i)?;
            for (j, v) in d.loops {
                out.add_loop(j, v * c);
            }
            for (j, v) in d.markers {
                out.add_marker(j, v * c);
            }
        }
        Some(out)
    }

    /// Verifies d∘d = 0 on every basis vector whose image, and whose
    /// image's images, stay within the window. Returns the number checked.
    pub fn d_squared_in_window(&self) -> (bool, usize) {
        let mut ok = true;
        let mut checked = 0;
        for i in 0..self.loops.len() {
            if let Some(d) = self.d_loop(i) {
                if let Some(dd) = self.apply(&d) {
                    checked += 1;
                    ok &= dd.is_zero();
                }
            }
        }
        for i in 0..self.markers.len() {
            if let Some(d) = self.d_marker(i) {
                if let Some(dd) = self.apply(&d) {
                    checked += 1;
                    ok &= dd.is_zero();
                }
            }
        }
        (ok, checked)
    }

    /// The boundary matrix from the degree-(−1) slice of the marker term to
    /// the degree-0 slice of the loops term, inside the window.
    fn boundary_to_deg0(&self) -> QMat {
        let deg0_loops: Vec<usize> = (0..self.loops.len())
            .filter(|&i| self.loops[i].degree(self.pres.alphabet()) == 0)
            .collect();
        let row_of: BTreeMap<usize, usize> = deg0_loops
            .iter()
            .enumerate()
            .map(|(r, &i)| (i, r))
            .collect();
        let cols: Vec<usize> = (0..self.markers.len())
            .filter(|&i| self.marker_degree(&self.markers[i]) == -1)
            .collect();
        let mut m = QMat::zeros(deg0_loops.len(), cols.len());
        for (c, &mi) in cols.iter().enumerate() {
            if let Some(d) = self.d_marker(mi) {
                for (j, v) in d.loops {
                    if let Some(&r) = row_of.get(&j) {
                        m.set(r, c, v);
                    }
                }
            }
        }
        m
    }
}

fn paths_between(al: &Alphabet, from: usize, to: usize, len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<u32>)> = vec![(from, vec![])];
    while let Some((at, word)) = stack.pop() {
        if word.len() == len {
            if at == to {
                out.push(word);
            }
            continue;
        }
        for (i, s) in al.symbols.iter().enumerate() {
            if s.src == at {
                let mut w = word.clone();
                w.push(i as u32);
                stack.push((s.tgt, w));
            }
        }
    }
    out
}

/// Rank of the cokernel of the boundary in degree 0 at truncation `L`:
/// the dimension of HH₀(kQ) restricted to words of length ≤ L. Agrees with
/// the necklace count.
pub fn hh0_dimension(q: &Quiver, max_len: usize) -> usize {
    let pres = path_algebra_presentation(q);
    let complex = SmallHHComplex::new(&pres, max_len);
    let boundary = complex.boundary_to_deg0();
    complex
        .loops
        .iter()
        .filter(|p| p.degree(pres.alphabet()) == 0)
        .count()
        - boundary.rank()
}

/// Builds the canonical degree-(−1) class Σ_e e⊗e* − Σ_v x_v of the 2-CY
/// completion inside the given window.
pub fn cy_class(q: &Quiver, complex: &SmallHHComplex) -> HHClass {
    let al = complex.alphabet();
    let m = q.edge_count();
    let mut class = HHClass::default();
    for e in 0..m {
        let star = (m + e) as u32;
        let idx = complex
            .marker_of(&(e as u32, Path::Word(vec![star])))
            .expect("window holds the tautological markers");
        class.add_marker(idx, Rat::from_integer(1.into()));
    }
    for v in 0..q.vertex_count() {
        let xv = (2 * m + v) as u32;
        let idx = complex
            .loop_of(&Path::Word(vec![xv]))
            .expect("window holds the degree -1 loops");
        class.add_loop(idx, Rat::from_integer((-1).into()));
    }
    class
}

/// Checks that the canonical class is killed exactly by the total
/// differential of the window at L = 3.
pub fn verify_cy_cocycle(q: &Quiver) -> Result<bool> {
    let pres = crate::dg::ginzburg2(q)?;
    let complex = SmallHHComplex::new(&pres, 3);
    let class = cy_class(q, &complex);
    Ok(complex
        .apply(&class)
        .map(|d| d.is_zero())
        .unwrap_or(false))
}

/// Negative controls: the same check with one of the two summands deleted.
/// Returns (without the marker part, without the loops part).
pub fn cy_cocycle_negative_controls(q: &Quiver) -> Result<(bool, bool)> {
    let pres = crate::dg::ginzburg2(q)?;
    let complex = SmallHHComplex::new(&pres, 3);
    let full = cy_class(q, &complex);
    let only_loops = HHClass {
        loops: full.loops.clone(),
        markers: BTreeMap::new(),
    };
    let only_markers = HHClass {
        loops: BTreeMap::new(),
        markers: full.markers.clone(),
    };
    let check = |cl: &HHClass| {
        complex
            .apply(cl)
            .map(|d| d.is_zero())
            .unwrap_or(false)
    };
    Ok((check(&only_loops), check(&only_markers)))
}

/// tr(W) at a representation: Σ over cycles of coeff · tr(product along the
/// cycle). Cyclic-rotation and conjugation invariant.
pub fn chern0(
    w: &crate::poly::Potential,
    rep: &MatrixRep,
    alphabet: &Alphabet,
) -> Result<Rat> {
    let mut acc = Rat::zero();
    for (path, coeff) in w.poly().terms() {
        let m = evaluate(&NCPolynomial::from_path(path.clone()), rep, alphabet)?;
        if !m.is_square() {
            return Err(crate::error::Error::ShapeMismatch(
                "non-square cycle product".into(),
            ));
        }
        acc += m.trace() * coeff;
    }
    Ok(acc)
}

/// One CSV row per quiver: L, hh0 dimension, necklace count, CY verdict.
pub fn hh_report_row(name: &str, q: &Quiver, max_len: usize) -> Result<String> {
    let al = Alphabet::from_quiver(q);
    let hh0 = hh0_dimension(q, max_len);
    let necklaces = crate::poly::necklace_basis(&al, max_len).len();
    let cy = verify_cy_cocycle(q)?;
    Ok(format!("{name},{max_len},{hh0},{necklaces},{cy}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::poly::Potential;
    use crate::quiver::DimensionVector;
    use crate::scalar::{rat_int, RatSampler};

    #[test]
    fn window_basis_s1() {
        let q = corpus::s1();
        let pres = path_algebra_presentation(&q);
        let complex = SmallHHComplex::new(&pres, 3);
        // loops: e, a, aa, aaa
        assert_eq!(complex.loop_count(), 4);
        // markers: (a, e), (a, a), (a, aa)
        assert_eq!(complex.marker_count(), 3);
        let (ok, checked) = complex.d_squared_in_window();
        assert!(ok);
        assert!(checked > 0);
    }

    #[test]
    fn window_edgeless() {
        let q = crate::quiver::Quiver::new(vec!["1".into(), "2".into()], vec![]).unwrap();
        let pres = path_algebra_presentation(&q);
        let complex = SmallHHComplex::new(&pres, 2);
        assert_eq!(complex.marker_count(), 0);
        assert_eq!(complex.loop_count(), 2);
        assert_eq!(hh0_dimension(&q, 2), 2);
    }

    #[test]
    fn d_squared_on_ginzburg_presentations() {
        for q in [corpus::s1(), corpus::s2(), corpus::a2tilde()] {
            let pres = crate::dg::ginzburg2(&q).unwrap();
            let complex = SmallHHComplex::new(&pres, 3);
            let (ok, checked) = complex.d_squared_in_window();
            assert!(ok, "d^2 != 0 in window");
            assert!(checked > 0);
        }
        // a deformed completion exercises the graded Koszul signs
        let q = corpus::s3();
        let w = corpus::builtin_potential("xyz-commutator", &q).unwrap();
        let pres = crate::dg::ginzburg3(&q, &w).unwrap();
        let complex = SmallHHComplex::new(&pres, 3);
        let (ok, checked) = complex.d_squared_in_window();
        assert!(ok);
        assert!(checked > 0);
    }

    #[test]
    fn hh0_matches_necklaces() {
        assert_eq!(hh0_dimension(&corpus::s1(), 3), 4);
        assert_eq!(hh0_dimension(&corpus::s3(), 2), 10);
        assert_eq!(hh0_dimension(&corpus::a2tilde(), 2), 3);
        for (name, q) in corpus::potential_corpus() {
            for l in 1..=4 {
                let al = crate::poly::Alphabet::from_quiver(&q);
                let necklaces = crate::poly::necklace_basis(&al, l).len();
                assert_eq!(hh0_dimension(&q, l), necklaces, "{name} at L={l}");
            }
        }
    }

    #[test]
    fn cy_cocycle_holds_and_controls_fail() {
        for q in [corpus::s1(), corpus::s2(), corpus::a2tilde()] {
            assert!(verify_cy_cocycle(&q).unwrap());
            let (no_markers, no_loops) = cy_cocycle_negative_controls(&q).unwrap();
            assert!(!no_markers);
            assert!(!no_loops);
        }
    }

    #[test]
    fn chern0_scalars_commute() {
        let q = corpus::s3();
        let al = Alphabet::from_quiver(&q);
        let w = corpus::builtin_potential("xyz-commutator", &q).unwrap();
        let dims = DimensionVector::constant(&q, 1);
        let mut s = RatSampler::new(5);
        let rep = MatrixRep::random(&al, &dims, &mut s);
        assert!(chern0(&w, &rep, &al).unwrap().is_zero());
    }

    #[test]
    fn chern0_rotation_invariance() {
        let q = corpus::a2tilde();
        let al = Alphabet::from_quiver(&q);
        let dims = DimensionVector::constant(&q, 1);
        let mut s = RatSampler::new(6);
        let rep = MatrixRep::random(&al, &dims, &mut s);
        let (abc, _) = corpus::potential_abc();
        let w1 = Potential::new(&al, abc).unwrap();
        // rotated potential bca
        let b = al.symbol_index("b").unwrap();
        let c = al.symbol_index("c").unwrap();
        let a = al.symbol_index("a").unwrap();
        let bca = Potential::new(
            &al,
            NCPolynomial::from_path(Path::from_edges(&al, vec![b, c, a]).unwrap()),
        )
        .unwrap();
        assert_eq!(
            chern0(&w1, &rep, &al).unwrap(),
            chern0(&bca, &rep, &al).unwrap()
        );
    }

    #[test]
    fn chern0_conjugation_invariance() {
        let q = corpus::s3();
        let al = Alphabet::from_quiver(&q);
        let w = corpus::builtin_potential("xyz-commutator", &q).unwrap();
        let dims = DimensionVector::constant(&q, 3);
        let mut s = RatSampler::new(7);
        let rep = MatrixRep::random(&al, &dims, &mut s);
        let g = loop {
            let cand = crate::qmat::QMat::from_fn(3, 3, |_, _| s.small());
            if cand.inverse().is_some() {
                break cand;
            }
        };
        let conj = rep.conjugate(&al, &[g]).unwrap();
        assert_eq!(
            chern0(&w, &rep, &al).unwrap(),
            chern0(&w, &conj, &al).unwrap()
        );
    }

    #[test]
    fn chern0_cross_module_consistency() {
        let q = corpus::a2tilde();
        let al = Alphabet::from_quiver(&q);
        let dims = DimensionVector::constant(&q, 2);
        let mut s = RatSampler::new(8);
        let rep = MatrixRep::random(&al, &dims, &mut s);
        let (abc, _) = corpus::potential_abc();
        let w = Potential::new(&al, abc).unwrap();
        let triple = evaluate(
            &NCPolynomial::from_path(Path::from_edges(&al, vec![0, 1, 2]).unwrap()),
            &rep,
            &al,
        )
        .unwrap();
        assert_eq!(triple.trace(), chern0(&w, &rep, &al).unwrap());
    }

    #[test]
    fn report_row_shape() {
        let row = hh_report_row("s1", &corpus::s1(), 3).unwrap();
        assert_eq!(row, "s1,3,4,4,true");
    }
}
