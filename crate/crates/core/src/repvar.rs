//! Matrix representations of graded quiver algebras, moment maps, truncation
//! equation systems, Jacobians, and the three-term tangent complex.
//!
//! Matrix convention, fixed so the truncation systems print verbatim: the
//! matrix of an arrow `e` has shape `n_src × n_tgt` and acts on row vectors,
//! so a path evaluates to the product of its matrices in path order:
//! ρ(pq) = ρ(p)ρ(q). In particular the moment element `ee* − e*e` evaluates
//! to the commutator [ρ(e), ρ(e*)].

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::dg::DgPresentation;
use crate::error::{Error, Result};
use crate::poly::{Alphabet, NCPolynomial, Path};
use crate::qmat::{float_rank, QMat};
use crate::quiver::DimensionVector;
use crate::scalar::{rat_to_f64, Rat, RatSampler};

/// Default residual tolerance for float solutions.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Default relative singular-value threshold for float ranks.
pub const RANK_TOL: f64 = 1e-8;

/// Assignment of a matrix to each degree-0 generator, with exact rational
/// entries. Degree-nonzero generators are implicitly zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRep {
    dims: DimensionVector,
    mats: BTreeMap<u32, QMat>,
}

impl MatrixRep {
    /// Validates shapes: the matrix of `e` is `n_src(e) × n_tgt(e)`.
    pub fn new(
        alphabet: &Alphabet,
        dims: DimensionVector,
        mats: BTreeMap<u32, QMat>,
    ) -> Result<Self> {
        for (&g, m) in &mats {
            let s = alphabet.symbol(g);
            if s.degree != 0 {
                return Err(Error::Precondition(format!(
                    "`{}` is not a degree-0 generator",
                    s.name
                )));
            }
            if (m.rows, m.cols) != (dims.dim(s.src), dims.dim(s.tgt)) {
                return Err(Error::ShapeMismatch(format!(
                    "{}: got {}x{}, want {}x{}",
                    s.name,
                    m.rows,
                    m.cols,
                    dims.dim(s.src),
                    dims.dim(s.tgt)
                )));
            }
        }
        Ok(MatrixRep { dims, mats })
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn matrix(&self, gen: u32) -> Option<&QMat> {
        self.mats.get(&gen)
    }

    pub fn matrices(&self) -> impl Iterator<Item = (&u32, &QMat)> {
        self.mats.iter()
    }

    pub fn set_matrix(&mut self, gen: u32, m: QMat) {
        self.mats.insert(gen, m);
    }

    /// Random representation on all degree-0 generators.
    pub fn random(
        alphabet: &Alphabet,
        dims: &DimensionVector,
        sampler: &mut RatSampler,
    ) -> MatrixRep {
        let mut mats = BTreeMap::new();
        for (i, s) in alphabet.degree_zero_symbols() {
            let m = QMat::from_fn(dims.dim(s.src), dims.dim(s.tgt), |_, _| sampler.small());
            mats.insert(i, m);
        }
        MatrixRep {
            dims: dims.clone(),
            mats,
        }
    }

    /// Simultaneous conjugation by one invertible matrix per vertex:
    /// ρ(e) ↦ g_src ρ(e) g_tgt⁻¹.
    pub fn conjugate(&self, alphabet: &Alphabet, g: &[QMat]) -> Result<MatrixRep> {
        let inverses: Vec<QMat> = g
            .iter()
            .map(|m| {
                m.inverse()
                    .ok_or_else(|| Error::Precondition("singular conjugator".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut mats = BTreeMap::new();
        for (&i, m) in &self.mats {
            let s = alphabet.symbol(i);
            mats.insert(i, g[s.src].mul(m).mul(&inverses[s.tgt]));
        }
        Ok(MatrixRep {
            dims: self.dims.clone(),
            mats,
        })
    }
}

/// Evaluates a polynomial whose terms all share endpoints; `e_v` becomes the
/// identity of size `n_v` and a word becomes the product of its matrices in
/// path order. Generators without an assigned matrix evaluate to zero.
pub fn evaluate(p: &NCPolynomial, rep: &MatrixRep, alphabet: &Alphabet) -> Result<QMat> {
    let Some((src, tgt)) = p.common_endpoints(alphabet)? else {
        return Err(Error::Precondition(
            "cannot size the zero polynomial without endpoints".into(),
        ));
    };
    let mut acc = QMat::zeros(rep.dims.dim(src), rep.dims.dim(tgt));
    'terms: for (path, coeff) in p.terms() {
        let mut m = QMat::identity(rep.dims.dim(path.src(alphabet)));
        for &l in path.letters() {
            match rep.matrix(l) {
                Some(ml) => m = m.mul(ml),
                None => continue 'terms, // unassigned (degree < 0) generator: 0
            }
        }
        acc = acc.add(&m.scale(coeff));
    }
    Ok(acc)
}

/// Evaluates with all degree-negative generators set to zero and a fixed
/// endpoint pair (used for sizing zero polynomials).
pub fn evaluate_at(
    p: &NCPolynomial,
    rep: &MatrixRep,
    alphabet: &Alphabet,
    endpoints: (usize, usize),
) -> Result<QMat> {
    if p.is_zero() {
        return Ok(QMat::zeros(
            rep.dims.dim(endpoints.0),
            rep.dims.dim(endpoints.1),
        ));
    }
    evaluate(p, rep, alphabet)
}

/// The moment map at a vertex of a doubled quiver:
/// evaluate(Σ_e e_v(ee* − e*e)e_v) = Σ localized [ρ(e), ρ(e*)].
pub fn moment_map(
    rep: &MatrixRep,
    alphabet: &Alphabet,
    star_pairs: &[(u32, u32)],
    v: usize,
) -> Result<QMat> {
    let mut acc = NCPolynomial::zero();
    for &(e, es) in star_pairs {
        let fwd = NCPolynomial::from_path(Path::Word(vec![e]));
        let bwd = NCPolynomial::from_path(Path::Word(vec![es]));
        acc = acc.add(&fwd.commutator(&bwd, alphabet));
    }
    let local = acc.localize(v, alphabet);
    evaluate_at(&local, rep, alphabet, (v, v))
}

// ---------------------------------------------------------------------------
// Truncation systems
// ---------------------------------------------------------------------------

/// One matrix equation `evaluate(poly) = 0`, labeled by the generator whose
/// differential produced it.
#[derive(Clone, Debug)]
pub struct MatrixEquation {
    pub label: String,
    pub poly: NCPolynomial,
    pub endpoints: (usize, usize),
}

/// The equations of the 0-th truncation of a dg presentation, together with
/// its matrix variables (the degree-0 generators).
#[derive(Clone, Debug)]
pub struct PolySystem {
    pub alphabet: Alphabet,
    pub dims: DimensionVector,
    pub equations: Vec<MatrixEquation>,
    pub variables: Vec<u32>,
}

/// Extracts the truncation equations: one equation per degree-(−1)
/// generator, with every degree-negative generator evaluated as zero.
///
/// Degree-(−1) generators that occur linearly in a degree-(−2) differential
/// belong to contractible pairs; by d² = 0 their equations are exact
/// consequences of the remaining ones and are omitted, so the emitted system
/// is the printed truncation of the corresponding critical locus.
pub fn truncation_equations(p: &DgPresentation, dims: &DimensionVector) -> PolySystem {
    let alphabet = p.alphabet().clone();
    let eliminable = p.eliminable_deg_neg1();
    let mut equations = Vec::new();
    for g in p.generators_of_degree(-1) {
        if eliminable.contains(&g) {
            continue;
        }
        let info = p.alphabet().symbol(g);
        let poly: NCPolynomial = p
            .differential(g)
            .terms()
            .filter(|(path, _)| {
                path.letters()
                    .iter()
                    .all(|&l| p.alphabet().symbol(l).degree == 0)
            })
            .fold(NCPolynomial::zero(), |mut acc, (path, c)| {
                acc.add_term(path.clone(), c.clone());
                acc
            });
        equations.push(MatrixEquation {
            label: info.name.clone(),
            poly,
            endpoints: (info.src, info.tgt),
        });
    }
    let variables = p.generators_of_degree(0);
    PolySystem {
        alphabet,
        dims: dims.clone(),
        equations,
        variables,
    }
}

impl PolySystem {
    /// Renders `poly = 0`, isolating a lone starred variable on the right
    /// (the way the truncation systems are usually displayed).
    pub fn equation_string(&self, eq: &MatrixEquation) -> String {
        let star_term = eq.poly.terms().find(|(path, c)| {
            path.len() == 1
                && self.alphabet.symbol(path.letters()[0]).name.ends_with('*')
                && (c.clone() * c.clone()).is_one()
        });
        if let Some((path, coeff)) = star_term {
            let path = path.clone();
            let coeff = coeff.clone();
            let mut rest = eq.poly.clone();
            rest.add_term(path.clone(), -coeff.clone());
            // poly = rest + coeff·star = 0  ⇒  (-1/coeff)·rest = star
            let lhs = rest.scale(&(-Rat::from_integer(1.into()) / coeff));
            format!(
                "{} = {}",
                lhs.to_string(&self.alphabet),
                path.to_string(&self.alphabet)
            )
        } else {
            format!("{} = 0", eq.poly.to_string(&self.alphabet))
        }
    }

    pub fn render(&self) -> String {
        self.equations
            .iter()
            .map(|eq| format!("[{}]  {}", eq.label, self.equation_string(eq)))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Structural equality with an expected equation set: compares the
    /// normalized polynomials as sets (scale- and order-insensitive).
    pub fn matches_equations(&self, expected: &[NCPolynomial]) -> bool {
        if self.equations.len() != expected.len() {
            return false;
        }
        let mut mine: Vec<NCPolynomial> = self
            .equations
            .iter()
            .map(|e| e.poly.normalized())
            .collect();
        for exp in expected {
            let target = exp.normalized();
            match mine.iter().position(|p| *p == target) {
                Some(i) => {
                    mine.remove(i);
                }
                None => return false,
            }
        }
        true
    }

    /// Exact squared Frobenius norm of all equation evaluations stacked.
    pub fn residual_sq(&self, rep: &MatrixRep) -> Result<Rat> {
        let mut acc = Rat::zero();
        for eq in &self.equations {
            let m = evaluate_at(&eq.poly, rep, &self.alphabet, eq.endpoints)?;
            acc += m.frobenius_sq();
        }
        Ok(acc)
    }

    /// Frobenius norm of the stacked equation evaluations (as a float).
    /// Zero exactly when the representation solves the system.
    pub fn residual(&self, rep: &MatrixRep) -> Result<f64> {
        Ok(rat_to_f64(&self.residual_sq(rep)?).sqrt())
    }

    /// Total number of scalar variables.
    pub fn n_variables(&self) -> usize {
        self.variables
            .iter()
            .map(|&g| {
                let s = self.alphabet.symbol(g);
                self.dims.dim(s.src) * self.dims.dim(s.tgt)
            })
            .sum()
    }

    /// Exact Jacobian of the stacked equations at `rep`: rows are equation
    /// entries, columns are variable entries.
    pub fn jacobian(&self, rep: &MatrixRep) -> Result<QMat> {
        // column layout
        let mut col_of = BTreeMap::new();
        let mut ncols = 0usize;
        for &g in &self.variables {
            let s = self.alphabet.symbol(g);
            col_of.insert(g, ncols);
            ncols += self.dims.dim(s.src) * self.dims.dim(s.tgt);
        }
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for eq in &self.equations {
            let (rs, cs) = (self.dims.dim(eq.endpoints.0), self.dims.dim(eq.endpoints.1));
            let mut block = vec![vec![Rat::zero(); ncols]; rs * cs];
            for (path, coeff) in eq.poly.terms() {
                let letters = path.letters();
                for (k, &l) in letters.iter().enumerate() {
                    if !self.variables.contains(&l) {
                        continue;
                    }
                    // prefix and suffix products
                    let sym = self.alphabet.symbol(l);
                    let mut pre = QMat::identity(self.dims.dim(path.src(&self.alphabet)));
                    for &m in &letters[..k] {
                        match rep.matrix(m) {
                            Some(mm) => pre = pre.mul(mm),
                            None => pre = QMat::zeros(pre.rows, 0), // dead term
                        }
                        if pre.cols == 0 {
                            break;
                        }
                    }
                    if pre.cols == 0 {
                        continue;
                    }
                    let mut suf = QMat::identity(self.dims.dim(sym.tgt));
                    for &m in &letters[k + 1..] {
                        match rep.matrix(m) {
                            Some(mm) => suf = suf.mul(mm),
                            None => suf = QMat::zeros(suf.rows, 0),
                        }
                        if suf.cols == 0 {
                            break;
                        }
                    }
                    if suf.cols == 0 {
                        continue;
                    }
                    // d/d var(l)_{ij} of pre · X · suf = pre[:,i] ⊗ suf[j,:]
                    let (vr, vc) = (self.dims.dim(sym.src), self.dims.dim(sym.tgt));
                    for i in 0..vr {
                        for j in 0..vc {
                            let col = col_of[&l] + i * vc + j;
                            for r in 0..rs {
                                for c in 0..cs {
                                    let v = coeff * pre.at(r, i) * suf.at(j, c);
                                    if !v.is_zero() {
                                        block[r * cs + c][col] = &block[r * cs + c][col] + &v;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            rows.extend(block);
        }
        if rows.is_empty() {
            return Ok(QMat::zeros(0, ncols));
        }
        Ok(QMat::from_rows(rows))
    }

    /// Rank of the linearization at a solution. Exact rank for rational
    /// input; for float certification use [`PolySystem::jacobian_rank_float`].
    /// Errors when `rep` is not a solution.
    pub fn jacobian_rank(&self, rep: &MatrixRep) -> Result<usize> {
        let res = self.residual_sq(rep)?;
        if !res.is_zero() {
            return Err(Error::NotASolution(rat_to_f64(&res).sqrt()));
        }
        Ok(self.jacobian(rep)?.rank())
    }

    /// Float Jacobian rank with singular-value thresholding at `tol`
    /// (relative to the largest singular value). The residual must not
    /// exceed `tol` either.
    pub fn jacobian_rank_float(&self, rep: &MatrixRep, tol: f64) -> Result<usize> {
        let res = self.residual(rep)?;
        if res > tol {
            return Err(Error::NotASolution(res));
        }
        let j = self.jacobian(rep)?.to_f64();
        Ok(float_rank(&j, tol))
    }
}

// ---------------------------------------------------------------------------
// Gradient of the trace functional
// ---------------------------------------------------------------------------

/// The exact gradient of `chern0(W, ·)` with respect to the entries of
/// ρ(e) is the transpose of the evaluated cyclic derivative:
/// ∂ tr W / ∂ ρ(e) = evaluate(∂_eW)ᵀ. Returns the per-edge gradients.
pub fn chern0_gradient(
    w: &crate::poly::Potential,
    rep: &MatrixRep,
    alphabet: &Alphabet,
) -> Result<Vec<(u32, QMat)>> {
    let mut out = Vec::new();
    for (e, info) in alphabet.degree_zero_symbols() {
        let dw = crate::poly::cyclic_derivative(alphabet, w, e);
        let m = evaluate_at(&dw, rep, alphabet, (info.tgt, info.src))?;
        out.push((e, m.transpose()));
    }
    Ok(out)
}

/// Central finite-difference gradient of chern0 in float arithmetic.
pub fn chern0_gradient_fd(
    w: &crate::poly::Potential,
    rep: &MatrixRep,
    alphabet: &Alphabet,
    h: f64,
) -> Result<Vec<(u32, DMatrix<f64>)>> {
    let mut out = Vec::new();
    for (e, info) in alphabet.degree_zero_symbols() {
        let (r, c) = (rep.dims().dim(info.src), rep.dims().dim(info.tgt));
        let mut grad = DMatrix::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                let mut plus = rep.clone();
                let mut minus = rep.clone();
                let base = rep
                    .matrix(e)
                    .cloned()
                    .unwrap_or_else(|| QMat::zeros(r, c));
                let hq = crate::scalar::parse_rat(&format!(
                    "{}/{}",
                    (h * 1e12) as i64,
                    1_000_000_000_000i64
                ))?;
                let mut mp = base.clone();
                mp.add_at(i, j, &hq);
                plus.set_matrix(e, mp);
                let mut mm = base.clone();
                mm.add_at(i, j, &(-hq.clone()));
                minus.set_matrix(e, mm);
                let fp = rat_to_f64(&crate::hochschild::chern0(w, &plus, alphabet)?);
                let fm = rat_to_f64(&crate::hochschild::chern0(w, &minus, alphabet)?);
                grad[(i, j)] = (fp - fm) / (2.0 * h);
            }
        }
        out.push((e, grad));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Three-term tangent complex of the moment-map zero fiber
// ---------------------------------------------------------------------------

/// The three-term complex ⊕_v gl(n_v) → T Rep(Q̄) → ⊕_v gl(n_v) at a point
/// of the moment-map zero fiber: A is the infinitesimal conjugation action,
/// B the differential of the moment map. The symplectic pairing
/// ω(u, v) = Σ_e tr(u_e v_{e*} − u_{e*} v_e) identifies B with the
/// ω-transpose of A.
pub struct TangentComplex {
    pub alphabet: Alphabet,
    pub dims: DimensionVector,
    pub star_pairs: Vec<(u32, u32)>,
    pub point: MatrixRep,
}

/// A tangent direction on Rep(Q̄): one matrix per edge of the doubled quiver.
pub type TangentVector = BTreeMap<u32, QMat>;

impl TangentComplex {
    /// Requires moment_map(ρ) = 0 at every vertex.
    pub fn new(
        alphabet: Alphabet,
        dims: DimensionVector,
        star_pairs: Vec<(u32, u32)>,
        point: MatrixRep,
    ) -> Result<Self> {
        for v in 0..dims.dims().len() {
            let mu = moment_map(&point, &alphabet, &star_pairs, v)?;
            if !mu.is_zero() {
                return Err(Error::Precondition(format!(
                    "moment map does not vanish at vertex {v}"
                )));
            }
        }
        Ok(TangentComplex {
            alphabet,
            dims,
            star_pairs,
            point,
        })
    }

    fn edges(&self) -> Vec<u32> {
        self.star_pairs
            .iter()
            .flat_map(|&(e, es)| [e, es])
            .collect()
    }

    /// A(a): the infinitesimal conjugation a ↦ (a_src ρ(e) − ρ(e) a_tgt)_e.
    pub fn action(&self, a: &[QMat]) -> TangentVector {
        let mut out = BTreeMap::new();
        for e in self.edges() {
            let s = self.alphabet.symbol(e);
            let rho = self
                .point
                .matrix(e)
                .cloned()
                .unwrap_or_else(|| QMat::zeros(self.dims.dim(s.src), self.dims.dim(s.tgt)));
            out.insert(e, a[s.src].mul(&rho).sub(&rho.mul(&a[s.tgt])));
        }
        out
    }

    /// B(δ): the linearized moment map, per vertex.
    pub fn dmu(&self, delta: &TangentVector) -> Vec<QMat> {
        let mut out: Vec<QMat> = self
            .dims
            .dims()
            .iter()
            .map(|&n| QMat::zeros(n, n))
            .collect();
        for &(e, es) in &self.star_pairs {
            let se = self.alphabet.symbol(e);
            let ze = QMat::zeros(self.dims.dim(se.src), self.dims.dim(se.tgt));
            let zes = QMat::zeros(self.dims.dim(se.tgt), self.dims.dim(se.src));
            let rho_e = self.point.matrix(e).unwrap_or(&ze);
            let rho_es = self.point.matrix(es).unwrap_or(&zes);
            let d_e = delta.get(&e).unwrap_or(&ze);
            let d_es = delta.get(&es).unwrap_or(&zes);
            // δ(ρ(e)ρ(e*)) at src, δ(ρ(e*)ρ(e)) at tgt
            let at_src = d_e.mul(rho_es).add(&rho_e.mul(d_es));
            let at_tgt = d_es.mul(rho_e).add(&rho_es.mul(d_e));
            out[se.src] = out[se.src].add(&at_src);
            out[se.tgt] = out[se.tgt].sub(&at_tgt);
        }
        out
    }

    /// ω(u, v) = Σ_e tr(u_e v_{e*} − u_{e*} v_e).
    pub fn omega(&self, u: &TangentVector, v: &TangentVector) -> Rat {
        let mut acc = Rat::zero();
        for &(e, es) in &self.star_pairs {
            let se = self.alphabet.symbol(e);
            let ze = QMat::zeros(self.dims.dim(se.src), self.dims.dim(se.tgt));
            let zes = QMat::zeros(self.dims.dim(se.tgt), self.dims.dim(se.src));
            let ue = u.get(&e).unwrap_or(&ze);
            let ues = u.get(&es).unwrap_or(&zes);
            let ve = v.get(&e).unwrap_or(&ze);
            let ves = v.get(&es).unwrap_or(&zes);
            acc += ue.mul(ves).trace() - ues.mul(ve).trace();
        }
        acc
    }

    /// ⟨B(δ), a⟩ with the trace pairing on ⊕_v gl(n_v).
    pub fn pair_dmu(&self, delta: &TangentVector, a: &[QMat]) -> Rat {
        self.dmu(delta)
            .iter()
            .zip(a.iter())
            .map(|(b, av)| b.mul(av).trace())
            .sum()
    }

    /// Basis of ⊕_v gl(n_v): elementary matrices at each vertex.
    pub fn glnv_basis(&self) -> Vec<Vec<QMat>> {
        let mut out = Vec::new();
        for (v, &n) in self.dims.dims().iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let mut a: Vec<QMat> =
                        self.dims.dims().iter().map(|&m| QMat::zeros(m, m)).collect();
                    a[v].set(i, j, Rat::from_integer(1.into()));
                    out.push(a);
                }
            }
        }
        out
    }

    /// Basis of T Rep(Q̄): elementary matrices at each doubled edge.
    pub fn tangent_basis(&self) -> Vec<TangentVector> {
        let mut out = Vec::new();
        for e in self.edges() {
            let s = self.alphabet.symbol(e);
            let (r, c) = (self.dims.dim(s.src), self.dims.dim(s.tgt));
            for i in 0..r {
                for j in 0..c {
                    let mut m = QMat::zeros(r, c);
                    m.set(i, j, Rat::from_integer(1.into()));
                    let mut t = BTreeMap::new();
                    t.insert(e, m);
                    out.push(t);
                }
            }
        }
        out
    }

    /// Certifies B∘A = 0 exactly on the gl-basis.
    pub fn composite_vanishes(&self) -> bool {
        self.glnv_basis().iter().all(|a| {
            self.dmu(&self.action(a))
                .iter()
                .all(|m| m.is_zero())
        })
    }

    /// Certifies the self-duality ⟨B(δ), a⟩ = ω(A(a), δ) over all basis
    /// pairs, exactly.
    pub fn self_duality_holds(&self) -> bool {
        let gl = self.glnv_basis();
        let tv = self.tangent_basis();
        gl.iter().all(|a| {
            let aa = self.action(a);
            tv.iter()
                .all(|d| self.pair_dmu(d, a) == self.omega(&aa, d))
        })
    }
}

/// A seeded exact solution of the commuting-variety system on the doubled
/// Jordan quiver: x random, x* a polynomial in x.
pub fn commuting_pair(n: usize, sampler: &mut RatSampler) -> (QMat, QMat) {
    let x = QMat::from_fn(n, n, |_, _| sampler.small());
    let mut xstar = QMat::zeros(n, n);
    let mut power = QMat::identity(n);
    for _ in 0..n.min(3) {
        let c = sampler.small();
        xstar = xstar.add(&power.scale(&c));
        power = power.mul(&x);
    }
    (x, xstar)
}
