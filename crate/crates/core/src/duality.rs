//! The algebras A(Δ) = k[Δ]/⟨Θ⟩ and B(Δ) = A(Δ)/J, socles, pairings into
//! the top degree, and the cone lemma.

use serde::{Deserialize, Serialize};

use crate::exactlinalg::{Echelon, PrimeField, SparseMatrix, SparseVec};
use crate::facering::{quotient_presentation, GradedQuotientPresentation, LinearFormSequence, Monomial};
use crate::partition::PartitionComplexSpec;
use crate::simplicial::{RelativeComplex, SimplicialComplex};
use crate::{Result, SrError};

/// A finite graded algebra generated in degree one, in explicit coordinates.
pub trait GradedAlgebra {
    fn field(&self) -> PrimeField;
    /// Degrees above this are zero.
    fn max_degree(&self) -> usize;
    fn dim(&self, j: usize) -> usize;
    /// Multiplication by each degree-one generator, A_j → A_{j+1}.
    fn generator_actions(&self, j: usize) -> Vec<SparseMatrix>;
    /// Coordinates of e_a · e_b for basis elements e_a ∈ A_i, e_b ∈ A_k.
    fn product(&self, i: usize, a: usize, k: usize, b: usize) -> SparseVec;

    /// Multiplication by Σ form[g]·x_g.
    fn form_action(&self, form: &[u64], j: usize) -> SparseMatrix {
        let f = self.field();
        let acts = self.generator_actions(j);
        let cols = (0..self.dim(j))
            .map(|c| {
                let mut acc = vec![0u64; self.dim(j + 1)];
                for (g, m) in acts.iter().enumerate() {
                    let x = form.get(g).copied().unwrap_or(0);
                    if x == 0 {
                        continue;
                    }
                    for &(r, y) in m.column(c) {
                        acc[r] = f.add(acc[r], f.mul(x, y));
                    }
                }
                acc.into_iter().enumerate().filter(|&(_, y)| y != 0).collect()
            })
            .collect();
        SparseMatrix::from_columns(f, self.dim(j + 1), cols)
    }

    /// ℓ^e : A_j → A_{j+e}.
    fn power_map(&self, form: &[u64], j: usize, e: usize) -> SparseMatrix {
        let f = self.field();
        let n = self.dim(j);
        let mut m = SparseMatrix::from_columns(f, n, (0..n).map(|i| vec![(i, 1)]).collect());
        for s in 0..e {
            m = self.form_action(form, j + s).mul(&m).expect("composable");
        }
        m
    }

    fn dims(&self) -> Vec<usize> {
        (0..=self.max_degree()).map(|j| self.dim(j)).collect()
    }
}

impl GradedAlgebra for GradedQuotientPresentation {
    fn field(&self) -> PrimeField {
        GradedQuotientPresentation::field(self)
    }

    fn max_degree(&self) -> usize {
        self.computed_degree()
    }

    fn dim(&self, j: usize) -> usize {
        GradedQuotientPresentation::dim(self, j)
    }

    fn generator_actions(&self, j: usize) -> Vec<SparseMatrix> {
        self.variable_actions(j)
    }

    fn product(&self, i: usize, a: usize, k: usize, b: usize) -> SparseVec {
        self.monomial_class(&self.representative(i, a).times(self.representative(k, b)))
    }

    fn form_action(&self, form: &[u64], j: usize) -> SparseMatrix {
        self.mult_matrix_sparse(form, j)
    }
}

/// B(Δ) = A(Δ)/J, where J_i is the kernel of A_i → ⊕_v A(st_vΔ)_i for
/// i ≤ d and J_{d+1} = 0.
#[derive(Debug, Clone)]
pub struct DualityPresentation {
    base: GradedQuotientPresentation,
    j_ideal: Vec<Echelon>,
    coord: Vec<Vec<Option<usize>>>,
    basis: Vec<Vec<usize>>,
    fundamental_degree: usize,
}

impl DualityPresentation {
    /// Computes J degreewise with no manifold check.
    pub fn new(base: GradedQuotientPresentation) -> Result<Self> {
        base.require_finite()?;
        let psi = base.psi().clone();
        let n = psi.max_face_card();
        let spec = PartitionComplexSpec::full(&psi);
        let reduced = spec.reduce(base.theta(), 2)?;
        let field = base.field();
        let mut j_ideal = Vec::new();
        let mut coord = Vec::new();
        let mut basis = Vec::new();
        for i in 0..=base.computed_degree() {
            let mut ech = Echelon::new(field, base.dim(i));
            if i < n && reduced.columns() > 1 {
                for v in reduced.map(0, i).to_dense().kernel_basis() {
                    ech.insert_dense(v);
                }
            }
            let reps = ech.non_pivots();
            let mut c = vec![None; base.dim(i)];
            for (k, &r) in reps.iter().enumerate() {
                c[r] = Some(k);
            }
            j_ideal.push(ech);
            coord.push(c);
            basis.push(reps);
        }
        Ok(DualityPresentation { base, j_ideal, coord, basis, fundamental_degree: n })
    }

    pub fn base(&self) -> &GradedQuotientPresentation {
        &self.base
    }

    pub fn fundamental_degree(&self) -> usize {
        self.fundamental_degree
    }

    pub fn j_dim(&self, i: usize) -> usize {
        self.j_ideal.get(i).map_or(0, |e| e.rank())
    }

    pub fn j_dims(&self) -> Vec<usize> {
        (0..self.j_ideal.len()).map(|i| self.j_dim(i)).collect()
    }

    pub fn b_dims(&self) -> Vec<usize> {
        self.dims()
    }

    /// A basis of J_i in A-coordinates.
    pub fn j_basis(&self, i: usize) -> Vec<SparseVec> {
        let Some(e) = self.j_ideal.get(i) else {
            return Vec::new();
        };
        let dim = e.dim();
        let mut out = Vec::new();
        for p in e.pivots() {
            let mut v = vec![0u64; dim];
            v[p] = 1;
            e.reduce_dense(&mut v);
            // e_p minus its normal form lies in J
            let f = self.base.field();
            let mut w: SparseVec = v.iter().enumerate().filter(|&(_, &x)| x != 0).map(|(k, &x)| (k, f.neg(x))).collect();
            w.push((p, 1));
            w.sort_unstable();
            out.push(w);
        }
        out
    }

    /// Monomial representing basis element k of B_i.
    pub fn basis_monomial(&self, i: usize, k: usize) -> &Monomial {
        self.base.representative(i, self.basis[i][k])
    }

    /// Projects A-coordinates in degree i to B-coordinates.
    pub fn project(&self, i: usize, v: &SparseVec) -> SparseVec {
        match self.j_ideal.get(i) {
            Some(e) => e.normal_form(v, &self.coord[i]),
            None => Vec::new(),
        }
    }

    /// A_i → B_i as a matrix.
    pub fn projection(&self, i: usize) -> SparseMatrix {
        let f = self.base.field();
        let cols = (0..self.base.dim(i)).map(|k| self.project(i, &vec![(k, 1)])).collect();
        SparseMatrix::from_columns(f, self.dim(i), cols)
    }
}

impl GradedAlgebra for DualityPresentation {
    fn field(&self) -> PrimeField {
        self.base.field()
    }

    fn max_degree(&self) -> usize {
        self.base.computed_degree()
    }

    fn dim(&self, j: usize) -> usize {
        self.basis.get(j).map_or(0, |b| b.len())
    }

    fn generator_actions(&self, j: usize) -> Vec<SparseMatrix> {
        let n = self.base.psi().ground_size();
        (0..n).map(|v| self.form_action(&LinearFormSequence::variable(n, v), j)).collect()
    }

    fn product(&self, i: usize, a: usize, k: usize, b: usize) -> SparseVec {
        let m = self.basis_monomial(i, a).times(self.basis_monomial(k, b));
        self.project(i + k, &self.base.monomial_class(&m))
    }

    fn form_action(&self, form: &[u64], j: usize) -> SparseMatrix {
        let f = self.field();
        let a = self.base.mult_matrix_sparse(form, j);
        let cols = self.basis[j].iter().map(|&k| self.project(j + 1, a.column(k))).collect();
        SparseMatrix::from_columns(f, self.dim(j + 1), cols)
    }
}

/// Checks that every link of a nonempty face has the cohomology of a sphere
/// of the right dimension, that Δ is pure and connected, and that
/// dim H^d(Δ; F_p) = 1.
pub fn manifold_sanity(delta: &SimplicialComplex, field: PrimeField) -> Result<()> {
    let d = delta.dim().filter(|&d| d >= 0).ok_or_else(|| SrError::NotManifold("no vertices".into()))?;
    if !delta.is_pure() {
        return Err(SrError::NotManifold("not pure".into()));
    }
    for &tau in delta.faces().iter().filter(|f| !f.is_empty()) {
        let link = RelativeComplex::absolute(delta.link(tau));
        let top = d - tau.len() as i32;
        let h = link.relative_cohomology_dims(field);
        if h.dims.iter().any(|(&i, &b)| b != usize::from(i == top)) || h.get(top) != 1 {
            return Err(SrError::NotManifold(format!(
                "link of {} is not a homology {top}-sphere over {field}: {:?}",
                delta.label_face(tau),
                h.dims
            )));
        }
    }
    let h = RelativeComplex::absolute(delta.clone()).relative_cohomology_dims(field);
    if d > 0 && h.get(0) != 0 {
        return Err(SrError::NotManifold("not connected".into()));
    }
    if h.get(d) != 1 {
        return Err(SrError::NotManifold(format!("dim H^{d} = {} over {field}, expected 1", h.get(d))));
    }
    Ok(())
}

/// B(Δ) after the manifold sanity check.
pub fn build_b(delta: &SimplicialComplex, theta: &LinearFormSequence) -> Result<DualityPresentation> {
    manifold_sanity(delta, theta.field)?;
    let psi = RelativeComplex::absolute(delta.clone());
    DualityPresentation::new(quotient_presentation(&psi, theta))
}

/// Per degree, the joint kernel of all degree-one multiplications.
pub fn socle_dims(a: &impl GradedAlgebra) -> Vec<usize> {
    (0..=a.max_degree())
        .map(|j| {
            let acts = a.generator_actions(j);
            let step = a.dim(j + 1);
            let cols = (0..a.dim(j))
                .map(|c| {
                    acts.iter()
                        .enumerate()
                        .flat_map(|(g, m)| m.column(c).iter().map(move |&(r, x)| (g * step + r, x)))
                        .collect()
                })
                .collect();
            a.dim(j) - SparseMatrix::from_columns(a.field(), acts.len() * step, cols).rank()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingRank {
    pub degree: usize,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    pub full: bool,
}

/// Rank of A_i × A_{n-i} → A_n ≅ k.
pub fn pairing_rank(a: &impl GradedAlgebra, n: usize, i: usize) -> Result<PairingRank> {
    if a.dim(n) != 1 {
        return Err(SrError::NotCandidate(format!("dim of degree {n} is {}, not 1", a.dim(n))));
    }
    if i > n {
        return Err(SrError::Input(format!("pairing degree {i} exceeds {n}")));
    }
    let (rows, cols) = (a.dim(i), a.dim(n - i));
    let columns = (0..cols)
        .map(|b| {
            (0..rows)
                .filter_map(|r| a.product(i, r, n - i, b).first().map(|&(_, x)| (r, x)))
                .collect()
        })
        .collect();
    let rank = SparseMatrix::from_columns(a.field(), rows, columns).rank();
    Ok(PairingRank { degree: i, rank, rows, cols, full: rank == rows && rank == cols })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdVerdict {
    pub fundamental_degree: usize,
    pub dims: Vec<usize>,
    pub socle_dims: Vec<usize>,
    pub pairings: Vec<PairingRank>,
    /// Pairings are all perfect and nothing lives above n.
    pub pairing_route: bool,
    /// The socle is exactly the one-dimensional top degree.
    pub socle_route: bool,
    pub holds: bool,
}

pub fn is_poincare_duality_algebra(a: &impl GradedAlgebra, n: usize) -> PdVerdict {
    let dims = a.dims();
    let socle = socle_dims(a);
    let vanishes_above = dims.iter().skip(n + 1).all(|&x| x == 0);
    let pairings: Vec<PairingRank> = if a.dim(n) == 1 {
        (0..=n).map(|i| pairing_rank(a, n, i).expect("top degree is a line")).collect()
    } else {
        Vec::new()
    };
    let pairing_route = vanishes_above && a.dim(n) == 1 && pairings.iter().all(|p| p.full);
    let socle_route = a.dim(n) == 1 && socle.iter().enumerate().all(|(j, &s)| s == if j == n { 1 } else { 0 });
    PdVerdict {
        fundamental_degree: n,
        holds: pairing_route && socle_route,
        dims,
        socle_dims: socle,
        pairings,
        pairing_route,
        socle_route,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeLemmaVerdict {
    pub vertex: String,
    pub star_dims: Vec<usize>,
    /// dim A(st°_v)_{j+1}, aligned with `star_dims`.
    pub open_star_dims_shifted: Vec<usize>,
    /// Multiplication by x_v is square and invertible in each degree.
    pub bijective: Vec<bool>,
    pub pass: bool,
}

/// A(st_vΔ)_j → A(st°_vΔ)_{j+1}, multiplication by x_v, in quotient
/// coordinates.
pub fn cone_map(star: &GradedQuotientPresentation, open: &GradedQuotientPresentation, v: usize, j: usize) -> SparseMatrix {
    let cols = star.representatives(j).into_iter().map(|m| open.monomial_class(&m.times_var(v))).collect();
    SparseMatrix::from_columns(star.field(), open.dim(j + 1), cols)
}

pub fn cone_lemma_check(delta: &RelativeComplex, v: usize, theta: &LinearFormSequence) -> Result<ConeLemmaVerdict> {
    if !delta.delta.contains(crate::Face::singleton(v)) {
        return Err(SrError::Input(format!("vertex {v} is not in Δ")));
    }
    let star = quotient_presentation(&delta.star(crate::Face::singleton(v)), theta);
    let open = quotient_presentation(&delta.open_star(crate::Face::singleton(v)), theta);
    star.require_finite()?;
    open.require_finite()?;
    let top = delta.max_face_card();
    let star_dims: Vec<usize> = (0..=top).map(|j| star.dim(j)).collect();
    let open_dims: Vec<usize> = (0..=top).map(|j| open.dim(j + 1)).collect();
    let bijective: Vec<bool> = (0..=top)
        .map(|j| star.dim(j) == open.dim(j + 1) && cone_map(&star, &open, v, j).rank() == star.dim(j))
        .collect();
    Ok(ConeLemmaVerdict {
        vertex: delta.labels()[v].clone(),
        pass: bijective.iter().all(|&b| b),
        star_dims,
        open_star_dims_shifted: open_dims,
        bijective,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectivityRow {
    pub vertex: String,
    pub degree: usize,
    pub source_dim: usize,
    pub rank_into_a: usize,
    pub rank_into_b: usize,
}

/// Ranks of A(st°_vΔ)_j → A(Δ)_j and → B(Δ)_j for every vertex and degree.
pub fn open_star_injectivity(b: &DualityPresentation) -> Vec<InjectivityRow> {
    let a = b.base();
    let psi = a.psi();
    let mut out = Vec::new();
    for v in psi.delta.vertices() {
        let open = quotient_presentation(&psi.open_star(crate::Face::singleton(v)), a.theta());
        for j in 0..=b.fundamental_degree() {
            let cols: Vec<SparseVec> = open.representatives(j).into_iter().map(|m| a.monomial_class(m)).collect();
            let into_a = SparseMatrix::from_columns(a.field(), a.dim(j), cols.clone());
            let into_b = SparseMatrix::from_columns(a.field(), b.dim(j), cols.iter().map(|c| b.project(j, c)).collect());
            out.push(InjectivityRow {
                vertex: psi.labels()[v].clone(),
                degree: j,
                source_dim: open.dim(j),
                rank_into_a: into_a.rank(),
                rank_into_b: into_b.rank(),
            });
        }
    }
    out
}
