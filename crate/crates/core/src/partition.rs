//! Partition complexes: Čech-type complexes of face modules, their quotients
//! by Θ, and their tensor products with Koszul complexes.
//!
//! Every variant is a list of columns P^{-1}, P^0, … whose summands are face
//! modules k[M] of pieces M of Δ. Maps restrict monomials (a monomial maps to
//! itself when its support is a face of the target, to zero otherwise) and
//! scale by a small integer coefficient.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::exactlinalg::{chain_homology_dims, ChainComplexSpec, FieldMatrix, PrimeField, SparseMatrix, SparseVec};
use crate::facering::{monomial_basis, quotient_presentation, GradedQuotientPresentation, LinearFormSequence};
use crate::koszul::KoszulSpec;
use crate::simplicial::{label_of, ComplexJson, Face, RelativeComplex, SimplicialComplex};
use crate::{binomial, Result, SrError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Full,
    Interior,
    Subdivision,
}

#[derive(Debug, Clone)]
pub struct Summand {
    pub label: String,
    pub module: RelativeComplex,
}

#[derive(Debug, Clone)]
pub struct PartitionComplexSpec {
    psi: RelativeComplex,
    variant: Variant,
    columns: Vec<Vec<Summand>>,
    /// `maps[c][a]`: targets in column c+1 of summand a of column c.
    maps: Vec<Vec<Vec<(usize, i64)>>>,
}

/// Čech complex over the given nonempty faces, graded by size. Summands with
/// a void module are dropped.
fn cech(
    psi: &RelativeComplex,
    variant: Variant,
    faces: impl Iterator<Item = Face>,
    module_of: impl Fn(Face) -> RelativeComplex,
) -> PartitionComplexSpec {
    let mut by_size: Vec<Vec<(Face, RelativeComplex)>> = vec![Vec::new()];
    for tau in faces.filter(|t| !t.is_empty()) {
        let m = module_of(tau);
        if m.is_void() {
            continue;
        }
        while by_size.len() <= tau.len() {
            by_size.push(Vec::new());
        }
        by_size[tau.len()].push((tau, m));
    }
    while by_size.len() > 1 && by_size.last().is_some_and(|c| c.is_empty()) {
        by_size.pop();
    }
    let mut columns = vec![vec![Summand { label: "∅".into(), module: psi.clone() }]];
    let mut keys = vec![vec![Face::EMPTY]];
    for col in by_size.into_iter().skip(1) {
        keys.push(col.iter().map(|(t, _)| *t).collect());
        columns.push(
            col.into_iter()
                .map(|(t, module)| Summand { label: psi.delta.label_face(t), module })
                .collect(),
        );
    }
    let mut maps = Vec::new();
    for c in 0..keys.len().saturating_sub(1) {
        let index: BTreeMap<Face, usize> = keys[c + 1].iter().enumerate().map(|(i, &t)| (t, i)).collect();
        maps.push(
            keys[c]
                .iter()
                .map(|&tau| {
                    (0..psi.ground_size())
                        .filter(|&v| !tau.contains(v))
                        .filter_map(|v| {
                            let t = tau.with(v);
                            index.get(&t).map(|&b| (b, if t.position(v) % 2 == 1 { -1 } else { 1 }))
                        })
                        .collect()
                })
                .collect(),
        );
    }
    PartitionComplexSpec { psi: psi.clone(), variant, columns, maps }
}

/// Number of degree-j monomials with support exactly ρ.
pub fn support_multiplicity(rho: Face, j: usize) -> usize {
    if rho.is_empty() {
        return usize::from(j == 0);
    }
    binomial(j as i64 - 1, rho.len() as i64 - 1) as usize
}

impl PartitionComplexSpec {
    /// P^{-1} = k[Ψ], P^i = ⊕_{τ ∈ Δ, |τ| = i+1} k[st_τΨ].
    pub fn full(psi: &RelativeComplex) -> Self {
        cech(psi, Variant::Full, psi.delta.faces().iter().copied(), |t| psi.star(t))
    }

    /// P^{-1} = k[Δ] and summands k[st_τΔ] over strongly interior faces τ,
    /// i.e. faces with no vertex on `boundary`.
    pub fn interior(delta: &SimplicialComplex, boundary: &SimplicialComplex) -> Self {
        let psi = RelativeComplex::absolute(delta.clone());
        let on_boundary = boundary.vertex_set();
        let faces = delta.faces().iter().copied().filter(|t| t.is_disjoint(on_boundary));
        cech(&psi, Variant::Interior, faces, |t| RelativeComplex::absolute(delta.star(t)))
    }

    pub fn psi(&self) -> &RelativeComplex {
        &self.psi
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn lo(&self) -> i32 {
        -1
    }

    pub fn hi(&self) -> i32 {
        self.columns.len() as i32 - 2
    }

    pub fn columns(&self) -> &[Vec<Summand>] {
        &self.columns
    }

    /// Summands of P^i.
    pub fn column(&self, i: i32) -> &[Summand] {
        self.columns.get((i + 1) as usize).map_or(&[], |c| c.as_slice())
    }

    fn coefficient(field: PrimeField, c: i64) -> u64 {
        field.from_i64(c)
    }

    /// The piece of P* spanned by a monomial with support ρ: one copy of k
    /// for every summand whose module contains ρ.
    pub fn fine_complex(&self, rho: Face, field: PrimeField) -> ChainComplexSpec {
        let present: Vec<Vec<Option<usize>>> = self
            .columns
            .iter()
            .map(|col| {
                let mut k = 0;
                col.iter()
                    .map(|s| {
                        s.module.contains(rho).then(|| {
                            k += 1;
                            k - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = present.iter().map(|p| p.iter().flatten().count()).collect();
        let mut cx = ChainComplexSpec::new(field, -1, dims.clone());
        for c in 0..self.maps.len() {
            let cols = self.maps[c]
                .iter()
                .enumerate()
                .filter(|&(a, _)| present[c][a].is_some())
                .map(|(_, targets)| {
                    let mut col: SparseVec = targets
                        .iter()
                        .filter_map(|&(b, x)| present[c + 1][b].map(|r| (r, Self::coefficient(field, x))))
                        .filter(|&(_, x)| x != 0)
                        .collect();
                    col.sort_unstable();
                    col
                })
                .collect();
            cx.set_differential(c as i32 - 1, SparseMatrix::from_columns(field, dims[c + 1], cols))
                .expect("shapes agree");
        }
        cx
    }

    /// Coarse degree-j piece, assembled from monomial bases of every summand.
    pub fn graded_piece(&self, j: usize, field: PrimeField) -> ChainComplexSpec {
        let bases: Vec<Vec<_>> = self
            .columns
            .iter()
            .map(|col| col.iter().map(|s| monomial_basis(&s.module, j)).collect::<Vec<_>>())
            .collect();
        let offsets: Vec<Vec<usize>> = bases
            .iter()
            .map(|col| {
                col.iter()
                    .scan(0, |acc, b| {
                        let o = *acc;
                        *acc += b.len();
                        Some(o)
                    })
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = bases.iter().map(|col| col.iter().map(|b| b.len()).sum()).collect();
        let mut cx = ChainComplexSpec::new(field, -1, dims.clone());
        for c in 0..self.maps.len() {
            let mut cols = Vec::with_capacity(dims[c]);
            for (a, targets) in self.maps[c].iter().enumerate() {
                for m in bases[c][a].monomials() {
                    let supp = m.support();
                    let mut col: SparseVec = targets
                        .iter()
                        .filter(|&&(b, _)| self.columns[c + 1][b].module.contains(supp))
                        .map(|&(b, x)| {
                            (offsets[c + 1][b] + bases[c + 1][b].index_of(m).expect("face of target"), field.from_i64(x))
                        })
                        .filter(|&(_, x)| x != 0)
                        .collect();
                    col.sort_unstable();
                    cols.push(col);
                }
            }
            cx.set_differential(c as i32 - 1, SparseMatrix::from_columns(field, dims[c + 1], cols))
                .expect("shapes agree");
        }
        cx
    }

    /// Homology of P* in degrees `0..=max_degree`, summed over fine degrees:
    /// the piece of a monomial depends only on its support.
    pub fn homology_dims(&self, max_degree: usize, field: PrimeField) -> Result<BTreeMap<(i32, usize), usize>> {
        let mut out = BTreeMap::new();
        for i in self.lo()..=self.hi() {
            for j in 0..=max_degree {
                out.insert((i, j), 0);
            }
        }
        for &rho in self.psi.delta.faces() {
            let h = chain_homology_dims(&self.fine_complex(rho, field))?;
            for (&i, &dim) in h.iter().filter(|(_, &d)| d > 0) {
                for j in 0..=max_degree {
                    *out.get_mut(&(i, j)).expect("window") += dim * support_multiplicity(rho, j);
                }
            }
        }
        Ok(out)
    }

    /// Same table from the coarse assemblies.
    pub fn homology_dims_coarse(&self, max_degree: usize, field: PrimeField) -> Result<BTreeMap<(i32, usize), usize>> {
        let mut out = BTreeMap::new();
        for j in 0..=max_degree {
            let h = chain_homology_dims(&self.graded_piece(j, field))?;
            for i in self.lo()..=self.hi() {
                out.insert((i, j), h.get(&i).copied().unwrap_or(0));
            }
        }
        Ok(out)
    }

    /// Quotient presentations of the first `columns` columns by Θ.
    pub fn reduce(&self, theta: &LinearFormSequence, columns: usize) -> Result<ReducedPartitionComplex<'_>> {
        let quotients = self.columns[..columns.min(self.columns.len())]
            .iter()
            .map(|col| {
                col.iter()
                    .map(|s| {
                        let q = quotient_presentation(&s.module, theta);
                        q.require_finite()?;
                        Ok(q)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ReducedPartitionComplex { spec: self, quotients })
    }
}

/// P*/⟨Θ⟩ on a prefix of the columns, in quotient coordinates.
pub struct ReducedPartitionComplex<'a> {
    spec: &'a PartitionComplexSpec,
    quotients: Vec<Vec<GradedQuotientPresentation>>,
}

impl ReducedPartitionComplex<'_> {
    pub fn field(&self) -> PrimeField {
        self.quotients[0][0].field()
    }

    pub fn columns(&self) -> usize {
        self.quotients.len()
    }

    pub fn quotient(&self, c: usize, a: usize) -> &GradedQuotientPresentation {
        &self.quotients[c][a]
    }

    pub fn dim(&self, c: usize, j: usize) -> usize {
        self.quotients[c].iter().map(|q| q.dim(j)).sum()
    }

    /// Column c → column c+1 in degree j.
    pub fn map(&self, c: usize, j: usize) -> SparseMatrix {
        let field = self.field();
        let offsets: Vec<usize> = self.quotients[c + 1]
            .iter()
            .scan(0, |acc, q| {
                let o = *acc;
                *acc += q.dim(j);
                Some(o)
            })
            .collect();
        let mut cols = Vec::with_capacity(self.dim(c, j));
        for (a, q) in self.quotients[c].iter().enumerate() {
            for m in q.representatives(j) {
                let mut col: SparseVec = Vec::new();
                for &(b, x) in &self.spec.maps[c][a] {
                    let x = field.from_i64(x);
                    for (k, v) in self.quotients[c + 1][b].monomial_class(m) {
                        col.push((offsets[b] + k, field.mul(x, v)));
                    }
                }
                col.retain(|&(_, v)| v != 0);
                col.sort_unstable();
                cols.push(col);
            }
        }
        SparseMatrix::from_columns(field, self.dim(c + 1, j), cols)
    }

    /// dim ker(P^{-1}/Θ → P^0/Θ) in degree j.
    pub fn first_kernel_dim(&self, j: usize) -> usize {
        self.dim(0, j) - self.map(0, j).rank()
    }

    pub fn piece(&self, j: usize) -> ChainComplexSpec {
        let dims = (0..self.columns()).map(|c| self.dim(c, j)).collect();
        let mut cx = ChainComplexSpec::new(self.field(), -1, dims);
        for c in 0..self.columns() - 1 {
            cx.set_differential(c as i32 - 1, self.map(c, j)).expect("shapes agree");
        }
        cx
    }
}

/// dim H^i(P*)_j for degrees `0..=max_degree`.
pub fn partition_homology_dims(
    psi: &RelativeComplex,
    max_degree: usize,
    field: PrimeField,
) -> Result<BTreeMap<(i32, usize), usize>> {
    PartitionComplexSpec::full(psi).homology_dims(max_degree, field)
}

/// Degree window for (i, j) tables: j ∈ [0, d+2].
pub fn degree_window(psi: &RelativeComplex) -> usize {
    psi.max_face_card() + 1
}

/// dim H^i(P*/⟨Θ⟩)_j over the window j ∈ [0, d+2].
pub fn reduced_partition_homology(
    psi: &RelativeComplex,
    theta: &LinearFormSequence,
) -> Result<BTreeMap<(i32, usize), usize>> {
    let spec = PartitionComplexSpec::full(psi);
    let reduced = spec.reduce(theta, usize::MAX)?;
    let table: Vec<BTreeMap<i32, usize>> = (0..=degree_window(psi))
        .into_par_iter()
        .map(|j| chain_homology_dims(&reduced.piece(j)))
        .collect::<std::result::Result<_, _>>()?;
    let mut out = BTreeMap::new();
    for (j, h) in table.into_iter().enumerate() {
        for i in spec.lo()..=spec.hi() {
            out.insert((i, j), h.get(&i).copied().unwrap_or(0));
        }
    }
    Ok(out)
}

/// One coarse degree of P* ⊗ K*(Θ), with Koszul degrees shifted so that
/// α·e_S sits in degree deg α + n − |S|.
pub struct DoubleComplexSlice {
    pub degree: usize,
    field: PrimeField,
    n: usize,
    /// `dims[c][s]` = dim C^{c-1, s}.
    dims: Vec<Vec<usize>>,
    dh: Vec<Vec<SparseMatrix>>,
    dv: Vec<Vec<SparseMatrix>>,
}

fn offsets_of(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut acc = 0;
    sizes
        .map(|s| {
            let o = acc;
            acc += s;
            o
        })
        .collect()
}

impl DoubleComplexSlice {
    pub fn assemble(spec: &PartitionComplexSpec, theta: &LinearFormSequence, j: usize) -> Self {
        let field = theta.field;
        let n = theta.len();
        let ks: Vec<Vec<KoszulSpec>> = spec
            .columns
            .iter()
            .map(|col| col.iter().map(|s| KoszulSpec::new(&s.module, theta, j)).collect())
            .collect();
        let natural = |s: usize| (j + s).checked_sub(n);
        let dim_of = |k: &KoszulSpec, s: usize| natural(s).map_or(0, |a| k.dim(s, a));
        let dims: Vec<Vec<usize>> =
            ks.iter().map(|col| (0..=n).map(|s| col.iter().map(|k| dim_of(k, s)).sum()).collect()).collect();
        let mut dv = Vec::new();
        for (c, col) in ks.iter().enumerate() {
            let mut row = Vec::new();
            for s in 0..n {
                let row_off = offsets_of(col.iter().map(|k| dim_of(k, s + 1)));
                let mut cols = Vec::with_capacity(dims[c][s]);
                if let Some(a) = natural(s) {
                    for (idx, k) in col.iter().enumerate() {
                        for v in k.differential(s, a).columns() {
                            cols.push(v.iter().map(|&(r, x)| (row_off[idx] + r, x)).collect());
                        }
                    }
                }
                row.push(SparseMatrix::from_columns(field, dims[c][s + 1], cols));
            }
            dv.push(row);
        }
        let mut dh = Vec::new();
        for c in 0..spec.maps.len() {
            let mut row = Vec::new();
            for s in 0..=n {
                let mut cols = Vec::with_capacity(dims[c][s]);
                if let Some(a) = natural(s) {
                    let tgt = &ks[c + 1];
                    let row_off = offsets_of(tgt.iter().map(|k| k.dim(s, a)));
                    let wedges = binomial(n as i64, s as i64) as usize;
                    for (idx, k) in ks[c].iter().enumerate() {
                        for w in 0..wedges {
                            for m in k.basis(a).monomials() {
                                let supp = m.support();
                                let mut col: SparseVec = spec.maps[c][idx]
                                    .iter()
                                    .filter(|&&(b, _)| spec.columns[c + 1][b].module.contains(supp))
                                    .map(|&(b, x)| {
                                        let basis = tgt[b].basis(a);
                                        let r = row_off[b] + w * basis.len() + basis.index_of(m).expect("face of target");
                                        (r, field.from_i64(x))
                                    })
                                    .collect();
                                col.sort_unstable();
                                cols.push(col);
                            }
                        }
                    }
                }
                row.push(SparseMatrix::from_columns(field, dims[c + 1][s], cols));
            }
            dh.push(row);
        }
        DoubleComplexSlice { degree: j, field, n, dims, dh, dv }
    }

    fn ncols(&self) -> usize {
        self.dims.len()
    }

    /// Blocks (c, s) with c - 1 + s = k.
    fn blocks(&self, k: i32) -> Vec<(usize, usize)> {
        (0..self.ncols())
            .filter_map(|c| {
                let s = k - (c as i32 - 1);
                (0..=self.n as i32).contains(&s).then_some((c, s as usize))
            })
            .collect()
    }

    pub fn tot_dim(&self, k: i32) -> usize {
        self.blocks(k).iter().map(|&(c, s)| self.dims[c][s]).sum()
    }

    pub fn tot_range(&self) -> (i32, i32) {
        (-1, self.ncols() as i32 - 2 + self.n as i32)
    }

    /// Tot^k → Tot^{k+1}, with differential d^h + (-1)^k d^v.
    pub fn tot_differential(&self, k: i32) -> SparseMatrix {
        let f = self.field;
        let src = self.blocks(k);
        let tgt = self.blocks(k + 1);
        let tgt_off: BTreeMap<(usize, usize), usize> =
            tgt.iter().copied().zip(offsets_of(tgt.iter().map(|&(c, s)| self.dims[c][s]))).collect();
        let negate = k.rem_euclid(2) == 1;
        let mut cols = Vec::with_capacity(self.tot_dim(k));
        for &(c, s) in &src {
            for col in 0..self.dims[c][s] {
                let mut v: SparseVec = Vec::new();
                if c + 1 < self.ncols() {
                    let o = tgt_off[&(c + 1, s)];
                    v.extend(self.dh[c][s].column(col).iter().map(|&(r, x)| (o + r, x)));
                }
                if s < self.n {
                    let o = tgt_off[&(c, s + 1)];
                    v.extend(
                        self.dv[c][s].column(col).iter().map(|&(r, x)| (o + r, if negate { f.neg(x) } else { x })),
                    );
                }
                v.sort_unstable();
                cols.push(v);
            }
        }
        SparseMatrix::from_columns(f, self.tot_dim(k + 1), cols)
    }

    /// dim H^k(Tot) for every k in range.
    pub fn tot_homology(&self) -> BTreeMap<i32, usize> {
        let (lo, hi) = self.tot_range();
        let ranks: BTreeMap<i32, usize> = (lo..hi).map(|k| (k, self.tot_differential(k).rank())).collect();
        (lo..=hi)
            .map(|k| {
                let out = ranks.get(&k).copied().unwrap_or(0);
                let inc = ranks.get(&(k - 1)).copied().unwrap_or(0);
                (k, self.tot_dim(k) - out - inc)
            })
            .collect()
    }

    /// d^h d^v = d^v d^h on every block.
    pub fn differentials_commute(&self) -> bool {
        (0..self.ncols().saturating_sub(1)).all(|c| {
            (0..self.n).all(|s| {
                let a = self.dv[c + 1][s].mul(&self.dh[c][s]).expect("composable");
                let b = self.dh[c][s + 1].mul(&self.dv[c][s]).expect("composable");
                a == b
            })
        })
    }

    /// Homology of each row C^{*,s}, keyed by (i, s).
    pub fn horizontal_homology(&self) -> BTreeMap<(i32, usize), usize> {
        let mut out = BTreeMap::new();
        for s in 0..=self.n {
            let rank = |c: usize| if c < self.dh.len() { self.dh[c][s].rank() } else { 0 };
            let ranks: Vec<usize> = (0..self.ncols()).map(rank).collect();
            for c in 0..self.ncols() {
                let inc = if c > 0 { ranks[c - 1] } else { 0 };
                out.insert((c as i32 - 1, s), self.dims[c][s] - ranks[c] - inc);
            }
        }
        out
    }

    /// Homology of each column C^{i,*}, keyed by (i, s).
    pub fn vertical_homology(&self) -> BTreeMap<(i32, usize), usize> {
        let mut out = BTreeMap::new();
        for c in 0..self.ncols() {
            let ranks: Vec<usize> = (0..=self.n).map(|s| if s < self.n { self.dv[c][s].rank() } else { 0 }).collect();
            for s in 0..=self.n {
                let inc = if s > 0 { ranks[s - 1] } else { 0 };
                out.insert((c as i32 - 1, s), self.dims[c][s] - ranks[s] - inc);
            }
        }
        out
    }
}

/// dim H^k(Tot(P* ⊗ K*(Θ)))_j for j ∈ [0, d+2].
pub fn total_complex_homology(
    psi: &RelativeComplex,
    theta: &LinearFormSequence,
) -> BTreeMap<(i32, usize), usize> {
    let spec = PartitionComplexSpec::full(psi);
    let slices: Vec<BTreeMap<i32, usize>> = (0..=degree_window(psi))
        .into_par_iter()
        .map(|j| DoubleComplexSlice::assemble(&spec, theta, j).tot_homology())
        .collect();
    let mut out = BTreeMap::new();
    for (j, h) in slices.into_iter().enumerate() {
        for (k, d) in h {
            out.insert((k, j), d);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteriorVerdict {
    pub interior_vertices: Vec<String>,
    pub boundary_induced: bool,
    /// Supports ρ whose fine piece of P*_int has homology.
    pub nonexact_supports: Vec<String>,
    pub exact: bool,
    /// dim ker(A(Δ)_j → ⊕ A(st_vΔ)_j) for j = 0..=d.
    pub kernel_dims: Vec<usize>,
    pub injective_below_top: bool,
    pub diagnostics: Vec<String>,
}

/// Checks a disk Ψ = (Δ, ∂Δ): exactness of P*_int in every fine degree, and
/// injectivity of A(Δ) → ⊕_{interior v} A(st_vΔ) in degrees ≤ d.
pub fn interior_partition_check(disk: &RelativeComplex, theta: &LinearFormSequence) -> Result<InteriorVerdict> {
    let delta = &disk.delta;
    let boundary = &disk.gamma;
    let d = delta.dim().ok_or_else(|| SrError::Input("the disk is void".into()))?;
    if d < 0 {
        return Err(SrError::Input("the disk has no vertices".into()));
    }
    let field = theta.field;
    let mut diagnostics = Vec::new();
    if *boundary != delta.boundary() {
        diagnostics.push("Γ differs from the boundary complex of Δ".into());
    }
    let reduced = RelativeComplex::absolute(delta.clone()).relative_cohomology_dims(field);
    if !reduced.is_zero() {
        diagnostics.push(format!("Δ is not acyclic: {:?}", reduced.dims));
    }
    let sphere = RelativeComplex::absolute(boundary.clone()).relative_cohomology_dims(field);
    if sphere.dims.iter().any(|(&i, &b)| b != usize::from(i == d - 1)) {
        diagnostics.push(format!("Γ does not have the cohomology of a {}-sphere: {:?}", d - 1, sphere.dims));
    }
    let boundary_induced = match delta.is_induced(boundary) {
        None => true,
        Some(f) => {
            diagnostics.push(format!("boundary is not induced: {} has all vertices on it", delta.label_face(f)));
            false
        }
    };
    let spec = PartitionComplexSpec::interior(delta, boundary);
    let interior_vertices: Vec<String> = spec.column(0).iter().map(|s| s.label.clone()).collect();
    if interior_vertices.is_empty() {
        diagnostics.push("no interior vertices".into());
    }
    let mut nonexact_supports = Vec::new();
    for &rho in delta.faces() {
        let h = chain_homology_dims(&spec.fine_complex(rho, field))?;
        if h.values().any(|&x| x > 0) {
            nonexact_supports.push(delta.label_face(rho));
        }
    }
    let reduced = spec.reduce(theta, 2)?;
    let kernel_dims: Vec<usize> = (0..=d as usize)
        .map(|j| if reduced.columns() > 1 { reduced.first_kernel_dim(j) } else { reduced.dim(0, j) })
        .collect();
    Ok(InteriorVerdict {
        interior_vertices,
        boundary_induced,
        exact: nonexact_supports.is_empty(),
        nonexact_supports,
        injective_below_top: kernel_dims.iter().all(|&k| k == 0),
        kernel_dims,
        diagnostics,
    })
}

/// A cell σ of Σ: the subdivision Δ_σ it receives inside Δ and the
/// subdivision of ∂σ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub dim: usize,
    pub complex: SimplicialComplex,
    pub boundary: SimplicialComplex,
}

/// A simplicial subdivision Δ of a regular cell complex Σ, given cell by cell.
#[derive(Debug, Clone)]
pub struct SubdivisionStructure {
    delta: SimplicialComplex,
    cells: Vec<Cell>,
    /// For each cell, the codimension-one cells on its boundary with incidence ±1.
    incidence: Vec<Vec<(usize, i64)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellJson {
    pub dim: usize,
    pub facets: Vec<Vec<Value>>,
    pub boundary_facets: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubdivisionJson {
    pub delta: ComplexJson,
    pub sigma: Vec<CellJson>,
}

/// Top homology cycle of (Δ_σ, ∂Δ_σ), normalised to lead with 1, as
/// coefficients on the top faces of Δ_σ.
fn orientation(cell: &Cell, field: PrimeField) -> Option<BTreeMap<Face, u64>> {
    let top: Vec<Face> = cell.complex.faces_of_dim(cell.dim as i32).collect();
    if cell.dim == 0 {
        return (top.len() == 1).then(|| top.iter().map(|&f| (f, 1)).collect());
    }
    let ridges: Vec<Face> = cell
        .complex
        .faces_of_dim(cell.dim as i32 - 1)
        .filter(|&r| !cell.boundary.contains(r))
        .collect();
    let index: BTreeMap<Face, usize> = ridges.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut m = FieldMatrix::zeros(field, ridges.len(), top.len());
    for (c, &f) in top.iter().enumerate() {
        for v in f.vertices() {
            if let Some(&r) = index.get(&f.without(v)) {
                m.set(r, c, field.sign(f.position(v) % 2 == 1));
            }
        }
    }
    let ker = m.kernel_basis();
    if ker.len() != 1 {
        return None;
    }
    let lead = ker[0].iter().copied().find(|&x| x != 0)?;
    let inv = field.inv(lead).ok()?;
    Some(top.iter().zip(&ker[0]).filter(|(_, &x)| x != 0).map(|(&f, &x)| (f, field.mul(x, inv))).collect())
}

/// Simplicial boundary of a chain, unreduced (vertices map to nothing).
fn chain_boundary(chain: &BTreeMap<Face, u64>, field: PrimeField) -> BTreeMap<Face, u64> {
    let mut out: BTreeMap<Face, u64> = BTreeMap::new();
    for (&f, &x) in chain {
        if f.len() < 2 {
            continue;
        }
        for v in f.vertices() {
            let e = out.entry(f.without(v)).or_insert(0);
            let term = if f.position(v) % 2 == 1 { field.neg(x) } else { x };
            *e = field.add(*e, term);
        }
    }
    out.retain(|_, x| *x != 0);
    out
}

impl SubdivisionStructure {
    pub fn new(delta: SimplicialComplex, cells: Vec<Cell>) -> Result<Self> {
        let field = PrimeField::default();
        let d = delta.dim().filter(|&d| d >= 0).ok_or_else(|| SrError::Input("Δ has no vertices".into()))? as usize;
        let name = |i: usize, c: &Cell| format!("σ{i} ({}-cell on {})", c.dim, delta.label_face(c.complex.vertex_set()));
        for (i, c) in cells.iter().enumerate() {
            if c.complex.labels() != delta.labels() || c.boundary.labels() != delta.labels() {
                return Err(SrError::Input(format!("σ{i}: ground set differs from Δ")));
            }
            if let Some(&f) = c.complex.faces().iter().find(|&&f| !delta.contains(f)) {
                return Err(SrError::Input(format!("{}: {} is not a face of Δ", name(i, c), delta.label_face(f))));
            }
            if c.complex.dim() != Some(c.dim as i32) {
                return Err(SrError::Input(format!("{}: subdivision has dimension {:?}", name(i, c), c.complex.dim())));
            }
            if c.dim > d {
                return Err(SrError::Input(format!("{}: dimension exceeds dim Δ = {d}", name(i, c))));
            }
            if !c.boundary.is_subcomplex_of(&c.complex) {
                return Err(SrError::Input(format!("{}: boundary is not inside the cell", name(i, c))));
            }
            let expected = if c.dim == 0 { None } else { Some(c.dim as i32 - 1) };
            if c.boundary.dim() != expected {
                return Err(SrError::Input(format!("{}: boundary has dimension {:?}", name(i, c), c.boundary.dim())));
            }
        }
        for f in delta.facets() {
            if !cells.iter().any(|c| c.dim == d && c.complex.contains(f)) {
                return Err(SrError::Input(format!(
                    "facet {} of Δ is not covered by any {d}-cell",
                    delta.label_face(f)
                )));
            }
        }
        let orientations = cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                orientation(c, field).ok_or_else(|| {
                    SrError::Input(format!("{}: relative top homology is not one-dimensional", name(i, c)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut incidence = Vec::with_capacity(cells.len());
        for (i, c) in cells.iter().enumerate() {
            let faces: Vec<usize> = (0..cells.len())
                .filter(|&k| cells[k].dim + 1 == c.dim && cells[k].complex.is_subcomplex_of(&c.boundary))
                .collect();
            if c.dim > 0 {
                let covered = faces.iter().fold(SimplicialComplex::void(delta.labels().to_vec()), |acc, &k| {
                    acc.union_with(&cells[k].complex)
                });
                if covered != c.boundary {
                    return Err(SrError::Input(format!(
                        "{}: boundary is not the union of the declared {}-cells",
                        name(i, c),
                        c.dim - 1
                    )));
                }
            }
            let db = chain_boundary(&orientations[i], field);
            let mut row = Vec::new();
            for k in faces {
                let o = &orientations[k];
                let (&f0, &x0) = o.iter().next().expect("nonempty orientation");
                let ratio = field.mul(db.get(&f0).copied().unwrap_or(0), field.inv(x0)?);
                let proportional = cells[k]
                    .complex
                    .faces_of_dim(cells[k].dim as i32)
                    .all(|f| db.get(&f).copied().unwrap_or(0) == field.mul(ratio, o.get(&f).copied().unwrap_or(0)));
                let coef = field.to_i64(ratio);
                if !proportional || coef.abs() != 1 {
                    return Err(SrError::Input(format!("{}: incidence with σ{k} is not ±1", name(i, c))));
                }
                row.push((k, coef));
            }
            incidence.push(row);
        }
        Ok(SubdivisionStructure { delta, cells, incidence })
    }

    /// Δ = sd(Σ) for a simplicial complex Σ, whose faces are the cells.
    pub fn barycentric_of(sigma: &SimplicialComplex) -> Result<Self> {
        let (sd, faces) = crate::simplicial::barycentric_subdivision(sigma)?;
        let within = |keep: &dyn Fn(Face) -> bool| {
            Face::from_vertices(&(0..faces.len()).filter(|&i| keep(faces[i])).collect::<Vec<_>>())
        };
        let cells = faces
            .iter()
            .map(|&s| {
                let boundary = if s.len() == 1 {
                    SimplicialComplex::void(sd.labels().to_vec())
                } else {
                    sd.induced(within(&|f| f.is_subset_of(s) && f != s))
                };
                Cell { dim: s.len() - 1, complex: sd.induced(within(&|f| f.is_subset_of(s))), boundary }
            })
            .collect();
        Self::new(sd, cells)
    }

    pub fn from_json(raw: &SubdivisionJson) -> Result<Self> {
        let delta = raw.delta.to_complex()?;
        if !delta.is_absolute() {
            return Err(SrError::Input("subdivision: delta must not carry gamma_facets".into()));
        }
        let delta = delta.delta;
        let facets = |fs: &[Vec<Value>], field: &str| -> Result<Vec<Vec<String>>> {
            fs.iter().map(|f| f.iter().map(|v| label_of(v, field)).collect()).collect()
        };
        let cells = raw
            .sigma
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let ctx = |e: SrError| SrError::Input(format!("sigma[{i}]: {e}"));
                let complex =
                    SimplicialComplex::from_facets(delta.labels().to_vec(), &facets(&c.facets, "facets")?, true)
                        .map_err(ctx)?;
                let boundary = SimplicialComplex::from_facets(
                    delta.labels().to_vec(),
                    &facets(&c.boundary_facets, "boundary_facets")?,
                    true,
                )
                .map_err(ctx)?;
                Ok(Cell { dim: c.dim, complex, boundary })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(delta, cells)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: SubdivisionJson =
            serde_json::from_str(text).map_err(|e| SrError::Input(format!("subdivision JSON: {e}")))?;
        Self::from_json(&raw)
    }

    pub fn to_json(&self) -> SubdivisionJson {
        let names = |c: &SimplicialComplex| -> Vec<Vec<Value>> {
            c.facets()
                .into_iter()
                .filter(|f| !f.is_empty())
                .map(|f| f.vertices().map(|v| Value::String(self.delta.labels()[v].clone())).collect())
                .collect()
        };
        SubdivisionJson {
            delta: RelativeComplex::absolute(self.delta.clone()).to_json(),
            sigma: self
                .cells
                .iter()
                .map(|c| CellJson { dim: c.dim, facets: names(&c.complex), boundary_facets: names(&c.boundary) })
                .collect(),
        }
    }

    pub fn delta(&self) -> &SimplicialComplex {
        &self.delta
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn dim(&self) -> usize {
        self.delta.dim().unwrap_or(0).max(0) as usize
    }

    pub fn incidence(&self, cell: usize) -> &[(usize, i64)] {
        &self.incidence[cell]
    }

    /// Cells of dimension ≥ d/2 whose boundary subdivision is not induced,
    /// with an offending face.
    pub fn induced_boundary_violations(&self) -> Vec<(usize, String)> {
        let d = self.dim();
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| 2 * c.dim >= d && !c.boundary.is_void())
            .filter_map(|(i, c)| self.delta.is_induced(&c.boundary).map(|f| (i, self.delta.label_face(f))))
            .collect()
    }

    /// P̃*: k[Δ] followed by the cellular columns ⊕_{σ ∈ Σ^{(d-i)}} k[Δ_σ].
    pub fn partition_complex(&self) -> PartitionComplexSpec {
        let d = self.dim();
        let psi = RelativeComplex::absolute(self.delta.clone());
        let mut columns = vec![vec![Summand { label: "Δ".into(), module: psi.clone() }]];
        let mut position = vec![0usize; self.cells.len()];
        for k in (0..=d).rev() {
            let mut col = Vec::new();
            for (i, c) in self.cells.iter().enumerate().filter(|(_, c)| c.dim == k) {
                position[i] = col.len();
                col.push(Summand {
                    label: format!("σ{i}"),
                    module: RelativeComplex::absolute(c.complex.clone()),
                });
            }
            columns.push(col);
        }
        let mut maps = vec![vec![(0..columns[1].len()).map(|a| (a, 1)).collect()]];
        for k in (1..=d).rev() {
            maps.push(
                self.cells
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.dim == k)
                    .map(|(i, _)| self.incidence[i].iter().map(|&(t, x)| (position[t], x)).collect())
                    .collect(),
            );
        }
        PartitionComplexSpec { psi, variant: Variant::Subdivision, columns, maps }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionVerdict {
    /// dim H^{-1}(P̃*/⟨Θ⟩)_j for j = 0..=d+1.
    pub kernel_dims: BTreeMap<usize, usize>,
    pub checked_up_to: usize,
    pub pass: bool,
}

/// Kernel of A(Δ) → ⊕_{top σ} A(Δ_σ) by degree; passes when it vanishes in
/// every degree ≤ d/2.
pub fn subdivision_partition_check(s: &SubdivisionStructure, theta: &LinearFormSequence) -> Result<SubdivisionVerdict> {
    if let Some((i, f)) = s.induced_boundary_violations().first() {
        return Err(SrError::Input(format!("σ{i}: boundary subdivision is not induced ({f})")));
    }
    let spec = s.partition_complex();
    let reduced = spec.reduce(theta, 2)?;
    let d = s.dim();
    let kernel_dims: BTreeMap<usize, usize> = (0..=d + 1).map(|j| (j, reduced.first_kernel_dim(j))).collect();
    let checked_up_to = d / 2;
    Ok(SubdivisionVerdict {
        pass: (0..=checked_up_to).all(|j| kernel_dims[&j] == 0),
        kernel_dims,
        checked_up_to,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::facering::{random_linear_forms, sample_lsop, DEFAULT_LSOP_ATTEMPTS};
    use crate::simplicial::builtin_complex;

    fn fp() -> PrimeField {
        PrimeField::default()
    }

    fn lsop(psi: &RelativeComplex, seed: u64) -> LinearFormSequence {
        sample_lsop(psi, fp(), seed, 100).expect("lsop").0
    }

    fn betti(psi: &RelativeComplex, i: i64) -> usize {
        if i < -1 {
            return 0;
        }
        psi.relative_cohomology_dims(fp()).get(i as i32)
    }

    #[test]
    fn empty_face_complex() {
        let e = RelativeComplex::absolute(SimplicialComplex::from_index_facets(1, &[]).unwrap());
        let h = partition_homology_dims(&e, 0, fp()).unwrap();
        assert_eq!(h[&(-1, 0)], 1);
    }

    #[test]
    fn torus_partition_homology() {
        let t = builtin_complex("torus7").unwrap();
        let h = partition_homology_dims(&t, 3, fp()).unwrap();
        let deg0: Vec<usize> = (-1..=2).map(|i| h[&(i, 0)]).collect();
        assert_eq!(deg0, vec![0, 0, 2, 1]);
        assert!(h.iter().all(|(&(_, j), &v)| j == 0 || v == 0));
    }

    #[test]
    fn fine_and_coarse_routes_agree() {
        for name in ["torus7", "moebius", "disk_with_induced_boundary(2)", "path(2)"] {
            let c = builtin_complex(name).unwrap();
            let spec = PartitionComplexSpec::full(&c);
            for j in 0..3 {
                spec.graded_piece(j, fp()).validate().unwrap();
            }
            assert_eq!(spec.homology_dims(2, fp()).unwrap(), spec.homology_dims_coarse(2, fp()).unwrap(), "{name}");
        }
    }

    #[test]
    fn start_of_partition_complex_is_sum_of_vertex_copies() {
        let c = builtin_complex("boundary_simplex(2)").unwrap();
        let cx = PartitionComplexSpec::full(&c).graded_piece(1, fp());
        let d = cx.differential(-1).unwrap().to_dense();
        // x_v in k[Ψ] maps to x_v in every vertex star containing it
        for v in 0..3 {
            let col = d.column(v);
            assert_eq!(col.iter().filter(|&&x| x == 1).count(), 3);
            assert!(col.iter().all(|&x| x <= 1));
        }
    }

    #[test]
    fn partition_of_unity_on_small_cases() {
        for (name, p) in [("boundary_simplex(3)", fp()), ("torus7", fp()), ("rp2_6", PrimeField::new(2).unwrap())] {
            let c = builtin_complex(name).unwrap();
            let theta = sample_lsop(&c, p, 3, DEFAULT_LSOP_ATTEMPTS).unwrap().0;
            let h = reduced_partition_homology(&c, &theta).unwrap();
            let d1 = c.max_face_card() as i64;
            let b = c.relative_cohomology_dims(p);
            for (&(i, j), &v) in &h {
                let rhs = binomial(d1, j as i64) as usize * b.get(i + j as i32);
                assert_eq!(v, rhs, "{name} H^{i}_{j}");
            }
        }
    }

    #[test]
    fn torus_reduced_values() {
        let t = builtin_complex("torus7").unwrap();
        let h = reduced_partition_homology(&t, &lsop(&t, 1)).unwrap();
        assert_eq!(h[&(-1, 2)], 6);
        assert_eq!(h[&(-1, 3)], 1);
    }

    #[test]
    fn total_complex_formula() {
        for name in ["boundary_simplex(3)", "torus7"] {
            let c = builtin_complex(name).unwrap();
            let theta = lsop(&c, 2);
            let d1 = c.max_face_card() as i64;
            let h = total_complex_homology(&c, &theta);
            for (&(k, j), &v) in &h {
                let rhs = binomial(d1, j as i64) as usize * betti(&c, k as i64 + j as i64 - d1);
                assert_eq!(v, rhs, "{name} H^{k}_{j}");
            }
        }
    }

    #[test]
    fn slices_are_double_complexes() {
        let c = builtin_complex("moebius").unwrap();
        let theta = lsop(&c, 4);
        let spec = PartitionComplexSpec::full(&c);
        for j in 0..4 {
            let s = DoubleComplexSlice::assemble(&spec, &theta, j);
            assert!(s.differentials_commute());
            let (lo, hi) = s.tot_range();
            for k in lo..hi - 1 {
                assert!(s.tot_differential(k + 1).mul(&s.tot_differential(k)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn exact_rows_or_columns_force_exact_total() {
        let cone = builtin_complex("simplex(2)").unwrap();
        let torus = builtin_complex("torus7").unwrap();
        for c in [cone, torus] {
            let theta = lsop(&c, 6);
            let spec = PartitionComplexSpec::full(&c);
            for j in 0..=degree_window(&c) {
                let s = DoubleComplexSlice::assemble(&spec, &theta, j);
                let tot = s.tot_homology();
                let rows = s.horizontal_homology();
                let cols = s.vertical_homology();
                for (&k, &v) in &tot {
                    let rows_exact = rows.iter().filter(|(&(i, t), _)| i + t as i32 == k).all(|(_, &x)| x == 0);
                    let cols_exact = cols.iter().filter(|(&(i, t), _)| i + t as i32 == k).all(|(_, &x)| x == 0);
                    if rows_exact || cols_exact {
                        assert_eq!(v, 0, "degree {j}, H^{k}");
                    }
                }
            }
        }
    }

    #[test]
    fn interior_check_on_subdivided_triangle() {
        let tri = builtin_complex("simplex(2)").unwrap().delta;
        let s = SubdivisionStructure::barycentric_of(&tri).unwrap();
        let disk = RelativeComplex::new(s.delta().clone(), s.delta().boundary()).unwrap();
        let v = interior_partition_check(&disk, &lsop(&disk, 0)).unwrap();
        assert_eq!(v.interior_vertices, vec!["{0+1+2}".to_string()]);
        assert!(v.exact && v.injective_below_top && v.boundary_induced, "{v:?}");
    }

    #[test]
    fn interior_check_on_cone() {
        let disk = builtin_complex("disk_with_induced_boundary(2)").unwrap();
        let v = interior_partition_check(&disk, &lsop(&disk, 0)).unwrap();
        assert!(v.exact && v.injective_below_top, "{v:?}");
    }

    #[test]
    fn interior_check_on_bare_triangle() {
        let tri = builtin_complex("simplex(2)").unwrap().delta;
        let disk = RelativeComplex::new(tri.clone(), tri.boundary()).unwrap();
        let v = interior_partition_check(&disk, &lsop(&disk, 0)).unwrap();
        assert!(!v.boundary_induced && !v.exact && !v.injective_below_top);
        assert_eq!(v.kernel_dims, vec![1, 0, 0]);
    }

    #[test]
    fn subdivision_tail_is_cellular() {
        for sigma in ["simplex(2)", "simplex(3)", "boundary_simplex(2)"] {
            let sigma = builtin_complex(sigma).unwrap().delta;
            let s = SubdivisionStructure::barycentric_of(&sigma).unwrap();
            let spec = s.partition_complex();
            let cx = spec.graded_piece(0, fp());
            let d = s.dim() as i32;
            // the tail from P^0 on is a complex computing H_{d-i}(Σ)
            let mut tail = ChainComplexSpec::new(fp(), 0, (0..=d).map(|i| cx.dim(i)).collect());
            for i in 0..d {
                tail.set_differential(i, cx.differential(i).unwrap().clone()).unwrap();
            }
            let h = chain_homology_dims(&tail).unwrap();
            let homology = RelativeComplex::absolute(sigma.clone()).relative_cohomology_dims(fp());
            for i in 0..=d {
                let b = homology.get(d - i) + usize::from(d - i == 0);
                assert_eq!(h[&i], b, "H^{i}");
            }
            for j in 1..3 {
                let cx = spec.graded_piece(j, fp());
                for i in 0..d - 1 {
                    let a = cx.differential(i + 1).unwrap().mul(cx.differential(i).unwrap()).unwrap();
                    assert!(a.is_zero());
                }
            }
        }
    }

    #[test]
    fn first_map_does_not_compose_to_zero_on_a_ball() {
        let s = SubdivisionStructure::barycentric_of(&builtin_complex("simplex(2)").unwrap().delta).unwrap();
        let cx = s.partition_complex().graded_piece(0, fp());
        assert!(!cx.differential(0).unwrap().mul(cx.differential(-1).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn subdivision_check_passes() {
        let simplex = builtin_complex("simplex(3)").unwrap().delta;
        let two = SimplicialComplex::from_index_facets(4, &[vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        for sigma in [simplex, two] {
            let s = SubdivisionStructure::barycentric_of(&sigma).unwrap();
            let psi = RelativeComplex::absolute(s.delta().clone());
            let v = subdivision_partition_check(&s, &lsop(&psi, 5)).unwrap();
            assert!(v.pass, "{v:?}");
        }
    }

    #[test]
    fn subdivision_json_round_trip_and_validation() {
        let sigma = builtin_complex("simplex(2)").unwrap().delta;
        let s = SubdivisionStructure::barycentric_of(&sigma).unwrap();
        let json = serde_json::to_string(&s.to_json()).unwrap();
        let back = SubdivisionStructure::parse(&json).unwrap();
        assert_eq!(back.cells(), s.cells());
        let mut raw = s.to_json();
        raw.sigma.retain(|c| c.dim != 2);
        let err = SubdivisionStructure::from_json(&raw).unwrap_err();
        assert!(err.to_string().contains("not covered"), "{err}");
        let mut raw = s.to_json();
        raw.sigma[0].facets.push(vec![Value::String("nope".into())]);
        assert!(SubdivisionStructure::from_json(&raw).is_err());
    }

    #[test]
    fn cech_piece_of_a_support_is_the_link_cover() {
        // for a monomial supported on ρ, P*_α is the Čech complex of st_ρΨ
        let t = builtin_complex("torus7").unwrap();
        let spec = PartitionComplexSpec::full(&t);
        let theta = random_linear_forms(&t, 0, 0, fp());
        assert!(theta.is_empty());
        for &rho in t.delta.faces().iter().filter(|f| !f.is_empty()) {
            let h = chain_homology_dims(&spec.fine_complex(rho, fp())).unwrap();
            assert!(h.values().all(|&x| x == 0), "{rho:?}");
        }
    }
}
