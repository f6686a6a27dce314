//! Koszul complexes K*(Θ) ⊗ k[Ψ], their homology, depth, and the algebraic
//! Cohen–Macaulay test.
//!
//! K^t has basis α·e_S with |S| = t; the differential is
//! ∂(α e_S) = Σ_{i∉S} (-1)^{#{s∈S : s<i}} θ_i α e_{S∪i}.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exactlinalg::{PrimeField, SparseMatrix, SparseVec};
use crate::facering::{monomial_basis, sample_lsop, LinearFormSequence, MonomialBasis, DEFAULT_LSOP_ATTEMPTS};
use crate::simplicial::RelativeComplex;
use crate::{Result, SrError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingMode {
    /// deg(α e_S) = deg α
    Natural,
    /// deg(α e_S) = deg α + n − |S|
    Shifted,
}

/// Subsets of {0..n} of size t as bitmasks, in lexicographic order.
pub fn wedge_basis(n: usize, t: usize) -> Vec<u32> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, left: usize, cur: u32, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for i in start..=n - left {
            rec(i + 1, n, left - 1, cur | 1 << i, out);
        }
    }
    if t <= n {
        rec(0, n, t, 0, &mut out);
    }
    out
}

pub fn wedge_sign(s: u32, i: usize) -> bool {
    (s & ((1u32 << i) - 1)).count_ones() % 2 == 1
}

/// The graded pieces of K*(Θ) ⊗ k[Ψ] in natural degrees `0..=top`.
pub struct KoszulSpec<'a> {
    psi: &'a RelativeComplex,
    theta: &'a LinearFormSequence,
    bases: Vec<MonomialBasis>,
    wedges: Vec<Vec<u32>>,
}

impl<'a> KoszulSpec<'a> {
    pub fn new(psi: &'a RelativeComplex, theta: &'a LinearFormSequence, top: usize) -> Self {
        let n = theta.len();
        KoszulSpec {
            psi,
            theta,
            bases: (0..=top + 1).map(|a| monomial_basis(psi, a)).collect(),
            wedges: (0..=n).map(|t| wedge_basis(n, t)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    /// Monomials of the module in natural degree a.
    pub fn basis(&self, a: usize) -> &MonomialBasis {
        &self.bases[a]
    }

    pub fn top(&self) -> usize {
        self.bases.len() - 2
    }

    /// dim K^t in natural degree a.
    pub fn dim(&self, t: usize, a: usize) -> usize {
        if t > self.n() || a >= self.bases.len() {
            return 0;
        }
        self.wedges[t].len() * self.bases[a].len()
    }

    /// ∂ : K^t_a → K^{t+1}_{a+1}. Basis order: wedge-major, then monomial.
    pub fn differential(&self, t: usize, a: usize) -> SparseMatrix {
        let f = self.theta.field;
        let src = &self.bases[a];
        let dst = &self.bases[a + 1];
        let n = self.n();
        let wpos: BTreeMap<u32, usize> =
            self.wedges.get(t + 1).map_or(BTreeMap::new(), |w| w.iter().enumerate().map(|(k, &s)| (s, k)).collect());
        let mut cols = Vec::with_capacity(self.dim(t, a));
        for &s in &self.wedges[t] {
            for m in src.monomials() {
                let supp = m.support();
                let mut col: SparseVec = Vec::new();
                for i in (0..n).filter(|&i| s >> i & 1 == 0) {
                    let block = wpos[&(s | 1 << i)] * dst.len();
                    let neg = wedge_sign(s, i);
                    for (v, &c) in self.theta.forms[i].iter().enumerate() {
                        if c != 0 && self.psi.delta.contains(supp.with(v)) {
                            let k = dst.index_of(&m.times_var(v)).expect("product lies in Ψ");
                            col.push((block + k, if neg { f.neg(c) } else { c }));
                        }
                    }
                }
                col.sort_unstable();
                let mut merged: SparseVec = Vec::with_capacity(col.len());
                for (k, c) in col {
                    match merged.last_mut() {
                        Some((lk, lc)) if *lk == k => *lc = f.add(*lc, c),
                        _ => merged.push((k, c)),
                    }
                }
                merged.retain(|&(_, c)| c != 0);
                cols.push(merged);
            }
        }
        SparseMatrix::from_columns(f, self.dim(t + 1, a + 1), cols)
    }

    /// Multiplication by a linear form on the module factor: K^t_a → K^t_{a+1}.
    pub fn module_action(&self, form: &[u64], t: usize, a: usize) -> SparseMatrix {
        let f = self.theta.field;
        let src = &self.bases[a];
        let dst = &self.bases[a + 1];
        let mut cols = Vec::new();
        for w in 0..self.wedges[t].len() {
            for m in src.monomials() {
                let supp = m.support();
                let mut col: SparseVec = form
                    .iter()
                    .enumerate()
                    .filter(|&(v, &c)| c != 0 && self.psi.delta.contains(supp.with(v)))
                    .map(|(v, &c)| (w * dst.len() + dst.index_of(&m.times_var(v)).expect("in Ψ"), c))
                    .collect();
                col.sort_unstable();
                cols.push(col);
            }
        }
        SparseMatrix::from_columns(f, self.dim(t, a + 1), cols)
    }
}

/// Natural degrees that can carry Koszul homology of an l.s.o.p.:
/// the regularity of k[Ψ] is at most dim Ψ + 1.
pub fn natural_window(psi: &RelativeComplex) -> usize {
    psi.max_face_card()
}

/// dim H^t(K*⊗k[Ψ]) keyed by (t, degree) for t ∈ [0, n] and natural degrees
/// in `0..=natural_window`.
pub fn koszul_homology_dims(
    psi: &RelativeComplex,
    theta: &LinearFormSequence,
    mode: GradingMode,
) -> BTreeMap<(usize, i64), usize> {
    koszul_homology_dims_to(psi, theta, mode, natural_window(psi))
}

pub fn koszul_homology_dims_to(
    psi: &RelativeComplex,
    theta: &LinearFormSequence,
    mode: GradingMode,
    top: usize,
) -> BTreeMap<(usize, i64), usize> {
    let spec = KoszulSpec::new(psi, theta, top);
    let n = spec.n();
    let mut ranks = vec![vec![0usize; top + 1]; n + 1];
    for t in 0..n {
        for a in 0..=top {
            ranks[t][a] = spec.differential(t, a).rank();
        }
    }
    let mut out = BTreeMap::new();
    for t in 0..=n {
        for a in 0..=top {
            let incoming = if t > 0 && a > 0 { ranks[t - 1][a - 1] } else { 0 };
            let h = spec.dim(t, a) - ranks[t][a] - incoming;
            let deg = match mode {
                GradingMode::Natural => a as i64,
                GradingMode::Shifted => (a + n - t) as i64,
            };
            out.insert((t, deg), h);
        }
    }
    out
}

/// Smallest t with H^t(K*⊗k[Ψ]) ≠ 0. Equals depth k[Ψ] when Θ is an l.s.o.p.
pub fn depth(psi: &RelativeComplex, theta: &LinearFormSequence) -> Result<usize> {
    if psi.is_void() {
        return Err(SrError::Input("the zero module has infinite depth".into()));
    }
    let top = natural_window(psi);
    let spec = KoszulSpec::new(psi, theta, top);
    let n = spec.n();
    let mut prev = vec![0usize; top + 1];
    for t in 0..=n {
        let cur: Vec<usize> = (0..=top)
            .map(|a| if t < n { spec.differential(t, a).rank() } else { 0 })
            .collect();
        for a in 0..=top {
            let incoming = if a > 0 { prev[a - 1] } else { 0 };
            if spec.dim(t, a) - cur[a] - incoming > 0 {
                return Ok(t);
            }
        }
        prev = cur;
    }
    Err(SrError::Internal("Koszul homology vanishes identically; ⟨Θ⟩M = M".into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmVerdict {
    /// `None` when no l.s.o.p. could be sampled.
    pub cm: Option<bool>,
    pub depth: Option<usize>,
    pub expected: usize,
    pub seeds: Vec<u64>,
    pub trial_depths: Vec<Option<usize>>,
    pub warnings: Vec<String>,
}

/// Depth against the expected l.s.o.p. length, over `trials` seeds.
///
/// Every l.s.o.p. computes the true depth, so disagreeing trials indicate a
/// bug or a sampling failure and are reported as warnings.
pub fn is_algebraically_cm(psi: &RelativeComplex, field: PrimeField, seed: u64, trials: usize) -> CmVerdict {
    let expected = psi.max_face_card();
    let seeds: Vec<u64> = (0..trials.max(1) as u64).map(|t| seed + t).collect();
    if psi.is_void() {
        return CmVerdict {
            cm: Some(true),
            depth: None,
            expected,
            trial_depths: vec![None; seeds.len()],
            seeds,
            warnings: vec!["zero module".into()],
        };
    }
    let mut trial_depths = Vec::new();
    let mut warnings = Vec::new();
    for &s in &seeds {
        let d = sample_lsop(psi, field, s, DEFAULT_LSOP_ATTEMPTS).and_then(|(theta, _)| depth(psi, &theta).ok());
        if d.is_none() {
            warnings.push(format!("seed {s}: no l.s.o.p. found over {field}"));
        }
        trial_depths.push(d);
    }
    let found: Vec<usize> = trial_depths.iter().flatten().copied().collect();
    if found.windows(2).any(|w| w[0] != w[1]) {
        warnings.push(format!("depth disagrees across trials: {trial_depths:?}"));
    }
    let depth = found.iter().copied().max();
    CmVerdict {
        cm: depth.map(|d| d == expected),
        depth,
        expected,
        seeds,
        trial_depths,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::FieldMatrix;
    use crate::facering::{quotient_presentation, random_linear_forms};
    use crate::simplicial::{builtin_complex, SimplicialComplex};

    fn fp() -> PrimeField {
        PrimeField::default()
    }

    #[test]
    fn wedge_sign_matches_top_formula() {
        // ∂(∧_{j≠i} e_j) = (-1)^{i+1} θ_i e_1∧…∧e_n with 1-based i
        let n = 4;
        for i in 0..n {
            let s = ((1u32 << n) - 1) & !(1 << i);
            let sign = if wedge_sign(s, i) { -1 } else { 1 };
            let expected = if (i + 1 + 1) % 2 == 0 { 1 } else { -1 };
            assert_eq!(sign, expected, "i = {}", i + 1);
        }
        assert_eq!(wedge_basis(4, 2).len(), 6);
        assert_eq!(wedge_basis(3, 0), vec![0]);
    }

    #[test]
    fn differential_squares_to_zero() {
        let t = builtin_complex("torus7").unwrap();
        let theta = random_linear_forms(&t, 3, 5, fp());
        let spec = KoszulSpec::new(&t, &theta, 3);
        for tt in 0..2 {
            for a in 0..2 {
                let d2 = spec.differential(tt + 1, a + 1).mul(&spec.differential(tt, a)).unwrap();
                assert!(d2.is_zero());
            }
        }
    }

    #[test]
    fn point_koszul() {
        let pt = builtin_complex("simplex(0)").unwrap();
        let theta = LinearFormSequence::new(fp(), vec![vec![1]]);
        let h = koszul_homology_dims(&pt, &theta, GradingMode::Natural);
        let total1: usize = h.iter().filter(|((t, _), _)| *t == 1).map(|(_, &v)| v).sum();
        let total0: usize = h.iter().filter(|((t, _), _)| *t == 0).map(|(_, &v)| v).sum();
        assert_eq!((total0, total1), (0, 1));
        assert_eq!(h[&(1, 0)], 1);
    }

    #[test]
    fn sphere_koszul_is_concentrated_on_top() {
        let s = builtin_complex("boundary_simplex(3)").unwrap();
        let theta = random_linear_forms(&s, 3, 3, fp());
        let h = koszul_homology_dims(&s, &theta, GradingMode::Shifted);
        for (&(t, j), &v) in &h {
            if t < 3 {
                assert_eq!(v, 0, "H^{t}_{j}");
            }
        }
        let top: Vec<usize> = (0..4).map(|j| h[&(3, j)]).collect();
        assert_eq!(top, vec![1, 1, 1, 1]);
        assert_eq!(depth(&s, &theta).unwrap(), 3);
    }

    #[test]
    fn depth_examples() {
        let p = fp();
        let t = builtin_complex("torus7").unwrap();
        assert_eq!(depth(&t, &random_linear_forms(&t, 3, 1, p)).unwrap(), 2);
        let two = builtin_complex("two_points").unwrap();
        assert_eq!(depth(&two, &random_linear_forms(&two, 1, 1, p)).unwrap(), 1);
        // an edge plus two isolated points is not pure
        let mixed = RelativeComplex::absolute(
            SimplicialComplex::from_index_facets(4, &[vec![0, 1], vec![2], vec![3]]).unwrap(),
        );
        let theta = random_linear_forms(&mixed, 2, 4, p);
        let h = koszul_homology_dims(&mixed, &theta, GradingMode::Natural);
        assert!(h.iter().any(|(&(t, _), &v)| t == 1 && v > 0));
        assert_eq!(depth(&mixed, &theta).unwrap(), 1);
    }

    #[test]
    fn cm_examples() {
        let p = fp();
        let s = builtin_complex("boundary_simplex(3)").unwrap();
        assert_eq!(is_algebraically_cm(&s, p, 0, 3).cm, Some(true));
        let t = builtin_complex("torus7").unwrap();
        let v = is_algebraically_cm(&t, p, 0, 3);
        assert_eq!((v.cm, v.depth, v.expected), (Some(false), Some(2), 3));
        let rp = builtin_complex("rp2_6").unwrap();
        assert_eq!(is_algebraically_cm(&rp, PrimeField::new(2).unwrap(), 0, 3).cm, Some(false));
        assert_eq!(is_algebraically_cm(&rp, PrimeField::new(3).unwrap(), 0, 3).cm, Some(true));
    }

    #[test]
    fn top_homology_is_the_quotient() {
        let p = fp();
        for name in ["torus7", "moebius", "disk_with_induced_boundary(2)", "path(3)"] {
            let c = builtin_complex(name).unwrap();
            let theta = random_linear_forms(&c, c.max_face_card(), 17, p);
            let q = quotient_presentation(&c, &theta);
            let h = koszul_homology_dims(&c, &theta, GradingMode::Shifted);
            let n = theta.len();
            for j in 0..=natural_window(&c) {
                assert_eq!(h[&(n, j as i64)], q.dim(j), "{name} degree {j}");
            }
        }
    }

    #[test]
    fn window_captures_all_homology() {
        let p = fp();
        for name in ["torus7", "moebius", "disk_with_induced_boundary(2)"] {
            let c = builtin_complex(name).unwrap();
            let theta = random_linear_forms(&c, c.max_face_card(), 2, p);
            let w = natural_window(&c);
            let h = koszul_homology_dims_to(&c, &theta, GradingMode::Natural, w + 2);
            assert!(h.iter().all(|(&(_, a), &v)| a <= w as i64 || v == 0), "{name}");
        }
    }

    #[test]
    fn ideal_of_theta_kills_homology() {
        let p = fp();
        let t = builtin_complex("torus7").unwrap();
        let theta = random_linear_forms(&t, 3, 8, p);
        let spec = KoszulSpec::new(&t, &theta, 3);
        let z: Vec<u64> = (0..7).map(|v| p.add(p.mul(2, theta.forms[0][v]), p.mul(5, theta.forms[2][v]))).collect();
        // H^2 lives in natural degree 1 for the torus
        let (tt, a) = (2, 1);
        let cycles = spec.differential(tt, a).to_dense().kernel_basis();
        assert!(!cycles.is_empty());
        let act = spec.module_action(&z, tt, a).to_dense();
        let boundaries = spec.differential(tt - 1, a).to_dense();
        let rb = boundaries.rank();
        for c in cycles {
            let img = act.apply(&c);
            let mut rows: Vec<Vec<i64>> = (0..boundaries.rows())
                .map(|r| boundaries.row(r).iter().map(|&x| x as i64).collect())
                .collect();
            for (r, row) in rows.iter_mut().enumerate() {
                row.push(img[r] as i64);
            }
            assert_eq!(FieldMatrix::from_rows(p, &rows).unwrap().rank(), rb);
        }
    }

    #[test]
    fn depth_is_seed_independent() {
        let p = fp();
        for name in ["torus7", "moebius", "boundary_simplex(2)"] {
            let c = builtin_complex(name).unwrap();
            let v = is_algebraically_cm(&c, p, 100, 3);
            assert!(v.warnings.is_empty(), "{name}: {:?}", v.warnings);
            assert!(v.trial_depths.iter().all(|&d| d == v.depth));
        }
    }

    #[test]
    fn overlong_sequences_vanish_in_low_degrees() {
        // CM sphere of dimension k = 2 with strong Lefschetz, Θ of length d+1 = 5
        let p = fp();
        let s = builtin_complex("boundary_simplex(3)").unwrap();
        let theta = random_linear_forms(&s, 5, 21, p);
        let h = koszul_homology_dims(&s, &theta, GradingMode::Shifted);
        let (k, d) = (2usize, 4i64);
        for (&(i, j), &v) in &h {
            if i <= k + 1 && 2 * j <= d {
                assert_eq!(v, 0, "H^{i}_{j}");
            }
        }
    }
}
