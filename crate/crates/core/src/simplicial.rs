//! Simplicial and relative complexes over an ordered ground set.
//!
//! Faces are bitsets over at most 64 vertices; bit `i` is the `i`-th label of
//! the ground set, and that order fixes every sign convention downstream.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::exactlinalg::{chain_homology_dims, ChainComplexSpec, PrimeField, SparseMatrix};
use crate::{Result, SrError};

pub const MAX_VERTICES: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Face(pub u64);

impl Face {
    pub const EMPTY: Face = Face(0);

    pub fn from_vertices(vs: &[usize]) -> Face {
        Face(vs.iter().fold(0, |acc, &v| acc | 1 << v))
    }

    pub fn singleton(v: usize) -> Face {
        Face(1 << v)
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn dim(self) -> i32 {
        self.len() as i32 - 1
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn is_subset_of(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    #[inline]
    pub fn minus(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    pub fn with(self, v: usize) -> Face {
        Face(self.0 | 1 << v)
    }

    pub fn without(self, v: usize) -> Face {
        Face(self.0 & !(1 << v))
    }

    pub fn is_disjoint(self, other: Face) -> bool {
        self.0 & other.0 == 0
    }

    /// Number of vertices of the face below `v`.
    pub fn position(self, v: usize) -> usize {
        (self.0 & ((1u64 << v) - 1)).count_ones() as usize
    }

    pub fn vertices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn vertex_list(self) -> Vec<usize> {
        self.vertices().collect()
    }

    /// All subsets, including the empty face and the face itself.
    pub fn subsets(self) -> impl Iterator<Item = Face> {
        let full = self.0;
        let mut sub = full;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = Face(sub);
            if sub == 0 {
                done = true;
            } else {
                sub = (sub - 1) & full;
            }
            Some(out)
        })
    }
}

impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.len().cmp(&other.len()) {
            Ordering::Equal if self.0 != other.0 => {
                let low = (self.0 ^ other.0).trailing_zeros();
                if self.0 >> low & 1 == 1 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            o => o,
        }
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.vertex_list())
    }
}

/// A downward-closed family of faces. The void complex has no faces at all;
/// `{∅}` has exactly the empty face.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    faces: Vec<Face>,
    lookup: HashSet<Face>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_void() {
            return write!(f, "void on {:?}", self.labels);
        }
        let facets: Vec<Vec<&str>> = self
            .facets()
            .iter()
            .map(|s| s.vertices().map(|v| self.labels[v].as_str()).collect())
            .collect();
        write!(f, "{:?}", facets)
    }
}

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.len() > MAX_VERTICES {
        return Err(SrError::Input(format!(
            "{} vertices exceeds the cap of {MAX_VERTICES}",
            labels.len()
        )));
    }
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(SrError::Input(format!("duplicate vertex label {l:?}")));
        }
    }
    Ok(())
}

pub fn index_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl SimplicialComplex {
    /// Downward closure of the given faces. No faces gives the void complex.
    pub fn from_faces(labels: Vec<String>, generators: impl IntoIterator<Item = Face>) -> Result<Self> {
        check_labels(&labels)?;
        let n = labels.len();
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut set = BTreeSet::new();
        for g in generators {
            if g.0 & !mask != 0 {
                return Err(SrError::Input(format!("face {g:?} uses a vertex outside the ground set")));
            }
            if set.contains(&g) {
                continue;
            }
            for s in g.subsets() {
                set.insert(s);
            }
        }
        Ok(Self::from_closed(labels, set.into_iter().collect()))
    }

    fn from_closed(labels: Vec<String>, mut faces: Vec<Face>) -> Self {
        faces.sort();
        faces.dedup();
        let lookup = faces.iter().copied().collect();
        SimplicialComplex { labels, faces, lookup }
    }

    /// Closure of labelled facets; `void` only matters when no facets are given.
    pub fn from_facets(labels: Vec<String>, facets: &[Vec<String>], void: bool) -> Result<Self> {
        let pos: BTreeMap<&str, usize> =
            labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut gens = Vec::new();
        for facet in facets {
            let mut f = Face::EMPTY;
            for l in facet {
                let &v = pos
                    .get(l.as_str())
                    .ok_or_else(|| SrError::Input(format!("unknown vertex label {l:?}")))?;
                f = f.with(v);
            }
            gens.push(f);
        }
        if gens.is_empty() && !void {
            gens.push(Face::EMPTY);
        }
        Self::from_faces(labels, gens)
    }

    pub fn from_index_facets(n: usize, facets: &[Vec<usize>]) -> Result<Self> {
        if facets.iter().flatten().any(|&v| v >= n) {
            return Err(SrError::Input("facet vertex outside the ground set".into()));
        }
        let gens: Vec<Face> = facets.iter().map(|f| Face::from_vertices(f)).collect();
        if gens.is_empty() {
            return Self::from_faces(index_labels(n), [Face::EMPTY]);
        }
        Self::from_faces(index_labels(n), gens)
    }

    pub fn void(labels: Vec<String>) -> Self {
        Self::from_closed(labels, Vec::new())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ground_size(&self) -> usize {
        self.labels.len()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn contains(&self, f: Face) -> bool {
        self.lookup.contains(&f)
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    /// `None` for the void complex, `-1` for `{∅}`.
    pub fn dim(&self) -> Option<i32> {
        self.faces.last().map(|f| f.dim())
    }

    pub fn faces_of_dim(&self, k: i32) -> impl Iterator<Item = Face> + '_ {
        self.faces.iter().copied().filter(move |f| f.dim() == k)
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.faces_of_dim(0).map(|f| f.0.trailing_zeros() as usize).collect()
    }

    pub fn vertex_set(&self) -> Face {
        self.faces.iter().fold(Face::EMPTY, |a, &f| a.union(f))
    }

    pub fn facets(&self) -> Vec<Face> {
        self.faces
            .iter()
            .copied()
            .filter(|&f| (0..self.labels.len()).all(|v| f.contains(v) || !self.contains(f.with(v))))
            .collect()
    }

    pub fn is_pure(&self) -> bool {
        let facets = self.facets();
        facets.iter().all(|f| f.len() == facets[0].len())
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.faces.iter().all(|&f| other.contains(f))
    }

    fn filtered(&self, keep: impl Fn(Face) -> bool) -> SimplicialComplex {
        Self::from_closed(self.labels.clone(), self.faces.iter().copied().filter(|&f| keep(f)).collect())
    }

    /// `{σ : σ ∩ τ = ∅, σ ∪ τ ∈ Δ}`; void if τ is not a face.
    pub fn link(&self, tau: Face) -> SimplicialComplex {
        self.filtered(|s| s.is_disjoint(tau) && self.contains(s.union(tau)))
    }

    /// `{σ : σ ∪ τ ∈ Δ}`; void if τ is not a face.
    pub fn star(&self, tau: Face) -> SimplicialComplex {
        self.filtered(|s| self.contains(s.union(tau)))
    }

    /// Faces not containing τ.
    pub fn deletion(&self, tau: Face) -> SimplicialComplex {
        self.filtered(|s| !tau.is_subset_of(s))
    }

    /// Faces with every vertex in `w`.
    pub fn induced(&self, w: Face) -> SimplicialComplex {
        self.filtered(|s| s.is_subset_of(w))
    }

    pub fn union_with(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mut faces = self.faces.clone();
        faces.extend(other.faces.iter().copied());
        Self::from_closed(self.labels.clone(), faces)
    }

    /// Closure of the codimension-one faces lying in exactly one facet. For a
    /// triangulated manifold with boundary this is the boundary complex.
    pub fn boundary(&self) -> SimplicialComplex {
        let facets = self.facets();
        let Some(top) = facets.iter().map(|f| f.len()).max() else {
            return SimplicialComplex::void(self.labels.clone());
        };
        let ridges: Vec<Face> = self
            .faces
            .iter()
            .copied()
            .filter(|r| r.len() + 1 == top && facets.iter().filter(|f| r.is_subset_of(**f)).count() == 1)
            .collect();
        Self::from_faces(self.labels.clone(), ridges).expect("labels already validated")
    }

    /// Whether the subcomplex `sub` equals the subcomplex of `self` induced on its vertex set.
    pub fn is_induced(&self, sub: &SimplicialComplex) -> Option<Face> {
        let w = sub.vertex_set();
        self.faces.iter().copied().find(|&f| f.is_subset_of(w) && !sub.contains(f))
    }

    pub fn label_face(&self, f: Face) -> String {
        let names: Vec<&str> = f.vertices().map(|v| self.labels[v].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn face_from_labels(&self, names: &[String]) -> Result<Face> {
        let mut f = Face::EMPTY;
        for n in names {
            let v = self
                .labels
                .iter()
                .position(|l| l == n)
                .ok_or_else(|| SrError::Input(format!("unknown vertex label {n:?}")))?;
            f = f.with(v);
        }
        Ok(f)
    }

    /// Same faces over a ground set extended by `extra` new labels.
    pub fn extend_ground(&self, extra: &[String]) -> Result<SimplicialComplex> {
        let mut labels = self.labels.clone();
        labels.extend(extra.iter().cloned());
        check_labels(&labels)?;
        Ok(Self::from_closed(labels, self.faces.clone()))
    }
}

/// Join of complexes on disjoint ground sets; the result lives on the
/// concatenated ground set.
pub fn join_of(a: &SimplicialComplex, b: &SimplicialComplex) -> Result<SimplicialComplex> {
    if let Some(l) = a.labels.iter().find(|l| b.labels.contains(l)) {
        return Err(SrError::Input(format!("ground sets overlap in {l:?}")));
    }
    let mut labels = a.labels.clone();
    labels.extend(b.labels.iter().cloned());
    check_labels(&labels)?;
    let shift = a.labels.len();
    let mut faces = Vec::new();
    for &x in &a.faces {
        for &y in &b.faces {
            faces.push(Face(x.0 | y.0 << shift));
        }
    }
    Ok(SimplicialComplex::from_closed(labels, faces))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector {
    /// `f[k]` counts faces of dimension `k - 1`, starting at the empty face.
    pub f: Vec<i64>,
    /// `h_0, …, h_{d+1}`.
    pub h: Vec<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub dims: BTreeMap<i32, usize>,
}

impl BettiTable {
    pub fn get(&self, i: i32) -> usize {
        self.dims.get(&i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.dims.values().all(|&b| b == 0)
    }
}

/// A pair Ψ = (Δ, Γ) with Γ ⊆ Δ on a common ground set.
#[derive(Clone, PartialEq, Eq)]
pub struct RelativeComplex {
    pub delta: SimplicialComplex,
    pub gamma: SimplicialComplex,
}

impl fmt::Debug for RelativeComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.delta, self.gamma)
    }
}

#[derive(Debug, Clone)]
pub struct Neighborhoods {
    pub link: RelativeComplex,
    pub star: RelativeComplex,
    pub open_star: RelativeComplex,
    pub deletion: SimplicialComplex,
}

impl RelativeComplex {
    pub fn new(delta: SimplicialComplex, gamma: SimplicialComplex) -> Result<Self> {
        if delta.labels != gamma.labels {
            return Err(SrError::Input("Δ and Γ have different ground sets".into()));
        }
        if let Some(f) = gamma.faces.iter().find(|&&f| !delta.contains(f)) {
            return Err(SrError::Input(format!(
                "Γ is not a subcomplex of Δ: {} is missing from Δ",
                delta.label_face(*f)
            )));
        }
        Ok(RelativeComplex { delta, gamma })
    }

    pub fn absolute(delta: SimplicialComplex) -> Self {
        let gamma = SimplicialComplex::void(delta.labels.clone());
        RelativeComplex { delta, gamma }
    }

    pub fn labels(&self) -> &[String] {
        &self.delta.labels
    }

    pub fn ground_size(&self) -> usize {
        self.delta.labels.len()
    }

    pub fn is_absolute(&self) -> bool {
        self.gamma.is_void()
    }

    /// Faces of Δ not in Γ, in the global face order.
    pub fn faces(&self) -> impl Iterator<Item = Face> + '_ {
        self.delta.faces.iter().copied().filter(|&f| !self.gamma.contains(f))
    }

    pub fn contains(&self, f: Face) -> bool {
        self.delta.contains(f) && !self.gamma.contains(f)
    }

    pub fn is_void(&self) -> bool {
        self.faces().next().is_none()
    }

    pub fn dim(&self) -> Option<i32> {
        self.faces().map(|f| f.dim()).max()
    }

    /// Largest cardinality of a face of Ψ; the expected l.s.o.p. length.
    pub fn max_face_card(&self) -> usize {
        self.faces().map(|f| f.len()).max().unwrap_or(0)
    }

    /// Minimal faces of Δ \ Γ, the degrees in which k[Ψ] is generated.
    pub fn minimal_faces(&self) -> Vec<Face> {
        self.faces()
            .filter(|&f| f.vertices().all(|v| !self.contains(f.without(v))))
            .collect()
    }

    /// Maximal faces of Δ \ Γ, i.e. facets of Δ outside Γ.
    pub fn maximal_faces(&self) -> Vec<Face> {
        self.delta.facets().into_iter().filter(|&f| !self.gamma.contains(f)).collect()
    }

    pub fn link(&self, tau: Face) -> RelativeComplex {
        RelativeComplex { delta: self.delta.link(tau), gamma: self.gamma.link(tau) }
    }

    pub fn star(&self, tau: Face) -> RelativeComplex {
        RelativeComplex { delta: self.delta.star(tau), gamma: self.gamma.star(tau) }
    }

    /// `(st_τΔ, st_τΓ ∪ (st_τΔ − τ))`: the faces of the star that contain τ.
    pub fn open_star(&self, tau: Face) -> RelativeComplex {
        let star = self.delta.star(tau);
        let gamma = self.gamma.star(tau).union_with(&star.deletion(tau));
        RelativeComplex { delta: star, gamma }
    }

    pub fn face_neighborhoods(&self, tau: Face) -> Result<Neighborhoods> {
        if !self.delta.contains(tau) {
            return Err(SrError::Input(format!("{} is not a face of Δ", self.delta.label_face(tau))));
        }
        Ok(Neighborhoods {
            link: self.link(tau),
            star: self.star(tau),
            open_star: self.open_star(tau),
            deletion: self.delta.deletion(tau),
        })
    }

    pub fn f_h_vectors(&self) -> Result<FVector> {
        let d = self.dim().ok_or_else(|| SrError::Input("f-vector of a void complex".into()))?;
        let mut f = vec![0i64; (d + 2) as usize];
        for face in self.faces() {
            f[face.len()] += 1;
        }
        Ok(FVector { h: h_from_f(&f), f })
    }

    /// Reduced cohomology of the pair, with the empty face in degree -1.
    pub fn relative_cohomology_dims(&self, field: PrimeField) -> BettiTable {
        let cx = self.cochain_complex(field);
        let dims = chain_homology_dims(&cx).expect("coboundary squares to zero");
        BettiTable { dims }
    }

    /// Simplicial cochain complex C^{-1} → C^0 → … spanned by faces of Ψ.
    pub fn cochain_complex(&self, field: PrimeField) -> ChainComplexSpec {
        let Some(d) = self.dim() else {
            return ChainComplexSpec::new(field, -1, Vec::new());
        };
        let mut by_dim: Vec<Vec<Face>> = vec![Vec::new(); (d + 2) as usize];
        for f in self.faces() {
            by_dim[f.len()].push(f);
        }
        let index: Vec<BTreeMap<Face, usize>> = by_dim
            .iter()
            .map(|fs| fs.iter().enumerate().map(|(i, &f)| (f, i)).collect())
            .collect();
        let dims = by_dim.iter().map(|v| v.len()).collect();
        let mut cx = ChainComplexSpec::new(field, -1, dims);
        let n = self.ground_size();
        for k in 0..(d + 1) as usize {
            let cols = by_dim[k]
                .iter()
                .map(|&s| {
                    let mut col: Vec<(usize, u64)> = (0..n)
                        .filter(|&v| !s.contains(v))
                        .filter_map(|v| {
                            let t = s.with(v);
                            index[k + 1].get(&t).map(|&r| (r, field.sign(t.position(v) % 2 == 1)))
                        })
                        .collect();
                    col.sort();
                    col
                })
                .collect();
            let m = SparseMatrix::from_columns(field, by_dim[k + 1].len(), cols);
            cx.set_differential(k as i32 - 1, m).expect("shapes agree");
        }
        cx
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces().map(|f| if f.len() % 2 == 1 { 1 } else { -1 }).sum::<i64>()
    }

    pub fn to_json(&self) -> ComplexJson {
        let names = |f: Face| -> Vec<Value> {
            f.vertices().map(|v| Value::String(self.labels()[v].clone())).collect()
        };
        let facets = self.delta.facets().into_iter().map(names).collect();
        let gamma_facets = if self.gamma.is_void() {
            None
        } else {
            Some(self.gamma.facets().into_iter().map(names).collect())
        };
        ComplexJson {
            vertices: self.labels().iter().cloned().map(Value::String).collect(),
            facets,
            gamma_facets,
            void: self.delta.is_void().then_some(true),
        }
    }

    /// sha256 of the canonical JSON form.
    pub fn content_hash(&self) -> String {
        let s = serde_json::to_string(&self.to_json()).expect("serializable");
        hex_digest(s.as_bytes())
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// `Σ h_i x^i = Σ_k f[k] x^k (1-x)^{d+1-k}` where `f[k]` counts `(k-1)`-faces.
pub fn h_from_f(f: &[i64]) -> Vec<i64> {
    let top = f.len() as i64 - 1;
    (0..=top)
        .map(|m| {
            (0..=m)
                .map(|k| {
                    let sign = if (m - k) % 2 == 0 { 1 } else { -1 };
                    f[k as usize] * sign * crate::binomial(top - k, m - k)
                })
                .sum()
        })
        .collect()
}

/// The shared JSON complex format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub vertices: Vec<Value>,
    pub facets: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_facets: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub void: Option<bool>,
}

pub(crate) fn label_of(v: &Value, field: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(SrError::Input(format!("{field}: vertex label must be a string or number, got {other}"))),
    }
}

impl ComplexJson {
    pub fn to_complex(&self) -> Result<RelativeComplex> {
        let labels = self
            .vertices
            .iter()
            .map(|v| label_of(v, "vertices"))
            .collect::<Result<Vec<_>>>()?;
        let to_facets = |fs: &[Vec<Value>], field: &str| -> Result<Vec<Vec<String>>> {
            fs.iter()
                .map(|f| f.iter().map(|v| label_of(v, field)).collect())
                .collect()
        };
        let facets = to_facets(&self.facets, "facets")?;
        let delta = SimplicialComplex::from_facets(labels.clone(), &facets, self.void.unwrap_or(false))?;
        let gamma = match &self.gamma_facets {
            None => SimplicialComplex::void(labels),
            Some(g) => SimplicialComplex::from_facets(labels, &to_facets(g, "gamma_facets")?, true)?,
        };
        RelativeComplex::new(delta, gamma)
    }
}

pub fn parse_complex_json(text: &str) -> Result<RelativeComplex> {
    let raw: ComplexJson = serde_json::from_str(text).map_err(|e| SrError::Input(format!("complex JSON: {e}")))?;
    raw.to_complex()
}

/// Barycentric subdivision. Vertex `i` of the result is the `i`-th nonempty
/// face of `delta` in face order; the second value lists those faces.
pub fn barycentric_subdivision(delta: &SimplicialComplex) -> Result<(SimplicialComplex, Vec<Face>)> {
    let cells: Vec<Face> = delta.faces().iter().copied().filter(|f| !f.is_empty()).collect();
    if cells.is_empty() {
        return Err(SrError::Input("barycentric subdivision needs a nonempty face".into()));
    }
    if cells.len() > MAX_VERTICES {
        return Err(SrError::Input(format!("subdivision would have {} vertices", cells.len())));
    }
    let labels: Vec<String> = cells
        .iter()
        .map(|&f| {
            let names: Vec<&str> = f.vertices().map(|v| delta.labels()[v].as_str()).collect();
            names.join("+")
        })
        .collect();
    // maximal chains are built upward from each vertex
    let mut chains = Vec::new();
    fn extend(cells: &[Face], chain: Face, top: Face, out: &mut Vec<Face>) {
        let mut grew = false;
        for (i, &c) in cells.iter().enumerate() {
            if c.len() == top.len() + 1 && top.is_subset_of(c) {
                grew = true;
                extend(cells, chain.with(i), c, out);
            }
        }
        if !grew {
            out.push(chain);
        }
    }
    for (i, &c) in cells.iter().enumerate() {
        if c.len() == 1 {
            extend(&cells, Face::singleton(i), c, &mut chains);
        }
    }
    Ok((SimplicialComplex::from_faces(labels, chains)?, cells))
}

const TORUS7_JSON: &str = include_str!("../data/torus7.json");
const RP2_6_JSON: &str = include_str!("../data/rp2_6.json");
const MOEBIUS_JSON: &str = include_str!("../data/moebius.json");

/// sha256 of the frozen data files, checked in tests.
pub const DATA_CHECKSUMS: [(&str, &str); 3] = [
    ("torus7", "502a9f6240e0e74c87013816f79258bb3d1e3724890cf253d92e3d0e91109cdf"),
    ("rp2_6", "869dc6bd694b3934c0df962cb4ba19bcb07eb4b52ebc16152ad5be144a1d0c3a"),
    ("moebius", "acdab775f77708af9f7635ef97f492dad533d8ce22e6667b2d5d3a63c4d15d23"),
];

pub fn builtin_data(name: &str) -> Option<&'static str> {
    match name {
        "torus7" => Some(TORUS7_JSON),
        "rp2_6" => Some(RP2_6_JSON),
        "moebius" => Some(MOEBIUS_JSON),
        _ => None,
    }
}

pub const BUILTIN_NAMES: &[&str] = &[
    "simplex(k)",
    "boundary_simplex(k)",
    "cross_polytope(k)",
    "torus7",
    "rp2_6",
    "moebius",
    "disk_with_induced_boundary(k)",
    "two_points",
    "path(k)",
];

fn split_param(name: &str) -> (&str, Option<usize>) {
    if let Some(stripped) = name.strip_suffix(')') {
        if let Some((base, arg)) = stripped.split_once('(') {
            return (base, arg.trim().parse().ok());
        }
    }
    if let Some((base, arg)) = name.rsplit_once('_') {
        if let Ok(k) = arg.parse() {
            if base != "rp2" {
                return (base, Some(k));
            }
        }
    }
    (name, None)
}

/// Builtin corpus. Parameterised names accept `name(k)` or `name_k`.
/// `path(k)` has k edges; `cross_polytope(k)` is the boundary of the
/// k-dimensional cross-polytope; `disk_with_induced_boundary(k)` is the cone
/// over ∂Δ^k relative to its base.
pub fn builtin_complex(name: &str) -> Result<RelativeComplex> {
    let name = name.trim();
    if let Some(text) = builtin_data(name) {
        return parse_complex_json(text);
    }
    let unknown = || SrError::Input(format!("unknown builtin {name:?}; known: {}", BUILTIN_NAMES.join(", ")));
    let (base, k) = split_param(name);
    let need = |k: Option<usize>| k.ok_or_else(unknown);
    let cx = match base {
        "simplex" => {
            let k = need(k)?;
            SimplicialComplex::from_index_facets(k + 1, &[(0..=k).collect()])?
        }
        "boundary_simplex" => {
            let k = need(k)?;
            boundary_simplex(k)?
        }
        "cross_polytope" => {
            let k = need(k)?;
            let labels: Vec<String> = (1..=k).flat_map(|i| [format!("+{i}"), format!("-{i}")]).collect();
            let facets = (0..1usize << k).map(|signs| {
                Face::from_vertices(&(0..k).map(|i| 2 * i + (signs >> i & 1)).collect::<Vec<_>>())
            });
            SimplicialComplex::from_faces(labels, facets)?
        }
        "two_points" => SimplicialComplex::from_index_facets(2, &[vec![0], vec![1]])?,
        "path" => {
            let k = need(k)?;
            if k == 0 {
                SimplicialComplex::from_index_facets(1, &[vec![0]])?
            } else {
                SimplicialComplex::from_index_facets(k + 1, &(0..k).map(|i| vec![i, i + 1]).collect::<Vec<_>>())?
            }
        }
        "disk_with_induced_boundary" => {
            let k = need(k)?;
            let base = boundary_simplex(k)?;
            let apex = SimplicialComplex::from_facets(vec!["c".into()], &[vec!["c".into()]], false)?;
            let cone = join_of(&base, &apex)?;
            let rim = base.extend_ground(&["c".to_string()])?;
            return RelativeComplex::new(cone, rim);
        }
        _ => return Err(unknown()),
    };
    Ok(RelativeComplex::absolute(cx))
}

fn boundary_simplex(k: usize) -> Result<SimplicialComplex> {
    let facets: Vec<Vec<usize>> = (0..=k).map(|skip| (0..=k).filter(|&v| v != skip).collect()).collect();
    SimplicialComplex::from_index_facets(k + 1, &facets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> PrimeField {
        PrimeField::default()
    }

    fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    /// Independent f→h oracle by explicit polynomial arithmetic.
    fn h_oracle(f: &[i64]) -> Vec<i64> {
        let d1 = f.len() - 1;
        let mut total = vec![0i64; d1 + 1];
        for (k, &fk) in f.iter().enumerate() {
            let mut term = vec![0i64; k + 1];
            term[k] = fk;
            for _ in 0..(d1 - k) {
                term = poly_mul(&term, &[1, -1]);
            }
            for (i, c) in term.into_iter().enumerate() {
                total[i] += c;
            }
        }
        total
    }

    #[test]
    fn face_order_is_by_size_then_lex() {
        let mut fs = vec![
            Face::from_vertices(&[1, 2]),
            Face::from_vertices(&[0, 2]),
            Face::singleton(3),
            Face::EMPTY,
            Face::from_vertices(&[0, 1]),
        ];
        fs.sort();
        let lists: Vec<Vec<usize>> = fs.iter().map(|f| f.vertex_list()).collect();
        assert_eq!(lists, vec![vec![], vec![3], vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(Face::from_vertices(&[0, 2, 5]).position(5), 2);
    }

    #[test]
    fn closure_examples() {
        let tri = SimplicialComplex::from_index_facets(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(tri.faces().len(), 8);
        let e = SimplicialComplex::from_facets(vec!["1".into()], &[], false).unwrap();
        assert_eq!(e.faces(), &[Face::EMPTY]);
        let v = SimplicialComplex::from_facets(vec!["1".into()], &[], true).unwrap();
        assert!(v.is_void());
        assert_ne!(e, v);
        assert!(SimplicialComplex::from_facets(vec!["a".into()], &[vec!["b".into()]], false).is_err());
    }

    #[test]
    fn torus_face_counts() {
        let t = builtin_complex("torus7").unwrap();
        let fv = t.f_h_vectors().unwrap();
        assert_eq!(fv.f, vec![1, 7, 21, 14]);
        assert_eq!(fv.h, vec![1, 4, 10, -1]);
        assert_eq!(t.euler_characteristic() + 1, 0);
    }

    #[test]
    fn neighborhoods() {
        let tri = builtin_complex("boundary_simplex(2)").unwrap();
        let nb = tri.face_neighborhoods(Face::singleton(0)).unwrap();
        assert_eq!(nb.link.delta.facets(), vec![Face::singleton(1), Face::singleton(2)]);
        assert_eq!(
            nb.star.delta.facets(),
            vec![Face::from_vertices(&[0, 1]), Face::from_vertices(&[0, 2])]
        );
        assert_eq!(nb.deletion.facets(), vec![Face::from_vertices(&[1, 2])]);
        let open: Vec<Face> = nb.open_star.faces().collect();
        assert_eq!(
            open,
            vec![Face::singleton(0), Face::from_vertices(&[0, 1]), Face::from_vertices(&[0, 2])]
        );

        let nb = tri.face_neighborhoods(Face::EMPTY).unwrap();
        assert_eq!(nb.link, tri);
        assert_eq!(nb.star, tri);
        assert!(tri.face_neighborhoods(Face::from_vertices(&[0, 1, 2])).is_err());
    }

    #[test]
    fn torus_links_are_hexagons() {
        let t = builtin_complex("torus7").unwrap();
        for v in 0..7 {
            let lk = t.link(Face::singleton(v)).delta;
            // brute-force neighbours from the facet list
            let nbrs: BTreeSet<usize> = t
                .delta
                .facets()
                .iter()
                .filter(|f| f.contains(v))
                .flat_map(|f| f.vertices())
                .filter(|&u| u != v)
                .collect();
            assert_eq!(nbrs.len(), 6);
            assert_eq!(lk.vertices().len(), 6);
            assert_eq!(lk.faces_of_dim(1).count(), 6);
            assert!(lk.vertices().iter().all(|u| lk.link(Face::singleton(*u)).vertices().len() == 2));
        }
    }

    #[test]
    fn joins() {
        let pt = |l: &str| SimplicialComplex::from_facets(vec![l.into()], &[vec![l.into()]], false).unwrap();
        let e = join_of(&pt("a"), &pt("b")).unwrap();
        assert_eq!(e.facets(), vec![Face::from_vertices(&[0, 1])]);
        let void = SimplicialComplex::void(vec!["z".into()]);
        assert!(join_of(&e, &void).unwrap().is_void());
        let two = |a: &str, b: &str| {
            SimplicialComplex::from_facets(vec![a.into(), b.into()], &[vec![a.into()], vec![b.into()]], false)
                .unwrap()
        };
        let sq = join_of(&two("a", "b"), &two("c", "d")).unwrap();
        assert_eq!(sq.faces_of_dim(1).count(), 4);
        assert_eq!(sq.dim(), Some(1));
        assert!(join_of(&pt("a"), &pt("a")).is_err());
    }

    #[test]
    fn h_vectors_match_polynomial_oracle() {
        for name in ["boundary_simplex(3)", "torus7", "rp2_6", "cross_polytope(3)", "moebius", "simplex(3)"] {
            let c = builtin_complex(name).unwrap();
            let fv = c.f_h_vectors().unwrap();
            assert_eq!(fv.h, h_oracle(&fv.f), "{name}");
        }
        let fv = builtin_complex("boundary_simplex(3)").unwrap().f_h_vectors().unwrap();
        assert_eq!((fv.f, fv.h), (vec![1, 4, 6, 4], vec![1, 1, 1, 1]));
        let pt = builtin_complex("simplex(0)").unwrap().f_h_vectors().unwrap();
        assert_eq!((pt.f, pt.h), (vec![1, 1], vec![1, 0]));
        let oct = builtin_complex("cross_polytope(3)").unwrap().f_h_vectors().unwrap();
        assert_eq!((oct.f, oct.h), (vec![1, 6, 12, 8], vec![1, 3, 3, 1]));
        let v = RelativeComplex::absolute(SimplicialComplex::void(vec![]));
        assert!(v.f_h_vectors().is_err());
    }

    #[test]
    fn cohomology_examples() {
        let p = fp();
        let e = RelativeComplex::absolute(SimplicialComplex::from_index_facets(1, &[]).unwrap());
        assert_eq!(e.relative_cohomology_dims(p).dims, BTreeMap::from([(-1, 1)]));
        let t = builtin_complex("torus7").unwrap().relative_cohomology_dims(p);
        assert_eq!((t.get(-1), t.get(0), t.get(1), t.get(2)), (0, 0, 2, 1));
        let rp = builtin_complex("rp2_6").unwrap();
        let b2 = rp.relative_cohomology_dims(PrimeField::new(2).unwrap());
        assert_eq!((b2.get(0), b2.get(1), b2.get(2)), (0, 1, 1));
        let b3 = rp.relative_cohomology_dims(PrimeField::new(3).unwrap());
        assert!(b3.is_zero());
        let void = RelativeComplex::absolute(SimplicialComplex::void(index_labels(2)));
        assert!(void.relative_cohomology_dims(p).is_zero());
        let disk = builtin_complex("disk_with_induced_boundary(2)").unwrap();
        let bd = disk.relative_cohomology_dims(p);
        assert_eq!((bd.get(-1), bd.get(0), bd.get(1), bd.get(2)), (0, 0, 0, 1));
    }

    #[test]
    fn barycentric_examples() {
        let edge = SimplicialComplex::from_index_facets(2, &[vec![0, 1]]).unwrap();
        let (sd, cells) = barycentric_subdivision(&edge).unwrap();
        assert_eq!(cells.len(), 3);
        assert_eq!(sd.faces_of_dim(1).count(), 2);
        let tri = SimplicialComplex::from_index_facets(3, &[vec![0, 1, 2]]).unwrap();
        let (sd, _) = barycentric_subdivision(&tri).unwrap();
        assert_eq!(RelativeComplex::absolute(sd).f_h_vectors().unwrap().f, vec![1, 7, 12, 6]);
        let hollow = builtin_complex("boundary_simplex(2)").unwrap().delta;
        let (sd, _) = barycentric_subdivision(&hollow).unwrap();
        assert_eq!(sd.faces_of_dim(1).count(), 6);
        assert!(sd.vertices().iter().all(|&v| sd.link(Face::singleton(v)).vertices().len() == 2));
    }

    #[test]
    fn builtins() {
        assert_eq!(builtin_complex("boundary_simplex_3").unwrap().f_h_vectors().unwrap().f, vec![1, 4, 6, 4]);
        let rp = builtin_complex("rp2_6").unwrap();
        assert_eq!(rp.ground_size(), 6);
        assert_eq!(rp.delta.faces_of_dim(2).count(), 10);
        assert_eq!(rp.euler_characteristic() + 1, 1);
        let m = builtin_complex("moebius").unwrap();
        assert_eq!(m.f_h_vectors().unwrap().f, vec![1, 5, 10, 5]);
        assert_eq!(builtin_complex("path(3)").unwrap().delta.faces_of_dim(1).count(), 3);
        assert!(builtin_complex("klein_bottle").is_err());
        let d = builtin_complex("disk_with_induced_boundary(2)").unwrap();
        assert!(d.delta.is_induced(&d.gamma).is_none());
    }

    #[test]
    fn data_files_match_frozen_checksums() {
        for (name, sum) in DATA_CHECKSUMS {
            assert_eq!(hex_digest(builtin_data(name).unwrap().as_bytes()), sum, "{name}");
        }
    }

    #[test]
    fn json_round_trip() {
        let t = builtin_complex("disk_with_induced_boundary(2)").unwrap();
        let text = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(parse_complex_json(&text).unwrap(), t);
        let bad = r#"{"vertices":[1,2],"facets":[[1]],"gamma_facets":[[2]]}"#;
        assert!(parse_complex_json(bad).is_err());
        let e = parse_complex_json(r#"{"vertices":["a"],"facets":[]}"#).unwrap();
        assert_eq!(e.delta.faces(), &[Face::EMPTY]);
    }
}
