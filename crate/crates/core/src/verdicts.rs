//! Theorem-level checks that combine the other modules into reproducible,
//! serialisable reports.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::duality::{
    build_b, cone_lemma_check, is_poincare_duality_algebra, manifold_sanity, open_star_injectivity, GradedAlgebra,
};
use crate::exactlinalg::PrimeField;
use crate::facering::{
    hilbert_series_coeffs, is_lsop, quotient_presentation, random_linear_forms, sample_lsop, LinearFormSequence,
    DEFAULT_LSOP_ATTEMPTS,
};
use crate::koszul::{depth, is_algebraically_cm, koszul_homology_dims, GradingMode};
use crate::partition::{
    interior_partition_check, partition_homology_dims, reduced_partition_homology, subdivision_partition_check,
    total_complex_homology, SubdivisionStructure,
};
use crate::simplicial::{hex_digest, Face, RelativeComplex};
use crate::{binomial, Result, SrError};

/// Below this prime a failed genericity claim is reported inconclusive.
pub const SMALL_PRIME_THRESHOLD: u64 = 65_536;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub input_hash: String,
    pub prime: u64,
    pub seeds: Vec<u64>,
    pub tables: Vec<Table>,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

impl TheoremReport {
    fn new(theorem: &str, input_hash: String, params: &RunParams) -> Self {
        TheoremReport {
            theorem: theorem.into(),
            input_hash,
            prime: params.field.p(),
            seeds: params.seeds(),
            tables: Vec::new(),
            verdict: Verdict::Inconclusive,
            diagnostics: Vec::new(),
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunParams {
    pub field: PrimeField,
    pub seed: u64,
    pub trials: usize,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams { field: PrimeField::default(), seed: 0, trials: 3 }
    }
}

impl RunParams {
    pub fn new(field: PrimeField, seed: u64, trials: usize) -> Self {
        RunParams { field, seed, trials: trials.max(1) }
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.trials as u64).map(|t| self.seed.wrapping_add(t)).collect()
    }

    fn small_field(&self) -> bool {
        self.field.p() < SMALL_PRIME_THRESHOLD
    }

    /// Θ for a trial, or `None` when rejection sampling gives up.
    fn lsop(&self, psi: &RelativeComplex, seed: u64) -> Option<LinearFormSequence> {
        sample_lsop(psi, self.field, seed, DEFAULT_LSOP_ATTEMPTS).map(|(t, _)| t)
    }

    /// A fresh linear form for a trial, independent of Θ.
    fn form(&self, psi: &RelativeComplex, seed: u64) -> Vec<u64> {
        random_linear_forms(psi, 1, seed ^ 0x5eed_f0_1e_u64.rotate_left(32), self.field).forms.remove(0)
    }

    /// A property that holds for generic choices holds if some trial passes;
    /// it fails only if every trial fails over a large field.
    fn generic(&self, trials: &[Option<bool>]) -> Verdict {
        if trials.iter().any(|&t| t == Some(true)) {
            Verdict::Holds
        } else if trials.iter().all(|&t| t == Some(false)) && !self.small_field() {
            Verdict::Fails
        } else {
            Verdict::Inconclusive
        }
    }
}

fn verdict_of(ok: bool) -> Verdict {
    if ok {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

fn hash_of(psi: &RelativeComplex) -> String {
    psi.content_hash()
}

fn dim_of(psi: &RelativeComplex) -> Result<usize> {
    match psi.dim() {
        Some(d) if d >= 0 => Ok(d as usize),
        _ => Err(SrError::Input("complex has no nonempty face".into())),
    }
}

/// First face τ (with a degree i) violating H^i(lk_τΨ) = 0 for
/// -1 ≤ i < bound(τ).
fn link_violation(psi: &RelativeComplex, field: PrimeField, bound: impl Fn(Face, &RelativeComplex) -> i32) -> Option<(Face, i32)> {
    for &tau in psi.delta.faces() {
        let link = psi.link(tau);
        let b = bound(tau, &link);
        let h = link.relative_cohomology_dims(field);
        if let Some((&i, _)) = h.dims.iter().find(|(&i, &x)| x > 0 && i < b) {
            return Some((tau, i));
        }
    }
    None
}

/// H^i(lk_τΨ) = 0 for all faces τ ∈ Δ and -1 ≤ i < dim Ψ - |τ|.
pub fn topologically_cm(psi: &RelativeComplex, field: PrimeField) -> std::result::Result<(), (Face, i32)> {
    let Some(d) = psi.dim() else {
        return Ok(());
    };
    match link_violation(psi, field, |tau, _| d - tau.len() as i32) {
        None => Ok(()),
        Some(v) => Err(v),
    }
}

/// The weaker condition with dim lk_τΨ as the bound.
pub fn weakly_topologically_cm(psi: &RelativeComplex, field: PrimeField) -> std::result::Result<(), (Face, i32)> {
    match link_violation(psi, field, |_, link| link.dim().unwrap_or(-2)) {
        None => Ok(()),
        Some(v) => Err(v),
    }
}

pub fn reisner_report(psi: &RelativeComplex, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("reisner", hash_of(psi), params);
    let field = params.field;
    let topo = topologically_cm(psi, field);
    let weak = weakly_topologically_cm(psi, field);
    let alg = is_algebraically_cm(psi, field, params.seed, params.trials);
    let describe = |v: &std::result::Result<(), (Face, i32)>| match v {
        Ok(()) => json!(null),
        Err((f, i)) => json!(format!("H^{i}(lk {}) ≠ 0", psi.delta.label_face(*f))),
    };
    let mut t = Table::new("sides", &["side", "cm", "witness"]);
    t.push(vec![json!("topological"), json!(topo.is_ok()), describe(&topo)]);
    t.push(vec![json!("topological (link-dimension bound)"), json!(weak.is_ok()), describe(&weak)]);
    t.push(vec![json!("algebraic"), json!(alg.cm), json!(alg.depth.map(|d| format!("depth {d} of {}", alg.expected)))]);
    r.tables.push(t);
    let mut trials = Table::new("trials", &["seed", "depth"]);
    for (s, d) in alg.seeds.iter().zip(&alg.trial_depths) {
        trials.push(vec![json!(s), json!(d)]);
    }
    r.tables.push(trials);
    r.diagnostics.extend(alg.warnings.iter().cloned());
    r.verdict = match alg.cm {
        Some(a) => verdict_of(a == topo.is_ok()),
        None => Verdict::Inconclusive,
    };
    r
}

/// Every vertex star algebraically CM; stars of larger faces are stars
/// inside these.
fn buchsbaum_obstruction(psi: &RelativeComplex, params: &RunParams) -> Option<String> {
    for v in psi.delta.vertices() {
        let star = psi.star(Face::singleton(v));
        if star.is_void() {
            continue;
        }
        let cm = is_algebraically_cm(&star, params.field, params.seed, 1);
        if cm.cm != Some(true) {
            return Some(format!("star of {} is not Cohen–Macaulay ({:?})", psi.labels()[v], cm.cm));
        }
    }
    None
}

fn betti(psi: &RelativeComplex, field: PrimeField) -> impl Fn(i64) -> usize {
    let b = psi.relative_cohomology_dims(field);
    move |i| if i < -1 || i > i32::MAX as i64 { 0 } else { b.get(i as i32) }
}

pub fn partition_of_unity_report(psi: &RelativeComplex, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("partition-of-unity", hash_of(psi), params);
    if let Some(why) = buchsbaum_obstruction(psi, params) {
        r.diagnostics.push(why);
        return r;
    }
    let b = betti(psi, params.field);
    let d1 = psi.max_face_card() as i64;
    let mut table = Table::new("H^i(P*/Θ)_j", &["seed", "i", "j", "lhs", "rhs"]);
    let mut outcomes = Vec::new();
    for seed in params.seeds() {
        let Some(theta) = params.lsop(psi, seed) else {
            r.diagnostics.push(format!("seed {seed}: no l.s.o.p. found"));
            outcomes.push(None);
            continue;
        };
        match reduced_partition_homology(psi, &theta) {
            Ok(h) => {
                let mut ok = true;
                for (&(i, j), &lhs) in &h {
                    let rhs = binomial(d1, j as i64) as usize * b(i as i64 + j as i64);
                    ok &= lhs == rhs;
                    table.push(vec![json!(seed), json!(i), json!(j), json!(lhs), json!(rhs)]);
                }
                outcomes.push(Some(ok));
            }
            Err(e) => {
                r.diagnostics.push(format!("seed {seed}: {e}"));
                outcomes.push(None);
            }
        }
    }
    r.tables.push(table);
    r.verdict = params.generic(&outcomes);
    r
}

pub fn total_complex_report(psi: &RelativeComplex, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("total-complex", hash_of(psi), params);
    if let Some(why) = buchsbaum_obstruction(psi, params) {
        r.diagnostics.push(why);
        return r;
    }
    let b = betti(psi, params.field);
    let d1 = psi.max_face_card() as i64;
    let mut table = Table::new("H^k(Tot)_j", &["seed", "k", "j", "lhs", "rhs"]);
    let mut outcomes = Vec::new();
    for seed in params.seeds() {
        let Some(theta) = params.lsop(psi, seed) else {
            outcomes.push(None);
            continue;
        };
        let mut ok = true;
        for ((k, j), lhs) in total_complex_homology(psi, &theta) {
            let rhs = binomial(d1, j as i64) as usize * b(k as i64 + j as i64 - d1);
            ok &= lhs == rhs;
            table.push(vec![json!(seed), json!(k), json!(j), json!(lhs), json!(rhs)]);
        }
        outcomes.push(Some(ok));
    }
    r.tables.push(table);
    r.verdict = params.generic(&outcomes);
    r
}

/// h_j + C(d+1, j) Σ_{i=0}^{j-2} (-1)^{i+j} b_i.
pub fn schenzel_rhs(h: &[i64], betti: &dyn Fn(i64) -> usize, j: usize) -> i64 {
    let d1 = h.len() as i64 - 1;
    let hj = h.get(j).copied().unwrap_or(0);
    let sum: i64 = (0..j as i64 - 1).map(|i| if (i + j as i64) % 2 == 0 { 1 } else { -1 } * betti(i) as i64).sum();
    hj + binomial(d1, j as i64) * sum
}

pub fn schenzel_report(psi: &RelativeComplex, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("schenzel", hash_of(psi), params);
    let fv = match psi.f_h_vectors() {
        Ok(f) => f,
        Err(e) => {
            r.diagnostics.push(e.to_string());
            return r;
        }
    };
    let mut hv = Table::new("vectors", &["name", "values"]);
    hv.push(vec![json!("f"), json!(fv.f)]);
    hv.push(vec![json!("h"), json!(fv.h)]);
    let b = betti(psi, params.field);
    hv.push(vec![json!("betti from -1"), json!((-1..fv.h.len() as i64).map(&b).collect::<Vec<_>>())]);
    r.tables.push(hv);
    if let Some(why) = buchsbaum_obstruction(psi, params) {
        r.diagnostics.push(why);
        return r;
    }
    let mut table = Table::new("dim A_j", &["seed", "j", "quotient", "formula"]);
    let mut outcomes = Vec::new();
    for seed in params.seeds() {
        let Some(theta) = params.lsop(psi, seed) else {
            outcomes.push(None);
            continue;
        };
        let q = quotient_presentation(psi, &theta);
        let mut ok = q.is_finite();
        for j in 0..=fv.h.len() {
            let rhs = schenzel_rhs(&fv.h, &b, j);
            ok &= q.dim(j) as i64 == rhs;
            table.push(vec![json!(seed), json!(j), json!(q.dim(j)), json!(rhs)]);
        }
        outcomes.push(Some(ok));
    }
    r.tables.push(table);
    r.verdict = params.generic(&outcomes);
    r
}

fn palindromic<T: PartialEq>(v: &[T]) -> bool {
    v.iter().eq(v.iter().rev())
}

pub fn dehn_sommerville_report(psi: &RelativeComplex, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("dehn-sommerville", hash_of(psi), params);
    if let Err(e) = manifold_sanity(&psi.delta, params.field) {
        r.diagnostics.push(e.to_string());
        r.verdict = Verdict::Fails;
        return r;
    }
    let h = psi.f_h_vectors().expect("nonvoid").h;
    let mut checks = Table::new("checks", &["check", "values", "palindromic"]);
    let h_ok = palindromic(&h);
    checks.push(vec![json!("h"), json!(h), json!(h_ok)]);
    let mut b_ok = Vec::new();
    for seed in params.seeds() {
        let Some(theta) = params.lsop(psi, seed) else {
            b_ok.push(None);
            continue;
        };
        match build_b(&psi.delta, &theta) {
            Ok(b) => {
                let n = b.fundamental_degree();
                let dims: Vec<usize> = (0..=n).map(|j| b.dim(j)).collect();
                let pd = is_poincare_duality_algebra(&b, n);
                let pal = palindromic(&dims);
                checks.push(vec![json!(format!("B (seed {seed})")), json!(dims), json!(pal)]);
                checks.push(vec![json!(format!("pairing (seed {seed})")), json!(pd.pairings.iter().map(|p| p.rank).collect::<Vec<_>>()), json!(pd.pairing_route)]);
                b_ok.push(Some(pal && pd.pairing_route));
            }
            Err(e) => {
                r.diagnostics.push(e.to_string());
                b_ok.push(None);
            }
        }
    }
    r.tables.push(checks);
    let b_verdict = params.generic(&b_ok);
    r.verdict = match (h_ok, b_verdict) {
        (false, _) => Verdict::Fails,
        (true, v) => v,
    };
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LefschetzMode {
    Strong,
    Almost,
    Subdivision,
}

impl std::str::FromStr for LefschetzMode {
    type Err = SrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strong" => Ok(LefschetzMode::Strong),
            "almost" => Ok(LefschetzMode::Almost),
            "subdivision" => Ok(LefschetzMode::Subdivision),
            _ => Err(SrError::Input(format!("unknown Lefschetz mode {s:?}"))),
        }
    }
}

/// Whether ℓ^e : A_j → A_{j+e} is injective, with its rank.
fn injective_power(a: &impl GradedAlgebra, form: &[u64], j: usize, e: usize) -> (usize, bool) {
    let rank = a.power_map(form, j, e).rank();
    (rank, rank == a.dim(j))
}

/// `subdivision` is required for the subdivision mode, where Δ is its complex.
pub fn lefschetz_report(
    psi: &RelativeComplex,
    mode: LefschetzMode,
    subdivision: Option<&SubdivisionStructure>,
    params: &RunParams,
) -> TheoremReport {
    let hash = match subdivision {
        Some(s) if mode == LefschetzMode::Subdivision => {
            hex_digest(serde_json::to_string(&s.to_json()).expect("serializable").as_bytes())
        }
        _ => hash_of(psi),
    };
    let mut r = TheoremReport::new(&format!("lefschetz-{}", serde_json::to_value(mode).unwrap().as_str().unwrap()), hash, params);
    let owned;
    let psi = match (mode, subdivision) {
        (LefschetzMode::Subdivision, Some(s)) => {
            if let Some((i, f)) = s.induced_boundary_violations().first() {
                r.diagnostics.push(format!("σ{i}: boundary subdivision is not induced ({f})"));
                return r;
            }
            owned = RelativeComplex::absolute(s.delta().clone());
            &owned
        }
        (LefschetzMode::Subdivision, None) => {
            r.diagnostics.push("subdivision mode needs a subdivision structure".into());
            return r;
        }
        _ => psi,
    };
    let d = match dim_of(psi) {
        Ok(d) => d,
        Err(e) => {
            r.diagnostics.push(e.to_string());
            return r;
        }
    };
    match mode {
        LefschetzMode::Strong => {
            let cm = is_algebraically_cm(psi, params.field, params.seed, 1);
            if cm.cm != Some(true) {
                r.diagnostics.push(format!("not Cohen–Macaulay (depth {:?} of {})", cm.depth, cm.expected));
                return r;
            }
        }
        LefschetzMode::Almost => {
            if let Err(e) = manifold_sanity(&psi.delta, params.field) {
                r.diagnostics.push(e.to_string());
                return r;
            }
        }
        LefschetzMode::Subdivision => {}
    }
    let mut table = Table::new("power maps", &["seed", "map", "j", "exponent", "source", "target", "rank", "injective"]);
    let mut outcomes = Vec::new();
    let mut kernels = Table::new("restriction kernel", &["seed", "j", "dim"]);
    for seed in params.seeds() {
        let Some(theta) = params.lsop(psi, seed) else {
            outcomes.push(None);
            continue;
        };
        let form = params.form(psi, seed);
        let mut ok = true;
        let row = |t: &mut Table, name: &str, j: usize, e: usize, a: &dyn Fn(usize, usize) -> (usize, usize, usize, bool)| {
            let (src, tgt, rank, inj) = a(j, e);
            t.push(vec![json!(seed), json!(name), json!(j), json!(e), json!(src), json!(tgt), json!(rank), json!(inj)]);
            inj
        };
        match mode {
            LefschetzMode::Strong => {
                let a = quotient_presentation(psi, &theta);
                let f = |j: usize, e: usize| {
                    let (rank, inj) = injective_power(&a, &form, j, e);
                    (a.dim(j), a.dim(j + e), rank, inj)
                };
                for j in 0..=d / 2 {
                    ok &= row(&mut table, "A", j, d + 1 - 2 * j, &f);
                }
            }
            LefschetzMode::Almost => match build_b(&psi.delta, &theta) {
                Ok(b) => {
                    let f = |j: usize, e: usize| {
                        let (rank, inj) = injective_power(&b, &form, j, e);
                        (b.dim(j), b.dim(j + e), rank, inj)
                    };
                    for j in 0..=d / 2 {
                        ok &= row(&mut table, "B", j, d - 2 * j, &f);
                    }
                }
                Err(e) => {
                    r.diagnostics.push(e.to_string());
                    outcomes.push(None);
                    continue;
                }
            },
            LefschetzMode::Subdivision => {
                let a = quotient_presentation(psi, &theta);
                let f = |j: usize, e: usize| {
                    let (rank, inj) = injective_power(&a, &form, j, e);
                    (a.dim(j), a.dim(j + e), rank, inj)
                };
                for i in (0..d).take_while(|i| 2 * i + 1 <= d) {
                    ok &= row(&mut table, "A", i, d - 2 * i - 1, &f);
                }
                // the stronger exponent from the proof implies the statement above
                for j in 0..=d / 2 {
                    row(&mut table, "A (exponent d-2j)", j, d - 2 * j, &f);
                }
                if let Some(s) = subdivision {
                    match subdivision_partition_check(s, &theta) {
                        Ok(v) => {
                            for (j, k) in v.kernel_dims {
                                kernels.push(vec![json!(seed), json!(j), json!(k)]);
                            }
                        }
                        Err(e) => r.diagnostics.push(e.to_string()),
                    }
                }
            }
        }
        outcomes.push(Some(ok));
    }
    r.tables.push(table);
    if !kernels.rows.is_empty() {
        r.tables.push(kernels);
    }
    r.verdict = params.generic(&outcomes);
    r
}

pub fn kuhnel_report(psi: &RelativeComplex, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("kuhnel", hash_of(psi), params);
    if let Err(e) = manifold_sanity(&psi.delta, params.field) {
        r.diagnostics.push(e.to_string());
        return r;
    }
    let d = dim_of(psi).expect("manifold has vertices") as i64;
    let n = psi.delta.vertices().len() as i64;
    let b = betti(psi, params.field);
    let a = params.lsop(psi, params.seed).map(|theta| quotient_presentation(psi, &theta));
    let mut table = Table::new("inequality", &["j", "lhs", "rhs", "holds", "dim A_j"]);
    let mut ok = true;
    for j in (1..).take_while(|j| 2 * j <= d + 1) {
        let lhs = binomial(d + 1, j) * b(j - 1) as i64 + binomial(d + 1, j - 1) * b(d - j + 1) as i64;
        let rhs = binomial(n - d + j, j);
        ok &= lhs <= rhs;
        let dim_a = a.as_ref().map(|q| q.dim(j as usize));
        if let Some(x) = dim_a {
            if (x as i64) < lhs {
                r.diagnostics.push(format!("dim A_{j} = {x} is below the lower bound {lhs}"));
            }
        }
        table.push(vec![json!(j), json!(lhs), json!(rhs), json!(lhs <= rhs), json!(dim_a)]);
    }
    r.tables.push(table);
    r.verdict = verdict_of(ok);
    r
}

pub fn pd_report(psi: &RelativeComplex, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("poincare-duality", hash_of(psi), params);
    let mut table = Table::new("B", &["seed", "A", "J", "B", "socle", "pairing ranks", "pairing", "socle route"]);
    let mut outcomes = Vec::new();
    for seed in params.seeds() {
        let Some(theta) = params.lsop(psi, seed) else {
            outcomes.push(None);
            continue;
        };
        match build_b(&psi.delta, &theta) {
            Ok(b) => {
                let n = b.fundamental_degree();
                let v = is_poincare_duality_algebra(&b, n);
                if v.pairing_route != v.socle_route {
                    r.diagnostics.push(format!("seed {seed}: pairing and socle criteria disagree"));
                }
                table.push(vec![
                    json!(seed),
                    json!(b.base().dims()),
                    json!(b.j_dims()),
                    json!(v.dims),
                    json!(v.socle_dims),
                    json!(v.pairings.iter().map(|p| p.rank).collect::<Vec<_>>()),
                    json!(v.pairing_route),
                    json!(v.socle_route),
                ]);
                outcomes.push(Some(v.holds));
            }
            Err(e) => {
                r.diagnostics.push(e.to_string());
                r.tables.push(table);
                r.verdict = Verdict::Fails;
                return r;
            }
        }
    }
    r.tables.push(table);
    r.verdict = params.generic(&outcomes);
    r
}

pub fn injectivity_report(psi: &RelativeComplex, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("open-star-injectivity", hash_of(psi), params);
    let mut table = Table::new("ranks", &["seed", "vertex", "j", "source", "into A", "into B"]);
    let mut outcomes = Vec::new();
    for seed in params.seeds() {
        let Some(theta) = params.lsop(psi, seed) else {
            outcomes.push(None);
            continue;
        };
        match build_b(&psi.delta, &theta) {
            Ok(b) => {
                let mut ok = true;
                for row in open_star_injectivity(&b) {
                    ok &= row.rank_into_a == row.source_dim && row.rank_into_b == row.source_dim;
                    table.push(vec![
                        json!(seed),
                        json!(row.vertex),
                        json!(row.degree),
                        json!(row.source_dim),
                        json!(row.rank_into_a),
                        json!(row.rank_into_b),
                    ]);
                }
                outcomes.push(Some(ok));
            }
            Err(e) => {
                r.diagnostics.push(e.to_string());
                return r;
            }
        }
    }
    r.tables.push(table);
    r.verdict = params.generic(&outcomes);
    r
}

pub fn cone_lemma_report(psi: &RelativeComplex, vertex: Option<usize>, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("cone-lemma", hash_of(psi), params);
    let vertices = match vertex {
        Some(v) => vec![v],
        None => psi.delta.vertices(),
    };
    let mut table = Table::new("dims", &["seed", "vertex", "A(st_v)_j", "A(st°_v)_{j+1}", "bijective"]);
    let mut outcomes = Vec::new();
    for seed in params.seeds() {
        let Some(theta) = params.lsop(psi, seed) else {
            outcomes.push(None);
            continue;
        };
        let mut ok = true;
        for &v in &vertices {
            match cone_lemma_check(psi, v, &theta) {
                Ok(c) => {
                    ok &= c.pass;
                    table.push(vec![json!(seed), json!(c.vertex), json!(c.star_dims), json!(c.open_star_dims_shifted), json!(c.bijective)]);
                }
                Err(e) => {
                    r.diagnostics.push(e.to_string());
                    return r;
                }
            }
        }
        outcomes.push(Some(ok));
    }
    r.tables.push(table);
    r.verdict = params.generic(&outcomes);
    r
}

pub fn interior_report(disk: &RelativeComplex, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("interior-partition", hash_of(disk), params);
    let mut table = Table::new("interior", &["seed", "exact", "kernel dims (j ≤ d)", "injective"]);
    let mut outcomes = Vec::new();
    for seed in params.seeds() {
        let Some(theta) = params.lsop(disk, seed) else {
            outcomes.push(None);
            continue;
        };
        match interior_partition_check(disk, &theta) {
            Ok(v) => {
                for d in &v.diagnostics {
                    if !r.diagnostics.contains(d) {
                        r.diagnostics.push(d.clone());
                    }
                }
                if !v.nonexact_supports.is_empty() && !r.diagnostics.iter().any(|d| d.starts_with("P_int")) {
                    r.diagnostics.push(format!("P_int not exact at supports {:?}", v.nonexact_supports));
                }
                table.push(vec![json!(seed), json!(v.exact), json!(v.kernel_dims), json!(v.injective_below_top)]);
                outcomes.push(Some(v.exact && v.injective_below_top && v.boundary_induced));
            }
            Err(e) => {
                r.diagnostics.push(e.to_string());
                return r;
            }
        }
    }
    r.tables.push(table);
    r.verdict = params.generic(&outcomes);
    r
}

pub fn subdivision_report(s: &SubdivisionStructure, params: &RunParams) -> TheoremReport {
    let hash = hex_digest(serde_json::to_string(&s.to_json()).expect("serializable").as_bytes());
    let mut r = TheoremReport::new("subdivision-kernel", hash, params);
    let psi = RelativeComplex::absolute(s.delta().clone());
    let mut table = Table::new("kernel", &["seed", "j", "dim"]);
    let mut outcomes = Vec::new();
    for seed in params.seeds() {
        let Some(theta) = params.lsop(&psi, seed) else {
            outcomes.push(None);
            continue;
        };
        match subdivision_partition_check(s, &theta) {
            Ok(v) => {
                for (&j, &k) in &v.kernel_dims {
                    table.push(vec![json!(seed), json!(j), json!(k)]);
                }
                outcomes.push(Some(v.pass));
            }
            Err(e) => {
                r.diagnostics.push(e.to_string());
                return r;
            }
        }
    }
    r.tables.push(table);
    r.verdict = params.generic(&outcomes);
    r
}

pub fn fvec_report(psi: &RelativeComplex, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("fvec", hash_of(psi), params);
    match psi.f_h_vectors() {
        Ok(fv) => {
            let mut t = Table::new("vectors", &["name", "values"]);
            t.push(vec![json!("f"), json!(fv.f)]);
            t.push(vec![json!("h"), json!(fv.h)]);
            r.tables.push(t);
            r.verdict = Verdict::Holds;
        }
        Err(e) => r.diagnostics.push(e.to_string()),
    }
    r
}

pub fn cohomology_report(psi: &RelativeComplex, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("cohomology", hash_of(psi), params);
    let mut t = Table::new("betti", &["i", "dim"]);
    for (i, d) in psi.relative_cohomology_dims(params.field).dims {
        t.push(vec![json!(i), json!(d)]);
    }
    r.tables.push(t);
    r.verdict = Verdict::Holds;
    r
}

pub fn hilbert_report(psi: &RelativeComplex, max_degree: usize, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("hilbert", hash_of(psi), params);
    let mut t = Table::new("dim k[Ψ]_j", &["j", "dim"]);
    for (j, d) in hilbert_series_coeffs(psi, max_degree).into_iter().enumerate() {
        t.push(vec![json!(j), json!(d)]);
    }
    r.tables.push(t);
    r.verdict = Verdict::Holds;
    r
}

pub fn lsop_report(psi: &RelativeComplex, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("lsop", hash_of(psi), params);
    let mut t = Table::new("trials", &["seed", "draws", "is lsop", "vanishing degree", "quotient dims"]);
    let mut outcomes = Vec::new();
    for seed in params.seeds() {
        match sample_lsop(psi, params.field, seed, DEFAULT_LSOP_ATTEMPTS) {
            Some((theta, draws)) => {
                let v = is_lsop(psi, &theta);
                let q = quotient_presentation(psi, &theta);
                t.push(vec![json!(seed), json!(draws), json!(v.is_lsop), json!(v.vanishing_degree), json!(q.dims())]);
                outcomes.push(Some(v.is_lsop));
            }
            None => {
                t.push(vec![json!(seed), json!(DEFAULT_LSOP_ATTEMPTS), json!(false), json!(null), json!(null)]);
                outcomes.push(None);
            }
        }
    }
    r.tables.push(t);
    r.verdict = params.generic(&outcomes);
    r
}

pub fn depth_report(psi: &RelativeComplex, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("depth", hash_of(psi), params);
    let mut t = Table::new("trials", &["seed", "depth", "expected"]);
    let mut depths = Vec::new();
    for seed in params.seeds() {
        let d = params.lsop(psi, seed).and_then(|theta| depth(psi, &theta).ok());
        t.push(vec![json!(seed), json!(d), json!(psi.max_face_card())]);
        depths.push(d);
    }
    r.tables.push(t);
    let found: Vec<usize> = depths.iter().flatten().copied().collect();
    if found.windows(2).any(|w| w[0] != w[1]) {
        r.diagnostics.push(format!("depth differs across seeds: {depths:?}"));
    }
    r.verdict = if found.is_empty() {
        Verdict::Inconclusive
    } else if found.windows(2).all(|w| w[0] == w[1]) {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    r
}

pub fn cm_report(psi: &RelativeComplex, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("cohen-macaulay", hash_of(psi), params);
    let v = is_algebraically_cm(psi, params.field, params.seed, params.trials);
    let mut t = Table::new("trials", &["seed", "depth", "expected"]);
    for (s, d) in v.seeds.iter().zip(&v.trial_depths) {
        t.push(vec![json!(s), json!(d), json!(v.expected)]);
    }
    r.tables.push(t);
    r.diagnostics.extend(v.warnings.iter().cloned());
    r.verdict = match v.cm {
        Some(cm) => verdict_of(cm),
        None => Verdict::Inconclusive,
    };
    r
}

pub fn partition_homology_report(psi: &RelativeComplex, max_degree: usize, params: &RunParams) -> TheoremReport {
    let mut r = TheoremReport::new("partition-homology", hash_of(psi), params);
    let mut t = Table::new("H^i(P*)_j", &["i", "j", "dim", "cohomology"]);
    let b = psi.relative_cohomology_dims(params.field);
    match partition_homology_dims(psi, max_degree, params.field) {
        Ok(h) => {
            let mut ok = true;
            for ((i, j), d) in h {
                let expected = if j == 0 { b.get(i) } else { 0 };
                ok &= d == expected;
                t.push(vec![json!(i), json!(j), json!(d), json!(expected)]);
            }
            r.verdict = verdict_of(ok);
        }
        Err(e) => r.diagnostics.push(e.to_string()),
    }
    r.tables.push(t);
    r
}

/// H^{|Θ|}(K*⊗k[Ψ]) against dim A_j, per degree.
pub fn koszul_top_matches_quotient(psi: &RelativeComplex, theta: &LinearFormSequence) -> bool {
    let q = quotient_presentation(psi, theta);
    let h = koszul_homology_dims(psi, theta, GradingMode::Shifted);
    let n = theta.len();
    h.iter().filter(|(&(t, _), _)| t == n).all(|(&(_, j), &v)| v == q.dim(j as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{builtin_complex, SimplicialComplex};

    fn params() -> RunParams {
        RunParams::default()
    }

    fn two_triangles() -> RelativeComplex {
        let delta = SimplicialComplex::from_index_facets(5, &[vec![0, 1, 2], vec![0, 1, 3], vec![3, 4]]).unwrap();
        let gamma = SimplicialComplex::from_index_facets(5, &[vec![0, 1, 3]]).unwrap();
        RelativeComplex::new(delta, gamma).unwrap()
    }

    #[test]
    fn reisner_examples() {
        let s = builtin_complex("boundary_simplex(3)").unwrap();
        let r = reisner_report(&s, &params());
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.tables[0].rows[0][1], json!(true));
        let t = builtin_complex("torus7").unwrap();
        let r = reisner_report(&t, &params());
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.tables[0].rows[0][1], json!(false));
    }

    #[test]
    fn relative_two_triangles() {
        let psi = two_triangles();
        assert!(weakly_topologically_cm(&psi, PrimeField::default()).is_ok());
        let (f, i) = topologically_cm(&psi, PrimeField::default()).unwrap_err();
        assert_eq!((f, i), (Face::from_vertices(&[3]), 0));
        let r = reisner_report(&psi, &params());
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.tables[0].rows[2][1], json!(false));
    }

    #[test]
    fn schenzel_torus() {
        let t = builtin_complex("torus7").unwrap();
        let r = schenzel_report(&t, &params());
        assert_eq!(r.verdict, Verdict::Holds, "{:?}", r.diagnostics);
        assert_eq!(r.tables[0].rows[1][1], json!([1, 4, 10, -1]));
        let dims: Vec<Value> = r.tables[1].rows.iter().filter(|row| row[0] == json!(0)).map(|row| row[2].clone()).collect();
        assert_eq!(dims, vec![json!(1), json!(4), json!(10), json!(1), json!(0)]);
    }

    #[test]
    fn schenzel_rp2_mod_two() {
        let rp = builtin_complex("rp2_6").unwrap();
        let p = RunParams::new(PrimeField::new(2).unwrap(), 0, 3);
        let r = schenzel_report(&rp, &p);
        assert_eq!(r.verdict, Verdict::Holds, "{:?}", r.diagnostics);
    }

    #[test]
    fn pou_and_tot_reports() {
        let s = builtin_complex("boundary_simplex(3)").unwrap();
        assert_eq!(partition_of_unity_report(&s, &params()).verdict, Verdict::Holds);
        assert_eq!(total_complex_report(&s, &params()).verdict, Verdict::Holds);
        let m = builtin_complex("moebius").unwrap();
        assert_eq!(partition_of_unity_report(&m, &params()).verdict, Verdict::Holds);
    }

    #[test]
    fn non_buchsbaum_is_inconclusive() {
        // two triangles sharing a vertex: the star of that vertex is fine but
        // the pinch makes the link disconnected
        let c = RelativeComplex::absolute(
            SimplicialComplex::from_index_facets(5, &[vec![0, 1, 2], vec![0, 3, 4]]).unwrap(),
        );
        let r = partition_of_unity_report(&c, &params());
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.diagnostics[0].contains("star of 0"), "{:?}", r.diagnostics);
    }

    #[test]
    fn dehn_sommerville() {
        for (name, h) in [("boundary_simplex(4)", json!([1, 1, 1, 1, 1])), ("cross_polytope(3)", json!([1, 3, 3, 1]))] {
            let c = builtin_complex(name).unwrap();
            let r = dehn_sommerville_report(&c, &params());
            assert_eq!(r.verdict, Verdict::Holds, "{name}");
            assert_eq!(r.tables[0].rows[0][1], h);
        }
        let t = builtin_complex("torus7").unwrap();
        let r = dehn_sommerville_report(&t, &params());
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.tables[0].rows[1][1], json!([1, 4, 4, 1]));
        assert_eq!(r.tables[0].rows[1][2], json!(true));
    }

    #[test]
    fn lefschetz_modes() {
        let s = builtin_complex("boundary_simplex(3)").unwrap();
        assert_eq!(lefschetz_report(&s, LefschetzMode::Strong, None, &params()).verdict, Verdict::Holds);
        let t = builtin_complex("torus7").unwrap();
        assert_eq!(lefschetz_report(&t, LefschetzMode::Almost, None, &params()).verdict, Verdict::Holds);
        assert_eq!(lefschetz_report(&t, LefschetzMode::Strong, None, &params()).verdict, Verdict::Inconclusive);
        let sub = SubdivisionStructure::barycentric_of(&builtin_complex("simplex(3)").unwrap().delta).unwrap();
        let r = lefschetz_report(&t, LefschetzMode::Subdivision, Some(&sub), &params());
        assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
    }

    #[test]
    fn kuhnel() {
        let t = builtin_complex("torus7").unwrap();
        let r = kuhnel_report(&t, &params());
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.tables[0].rows[0][..3], [json!(1), json!(1), json!(6)]);
        let rp = builtin_complex("rp2_6").unwrap();
        let r = kuhnel_report(&rp, &RunParams::new(PrimeField::new(2).unwrap(), 0, 3));
        assert_eq!(r.tables[0].rows[0][..3], [json!(1), json!(1), json!(5)]);
        let s = builtin_complex("boundary_simplex(3)").unwrap();
        let r = kuhnel_report(&s, &params());
        assert_eq!(r.tables[0].rows[0][..3], [json!(1), json!(1), json!(3)]);
    }

    #[test]
    fn small_prime_failures_are_inconclusive() {
        let p = RunParams::new(PrimeField::new(2).unwrap(), 0, 2);
        assert_eq!(p.generic(&[Some(false), Some(false)]), Verdict::Inconclusive);
        assert_eq!(params().generic(&[Some(false), Some(false), Some(false)]), Verdict::Fails);
        assert_eq!(params().generic(&[Some(false), None, Some(true)]), Verdict::Holds);
    }

    #[test]
    fn reports_round_trip_and_are_reproducible() {
        let t = builtin_complex("torus7").unwrap();
        let a = pd_report(&t, &params());
        let b = pd_report(&t, &params());
        assert_eq!(a, b);
        let back: TheoremReport = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(back, a);
        assert_eq!(a.verdict, Verdict::Holds);
    }

    #[test]
    fn pd_fails_on_non_manifold() {
        let m = builtin_complex("moebius").unwrap();
        assert_eq!(pd_report(&m, &params()).verdict, Verdict::Fails);
    }
}
