//! The acceptance suite: eleven instance-level criteria with time limits,
//! plus the seeded random corpus they share.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::duality::{build_b, is_poincare_duality_algebra, open_star_injectivity, DualityPresentation, GradedAlgebra};
use crate::exactlinalg::PrimeField;
use crate::facering::{sample_lsop, DEFAULT_LSOP_ATTEMPTS};
use crate::koszul::depth;
use crate::partition::{degree_window, interior_partition_check, partition_homology_dims, SubdivisionStructure};
use crate::simplicial::{builtin_complex, Face, RelativeComplex, SimplicialComplex};
use crate::verdicts::{
    kuhnel_report, koszul_top_matches_quotient, lefschetz_report, partition_of_unity_report, reisner_report,
    schenzel_report, total_complex_report, LefschetzMode, RunParams, TheoremReport, Verdict,
};

pub const CORPUS_SEED: u64 = 20_240_601;
pub const CORPUS_SIZE: usize = 240;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {} ({} ms / limit {} ms): {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed_ms,
            self.limit_ms,
            self.detail
        )
    }
}

/// A corpus entry with the field it is checked over.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub psi: RelativeComplex,
    pub field: PrimeField,
}

fn corpus_field(i: usize) -> PrimeField {
    match i % 3 {
        0 => PrimeField::new(2).unwrap(),
        1 => PrimeField::new(3).unwrap(),
        _ => PrimeField::default(),
    }
}

/// A random relative complex on at most `max_vertices` vertices: Δ is the
/// closure of a few random faces and Γ the closure of a few faces of Δ.
pub fn random_relative_complex(rng: &mut ChaCha8Rng, max_vertices: usize) -> RelativeComplex {
    let n = rng.gen_range(1..=max_vertices);
    let facet_count = rng.gen_range(1..=5);
    let mut facets: Vec<Face> = (0..facet_count)
        .map(|_| {
            let size = rng.gen_range(1..=n.min(4));
            let mut vs: Vec<usize> = (0..n).collect();
            for k in 0..size {
                let pick = rng.gen_range(k..n);
                vs.swap(k, pick);
            }
            Face::from_vertices(&vs[..size])
        })
        .collect();
    facets.sort();
    facets.dedup();
    let delta = SimplicialComplex::from_faces(crate::simplicial::index_labels(n), facets).expect("faces in range");
    let gamma = if rng.gen_bool(0.3) {
        SimplicialComplex::void(delta.labels().to_vec())
    } else {
        let faces: Vec<Face> = delta.faces().to_vec();
        let picks = rng.gen_range(0..=2);
        let chosen: Vec<Face> = (0..picks).map(|_| faces[rng.gen_range(0..faces.len())]).collect();
        // with no picks Γ = {∅}, the reduced case
        SimplicialComplex::from_faces(delta.labels().to_vec(), chosen.into_iter().chain([Face::EMPTY]))
            .expect("subcomplex")
    };
    RelativeComplex::new(delta, gamma).expect("Γ ⊆ Δ by construction")
}

pub fn random_corpus(count: usize, max_vertices: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| CorpusEntry {
            name: format!("random#{i}"),
            psi: random_relative_complex(&mut rng, max_vertices),
            field: corpus_field(i),
        })
        .collect()
}

fn builtin(name: &str) -> RelativeComplex {
    builtin_complex(name).expect("builtin exists")
}

/// The named complexes added to the random corpus for the Reisner check.
pub fn reisner_extras() -> Vec<CorpusEntry> {
    let f2 = PrimeField::new(2).unwrap();
    let f3 = PrimeField::new(3).unwrap();
    let fp = PrimeField::default();
    let mut out = Vec::new();
    let mut add = |name: &str, psi: RelativeComplex, field: PrimeField| {
        out.push(CorpusEntry { name: format!("{name} over F_{}", field.p()), psi, field });
    };
    for k in 1..=4 {
        add(&format!("boundary_simplex({k})"), builtin(&format!("boundary_simplex({k})")), fp);
    }
    for k in 1..=3 {
        add(&format!("simplex({k})"), builtin(&format!("simplex({k})")), fp);
        add(&format!("path({k})"), builtin(&format!("path({k})")), fp);
        add(&format!("disk_with_induced_boundary({k})"), builtin(&format!("disk_with_induced_boundary({k})")), fp);
    }
    add("cross_polytope(3)", builtin("cross_polytope(3)"), fp);
    add("rp2_6", builtin("rp2_6"), f2);
    add("rp2_6", builtin("rp2_6"), f3);
    add("torus7", builtin("torus7"), fp);
    add("moebius", builtin("moebius"), fp);
    add("two_points", builtin("two_points"), fp);
    let triangles = SimplicialComplex::from_index_facets(6, &[vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
    add("two disjoint triangles", RelativeComplex::absolute(triangles), fp);
    let mixed = SimplicialComplex::from_index_facets(5, &[vec![0, 1, 2], vec![3, 4]]).unwrap();
    add("triangle and disjoint edge", RelativeComplex::absolute(mixed), f3);
    out
}

fn finish(id: usize, name: &str, limit_s: u64, start: Instant, failures: Vec<String>, summary: String) -> CriterionResult {
    let pass_inner = failures.is_empty();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_s);
    let mut detail = summary;
    if !pass_inner {
        let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
        detail = format!("{} failure(s): {}", failures.len(), shown.join("; "));
    }
    if elapsed > limit {
        detail.push_str(" [time limit exceeded]");
    }
    CriterionResult {
        id,
        name: name.into(),
        pass: pass_inner && elapsed <= limit,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.as_millis(),
        detail,
    }
}

/// dim B_j for j = 0..=n.
fn b_dims(b: &DualityPresentation) -> Vec<usize> {
    (0..=b.fundamental_degree()).map(|j| b.dim(j)).collect()
}

fn params(field: PrimeField) -> RunParams {
    RunParams::new(field, 0, 3)
}

fn expect(report: &TheoremReport, what: &str, failures: &mut Vec<String>) {
    if report.verdict != Verdict::Holds {
        failures.push(format!("{what}: {:?} {:?}", report.verdict, report.diagnostics));
    }
}

pub fn criterion_1() -> CriterionResult {
    let start = Instant::now();
    let r = schenzel_report(&builtin("torus7"), &RunParams::default());
    let mut failures = Vec::new();
    let h = r.table("vectors").and_then(|t| t.rows.iter().find(|row| row[0] == "h")).map(|row| row[1].clone());
    if h != Some(serde_json::json!([1, 4, 10, -1])) {
        failures.push(format!("h = {h:?}"));
    }
    let dims: Vec<serde_json::Value> = r
        .table("dim A_j")
        .map(|t| t.rows.iter().filter(|row| row[0] == 0 && row[1].as_u64() < Some(4)).map(|row| row[2].clone()).collect())
        .unwrap_or_default();
    if dims != [1, 4, 10, 1].map(serde_json::Value::from) {
        failures.push(format!("quotient dims {dims:?}"));
    }
    expect(&r, "schenzel torus7", &mut failures);
    finish(1, "torus regression", 5, start, failures, "h = (1,4,10,-1), dim A = (1,4,10,1)".into())
}

pub fn criterion_2() -> CriterionResult {
    let start = Instant::now();
    let corpus = random_corpus(CORPUS_SIZE, 6, CORPUS_SEED);
    let failures: Vec<String> = corpus
        .par_iter()
        .filter_map(|e| {
            let b = e.psi.relative_cohomology_dims(e.field);
            let h = match partition_homology_dims(&e.psi, degree_window(&e.psi), e.field) {
                Ok(h) => h,
                Err(err) => return Some(format!("{}: {err}", e.name)),
            };
            let bad = h.iter().find(|(&(i, j), &v)| v != if j == 0 { b.get(i) } else { 0 });
            bad.map(|((i, j), v)| format!("{}: H^{i}(P*)_{j} = {v}", e.name))
        })
        .collect();
    finish(2, "partition homology = relative cohomology", 90, start, failures, format!("{} random complexes", corpus.len()))
}

pub fn criterion_3() -> CriterionResult {
    let start = Instant::now();
    let mut corpus = random_corpus(CORPUS_SIZE, 6, CORPUS_SEED);
    corpus.extend(reisner_extras());
    let outcomes: Vec<(Option<String>, bool)> = corpus
        .par_iter()
        .map(|e| {
            let r = reisner_report(&e.psi, &params(e.field));
            let cm = r.tables[0].rows[0][1] == true;
            let fail = (r.verdict != Verdict::Holds).then(|| format!("{}: {:?} {:?}", e.name, r.verdict, r.diagnostics));
            (fail, cm)
        })
        .collect();
    let cm = outcomes.iter().filter(|o| o.1).count();
    let failures: Vec<String> = outcomes.into_iter().filter_map(|o| o.0).collect();
    finish(3, "Reisner agreement", 120, start, failures, format!("{} complexes, {cm} Cohen–Macaulay", corpus.len()))
}

fn pou_corpus() -> Vec<CorpusEntry> {
    let mut out = vec![
        CorpusEntry { name: "torus7".into(), psi: builtin("torus7"), field: PrimeField::default() },
        CorpusEntry { name: "rp2_6 over F_2".into(), psi: builtin("rp2_6"), field: PrimeField::new(2).unwrap() },
        CorpusEntry { name: "rp2_6 over F_3".into(), psi: builtin("rp2_6"), field: PrimeField::new(3).unwrap() },
    ];
    for k in 1..=4 {
        out.push(CorpusEntry {
            name: format!("boundary_simplex({k})"),
            psi: builtin(&format!("boundary_simplex({k})")),
            field: PrimeField::default(),
        });
    }
    out
}

pub fn criterion_4() -> CriterionResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    for e in pou_corpus() {
        expect(&partition_of_unity_report(&e.psi, &params(e.field)), &e.name, &mut failures);
    }
    finish(4, "partition of unity", 60, start, failures, "torus7, rp2_6 (F_2, F_3), boundary_simplex(1..4)".into())
}

pub fn criterion_5() -> CriterionResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    for e in pou_corpus() {
        expect(&total_complex_report(&e.psi, &params(e.field)), &e.name, &mut failures);
    }
    finish(5, "total complex formula", 60, start, failures, "same complexes as criterion 4".into())
}

pub fn criterion_6() -> CriterionResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    let fp = PrimeField::default();
    let torus = builtin("torus7");
    match sample_lsop(&torus, fp, 0, DEFAULT_LSOP_ATTEMPTS).map(|(t, _)| build_b(&torus.delta, &t)) {
        Some(Ok(b)) => {
            if b_dims(&b) != [1, 4, 4, 1] {
                failures.push(format!("B(torus7) dims {:?}", b_dims(&b)));
            }
            let pd = is_poincare_duality_algebra(&b, 3);
            if !pd.holds || !pd.pairings.iter().all(|p| p.full) {
                failures.push("B(torus7) pairings not full".into());
            }
            let a = b.base();
            let neg = is_poincare_duality_algebra(a, 3);
            if neg.holds || a.dim(1) == a.dim(2) {
                failures.push(format!("negative control: A(torus7) dims {:?} passed PD", a.dims()));
            }
        }
        other => failures.push(format!("B(torus7): {:?}", other.map(|r| r.err()))),
    }
    for k in 1..=5 {
        let s = builtin(&format!("boundary_simplex({k})"));
        let Some((theta, _)) = sample_lsop(&s, fp, 0, DEFAULT_LSOP_ATTEMPTS) else {
            failures.push(format!("boundary_simplex({k}): no l.s.o.p."));
            continue;
        };
        match build_b(&s.delta, &theta) {
            Ok(b) => {
                let dims = b_dims(&b);
                let palin = dims.iter().eq(dims.iter().rev());
                if b.j_dims().iter().any(|&j| j != 0) || !palin || !is_poincare_duality_algebra(&b, k).holds {
                    failures.push(format!("boundary_simplex({k}): B dims {dims:?}, J {:?}", b.j_dims()));
                }
            }
            Err(e) => failures.push(format!("boundary_simplex({k}): {e}")),
        }
    }
    finish(6, "Poincaré duality", 30, start, failures, "B(torus7) = (1,4,4,1); B = A for boundary_simplex(1..5); A(torus7) not PD".into())
}

pub fn criterion_7() -> CriterionResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    let fp = PrimeField::default();
    let mut rows = 0;
    for name in ["torus7", "boundary_simplex(3)"] {
        let psi = builtin(name);
        let Some((theta, _)) = sample_lsop(&psi, fp, 0, DEFAULT_LSOP_ATTEMPTS) else {
            failures.push(format!("{name}: no l.s.o.p."));
            continue;
        };
        match build_b(&psi.delta, &theta) {
            Ok(b) => {
                for row in open_star_injectivity(&b) {
                    rows += 1;
                    if row.rank_into_a != row.source_dim || row.rank_into_b != row.source_dim {
                        failures.push(format!("{name}: vertex {} degree {}: {row:?}", row.vertex, row.degree));
                    }
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    finish(7, "open-star injectivity", 30, start, failures, format!("{rows} (vertex, degree) maps full rank"))
}

pub fn criterion_8() -> CriterionResult {
    let start = Instant::now();
    let corpus = random_corpus(50, 6, CORPUS_SEED ^ 0x8);
    let failures: Vec<String> = corpus
        .par_iter()
        .filter_map(|e| {
            let field = PrimeField::default();
            if e.psi.is_void() {
                // the zero module: infinite depth whatever the seed
                return None;
            }
            let mut depths = Vec::new();
            for seed in 0..3 {
                let Some((theta, _)) = sample_lsop(&e.psi, field, seed, DEFAULT_LSOP_ATTEMPTS) else {
                    return Some(format!("{}: no l.s.o.p.", e.name));
                };
                if seed == 0 && !koszul_top_matches_quotient(&e.psi, &theta) {
                    return Some(format!("{}: top Koszul homology differs from the quotient", e.name));
                }
                match depth(&e.psi, &theta) {
                    Ok(d) => depths.push(d),
                    Err(err) => return Some(format!("{}: {err}", e.name)),
                }
            }
            depths.windows(2).any(|w| w[0] != w[1]).then(|| format!("{}: depths {depths:?}", e.name))
        })
        .collect();
    finish(8, "Koszul consistency", 60, start, failures, format!("{} random complexes, 3 seeds each", corpus.len()))
}

pub fn criterion_9() -> CriterionResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    let p = RunParams::default();
    for k in 1..=4 {
        let s = builtin(&format!("boundary_simplex({k})"));
        expect(&lefschetz_report(&s, LefschetzMode::Strong, None, &p), &format!("strong boundary_simplex({k})"), &mut failures);
    }
    for k in 1..=3 {
        let s = builtin(&format!("cross_polytope({k})"));
        expect(&lefschetz_report(&s, LefschetzMode::Strong, None, &p), &format!("strong cross_polytope({k})"), &mut failures);
    }
    let torus = builtin("torus7");
    expect(&lefschetz_report(&torus, LefschetzMode::Almost, None, &p), "almost torus7", &mut failures);
    match SubdivisionStructure::barycentric_of(&builtin("simplex(3)").delta) {
        Ok(sub) => {
            let psi = RelativeComplex::absolute(sub.delta().clone());
            expect(&lefschetz_report(&psi, LefschetzMode::Subdivision, Some(&sub), &p), "subdivision sd(3-ball)", &mut failures);
        }
        Err(e) => failures.push(e.to_string()),
    }
    finish(9, "Lefschetz instances", 60, start, failures, "strong: boundary_simplex(1..4), cross_polytope(1..3); almost: torus7; subdivision: sd(3-ball)".into())
}

pub fn criterion_10() -> CriterionResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    let torus = kuhnel_report(&builtin("torus7"), &RunParams::default());
    expect(&torus, "torus7", &mut failures);
    if torus.tables.first().map(|t| t.rows[0][..3].to_vec()) != Some(vec![1.into(), 1.into(), 6.into()]) {
        failures.push("torus7: j = 1 row is not 1 ≤ 6".into());
    }
    let rp = kuhnel_report(&builtin("rp2_6"), &params(PrimeField::new(2).unwrap()));
    expect(&rp, "rp2_6 over F_2", &mut failures);
    for r in [&torus, &rp] {
        failures.extend(r.diagnostics.iter().cloned());
    }
    finish(10, "Kühnel inequality", 5, start, failures, "torus7 (1 ≤ 6), rp2_6 over F_2 (1 ≤ 5)".into())
}

pub fn criterion_11() -> CriterionResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    for k in [2, 3] {
        let name = format!("sd(simplex({k}))");
        let sub = match SubdivisionStructure::barycentric_of(&builtin(&format!("simplex({k})")).delta) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        let disk = RelativeComplex::new(sub.delta().clone(), sub.delta().boundary()).expect("boundary is a subcomplex");
        let passed = (0..3).any(|seed| {
            let Some((theta, _)) = sample_lsop(&disk, PrimeField::default(), seed, DEFAULT_LSOP_ATTEMPTS) else {
                return false;
            };
            matches!(interior_partition_check(&disk, &theta), Ok(v) if v.injective_below_top && v.boundary_induced)
        });
        if !passed {
            failures.push(format!("{name}: interior restriction not injective"));
        }
    }
    finish(11, "interior partition of unity", 30, start, failures, "sd of the solid triangle and tetrahedron".into())
}

pub const CRITERIA: [fn() -> CriterionResult; 11] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
];

/// Runs the criteria one after another so each timing is its own.
pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| c()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::facering::quotient_presentation;

    #[test]
    fn corpus_is_reproducible() {
        let a = random_corpus(20, 6, 7);
        let b = random_corpus(20, 6, 7);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.psi.content_hash(), y.psi.content_hash());
        }
        assert!(a.iter().all(|e| e.psi.ground_size() <= 6));
    }

    #[test]
    fn quotient_dims_of_spheres_are_ones() {
        let s = builtin("boundary_simplex(3)");
        let (theta, _) = sample_lsop(&s, PrimeField::default(), 0, DEFAULT_LSOP_ATTEMPTS).unwrap();
        let q = quotient_presentation(&s, &theta);
        assert_eq!((0..5).map(|j| q.dim(j)).collect::<Vec<_>>(), vec![1, 1, 1, 1, 0]);
    }
}
