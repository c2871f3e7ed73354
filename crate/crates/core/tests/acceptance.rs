//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::{Command, ExitCode};
use std::time::Instant;

use graphent::catalog::{catalog, CatalogEntry};
use graphent::classify::{group_by_value, report_from_values, GraphValue, RpTable, DEFAULT_GROUP_TOLERANCE};
use graphent::graph::{is_isomorphic, lc_orbit, DEFAULT_ORBIT_BUDGET};
use graphent::measures::{brute_force_gem, gcm, gem, gem_bipartite_oracle, GemConfig, MeasureKind};
use graphent::reductions::proper_subsets;
use graphent::state::{LocalUnitary, StateVector, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GCM_TOL: f64 = 5e-6;
const GEM_TOL: f64 = 1e-3;
const GEM_RESTARTS: usize = 256;
const GEM_BUDGET_SECS: f64 = 60.0;
const RP_TOL: f64 = 0.5;
const STABILIZER_TOL: f64 = 1e-12;
const LC_TOL: f64 = 1e-10;
const LU_TRIALS: usize = 200;
const LU_GCM_TOL: f64 = 1e-9;
const LU_GEM_TOL: f64 = 1e-6;
const LU_GEM_RESTARTS: usize = 128;
const SCHMIDT_TOL: f64 = 1e-10;
const BIPARTITE_SLACK: f64 = 1e-9;
const BRUTE_TOL: f64 = 5e-3;
const BRUTE_DENSITY: usize = 72;

const EXPECTED_ETA: [(usize, usize, usize, usize); 6] =
    [(2, 1, 1, 1), (3, 1, 1, 1), (4, 2, 2, 2), (5, 4, 3, 4), (6, 9, 4, 11), (7, 16, 5, 26)];
const EXPECTED_CUMULATIVE: (usize, usize, usize) = (27, 7, 45);
/// Printed resolution powers (GCM, GEM) per n, then cumulative.
const PRINTED_RP: [(f64, f64); 7] = [
    (100.0, 100.0),
    (100.0, 100.0),
    (100.0, 100.0),
    (100.0, 75.0),
    (81.82, 36.36),
    (61.54, 19.23),
    (60.0, 15.55),
];
const GEM_CLASS_VALUES: [f64; 7] = [0.50000, 0.75000, 0.86855, 0.87500, 0.91667, 0.93428, 0.93750];

struct Suite {
    failures: usize,
}

impl Suite {
    fn record(&mut self, label: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("{}  {label:<44} {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn state_of(e: &CatalogEntry) -> StateVector {
    StateVector::graph_state(&e.graph).expect("catalog graphs build")
}

fn gem_cfg(restarts: usize, seed: u64) -> GemConfig {
    GemConfig {
        restarts,
        seed,
        ..GemConfig::default()
    }
}

fn memberships(values: &[(usize, f64)]) -> Vec<Vec<usize>> {
    group_by_value(values, DEFAULT_GROUP_TOLERANCE)
        .expect("positive tolerance")
        .into_iter()
        .map(|c| c.members)
        .collect()
}

fn random_local_layer(s: &StateVector, rng: &mut ChaCha8Rng) -> StateVector {
    let mut out = s.clone();
    for q in 1..=s.n() {
        out = out.apply_local_unitary(&LocalUnitary::random(q, rng)).expect("qubit in range");
    }
    out
}

fn main() -> ExitCode {
    let mut suite = Suite { failures: 0 };
    let entries = catalog();

    // 1. GCM values
    let t = Instant::now();
    let gcm_values: Vec<(usize, f64)> = entries
        .iter()
        .map(|e| (e.id, gcm(&state_of(e)).expect("gcm").value))
        .collect();
    let gcm_secs = t.elapsed().as_secs_f64();
    let worst_gcm = entries
        .iter()
        .zip(&gcm_values)
        .map(|(e, &(_, v))| (v - e.expected_gcm.expect("tabulated")).abs())
        .fold(0.0, f64::max);
    suite.record(
        "1 GCM matches table",
        worst_gcm <= GCM_TOL,
        format!("max |Δ| = {worst_gcm:.2e} (tol {GCM_TOL:e}), {gcm_secs:.2} s"),
    );

    // 2. GCM classes
    let expected_gcm: Vec<(usize, f64)> = entries.iter().map(|e| (e.id, e.expected_gcm.unwrap())).collect();
    let got = memberships(&gcm_values);
    let want = memberships(&expected_gcm);
    suite.record(
        "2 GCM classes and memberships",
        got.len() == 27 && got == want,
        format!("{} classes, memberships {}", got.len(), if got == want { "identical" } else { "differ" }),
    );

    // 3. GEM values, classes and runtime
    let t = Instant::now();
    let gem_results: Vec<_> = entries
        .iter()
        .map(|e| gem(&state_of(e), &gem_cfg(GEM_RESTARTS, 7)).expect("gem"))
        .collect();
    let gem_secs = t.elapsed().as_secs_f64();
    let gem_values: Vec<(usize, f64)> = entries.iter().zip(&gem_results).map(|(e, r)| (e.id, r.value)).collect();
    let worst_gem = entries
        .iter()
        .zip(&gem_values)
        .map(|(e, &(_, v))| (v - e.expected_gem.expect("tabulated")).abs())
        .fold(0.0, f64::max);
    let gem_classes = group_by_value(&gem_values, DEFAULT_GROUP_TOLERANCE).expect("positive tolerance");
    let expected_gem: Vec<(usize, f64)> = entries.iter().map(|e| (e.id, e.expected_gem.unwrap())).collect();
    let class_values_ok = gem_classes.len() == GEM_CLASS_VALUES.len()
        && gem_classes.iter().zip(GEM_CLASS_VALUES).all(|(c, v)| (c.value - v).abs() <= GEM_TOL);
    let gem_members_ok = memberships(&gem_values) == memberships(&expected_gem);
    suite.record(
        "3 GEM matches table (256 restarts)",
        worst_gem <= GEM_TOL && class_values_ok && gem_members_ok && gem_secs < GEM_BUDGET_SECS,
        format!(
            "max |Δ| = {worst_gem:.2e} (tol {GEM_TOL:e}), {} classes, memberships {}, {gem_secs:.2} s",
            gem_classes.len(),
            if gem_members_ok { "identical" } else { "differ" }
        ),
    );

    // 4. RP table
    let to_graph_values = |vals: &[(usize, f64)]| -> Vec<GraphValue> {
        entries
            .iter()
            .zip(vals)
            .map(|(e, &(id, value))| GraphValue {
                id,
                n: e.n(),
                value,
                restarts_at_best: None,
            })
            .collect()
    };
    let gcm_report = report_from_values(MeasureKind::Gcm, to_graph_values(&gcm_values), DEFAULT_GROUP_TOLERANCE)
        .expect("report");
    let gem_report = report_from_values(MeasureKind::Gem, to_graph_values(&gem_values), DEFAULT_GROUP_TOLERANCE)
        .expect("report");
    let table = RpTable::from_reports(&gcm_report, &gem_report);
    let counts_ok = table.rows.len() == EXPECTED_ETA.len()
        && table
            .rows
            .iter()
            .zip(EXPECTED_ETA)
            .all(|(r, (n, a, b, k))| r.n == Some(n) && (r.eta_gcm, r.eta_gem, r.eta_kappa) == (a, b, k))
        && (table.cumulative.eta_gcm, table.cumulative.eta_gem, table.cumulative.eta_kappa) == EXPECTED_CUMULATIVE;
    let worst_rp = table
        .rows
        .iter()
        .chain(std::iter::once(&table.cumulative))
        .zip(PRINTED_RP)
        .map(|(r, (a, b))| (r.rp_gcm - a).abs().max((r.rp_gem - b).abs()))
        .fold(0.0, f64::max);
    let fraction_ok = table.cumulative.rp_gem_fraction == "7/45" && table.cumulative.rp_gcm_fraction == "27/45";
    suite.record(
        "4 RP table",
        counts_ok && worst_rp <= RP_TOL && fraction_ok,
        format!(
            "class counts {}, max RP deviation {worst_rp:.3} pp (tol {RP_TOL}), cumulative {} / {}",
            if counts_ok { "match" } else { "differ" },
            table.cumulative.rp_gcm_fraction,
            table.cumulative.rp_gem_fraction
        ),
    );

    // 5. Stabilizers
    let mut worst_stab: f64 = 0.0;
    for e in entries {
        let s = state_of(e);
        for a in 1..=e.n() {
            let v = s.stabilizer_expectation(&e.graph, a).expect("vertex in range");
            worst_stab = worst_stab.max((v - C64::new(1.0, 0.0)).norm());
        }
    }
    suite.record(
        "5 stabilizer expectations",
        worst_stab <= STABILIZER_TOL,
        format!("max |<G|K_a|G> - 1| = {worst_stab:.2e} (tol {STABILIZER_TOL:e})"),
    );

    // 6. LC realized by local unitaries
    let mut worst_lc: f64 = 0.0;
    for e in entries {
        let s = state_of(e);
        for a in 1..=e.n() {
            let target = StateVector::graph_state(&e.graph.local_complement(a).unwrap()).unwrap();
            let moved = s.apply_lc_unitary(&e.graph, a).unwrap();
            let overlap = target.inner_product(&moved).unwrap().norm();
            worst_lc = worst_lc.max((overlap - 1.0).abs());
        }
    }
    suite.record(
        "6 LC consistency",
        worst_lc <= LC_TOL,
        format!("max ||<LC(G)|U_a|G>| - 1| = {worst_lc:.2e} (tol {LC_TOL:e})"),
    );

    // 7. LU invariance, plus constancy along random LC walks
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst_lu_gcm, mut worst_lu_gem, mut worst_walk_gcm, mut worst_walk_gem) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for trial in 0..LU_TRIALS {
        let idx = rng.gen_range(0..entries.len());
        let (id, base_gcm) = gcm_values[idx];
        let base_gem = gem_values[idx].1;
        let e = &entries[id - 1];
        let rotated = random_local_layer(&state_of(e), &mut rng);
        worst_lu_gcm = worst_lu_gcm.max((gcm(&rotated).unwrap().value - base_gcm).abs());
        let g = gem(&rotated, &gem_cfg(LU_GEM_RESTARTS, trial as u64)).unwrap().value;
        worst_lu_gem = worst_lu_gem.max((g - base_gem).abs());

        let mut walked = e.graph;
        for _ in 0..rng.gen_range(1..=6) {
            walked = walked.local_complement(rng.gen_range(1..=e.n())).unwrap();
        }
        let ws = StateVector::graph_state(&walked).unwrap();
        worst_walk_gcm = worst_walk_gcm.max((gcm(&ws).unwrap().value - base_gcm).abs());
        let g = gem(&ws, &gem_cfg(LU_GEM_RESTARTS, trial as u64)).unwrap().value;
        worst_walk_gem = worst_walk_gem.max((g - base_gem).abs());
    }
    suite.record(
        "7 local-unitary invariance (200 trials)",
        worst_lu_gcm <= LU_GCM_TOL && worst_lu_gem <= LU_GEM_TOL,
        format!("max |ΔGCM| = {worst_lu_gcm:.2e}, max |ΔGEM| = {worst_lu_gem:.2e}"),
    );
    suite.record(
        "7 LC-class constancy (200 walks)",
        worst_walk_gcm <= LU_GCM_TOL && worst_walk_gem <= LU_GEM_TOL,
        format!("max |ΔGCM| = {worst_walk_gcm:.2e}, max |ΔGEM| = {worst_walk_gem:.2e}"),
    );

    // 8a. Two qubits: see-saw against the Schmidt coefficient
    let mut worst_schmidt: f64 = 0.0;
    let mut two_qubit: Vec<StateVector> = entries.iter().filter(|e| e.n() == 2).map(state_of).collect();
    for _ in 0..50 {
        let amps = (0..4).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        two_qubit.push(StateVector::normalized(amps).unwrap());
    }
    let cut = proper_subsets(2).next().unwrap();
    for s in &two_qubit {
        let oracle = gem_bipartite_oracle(s, &cut).unwrap();
        worst_schmidt = worst_schmidt.max((gem(s, &GemConfig::default()).unwrap().value - oracle).abs());
    }
    suite.record(
        "8a two-qubit GEM equals Schmidt oracle",
        worst_schmidt <= SCHMIDT_TOL,
        format!("max |Δ| = {worst_schmidt:.2e} over {} states (tol {SCHMIDT_TOL:e})", two_qubit.len()),
    );

    // 8b. Every bipartite bound stays below GEM
    let mut worst_excess = f64::NEG_INFINITY;
    let mut cuts = 0usize;
    for (e, &(_, g)) in entries.iter().zip(&gem_values) {
        let s = state_of(e);
        for cut in proper_subsets(e.n()) {
            worst_excess = worst_excess.max(gem_bipartite_oracle(&s, &cut).unwrap() - g);
            cuts += 1;
        }
    }
    suite.record(
        "8b bipartite oracle never exceeds GEM",
        worst_excess <= BIPARTITE_SLACK,
        format!("max (oracle - GEM) = {worst_excess:.2e} over {cuts} cuts (slack {BIPARTITE_SLACK:e})"),
    );

    // 8c. Brute force on small states
    let mut worst_brute: f64 = 0.0;
    let small: Vec<_> = entries.iter().zip(&gem_values).filter(|(e, _)| e.n() <= 3).collect();
    for (e, &(_, g)) in &small {
        let b = brute_force_gem(&state_of(e), BRUTE_DENSITY).unwrap();
        worst_brute = worst_brute.max((b - g).abs());
    }
    suite.record(
        "8c brute force agrees for n <= 3",
        worst_brute <= BRUTE_TOL,
        format!("max |Δ| = {worst_brute:.2e} over {} graphs (tol {BRUTE_TOL:e})", small.len()),
    );

    // 9. Catalog integrity
    let connected = entries.iter().filter(|e| e.graph.is_connected()).count();
    let mut iso_pairs = 0usize;
    let mut overlapping = 0usize;
    let mut pairs = 0usize;
    let orbits: Vec<_> = entries.iter().map(|e| lc_orbit(&e.graph, DEFAULT_ORBIT_BUDGET)).collect();
    let orbits_ok = orbits.iter().all(Result::is_ok);
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            pairs += 1;
            if is_isomorphic(&entries[i].graph, &entries[j].graph).is_some() {
                iso_pairs += 1;
            }
            if let (Ok(a), Ok(b)) = (&orbits[i], &orbits[j]) {
                if !a.is_disjoint(b) {
                    overlapping += 1;
                }
            }
        }
    }
    suite.record(
        "9 catalog integrity",
        entries.len() == 45 && connected == 45 && iso_pairs == 0 && orbits_ok && overlapping == 0 && pairs == 990,
        format!("{connected}/45 connected, {iso_pairs} isomorphic pairs, {overlapping} of {pairs} pairs share an LC orbit"),
    );

    // 10. Byte-identical JSON across thread counts
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_graphent"))
            .args(["classify", "--measure", "gem", "--seed", "7", "--format", "json"])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .map(|o| (o.status.success(), o.stdout))
    };
    let outputs: Vec<_> = ["1", "4", "1"].into_iter().map(run).collect();
    let ok = outputs.iter().all(|o| matches!(o, Ok((true, bytes)) if !bytes.is_empty()))
        && outputs.windows(2).all(|w| w[0].as_ref().unwrap().1 == w[1].as_ref().unwrap().1);
    suite.record(
        "10 deterministic classify JSON",
        ok,
        format!("{} runs (1, 4, 1 threads) {}", outputs.len(), if ok { "byte-identical" } else { "differ" }),
    );

    if suite.failures == 0 {
        println!("all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", suite.failures);
        ExitCode::FAILURE
    }
}
