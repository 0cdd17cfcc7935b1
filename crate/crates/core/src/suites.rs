//! Property suites with fixed sizes and seeds, shared by the acceptance
//! tests and `selftest`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::engine::{
    catalog, countermodel_search, equivalent, find_interpolant, rooted_preorders, sat, valid,
    Budget, Interpolation, Lambda, LogicId, SatResult, Verdict,
};
use crate::frame_formulas::{gamma, pattern_instance, substitute, Bound, PatternKind};
use crate::kripke::{
    clusters, model_check, spec_candidate, OrderMode, PreorderModel, RootedFrame, SmallModel,
    WorldSet,
};
use crate::refine::{precondition_violation, refine_model, RefineOptions};
use crate::smorynski::build_smorynski_model;
use crate::syntax::{
    apply_modality, boolean_subformula_closure, canonical_modalities, normalize_modality, parse,
    subformula_closure, BoolClosureOptions, Formula, FormulaSet, ModalOp, SignedClosure,
};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub id: usize,
    pub name: &'static str,
    /// Cases checked.
    pub cases: usize,
    /// Fewest cases for the suite to count.
    pub required: usize,
    /// Generated cases that did not meet the suite's preconditions.
    pub skipped: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases >= self.required && self.elapsed <= self.limit
    }

    pub fn line(&self) -> String {
        let mut s = format!(
            "criterion {} {}: {} ({} cases, {} skipped, {:.1}s of {}s)",
            self.id,
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases,
            self.skipped,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        );
        if self.cases < self.required {
            s.push_str(&format!("; needed {} cases", self.required));
        }
        if let Some(f) = self.failures.first() {
            s.push_str(&format!("; {} failures, first: {f}", self.failures.len()));
        }
        s
    }
}

/// `(id, slug, description)` of every suite.
pub const SUITES: [(usize, &str, &str); 9] = [
    (1, "lemma23", "frame formula vs p-morphism"),
    (2, "truth", "truth lemma"),
    (3, "confluence", "confluence of KC models"),
    (4, "refine", "cluster refinement"),
    (5, "patterns", "pattern instances"),
    (6, "interpolation", "interpolants and countermodels"),
    (7, "crosscheck", "engine cross-check"),
    (8, "catalog", "catalog and modality counts"),
    (9, "axioms", "axioms"),
];

/// Suite id for a slug or number.
pub fn lookup(name: &str) -> Option<usize> {
    SUITES
        .iter()
        .find(|(id, slug, _)| *slug == name || id.to_string() == name)
        .map(|s| s.0)
}

pub fn run(id: usize) -> Option<SuiteReport> {
    let start = Instant::now();
    let (cases, required, skipped, failures, limit) = match id {
        1 => frame_formula_oracle(),
        2 => truth_lemma(),
        3 => kc_confluence(),
        4 => refinement(),
        5 => patterns(),
        6 => interpolation(),
        7 => crosscheck(),
        8 => exact_counts(),
        9 => axioms(),
        _ => return None,
    };
    Some(SuiteReport {
        id,
        name: SUITES[id - 1].2,
        cases,
        required,
        skipped,
        failures,
        elapsed: start.elapsed(),
        limit: Duration::from_secs(limit),
    })
}

pub fn run_all() -> Vec<SuiteReport> {
    SUITES.iter().filter_map(|&(id, _, _)| run(id)).collect()
}

type Outcome = (usize, usize, usize, Vec<String>, u64);

fn f(s: &str) -> Formula {
    parse(s).expect("suite formulas parse")
}

fn frame_rows_model(rows: &[u64]) -> PreorderModel {
    let n = rows.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| {
            (0..n)
                .filter(move |&j| rows[i] >> j & 1 == 1)
                .map(move |j| (i, j))
        })
        .collect();
    PreorderModel::from_indices(n, &pairs, BTreeMap::new(), OrderMode::Strict)
        .expect("enumerated preorder")
}

/// Every rooted model on at most `max` worlds over `atoms`, one per frame
/// and valuation.
fn small_models(max: usize, atoms: &[&str]) -> Vec<PreorderModel> {
    let mut out = Vec::new();
    for n in 1..=max {
        for rows in rooted_preorders(n).expect("enumerable size") {
            let base = frame_rows_model(rows);
            for val in 0u64..1 << (n * atoms.len()) {
                let mut m = base.clone();
                for (i, a) in atoms.iter().enumerate() {
                    m.set_atom(a, WorldSet::from_mask(n, val >> (i * n) & ((1 << n) - 1)));
                }
                out.push(m);
            }
        }
    }
    out
}

/// Refutation of a substituted frame formula against the preimage
/// p-morphism, over every small model, target frame and tuple from a pool.
fn frame_formula_oracle() -> Outcome {
    let pool = ["false", "true", "p", "~p", "[]p", "<>p"].map(f);
    let targets: Vec<RootedFrame> = (1..=3)
        .flat_map(|k| rooted_preorders(k).expect("enumerable size").iter())
        .map(|rows| RootedFrame::new(rows.clone()).expect("rooted preorder"))
        .collect();
    // (target, argument indices, instance)
    let mut instances = Vec::new();
    for (t, g) in targets.iter().enumerate() {
        let beta = crate::frame_formulas::frame_formula(g);
        let k = g.len();
        for code in 0..pool.len().pow(k as u32) {
            let idx: Vec<usize> = (0..k)
                .map(|i| code / pool.len().pow(i as u32) % pool.len())
                .collect();
            let args: Vec<Formula> = idx.iter().map(|&i| pool[i].clone()).collect();
            instances.push((t, idx, substitute(&beta, &args).expect("arity matches")));
        }
    }
    let (mut cases, mut skipped, mut failures) = (0, 0, Vec::new());
    for m in small_models(4, &["p"]) {
        let small = SmallModel::new(&m);
        let extents: Vec<WorldSet> = pool.iter().map(|a| model_check(&m, a)).collect();
        for (t, idx, inst) in &instances {
            let refuted = !small.check(inst);
            for x in 0..m.len() {
                if !extents[idx[0]].contains(x) {
                    skipped += 1;
                    continue;
                }
                cases += 1;
                let up: Vec<usize> = m.successors(x).iter().collect();
                let ext: Vec<WorldSet> = idx.iter().map(|&i| extents[i].clone()).collect();
                let morphism = spec_candidate(&m, x, &targets[*t], &up, &ext).is_some();
                if (refuted >> x & 1 == 1) != morphism && failures.len() < 20 {
                    failures.push(format!(
                        "{} at {} with target {:?}",
                        inst,
                        m.name(x),
                        targets[*t].pairs()
                    ));
                }
            }
        }
    }
    (cases, 1, skipped, failures, 120)
}

fn random_formula(rng: &mut StdRng, atoms: &[&str], depth: usize, size: usize) -> Formula {
    if size <= 1 {
        return Formula::atom(atoms[rng.gen_range(0..atoms.len())]);
    }
    let choice = rng.gen_range(0..if depth > 0 { 6 } else { 4 });
    match choice {
        0 => Formula::not(random_formula(rng, atoms, depth, size - 1)),
        1..=3 if size >= 3 => {
            let left = rng.gen_range(1..size - 1);
            let a = random_formula(rng, atoms, depth, left);
            let b = random_formula(rng, atoms, depth, size - 1 - left);
            match choice {
                1 => Formula::and(a, b),
                2 => Formula::or(a, b),
                _ => Formula::implies(a, b),
            }
        }
        1..=3 => Formula::not(random_formula(rng, atoms, depth, size - 1)),
        4 => Formula::boxed(random_formula(rng, atoms, depth - 1, size - 1)),
        _ => Formula::diamond(random_formula(rng, atoms, depth - 1, size - 1)),
    }
}

/// Seed pairs over `p` and `q` of modal depth at most one, one per logic.
fn seed_pairs() -> Vec<(Formula, Formula, LogicId)> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    LogicId::all()
        .into_iter()
        .map(|logic| {
            let (sa, sb) = (rng.gen_range(2..=5), rng.gen_range(2..=5));
            let a = random_formula(&mut rng, &["p", "q"], 1, sa);
            let b = random_formula(&mut rng, &["p", "q"], 1, sb);
            (a, b, logic)
        })
        .collect()
}

fn smorynski_budget() -> Budget {
    Budget {
        max_closure: 62,
        ..Budget::default()
    }
}

fn truth_lemma() -> Outcome {
    let (mut cases, mut failures) = (0, Vec::new());
    for (a, b, logic) in seed_pairs() {
        let closure = SignedClosure::box_negation(&[a.clone()], &[b.clone()]);
        let started = Instant::now();
        let s = match build_smorynski_model(&closure, logic, &smorynski_budget()) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("({a}, {b}) in {logic}: {e}"));
                continue;
            }
        };
        cases += 1;
        let bad = s.truth_lemma_failures();
        if let Some((w, g)) = bad.first() {
            failures.push(format!("({a}, {b}) in {logic}: {g} at world {w}"));
        }
        if !s.is_maximal() {
            failures.push(format!("({a}, {b}) in {logic}: a world is not maximal"));
        }
        for (i, t) in s.worlds.iter().enumerate() {
            if t.contains(&Formula::Bottom) {
                failures.push(format!("({a}, {b}) in {logic}: false is a member"));
            }
            let boxed: Vec<Formula> = t.members().into_iter().filter(Formula::is_boxed).collect();
            for (j, u) in s.worlds.iter().enumerate() {
                if s.model.leq(i, j) != boxed.iter().all(|g| u.contains(g)) {
                    failures.push(format!("({a}, {b}) in {logic}: order differs at {i}, {j}"));
                }
            }
        }
        if started.elapsed() > Duration::from_secs(300) {
            failures.push(format!(
                "({a}, {b}) in {logic}: took {:?}",
                started.elapsed()
            ));
        }
    }
    (cases, 10, 0, failures, 300 * 18)
}

fn kc_confluence() -> Outcome {
    let (mut cases, mut failures) = (0, Vec::new());
    for (a, b, logic) in seed_pairs() {
        let logic = LogicId {
            lambda: Lambda::KC,
            ..logic
        };
        let closure = SignedClosure::box_negation(&[a.clone()], &[b.clone()]);
        match build_smorynski_model(&closure, logic, &smorynski_budget()) {
            Ok(s) => {
                cases += 1;
                if !s.model.is_confluent() {
                    failures.push(format!("({a}, {b}) in {logic}: not confluent"));
                }
            }
            Err(e) => failures.push(format!("({a}, {b}) in {logic}: {e}")),
        }
    }
    (cases, 9, 0, failures, 300 * 18)
}

/// A random preorder on at most 8 worlds, built from a random partition
/// into clusters ordered by a random relation on cluster indices, with
/// valuations often constant on clusters.
fn random_model(rng: &mut StdRng) -> PreorderModel {
    let n = rng.gen_range(1..=8);
    let k = rng.gen_range(1..=n);
    let mut cluster_of: Vec<usize> = (0..n)
        .map(|i| if i < k { i } else { rng.gen_range(0..k) })
        .collect();
    cluster_of.sort_unstable();
    let with_top = rng.gen_bool(0.5);
    let mut above = vec![vec![false; k]; k];
    for a in 0..k {
        above[a][a] = true;
        for b in a + 1..k {
            above[a][b] = rng.gen_bool(0.4) || (with_top && b == k - 1);
        }
    }
    let mut pairs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if above[cluster_of[x]][cluster_of[y]] {
                pairs.push((x, y));
            }
        }
    }
    let mut valuation = BTreeMap::new();
    for atom in ["p", "q"] {
        let per_cluster = rng.gen_bool(0.5);
        let cluster_bits: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.5)).collect();
        let ext = (0..n).filter(|&x| {
            if per_cluster {
                cluster_bits[cluster_of[x]]
            } else {
                rng.gen_bool(0.5)
            }
        });
        valuation.insert(atom.to_string(), WorldSet::from_indices(n, ext));
    }
    let m = PreorderModel::from_indices(n, &pairs, BTreeMap::new(), OrderMode::Close)
        .expect("closed relation");
    let mut m = m;
    for (a, s) in valuation {
        m.set_atom(&a, s);
    }
    m
}

fn is_preorder(m: &PreorderModel) -> bool {
    (0..m.len()).all(|i| {
        m.leq(i, i)
            && m.successors(i)
                .iter()
                .all(|j| m.successors(j).is_subset(m.successors(i)))
    })
}

fn refinement() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x4e_f1e);
    let bounds = [Bound::Finite(1), Bound::Finite(2), Bound::Omega];
    let opts = RefineOptions {
        recheck_preconditions: true,
        ..RefineOptions::default()
    };
    let (mut cases, mut skipped, mut failures) = (0, 0, Vec::new());
    let mut attempts = 0;
    while cases < 200 && attempts < 100_000 {
        attempts += 1;
        let model = random_model(&mut rng);
        let (s1, s2) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let phi1 = random_formula(&mut rng, &["p", "q"], 2, s1);
        let phi2 = random_formula(&mut rng, &["p", "q"], 2, s2);
        let (m, n) = (bounds[rng.gen_range(0..3)], bounds[rng.gen_range(0..3)]);
        let (s1, s2): (FormulaSet, FormulaSet) = ([phi1.clone()].into(), [phi2.clone()].into());
        let oversized = {
            let view = clusters(&model);
            (0..view.len()).any(|c| {
                let b = if view.is_final[c] { m } else { n };
                !b.admits(view.clusters[c].len())
            })
        };
        match precondition_violation(&model, &s1, &s2, m, n, 1 << 20) {
            Ok(None) if oversized => {}
            _ => {
                skipped += 1;
                continue;
            }
        }
        cases += 1;
        let label = format!("{phi1} / {phi2} with m={m} n={n} on {} worlds", model.len());
        let r = match refine_model(&model, &s1, &s2, m, n, &opts) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{label}: {e}"));
                continue;
            }
        };
        let refined = &r.model;
        // the Boolean closure is determined by its letters; check every
        // subformula, and the closure itself when it is small
        let mut check: FormulaSet = subformula_closure([&phi1, &phi2]);
        for side in [&phi1, &phi2] {
            if let Ok(b) = boolean_subformula_closure([side], &BoolClosureOptions { cap: 1 << 12 })
            {
                check.extend(b);
            }
        }
        if let Some(g) = check
            .iter()
            .find(|g| model_check(&model, g) != model_check(refined, g))
        {
            failures.push(format!("{label}: extension of {g} changed"));
        }
        if !is_preorder(refined) {
            failures.push(format!("{label}: not a preorder"));
        }
        if model.is_confluent() && !refined.is_confluent() {
            failures.push(format!("{label}: confluence lost"));
        }
        let view = clusters(refined);
        for (c, members) in view.clusters.iter().enumerate() {
            let b = if view.is_final[c] { m } else { n };
            if !b.admits(members.len()) {
                failures.push(format!(
                    "{label}: cluster of {} worlds remains",
                    members.len()
                ));
            }
        }
        let refined_clusters: Vec<BTreeSet<usize>> = r
            .steps
            .iter()
            .map(|s| {
                s.cluster
                    .iter()
                    .map(|w| model.index_of(w).expect("same worlds"))
                    .collect()
            })
            .collect();
        for a in 0..model.len() {
            for b in 0..model.len() {
                let inside = refined_clusters
                    .iter()
                    .any(|c| c.contains(&a) && c.contains(&b));
                let (old, new) = (model.leq(a, b), refined.leq(a, b));
                if (!inside && old != new) || (inside && new && !old) {
                    failures.push(format!(
                        "{label}: edge ({a}, {b}) changed outside refined clusters"
                    ));
                }
            }
        }
    }
    (cases, 200, skipped, failures, 300)
}

/// Every configuration of points and formulas meeting a pattern lemma's
/// hypotheses on models of at most five worlds.
fn patterns() -> Outcome {
    let pool = [
        "p",
        "q",
        "~p",
        "[]p",
        "<>p",
        "p & q",
        "p | q",
        "<>(p & ~q)",
        "[]q -> p",
    ]
    .map(f);
    let mut instances: BTreeMap<(PatternKind, usize, usize), Formula> = BTreeMap::new();
    for (i, phi) in pool.iter().enumerate() {
        for kind in [PatternKind::Final2, PatternKind::Nonfinal2] {
            instances.insert(
                (kind, i, i),
                pattern_instance(kind, phi, None).expect("one formula"),
            );
        }
        for (j, psi) in pool.iter().enumerate() {
            for kind in [PatternKind::Final3, PatternKind::Nonfinal3] {
                instances.insert(
                    (kind, i, j),
                    pattern_instance(kind, phi, Some(psi)).expect("two formulas"),
                );
            }
        }
    }
    let mut models = small_models(5, &["p"]);
    models.extend(small_models(4, &["p", "q"]));
    let (mut cases, mut failures) = (0, Vec::new());
    for m in &models {
        let small = SmallModel::new(m);
        let ext: Vec<u64> = pool.iter().map(|g| small.check(g)).collect();
        let view = clusters(m);
        let mut results: BTreeMap<(PatternKind, usize, usize), u64> = BTreeMap::new();
        let mut refutes = |key: (PatternKind, usize, usize), x: usize| {
            let truth = *results
                .entry(key)
                .or_insert_with(|| small.check(&instances[&key]));
            truth >> x & 1 == 0
        };
        for (c, members) in view.clusters.iter().enumerate() {
            let fin = view.is_final[c];
            let cmask = members.iter().fold(0u64, |a, &w| a | 1 << w);
            for &x1 in members {
                let strictly_above = small.successors(x1) & !cmask;
                for i in 0..pool.len() {
                    let phi = ext[i];
                    // two points: x1 |= phi, some x2 in the cluster |= ~phi
                    let split = phi >> x1 & 1 == 1 && cmask & !phi != 0;
                    let above_ok = strictly_above & !phi == 0;
                    if split && (fin || above_ok) {
                        let kind = if fin {
                            PatternKind::Final2
                        } else {
                            PatternKind::Nonfinal2
                        };
                        cases += 1;
                        if !refutes((kind, i, i), x1) {
                            failures.push(format!("{kind:?} {} at {}", pool[i], m.name(x1)));
                        }
                    }
                    for j in 0..pool.len() {
                        let psi = ext[j];
                        let ok = (phi & psi) >> x1 & 1 == 1
                            && cmask & !phi & psi != 0
                            && cmask & !psi != 0;
                        let above_ok = strictly_above & !(phi & psi) == 0;
                        if ok && (fin || above_ok) {
                            let kind = if fin {
                                PatternKind::Final3
                            } else {
                                PatternKind::Nonfinal3
                            };
                            cases += 1;
                            if !refutes((kind, i, j), x1) {
                                failures.push(format!(
                                    "{kind:?} {} {} at {}",
                                    pool[i],
                                    pool[j],
                                    m.name(x1)
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    (cases, 1, 0, failures, 300)
}

/// Implications over `p`, `q` and private atoms `r`, `s`, `t`, with the
/// logics in which they are valid.
fn implication_corpus() -> Vec<(Formula, Formula, fn(LogicId) -> bool)> {
    let all: fn(LogicId) -> bool = |_| true;
    let kc: fn(LogicId) -> bool = |l| l.lambda == Lambda::KC;
    let final_points: fn(LogicId) -> bool = |l| l.m == Bound::Finite(1);
    [
        ("p & q", "p | r", all),
        ("[](p & s)", "[]p | r", all),
        ("[]p & [](p -> q)", "<>q | r", all),
        ("p & ~p", "q", all),
        ("[][]p & s", "<>p", all),
        ("~<>p & q", "[](p -> t)", all),
        ("s & p", "[]s -> s", all),
        ("<>[]p & s", "[]<>p | t", kc),
        ("[]<>p & s", "<>[]p | t", final_points),
        ("p", "[]p", |_| false),
        ("<>p", "p", |_| false),
        ("p", "q", |_| false),
        ("<>p & <>~p", "q", |_| false),
        ("[](p | q)", "[]p | []q", |_| false),
    ]
    .into_iter()
    .map(|(a, b, v)| (f(a), f(b), v))
    .collect()
}

fn interpolation() -> Outcome {
    let budget = Budget::default();
    let (mut cases, mut failures) = (0, Vec::new());
    for logic in LogicId::all() {
        let (mut valid_count, mut invalid_count) = (0, 0);
        for (a, b, is_valid) in implication_corpus() {
            let started = Instant::now();
            let label = format!("{a} -> {b} in {logic}");
            let shared: BTreeSet<String> = a.atoms().intersection(&b.atoms()).cloned().collect();
            cases += 1;
            match find_interpolant(&a, &b, logic, &budget) {
                Interpolation::Interpolant(c) if is_valid(logic) => {
                    valid_count += 1;
                    let v1 = valid(&Formula::implies(a.clone(), c.clone()), logic, &budget);
                    let v2 = valid(&Formula::implies(c.clone(), b.clone()), logic, &budget);
                    if !v1.is_valid() || !v2.is_valid() {
                        failures.push(format!("{label}: interpolant {c} does not check"));
                    }
                    if !c.atoms().is_subset(&shared) {
                        failures.push(format!("{label}: interpolant {c} uses private atoms"));
                    }
                }
                Interpolation::NotValid { model, world } if !is_valid(logic) => {
                    invalid_count += 1;
                    if let Some(why) = logic.frame_violation(&model) {
                        failures.push(format!("{label}: countermodel outside the class: {why}"));
                    }
                    if crate::kripke::satisfies(
                        &model,
                        world,
                        &Formula::implies(a.clone(), b.clone()),
                    ) {
                        failures.push(format!("{label}: countermodel does not refute"));
                    }
                }
                other => failures.push(format!("{label}: unexpected {other:?}")),
            }
            if started.elapsed() > Duration::from_secs(30) {
                failures.push(format!("{label}: took {:?}", started.elapsed()));
            }
        }
        if valid_count < 5 || invalid_count < 5 {
            failures.push(format!(
                "{logic}: {valid_count} valid and {invalid_count} invalid instances"
            ));
        }
    }
    (cases, 18 * 10, 0, failures, 18 * 14 * 30)
}

/// Structural normal form used to deduplicate enumerated formulas:
/// diamonds rewritten, double negations dropped, `&` and `|` operands
/// sorted.
fn canonical(g: &Formula) -> Formula {
    fn go(g: &Formula) -> Formula {
        match g {
            Formula::Not(a) => match go(a) {
                Formula::Not(b) => *b,
                b => Formula::not(b),
            },
            Formula::Box(a) => Formula::boxed(go(a)),
            Formula::And(a, b) | Formula::Or(a, b) => {
                let (mut x, mut y) = (go(a), go(b));
                if y < x {
                    std::mem::swap(&mut x, &mut y);
                }
                if matches!(g, Formula::And(..)) {
                    Formula::and(x, y)
                } else {
                    Formula::or(x, y)
                }
            }
            Formula::Implies(a, b) => Formula::implies(go(a), go(b)),
            other => other.clone(),
        }
    }
    go(&g.without_diamonds())
}

/// Formulas over `p` with at most `size` nodes and modal depth at most
/// two, one per canonical form.
pub fn crosscheck_corpus(size: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(), vec![Formula::atom("p")]];
    for s in 2..=size {
        let mut next = Vec::new();
        for a in &by_size[s - 1] {
            next.push(Formula::not(a.clone()));
            if a.modal_depth() < 2 {
                next.push(Formula::boxed(a.clone()));
                next.push(Formula::diamond(a.clone()));
            }
        }
        for i in 1..s - 1 {
            for a in &by_size[i] {
                for b in &by_size[s - 1 - i] {
                    next.push(Formula::and(a.clone(), b.clone()));
                    next.push(Formula::or(a.clone(), b.clone()));
                    next.push(Formula::implies(a.clone(), b.clone()));
                }
            }
        }
        by_size.push(next);
    }
    let mut seen = BTreeSet::new();
    by_size
        .into_iter()
        .flatten()
        .filter(|g| seen.insert(canonical(g)))
        .collect()
}

pub const CROSSCHECK_SIZE: usize = 6;

fn crosscheck() -> Outcome {
    let budget = Budget::default();
    let corpus = crosscheck_corpus(CROSSCHECK_SIZE);
    let (mut cases, mut failures) = (0, Vec::new());
    for logic in [LogicId::s4(), LogicId::s4_2()] {
        let outcomes: Vec<Option<String>> = crate::par::map(&corpus, |g| {
            let s = sat(g, logic, &budget);
            let refuting = countermodel_search(&Formula::not(g.clone()), logic, 5);
            match (s, refuting) {
                (SatResult::Unsatisfiable, Ok(Some(_))) => {
                    Some(format!("{g} in {logic}: unsat but a model exists"))
                }
                (SatResult::Satisfiable { model, world }, _)
                    if !crate::kripke::satisfies(&model, world, g)
                        || !logic.admits_frame(&model) =>
                {
                    Some(format!("{g} in {logic}: bad satisfying model"))
                }
                (SatResult::Unknown(r), _) => Some(format!("{g} in {logic}: unknown ({r})")),
                (_, Err(e)) => Some(format!("{g} in {logic}: {e}")),
                _ => None,
            }
        });
        cases += corpus.len();
        failures.extend(outcomes.into_iter().flatten());
    }
    (cases, 1, 0, failures, 600)
}

fn words(max_len: usize) -> Vec<Vec<ModalOp>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for op in [ModalOp::Not, ModalOp::Box] {
                let mut v: Vec<ModalOp> = w.clone();
                v.push(op);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn exact_counts() -> Outcome {
    let budget = Budget::default();
    let mut failures = Vec::new();
    let c = catalog();
    let cip = c.iter().filter(|e| e.has_cip).count();
    let dip = c.iter().filter(|e| e.has_dip).count();
    if cip != 37 {
        failures.push(format!(
            "{cip} logics with Craig interpolation, expected 37"
        ));
    }
    if dip != 49 {
        failures.push(format!(
            "{dip} logics with deductive interpolation, expected 49"
        ));
    }
    let p = Formula::atom("p");
    let mut cases = 2;
    let classes: BTreeSet<Vec<ModalOp>> = words(8).iter().map(|w| normalize_modality(w)).collect();
    let canon = canonical_modalities();
    if classes.len() != 14 || canon.len() != 14 || classes != canon.iter().cloned().collect() {
        failures.push(format!("{} normalized classes, expected 14", classes.len()));
    }
    for (i, a) in canon.iter().enumerate() {
        for b in &canon[i + 1..] {
            cases += 1;
            let (x, y) = (apply_modality(a, &p), apply_modality(b, &p));
            if equivalent(&x, &y, LogicId::s4(), &budget) != Ok(false) {
                failures.push(format!("{x} and {y} are not distinct"));
            }
        }
    }
    for w in words(8) {
        cases += 1;
        let (x, y) = (
            apply_modality(&w, &p),
            apply_modality(&normalize_modality(&w), &p),
        );
        if equivalent(&x, &y, LogicId::s4(), &budget) != Ok(true) {
            failures.push(format!("{x} is not equivalent to its normal form {y}"));
        }
    }
    (cases, 1, 0, failures, 120)
}

fn axioms() -> Outcome {
    let budget = Budget::default();
    let (mut cases, mut failures) = (0, Vec::new());
    let mut expect = |g: Formula, logic: LogicId, want: bool| {
        cases += 1;
        match valid(&g, logic, &budget) {
            Verdict::Valid if want => {}
            Verdict::Invalid { .. } if !want => {}
            other => failures.push(format!(
                "{g} in {logic}: expected {}, got {}",
                if want { "valid" } else { "invalid" },
                match other {
                    Verdict::Valid => "valid".to_string(),
                    Verdict::Invalid { .. } => "invalid".to_string(),
                    Verdict::Unknown(r) => format!("unknown ({r})"),
                }
            )),
        }
    };
    for logic in LogicId::all() {
        expect(gamma(logic.m, false), logic, true);
        expect(gamma(logic.n, true), logic, true);
        expect(f("<>[]p -> []<>p"), logic, logic.lambda == Lambda::KC);
        expect(f("[]p -> p"), logic, true);
        expect(f("[]p -> [][]p"), logic, true);
    }
    (cases, 90, 0, failures, 300)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_merges_commuted_operands() {
        assert_eq!(canonical(&f("p & <>p")), canonical(&f("~[]~p & ~~p")));
        assert_ne!(canonical(&f("p -> []p")), canonical(&f("[]p -> p")));
    }

    #[test]
    fn corpus_is_deduplicated() {
        let c = crosscheck_corpus(3);
        assert!(c.contains(&f("p")));
        assert!(c.contains(&f("[]~p")));
        let forms: BTreeSet<Formula> = c.iter().map(canonical).collect();
        assert_eq!(forms.len(), c.len());
    }

    #[test]
    fn random_models_are_preorders() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..50 {
            assert!(is_preorder(&random_model(&mut rng)));
        }
    }
}
