//! Acceptance criteria. Each test prints one line
//! `criterion N [PASS|FAIL] name: details (elapsed)` and then asserts.
//! Run with `cargo test --test acceptance -- --nocapture --test-threads 1`
//! to see the lines in order.

mod common;

use std::time::{Duration, Instant};

use cardred_core::c2::{eval_c2, psi_concept, psi_tbox, structure_of, Env, Var};
use cardred_core::generators::{
    domino_tcbox, extract_tiling, incr_mod2n, random, tile_torus, torus_tcbox, verify_torus, DominoSystem,
};
use cardred_core::model_finder::{find_model, SearchOptions, Verdict};
use cardred_core::reductions::{internalise, internalise_with, phi, satisfiability_box, NominalAnchoring};
use cardred_core::semantics::{extension, Interpretation};
use cardred_core::syntax::{name, node_count, tbox_size, Coding, Concept, Gci, Name, Role, TcBox, TiBox};
use common::{all_up_to, names};
use rand::Rng;

// Pinned tolerances.
const C1_BUDGET: Duration = Duration::from_secs(120);
const C1_SAMPLED: usize = 2_000;
const C2_BOXES: u64 = 500;
const C2_BUDGET: Duration = Duration::from_secs(300);
const C3_BUDGET: Duration = Duration::from_secs(60);
const C4_BUDGET: Duration = Duration::from_secs(600);
const C5_BOXES: u64 = 300;
const C5_BUDGET: Duration = Duration::from_secs(300);
const C6_BUDGET: Duration = Duration::from_secs(10);
const C7_BUDGET: Duration = Duration::from_secs(60);
const C8_PSI_FACTOR: usize = 4;
const C8_PHI_FACTOR: u32 = 6;

fn report(id: u32, title: &str, ok: bool, detail: &str, start: Instant, budget: Duration) -> bool {
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let verdict = if ok && in_time { "PASS" } else { "FAIL" };
    let timing = if in_time { String::new() } else { format!(", over the {budget:?} budget") };
    println!("criterion {id} [{verdict}] {title}: {detail} ({elapsed:.2?}{timing})");
    ok && in_time
}

/// Concept trees of height at most `height` (a leaf has height 1) over one
/// concept name and one role, with bounds 0..=2 on both role directions.
fn concepts_of_height(height: usize) -> Vec<Concept> {
    let leaves = vec![Concept::atom("A"), Concept::Top];
    let mut level = leaves.clone();
    for _ in 1..height {
        let mut next = leaves.clone();
        next.extend(level.iter().map(|c| !c.clone()));
        for a in &level {
            for b in &level {
                next.push(a.clone() & b.clone());
            }
        }
        for role in [Role::named("R"), Role::inverse_of("R")] {
            for n in 0..=2u32 {
                next.extend(level.iter().map(|c| Concept::at_least(n, role.clone(), c.clone())));
            }
        }
        level = next;
    }
    level
}

/// A concept with at most `depth` constructor levels above its leaves, drawn
/// by choosing the constructor at each level uniformly.
fn sampled_concept<R: Rng>(rng: &mut R, depth: usize) -> Concept {
    if depth == 0 || rng.gen_range(0..4) == 0 {
        return if rng.gen_bool(0.5) { Concept::atom("A") } else { Concept::Top };
    }
    match rng.gen_range(0..3) {
        0 => !sampled_concept(rng, depth - 1),
        1 => sampled_concept(rng, depth - 1) & sampled_concept(rng, depth - 1),
        _ => {
            let role = if rng.gen_bool(0.5) { Role::named("R") } else { Role::inverse_of("R") };
            Concept::at_least(rng.gen_range(0..=2u32), role, sampled_concept(rng, depth - 1))
        }
    }
}

fn agree_everywhere(concepts: &[Concept], interps: &[Interpretation]) -> (usize, Option<String>) {
    let mut checks = 0;
    for i in interps {
        let s = structure_of(i).unwrap();
        for c in concepts {
            let ext = extension(i, c).unwrap();
            let f = psi_concept(c, Var::X).unwrap();
            for a in i.domain() {
                checks += 1;
                if ext.contains(a) != eval_c2(&s, &f, Env::empty().with(Var::X, a)).unwrap() {
                    return (checks, Some(format!("{c} at element {a} of\n{i}")));
                }
            }
        }
    }
    (checks, None)
}

#[test]
fn criterion_1_c2_correspondence() {
    let start = Instant::now();
    let interps = all_up_to(3, &names(&["A"]), &names(&["R"]), &[]);
    let exhaustive = concepts_of_height(3);
    let (n1, bad1) = agree_everywhere(&exhaustive, &interps);
    // Deeper concepts (three constructor levels above the leaves) by sampling.
    let mut rng = random::rng(1);
    let sampled: Vec<Concept> = (0..C1_SAMPLED).map(|_| sampled_concept(&mut rng, 3)).collect();
    let (n2, bad2) = agree_everywhere(&sampled, &interps);
    let bad = bad1.or(bad2);
    let detail = format!(
        "{} interpretations x ({} enumerated + {} sampled concepts), {} element checks, {} exceptions",
        interps.len(),
        exhaustive.len(),
        sampled.len(),
        n1 + n2,
        usize::from(bad.is_some())
    );
    let ok = report(1, "C2 translation agrees per element", bad.is_none(), &detail, start, C1_BUDGET);
    assert!(ok, "counterexample: {}", bad.unwrap_or_default());
}

fn criterion_2_corpus() -> Vec<TcBox> {
    (0..C2_BOXES)
        .map(|seed| {
            let shape = random::Shape::small(2, 1).inverse(seed % 2 == 0).depth(2).max_bound(2);
            random::tcbox(&mut random::rng(seed), &shape, 3)
        })
        .collect()
}

#[test]
fn criterion_2_phi_equiconsistency() {
    let start = Instant::now();
    let opts = SearchOptions::new(4);
    let mut disagreements = Vec::new();
    let mut consistent = 0;
    for (seed, t) in criterion_2_corpus().iter().enumerate() {
        let (ti, _) = phi(t);
        let a = find_model(t, &opts).unwrap().is_consistent();
        let b = find_model(&ti, &opts).unwrap().is_consistent();
        consistent += usize::from(a);
        if a != b {
            disagreements.push(seed);
        }
    }
    let detail = format!(
        "{C2_BOXES} boxes ({consistent} consistent), {} disagreements {:?}",
        disagreements.len(),
        disagreements
    );
    let ok = report(2, "T consistent iff Phi(T) consistent", disagreements.is_empty(), &detail, start, C2_BUDGET);
    assert!(ok);
}

#[test]
fn criterion_3_torus_n1() {
    let start = Instant::now();
    let t = torus_tcbox(1).unwrap();
    let at4 = find_model(&t, &SearchOptions::new(4)).unwrap();
    let torus_ok = at4.model().map(|m| verify_torus(m, 1).unwrap().verdict);
    let at3 = find_model(&t, &SearchOptions::new(3)).unwrap();
    let ok = torus_ok == Some(true) && at3 == Verdict::NoModelUpTo(3);
    let detail = format!(
        "bound 4 witness passes torus check: {torus_ok:?}; bound 3: {}",
        if at3 == Verdict::NoModelUpTo(3) { "no model" } else { "unexpected model" }
    );
    assert!(report(3, "torus T_1 has exactly the 2x2 torus as model", ok, &detail, start, C3_BUDGET));
}

fn domino_corpus() -> Vec<(DominoSystem, Name)> {
    let mut out = Vec::new();
    for tiles in [vec![name("d")], vec![name("a"), name("b")]] {
        let pairs: Vec<(Name, Name)> =
            tiles.iter().flat_map(|x| tiles.iter().map(move |y| (x.clone(), y.clone()))).collect();
        let subsets = |mask: u32| -> Vec<(Name, Name)> {
            pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, p)| p.clone()).collect()
        };
        for h in 0..1u32 << pairs.len() {
            for v in 0..1u32 << pairs.len() {
                let d = DominoSystem::new(tiles.clone(), subsets(h), subsets(v)).unwrap();
                for w in &tiles {
                    out.push((d.clone(), w.clone()));
                }
            }
        }
    }
    out
}

#[test]
fn criterion_4_domino_encoding() {
    let start = Instant::now();
    let corpus = domino_corpus();
    let mut disagreements = 0;
    let mut tileable = 0;
    for (d, w) in &corpus {
        let init = [w.clone()];
        let tiling = tile_torus(d, 2, 2, &init).unwrap();
        let verdict = find_model(&domino_tcbox(1, d, &init).unwrap(), &SearchOptions::new(4)).unwrap();
        tileable += usize::from(tiling.is_some());
        let extracted_ok = verdict.model().is_none_or(|m| extract_tiling(m, 1, d).unwrap().is_valid(d, &init));
        if verdict.is_consistent() != tiling.is_some() || !extracted_ok {
            disagreements += 1;
        }
    }
    let detail = format!("{} cases ({tileable} tileable), {disagreements} disagreements", corpus.len());
    let ok = report(4, "T(1,D,w) consistent iff D tiles U(2,2)", disagreements == 0, &detail, start, C4_BUDGET);
    assert!(ok);
}

fn criterion_5_corpus() -> Vec<TiBox> {
    (0..C5_BOXES)
        .map(|seed| {
            let nominals: &[&str] = if seed % 2 == 0 { &["o"] } else { &[] };
            let shape = random::Shape::small(2, 1).with_nominals(nominals).depth(2).max_bound(2);
            random::tibox(&mut random::rng(1_000 + seed), &shape, 2)
        })
        .collect()
}

#[test]
fn criterion_5_internalisation() {
    let start = Instant::now();
    let (at4, at5) = (SearchOptions::new(4), SearchOptions::new(5));
    let mut failures = Vec::new();
    let mut consistent = 0;
    let mut literal_disagreements = 0;
    for (k, t) in criterion_5_corpus().iter().enumerate() {
        let source = find_model(t, &at4).unwrap().is_consistent();
        let ct = satisfiability_box(internalise(t));
        let wide = find_model(&ct, &at5).unwrap().is_consistent();
        let tight = find_model(&ct, &at4).unwrap().is_consistent();
        consistent += usize::from(source);
        if source != wide || source != tight {
            failures.push(k);
        }
        let literal = satisfiability_box(internalise_with(t, NominalAnchoring::Off));
        literal_disagreements += usize::from(find_model(&literal, &at5).unwrap().is_consistent() != source);
    }
    let detail = format!(
        "{C5_BOXES} boxes ({consistent} consistent), {} disagreements {:?} at bounds 5 and 4; \
         without nominal anchoring: {literal_disagreements} disagreements",
        failures.len(),
        failures
    );
    let ok = report(5, "T consistent iff C_T satisfiable", failures.is_empty(), &detail, start, C5_BUDGET);
    assert!(ok);
}

#[test]
fn criterion_6_binary_increment() {
    let start = Instant::now();
    let mut cases = 0;
    let mut wrong = 0;
    for n in 1..=6usize {
        let bits = |v: usize| (0..n).map(|k| v >> k & 1 == 1).collect::<Vec<_>>();
        for x in 0..1usize << n {
            for y in 0..1usize << n {
                cases += 1;
                let oracle = y == (x + 1) % (1 << n);
                if incr_mod2n(&bits(x), &bits(y)).unwrap() != oracle {
                    wrong += 1;
                }
            }
        }
    }
    let detail = format!("{cases} pairs for n = 1..6, {wrong} disagreements with arithmetic");
    assert!(report(6, "carry-chain increment", wrong == 0, &detail, start, C6_BUDGET));
}

fn una_example(k: u32) -> TiBox {
    let r = Role::named("R");
    let o = Concept::nominal("o");
    [
        Gci::new(o.clone(), Concept::at_most(k, r.clone(), Concept::Top)),
        Gci::new(Concept::Top, Concept::exists(r.inverse(), o)),
    ]
    .into_iter()
    .collect()
}

#[test]
fn criterion_7_unique_names() {
    let start = Instant::now();
    // Two individual names: `o` from the box and one more.
    let opts = |una: bool| SearchOptions::new(6).unique_names(una).individual(name("p"));
    let una_k1 = find_model(&una_example(1), &opts(true)).unwrap();
    let una_k2 = find_model(&una_example(2), &opts(true)).unwrap();
    let free_k1 = find_model(&una_example(1), &opts(false)).unwrap();
    let free_k2 = find_model(&una_example(2), &opts(false)).unwrap();
    let ok = una_k1 == Verdict::NoModelUpTo(6)
        && una_k2.is_consistent()
        && free_k1.is_consistent()
        && free_k2.is_consistent();
    let show = |v: &Verdict| match v {
        Verdict::Consistent { model, .. } => format!("model of size {}", model.size()),
        Verdict::NoModelUpTo(k) => format!("no model up to {k}"),
    };
    let detail = format!(
        "UNA k=1: {}, UNA k=2: {}, no UNA k=1: {}, no UNA k=2: {}",
        show(&una_k1),
        show(&una_k2),
        show(&free_k1),
        show(&free_k2)
    );
    assert!(report(7, "unique name assumption changes consistency", ok, &detail, start, C7_BUDGET));
}

#[test]
fn criterion_8_linear_sizes() {
    let start = Instant::now();
    let (mut worst_psi, mut worst_phi) = (0f64, 0f64);
    let mut over = 0;
    for t in criterion_2_corpus() {
        let psi = psi_tbox(&t).unwrap().node_count();
        let src_nodes = node_count(&t);
        let (ti, _) = phi(&t);
        let src_size = tbox_size(&t, Coding::Unary);
        let phi_size = tbox_size(&ti, Coding::Unary);
        worst_psi = worst_psi.max(psi as f64 / src_nodes as f64);
        worst_phi =
            worst_phi.max(f64::from(u32::try_from(&phi_size).unwrap()) / f64::from(u32::try_from(&src_size).unwrap()));
        if psi > C8_PSI_FACTOR * src_nodes || phi_size > src_size * C8_PHI_FACTOR {
            over += 1;
        }
    }
    let detail = format!(
        "worst ratios: C2 nodes {worst_psi:.2} (limit {C8_PSI_FACTOR}), nominal translation size {worst_phi:.2} \
         (limit {C8_PHI_FACTOR}); {over} boxes over"
    );
    assert!(report(8, "translations are linear", over == 0, &detail, start, Duration::MAX));
}
