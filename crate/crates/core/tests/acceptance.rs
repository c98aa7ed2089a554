//! Acceptance suite: seven criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p agccz-core --test acceptance -- --nocapture`.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use agccz_core::css::params::{family_bounds, tower_calculator, ParamsRow, Rational, TowerParams};
use agccz_core::curve::{evaluate_combination, Curve};
use agccz_core::lincode::{min_distance_bruteforce, to_partially_systematic, EvalCode};
use agccz_core::synth::expected_intra_multiplicity;
use agccz_core::verify::{mutation_sweep, verify_dense, Mode, StateOptions};
use agccz_core::{
    build_css, check_assumption, greedy_schedule, synthesize, validate_schedule,
    verify_logical_ccz, verify_state_oracle, CssCode, FieldElem, Leg, LogicalTarget, Pattern,
    SynthOptions,
};

const BUDGET_PARAMS: Duration = Duration::from_secs(1);
const BUDGET_AXIOMS: Duration = Duration::from_secs(1);
const BUDGET_CSS: Duration = Duration::from_secs(5);
const BUDGET_CCZ: Duration = Duration::from_secs(60);
const BUDGET_STATE: Duration = Duration::from_secs(30);
const BUDGET_DEPTH: Duration = Duration::from_secs(10);
const BUDGET_DISTANCE: Duration = Duration::from_secs(30);

const STATE_SAMPLES: usize = 10_000;
const STATE_SEED: u64 = 20_240_917;
const MUTATIONS: usize = 200;
const MUTATION_SEED: u64 = 7;
const MIN_DETECTION_RATE: f64 = 0.99;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn r4() -> CssCode {
    build_css(&Curve::hermitian(4, 18, None).unwrap()).unwrap()
}

fn gammas(css: &CssCode) -> [FieldElem; 2] {
    [FieldElem::ONE, css.field.omega()]
}

fn triples(k: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..k).flat_map(move |a| (0..k).flat_map(move |b| (0..k).map(move |c| (a, b, c))))
}

fn criterion_1_parameter_bounds() -> Outcome {
    let r8 = family_bounds(8);
    // 1/4 - 3/14 - 1/56 = (14 - 12 - 1)/56
    ensure(r8.rate_lb == Rational::new(1, 56), || {
        format!("rate {}", r8.rate_lb)
    })?;
    ensure(r8.rel_dist_lb == Rational::new(1, 56), || {
        format!("rel dist {}", r8.rel_dist_lb)
    })?;
    let tower = TowerParams {
        r: 8,
        i: 1,
        deg_a: 8,
        deg_b: 1,
        exp_t: 0,
        exp_r: 0,
        exp_s: 0,
    };
    let rep = tower_calculator(&tower).map_err(|e| e.to_string())?;
    ensure(rep.inequalities.ineq1 && rep.inequalities.ineq2, || {
        format!("{:?}", rep.inequalities)
    })?;
    ensure(rep.k == 1 && rep.big_n == 56, || {
        format!("N={} k={}", rep.big_n, rep.k)
    })?;
    let row = ParamsRow::tower(&rep).to_csv();
    ensure(row == "8,i=1,56,1,55,1/56,1/56,true,true,true", || {
        row.clone()
    })?;
    let r4 = family_bounds(4);
    ensure(!r4.good && r4.rel_dist_lb == Rational::new(-1, 3), || {
        format!("r=4 {}", r4.rel_dist_lb)
    })?;
    Ok(format!(
        "r=8 rate >= {} rel dist >= {}; tower ineqs {} < {} and {} > {}; r=4 rel dist {} flagged non-good",
        r8.rate_lb,
        r8.rel_dist_lb,
        rep.inequalities.ineq1_lhs,
        rep.inequalities.ineq1_rhs,
        rep.inequalities.ineq2_lhs,
        rep.inequalities.ineq2_rhs,
        r4.rel_dist_lb
    ))
}

fn criterion_2_backend_axioms() -> Outcome {
    let mut lines = Vec::new();
    for (name, curve) in [
        ("hermitian", Curve::hermitian(2, 2, None).unwrap()),
        ("toy", Curve::toy_r2()),
    ] {
        let report = curve.check_axioms();
        if let Some(c) = report.first_failure() {
            return Err(format!("{name}: {} failed: {}", c.name, c.detail));
        }
        let f = curve.field();
        let table = curve.table();
        let m = curve.basis().len();
        ensure(
            table.len() == 8 && table.fibers.iter().all(|x| x.len() == 2),
            || format!("{name}: fiber shape"),
        )?;
        // simple transitivity, by counting maps per ordered pair
        for fiber in &table.fibers {
            for &p in fiber {
                for &q in fiber {
                    let hits = curve
                        .automorphisms()
                        .iter()
                        .filter(|a| a.perm[p] == q)
                        .count();
                    ensure(hits == 1, || format!("{name}: {hits} maps send {p} to {q}"))?;
                }
            }
        }
        // pullback identity at every place
        for aut in curve.automorphisms() {
            let inv = aut.inverse_perm();
            for b in 0..m {
                let mut e = vec![FieldElem::ZERO; m];
                e[b] = FieldElem::ONE;
                let pulled = curve.pullback(&e, aut).map_err(|x| x.to_string())?;
                for p in &table.places {
                    let lhs = evaluate_combination(f, curve.basis(), &pulled, p);
                    let rhs = evaluate_combination(f, curve.basis(), &e, &table.places[inv[p.id]]);
                    ensure(lhs == rhs, || {
                        format!("{name}: pullback differs at {}", p.id)
                    })?;
                }
            }
        }
        // u-weighted two- and four-fold sums over all ordered tuples
        let eval: Vec<Vec<FieldElem>> = (0..m)
            .map(|b| curve.evaluate_combination(&unit(m, b)))
            .collect();
        let u = curve.u();
        let mut tuples = 0;
        for t in 0..m.pow(4) {
            let idx = [t % m, (t / m) % m, (t / m / m) % m, t / m / m / m];
            let four =
                f.sum((0..8).map(|p| idx.iter().fold(u[p], |acc, &b| f.mul(acc, eval[b][p]))));
            let two = f.sum((0..8).map(|p| f.mul(u[p], f.mul(eval[idx[0]][p], eval[idx[1]][p]))));
            ensure(four.is_zero() && two.is_zero(), || {
                format!("{name}: tuple {idx:?}")
            })?;
            tuples += 1;
        }
        lines.push(format!(
            "{name}: {} checks, {tuples} four-tuples",
            report.checks.len()
        ));
    }
    Ok(lines.join("; "))
}

fn unit(m: usize, b: usize) -> Vec<FieldElem> {
    let mut e = vec![FieldElem::ZERO; m];
    e[b] = FieldElem::ONE;
    e
}

fn criterion_3_css_construction() -> Outcome {
    let curve = Curve::hermitian(4, 18, None).unwrap();
    let f = curve.field();
    let css = build_css(&curve).map_err(|e| e.to_string())?;
    ensure((css.n(), css.k(), css.m()) == (60, 4, 13), || {
        format!("[[{}, {}]] m={}", css.n(), css.k(), css.m())
    })?;
    let code = EvalCode::from_curve(&curve).map_err(|e| e.to_string())?;
    let (gt, _) = to_partially_systematic(f, &code, 4).map_err(|e| e.to_string())?;
    for i in 0..13 {
        for j in 0..4 {
            let want = if i == j {
                FieldElem::ONE
            } else {
                FieldElem::ZERO
            };
            ensure(gt.get(i, j) == want, || {
                format!("systematic block at ({i}, {j})")
            })?;
        }
    }
    let assumption = check_assumption(&css);
    ensure(assumption.passed(), || assumption.summary())?;
    for j1 in 0..13 {
        for j2 in 0..13 {
            let sum = f.sum((0..60).map(|c| {
                f.mul(
                    css.partition.y[c],
                    f.mul(css.g_row(j1)[c], css.g_row(j2)[c]),
                )
            }));
            let want = if j1 == j2 && j1 < 4 {
                css.partition.x[j1]
            } else {
                FieldElem::ZERO
            };
            ensure(sum == want, || format!("row product ({j1}, {j2}) = {sum}"))?;
        }
    }
    Ok(format!(
        "[[60, 4]] with {} stabilizer rows; {}; 169 row products exact",
        css.g0.rows(),
        assumption.summary()
    ))
}

fn criterion_4_logical_ccz() -> Outcome {
    let css = r4();
    let mut checks = 0;
    for pattern in Pattern::ALL {
        for gamma in gammas(&css) {
            for (a, b, c) in triples(4) {
                let gl = synthesize(
                    &css,
                    pattern,
                    LogicalTarget { a, b, c, gamma },
                    SynthOptions::default(),
                )
                .map_err(|e| e.to_string())?;
                let cert = verify_logical_ccz(&css, &gl).map_err(|e| e.to_string())?;
                ensure(cert.passed() && cert.checked == 2197, || {
                    format!("{pattern} ({a},{b},{c}) {gamma}: {cert:?}")
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!(
        "{checks} tensors of 13^3 entries equal gamma e_A e_B e_C"
    ))
}

fn criterion_5_state_oracle() -> Outcome {
    let toy = build_css(&Curve::toy_r2()).map_err(|e| e.to_string())?;
    let mut toy_checks = 0;
    for pattern in Pattern::ALL {
        for gamma in toy.field.nonzero_elements() {
            for (a, b, c) in triples(2) {
                let gl = synthesize(
                    &toy,
                    pattern,
                    LogicalTarget { a, b, c, gamma },
                    SynthOptions::default(),
                )
                .map_err(|e| e.to_string())?;
                let cert = verify_state_oracle(&toy, &gl, StateOptions::default())
                    .map_err(|e| e.to_string())?;
                ensure(cert.passed() && cert.mode == Mode::Exhaustive, || {
                    format!("toy {pattern}: {cert:?}")
                })?;
                let tensor = verify_logical_ccz(&toy, &gl).map_err(|e| e.to_string())?;
                ensure(tensor.passed(), || format!("toy tensor {pattern}"))?;
                if pattern == Pattern::Intra {
                    let dense = verify_dense(&toy, &gl).map_err(|e| e.to_string())?;
                    ensure(dense.passed(), || format!("toy dense ({a},{b},{c})"))?;
                }
                toy_checks += cert.checked;
            }
        }
    }

    let css = r4();
    let opts = StateOptions {
        samples: STATE_SAMPLES,
        seed: STATE_SEED,
        ..StateOptions::default()
    };
    let target = LogicalTarget {
        a: 0,
        b: 1,
        c: 2,
        gamma: css.field.omega(),
    };
    for pattern in Pattern::ALL {
        let gl = synthesize(&css, pattern, target, SynthOptions::default())
            .map_err(|e| e.to_string())?;
        let state = verify_state_oracle(&css, &gl, opts).map_err(|e| e.to_string())?;
        let tensor = verify_logical_ccz(&css, &gl).map_err(|e| e.to_string())?;
        ensure(state.passed() && tensor.passed(), || {
            format!("r=4 {pattern}: {state:?}")
        })?;
        ensure(
            state.mode == Mode::Sampled && state.seed == Some(STATE_SEED),
            || "not sampled".into(),
        )?;
        // a broken list must fail both ways
        let mut bad = gl.clone();
        bad.gates[0].coeff = css.field.add(bad.gates[0].coeff, FieldElem::ONE);
        let bad_state = verify_state_oracle(&css, &bad, opts).map_err(|e| e.to_string())?;
        let bad_tensor = verify_logical_ccz(&css, &bad).map_err(|e| e.to_string())?;
        ensure(!bad_state.passed() && !bad_tensor.passed(), || {
            format!("r=4 {pattern}: verdicts disagree")
        })?;
    }
    Ok(format!(
        "toy: {toy_checks} exhaustive word tuples; r=4: {STATE_SAMPLES} samples x 3 patterns, seed {STATE_SEED}, agrees with tensor"
    ))
}

fn criterion_6_depth() -> Outcome {
    let css = r4();
    let mut max_depth = HashMap::new();
    for pattern in Pattern::ALL {
        for gamma in gammas(&css) {
            for (a, b, c) in triples(4) {
                let target = LogicalTarget { a, b, c, gamma };
                let gl = synthesize(&css, pattern, target, SynthOptions::default())
                    .map_err(|e| e.to_string())?;
                let s = greedy_schedule(&gl);
                ensure(validate_schedule(&gl, &s).passed(), || {
                    format!("{pattern} ({a},{b},{c}) invalid")
                })?;
                let ok = match pattern {
                    Pattern::ThreeBlock => s.depth == 1,
                    Pattern::TwoBlock => s.depth <= 3,
                    Pattern::Intra => s.depth <= 7,
                };
                ensure(ok, || format!("{pattern} ({a},{b},{c}) depth {}", s.depth))?;
                let e = max_depth.entry(pattern).or_insert(0);
                *e = s.depth.max(*e);

                if pattern == Pattern::Intra {
                    let full = synthesize(&css, pattern, target, SynthOptions { keep_zero: true })
                        .map_err(|e| e.to_string())?;
                    let mut count: HashMap<Leg, usize> = HashMap::new();
                    for g in &full.gates {
                        for q in g.qudits() {
                            *count.entry(q).or_default() += 1;
                        }
                    }
                    let want = expected_intra_multiplicity(&css, a, b, c);
                    let distinct = a != b && b != c && a != c;
                    ensure(!distinct || want == 3, || {
                        format!("({a},{b},{c}) maps coincide")
                    })?;
                    ensure(
                        count.len() == 60 && count.values().all(|&v| v == want),
                        || format!("({a},{b},{c}) multiplicity != {want}"),
                    )?;
                }
            }
        }
    }
    Ok(format!(
        "max depth intra {}, 112 {}, 123 {}; multiplicity 3 for all distinct triples",
        max_depth[&Pattern::Intra],
        max_depth[&Pattern::TwoBlock],
        max_depth[&Pattern::ThreeBlock]
    ))
}

fn criterion_7_distance_and_mutation() -> Outcome {
    let toy = Curve::toy_r2();
    let code = EvalCode::from_curve(&toy).map_err(|e| e.to_string())?;
    let d =
        min_distance_bruteforce(toy.field(), &code.gen_full, None).map_err(|e| e.to_string())?;
    let designed = toy.num_places() - toy.spec().s as usize;
    ensure(d >= designed, || format!("d = {d} < {designed}"))?;
    let rep = mutation_sweep(&r4(), MUTATIONS, MUTATION_SEED);
    ensure(rep.detection_rate >= MIN_DETECTION_RATE, || {
        format!(
            "detection {:.4} ({} undetected)",
            rep.detection_rate, rep.undetected
        )
    })?;
    Ok(format!(
        "toy d = {d} >= {designed}; mutations: {}/{} live detected ({} equivalent), rate {:.4}, seed {MUTATION_SEED}",
        rep.detected,
        rep.total - rep.equivalent,
        rep.equivalent,
        rep.detection_rate
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        (
            "parameter bounds",
            criterion_1_parameter_bounds,
            BUDGET_PARAMS,
        ),
        ("backend axioms", criterion_2_backend_axioms, BUDGET_AXIOMS),
        ("css construction", criterion_3_css_construction, BUDGET_CSS),
        ("logical ccz", criterion_4_logical_ccz, BUDGET_CCZ),
        ("state oracle", criterion_5_state_oracle, BUDGET_STATE),
        ("depth bounds", criterion_6_depth, BUDGET_DEPTH),
        (
            "distance and mutation",
            criterion_7_distance_and_mutation,
            BUDGET_DISTANCE,
        ),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (verdict, detail) = match outcome {
            Ok(d) if elapsed <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("over budget: {d}")),
            Err(e) => ("FAIL", e),
        };
        println!(
            "criterion {} [{name}]: {verdict} ({:.3}s of {}s) {detail}",
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if verdict == "FAIL" {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
