//! Seeded single-entry mutations of the synthesis inputs and outputs.
//!
//! Sites are drawn only where the synthesizer reads them into a retained gate:
//! y_k with g^A_k ≠ 0, x_A, an automorphism entry at an α index whose gate is
//! kept, or a retained gate coefficient. A mutant whose gate list is identical to
//! the original is reported as equivalent and left out of the detection rate.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::verify_logical_ccz;
use crate::css::CssCode;
use crate::field::{Field, FieldElem};
use crate::synth::{synthesize, GateList, LogicalTarget, Pattern, SynthOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    TwistY,
    TwistX,
    Coefficient,
    AutEntry,
}

impl MutationKind {
    pub const ALL: [MutationKind; 4] = [
        MutationKind::TwistY,
        MutationKind::TwistX,
        MutationKind::Coefficient,
        MutationKind::AutEntry,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationOutcome {
    Detected,
    Equivalent,
    Undetected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mutation {
    pub kind: MutationKind,
    pub pattern: Pattern,
    pub target: LogicalTarget,
    pub site: usize,
    pub old: String,
    pub new: String,
    pub outcome: MutationOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MutationReport {
    pub seed: u64,
    pub total: usize,
    pub detected: usize,
    pub equivalent: usize,
    pub undetected: usize,
    /// detected / (total − equivalent).
    pub detection_rate: f64,
    pub mutations: Vec<Mutation>,
}

fn other_nonzero(f: &Field, rng: &mut ChaCha8Rng, old: FieldElem) -> FieldElem {
    let choices: Vec<FieldElem> = f.nonzero_elements().filter(|&e| e != old).collect();
    *choices.choose(rng).expect("q > 2")
}

fn other_element(f: &Field, rng: &mut ChaCha8Rng, old: FieldElem) -> FieldElem {
    let choices: Vec<FieldElem> = f.elements().filter(|&e| e != old).collect();
    *choices.choose(rng).expect("q > 1")
}

fn mutate_once(css: &CssCode, rng: &mut ChaCha8Rng) -> Mutation {
    let f = &css.field;
    let k = css.k();
    let n = css.n();
    let pattern = *Pattern::ALL.choose(rng).unwrap();
    let gamma = if rng.gen_bool(0.5) {
        FieldElem::ONE
    } else {
        f.omega()
    };
    let target = LogicalTarget {
        a: rng.gen_range(0..k),
        b: rng.gen_range(0..k),
        c: rng.gen_range(0..k),
        gamma,
    };
    let opts = SynthOptions::default();
    let baseline = synthesize(css, pattern, target, opts).expect("indices in range");
    let live: Vec<usize> = (0..n)
        .filter(|&i| !css.g1.get(target.a, i).is_zero())
        .collect();
    let kind = *MutationKind::ALL.choose(rng).unwrap();
    let resynth = |m: &CssCode| -> GateList {
        synthesize(m, pattern, target, opts).expect("indices in range")
    };

    let (site, old, new, mutant) = match kind {
        MutationKind::TwistY => {
            let i = *live.choose(rng).unwrap();
            let mut m = css.clone();
            let old = m.partition.y[i];
            m.partition.y[i] = other_nonzero(f, rng, old);
            (
                i,
                old.to_string(),
                m.partition.y[i].to_string(),
                resynth(&m),
            )
        }
        MutationKind::TwistX => {
            let mut m = css.clone();
            let old = m.partition.x[target.a];
            m.partition.x[target.a] = other_nonzero(f, rng, old);
            (
                target.a,
                old.to_string(),
                m.partition.x[target.a].to_string(),
                resynth(&m),
            )
        }
        MutationKind::Coefficient => {
            let gi = rng.gen_range(0..baseline.gates.len());
            let mut gl = baseline.clone();
            let old = gl.gates[gi].coeff;
            gl.gates[gi].coeff = other_element(f, rng, old);
            (gi, old.to_string(), gl.gates[gi].coeff.to_string(), gl)
        }
        MutationKind::AutEntry => {
            let i = *live.choose(rng).unwrap();
            let to = if rng.gen_bool(0.5) {
                target.b
            } else {
                target.c
            };
            let mut m = css.clone();
            let old = m.aut_table[target.a][to][i];
            let choices: Vec<usize> = (0..n).filter(|&j| j != old).collect();
            let new = *choices.choose(rng).unwrap();
            m.aut_table[target.a][to][i] = new;
            (
                i,
                format!("[{}][{to}]={old}", target.a),
                format!("{new}"),
                resynth(&m),
            )
        }
    };

    let outcome = if mutant == baseline {
        MutationOutcome::Equivalent
    } else {
        match verify_logical_ccz(css, &mutant) {
            Ok(cert) if cert.passed() => MutationOutcome::Undetected,
            _ => MutationOutcome::Detected,
        }
    };
    Mutation {
        kind,
        pattern,
        target,
        site,
        old,
        new,
        outcome,
    }
}

/// Runs `count` independent single-entry mutations drawn from a generator seeded by `seed`.
pub fn mutation_sweep(css: &CssCode, count: usize, seed: u64) -> MutationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mutations: Vec<Mutation> = (0..count).map(|_| mutate_once(css, &mut rng)).collect();
    let tally = |o: MutationOutcome| mutations.iter().filter(|m| m.outcome == o).count();
    let detected = tally(MutationOutcome::Detected);
    let equivalent = tally(MutationOutcome::Equivalent);
    let undetected = tally(MutationOutcome::Undetected);
    let live = count - equivalent;
    MutationReport {
        seed,
        total: count,
        detected,
        equivalent,
        undetected,
        detection_rate: if live == 0 {
            1.0
        } else {
            detected as f64 / live as f64
        },
        mutations,
    }
}
