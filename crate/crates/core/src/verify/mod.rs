//! Certificates that a gate list implements its logical target.
//!
//! Every gate acts on computational basis states by a phase (−1)^tr(c·η1·η2·η3).
//! Restricted to code states built from rows of G, the accumulated exponent is
//! tr of a trilinear form T in the row coefficients, so T over the m³ row triples
//! is a complete certificate. [`state`] recomputes phases word by word.

mod mutation;
mod state;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::css::CssCode;
use crate::error::VerifyError;
use crate::field::FieldElem;
use crate::synth::{GateList, LogicalTarget, Pattern};

pub use mutation::{mutation_sweep, Mutation, MutationKind, MutationOutcome, MutationReport};
pub use state::{state_space_size, verify_dense, verify_state_oracle, StateOptions, DENSE_LIMIT};

/// T(j1, j2, j3) = Σ_gates coeff · g^{j1}(leg1) · g^{j2}(leg2) · g^{j3}(leg3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseForm {
    pub m: usize,
    pub tensor: Vec<FieldElem>,
}

impl PhaseForm {
    pub fn get(&self, j1: usize, j2: usize, j3: usize) -> FieldElem {
        self.tensor[(j1 * self.m + j2) * self.m + j3]
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.iter().all(|e| e.is_zero())
    }
}

/// Maps each gate leg to its α column index.
pub(crate) fn leg_columns(css: &CssCode, gl: &GateList) -> Result<Vec<[usize; 3]>, VerifyError> {
    let index: HashMap<usize, usize> = css
        .alpha_place_ids
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i))
        .collect();
    gl.gates
        .iter()
        .enumerate()
        .map(|(gi, g)| {
            let mut cols = [0; 3];
            for (c, leg) in cols.iter_mut().zip(&g.legs) {
                if leg.block == 0 || leg.block as usize > gl.pattern.num_blocks() {
                    return Err(VerifyError::BadBlock {
                        gate: gi,
                        block: leg.block,
                    });
                }
                *c = *index.get(&leg.place).ok_or(VerifyError::UnknownPlace {
                    gate: gi,
                    place: leg.place,
                })?;
            }
            Ok(cols)
        })
        .collect()
}

pub fn build_phase_form(css: &CssCode, gl: &GateList) -> Result<PhaseForm, VerifyError> {
    let f = &css.field;
    let m = css.m();
    let cols = leg_columns(css, gl)?;
    let g = css.g();
    // column vectors of G at each leg
    let column = |c: usize| -> Vec<FieldElem> { (0..m).map(|j| g.get(j, c)).collect() };
    let gate_cols: Vec<(FieldElem, [Vec<FieldElem>; 3])> = gl
        .gates
        .iter()
        .zip(&cols)
        .map(|(gate, c)| (gate.coeff, [column(c[0]), column(c[1]), column(c[2])]))
        .collect();
    let tensor: Vec<FieldElem> = (0..m)
        .into_par_iter()
        .flat_map_iter(|j1| {
            let mut slab = vec![FieldElem::ZERO; m * m];
            for (coeff, [c1, c2, c3]) in &gate_cols {
                let a = f.mul(*coeff, c1[j1]);
                if a.is_zero() {
                    continue;
                }
                for j2 in 0..m {
                    let b = f.mul(a, c2[j2]);
                    if b.is_zero() {
                        continue;
                    }
                    for j3 in 0..m {
                        let e = &mut slab[j2 * m + j3];
                        *e = f.add(*e, f.mul(b, c3[j3]));
                    }
                }
            }
            slab
        })
        .collect();
    Ok(PhaseForm { m, tensor })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Trilinear form over all m³ row triples.
    Tensor,
    /// Phases recomputed on physical words.
    State,
    /// Dense state vector over all q^n basis states of one block.
    Dense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Tensor {
        j: [usize; 3],
        value: FieldElem,
        expected: FieldElem,
    },
    State {
        /// Logical words per block.
        words: Vec<Vec<FieldElem>>,
        /// Phase bits observed on the coset representatives tried.
        phases: Vec<u8>,
        expected: u8,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub instance: String,
    pub pattern: Pattern,
    pub target: LogicalTarget,
    pub method: Method,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// Entries or words checked.
    pub checked: u64,
    pub result: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.result == Verdict::Pass
    }
}

/// PASS iff T = γ·e_A ⊗ e_B ⊗ e_C exactly.
pub fn verify_logical_ccz(css: &CssCode, gl: &GateList) -> Result<Certificate, VerifyError> {
    let form = build_phase_form(css, gl)?;
    let t = gl.target;
    let m = form.m;
    let mut witness = None;
    'scan: for j1 in 0..m {
        for j2 in 0..m {
            for j3 in 0..m {
                let expected = if (j1, j2, j3) == (t.a, t.b, t.c) {
                    t.gamma
                } else {
                    FieldElem::ZERO
                };
                let value = form.get(j1, j2, j3);
                if value != expected {
                    witness = Some(Witness::Tensor {
                        j: [j1, j2, j3],
                        value,
                        expected,
                    });
                    break 'scan;
                }
            }
        }
    }
    Ok(Certificate {
        instance: css.curve_ref.clone(),
        pattern: gl.pattern,
        target: t,
        method: Method::Tensor,
        mode: Mode::Exhaustive,
        seed: None,
        checked: (m * m * m) as u64,
        result: if witness.is_none() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        witness,
    })
}
