//! Word-level phase oracle, independent of the trilinear reduction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{leg_columns, Certificate, Method, Mode, Verdict, Witness};
use crate::css::{CssCode, COSET_BUDGET};
use crate::error::VerifyError;
use crate::field::{Field, FieldElem};
use crate::synth::{GateList, Pattern};

/// Dense mode handles at most this many basis states per block.
pub const DENSE_LIMIT: u128 = 1 << 20;

const CHUNK: usize = 256;
/// Amplitude comparison tolerance for the dense simulation.
const DENSE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateOptions {
    /// Exhaustive when (q^k · q^(m−k))^blocks fits.
    pub budget: u128,
    pub samples: usize,
    pub seed: u64,
}

impl Default for StateOptions {
    fn default() -> Self {
        StateOptions {
            budget: COSET_BUDGET,
            samples: 10_000,
            seed: 0,
        }
    }
}

struct Oracle<'a> {
    css: &'a CssCode,
    gl: &'a GateList,
    cols: Vec<[usize; 3]>,
    block_of_leg: [usize; 3],
}

impl<'a> Oracle<'a> {
    fn new(css: &'a CssCode, gl: &'a GateList) -> Result<Self, VerifyError> {
        Ok(Oracle {
            css,
            gl,
            cols: leg_columns(css, gl)?,
            block_of_leg: gl.pattern.blocks().map(|b| b as usize - 1),
        })
    }

    fn field(&self) -> &Field {
        &self.css.field
    }

    /// XOR over gates of tr(coeff · η1 · η2 · η3) on per-block physical words.
    fn phase(&self, words: &[Vec<FieldElem>]) -> u8 {
        let f = self.field();
        let mut bit = 0;
        for (gate, cols) in self.gl.gates.iter().zip(&self.cols) {
            let mut v = gate.coeff;
            for (leg, &col) in gate.legs.iter().zip(cols) {
                v = f.mul(v, words[leg.block as usize - 1][col]);
            }
            bit ^= f.trace_to_f2(v);
        }
        bit
    }

    /// tr(γ · w_A · w'_B · w''_C) with the block assignment of the pattern.
    fn expected(&self, logical: &[Vec<FieldElem>]) -> u8 {
        let f = self.field();
        let t = self.gl.target;
        let [ba, bb, bc] = self.block_of_leg;
        let v = f.mul(
            t.gamma,
            f.mul(logical[ba][t.a], f.mul(logical[bb][t.b], logical[bc][t.c])),
        );
        f.trace_to_f2(v)
    }
}

fn digits(mut idx: u128, q: u128, len: usize) -> Vec<FieldElem> {
    (0..len)
        .map(|_| {
            let e = FieldElem::from_bits_unchecked((idx % q) as u16);
            idx /= q;
            e
        })
        .collect()
}

fn random_word(rng: &mut ChaCha8Rng, q: usize, len: usize) -> Vec<FieldElem> {
    (0..len)
        .map(|_| FieldElem::from_bits_unchecked(rng.gen_range(0..q as u16)))
        .collect()
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (chunk as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Number of (logical word, stabilizer word) tuples across the pattern's blocks,
/// or `None` on overflow. The state oracle is exhaustive when this fits the budget.
pub fn state_space_size(css: &CssCode, pattern: Pattern) -> Option<u128> {
    (css.field.q() as u128)
        .checked_pow((css.k() + css.g0.rows()) as u32)
        .and_then(|p| p.checked_pow(pattern.num_blocks() as u32))
}

/// Checks that the physical phase of every (sampled) code word tuple equals
/// tr(γ w_A w'_B w''_C) and is therefore constant over stabilizer cosets.
pub fn verify_state_oracle(
    css: &CssCode,
    gl: &GateList,
    opts: StateOptions,
) -> Result<Certificate, VerifyError> {
    let oracle = Oracle::new(css, gl)?;
    let q = css.field.q() as u128;
    let k = css.k();
    let h = css.g0.rows();
    let blocks = gl.pattern.num_blocks();
    let per_block = q.checked_pow((k + h) as u32);
    let total = state_space_size(css, gl.pattern);

    let (mode, checked, witness) = match total {
        Some(total) if total <= opts.budget => {
            let per_block = per_block.unwrap();
            let witness = (0..total as u64).into_par_iter().find_map_first(|idx| {
                let mut idx = idx as u128;
                let mut logical = Vec::with_capacity(blocks);
                let mut words = Vec::with_capacity(blocks);
                for _ in 0..blocks {
                    let local = idx % per_block;
                    idx /= per_block;
                    let all = digits(local, q, k + h);
                    let (w, stab) = all.split_at(k);
                    words.push(css.encode(w, stab));
                    logical.push(w.to_vec());
                }
                let phase = oracle.phase(&words);
                let expected = oracle.expected(&logical);
                (phase != expected).then(|| Witness::State {
                    words: logical,
                    phases: vec![phase],
                    expected,
                })
            });
            (Mode::Exhaustive, total as u64, witness)
        }
        _ => {
            let chunks = opts.samples.div_ceil(CHUNK);
            let qs = q as usize;
            let witness = (0..chunks).into_par_iter().find_map_first(|chunk| {
                let mut rng = chunk_rng(opts.seed, chunk);
                let count = CHUNK.min(opts.samples - chunk * CHUNK);
                for _ in 0..count {
                    let logical: Vec<Vec<FieldElem>> =
                        (0..blocks).map(|_| random_word(&mut rng, qs, k)).collect();
                    let expected = oracle.expected(&logical);
                    let mut phases = Vec::with_capacity(2);
                    for _ in 0..2 {
                        let words: Vec<Vec<FieldElem>> = logical
                            .iter()
                            .map(|w| css.encode(w, &random_word(&mut rng, qs, h)))
                            .collect();
                        phases.push(oracle.phase(&words));
                    }
                    if phases.iter().any(|&p| p != expected) {
                        return Some(Witness::State {
                            words: logical,
                            phases,
                            expected,
                        });
                    }
                }
                None
            });
            (Mode::Sampled, opts.samples as u64, witness)
        }
    };
    Ok(Certificate {
        instance: css.curve_ref.clone(),
        pattern: gl.pattern,
        target: gl.target,
        method: Method::State,
        mode,
        seed: (mode == Mode::Sampled).then_some(opts.seed),
        checked,
        result: if witness.is_none() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        witness,
    })
}

/// Applies an intra-block gate list to dense state vectors of every logical basis
/// state and compares with (−1)^tr(γ w_A w_B w_C) times the input.
pub fn verify_dense(css: &CssCode, gl: &GateList) -> Result<Certificate, VerifyError> {
    if gl.pattern != Pattern::Intra {
        return Err(VerifyError::DensePattern);
    }
    let q = css.field.q() as u128;
    let n = css.n();
    let dim = q
        .checked_pow(n as u32)
        .filter(|&d| d <= DENSE_LIMIT)
        .ok_or(VerifyError::DenseTooLarge { q: q as usize, n })?;
    let oracle = Oracle::new(css, gl)?;
    let k = css.k();
    let h = css.g0.rows();
    let index_of = |word: &[FieldElem]| -> usize {
        word.iter()
            .rev()
            .fold(0usize, |acc, e| acc * q as usize + e.bits() as usize)
    };
    // diagonal of the physical circuit, shared by every logical input
    let signs: Vec<f64> = (0..dim as u64)
        .into_par_iter()
        .map(|idx| {
            let word = digits(idx as u128, q, n);
            if oracle.phase(std::slice::from_ref(&word)) == 0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    let coset = q.pow(h as u32);
    let amp = 1.0 / (coset as f64).sqrt();
    let logical_count = q.pow(k as u32);
    let mut witness = None;
    for widx in 0..logical_count {
        let w = digits(widx, q, k);
        let mut psi = vec![0.0f64; dim as usize];
        for hidx in 0..coset {
            psi[index_of(&css.encode(&w, &digits(hidx, q, h)))] = amp;
        }
        let expected = oracle.expected(std::slice::from_ref(&w));
        let sign = if expected == 0 { 1.0 } else { -1.0 };
        let ok = psi
            .iter()
            .zip(&signs)
            .all(|(&a, &s)| (a * s - sign * a).abs() <= DENSE_TOL);
        if !ok {
            witness = Some(Witness::State {
                words: vec![w],
                phases: vec![1 - expected],
                expected,
            });
            break;
        }
    }
    Ok(Certificate {
        instance: css.curve_ref.clone(),
        pattern: gl.pattern,
        target: gl.target,
        method: Method::Dense,
        mode: Mode::Exhaustive,
        seed: None,
        checked: logical_count as u64,
        result: if witness.is_none() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        witness,
    })
}
