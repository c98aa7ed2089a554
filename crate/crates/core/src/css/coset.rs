use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::CssCode;
use crate::field::FieldElem;

/// Default cap on exhaustive coset enumeration.
pub const COSET_BUDGET: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CosetMode {
    Exhaustive { size: u128 },
    Sampled { seed: u64, samples: usize },
}

/// Physical words Σ w_A g^A + g for g in span(G0).
pub struct CosetStream<'a> {
    css: &'a CssCode,
    base: Vec<FieldElem>,
    mode: CosetMode,
    next: u128,
    rng: ChaCha8Rng,
}

impl CosetStream<'_> {
    pub fn mode(&self) -> CosetMode {
        self.mode
    }
}

/// Enumerates the coset of `w` exhaustively when q^(m−k) ≤ `budget`; otherwise
/// draws `samples` uniform stabilizer combinations from a generator seeded by `seed`.
pub fn coset_enumerator<'a>(
    css: &'a CssCode,
    w: &[FieldElem],
    budget: u128,
    samples: usize,
    seed: u64,
) -> CosetStream<'a> {
    let q = css.field.q() as u128;
    let size = q.checked_pow(css.g0.rows() as u32).unwrap_or(u128::MAX);
    let mode = if size <= budget {
        CosetMode::Exhaustive { size }
    } else {
        CosetMode::Sampled { seed, samples }
    };
    CosetStream {
        css,
        base: css.g1.combine_rows(&css.field, w),
        mode,
        next: 0,
        rng: ChaCha8Rng::seed_from_u64(seed),
    }
}

impl Iterator for CosetStream<'_> {
    type Item = Vec<FieldElem>;

    fn next(&mut self) -> Option<Self::Item> {
        let f = &self.css.field;
        let rows = self.css.g0.rows();
        let q = f.q() as u128;
        let h: Vec<FieldElem> = match self.mode {
            CosetMode::Exhaustive { size } => {
                if self.next >= size {
                    return None;
                }
                let mut idx = self.next;
                (0..rows)
                    .map(|_| {
                        let e = FieldElem::from_bits_unchecked((idx % q) as u16);
                        idx /= q;
                        e
                    })
                    .collect()
            }
            CosetMode::Sampled { samples, .. } => {
                if self.next >= samples as u128 {
                    return None;
                }
                (0..rows)
                    .map(|_| FieldElem::from_bits_unchecked(self.rng.gen_range(0..q as u16)))
                    .collect()
            }
        };
        self.next += 1;
        if rows == 0 {
            return Some(self.base.clone());
        }
        let stab = self.css.g0.combine_rows(f, &h);
        Some(
            self.base
                .iter()
                .zip(stab)
                .map(|(&a, b)| f.add(a, b))
                .collect(),
        )
    }
}
