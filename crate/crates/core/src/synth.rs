//! Physical CCZ gate lists for a logical CCZ^γ[A, B, C].
//!
//! Every pattern uses the same coefficient vector γ·x_A⁻¹·y_k·g^A_k and the same
//! places (α_k, φ_AB(α_k), φ_AC(α_k)); only the block labels of the legs differ.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::css::CssCode;
use crate::error::SynthError;
use crate::field::FieldElem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    /// Blocks (1, 1, 1).
    Intra,
    /// Blocks (1, 1, 2).
    TwoBlock,
    /// Blocks (1, 2, 3).
    ThreeBlock,
}

impl Pattern {
    pub const ALL: [Pattern; 3] = [Pattern::Intra, Pattern::TwoBlock, Pattern::ThreeBlock];

    pub fn blocks(self) -> [u8; 3] {
        match self {
            Pattern::Intra => [1, 1, 1],
            Pattern::TwoBlock => [1, 1, 2],
            Pattern::ThreeBlock => [1, 2, 3],
        }
    }

    /// Number of code blocks involved.
    pub fn num_blocks(self) -> usize {
        self.blocks()[2] as usize
    }

    pub fn code(self) -> &'static str {
        match self {
            Pattern::Intra => "111",
            Pattern::TwoBlock => "112",
            Pattern::ThreeBlock => "123",
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Pattern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "111" | "intra" => Ok(Pattern::Intra),
            "112" | "two_block" => Ok(Pattern::TwoBlock),
            "123" | "three_block" => Ok(Pattern::ThreeBlock),
            other => Err(format!(
                "unknown pattern {other:?} (expected 111, 112 or 123)"
            )),
        }
    }
}

/// Logical gate CCZ^γ[A, B, C]; indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LogicalTarget {
    #[serde(rename = "A")]
    pub a: usize,
    #[serde(rename = "B")]
    pub b: usize,
    #[serde(rename = "C")]
    pub c: usize,
    pub gamma: FieldElem,
}

/// One gate leg: a code block (1-based) and a physical place id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(u8, usize)", into = "(u8, usize)")]
pub struct Leg {
    pub block: u8,
    pub place: usize,
}

impl From<(u8, usize)> for Leg {
    fn from((block, place): (u8, usize)) -> Self {
        Leg { block, place }
    }
}

impl From<Leg> for (u8, usize) {
    fn from(l: Leg) -> Self {
        (l.block, l.place)
    }
}

/// CCZ^coeff on three legs: phase (−1)^tr(coeff·η1·η2·η3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CczGate {
    pub coeff: FieldElem,
    pub legs: [Leg; 3],
}

impl CczGate {
    /// Distinct qudits touched (repeated legs count once).
    pub fn qudits(&self) -> Vec<Leg> {
        let mut q = self.legs.to_vec();
        q.sort();
        q.dedup();
        q
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateList {
    pub pattern: Pattern,
    pub target: LogicalTarget,
    pub gates: Vec<CczGate>,
}

impl GateList {
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SynthOptions {
    /// Keep gates whose coefficient is zero (identity gates).
    pub keep_zero: bool,
}

/// γ·x_A⁻¹·y_k·g^A_k for every α index k.
pub fn coefficients(
    css: &CssCode,
    a: usize,
    gamma: FieldElem,
) -> Result<Vec<FieldElem>, SynthError> {
    let k = css.k();
    if a >= k {
        return Err(SynthError::IndexOutOfRange { index: a, k });
    }
    let f = &css.field;
    let scale = f.mul(gamma, f.inv(css.partition.x[a])?);
    Ok(css
        .g1
        .row(a)
        .iter()
        .zip(&css.partition.y)
        .map(|(&g, &y)| f.mul(scale, f.mul(y, g)))
        .collect())
}

pub fn synthesize(
    css: &CssCode,
    pattern: Pattern,
    target: LogicalTarget,
    opts: SynthOptions,
) -> Result<GateList, SynthError> {
    let k = css.k();
    for index in [target.a, target.b, target.c] {
        if index >= k {
            return Err(SynthError::IndexOutOfRange { index, k });
        }
    }
    let coeffs = coefficients(css, target.a, target.gamma)?;
    let phi_ab = css.aut(target.a, target.b);
    let phi_ac = css.aut(target.a, target.c);
    let [b1, b2, b3] = pattern.blocks();
    let place = |i: usize| css.alpha_place_ids[i];
    let gates = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| opts.keep_zero || !c.is_zero())
        .map(|(i, &coeff)| CczGate {
            coeff,
            legs: [
                Leg {
                    block: b1,
                    place: place(i),
                },
                Leg {
                    block: b2,
                    place: place(phi_ab[i]),
                },
                Leg {
                    block: b3,
                    place: place(phi_ac[i]),
                },
            ],
        })
        .collect();
    Ok(GateList {
        pattern,
        target,
        gates,
    })
}

pub fn synth_intra(
    css: &CssCode,
    target: LogicalTarget,
    opts: SynthOptions,
) -> Result<GateList, SynthError> {
    synthesize(css, Pattern::Intra, target, opts)
}

pub fn synth_two_block(
    css: &CssCode,
    target: LogicalTarget,
    opts: SynthOptions,
) -> Result<GateList, SynthError> {
    synthesize(css, Pattern::TwoBlock, target, opts)
}

pub fn synth_three_block(
    css: &CssCode,
    target: LogicalTarget,
    opts: SynthOptions,
) -> Result<GateList, SynthError> {
    synthesize(css, Pattern::ThreeBlock, target, opts)
}

/// Number of distinct maps among {id, φ_AB, φ_AC}: the number of gates of the full
/// intra list that touch each qudit, counting a gate once even if it has repeated legs.
pub fn expected_intra_multiplicity(css: &CssCode, a: usize, b: usize, c: usize) -> usize {
    let id: Vec<usize> = (0..css.n()).collect();
    let mut maps = vec![id.as_slice(), css.aut(a, b), css.aut(a, c)];
    maps.sort();
    maps.dedup();
    maps.len()
}
