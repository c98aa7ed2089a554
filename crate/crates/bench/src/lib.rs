//! Shared fixtures for the pipeline benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use agccz_core::{
    build_css, synthesize, CssCode, Curve, Field, FieldElem, GateList, LogicalTarget, Pattern,
    SynthOptions,
};

/// The r = 4, s = 18 Hermitian code, [[60, 4]] over GF(16).
pub fn hermitian_r4() -> Curve {
    Curve::hermitian(4, 18, None).expect("r = 4, s = 18 is in range")
}

pub fn css_r4() -> CssCode {
    build_css(&hermitian_r4()).expect("r = 4 code builds")
}

pub fn css_toy() -> CssCode {
    build_css(&Curve::toy_r2()).expect("toy code builds")
}

/// A gate list with distinct logical indices and gamma = omega.
pub fn gate_list(css: &CssCode, pattern: Pattern) -> GateList {
    let target = LogicalTarget {
        a: 0,
        b: 1.min(css.k() - 1),
        c: 2.min(css.k() - 1),
        gamma: css.field.omega(),
    };
    synthesize(css, pattern, target, SynthOptions::default()).expect("indices in range")
}

/// Seeded field elements for arithmetic loops.
pub fn operands(field: &Field, len: usize) -> Vec<FieldElem> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..len)
        .map(|_| {
            field
                .elem(rng.gen_range(0..field.q() as u16))
                .expect("in range")
        })
        .collect()
}
