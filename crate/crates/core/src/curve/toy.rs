//! Data-driven backend for small exhaustive instances.
//!
//! Places, fibers, basis, automorphism permutations and (optionally) the twist
//! vector come from a [`CurveData`] value and are re-validated against every
//! backend axiom. The shipped preset reuses the eight GF(4) points of
//! y² + y = x³ with basis {1, x}, but pairs places by x ↦ x + 1 so that each
//! fiber carries two distinct x-values and the logical columns have full rank.

use std::path::Path;

use super::{AutMap, Curve, CurveData, CurveKind, Monomial, Place};
use crate::error::CurveError;
use crate::field::{Field, FieldElem, FieldParams};

/// (x, y) bit patterns of the preset places, in id order.
const R2_POINTS: [(u16, u16); 8] = [
    (0, 0),
    (0, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 2),
    (3, 3),
];
const R2_FIBERS: [[usize; 2]; 4] = [[0, 2], [1, 3], [4, 6], [5, 7]];

impl Curve {
    /// The r = 2, s = 2 toy instance: N = 8, m = 2, four fibers of size 2.
    pub fn toy_r2() -> Self {
        Self::from_data(toy_r2_data()).expect("shipped toy preset satisfies the backend axioms")
    }

    /// Loads toy data from JSON. A missing or empty `u` is solved for.
    pub fn toy_from_json(json: &str) -> Result<Self, CurveError> {
        let data: CurveData =
            serde_json::from_str(json).map_err(|e| CurveError::InvalidData(e.to_string()))?;
        Self::toy_from_data(data)
    }

    pub fn toy_from_file(path: &Path) -> Result<Self, CurveError> {
        let json = std::fs::read_to_string(path)
            .map_err(|e| CurveError::InvalidData(format!("{}: {e}", path.display())))?;
        Self::toy_from_json(&json)
    }

    pub fn toy_from_data(mut data: CurveData) -> Result<Self, CurveError> {
        if data.kind != CurveKind::ExhaustiveToy {
            return Err(CurveError::InvalidData(format!(
                "expected kind exhaustive_toy, got {:?}",
                data.kind
            )));
        }
        if data.u.is_empty() {
            // solve for u against the supplied places and basis, then validate everything
            let probe = Curve {
                field: Field::from_params(data.field)?,
                spec: super::CurveSpec {
                    field: data.field,
                    kind: data.kind,
                    s: data.s,
                },
                table: super::PlaceTable {
                    places: data.places.clone(),
                    fibers: data.fibers.clone(),
                    distinguished_fiber: data.distinguished_fiber,
                },
                basis: super::RRBasis {
                    monomials: data.basis.clone(),
                    s: data.s,
                },
                automorphisms: Vec::new(),
                u: Vec::new(),
            };
            data.u = probe.dual_twist_vector()?;
        }
        Self::from_data(data)
    }
}

pub fn toy_r2_data() -> CurveData {
    let field = FieldParams::standard(1).expect("GF(4) is shipped");
    let places: Vec<Place> = R2_POINTS
        .iter()
        .enumerate()
        .map(|(id, &(x, y))| Place {
            id,
            x: FieldElem::from_bits_unchecked(x),
            y: FieldElem::from_bits_unchecked(y),
            fiber: R2_FIBERS.iter().position(|f| f.contains(&id)).unwrap(),
        })
        .collect();
    let mut swap: Vec<usize> = (0..8).collect();
    for [a, b] in R2_FIBERS {
        swap[a] = b;
        swap[b] = a;
    }
    CurveData {
        field,
        kind: CurveKind::ExhaustiveToy,
        r: 2,
        s: 2,
        places,
        fibers: R2_FIBERS.iter().map(|f| f.to_vec()).collect(),
        distinguished_fiber: 0,
        u: vec![FieldElem::ONE; 8],
        basis: vec![Monomial::ONE, Monomial::new(1, 0)],
        automorphisms: vec![
            AutMap {
                c: FieldElem::ZERO,
                perm: (0..8).collect(),
            },
            AutMap {
                c: FieldElem::ONE,
                perm: swap,
            },
        ],
    }
}
