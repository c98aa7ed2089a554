//! Hermitian curve y^r + y = x^(r+1) over GF(r²).
//!
//! Fibers are the r points over each x. The maps y ↦ y + c, c ∈ GF(r), fix x
//! and the pole at infinity, so they permute each fiber and preserve every L(sP∞).

use std::collections::HashMap;

use super::{AutMap, CurveKind, CurveSpec, Monomial, Place, PlaceTable, RRBasis};
use crate::error::CurveError;
use crate::field::{Field, FieldElem};

/// All affine rational points, ordered by x then y; fiber id = rank of x in the
/// enumeration. The distinguished fiber defaults to x = 0.
pub fn build_places(field: &Field, spec: &CurveSpec) -> Result<PlaceTable, CurveError> {
    if spec.kind != CurveKind::ArtinSchreierHermitian {
        return Err(CurveError::InvalidData(
            "build_places enumerates the Hermitian curve only".into(),
        ));
    }
    spec.validate()?;
    let r = field.r() as u64;
    let mut places = Vec::with_capacity(spec.num_places() as usize);
    let mut fibers = Vec::with_capacity(field.q());
    for (fiber, x) in field.elements().enumerate() {
        let rhs = field.pow(x, r + 1);
        let mut members = Vec::new();
        for y in field.elements() {
            if field.add(field.pow(y, r), y) == rhs {
                let id = places.len();
                places.push(Place { id, x, y, fiber });
                members.push(id);
            }
        }
        fibers.push(members);
    }
    Ok(PlaceTable {
        places,
        fibers,
        distinguished_fiber: 0,
    })
}

/// Monomials x^i y^j with j < r and i·r + j·(r+1) ≤ s, ordered by weight then j.
pub fn rr_basis(spec: &CurveSpec) -> Result<RRBasis, CurveError> {
    let bound = 2 * spec.genus() as i64 - 2;
    if spec.s as i64 <= bound {
        return Err(CurveError::BelowRiemannRoch { s: spec.s, bound });
    }
    let r = spec.r();
    let mut monomials = Vec::new();
    for j in 0..r {
        let mut i = 0;
        while Monomial::new(i, j).weight(r) <= spec.s {
            monomials.push(Monomial::new(i, j));
            i += 1;
        }
    }
    monomials.sort_by_key(|m| (m.weight(r), m.j));
    Ok(RRBasis {
        monomials,
        s: spec.s,
    })
}

/// The r translations y ↦ y + c, in increasing order of c.
pub fn automorphisms(field: &Field, table: &PlaceTable) -> Vec<AutMap> {
    let index: HashMap<(FieldElem, FieldElem), usize> =
        table.places.iter().map(|p| ((p.x, p.y), p.id)).collect();
    field
        .subfield_elements()
        .into_iter()
        .map(|c| AutMap {
            c,
            perm: table
                .places
                .iter()
                .map(|p| index[&(p.x, field.add(p.y, c))])
                .collect(),
        })
        .collect()
}

/// f(x, y + c): since (y + c)^j = Σ_{l ⊆ j} c^(j−l) y^l over GF(2) (Lucas),
/// every term has weight at most that of x^i y^j.
pub(super) fn pullback_symbolic(
    field: &Field,
    basis: &RRBasis,
    coeffs: &[FieldElem],
    c: FieldElem,
) -> Result<Vec<FieldElem>, CurveError> {
    let mut out = vec![FieldElem::ZERO; basis.len()];
    for (&m, &a) in basis.monomials.iter().zip(coeffs) {
        if a.is_zero() {
            continue;
        }
        for l in 0..=m.j {
            if l & m.j != l {
                continue;
            }
            let term = field.mul(a, field.pow(c, (m.j - l) as u64));
            if term.is_zero() {
                continue;
            }
            let target = Monomial::new(m.i, l);
            let idx = basis
                .index_of(target)
                .ok_or_else(|| CurveError::NotInBasis(format!("x^{} y^{}", target.i, target.j)))?;
            out[idx] = field.add(out[idx], term);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{evaluate, Curve};

    /// Independent enumeration: all (x, y) ∈ GF(q)² on the curve, grouped by x.
    fn brute_points(field: &Field) -> Vec<Vec<(u16, u16)>> {
        let r = field.r() as u64;
        field
            .elements()
            .map(|x| {
                field
                    .elements()
                    .filter(|&y| {
                        // powers by repeated carry-less products, not the log tables
                        let pw = |a, e| (0..e).fold(FieldElem::ONE, |acc, _| field.clmul(acc, a));
                        pw(y, r).bits() ^ y.bits() == pw(x, r + 1).bits()
                    })
                    .map(|y| (x.bits(), y.bits()))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn r2_places_match_enumeration() {
        let spec = CurveSpec::hermitian(2, 2).unwrap();
        let field = Field::from_params(spec.field).unwrap();
        let table = build_places(&field, &spec).unwrap();
        assert_eq!(table.len(), 8);
        assert_eq!(table.fibers.len(), 4);
        let brute = brute_points(&field);
        for (fid, fiber) in table.fibers.iter().enumerate() {
            assert_eq!(fiber.len(), 2);
            let got: Vec<_> = fiber
                .iter()
                .map(|&p| (table.places[p].x.bits(), table.places[p].y.bits()))
                .collect();
            assert_eq!(got, brute[fid]);
        }
        // over x = 0: y in {0, 1}
        assert_eq!(brute[0], vec![(0, 0), (0, 1)]);
    }

    #[test]
    fn r4_places_match_enumeration() {
        let spec = CurveSpec::hermitian(4, 18).unwrap();
        let field = Field::from_params(spec.field).unwrap();
        let table = build_places(&field, &spec).unwrap();
        assert_eq!(table.len(), 64);
        assert_eq!(table.fibers.len(), 16);
        assert!(table.fibers.iter().all(|f| f.len() == 4));
        let total: usize = brute_points(&field).iter().map(Vec::len).sum();
        assert_eq!(total, 64);
    }

    /// Count monomials with i·r + j·(r+1) ≤ s, j < r, by a plain double loop.
    fn count_monomials(r: u32, s: u32) -> usize {
        let mut n = 0;
        for i in 0..=s {
            for j in 0..r {
                if i * r + j * (r + 1) <= s {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn basis_sizes() {
        let b = rr_basis(&CurveSpec::hermitian(2, 2).unwrap()).unwrap();
        assert_eq!(b.monomials, vec![Monomial::new(0, 0), Monomial::new(1, 0)]);
        let b = rr_basis(&CurveSpec::hermitian(4, 18).unwrap()).unwrap();
        assert_eq!(b.len(), 13);
        assert_eq!(count_monomials(4, 18), 13);
        // s = 2g - 1 gives dimension g
        for r in [2u32, 4, 8] {
            let g = r * (r - 1) / 2;
            let spec = CurveSpec {
                s: 2 * g - 1,
                ..CurveSpec::hermitian(r, 1).unwrap()
            };
            assert_eq!(rr_basis(&spec).unwrap().len(), g as usize);
            assert_eq!(count_monomials(r, 2 * g - 1), g as usize);
        }
        let low = CurveSpec {
            s: 10,
            ..CurveSpec::hermitian(4, 18).unwrap()
        };
        assert!(matches!(
            rr_basis(&low),
            Err(CurveError::BelowRiemannRoch { .. })
        ));
    }

    #[test]
    fn evaluation_examples() {
        let c = Curve::hermitian(2, 2, None).unwrap();
        let f = c.field();
        for p in &c.table().places {
            assert_eq!(evaluate(f, Monomial::ONE, p), FieldElem::ONE);
            assert_eq!(evaluate(f, Monomial::new(1, 0), p), p.x);
        }
    }

    #[test]
    fn frobenius_consistency() {
        let c = Curve::hermitian(4, 18, None).unwrap();
        let f = c.field();
        for p in &c.table().places {
            let conj = Place {
                x: f.square(p.x),
                y: f.square(p.y),
                ..*p
            };
            for &m in &c.basis().monomials {
                assert_eq!(f.square(evaluate(f, m, p)), evaluate(f, m, &conj));
            }
        }
    }

    #[test]
    fn r2_automorphisms() {
        let c = Curve::hermitian(2, 2, None).unwrap();
        let auts = c.automorphisms();
        assert_eq!(auts.len(), 2);
        assert!(auts[0].is_identity());
        // c = 1 swaps the two places of every fiber
        for fiber in &c.table().fibers {
            assert_eq!(auts[1].perm[fiber[0]], fiber[1]);
            assert_eq!(auts[1].perm[fiber[1]], fiber[0]);
        }
    }

    #[test]
    fn composition_matches_label_sum() {
        let c = Curve::hermitian(4, 18, None).unwrap();
        let f = c.field();
        for a in c.automorphisms() {
            for b in c.automorphisms() {
                let sum = f.add(a.c, b.c);
                let target = c.automorphisms().iter().find(|m| m.c == sum).unwrap();
                assert_eq!(a.compose_perm(b), target.perm);
            }
        }
    }

    #[test]
    fn pullback_of_y_is_y_plus_one() {
        // L(3P) at r = 2 contains y (weight 3); build the basis directly.
        let spec = CurveSpec {
            s: 3,
            ..CurveSpec::hermitian(2, 2).unwrap()
        };
        let field = Field::from_params(spec.field).unwrap();
        let basis = rr_basis(&spec).unwrap();
        assert_eq!(basis.monomials[2], Monomial::new(0, 1));
        let y = [FieldElem::ZERO, FieldElem::ZERO, FieldElem::ONE];
        let pulled = pullback_symbolic(&field, &basis, &y, FieldElem::ONE).unwrap();
        assert_eq!(
            pulled,
            vec![FieldElem::ONE, FieldElem::ZERO, FieldElem::ONE]
        );
        let one = [FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO];
        assert_eq!(
            pullback_symbolic(&field, &basis, &one, FieldElem::ONE).unwrap(),
            one.to_vec()
        );
    }

    #[test]
    fn symbolic_and_interpolated_pullbacks_agree() {
        let c = Curve::hermitian(4, 18, None).unwrap();
        let m = c.basis().len();
        for aut in c.automorphisms() {
            for b in 0..m {
                let mut e = vec![FieldElem::ZERO; m];
                e[b] = FieldElem::ONE;
                assert_eq!(
                    c.pullback(&e, aut).unwrap(),
                    c.pullback_by_interpolation(&e, aut).unwrap()
                );
            }
        }
    }

    #[test]
    fn twist_is_all_ones_and_annihilates_pairs() {
        for (r, s) in [(2, 2), (4, 18)] {
            let c = Curve::hermitian(r, s, None).unwrap();
            let f = c.field();
            assert!(c.u().iter().all(|&e| e == FieldElem::ONE));
            // brute force over all basis pairs
            let eval = c.evaluation_matrix();
            for a in 0..eval.rows() {
                for b in 0..eval.rows() {
                    let s = f.sum((0..eval.cols()).map(|p| f.mul(eval.get(a, p), eval.get(b, p))));
                    assert!(s.is_zero());
                }
            }
        }
    }
}
