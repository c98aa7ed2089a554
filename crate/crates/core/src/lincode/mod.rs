//! Linear codes over GF(q): evaluation generators, the partially systematic
//! form, star products, u-weighted Gram matrices and brute-force distances.

mod matrix;

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::curve::{evaluate, Curve, CurveSpec, Monomial, PlaceTable, RRBasis};
use crate::error::CodeError;
use crate::field::{Field, FieldElem};

pub use matrix::Matrix;

/// Default enumeration budget for [`min_distance_bruteforce`]: q^m ≤ 2^24.
pub const DISTANCE_BUDGET: u128 = 1 << 24;

/// Evaluation code with columns ordered β first, then α.
#[derive(Clone, Debug)]
pub struct EvalCode {
    pub spec: CurveSpec,
    pub basis: RRBasis,
    /// m × N; row j holds basis function j evaluated at `column_places`.
    pub gen_full: Matrix,
    /// Twist vector permuted into column order.
    pub u: Vec<FieldElem>,
    /// Place id of each column.
    pub column_places: Vec<usize>,
}

impl EvalCode {
    pub fn from_curve(curve: &Curve) -> Result<Self, CodeError> {
        let cols = curve.table().column_order();
        let u = cols.iter().map(|&p| curve.u()[p]).collect();
        generator_from_basis(
            curve.field(),
            *curve.spec(),
            curve.table(),
            curve.basis(),
            u,
        )
    }

    pub fn m(&self) -> usize {
        self.gen_full.rows()
    }

    pub fn len(&self) -> usize {
        self.gen_full.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.gen_full.cols() == 0
    }
}

/// Builds the full generator in β-then-α column order. `u` must already be in
/// that column order.
pub fn generator_from_basis(
    field: &Field,
    spec: CurveSpec,
    table: &PlaceTable,
    basis: &RRBasis,
    u: Vec<FieldElem>,
) -> Result<EvalCode, CodeError> {
    let cols = table.column_order();
    if basis.len() > cols.len() {
        return Err(CodeError::Shape(format!(
            "{} basis functions exceed {} places",
            basis.len(),
            cols.len()
        )));
    }
    if u.len() != cols.len() {
        return Err(CodeError::Shape(format!(
            "twist vector has length {}, expected {}",
            u.len(),
            cols.len()
        )));
    }
    let mut gen = Matrix::zeros(basis.len(), cols.len());
    for (b, &mono) in basis.monomials.iter().enumerate() {
        for (c, &p) in cols.iter().enumerate() {
            gen.set(b, c, evaluate(field, mono, &table.places[p]));
        }
    }
    let rank = gen.rank(field);
    if rank != basis.len() {
        return Err(CodeError::RankDeficient {
            rank,
            expected: basis.len(),
        });
    }
    Ok(EvalCode {
        spec,
        basis: basis.clone(),
        gen_full: gen,
        u,
        column_places: cols,
    })
}

/// `(G̃, basis_change)` with `G̃ = basis_change · gen_full = (I_k G1; 0 G0)`.
pub fn to_partially_systematic(
    field: &Field,
    code: &EvalCode,
    k: usize,
) -> Result<(Matrix, Matrix), CodeError> {
    code.gen_full.partially_systematic(field, k)
}

/// Product of two basis combinations expressed in `target`, using y^r = y + x^(r+1)
/// to bring y-degrees below r.
pub fn star_product_membership(
    field: &Field,
    r: u32,
    basis: &RRBasis,
    f: &[FieldElem],
    g: &[FieldElem],
    target: &RRBasis,
) -> Result<Vec<FieldElem>, CodeError> {
    let mut poly: BTreeMap<Monomial, FieldElem> = BTreeMap::new();
    for (&mf, &cf) in basis.monomials.iter().zip(f) {
        if cf.is_zero() {
            continue;
        }
        for (&mg, &cg) in basis.monomials.iter().zip(g) {
            let c = field.mul(cf, cg);
            if !c.is_zero() {
                add_term(field, &mut poly, Monomial::new(mf.i + mg.i, mf.j + mg.j), c);
            }
        }
    }
    // Highest y-degrees first so that each reduction only creates lower ones.
    while let Some((&m, _)) = poly.iter().rev().find(|(m, _)| m.j >= r) {
        let c = poly.remove(&m).unwrap();
        let rest = m.j - r;
        add_term(field, &mut poly, Monomial::new(m.i, rest + 1), c);
        add_term(field, &mut poly, Monomial::new(m.i + r + 1, rest), c);
    }
    let mut out = vec![FieldElem::ZERO; target.len()];
    for (m, c) in poly {
        let idx = target
            .index_of(m)
            .ok_or(CodeError::NotInTarget { i: m.i, j: m.j })?;
        out[idx] = c;
    }
    Ok(out)
}

fn add_term(field: &Field, poly: &mut BTreeMap<Monomial, FieldElem>, m: Monomial, c: FieldElem) {
    let e = poly.entry(m).or_insert(FieldElem::ZERO);
    *e = field.add(*e, c);
    if e.is_zero() {
        poly.remove(&m);
    }
}

/// m × m matrix with entry (j1, j2) = Σ_c u_c G[j1][c] G[j2][c].
pub fn weighted_gram(field: &Field, gen: &Matrix, u: &[FieldElem]) -> Matrix {
    let m = gen.rows();
    let mut out = Matrix::zeros(m, m);
    for a in 0..m {
        let ua: Vec<FieldElem> = gen
            .row(a)
            .iter()
            .zip(u)
            .map(|(&g, &w)| field.mul(g, w))
            .collect();
        for b in 0..m {
            let s = field.sum(ua.iter().zip(gen.row(b)).map(|(&x, &y)| field.mul(x, y)));
            out.set(a, b, s);
        }
    }
    out
}

/// Generator of the Euclidean dual code (rows span the right kernel).
pub fn dual_generator(field: &Field, gen: &Matrix) -> Matrix {
    gen.null_space(field)
}

/// Minimum Hamming weight of a nonzero codeword, by enumerating every message
/// whose first nonzero entry is 1. `budget` caps q^m (default [`DISTANCE_BUDGET`]).
pub fn min_distance_bruteforce(
    field: &Field,
    gen: &Matrix,
    budget: Option<u128>,
) -> Result<usize, CodeError> {
    let q = field.q() as u128;
    let m = gen.rows();
    let size = q.checked_pow(m as u32).unwrap_or(u128::MAX);
    let budget = budget.unwrap_or(DISTANCE_BUDGET);
    if size > budget {
        return Err(CodeError::BudgetExceeded { size, budget });
    }
    if m == 0 {
        return Ok(0);
    }
    // Split on the position of the leading 1: the tail is free, the head is zero.
    let best = (0..m)
        .into_par_iter()
        .flat_map_iter(|lead| {
            let tail = m - lead - 1;
            let count = (q as u64).pow(tail as u32);
            (0..count).map(move |idx| (lead, idx))
        })
        .map(|(lead, mut idx)| {
            let mut msg = vec![FieldElem::ZERO; m];
            msg[lead] = FieldElem::ONE;
            for slot in msg.iter_mut().skip(lead + 1) {
                *slot = FieldElem::from_bits_unchecked((idx % q as u64) as u16);
                idx /= q as u64;
            }
            gen.combine_rows(field, &msg)
                .iter()
                .filter(|e| !e.is_zero())
                .count()
        })
        .min()
        .unwrap_or(0);
    Ok(best)
}
