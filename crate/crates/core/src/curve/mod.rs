//! Geometric data consumed by the code construction.
//!
//! A [`Curve`] bundles rational places partitioned into fibers, a
//! Riemann–Roch monomial basis, the fiber automorphisms and a twist vector `u`.
//! Downstream modules rely only on the axioms checked by
//! [`Curve::check_axioms`]:
//!
//! * fibers of equal size r, each acted on simply transitively by the automorphisms;
//! * the automorphisms preserve the function space (pullbacks stay in the basis);
//! * `u` is all-nonzero and annihilates all two-fold and four-fold basis products.
//!
//! Two backends exist: the Hermitian curve y^r + y = x^(r+1) over GF(r²) with
//! one-point pole bound s, and a data-driven toy backend whose places, fibers and
//! permutations are supplied explicitly (see [`toy`]).

mod hermitian;
pub mod toy;

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::CurveError;
use crate::field::{Field, FieldElem, FieldParams};
use crate::lincode::Matrix;

pub use hermitian::{automorphisms, build_places, rr_basis};

/// Four-fold annihilation is checked exhaustively up to this many basis multisets,
/// otherwise on a seeded random sample.
const FOUR_FOLD_EXHAUSTIVE_LIMIT: usize = 50_000;
const FOUR_FOLD_SAMPLES: usize = 2_000;
const FOUR_FOLD_SEED: u64 = 0x004f_5552_464f_4c44;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    ArtinSchreierHermitian,
    ExhaustiveToy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub field: FieldParams,
    pub kind: CurveKind,
    /// Pole bound at the point at infinity.
    pub s: u32,
}

impl CurveSpec {
    /// Hermitian spec over GF(r²) with the shipped reduction polynomial.
    pub fn hermitian(r: u32, s: u32) -> Result<Self, CurveError> {
        Ok(CurveSpec {
            field: FieldParams::for_r(r)?,
            kind: CurveKind::ArtinSchreierHermitian,
            s,
        })
    }

    pub fn r(&self) -> u32 {
        1 << self.field.t
    }

    /// Genus r(r−1)/2 of the Hermitian curve.
    pub fn genus(&self) -> u32 {
        let r = self.r();
        r * (r - 1) / 2
    }

    /// Number of affine rational points, r³.
    pub fn num_places(&self) -> u32 {
        self.r().pow(3)
    }

    /// N + 2g − 2, the degree bound of the dual code's divisor.
    pub fn dual_degree(&self) -> i64 {
        self.num_places() as i64 + 2 * self.genus() as i64 - 2
    }

    /// Checks 2g − 2 < s and 4s ≤ N + 2g − 2 (Hermitian only).
    pub fn validate(&self) -> Result<(), CurveError> {
        if self.kind != CurveKind::ArtinSchreierHermitian {
            return Ok(());
        }
        let lower = 2 * self.genus() as i64 - 2;
        let upper = self.dual_degree();
        let s = self.s as i64;
        if s <= lower || 4 * s > upper {
            return Err(CurveError::PoleBoundOutOfRange {
                s: self.s,
                lower,
                upper,
            });
        }
        Ok(())
    }
}

/// A rational place with its affine coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Place {
    pub id: usize,
    pub x: FieldElem,
    pub y: FieldElem,
    pub fiber: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceTable {
    pub places: Vec<Place>,
    /// `fibers[f]` lists the place ids of fiber `f` in increasing order.
    pub fibers: Vec<Vec<usize>>,
    pub distinguished_fiber: usize,
}

impl PlaceTable {
    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    /// Logical places: the distinguished fiber, in place-id order.
    pub fn beta(&self) -> &[usize] {
        &self.fibers[self.distinguished_fiber]
    }

    /// Physical places: everything outside the distinguished fiber, in place-id order.
    pub fn alpha(&self) -> Vec<usize> {
        let d = self.distinguished_fiber;
        self.places
            .iter()
            .filter(|p| p.fiber != d)
            .map(|p| p.id)
            .collect()
    }

    /// Column order for generator matrices: β first, then α.
    pub fn column_order(&self) -> Vec<usize> {
        let mut cols = self.beta().to_vec();
        cols.extend(self.alpha());
        cols
    }

    pub fn with_distinguished_fiber(mut self, fiber: usize) -> Result<Self, CurveError> {
        if fiber >= self.fibers.len() {
            return Err(CurveError::NoSuchFiber(fiber));
        }
        self.distinguished_fiber = fiber;
        Ok(self)
    }
}

/// The monomial x^i y^j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { i: 0, j: 0 };

    pub fn new(i: u32, j: u32) -> Self {
        Monomial { i, j }
    }

    /// Pole order at infinity: i·r + j·(r+1).
    pub fn weight(self, r: u32) -> u32 {
        self.i * r + self.j * (r + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RRBasis {
    pub monomials: Vec<Monomial>,
    pub s: u32,
}

impl RRBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: Monomial) -> Option<usize> {
        self.monomials.iter().position(|&b| b == m)
    }
}

/// A fiber-preserving automorphism, as a permutation of place ids.
/// For the Hermitian backend it is the translation y ↦ y + c with c ∈ GF(r).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutMap {
    pub c: FieldElem,
    /// `perm[p]` is the id of φ(P_p).
    pub perm: Vec<usize>,
}

impl AutMap {
    pub fn apply(&self, place: usize) -> usize {
        self.perm[place]
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        inv
    }

    /// Permutation of `self ∘ other` (apply `other` first).
    pub fn compose_perm(&self, other: &AutMap) -> Vec<usize> {
        other.perm.iter().map(|&p| self.perm[p]).collect()
    }
}

/// x^i y^j at (x, y).
pub fn evaluate(field: &Field, m: Monomial, place: &Place) -> FieldElem {
    field.mul(
        field.pow(place.x, m.i as u64),
        field.pow(place.y, m.j as u64),
    )
}

/// Σ coeffs[b] · basis[b] at the place.
pub fn evaluate_combination(
    field: &Field,
    basis: &RRBasis,
    coeffs: &[FieldElem],
    place: &Place,
) -> FieldElem {
    field.sum(
        basis
            .monomials
            .iter()
            .zip(coeffs)
            .map(|(&m, &c)| field.mul(c, evaluate(field, m, place))),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    fn record(&mut self, name: &'static str, result: Result<String, String>) {
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(AxiomCheck {
            name,
            passed,
            detail,
        });
    }
}

/// Serialized curve artifact. Field elements are hex strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveData {
    pub field: FieldParams,
    pub kind: CurveKind,
    pub r: u32,
    pub s: u32,
    pub places: Vec<Place>,
    pub fibers: Vec<Vec<usize>>,
    pub distinguished_fiber: usize,
    pub u: Vec<FieldElem>,
    pub basis: Vec<Monomial>,
    pub automorphisms: Vec<AutMap>,
}

/// A validated backend instance.
#[derive(Clone, Debug)]
pub struct Curve {
    field: Field,
    spec: CurveSpec,
    table: PlaceTable,
    basis: RRBasis,
    automorphisms: Vec<AutMap>,
    u: Vec<FieldElem>,
}

impl Curve {
    /// Hermitian curve y^r + y = x^(r+1) over GF(r²) with pole bound `s`.
    /// `fiber` overrides the distinguished fiber (default: x = 0).
    pub fn hermitian(r: u32, s: u32, fiber: Option<usize>) -> Result<Self, CurveError> {
        let spec = CurveSpec::hermitian(r, s)?;
        spec.validate()?;
        let field = Field::from_params(spec.field)?;
        let mut table = build_places(&field, &spec)?;
        if let Some(f) = fiber {
            table = table.with_distinguished_fiber(f)?;
        }
        let basis = rr_basis(&spec)?;
        let automorphisms = automorphisms(&field, &table);
        let mut curve = Curve {
            field,
            spec,
            table,
            basis,
            automorphisms,
            u: Vec::new(),
        };
        curve.u = curve.dual_twist_vector()?;
        Ok(curve)
    }

    /// Rebuilds from serialized data and re-validates every axiom.
    pub fn from_data(data: CurveData) -> Result<Self, CurveError> {
        let field = Field::from_params(data.field)?;
        if data.r as usize != field.r() {
            return Err(CurveError::InvalidData(format!(
                "r = {} does not match the field (r = {})",
                data.r,
                field.r()
            )));
        }
        for p in &data.places {
            if !field.contains(p.x) || !field.contains(p.y) {
                return Err(CurveError::InvalidData(format!(
                    "place {} has foreign coordinates",
                    p.id
                )));
            }
        }
        if data.u.iter().any(|&e| !field.contains(e)) {
            return Err(CurveError::InvalidData(
                "twist vector has foreign entries".into(),
            ));
        }
        let spec = CurveSpec {
            field: data.field,
            kind: data.kind,
            s: data.s,
        };
        spec.validate()?;
        if data.distinguished_fiber >= data.fibers.len() {
            return Err(CurveError::NoSuchFiber(data.distinguished_fiber));
        }
        let curve = Curve {
            field,
            spec,
            table: PlaceTable {
                places: data.places,
                fibers: data.fibers,
                distinguished_fiber: data.distinguished_fiber,
            },
            basis: RRBasis {
                monomials: data.basis,
                s: data.s,
            },
            automorphisms: data.automorphisms,
            u: data.u,
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn to_data(&self) -> CurveData {
        CurveData {
            field: self.spec.field,
            kind: self.spec.kind,
            r: self.spec.r(),
            s: self.spec.s,
            places: self.table.places.clone(),
            fibers: self.table.fibers.clone(),
            distinguished_fiber: self.table.distinguished_fiber,
            u: self.u.clone(),
            basis: self.basis.monomials.clone(),
            automorphisms: self.automorphisms.clone(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn kind(&self) -> CurveKind {
        self.spec.kind
    }

    pub fn table(&self) -> &PlaceTable {
        &self.table
    }

    pub fn basis(&self) -> &RRBasis {
        &self.basis
    }

    pub fn automorphisms(&self) -> &[AutMap] {
        &self.automorphisms
    }

    /// Twist vector in place-id order.
    pub fn u(&self) -> &[FieldElem] {
        &self.u
    }

    pub fn r(&self) -> usize {
        self.field.r()
    }

    pub fn num_places(&self) -> usize {
        self.table.len()
    }

    /// m × N matrix; row b holds the evaluations of basis monomial b in place-id order.
    pub fn evaluation_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.basis.len(), self.table.len());
        for (b, &mono) in self.basis.monomials.iter().enumerate() {
            for p in &self.table.places {
                m.set(b, p.id, evaluate(&self.field, mono, p));
            }
        }
        m
    }

    pub fn evaluate_combination(&self, coeffs: &[FieldElem]) -> Vec<FieldElem> {
        self.table
            .places
            .iter()
            .map(|p| evaluate_combination(&self.field, &self.basis, coeffs, p))
            .collect()
    }

    /// Coefficients of f ∘ φ⁻¹ in the basis. The Hermitian backend substitutes
    /// y ↦ y + c symbolically; other backends interpolate from evaluations.
    pub fn pullback(
        &self,
        coeffs: &[FieldElem],
        aut: &AutMap,
    ) -> Result<Vec<FieldElem>, CurveError> {
        match self.spec.kind {
            CurveKind::ArtinSchreierHermitian => {
                hermitian::pullback_symbolic(&self.field, &self.basis, coeffs, aut.c)
            }
            CurveKind::ExhaustiveToy => self.pullback_by_interpolation(coeffs, aut),
        }
    }

    /// Pullback computed purely from evaluation vectors and a linear solve.
    pub fn pullback_by_interpolation(
        &self,
        coeffs: &[FieldElem],
        aut: &AutMap,
    ) -> Result<Vec<FieldElem>, CurveError> {
        let vals = self.evaluate_combination(coeffs);
        let mut target = vec![FieldElem::ZERO; vals.len()];
        for (p, &v) in vals.iter().enumerate() {
            target[aut.perm[p]] = v;
        }
        self.evaluation_matrix()
            .solve_left(&self.field, &target)
            .ok_or_else(|| CurveError::NotInBasis(format!("automorphism c = {}", aut.c)))
    }

    /// The twist vector: all-ones for the Hermitian backend (verified against every
    /// basis pair); for toy data, the supplied vector or one found by a kernel search.
    pub fn dual_twist_vector(&self) -> Result<Vec<FieldElem>, CurveError> {
        let n = self.table.len();
        if self.spec.kind == CurveKind::ArtinSchreierHermitian {
            let two_s = 2 * self.spec.s as i64;
            if two_s > self.spec.dual_degree() {
                return Err(CurveError::TwistOutOfRange {
                    two_s,
                    bound: self.spec.dual_degree(),
                });
            }
            let u = vec![FieldElem::ONE; n];
            return match check_two_fold(&self.field, &self.evaluation_matrix(), &u) {
                Ok(_) => Ok(u),
                Err(e) => Err(CurveError::axiom("two_fold_annihilation", e)),
            };
        }
        if !self.u.is_empty() {
            return Ok(self.u.clone());
        }
        find_twist_vector(&self.field, &self.evaluation_matrix())
    }

    /// Runs every backend axiom; never short-circuits.
    pub fn check_axioms(&self) -> AxiomReport {
        let mut report = AxiomReport::default();
        let f = &self.field;
        let r = self.r();
        let eval = self.evaluation_matrix();

        report.record("place_ids", self.check_place_ids());
        if self.spec.kind == CurveKind::ArtinSchreierHermitian {
            report.record("curve_equation", self.check_curve_equation());
            report.record("riemann_roch_dimension", self.check_rr_dimension());
        }
        report.record("fiber_partition", self.check_fibers(r));
        report.record("fiber_preservation", self.check_fiber_preservation());
        report.record("simply_transitive", self.check_simple_transitivity());
        report.record("group_law", self.check_group_law());
        report.record("pullback_identity", self.check_pullbacks());
        report.record(
            "evaluation_injective",
            match eval.rank(f) {
                m if m == self.basis.len() => Ok(format!("rank {m}")),
                m => Err(format!("rank {m} < {}", self.basis.len())),
            },
        );
        report.record(
            "twist_nonzero",
            if self.u.len() != self.table.len() {
                Err(format!(
                    "u has length {}, expected {}",
                    self.u.len(),
                    self.table.len()
                ))
            } else if let Some(p) = self.u.iter().position(|e| e.is_zero()) {
                Err(format!("u[{p}] = 0"))
            } else {
                Ok("all entries nonzero".into())
            },
        );
        if self.u.len() == self.table.len() {
            report.record("two_fold_annihilation", check_two_fold(f, &eval, &self.u));
            report.record("four_fold_annihilation", check_four_fold(f, &eval, &self.u));
        }
        report
    }

    /// Like [`Curve::check_axioms`] but fails on the first violated axiom.
    pub fn validate(&self) -> Result<AxiomReport, CurveError> {
        let report = self.check_axioms();
        if let Some(c) = report.first_failure() {
            return Err(CurveError::Axiom {
                axiom: c.name,
                detail: c.detail.clone(),
            });
        }
        Ok(report)
    }

    fn check_place_ids(&self) -> Result<String, String> {
        let mut seen = HashMap::new();
        for (i, p) in self.table.places.iter().enumerate() {
            if p.id != i {
                return Err(format!("place at position {i} has id {}", p.id));
            }
            if let Some(prev) = seen.insert((p.x, p.y), p.id) {
                return Err(format!("places {prev} and {} coincide", p.id));
            }
        }
        Ok(format!("{} distinct places", self.table.len()))
    }

    fn check_curve_equation(&self) -> Result<String, String> {
        let f = &self.field;
        let r = self.r() as u64;
        for p in &self.table.places {
            let lhs = f.add(f.pow(p.y, r), p.y);
            let rhs = f.pow(p.x, r + 1);
            if lhs != rhs {
                return Err(format!(
                    "place {} = ({}, {}) is not on the curve",
                    p.id, p.x, p.y
                ));
            }
        }
        if self.table.len() != self.spec.num_places() as usize {
            return Err(format!(
                "{} places, expected r^3 = {}",
                self.table.len(),
                self.spec.num_places()
            ));
        }
        Ok("all places satisfy y^r + y = x^(r+1)".into())
    }

    fn check_rr_dimension(&self) -> Result<String, String> {
        let expected = self.spec.s as i64 + 1 - self.spec.genus() as i64;
        let r = self.spec.r();
        for m in &self.basis.monomials {
            if m.j >= r || m.weight(r) > self.spec.s {
                return Err(format!("monomial x^{} y^{} outside L(sP)", m.i, m.j));
            }
        }
        if self.basis.len() as i64 != expected {
            return Err(format!(
                "basis size {}, expected s + 1 - g = {expected}",
                self.basis.len()
            ));
        }
        Ok(format!("dim = {expected}"))
    }

    fn check_fibers(&self, r: usize) -> Result<String, String> {
        let mut owner = vec![None; self.table.len()];
        for (fid, fiber) in self.table.fibers.iter().enumerate() {
            if fiber.len() != r {
                return Err(format!(
                    "fiber {fid} has {} places, expected {r}",
                    fiber.len()
                ));
            }
            for &p in fiber {
                let Some(place) = self.table.places.get(p) else {
                    return Err(format!("fiber {fid} lists unknown place {p}"));
                };
                if owner[p].replace(fid).is_some() {
                    return Err(format!("place {p} lies in two fibers"));
                }
                if place.fiber != fid {
                    return Err(format!(
                        "place {p} claims fiber {} but is listed in {fid}",
                        place.fiber
                    ));
                }
            }
        }
        if let Some(p) = owner.iter().position(Option::is_none) {
            return Err(format!("place {p} is in no fiber"));
        }
        if self.spec.kind == CurveKind::ArtinSchreierHermitian {
            for fiber in &self.table.fibers {
                let x = self.table.places[fiber[0]].x;
                if fiber.iter().any(|&p| self.table.places[p].x != x) {
                    return Err("fiber mixes x-coordinates".into());
                }
            }
        }
        Ok(format!("{} fibers of size {r}", self.table.fibers.len()))
    }

    fn check_fiber_preservation(&self) -> Result<String, String> {
        for aut in &self.automorphisms {
            if aut.perm.len() != self.table.len() {
                return Err(format!("automorphism c = {} has wrong length", aut.c));
            }
            let mut hit = vec![false; aut.perm.len()];
            for (p, &img) in aut.perm.iter().enumerate() {
                if img >= hit.len() || std::mem::replace(&mut hit[img], true) {
                    return Err(format!("automorphism c = {} is not a permutation", aut.c));
                }
                if self.table.places[p].fiber != self.table.places[img].fiber {
                    return Err(format!(
                        "automorphism c = {} moves place {p} out of its fiber",
                        aut.c
                    ));
                }
            }
            if self.spec.kind == CurveKind::ArtinSchreierHermitian {
                let f = &self.field;
                for p in &self.table.places {
                    let img = &self.table.places[aut.perm[p.id]];
                    if img.x != p.x || img.y != f.add(p.y, aut.c) {
                        return Err(format!("automorphism c = {} is not y -> y + c", aut.c));
                    }
                }
            }
        }
        Ok(format!("{} automorphisms", self.automorphisms.len()))
    }

    fn check_simple_transitivity(&self) -> Result<String, String> {
        if self.automorphisms.len() != self.r() {
            return Err(format!(
                "{} automorphisms, expected r = {}",
                self.automorphisms.len(),
                self.r()
            ));
        }
        for fiber in &self.table.fibers {
            for &a in fiber {
                for &b in fiber {
                    let count = self.automorphisms.iter().filter(|m| m.perm[a] == b).count();
                    if count != 1 {
                        return Err(format!("{count} automorphisms map place {a} to {b}"));
                    }
                }
            }
        }
        Ok("every ordered pair in a fiber is joined by exactly one automorphism".into())
    }

    fn check_group_law(&self) -> Result<String, String> {
        let f = &self.field;
        let by_label: HashMap<FieldElem, &AutMap> =
            self.automorphisms.iter().map(|a| (a.c, a)).collect();
        if by_label.len() != self.automorphisms.len() {
            return Err("duplicate automorphism labels".into());
        }
        match by_label.get(&FieldElem::ZERO) {
            Some(id) if id.is_identity() => {}
            _ => return Err("label 0 is not the identity".into()),
        }
        for a in &self.automorphisms {
            if !f.is_in_subfield(a.c) {
                return Err(format!("label {} is not in GF(r)", a.c));
            }
            for b in &self.automorphisms {
                let Some(sum) = by_label.get(&f.add(a.c, b.c)) else {
                    return Err(format!("label {} + {} missing", a.c, b.c));
                };
                if a.compose_perm(b) != sum.perm {
                    return Err(format!(
                        "maps {} and {} do not compose to {}",
                        a.c, b.c, sum.c
                    ));
                }
            }
        }
        Ok("labels form (GF(r), +)".into())
    }

    fn check_pullbacks(&self) -> Result<String, String> {
        let m = self.basis.len();
        let inv_cache: Vec<Vec<usize>> = self
            .automorphisms
            .iter()
            .map(AutMap::inverse_perm)
            .collect();
        for (aut, inv) in self.automorphisms.iter().zip(&inv_cache) {
            for b in 0..m {
                let mut e = vec![FieldElem::ZERO; m];
                e[b] = FieldElem::ONE;
                let pulled = self.pullback(&e, aut).map_err(|err| err.to_string())?;
                let lhs = self.evaluate_combination(&pulled);
                let rhs = self.evaluate_combination(&e);
                for p in 0..self.table.len() {
                    if lhs[p] != rhs[inv[p]] {
                        return Err(format!(
                            "pullback of basis {b} under c = {} disagrees at place {p}",
                            aut.c
                        ));
                    }
                }
            }
        }
        Ok("f o phi^-1 stays in the basis and matches evaluations".into())
    }
}

/// Σ_P u_P f_a(P) f_b(P) = 0 for every basis pair.
pub(crate) fn check_two_fold(f: &Field, eval: &Matrix, u: &[FieldElem]) -> Result<String, String> {
    let m = eval.rows();
    for a in 0..m {
        for b in a..m {
            let s =
                f.sum((0..eval.cols()).map(|p| f.mul(u[p], f.mul(eval.get(a, p), eval.get(b, p)))));
            if !s.is_zero() {
                return Err(format!("pair ({a}, {b}) gives {s}"));
            }
        }
    }
    Ok(format!("{} pairs", m * (m + 1) / 2))
}

/// Σ_P u_P f_a f_b f_c f_d(P) = 0 over basis multisets (exhaustive when small,
/// otherwise a seeded sample).
pub(crate) fn check_four_fold(f: &Field, eval: &Matrix, u: &[FieldElem]) -> Result<String, String> {
    let m = eval.rows();
    let n = eval.cols();
    let sum4 = |a: usize, b: usize, c: usize, d: usize| {
        f.sum((0..n).map(|p| {
            let ab = f.mul(eval.get(a, p), eval.get(b, p));
            let cd = f.mul(eval.get(c, p), eval.get(d, p));
            f.mul(u[p], f.mul(ab, cd))
        }))
    };
    let multisets = (m + 3) * (m + 2) * (m + 1) * m / 24;
    if multisets <= FOUR_FOLD_EXHAUSTIVE_LIMIT {
        for a in 0..m {
            for b in a..m {
                for c in b..m {
                    for d in c..m {
                        let s = sum4(a, b, c, d);
                        if !s.is_zero() {
                            return Err(format!("tuple ({a}, {b}, {c}, {d}) gives {s}"));
                        }
                    }
                }
            }
        }
        Ok(format!("{multisets} multisets (exhaustive)"))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(FOUR_FOLD_SEED);
        for _ in 0..FOUR_FOLD_SAMPLES {
            let t: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..m));
            let s = sum4(t[0], t[1], t[2], t[3]);
            if !s.is_zero() {
                return Err(format!("tuple {t:?} gives {s}"));
            }
        }
        Ok(format!(
            "{FOUR_FOLD_SAMPLES} sampled tuples, seed {FOUR_FOLD_SEED:#x}"
        ))
    }
}

/// Searches the solution space of the two-fold annihilation system for an
/// all-nonzero vector: all-ones first, then seeded random kernel combinations.
fn find_twist_vector(f: &Field, eval: &Matrix) -> Result<Vec<FieldElem>, CurveError> {
    let m = eval.rows();
    let n = eval.cols();
    let ones = vec![FieldElem::ONE; n];
    if check_two_fold(f, eval, &ones).is_ok() {
        return Ok(ones);
    }
    let mut system = Matrix::zeros(m * (m + 1) / 2, n);
    let mut row = 0;
    for a in 0..m {
        for b in a..m {
            for p in 0..n {
                system.set(row, p, f.mul(eval.get(a, p), eval.get(b, p)));
            }
            row += 1;
        }
    }
    let kernel = system.null_space(f);
    if kernel.rows() == 0 {
        return Err(CurveError::NoTwistVector(
            "annihilator space is trivial".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0074_7769_7374);
    for _ in 0..10_000 {
        let coeffs: Vec<FieldElem> = (0..kernel.rows())
            .map(|_| FieldElem::from_bits_unchecked(rng.gen_range(0..f.q() as u16)))
            .collect();
        let u = kernel.combine_rows(f, &coeffs);
        if u.iter().all(|e| !e.is_zero()) {
            return Ok(u);
        }
    }
    Err(CurveError::NoTwistVector(format!(
        "no all-nonzero vector among 10000 samples of a {}-dimensional annihilator space",
        kernel.rows()
    )))
}
