//! The quantum code CSS(X, G0; Z, G⊥) built from the partially systematic generator.
//!
//! After row reduction the full generator reads (I_k G1; 0 G0) over β ∪ α. The
//! code keeps only the α columns, G = (G1; G0), together with the twist vector
//! split into x (β) and y (α) and, for every ordered pair of logical places, the
//! automorphism carrying β_A to β_B written as a permutation of α indices.

mod coset;
pub mod params;

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, CurveKind};
use crate::error::CssError;
use crate::field::{Field, FieldElem, FieldParams};
use crate::lincode::{to_partially_systematic, EvalCode, Matrix};

pub use coset::{coset_enumerator, CosetMode, CosetStream, COSET_BUDGET};
pub use params::{
    family_bounds, quantum_params, tower_calculator, DesignedBounds, FamilyBounds, ParamsRow,
    Rational, TowerParams, TowerReport, PARAMS_CSV_HEADER,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodePartition {
    pub k: usize,
    pub n: usize,
    /// Twist entries on β.
    pub x: Vec<FieldElem>,
    /// Twist entries on α.
    pub y: Vec<FieldElem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    pub field: Field,
    pub curve_ref: String,
    pub kind: CurveKind,
    pub r: u32,
    pub s: u32,
    pub distinguished_fiber: usize,
    /// k × n, the logical rows.
    pub g1: Matrix,
    /// (m − k) × n, the X-stabilizer rows.
    pub g0: Matrix,
    pub partition: CodePartition,
    pub beta_place_ids: Vec<usize>,
    pub alpha_place_ids: Vec<usize>,
    /// Fiber of each α column.
    pub alpha_fibers: Vec<usize>,
    /// `aut_table[A][B][i]` is the α index of φ_AB(α_i).
    pub aut_table: Vec<Vec<Vec<usize>>>,
    pub params: DesignedBounds,
    /// G0 is empty (m = k).
    pub degenerate: bool,
}

impl CssCode {
    pub fn k(&self) -> usize {
        self.partition.k
    }

    pub fn n(&self) -> usize {
        self.partition.n
    }

    pub fn m(&self) -> usize {
        self.g1.rows() + self.g0.rows()
    }

    /// Row j of G = (G1; G0).
    pub fn g_row(&self, j: usize) -> &[FieldElem] {
        let k = self.g1.rows();
        if j < k {
            self.g1.row(j)
        } else {
            self.g0.row(j - k)
        }
    }

    /// G = (G1; G0) as one matrix.
    pub fn g(&self) -> Matrix {
        self.g1
            .vstack(&self.g0)
            .expect("G1 and G0 share the column count")
    }

    pub fn aut(&self, a: usize, b: usize) -> &[usize] {
        &self.aut_table[a][b]
    }

    /// Encodes a logical word (length k) plus stabilizer coefficients (length m − k)
    /// into the physical word Σ w_A g^A + Σ h_j g0^j.
    pub fn encode(&self, w: &[FieldElem], h: &[FieldElem]) -> Vec<FieldElem> {
        let f = &self.field;
        let mut out = self.g1.combine_rows(f, w);
        if !h.is_empty() {
            for (o, v) in out.iter_mut().zip(self.g0.combine_rows(f, h)) {
                *o = f.add(*o, v);
            }
        }
        out
    }

    /// Σ_α y g^{j1} g^{j2} for all row pairs; must equal x_{j1}·[j1 = j2 < k].
    pub fn row_products(&self) -> Matrix {
        crate::lincode::weighted_gram(&self.field, &self.g(), &self.partition.y)
    }

    /// Checks the row-product identity, the twist and the automorphism table.
    pub fn validate(&self) -> Result<(), CssError> {
        let k = self.k();
        let n = self.n();
        if self.g1.rows() != k || self.g1.cols() != n || self.g0.cols() != n {
            return Err(CssError::Artifact(
                "generator shapes disagree with k and n".into(),
            ));
        }
        if self.partition.x.len() != k || self.partition.y.len() != n {
            return Err(CssError::Artifact(
                "twist split has the wrong length".into(),
            ));
        }
        if let Some(i) = self
            .partition
            .x
            .iter()
            .chain(&self.partition.y)
            .position(|e| e.is_zero())
        {
            return Err(CssError::ZeroTwist(i));
        }
        check_gram(self)?;
        if self.aut_table.len() != k || self.aut_table.iter().any(|row| row.len() != k) {
            return Err(CssError::Artifact("automorphism table is not k × k".into()));
        }
        for (a, row) in self.aut_table.iter().enumerate() {
            for (b, perm) in row.iter().enumerate() {
                if !is_permutation(perm, n) {
                    return Err(CssError::Artifact(format!(
                        "aut_table[{a}][{b}] is not a permutation"
                    )));
                }
                if perm
                    .iter()
                    .enumerate()
                    .any(|(i, &j)| self.alpha_fibers[i] != self.alpha_fibers[j])
                {
                    return Err(CssError::Artifact(format!(
                        "aut_table[{a}][{b}] leaves a fiber"
                    )));
                }
            }
        }
        let report = check_assumption(self);
        if !report.passed() {
            return Err(CssError::Assumption(report.summary()));
        }
        Ok(())
    }
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    perm.len() == n
        && perm
            .iter()
            .all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
}

fn check_gram(css: &CssCode) -> Result<(), CssError> {
    let k = css.k();
    let gram = css.row_products();
    for j1 in 0..gram.rows() {
        for j2 in 0..gram.cols() {
            let want = if j1 == j2 && j1 < k {
                css.partition.x[j1]
            } else {
                FieldElem::ZERO
            };
            if gram.get(j1, j2) != want {
                return Err(CssError::Gram { j1, j2 });
            }
        }
    }
    Ok(())
}

/// Builds the code from a validated curve.
pub fn build_css(curve: &Curve) -> Result<CssCode, CssError> {
    let f = curve.field().clone();
    let table = curve.table();
    let code = EvalCode::from_curve(curve)?;
    let beta = table.beta().to_vec();
    let alpha = table.alpha();
    let k = beta.len();
    let n = alpha.len();
    let m = code.m();
    let (gt, _) = to_partially_systematic(&f, &code, k)?;
    let alpha_cols: Vec<usize> = (k..k + n).collect();
    let g = gt.select_columns(&alpha_cols);
    let g1 = g.select_rows(0..k);
    let g0 = g.select_rows(k..m);
    let x = code.u[..k].to_vec();
    let y = code.u[k..].to_vec();

    let mut alpha_index = vec![usize::MAX; table.len()];
    for (i, &p) in alpha.iter().enumerate() {
        alpha_index[p] = i;
    }
    let mut aut_table = vec![vec![Vec::new(); k]; k];
    for (a, &pa) in beta.iter().enumerate() {
        for (b, &pb) in beta.iter().enumerate() {
            let mut hits = curve.automorphisms().iter().filter(|m| m.perm[pa] == pb);
            let phi = hits
                .next()
                .ok_or(CssError::NonTransitive { from: a, to: b })?;
            if hits.next().is_some() {
                return Err(CssError::NotSimplyTransitive { from: a, to: b });
            }
            aut_table[a][b] = alpha
                .iter()
                .map(|&p| {
                    let img = alpha_index[phi.perm[p]];
                    debug_assert_ne!(img, usize::MAX, "fiber-preserving maps keep α in α");
                    img
                })
                .collect();
        }
    }

    let spec = curve.spec();
    let css = CssCode {
        curve_ref: format!(
            "{}:r={}:s={}:fiber={}",
            kind_name(spec.kind),
            spec.r(),
            spec.s,
            table.distinguished_fiber
        ),
        kind: spec.kind,
        r: spec.r(),
        s: spec.s,
        distinguished_fiber: table.distinguished_fiber,
        params: quantum_params(spec, table.len(), k, m),
        degenerate: m == k,
        partition: CodePartition { k, n, x, y },
        beta_place_ids: beta,
        alpha_fibers: alpha.iter().map(|&p| table.places[p].fiber).collect(),
        alpha_place_ids: alpha,
        aut_table,
        g1,
        g0,
        field: f,
    };
    css.validate()?;
    Ok(css)
}

fn kind_name(kind: CurveKind) -> &'static str {
    match kind {
        CurveKind::ArtinSchreierHermitian => "artin_schreier_hermitian",
        CurveKind::ExhaustiveToy => "exhaustive_toy",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssumptionReport {
    /// The first k rows of the row-product matrix are (diag(x) | 0) with x nonzero,
    /// so each logical row has a functional separating it from all other rows.
    pub weighted: bool,
    pub rank_g1: usize,
    pub rank_g0: usize,
    pub rank_g: usize,
    /// Rows of G1 are linearly independent.
    pub g1_independent: bool,
    /// dim(span G0 ∩ span G1) = rank G1 + rank G0 − rank G.
    pub intersection_dim: usize,
}

impl AssumptionReport {
    pub fn passed(&self) -> bool {
        self.weighted && self.g1_independent && self.intersection_dim == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "weighted={} rank(G1)={} rank(G0)={} rank(G)={} dim(G0∩G1)={}",
            self.weighted, self.rank_g1, self.rank_g0, self.rank_g, self.intersection_dim
        )
    }
}

/// Independence of G1's rows and G0 ∩ G1 = 0, by the weighted row products and by rank.
pub fn check_assumption(css: &CssCode) -> AssumptionReport {
    let f = &css.field;
    let k = css.g1.rows();
    let gram = css.row_products();
    let weighted = k <= css.partition.x.len()
        && (0..k).all(|j1| {
            (0..gram.cols()).all(|j2| {
                let v = gram.get(j1, j2);
                if j1 == j2 {
                    !v.is_zero() && v == css.partition.x[j1]
                } else {
                    v.is_zero()
                }
            })
        });
    let rank_g1 = css.g1.rank(f);
    let rank_g0 = css.g0.rank(f);
    let rank_g = css.g().rank(f);
    AssumptionReport {
        weighted,
        rank_g1,
        rank_g0,
        rank_g,
        g1_independent: rank_g1 == k,
        intersection_dim: rank_g1 + rank_g0 - rank_g,
    }
}

/// Serialized form. Matrices are arrays of fixed-width hex row strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssArtifact {
    pub curve_ref: String,
    pub field: FieldParams,
    pub kind: CurveKind,
    pub r: u32,
    pub s: u32,
    pub distinguished_fiber: usize,
    pub k: usize,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "G1")]
    pub g1: Vec<String>,
    #[serde(rename = "G0")]
    pub g0: Vec<String>,
    pub x: Vec<FieldElem>,
    pub y: Vec<FieldElem>,
    pub beta_place_ids: Vec<usize>,
    pub alpha_place_ids: Vec<usize>,
    pub alpha_fibers: Vec<usize>,
    pub aut_table: Vec<Vec<Vec<usize>>>,
    pub params: DesignedBounds,
    pub degenerate: bool,
}

impl CssCode {
    pub fn to_artifact(&self) -> CssArtifact {
        let rows = |m: &Matrix| m.iter_rows().map(|r| self.field.row_to_hex(r)).collect();
        CssArtifact {
            curve_ref: self.curve_ref.clone(),
            field: self.field.params(),
            kind: self.kind,
            r: self.r,
            s: self.s,
            distinguished_fiber: self.distinguished_fiber,
            k: self.k(),
            n: self.n(),
            m: self.m(),
            g1: rows(&self.g1),
            g0: rows(&self.g0),
            x: self.partition.x.clone(),
            y: self.partition.y.clone(),
            beta_place_ids: self.beta_place_ids.clone(),
            alpha_place_ids: self.alpha_place_ids.clone(),
            alpha_fibers: self.alpha_fibers.clone(),
            aut_table: self.aut_table.clone(),
            params: self.params,
            degenerate: self.degenerate,
        }
    }

    /// Rebuilds and re-validates a serialized code.
    pub fn from_artifact(a: CssArtifact) -> Result<Self, CssError> {
        let field = Field::from_params(a.field)?;
        let parse = |rows: &[String]| -> Result<Matrix, CssError> {
            let parsed = rows
                .iter()
                .map(|s| field.row_from_hex(s))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Matrix::from_rows(a.n, parsed)?)
        };
        let g1 = parse(&a.g1)?;
        let g0 = parse(&a.g0)?;
        if g1.rows() != a.k || g1.rows() + g0.rows() != a.m {
            return Err(CssError::Artifact(
                "row counts disagree with k and m".into(),
            ));
        }
        if a.alpha_place_ids.len() != a.n
            || a.alpha_fibers.len() != a.n
            || a.beta_place_ids.len() != a.k
        {
            return Err(CssError::Artifact(
                "place lists disagree with k and n".into(),
            ));
        }
        if a.x.iter().chain(&a.y).any(|&e| !field.contains(e)) {
            return Err(CssError::Artifact(
                "twist vector has foreign entries".into(),
            ));
        }
        let css = CssCode {
            field,
            curve_ref: a.curve_ref,
            kind: a.kind,
            r: a.r,
            s: a.s,
            distinguished_fiber: a.distinguished_fiber,
            g1,
            g0,
            partition: CodePartition {
                k: a.k,
                n: a.n,
                x: a.x,
                y: a.y,
            },
            beta_place_ids: a.beta_place_ids,
            alpha_place_ids: a.alpha_place_ids,
            alpha_fibers: a.alpha_fibers,
            aut_table: a.aut_table,
            params: a.params,
            degenerate: a.degenerate,
        };
        css.validate()?;
        Ok(css)
    }
}
