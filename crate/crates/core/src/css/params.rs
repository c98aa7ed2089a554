//! Exact parameter bounds: designed distances of a built instance, the tower
//! calculator, and the closed-form family bounds.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::curve::CurveSpec;
use crate::error::ParamsError;

pub type Rational = Ratio<i128>;

/// Serializes a [`Rational`] as `"p/q"` (or `"p"` when integral).
pub mod ratio_str {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<Rational>().map_err(D::Error::custom)
    }
}

/// 1 / (r(r−1)).
pub fn family_rate(r: u32) -> Rational {
    let r = r as i128;
    Rational::new(1, r * (r - 1))
}

/// 1/4 − 3/(2(r−1)) − 1/(r(r−1)).
pub fn family_relative_distance(r: u32) -> Rational {
    let r = r as i128;
    Rational::new(1, 4) - Rational::new(3, 2 * (r - 1)) - Rational::new(1, r * (r - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyBounds {
    pub r: u32,
    #[serde(with = "ratio_str")]
    pub rate_lb: Rational,
    #[serde(with = "ratio_str")]
    pub rel_dist_lb: Rational,
    /// The relative-distance bound is strictly positive.
    pub good: bool,
}

pub fn family_bounds(r: u32) -> FamilyBounds {
    let rel = family_relative_distance(r);
    FamilyBounds {
        r,
        rate_lb: family_rate(r),
        rel_dist_lb: rel,
        good: rel > Rational::from_integer(0),
    }
}

/// Designed bounds of a concrete instance. Rates and relative distances are
/// normalized by N, matching the family bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignedBounds {
    pub big_n: i64,
    pub k: i64,
    pub n: i64,
    pub m: i64,
    pub genus: i64,
    pub s: i64,
    /// d(C) ≥ N − s.
    pub d_code: i64,
    /// d(C⊥) ≥ s − 2g + 2.
    pub d_dual: i64,
    /// min(d(C), d(C⊥)) − k, or the plain minimum when k = 0.
    pub d_lb: i64,
    #[serde(with = "ratio_str")]
    pub rate_lb: Rational,
    #[serde(with = "ratio_str")]
    pub rel_dist_lb: Rational,
    /// Whether d(C) ≥ d(C⊥) holds for the designed values.
    pub code_dominates_dual: bool,
}

/// Bounds for the one-point code of pole bound `s` on N places with k logical places.
pub fn quantum_params(spec: &CurveSpec, big_n: usize, k: usize, m: usize) -> DesignedBounds {
    let big_n = big_n as i64;
    let k = k as i64;
    let g = spec.genus() as i64;
    let s = spec.s as i64;
    let d_code = big_n - s;
    let d_dual = s - 2 * g + 2;
    designed(big_n, k, m as i64, g, s, d_code, d_dual)
}

fn designed(
    big_n: i64,
    k: i64,
    m: i64,
    genus: i64,
    s: i64,
    d_code: i64,
    d_dual: i64,
) -> DesignedBounds {
    let d_lb = d_code.min(d_dual) - k;
    DesignedBounds {
        big_n,
        k,
        n: big_n - k,
        m,
        genus,
        s,
        d_code,
        d_dual,
        d_lb,
        rate_lb: Rational::new(k as i128, big_n as i128),
        rel_dist_lb: Rational::new(d_lb as i128, big_n as i128),
        code_dominates_dual: d_code >= d_dual,
    }
}

/// Tower-level inputs; the exponents t(i), r(i), s(i) are supplied by the user.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerParams {
    pub r: u32,
    pub i: u32,
    pub deg_a: u64,
    pub deg_b: u64,
    pub exp_t: u32,
    pub exp_r: u32,
    pub exp_s: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityReport {
    /// a·deg A + b·deg B < N.
    pub ineq1: bool,
    /// (a+2)·deg A + (b+2)·deg B > 2N/(r−1) + N/(r(r−1)).
    pub ineq2: bool,
    pub ineq1_lhs: i128,
    pub ineq1_rhs: i128,
    pub ineq2_lhs: i128,
    pub ineq2_rhs: i128,
    /// Closed-form relative distance bound is positive (holds for r ≥ 8).
    pub family_positive: bool,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.ineq1 && self.ineq2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    pub params: TowerParams,
    pub big_n: i128,
    pub e0: i128,
    pub e_inf: i128,
    pub genus: i128,
    pub a_i: i128,
    pub b_i: i128,
    pub a: i128,
    pub b: i128,
    pub m: i128,
    pub k: i128,
    pub n: i128,
    pub d_code: i128,
    pub d_dual: i128,
    pub d_lb: i128,
    #[serde(with = "ratio_str")]
    pub rate: Rational,
    #[serde(with = "ratio_str")]
    pub rel_dist: Rational,
    pub code_dominates_dual: bool,
    pub family: FamilyBounds,
    pub inequalities: InequalityReport,
}

fn pow(base: i128, e: u32) -> Result<i128, ParamsError> {
    base.checked_pow(e).ok_or(ParamsError::Overflow)
}

fn mul(a: i128, b: i128) -> Result<i128, ParamsError> {
    a.checked_mul(b).ok_or(ParamsError::Overflow)
}

pub fn tower_calculator(tp: &TowerParams) -> Result<TowerReport, ParamsError> {
    if tp.r < 2 || !tp.r.is_power_of_two() {
        return Err(ParamsError::Invariant(format!(
            "r = {} is not a power of two >= 2",
            tp.r
        )));
    }
    if tp.i == 0 {
        return Err(ParamsError::Invariant("tower level i must be >= 1".into()));
    }
    let r = tp.r as i128;
    let (deg_a, deg_b) = (tp.deg_a as i128, tp.deg_b as i128);
    let big_n = mul(mul(r - 1, pow(r, tp.i)?)?, pow(2, tp.exp_t)?)?;
    let e0 = mul(pow(r, tp.i - 1)?, pow(2, tp.exp_r)?)?;
    let e_inf = mul(pow(r, tp.i)?, pow(2, tp.exp_s)?)?;
    let per = big_n / (r - 1);
    if mul(e0, deg_a)? != per || mul(e_inf, deg_b)? != per {
        return Err(ParamsError::Invariant(format!(
            "need e0·deg A = e∞·deg B = N/(r−1) = {per}, got {} and {}",
            mul(e0, deg_a)?,
            mul(e_inf, deg_b)?
        )));
    }
    let k = per / r;
    let genus = per + 1 - (deg_a + deg_b);
    let a_i = 2 * e0 - 2;
    let b_i = mul(r - 1, e_inf)? - 2;
    let a = a_i.div_euclid(4);
    let b = b_i.div_euclid(4);
    let m = (a + 1) * deg_a + (b + 1) * deg_b - per;
    let d_code = big_n - a * deg_a - b * deg_b;
    let d_dual = (a + 2) * deg_a + (b + 2) * deg_b - 2 * per;
    let d_lb = d_code.min(d_dual) - k;
    let family = family_bounds(tp.r);

    let ineq1_lhs = a * deg_a + b * deg_b;
    let ineq2_lhs = (a + 2) * deg_a + (b + 2) * deg_b;
    let ineq2_rhs = 2 * per + k;
    Ok(TowerReport {
        params: *tp,
        big_n,
        e0,
        e_inf,
        genus,
        a_i,
        b_i,
        a,
        b,
        m,
        k,
        n: big_n - k,
        d_code,
        d_dual,
        d_lb,
        rate: Rational::new(k, big_n),
        rel_dist: Rational::new(d_lb, big_n),
        code_dominates_dual: d_code >= d_dual,
        family,
        inequalities: InequalityReport {
            ineq1: ineq1_lhs < big_n,
            ineq2: ineq2_lhs > ineq2_rhs,
            ineq1_lhs,
            ineq1_rhs: big_n,
            ineq2_lhs,
            ineq2_rhs,
            family_positive: family.good,
        },
    })
}

/// One row of the `params` table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamsRow {
    pub r: u32,
    /// Tower level `i=..`, pole bound `s=..`, or `family`.
    pub level: String,
    pub big_n: Option<i128>,
    pub k: Option<i128>,
    pub n: Option<i128>,
    pub rate_lb: Rational,
    pub rel_dist_lb: Rational,
    pub ineq1: Option<bool>,
    pub ineq2: Option<bool>,
    pub good: bool,
}

pub const PARAMS_CSV_HEADER: &str = "r,level,N,k,n,rate_lb,rel_dist_lb,ineq1,ineq2,good";

impl ParamsRow {
    /// Closed-form family bounds for `r`, with no instance attached.
    pub fn family(r: u32) -> Self {
        let f = family_bounds(r);
        ParamsRow {
            r,
            level: "family".into(),
            big_n: None,
            k: None,
            n: None,
            rate_lb: f.rate_lb,
            rel_dist_lb: f.rel_dist_lb,
            ineq1: None,
            ineq2: None,
            good: f.good,
        }
    }

    /// A tower instance: family bounds alongside the instance's inequality certificates.
    pub fn tower(rep: &TowerReport) -> Self {
        ParamsRow {
            r: rep.params.r,
            level: format!("i={}", rep.params.i),
            big_n: Some(rep.big_n),
            k: Some(rep.k),
            n: Some(rep.n),
            rate_lb: rep.family.rate_lb,
            rel_dist_lb: rep.family.rel_dist_lb,
            ineq1: Some(rep.inequalities.ineq1),
            ineq2: Some(rep.inequalities.ineq2),
            good: rep.family.good,
        }
    }

    /// A Hermitian instance: designed bounds; the inequalities are the pole-bound
    /// constraints 2g − 2 < s and 4s ≤ N + 2g − 2.
    pub fn hermitian(spec: &CurveSpec) -> Self {
        let r = spec.r();
        let big_n = spec.num_places() as usize;
        let g = spec.genus() as i64;
        let m = (spec.s as i64 + 1 - g).max(0) as usize;
        let b = quantum_params(spec, big_n, r as usize, m);
        ParamsRow {
            r,
            level: format!("s={}", spec.s),
            big_n: Some(b.big_n as i128),
            k: Some(b.k as i128),
            n: Some(b.n as i128),
            rate_lb: b.rate_lb,
            rel_dist_lb: b.rel_dist_lb,
            ineq1: Some(spec.s as i64 > 2 * g - 2),
            ineq2: Some(4 * spec.s as i64 <= spec.dual_degree()),
            good: b.rel_dist_lb > Rational::from_integer(0),
        }
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<i128>| v.map(|x| x.to_string()).unwrap_or_default();
        let optb = |v: Option<bool>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.r,
            self.level,
            opt(self.big_n),
            opt(self.k),
            opt(self.n),
            self.rate_lb,
            self.rel_dist_lb,
            optb(self.ineq1),
            optb(self.ineq2),
            self.good
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r8_level1() -> TowerParams {
        TowerParams {
            r: 8,
            i: 1,
            deg_a: 8,
            deg_b: 1,
            exp_t: 0,
            exp_r: 0,
            exp_s: 0,
        }
    }

    #[test]
    fn family_bounds_at_r8() {
        let f = family_bounds(8);
        assert_eq!(f.rate_lb, Rational::new(1, 56));
        assert_eq!(f.rel_dist_lb, Rational::new(1, 56));
        assert!(f.good);
        let f4 = family_bounds(4);
        assert_eq!(
            f4.rel_dist_lb,
            Rational::new(1, 4) - Rational::new(1, 2) - Rational::new(1, 12)
        );
        assert!(!f4.good);
    }

    #[test]
    fn r8_tower_instance() {
        let rep = tower_calculator(&r8_level1()).unwrap();
        assert_eq!((rep.big_n, rep.e0, rep.e_inf), (56, 1, 8));
        assert_eq!((rep.genus, rep.a, rep.b, rep.m, rep.k), (0, 0, 13, 14, 1));
        assert!(rep.inequalities.passed());
        assert_eq!(
            (rep.inequalities.ineq1_lhs, rep.inequalities.ineq2_lhs),
            (13, 31)
        );
        assert_eq!(rep.inequalities.ineq2_rhs, 17);
        assert_eq!((rep.d_code, rep.d_dual, rep.d_lb), (43, 15, 14));
        assert!(rep.code_dominates_dual);
        assert!(rep.rate >= rep.family.rate_lb);
        assert!(rep.rel_dist >= rep.family.rel_dist_lb);
    }

    #[test]
    fn tower_invariants_enforced() {
        let bad = TowerParams {
            deg_a: 7,
            ..r8_level1()
        };
        assert!(matches!(
            tower_calculator(&bad),
            Err(ParamsError::Invariant(_))
        ));
        let bad = TowerParams {
            r: 6,
            ..r8_level1()
        };
        assert!(tower_calculator(&bad).is_err());
        let bad = TowerParams {
            i: 0,
            ..r8_level1()
        };
        assert!(tower_calculator(&bad).is_err());
        let huge = TowerParams {
            exp_t: 200,
            ..r8_level1()
        };
        assert_eq!(tower_calculator(&huge), Err(ParamsError::Overflow));
    }

    #[test]
    fn hermitian_designed_bounds() {
        let spec = CurveSpec::hermitian(4, 18).unwrap();
        let b = quantum_params(&spec, 64, 4, 13);
        assert_eq!((b.d_code, b.d_dual, b.d_lb), (46, 8, 4));
        assert_eq!(b.rate_lb, Rational::new(1, 16));
        assert!(b.code_dominates_dual);
        let b0 = quantum_params(&spec, 64, 0, 13);
        assert_eq!(b0.d_lb, 8);
    }

    #[test]
    fn csv_rows() {
        assert_eq!(
            ParamsRow::family(4).to_csv(),
            "4,family,,,,1/12,-1/3,,,false"
        );
        let row = ParamsRow::tower(&tower_calculator(&r8_level1()).unwrap());
        assert_eq!(row.to_csv(), "8,i=1,56,1,55,1/56,1/56,true,true,true");
        let h = ParamsRow::hermitian(&CurveSpec::hermitian(4, 18).unwrap());
        assert_eq!(h.to_csv(), "4,s=18,64,4,60,1/16,1/16,true,true,true");
    }

    #[test]
    fn ratio_string_round_trip() {
        let f = family_bounds(8);
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"1/56\""));
        assert_eq!(serde_json::from_str::<FamilyBounds>(&json).unwrap(), f);
    }
}
