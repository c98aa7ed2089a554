//! Exact arithmetic in GF(q) for q = r² = 2^(2t).
//!
//! Elements are stored as their polynomial-residue bit pattern. Multiplication
//! goes through exp/log tables built from a generator found at construction
//! time; [`Field::clmul`] is the table-free carry-less route kept for
//! cross-checking.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::FieldError;

/// Reduction polynomials shipped for 2t ∈ {2, 4, 6, 8}.
const DEFAULT_POLYNOMIALS: [(u32, u32); 4] = [
    (1, 0b111),         // x^2 + x + 1
    (2, 0b1_0011),      // x^4 + x + 1
    (3, 0b100_0011),    // x^6 + x + 1
    (4, 0b1_0001_1101), // x^8 + x^4 + x^3 + x^2 + 1
];

/// Largest supported `t` (q = 256).
pub const MAX_T: u32 = 4;

/// A field element: a `2t`-bit representative of a residue mod the reduction polynomial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(u16);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Wraps raw bits without a range check. Use [`Field::elem`] for checked construction.
    pub const fn from_bits_unchecked(bits: u16) -> Self {
        FieldElem(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Lowercase hex of the representative, zero-padded to `width` digits.
    pub fn to_hex(self, width: usize) -> String {
        format!("{:0width$x}", self.0, width = width)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

impl FromStr for FieldElem {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s.strip_prefix("0x").unwrap_or(s);
        u16::from_str_radix(digits, 16)
            .map(FieldElem)
            .map_err(|_| FieldError::BadHex(s.to_string()))
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serialized field description: `t` (so q = 2^(2t)) and the reduction polynomial bit-mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldParams {
    pub t: u32,
    pub reduction_polynomial_bits: u32,
}

impl FieldParams {
    /// The shipped polynomial for the given `t`.
    pub fn standard(t: u32) -> Result<Self, FieldError> {
        DEFAULT_POLYNOMIALS
            .iter()
            .find(|(tt, _)| *tt == t)
            .map(|&(t, poly)| FieldParams {
                t,
                reduction_polynomial_bits: poly,
            })
            .ok_or(FieldError::UnsupportedDegree(t))
    }

    /// Looks up `t` from r = 2^t.
    pub fn for_r(r: u32) -> Result<Self, FieldError> {
        if !r.is_power_of_two() || r < 2 {
            return Err(FieldError::RNotPowerOfTwo(r));
        }
        Self::standard(r.trailing_zeros())
    }
}

struct Tables {
    params: FieldParams,
    degree: u32,
    q: usize,
    r: usize,
    exp: Vec<u16>,
    log: Vec<u16>,
}

/// GF(q) with q = r², r = 2^t. Cheap to clone; tables are shared.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("q", &self.inner.q)
            .field(
                "poly",
                &format_args!("{:#x}", self.inner.params.reduction_polynomial_bits),
            )
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.inner.params == other.inner.params
    }
}

impl Eq for Field {}

impl Field {
    /// GF(2^(2t)) with the shipped reduction polynomial.
    pub fn new(t: u32) -> Result<Self, FieldError> {
        Self::from_params(FieldParams::standard(t)?)
    }

    /// The field with r = 2^t elements in its subfield.
    pub fn for_r(r: u32) -> Result<Self, FieldError> {
        Self::from_params(FieldParams::for_r(r)?)
    }

    pub fn from_params(params: FieldParams) -> Result<Self, FieldError> {
        let t = params.t;
        if t == 0 || t > MAX_T {
            return Err(FieldError::UnsupportedDegree(t));
        }
        let degree = 2 * t;
        let poly = params.reduction_polynomial_bits;
        if poly_degree(poly) != Some(degree) || !is_irreducible(poly) {
            return Err(FieldError::Reducible(poly));
        }
        let q = 1usize << degree;
        let r = 1usize << t;

        let clmul = |a: u16, b: u16| clmul_reduce(a, b, poly, degree);
        let order = q - 1;
        let generator = (2..q as u16)
            .find(|&g| multiplicative_order(g, clmul) == order)
            .expect("the multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; q];
        let mut acc = 1u16;
        for (i, e) in exp.iter_mut().take(order).enumerate() {
            *e = acc;
            log[acc as usize] = i as u16;
            acc = clmul(acc, generator);
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }

        Ok(Field {
            inner: Arc::new(Tables {
                params,
                degree,
                q,
                r,
                exp,
                log,
            }),
        })
    }

    pub fn params(&self) -> FieldParams {
        self.inner.params
    }

    /// Field size q.
    pub fn q(&self) -> usize {
        self.inner.q
    }

    /// Subfield size r = √q.
    pub fn r(&self) -> usize {
        self.inner.r
    }

    pub fn t(&self) -> u32 {
        self.inner.params.t
    }

    /// Extension degree 2t over GF(2).
    pub fn degree(&self) -> u32 {
        self.inner.degree
    }

    /// Hex digits needed for one element.
    pub fn hex_width(&self) -> usize {
        (self.inner.degree as usize).div_ceil(4)
    }

    pub fn contains(&self, a: FieldElem) -> bool {
        (a.0 as usize) < self.inner.q
    }

    pub fn elem(&self, bits: u16) -> Result<FieldElem, FieldError> {
        let a = FieldElem(bits);
        if self.contains(a) {
            Ok(a)
        } else {
            Err(FieldError::NotInField {
                bits,
                q: self.inner.q,
            })
        }
    }

    /// Residue class of the indeterminate (bits `0b10`): ω in GF(4), and outside GF(r)
    /// for every shipped polynomial.
    pub fn omega(&self) -> FieldElem {
        FieldElem(0b10)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let t = &*self.inner;
        let idx = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
        FieldElem(t.exp[idx])
    }

    /// Multiplies without tables (shift-and-xor, then reduction).
    pub fn clmul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(clmul_reduce(
            a.0,
            b.0,
            self.inner.params.reduction_polynomial_bits,
            self.inner.degree,
        ))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::InverseOfZero);
        }
        let t = &*self.inner;
        let order = t.q - 1;
        let l = t.log[a.0 as usize] as usize;
        Ok(FieldElem(t.exp[(order - l) % order]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.is_zero() {
            return FieldElem::ZERO;
        }
        let t = &*self.inner;
        let order = (t.q - 1) as u64;
        let l = t.log[a.0 as usize] as u64;
        FieldElem(t.exp[((l * (e % order)) % order) as usize])
    }

    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    pub fn try_add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn try_mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    fn check(&self, a: FieldElem) -> Result<(), FieldError> {
        self.elem(a.0).map(|_| ())
    }

    /// Absolute trace GF(q) → GF(2): a + a² + a⁴ + … + a^(2^(2t−1)).
    pub fn trace_to_f2(&self, a: FieldElem) -> u8 {
        let mut acc = FieldElem::ZERO;
        let mut cur = a;
        for _ in 0..self.inner.degree {
            acc = self.add(acc, cur);
            cur = self.square(cur);
        }
        debug_assert!(acc.0 <= 1, "trace must land in GF(2)");
        acc.0 as u8
    }

    /// Relative trace GF(q) → GF(r): a + a^r. Its kernel is exactly GF(r).
    pub fn trace_to_subfield(&self, a: FieldElem) -> FieldElem {
        self.add(a, self.pow(a, self.inner.r as u64))
    }

    pub fn is_in_subfield(&self, a: FieldElem) -> bool {
        self.pow(a, self.inner.r as u64) == a
    }

    /// All q elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (0..self.inner.q as u16).map(FieldElem)
    }

    /// The r elements of GF(r), in increasing bit order.
    pub fn subfield_elements(&self) -> Vec<FieldElem> {
        self.elements()
            .filter(|&a| self.is_in_subfield(a))
            .collect()
    }

    /// The q − 1 nonzero elements.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (1..self.inner.q as u16).map(FieldElem)
    }

    /// Σ terms, in field arithmetic.
    pub fn sum<I: IntoIterator<Item = FieldElem>>(&self, terms: I) -> FieldElem {
        terms
            .into_iter()
            .fold(FieldElem::ZERO, |acc, x| self.add(acc, x))
    }

    /// Fixed-width hex of a whole row.
    pub fn row_to_hex(&self, row: &[FieldElem]) -> String {
        let w = self.hex_width();
        row.iter().map(|e| e.to_hex(w)).collect()
    }

    pub fn row_from_hex(&self, s: &str) -> Result<Vec<FieldElem>, FieldError> {
        let w = self.hex_width();
        if !s.len().is_multiple_of(w) || !s.is_ascii() {
            return Err(FieldError::BadHex(s.to_string()));
        }
        (0..s.len())
            .step_by(w)
            .map(|i| {
                let e: FieldElem = s[i..i + w].parse()?;
                self.check(e)?;
                Ok(e)
            })
            .collect()
    }
}

fn poly_degree(p: u32) -> Option<u32> {
    (p != 0).then(|| 31 - p.leading_zeros())
}

/// Remainder of `a` modulo `b` in GF(2)[x].
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b).expect("nonzero divisor");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Brute-force factor search over all divisors of degree ≤ deg/2.
pub fn is_irreducible(p: u32) -> bool {
    let Some(deg) = poly_degree(p) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for cand in (1u32 << d)..(1u32 << (d + 1)) {
            if poly_rem(p, cand) == 0 {
                return false;
            }
        }
    }
    true
}

fn clmul_reduce(a: u16, b: u16, poly: u32, degree: u32) -> u16 {
    let mut prod = 0u32;
    for i in 0..16 {
        if (b >> i) & 1 == 1 {
            prod ^= (a as u32) << i;
        }
    }
    for bit in (degree..32).rev() {
        if (prod >> bit) & 1 == 1 {
            prod ^= poly << (bit - degree);
        }
    }
    prod as u16
}

fn multiplicative_order(g: u16, mul: impl Fn(u16, u16) -> u16) -> usize {
    let mut acc = g;
    let mut n = 1;
    while acc != 1 {
        acc = mul(acc, g);
        n += 1;
        if n > 1 << 16 {
            return 0;
        }
    }
    n
}
