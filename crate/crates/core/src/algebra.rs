//! Dense multivectors of the Euclidean Clifford algebras Cl(2,0) and Cl(3,0).
//!
//! Basis blades are stored in a fixed canonical order: grade first, then
//! lexicographic within a grade.
//!
//! ```text
//! n = 2:  1, e1, e2, e12
//! n = 3:  1, e1, e2, e3, e12, e13, e23, e123
//! ```
//!
//! The blade `e31` that is sometimes used for the third bivector is stored as
//! `e13` with the opposite sign: `e31 = -e13`.
//!
//! All products go through a sign/index table that is built at compile time
//! from the bitmask representation of the blades.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest blade count of a supported algebra (n = 3).
pub const MAX_BLADES: usize = 8;

const MASKS_2: [u8; 4] = [0b00, 0b01, 0b10, 0b11];
const MASKS_3: [u8; 8] = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];

const NAMES_2: [&str; 4] = ["1", "e1", "e2", "e12"];
const NAMES_3: [&str; 8] = ["1", "e1", "e2", "e3", "e12", "e13", "e23", "e123"];

struct ProductTable {
    index: [[u8; MAX_BLADES]; MAX_BLADES],
    sign: [[i8; MAX_BLADES]; MAX_BLADES],
}

/// Number of transpositions needed to bring `a * b` into canonical bit order.
const fn reorder_sign(a: u8, b: u8) -> i8 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

const fn build_table(masks: &[u8]) -> ProductTable {
    let count = masks.len();
    let mut index_of = [0u8; MAX_BLADES];
    let mut i = 0;
    while i < count {
        index_of[masks[i] as usize] = i as u8;
        i += 1;
    }
    let mut table = ProductTable {
        index: [[0; MAX_BLADES]; MAX_BLADES],
        sign: [[0; MAX_BLADES]; MAX_BLADES],
    };
    let mut i = 0;
    while i < count {
        let mut j = 0;
        while j < count {
            let (a, b) = (masks[i], masks[j]);
            table.index[i][j] = index_of[(a ^ b) as usize];
            // Euclidean signature: every generator squares to +1.
            table.sign[i][j] = reorder_sign(a, b);
            j += 1;
        }
        i += 1;
    }
    table
}

static TABLE_2: ProductTable = build_table(&MASKS_2);
static TABLE_3: ProductTable = build_table(&MASKS_3);

/// Dimension `n` of the generating vector space of Cl(n,0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct AlgebraDim(u8);

impl AlgebraDim {
    pub const TWO: AlgebraDim = AlgebraDim(2);
    pub const THREE: AlgebraDim = AlgebraDim(3);

    pub fn new(n: usize) -> Result<Self> {
        match n {
            2 | 3 => Ok(AlgebraDim(n as u8)),
            _ => Err(Error::UnsupportedDimension(n)),
        }
    }

    #[inline]
    pub fn n(self) -> usize {
        self.0 as usize
    }

    /// Number of basis blades, `2^n`.
    #[inline]
    pub fn blade_count(self) -> usize {
        1 << self.0
    }

    /// Whether the pseudoscalar commutes with every multivector (n = 3 mod 4).
    pub fn pseudoscalar_is_central(self) -> bool {
        self.0 % 4 == 3
    }

    /// Bitmask of each canonical blade; bit `k` set means generator `e_{k+1}` is present.
    pub fn blade_masks(self) -> &'static [u8] {
        match self.0 {
            2 => &MASKS_2,
            _ => &MASKS_3,
        }
    }

    pub fn blade_names(self) -> &'static [&'static str] {
        match self.0 {
            2 => &NAMES_2,
            _ => &NAMES_3,
        }
    }

    pub fn blade_grade(self, index: usize) -> usize {
        self.blade_masks()[index].count_ones() as usize
    }

    /// Canonical index of the blade with the given name, e.g. `"e12"`.
    /// `e31` is not accepted; use `-e13`.
    pub fn blade_index(self, name: &str) -> Option<usize> {
        self.blade_names().iter().position(|b| *b == name)
    }

    fn table(self) -> &'static ProductTable {
        match self.0 {
            2 => &TABLE_2,
            _ => &TABLE_3,
        }
    }

    /// Index and sign of the basis product `e_i e_j`.
    #[inline]
    pub fn blade_product(self, i: usize, j: usize) -> (usize, f64) {
        let t = self.table();
        (t.index[i][j] as usize, t.sign[i][j] as f64)
    }

    /// Human readable description of the blade order, embedded in file headers.
    pub fn blade_order_string(self) -> String {
        self.blade_names().join(",")
    }
}

impl TryFrom<usize> for AlgebraDim {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        AlgebraDim::new(n)
    }
}

impl From<AlgebraDim> for usize {
    fn from(d: AlgebraDim) -> usize {
        d.n()
    }
}

impl fmt::Display for AlgebraDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cl({},0)", self.0)
    }
}

/// An element of Cl(n,0) stored as `2^n` dense real coefficients.
///
/// Coefficients past `2^n` are always zero.
#[derive(Clone, Copy, PartialEq)]
pub struct Multivector {
    dim: AlgebraDim,
    coeffs: [f64; MAX_BLADES],
}

/// Serialized as the list of its `2^n` coefficients; the length fixes `n`.
impl Serialize for Multivector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Multivector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coeffs = Vec::<f64>::deserialize(deserializer)?;
        let dim = match coeffs.len() {
            4 => AlgebraDim::TWO,
            8 => AlgebraDim::THREE,
            k => return Err(serde::de::Error::custom(format!("{k} coefficients is not 4 or 8"))),
        };
        Multivector::from_coeffs(dim, &coeffs).map_err(serde::de::Error::custom)
    }
}

impl Multivector {
    pub fn zero(dim: AlgebraDim) -> Self {
        Multivector {
            dim,
            coeffs: [0.0; MAX_BLADES],
        }
    }

    pub fn scalar(dim: AlgebraDim, value: f64) -> Self {
        let mut m = Self::zero(dim);
        m.coeffs[0] = value;
        m
    }

    pub fn one(dim: AlgebraDim) -> Self {
        Self::scalar(dim, 1.0)
    }

    /// Unit basis blade at canonical `index`.
    pub fn basis(dim: AlgebraDim, index: usize) -> Self {
        assert!(index < dim.blade_count(), "blade index {index} out of range for {dim}");
        let mut m = Self::zero(dim);
        m.coeffs[index] = 1.0;
        m
    }

    /// Unit basis blade by name (`"1"`, `"e1"`, `"e23"`, ...).
    pub fn blade(dim: AlgebraDim, name: &str) -> Result<Self> {
        dim.blade_index(name)
            .map(|i| Self::basis(dim, i))
            .ok_or_else(|| Error::Parse(format!("unknown blade `{name}` for {dim}")))
    }

    pub fn from_coeffs(dim: AlgebraDim, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() != dim.blade_count() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients for {dim}, got {}",
                dim.blade_count(),
                coeffs.len()
            )));
        }
        let mut m = Self::zero(dim);
        m.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(m)
    }

    /// Grade-1 element `Σ v_k e_k`. Components beyond `n` must be absent.
    pub fn vector(dim: AlgebraDim, components: &[f64]) -> Self {
        assert!(components.len() <= dim.n());
        let mut m = Self::zero(dim);
        for (k, &c) in components.iter().enumerate() {
            m.coeffs[1 + k] = c;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> AlgebraDim {
        self.dim
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..self.dim.blade_count()]
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        let len = self.dim.blade_count();
        &mut self.coeffs[..len]
    }

    #[inline]
    pub fn coeff(&self, index: usize) -> f64 {
        self.coeffs[index]
    }

    #[inline]
    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// The grade-1 coefficients `(M_e1, ..., M_en)`.
    pub fn vector_part(&self) -> [f64; 3] {
        let mut v = [0.0; 3];
        v[..self.dim.n()].copy_from_slice(&self.coeffs[1..1 + self.dim.n()]);
        v
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs().iter().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    fn check_dim(&self, other: &Multivector) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim.n(),
                right: other.dim.n(),
            });
        }
        Ok(())
    }

    /// Geometric product `self * rhs`.
    pub fn geometric_product(&self, rhs: &Multivector) -> Result<Multivector> {
        self.check_dim(rhs)?;
        Ok(self.product_unchecked(rhs))
    }

    #[inline]
    fn product_unchecked(&self, rhs: &Multivector) -> Multivector {
        let dim = self.dim;
        let count = dim.blade_count();
        let table = dim.table();
        let mut out = [0.0; MAX_BLADES];
        for i in 0..count {
            let a = self.coeffs[i];
            if a == 0.0 {
                continue;
            }
            for j in 0..count {
                let k = table.index[i][j] as usize;
                out[k] += table.sign[i][j] as f64 * a * rhs.coeffs[j];
            }
        }
        Multivector { dim, coeffs: out }
    }

    /// Outer (wedge) product: keeps only blade pairs without shared generators.
    pub fn outer_product(&self, rhs: &Multivector) -> Result<Multivector> {
        self.check_dim(rhs)?;
        let dim = self.dim;
        let masks = dim.blade_masks();
        let mut out = Self::zero(dim);
        for i in 0..dim.blade_count() {
            for j in 0..dim.blade_count() {
                if masks[i] & masks[j] != 0 {
                    continue;
                }
                let (k, s) = dim.blade_product(i, j);
                out.coeffs[k] += s * self.coeffs[i] * rhs.coeffs[j];
            }
        }
        Ok(out)
    }

    /// Reverse: the grade-`k` part is multiplied by `(-1)^{k(k-1)/2}`.
    pub fn reverse(&self) -> Multivector {
        let mut out = *self;
        for i in 0..self.dim.blade_count() {
            let k = self.dim.blade_grade(i);
            if (k * (k.saturating_sub(1)) / 2) % 2 == 1 {
                out.coeffs[i] = -out.coeffs[i];
            }
        }
        out
    }

    /// Grade-`k` part `<M>_k`.
    pub fn grade_project(&self, k: usize) -> Result<Multivector> {
        if k > self.dim.n() {
            return Err(Error::GradeOutOfRange { grade: k, n: self.dim.n() });
        }
        Ok(self.grade_part(k))
    }

    pub(crate) fn grade_part(&self, k: usize) -> Multivector {
        let mut out = Self::zero(self.dim);
        for i in 0..self.dim.blade_count() {
            if self.dim.blade_grade(i) == k {
                out.coeffs[i] = self.coeffs[i];
            }
        }
        out
    }

    /// Keeps the grades for which `keep(grade)` is true.
    pub fn filter_grades(&self, keep: impl Fn(usize) -> bool) -> Multivector {
        let mut out = Self::zero(self.dim);
        for i in 0..self.dim.blade_count() {
            if keep(self.dim.blade_grade(i)) {
                out.coeffs[i] = self.coeffs[i];
            }
        }
        out
    }

    /// Splits into the even-grade and odd-grade parts.
    pub fn parity_split(&self) -> (Multivector, Multivector) {
        (self.even(), self.odd())
    }

    pub fn even(&self) -> Multivector {
        self.filter_grades(|k| k % 2 == 0)
    }

    pub fn odd(&self) -> Multivector {
        self.filter_grades(|k| k % 2 == 1)
    }

    /// Scalar product `M * Ñ = <M Ñ>_0`, which in Cl(n,0) equals `Σ_A M_A N_A`.
    pub fn scalar_product(&self, other: &Multivector) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .coeffs()
            .iter()
            .zip(other.coeffs())
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn modulus_squared(&self) -> f64 {
        self.coeffs().iter().map(|c| c * c).sum()
    }

    pub fn modulus(&self) -> f64 {
        self.modulus_squared().sqrt()
    }

    /// Unit pseudoscalar `i_n = e1 e2 ... en`.
    pub fn pseudoscalar(dim: AlgebraDim) -> Multivector {
        Self::basis(dim, dim.blade_count() - 1)
    }

    /// Inverse of the pseudoscalar; `i_n^2 = -1` gives `i_n^{-1} = -i_n`.
    pub fn pseudoscalar_inverse(dim: AlgebraDim) -> Multivector {
        -Self::pseudoscalar(dim)
    }

    /// Dual `B* = B i_n^{-1}`.
    pub fn dual(&self) -> Multivector {
        self.product_unchecked(&Self::pseudoscalar_inverse(self.dim))
    }

    /// `e^{i_n λ} = cos λ + i_n sin λ`.
    pub fn exp_pseudoscalar(dim: AlgebraDim, lambda: f64) -> Multivector {
        let (s, c) = lambda.sin_cos();
        let mut m = Self::scalar(dim, c);
        m.coeffs[dim.blade_count() - 1] = s;
        m
    }

    /// Inverse of a multivector with only scalar and vector parts:
    /// `(s + v)^{-1} = (s - v) / (s^2 - v^2)`.
    pub fn invert_grade01(&self) -> Result<Multivector> {
        let s = self.coeffs[0];
        let v = self.grade_part(1);
        let v2 = v.modulus_squared();
        let tol = 1e-12 * (s * s + v2);
        let rest = self.filter_grades(|k| k > 1).modulus_squared();
        if rest > tol {
            return Err(Error::UnsupportedGradeContent);
        }
        let den = s * s - v2;
        if den.abs() <= tol || !den.is_finite() {
            return Err(Error::NonInvertible);
        }
        Ok((Self::scalar(self.dim, s) - v) * (1.0 / den))
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector[{}](", self.dim)?;
        for (i, c) in self.coeffs().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {c}", self.dim.blade_names()[i])?;
        }
        write!(f, ")")
    }
}

/// Formats as e.g. `2 + 1*e1 - 0.5*e12`; this is also the [`FromStr`] syntax.
impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.dim.blade_names();
        let mut first = true;
        for (i, &c) in self.coeffs().iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let (sign, mag) = if c < 0.0 { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if i == 0 {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{}", names[i])?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Multivector {
    /// Parses a sum of terms such as `2 + e1 - 0.5*e12 + 3e23`. A term is a
    /// number, a blade name, `number*blade` or `numberblade`. A lowercase
    /// `e` followed by a blade name always starts the blade, so `3e12` is
    /// `3·e12`; write exponents as `3E12` or `3e+12`.
    pub fn parse(dim: AlgebraDim, text: &str) -> Result<Multivector> {
        let mut out = Multivector::zero(dim);
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Parse("empty multivector".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for i in 1..chars.len() {
            let c = chars[i];
            if (c == '+' || c == '-') && !is_exponent_sign(&chars, i) {
                terms.push(chars[start..i].iter().collect::<String>());
                start = i;
            }
        }
        terms.push(chars[start..].iter().collect::<String>());

        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1.0, rest),
                None => (1.0, term.strip_prefix('+').unwrap_or(&term)),
            };
            let bad = || Error::Parse(format!("cannot parse term `{term}`"));
            let (coef, blade) = if let Some((num, name)) = body.split_once('*') {
                (num.parse::<f64>().map_err(|_| bad())?, name)
            } else if body.starts_with('e') && body.len() > 1 {
                (1.0, body)
            } else if let Some((num, name)) = juxtaposed(dim, body) {
                (num.parse::<f64>().map_err(|_| bad())?, name)
            } else {
                (body.parse::<f64>().map_err(|_| bad())?, "1")
            };
            let index = dim.blade_index(blade).ok_or_else(bad)?;
            out.coeffs[index] += sign * coef;
        }
        Ok(out)
    }
}

/// Splits `3e12` into (`3`, `e12`) when the tail is a blade of `dim`.
fn juxtaposed(dim: AlgebraDim, body: &str) -> Option<(&str, &str)> {
    let p = body.rfind('e')?;
    let (num, name) = body.split_at(p);
    (p > 0 && dim.blade_index(name).is_some()).then_some((num, name))
}

fn is_exponent_sign(chars: &[char], i: usize) -> bool {
    i >= 2 && matches!(chars[i - 1], 'e' | 'E') && chars[i - 2].is_ascii_digit()
}

/// A multivector literal whose dimension is inferred: n = 2 when the text
/// parses there, n = 3 otherwise.
#[derive(Clone, Copy, Debug)]
pub struct ParsedMultivector(pub Multivector);

impl FromStr for ParsedMultivector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Multivector::parse(AlgebraDim::TWO, s)
            .or_else(|_| Multivector::parse(AlgebraDim::THREE, s))
            .map(ParsedMultivector)
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: Multivector) -> Multivector {
        self += rhs;
        self
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Multivector) {
        assert_eq!(self.dim, rhs.dim, "multivector dimension mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(mut self, rhs: Multivector) -> Multivector {
        self -= rhs;
        self
    }
}

impl SubAssign for Multivector {
    fn sub_assign(&mut self, rhs: Multivector) {
        assert_eq!(self.dim, rhs.dim, "multivector dimension mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(mut self) -> Multivector {
        for c in self.coeffs.iter_mut() {
            *c = -*c;
        }
        self
    }
}

/// Geometric product. Panics on a dimension mismatch; use
/// [`Multivector::geometric_product`] for a fallible version.
impl Mul for Multivector {
    type Output = Multivector;
    #[inline]
    fn mul(self, rhs: Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "multivector dimension mismatch");
        self.product_unchecked(&rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    #[inline]
    fn mul(mut self, rhs: f64) -> Multivector {
        for c in self.coeffs.iter_mut() {
            *c *= rhs;
        }
        self
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    #[inline]
    fn mul(self, rhs: Multivector) -> Multivector {
        rhs * self
    }
}

/// A simple k-blade: a single basis blade or an outer product of vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Blade {
    value: Multivector,
    grade: usize,
}

impl Blade {
    pub fn basis(dim: AlgebraDim, index: usize) -> Blade {
        Blade {
            value: Multivector::basis(dim, index),
            grade: dim.blade_grade(index),
        }
    }

    /// Outer product of the given vectors. Fails if any factor is not a vector.
    pub fn from_vectors(vectors: &[Multivector]) -> Result<Blade> {
        let first = vectors
            .first()
            .ok_or_else(|| Error::InvalidParameter("blade needs at least one vector".into()))?;
        let dim = first.dim();
        let mut value = Multivector::one(dim);
        for v in vectors {
            if !is_vector(v) {
                return Err(Error::NotAVector);
            }
            value = value.outer_product(v)?;
        }
        Ok(Blade {
            value,
            grade: vectors.len(),
        })
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn as_multivector(&self) -> &Multivector {
        &self.value
    }

    /// Whether the vector `x` lies in the subspace `{x : x ∧ B = 0}`.
    pub fn contains(&self, x: &Multivector) -> Result<bool> {
        subspace_contains(self, x)
    }
}

fn is_vector(m: &Multivector) -> bool {
    let rest = m.filter_grades(|k| k != 1).modulus();
    rest <= 1e-12 * m.modulus().max(f64::MIN_POSITIVE)
}

/// `x ∧ B = 0` within `1e-12 |x| |B|`.
pub fn subspace_contains(blade: &Blade, x: &Multivector) -> Result<bool> {
    if !is_vector(x) {
        return Err(Error::NotAVector);
    }
    let wedge = x.outer_product(&blade.value)?;
    let tol = 1e-12 * x.modulus() * blade.value.modulus();
    Ok(wedge.modulus() <= tol)
}
