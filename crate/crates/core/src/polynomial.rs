//! Exact multilinear polynomials over the monomial basis `Π_{i∈S} x_i`.
//!
//! Monomials are keyed by a bitmask over the variables (bit `i - 1` for
//! `x_i`), so the same mask convention as truth-table indices applies: the
//! value of a polynomial at a cube point `x` is the sum of the coefficients
//! of every monomial whose mask is a subset of `x`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Largest arity accepted by interpolation.
pub const MAX_INTERPOLATION_ARITY: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearPolynomial {
    arity: usize,
    coeffs: BTreeMap<usize, Rational>,
}

/// In-place subset zeta transform: `v[S] ← Σ_{T⊆S} v[T]`.
pub fn subset_zeta<T: Clone + for<'a> std::ops::AddAssign<&'a T>>(v: &mut [T]) {
    let n = v.len().trailing_zeros();
    for i in 0..n {
        let bit = 1 << i;
        for s in 0..v.len() {
            if s & bit != 0 {
                let (lo, hi) = v.split_at_mut(s);
                hi[0] += &lo[s ^ bit];
            }
        }
    }
}

/// In-place subset Möbius transform: inverse of [`subset_zeta`].
pub fn subset_mobius<T: Clone + for<'a> std::ops::SubAssign<&'a T>>(v: &mut [T]) {
    let n = v.len().trailing_zeros();
    for i in 0..n {
        let bit = 1 << i;
        for s in 0..v.len() {
            if s & bit != 0 {
                let (lo, hi) = v.split_at_mut(s);
                hi[0] -= &lo[s ^ bit];
            }
        }
    }
}

/// In-place superset sums: `v[S] ← Σ_{T⊇S} v[T]`.
pub fn superset_zeta<T: Clone + for<'a> std::ops::AddAssign<&'a T>>(v: &mut [T]) {
    let n = v.len().trailing_zeros();
    for i in 0..n {
        let bit = 1 << i;
        for s in 0..v.len() {
            if s & bit == 0 {
                let (lo, hi) = v.split_at_mut(s + bit);
                lo[s] += &hi[0];
            }
        }
    }
}

impl MultilinearPolynomial {
    pub fn zero(arity: usize) -> Self {
        MultilinearPolynomial {
            arity,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(0, c);
        p
    }

    /// `c · Π_{i ∈ vars} x_i` with 1-based variables.
    pub fn monomial(arity: usize, vars: &[usize], c: Rational) -> Result<Self> {
        let mut mask = 0usize;
        for &v in vars {
            if v == 0 || v > arity {
                return Err(Error::InvalidArgument(format!(
                    "variable {v} out of range 1..={arity}"
                )));
            }
            mask |= 1 << (v - 1);
        }
        let mut p = Self::zero(arity);
        p.add_term(mask, c);
        Ok(p)
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut p = Self::zero(arity);
        for (mask, c) in terms {
            assert!(
                arity >= usize::BITS as usize || mask >> arity == 0,
                "mask outside arity"
            );
            p.add_term(mask, c);
        }
        p
    }

    pub fn add_term(&mut self, mask: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(mask).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&mask);
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn coeff(&self, mask: usize) -> Rational {
        self.coeffs
            .get(&mask)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest monomial size; 0 for constants (including the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs
            .keys()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Polynomial whose values on the cube are `values` (Möbius transform).
    pub fn from_cube_values(arity: usize, values: &[Rational]) -> Result<Self> {
        if values.len() != 1 << arity {
            return Err(Error::ArityMismatch(format!(
                "{} values for arity {arity}",
                values.len()
            )));
        }
        let mut v = values.to_vec();
        subset_mobius(&mut v);
        Ok(Self::from_terms(arity, v.into_iter().enumerate()))
    }

    /// Values at all `2^n` cube points, indexed like a truth table.
    pub fn cube_values(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); 1 << self.arity];
        for (m, c) in &self.coeffs {
            v[*m] = c.clone();
        }
        subset_zeta(&mut v);
        v
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.arity {
            return Err(Error::ArityMismatch(format!(
                "point of length {} for arity {}",
                x.len(),
                self.arity
            )));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.coeffs {
            let mut term = c.clone();
            let mut bits = *m;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                term *= &x[i];
                bits &= bits - 1;
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Value at a cube point given as a table index.
    pub fn eval_cube(&self, index: usize) -> Rational {
        self.coeffs
            .iter()
            .filter(|(m, _)| *m & index == **m)
            .fold(Rational::zero(), |acc, (_, c)| acc + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        MultilinearPolynomial {
            arity: self.arity,
            coeffs: self.coeffs.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Product reduced with `x_i² = x_i`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = Self::zero(self.arity);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                out.add_term(a | b, ca * cb);
            }
        }
        Ok(out)
    }

    fn same_arity(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(format!(
                "polynomials of arity {} and {}",
                self.arity, other.arity
            )));
        }
        Ok(())
    }

    /// Minimum and maximum over the cube.
    pub fn cube_range(&self) -> (Rational, Rational) {
        let vals = self.cube_values();
        let mut lo = vals[0].clone();
        let mut hi = vals[0].clone();
        for v in &vals[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        (lo, hi)
    }

    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.coeffs
            .iter()
            .map(|(m, c)| JsonTerm {
                vars: (0..self.arity)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| i + 1)
                    .collect(),
                coeff: rational::format(c),
            })
            .collect()
    }

    pub fn from_json_terms(arity: usize, terms: &[JsonTerm]) -> Result<Self> {
        let mut p = Self::zero(arity);
        for t in terms {
            let q = Self::monomial(arity, &t.vars, rational::parse(&t.coeff)?)?;
            p = p.add(&q)?;
        }
        Ok(p)
    }
}

/// The unique multilinear polynomial agreeing with `f` on the cube.
pub fn interpolate(f: &BooleanFunction) -> Result<MultilinearPolynomial> {
    let n = f.arity();
    if n > MAX_INTERPOLATION_ARITY {
        return Err(Error::LimitExceeded(format!(
            "interpolation is capped at arity {MAX_INTERPOLATION_ARITY}, got {n}"
        )));
    }
    // Coefficients of a 0/1 table are integers of magnitude ≤ 2^n.
    let mut v: Vec<i64> = (0..f.len()).map(|k| f.value(k) as i64).collect();
    for i in 0..n {
        let bit = 1 << i;
        for s in 0..v.len() {
            if s & bit != 0 {
                v[s] -= v[s ^ bit];
            }
        }
    }
    Ok(MultilinearPolynomial::from_terms(
        n,
        v.into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(m, c)| (m, rational::int(c))),
    ))
}

/// `max_x |p(x) − f(x)|` over the cube.
pub fn linf_error(p: &MultilinearPolynomial, f: &BooleanFunction) -> Result<Rational> {
    if p.arity() != f.arity() {
        return Err(Error::ArityMismatch(format!(
            "polynomial of arity {} vs function of arity {}",
            p.arity(),
            f.arity()
        )));
    }
    let vals = p.cube_values();
    let one = Rational::one();
    Ok(vals
        .iter()
        .enumerate()
        .map(|(k, v)| {
            if f.value(k) {
                (v - &one).abs()
            } else {
                v.abs()
            }
        })
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Checks `|p(x) − p(x + Δ)| ≤ δ` for a polynomial bounded in `[0, 1]` on
/// the cube and `‖Δ‖∞ ≤ δ/n`. Preconditions are checked and reported as
/// errors; the boolean is the robustness outcome itself.
pub fn robustness_probe(
    p: &MultilinearPolynomial,
    x: &[bool],
    delta_vec: &[Rational],
    delta: &Rational,
) -> Result<bool> {
    let n = p.arity();
    if x.len() != n || delta_vec.len() != n {
        return Err(Error::ArityMismatch(format!(
            "point/perturbation lengths {}/{} for arity {n}",
            x.len(),
            delta_vec.len()
        )));
    }
    let (lo, hi) = p.cube_range();
    if lo < Rational::zero() || hi > Rational::one() {
        return Err(Error::Precondition(
            "polynomial is not bounded in [0, 1] on the cube".into(),
        ));
    }
    if n > 0 {
        let bound = delta / rational::int(n as i64);
        if delta_vec.iter().any(|d| d.abs() > bound) {
            return Err(Error::Precondition(format!(
                "perturbation exceeds δ/n = {}",
                rational::format(&bound)
            )));
        }
    }
    let base: Vec<Rational> = x
        .iter()
        .map(|&b| if b { Rational::one() } else { Rational::zero() })
        .collect();
    let moved: Vec<Rational> = base.iter().zip(delta_vec).map(|(a, d)| a + d).collect();
    let diff = (p.eval(&base)? - p.eval(&moved)?).abs();
    Ok(diff <= *delta)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub vars: Vec<usize>,
    pub coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    arity: usize,
    terms: Vec<JsonTerm>,
}

impl Serialize for MultilinearPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            arity: self.arity,
            terms: self.to_json_terms(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultilinearPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        MultilinearPolynomial::from_json_terms(r.arity, &r.terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::Builtin;
    use crate::rational::{int, ratio};

    fn f(b: Builtin, n: usize) -> BooleanFunction {
        BooleanFunction::builtin(b, n).unwrap()
    }

    #[test]
    fn interpolate_examples() {
        let and = interpolate(&f(Builtin::And, 2)).unwrap();
        assert_eq!(and.num_terms(), 1);
        assert_eq!(and.coeff(0b11), int(1));

        let xor = interpolate(&f(Builtin::Parity, 2)).unwrap();
        let expected =
            MultilinearPolynomial::from_terms(2, [(1, int(1)), (2, int(1)), (3, int(-2))]);
        assert_eq!(xor, expected);

        let maj = interpolate(&f(Builtin::Maj, 3)).unwrap();
        let expected = MultilinearPolynomial::from_terms(
            3,
            [
                (0b011, int(1)),
                (0b110, int(1)),
                (0b101, int(1)),
                (0b111, int(-2)),
            ],
        );
        assert_eq!(maj, expected);
        assert_eq!(maj.degree(), 3);
        for k in 0..8 {
            assert_eq!(maj.eval_cube(k), int(f(Builtin::Maj, 3).value(k) as i64));
        }
    }

    #[test]
    fn eval_examples() {
        let p = MultilinearPolynomial::monomial(2, &[1, 2], int(1)).unwrap();
        assert_eq!(p.eval(&[ratio(1, 2), ratio(1, 2)]).unwrap(), ratio(1, 4));
        let c = MultilinearPolynomial::constant(3, ratio(7, 3));
        assert_eq!(
            c.eval(&[int(5), ratio(-1, 9), int(0)]).unwrap(),
            ratio(7, 3)
        );
        let maj = interpolate(&f(Builtin::Maj, 3)).unwrap();
        assert_eq!(
            maj.eval(&[ratio(1, 2), ratio(1, 2), ratio(1, 2)]).unwrap(),
            ratio(1, 2)
        );
        assert!(maj.eval(&[int(1)]).is_err());
    }

    #[test]
    fn linf_examples() {
        let and = f(Builtin::And, 2);
        assert_eq!(
            linf_error(&interpolate(&and).unwrap(), &and).unwrap(),
            int(0)
        );
        let p = MultilinearPolynomial::from_terms(
            2,
            [(0, ratio(-1, 3)), (1, ratio(2, 3)), (2, ratio(2, 3))],
        );
        assert_eq!(linf_error(&p, &and).unwrap(), ratio(1, 3));
        let half = MultilinearPolynomial::constant(2, ratio(1, 2));
        assert_eq!(
            linf_error(&half, &f(Builtin::Parity, 2)).unwrap(),
            ratio(1, 2)
        );
        assert!(linf_error(&half, &f(Builtin::Maj, 3)).is_err());
    }

    #[test]
    fn robustness_examples() {
        let maj = interpolate(&f(Builtin::Maj, 3)).unwrap();
        let zero = vec![int(0); 3];
        assert!(robustness_probe(&maj, &[true, true, false], &zero, &ratio(1, 10)).unwrap());
        let and = interpolate(&f(Builtin::And, 2)).unwrap();
        let d = vec![ratio(-1, 20), ratio(-1, 20)];
        assert!(robustness_probe(&and, &[true, true], &d, &ratio(1, 10)).unwrap());
        let too_big = vec![ratio(-1, 10), int(0)];
        assert!(matches!(
            robustness_probe(&and, &[true, true], &too_big, &ratio(1, 10)),
            Err(Error::Precondition(_))
        ));
        let unbounded = MultilinearPolynomial::constant(2, int(2));
        assert!(robustness_probe(&unbounded, &[true, true], &d, &ratio(1, 10)).is_err());
    }

    #[test]
    fn robustness_can_fail_outside_the_cube() {
        // 1 − x1 − x2 + 2x1x2 at (−a, −a) moves by 2a + 2a², above δ = 2a.
        let xnor = interpolate(&f(Builtin::Parity, 2).negate()).unwrap();
        let d = vec![ratio(-1, 20), ratio(-1, 20)];
        assert!(!robustness_probe(&xnor, &[false, false], &d, &ratio(1, 10)).unwrap());
    }

    #[test]
    fn transforms_round_trip() {
        let vals: Vec<Rational> = (0..16).map(|k| ratio(k * k - 7, 3)).collect();
        let p = MultilinearPolynomial::from_cube_values(4, &vals).unwrap();
        assert_eq!(p.cube_values(), vals);
        let mut sup = vals.clone();
        superset_zeta(&mut sup);
        for s in 0..16usize {
            let direct: Rational = (0..16usize)
                .filter(|t| t & s == s)
                .map(|t| vals[t].clone())
                .sum();
            assert_eq!(sup[s], direct);
        }
    }

    #[test]
    fn json_terms() {
        let xor = interpolate(&f(Builtin::Parity, 2)).unwrap();
        let json = serde_json::to_value(&xor).unwrap();
        assert_eq!(json["terms"][2]["vars"], serde_json::json!([1, 2]));
        assert_eq!(json["terms"][2]["coeff"], "-2/1");
        let back: MultilinearPolynomial = serde_json::from_value(json).unwrap();
        assert_eq!(back, xor);
    }
}
