//! Exact rational linear algebra.
//!
//! Everything here works over `BigRational`. Subspaces are kept in reduced
//! row-echelon form so that two subspaces are equal exactly when their
//! stored bases are equal.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"-p/q"` or a plain integer. No rounding: decimals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not an exact rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::invalid(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Reduced row-echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut().skip(col) {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: Vec<Vec<Rational>>, ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{ x : row · x = 0 for every row }`.
pub fn nullspace(rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let (reduced, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &pc) in reduced.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solves the square system `a · x = b`; `None` when `a` is singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (reduced, pivots) = rref(aug, n + 1);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(reduced.into_iter().map(|row| row[n].clone()).collect())
}

/// A linear subspace of `Q^ambient` in canonical (reduced echelon) form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| (0..ambient).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Subspace { ambient, basis, pivots: (0..ambient).collect() }
    }

    /// Canonical subspace spanned by `vectors`.
    pub fn span(vectors: Vec<Vec<Rational>>, ambient: usize) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch { expected: ambient, found: v.len() });
        }
        let (basis, pivots) = rref(vectors, ambient);
        Ok(Subspace { ambient, basis, pivots })
    }

    /// Convenience for integer generators.
    pub fn span_int(vectors: &[&[i64]], ambient: usize) -> Result<Self> {
        Self::span(vectors.iter().map(|v| v.iter().map(|&x| rat(x)).collect()).collect(), ambient)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the canonical basis. Only meaningful when `v` lies in `self`.
    pub fn coordinates(&self, v: &[Rational]) -> Vec<Rational> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut rest = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = rest[p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, y) in rest.iter_mut().zip(row) {
                *x -= &c * y;
            }
        }
        rest.iter().all(Zero::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        Ok(())
    }

    /// Linear forms vanishing on the subspace.
    fn annihilator(&self) -> Vec<Vec<Rational>> {
        nullspace(self.basis.clone(), self.ambient)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_full() || other.is_zero() {
            return Ok(other.clone());
        }
        if other.is_full() || self.is_zero() {
            return Ok(self.clone());
        }
        let mut forms = self.annihilator();
        forms.extend(other.annihilator());
        Subspace::span(nullspace(forms, self.ambient), self.ambient)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_full() || other.is_zero() {
            return Ok(self.clone());
        }
        if other.is_full() || self.is_zero() {
            return Ok(other.clone());
        }
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Subspace::span(gens, self.ambient)
    }

    /// Intersection of a nonempty list.
    pub fn intersect_all<'a>(spaces: impl IntoIterator<Item = &'a Subspace>) -> Result<Subspace> {
        let mut it = spaces.into_iter();
        let first = it.next().ok_or_else(|| Error::invalid("intersection of an empty list"))?;
        it.try_fold(first.clone(), |acc, s| acc.intersect(s))
    }

    /// Sum of a nonempty list.
    pub fn sum_all<'a>(spaces: impl IntoIterator<Item = &'a Subspace>) -> Result<Subspace> {
        let mut it = spaces.into_iter();
        let first = it.next().ok_or_else(|| Error::invalid("sum of an empty list"))?;
        it.try_fold(first.clone(), |acc, s| acc.sum(s))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(ambient={}, ", self.ambient)?;
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}])", rows.join(", "))
    }
}

/// `true` when every entry of `v` is an integer.
pub fn is_integral(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub(crate) fn floor_i64(x: &Rational) -> i64 {
    to_i64(&x.floor())
}

pub(crate) fn ceil_i64(x: &Rational) -> i64 {
    to_i64(&x.ceil())
}

fn to_i64(x: &Rational) -> i64 {
    use num_traits::ToPrimitive;
    let n = x.to_integer();
    n.to_i64().unwrap_or(if n.is_negative() { i64::MIN } else { i64::MAX })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn span_identity_is_full() {
        let s = Subspace::span(vec![v(&[1, 0]), v(&[0, 1])], 2).unwrap();
        assert_eq!(s, Subspace::full(2));
    }

    #[test]
    fn span_single_generator_is_scaled() {
        let s = Subspace::span(vec![v(&[3, 3, 1])], 3).unwrap();
        assert_eq!(s.basis(), &[vec![rat(1), rat(1), Rational::new(1.into(), 3.into())]]);
    }

    #[test]
    fn span_empty_is_zero() {
        let s = Subspace::span(vec![], 4).unwrap();
        assert_eq!(s, Subspace::zero(4));
        assert_eq!(s.ambient_dim(), 4);
    }

    #[test]
    fn span_rejects_bad_length() {
        assert!(matches!(
            Subspace::span(vec![v(&[1, 2]), v(&[1])], 2),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn transverse_lines_meet_in_zero() {
        let a = Subspace::span_int(&[&[1, 0]], 2).unwrap();
        let b = Subspace::span_int(&[&[0, 1]], 2).unwrap();
        assert!(a.intersect(&b).unwrap().is_zero());
        let c = Subspace::span_int(&[&[3, 1]], 2).unwrap();
        assert!(c.intersect(&b).unwrap().is_zero());
        assert!(a.sum(&b).unwrap().is_full());
    }

    #[test]
    fn planes_in_three_space() {
        // Oracle: stacking the four generators gives a rank-3 matrix, so the
        // planes are distinct and meet in a line.
        assert_eq!(rank(vec![v(&[3, 3, 1]), v(&[4, 0, 2]), v(&[9, 4, 8]), v(&[2, 8, 8])], 3), 3);
        let a = Subspace::span_int(&[&[3, 3, 1], &[4, 0, 2]], 3).unwrap();
        let b = Subspace::span_int(&[&[9, 4, 8], &[2, 8, 8]], 3).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
    }

    #[test]
    fn sum_of_two_lines() {
        let a = Subspace::span_int(&[&[0, 6, 3]], 3).unwrap();
        let b = Subspace::span_int(&[&[4, 0, 4]], 3).unwrap();
        assert_eq!(a.sum(&b).unwrap().dim(), 2);
        assert_eq!(a.sum(&Subspace::zero(3)).unwrap(), a);
    }

    #[test]
    fn ambient_mismatch_errors() {
        assert!(Subspace::full(2).intersect(&Subspace::full(3)).is_err());
        assert!(Subspace::full(2).sum(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-4").unwrap(), rat(-4));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn solve_square_system() {
        let a = vec![v(&[-1, 3]), v(&[1, 0])];
        let x = solve_square(&a, &v(&[2, 1])).unwrap();
        assert_eq!(x, v(&[1, 1]));
        assert!(solve_square(&[v(&[1, 1]), v(&[2, 2])], &v(&[0, 0])).is_none());
    }
}
