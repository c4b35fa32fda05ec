//! Sparse multivariate polynomials with rational coefficients, plus the
//! Bernoulli and Faulhaber machinery for closed-form lattice sums.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exact_linalg::{rat, Rational};

/// Exponent vector to coefficient; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl RationalPolynomial {
    pub fn zero(nvars: usize) -> Self {
        RationalPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The monomial `c * x^exps`.
    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Self::monomial(exps, Rational::one())
    }

    /// Builds from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(c.clone(), |acc, (&k, v)| acc * num_traits::pow(v.clone(), k as usize)))
            .sum()
    }

    pub fn evaluate_int(&self, x: &[i64]) -> Rational {
        self.evaluate(&x.iter().map(|&v| rat(v)).collect::<Vec<_>>())
    }

    /// Replaces every variable `x_i` by `images[i]` (all in a common ring).
    pub fn compose(&self, images: &[RationalPolynomial]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, |p| p.nvars);
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (img, &k) in images.iter().zip(e) {
                term = term.mul(&img.pow(k));
            }
            out = out.add(&term);
        }
        out
    }

    /// Drops the last variable, which must not occur.
    pub fn drop_last_var(&self) -> Self {
        assert!(self.nvars > 0 && self.degree_in(self.nvars - 1) == 0);
        Self::from_terms(self.nvars - 1, self.terms.iter().map(|(e, c)| (e[..self.nvars - 1].to_vec(), c.clone())))
    }

    /// Text form with the given variable names, terms in degree-lex order
    /// (higher total degree first, then larger exponent of earlier variables).
    pub fn display_with(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (n, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(&k, _)| k > 0)
                .map(|(&k, name)| if k == 1 { name.to_string() } else { format!("{name}^{k}") })
                .collect();
            let abs = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{abs}*{}", mono.join("*")));
            }
        }
        out
    }

    fn default_names(&self) -> Vec<String> {
        match self.nvars {
            1 => vec!["q".into()],
            2 => vec!["p".into(), "q".into()],
            n => (0..n).map(|i| format!("x{i}")).collect(),
        }
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.default_names();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.display_with(&refs))
    }
}

impl fmt::Debug for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPolynomial({self})")
    }
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * rat((n - i) as i64) / rat((i + 1) as i64);
    }
    acc
}

/// `B_0, ..., B_n` with `B_1 = -1/2`, from `sum_{k<=n} C(n+1, k) B_k = 0`.
pub fn bernoulli_numbers(n: u32) -> Vec<Rational> {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for m in 1..=n {
        let s: Rational = (0..m).map(|k| binomial(m + 1, k) * &b[k as usize]).sum();
        b.push(-s / rat((m + 1) as i64));
    }
    b
}

/// `B_n(x) = sum_k C(n, k) B_{n-k} x^k`.
pub fn bernoulli_polynomial(n: u32) -> RationalPolynomial {
    let b = bernoulli_numbers(n);
    RationalPolynomial::from_terms(1, (0..=n).map(|k| (vec![k], binomial(n, k) * &b[(n - k) as usize])))
}

/// `sum_{k=0}^{q} k^t` as a polynomial in `q` (with `0^0 = 1`), via
/// `(B_{t+1}(q + 1) - B_{t+1}(0)) / (t + 1)`. For `t >= 1` the constant
/// `B_{t+1}(0)` equals `B_{t+1}(1)`.
pub fn faulhaber_sum(t: u32) -> RationalPolynomial {
    let b = bernoulli_polynomial(t + 1);
    let q_plus_1 = RationalPolynomial::var(1, 0).add(&RationalPolynomial::one(1));
    let shifted = b.compose(&[q_plus_1]);
    let at_zero = b.evaluate_int(&[0]);
    shifted.sub(&RationalPolynomial::constant(1, at_zero)).scale(&(Rational::one() / rat((t + 1) as i64)))
}

/// `sum_{e_1, ..., e_k >= 0, e_1 + ... + e_k <= q} P(q, e_1, ..., e_k)` as a
/// polynomial in `q`. `P` has variables `(q, e_1, ..., e_k)`.
///
/// The innermost variable `e_k` runs over `0..=N` with `N = q - e_1 - ... - e_{k-1}`,
/// so each power `e_k^t` becomes the Faulhaber polynomial evaluated at `N`.
pub fn simplex_sum(p: &RationalPolynomial, k: usize) -> RationalPolynomial {
    assert_eq!(p.nvars(), k + 1, "simplex_sum expects variables (q, e_1, ..., e_k)");
    if k == 0 {
        return p.clone();
    }
    let nv = k + 1;
    let mut bound = RationalPolynomial::var(nv, 0);
    for i in 1..k {
        bound = bound.sub(&RationalPolynomial::var(nv, i));
    }
    let mut images: Vec<RationalPolynomial> = (0..nv).map(|i| RationalPolynomial::var(nv, i)).collect();
    images[k] = bound;
    let mut reduced = RationalPolynomial::zero(nv);
    for t in 0..=p.degree_in(k) {
        let coeff = RationalPolynomial::from_terms(
            nv,
            p.terms().filter(|(e, _)| e[k] == t).map(|(e, c)| {
                let mut e = e.clone();
                e[k] = 0;
                (e, c.clone())
            }),
        );
        if coeff.is_zero() {
            continue;
        }
        let f = faulhaber_sum(t);
        let lifted = RationalPolynomial::from_terms(nv, f.terms().map(|(e, c)| {
            let mut ex = vec![0; nv];
            ex[k] = e[0];
            (ex, c.clone())
        }));
        reduced = reduced.add(&coeff.mul(&lifted.compose(&images)));
    }
    simplex_sum(&reduced.drop_last_var(), k - 1)
}
