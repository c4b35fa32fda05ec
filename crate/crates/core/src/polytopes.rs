//! Lattice points of the interval systems cut out by Klyachko filtrations.
//!
//! A multi-index picks one filtration step per ray; the characters `m` whose
//! pairing with every ray lands in the chosen step form the polytope
//! `Omega_idx(c)`, and `Psi_idx(c)` is its set of integer points. On a split
//! bundle the system slices into a system in the fibre characters `c` and,
//! for each such `c`, one in the base characters `d`.
//!
//! Multi-index entries are 0-based: entry `k` selects the interval
//! `[i_{k+1}, i_{k+2})` in the 1-based jump notation.

use crate::error::{Error, Result};
use crate::exact_linalg::{ceil_i64, floor_i64, rat, solve_square, Rational};
use crate::filtration::EquivariantReflexiveSheaf;
use crate::toric::ClassElement;
use crate::cohomology::{combinations, product};

/// `lower_k <= row_k . m <= upper_k - 1`; `None` is the matching infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalConstraintSystem {
    pub matrix: Vec<Vec<i64>>,
    pub lower: Vec<Option<i64>>,
    pub upper: Vec<Option<i64>>,
}

impl IntervalConstraintSystem {
    pub fn vars(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    pub fn satisfied_by(&self, m: &[i64]) -> bool {
        self.matrix.iter().zip(&self.lower).zip(&self.upper).all(|((row, lo), hi)| {
            let v: i64 = row.iter().zip(m).map(|(a, b)| a * b).sum();
            lo.is_none_or(|lo| v >= lo) && hi.is_none_or(|hi| v < hi)
        })
    }

    /// Some row has an empty interval.
    pub fn has_empty_row(&self) -> bool {
        self.lower.iter().zip(&self.upper).any(|(lo, hi)| matches!((lo, hi), (Some(lo), Some(hi)) if lo >= hi))
    }
}

/// One filtration step per ray, 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn top(e: &EquivariantReflexiveSheaf) -> Self {
        MultiIndex(vec![e.rank() - 1; e.variety().ray_count()])
    }

    /// Every multi-index for `e`, lexicographic.
    pub fn all(e: &EquivariantReflexiveSheaf) -> Vec<Self> {
        product(vec![e.rank(); e.variety().ray_count()]).into_iter().map(MultiIndex).collect()
    }

    fn check(&self, e: &EquivariantReflexiveSheaf) -> Result<()> {
        let rays = e.variety().ray_count();
        if self.0.len() != rays {
            return Err(Error::DimensionMismatch { expected: rays, found: self.0.len() });
        }
        if let Some(&k) = self.0.iter().find(|&&k| k >= e.rank()) {
            return Err(Error::invalid(format!("multi-index entry {k} out of range for rank {}", e.rank())));
        }
        Ok(())
    }
}

fn interval(jumps: &[i64], k: usize, shift: i64) -> (Option<i64>, Option<i64>) {
    (Some(jumps[k] - shift), jumps.get(k + 1).map(|j| j - shift))
}

/// `Omega_idx(c)`: row `k` is the pairing with ray `k`, bounded by the chosen
/// step of the twisted filtration.
pub fn omega_system(e: &EquivariantReflexiveSheaf, idx: &MultiIndex, c: &ClassElement) -> Result<IntervalConstraintSystem> {
    idx.check(e)?;
    let v = e.variety();
    let shift = v.twist_divisor(c)?;
    let mut lower = Vec::with_capacity(v.ray_count());
    let mut upper = Vec::with_capacity(v.ray_count());
    for (k, &i) in idx.0.iter().enumerate() {
        let (lo, hi) = interval(e.filtration(k).jumps(), i, shift[k]);
        lower.push(lo);
        upper.push(hi);
    }
    Ok(IntervalConstraintSystem { matrix: v.rays().to_vec(), lower, upper })
}

/// Integer solutions in lexicographic order.
///
/// The rows must positively span (as the rays of a complete fan do), so
/// finite lower bounds on every row make the solution set a polytope. Its
/// vertices come from square subsystems with each row held at one of its
/// bounds; the search runs over their bounding box.
pub fn psi_points(sys: &IntervalConstraintSystem) -> Result<Vec<Vec<i64>>> {
    if let Some(row) = sys.lower.iter().position(Option::is_none) {
        return Err(Error::Unbounded { row });
    }
    if sys.has_empty_row() {
        return Ok(Vec::new());
    }
    let n = sys.vars();
    if n == 0 {
        return Ok(if sys.satisfied_by(&[]) { vec![Vec::new()] } else { Vec::new() });
    }
    let in_polytope = |x: &[Rational]| {
        sys.matrix.iter().zip(&sys.lower).zip(&sys.upper).all(|((row, lo), hi)| {
            let v: Rational = row.iter().zip(x).map(|(a, b)| rat(*a) * b).sum();
            lo.is_none_or(|lo| v >= rat(lo)) && hi.is_none_or(|hi| v <= rat(hi - 1))
        })
    };
    let mut lower: Option<Vec<i64>> = None;
    let mut upper: Option<Vec<i64>> = None;
    for rows in combinations(sys.matrix.len(), n) {
        let a: Vec<Vec<Rational>> = rows.iter().map(|&k| sys.matrix[k].iter().map(|&x| rat(x)).collect()).collect();
        let choices: Vec<Vec<i64>> = rows
            .iter()
            .map(|&k| {
                let mut b = vec![sys.lower[k].expect("checked above")];
                if let Some(hi) = sys.upper[k] {
                    b.push(hi - 1);
                }
                b
            })
            .collect();
        for pick in product(choices.iter().map(Vec::len).collect()) {
            let b: Vec<Rational> = pick.iter().zip(&choices).map(|(&i, c)| rat(c[i])).collect();
            let Some(x) = solve_square(&a, &b) else { break };
            if !in_polytope(&x) {
                continue;
            }
            let lo: Vec<i64> = x.iter().map(ceil_i64).collect();
            let hi: Vec<i64> = x.iter().map(floor_i64).collect();
            lower = Some(match lower {
                None => lo,
                Some(l) => l.iter().zip(&lo).map(|(a, b)| *a.min(b)).collect(),
            });
            upper = Some(match upper {
                None => hi,
                Some(u) => u.iter().zip(&hi).map(|(a, b)| *a.max(b)).collect(),
            });
        }
    }
    let (Some(lower), Some(upper)) = (lower, upper) else { return Ok(Vec::new()) };
    let window = crate::cohomology::CharacterBox { lower, upper };
    Ok(window.points().filter(|m| sys.satisfied_by(m)).collect())
}

fn check_weights(a: &[i64]) -> Result<()> {
    if a.iter().any(|&x| x < 0) {
        return Err(Error::invalid(format!("weights must be non-negative, got {a:?}")));
    }
    if a.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid(format!("weights must be sorted, got {a:?}")));
    }
    Ok(())
}

/// Whether `a . x >= A`, `sum x <= B` has a solution `x >= 0`, with a witness.
///
/// For `B >= 0` this holds iff `A <= a_r B`, witnessed by `(0, ..., 0, B)`.
/// For `B < 0` there is no solution; with no weights `a_r` counts as 0.
pub fn feasible_system1(a: &[i64], big_a: i64, big_b: i64) -> Result<(bool, Option<Vec<i64>>)> {
    check_weights(a)?;
    if big_b < 0 {
        return Ok((false, None));
    }
    let a_r = a.last().copied().unwrap_or(0);
    if big_a > a_r * big_b {
        return Ok((false, None));
    }
    let mut witness = vec![0; a.len()];
    if let Some(last) = witness.last_mut() {
        *last = big_b;
    }
    Ok((true, Some(witness)))
}

/// Whether the split-bundle system
/// `-sum d + a . c >= l_0`, `d_t >= l_t`, `-sum c >= mu_0`, `c_u >= mu_u`
/// has an integer solution.
///
/// Shifting `d_t = e_t + l_t`, `c_u = x_u + mu_u` turns it into
/// `sum e - a . x <= -A`, `sum x <= B` over `e, x >= 0` with
/// `A = sum l - a . mu'` and `B = -sum mu` (`mu'` drops `mu_0`). Taking
/// `e = 0` loses nothing, so it is feasible iff `B >= 0` and `a . x >= A`,
/// `sum x <= B` is.
pub fn feasible_metasystem(a: &[i64], lambda: &[i64], mu: &[i64]) -> Result<bool> {
    check_weights(a)?;
    if mu.len() != a.len() + 1 {
        return Err(Error::DimensionMismatch { expected: a.len() + 1, found: mu.len() });
    }
    if lambda.is_empty() {
        return Err(Error::invalid("lambda needs at least lambda_0"));
    }
    let big_a = lambda.iter().sum::<i64>() - a.iter().zip(&mu[1..]).map(|(x, y)| x * y).sum::<i64>();
    let big_b = -mu.iter().sum::<i64>();
    Ok(big_b >= 0 && feasible_system1(a, big_a, big_b)?.0)
}

/// Rows `(-1, ..., -1)` followed by the identity, as in both sliced systems.
fn corner_matrix(n: usize) -> Vec<Vec<i64>> {
    let mut rows = vec![vec![-1; n]];
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        rows.push(e);
    }
    rows
}

/// `Psi_n(q)`: fibre characters `c` with `<c, eta_u>` in the chosen step of
/// the `eta_u` filtration, `eta_0` twisted by `q`. `n` has length `r + 1`.
pub fn psi_n(e: &EquivariantReflexiveSheaf, n: &[usize], q: i64) -> Result<Vec<Vec<i64>>> {
    let sd = e.variety().require_split()?;
    let r = sd.r();
    if n.len() != r + 1 {
        return Err(Error::DimensionMismatch { expected: r + 1, found: n.len() });
    }
    let mut lower = Vec::with_capacity(r + 1);
    let mut upper = Vec::with_capacity(r + 1);
    for (u, &k) in n.iter().enumerate() {
        if k >= e.rank() {
            return Err(Error::invalid(format!("index {k} out of range for rank {}", e.rank())));
        }
        let (lo, hi) = interval(e.filtration(sd.eta(u)).jumps(), k, if u == 0 { q } else { 0 });
        lower.push(lo);
        upper.push(hi);
    }
    psi_points(&IntervalConstraintSystem { matrix: corner_matrix(r), lower, upper })
}

/// `Psi_m(p; c)`: base characters `d` with `<(d, c), rho_t>` in the chosen
/// step of the `rho_t` filtration, `rho_0` twisted by `p`. `m` has length `s + 1`.
pub fn psi_m_sliced(e: &EquivariantReflexiveSheaf, m: &[usize], p: i64, c: &[i64]) -> Result<Vec<Vec<i64>>> {
    let sd = e.variety().require_split()?;
    let s = sd.s;
    if m.len() != s + 1 {
        return Err(Error::DimensionMismatch { expected: s + 1, found: m.len() });
    }
    if c.len() != sd.r() {
        return Err(Error::DimensionMismatch { expected: sd.r(), found: c.len() });
    }
    let big_a: i64 = sd.a.iter().zip(c).map(|(x, y)| x * y).sum();
    let mut lower = Vec::with_capacity(s + 1);
    let mut upper = Vec::with_capacity(s + 1);
    for (t, &k) in m.iter().enumerate() {
        if k >= e.rank() {
            return Err(Error::invalid(format!("index {k} out of range for rank {}", e.rank())));
        }
        let (lo, hi) = interval(e.filtration(sd.rho(t)).jumps(), k, if t == 0 { p + big_a } else { 0 });
        lower.push(lo);
        upper.push(hi);
    }
    psi_points(&IntervalConstraintSystem { matrix: corner_matrix(s), lower, upper })
}

/// `sum_{c in Psi_n(q)} |Psi_m(p; c)|` for the split multi-index `(m, n)`.
pub fn assemble_slices(e: &EquivariantReflexiveSheaf, idx: &MultiIndex, p: i64, q: i64) -> Result<usize> {
    idx.check(e)?;
    let sd = e.variety().require_split()?;
    let (m, n) = idx.0.split_at(sd.s + 1);
    let mut total = 0;
    for c in psi_n(e, n, q)? {
        total += psi_m_sliced(e, m, p, &c)?.len();
    }
    Ok(total)
}
