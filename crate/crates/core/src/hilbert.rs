//! Multigraded Hilbert function of the module of twisted global sections,
//! counted through lattice polytopes, with support bounds and the
//! regularity region on split bundles and the Hilbert polynomial.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::{rat, rref, Rational, Subspace};
use crate::filtration::EquivariantReflexiveSheaf;
use crate::polynomial::RationalPolynomial;
use crate::polytopes::{omega_system, psi_points, MultiIndex};
use crate::toric::{ClassElement, SplitData};

/// `dim ∩_k E^k_{idx_k}`.
pub fn intersection_dim(e: &EquivariantReflexiveSheaf, idx: &MultiIndex) -> Result<usize> {
    let rays = e.variety().ray_count();
    if idx.0.len() != rays {
        return Err(Error::DimensionMismatch { expected: rays, found: idx.0.len() });
    }
    if let Some(&k) = idx.0.iter().find(|&&k| k >= e.rank()) {
        return Err(Error::invalid(format!("multi-index entry {k} out of range for rank {}", e.rank())));
    }
    let spaces = idx.0.iter().enumerate().map(|(ray, &k)| &e.filtration(ray).spaces()[k]);
    Ok(Subspace::intersect_all(spaces)?.dim())
}

/// `h(c) = sum_idx |Psi_idx(c)| D(idx)`.
pub fn hilbert_function(e: &EquivariantReflexiveSheaf, c: &ClassElement) -> Result<u64> {
    let mut total = 0u64;
    for idx in MultiIndex::all(e) {
        let sys = omega_system(e, &idx, c)?;
        if sys.has_empty_row() {
            continue;
        }
        let d = intersection_dim(e, &idx)?;
        if d == 0 {
            continue;
        }
        total += psi_points(&sys)?.len() as u64 * d as u64;
    }
    Ok(total)
}

/// `coeff_p * p + coeff_q * q >= bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HalfPlane {
    pub coeff_p: i64,
    pub coeff_q: i64,
    pub bound: i64,
}

impl HalfPlane {
    pub fn contains(&self, p: i64, q: i64) -> bool {
        self.coeff_p * p + self.coeff_q * q >= self.bound
    }
}

impl fmt::Display for HalfPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lhs = String::new();
        for (c, name) in [(self.coeff_p, "p"), (self.coeff_q, "q")] {
            if c == 0 {
                continue;
            }
            let mag = if c.abs() == 1 { name.to_string() } else { format!("{}{name}", c.abs()) };
            match (lhs.is_empty(), c < 0) {
                (true, false) => lhs.push_str(&mag),
                (true, true) => lhs.push_str(&format!("-{mag}")),
                (false, false) => lhs.push_str(&format!(" + {mag}")),
                (false, true) => lhs.push_str(&format!(" - {mag}")),
            }
        }
        if lhs.is_empty() {
            lhs.push('0');
        }
        write!(f, "{lhs} >= {}", self.bound)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "k", rename_all = "snake_case")]
pub enum RegionKind {
    /// `L_E`
    LowerBound,
    /// `I(k)`, one per base ray `rho_k`
    I(usize),
    /// `J(k)`, one per fibre ray `eta_k`
    J(usize),
    /// `omega`
    Omega,
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionKind::LowerBound => write!(f, "L"),
            RegionKind::I(k) => write!(f, "I({k})"),
            RegionKind::J(k) => write!(f, "J({k})"),
            RegionKind::Omega => write!(f, "omega"),
        }
    }
}

/// Intersection of two half-planes in the `(p, q)` plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportRegion {
    pub kind: RegionKind,
    pub half_planes: [HalfPlane; 2],
}

impl SupportRegion {
    pub fn contains(&self, p: i64, q: i64) -> bool {
        self.half_planes.iter().all(|h| h.contains(p, q))
    }

    /// Corner `(p, q)` where both half-planes are tight, when it is integral.
    pub fn corner(&self) -> Option<(i64, i64)> {
        let [a, b] = self.half_planes;
        let det = a.coeff_p * b.coeff_q - a.coeff_q * b.coeff_p;
        if det == 0 {
            return None;
        }
        let p = a.bound * b.coeff_q - a.coeff_q * b.bound;
        let q = a.coeff_p * b.bound - a.bound * b.coeff_p;
        (p % det == 0 && q % det == 0).then(|| (p / det, q / det))
    }
}

impl fmt::Display for SupportRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} and {}", self.half_planes[0], self.half_planes[1])
    }
}

struct Jumps {
    /// First and top jump of each `rho_t`.
    i: Vec<(i64, i64)>,
    /// First and top jump of each `eta_u`.
    j: Vec<(i64, i64)>,
}

fn split_jumps<'a>(e: &'a EquivariantReflexiveSheaf) -> Result<(SplitData<'a>, Jumps)> {
    let sd = e.variety().require_split()?;
    let ends = |k: usize| (e.filtration(k).first_jump(), e.filtration(k).top_jump());
    let i = (0..=sd.s).map(|t| ends(sd.rho(t))).collect();
    let j = (0..=sd.r()).map(|u| ends(sd.eta(u))).collect();
    Ok((sd, Jumps { i, j }))
}

/// `q >= sum j` and `p + a_r q >= sum i + a_r j_0 + sum_{u<r} (a_r - a_u) j_u`.
fn support_region(sd: &SplitData, kind: RegionKind, i: &[i64], j: &[i64]) -> SupportRegion {
    let a_r = sd.a_max();
    let mut rhs = i.iter().sum::<i64>() + a_r * j[0];
    for (a_u, j_u) in sd.a.iter().zip(&j[1..sd.r()]) {
        rhs += (a_r - a_u) * j_u;
    }
    SupportRegion {
        kind,
        half_planes: [
            HalfPlane { coeff_p: 0, coeff_q: 1, bound: j.iter().sum() },
            HalfPlane { coeff_p: 1, coeff_q: a_r, bound: rhs },
        ],
    }
}

/// `L_E`, containing the support of the Hilbert function.
pub fn lower_bound_region(e: &EquivariantReflexiveSheaf) -> Result<SupportRegion> {
    let (sd, jumps) = split_jumps(e)?;
    let i: Vec<i64> = jumps.i.iter().map(|x| x.0).collect();
    let j: Vec<i64> = jumps.j.iter().map(|x| x.0).collect();
    Ok(support_region(&sd, RegionKind::LowerBound, &i, &j))
}

/// `I(0..=s)` then `J(0..=r)`; their union `U_E` lies in the support.
pub fn upper_bound_regions(e: &EquivariantReflexiveSheaf) -> Result<Vec<SupportRegion>> {
    let (sd, jumps) = split_jumps(e)?;
    let top_i: Vec<i64> = jumps.i.iter().map(|x| x.1).collect();
    let top_j: Vec<i64> = jumps.j.iter().map(|x| x.1).collect();
    let mut out = Vec::new();
    for k in 0..=sd.s {
        let mut i = top_i.clone();
        i[k] = jumps.i[k].0;
        out.push(support_region(&sd, RegionKind::I(k), &i, &top_j));
    }
    for k in 0..=sd.r() {
        let mut j = top_j.clone();
        j[k] = jumps.j[k].0;
        out.push(support_region(&sd, RegionKind::J(k), &top_i, &j));
    }
    Ok(out)
}

pub fn in_support_lower_bound(e: &EquivariantReflexiveSheaf, p: i64, q: i64) -> Result<bool> {
    Ok(lower_bound_region(e)?.contains(p, q))
}

pub fn in_support_upper_bound(e: &EquivariantReflexiveSheaf, p: i64, q: i64) -> Result<bool> {
    Ok(upper_bound_regions(e)?.iter().any(|r| r.contains(p, q)))
}

/// `omega`: `p >= sum i_l - sum_u a_u j^u_1 - 1`, `q >= sum j_l - 1`.
pub fn regularity_region(e: &EquivariantReflexiveSheaf) -> Result<SupportRegion> {
    let (sd, jumps) = split_jumps(e)?;
    let p_bound = jumps.i.iter().map(|x| x.1).sum::<i64>()
        - sd.a.iter().zip(&jumps.j[1..]).map(|(a, j)| a * j.0).sum::<i64>()
        - 1;
    let q_bound = jumps.j.iter().map(|x| x.1).sum::<i64>() - 1;
    Ok(SupportRegion {
        kind: RegionKind::Omega,
        half_planes: [HalfPlane { coeff_p: 1, coeff_q: 0, bound: p_bound }, HalfPlane { coeff_p: 0, coeff_q: 1, bound: q_bound }],
    })
}

/// Exponents `(i, j)` with `i + j <= degree`, degree-lex.
fn monomials(degree: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for d in (0..=degree).rev() {
        for i in (0..=d).rev() {
            out.push((i, d - i));
        }
    }
    out
}

/// Interpolation grid used by [`hilbert_polynomial`]: `(D + 1) x (D + 1)`
/// points from the corner of `omega`, `D = dim X`.
pub fn interpolation_grid(e: &EquivariantReflexiveSheaf) -> Result<Vec<(i64, i64)>> {
    let omega = regularity_region(e)?;
    let (p0, q0) = omega.corner().expect("omega has an integral corner");
    let d = e.variety().dim() as i64;
    Ok((0..=d).flat_map(|i| (0..=d).map(move |j| (p0 + i, q0 + j))).collect())
}

/// Points off the grid, inside `omega`, used to validate the interpolant.
pub fn validation_points(e: &EquivariantReflexiveSheaf) -> Result<Vec<(i64, i64)>> {
    let omega = regularity_region(e)?;
    let (p0, q0) = omega.corner().expect("omega has an integral corner");
    let d = e.variety().dim() as i64;
    Ok((0..=d).flat_map(|i| [(p0 + d + 1 + i, q0 + i), (p0 + i, q0 + d + 1 + 2 * i)]).collect())
}

/// The Hilbert polynomial `P_E(p, q)` of total degree at most `dim X`.
///
/// Exact interpolation of the Hilbert function on [`interpolation_grid`],
/// checked on [`validation_points`]. A mismatch means the computation itself
/// is inconsistent and is reported as an internal error.
pub fn hilbert_polynomial(e: &EquivariantReflexiveSheaf) -> Result<RationalPolynomial> {
    let degree = e.variety().dim() as u32;
    let monos = monomials(degree);
    let grid = interpolation_grid(e)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &(p, q) in &grid {
        let h = hilbert_function(e, &ClassElement::pq(p, q))?;
        let mut row: Vec<Rational> = monos.iter().map(|&(i, j)| num_traits::pow(rat(p), i as usize) * num_traits::pow(rat(q), j as usize)).collect();
        row.push(rat(h as i64));
        rows.push(row);
    }
    let n = monos.len();
    let (reduced, pivots) = rref(rows, n + 1);
    if pivots.contains(&n) {
        return Err(Error::Internal("Hilbert function values on the grid are not polynomial of the expected degree".into()));
    }
    if pivots.len() != n {
        return Err(Error::Internal("interpolation grid does not determine the polynomial".into()));
    }
    let poly = RationalPolynomial::from_terms(2, pivots.iter().zip(&reduced).map(|(&col, row)| (vec![monos[col].0, monos[col].1], row[n].clone())));
    for (p, q) in validation_points(e)? {
        let h = hilbert_function(e, &ClassElement::pq(p, q))?;
        if poly.evaluate_int(&[p, q]) != rat(h as i64) {
            return Err(Error::Internal(format!("Hilbert polynomial disagrees with the Hilbert function at ({p}, {q})")));
        }
    }
    Ok(poly)
}

/// `P(p, q)` as an integer, when it is one.
pub fn evaluate_integral(poly: &RationalPolynomial, p: i64, q: i64) -> Option<i64> {
    let v = poly.evaluate_int(&[p, q]);
    (v.denom().is_one() || v.is_zero()).then(|| i64::try_from(v.to_integer()).ok()).flatten()
}
