//! Cohomology of equivariant reflexive sheaves, character by character.
//!
//! For a character `m` the pieces are `E^sigma_m = ∩_{rho in sigma} E^rho(<m, rho>)`.
//! `H^0_m` is the intersection over all rays, `H^n_m` is the quotient by the
//! sum over all rays, `chi_m` is the alternating sum over all cones, and the
//! full `H^i_m` comes from the Čech complex of the cover by maximal cones.
//!
//! Global dimensions are sums over a finite window of characters. The
//! per-character data only depends on which filtration step each ray sits at,
//! so the sums memoize on that level vector.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_linalg::{ceil_i64, floor_i64, rank, rat, solve_square, Rational, Subspace};
use crate::filtration::EquivariantReflexiveSheaf;
use crate::toric::{ClassElement, Cone};

/// Axis-aligned window of characters, bounds inclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterBox {
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
}

impl CharacterBox {
    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn enlarged(&self, margin: i64) -> Self {
        CharacterBox {
            lower: self.lower.iter().map(|x| x - margin).collect(),
            upper: self.upper.iter().map(|x| x + margin).collect(),
        }
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        m.iter().zip(&self.lower).zip(&self.upper).all(|((x, lo), hi)| lo <= x && x <= hi)
    }

    pub fn is_empty(&self) -> bool {
        self.lower.iter().zip(&self.upper).any(|(lo, hi)| lo > hi)
    }

    /// Lattice points in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        let mut next = if self.is_empty() { None } else { Some(self.lower.clone()) };
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut succ = current.clone();
            for k in (0..succ.len()).rev() {
                if succ[k] < self.upper[k] {
                    succ[k] += 1;
                    next = Some(succ);
                    break;
                }
                succ[k] = self.lower[k];
            }
            Some(current)
        })
    }
}

/// `∩_{rho in cone} E^rho(<m, rho>)`; the zero cone gives the whole space.
pub fn sigma_piece(e: &EquivariantReflexiveSheaf, cone: &Cone, m: &[i64]) -> Subspace {
    let v = e.variety();
    let mut piece = Subspace::full(e.rank());
    for &k in &cone.rays {
        piece = piece.intersect(e.filtration(k).evaluate(v.pairing(m, k))).expect("common ambient");
        if piece.is_zero() {
            break;
        }
    }
    piece
}

fn ray_spaces<'a>(e: &'a EquivariantReflexiveSheaf, m: &[i64]) -> Vec<&'a Subspace> {
    let v = e.variety();
    (0..v.ray_count()).map(|k| e.filtration(k).evaluate(v.pairing(m, k))).collect()
}

/// `dim H^0(X, E)_m`.
pub fn h0_character(e: &EquivariantReflexiveSheaf, m: &[i64]) -> usize {
    Subspace::intersect_all(ray_spaces(e, m)).expect("common ambient").dim()
}

/// `dim H^n(X, E)_m`, the codimension of the sum of the ray pieces.
pub fn hn_character(e: &EquivariantReflexiveSheaf, m: &[i64]) -> usize {
    e.rank() - Subspace::sum_all(ray_spaces(e, m)).expect("common ambient").dim()
}

/// `chi(E)_m = sum_sigma (-1)^codim(sigma) dim E^sigma_m`.
pub fn euler_character(e: &EquivariantReflexiveSheaf, m: &[i64]) -> i64 {
    e.variety()
        .cones()
        .iter()
        .map(|c| {
            let d = sigma_piece(e, c, m).dim() as i64;
            if c.codim % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .sum()
}

/// Window containing every character with a nonzero contribution to any
/// cohomology group of `e`.
///
/// Per-character dimensions are constant on the chambers cut out by the
/// hyperplanes `<m, rho> = j - 1/2` (one per ray and jump value `j`). A lattice
/// point in an unbounded chamber has infinitely many lattice translates with
/// the same data, so finiteness of cohomology confines the support to the
/// bounded chambers, inside the hull of that arrangement's vertices. The
/// window is the outward-rounded bounding box of those vertices, widened to
/// keep a margin of 1 around the vertices of `<m, rho> = j`.
pub fn enumeration_box(e: &EquivariantReflexiveSheaf) -> CharacterBox {
    let v = e.variety();
    let n = v.dim();
    let mut jump_values: Vec<Vec<i64>> = e
        .filtrations()
        .iter()
        .map(|f| {
            let mut js = f.jumps().to_vec();
            js.dedup();
            js
        })
        .collect();
    for js in &mut jump_values {
        js.sort_unstable();
    }
    let half = BigRational::new(1.into(), 2.into());
    let mut lower: Vec<Option<i64>> = vec![None; n];
    let mut upper: Vec<Option<i64>> = vec![None; n];
    let mut absorb = |point: &[Rational], pad: i64| {
        for k in 0..n {
            let lo = floor_i64(&point[k]) - pad;
            let hi = ceil_i64(&point[k]) + pad;
            lower[k] = Some(lower[k].map_or(lo, |x| x.min(lo)));
            upper[k] = Some(upper[k].map_or(hi, |x| x.max(hi)));
        }
    };
    for rays in combinations(v.ray_count(), n) {
        let a: Vec<Vec<Rational>> = rays.iter().map(|&k| v.ray(k).iter().map(|&x| rat(x)).collect()).collect();
        for values in product(rays.iter().map(|&k| jump_values[k].len()).collect()) {
            let b: Vec<Rational> = rays.iter().zip(&values).map(|(&k, &i)| rat(jump_values[k][i])).collect();
            let Some(vertex) = solve_square(&a, &b) else { break };
            absorb(&vertex, 1);
            let shifted_b: Vec<Rational> = b.iter().map(|x| x - &half).collect();
            let shifted = solve_square(&a, &shifted_b).expect("same matrix");
            absorb(&shifted, 0);
        }
    }
    CharacterBox {
        lower: lower.into_iter().map(|x| x.unwrap_or(-1)).collect(),
        upper: upper.into_iter().map(|x| x.unwrap_or(1)).collect(),
    }
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All index tuples `0 <= t_i < sizes[i]`, lexicographic.
pub(crate) fn product(sizes: Vec<usize>) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for s in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..s).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}

fn levels(e: &EquivariantReflexiveSheaf, m: &[i64]) -> Vec<usize> {
    let v = e.variety();
    (0..v.ray_count()).map(|k| e.filtration(k).level(v.pairing(m, k))).collect()
}

/// Sums `f` over the enumeration window of `e`, evaluating `f` once per
/// distinct level vector.
fn sum_over_window<T, F>(e: &EquivariantReflexiveSheaf, mut f: F) -> Result<T>
where
    T: Clone + std::iter::Sum<T> + std::ops::Add<Output = T> + Zero,
    F: FnMut(&[i64]) -> Result<T>,
{
    let window = enumeration_box(e);
    let mut memo: HashMap<Vec<usize>, T> = HashMap::new();
    let mut total = T::zero();
    for m in window.points() {
        let key = levels(e, &m);
        let value = match memo.get(&key) {
            Some(v) => v.clone(),
            None => {
                let v = f(&m)?;
                memo.insert(key, v.clone());
                v
            }
        };
        total = total + value;
    }
    Ok(total)
}

/// `h^0(X, E(c))` by summing `h0_character` over characters.
pub fn h0_dim(e: &EquivariantReflexiveSheaf, c: &ClassElement) -> Result<u64> {
    let tw = e.twist(c)?;
    sum_over_window(&tw, |m| Ok(h0_character(&tw, m) as u64))
}

/// `h^n(X, E(c))` by summing `hn_character` over characters.
pub fn hn_dim(e: &EquivariantReflexiveSheaf, c: &ClassElement) -> Result<u64> {
    let tw = e.twist(c)?;
    sum_over_window(&tw, |m| Ok(hn_character(&tw, m) as u64))
}

/// `chi(X, E(c))` by summing `euler_character` over characters.
pub fn euler_sum(e: &EquivariantReflexiveSheaf, c: &ClassElement) -> Result<i64> {
    let tw = e.twist(c)?;
    sum_over_window(&tw, |m| Ok(euler_character(&tw, m)))
}

/// Intersections of the maximal cones, grouped by the number of cones intersected.
struct CechNerve {
    /// `simplices[k]`: sorted `(k+1)`-tuples of maximal-cone indices.
    simplices: Vec<Vec<Vec<usize>>>,
    /// Rays of the intersection cone, aligned with `simplices`.
    rays: Vec<Vec<Vec<usize>>>,
    /// Position lookup per degree.
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl CechNerve {
    fn new(maximal: &[&Cone]) -> Self {
        let n = maximal.len();
        let mut simplices = Vec::with_capacity(n);
        let mut rays = Vec::with_capacity(n);
        let mut index = Vec::with_capacity(n);
        for size in 1..=n {
            let tuples = combinations(n, size);
            let ray_sets = tuples
                .iter()
                .map(|t| {
                    let mut common = maximal[t[0]].rays.clone();
                    for &i in &t[1..] {
                        common.retain(|r| maximal[i].rays.contains(r));
                    }
                    common
                })
                .collect();
            index.push(tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect());
            simplices.push(tuples);
            rays.push(ray_sets);
        }
        CechNerve { simplices, rays, index }
    }

    /// Dimensions of `H^0..H^{N-1}` of the Čech complex at a character.
    fn cohomology(&self, e: &EquivariantReflexiveSheaf, m: &[i64]) -> Vec<u64> {
        let v = e.variety();
        let ray_space: Vec<&Subspace> = (0..v.ray_count()).map(|k| e.filtration(k).evaluate(v.pairing(m, k))).collect();
        let pieces: Vec<Vec<Subspace>> = self
            .rays
            .iter()
            .map(|deg| {
                deg.iter()
                    .map(|rs| {
                        Subspace::intersect_all(std::iter::once(&Subspace::full(e.rank())).chain(rs.iter().map(|&k| ray_space[k])))
                            .expect("common ambient")
                    })
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = pieces.iter().map(|deg| deg.iter().map(Subspace::dim).sum()).collect();
        // ranks[k] = rank of d^k : C^k -> C^{k+1}
        let ranks: Vec<usize> = (0..self.simplices.len().saturating_sub(1))
            .map(|k| self.differential_rank(&pieces, k, dims[k], dims[k + 1]))
            .collect();
        (0..dims.len())
            .map(|k| {
                let out = if k < ranks.len() { ranks[k] } else { 0 };
                let inc = if k > 0 { ranks[k - 1] } else { 0 };
                (dims[k] - out - inc) as u64
            })
            .collect()
    }

    fn differential_rank(&self, pieces: &[Vec<Subspace>], k: usize, src_dim: usize, dst_dim: usize) -> usize {
        if src_dim == 0 || dst_dim == 0 {
            return 0;
        }
        let src_offsets = offsets(&pieces[k]);
        let mut rows = Vec::with_capacity(dst_dim);
        for (t, target) in self.simplices[k + 1].iter().enumerate() {
            let tgt = &pieces[k + 1][t];
            for coord in 0..tgt.dim() {
                let mut row = vec![Rational::zero(); src_dim];
                for drop in 0..target.len() {
                    let mut face = target.clone();
                    face.remove(drop);
                    let s = self.index[k][&face];
                    let src = &pieces[k][s];
                    for (b, vec) in src.basis().iter().enumerate() {
                        let c = &vec[tgt.pivots()[coord]];
                        if c.is_zero() {
                            continue;
                        }
                        let entry = &mut row[src_offsets[s] + b];
                        if drop % 2 == 0 {
                            *entry += c;
                        } else {
                            *entry -= c;
                        }
                    }
                }
                rows.push(row);
            }
        }
        rank(rows, src_dim)
    }
}

fn offsets(pieces: &[Subspace]) -> Vec<usize> {
    let mut acc = 0;
    pieces
        .iter()
        .map(|p| {
            let o = acc;
            acc += p.dim();
            o
        })
        .collect()
}

/// `(h^0, ..., h^n)` of `E(c)` from the Čech complex of the maximal-cone cover.
pub fn cech_cohomology(e: &EquivariantReflexiveSheaf, c: &ClassElement) -> Result<Vec<u64>> {
    let tw = e.twist(c)?;
    let v = tw.variety();
    let nerve = CechNerve::new(&v.maximal_cones());
    let total: CechDims = sum_over_window(&tw, |m| Ok(CechDims(nerve.cohomology(&tw, m))))?;
    let n = v.dim();
    let mut dims = total.0;
    dims.resize(dims.len().max(n + 1), 0);
    if let Some(k) = (n + 1..dims.len()).find(|&k| dims[k] != 0) {
        return Err(Error::Internal(format!("Čech complex has H^{k} = {} above the dimension {n}", dims[k])));
    }
    dims.truncate(n + 1);
    Ok(dims)
}

/// `h^1` of `E(c)` on a surface via `h^1 = h^0 + h^2 - chi`.
pub fn h1_surface(e: &EquivariantReflexiveSheaf, c: &ClassElement) -> Result<i64> {
    if e.variety().dim() != 2 {
        return Err(Error::unsupported(format!("h1_surface needs a surface, got dimension {}", e.variety().dim())));
    }
    Ok(h0_dim(e, c)? as i64 + hn_dim(e, c)? as i64 - euler_sum(e, c)?)
}

#[derive(Clone, Default)]
struct CechDims(Vec<u64>);

impl std::ops::Add for CechDims {
    type Output = CechDims;
    fn add(self, rhs: CechDims) -> CechDims {
        let n = self.0.len().max(rhs.0.len());
        CechDims((0..n).map(|i| self.0.get(i).unwrap_or(&0) + rhs.0.get(i).unwrap_or(&0)).collect())
    }
}

impl Zero for CechDims {
    fn zero() -> Self {
        CechDims(Vec::new())
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl std::iter::Sum for CechDims {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(CechDims::zero(), |a, b| a + b)
    }
}
