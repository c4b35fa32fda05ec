//! Fans of the supported smooth complete toric varieties.
//!
//! Three families are available: projective space `P^n`, the Hirzebruch
//! surfaces `H_a`, and the projectivized split bundles
//! `V_s(a_1, ..., a_r) = P(O ⊕ O(a_1) ⊕ ... ⊕ O(a_r))` over `P^s`.
//! `H_a` is `V_1(a)` and is built with exactly the same data.
//!
//! Ray order is fixed: `rho_0, ..., rho_s` then `eta_0, ..., eta_r` (for `P^n`
//! only `rho_0, ..., rho_n`). The class group is free with basis
//! `[D_rho0]` (and `[D_eta0]` for split bundles).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Family descriptor, also the configuration-file shape of a variety.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    #[serde(rename = "projective")]
    ProjectiveSpace { n: usize },
    Hirzebruch { a: i64 },
    SplitBundle { s: usize, a: Vec<i64> },
}

/// A cone of the fan, given by the indices of its rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    pub rays: Vec<usize>,
    pub codim: usize,
}

/// Class group element in the coordinates of the variety's class basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassElement(pub Vec<i64>);

impl ClassElement {
    pub fn zero(rank: usize) -> Self {
        ClassElement(vec![0; rank])
    }

    /// `p [D_rho0] + q [D_eta0]` on a split bundle.
    pub fn pq(p: i64, q: i64) -> Self {
        ClassElement(vec![p, q])
    }

    pub fn add(&self, other: &ClassElement) -> ClassElement {
        ClassElement(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> ClassElement {
        ClassElement(self.0.iter().map(|a| -a).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricVariety {
    family: Family,
    dim: usize,
    rays: Vec<Vec<i64>>,
    ray_names: Vec<String>,
    degrees: Vec<Vec<i64>>,
    cones: Vec<Cone>,
}

/// `(s, a_1..a_r)` for the split-bundle families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitData<'a> {
    pub s: usize,
    pub a: &'a [i64],
}

impl SplitData<'_> {
    pub fn r(&self) -> usize {
        self.a.len()
    }

    pub fn a_max(&self) -> i64 {
        self.a.last().copied().unwrap_or(0)
    }

    /// Index of `rho_t`.
    pub fn rho(&self, t: usize) -> usize {
        t
    }

    /// Index of `eta_u`.
    pub fn eta(&self, u: usize) -> usize {
        self.s + 1 + u
    }
}

impl ToricVariety {
    pub fn new(family: Family) -> Result<Self> {
        match &family {
            Family::ProjectiveSpace { n } => {
                if *n == 0 {
                    return Err(Error::invalid("projective space needs n >= 1"));
                }
                Ok(Self::projective(*n, family.clone()))
            }
            Family::Hirzebruch { a } => {
                if *a < 0 {
                    return Err(Error::invalid(format!("Hirzebruch parameter must be >= 0, got {a}")));
                }
                Ok(Self::split_bundle(1, &[*a], family.clone()))
            }
            Family::SplitBundle { s, a } => {
                if *s == 0 {
                    return Err(Error::invalid("split bundle needs s >= 1"));
                }
                if a.is_empty() {
                    return Err(Error::invalid("split bundle needs at least one weight a_1"));
                }
                if a.iter().any(|&x| x < 0) {
                    return Err(Error::invalid(format!("split bundle weights must be >= 0, got {a:?}")));
                }
                if a.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::invalid(format!("split bundle weights must be weakly increasing, got {a:?}")));
                }
                Ok(Self::split_bundle(*s, a, family.clone()))
            }
        }
    }

    pub fn projective_space(n: usize) -> Result<Self> {
        Self::new(Family::ProjectiveSpace { n })
    }

    pub fn hirzebruch(a: i64) -> Result<Self> {
        Self::new(Family::Hirzebruch { a })
    }

    pub fn split(s: usize, a: &[i64]) -> Result<Self> {
        Self::new(Family::SplitBundle { s, a: a.to_vec() })
    }

    fn projective(n: usize, family: Family) -> Self {
        let mut rays = vec![vec![-1; n]];
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            rays.push(e);
        }
        let ray_names = (0..=n).map(|i| format!("rho{i}")).collect();
        let degrees = vec![vec![1]; n + 1];
        let all: Vec<usize> = (0..=n).collect();
        let cones = proper_subsets(&all)
            .into_iter()
            .map(|rays| Cone { codim: n - rays.len(), rays })
            .collect();
        let mut v = ToricVariety { family, dim: n, rays, ray_names, degrees, cones };
        v.cones.sort_by(|x, y| (x.rays.len(), &x.rays).cmp(&(y.rays.len(), &y.rays)));
        v
    }

    fn split_bundle(s: usize, a: &[i64], family: Family) -> Self {
        let r = a.len();
        let dim = s + r;
        let mut rays = Vec::with_capacity(dim + 2);
        let mut rho0 = vec![-1; s];
        rho0.extend_from_slice(a);
        rays.push(rho0);
        for i in 0..s {
            let mut e = vec![0; dim];
            e[i] = 1;
            rays.push(e);
        }
        let mut eta0 = vec![0; s];
        eta0.extend(std::iter::repeat_n(-1, r));
        rays.push(eta0);
        for j in 0..r {
            let mut f = vec![0; dim];
            f[s + j] = 1;
            rays.push(f);
        }
        let mut ray_names: Vec<String> = (0..=s).map(|i| format!("rho{i}")).collect();
        ray_names.extend((0..=r).map(|j| format!("eta{j}")));
        let mut degrees = vec![vec![1, 0]; s + 1];
        degrees.push(vec![0, 1]);
        degrees.extend(a.iter().map(|&aj| vec![-aj, 1]));

        let rho_idx: Vec<usize> = (0..=s).collect();
        let eta_idx: Vec<usize> = (s + 1..=s + r + 1).collect();
        let mut cones = Vec::new();
        for x in proper_subsets(&rho_idx) {
            for y in proper_subsets(&eta_idx) {
                let mut rays: Vec<usize> = x.iter().chain(&y).copied().collect();
                rays.sort_unstable();
                cones.push(Cone { codim: dim - rays.len(), rays });
            }
        }
        cones.sort_by(|x, y| (x.rays.len(), &x.rays).cmp(&(y.rays.len(), &y.rays)));
        ToricVariety { family, dim, rays, ray_names, degrees, cones }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn class_rank(&self) -> usize {
        self.rays.len() - self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, index: usize) -> &[i64] {
        &self.rays[index]
    }

    pub fn ray_names(&self) -> &[String] {
        &self.ray_names
    }

    pub fn ray_index(&self, name: &str) -> Option<usize> {
        self.ray_names.iter().position(|n| n == name)
    }

    /// Class of `D_rho` (the degree of the Cox variable `x_rho`).
    pub fn degree(&self, ray: usize) -> &[i64] {
        &self.degrees[ray]
    }

    /// `Some` for Hirzebruch surfaces and split bundles.
    pub fn split_data(&self) -> Option<SplitData<'_>> {
        match &self.family {
            Family::ProjectiveSpace { .. } => None,
            Family::Hirzebruch { a } => Some(SplitData { s: 1, a: std::slice::from_ref(a) }),
            Family::SplitBundle { s, a } => Some(SplitData { s: *s, a }),
        }
    }

    pub fn require_split(&self) -> Result<SplitData<'_>> {
        self.split_data()
            .ok_or_else(|| Error::unsupported("operation is only available for Hirzebruch surfaces and split bundles"))
    }

    /// `<m, n(rho)>`.
    pub fn pairing(&self, m: &[i64], ray: usize) -> i64 {
        debug_assert_eq!(m.len(), self.dim);
        m.iter().zip(&self.rays[ray]).map(|(a, b)| a * b).sum()
    }

    /// `phi(m)`: all pairings in ray order.
    pub fn embed_character(&self, m: &[i64]) -> Vec<i64> {
        (0..self.rays.len()).map(|k| self.pairing(m, k)).collect()
    }

    /// All cones including the zero cone, ordered by size then ray indices.
    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn maximal_cones(&self) -> Vec<&Cone> {
        self.cones.iter().filter(|c| c.codim == 0).collect()
    }

    pub fn is_cone(&self, rays: &[usize]) -> bool {
        let mut sorted = rays.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        self.cones.iter().any(|c| c.rays == sorted)
    }

    /// Weil divisor representative of a class: supported on `rho_0` (and `eta_0`).
    pub fn twist_divisor(&self, c: &ClassElement) -> Result<Vec<i64>> {
        if c.0.len() != self.class_rank() {
            return Err(Error::DimensionMismatch { expected: self.class_rank(), found: c.0.len() });
        }
        let mut coeffs = vec![0; self.ray_count()];
        coeffs[0] = c.0[0];
        if let Some(sd) = self.split_data() {
            coeffs[sd.eta(0)] = c.0[1];
        }
        Ok(coeffs)
    }

    /// `[sum a_rho D_rho]`.
    pub fn class_of_divisor(&self, coeffs: &[i64]) -> ClassElement {
        let mut out = vec![0; self.class_rank()];
        for (a, deg) in coeffs.iter().zip(&self.degrees) {
            for (o, d) in out.iter_mut().zip(deg) {
                *o += a * d;
            }
        }
        ClassElement(out)
    }
}

fn proper_subsets(items: &[usize]) -> Vec<Vec<usize>> {
    let n = items.len();
    (0u64..(1u64 << n) - 1)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| items[i]).collect())
        .collect()
}

#[cfg(test)]
fn all_subsets(items: &[usize]) -> Vec<std::collections::BTreeSet<usize>> {
    let n = items.len();
    (0u64..(1u64 << n)).map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| items[i]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    #[test]
    fn hirzebruch_three_rays_and_degrees() {
        let v = ToricVariety::hirzebruch(3).unwrap();
        assert_eq!(v.rays(), &[vec![-1, 3], vec![1, 0], vec![0, -1], vec![0, 1]]);
        let degrees: Vec<&[i64]> = (0..4).map(|k| v.degree(k)).collect();
        assert_eq!(degrees, vec![&[1, 0][..], &[1, 0], &[0, 1], &[-3, 1]]);
        assert_eq!(v.class_rank(), 2);
    }

    #[test]
    fn hirzebruch_matches_split_bundle() {
        let h = ToricVariety::hirzebruch(2).unwrap();
        let s = ToricVariety::split(1, &[2]).unwrap();
        assert_eq!(h.rays(), s.rays());
        assert_eq!(h.cones(), s.cones());
        assert_eq!(h.ray_names(), s.ray_names());
        assert_eq!(h.degrees, s.degrees);
        assert_eq!(h.split_data(), s.split_data());
    }

    #[test]
    fn projective_plane() {
        let v = ToricVariety::projective_space(2).unwrap();
        assert_eq!(v.ray_count(), 3);
        assert!((0..3).all(|k| v.degree(k) == [1]));
        assert_eq!(v.cones().len(), 7);
        assert_eq!(v.embed_character(&[2, 5]), vec![-7, 2, 5]);
    }

    #[test]
    fn split_bundle_counts() {
        let v = ToricVariety::split(2, &[0, 0]).unwrap();
        assert_eq!(v.ray_count(), 6);
        assert_eq!(v.class_rank(), 2);
        assert_eq!(v.dim(), 4);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(ToricVariety::split(1, &[2, 1]).is_err());
        assert!(ToricVariety::split(1, &[-1]).is_err());
        assert!(ToricVariety::hirzebruch(-2).is_err());
        assert!(ToricVariety::projective_space(0).is_err());
    }

    #[test]
    fn hirzebruch_pairing_tuple() {
        let v = ToricVariety::hirzebruch(3).unwrap();
        let (d1, d2) = (4, -7);
        assert_eq!(v.embed_character(&[d1, d2]), vec![-d1 + 3 * d2, d1, -d2, d2]);
        assert_eq!(v.embed_character(&[0, 0]), vec![0; 4]);
    }

    #[test]
    fn cone_counts() {
        assert_eq!(ToricVariety::hirzebruch(5).unwrap().cones().len(), 9);
        assert_eq!(ToricVariety::hirzebruch(5).unwrap().maximal_cones().len(), 4);
        for (s, a) in [(1usize, vec![0i64]), (1, vec![1, 2]), (2, vec![1]), (2, vec![1, 2])] {
            let v = ToricVariety::split(s, &a).unwrap();
            let r = a.len() as u32;
            let expected = (2usize.pow(s as u32 + 1) - 1) * (2usize.pow(r + 1) - 1);
            assert_eq!(v.cones().len(), expected);
        }
    }

    /// Exhaustive oracle: a ray subset is a cone iff its generators are
    /// contained in some maximal cone, and maximal cones are exactly the
    /// subsets missing one rho-ray and one eta-ray.
    #[test]
    fn cones_are_faces_of_maximal_cones() {
        for (s, a) in [(1usize, vec![3i64]), (2, vec![0, 1]), (1, vec![1, 2])] {
            let v = ToricVariety::split(s, &a).unwrap();
            let n = v.ray_count();
            let maxes: Vec<BTreeSet<usize>> =
                v.maximal_cones().iter().map(|c| c.rays.iter().copied().collect()).collect();
            assert_eq!(maxes.len(), (s + 1) * (a.len() + 1));
            let faces = all_subsets(&(0..n).collect::<Vec<_>>())
                .into_iter()
                .filter(|sub| maxes.iter().any(|m| sub.is_subset(m)))
                .count();
            assert_eq!(faces, v.cones().len());
            for c in v.maximal_cones() {
                assert_eq!(c.rays.len(), v.dim());
            }
        }
    }

    #[test]
    fn twist_divisor_representatives() {
        let h = ToricVariety::hirzebruch(3).unwrap();
        assert_eq!(h.twist_divisor(&ClassElement::pq(5, -2)).unwrap(), vec![5, 0, -2, 0]);
        assert_eq!(h.twist_divisor(&ClassElement::zero(2)).unwrap(), vec![0; 4]);
        let p2 = ToricVariety::projective_space(2).unwrap();
        assert_eq!(p2.twist_divisor(&ClassElement(vec![2])).unwrap(), vec![2, 0, 0]);
        assert!(p2.twist_divisor(&ClassElement(vec![1, 1])).is_err());
    }

    #[test]
    fn rho1_is_linearly_equivalent_to_rho0() {
        let h = ToricVariety::hirzebruch(4).unwrap();
        assert_eq!(h.class_of_divisor(&[0, 1, 0, 0]), h.class_of_divisor(&[1, 0, 0, 0]));
        assert_eq!(h.degree(3), &[-4, 1]);
    }

    #[test]
    fn principal_divisors_have_zero_class() {
        for v in [
            ToricVariety::projective_space(3).unwrap(),
            ToricVariety::hirzebruch(3).unwrap(),
            ToricVariety::split(2, &[1, 2]).unwrap(),
        ] {
            for seed in 0..20i64 {
                let m: Vec<i64> = (0..v.dim() as i64).map(|i| (seed * 7 + i * 13) % 11 - 5).collect();
                let div = v.embed_character(&m);
                assert_eq!(v.class_of_divisor(&div), ClassElement::zero(v.class_rank()));
            }
        }
    }
}
