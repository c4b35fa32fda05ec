//! Klyachko filtrations and equivariant reflexive sheaves.
//!
//! A rank-`l` reflexive sheaf is one increasing filtration of `Q^l` per ray:
//! `E(i) = 0` for `i < i_1`, `E_j` for `i_j <= i < i_{j+1}`, and the whole
//! space for `i >= i_l`. Exactly `l` jump/space pairs are stored per ray, with
//! repeats allowed when consecutive jumps coincide.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact_linalg::Subspace;
use crate::toric::{ClassElement, ToricVariety};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KlyachkoFiltration {
    jumps: Vec<i64>,
    spaces: Vec<Subspace>,
    zero: Subspace,
}

impl KlyachkoFiltration {
    /// Builds a filtration from `l` jumps and `l` spaces (or `l - 1`, the whole
    /// space being implied last). Only shapes are checked here; see
    /// [`KlyachkoFiltration::violations`] for the filtration axioms.
    pub fn new(jumps: Vec<i64>, mut spaces: Vec<Subspace>, rank: usize) -> Result<Self> {
        if jumps.len() != rank {
            return Err(Error::invalid(format!("expected {rank} jumps, found {}", jumps.len())));
        }
        if spaces.len() + 1 == rank {
            spaces.push(Subspace::full(rank));
        }
        if spaces.len() != rank {
            return Err(Error::invalid(format!("expected {rank} spaces, found {}", spaces.len())));
        }
        if let Some(s) = spaces.iter().find(|s| s.ambient_dim() != rank) {
            return Err(Error::DimensionMismatch { expected: rank, found: s.ambient_dim() });
        }
        Ok(KlyachkoFiltration { jumps, spaces, zero: Subspace::zero(rank) })
    }

    /// Filtration of a rank-1 sheaf jumping at `jump`.
    pub fn rank_one(jump: i64) -> Self {
        KlyachkoFiltration { jumps: vec![jump], spaces: vec![Subspace::full(1)], zero: Subspace::zero(1) }
    }

    pub fn rank(&self) -> usize {
        self.jumps.len()
    }

    pub fn jumps(&self) -> &[i64] {
        &self.jumps
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn first_jump(&self) -> i64 {
        self.jumps[0]
    }

    pub fn top_jump(&self) -> i64 {
        self.jumps[self.jumps.len() - 1]
    }

    /// Number of jumps `<= i`; `0` means the zero space.
    pub fn level(&self, i: i64) -> usize {
        self.jumps.iter().take_while(|&&j| j <= i).count()
    }

    /// Space at a level as returned by [`KlyachkoFiltration::level`].
    pub fn space_at_level(&self, level: usize) -> &Subspace {
        if level == 0 {
            &self.zero
        } else {
            &self.spaces[level - 1]
        }
    }

    /// `E(i)`.
    pub fn evaluate(&self, i: i64) -> &Subspace {
        self.space_at_level(self.level(i))
    }

    pub fn shifted(&self, by: i64) -> Self {
        KlyachkoFiltration {
            jumps: self.jumps.iter().map(|j| j + by).collect(),
            spaces: self.spaces.clone(),
            zero: self.zero.clone(),
        }
    }

    /// Every violated filtration axiom, as human-readable messages.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.jumps.windows(2).any(|w| w[0] > w[1]) {
            out.push(format!("jumps not weakly increasing: {:?}", self.jumps));
        }
        for (j, w) in self.spaces.windows(2).enumerate() {
            if !w[0].is_subspace_of(&w[1]) {
                out.push(format!("spaces not increasing: E_{} is not contained in E_{}", j + 1, j + 2));
            }
        }
        if !self.spaces.last().is_some_and(Subspace::is_full) {
            out.push("last space is not the whole space".to_string());
        }
        for j in 0..self.jumps.len().saturating_sub(1) {
            let same_jump = self.jumps[j] == self.jumps[j + 1];
            let same_space = self.spaces[j] == self.spaces[j + 1];
            if same_jump != same_space {
                out.push(format!(
                    "i_{a} = i_{b} must hold exactly when E_{a} = E_{b} (jumps {} and {}, spaces {})",
                    self.jumps[j],
                    self.jumps[j + 1],
                    if same_space { "equal" } else { "different" },
                    a = j + 1,
                    b = j + 2,
                ));
            }
        }
        out
    }
}

/// One violated invariant, attached to a ray when it concerns a single ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub ray: Option<usize>,
    pub ray_name: Option<String>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.ray_name {
            Some(name) => write!(f, "ray {name}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// Equivariant reflexive sheaf: one Klyachko filtration per ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantReflexiveSheaf {
    variety: ToricVariety,
    rank: usize,
    filtrations: Vec<KlyachkoFiltration>,
}

impl EquivariantReflexiveSheaf {
    /// Checks the shape (one filtration per ray, common rank). The filtration
    /// axioms are reported by [`EquivariantReflexiveSheaf::validate`].
    pub fn new(variety: ToricVariety, filtrations: Vec<KlyachkoFiltration>) -> Result<Self> {
        if filtrations.len() != variety.ray_count() {
            return Err(Error::invalid(format!(
                "expected {} filtrations (one per ray), found {}",
                variety.ray_count(),
                filtrations.len()
            )));
        }
        let rank = filtrations.first().map(KlyachkoFiltration::rank).unwrap_or(0);
        if rank == 0 {
            return Err(Error::invalid("rank must be at least 1"));
        }
        if let Some(f) = filtrations.iter().find(|f| f.rank() != rank) {
            return Err(Error::DimensionMismatch { expected: rank, found: f.rank() });
        }
        Ok(EquivariantReflexiveSheaf { variety, rank, filtrations })
    }

    /// Like [`EquivariantReflexiveSheaf::new`] but also rejects axiom violations.
    pub fn new_validated(variety: ToricVariety, filtrations: Vec<KlyachkoFiltration>) -> Result<Self> {
        let e = Self::new(variety, filtrations)?;
        let diags = e.validate();
        if !diags.is_empty() {
            let msgs: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
            return Err(Error::invalid(msgs.join("; ")));
        }
        Ok(e)
    }

    /// `O(D)` for `D = sum a_rho D_rho`: rank one, jump `-a_rho` on each ray.
    pub fn line_bundle(variety: &ToricVariety, divisor: &[i64]) -> Result<Self> {
        if divisor.len() != variety.ray_count() {
            return Err(Error::DimensionMismatch { expected: variety.ray_count(), found: divisor.len() });
        }
        let filtrations = divisor.iter().map(|&a| KlyachkoFiltration::rank_one(-a)).collect();
        Self::new(variety.clone(), filtrations)
    }

    pub fn variety(&self) -> &ToricVariety {
        &self.variety
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn filtrations(&self) -> &[KlyachkoFiltration] {
        &self.filtrations
    }

    pub fn filtration(&self, ray: usize) -> &KlyachkoFiltration {
        &self.filtrations[ray]
    }

    /// Empty when every filtration satisfies the axioms.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let names = self.variety.ray_names();
        self.filtrations
            .iter()
            .enumerate()
            .flat_map(|(k, f)| {
                f.violations().into_iter().map(move |message| Diagnostic {
                    ray: Some(k),
                    ray_name: Some(names[k].clone()),
                    message,
                })
            })
            .collect()
    }

    /// Shifts the jumps on ray `rho` by `-a_rho` for an arbitrary divisor.
    pub fn twist_by_divisor(&self, divisor: &[i64]) -> Result<Self> {
        if divisor.len() != self.variety.ray_count() {
            return Err(Error::DimensionMismatch { expected: self.variety.ray_count(), found: divisor.len() });
        }
        Ok(EquivariantReflexiveSheaf {
            variety: self.variety.clone(),
            rank: self.rank,
            filtrations: self.filtrations.iter().zip(divisor).map(|(f, a)| f.shifted(-a)).collect(),
        })
    }

    /// `E(c)`, using the fixed divisor representative of `c`.
    pub fn twist(&self, c: &ClassElement) -> Result<Self> {
        let divisor = self.variety.twist_divisor(c)?;
        self.twist_by_divisor(&divisor)
    }

    /// `delta_E` and the normalized sheaf `E(delta_E)`, whose top jumps are all 0.
    ///
    /// `delta_E = sum_tau k^tau_l [D_tau]`; the returned filtrations are
    /// obtained by twisting with that divisor, which represents the class
    /// `delta_E`.
    pub fn delta_normalization(&self) -> Result<(ClassElement, Self)> {
        let sd = self.variety.require_split()?;
        let top = |k: usize| self.filtrations[k].top_jump();
        let sum_i: i64 = (0..=sd.s).map(|t| top(sd.rho(t))).sum();
        let weighted_j: i64 = (1..=sd.r()).map(|u| sd.a[u - 1] * top(sd.eta(u))).sum();
        let sum_j: i64 = (0..=sd.r()).map(|u| top(sd.eta(u))).sum();
        let delta = ClassElement::pq(sum_i - weighted_j, sum_j);
        let tops: Vec<i64> = (0..self.variety.ray_count()).map(top).collect();
        debug_assert_eq!(self.variety.class_of_divisor(&tops), delta);
        Ok((delta, self.twist_by_divisor(&tops)?))
    }
}

/// Degrees of a presentation `⊕ R(m^i) -> ⊕ R(mu^j) -> E -> 0`, as vectors in `Z^rays`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationDegrees {
    pub generator_degrees: Vec<Vec<i64>>,
    pub relation_degrees: Vec<Vec<i64>>,
}

impl PresentationDegrees {
    /// Per ray `[lo, hi]` with `lo <= i_1` and `i_l <= hi` for every reflexive
    /// quotient with these degrees. Without relations `hi` is taken from the
    /// generators.
    pub fn jump_bounds(&self) -> Result<Vec<(i64, i64)>> {
        let first = self
            .generator_degrees
            .first()
            .ok_or_else(|| Error::invalid("presentation needs at least one generator"))?;
        let n = first.len();
        if let Some(v) = self.generator_degrees.iter().chain(&self.relation_degrees).find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        let upper_source =
            if self.relation_degrees.is_empty() { &self.generator_degrees } else { &self.relation_degrees };
        Ok((0..n)
            .map(|k| {
                let lo = -self.generator_degrees.iter().map(|v| v[k]).max().unwrap();
                let hi = -upper_source.iter().map(|v| v[k]).min().unwrap();
                (lo, hi)
            })
            .collect())
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn filtration(jumps: &[i64], gens: &[&[&[i64]]], rank: usize) -> KlyachkoFiltration {
        let spaces = gens.iter().map(|g| Subspace::span_int(g, rank).unwrap()).collect();
        KlyachkoFiltration::new(jumps.to_vec(), spaces, rank).unwrap()
    }

    /// Tangent sheaf of `H_3`.
    pub fn tangent_h3() -> EquivariantReflexiveSheaf {
        let v = ToricVariety::hirzebruch(3).unwrap();
        let fs = vec![
            filtration(&[-1, 0], &[&[&[3, 1]]], 2),
            filtration(&[-1, 0], &[&[&[0, 1]]], 2),
            filtration(&[-1, 0], &[&[&[1, 0]]], 2),
            filtration(&[-1, 0], &[&[&[1, 0]]], 2),
        ];
        EquivariantReflexiveSheaf::new_validated(v, fs).unwrap()
    }

    /// The rank-3 sheaf on `H_3` with general filtrations.
    pub fn rank3_h3() -> EquivariantReflexiveSheaf {
        let v = ToricVariety::hirzebruch(3).unwrap();
        let fs = vec![
            filtration(&[-3, -1, 0], &[&[&[3, 3, 1]], &[&[3, 3, 1], &[4, 0, 2]]], 3),
            filtration(&[-9, -3, 0], &[&[&[9, 4, 8]], &[&[9, 4, 8], &[2, 8, 8]]], 3),
            filtration(&[-4, -1, 0], &[&[&[0, 6, 3]], &[&[0, 6, 3], &[7, 1, 3]]], 3),
            filtration(&[-2, -1, 0], &[&[&[4, 0, 4]], &[&[4, 0, 4], &[9, 8, 0]]], 3),
        ];
        EquivariantReflexiveSheaf::new_validated(v, fs).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn line_bundle_evaluation() {
        let v = ToricVariety::projective_space(2).unwrap();
        let o = EquivariantReflexiveSheaf::line_bundle(&v, &[0, 0, 0]).unwrap();
        assert!(o.filtrations().iter().all(|f| f.jumps() == [0]));
        let o2 = EquivariantReflexiveSheaf::line_bundle(&v, &[2, 0, 0]).unwrap();
        assert_eq!(o2.filtration(0).jumps(), &[-2]);
        assert!(o2.filtration(0).evaluate(-3).is_zero());
        assert!(o2.filtration(0).evaluate(-2).is_full());
        let h = ToricVariety::hirzebruch(3).unwrap();
        let l = EquivariantReflexiveSheaf::line_bundle(&h, &[0, 0, -1, 0]).unwrap();
        assert_eq!(l.filtration(2).jumps(), &[1]);
    }

    #[test]
    fn tangent_evaluation() {
        let t = tangent_h3();
        assert_eq!(t.filtration(1).evaluate(-1), &Subspace::span_int(&[&[0, 1]], 2).unwrap());
        assert!(t.filtration(1).evaluate(-2).is_zero());
        assert!(t.filtration(1).evaluate(0).is_full());
        assert!(t.filtration(1).evaluate(-100).is_zero());
        assert!(t.validate().is_empty());
    }

    #[test]
    fn twist_shifts_rho0_and_eta0() {
        let e = rank3_h3();
        let tw = e.twist(&ClassElement::pq(2, -5)).unwrap();
        assert_eq!(tw.filtration(0).jumps(), &[-5, -3, -2]);
        assert_eq!(tw.filtration(1).jumps(), e.filtration(1).jumps());
        assert_eq!(tw.filtration(2).jumps(), &[1, 4, 5]);
        assert_eq!(tw.filtration(3).jumps(), e.filtration(3).jumps());
        assert_eq!(tw.filtration(0).spaces(), e.filtration(0).spaces());
        assert_eq!(e.twist(&ClassElement::zero(2)).unwrap(), e);
        let back = tw.twist(&ClassElement::pq(-2, 5)).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn delta_of_normalized_example_is_zero() {
        let e = rank3_h3();
        let (delta, norm) = e.delta_normalization().unwrap();
        assert_eq!(delta, ClassElement::pq(0, 0));
        assert_eq!(norm, e);
    }

    #[test]
    fn delta_of_line_bundle() {
        for a in 0..4 {
            let h = ToricVariety::hirzebruch(a).unwrap();
            for (p, q) in [(2, 3), (-1, 4), (0, -2)] {
                let l = EquivariantReflexiveSheaf::line_bundle(&h, &[p, 0, q, 0]).unwrap();
                let (delta, norm) = l.delta_normalization().unwrap();
                assert_eq!(delta, ClassElement::pq(-p, -q));
                assert!(norm.filtrations().iter().all(|f| f.top_jump() == 0));
            }
        }
    }

    #[test]
    fn delta_requires_split_bundle() {
        let v = ToricVariety::projective_space(2).unwrap();
        let o = EquivariantReflexiveSheaf::line_bundle(&v, &[1, 0, 0]).unwrap();
        assert!(matches!(o.delta_normalization(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn normalized_top_level_is_full() {
        let t = tangent_h3().twist(&ClassElement::pq(4, -3)).unwrap();
        let (_, n) = t.delta_normalization().unwrap();
        for f in n.filtrations() {
            assert!(f.evaluate(0).is_full());
            assert!(!f.evaluate(-1).is_full());
        }
    }

    #[test]
    fn presentation_bounds_tangent() {
        let p = PresentationDegrees {
            generator_degrees: vec![vec![0, 0, 1, 1], vec![0, 1, 0, 0], vec![1, 0, 0, 0]],
            relation_degrees: vec![vec![0, 0, 0, 0]],
        };
        let b = p.jump_bounds().unwrap();
        assert_eq!(b[0], (-1, 0));
        let t = tangent_h3();
        for (k, &(lo, hi)) in b.iter().enumerate() {
            assert!(lo <= t.filtration(k).first_jump() && t.filtration(k).top_jump() <= hi);
        }
    }

    #[test]
    fn presentation_bounds_free_module() {
        let p = PresentationDegrees { generator_degrees: vec![vec![0; 4]], relation_degrees: vec![] };
        assert_eq!(p.jump_bounds().unwrap(), vec![(0, 0); 4]);
        let p = PresentationDegrees { generator_degrees: vec![vec![1, 0, 0], vec![0, 0, 0]], relation_degrees: vec![] };
        assert_eq!(p.jump_bounds().unwrap()[0].0, -1);
        let empty = PresentationDegrees { generator_degrees: vec![], relation_degrees: vec![] };
        assert!(empty.jump_bounds().is_err());
    }

    #[test]
    fn validate_reports_violations() {
        let v = ToricVariety::projective_space(1).unwrap();
        let bad_jumps = filtration(&[0, -1], &[&[&[1, 0]]], 2);
        let ok = filtration(&[0, 1], &[&[&[1, 0]]], 2);
        let e = EquivariantReflexiveSheaf::new(v.clone(), vec![bad_jumps, ok.clone()]).unwrap();
        let d = e.validate();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].ray, Some(0));
        assert!(d[0].message.contains("jumps not weakly increasing"));

        let equal_jumps = filtration(&[0, 0], &[&[&[1, 0]]], 2);
        let e = EquivariantReflexiveSheaf::new(v, vec![ok, equal_jumps]).unwrap();
        let d = e.validate();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].ray_name.as_deref(), Some("rho1"));
        assert!(d[0].message.contains("must hold exactly when"));
    }

    #[test]
    fn shape_errors() {
        let v = ToricVariety::projective_space(1).unwrap();
        assert!(EquivariantReflexiveSheaf::new(v.clone(), vec![KlyachkoFiltration::rank_one(0)]).is_err());
        let two = filtration(&[0, 1], &[&[&[1, 0]]], 2);
        assert!(EquivariantReflexiveSheaf::new(v, vec![KlyachkoFiltration::rank_one(0), two]).is_err());
        assert!(KlyachkoFiltration::new(vec![0], vec![Subspace::full(2)], 1).is_err());
    }

    #[test]
    fn evaluate_is_monotone() {
        let e = rank3_h3();
        for f in e.filtrations() {
            for i in -12..3 {
                assert!(f.evaluate(i).is_subspace_of(f.evaluate(i + 1)));
            }
        }
    }
}
