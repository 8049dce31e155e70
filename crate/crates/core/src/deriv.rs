//! Degree −1 derivations on graded GF(2) polynomial rings.
//!
//! In characteristic 2 the anti-derivation sign is trivial, so a derivation
//! is determined by the images of the generators and extends by the
//! ordinary Leibniz rule. For `k[w_1, ..., w_m]` the canonical one is
//! `w_i ↦ (m - i + 1) w_(i-1)` with `w_0 = 1`; on `C = k[w_1, ..., w_2n]`
//! it kills every odd `w` and sends `w_(2i) ↦ w_(2i-1)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring2::{GradedRing, Monomial, Poly2, RingHandle};

#[derive(Debug, Clone)]
pub struct Derivation {
    ring: Arc<GradedRing>,
    images: Vec<Poly2>,
}

impl Derivation {
    /// Builds a derivation from generator images. Each image must be zero or
    /// homogeneous of degree one less than its generator.
    pub fn new(ring: &Arc<GradedRing>, images: Vec<Poly2>) -> Result<Self> {
        if images.len() != ring.len() {
            let missing = ring.vars().get(images.len()).map_or("?", |v| v.name.as_str());
            return Err(Error::MissingImage(missing.to_string()));
        }
        for (i, img) in images.iter().enumerate() {
            if img.ring() != ring {
                return Err(Error::RingMismatch {
                    left: ring.signature(),
                    right: img.ring().signature(),
                });
            }
            if !img.is_zero() && img.homogeneous_degree() != Some(ring.degree_of(i) - 1) {
                return Err(Error::BadIndex(format!(
                    "image of `{}` must be homogeneous of degree {}",
                    ring.name(i),
                    ring.degree_of(i) - 1
                )));
            }
        }
        Ok(Self {
            ring: Arc::clone(ring),
            images,
        })
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn image(&self, i: usize) -> &Poly2 {
        &self.images[i]
    }

    /// Leibniz extension applied to a single monomial.
    pub fn apply_monomial(&self, m: &Monomial) -> Poly2 {
        let mut acc = Vec::new();
        self.push_monomial_image(m, &mut acc);
        Poly2::from_terms(&self.ring, acc)
    }

    fn push_monomial_image(&self, m: &Monomial, acc: &mut Vec<Monomial>) {
        for (i, &e) in m.exps().iter().enumerate() {
            // d(x^e) = e x^(e-1) dx vanishes for even e
            if e % 2 == 1 && !self.images[i].is_zero() {
                let rest = m.lower(i, self.ring.degree_of(i));
                acc.extend(self.images[i].terms().iter().map(|t| t.mul(&rest)));
            }
        }
    }

    pub fn apply(&self, p: &Poly2) -> Result<Poly2> {
        if p.ring() != &self.ring {
            return Err(Error::RingMismatch {
                left: self.ring.signature(),
                right: p.ring().signature(),
            });
        }
        let mut acc = Vec::new();
        for t in p.terms() {
            self.push_monomial_image(t, &mut acc);
        }
        Ok(Poly2::from_terms(&self.ring, acc))
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, img)| format!("{} -> {}", self.ring.name(i), img))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `k[w_1, ..., w_m]` with `deg w_i = i`.
pub fn stiefel_whitney_ring(m: usize) -> Arc<GradedRing> {
    GradedRing::new((1..=m).map(|i| (format!("w{i}"), i as u32))).expect("valid ring")
}

/// The derivation `w_i ↦ (m - i + 1) w_(i-1)` on `k[w_1, ..., w_m]`.
pub fn bo_derivation(m: usize) -> Derivation {
    let ring = stiefel_whitney_ring(m);
    bo_derivation_on(&ring)
}

/// Same as [`bo_derivation`], on an existing `k[w_1, ..., w_m]`.
pub fn bo_derivation_on(ring: &Arc<GradedRing>) -> Derivation {
    let m = ring.len();
    let images = (1..=m)
        .map(|i| {
            if (m - i + 1).is_multiple_of(2) {
                ring.zero()
            } else if i == 1 {
                ring.one()
            } else {
                ring.var(i - 2)
            }
        })
        .collect();
    Derivation::new(ring, images).expect("canonical derivation is well formed")
}

/// A subset `T` of `{1, ..., n}`, stored as a bit mask (bit `i-1` for `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetIndex {
    n: usize,
    mask: u32,
}

impl SubsetIndex {
    pub fn new(n: usize, members: &[usize]) -> Result<Self> {
        if n == 0 || n > 31 {
            return Err(Error::BadIndex(format!("n = {n} is outside 1..=31")));
        }
        let mut mask = 0u32;
        for &i in members {
            if i == 0 || i > n {
                return Err(Error::BadIndex(format!("subset member {i} is outside 1..={n}")));
            }
            if mask & (1 << (i - 1)) != 0 {
                return Err(Error::BadIndex(format!("subset member {i} repeated")));
            }
            mask |= 1 << (i - 1);
        }
        Ok(Self { n, mask })
    }

    pub fn from_mask(n: usize, mask: u32) -> Self {
        debug_assert!(n <= 31 && mask >> n == 0);
        Self { n, mask }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.n && self.mask & (1 << (i - 1)) != 0
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n).filter(|&i| self.contains(i))
    }

    /// `Σ_(i ∈ T) i`.
    pub fn weight(&self) -> u32 {
        self.members().map(|i| i as u32).sum()
    }

    pub fn without(&self, i: usize) -> Self {
        Self {
            n: self.n,
            mask: self.mask & !(1 << (i - 1)),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            mask: self.mask & other.mask,
        }
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            mask: self.mask ^ other.mask,
        }
    }

    /// All subsets with at least `min_len` members, ordered by size and then
    /// lexicographically by members.
    pub fn all(n: usize, min_len: usize) -> Vec<Self> {
        let mut out: Vec<Self> = (0u32..1 << n)
            .map(|mask| Self { n, mask })
            .filter(|t| t.len() >= min_len)
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members().cmp(b.members())));
        out
    }

    /// `{1,2}` style label.
    pub fn label(&self) -> String {
        let m: Vec<String> = self.members().map(|i| i.to_string()).collect();
        format!("{{{}}}", m.join(","))
    }
}

/// `s(v_T) = Σ_(j ∈ T) u_j v_(T - {j})` in `C = k[w_1, ..., w_2n]`, where
/// `u_j = w_(2j-1)` and `v_j = w_(2j)`.
pub fn s_of_v(c: &Arc<GradedRing>, t: &SubsetIndex) -> Result<Poly2> {
    let n = t.n();
    if c.len() != 2 * n {
        return Err(Error::BadIndex(format!(
            "subset over {{1..{n}}} needs a ring with {} variables, got {}",
            2 * n,
            c.len()
        )));
    }
    let mut terms = Vec::with_capacity(t.len());
    for j in t.members() {
        let mut exps = vec![0u32; 2 * n];
        exps[2 * j - 2] = 1;
        for i in t.without(j).members() {
            exps[2 * i - 1] = 1;
        }
        terms.push(c.monomial(exps));
    }
    Ok(Poly2::from_terms(c, terms))
}

/// [`s_of_v`] in a freshly built `C` for the given `n`.
pub fn s_of_v_t(n: usize, t: &SubsetIndex) -> Result<Poly2> {
    if t.n() != n {
        return Err(Error::BadIndex(format!("subset is over {{1..{}}}, expected n = {n}", t.n())));
    }
    s_of_v(&stiefel_whitney_ring(2 * n), t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_images() {
        let s = bo_derivation(4);
        let c = s.ring().clone();
        assert_eq!(s.image(1), &c.var(0));
        assert_eq!(s.image(3), &c.var(2));
        assert!(s.image(0).is_zero());
        assert!(s.image(2).is_zero());

        let s3 = bo_derivation(3);
        assert!(s3.image(0).is_one());
        assert!(s3.image(1).is_zero());
        assert_eq!(s3.image(2), &s3.ring().var(1));

        assert!(bo_derivation(2).image(0).is_zero());
    }

    #[test]
    fn leibniz_examples() {
        let s = bo_derivation(4);
        let c = s.ring().clone();
        let w = |i: usize| c.var(i - 1);
        let got = s.apply(&(&w(2) * &w(4))).unwrap();
        assert_eq!(got, &(&w(1) * &w(4)) + &(&w(2) * &w(3)));
        assert!(s.apply(&w(2).pow(2)).unwrap().is_zero());
        assert!(s.apply(&c.one()).unwrap().is_zero());
    }

    #[test]
    fn rejects_foreign_polynomials_and_bad_images() {
        let s = bo_derivation(2);
        let other = stiefel_whitney_ring(3);
        assert!(s.apply(&other.var(0)).is_err());
        let c = stiefel_whitney_ring(2);
        assert!(Derivation::new(&c, vec![c.zero(), c.var(1)]).is_err());
        assert!(Derivation::new(&c, vec![c.zero()]).is_err());
    }

    #[test]
    fn koszul_values() {
        let c = stiefel_whitney_ring(4);
        let t = SubsetIndex::new(2, &[1, 2]).unwrap();
        assert_eq!(s_of_v(&c, &t).unwrap().to_string(), "w1*w4 + w2*w3");
        assert!(s_of_v(&c, &SubsetIndex::new(2, &[]).unwrap()).unwrap().is_zero());
        assert_eq!(s_of_v(&c, &SubsetIndex::new(2, &[2]).unwrap()).unwrap(), c.var(2));

        // n = 3, T = {1,2,3}: u1 v2 v3 + u2 v1 v3 + u3 v1 v2
        let t = SubsetIndex::new(3, &[1, 2, 3]).unwrap();
        let got = s_of_v_t(3, &t).unwrap();
        let c = got.ring().clone();
        let w = |i: usize| c.var(i - 1);
        let expected = &(&(&w(1) * &w(4)) * &w(6)) + &(&(&(&w(3) * &w(2)) * &w(6)) + &(&(&w(5) * &w(2)) * &w(4)));
        assert_eq!(got, expected);
    }

    #[test]
    fn subset_validation() {
        assert!(SubsetIndex::new(2, &[3]).is_err());
        assert!(SubsetIndex::new(2, &[0]).is_err());
        assert!(SubsetIndex::new(2, &[1, 1]).is_err());
        let t = SubsetIndex::new(4, &[1, 3]).unwrap();
        assert_eq!(t.weight(), 4);
        assert_eq!(t.label(), "{1,3}");
        let all: Vec<String> = SubsetIndex::all(3, 2).iter().map(|t| t.label()).collect();
        assert_eq!(all, ["{1,2}", "{1,3}", "{2,3}", "{1,2,3}"]);
    }
}
