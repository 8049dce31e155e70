//! Generators-and-relations presentations of `B` and of `H*(BGO(2n))`,
//! with brute-force per-degree quotient dimensions.
//!
//! All relations are homogeneous, so the degree-`d` slice of the ideal they
//! generate is spanned by `{g·m : g a relation, m a monomial, deg(g·m) = d}`.
//! The quotient dimension is the slice dimension minus the rank of that
//! spanning set.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deriv::{s_of_v, SubsetIndex};
use crate::error::{Error, Result};
use crate::f2linalg::BitMatrix;
use crate::graded::{lambda_b_ring, lambda_part_dim, DegreeSlice, KernelRing};
use crate::ring2::{GradedRing, Poly2, RingHandle};

/// A relation tagged with the family (1-based) it comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub family: usize,
    pub poly: Poly2,
}

#[derive(Debug, Clone)]
pub struct Presentation {
    ring: Arc<GradedRing>,
    relations: Vec<Relation>,
}

impl Presentation {
    pub fn new(ring: Arc<GradedRing>, relations: Vec<Relation>) -> Result<Self> {
        for r in &relations {
            if r.poly.ring() != &ring {
                return Err(Error::RingMismatch {
                    left: ring.signature(),
                    right: r.poly.ring().signature(),
                });
            }
            if !r.poly.is_zero() && r.poly.homogeneous_degree().is_none() {
                return Err(Error::BadIndex(format!("relation {} is not homogeneous", r.poly)));
            }
        }
        Ok(Self { ring, relations })
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn family(&self, family: usize) -> impl Iterator<Item = &Poly2> {
        self.relations.iter().filter(move |r| r.family == family).map(|r| &r.poly)
    }

    /// Same ring, only the relations for which `keep` returns true.
    pub fn restrict(&self, mut keep: impl FnMut(usize, &Relation) -> bool) -> Presentation {
        Presentation {
            ring: Arc::clone(&self.ring),
            relations: self
                .relations
                .iter()
                .enumerate()
                .filter(|(i, r)| keep(*i, r))
                .map(|(_, r)| r.clone())
                .collect(),
        }
    }

    /// Rank of the degree-`d` slice of the ideal.
    pub fn ideal_dim(&self, d: u32) -> usize {
        let slice = DegreeSlice::new(&self.ring, d);
        let mut rows = Vec::new();
        for rel in &self.relations {
            let Some(deg) = rel.poly.homogeneous_degree() else {
                continue;
            };
            if deg > d {
                continue;
            }
            for m in self.ring.enumerate_monomials(d - deg) {
                rows.push(rel.poly.mul_monomial(&m));
            }
        }
        let mut mat = BitMatrix::zeros(rows.len(), slice.dim());
        for (r, p) in rows.iter().enumerate() {
            for t in p.terms() {
                mat.set(r, slice.position(t).expect("product has degree d"), true);
            }
        }
        mat.rank()
    }

    /// `dim (free ring / ideal)_d`.
    pub fn quotient_dim(&self, d: u32) -> usize {
        self.ring.slice_dim(d) - self.ideal_dim(d)
    }
}

/// Index bookkeeping shared by both presentations: a block of "odd"
/// generators indexed by `1..=n` (`u_i` or `a_(2i-1)`), a block of
/// "square" generators (`v_i^2` or `b_(4i)`), and one variable per subset of
/// size at least 2 (`c_T` or `d_T`).
#[derive(Debug, Clone)]
struct Layout {
    n: usize,
    odd_offset: usize,
    square_offset: usize,
    subset_offset: usize,
    subsets: Vec<SubsetIndex>,
}

impl Layout {
    fn subset_var(&self, t: &SubsetIndex) -> usize {
        let k = self.subsets.iter().position(|s| s == t).expect("subset of size >= 2");
        self.subset_offset + k
    }

    /// `c_T` with the conventions `c_{i} = u_i` and `c_∅ = 0`.
    fn c(&self, ring: &Arc<GradedRing>, t: &SubsetIndex) -> Poly2 {
        match t.len() {
            0 => ring.zero(),
            1 => {
                let i = t.members().next().expect("one member");
                ring.var(self.odd_offset + i - 1)
            }
            _ => ring.var(self.subset_var(t)),
        }
    }

    fn odd(&self, ring: &Arc<GradedRing>, i: usize) -> Poly2 {
        ring.var(self.odd_offset + i - 1)
    }

    fn square(&self, ring: &Arc<GradedRing>, i: usize) -> Poly2 {
        ring.var(self.square_offset + i - 1)
    }
}

/// How the product-rule family enumerates its index pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairOrder {
    /// One relation per unordered pair `{T, U}`.
    #[default]
    Unordered,
    /// One relation per ordered pair `(T, U)`; this is the enumeration
    /// behind the count `(2^n - n - 1)^2 - n(n-1)/2`.
    Ordered,
}

/// Index pairs of subsets of size at least 2 for the product-rule family,
/// skipping `T = U` when `|T| = 2` (those are the squares family).
pub fn product_relation_pairs(n: usize, order: PairOrder) -> Vec<(SubsetIndex, SubsetIndex)> {
    let subsets = SubsetIndex::all(n, 2);
    let mut out = Vec::new();
    for (i, t) in subsets.iter().enumerate() {
        let start = match order {
            PairOrder::Unordered => i,
            PairOrder::Ordered => 0,
        };
        for u in &subsets[start..] {
            if t == u && t.len() == 2 {
                continue;
            }
            out.push((*t, *u));
        }
    }
    out
}

/// The three structural families shared by `N` and `I`:
/// the Koszul relations, the squares of the size-2 classes, and the product
/// rule `c_T c_U = Σ_(p ∈ T) u_p (Π_(q ∈ T∩U - {p}) v_q^2) c_((T - {p}) Δ U)`.
fn structural_relations(
    ring: &Arc<GradedRing>,
    layout: &Layout,
    first_family: usize,
    order: PairOrder,
) -> Vec<Relation> {
    let n = layout.n;
    let mut out = Vec::new();

    for t in SubsetIndex::all(n, 3) {
        let mut acc = ring.zero();
        for i in t.members() {
            acc += &(&layout.odd(ring, i) * &layout.c(ring, &t.without(i)));
        }
        out.push(Relation {
            family: first_family,
            poly: acc,
        });
    }

    for t in SubsetIndex::all(n, 2).into_iter().filter(|t| t.len() == 2) {
        let mut m = t.members();
        let (i, j) = (m.next().unwrap(), m.next().unwrap());
        let poly = &(&layout.c(ring, &t).square()
            + &(&layout.odd(ring, i).square() * &layout.square(ring, j)))
            + &(&layout.odd(ring, j).square() * &layout.square(ring, i));
        out.push(Relation {
            family: first_family + 1,
            poly,
        });
    }

    for (t, u) in product_relation_pairs(n, order) {
        let mut acc = &layout.c(ring, &t) * &layout.c(ring, &u);
        for p in t.members() {
            let shared = t.intersection(&u).without(p);
            let mut term = layout.odd(ring, p);
            for q in shared.members() {
                term = &term * &layout.square(ring, q);
            }
            term = &term * &layout.c(ring, &t.without(p).symmetric_difference(&u));
            acc += &term;
        }
        out.push(Relation {
            family: first_family + 2,
            poly: acc,
        });
    }
    out
}

/// `A[c_T] = k[u_1..u_n, v_1^2..v_n^2, (c_T)_(|T| ≥ 2)]`.
pub fn koszul_ring(n: usize) -> Arc<GradedRing> {
    let vars = (1..=n)
        .map(|i| (format!("u{i}"), 2 * i as u32 - 1))
        .chain((1..=n).map(|i| (format!("v{i}sq"), 4 * i as u32)))
        .chain(SubsetIndex::all(n, 2).into_iter().map(|t| (format!("c{}", t.label()), 2 * t.weight() - 1)));
    GradedRing::new(vars).expect("valid ring")
}

/// `R = k[λ, a_1, a_3, ..., a_(2n-1), b_4, ..., b_4n, (d_T)_(|T| ≥ 2)]`.
/// `λ` is spelled `L`.
pub fn cohomology_ring(n: usize) -> Arc<GradedRing> {
    let vars = std::iter::once(("L".to_string(), 2))
        .chain((1..=n).map(|i| (format!("a{}", 2 * i - 1), 2 * i as u32 - 1)))
        .chain((1..=n).map(|i| (format!("b{}", 4 * i), 4 * i as u32)))
        .chain(SubsetIndex::all(n, 2).into_iter().map(|t| (format!("d{}", t.label()), 2 * t.weight() - 1)));
    GradedRing::new(vars).expect("valid ring")
}

fn koszul_layout(n: usize) -> Layout {
    Layout {
        n,
        odd_offset: 0,
        square_offset: n,
        subset_offset: 2 * n,
        subsets: SubsetIndex::all(n, 2),
    }
}

fn cohomology_layout(n: usize) -> Layout {
    Layout {
        n,
        odd_offset: 1,
        square_offset: 1 + n,
        subset_offset: 1 + 2 * n,
        subsets: SubsetIndex::all(n, 2),
    }
}

/// Relations of `N` in `A[c_T]`: families 1 to 3.
pub fn gens_n(n: usize) -> Vec<Relation> {
    gens_n_with(n, PairOrder::default())
}

pub fn gens_n_with(n: usize, order: PairOrder) -> Vec<Relation> {
    structural_relations(&koszul_ring(n), &koszul_layout(n), 1, order)
}

/// Relations of `I` in `R`: `λ a_(2i-1)`, `λ d_T`, then the structural
/// families with `u → a`, `v^2 → b`, `c → d` (families 3 to 5).
pub fn gens_i(n: usize) -> Vec<Relation> {
    gens_i_with(n, PairOrder::default())
}

pub fn gens_i_with(n: usize, order: PairOrder) -> Vec<Relation> {
    let ring = cohomology_ring(n);
    let layout = cohomology_layout(n);
    let lambda = ring.var(0);
    let mut out: Vec<Relation> = (1..=n)
        .map(|i| Relation {
            family: 1,
            poly: &lambda * &layout.odd(&ring, i),
        })
        .collect();
    out.extend(SubsetIndex::all(n, 2).iter().map(|t| Relation {
        family: 2,
        poly: &lambda * &layout.c(&ring, t),
    }));
    out.extend(structural_relations(&ring, &layout, 3, order));
    out
}

pub fn koszul_presentation(n: usize) -> Presentation {
    Presentation::new(koszul_ring(n), gens_n(n)).expect("relations live in the presentation ring")
}

pub fn cohomology_presentation(n: usize) -> Presentation {
    Presentation::new(cohomology_ring(n), gens_i(n)).expect("relations live in the presentation ring")
}

/// Images of the generators of `A[c_T]` in `C` under `c_T ↦ s(v_T)`.
pub fn koszul_assignment(kr: &KernelRing) -> Vec<Poly2> {
    let n = kr.n();
    let c = kr.c();
    (1..=n)
        .map(|i| c.var(2 * i - 2))
        .chain((1..=n).map(|i| c.var(2 * i - 1).square()))
        .chain(SubsetIndex::all(n, 2).iter().map(|t| s_of_v(c, t).expect("subset matches ring")))
        .collect()
}

/// Family sizes as stated for the presentation of `B`:
/// `2^n - n(n-1)/2 - n - 1`, `n(n-1)/2` and `(2^n - n - 1)^2 - n(n-1)/2`
/// (the last one counts ordered pairs).
pub fn stated_family_counts(n: usize) -> [u128; 3] {
    let n = n as u128;
    let pow = 1u128 << n;
    let pairs = n * (n - 1) / 2;
    let m = pow - n - 1;
    [pow - pairs - n - 1, pairs, m * m - pairs]
}

/// Size of the product-rule family under unordered enumeration:
/// `m(m+1)/2 - n(n-1)/2` with `m = 2^n - n - 1`.
pub fn unordered_product_count(n: usize) -> u128 {
    let n = n as u128;
    let m = (1u128 << n) - n - 1;
    m * (m + 1) / 2 - n * (n - 1) / 2
}

/// Per-degree comparison record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCheck {
    pub d: u32,
    pub dim_lhs: usize,
    pub dim_rhs: usize,
    pub ok: bool,
}

impl DegreeCheck {
    fn new(d: u32, dim_lhs: usize, dim_rhs: usize) -> Self {
        Self {
            d,
            dim_lhs,
            dim_rhs,
            ok: dim_lhs == dim_rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationReport {
    pub n: usize,
    pub max_degree: u32,
    /// `dim (A[c_T]/N)_d` against `dim B_d`.
    pub koszul: Vec<DegreeCheck>,
    /// `dim (R/I)_d` against `dim (λ k[λ,b])_d + dim B_d`.
    pub cohomology: Vec<DegreeCheck>,
}

impl PresentationReport {
    pub fn ok(&self) -> bool {
        self.koszul.iter().chain(&self.cohomology).all(|c| c.ok)
    }
}

/// Checks of `A[c_T]/N ≅ B` for every degree up to `max_degree`.
pub fn verify_koszul_presentation(n: usize, max_degree: u32) -> Result<Vec<DegreeCheck>> {
    let kr = KernelRing::new(n)?;
    let p = koszul_presentation(n);
    Ok((0..=max_degree)
        .into_par_iter()
        .map(|d| DegreeCheck::new(d, p.quotient_dim(d), kr.kernel_dim(d)))
        .collect())
}

/// Checks of `dim (R/I)_d = dim (λ k[λ,b])_d + dim B_d` up to `max_degree`.
pub fn verify_cohomology_presentation(n: usize, max_degree: u32) -> Result<Vec<DegreeCheck>> {
    let kr = KernelRing::new(n)?;
    let lb = lambda_b_ring(n);
    let p = cohomology_presentation(n);
    Ok((0..=max_degree)
        .into_par_iter()
        .map(|d| DegreeCheck::new(d, p.quotient_dim(d), lambda_part_dim(&lb, d) + kr.kernel_dim(d)))
        .collect())
}

pub fn verify_presentations(n: usize, max_degree: u32) -> Result<PresentationReport> {
    Ok(PresentationReport {
        n,
        max_degree,
        koszul: verify_koszul_presentation(n, max_degree)?,
        cohomology: verify_cohomology_presentation(n, max_degree)?,
    })
}
