//! Arithmetic model of `H*(BGO(2n); Z/2)`.
//!
//! A class `x` is stored as the pair `(ρ(x), π*(x))` where
//!
//! * `ρ` sends `λ ↦ λ`, `b_4i ↦ b_4i` and kills every `a` and `d_T`, landing
//!   in `k[λ, b_4, ..., b_4n]`;
//! * `π*` kills `λ` and sends `a_(2i-1) ↦ w_(2i-1)`, `b_4i ↦ w_(2i)^2`,
//!   `d_T ↦ s(v_T)`, landing in the kernel ring `B ⊂ C = k[w_1, ..., w_2n]`.
//!
//! The kernel of `π*` is `λ k[λ, b]`, on which `ρ` is injective, so the pair
//! determines the class and ring operations are componentwise. A pair
//! `(p, q)` is a class iff `s(q) = 0` and `p|_(λ=0, b_4i=w_(2i)^2)` equals `q`
//! with all odd `w` set to zero.

use std::fmt;
use std::ops::{Add, Mul};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::deriv::{s_of_v, SubsetIndex};
use crate::error::{Error, Result};
use crate::f2linalg::{BitVec, IncrementalBasis};
use crate::graded::{lambda_b_ring, lambda_part_dim, DegreeSlice, KernelRing};
use crate::presentation::{cohomology_ring, gens_i};
use crate::ring2::{GradedRing, PolyJson, Poly2, RingHandle};

/// An element of `H*(BGO(2n))` in pair form.
#[derive(Clone, PartialEq, Eq)]
pub struct CohomElem {
    n: usize,
    p: Poly2,
    q: Poly2,
}

impl CohomElem {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Component in `k[λ, b]`.
    pub fn p(&self) -> &Poly2 {
        &self.p
    }

    /// Component in `C`.
    pub fn q(&self) -> &Poly2 {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Common degree of both components, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<u32> {
        match (self.p.homogeneous_degree(), self.q.homogeneous_degree()) {
            (Some(a), Some(b)) if a == b => Some(a),
            (Some(a), None) if self.q.is_zero() => Some(a),
            (None, Some(b)) if self.p.is_zero() => Some(b),
            _ => None,
        }
    }

    fn check(&self, other: &CohomElem) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ModelMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &CohomElem) -> Result<CohomElem> {
        self.check(other)?;
        Ok(CohomElem {
            n: self.n,
            p: self.p.try_add(&other.p)?,
            q: self.q.try_add(&other.q)?,
        })
    }

    pub fn try_mul(&self, other: &CohomElem) -> Result<CohomElem> {
        self.check(other)?;
        Ok(CohomElem {
            n: self.n,
            p: self.p.try_mul(&other.p)?,
            q: self.q.try_mul(&other.q)?,
        })
    }

    pub fn pow(&self, e: u32) -> CohomElem {
        CohomElem {
            n: self.n,
            p: self.p.pow(e),
            q: self.q.pow(e),
        }
    }

    /// The component of degree `d`.
    pub fn degree_part(&self, d: u32) -> CohomElem {
        CohomElem {
            n: self.n,
            p: self.p.degree_part(d),
            q: self.q.degree_part(d),
        }
    }

    pub fn to_json(&self) -> ElemJson {
        ElemJson {
            n: self.n,
            p: self.p.to_json(),
            q: self.q.to_json(),
        }
    }
}

impl fmt::Display for CohomElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {})", self.p, self.q)
    }
}

impl fmt::Debug for CohomElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CohomElem[n={}]{}", self.n, self)
    }
}

impl Add for &CohomElem {
    type Output = CohomElem;

    fn add(self, rhs: &CohomElem) -> CohomElem {
        self.try_add(rhs).expect("elements of different models")
    }
}

impl Mul for &CohomElem {
    type Output = CohomElem;

    fn mul(self, rhs: &CohomElem) -> CohomElem {
        self.try_mul(rhs).expect("elements of different models")
    }
}

/// JSON element format `{"n": n, "p": <poly>, "q": <poly>}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemJson {
    pub n: usize,
    pub p: PolyJson,
    pub q: PolyJson,
}

/// Named generators of the cohomology ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    Lambda,
    /// `a_k` for odd `k = 2i - 1`.
    A(usize),
    /// `b_k` for `k = 4i`.
    B(usize),
    D(SubsetIndex),
}

/// A basis vector of `H^d` with its printed name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledElem {
    pub label: String,
    /// The monomial of the presentation ring the label spells.
    pub monomial: Poly2,
    pub element: CohomElem,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub degree: u32,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct CohomologyModel {
    n: usize,
    kernel: KernelRing,
    lb: Arc<GradedRing>,
    r: Arc<GradedRing>,
    rho: Vec<Poly2>,
    pi: Vec<Poly2>,
    // k[λ,b] -> C, λ ↦ 0, b_4i ↦ w_2i^2
    compat: Vec<Poly2>,
    // C -> C, odd w ↦ 0
    sigma: Vec<Poly2>,
}

impl CohomologyModel {
    pub fn new(n: usize) -> Result<Self> {
        let kernel = KernelRing::new(n)?;
        let c = Arc::clone(kernel.c());
        let lb = lambda_b_ring(n);
        let r = cohomology_ring(n);
        let subsets = SubsetIndex::all(n, 2);

        let mut rho = vec![lb.var(0)];
        rho.extend((0..n).map(|_| lb.zero()));
        rho.extend((1..=n).map(|i| lb.var(i)));
        rho.extend(subsets.iter().map(|_| lb.zero()));

        let mut pi = vec![c.zero()];
        pi.extend((1..=n).map(|i| c.var(2 * i - 2)));
        pi.extend((1..=n).map(|i| c.var(2 * i - 1).square()));
        for t in &subsets {
            pi.push(s_of_v(&c, t)?);
        }

        let mut compat = vec![c.zero()];
        compat.extend((1..=n).map(|i| c.var(2 * i - 1).square()));

        let sigma = (1..=2 * n)
            .map(|j| if j % 2 == 1 { c.zero() } else { c.var(j - 1) })
            .collect();

        Ok(Self {
            n,
            kernel,
            lb,
            r,
            rho,
            pi,
            compat,
            sigma,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kernel(&self) -> &KernelRing {
        &self.kernel
    }

    /// `C = k[w_1, ..., w_2n]`.
    pub fn c(&self) -> &Arc<GradedRing> {
        self.kernel.c()
    }

    /// `k[λ, b_4, ..., b_4n]`.
    pub fn lambda_b(&self) -> &Arc<GradedRing> {
        &self.lb
    }

    /// The presentation ring `k[λ, (a), (b), (d_T)]`.
    pub fn presentation_ring(&self) -> &Arc<GradedRing> {
        &self.r
    }

    pub fn zero(&self) -> CohomElem {
        CohomElem {
            n: self.n,
            p: self.lb.zero(),
            q: self.c().zero(),
        }
    }

    pub fn one(&self) -> CohomElem {
        CohomElem {
            n: self.n,
            p: self.lb.one(),
            q: self.c().one(),
        }
    }

    /// Builds a pair after checking that it is a class.
    pub fn element(&self, p: Poly2, q: Poly2) -> Result<CohomElem> {
        if p.ring() != &self.lb || q.ring() != self.c() {
            return Err(Error::RingMismatch {
                left: format!("{} x {}", self.lb.signature(), self.c().signature()),
                right: format!("{} x {}", p.ring().signature(), q.ring().signature()),
            });
        }
        if !self.membership_check(&p, &q) {
            return Err(Error::NotInSpan {
                degree: p.max_degree().or(q.max_degree()).unwrap_or(0),
            });
        }
        Ok(CohomElem { n: self.n, p, q })
    }

    pub fn element_from_json(&self, json: &ElemJson) -> Result<CohomElem> {
        if json.n != self.n {
            return Err(Error::ModelMismatch {
                left: self.n,
                right: json.n,
            });
        }
        self.element(Poly2::from_json(&self.lb, &json.p)?, Poly2::from_json(self.c(), &json.q)?)
    }

    pub fn generator(&self, which: &Generator) -> Result<CohomElem> {
        let name = match which {
            Generator::Lambda => "L".to_string(),
            Generator::A(k) => {
                if k % 2 == 0 || *k > 2 * self.n - 1 {
                    return Err(Error::BadIndex(format!("a{k} does not exist for n = {}", self.n)));
                }
                format!("a{k}")
            }
            Generator::B(k) => {
                if k % 4 != 0 || *k == 0 || *k > 4 * self.n {
                    return Err(Error::BadIndex(format!("b{k} does not exist for n = {}", self.n)));
                }
                format!("b{k}")
            }
            Generator::D(t) => {
                if t.n() != self.n || t.len() < 2 {
                    return Err(Error::BadIndex(format!(
                        "d{} needs a subset of {{1..{}}} with at least two members",
                        t.label(),
                        self.n
                    )));
                }
                format!("d{}", t.label())
            }
        };
        self.evaluate(&self.r.var_named(&name)?)
    }

    /// Image of a polynomial in the presentation ring.
    pub fn evaluate(&self, x: &Poly2) -> Result<CohomElem> {
        Ok(CohomElem {
            n: self.n,
            p: x.substitute(&self.lb, &self.rho)?,
            q: x.substitute(self.c(), &self.pi)?,
        })
    }

    /// `p` with `λ ↦ 0`, `b_4i ↦ w_(2i)^2`.
    fn compat_image(&self, p: &Poly2) -> Result<Poly2> {
        p.substitute(self.c(), &self.compat)
    }

    /// `q` with every odd `w` set to zero.
    fn sigma_image(&self, q: &Poly2) -> Result<Poly2> {
        q.substitute(self.c(), &self.sigma)
    }

    /// Whether `(p, q)` is the pair of some class.
    pub fn membership_check(&self, p: &Poly2, q: &Poly2) -> bool {
        let Ok(sq) = self.kernel.derivation().apply(q) else {
            return false;
        };
        if !sq.is_zero() {
            return false;
        }
        match (self.compat_image(p), self.sigma_image(q)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    /// The class `(ψσ(q), q)` over `q ∈ B`, where `ψ` rewrites `w_(2i)^2` as
    /// `b_4i`.
    pub fn lift_from_b(&self, q: &Poly2) -> Result<CohomElem> {
        if !self.kernel.derivation().apply(q)?.is_zero() {
            return Err(Error::NotSquares(format!("s({q}) is not zero")));
        }
        let reduced = self.sigma_image(q)?;
        let mut terms = Vec::with_capacity(reduced.len());
        for t in reduced.terms() {
            let mut exps = vec![0u32; self.lb.len()];
            for (j, &e) in t.exps().iter().enumerate() {
                // j is 0-based: w_(j+1); even w have odd j
                if e == 0 {
                    continue;
                }
                if j % 2 == 0 || e % 2 == 1 {
                    return Err(Error::NotSquares(reduced.to_string()));
                }
                exps[j.div_ceil(2)] = e / 2;
            }
            terms.push(self.lb.monomial(exps));
        }
        Ok(CohomElem {
            n: self.n,
            p: Poly2::from_terms(&self.lb, terms),
            q: q.clone(),
        })
    }

    /// Labeled basis of `H^d`: the monomials `λ^j b^β` (`j ≥ 1`), then lifts
    /// of a basis of `B_d` drawn from the `A`-monomials and the products of
    /// an `A`-monomial with one `s(v_T)`. Listed in decreasing monomial order
    /// of the presentation ring.
    pub fn basis(&self, d: u32) -> Result<Vec<LabeledElem>> {
        let r = &self.r;
        let n = self.n;
        let lambda_count = |m: &[u32]| m[0];
        let a_range = 1..1 + n;
        let d_range = 1 + 2 * n..r.len();

        let slice = DegreeSlice::new(self.c(), d);
        let mut span = IncrementalBasis::new(slice.dim());

        let monomials = r.enumerate_monomials(d);
        let mut keep = vec![false; monomials.len()];
        let mut candidates = Vec::new();
        for (k, m) in monomials.iter().enumerate() {
            let e = m.exps();
            let has_a = e[a_range.clone()].iter().any(|&x| x > 0);
            let d_total: u32 = e[d_range.clone()].iter().sum();
            if lambda_count(e) > 0 {
                keep[k] = !has_a && d_total == 0;
            } else if d_total == 0 {
                let q = r.from_monomial(m.clone()).substitute(self.c(), &self.pi)?;
                let fresh = span.insert(&slice.vector(&q)?);
                debug_assert!(fresh, "A-monomials are independent");
                keep[k] = true;
            } else if d_total == 1 {
                candidates.push(k);
            }
        }
        for k in candidates {
            let q = r.from_monomial(monomials[k].clone()).substitute(self.c(), &self.pi)?;
            keep[k] = span.insert(&slice.vector(&q)?);
        }

        let kernel_dim = self.kernel.kernel_dim(d);
        let expected = lambda_part_dim(&self.lb, d) + kernel_dim;
        let found = keep.iter().filter(|&&x| x).count();
        if span.dim() != kernel_dim || found != expected {
            return Err(Error::ModelDimension {
                n,
                degree: d,
                found,
                expected,
            });
        }

        let mut out = Vec::with_capacity(found);
        for (m, _) in monomials.into_iter().zip(keep).filter(|(_, k)| *k) {
            let mono = r.from_monomial(m.clone());
            let element = if m.exps()[0] > 0 {
                self.evaluate(&mono)?
            } else {
                self.lift_from_b(&mono.substitute(self.c(), &self.pi)?)?
            };
            out.push(LabeledElem {
                label: m.format(r),
                monomial: mono,
                element,
            });
        }
        Ok(out)
    }

    fn pair_vector(&self, lb_slice: &DegreeSlice, c_slice: &DegreeSlice, x: &CohomElem) -> Result<BitVec> {
        let degree = c_slice.degree();
        let pv = lb_slice.vector(&x.p).map_err(|_| Error::NotInSpan { degree })?;
        let qv = c_slice.vector(&x.q).map_err(|_| Error::NotInSpan { degree })?;
        let mut v = BitVec::zeros(pv.len() + qv.len());
        for i in pv.iter_ones() {
            v.flip(i);
        }
        for i in qv.iter_ones() {
            v.flip(pv.len() + i);
        }
        Ok(v)
    }

    /// Coordinates of a degree-`d` class over [`CohomologyModel::basis`].
    pub fn coords(&self, x: &CohomElem, d: u32) -> Result<BitVec> {
        let basis = self.basis(d)?;
        self.coords_in(&basis, x, d)
    }

    /// Like [`CohomologyModel::coords`], over a precomputed basis.
    pub fn coords_in(&self, basis: &[LabeledElem], x: &CohomElem, d: u32) -> Result<BitVec> {
        if x.n != self.n {
            return Err(Error::ModelMismatch {
                left: self.n,
                right: x.n,
            });
        }
        let lb_slice = DegreeSlice::new(&self.lb, d);
        let c_slice = DegreeSlice::new(self.c(), d);
        let mut span = IncrementalBasis::new(lb_slice.dim() + c_slice.dim());
        for b in basis {
            span.insert(&self.pair_vector(&lb_slice, &c_slice, &b.element)?);
        }
        let target = self.pair_vector(&lb_slice, &c_slice, x)?;
        span.coordinates(&target).ok_or(Error::NotInSpan { degree: d })
    }

    /// Rewrites a class as a sum of basis labels, as a polynomial in the
    /// presentation ring.
    pub fn normal_form(&self, x: &CohomElem) -> Result<Poly2> {
        let top = x.p.max_degree().into_iter().chain(x.q.max_degree()).max();
        let mut acc = self.r.zero();
        for d in 0..=top.unwrap_or(0) {
            let part = x.degree_part(d);
            if part.is_zero() {
                continue;
            }
            let basis = self.basis(d)?;
            for i in self.coords_in(&basis, &part, d)?.iter_ones() {
                acc += &basis[i].monomial;
            }
        }
        Ok(acc)
    }

    /// The bases of `H^0, ..., H^5`.
    pub fn table_small(&self) -> Result<Vec<TableRow>> {
        (0..=5)
            .map(|d| {
                Ok(TableRow {
                    degree: d,
                    labels: self.basis(d)?.into_iter().map(|b| b.label).collect(),
                })
            })
            .collect()
    }

    /// Whether `ρ` kills every defining relation.
    pub fn rho_well_defined(&self) -> Result<bool> {
        for rel in gens_i(self.n) {
            if !rel.poly.substitute(&self.lb, &self.rho)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn generator(n: usize, which: &Generator) -> Result<CohomElem> {
    CohomologyModel::new(n)?.generator(which)
}

pub fn basis_hd(n: usize, d: u32) -> Result<Vec<LabeledElem>> {
    CohomologyModel::new(n)?.basis(d)
}

pub fn table_small(n: usize) -> Result<Vec<TableRow>> {
    CohomologyModel::new(n)?.table_small()
}

/// Graded dimensions of `k[λ, w_2, w_3, ..., w_(2m+1)]` (`deg λ = 2`,
/// `deg w_i = i`), the cohomology of `BGO(2m+1)`; `m = 0` gives `k[λ]`.
pub fn poincare_odd_case(m: usize, max_degree: u32) -> Vec<usize> {
    let vars = std::iter::once(("L".to_string(), 2)).chain((2..=2 * m + 1).map(|i| (format!("w{i}"), i as u32)));
    let ring = GradedRing::new(vars).expect("valid ring");
    (0..=max_degree).map(|d| ring.slice_dim(d)).collect()
}
