//! Sparse multivariate polynomials over GF(2), graded by per-variable weights.
//!
//! A [`GradedRing`] fixes an ordered list of named variables with positive
//! degrees. [`Poly2`] stores its terms as a strictly decreasing list of
//! [`Monomial`]s; coefficients are implicit (every present term has
//! coefficient 1), so addition is symmetric difference of term sets.
//!
//! Monomial order is graded first, then lexicographic with the ring's first
//! variable most significant. Terms are kept largest first, which is also the
//! order used when printing.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub degree: u32,
}

/// An ordered set of graded variables. Shared behind an `Arc` by every
/// polynomial that lives in it.
#[derive(Debug, Clone)]
pub struct GradedRing {
    vars: Vec<Variable>,
    index: HashMap<String, usize>,
}

impl PartialEq for GradedRing {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl Eq for GradedRing {}

impl GradedRing {
    pub fn new<I, S>(vars: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let vars: Vec<Variable> = vars
            .into_iter()
            .map(|(name, degree)| Variable {
                name: name.into(),
                degree,
            })
            .collect();
        let mut index = HashMap::with_capacity(vars.len());
        for (i, v) in vars.iter().enumerate() {
            if v.name.is_empty() {
                return Err(Error::InvalidRing(format!("variable {i} has an empty name")));
            }
            if v.degree == 0 {
                return Err(Error::InvalidRing(format!("variable `{}` has degree 0", v.name)));
            }
            if index.insert(v.name.clone(), i).is_some() {
                return Err(Error::InvalidRing(format!("duplicate variable `{}`", v.name)));
            }
        }
        Ok(Arc::new(Self { vars, index }))
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].name
    }

    pub fn degree_of(&self, i: usize) -> u32 {
        self.vars[i].degree
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Short description used in error messages.
    pub fn signature(&self) -> String {
        let names: Vec<&str> = self.vars.iter().map(|v| v.name.as_str()).collect();
        format!("k[{}]", names.join(","))
    }

    pub fn monomial(&self, exps: Vec<u32>) -> Monomial {
        assert_eq!(exps.len(), self.len(), "exponent vector length");
        let degree = exps
            .iter()
            .zip(&self.vars)
            .map(|(e, v)| e * v.degree)
            .sum();
        Monomial {
            degree,
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn unit_monomial(&self) -> Monomial {
        self.monomial(vec![0; self.len()])
    }

    /// All monomials of weighted degree `d`, largest first.
    pub fn enumerate_monomials(&self, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.len()];
        self.enumerate_into(0, d, &mut exps, &mut out);
        out
    }

    fn enumerate_into(&self, var: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if var == self.len() {
            if remaining == 0 {
                out.push(self.monomial(exps.clone()));
            }
            return;
        }
        let w = self.vars[var].degree;
        for e in (0..=remaining / w).rev() {
            exps[var] = e;
            self.enumerate_into(var + 1, remaining - e * w, exps, out);
        }
        exps[var] = 0;
    }

    /// Number of monomials of degree `d`.
    pub fn slice_dim(&self, d: u32) -> usize {
        self.enumerate_monomials(d).len()
    }
}

/// Extension methods that need the shared handle.
pub trait RingHandle {
    fn zero(&self) -> Poly2;
    fn one(&self) -> Poly2;
    fn var(&self, i: usize) -> Poly2;
    fn var_named(&self, name: &str) -> Result<Poly2>;
    fn from_monomial(&self, m: Monomial) -> Poly2;
}

impl RingHandle for Arc<GradedRing> {
    fn zero(&self) -> Poly2 {
        Poly2 {
            ring: Arc::clone(self),
            terms: Vec::new(),
        }
    }

    fn one(&self) -> Poly2 {
        self.from_monomial(self.unit_monomial())
    }

    fn var(&self, i: usize) -> Poly2 {
        let mut exps = vec![0; self.len()];
        exps[i] = 1;
        self.from_monomial(self.monomial(exps))
    }

    fn var_named(&self, name: &str) -> Result<Poly2> {
        let i = self
            .index_of(name)
            .ok_or_else(|| Error::BadIndex(format!("no variable `{name}` in {}", self.signature())))?;
        Ok(self.var(i))
    }

    fn from_monomial(&self, m: Monomial) -> Poly2 {
        Poly2 {
            ring: Arc::clone(self),
            terms: vec![m],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    // Field order matters: the derived `Ord` is graded, then lexicographic.
    degree: u32,
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self / x_i`, given a positive exponent of `x_i`.
    pub(crate) fn lower(&self, i: usize, weight: u32) -> Monomial {
        let mut exps = self.exps.clone();
        exps[i] -= 1;
        Monomial {
            degree: self.degree - weight,
            exps,
        }
    }

    pub fn format(&self, ring: &GradedRing) -> String {
        let factors: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    ring.name(i).to_string()
                } else {
                    format!("{}^{}", ring.name(i), e)
                }
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }
}

/// Polynomial over GF(2) in a [`GradedRing`].
#[derive(Clone)]
pub struct Poly2 {
    ring: Arc<GradedRing>,
    // strictly decreasing
    terms: Vec<Monomial>,
}

impl PartialEq for Poly2 {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly2 {}

impl std::hash::Hash for Poly2 {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

fn same_ring(a: &Arc<GradedRing>, b: &Arc<GradedRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn check_ring(a: &Arc<GradedRing>, b: &Arc<GradedRing>) -> Result<()> {
    if same_ring(a, b) {
        Ok(())
    } else {
        Err(Error::RingMismatch {
            left: a.signature(),
            right: b.signature(),
        })
    }
}

impl Poly2 {
    /// Builds a polynomial from a multiset of monomials; repeated monomials
    /// cancel in pairs.
    pub fn from_terms(ring: &Arc<GradedRing>, mut terms: Vec<Monomial>) -> Poly2 {
        terms.sort_unstable_by(|a, b| b.cmp(a));
        let canonical = terms
            .chunk_by(|a, b| a == b)
            .filter(|run| run.len() % 2 == 1)
            .map(|run| run[0].clone())
            .collect();
        Poly2 {
            ring: Arc::clone(ring),
            terms: canonical,
        }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Monomial> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].is_unit()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.binary_search_by(|t| m.cmp(t)).is_ok()
    }

    /// The common degree of all terms, or `None` for zero and for
    /// inhomogeneous polynomials.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let first = self.terms.first()?.degree;
        self.terms.iter().all(|t| t.degree == first).then_some(first)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.degree)
    }

    /// Homogeneous component of degree `d`.
    pub fn degree_part(&self, d: u32) -> Poly2 {
        Poly2 {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().filter(|t| t.degree == d).cloned().collect(),
        }
    }

    pub fn try_add(&self, other: &Poly2) -> Result<Poly2> {
        check_ring(&self.ring, &other.ring)?;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Poly2 {
            ring: Arc::clone(&self.ring),
            terms: out,
        })
    }

    pub fn try_mul(&self, other: &Poly2) -> Result<Poly2> {
        check_ring(&self.ring, &other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.ring.zero());
        }
        let mut products = Vec::with_capacity(self.terms.len() * other.terms.len());
        for s in &self.terms {
            for t in &other.terms {
                products.push(s.mul(t));
            }
        }
        Ok(Poly2::from_terms(&self.ring, products))
    }

    /// Multiplication by a single monomial; never cancels.
    pub fn mul_monomial(&self, m: &Monomial) -> Poly2 {
        Poly2 {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|t| t.mul(m)).collect(),
        }
    }

    pub fn square(&self) -> Poly2 {
        // Frobenius: cross terms cancel in characteristic 2.
        let terms = self
            .terms
            .iter()
            .map(|t| Monomial {
                degree: 2 * t.degree,
                exps: t.exps.iter().map(|e| 2 * e).collect(),
            })
            .collect();
        Poly2 {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly2 {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Image under the ring homomorphism sending source variable `i` to
    /// `images[i]`, a polynomial in `target`.
    pub fn substitute(&self, target: &Arc<GradedRing>, images: &[Poly2]) -> Result<Poly2> {
        if images.len() != self.ring.len() {
            let missing = self.ring.vars().get(images.len()).map_or("?", |v| v.name.as_str());
            return Err(Error::MissingImage(missing.to_string()));
        }
        for img in images {
            check_ring(target, &img.ring)?;
        }
        let mut powers = PowerCache::new(images);
        let mut acc = Vec::new();
        for term in &self.terms {
            let mut prod = target.one();
            for (i, &e) in term.exps.iter().enumerate() {
                if e > 0 {
                    prod = &prod * powers.get(i, e);
                    if prod.is_zero() {
                        break;
                    }
                }
            }
            acc.extend(prod.terms);
        }
        Ok(Poly2::from_terms(target, acc))
    }

    /// Like [`Poly2::substitute`], with images keyed by variable name.
    pub fn substitute_map(&self, target: &Arc<GradedRing>, images: &BTreeMap<String, Poly2>) -> Result<Poly2> {
        let ordered = self
            .ring
            .vars()
            .iter()
            .map(|v| images.get(&v.name).cloned().ok_or_else(|| Error::MissingImage(v.name.clone())))
            .collect::<Result<Vec<_>>>()?;
        self.substitute(target, &ordered)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            ring: self.ring.vars().iter().map(|v| (v.name.clone(), v.degree)).collect(),
            terms: self.terms.iter().map(|t| t.exps.to_vec()).collect(),
        }
    }

    /// Reads a polynomial serialized by [`Poly2::to_json`], checking that it
    /// belongs to `ring`.
    pub fn from_json(ring: &Arc<GradedRing>, json: &PolyJson) -> Result<Poly2> {
        let declared = GradedRing::new(json.ring.iter().cloned())?;
        check_ring(ring, &declared)?;
        let terms = json
            .terms
            .iter()
            .map(|e| {
                if e.len() != ring.len() {
                    Err(Error::DimensionMismatch {
                        expected: ring.len(),
                        found: e.len(),
                    })
                } else {
                    Ok(ring.monomial(e.clone()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly2::from_terms(ring, terms))
    }
}

struct PowerCache<'a> {
    images: &'a [Poly2],
    // powers[i][e-1] = images[i]^e
    powers: Vec<Vec<Poly2>>,
}

impl<'a> PowerCache<'a> {
    fn new(images: &'a [Poly2]) -> Self {
        Self {
            images,
            powers: vec![Vec::new(); images.len()],
        }
    }

    fn get(&mut self, i: usize, e: u32) -> &Poly2 {
        let e = e as usize;
        let list = &mut self.powers[i];
        if list.is_empty() {
            list.push(self.images[i].clone());
        }
        while list.len() < e {
            let next = &list[list.len() - 1] * &self.images[i];
            list.push(next);
        }
        &list[e - 1]
    }
}

/// JSON form: `{"ring": [[name, degree], ...], "terms": [[e1, ..., ek], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub ring: Vec<(String, u32)>,
    pub terms: Vec<Vec<u32>>,
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(&t.format(&self.ring))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

impl Add for &Poly2 {
    type Output = Poly2;

    fn add(self, rhs: &Poly2) -> Poly2 {
        self.try_add(rhs).expect("ring mismatch in Poly2 addition")
    }
}

impl Add for Poly2 {
    type Output = Poly2;

    fn add(self, rhs: Poly2) -> Poly2 {
        &self + &rhs
    }
}

impl AddAssign<&Poly2> for Poly2 {
    fn add_assign(&mut self, rhs: &Poly2) {
        *self = &*self + rhs;
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;

    fn mul(self, rhs: &Poly2) -> Poly2 {
        self.try_mul(rhs).expect("ring mismatch in Poly2 multiplication")
    }
}

impl Mul for Poly2 {
    type Output = Poly2;

    fn mul(self, rhs: Poly2) -> Poly2 {
        &self * &rhs
    }
}
