//! Per-degree linear algebra for the kernel ring `B = ker(s) ⊂ C`.
//!
//! `C = k[w_1, ..., w_2n]`, `s` is the canonical derivation of
//! [`crate::deriv::bo_derivation`] for `m = 2n`, and the degree-`d` slice of
//! every ring is handled as a GF(2) vector space on its monomial basis.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deriv::{bo_derivation_on, stiefel_whitney_ring, Derivation};
use crate::error::{Error, Result};
use crate::f2linalg::{BitMatrix, BitVec};
use crate::ring2::{GradedRing, Monomial, Poly2, RingHandle};

/// The degree-`d` monomials of a ring, indexed.
#[derive(Debug, Clone)]
pub struct DegreeSlice {
    ring: Arc<GradedRing>,
    degree: u32,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeSlice {
    pub fn new(ring: &Arc<GradedRing>, degree: u32) -> Self {
        let basis = ring.enumerate_monomials(degree);
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Self {
            ring: Arc::clone(ring),
            degree,
            basis,
            index,
        }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a polynomial whose terms all have this degree.
    pub fn vector(&self, p: &Poly2) -> Result<BitVec> {
        if p.ring() != &self.ring {
            return Err(Error::RingMismatch {
                left: self.ring.signature(),
                right: p.ring().signature(),
            });
        }
        let mut v = BitVec::zeros(self.dim());
        for t in p.terms() {
            let i = self.position(t).ok_or_else(|| {
                Error::BadIndex(format!(
                    "term {} has degree {}, slice has degree {}",
                    t.format(&self.ring),
                    t.degree(),
                    self.degree
                ))
            })?;
            v.flip(i);
        }
        Ok(v)
    }

    pub fn poly(&self, v: &BitVec) -> Poly2 {
        assert_eq!(v.len(), self.dim(), "vector length");
        Poly2::from_terms(&self.ring, v.iter_ones().map(|i| self.basis[i].clone()).collect())
    }
}

/// `C`, its derivation and the subring `A = k[u_i, v_i^2]` for a fixed `n`.
#[derive(Debug, Clone)]
pub struct KernelRing {
    n: usize,
    c: Arc<GradedRing>,
    s: Derivation,
    a: Arc<GradedRing>,
    a_images: Vec<Poly2>,
}

impl KernelRing {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadIndex("n must be at least 1".into()));
        }
        let c = stiefel_whitney_ring(2 * n);
        let s = bo_derivation_on(&c);
        let a = a_ring(n);
        // u_i -> w_(2i-1), v_i^2 -> w_(2i)^2
        let a_images = (1..=n)
            .map(|i| c.var(2 * i - 2))
            .chain((1..=n).map(|i| c.var(2 * i - 1).square()))
            .collect();
        Ok(Self { n, c, s, a, a_images })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `C = k[w_1, ..., w_2n]`.
    pub fn c(&self) -> &Arc<GradedRing> {
        &self.c
    }

    pub fn derivation(&self) -> &Derivation {
        &self.s
    }

    /// `A` as an abstract polynomial ring in `u_i` (degree `2i-1`) and
    /// `v_i^2` (degree `4i`).
    pub fn a(&self) -> &Arc<GradedRing> {
        &self.a
    }

    /// The inclusion `A -> C`.
    pub fn a_to_c(&self, p: &Poly2) -> Result<Poly2> {
        p.substitute(&self.c, &self.a_images)
    }

    /// Rows: degree-`d` monomials of `C`; columns: degree-`(d-1)` monomials;
    /// row `m` holds `s(m)`.
    pub fn matrix_of_s(&self, d: u32) -> BitMatrix {
        let rows = DegreeSlice::new(&self.c, d);
        if d == 0 {
            return BitMatrix::zeros(rows.dim(), 0);
        }
        let cols = DegreeSlice::new(&self.c, d - 1);
        let mut m = BitMatrix::zeros(rows.dim(), cols.dim());
        for (r, mono) in rows.basis().iter().enumerate() {
            for t in self.s.apply_monomial(mono).terms() {
                let c = cols.position(t).expect("s lowers degree by one");
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn kernel_basis(&self, d: u32) -> KernelBasis {
        let slice = DegreeSlice::new(&self.c, d);
        let elements = self
            .matrix_of_s(d)
            .kernel_basis()
            .iter()
            .map(|v| slice.poly(v))
            .collect();
        KernelBasis { n: self.n, degree: d, elements }
    }

    /// `dim B_d`, from the rank of `s` on `C_d`.
    pub fn kernel_dim(&self, d: u32) -> usize {
        let m = self.matrix_of_s(d);
        m.rows() - m.rank()
    }

    /// Spanning set of `A_d`, embedded in `C`.
    pub fn a_spanning_set(&self, d: u32) -> Vec<Poly2> {
        self.a
            .enumerate_monomials(d)
            .into_iter()
            .map(|m| self.a_to_c(&self.a.from_monomial(m)).expect("images cover A"))
            .collect()
    }

    /// Compares `span(im(s)_d ∪ A_d)` with `ker(s)_d`.
    pub fn verify_ker_decomposition(&self, d: u32) -> KerDecomposition {
        let slice = DegreeSlice::new(&self.c, d);
        let mut rows: Vec<BitVec> = Vec::new();
        let image = self.matrix_of_s(d + 1);
        let image_rank = image.rank();
        rows.extend((0..image.rows()).map(|r| image.row(r)));
        let a_elems = self.a_spanning_set(d);
        let a_dim = a_elems.len();
        for p in &a_elems {
            rows.push(slice.vector(p).expect("A_d embeds in C_d"));
        }
        let span = BitMatrix::from_rows(slice.dim(), &rows).expect("uniform row length");
        let span_dim = span.rank();
        let s_d = self.matrix_of_s(d);
        let annihilated = rows
            .iter()
            .all(|v| s_d.left_mul(v).map(|img| img.is_zero()).unwrap_or(false));
        let kernel_dim = s_d.rows() - s_d.rank();
        KerDecomposition {
            n: self.n,
            degree: d,
            kernel_dim,
            span_dim,
            image_dim: image_rank,
            a_dim,
            ok: annihilated && span_dim == kernel_dim,
        }
    }
}

fn a_ring(n: usize) -> Arc<GradedRing> {
    let vars = (1..=n)
        .map(|i| (format!("u{i}"), 2 * i as u32 - 1))
        .chain((1..=n).map(|i| (format!("v{i}sq"), 4 * i as u32)));
    GradedRing::new(vars).expect("valid ring")
}

/// Basis of `B_d = ker(s) ∩ C_d`.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    pub n: usize,
    pub degree: u32,
    pub elements: Vec<Poly2>,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KerDecomposition {
    pub n: usize,
    pub degree: u32,
    pub kernel_dim: usize,
    pub span_dim: usize,
    pub image_dim: usize,
    pub a_dim: usize,
    pub ok: bool,
}

pub fn matrix_of_s(n: usize, d: u32) -> Result<BitMatrix> {
    Ok(KernelRing::new(n)?.matrix_of_s(d))
}

pub fn kernel_ring_basis(n: usize, d: u32) -> Result<KernelBasis> {
    Ok(KernelRing::new(n)?.kernel_basis(d))
}

pub fn verify_ker_decomposition(n: usize, d: u32) -> Result<KerDecomposition> {
    Ok(KernelRing::new(n)?.verify_ker_decomposition(d))
}

/// Which graded object to count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    /// `C = k[w_1, ..., w_2n]`.
    Stiefel,
    /// The kernel ring `B`.
    Kernel,
    /// `H*(BGO(2n))`, as `dim (λ k[λ, b])_d + dim B_d`.
    Cohomology,
}

/// `k[λ, b_4, ..., b_4n]`.
pub fn lambda_b_ring(n: usize) -> Arc<GradedRing> {
    let vars = std::iter::once(("L".to_string(), 2)).chain((1..=n).map(|i| (format!("b{}", 4 * i), 4 * i as u32)));
    GradedRing::new(vars).expect("valid ring")
}

/// `dim (λ · k[λ, b])_d`.
pub fn lambda_part_dim(lb: &GradedRing, d: u32) -> usize {
    if d < 2 {
        0
    } else {
        lb.slice_dim(d - 2)
    }
}

/// Graded dimensions for degrees `0..=max_degree`.
pub fn hilbert_series(kind: SeriesKind, n: usize, max_degree: u32) -> Result<Vec<usize>> {
    let kr = KernelRing::new(n)?;
    let lb = lambda_b_ring(n);
    Ok((0..=max_degree)
        .into_par_iter()
        .map(|d| match kind {
            SeriesKind::Stiefel => kr.c().slice_dim(d),
            SeriesKind::Kernel => kr.kernel_dim(d),
            SeriesKind::Cohomology => lambda_part_dim(&lb, d) + kr.kernel_dim(d),
        })
        .collect())
}
