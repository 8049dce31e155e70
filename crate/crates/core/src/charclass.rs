//! Mod 2 Chern classes of the universal bundle over `BGO(2n)`.
//!
//! Even classes are `c̄_(2r) = b_4r`. Odd classes are
//! `c̄_(2r-1) = a_(2r-1)^2 + λ f_r(λ, b_4, ..., b_(4r-4))`, where `f_r` is
//! built from the inverse of the binomial matrix
//! `A_(r,k) = C(n-k, 2r-2k) λ^(2r-2k)`. The splitting oracle checks the
//! formula independently in `k[λ, x_1, ..., x_n]`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomring::{CohomElem, CohomologyModel};
use crate::error::{Error, Result};
use crate::graded::lambda_b_ring;
use crate::ring2::{GradedRing, Poly2, RingHandle};

/// Exact binomial coefficient. Overflow panics.
pub fn binomial_exact(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc
}

/// `C(n, k) mod 2` by Lucas: odd iff every bit of `k` is set in `n`.
pub fn binomial_parity(n: u64, k: u64) -> bool {
    k <= n && k & !n == 0
}

/// `C(n, k) mod 2`, cross-checked against the exact value while it fits.
pub fn binomial_mod2(n: u64, k: u64) -> bool {
    let parity = binomial_parity(n, k);
    if n <= 120 {
        assert_eq!(binomial_exact(n, k) % 2 == 1, parity, "C({n}, {k})");
    }
    parity
}

/// `k[λ]` with `deg λ = 2`.
pub fn lambda_ring() -> Arc<GradedRing> {
    GradedRing::new([("L", 2)]).expect("valid ring")
}

fn lambda_pow(ring: &Arc<GradedRing>, e: u32) -> Poly2 {
    let mut exps = vec![0; ring.len()];
    exps[0] = e;
    ring.from_monomial(ring.monomial(exps))
}

fn scaled_lambda_pow(ring: &Arc<GradedRing>, odd: bool, e: u32) -> Poly2 {
    if odd {
        lambda_pow(ring, e)
    } else {
        ring.zero()
    }
}

/// Lower triangular `n × n` matrix over `k[λ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriMatrixPoly {
    n: usize,
    ring: Arc<GradedRing>,
    // rows[r-1][k-1] for k ≤ r
    rows: Vec<Vec<Poly2>>,
}

impl TriMatrixPoly {
    pub fn identity(n: usize) -> Self {
        let ring = lambda_ring();
        let rows = (1..=n)
            .map(|r| (1..=r).map(|k| if k == r { ring.one() } else { ring.zero() }).collect())
            .collect();
        Self { n, ring, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    /// Entry `(r, k)`, 1-based; zero above the diagonal.
    pub fn get(&self, r: usize, k: usize) -> Poly2 {
        if k > r {
            self.ring.zero()
        } else {
            self.rows[r - 1][k - 1].clone()
        }
    }

    pub fn is_unitriangular(&self) -> bool {
        (1..=self.n).all(|r| self.rows[r - 1][r - 1].is_one())
    }

    /// Whether every entry is a polynomial in `λ^2`.
    pub fn even_in_lambda(&self) -> bool {
        self.rows.iter().flatten().all(|p| p.terms().iter().all(|t| t.exps()[0] % 2 == 0))
    }

    pub fn mul(&self, other: &TriMatrixPoly) -> TriMatrixPoly {
        assert_eq!(self.n, other.n, "matrix sizes differ");
        let rows = (1..=self.n)
            .map(|r| {
                (1..=r)
                    .map(|k| {
                        let mut acc = self.ring.zero();
                        for j in k..=r {
                            acc += &(&self.get(r, j) * &other.get(j, k));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        TriMatrixPoly {
            n: self.n,
            ring: Arc::clone(&self.ring),
            rows,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == TriMatrixPoly::identity(self.n)
    }
}

/// `A_(r,k) = C(n-k, 2r-2k) λ^(2r-2k)` for `1 ≤ k ≤ r ≤ n`.
pub fn matrix_a(n: usize) -> TriMatrixPoly {
    let ring = lambda_ring();
    let rows = (1..=n)
        .map(|r| {
            (1..=r)
                .map(|k| {
                    let e = 2 * (r - k) as u64;
                    scaled_lambda_pow(&ring, binomial_mod2((n - k) as u64, e), e as u32)
                })
                .collect()
        })
        .collect();
    TriMatrixPoly { n, ring, rows }
}

/// Inverse of a unit lower triangular matrix by forward substitution.
pub fn invert_unitriangular(m: &TriMatrixPoly) -> Result<TriMatrixPoly> {
    if !m.is_unitriangular() {
        return Err(Error::BadIndex("matrix is not unit lower triangular".into()));
    }
    let ring = Arc::clone(&m.ring);
    let mut rows: Vec<Vec<Poly2>> = Vec::with_capacity(m.n);
    for r in 1..=m.n {
        let mut row = vec![ring.zero(); r];
        row[r - 1] = ring.one();
        for k in (1..r).rev() {
            let mut acc = ring.zero();
            for j in k..r {
                acc += &(&m.get(r, j) * &rows[j - 1][k - 1]);
            }
            row[k - 1] = acc;
        }
        rows.push(row);
    }
    Ok(TriMatrixPoly { n: m.n, ring, rows })
}

/// `f_r` in `k[λ, b_4, ..., b_4n]`:
/// `C(n, 2r-1) λ^(2r-2) + Σ_(k<r) C(n-k, 2r-1-2k) λ^(2r-2-2k) Σ_(j≤k) B_(k,j) (b_4j + C(n, 2j) λ^(2j))`.
pub fn f_poly(n: usize, r: usize) -> Result<Poly2> {
    let inverse = invert_unitriangular(&matrix_a(n))?;
    f_poly_with(n, r, &inverse)
}

fn f_poly_with(n: usize, r: usize, inverse: &TriMatrixPoly) -> Result<Poly2> {
    if r == 0 || r > n {
        return Err(Error::BadIndex(format!("f_{r} needs 1 <= r <= {n}")));
    }
    let lb = lambda_b_ring(n);
    let embed = |p: &Poly2| p.substitute(&lb, &[lb.var(0)]);
    let (n64, r64) = (n as u64, r as u64);
    let mut f = scaled_lambda_pow(&lb, binomial_mod2(n64, 2 * r64 - 1), 2 * r as u32 - 2);
    for k in 1..r {
        let k64 = k as u64;
        if !binomial_mod2(n64 - k64, 2 * r64 - 1 - 2 * k64) {
            continue;
        }
        let mut inner = lb.zero();
        for j in 1..=k {
            let shifted = &lb.var(j) + &scaled_lambda_pow(&lb, binomial_mod2(n64, 2 * j as u64), 2 * j as u32);
            inner += &(&embed(&inverse.get(k, j))? * &shifted);
        }
        f += &(&lambda_pow(&lb, 2 * (r - 1 - k) as u32) * &inner);
    }
    Ok(f)
}

/// Coefficient of `b_(4r-4)` in `f_r`, read off the computed polynomial.
pub fn f_leading_b_coefficient(n: usize, r: usize) -> Result<bool> {
    if r < 2 {
        return Err(Error::BadIndex(format!("f_{r} has no b coefficient")));
    }
    let f = f_poly(n, r)?;
    let lb = f.ring().clone();
    let mut exps = vec![0; lb.len()];
    exps[r - 1] = 1;
    Ok(f.contains(&lb.monomial(exps)))
}

/// `c̄_i` as a polynomial in the presentation ring and as a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernClass {
    pub n: usize,
    pub i: usize,
    pub formula: Poly2,
    pub element: CohomElem,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernJson {
    pub n: usize,
    pub i: usize,
    pub element: crate::cohomring::ElemJson,
    pub formula_text: String,
}

impl ChernClass {
    pub fn to_json(&self) -> ChernJson {
        ChernJson {
            n: self.n,
            i: self.i,
            element: self.element.to_json(),
            formula_text: self.formula.to_string(),
        }
    }
}

/// Embeds a polynomial of `k[λ, b]` into the presentation ring.
fn lb_into_r(model: &CohomologyModel, p: &Poly2) -> Result<Poly2> {
    let r = model.presentation_ring();
    let images: Vec<Poly2> = p
        .ring()
        .vars()
        .iter()
        .map(|v| r.var_named(&v.name))
        .collect::<Result<_>>()?;
    p.substitute(r, &images)
}

pub fn chern_image_in(model: &CohomologyModel, i: usize) -> Result<ChernClass> {
    let n = model.n();
    if i == 0 || i > 2 * n {
        return Err(Error::BadIndex(format!("c{i} needs 1 <= i <= {}", 2 * n)));
    }
    let r = model.presentation_ring();
    let formula = if i.is_multiple_of(2) {
        r.var_named(&format!("b{}", 2 * i))?
    } else {
        let f = f_poly(n, i.div_ceil(2))?;
        let lambda_f = &r.var_named("L")? * &lb_into_r(model, &f)?;
        &r.var_named(&format!("a{i}"))?.square() + &lambda_f
    };
    Ok(ChernClass {
        n,
        i,
        element: model.evaluate(&formula)?,
        formula,
    })
}

pub fn chern_image(n: usize, i: usize) -> Result<ChernClass> {
    chern_image_in(&CohomologyModel::new(n)?, i)
}

/// `a_1^2 + nλ`.
pub fn closed_form_c1(model: &CohomologyModel) -> Result<Poly2> {
    let r = model.presentation_ring();
    let mut p = r.var_named("a1")?.square();
    if model.n() % 2 == 1 {
        p += &r.var_named("L")?;
    }
    Ok(p)
}

/// `a_3^2 + (n(n-1)(2n-1)/6) λ^3 + (n-1) λ b_4`, for `n ≥ 2`.
pub fn closed_form_c3(model: &CohomologyModel) -> Result<Poly2> {
    let n = model.n() as u128;
    if n < 2 {
        return Err(Error::BadIndex("c3 needs n >= 2".into()));
    }
    let r = model.presentation_ring();
    let lambda = r.var_named("L")?;
    let mut p = r.var_named("a3")?.square();
    if (n * (n - 1) * (2 * n - 1) / 6) % 2 == 1 {
        p += &lambda.pow(3);
    }
    if (n - 1) % 2 == 1 {
        p += &(&lambda * &r.var_named("b4")?);
    }
    Ok(p)
}

/// Outcome of the splitting-principle check for one `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub n: usize,
    /// `λ f_r(λ, b(λ, x)) = c̄_(2r-1)(λ, x)` for `r = 1..=n`.
    pub odd_ok: Vec<bool>,
    /// `c̄_(2r)` matches the elementary symmetric expansion, `r = 1..=n`.
    pub even_ok: Vec<bool>,
}

impl SplittingReport {
    pub fn ok(&self) -> bool {
        self.odd_ok.iter().chain(&self.even_ok).all(|&b| b)
    }
}

/// Expands `c(E) = Π (1 + λ + λx_i + x_i^2)` in `k[λ, x_1, ..., x_n]` and
/// checks both Chern class formulas against it.
pub fn splitting_oracle(n: usize) -> Result<SplittingReport> {
    let ring = GradedRing::new(std::iter::once(("L".to_string(), 2)).chain((1..=n).map(|i| (format!("x{i}"), 2))))?;
    let lambda = ring.var(0);
    let ys: Vec<Poly2> = (1..=n).map(|i| &(&lambda * &ring.var(i)) + &ring.var(i).square()).collect();

    let mut total = ring.one();
    for y in &ys {
        total = &total * &(&(&ring.one() + &lambda) + y);
    }
    let chern = |j: usize| total.degree_part(2 * j as u32);

    // elementary symmetric polynomials of the y_i
    let mut sym = vec![ring.one()];
    sym.resize(n + 1, ring.zero());
    for y in &ys {
        for k in (1..=n).rev() {
            let next = &sym[k] + &(y * &sym[k - 1]);
            sym[k] = next;
        }
    }

    let mut b_images = vec![lambda.clone()];
    b_images.extend((1..=n).map(|j| chern(2 * j)));

    let inverse = invert_unitriangular(&matrix_a(n))?;
    let odd_ok = (1..=n)
        .into_par_iter()
        .map(|r| -> Result<bool> {
            let f = f_poly_with(n, r, &inverse)?.substitute(&ring, &b_images)?;
            Ok(&lambda * &f == chern(2 * r - 1))
        })
        .collect::<Result<Vec<_>>>()?;

    let n64 = n as u64;
    let even_ok = (1..=n)
        .map(|r| {
            let r64 = r as u64;
            let mut expected = scaled_lambda_pow(&ring, binomial_mod2(n64, 2 * r64), 2 * r as u32);
            for k in 1..=r {
                let k64 = k as u64;
                if binomial_mod2(n64 - k64, 2 * (r64 - k64)) {
                    expected += &(&lambda_pow(&ring, 2 * (r - k) as u32) * &sym[k]);
                }
            }
            expected == chern(2 * r)
        })
        .collect();

    Ok(SplittingReport { n, odd_ok, even_ok })
}
