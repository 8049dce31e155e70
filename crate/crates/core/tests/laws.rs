use std::sync::Arc;

use gocohom::cohomring::CohomologyModel;
use gocohom::deriv::{bo_derivation, stiefel_whitney_ring};
use gocohom::f2linalg::{BitMatrix, BitVec};
use gocohom::ring2::{GradedRing, Poly2, RingHandle};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poly_in(ring: Arc<GradedRing>, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly2> {
    let len = ring.len();
    prop::collection::vec(prop::collection::vec(0..=max_exp, len), 0..=max_terms)
        .prop_map(move |terms| Poly2::from_terms(&ring, terms.into_iter().map(|e| ring.monomial(e)).collect()))
}

fn c4() -> Arc<GradedRing> {
    stiefel_whitney_ring(4)
}

proptest! {
    #[test]
    fn ring_axioms(p in poly_in(c4(), 3, 6), q in poly_in(c4(), 3, 6), r in poly_in(c4(), 3, 6)) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p + &p).is_zero());
        prop_assert_eq!(&p * &c4().one(), p.clone());
    }

    #[test]
    fn frobenius(p in poly_in(c4(), 3, 6), q in poly_in(c4(), 3, 6)) {
        prop_assert_eq!((&p + &q).square(), &p.square() + &q.square());
        prop_assert_eq!(p.square(), &p * &p);
        prop_assert_eq!(p.pow(4), p.square().square());
    }

    #[test]
    fn substitution_composes(
        p in poly_in(c4(), 2, 4),
        first in prop::collection::vec(poly_in(stiefel_whitney_ring(3), 1, 3), 4),
        second in prop::collection::vec(poly_in(stiefel_whitney_ring(2), 1, 3), 3),
    ) {
        let mid = stiefel_whitney_ring(3);
        let last = stiefel_whitney_ring(2);
        let two_steps = p.substitute(&mid, &first).unwrap().substitute(&last, &second).unwrap();
        let composed: Vec<Poly2> = first.iter().map(|f| f.substitute(&last, &second).unwrap()).collect();
        prop_assert_eq!(two_steps, p.substitute(&last, &composed).unwrap());
    }

    #[test]
    fn substitution_is_a_homomorphism(
        p in poly_in(c4(), 2, 4),
        q in poly_in(c4(), 2, 4),
        images in prop::collection::vec(poly_in(stiefel_whitney_ring(3), 1, 3), 4),
    ) {
        let t = stiefel_whitney_ring(3);
        let f = |x: &Poly2| x.substitute(&t, &images).unwrap();
        prop_assert_eq!(f(&(&p * &q)), &f(&p) * &f(&q));
        prop_assert_eq!(f(&(&p + &q)), &f(&p) + &f(&q));
    }

    #[test]
    fn derivation_laws((m, p, q) in (1usize..=6).prop_flat_map(|m| {
        let ring = stiefel_whitney_ring(m);
        (Just(m), poly_in(ring.clone(), 3, 5), poly_in(ring, 3, 5))
    })) {
        let s = bo_derivation(m);
        let sp = s.apply(&p).unwrap();
        let sq = s.apply(&q).unwrap();
        prop_assert_eq!(s.apply(&(&p * &q)).unwrap(), &(&sp * &q) + &(&p * &sq));
        prop_assert!(s.apply(&sp).unwrap().is_zero());
    }

    #[test]
    fn rank_nullity(rows in 1usize..90, cols in 1usize..90, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = BitMatrix::random(rows, cols, &mut rng);
        let rank = m.rank();
        prop_assert!(rank <= rows.min(cols));
        let kernel = m.kernel_basis();
        prop_assert_eq!(rank + kernel.len(), rows);
        for v in &kernel {
            prop_assert!(m.left_mul(v).unwrap().is_zero());
        }
        let e = m.echelon();
        prop_assert_eq!(e.rank(), rank);
    }

    #[test]
    fn membership_solutions_are_exact(rows in 1usize..40, cols in 1usize..40, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = BitMatrix::random(rows, cols, &mut rng);
        let x = BitVec::from_bools(&(0..rows).map(|i| (seed >> (i % 64)) & 1 == 1).collect::<Vec<_>>());
        let target = m.left_mul(&x).unwrap();
        let sol = m.solve_membership(&target).unwrap().expect("target is in the row space");
        prop_assert_eq!(m.left_mul(&sol).unwrap(), target);
    }

    #[test]
    fn pair_model_is_a_ring(i in 0usize..12, j in 0usize..12, k in 0usize..12) {
        let model = CohomologyModel::new(2).unwrap();
        let elems: Vec<_> = (1..=4).flat_map(|d| model.basis(d).unwrap()).map(|b| b.element).collect();
        let (x, y, z) = (&elems[i % elems.len()], &elems[j % elems.len()], &elems[k % elems.len()]);
        prop_assert_eq!(&(x * y) * z, x * &(y * z));
        prop_assert_eq!(x * y, y * x);
        let prod = x * y;
        let sum = x + y;
        prop_assert!(model.membership_check(prod.p(), prod.q()));
        prop_assert!(model.membership_check(sum.p(), sum.q()));
    }
}
