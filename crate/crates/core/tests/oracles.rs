use gocohom::deriv::{bo_derivation, stiefel_whitney_ring};
use gocohom::graded::{hilbert_series, KernelRing, SeriesKind};
use gocohom::presentation::{
    gens_n, gens_n_with, koszul_assignment, stated_family_counts, unordered_product_count, PairOrder,
};
use gocohom::ring2::{GradedRing, RingHandle};

/// Coefficients of `Π 1/(1 - t^deg)` up to `max`.
fn generating_function(degrees: &[u32], max: usize) -> Vec<usize> {
    let mut coeffs = vec![0usize; max + 1];
    coeffs[0] = 1;
    for &g in degrees {
        let g = g as usize;
        for d in g..=max {
            coeffs[d] += coeffs[d - g];
        }
    }
    coeffs
}

#[test]
fn enumeration_matches_generating_function() {
    let rings: Vec<Vec<(String, u32)>> = vec![
        (1..=6).map(|i| (format!("w{i}"), i)).collect(),
        vec![("L".into(), 2), ("b4".into(), 4), ("b8".into(), 8)],
        vec![("x".into(), 3), ("y".into(), 3), ("z".into(), 5)],
    ];
    for vars in rings {
        let degrees: Vec<u32> = vars.iter().map(|v| v.1).collect();
        let ring = GradedRing::new(vars).unwrap();
        let expected = generating_function(&degrees, 24);
        for d in 0..=24u32 {
            let monos = ring.enumerate_monomials(d);
            assert_eq!(monos.len(), expected[d as usize], "degree {d}");
            assert_eq!(ring.slice_dim(d), expected[d as usize]);
            assert!(monos.windows(2).all(|w| w[0] > w[1]), "strictly decreasing");
            assert!(monos.iter().all(|m| m.degree() == d));
        }
    }
}

/// Rank of `s: C_(d+1) -> C_d` plus the homology in degree `d` fills `B_d`,
/// and the homology is the span of the `v^2` monomials.
#[test]
fn kernel_dimensions_satisfy_cross_degree_identity() {
    for n in 1..=4 {
        let max = if n <= 2 { 20 } else { 14 };
        let b = hilbert_series(SeriesKind::Kernel, n, max + 1).unwrap();
        let c = hilbert_series(SeriesKind::Stiefel, n, max + 1).unwrap();
        let squares: Vec<u32> = (1..=n as u32).map(|i| 4 * i).collect();
        let h = generating_function(&squares, max as usize + 1);
        for d in 0..=max as usize {
            assert_eq!(b[d] + b[d + 1], c[d + 1] + h[d], "n={n} d={d}");
        }
    }
}

/// Kernel dimension by exhaustive search over all vectors of small slices.
#[test]
fn kernel_dimensions_by_brute_force() {
    for n in 1..=2 {
        let kr = KernelRing::new(n).unwrap();
        let c = kr.c().clone();
        for d in 0..=9 {
            let basis = c.enumerate_monomials(d);
            if basis.len() > 14 {
                continue;
            }
            let images: Vec<_> = basis.iter().map(|m| kr.derivation().apply_monomial(m)).collect();
            let mut count = 0usize;
            for mask in 0u32..1 << basis.len() {
                let mut acc = c.zero();
                for (i, img) in images.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        acc = &acc + img;
                    }
                }
                if acc.is_zero() {
                    count += 1;
                }
            }
            assert_eq!(count, 1 << kr.kernel_dim(d), "n={n} d={d}");
        }
    }
}

#[test]
fn derivation_squares_to_zero_on_monomials() {
    for m in 1..=8 {
        let s = bo_derivation(m);
        let ring = stiefel_whitney_ring(m);
        for d in 0..=12 {
            for mono in ring.enumerate_monomials(d) {
                assert!(s.apply(&s.apply_monomial(&mono)).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn koszul_relations_vanish_in_c() {
    for n in 1..=4 {
        let kr = KernelRing::new(n).unwrap();
        let images = koszul_assignment(&kr);
        for order in [PairOrder::Unordered, PairOrder::Ordered] {
            for rel in gens_n_with(n, order) {
                assert!(rel.poly.substitute(kr.c(), &images).unwrap().is_zero(), "{}", rel.poly);
            }
        }
    }
}

#[test]
fn relation_family_sizes() {
    for n in 1..=5 {
        let count = |order, f| gens_n_with(n, order).iter().filter(|r| r.family == f).count() as u128;
        let stated = stated_family_counts(n);
        assert_eq!(count(PairOrder::Ordered, 1), stated[0]);
        assert_eq!(count(PairOrder::Ordered, 2), stated[1]);
        assert_eq!(count(PairOrder::Ordered, 3), stated[2]);
        assert_eq!(count(PairOrder::Unordered, 3), unordered_product_count(n));
        assert_eq!(gens_n(n).len(), gens_n_with(n, PairOrder::Unordered).len());
    }
}
