use proptest::prelude::*;
use tcf::gf2::BitVector;
use tcf::local_codes::*;

fn binom(n: u32, k: u32) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) as usize / (i + 1) as usize)
}

// Weight divisibility computed by brute force over all codewords.
fn brute_level(c: &LinearCode) -> usize {
    let words = c.codewords().unwrap();
    words.iter().filter(|w| !w.is_zero()).map(|w| w.weight().trailing_zeros() as usize).min().unwrap()
}

#[test]
fn reed_muller_parameters() {
    for eta in 1..=7 {
        for r in 0..=eta {
            let c = reed_muller(r, eta).unwrap();
            assert_eq!(c.n(), 1 << eta);
            assert_eq!(c.dim(), (0..=r).map(|i| binom(eta, i)).sum::<usize>());
            if r < eta {
                assert!(dual_code(&c).same_code(&reed_muller(eta - r - 1, eta).unwrap()));
            }
        }
    }
}

#[test]
fn middle_reed_muller_codes_are_self_dual() {
    for r in 0..=2 {
        let c = reed_muller(r, 2 * r + 1).unwrap();
        assert!(dual_code(&c).same_code(&c));
    }
}

#[test]
fn rm13_weight_distribution_and_level() {
    let c = reed_muller(1, 3).unwrap();
    let mut expected = vec![0u64; 9];
    expected[0] = 1;
    expected[4] = 14;
    expected[8] = 1;
    assert_eq!(c.weight_distribution().unwrap(), expected);
    assert_eq!(divisibility_level(&c), 2);
    assert_eq!(divisibility_by_tuples(&c), 2);
}

#[test]
fn rm13_all_codeword_pairs_overlap_evenly() {
    let c = reed_muller(1, 3).unwrap();
    let words = c.codewords().unwrap();
    let mut pairs = 0;
    for a in &words {
        for b in &words {
            assert_eq!(a.and_weight(b) % 2, 0);
            pairs += 1;
        }
    }
    assert_eq!(pairs, 256);
    assert!(is_multi_orthogonal(&[&c, &c], 2).unwrap());
    let sq = star_product_code(&c, 1).unwrap();
    assert!(sq.is_subcode_of(&dual_code(&c)));
}

#[test]
fn star_powers_of_reed_muller() {
    for eta in 2..=6 {
        for r in 0..=eta {
            for ell in 1..=3 {
                let p = star_product_code(&reed_muller(r, eta).unwrap(), ell).unwrap();
                let want = reed_muller((r * ell as u32).min(eta), eta).unwrap();
                assert!(p.same_code(&want), "RM({r},{eta})^*{ell}");
            }
        }
    }
}

#[test]
fn multi_orthogonality_matches_products() {
    // RM(r, η) is ℓ-orthogonal iff ℓr < η, i.e. RM(ℓr, η) has only even weights.
    for eta in 2..=5 {
        for r in 0..=eta {
            for ell in 1..=3usize {
                let c = reed_muller(r, eta).unwrap();
                let cs = vec![&c; ell];
                assert_eq!(is_multi_orthogonal(&cs, ell).unwrap(), (ell as u32) * r < eta, "RM({r},{eta}) ell={ell}");
            }
        }
    }
    // RM(2,3) is not 2-orthogonal, a negative control for the CZ conditions.
    let c = reed_muller(2, 3).unwrap();
    assert!(!is_multi_orthogonal(&[&c, &c], 2).unwrap());
}

#[test]
fn rm_divisibility_levels() {
    // RM(r, η) is 2^{⌈η/r⌉−1}-divisible (McEliece), checked against brute force.
    for eta in 2..=6 {
        for r in 1..=eta {
            let c = reed_muller(r, eta).unwrap();
            if c.dim() > 16 {
                continue;
            }
            let lvl = brute_level(&c);
            assert_eq!(lvl, (eta.div_ceil(r) - 1) as usize);
            assert_eq!(divisibility_by_tuples(&c), lvl);
        }
    }
}

fn invertible(eta: u32) -> impl Strategy<Value = (Vec<u32>, u32)> {
    (prop::collection::vec(0u32..(1 << eta), eta as usize), 0u32..(1 << eta))
        .prop_filter("invertible", move |(cols, _)| {
            let vs: Vec<BitVector> = cols.iter().map(|&c| BitVector::from_u64(eta as usize, c as u64)).collect();
            tcf::gf2::BitMatrix::from_rows(eta as usize, &vs).rank() == eta as usize
        })
}

proptest! {
    #[test]
    fn reed_muller_is_affine_invariant((a, b) in invertible(4), r in 0u32..=4) {
        let c = reed_muller(r, 4).unwrap();
        let perm = affine_permutation(4, &a, b).unwrap();
        prop_assert!(c.permute(&perm).unwrap().same_code(&c));
    }

    #[test]
    fn tuple_and_exhaustive_divisibility_agree(rows in prop::collection::vec(any::<u16>(), 1..6)) {
        let vs: Vec<BitVector> = rows.iter().map(|&r| BitVector::from_u64(16, r as u64)).collect();
        let c = LinearCode::from_rows(16, &vs);
        prop_assume!(c.dim() > 0);
        prop_assert_eq!(divisibility_by_tuples(&c), brute_level(&c));
    }

    #[test]
    fn dual_is_orthogonal_and_complementary(rows in prop::collection::vec(any::<u32>(), 1..10)) {
        let vs: Vec<BitVector> = rows.iter().map(|&r| BitVector::from_u64(20, r as u64 & 0xfffff)).collect();
        let c = LinearCode::from_rows(20, &vs);
        let d = dual_code(&c);
        prop_assert_eq!(c.dim() + d.dim(), 20);
        for a in c.basis() {
            for b in d.basis() {
                prop_assert!(!a.dot(&b));
            }
        }
    }
}
