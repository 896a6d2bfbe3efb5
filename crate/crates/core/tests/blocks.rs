mod common;

use proptest::prelude::*;

use common::*;
use hypsurf::blocks::{block_weierstrass_edges, construct_m, construct_p, lemma_technical_classes, LemmaError};
use hypsurf::involution::{quotient_genus, verify_involution};
use hypsurf::surface::{genus, stratum_signature, total_cone_angle, validate_surface, ConeCount};

#[test]
fn lemma_classes_match_oracle_on_equal_spacing() {
    for n in 1..=20 {
        let xs = equally_spaced(n);
        let got = lemma_technical_classes(&xs).unwrap();
        assert_eq!(as_sets(&got), lemma_oracle(&xs).into_iter().collect(), "n = {n}");
        let expected = if n % 2 == 1 { 1 } else { 2 };
        assert_eq!(got.len(), expected, "n = {n}");
    }
}

#[test]
fn lemma_rejects_bad_points() {
    assert_eq!(lemma_technical_classes(&[]), Err(LemmaError::Empty));
    assert_eq!(
        lemma_technical_classes(&[rat(1, 2), rat(1, 2)]),
        Err(LemmaError::NotIncreasing)
    );
    assert_eq!(lemma_technical_classes(&[rat(1, 1)]), Err(LemmaError::OutOfRange));
}

proptest! {
    #[test]
    fn lemma_classes_match_oracle(seed in any::<u64>(), n in 1usize..30) {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let xs = random_points(&mut rng, n);
        let got = lemma_technical_classes(&xs).unwrap();
        prop_assert_eq!(as_sets(&got), lemma_oracle(&xs).into_iter().collect());
        let sizes: Vec<usize> = got.iter().map(Vec::len).collect();
        if n % 2 == 1 {
            prop_assert_eq!(sizes, vec![2 * n]);
        } else {
            prop_assert_eq!(sizes, vec![n, n]);
        }
    }
}

#[test]
fn block_table() {
    for n in 1..=12 {
        let p = construct_p(n, 2).unwrap();
        let mut blocks = vec![(p, n)];
        if n >= 2 {
            blocks.push((construct_m(n, &sqrt2()).unwrap(), n - 1));
        }
        for (b, catalog) in blocks {
            let tag = format!("{:?}_{n}", b.spec.kind);
            assert!(validate_surface(&b.surface).is_valid(), "{tag}");
            let g = genus(&b.surface);
            assert_eq!(g, expected_genus(n), "{tag}");
            assert_eq!(g as i64, gauss_bonnet_genus(&b.surface), "{tag}");
            assert_eq!(stratum_signature(&b.surface), expected_stratum(n), "{tag}");
            assert_eq!(total_cone_angle(&b.surface, ConeCount::All), n as u32, "{tag}");
            assert_eq!(block_weierstrass_edges(&b).unwrap().len(), catalog, "{tag}");
            let rep = verify_involution(&b.surface, &b.involution).unwrap();
            assert_eq!(rep.fixed_points.len(), 2 * g as usize + 2, "{tag}");
            assert!(rep.is_hyperelliptic, "{tag}");
            assert_eq!(quotient_genus(&b.surface, &b.involution).unwrap(), 0, "{tag}");
        }
    }
}

#[test]
fn m_blocks_need_irrational_shear() {
    assert!(construct_m(3, &hypsurf::field::QuadExt::from_ratio(1, 2, 2)).is_err());
    assert!(construct_m(1, &sqrt2()).is_err());
    assert!(construct_m(3, &"1/3+√3".parse().unwrap()).is_ok());
}
