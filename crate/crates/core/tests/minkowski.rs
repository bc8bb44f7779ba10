mod common;

use common::*;
use covar_medium::minkowski::{
    boost_apply, build_tetrad, eta_basis, pair_contract, pair_index, Bivector, Boost, PAIRS,
};
use covar_medium::{Complex64, Error, FourVector, PairTensor};
use proptest::prelude::*;

#[test]
fn pair_index_examples() {
    assert_eq!(pair_index(0, 1).unwrap(), (0, 1.0));
    assert_eq!(pair_index(1, 0).unwrap(), (0, -1.0));
    assert_eq!(pair_index(3, 2).unwrap(), (5, -1.0));
    assert_eq!(pair_index(2, 2), Err(Error::DegeneratePair(2)));
    assert_eq!(pair_index(4, 1), Err(Error::SlotOutOfRange(4)));
}

#[test]
fn boost_example() {
    let b = Boost::new([0.6, 0.0, 0.0]).unwrap();
    let v = boost_apply(&b, &FourVector::rest_velocity());
    for (got, want) in v.0.iter().zip([-0.75, 0.0, 0.0, 1.25]) {
        assert!((got - want).abs() < 1e-15);
    }
    assert!(Boost::new([0.6, 0.8, 0.0]).is_err());
    let id = Boost::new([0.0; 3]).unwrap();
    let t = pair_tensor(&mut rng(2));
    assert_eq!(boost_apply(&id, &t), t);
}

#[test]
fn axis_tetrad() {
    let t = build_tetrad([0.0, 0.0, 1.0]).unwrap();
    let want = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
    for (leg, w) in t.legs.iter().zip(want) {
        assert_eq!(leg.0, w);
    }
    assert!(matches!(build_tetrad([0.0; 3]), Err(Error::NotUnitDirection(_))));
    assert!(build_tetrad([0.0, 0.0, 2.0]).is_err());
}

#[test]
fn axis_eta_contractions() {
    let t = build_tetrad([0.0, 0.0, 1.0]).unwrap();
    let full_dot = |a: &Bivector, b: &Bivector| {
        let (fa, fb) = (a.to_full(), b.to_full());
        let mut acc = 0.0;
        for m in 0..4 {
            for n in 0..4 {
                acc += fa[m][n] * fb[m][n] * g(m, m) * g(n, n);
            }
        }
        acc
    };
    let basis = eta_basis(&t);
    assert!((full_dot(&basis[0], &basis[0]) - 1.0).abs() < 1e-15);
    assert!((full_dot(&basis[5], &basis[5]) + 1.0).abs() < 1e-15);
    // the built-in contraction agrees with the explicit one
    assert!((basis[5].contract(&basis[5]) - full_dot(&basis[5], &basis[5])).abs() < 1e-15);
}

#[test]
fn identity_doubles_under_contraction() {
    let id = PairTensor::identity();
    assert_eq!(pair_contract(&id, &id), id.scale(2.0));
    assert!(pair_contract(&PairTensor::zero(), &id).is_zero());
    // rank-4 form of Id is g^{μα}g^{νβ} - g^{μβ}g^{να}
    let full = id.to_rank4();
    for m in 0..4 {
        for n in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    let want = g(m, a) * g(n, b) - g(m, b) * g(n, a);
                    assert_eq!(full[m][n][a][b], c(want));
                }
            }
        }
    }
}

#[test]
fn collinear_boosts_compose() {
    let (a, b) = (0.3, 0.5);
    let ba = Boost::new([0.0, a, 0.0]).unwrap();
    let bb = Boost::new([0.0, b, 0.0]).unwrap();
    let direct = Boost::new([0.0, (a + b) / (1.0 + a * b), 0.0]).unwrap();
    let composed = bb.matrix().compose(ba.matrix());
    for i in 0..4 {
        for j in 0..4 {
            assert!((composed.0[i][j] - direct.matrix().0[i][j]).abs() < 1e-14);
        }
    }
}

fn velocity_strategy() -> impl Strategy<Value = [f64; 3]> {
    (-0.57f64..0.57, -0.57f64..0.57, -0.57f64..0.57).prop_map(|(x, y, z)| [x, y, z])
}

fn vector_strategy() -> impl Strategy<Value = FourVector> {
    prop::array::uniform4(-3.0f64..3.0).prop_map(FourVector)
}

fn direction_strategy() -> impl Strategy<Value = [f64; 3]> {
    (0.0f64..std::f64::consts::PI, 0.0f64..2.0 * std::f64::consts::PI)
        .prop_map(|(th, ph)| [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()])
}

proptest! {
    #[test]
    fn boosts_preserve_metric(v in velocity_strategy()) {
        let b = Boost::new(v).unwrap();
        prop_assert!(b.matrix().metric_residual() <= 1e-14);
        prop_assert!((b.matrix().determinant() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn boosts_preserve_inner_products(v in velocity_strategy(), a in vector_strategy(), b in vector_strategy()) {
        let boost = Boost::new(v).unwrap();
        let (ba, bb) = (boost_apply(&boost, &a), boost_apply(&boost, &b));
        prop_assert!((ba.dot(&bb) - a.dot(&b)).abs() <= 1e-12);
    }

    #[test]
    fn boost_then_inverse_is_identity(v in velocity_strategy(), seed in any::<u64>()) {
        let t = pair_tensor(&mut rng(seed));
        let fwd = Boost::new(v).unwrap();
        let back = Boost::new(v.map(|c| -c)).unwrap();
        let round = boost_apply(&back, &boost_apply(&fwd, &t));
        prop_assert!(round.max_abs_diff(&t) <= 1e-12);
    }

    #[test]
    fn tetrad_identities(d in direction_strategy()) {
        let t = build_tetrad(d).unwrap();
        prop_assert!(t.orthonormality_residual() <= 1e-14);
        prop_assert!(t.completeness_residual() <= 1e-14);
        prop_assert!(t.legs[3].square() == 1.0);
        for i in 0..3 {
            prop_assert!((t.legs[2][i] - d[i]).abs() <= 1e-15);
        }
    }

    #[test]
    fn bivector_round_trip(comps in prop::array::uniform6(-5.0f64..5.0)) {
        let b = Bivector(comps);
        let full = b.to_full();
        for m in 0..4 {
            for n in 0..4 {
                prop_assert_eq!(full[m][n], -full[n][m]);
            }
        }
        prop_assert_eq!(Bivector::from_full(&full), b);
        for (i, &(m, n)) in PAIRS.iter().enumerate() {
            let (slot, sign) = pair_index(n, m).unwrap();
            prop_assert_eq!(slot, i);
            prop_assert_eq!(b.get(n, m), sign * comps[i]);
        }
    }

    #[test]
    fn rank4_round_trip_is_antisymmetric(seed in any::<u64>()) {
        let t = pair_tensor(&mut rng(seed));
        let full = t.to_rank4();
        for m in 0..4 {
            for n in 0..4 {
                for a in 0..4 {
                    for b in 0..4 {
                        prop_assert_eq!(full[m][n][a][b], -full[n][m][a][b]);
                        prop_assert_eq!(full[m][n][a][b], -full[m][n][b][a]);
                    }
                }
            }
        }
        prop_assert_eq!(PairTensor::from_rank4(&full), t);
    }

    #[test]
    fn fast_contraction_matches_index_sum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (pair_tensor(&mut r), pair_tensor(&mut r));
        let fast = pair_contract(&a, &b).to_rank4();
        let slow = brute_contract(&a.to_rank4(), &b.to_rank4());
        prop_assert!(rank4_max_diff(&fast, &slow) <= 1e-12);
    }

    #[test]
    fn boosted_bivector_stays_antisymmetric(v in velocity_strategy(), comps in prop::array::uniform6(-2.0f64..2.0)) {
        let b = Boost::new(v).unwrap();
        let moved = boost_apply(&b, &Bivector(comps));
        // the invariant F·F survives the boost
        prop_assert!((moved.contract(&moved) - Bivector(comps).contract(&Bivector(comps))).abs() <= 1e-11);
        let cx = Bivector(comps.map(|x| Complex64::new(x, 0.0)));
        prop_assert_eq!(cx.0.len(), 6);
    }
}
