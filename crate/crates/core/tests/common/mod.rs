#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use hypsurf::blocks::CirclePoint;
use hypsurf::field::QuadExt;
use hypsurf::surface::{cone_points, PolygonNet};

pub fn sqrt2() -> QuadExt {
    QuadExt::sqrt_d(2)
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

pub fn equally_spaced(n: usize) -> Vec<BigRational> {
    (0..n).map(|i| rat(i as i64, n as i64)).collect()
}

/// `n` distinct sorted points of `[0, 1)` with denominator `10^6`.
pub fn random_points(rng: &mut impl Rng, n: usize) -> Vec<BigRational> {
    let mut set = BTreeSet::new();
    while set.len() < n {
        set.insert(rng.gen_range(0..1_000_000i64));
    }
    set.into_iter().map(|k| rat(k, 1_000_000)).collect()
}

/// Orbit closure by evaluating every interval map `x ↦ x + y_{i+1} − x_i` at
/// both ends of its domain and matching the image against the labelled ends
/// of its range, with `y_i = −x_i` on the circle.
pub fn lemma_oracle(xs: &[BigRational]) -> Vec<BTreeSet<CirclePoint>> {
    let n = xs.len();
    let ys: Vec<BigRational> = xs.iter().map(|x| frac(&-x)).collect();
    let mut adj: BTreeMap<CirclePoint, Vec<CirclePoint>> = BTreeMap::new();
    let mut link = |a: CirclePoint, b: CirclePoint| {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    };
    for i in 0..n {
        let j = (i + 1) % n;
        let lo = xs[i].clone();
        let hi = if j == 0 {
            &xs[0] + BigRational::one()
        } else {
            xs[j].clone()
        };
        let shift = &ys[j] - &xs[i];
        for (end, label) in [(lo, CirclePoint::X(i)), (hi, CirclePoint::X(j))] {
            let image = frac(&(&end + &shift));
            // The range runs from y_{i+1} up to y_i.
            let target = if label == CirclePoint::X(i) {
                assert_eq!(image, ys[j], "left end must land on y_{j}");
                CirclePoint::Y(j)
            } else {
                assert_eq!(image, ys[i], "right end must land on y_{i}");
                CirclePoint::Y(i)
            };
            link(label, target);
        }
    }
    let mut seen = BTreeSet::new();
    let mut classes = Vec::new();
    for start in (0..n).flat_map(|i| [CirclePoint::X(i), CirclePoint::Y(i)]) {
        if !seen.insert(start) {
            continue;
        }
        let mut class = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            for &q in adj.get(&p).into_iter().flatten() {
                if seen.insert(q) {
                    class.insert(q);
                    queue.push_back(q);
                }
            }
        }
        classes.push(class);
    }
    classes
}

pub fn as_sets(classes: &[Vec<CirclePoint>]) -> BTreeSet<BTreeSet<CirclePoint>> {
    classes.iter().map(|c| c.iter().copied().collect()).collect()
}

/// Genus from Gauss-Bonnet: `Σ (θ/2π − 1) = 2g − 2` over closed orbits.
pub fn gauss_bonnet_genus(s: &PolygonNet) -> i64 {
    let excess: i64 = cone_points(s)
        .iter()
        .filter(|c| c.closed)
        .map(|c| c.angle as i64 / 2 - 1)
        .sum();
    assert_eq!(excess % 2, 0, "excess must be even");
    excess / 2 + 1
}

/// Expected stratum of a block or of an assembly with `k` half-edges.
pub fn expected_stratum(k: usize) -> Vec<u32> {
    let k = k as u32;
    if k <= 2 {
        vec![]
    } else if k % 2 == 1 {
        vec![k - 1]
    } else {
        vec![k / 2 - 1, k / 2 - 1]
    }
}

pub fn expected_genus(n: usize) -> u32 {
    n.div_ceil(2) as u32
}

pub fn zero() -> BigRational {
    BigRational::zero()
}
