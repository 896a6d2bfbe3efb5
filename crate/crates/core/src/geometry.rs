//! Planar vectors over `Q(√d)` and the exact predicates built on them.

use std::cmp::Ordering;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::field::QuadExt;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: QuadExt,
    pub y: QuadExt,
}

impl Vec2 {
    pub fn new(x: QuadExt, y: QuadExt) -> Self {
        debug_assert_eq!(x.d(), y.d());
        Vec2 { x, y }
    }

    pub fn ints(x: i64, y: i64, d: u32) -> Self {
        Vec2::new(QuadExt::from_int(x, d), QuadExt::from_int(y, d))
    }

    pub fn d(&self) -> u32 {
        self.x.d()
    }

    pub fn up(d: u32) -> Self {
        Vec2::ints(0, 1, d)
    }

    pub fn down(d: u32) -> Self {
        Vec2::ints(0, -1, d)
    }

    pub fn scale(&self, k: &QuadExt) -> Vec2 {
        Vec2::new(&self.x * k, &self.y * k)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl Add for &Vec2 {
    type Output = Vec2;
    fn add(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub for &Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }
}

pub fn cross(a: &Vec2, b: &Vec2) -> QuadExt {
    &a.x * &b.y - &a.y * &b.x
}

pub fn dot(a: &Vec2, b: &Vec2) -> QuadExt {
    &a.x * &b.x + &a.y * &b.y
}

/// Sign of the turn `a → b → c`.
pub fn orient(a: &Vec2, b: &Vec2, c: &Vec2) -> i8 {
    cross(&(b - a), &(c - a)).sign()
}

/// Same direction (positive multiple), both nonzero.
pub fn same_direction(a: &Vec2, b: &Vec2) -> bool {
    cross(a, b).is_zero() && dot(a, b).sign() > 0
}

// 0 for directions in the half-turn starting at `reference`, 1 otherwise.
fn half(reference: &Vec2, w: &Vec2) -> u8 {
    let c = cross(reference, w).sign();
    if c > 0 || (c == 0 && dot(reference, w).sign() > 0) {
        0
    } else {
        1
    }
}

/// Compares the counter-clockwise angles from `reference` to `u` and to `v`,
/// each taken in `[0, 2π)`.
pub fn cmp_ccw_from(reference: &Vec2, u: &Vec2, v: &Vec2) -> Ordering {
    let (hu, hv) = (half(reference, u), half(reference, v));
    if hu != hv {
        return hu.cmp(&hv);
    }
    match cross(u, v).sign() {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// Whether direction `u` lies in the half-open counter-clockwise sector
/// `[start, end)`. A sector with `start` parallel to `end` is a full turn.
pub fn in_sector(start: &Vec2, end: &Vec2, u: &Vec2) -> bool {
    if same_direction(start, u) {
        return true;
    }
    if same_direction(start, end) {
        return true;
    }
    cmp_ccw_from(start, u, end) == Ordering::Less
}

/// Twice the signed area of a closed polygon.
pub fn signed_area2(vertices: &[Vec2]) -> QuadExt {
    let d = vertices[0].d();
    let mut acc = QuadExt::zero(d);
    for i in 0..vertices.len() {
        let j = (i + 1) % vertices.len();
        acc = acc + cross(&vertices[i], &vertices[j]);
    }
    acc
}

/// Whether `p` lies on the closed segment `[a, b]`.
pub fn on_segment(a: &Vec2, b: &Vec2, p: &Vec2) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    dot(&(p - a), &(p - b)).sign() <= 0
}

/// Whether closed segments `[a, b]` and `[c, d]` share a point.
pub fn segments_touch(a: &Vec2, b: &Vec2, c: &Vec2, d: &Vec2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

/// Strict interior test for a simple polygon (boundary points are outside).
pub fn strictly_inside(vertices: &[Vec2], p: &Vec2) -> bool {
    let n = vertices.len();
    for i in 0..n {
        if on_segment(&vertices[i], &vertices[(i + 1) % n], p) {
            return false;
        }
    }
    // Crossing number with a horizontal ray to the right, half-open in y.
    let mut inside = false;
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        let a_above = a.y > p.y;
        let b_above = b.y > p.y;
        if a_above != b_above {
            // x of the crossing compared with p.x, without dividing.
            let lhs = (&p.x - &a.x) * (&b.y - &a.y);
            let rhs = (&b.x - &a.x) * (&p.y - &a.y);
            let s = (lhs - rhs).sign() * (&b.y - &a.y).sign();
            if s < 0 {
                inside = !inside;
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64) -> Vec2 {
        Vec2::ints(x, y, 2)
    }

    #[test]
    fn sectors() {
        // Quarter sector from east to north contains north-east but not north.
        assert!(in_sector(&v(1, 0), &v(0, 1), &v(1, 1)));
        assert!(in_sector(&v(1, 0), &v(0, 1), &v(1, 0)));
        assert!(!in_sector(&v(1, 0), &v(0, 1), &v(0, 1)));
        assert!(!in_sector(&v(1, 0), &v(0, 1), &v(0, -1)));
        // Straight corner: half-plane above.
        assert!(in_sector(&v(1, 0), &v(-1, 0), &v(0, 1)));
        assert!(!in_sector(&v(1, 0), &v(-1, 0), &v(0, -1)));
        // Reflex corner of 3π/2.
        assert!(in_sector(&v(1, 0), &v(0, -1), &v(0, 1)));
        assert!(in_sector(&v(1, 0), &v(0, -1), &v(-1, -1)));
        assert!(!in_sector(&v(1, 0), &v(0, -1), &v(1, -1)));
    }

    #[test]
    fn inside_square() {
        let sq = [v(0, 0), v(2, 0), v(2, 2), v(0, 2)];
        assert!(strictly_inside(&sq, &v(1, 1)));
        assert!(!strictly_inside(&sq, &v(2, 1)));
        assert!(!strictly_inside(&sq, &v(3, 1)));
        assert_eq!(signed_area2(&sq), QuadExt::from_int(8, 2));
    }
}
