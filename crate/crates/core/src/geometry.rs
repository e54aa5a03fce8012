//! Exact plane geometry on rational points.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

pub type Q = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point { x: Q::from_integer(x), y: Q::from_integer(y) }
    }
}

impl std::ops::Sub for Point {
    type Output = Point;

    fn sub(self, o: Point) -> Point {
        Point { x: self.x - o.x, y: self.y - o.y }
    }
}

/// Classification of a segment pointing upwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Slope {
    /// 45 degrees, slope +1.
    NormalUp,
    /// 135 degrees, slope -1.
    NormalDown,
    /// Strictly between 45 and 135 degrees.
    Precipitous,
    /// Not upward, or flatter than the normal slopes.
    OutOfRange,
}

impl Slope {
    pub fn of(from: Point, to: Point) -> Slope {
        let d = to - from;
        if d.y <= Q::zero() || d.x.abs() > d.y {
            Slope::OutOfRange
        } else if d.x == d.y {
            Slope::NormalUp
        } else if d.x == -d.y {
            Slope::NormalDown
        } else {
            Slope::Precipitous
        }
    }

    pub fn is_normal(self) -> bool {
        matches!(self, Slope::NormalUp | Slope::NormalDown)
    }
}

/// `b` equals `c`, or the direction from `b` to `c` makes an angle in
/// [45°, 135°] with the positive x-axis.
pub fn cone_leq(b: Point, c: Point) -> bool {
    if b == c {
        return true;
    }
    let d = c - b;
    d.y > Q::zero() && d.x.abs() <= d.y
}

fn cross(o: Point, a: Point, b: Point) -> Q {
    let u = a - o;
    let v = b - o;
    u.x * v.y - u.y * v.x
}

fn sign(q: Q) -> Ordering {
    q.cmp(&Q::zero())
}

fn on_segment(p: Point, a: Point, b: Point) -> bool {
    sign(cross(a, b, p)) == Ordering::Equal
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

/// Closed segments `[a,b]` and `[c,d]` share at least one point.
pub fn segments_touch(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = sign(cross(c, d, a));
    let d2 = sign(cross(c, d, b));
    let d3 = sign(cross(a, b, c));
    let d4 = sign(cross(a, b, d));
    if d1 != d2
        && d3 != d4
        && d1 != Ordering::Equal
        && d2 != Ordering::Equal
        && d3 != Ordering::Equal
        && d4 != Ordering::Equal
    {
        return true;
    }
    on_segment(a, c, d) || on_segment(b, c, d) || on_segment(c, a, b) || on_segment(d, a, b)
}

/// Point lies on the closed segment but is not one of its endpoints.
pub fn strictly_inside_segment(p: Point, a: Point, b: Point) -> bool {
    p != a && p != b && on_segment(p, a, b)
}

/// Two segments with the common endpoint `shared` overlap beyond it.
pub fn collinear_overlap(shared: Point, a: Point, b: Point) -> bool {
    let u = a - shared;
    let v = b - shared;
    u.x * v.y - u.y * v.x == Q::zero() && u.x * v.x + u.y * v.y > Q::zero()
}

/// `p` is strictly inside the simple polygon `poly` (vertices in order).
pub fn strictly_inside_polygon(p: Point, poly: &[Point]) -> bool {
    let n = poly.len();
    let mut pos = false;
    let mut neg = false;
    for k in 0..n {
        let c = sign(cross(poly[k], poly[(k + 1) % n], p));
        match c {
            Ordering::Greater => pos = true,
            Ordering::Less => neg = true,
            Ordering::Equal => return false,
        }
    }
    // Convex test; 4-cells in a planar lattice diagram are convex quadrilaterals
    // whenever the edges lie within the 45°..135° band.
    pos != neg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_classes() {
        let o = Point::int(0, 0);
        assert_eq!(Slope::of(o, Point::int(1, 1)), Slope::NormalUp);
        assert_eq!(Slope::of(o, Point::int(-2, 2)), Slope::NormalDown);
        assert_eq!(Slope::of(o, Point::int(0, 2)), Slope::Precipitous);
        assert_eq!(Slope::of(o, Point::int(2, 1)), Slope::OutOfRange);
        assert_eq!(Slope::of(o, Point::int(0, -1)), Slope::OutOfRange);
    }

    #[test]
    fn cones() {
        let o = Point::int(0, 0);
        assert!(cone_leq(o, o));
        assert!(cone_leq(o, Point::int(0, 2)));
        assert!(!cone_leq(Point::int(-1, 1), Point::int(1, 1)));
    }

    #[test]
    fn crossing_segments() {
        let p = Point::int;
        assert!(segments_touch(p(0, 0), p(2, 2), p(0, 2), p(2, 0)));
        assert!(!segments_touch(p(0, 0), p(1, 1), p(0, 2), p(-1, 3)));
        assert!(strictly_inside_segment(p(1, 1), p(0, 0), p(2, 2)));
        assert!(collinear_overlap(p(0, 0), p(1, 1), p(2, 2)));
        assert!(!collinear_overlap(p(0, 0), p(1, 1), p(-1, 1)));
        let sq = [p(0, 0), p(1, 1), p(0, 2), p(-1, 1)];
        assert!(strictly_inside_polygon(p(0, 1), &sq));
        assert!(!strictly_inside_polygon(p(1, 1), &sq));
    }
}
