//! Newton polygon geometry.

use super::BPoly;

type Point = (i64, i64);

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Convex hull in counter-clockwise order, collinear points dropped (monotone chain).
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Interior lattice points of the convex hull of `points`, via Pick's theorem.
pub fn interior_points(points: &[Point]) -> u64 {
    let hull = convex_hull(points);
    if hull.len() < 3 {
        return 0;
    }
    let n = hull.len();
    let mut twice_area = 0i64;
    let mut boundary = 0i64;
    for k in 0..n {
        let (a, b) = (hull[k], hull[(k + 1) % n]);
        twice_area += a.0 * b.1 - a.1 * b.0;
        boundary += gcd(b.0 - a.0, b.1 - a.1);
    }
    ((twice_area.abs() - boundary + 2) / 2) as u64
}

/// `g_P`: lattice points strictly inside the Newton polygon of `p`.
pub fn newton_interior(p: &BPoly) -> u64 {
    let pts: Vec<Point> = p.terms().map(|((i, j), _)| (i as i64, j as i64)).collect();
    interior_points(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::polynomial::parse_poly;
    use proptest::prelude::*;

    /// Brute force: count box points strictly inside every hull edge half-plane.
    fn brute_interior(points: &[Point]) -> u64 {
        let hull = convex_hull(points);
        if hull.len() < 3 {
            return 0;
        }
        let (xmin, xmax) = (hull.iter().map(|p| p.0).min().unwrap(), hull.iter().map(|p| p.0).max().unwrap());
        let (ymin, ymax) = (hull.iter().map(|p| p.1).min().unwrap(), hull.iter().map(|p| p.1).max().unwrap());
        let mut count = 0;
        for x in xmin..=xmax {
            for y in ymin..=ymax {
                let inside = (0..hull.len()).all(|k| cross(hull[k], hull[(k + 1) % hull.len()], (x, y)) > 0);
                count += inside as u64;
            }
        }
        count
    }

    #[test]
    fn worked_examples() {
        let f = make_field(2, 1, None).unwrap();
        assert_eq!(newton_interior(&parse_poly(&f, "y^2+y+x").unwrap()), 0);
        let full = parse_poly(&f, "(1+x+x^2+x^3)*(1+y+y^2)").unwrap();
        assert_eq!(newton_interior(&full), 2);
        assert_eq!(newton_interior(&parse_poly(&f, "x^2*y^3").unwrap()), 0);
        assert_eq!(newton_interior(&parse_poly(&f, "1+x^3*y^3").unwrap()), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn pick_matches_brute_force(pts in proptest::collection::vec((0i64..9, 0i64..9), 1..10)) {
            prop_assume!(convex_hull(&pts).len() <= 8);
            prop_assert_eq!(interior_points(&pts), brute_interior(&pts));
        }
    }
}
