//! Small 2D vector helpers shared by the mesh and assembly code.

pub type Point = [f64; 2];

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn scale(a: Point, s: f64) -> Point {
    [a[0] * s, a[1] * s]
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn lerp(a: Point, b: Point, t: f64) -> Point {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Signed area of the triangle (positive for counter-clockwise ordering).
#[inline]
pub fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * cross(sub(b, a), sub(c, a))
}

/// Barycentric coordinates of `x` with respect to triangle `(a, b, c)`.
pub fn barycentric(a: Point, b: Point, c: Point, x: Point) -> [f64; 3] {
    let det = cross(sub(b, a), sub(c, a));
    let l1 = cross(sub(x, a), sub(c, a)) / det;
    let l2 = cross(sub(b, a), sub(x, a)) / det;
    [1.0 - l1 - l2, l1, l2]
}

/// Closest point on segment `[a, b]` to `x`, returned as the segment parameter in `[0, 1]`.
pub fn project_on_segment(a: Point, b: Point, x: Point) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    if len2 == 0.0 {
        return 0.0;
    }
    (dot(sub(x, a), ab) / len2).clamp(0.0, 1.0)
}

/// Largest interior angle of a triangle, in radians.
pub fn max_angle(a: Point, b: Point, c: Point) -> f64 {
    let ang = |p: Point, q: Point, r: Point| {
        let u = sub(q, p);
        let v = sub(r, p);
        let c = dot(u, v) / (norm(u) * norm(v));
        c.clamp(-1.0, 1.0).acos()
    };
    ang(a, b, c).max(ang(b, c, a)).max(ang(c, a, b))
}

/// Gradients of the three barycentric (P1) shape functions of a triangle.
pub fn p1_gradients(x: &[Point; 3]) -> [Point; 3] {
    let det = cross(sub(x[1], x[0]), sub(x[2], x[0]));
    let g1 = [(x[2][1] - x[0][1]) / det, -(x[2][0] - x[0][0]) / det];
    let g2 = [-(x[1][1] - x[0][1]) / det, (x[1][0] - x[0][0]) / det];
    [[-g1[0] - g2[0], -g1[1] - g2[1]], g1, g2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradients_reproduce_linear_function() {
        let x = [[0.1, 0.2], [1.3, 0.1], [0.4, 0.9]];
        let g = p1_gradients(&x);
        let f = |p: Point| 2.0 * p[0] - 3.0 * p[1] + 0.5;
        let grad = [0, 1].map(|c| (0..3).map(|i| f(x[i]) * g[i][c]).sum::<f64>());
        assert!((grad[0] - 2.0).abs() < 1e-12);
        assert!((grad[1] + 3.0).abs() < 1e-12);
    }

    #[test]
    fn barycentric_of_vertices() {
        let (a, b, c) = ([0.0, 0.0], [2.0, 0.0], [0.0, 1.0]);
        let l = barycentric(a, b, c, [1.0, 0.5]);
        assert!((l[0]).abs() < 1e-14 && (l[1] - 0.5).abs() < 1e-14 && (l[2] - 0.5).abs() < 1e-14);
    }
}
