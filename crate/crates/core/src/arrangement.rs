//! Exact sampling of every face of the class-boundary line arrangement.
//!
//! For three players the winner at a profile only changes where some score
//! difference `c . w` changes sign, with `c[i]` a difference of two entries
//! of the integer scoring vector. The lines `c . w = 0` cut the weight
//! simplex into vertices, open segments and open cells, and the winner table
//! is constant on each face. One point per face therefore reaches every
//! structural class, however thin.
//!
//! Points are homogeneous: a nonnegative integer triple with positive sum,
//! reduced by its gcd, standing for the relative weights `p / sum(p)`.

use std::collections::BTreeSet;

use num_integer::Integer;
use rayon::prelude::*;

/// Normal vector of a boundary line, reduced, with a positive leading entry.
pub type LineNormal = [i64; 3];

/// Homogeneous point of the weight simplex.
pub type Point = [i128; 3];

/// Every distinct line `c . w = 0` that meets the simplex, for integer scores.
pub fn boundary_lines(scores: &[i64]) -> Vec<LineNormal> {
    let diffs: BTreeSet<i64> = scores
        .iter()
        .flat_map(|a| scores.iter().map(move |b| a - b))
        .collect();
    let mut lines = BTreeSet::new();
    for &a in &diffs {
        for &b in &diffs {
            for &c in &diffs {
                let v = [a, b, c];
                let lo = *v.iter().min().unwrap();
                let hi = *v.iter().max().unwrap();
                if v == [0, 0, 0] || lo > 0 || hi < 0 {
                    continue;
                }
                let g = v.iter().fold(0i64, |g, x| g.gcd(x));
                let mut n = v.map(|x| x / g);
                if n.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                    n = n.map(|x| -x);
                }
                lines.insert(n);
            }
        }
    }
    lines.into_iter().collect()
}

fn dot(c: &LineNormal, p: &[i128; 3]) -> i128 {
    c.iter().zip(p).map(|(&ci, &pi)| ci as i128 * pi).sum()
}

fn reduce(p: [i128; 3]) -> Point {
    let g = p.iter().fold(0i128, |g, x| g.gcd(x));
    p.map(|x| x / g)
}

/// Intersection of two lines, if it lies in the closed simplex.
fn intersect(a: &LineNormal, b: &LineNormal) -> Option<Point> {
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
    .map(|x| x as i128);
    let sum: i128 = cross.iter().sum();
    if sum == 0 {
        return None;
    }
    let p = if sum < 0 { cross.map(|x| -x) } else { cross };
    p.iter().all(|&x| x >= 0).then(|| reduce(p))
}

/// Position along a line; lexicographic order of the relative coordinates
/// is monotone along any line.
fn along_cmp(p: &Point, q: &Point) -> std::cmp::Ordering {
    let (sp, sq): (i128, i128) = (p.iter().sum(), q.iter().sum());
    for k in 0..3 {
        let ord = (p[k] * sq).cmp(&(q[k] * sp));
        if ord.is_ne() {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// One point in every face of the arrangement inside the closed simplex.
///
/// Vertices are exact intersections. Each segment between consecutive
/// vertices of a line contributes its midpoint and, on either side, a point
/// pushed off the line by half the distance to the nearest other line.
pub fn face_samples(scores: &[i64]) -> Vec<Point> {
    let lines = boundary_lines(scores);

    let mut vertices: BTreeSet<Point> = BTreeSet::new();
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            if let Some(p) = intersect(a, b) {
                vertices.insert(p);
            }
        }
    }

    let per_line: Vec<Vec<Point>> = lines
        .par_iter()
        .map(|line| {
            let mut on_line: Vec<&Point> = vertices.iter().filter(|v| dot(line, v) == 0).collect();
            on_line.sort_by(|a, b| along_cmp(a, b));
            let mut out = Vec::new();
            for pair in on_line.windows(2) {
                let (p, q) = (pair[0], pair[1]);
                let (sp, sq): (i128, i128) = (p.iter().sum(), q.iter().sum());
                let mid = reduce([0, 1, 2].map(|k| p[k] * sq + q[k] * sp));
                out.extend(offsets(line, &mid, &lines));
                out.push(mid);
            }
            out
        })
        .collect();

    let mut samples = vertices;
    for pts in per_line {
        samples.extend(pts);
    }
    samples.into_iter().collect()
}

fn offsets(line: &LineNormal, mid: &Point, lines: &[LineNormal]) -> Vec<Point> {
    // In-plane direction normal to `line`; its entries sum to zero.
    let total: i64 = line.iter().sum();
    let dir: [i128; 3] = line.map(|c| (3 * c - total) as i128);
    // Nearest other line along `dir`: minimize |c.mid| / |c.dir|.
    let mut best: Option<(i128, i128)> = None;
    for other in lines.iter().filter(|&o| o != line) {
        let slope = dot(other, &dir).abs();
        let value = dot(other, mid).abs();
        if slope == 0 || value == 0 {
            continue;
        }
        best = match best {
            Some((v, s)) if v * slope <= value * s => Some((v, s)),
            _ => Some((value, slope)),
        };
    }
    let (value, slope) = best.unwrap_or((1, 1));
    // mid/sum + (value / (2 slope sum)) * dir, scaled by 2 slope sum.
    [1i128, -1]
        .into_iter()
        .filter_map(|sign| {
            let p = [0, 1, 2].map(|k| 2 * slope * mid[k] + sign * value * dir[k]);
            p.iter().all(|&x| x >= 0).then(|| reduce(p))
        })
        .collect()
}
