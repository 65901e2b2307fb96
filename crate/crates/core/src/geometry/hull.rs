//! Exact incremental convex hull of integer points in 3D.

use std::collections::HashSet;

pub type IPoint = [i64; 3];

fn sub(a: &IPoint, b: &IPoint) -> [i128; 3] {
    [
        (a[0] - b[0]) as i128,
        (a[1] - b[1]) as i128,
        (a[2] - b[2]) as i128,
    ]
}

fn cross(a: &[i128; 3], b: &[i128; 3]) -> [i128; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: &[i128; 3], b: &[i128; 3]) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Positive when `d` lies on the side of plane `abc` that its normal
/// `(b - a) x (c - a)` points to.
fn orient(a: &IPoint, b: &IPoint, c: &IPoint, d: &IPoint) -> i128 {
    dot(&cross(&sub(b, a), &sub(c, a)), &sub(d, a))
}

fn normal(pts: &[IPoint], f: &[usize; 3]) -> [i128; 3] {
    cross(&sub(&pts[f[1]], &pts[f[0]]), &sub(&pts[f[2]], &pts[f[0]]))
}

/// Extreme points of `pts` (indices, sorted), or `None` when the points are
/// coplanar so no 3D hull exists.
pub fn extreme_points(pts: &[IPoint]) -> Option<Vec<usize>> {
    let i0 = 0;
    let i1 = (1..pts.len()).find(|&i| pts[i] != pts[i0])?;
    let e = sub(&pts[i1], &pts[i0]);
    let i2 = (1..pts.len()).find(|&i| cross(&e, &sub(&pts[i], &pts[i0])) != [0; 3])?;
    let i3 = (1..pts.len()).find(|&i| orient(&pts[i0], &pts[i1], &pts[i2], &pts[i]) != 0)?;

    let mut faces: Vec<[usize; 3]> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    // orient every face so the remaining tetrahedron vertex is behind it
    for (f, opposite) in [
        ([i0, i1, i2], i3),
        ([i0, i1, i3], i2),
        ([i0, i2, i3], i1),
        ([i1, i2, i3], i0),
    ] {
        let f = if orient(&pts[f[0]], &pts[f[1]], &pts[f[2]], &pts[opposite]) > 0 {
            [f[0], f[2], f[1]]
        } else {
            f
        };
        faces.push(f);
        alive.push(true);
    }

    for p in 0..pts.len() {
        if [i0, i1, i2, i3].contains(&p) {
            continue;
        }
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&k| {
                alive[k] && {
                    let f = &faces[k];
                    orient(&pts[f[0]], &pts[f[1]], &pts[f[2]], &pts[p]) > 0
                }
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut edges = HashSet::new();
        for &k in &visible {
            let f = faces[k];
            for j in 0..3 {
                edges.insert((f[j], f[(j + 1) % 3]));
            }
            alive[k] = false;
        }
        let mut horizon: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(a, b)| !edges.contains(&(b, a)))
            .collect();
        horizon.sort_unstable();
        for (a, b) in horizon {
            faces.push([a, b, p]);
            alive.push(true);
        }
    }

    // a hull vertex is extreme iff the normals of its incident faces span 3D;
    // otherwise it sits inside a flat facet or along a straight edge
    let mut incident: Vec<Vec<[i128; 3]>> = vec![Vec::new(); pts.len()];
    for (f, _) in faces.iter().zip(&alive).filter(|(_, a)| **a) {
        let n = normal(pts, f);
        for &v in f {
            incident[v].push(n);
        }
    }
    let mut out: Vec<usize> = incident
        .iter()
        .enumerate()
        .filter(|(_, normals)| spans_space(normals))
        .map(|(v, _)| v)
        .collect();
    out.sort_unstable();
    Some(out)
}

fn spans_space(normals: &[[i128; 3]]) -> bool {
    let Some(n1) = normals.iter().find(|n| **n != [0; 3]) else {
        return false;
    };
    let Some(n2) = normals.iter().find(|n| cross(n1, n) != [0; 3]) else {
        return false;
    };
    let c = cross(n1, n2);
    normals.iter().any(|n| dot(&c, n) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cube_with_interior_and_face_points() {
        let mut pts = vec![];
        for x in 0..=2 {
            for y in 0..=2 {
                for z in 0..=2 {
                    pts.push([x, y, z]);
                }
            }
        }
        let ext = extreme_points(&pts).unwrap();
        let corners: Vec<IPoint> = ext.iter().map(|&i| pts[i]).collect();
        assert_eq!(corners.len(), 8);
        assert!(corners.iter().all(|p| p.iter().all(|c| *c == 0 || *c == 2)));
    }

    #[test]
    fn coplanar_input() {
        assert!(extreme_points(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]]).is_none());
        assert!(extreme_points(&[[3, 3, 3]]).is_none());
    }

    fn support(pts: &[IPoint], idx: impl Iterator<Item = usize>, d: &[i64; 3]) -> i64 {
        idx.map(|i| pts[i][0] * d[0] + pts[i][1] * d[1] + pts[i][2] * d[2])
            .max()
            .unwrap()
    }

    proptest! {
        #[test]
        fn hull_preserves_support(
            pts in proptest::collection::vec(proptest::array::uniform3(-6i64..=6), 4..60),
            dirs in proptest::collection::vec(proptest::array::uniform3(-5i64..=5), 20),
        ) {
            if let Some(ext) = extreme_points(&pts) {
                for d in &dirs {
                    prop_assert_eq!(support(&pts, 0..pts.len(), d), support(&pts, ext.iter().copied(), d));
                }
                let uniq: HashSet<IPoint> = ext.iter().map(|&i| pts[i]).collect();
                prop_assert!(uniq.len() >= 4);
            }
        }
    }
}
