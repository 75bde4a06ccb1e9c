//! Exact hypervolume of a 3-objective point set (minimization).

use crate::error::{Error, Result};

/// Volume dominated by `points` and bounded by `reference`, by slicing along
/// the third objective.
pub fn hypervolume(points: &[[f64; 3]], reference: [f64; 3]) -> Result<f64> {
    for p in points {
        if p.iter().zip(&reference).any(|(v, r)| !(v <= r)) {
            return Err(Error::Config(format!("point {p:?} lies beyond reference {reference:?}")));
        }
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[2].total_cmp(&b[2]));
    let mut volume = 0.0;
    let mut slab: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        slab.push([p[0], p[1]]);
        let top = pts.get(i + 1).map_or(reference[2], |q| q[2]);
        let height = top - p[2];
        if height > 0.0 {
            volume += area_2d(&mut slab, [reference[0], reference[1]]) * height;
        }
    }
    Ok(volume)
}

fn area_2d(points: &mut [[f64; 2]], reference: [f64; 2]) -> f64 {
    points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut floor = reference[1];
    for p in points.iter() {
        if p[1] < floor {
            area += (reference[0] - p[0]) * (floor - p[1]);
            floor = p[1];
        }
    }
    area
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_cube() {
        assert_eq!(hypervolume(&[[1.0, 1.0, 1.0]], [2.0; 3]).unwrap(), 1.0);
    }

    #[test]
    fn two_boxes_inclusion_exclusion() {
        // boxes 3·1·1 and 1·3·1 overlapping in a unit cube
        let hv = hypervolume(&[[1.0, 3.0, 3.0], [3.0, 1.0, 3.0]], [4.0; 3]).unwrap();
        assert!((hv - 5.0).abs() < 1e-12);
        // boxes 3·1·3 and 1·3·3 overlapping in 1·1·3
        let hv = hypervolume(&[[1.0, 3.0, 1.0], [3.0, 1.0, 1.0]], [4.0; 3]).unwrap();
        assert!((hv - 15.0).abs() < 1e-12);
    }

    #[test]
    fn dominated_point_adds_nothing() {
        let base = [[1.0, 2.0, 3.0], [2.0, 1.0, 2.5]];
        let hv = hypervolume(&base, [4.0; 3]).unwrap();
        let more = [base[0], base[1], [2.0, 2.5, 3.5]];
        assert_eq!(hypervolume(&more, [4.0; 3]).unwrap(), hv);
    }

    #[test]
    fn beyond_reference_rejected() {
        assert!(hypervolume(&[[1.0, 5.0, 1.0]], [4.0; 3]).is_err());
        assert_eq!(hypervolume(&[], [4.0; 3]).unwrap(), 0.0);
    }

    /// Monte-Carlo-free oracle: count unit cells on an integer grid.
    fn grid_oracle(points: &[[f64; 3]], r: usize) -> f64 {
        let mut n = 0;
        for x in 0..r {
            for y in 0..r {
                for z in 0..r {
                    let c = [x as f64, y as f64, z as f64];
                    if points.iter().any(|p| p[0] <= c[0] && p[1] <= c[1] && p[2] <= c[2]) {
                        n += 1;
                    }
                }
            }
        }
        n as f64
    }

    proptest! {
        #[test]
        fn matches_grid_count(pts in prop::collection::vec(prop::array::uniform3(0u8..8), 1..12)) {
            let pts: Vec<[f64; 3]> = pts.iter().map(|a| a.map(f64::from)).collect();
            let hv = hypervolume(&pts, [8.0; 3]).unwrap();
            prop_assert!((hv - grid_oracle(&pts, 8)).abs() < 1e-9);
        }

        #[test]
        fn monotone_under_insertion(
            pts in prop::collection::vec(prop::array::uniform3(0.0..10.0f64), 1..15),
            extra in prop::array::uniform3(0.0..10.0f64),
        ) {
            let hv = hypervolume(&pts, [10.0; 3]).unwrap();
            let mut more = pts.clone();
            more.push(extra);
            prop_assert!(hypervolume(&more, [10.0; 3]).unwrap() >= hv - 1e-9);
        }
    }
}
