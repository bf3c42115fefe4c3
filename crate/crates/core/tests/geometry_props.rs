use proptest::prelude::*;
use vigil_core::geometry::{
    angle_between_vectors, calculate_slope, euclidean_distance, eye_aspect_ratio,
    mouth_aspect_ratio, Point2, Vector2,
};
use vigil_core::landmarks::{
    extract_region, eye_midpoint, mouth_midpoint, region_indices, validate_frame,
};
use vigil_core::{FaceRegion, LandmarkFrame, LANDMARK_COUNT};

fn coord() -> impl Strategy<Value = f64> {
    -1000.0f64..1000.0
}

fn point() -> impl Strategy<Value = Point2> {
    (coord(), coord()).prop_map(|(x, y)| Point2::new(x, y))
}

fn nonzero_vector() -> impl Strategy<Value = Vector2> {
    (coord(), coord())
        .prop_filter("nonzero", |(x, y)| x.hypot(*y) > 1e-6)
        .prop_map(|(x, y)| Vector2::new(x, y))
}

/// Translation, rotation and uniform positive scale.
#[derive(Debug, Clone, Copy)]
struct Similarity {
    tx: f64,
    ty: f64,
    theta: f64,
    scale: f64,
}

impl Similarity {
    fn apply(&self, p: Point2) -> Point2 {
        let (s, c) = self.theta.sin_cos();
        Point2::new(
            self.scale * (c * p.x - s * p.y) + self.tx,
            self.scale * (s * p.x + c * p.y) + self.ty,
        )
    }
}

fn similarity() -> impl Strategy<Value = Similarity> {
    (coord(), coord(), 0.0..std::f64::consts::TAU, 0.05f64..20.0).prop_map(
        |(tx, ty, theta, scale)| Similarity {
            tx,
            ty,
            theta,
            scale,
        },
    )
}

fn eye_contour() -> impl Strategy<Value = Vec<Point2>> {
    (
        5.0f64..50.0,
        prop::array::uniform4(0.0f64..20.0),
        prop::array::uniform4(-3.0f64..3.0),
    )
        .prop_map(|(w, lids, dx)| {
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(w / 3.0 + dx[0], -lids[0]),
                Point2::new(2.0 * w / 3.0 + dx[1], -lids[1]),
                Point2::new(w, 0.0),
                Point2::new(2.0 * w / 3.0 + dx[2], lids[2]),
                Point2::new(w / 3.0 + dx[3], lids[3]),
            ]
        })
}

fn mouth_contour() -> impl Strategy<Value = Vec<Point2>> {
    (10.0f64..80.0, prop::array::uniform6(0.0f64..30.0)).prop_map(|(w, h)| {
        vec![
            Point2::new(0.0, 0.0),
            Point2::new(w / 4.0, -h[0]),
            Point2::new(w / 2.0, -h[1]),
            Point2::new(3.0 * w / 4.0, -h[2]),
            Point2::new(w, 0.0),
            Point2::new(3.0 * w / 4.0, h[3]),
            Point2::new(w / 2.0, h[4]),
            Point2::new(w / 4.0, h[5]),
        ]
    })
}

fn close_rel(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn distance_is_a_metric(p in point(), q in point(), r in point()) {
        let pq = euclidean_distance(p, q);
        prop_assert!(pq >= 0.0);
        prop_assert_eq!(pq, euclidean_distance(q, p));
        prop_assert!(euclidean_distance(p, r) <= pq + euclidean_distance(q, r) + 1e-9);
    }

    #[test]
    fn angle_identities(v in nonzero_vector()) {
        prop_assert!(angle_between_vectors(v, v).unwrap().degrees().abs() <= 1e-9);
        prop_assert!((angle_between_vectors(v, -v).unwrap().degrees() - 180.0).abs() <= 1e-9);
    }

    #[test]
    fn angle_symmetric_and_scale_invariant(
        a in nonzero_vector(),
        b in nonzero_vector(),
        k1 in 1e-3f64..1e3,
        k2 in 1e-3f64..1e3,
    ) {
        let ab = angle_between_vectors(a, b).unwrap().degrees();
        prop_assert!((0.0..=180.0).contains(&ab));
        prop_assert!((ab - angle_between_vectors(b, a).unwrap().degrees()).abs() <= 1e-9);
        let scaled = angle_between_vectors(a * k1, b * k2).unwrap().degrees();
        prop_assert!((ab - scaled).abs() <= 1e-9, "{} vs {}", ab, scaled);
    }

    #[test]
    fn ratios_invariant_under_similarity(
        eye in eye_contour(),
        mouth in mouth_contour(),
        t in similarity(),
    ) {
        let ear = eye_aspect_ratio(&eye).unwrap();
        let eye_t: Vec<_> = eye.iter().map(|&p| t.apply(p)).collect();
        prop_assert!(close_rel(ear, eye_aspect_ratio(&eye_t).unwrap(), 1e-9));

        let mar = mouth_aspect_ratio(&mouth).unwrap();
        let mouth_t: Vec<_> = mouth.iter().map(|&p| t.apply(p)).collect();
        prop_assert!(close_rel(mar, mouth_aspect_ratio(&mouth_t).unwrap(), 1e-9));
    }

    #[test]
    fn ear_increases_with_lid_separation(
        w in 5.0f64..50.0,
        h in 0.0f64..20.0,
        extra in 1e-3f64..10.0,
    ) {
        let eye = |h: f64| {
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(w / 3.0, -h),
                Point2::new(2.0 * w / 3.0, -h),
                Point2::new(w, 0.0),
                Point2::new(2.0 * w / 3.0, h),
                Point2::new(w / 3.0, h),
            ]
        };
        prop_assert!(eye_aspect_ratio(&eye(h + extra)).unwrap() > eye_aspect_ratio(&eye(h)).unwrap());
    }

    #[test]
    fn midpoints_follow_translation(
        pts in prop::collection::vec(point(), LANDMARK_COUNT),
        dx in coord(),
        dy in coord(),
    ) {
        let frame = LandmarkFrame::with_face(0, 0, pts.clone());
        let moved = LandmarkFrame::with_face(
            0,
            0,
            pts.iter().map(|p| Point2::new(p.x + dx, p.y + dy)).collect(),
        );
        for f in [eye_midpoint, mouth_midpoint] {
            let a = f(&frame).unwrap();
            let b = f(&moved).unwrap();
            // tolerance scaled to the coordinate magnitude (|coords| <= 2000)
            prop_assert!((b.x - a.x - dx).abs() <= 1e-12 * 4096.0);
            prop_assert!((b.y - a.y - dy).abs() <= 1e-12 * 4096.0);
        }
        prop_assert_eq!(validate_frame(&frame), Ok(()));
        for r in FaceRegion::ALL {
            prop_assert_eq!(extract_region(&frame, r).unwrap().len(), region_indices(r).len());
        }
    }
}

#[test]
fn slope_matches_brute_force() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 10_000 {
        let p1 = Point2::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3));
        let p2 = Point2::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3));
        if p1.x == p2.x {
            continue;
        }
        let dy = p2.y - p1.y;
        let dx = p2.x - p1.x;
        assert_eq!(calculate_slope(p1, p2).unwrap(), dy / dx);
        checked += 1;
    }
}
