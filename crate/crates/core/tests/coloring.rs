use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use racg_core::coloring::*;
use racg_core::coxeter::Word;
use racg_core::verify::{hyperbolic_distance, Verdict};
use racg_core::Error;

fn lorentz(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let n = a.len() - 1;
    (0..n).map(|i| a[i] * b[i]).sum::<f64>() - a[n] * b[n]
}

#[test]
fn simplex_directions_small_cases() {
    let one = simplex_directions(1);
    assert_eq!(one.len(), 2);
    assert!((one[0][0] - 1.0).abs() < 1e-15 || (one[0][0] + 1.0).abs() < 1e-15);
    assert!((one[0][0] + one[1][0]).abs() < 1e-15);
    let zero = simplex_directions(0);
    assert_eq!(zero.len(), 1);
    assert_eq!(zero[0].len(), 0);
}

#[test]
fn simplex_gram_matches_centered_basis() {
    // Centered standard basis vectors of R^{m+1}, rescaled to unit length,
    // have the Gram matrix of the regular simplex.
    for m in 1..=6 {
        let centered: Vec<DVector<f64>> = (0..=m)
            .map(|i| {
                let v = DVector::from_fn(m + 1, |j, _| if i == j { 1.0 } else { 0.0 })
                    - DVector::from_element(m + 1, 1.0 / (m + 1) as f64);
                &v / v.norm()
            })
            .collect();
        let dirs = simplex_directions(m);
        assert_eq!(dirs.len(), m + 1);
        for i in 0..=m {
            assert_eq!(dirs[i].len(), m);
            for j in 0..=m {
                assert!((dirs[i].dot(&dirs[j]) - centered[i].dot(&centered[j])).abs() < 1e-12);
            }
        }
        if m == 4 {
            assert!((dirs[0].dot(&dirs[3]) + 0.25).abs() < 1e-12);
        }
    }
}

#[test]
fn kgon_hexagon_side_from_vertices() {
    let poly = build_kgon(6).unwrap();
    let form = lorentz_form(2);
    // Vertex between sides i and i+1 is the timelike line orthogonal to both normals.
    let vertex = |i: usize| {
        let (a, b) = (poly.normal(i), poly.normal((i + 1) % 6));
        let ja = DVector::from_vec(vec![a[0], a[1], -a[2]]);
        let jb = DVector::from_vec(vec![b[0], b[1], -b[2]]);
        to_hyperboloid(&form, &ja.cross(&jb)).unwrap()
    };
    let side = hyperbolic_distance(&vertex(0), &vertex(1));
    // Regular right-angled hexagon: cosh a = 2.
    assert!((side.cosh() - 2.0).abs() < 1e-12);
    assert!((side - kgon_side_length(6)).abs() < 1e-12);
    for k in [8, 10, 12] {
        let poly = build_kgon(k).unwrap();
        let v = |i: usize| {
            let (a, b) = (poly.normal(i), poly.normal((i + 1) % k));
            to_hyperboloid(
                &form,
                &DVector::from_vec(vec![a[0], a[1], -a[2]])
                    .cross(&DVector::from_vec(vec![b[0], b[1], -b[2]])),
            )
            .unwrap()
        };
        assert!((hyperbolic_distance(&v(0), &v(1)) - kgon_side_length(k)).abs() < 1e-10);
    }
}

#[test]
fn kgon_walls() {
    for k in [6, 8, 14] {
        let poly = build_kgon(k).unwrap();
        assert_eq!(poly.m(), 1);
        poly.check_coloring(&poly.coloring).unwrap();
        for i in 0..k {
            for j in 0..k {
                let (a, b) = (poly.normal(i), poly.normal(j));
                let c = lorentz(&a, &b) / (lorentz(&a, &a) * lorentz(&b, &b)).sqrt();
                if poly.adjacency[i][j] {
                    assert!(lorentz(&a, &b).abs() < 1e-10);
                } else if i != j {
                    assert!(c.abs() > 1.0, "walls {i}, {j} of the {k}-gon meet");
                }
            }
        }
    }
}

#[test]
fn kgon_rejections() {
    for k in [3, 5, 7, 9] {
        let msg = build_kgon(k).unwrap_err().to_string();
        assert!(msg.contains("2-coloring") || msg.contains("odd"), "{msg}");
    }
    assert!(build_kgon(4).is_err());
}

#[test]
fn cell120_counts() {
    let poly = build_120cell().unwrap();
    assert_eq!(poly.faces(), 120);
    for i in 0..120 {
        assert_eq!(poly.adjacency[i].iter().filter(|&&x| x).count(), 12);
        let w = &poly.normals[i][..4];
        let r = cell120_radius();
        assert!((w.iter().map(|x| x * x).sum::<f64>() / (r * r) - 1.0).abs() < 1e-12);
    }
    assert_eq!(poly.edges().len(), 720);
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let r2 = cell120_radius().powi(2);
    for (i, j) in poly.edges() {
        let dot: f64 = (0..4)
            .map(|c| poly.normals[i][c] * poly.normals[j][c])
            .sum::<f64>()
            / r2;
        assert!((dot - golden / 2.0).abs() < 1e-12);
    }
    let coloring = five_color_120cell(&poly).unwrap();
    assert_eq!(coloring.class_sizes, [24; 5]);
    assert_eq!(coloring.coloring, poly.coloring);
    assert_eq!(coloring.neighbor_pairs, 720);
    assert_eq!(coloring.order_five_pairs, 720);
    poly.check_coloring(&coloring.coloring).unwrap();
    assert_eq!(poly.m(), 4);
}

#[test]
fn cell120_quotients_rotate_by_a_fifth_turn() {
    // Float oracle: the rotation x ↦ q x q̄ has trace 1 + 2 cos(angle).
    let poly = build_120cell().unwrap();
    let r = cell120_radius();
    for (i, j) in poly.edges().into_iter().step_by(37) {
        let dot: f64 = (0..4)
            .map(|c| poly.normals[i][c] * poly.normals[j][c])
            .sum::<f64>()
            / (r * r);
        let angle = 2.0 * dot.acos();
        assert!((angle - 2.0 * std::f64::consts::PI / 5.0).abs() < 1e-9);
    }
}

#[test]
fn polytope_json_round_trip_and_validation() {
    let poly = build_kgon(8).unwrap();
    let back = ColoredPolytope::from_json(&poly.to_json()).unwrap();
    assert_eq!(back, poly);
    let mut bad = poly.clone();
    bad.coloring[1] = bad.coloring[0];
    assert_eq!(
        ColoredPolytope::from_json(&bad.to_json()).unwrap_err(),
        Error::ColoringViolation(0, 1)
    );
    let mut skew = poly.clone();
    skew.normals[0][0] *= 1.01;
    assert!(ColoredPolytope::from_json(&skew.to_json()).is_err());
    let mut asym = poly;
    asym.adjacency[0][3] = true;
    assert!(ColoredPolytope::from_json(&asym.to_json()).is_err());
    assert!(matches!(
        ColoredPolytope::from_json("{"),
        Err(Error::Parse(_))
    ));
}

#[test]
fn deformation_rejects_improper_coloring() {
    let mut poly = build_kgon(6).unwrap();
    poly.coloring = vec![0, 1, 1, 0, 1, 0];
    assert_eq!(
        deformed_normals(&poly, 0.3).unwrap_err(),
        Error::ColoringViolation(0, 5)
    );
}

#[test]
fn deformation_at_zero_pads() {
    let poly = build_120cell().unwrap();
    let dn = deformed_normals(&poly, 0.0).unwrap();
    for (v, w) in dn.vectors.iter().zip(&poly.normals) {
        assert_eq!(v.len(), 9);
        for c in 0..4 {
            assert_eq!(v[c], w[c]);
        }
        assert!((4..8).all(|c| v[c] == 0.0));
        assert_eq!(v[8], 1.0);
    }
}

#[test]
fn self_pairing_matches_expansion() {
    // ⟨v^t, v^t⟩ = cosh²t |w|² + m sinh²t − 1, since |u| = 1 for m ≥ 1.
    for poly in [
        build_kgon(6).unwrap(),
        build_120cell().unwrap(),
        margulis_walls(3).unwrap(),
    ] {
        let m = poly.m() as f64;
        for t in [0.1, 0.7, 1.3] {
            let dn = deformed_normals(&poly, t).unwrap();
            for (i, v) in dn.vectors.iter().enumerate() {
                let w2: f64 = poly.normals[i][..poly.p].iter().map(|x| x * x).sum();
                let u_len2 = if poly.m() == 0 { 0.0 } else { 1.0 };
                let expected = t.cosh().powi(2) * w2 + m * u_len2 * t.sinh().powi(2) - 1.0;
                assert!((lorentz(v, v) - expected).abs() < 1e-12 * expected.abs().max(1.0));
                assert!(lorentz(v, v) > 0.0);
            }
        }
    }
}

#[test]
fn reflections_are_involutive_isometries() {
    let poly = build_kgon(8).unwrap();
    let dn = deformed_normals(&poly, 0.4).unwrap();
    let form = dn.form();
    let j = form.j();
    let refl = dn.reflections().unwrap();
    for (i, r) in refl.iter().enumerate() {
        let n = r.nrows();
        assert!((r * r - DMatrix::identity(n, n)).amax() < 1e-11);
        assert!((r.transpose() * &j * r - &j).amax() < 1e-11);
        assert!((r * &dn.vectors[i] + &dn.vectors[i]).amax() < 1e-12);
        // A vector orthogonal to v_i is fixed.
        let v = &dn.vectors[i];
        let x = DVector::from_fn(n, |c, _| {
            if c == n - 1 {
                v[0]
            } else if c == 0 {
                v[n - 1]
            } else {
                0.0
            }
        });
        assert!(lorentz(&x, v).abs() < 1e-12);
        assert!((r * &x - &x).amax() < 1e-12);
    }
    for (a, b) in poly.edges() {
        let (ra, rb) = (&refl[a], &refl[b]);
        assert!((ra * rb - rb * ra).amax() < 1e-10);
    }
    let w = Word(vec![0, 2, 5]);
    let g = rep_from_normals(&dn, &w).unwrap();
    assert!((g - &refl[0] * &refl[2] * &refl[5]).amax() < 1e-12);
}

#[test]
fn lightlike_normal_rejected() {
    let form = lorentz_form(2);
    let v = DVector::from_vec(vec![1.0, 0.0, 1.0]);
    assert!(matches!(
        reflection_in_normal(&v, &form),
        Err(Error::LightlikeNormal(_))
    ));
}

#[test]
fn cocycle_matches_finite_difference() {
    let poly = build_kgon(6).unwrap();
    let (t, h) = (0.35, 1e-6);
    let w = Word(vec![0, 3, 1, 4, 2]);
    let dn = deformed_normals(&poly, t).unwrap();
    let u = reflection_cocycle(&dn, &w).unwrap();
    let g = |tau: f64| rep_from_normals(&deformed_normals(&poly, tau).unwrap(), &w).unwrap();
    let fd = (g(t + h) - g(t - h)) / (2.0 * h) * g(t).try_inverse().unwrap();
    assert!((&u - fd).amax() < 1e-6 * u.amax().max(1.0));
    let j = dn.form().j();
    assert!((u.transpose() * &j + &j * &u).amax() < 1e-9 * u.amax().max(1.0));
}

#[test]
fn lipschitz_map_identity_at_equal_parameters() {
    let poly = build_kgon(6).unwrap();
    let map = LipschitzMap::new(&poly, 0.4, 0.4, 10_000).unwrap();
    let x = klein_to_hyperboloid(&DVector::from_vec(vec![0.3, -0.5, 0.2])).unwrap();
    assert!((map.apply(&x).unwrap() - &x).amax() < 1e-10);
    assert!(LipschitzMap::new(&poly, 0.5, 0.4, 10).is_err());
}

#[test]
fn lipschitz_map_contracts_and_is_equivariant() {
    let poly = build_kgon(6).unwrap();
    let map = LipschitzMap::new(&poly, 0.3, 0.4, 100_000).unwrap();
    let ratio = empirical_lipschitz(&map, 2000, 0.95, 11).unwrap();
    assert!(ratio <= map.lipschitz_constant() + 1e-6, "{ratio}");
    let x = klein_to_hyperboloid(&DVector::from_vec(vec![0.2, -0.1, 0.4])).unwrap();
    for w in [Word(vec![0]), Word(vec![1, 3]), Word(vec![2, 5, 0, 3])] {
        let gt = rep_from_normals(&map.source, &w).unwrap();
        let gs = rep_from_normals(&map.target, &w).unwrap();
        let lhs = map.apply(&(gt * &x)).unwrap();
        let rhs = gs * map.apply(&x).unwrap();
        assert!((&lhs - &rhs).amax() < 1e-9 * rhs.amax());
    }
}

#[test]
fn ball_comparison_inequality() {
    for r in [0.1, 0.3, 0.5, 0.9] {
        let worst = ball_comparison(3, r, 500, 5).unwrap();
        assert!(worst >= 1.0 - 1e-12, "r = {r}: {worst}");
    }
}

#[test]
fn margulis_two_walls_ratio_at_origin() {
    let poly = margulis_walls(2).unwrap();
    let (t, s) = (0.3, 0.5);
    let map = LipschitzMap::new(&poly, t, s, 1000).unwrap();
    let origin = klein_to_hyperboloid(&DVector::zeros(2)).unwrap();
    let near = klein_to_hyperboloid(&DVector::from_vec(vec![1e-4, 0.0])).unwrap();
    let ratio = hyperbolic_distance(&map.apply(&origin).unwrap(), &map.apply(&near).unwrap())
        / hyperbolic_distance(&origin, &near);
    assert!((ratio - t.cosh() / s.cosh()).abs() < 1e-6);
    let report = margulis_demo(2, t, s, 3).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
    assert!(report.empirical_ratio <= report.lipschitz_constant + 1e-6);
}

#[test]
fn margulis_three_walls_pass() {
    let report = margulis_demo(3, 0.2, 0.35, 4).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
    assert_eq!(report.lie_dimension, 3);
    assert!(report.lie_residual < 1e-9);
    assert!(report.wall_separation > 1.0);
}

#[test]
fn margulis_rejects_touching_walls() {
    assert!(matches!(
        margulis_demo(4, 2.0, 2.5, 1),
        Err(Error::WallsIntersect(_, _))
    ));
    assert!(margulis_walls(1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn adjacent_normals_stay_orthogonal(t in 0.01f64..2.0, k in 3usize..8) {
        let poly = build_kgon(2 * k).unwrap();
        let dn = deformed_normals(&poly, t).unwrap();
        for (i, j) in poly.edges() {
            prop_assert!(lorentz(&dn.vectors[i], &dn.vectors[j]).abs() < 1e-12 * t.cosh().powi(2));
        }
    }

    #[test]
    fn ball_comparison_holds(r in 0.05f64..1.0, seed in 0u64..1000) {
        prop_assert!(ball_comparison(2, r, 20, seed).unwrap() >= 1.0 - 1e-12);
    }
}
