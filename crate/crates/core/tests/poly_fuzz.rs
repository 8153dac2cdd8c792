use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use triproject::poly::{
    is_real, solve_cubic, solve_depressed_quartic, CubicCoefficients, DepressedQuarticCoefficients, DiscriminantClass,
};

const CASES: usize = 100_000;

fn quartic_residual(c: &DepressedQuarticCoefficients<f64>, z: Complex64) -> f64 {
    c.eval(z).norm() / (c.scale() * c.scale())
}

/// Elementary symmetric functions of four roots.
fn symmetric(r: &[Complex64; 4]) -> [Complex64; 4] {
    let mut e = [Complex64::new(0.0, 0.0); 4];
    for i in 0..4 {
        e[0] += r[i];
        for j in i + 1..4 {
            e[1] += r[i] * r[j];
            for k in j + 1..4 {
                e[2] += r[i] * r[j] * r[k];
            }
        }
    }
    e[3] = r[0] * r[1] * r[2] * r[3];
    e
}

fn conjugate_closed(roots: &[Complex64], tol: f64) -> bool {
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] || is_real(roots[i]) {
            continue;
        }
        let partner = (0..roots.len()).find(|&j| j != i && !used[j] && (roots[j] - roots[i].conj()).norm() <= tol * (1.0 + roots[i].norm()));
        match partner {
            Some(j) => {
                used[i] = true;
                used[j] = true;
            }
            None => return false,
        }
    }
    true
}

#[test]
fn quartic_fuzz_residual_roundtrip_conjugates() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst_res: f64 = 0.0;
    let mut worst_rt: f64 = 0.0;
    for _ in 0..CASES {
        let c = DepressedQuarticCoefficients::new(
            rng.random_range(-1e3..1e3),
            rng.random_range(-1e3..1e3),
            rng.random_range(-1e3..1e3),
        );
        let roots = solve_depressed_quartic(c);
        for z in roots {
            worst_res = worst_res.max(quartic_residual(&c, z));
        }
        let e = symmetric(&roots);
        let want = [0.0, c.p, -c.q, c.r];
        for k in 0..4 {
            worst_rt = worst_rt.max((e[k] - want[k]).norm() / c.scale());
        }
        assert!(conjugate_closed(&roots, 1e-9), "{c:?} {roots:?}");
    }
    assert!(worst_res <= 1e-6, "worst normalised residual {worst_res:e}");
    assert!(worst_rt <= 1e-6, "worst coefficient round-trip {worst_rt:e}");
}

#[test]
fn quartic_fuzz_small_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..CASES / 10 {
        let c = DepressedQuarticCoefficients::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0) * 10f64.powi(rng.random_range(-8..1)),
            rng.random_range(-1.0..1.0),
        );
        let roots = solve_depressed_quartic(c);
        for z in roots {
            assert!(quartic_residual(&c, z) <= 1e-6, "{c:?} {z}");
        }
    }
}

fn biquadratic_reference(p: f64, r: f64) -> Vec<Complex64> {
    let disc = Complex64::new(p * p - 4.0 * r, 0.0).sqrt();
    let mut out = Vec::new();
    for w in [(-p + disc) / 2.0, (-p - disc) / 2.0] {
        let s = w.sqrt();
        out.push(s);
        out.push(-s);
    }
    out
}

#[test]
fn biquadratic_branch_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let p: f64 = rng.random_range(-50.0..50.0);
        let r: f64 = rng.random_range(-50.0..50.0);
        for q in [0.0, 1e-14, -1e-14] {
            let c = DepressedQuarticCoefficients::new(p, q, r);
            assert!(q.abs() < c.q_threshold());
            let got = solve_depressed_quartic(c);
            let mut want = biquadratic_reference(p, r);
            for z in got {
                let (k, d) = want
                    .iter()
                    .enumerate()
                    .map(|(k, w)| (k, (w - z).norm()))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap();
                assert!(d <= 1e-6 * (1.0 + z.norm()), "p={p} r={r} q={q}: {z} vs {want:?}");
                want.remove(k);
            }
        }
    }
}

#[test]
fn cubic_fuzz_classes_and_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..CASES {
        let [a, b, c, d]: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1e3..1e3));
        if a.abs() < 1e-3 {
            continue;
        }
        let sol = solve_cubic(CubicCoefficients::new(a, b, c, d)).unwrap();
        for z in sol.roots {
            let backward = a.abs() * z.norm().powi(3) + b.abs() * z.norm().powi(2) + c.abs() * z.norm() + d.abs();
            let res = CubicCoefficients::new(a, b, c, d).eval(z).norm();
            assert!(res <= 1e-6 * backward.max(1.0), "{a} {b} {c} {d}: {z}");
        }
        assert!(conjugate_closed(&sol.roots, 1e-9));
        let delta = 18.0 * a * b * c * d - 4.0 * b.powi(3) * d + b * b * c * c - 4.0 * a * c.powi(3) - 27.0 * a * a * d * d;
        let size = [18.0 * a * b * c * d, 4.0 * b.powi(3) * d, b * b * c * c, 4.0 * a * c.powi(3), 27.0 * a * a * d * d]
            .iter()
            .map(|v| v.abs())
            .sum::<f64>();
        if delta.abs() <= 1e-9 * size {
            continue;
        }
        let want = if delta > 0.0 { DiscriminantClass::ThreeReal } else { DiscriminantClass::OneReal };
        assert_eq!(sol.class, want, "{a} {b} {c} {d}");
        let reals = sol.roots.iter().filter(|z| is_real(**z)).count();
        assert_eq!(reals, if delta > 0.0 { 3 } else { 1 });
    }
}

#[test]
fn cubic_repeated_roots() {
    for (r1, r2) in [(1.0, 2.0), (-3.0, 0.5), (0.0, 4.0), (2.5, 2.5)] {
        // (x − r1)²(x − r2)
        let b = -(2.0 * r1 + r2);
        let c = r1 * r1 + 2.0 * r1 * r2;
        let d = -r1 * r1 * r2;
        let sol = solve_cubic(CubicCoefficients::new(1.0, b, c, d)).unwrap();
        assert_eq!(sol.class, DiscriminantClass::RepeatedReal, "{r1} {r2}");
        let mut re: Vec<f64> = sol.roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        let mut want = vec![r1, r1, r2];
        want.sort_by(f64::total_cmp);
        for (g, w) in re.iter().zip(&want) {
            assert!((g - w).abs() < 1e-6, "{re:?} vs {want:?}");
        }
    }
}
