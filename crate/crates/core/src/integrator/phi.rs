use num_complex::Complex64;

/// Below this `|z·dt|` the φ-functions are summed from their Taylor series.
pub const SERIES_THRESHOLD: f64 = 0.5;

const SERIES_TERMS: usize = 24;

/// `[φ₀, φ₁, φ₂, φ₃]` at `w = z·dt`, where `φ₀(w) = e^w` and
/// `φ_{k+1}(w) = (φ_k(w) − 1/k!) / w`.
pub fn phi_functions(z: Complex64, dt: f64) -> [Complex64; 4] {
    let w = z * dt;
    if w.norm() < SERIES_THRESHOLD {
        phi_series(w)
    } else {
        phi_direct(w)
    }
}

/// Taylor sums `φ_k(w) = Σ_n wⁿ / (n + k)!`.
pub(crate) fn phi_series(w: Complex64) -> [Complex64; 4] {
    let mut out = [Complex64::default(); 4];
    for (k, slot) in out.iter_mut().enumerate() {
        // Horner on Σ_n wⁿ/(n+k)!: innermost term first.
        let mut acc = Complex64::default();
        for n in (0..SERIES_TERMS).rev() {
            acc = acc * w + 1.0 / factorial(n + k);
        }
        *slot = acc;
    }
    out
}

pub(crate) fn phi_direct(w: Complex64) -> [Complex64; 4] {
    let e = w.exp();
    let p1 = (e - 1.0) / w;
    let p2 = (e - 1.0 - w) / (w * w);
    let p3 = (e - 1.0 - w - w * w * 0.5) / (w * w * w);
    [e, p1, p2, p3]
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // 40-digit reference evaluations of (e^z − 1 − …)/z^k.
    const REFERENCE: [((f64, f64), [(f64, f64); 3]); 7] = [
        ((-1.0, 0.0), [(0.6321205588285576784, 0.0), (0.3678794411714423216, 0.0), (0.1321205588285576784, 0.0)]),
        ((0.0, 0.5), [(0.95885107720840600055, 0.24483487621925456777), (0.48966975243850913553, 0.082297845583187998907), (0.16459569116637599781, 0.02066049512298172893)]),
        ((-0.49, 0.0), [(0.79055837921547741345, 0.0), (0.42743187915208691907, 0.0), (0.14809820581206751479, 0.0)]),
        ((0.51, 0.2), [(1.2946935726459262555, 0.1409873975482780687), (0.59477241439212929086, 0.04320179347029843831), (0.1898510164413383031, 0.010258019964766226454)]),
        ((-30.0, 40.0), [(0.012000000000001864513, 0.016000000000000161854), (0.012111999999999980216, 0.015615999999999968226), (0.006104511999999999729, 0.0076188160000000006978)]),
        ((0.3, -0.39), [(1.1346437739223099762, -0.23563202954220086173), (0.54642554191718846977, -0.075086893981657840241), (0.17848637434119412823, -0.018257359961973760187)]),
        ((-600.0, 0.0), [(0.0016666666666666666667, 0.0), (0.0016638888888888888889, 0.0), (0.00083056018518518518519, 0.0)]),
    ];

    #[test]
    fn limiting_values_at_zero() {
        let p = phi_functions(c(0.0, 0.0), 1.0);
        assert_eq!(p[0], c(1.0, 0.0));
        assert!((p[1] - 1.0).norm() < 1e-16);
        assert!((p[2] - 0.5).norm() < 1e-16);
        assert!((p[3] - 1.0 / 6.0).norm() < 1e-16);
    }

    #[test]
    fn matches_high_precision_reference() {
        for ((re, im), want) in REFERENCE {
            let p = phi_functions(c(re, im), 1.0);
            for k in 0..3 {
                let w = c(want[k].0, want[k].1);
                let rel = (p[k + 1] - w).norm() / w.norm();
                assert!(rel <= 1e-13, "phi_{} at ({re},{im}): rel err {rel:e}", k + 1);
            }
        }
        let p = phi_functions(c(-2.0, 0.0), 0.5);
        assert!((p[1].re - 0.6321205588285577).abs() < 1e-15);
    }

    #[test]
    fn branches_agree_across_switch() {
        // dense scan of the switch neighbourhood in every direction
        for i in 0..720 {
            let theta = i as f64 * std::f64::consts::PI / 360.0;
            for r in [0.49, 0.4999, 0.5, 0.5001, 0.51] {
                let w = Complex64::from_polar(r, theta);
                let s = phi_series(w);
                let d = phi_direct(w);
                for k in 0..4 {
                    let rel = (s[k] - d[k]).norm() / s[k].norm();
                    assert!(rel <= 1e-13, "k={k} w={w}: {rel:e}");
                }
            }
        }
        let lo = phi_functions(c(0.4999, 0.0), 1.0)[1];
        let hi = phi_functions(c(0.5001, 0.0), 1.0)[1];
        // |φ₁'| < 0.71 on this interval
        assert!((lo - hi).norm() <= 0.71 * 2e-4 + 1e-12);
    }

    #[test]
    fn conjugate_symmetry() {
        for w in [c(-3.0, 7.0), c(0.2, 0.1), c(-100.0, 5.0)] {
            let a = phi_functions(w, 1.0);
            let b = phi_functions(w.conj(), 1.0);
            for k in 0..4 {
                assert!((a[k].conj() - b[k]).norm() <= 1e-15 * a[k].norm());
            }
        }
    }
}
