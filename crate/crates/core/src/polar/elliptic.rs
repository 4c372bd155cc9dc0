//! Jacobi elliptic functions and the Zolotarev coefficients built from them.

use std::f64::consts::PI;

const AGM_MAX_ITERS: usize = 64;

/// Arithmetic-geometric mean. `agm(x, 0) = 0`.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX_ITERS {
        if (a - b).abs() <= 2.0 * f64::EPSILON * a.abs() {
            break;
        }
        let next = (a + b) / 2.0;
        b = (a * b).sqrt();
        a = next;
    }
    (a + b) / 2.0
}

/// `K(k) = π / (2 agm(1, k'))` as a function of the complementary modulus
/// `k' = √(1 − k²)`. Infinite at `k' = 0`.
pub fn complete_elliptic_k(modulus_complement: f64) -> f64 {
    PI / (2.0 * agm(1.0, modulus_complement))
}

/// `(sn(u; k), cn(u; k))` with `k = √(1 − kc²)` by descending Landen / AGM.
///
/// `kc = 1` gives `(sin u, cos u)` exactly and `kc = 0` gives
/// `(tanh u, sech u)`.
pub fn jacobi_elliptic(u: f64, modulus_complement: f64) -> (f64, f64) {
    let kc = modulus_complement;
    assert!((0.0..=1.0).contains(&kc), "modulus complement must lie in [0, 1], got {kc}");
    if kc == 1.0 {
        return (u.sin(), u.cos());
    }
    if kc == 0.0 {
        return (u.tanh(), 1.0 / u.cosh());
    }
    let mut a = vec![1.0];
    let mut c = vec![((1.0 - kc) * (1.0 + kc)).sqrt()];
    let mut b = kc;
    while c.len() < AGM_MAX_ITERS {
        let an = *a.last().unwrap();
        if c.last().unwrap().abs() <= f64::EPSILON * an {
            break;
        }
        a.push((an + b) / 2.0);
        c.push((an - b) / 2.0);
        b = (an * b).sqrt();
    }
    let n = a.len() - 1;
    let mut phi = 2f64.powi(n as i32) * a[n] * u;
    for i in (1..=n).rev() {
        phi = (phi + (c[i] / a[i] * phi.sin()).asin()) / 2.0;
    }
    (phi.sin(), phi.cos())
}

/// `c_j = ℓ² sn²(jK′/(2r+1); ℓ′) / cn²(jK′/(2r+1); ℓ′)` for `j = 1..2r`,
/// with `ℓ′ = √(1 − ℓ²)` and `K′ = K(ℓ′)`.
///
/// Evaluated through theta-function quotients: the direct route loses all
/// relative accuracy in `cn` near `K′` once `ℓ` is tiny.
pub fn zolotarev_c(ell: f64, r: usize) -> Vec<f64> {
    assert!(ell > 0.0 && ell <= 1.0, "ell must lie in (0, 1], got {ell}");
    assert!(r >= 1, "r must be at least 1");
    let lp = ((1.0 - ell) * (1.0 + ell)).sqrt();
    let k = complete_elliptic_k(lp); // K(ℓ)
    let kp = complete_elliptic_k(ell); // K(ℓ′)
    let denom = (2 * (2 * r + 1)) as f64;
    const TERMS: usize = 12;

    (1..=2 * r)
        .map(|j| {
            let j = j as f64;
            if kp >= k {
                // Nome q = exp(−πK′/K): expand sc(·; ℓ′) around the real axis of K(ℓ).
                let t = PI * kp / k;
                let y = j * t / denom;
                let (mut s, mut c) = (0.0, 1.0);
                for n in 0..TERMS {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    let nf = n as f64;
                    let e = -t * (nf + 0.5) * (nf + 0.5);
                    let w = (2.0 * nf + 1.0) * y;
                    s += sign * ((e + w).exp() - (e - w).exp());
                    if n >= 1 {
                        let e2 = -t * nf * nf;
                        c += sign * ((e2 + 2.0 * nf * y).exp() + (e2 - 2.0 * nf * y).exp());
                    }
                }
                ell * (s / c).powi(2)
            } else {
                let t = if k.is_finite() { PI * k / kp } else { f64::INFINITY };
                let v = PI * j / denom;
                let (mut t1, mut t2) = (0.0, 0.0);
                for n in 0..TERMS {
                    let nf = n as f64;
                    let w = if n == 0 { 1.0 } else { (-t * nf * (nf + 1.0)).exp() };
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    t1 += sign * w * ((2.0 * nf + 1.0) * v).sin();
                    t2 += w * ((2.0 * nf + 1.0) * v).cos();
                }
                ell * (t1 / t2).powi(2)
            }
        })
        .collect()
}

/// Coefficients of the type-(2r+1, 2r) Zolotarev rational
/// `Ẑ(x) = M̂ x (1 + Σ_j a_j / (x² + c_{2j−1}))`.
#[derive(Clone, Debug)]
pub struct ZolotarevCoefficients {
    /// `c_1..c_{2r}` (stored zero-based).
    pub c: Vec<f64>,
    /// `a_1..a_r`.
    pub a: Vec<f64>,
    /// Normalization making `max Ẑ = 1` on `[ℓ, 1]`.
    pub mhat: f64,
}

impl ZolotarevCoefficients {
    pub fn new(ell: f64, r: usize) -> Self {
        let c = zolotarev_c(ell, r);
        let odd = |j: usize| c[2 * j];
        let even = |j: usize| c[2 * j + 1];
        let a = (0..r)
            .map(|j| {
                let num: f64 = (0..r).map(|k| odd(j) - even(k)).product();
                let den: f64 = (0..r).filter(|&k| k != j).map(|k| odd(j) - odd(k)).product();
                -num / den
            })
            .collect();
        let mhat = (0..r).map(|j| (1.0 + odd(j)) / (1.0 + even(j))).product();
        Self { c, a, mhat }
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// `c_{2j−1}` for zero-based `j`.
    pub fn c_odd(&self, j: usize) -> f64 {
        self.c[2 * j]
    }

    /// Scalar map in product form, `M̂ x ∏ (x² + c_{2j}) / (x² + c_{2j−1})`.
    pub fn apply(&self, x: f64) -> f64 {
        let x2 = x * x;
        (0..self.order()).fold(self.mhat * x, |p, j| p * (x2 + self.c[2 * j + 1]) / (x2 + self.c[2 * j]))
    }

    /// Scalar map in partial-fraction form, matching the matrix update.
    pub fn apply_partial_fractions(&self, x: f64) -> f64 {
        let x2 = x * x;
        let s: f64 = self.a.iter().enumerate().map(|(j, aj)| aj / (x2 + self.c_odd(j))).sum();
        self.mhat * x * (1.0 + s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Power series of (sn, cn, dn) at 0 from `s' = cd, c' = −sd, d' = −k² sc`.
    fn series_oracle(u: f64, k: f64, terms: usize) -> (f64, f64) {
        let mut s = vec![0.0; terms];
        let mut c = vec![0.0; terms];
        let mut d = vec![0.0; terms];
        c[0] = 1.0;
        d[0] = 1.0;
        let conv = |x: &[f64], y: &[f64], n: usize| (0..=n).map(|i| x[i] * y[n - i]).sum::<f64>();
        for n in 0..terms - 1 {
            let np1 = (n + 1) as f64;
            s[n + 1] = conv(&c, &d, n) / np1;
            c[n + 1] = -conv(&s, &d, n) / np1;
            d[n + 1] = -k * k * conv(&s, &c, n) / np1;
        }
        let eval = |p: &[f64]| p.iter().rev().fold(0.0, |acc, &x| acc * u + x);
        (eval(&s), eval(&c))
    }

    #[test]
    fn zero_argument() {
        assert_eq!(jacobi_elliptic(0.0, 0.3), (0.0, 1.0));
    }

    #[test]
    fn degenerate_moduli() {
        for u in [0.1, 1.0, 2.5, -3.0] {
            assert_eq!(jacobi_elliptic(u, 1.0), (u.sin(), u.cos()));
            let (sn, cn) = jacobi_elliptic(u, 0.0);
            assert!((sn - u.tanh()).abs() < 1e-16 && (cn - 1.0 / u.cosh()).abs() < 1e-16);
        }
    }

    #[test]
    fn matches_power_series_at_half_modulus() {
        let k: f64 = 0.5;
        let (sn, cn) = jacobi_elliptic(1.0, (1.0 - k * k).sqrt());
        let (os, oc) = series_oracle(1.0, k, 60);
        assert!((sn - os).abs() < 1e-12, "sn {sn} vs {os}");
        assert!((cn - oc).abs() < 1e-12, "cn {cn} vs {oc}");
        // Frozen high-precision values.
        assert!((sn - 0.822_635_578_129_862_4).abs() < 1e-14);
        assert!((cn - 0.568_568_998_095_171_5).abs() < 1e-14);
    }

    #[test]
    fn quarter_period() {
        let kc: f64 = 0.6;
        let (sn, cn) = jacobi_elliptic(complete_elliptic_k(kc), kc);
        assert!((sn - 1.0).abs() < 1e-14 && cn.abs() < 1e-7);
    }

    #[test]
    fn theta_route_agrees_with_landen_route_for_moderate_ell() {
        for &ell in &[0.05, 0.3, 0.7, 0.95] {
            for r in [1, 3, 6] {
                let kp = complete_elliptic_k(ell);
                let theta = zolotarev_c(ell, r);
                for (i, &cj) in theta.iter().enumerate() {
                    let (sn, cn) = jacobi_elliptic((i + 1) as f64 * kp / (2 * r + 1) as f64, ell);
                    let direct = ell * ell * sn * sn / (cn * cn);
                    assert!((cj - direct).abs() <= 1e-9 * direct, "ell {ell} r {r} j {}", i + 1);
                }
            }
        }
    }

    #[test]
    fn frozen_coefficients() {
        let cases: [(f64, usize, &[(usize, f64)]); 4] = [
            (1e-16, 8, &[(1, 2.194_798_753_045_788_1e-31), (9, 9.475_273_710_262_686_8e-16), (16, 0.045_562_263_902_887_222)]),
            (0.5, 2, &[(1, 0.050_312_820_176_726_478), (2, 0.259_137_895_166_284_29), (3, 0.964_737_325_814_811_21), (4, 4.968_912_478_407_324_3)]),
            (0.999, 1, &[(1, 0.332_999_979_166_669_6), (2, 2.997_000_187_499_985_3)]),
            (1e-3, 5, &[(1, 6.847_698_772_236_455_4e-7), (10, 1.460_344_611_031_131)]),
        ];
        for (ell, r, expect) in cases {
            let c = zolotarev_c(ell, r);
            for &(j, v) in expect {
                let rel = (c[j - 1] - v).abs() / v;
                assert!(rel < 1e-13, "ell {ell} r {r} j {j}: {} vs {v} (rel {rel:e})", c[j - 1]);
            }
        }
    }

    #[test]
    fn ell_one_reduces_to_tangents() {
        let c = zolotarev_c(1.0, 3);
        for (i, cj) in c.iter().enumerate() {
            let t = (PI * (i + 1) as f64 / 14.0).tan();
            assert!((cj - t * t).abs() < 1e-14 * t * t);
        }
    }

    #[test]
    fn rational_forms_agree_and_are_normalized() {
        for &(ell, r) in &[(1e-16, 8), (1e-7, 5), (0.3, 2), (0.9, 1)] {
            let z = ZolotarevCoefficients::new(ell, r);
            for x in [ell, 0.01, 0.37, 0.8, 1.0] {
                if x < ell {
                    continue;
                }
                let p = z.apply(x);
                let f = z.apply_partial_fractions(x);
                assert!((p - f).abs() < 1e-12, "ell {ell} r {r} x {x}: {p} vs {f}");
                assert!(p <= 1.0 + 1e-14 && p >= z.apply(ell) - 1e-14);
            }
        }
    }
}
