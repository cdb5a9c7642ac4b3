//! Shared test oracles, independent of the library's production formulas.
#![allow(dead_code)] // each test target uses its own subset

/// Adaptive Simpson quadrature with absolute tolerance `eps`.
///
/// The range is pre-split into 64 panels so long near-zero stretches cannot
/// hide all the mass from the initial subdivision.
pub fn integrate<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, eps: f64) -> f64 {
    let panels = 64;
    let step = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + i as f64 * step;
            adaptive_simpson(f, lo, lo + step, eps / panels as f64)
        })
        .sum()
}

fn adaptive_simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, eps: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * eps, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * eps, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (whole, m, fm) = simpson(&f, a, fa, b, fb);
    recurse(&f, a, fa, b, fb, whole, m, fm, eps, 48)
}

/// Kolmogorov-Smirnov distance between a sample and an analytic CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &mut [f64], cdf: F) -> f64 {
    sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sample.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sample.iter().enumerate() {
        let c = cdf(x);
        d = d.max((c - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - c).abs());
    }
    d
}

/// Binomial coefficient, exact for the small arguments used in tests.
pub fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (1..=k).fold(1.0, |acc, i| acc * (n - k + i) as f64 / i as f64)
}

/// Definitional sample L-moment: the average over all size-`r` subsamples of
/// `r^-1 sum_k (-1)^k C(r-1,k) x_(i_{r-k})`. Combinatorial; oracle only.
pub fn brute_force_lmoment(data: &[f64], r: usize) -> f64 {
    let mut sorted = data.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    assert!(r >= 1 && r <= n);

    let mut idx: Vec<usize> = (0..r).collect();
    let mut total = 0.0;
    loop {
        // subset in ascending order; x_(i_{r-k}) is its (r-k)-th smallest
        let mut inner = 0.0;
        for k in 0..r {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            inner += sign * binom(r - 1, k) * sorted[idx[r - 1 - k]];
        }
        total += inner / r as f64;

        // next combination
        let mut i = r;
        loop {
            if i == 0 {
                return total / binom(n, r);
            }
            i -= 1;
            if idx[i] != i + n - r {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
