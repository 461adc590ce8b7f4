//! Gamma function and the quadrature building blocks used for radial integrals.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) by the Lanczos approximation (g = 7, n = 9), with reflection for x < ½.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEF[0];
        for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return gamma(x).abs().ln();
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Finite-difference weights for derivative `order` at `x0` over `nodes`
/// (Fornberg's recursion).
pub(crate) fn fd_weights(x0: f64, nodes: &[f64], order: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Stencil width for derivatives of sampled data.
const STENCIL: usize = 7;

/// First derivative of uniformly sampled data, sixth order everywhere
/// (centred in the interior, one-sided near both ends).
pub(crate) fn derivative<T>(values: &[T], h: f64) -> Vec<T>
where
    T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let n = values.len();
    assert!(n >= STENCIL, "need at least {STENCIL} samples");
    let half = STENCIL / 2;
    let offsets: Vec<f64> = (0..STENCIL).map(|k| k as f64).collect();
    let centred = fd_weights(half as f64, &offsets, 1);
    let mut edge = Vec::with_capacity(half);
    for i in 0..half {
        edge.push(fd_weights(i as f64, &offsets, 1));
    }
    let apply = |start: usize, w: &[f64]| {
        w.iter()
            .enumerate()
            .fold(T::default(), |acc, (k, &wk)| acc + values[start + k] * (wk / h))
    };
    (0..n)
        .map(|i| {
            if i < half {
                apply(0, &edge[i])
            } else if i + half >= n {
                // mirror of the left edge stencil
                let j = n - 1 - i;
                let w: Vec<f64> = edge[j].iter().rev().map(|x| -x).collect();
                apply(n - STENCIL, &w)
            } else {
                apply(i - half, &centred)
            }
        })
        .collect()
}

/// Number of leading samples handled by product integration near r = 0.
const ORIGIN_NODES: usize = 8;

/// Product-integration weights w_j with ∫₀^M x^q P(x) dx = Σ w_j P(j+1),
/// P the degree-7 interpolant through x = 1..=8, M = 8.
fn origin_weights(q: f64) -> [f64; ORIGIN_NODES] {
    let m = ORIGIN_NODES as f64;
    // nodes scaled to (0, 1]; monomial moments ∫₀¹ y^(q+k) dy
    let nodes: Vec<f64> = (1..=ORIGIN_NODES).map(|j| j as f64 / m).collect();
    let mut w = [0.0; ORIGIN_NODES];
    for (j, wj) in w.iter_mut().enumerate() {
        // Lagrange basis polynomial coefficients, lowest degree first
        let mut coef = vec![1.0];
        let mut denom = 1.0;
        for (k, &xk) in nodes.iter().enumerate() {
            if k == j {
                continue;
            }
            let mut next = vec![0.0; coef.len() + 1];
            for (d, &cd) in coef.iter().enumerate() {
                next[d + 1] += cd;
                next[d] -= cd * xk;
            }
            coef = next;
            denom *= nodes[j] - xk;
        }
        let integral: f64 = coef
            .iter()
            .enumerate()
            .map(|(d, &cd)| cd / (q + d as f64 + 1.0))
            .sum();
        *wj = integral / denom * m.powf(q + 1.0);
    }
    w
}

/// Gauss–Legendre nodes and weights on [−1, 1].
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                let (mut q0, mut q1) = (1.0, z);
                for k in 2..=n {
                    let q2 = ((2 * k - 1) as f64 * z * q1 - (k - 1) as f64 * q0) / k as f64;
                    q0 = q1;
                    q1 = q2;
                }
                let dq = n as f64 * (z * q1 - q0) / (z * z - 1.0);
                x[i] = -z;
                x[n - 1 - i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dq * dq);
                w[n - 1 - i] = w[i];
                break;
            }
        }
    }
    (x, w)
}

/// Product-integration weights over the panel [a, a+7] (grid units) with
/// interpolation nodes a..=a+7, for a ≥ 8 where x^q is analytic nearby.
fn panel_weights(q: f64, a: f64, gl: &(Vec<f64>, Vec<f64>)) -> [f64; ORIGIN_NODES] {
    let half = 0.5 * (ORIGIN_NODES - 1) as f64;
    let mid = a + half;
    let mut w = [0.0; ORIGIN_NODES];
    for (&t, &wt) in gl.0.iter().zip(&gl.1) {
        let x = mid + half * t;
        let base = x.powf(q) * wt * half;
        for (j, wj) in w.iter_mut().enumerate() {
            let mut l = 1.0;
            for k in 0..ORIGIN_NODES {
                if k != j {
                    l *= (x - a - k as f64) / (j as f64 - k as f64);
                }
            }
            *wj += base * l;
        }
    }
    w
}

/// Panels of product integration after the origin panel; Gregory's rule
/// takes over at (8 + 7·PANELS)·h = 64h.
const PANELS: usize = 8;

/// ∫₀^{r_n} r^q G(r) dr for G smooth, sampled at r_i = (i+1)·h.
///
/// The first 64 cells use product integration against r^q with degree-7
/// interpolation of G, so a non-smooth power law at the origin is integrated
/// exactly; the rest uses the trapezoid rule with Gregory end corrections
/// through fifth differences. Requires q > −1 and at least 96 samples.
pub(crate) fn integrate_power_weighted(q: f64, g: &[f64], h: f64) -> f64 {
    assert!(q > -1.0, "r^q with q <= -1 is not integrable at the origin");
    let start = ORIGIN_NODES + (ORIGIN_NODES - 1) * PANELS;
    assert!(g.len() >= start + 32, "too few samples");
    let dot = |w: &[f64], from: usize| -> f64 { w.iter().zip(&g[from..]).map(|(a, b)| a * b).sum() };
    let gl = gauss_legendre(20);
    let mut head = dot(&origin_weights(q), 0);
    for k in 0..PANELS {
        let a = ORIGIN_NODES + (ORIGIN_NODES - 1) * k;
        head += dot(&panel_weights(q, a as f64, &gl), a - 1);
    }
    head *= h.powf(q + 1.0);
    let f: Vec<f64> = g[start - 1..]
        .iter()
        .enumerate()
        .map(|(k, &gk)| (((start + k) as f64) * h).powf(q) * gk)
        .collect();
    head + gregory(&f, h)
}

/// Trapezoid rule with Gregory end corrections (differences up to fifth order).
pub(crate) fn gregory(f: &[f64], h: f64) -> f64 {
    const CORR: [f64; 5] = [
        -1.0 / 12.0,
        -1.0 / 24.0,
        -19.0 / 720.0,
        -3.0 / 160.0,
        -863.0 / 60480.0,
    ];
    let n = f.len();
    assert!(n >= 2 * CORR.len() + 2);
    let trap = f.iter().sum::<f64>() - 0.5 * (f[0] + f[n - 1]);
    // forward differences at the left end, backward at the right end
    let mut fwd: Vec<f64> = f[..=CORR.len()].to_vec();
    let mut bwd: Vec<f64> = f[n - 1 - CORR.len()..].iter().rev().copied().collect();
    let mut corr = 0.0;
    for (k, &ck) in CORR.iter().enumerate() {
        for i in 0..fwd.len() - 1 - k {
            fwd[i] = fwd[i + 1] - fwd[i];
            bwd[i] -= bwd[i + 1];
        }
        // k = 0: Δf₀ and ∇f_n enter with opposite signs; signs alternate with order
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        corr += ck * (bwd[0] + sign * fwd[0]);
    }
    h * (trap + corr)
}
