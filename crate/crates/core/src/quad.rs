//! Adaptive composite Gauss-Kronrod quadrature.
//!
//! One engine serves both the eigen-data integrals and the profile
//! diagnostics: a 7-15 Gauss-Kronrod rule per interval, with interval
//! bisection wherever the embedded error estimate exceeds its share of the
//! requested tolerance. `integrate_cells` accepts a pre-partitioned axis so
//! integrands built from a piecewise interpolant can be split along their
//! native grid first.

/// Kronrod abscissae on [0, 1] side of the symmetric 15-point rule.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss-7 weights for the odd-index abscissae of `XGK`.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One 7-15 pass over [a, b]: returns (kronrod value, |gauss - kronrod|,
/// kronrod value of |f|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut res_abs = WGK[7] * fc.abs();
    for j in 0..7 {
        let x = h * XGK[j];
        let (fa, fb) = (f(c - x), f(c + x));
        kronrod += WGK[j] * (fa + fb);
        res_abs += WGK[j] * (fa.abs() + fb.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (fa + fb);
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs(), res_abs * h)
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
    budget: &mut i64,
) -> f64 {
    let (value, err, _) = gk15(f, a, b);
    *budget -= 1;
    if err <= tol
        || depth >= 48
        || *budget <= 0
        || (b - a).abs() < f64::EPSILON * (a.abs() + b.abs())
    {
        return value;
    }
    let c = 0.5 * (a + b);
    adapt(f, a, c, 0.5 * tol, depth + 1, budget) + adapt(f, c, b, 0.5 * tol, depth + 1, budget)
}

/// Integral of `f` over [a, b] to relative tolerance `rel_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    integrate_cells(f, &[a, b], rel_tol)
}

/// Integral of `f` over the partitioned axis `edges` (ascending) to relative
/// tolerance `rel_tol`; each cell is refined independently. The tolerance is
/// taken relative to a first-pass integral of |f|, so near-cancelling
/// integrands (orthogonality checks) terminate too.
pub fn integrate_cells<F: Fn(f64) -> f64>(f: F, edges: &[f64], rel_tol: f64) -> f64 {
    if edges.len() < 2 {
        return 0.0;
    }
    // first pass for the scale of the result
    let mut rough = 0.0;
    let mut rough_abs = 0.0;
    for w in edges.windows(2) {
        let (v, _, vabs) = gk15(&f, w[0], w[1]);
        rough += v;
        rough_abs += vabs;
    }
    let scale = rough.abs().max(rough_abs).max(f64::MIN_POSITIVE);
    let total = edges[edges.len() - 1] - edges[0];
    let mut budget: i64 = 200_000;
    let mut sum = 0.0;
    for w in edges.windows(2) {
        let share = (w[1] - w[0]) / total;
        sum += adapt(
            &f,
            w[0],
            w[1],
            rel_tol * scale * share.max(1e-12),
            0,
            &mut budget,
        );
    }
    sum
}
