//! Small deterministic search primitives shared across the crate: golden-section
//! refinement on an interval and a 2-D Nelder-Mead descent. Both are plain
//! f64 routines with no randomness; callers supply every start point.

/// Golden-section search for the maximum of `f` on `[a, b]`.
/// Returns `(x_max, f_max)` once the bracket is shorter than `tol`.
pub(crate) fn golden_section_max<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

pub(crate) struct NmOutcome {
    pub x: [f64; 2],
    pub value: f64,
    pub converged: bool,
}

/// Nelder-Mead minimization in two real variables from a single start point.
/// `scale` sets the initial simplex edge; convergence is declared when the
/// simplex diameter falls below `tol`.
pub(crate) fn nelder_mead_min2<F: FnMut([f64; 2]) -> f64>(
    mut f: F,
    start: [f64; 2],
    scale: f64,
    tol: f64,
    max_iter: usize,
) -> NmOutcome {
    let h = scale.abs().max(1e-6);
    let mut pts = [
        start,
        [start[0] + h, start[1]],
        [start[0], start[1] + h],
    ];
    let mut vals = [f(pts[0]), f(pts[1]), f(pts[2])];
    let mut converged = false;

    for _ in 0..max_iter {
        // order ascending by value
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap_or(std::cmp::Ordering::Equal));
        let (best, mid, worst) = (idx[0], idx[1], idx[2]);

        let diam = pts
            .iter()
            .flat_map(|p| {
                pts.iter()
                    .map(move |q| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt())
            })
            .fold(0.0f64, f64::max);
        if diam <= tol {
            converged = true;
            break;
        }

        let centroid = [
            (pts[best][0] + pts[mid][0]) / 2.0,
            (pts[best][1] + pts[mid][1]) / 2.0,
        ];
        let refl = [
            2.0 * centroid[0] - pts[worst][0],
            2.0 * centroid[1] - pts[worst][1],
        ];
        let f_refl = f(refl);

        if f_refl < vals[best] {
            let exp = [
                centroid[0] + 2.0 * (refl[0] - centroid[0]),
                centroid[1] + 2.0 * (refl[1] - centroid[1]),
            ];
            let f_exp = f(exp);
            if f_exp < f_refl {
                pts[worst] = exp;
                vals[worst] = f_exp;
            } else {
                pts[worst] = refl;
                vals[worst] = f_refl;
            }
        } else if f_refl < vals[mid] {
            pts[worst] = refl;
            vals[worst] = f_refl;
        } else {
            let contr = [
                centroid[0] + 0.5 * (pts[worst][0] - centroid[0]),
                centroid[1] + 0.5 * (pts[worst][1] - centroid[1]),
            ];
            let f_contr = f(contr);
            if f_contr < vals[worst] {
                pts[worst] = contr;
                vals[worst] = f_contr;
            } else {
                // shrink toward the best vertex
                for k in 0..3 {
                    if k == best {
                        continue;
                    }
                    pts[k] = [
                        pts[best][0] + 0.5 * (pts[k][0] - pts[best][0]),
                        pts[best][1] + 0.5 * (pts[k][1] - pts[best][1]),
                    ];
                    vals[k] = f(pts[k]);
                }
            }
        }
    }

    let mut bi = 0;
    for k in 1..3 {
        if vals[k] < vals[bi] {
            bi = k;
        }
    }
    NmOutcome {
        x: pts[bi],
        value: vals[bi],
        converged,
    }
}

/// Bisection for the root of a monotone increasing function on `[lo, hi]`,
/// assuming `f(lo) <= 0 <= f(hi)`. Returns the left edge of the final bracket.
pub(crate) fn bisect_increasing<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    iters: usize,
) -> f64 {
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
