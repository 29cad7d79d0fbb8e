//! Small numerical kernels: adaptive Simpson quadrature, bisection and
//! sign-change scanning on a grid.

/// Recursion cap for [`adaptive_simpson`]; 2⁻⁴⁰ of the interval is far below
/// anything the callers need.
const MAX_DEPTH: u32 = 40;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn refine<F: Fn(f64) -> f64>(f: &F, panel: Panel, tol: f64, depth: u32) -> f64 {
    let Panel { a, b, fa, fm, fb, whole } = panel;
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    refine(
        f,
        Panel { a, b: m, fa, fm: flm, fb: fm, whole: left },
        0.5 * tol,
        depth - 1,
    ) + refine(
        f,
        Panel { a: m, b, fa: fm, fm: frm, fb, whole: right },
        0.5 * tol,
        depth - 1,
    )
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `tol`. The integrand should be smooth on the interval; split at kinks.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if b == a {
        return 0.0;
    }
    // Seed with four panels so a symmetric integrand cannot fool the first
    // comparison.
    let pieces = 4;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == pieces { b } else { lo + h };
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = simpson(lo, hi, fa, fm, fb);
            refine(
                &f,
                Panel { a: lo, b: hi, fa, fm, fb, whole },
                tol / pieces as f64,
                MAX_DEPTH,
            )
        })
        .sum()
}

/// Integrates over consecutive pieces `[points[i], points[i+1]]`, giving each
/// piece a share of the tolerance proportional to its length.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: f64) -> f64 {
    let (Some(first), Some(last)) = (points.first(), points.last()) else {
        return 0.0;
    };
    let span = last - first;
    if span <= 0.0 {
        return 0.0;
    }
    points
        .windows(2)
        .map(|w| adaptive_simpson(&f, w[0], w[1], tol * (w[1] - w[0]) / span))
        .sum()
}

/// Bisects a predicate that is `false` at `lo` and `true` at `hi` until the
/// bracket is narrower than `tol`. Returns the final `(lo, hi)`.
pub fn bisect<P: FnMut(f64) -> bool>(mut pred: P, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    while (hi - lo).abs() > tol {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Sign with a dead zone: values within `zero` of 0 count as 0.
pub fn sign_with_dead_zone(x: f64, zero: f64) -> i8 {
    if x > zero {
        1
    } else if x < -zero {
        -1
    } else {
        0
    }
}

/// Maximal sub-intervals of `[grid[0], grid[last]]` on which `f > zero`.
///
/// `f` is sampled on `grid`; each transition between a positive and a
/// non-positive sample is located by bisection to `time_tol`.
pub fn positive_intervals<F: Fn(f64) -> f64>(
    f: F,
    grid: &[f64],
    zero: f64,
    time_tol: f64,
) -> Vec<(f64, f64)> {
    let positive = |t: f64| f(t) > zero;
    let mut intervals = Vec::new();
    let mut start: Option<f64> = None;
    let mut prev_positive = false;
    for (i, &t) in grid.iter().enumerate() {
        let now = positive(t);
        if i == 0 {
            if now {
                start = Some(t);
            }
        } else if now != prev_positive {
            let t_prev = grid[i - 1];
            if now {
                let (_, hi) = bisect(positive, t_prev, t, time_tol);
                start = Some(hi);
            } else {
                let (lo, _) = bisect(|s| !positive(s), t_prev, t, time_tol);
                if let Some(s) = start.take() {
                    intervals.push((s, lo));
                }
            }
        }
        prev_positive = now;
    }
    if let (Some(s), Some(&end)) = (start, grid.last()) {
        intervals.push((s, end));
    }
    intervals
}
