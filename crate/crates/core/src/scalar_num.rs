//! Deterministic one-dimensional numerics: the real root of the depressed
//! cubic `k^3 + k = a`, bracketed minimization and bracketed root finding.

use crate::{Result, SearchError};

/// Default absolute tolerance on arguments.
pub const ARG_TOL: f64 = 1e-10;

/// Default tolerance on residuals.
pub const RESIDUAL_TOL: f64 = 1e-12;

/// Number of uniform samples used to locate the best sub-bracket before
/// refinement. The objectives minimized in this crate are not known to be
/// unimodal on their full domain.
pub const SCAN_POINTS: usize = 512;

/// Relative closeness under which a second scan-local minimum is reported
/// as competing with the best one.
pub const COMPETING_REL: f64 = 1e-9;

const MAX_BRENT_ITERATIONS: usize = 500;
const MAX_ROOT_ITERATIONS: usize = 400;
const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Closed interval `[lo, hi]` with an absolute tolerance on the argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, tol: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(SearchError::domain(format!(
                "bracket requires finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        if !(tol > 0.0) {
            return Err(SearchError::domain(format!("bracket tolerance must be positive, got {tol}")));
        }
        Ok(Self { lo, hi, tol })
    }

    /// Bracket with the default argument tolerance [`ARG_TOL`].
    pub fn with_default_tol(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, ARG_TOL)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Outcome of [`minimize_scalar`].
#[derive(Debug, Clone, PartialEq)]
pub struct MinResult {
    pub argmin: f64,
    pub value: f64,
    pub evaluations: usize,
    /// Abscissae of other scan-local minima whose value is within
    /// [`COMPETING_REL`] of the best one. Usually empty.
    pub competing: Vec<f64>,
}

/// Unique positive root of `k^3 + k = a` for `a > 0`.
///
/// Evaluates Cardano's formula for the depressed cubic, with the cancelling
/// second cube root rewritten as `(1/27) / (s + a/2)`, then applies two
/// Newton steps.
pub fn cardano_depressed_root(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(SearchError::domain(format!(
            "depressed cubic needs a finite a > 0, got {a}"
        )));
    }
    let half = 0.5 * a;
    let s = (half * half + 1.0 / 27.0).sqrt();
    let upper = s + half;
    // s - a/2 loses all its digits for large a.
    let lower = (1.0 / 27.0) / upper;
    let mut k = upper.cbrt() - lower.cbrt();
    for _ in 0..2 {
        let residual = k * k * k + k - a;
        k -= residual / (3.0 * k * k + 1.0);
    }
    Ok(k)
}

/// Minimizes `f` on the bracket.
///
/// The bracket is first sampled at [`SCAN_POINTS`] uniform abscissae; the
/// best sample and its two neighbours form the sub-bracket that Brent's
/// method (golden section with parabolic interpolation) then refines.
/// A non-finite evaluation anywhere is an error carrying the abscissa.
pub fn minimize_scalar<F>(mut f: F, bracket: &Bracket) -> Result<MinResult>
where
    F: FnMut(f64) -> f64,
{
    let mut evaluations = 0usize;
    let mut eval = |x: f64| -> Result<f64> {
        evaluations += 1;
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(SearchError::NonFinite { abscissa: x, value: v })
        }
    };

    let n = SCAN_POINTS;
    let step = bracket.width() / (n - 1) as f64;
    let xs: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { bracket.hi } else { bracket.lo + step * i as f64 })
        .collect();
    let mut fs = Vec::with_capacity(n);
    for &x in &xs {
        fs.push(eval(x)?);
    }
    let best = fs
        .iter()
        .enumerate()
        .fold(0, |b, (i, &v)| if v < fs[b] { i } else { b });

    let competing = (0..n)
        .filter(|&i| i + 1 < best || i > best + 1)
        .filter(|&i| {
            let left = if i == 0 { f64::INFINITY } else { fs[i - 1] };
            let right = if i + 1 == n { f64::INFINITY } else { fs[i + 1] };
            fs[i] <= left && fs[i] <= right && fs[i] <= fs[best] + COMPETING_REL * fs[best].abs()
        })
        .map(|i| xs[i])
        .collect();

    let a = xs[best.saturating_sub(1)];
    let b = xs[(best + 1).min(n - 1)];
    let (argmin, value) = brent(&mut eval, a, b, xs[best], fs[best], bracket.tol)?;
    Ok(MinResult {
        argmin,
        value,
        evaluations,
        competing,
    })
}

/// Brent's minimizer on `[a, b]` starting from the known point `(x, fx)`.
fn brent<F>(f: &mut F, mut a: f64, mut b: f64, x0: f64, f0: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut x, mut w, mut v) = (x0, x0, x0);
    let (mut fx, mut fw, mut fv) = (f0, f0, f0);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..MAX_BRENT_ITERATIONS {
        let xm = 0.5 * (a + b);
        let tol1 = tol / 3.0 + 4.0 * f64::EPSILON * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if xm >= x { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u)?;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok((x, fx))
}

/// Root of `f` on a bracket with a sign change.
///
/// Alternates bisection with secant steps (the secant candidate is used only
/// when it falls strictly inside the current bracket), so the bracket at
/// least halves every two iterations. Stops when `|f(x)|` drops below
/// [`RESIDUAL_TOL`] or the bracket is narrower than `bracket.tol`.
pub fn find_root<F>(mut f: F, bracket: &Bracket) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_nan() {
            Err(SearchError::NonFinite { abscissa: x, value: v })
        } else {
            Ok(v)
        }
    };
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let mut f_lo = eval(lo)?;
    let mut f_hi = eval(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(SearchError::Bracket {
            lo,
            hi,
            f_lo,
            f_hi,
        });
    }

    let mut best = if f_lo.abs() < f_hi.abs() { lo } else { hi };
    for iteration in 0..MAX_ROOT_ITERATIONS {
        let mut x = 0.5 * (lo + hi);
        if iteration % 2 == 1 && f_lo.is_finite() && f_hi.is_finite() {
            let secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
            if secant > lo && secant < hi {
                x = secant;
            }
        }
        let fx = eval(x)?;
        best = x;
        if fx.abs() <= RESIDUAL_TOL || fx == 0.0 {
            break;
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        if hi - lo <= bracket.tol {
            best = if f_lo.abs() < f_hi.abs() { lo } else { hi };
            break;
        }
    }
    Ok(best)
}

/// Minimizes `f` on `[lo, inf)` where `f` is known to diverge at both ends.
///
/// The upper end starts at `start_hi` and doubles until `f` increases on two
/// consecutive doublings; the bracket `[lo, 2 * hi]` is then handed to
/// [`minimize_scalar`].
pub fn minimize_open_right<F>(mut f: F, lo: f64, start_hi: f64, tol: f64) -> Result<MinResult>
where
    F: FnMut(f64) -> f64,
{
    if !(start_hi > lo) {
        return Err(SearchError::domain(format!(
            "upper start {start_hi} must exceed lower end {lo}"
        )));
    }
    let mut hi = start_hi;
    let mut extra = 0usize;
    loop {
        let f1 = f(hi);
        let f2 = f(2.0 * hi);
        let f4 = f(4.0 * hi);
        extra += 3;
        if f2 > f1 && f4 > f2 {
            break;
        }
        hi *= 2.0;
        if !hi.is_finite() || hi > 1e150 {
            return Err(SearchError::Consistency(format!(
                "objective did not grow towards +inf (last upper end {hi})"
            )));
        }
    }
    let bracket = Bracket::new(lo, 2.0 * hi, tol)?;
    let mut result = minimize_scalar(f, &bracket)?;
    result.evaluations += extra;
    Ok(result)
}
