//! Real roots of univariate polynomials of degree at most four.
//!
//! The solver uses the classical closed forms (quadratic formula, Cardano,
//! Ferrari) and then polishes every candidate with Newton steps on the input
//! polynomial. Closed forms are fragile near repeated roots, which show up at
//! exactly the tangency configurations the intersection predicate cares
//! about, so polishing plus a sign-change sweep between critical points backs
//! the analytic path.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RootsError {
    #[error("identically zero polynomial")]
    IdenticallyZero,
}

/// Coefficients of `a x^4 + b x^3 + c x^2 + d x + e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poly4 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

/// Leading coefficients below this fraction of the largest coefficient are
/// treated as zero when detecting the effective degree.
const DEGREE_COLLAPSE_REL: f64 = 1e-12;

/// Roots closer than this (relative to their size) are merged.
const MERGE_REL: f64 = 1e-8;

impl Poly4 {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64) -> Self {
        Self { a, b, c, d, e }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (((self.a * x + self.b) * x + self.c) * x + self.d) * x + self.e
    }

    pub fn eval_deriv(&self, x: f64) -> f64 {
        ((4.0 * self.a * x + 3.0 * self.b) * x + 2.0 * self.c) * x + self.d
    }

    /// Magnitude of the terms at `x`, with each term weighted at least at
    /// unit scale; the natural scale for residual checks. Without the floor a
    /// root at the origin of a polynomial with vanishing trailing
    /// coefficients would be held to an impossible relative tolerance.
    pub fn scale_at(&self, x: f64) -> f64 {
        let ax = x.abs().max(1.0);
        ((((self.a.abs() * ax + self.b.abs()) * ax + self.c.abs()) * ax + self.d.abs()) * ax + self.e.abs()).max(f64::MIN_POSITIVE)
    }

    fn coeffs(&self) -> [f64; 5] {
        [self.a, self.b, self.c, self.d, self.e]
    }
}

fn closed_form(coeffs: &[f64]) -> Vec<f64> {
    match coeffs.len() - 1 {
        0 => Vec::new(),
        1 => vec![-coeffs[1] / coeffs[0]],
        2 => quadratic_roots(coeffs[0], coeffs[1], coeffs[2]),
        3 => cubic_roots(coeffs[0], coeffs[1], coeffs[2], coeffs[3]),
        _ => quartic_roots(coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4]),
    }
}

/// All real roots of `p`, ascending and deduplicated; repeated roots are
/// returned once. Every returned root has residual `|p(r)| <= tol * scale`,
/// where the scale is the term magnitude of `p` at `r`.
///
/// A leading coefficient below `1e-12` of the largest coefficient is also
/// solved with the degree collapsed: near-degenerate leading terms poison the
/// closed forms, while the collapsed polynomial plus Newton polishing on the
/// full one recovers the moderate roots. Both root sets are kept (large
/// genuine roots make the constant term dwarf the leading one without any
/// degeneracy), and a sign-change sweep between the critical points backstops
/// whatever the closed forms dropped.
pub fn real_roots(p: &Poly4, tol: f64) -> Result<Vec<f64>, RootsError> {
    let coeffs = p.coeffs();
    let max_c = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if max_c == 0.0 {
        return Err(RootsError::IdenticallyZero);
    }

    let mut exact_lead = 0usize;
    while exact_lead < 4 && coeffs[exact_lead] == 0.0 {
        exact_lead += 1;
    }
    let exact = &coeffs[exact_lead..];

    let cutoff = DEGREE_COLLAPSE_REL * max_c;
    let mut soft_lead = 0usize;
    while soft_lead < 4 && coeffs[soft_lead].abs() <= cutoff {
        soft_lead += 1;
    }

    let mut roots = closed_form(exact);
    if soft_lead > exact_lead {
        roots.extend(closed_form(&coeffs[soft_lead..]));
    }

    for r in roots.iter_mut() {
        *r = polish(p, *r);
    }

    if exact.len() >= 3 {
        sweep_missing_roots(p, exact, &mut roots);
    }

    roots.retain(|r| r.is_finite() && p.eval(*r).abs() <= tol * p.scale_at(*r));
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    merge_close(&mut roots, p);
    Ok(roots)
}

fn merge_close(roots: &mut Vec<f64>, p: &Poly4) {
    let mut out: Vec<f64> = Vec::with_capacity(roots.len());
    for &r in roots.iter() {
        match out.last_mut() {
            Some(last) if (r - *last).abs() <= MERGE_REL * 1.0_f64.max(r.abs()) => {
                if p.eval(r).abs() < p.eval(*last).abs() {
                    *last = r;
                }
            }
            _ => out.push(r),
        }
    }
    *roots = out;
}

fn polish(p: &Poly4, x0: f64) -> f64 {
    let mut x = x0;
    for _ in 0..60 {
        let f = p.eval(x);
        if f == 0.0 {
            break;
        }
        let d = p.eval_deriv(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - f / d;
        if !next.is_finite() {
            break;
        }
        if (next - x).abs() <= f64::EPSILON * x.abs().max(1.0) {
            x = next;
            break;
        }
        // Bail out if Newton starts diverging.
        if p.eval(next).abs() > 4.0 * f.abs() {
            break;
        }
        x = next;
    }
    x
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let mut disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        // Keep tangent configurations: a barely negative discriminant is a
        // double root up to rounding; the residual filter rejects real misses.
        if disc > -1e-10 * (b * b).max((4.0 * a * c).abs()).max(1.0) {
            disc = 0.0;
        } else {
            return Vec::new();
        }
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + sq.copysign(if b == 0.0 { 1.0 } else { b }));
    let mut out = Vec::with_capacity(2);
    if q != 0.0 {
        out.push(q / a);
        out.push(c / q);
    } else {
        // b and disc both ~0: symmetric pair around the vertex.
        out.push(sq / (2.0 * a));
        out.push(-sq / (2.0 * a));
    }
    out
}

fn cubic_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    // Monic depressed form x = y - b/(3a):  y^3 + p y + q.
    let b = b / a;
    let c = c / a;
    let d = d / a;
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    let disc = 0.25 * q * q + p * p * p / 27.0;
    let mut ys = Vec::with_capacity(3);
    if disc > 0.0 {
        let s = disc.sqrt();
        ys.push((-0.5 * q + s).cbrt() + (-0.5 * q - s).cbrt());
    } else if p == 0.0 {
        // disc <= 0 with p = 0 forces q = 0: triple root.
        ys.push(0.0);
    } else {
        // Three real roots: trigonometric form.
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        for k in 0..3 {
            ys.push(m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos());
        }
    }
    ys.into_iter().map(|y| y - shift).collect()
}

fn quartic_roots(a: f64, b: f64, c: f64, d: f64, e: f64) -> Vec<f64> {
    // Monic depressed form x = y - b/(4a): y^4 + p y^2 + q y + r.
    let b = b / a;
    let c = c / a;
    let d = d / a;
    let e = e / a;
    let shift = b / 4.0;
    let b2 = b * b;
    let p = c - 3.0 * b2 / 8.0;
    let q = d - b * c / 2.0 + b2 * b / 8.0;
    let r = e - b * d / 4.0 + b2 * c / 16.0 - 3.0 * b2 * b2 / 256.0;

    let scale = p.abs().max(q.abs()).max(r.abs()).max(1.0);
    let mut ys: Vec<f64> = Vec::with_capacity(4);
    if q.abs() <= 1e-14 * scale {
        // Biquadratic: z^2 + p z + r with y = ±sqrt(z).
        for z in quadratic_roots(1.0, p, r) {
            if z >= 0.0 {
                ys.push(z.sqrt());
                ys.push(-z.sqrt());
            } else if z > -1e-12 * scale {
                ys.push(0.0);
            }
        }
    } else {
        // Ferrari: pick the largest real root m of the resolvent
        //   8 m^3 + 8 p m^2 + (2 p^2 - 8 r) m - q^2 = 0  (m > 0 when q != 0),
        // giving the factorization
        //   y^4 + p y^2 + q y + r = (y^2 - s y + beta)(y^2 + s y + gamma),
        // s = sqrt(2m), beta = p/2 + m + q/(2s), gamma = p/2 + m - q/(2s).
        let ms = cubic_roots(8.0, 8.0 * p, 2.0 * p * p - 8.0 * r, -q * q);
        let m = ms.into_iter().fold(f64::NEG_INFINITY, f64::max);
        if m.is_finite() && m > 0.0 {
            let s = (2.0 * m).sqrt();
            let beta = p / 2.0 + m + q / (2.0 * s);
            let gamma = p / 2.0 + m - q / (2.0 * s);
            ys.extend(quadratic_roots(1.0, -s, beta));
            ys.extend(quadratic_roots(1.0, s, gamma));
        }
    }
    ys.into_iter().map(|y| y - shift).collect()
}

/// Cauchy root bound plus a sign-change scan over the intervals cut by the
/// critical points; bisects any bracketed root the closed forms missed.
/// Works on the exact-degree polynomial; the signs beyond the root bound come
/// from the leading coefficient, never from evaluation, so huge bounds cannot
/// overflow.
fn sweep_missing_roots(p: &Poly4, eff: &[f64], roots: &mut Vec<f64>) {
    let lead = eff[0];
    let n = eff.len() - 1;
    let bound = 1.0 + eff[1..].iter().map(|c| (c / lead).abs()).fold(0.0_f64, f64::max);
    let bound = bound.min(1e150);

    let mut cuts = match n {
        4 => cubic_roots(4.0 * eff[0], 3.0 * eff[1], 2.0 * eff[2], eff[3]),
        3 => quadratic_roots(3.0 * eff[0], 2.0 * eff[1], eff[2]),
        2 => vec![-eff[1] / (2.0 * eff[0])],
        _ => Vec::new(),
    };
    cuts.retain(|c| c.is_finite() && c.abs() < bound);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let eval = |x: f64| eff.iter().fold(0.0, |acc, c| acc * x + c);
    // Segment endpoints and their signs: beyond the root bound the leading
    // term dominates.
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(cuts.len() + 2);
    let sign_at_neg_inf = if n.is_multiple_of(2) { lead } else { -lead };
    points.push((-bound, sign_at_neg_inf));
    for &c in &cuts {
        points.push((c, eval(c)));
    }
    points.push((bound, lead));

    for w in points.windows(2) {
        let ((lo, flo), (hi, fhi)) = (w[0], w[1]);
        if flo == 0.0 {
            if !roots.iter().any(|r| (r - lo).abs() <= 1e-9 * lo.abs().max(1.0)) {
                roots.push(polish(p, lo));
            }
            continue;
        }
        if fhi == 0.0 || flo.signum() == fhi.signum() {
            continue;
        }
        let covered = roots
            .iter()
            .any(|r| *r >= lo - 1e-9 * lo.abs().max(1.0) && *r <= hi + 1e-9 * hi.abs().max(1.0));
        if covered {
            continue;
        }
        let mut a = lo;
        let mut b = hi;
        let mut fa = flo;
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let fm = eval(mid);
            if fm == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if fa.signum() == fm.signum() {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        roots.push(polish(p, 0.5 * (a + b)));
    }
}
