//! Finite differences and quadrature on a uniform grid.
//!
//! Both ends of every grid used here are symmetry points of the sampled
//! function, so end nodes take ghost values by even or odd reflection and
//! every node gets the same centered second-order stencil.

/// Reflection behavior of a sampled function about both grid ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    /// `f(a - x) = f(a + x)` at each end `a`.
    Even,
    /// `f(a - x) = -f(a + x)` at each end `a`.
    Odd,
}

/// Sample at index `i`, which may lie up to two nodes outside `[0, n)`.
#[inline]
fn at(f: &[f64], i: isize, parity: Parity) -> f64 {
    let n = f.len() as isize;
    let sign = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    if i < 0 {
        sign * f[(-i) as usize]
    } else if i >= n {
        sign * f[(2 * (n - 1) - i) as usize]
    } else {
        f[i as usize]
    }
}

/// First derivative at node `i`.
#[inline]
pub fn d1_at(f: &[f64], i: usize, dx: f64, parity: Parity) -> f64 {
    let i = i as isize;
    (at(f, i + 1, parity) - at(f, i - 1, parity)) / (2.0 * dx)
}

/// Second derivative at node `i`.
#[inline]
pub fn d2_at(f: &[f64], i: usize, dx: f64, parity: Parity) -> f64 {
    let i = i as isize;
    (at(f, i + 1, parity) - 2.0 * at(f, i, parity) + at(f, i - 1, parity)) / (dx * dx)
}

/// Fourth derivative at node `i`.
#[inline]
pub fn d4_at(f: &[f64], i: usize, dx: f64, parity: Parity) -> f64 {
    let i = i as isize;
    (at(f, i + 2, parity) - 4.0 * at(f, i + 1, parity) + 6.0 * at(f, i, parity)
        - 4.0 * at(f, i - 1, parity)
        + at(f, i - 2, parity))
        / (dx * dx * dx * dx)
}

pub fn d1(f: &[f64], dx: f64, parity: Parity) -> Vec<f64> {
    (0..f.len()).map(|i| d1_at(f, i, dx, parity)).collect()
}

pub fn d2(f: &[f64], dx: f64, parity: Parity) -> Vec<f64> {
    (0..f.len()).map(|i| d2_at(f, i, dx, parity)).collect()
}

/// Composite trapezoid rule.
pub fn trapezoid(f: &[f64], dx: f64) -> f64 {
    let n = f.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = f[1..n - 1].iter().sum();
    dx * (inner + 0.5 * (f[0] + f[n - 1]))
}

/// Running trapezoid integral, starting from zero at the first node.
pub fn cumulative_trapezoid(f: &[f64], dx: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(f.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in f.windows(2) {
        acc += 0.5 * dx * (w[0] + w[1]);
        out.push(acc);
    }
    out
}
