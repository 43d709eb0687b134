//! Gauss–Legendre rules and adaptive Gauss–Kronrod integration of
//! vector-valued integrands.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use num_complex::Complex64;

/// Values that can be accumulated by the quadrature rules.
pub trait QuadValue: Clone {
    fn zero() -> Self;
    /// `self += a * x`
    fn axpy(&mut self, a: f64, x: &Self);
    /// Maximum entrywise distance, used for error estimates.
    fn dist(&self, other: &Self) -> f64;
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        *self += x * a;
    }
    fn dist(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
}

impl<const N: usize> QuadValue for [Complex64; N] {
    fn zero() -> Self {
        [Complex64::new(0.0, 0.0); N]
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        for (s, v) in self.iter_mut().zip(x) {
            *s += v * a;
        }
    }
    fn dist(&self, other: &Self) -> f64 {
        self.iter().zip(other).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl<const R: usize, const C: usize> QuadValue for Mat<R, C> {
    fn zero() -> Self {
        Mat::zeros()
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        self.add_scaled(x, Complex64::new(a, 0.0));
    }
    fn dist(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }
}

impl<A: QuadValue, B: QuadValue> QuadValue for (A, B) {
    fn zero() -> Self {
        (A::zero(), B::zero())
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        self.0.axpy(a, &x.0);
        self.1.axpy(a, &x.1);
    }
    fn dist(&self, other: &Self) -> f64 {
        self.0.dist(&other.0).max(self.1.dist(&other.1))
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], computed by Newton's method
/// on the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    // Legendre P_n(x) and its derivative.
    let legendre = |x: f64| {
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        if n == 1 {
            (x, 1.0)
        } else {
            (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
        }
    };
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// The 15 Kronrod nodes on `[a, b]` with their weights.
pub fn kronrod_nodes(a: f64, b: f64) -> [(f64, f64); 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); 15];
    for j in 0..7 {
        out[2 * j] = (c - h * XGK[j], h * WGK[j]);
        out[2 * j + 1] = (c + h * XGK[j], h * WGK[j]);
    }
    out[14] = (c, h * WGK[7]);
    out
}

fn gk15<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = T::zero();
    let mut gauss = T::zero();
    let fc = f(c);
    kron.axpy(WGK[7] * h, &fc);
    gauss.axpy(WG[3] * h, &fc);
    for j in 0..7 {
        let f1 = f(c - h * XGK[j]);
        let f2 = f(c + h * XGK[j]);
        kron.axpy(WGK[j] * h, &f1);
        kron.axpy(WGK[j] * h, &f2);
        if j % 2 == 1 {
            gauss.axpy(WG[j / 2] * h, &f1);
            gauss.axpy(WG[j / 2] * h, &f2);
        }
    }
    let err = kron.dist(&gauss);
    (kron, err)
}

/// A parameter interval integrated as one piece of a larger integral.
#[derive(Clone, Copy, Debug)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
    /// Number of equal panels to start from.
    pub initial_panels: usize,
}

#[derive(Clone, Debug)]
pub struct PanelRecord {
    pub segment: usize,
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Debug)]
pub struct Adaptive<T> {
    pub value: T,
    pub error: f64,
    pub panels: Vec<PanelRecord>,
}

/// Globally adaptive bisection with the embedded 7/15-point Gauss–Kronrod
/// pair. `f(segment, t)` evaluates the integrand on the given segment.
/// Refinement stops once the summed |K15 − G7| differences fall below
/// `tolerance`; exceeding `max_panels` is reported with the achieved
/// estimate.
pub fn integrate_adaptive<T: QuadValue>(
    segments: &[Segment],
    mut f: impl FnMut(usize, f64) -> T,
    tolerance: f64,
    max_panels: usize,
) -> Result<Adaptive<T>> {
    struct Panel<T> {
        seg: usize,
        a: f64,
        b: f64,
        value: T,
        err: f64,
    }
    let mut panels: Vec<Panel<T>> = Vec::new();
    for (s, seg) in segments.iter().enumerate() {
        if seg.b <= seg.a {
            continue;
        }
        let n = seg.initial_panels.max(1);
        let w = (seg.b - seg.a) / n as f64;
        for k in 0..n {
            let a = seg.a + k as f64 * w;
            let b = if k + 1 == n { seg.b } else { a + w };
            let (value, err) = gk15(&mut |t| f(s, t), a, b);
            panels.push(Panel { seg: s, a, b, value, err });
        }
    }
    loop {
        let total: f64 = panels.iter().map(|p| p.err).sum();
        if total <= tolerance {
            break;
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        let span = segments[p.seg].b - segments[p.seg].a;
        if panels.len() + 2 > max_panels || (p.b - p.a) < 1e-13 * span {
            let estimate = total;
            return Err(Error::QuadratureTolerance { tolerance, estimate });
        }
        let seg = p.seg;
        let (v1, e1) = gk15(&mut |t| f(seg, t), p.a, mid);
        let (v2, e2) = gk15(&mut |t| f(seg, t), mid, p.b);
        panels.push(Panel { seg, a: p.a, b: mid, value: v1, err: e1 });
        panels.push(Panel { seg, a: mid, b: p.b, value: v2, err: e2 });
    }
    let mut value = T::zero();
    let mut error = 0.0;
    let mut records = Vec::with_capacity(panels.len());
    panels.sort_by(|x, y| (x.seg, x.a).partial_cmp(&(y.seg, y.a)).expect("finite panel bounds"));
    for p in &panels {
        value.axpy(1.0, &p.value);
        error += p.err;
        records.push(PanelRecord { segment: p.seg, a: p.a, b: p.b });
    }
    Ok(Adaptive { value, error, panels: records })
}

/// Trapezoid rule on the full circle: `2π/n · Σ f(2πk/n)`.
pub fn periodic_trapezoid<T: QuadValue>(n: usize, mut f: impl FnMut(f64) -> T) -> T {
    let mut acc = T::zero();
    let w = std::f64::consts::TAU / n as f64;
    for k in 0..n {
        acc.axpy(w, &f(w * k as f64));
    }
    acc
}
