use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Kronrod 15-point nodes and weights; every second node carries a Gauss 7-point weight.
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

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss-Kronrod (G7/K15) integration.
///
/// `breakpoints` must be increasing; each gap is an initial panel. The piece
/// with the largest error estimate is bisected until the summed estimate falls
/// below `abs_tol` or `max_pieces` is reached. Returns `(integral, error_estimate)`.
pub fn adaptive_gauss_kronrod<F>(mut f: F, breakpoints: &[f64], abs_tol: f64, max_pieces: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut heap = BinaryHeap::new();
    let mut total_err = 0.0;
    for w in breakpoints.windows(2) {
        let (value, err) = gk15(&mut f, w[0], w[1]);
        total_err += err;
        heap.push(Piece { a: w[0], b: w[1], value, err });
    }
    while total_err > abs_tol && heap.len() < max_pieces {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        total_err += e1 + e2 - worst.err;
        heap.push(Piece { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, err: e2 });
    }
    let mut sum = 0.0;
    let mut err = 0.0;
    for p in heap.iter() {
        sum += p.value;
        err += p.err;
    }
    (sum, err)
}

/// Composite Simpson rule on uniformly spaced samples. An odd number of
/// intervals gets a 3/8 rule on the final three.
pub fn simpson_uniform(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * h * (values[0] + values[1]);
    }
    let intervals = n - 1;
    let simpson_end = if intervals % 2 == 0 { n - 1 } else { n - 4 };
    let mut sum = 0.0;
    let mut i = 0;
    while i + 2 <= simpson_end {
        sum += values[i] + 4.0 * values[i + 1] + values[i + 2];
        i += 2;
    }
    let mut total = sum * h / 3.0;
    if intervals % 2 == 1 {
        let j = n - 4;
        total += 3.0 * h / 8.0 * (values[j] + 3.0 * values[j + 1] + 3.0 * values[j + 2] + values[j + 3]);
    }
    total
}

/// Composite trapezoid rule on uniformly spaced samples.
pub fn trapezoid_uniform(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => h * (values[1..n - 1].iter().sum::<f64>() + 0.5 * (values[0] + values[n - 1])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_lorentzian() {
        let (v, _) = adaptive_gauss_kronrod(|w| 1.0 / (w * w + 1e-4), &[0.0, 1.0, 100.0], 1e-12, 10_000);
        let exact = (100.0f64 / 1e-2).atan() / 1e-2;
        assert!((v - exact).abs() < 1e-9, "{v} vs {exact}");
    }

    #[test]
    fn simpson_exact_on_cubics() {
        let h = 0.1;
        let even: Vec<f64> = (0..11).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((simpson_uniform(&even, h) - 0.25).abs() < 1e-14);
        let odd: Vec<f64> = (0..10).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((simpson_uniform(&odd, h) - 0.9f64.powi(4) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn trapezoid_linear() {
        let v = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(trapezoid_uniform(&v, 0.5), 2.25);
    }
}
