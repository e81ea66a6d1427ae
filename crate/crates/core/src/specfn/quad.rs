//! Globally adaptive Gauss–Kronrod (G10/K21) quadrature on finite intervals.
//!
//! Works for any value type that behaves like a normed vector space over the
//! reals, which covers both the real oracle integrals and the complex
//! Mellin–Barnes line integrals. Panel evaluations go through a batch closure so
//! callers can evaluate the 21 nodes of a panel in parallel; everything else,
//! including the final summation order, is sequential and deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Values a quadrature can accumulate.
pub trait QuadValue: Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_801_705_934,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], ...).
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Number of integrand evaluations per panel.
pub const NODES_PER_PANEL: usize = 21;

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Budget of integrand evaluations.
    pub max_evals: usize,
}

impl QuadOptions {
    pub fn new(abs_tol: f64, rel_tol: f64, max_evals: usize) -> Self {
        Self {
            abs_tol,
            rel_tol,
            max_evals,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Panel<T> {
    lo: f64,
    hi: f64,
    value: T,
    error: f64,
}

struct ByError<T>(Panel<T>);

impl<T> PartialEq for ByError<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T> Eq for ByError<T> {}
impl<T> PartialOrd for ByError<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for ByError<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .total_cmp(&other.0.error)
            .then_with(|| other.0.lo.total_cmp(&self.0.lo))
    }
}

fn panel_nodes(lo: f64, hi: f64) -> [f64; NODES_PER_PANEL] {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut nodes = [0.0; NODES_PER_PANEL];
    for i in 0..10 {
        nodes[2 * i] = center - half * XGK[i];
        nodes[2 * i + 1] = center + half * XGK[i];
    }
    nodes[20] = center;
    nodes
}

fn rule<T: QuadValue>(lo: f64, hi: f64, f: &[T]) -> Panel<T> {
    let half = 0.5 * (hi - lo);
    let fc = f[20];
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::zero();
    for i in 0..10 {
        let pair = f[2 * i] + f[2 * i + 1];
        kronrod = kronrod + pair * WGK[i];
        if i % 2 == 1 {
            gauss = gauss + pair * WG[i / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[10] * (fc - mean).magnitude();
    let mut resabs = WGK[10] * fc.magnitude();
    for i in 0..10 {
        resasc += WGK[i] * ((f[2 * i] - mean).magnitude() + (f[2 * i + 1] - mean).magnitude());
        resabs += WGK[i] * (f[2 * i].magnitude() + f[2 * i + 1].magnitude());
    }
    let half_abs = half.abs();
    resasc *= half_abs;
    resabs *= half_abs;
    let mut error = ((kronrod - gauss) * half).magnitude();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let round_floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && error < round_floor {
        error = round_floor;
    }
    Panel {
        lo,
        hi,
        value: kronrod * half,
        error,
    }
}

/// Integrate over `[breaks[0], breaks[last]]`, starting from the panels given by
/// consecutive breakpoints. `batch` maps a slice of abscissae to integrand
/// values in the same order.
pub fn integrate_batch<T, B>(batch: B, breaks: &[f64], opts: QuadOptions) -> QuadResult<T>
where
    T: QuadValue,
    B: Fn(&[f64]) -> Vec<T>,
{
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut heap = BinaryHeap::new();
    let mut evals = 0usize;
    let eval_panel = |lo: f64, hi: f64| {
        let nodes = panel_nodes(lo, hi);
        let values = batch(&nodes);
        rule(lo, hi, &values)
    };
    let mut run_total = T::zero();
    let mut run_err = 0.0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let p = eval_panel(w[0], w[1]);
            run_total = run_total + p.value;
            run_err += p.error;
            heap.push(ByError(p));
            evals += NODES_PER_PANEL;
        }
    }
    let finish = |heap: &BinaryHeap<ByError<T>>, evals: usize, converged: bool| {
        let (total, err) = totals(heap);
        QuadResult {
            value: total,
            error: err,
            evals,
            converged,
        }
    };
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * run_total.magnitude());
        if run_err <= target {
            let res = finish(&heap, evals, true);
            if res.error <= opts.abs_tol.max(opts.rel_tol * res.value.magnitude()) {
                return res;
            }
            // running sums drifted; resynchronize and keep refining
            run_total = res.value;
            run_err = res.error;
            if run_err <= target {
                return res;
            }
        }
        if evals + 2 * NODES_PER_PANEL > opts.max_evals {
            return finish(&heap, evals, false);
        }
        let worst = heap.pop().expect("non-empty heap").0;
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // interval exhausted at machine resolution
            heap.push(ByError(worst));
            return finish(&heap, evals, false);
        }
        let left = eval_panel(worst.lo, mid);
        let right = eval_panel(mid, worst.hi);
        run_total = run_total - worst.value + left.value + right.value;
        run_err += left.error + right.error - worst.error;
        heap.push(ByError(left));
        heap.push(ByError(right));
        evals += 2 * NODES_PER_PANEL;
    }
}

/// Sum the panels in ascending abscissa order so the result does not depend on
/// heap layout.
fn totals<T: QuadValue>(heap: &BinaryHeap<ByError<T>>) -> (T, f64) {
    let mut panels: Vec<&Panel<T>> = heap.iter().map(|p| &p.0).collect();
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut total = T::zero();
    let mut comp = T::zero();
    let mut err = 0.0;
    for p in panels {
        // Kahan summation
        let y = p.value - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
        err += p.error;
    }
    (total, err)
}

/// Sequential convenience wrapper around [`integrate_batch`].
pub fn integrate<T, F>(f: F, breaks: &[f64], opts: QuadOptions) -> QuadResult<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    integrate_batch(|xs: &[f64]| xs.iter().map(|&x| f(x)).collect(), breaks, opts)
}

/// `∫_a^∞ f(x) dx` through `x = a + t / (1 - t)`, `t ∈ [0, 1)`.
pub fn integrate_to_infinity<F>(f: F, a: f64, opts: QuadOptions) -> QuadResult<f64>
where
    F: Fn(f64) -> f64,
{
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let om = 1.0 - t;
        let v = f(a + t / om) / (om * om);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, &[0.0, 0.5, 0.9, 0.99, 1.0], opts)
}
