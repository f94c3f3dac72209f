//! Piecewise-linear functions on the circle with one common slope.
//!
//! A step function is the slope-zero case; `{x} - 1/2` and all of its
//! ergodic sums have a nonzero slope. Each piece `[u_j, u_{j+1})` carries the
//! right limit `v_j` at its left end, so the function there is
//! `v_j + slope·(x - u_j)`.

use crate::phase::Phase;

/// Three-point Gauss–Legendre rule on `[0, 1]`; exact for polynomials of
/// degree five, which covers products of up to five linear factors.
const GL_NODES: [f64; 3] = [0.112_701_665_379_258_31, 0.5, 0.887_298_334_620_741_7];
const GL_WEIGHTS: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        KahanSum::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    /// Sorted, first entry is the smallest breakpoint (not necessarily 0).
    breakpoints: Vec<Phase>,
    /// Right limit at each breakpoint.
    values: Vec<f64>,
    slope: f64,
}

impl PiecewiseLinear {
    /// `breakpoints` must be strictly increasing and nonempty.
    pub fn new(breakpoints: Vec<Phase>, values: Vec<f64>, slope: f64) -> PiecewiseLinear {
        assert!(!breakpoints.is_empty(), "at least one breakpoint");
        assert_eq!(breakpoints.len(), values.len());
        debug_assert!(breakpoints.windows(2).all(|w| w[0] < w[1]));
        PiecewiseLinear {
            breakpoints,
            values,
            slope,
        }
    }

    pub fn constant(c: f64) -> PiecewiseLinear {
        PiecewiseLinear::new(vec![Phase::ZERO], vec![c], 0.0)
    }

    pub fn breakpoints(&self) -> &[Phase] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn piece_count(&self) -> usize {
        self.breakpoints.len()
    }

    /// Length of piece `j` (the last piece wraps around to the first breakpoint).
    pub fn piece_len(&self, j: usize) -> f64 {
        let next = self.breakpoints[(j + 1) % self.breakpoints.len()];
        self.breakpoints[j].arc_len_f64(next)
    }

    /// Index of the piece containing `x`.
    pub fn piece_of(&self, x: Phase) -> usize {
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        if idx == 0 {
            self.breakpoints.len() - 1
        } else {
            idx - 1
        }
    }

    pub fn eval_phase(&self, x: Phase) -> f64 {
        let j = self.piece_of(x);
        self.values[j] + self.slope * self.breakpoints[j].forward_to(x).to_f64()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_phase(Phase::from_f64(x))
    }

    /// Left limit at the start of piece `j`, i.e. the end value of the
    /// previous piece.
    pub fn left_limit(&self, j: usize) -> f64 {
        let k = (j + self.breakpoints.len() - 1) % self.breakpoints.len();
        self.values[k] + self.slope * self.piece_len(k)
    }

    /// Jumps `(point, right limit - left limit)`, zero jumps omitted.
    pub fn jumps(&self) -> Vec<(Phase, f64)> {
        (0..self.breakpoints.len())
            .map(|j| (self.breakpoints[j], self.values[j] - self.left_limit(j)))
            .filter(|&(_, d)| d != 0.0)
            .collect()
    }

    pub fn integral(&self) -> f64 {
        let mut s = KahanSum::new();
        for j in 0..self.breakpoints.len() {
            let len = self.piece_len(j);
            s.add(self.values[j] * len + 0.5 * self.slope * len * len);
        }
        s.value()
    }

    /// `∫ f²`.
    pub fn l2_norm_sq(&self) -> f64 {
        let mut s = KahanSum::new();
        let sl = self.slope;
        for j in 0..self.breakpoints.len() {
            let len = self.piece_len(j);
            let v = self.values[j];
            s.add(v * v * len + v * sl * len * len + sl * sl * len * len * len / 3.0);
        }
        s.value()
    }

    /// Essential supremum of `|f|`.
    pub fn sup_norm(&self) -> f64 {
        (0..self.breakpoints.len())
            .map(|j| {
                let v = self.values[j];
                v.abs().max((v + self.slope * self.piece_len(j)).abs())
            })
            .fold(0.0, f64::max)
    }

    /// `x ↦ f(x + t)`.
    pub fn shifted(&self, t: Phase) -> PiecewiseLinear {
        let moved: Vec<Phase> = self.breakpoints.iter().map(|&b| b - t).collect();
        // Rotate so the breakpoints are sorted again.
        let start = (0..moved.len()).min_by_key(|&i| moved[i]).unwrap_or(0);
        let n = moved.len();
        let bps = (0..n).map(|i| moved[(start + i) % n]).collect();
        let vals = (0..n).map(|i| self.values[(start + i) % n]).collect();
        PiecewiseLinear::new(bps, vals, self.slope)
    }

    pub fn scaled(&self, c: f64) -> PiecewiseLinear {
        PiecewiseLinear::new(
            self.breakpoints.clone(),
            self.values.iter().map(|v| v * c).collect(),
            self.slope * c,
        )
    }

    /// Values and lengths of the pieces, for building distributions.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.breakpoints.len()).map(move |j| (self.values[j], self.piece_len(j)))
    }
}

/// Breakpoints of several functions merged into one sorted list.
fn merged_breakpoints(fs: &[&PiecewiseLinear]) -> Vec<Phase> {
    let mut all: Vec<Phase> = fs
        .iter()
        .flat_map(|f| f.breakpoints.iter().copied())
        .collect();
    all.sort_unstable();
    all.dedup();
    all
}

/// `∫ Π f_i dμ`, exact up to rounding for up to five factors.
pub fn product_integral(fs: &[&PiecewiseLinear]) -> f64 {
    assert!(
        !fs.is_empty() && fs.len() <= 5,
        "between one and five factors"
    );
    let points = merged_breakpoints(fs);
    let mut cursors: Vec<usize> = fs.iter().map(|f| f.piece_of(points[0])).collect();
    let mut total = KahanSum::new();
    for (i, &start) in points.iter().enumerate() {
        let end = points[(i + 1) % points.len()];
        let len = start.arc_len_f64(end);
        for (c, f) in cursors.iter_mut().zip(fs) {
            // advance the cursor while the next breakpoint of f is at or before `start`
            let n = f.breakpoints.len();
            if n > 1 {
                let next = (*c + 1) % n;
                if f.breakpoints[next] == start {
                    *c = next;
                }
            }
        }
        let mut piece = 0.0;
        for (node, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            let mut prod = 1.0;
            for (&c, f) in cursors.iter().zip(fs) {
                let offset = f.breakpoints[c].forward_to(start).to_f64() + node * len;
                prod *= f.values[c] + f.slope * offset;
            }
            piece += w * prod;
        }
        total.add(piece * len);
    }
    total.value()
}

/// `A(t) = ∫ f(x) f(x + t) dx`.
pub fn autocorrelation(f: &PiecewiseLinear, t: Phase) -> f64 {
    product_integral(&[f, &f.shifted(t)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sawtooth() -> PiecewiseLinear {
        PiecewiseLinear::new(vec![Phase::ZERO], vec![-0.5], 1.0)
    }

    #[test]
    fn sawtooth_moments() {
        let f = sawtooth();
        assert!(f.integral().abs() < 1e-16);
        assert!((f.l2_norm_sq() - 1.0 / 12.0).abs() < 1e-16);
        assert_eq!(f.sup_norm(), 0.5);
        assert_eq!(f.jumps(), vec![(Phase::ZERO, -1.0)]);
        assert!((f.eval(0.25) + 0.25).abs() < 1e-16);
    }

    #[test]
    fn sawtooth_autocorrelation_closed_form() {
        let f = sawtooth();
        for &t in &[0.0, 0.1, 0.37, 0.5, 0.9] {
            let want = (t * t - t + 1.0 / 6.0) / 2.0;
            let got = autocorrelation(&f, Phase::from_f64(t));
            assert!((got - want).abs() < 1e-15, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn shift_moves_breakpoints() {
        let f = PiecewiseLinear::new(vec![Phase::ZERO, Phase::HALF], vec![1.0, -1.0], 0.0);
        let g = f.shifted(Phase::from_f64(0.25));
        assert_eq!(g.eval(0.0), 1.0);
        assert_eq!(g.eval(0.3), -1.0);
        assert_eq!(g.eval(0.8), 1.0);
    }

    #[test]
    fn square_wave_products() {
        let f = PiecewiseLinear::new(vec![Phase::ZERO, Phase::HALF], vec![1.0, -1.0], 0.0);
        assert!((product_integral(&[&f, &f]) - 1.0).abs() < 1e-15);
        assert!(product_integral(&[&f, &f, &f]).abs() < 1e-15);
        assert!((autocorrelation(&f, Phase::from_f64(0.25))).abs() < 1e-15);
    }
}
