//! Sampled functions on uniform grids and finite-difference stencils.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Values of a function at the nodes of a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub x: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn sample<F: Fn(f64) -> Complex64>(x: Vec<f64>, f: F) -> Self {
        let values = x.iter().map(|&t| f(t)).collect();
        Self { x, values }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Grid spacing, assuming uniform nodes.
    pub fn spacing(&self) -> f64 {
        (self.x[self.len() - 1] - self.x[0]) / (self.len() - 1) as f64
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Discrete inner product `Σ conj(f) g`, without the spacing factor.
    pub fn dot(&self, other: &Self) -> Complex64 {
        self.values.iter().zip(&other.values).map(|(f, g)| f.conj() * g).sum()
    }

    /// `|⟨f, g⟩| / (‖f‖‖g‖)` on the common nodes.
    pub fn cosine_similarity(&self, other: &Self) -> f64 {
        let nf = self.dot(self).re.sqrt();
        let ng = other.dot(other).re.sqrt();
        self.dot(other).norm() / (nf * ng)
    }

    /// Restriction to nodes `lo..hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Self {
        Self {
            x: self.x[lo..hi].to_vec(),
            values: self.values[lo..hi].to_vec(),
        }
    }

    /// Writes `x,re_phi,im_phi` rows (header included).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,re_phi,im_phi\n");
        for (x, v) in self.x.iter().zip(&self.values) {
            out.push_str(&format!("{},{},{}\n", fmt_real(*x), fmt_real(v.re), fmt_real(v.im)));
        }
        out
    }
}

/// Shortest round-trip decimal, in exponent form outside `[1e-4, 1e16)`.
pub fn fmt_real(x: f64) -> String {
    let m = x.abs();
    if m == 0.0 || !m.is_finite() || (1e-4..1e16).contains(&m) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

/// Fourth-order central first derivative at node `i` (needs two neighbours each side).
pub fn d1_fourth(v: &[Complex64], i: usize, h: f64) -> Complex64 {
    (v[i - 2] - v[i - 1] * 8.0 + v[i + 1] * 8.0 - v[i + 2]) / (12.0 * h)
}

/// Fourth-order central second derivative at node `i`.
pub fn d2_fourth(v: &[Complex64], i: usize, h: f64) -> Complex64 {
    (-v[i - 2] + v[i - 1] * 16.0 - v[i] * 30.0 + v[i + 1] * 16.0 - v[i + 2]) / (12.0 * h * h)
}

/// Second-order central second derivative at node `i`.
pub fn d2_second(v: &[Complex64], i: usize, h: f64) -> Complex64 {
    (v[i - 1] - v[i] * 2.0 + v[i + 1]) / (h * h)
}
