//! Gauss-Legendre rules and dyadic shell classification.

use serde::{Deserialize, Serialize};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let step = pn / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integrate `f` over [a, b] with a prepared rule.
pub fn integrate(rule: &(Vec<f64>, Vec<f64>), a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Outcome of a divergence classification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Convergent, with the extrapolated total.
    Finite { estimate: f64 },
    /// Divergent, with the mean contribution of the trailing shells.
    Divergent { rate: f64 },
    /// Neither pattern emerged before the last shell.
    Inconclusive { partial: f64, shells: usize },
}

impl Verdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, Verdict::Finite { .. })
    }
    pub fn is_divergent(&self) -> bool {
        matches!(self, Verdict::Divergent { .. })
    }
}

/// Incremental classifier over a sequence of shell contributions.
#[derive(Clone, Debug)]
pub struct ShellClassifier {
    window: usize,
    ratio: f64,
    tol: f64,
    shells: Vec<f64>,
}

impl ShellClassifier {
    pub fn new(window: usize, ratio: f64, tol: f64) -> Self {
        ShellClassifier { window: window.max(2), ratio, tol, shells: Vec::new() }
    }

    pub fn shells(&self) -> &[f64] {
        &self.shells
    }

    pub fn partial_sum(&self) -> f64 {
        self.shells.iter().sum()
    }

    /// Record a shell; returns a verdict as soon as one is reached.
    pub fn push(&mut self, contribution: f64) -> Option<Verdict> {
        self.shells.push(contribution);
        let n = self.shells.len();
        if n <= self.window {
            return None;
        }
        let tail = &self.shells[n - self.window - 1..];
        let ratios: Vec<f64> = tail.windows(2).map(|w| ratio_of(w[1], w[0])).collect();
        if ratios.iter().all(|&q| q < self.ratio) {
            let last = self.shells[n - 1];
            let q = ratios.iter().cloned().fold(0.0, f64::max);
            let tail_sum = if q < 1.0 { last * q / (1.0 - q) } else { 0.0 };
            return Some(Verdict::Finite { estimate: self.partial_sum() + tail_sum });
        }
        let recent = &self.shells[n - self.window..];
        if recent.iter().all(|&c| c > self.tol) && ratios.iter().all(|&q| q >= self.ratio) {
            let rate = recent.iter().sum::<f64>() / self.window as f64;
            return Some(Verdict::Divergent { rate });
        }
        None
    }

    pub fn finish(&self) -> Verdict {
        Verdict::Inconclusive { partial: self.partial_sum(), shells: self.shells.len() }
    }
}

fn ratio_of(next: f64, prev: f64) -> f64 {
    if prev.abs() == 0.0 {
        if next.abs() == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (next / prev).abs()
    }
}
