//! Stand-alone semi-implicit Kuramoto-Sivashinsky stepper used as an oracle.
//!
//! It solves `ψ_t + 4ψ_xxxx + βψ_xx + (β/2)(ψ_x)² = 0` on `[0, 2π)` with
//! `N` nodes, treating the linear part by backward Euler and the square
//! explicitly with the 2/3 rule, straight from the textbook recipe. It
//! shares no code with the library beyond the FFT crate.

#![allow(dead_code)]

use num_complex::Complex64;
use realfft::RealFftPlanner;

pub struct KsReference {
    n: usize,
    beta: f64,
    dt: f64,
    forward: std::sync::Arc<dyn realfft::RealToComplex<f64>>,
    inverse: std::sync::Arc<dyn realfft::ComplexToReal<f64>>,
}

impl KsReference {
    pub fn new(n: usize, beta: f64, dt: f64) -> Self {
        let mut planner = RealFftPlanner::<f64>::new();
        KsReference {
            n,
            beta,
            dt,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// One-sided coefficients of `sin x` (forward transform divided by `N`).
    pub fn sine(&self) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(0.0, 0.0); self.n / 2 + 1];
        let mut nodes: Vec<f64> = (0..self.n)
            .map(|j| (j as f64 * (2.0 * std::f64::consts::PI / self.n as f64)).sin())
            .collect();
        self.forward.process(&mut nodes, &mut c).unwrap();
        let s = 1.0 / self.n as f64;
        for v in c.iter_mut() {
            *v *= s;
        }
        c[0].im = 0.0;
        let last = c.len() - 1;
        c[last].im = 0.0;
        c
    }

    /// Dealiased coefficients of `(ψ_x)²`.
    fn square_of_slope(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let half = self.n / 2;
        let mut slope: Vec<Complex64> = psi
            .iter()
            .enumerate()
            .map(|(k, &c)| c * Complex64::new(0.0, k as f64))
            .collect();
        slope[half] = Complex64::new(0.0, 0.0);
        slope[0].im = 0.0;
        let mut nodes = vec![0.0; self.n];
        self.inverse.process(&mut slope, &mut nodes).unwrap();
        for v in nodes.iter_mut() {
            *v *= *v;
        }
        let mut out = vec![Complex64::new(0.0, 0.0); half + 1];
        self.forward.process(&mut nodes, &mut out).unwrap();
        let s = 1.0 / self.n as f64;
        for v in out.iter_mut() {
            *v *= s;
        }
        out[0].im = 0.0;
        out[half].im = 0.0;
        for v in out.iter_mut().skip(self.n / 3 + 1) {
            *v = Complex64::new(0.0, 0.0);
        }
        out
    }

    pub fn step(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let nl = self.square_of_slope(psi);
        let gain = -self.beta * self.dt / 2.0;
        psi.iter()
            .zip(&nl)
            .enumerate()
            .map(|(k, (&p, &q))| {
                let k2 = (k * k) as f64;
                let denominator = 1.0 + 4.0 * k2 * k2 * self.dt - self.beta * k2 * self.dt;
                (p * 1.0 + q * gain) / denominator
            })
            .collect()
    }

    pub fn run(&self, initial: &[Complex64], steps: usize) -> Vec<Complex64> {
        let mut psi = initial.to_vec();
        for _ in 0..steps {
            psi = self.step(&psi);
        }
        psi
    }
}
