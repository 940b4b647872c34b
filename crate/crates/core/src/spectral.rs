//! Periodic grid, real-to-complex transforms and spectral field arithmetic.
//!
//! A real periodic function on `[0, period)` is stored through its one-sided
//! Fourier coefficients `ψ̂(k)`, `k = 0 ..= N/2`, normalised so that
//!
//! ```text
//! ψ(x_j) = Σ_{k=-N/2+1}^{N/2} ψ̂(k) e^{i κ_k x_j},   κ_k = 2πk / period,
//! ```
//!
//! with `ψ̂(-k) = conj(ψ̂(k))`. In particular `ψ̂(0)` is the mean of the
//! nodal values. The Nyquist coefficient `ψ̂(N/2)` is real and counted once.
//!
//! Mode indexing is by signed wavenumber: mode `k` carries the Laplacian
//! eigenvalue `λ_k = κ_k²`, so each `λ_k` with `k ≥ 1` appears twice in the
//! two-sided spectrum (`±k`). This matches the doubly-degenerate labelling
//! `λ_1 = λ_2, λ_3 = λ_4, ...` used for a complex eigenbasis, with the pair
//! `(2k-1, 2k)` of that labelling mapped to `±k` here.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};

use crate::error::{FrontError, Result};

pub const DEFAULT_N_MODES: usize = 256;
pub const DEFAULT_DEALIAS_FRACTION: f64 = 2.0 / 3.0;

/// Shape of the periodic grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    /// Number of physical nodes `N` (even, at least 8).
    pub n_modes: usize,
    pub period: f64,
    /// Fraction of the one-sided band kept after a pointwise product.
    pub dealias_fraction: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n_modes: DEFAULT_N_MODES,
            period: 2.0 * PI,
            dealias_fraction: DEFAULT_DEALIAS_FRACTION,
        }
    }
}

impl GridConfig {
    pub fn new(n_modes: usize, period: f64) -> Result<Self> {
        let config = GridConfig {
            n_modes,
            period,
            ..GridConfig::default()
        };
        config.validate()?;
        Ok(config)
    }

    /// `2π`-periodic grid with `n_modes` nodes and the default 2/3 rule.
    pub fn periodic_2pi(n_modes: usize) -> Result<Self> {
        Self::new(n_modes, 2.0 * PI)
    }

    pub fn with_dealias_fraction(mut self, fraction: f64) -> Result<Self> {
        self.dealias_fraction = fraction;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_modes < 8 || self.n_modes % 2 != 0 {
            return Err(FrontError::InvalidGrid(format!(
                "n_modes must be even and at least 8, got {}",
                self.n_modes
            )));
        }
        if !(self.period.is_finite() && self.period > 0.0) {
            return Err(FrontError::InvalidGrid(format!(
                "period must be positive, got {}",
                self.period
            )));
        }
        let fraction = self.dealias_fraction;
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(FrontError::InvalidGrid(format!(
                "dealias_fraction must lie in (0, 1], got {fraction}"
            )));
        }
        if fraction * ((self.n_modes / 2) as f64) < 1.0 {
            return Err(FrontError::InvalidGrid(format!(
                "dealias_fraction {fraction} keeps no nonzero mode on {} nodes",
                self.n_modes
            )));
        }
        Ok(())
    }

    /// Index of the last one-sided coefficient, `N/2`.
    pub fn n_half(&self) -> usize {
        self.n_modes / 2
    }

    /// Highest mode kept after dealiasing.
    pub fn dealias_cutoff(&self) -> usize {
        (self.dealias_fraction * self.n_half() as f64).floor() as usize
    }

    /// `κ_k = 2πk / period`, evaluated as `k · (2π/period)` so that a `2π`
    /// period yields exact integers.
    pub fn wavenumber(&self, k: usize) -> f64 {
        k as f64 * (2.0 * PI / self.period)
    }

    /// Laplacian eigenvalue magnitude `λ_k = (2πk / period)²`.
    pub fn lambda(&self, k: usize) -> f64 {
        let kappa = self.wavenumber(k);
        kappa * kappa
    }

    /// Multiplicity of one-sided mode `k` in the two-sided spectrum.
    pub(crate) fn multiplicity(&self, k: usize) -> f64 {
        if k == 0 || k == self.n_half() {
            1.0
        } else {
            2.0
        }
    }
}

/// Index of a Fourier mode together with its Laplacian eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavenumberMap {
    pub k_index: usize,
    pub lambda: f64,
}

struct GridInner {
    config: GridConfig,
    forward: Arc<dyn RealToComplex<f64>>,
    inverse: Arc<dyn ComplexToReal<f64>>,
}

/// A validated grid with its transform plans. Cheap to clone and share.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("config", &self.inner.config).finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.config == other.inner.config
    }
}

impl Grid {
    pub fn new(config: GridConfig) -> Result<Self> {
        config.validate()?;
        let mut planner = RealFftPlanner::<f64>::new();
        let forward = planner.plan_fft_forward(config.n_modes);
        let inverse = planner.plan_fft_inverse(config.n_modes);
        Ok(Grid {
            inner: Arc::new(GridInner {
                config,
                forward,
                inverse,
            }),
        })
    }

    pub fn config(&self) -> &GridConfig {
        &self.inner.config
    }

    pub fn n_modes(&self) -> usize {
        self.inner.config.n_modes
    }

    pub fn n_half(&self) -> usize {
        self.inner.config.n_half()
    }

    pub fn period(&self) -> f64 {
        self.inner.config.period
    }

    pub fn lambda(&self, k: usize) -> f64 {
        self.inner.config.lambda(k)
    }

    pub fn wavenumbers(&self) -> Vec<WavenumberMap> {
        (0..=self.n_half())
            .map(|k| WavenumberMap {
                k_index: k,
                lambda: self.lambda(k),
            })
            .collect()
    }

    /// Nodes `x_j = j · period / N` of the half-open interval `[0, period)`.
    pub fn nodes(&self) -> Vec<f64> {
        let h = self.period() / self.n_modes() as f64;
        (0..self.n_modes()).map(|j| j as f64 * h).collect()
    }

    pub fn zeros(&self) -> SpectralField {
        SpectralField {
            coeffs: vec![Complex64::new(0.0, 0.0); self.n_half() + 1],
            grid: self.clone(),
        }
    }

    /// Samples `f` at the nodes and transforms.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> SpectralField {
        let values: Vec<f64> = self.nodes().into_iter().map(f).collect();
        self.to_spectral(&values).expect("node count always matches the grid")
    }

    /// Builds a field from one-sided coefficients `ψ̂(0..=N/2)`. The imaginary
    /// parts of the mean and Nyquist coefficients are dropped.
    pub fn from_coefficients(&self, mut coeffs: Vec<Complex64>) -> Result<SpectralField> {
        let expected = self.n_half() + 1;
        if coeffs.len() != expected {
            return Err(FrontError::LengthMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        coeffs[0].im = 0.0;
        coeffs[expected - 1].im = 0.0;
        Ok(SpectralField {
            coeffs,
            grid: self.clone(),
        })
    }

    /// Forward transform of nodal values; `ψ̂(0)` is their mean.
    pub fn to_spectral(&self, values: &[f64]) -> Result<SpectralField> {
        if values.len() != self.n_modes() {
            return Err(FrontError::LengthMismatch {
                expected: self.n_modes(),
                got: values.len(),
            });
        }
        let mut input = values.to_vec();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.n_half() + 1];
        self.forward_in_place(&mut input, &mut coeffs);
        Ok(SpectralField {
            coeffs,
            grid: self.clone(),
        })
    }

    /// Nodal values of the field (inverse transform).
    pub fn to_physical(&self, field: &SpectralField) -> Vec<f64> {
        let mut input = field.coeffs.clone();
        let mut out = vec![0.0; self.n_modes()];
        self.inverse_in_place(&mut input, &mut out);
        out
    }

    /// Normalised forward transform; `input` is used as scratch.
    pub(crate) fn forward_in_place(&self, input: &mut [f64], output: &mut [Complex64]) {
        self.inner
            .forward
            .process(input, output)
            .expect("buffer lengths match the plan");
        let scale = 1.0 / self.n_modes() as f64;
        for c in output.iter_mut() {
            *c *= scale;
        }
        // Exact zeros for the components a real signal cannot carry.
        output[0].im = 0.0;
        let last = output.len() - 1;
        output[last].im = 0.0;
    }

    /// Inverse transform; `input` is used as scratch.
    pub(crate) fn inverse_in_place(&self, input: &mut [Complex64], output: &mut [f64]) {
        input[0].im = 0.0;
        let last = input.len() - 1;
        input[last].im = 0.0;
        self.inner
            .inverse
            .process(input, output)
            .expect("buffer lengths match the plan");
    }
}

/// A real periodic field stored as one-sided Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    coeffs: Vec<Complex64>,
    grid: Grid,
}

impl SpectralField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn to_physical(&self) -> Vec<f64> {
        self.grid.to_physical(self)
    }

    pub fn same_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(FrontError::GridMismatch)
        }
    }

    /// Mean value, i.e. the projection onto constants.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Copy with the mean removed.
    pub fn zero_mean(&self) -> SpectralField {
        let mut out = self.clone();
        out.coeffs[0] = Complex64::new(0.0, 0.0);
        out
    }

    /// `order`-th derivative: coefficients times `(iκ_k)^order`.
    ///
    /// For odd orders the Nyquist coefficient is zeroed, since `iκ_{N/2} ψ̂`
    /// cannot belong to a real field.
    pub fn derivative(&self, order: u32) -> SpectralField {
        let config = *self.grid.config();
        let n_half = config.n_half();
        let mut out = self.clone();
        if order == 0 {
            return out;
        }
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            if k == n_half && order % 2 == 1 {
                *c = Complex64::new(0.0, 0.0);
                continue;
            }
            let factor = Complex64::new(0.0, config.wavenumber(k)).powu(order);
            *c *= factor;
        }
        out
    }

    /// Dealiased spectral coefficients of `(ψ_x)²`.
    ///
    /// Differentiate spectrally, go to physical space, square pointwise,
    /// transform back and zero every mode above the dealiasing cutoff.
    pub fn nonlinear_square_of_derivative(&self) -> SpectralField {
        let grid = &self.grid;
        let config = grid.config();
        let mut spectrum: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * Complex64::new(0.0, config.wavenumber(k)))
            .collect();
        let last = spectrum.len() - 1;
        spectrum[last] = Complex64::new(0.0, 0.0);

        let mut nodal = vec![0.0; grid.n_modes()];
        grid.inverse_in_place(&mut spectrum, &mut nodal);
        for v in nodal.iter_mut() {
            *v *= *v;
        }
        let mut out = grid.zeros();
        grid.forward_in_place(&mut nodal, &mut out.coeffs);
        let cutoff = config.dealias_cutoff();
        for c in out.coeffs.iter_mut().skip(cutoff + 1) {
            *c = Complex64::new(0.0, 0.0);
        }
        out
    }

    /// Sum over the two-sided spectrum of `weight(λ_k) |ψ̂(k)|²`, times the period.
    fn weighted_energy(&self, weight: impl Fn(f64) -> f64) -> f64 {
        let config = self.grid.config();
        let sum: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| config.multiplicity(k) * weight(config.lambda(k)) * c.norm_sqr())
            .sum();
        config.period * sum
    }

    /// `L²` norm over one period, via Parseval.
    pub fn norm_l2(&self) -> f64 {
        self.weighted_energy(|_| 1.0).sqrt()
    }

    /// Largest absolute nodal value.
    pub fn norm_sup(&self) -> f64 {
        self.to_physical().into_iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// ε-weighted `H^{1/2}` norm: `‖ζ‖² = Σ_k √(1 + 4ελ_k) |ζ̂(k)|²`.
    /// Equal to [`norm_l2`](Self::norm_l2) at `ε = 0`.
    pub fn norm_half_eps(&self, eps: f64) -> f64 {
        self.weighted_energy(|lambda| (1.0 + 4.0 * eps * lambda).sqrt()).sqrt()
    }

    /// Mode-wise map; the closure receives `(k, ψ̂(k))`.
    pub fn map_modes(&self, f: impl Fn(usize, Complex64) -> Complex64) -> SpectralField {
        let coeffs = self.coeffs.iter().enumerate().map(|(k, &c)| f(k, c)).collect();
        self.grid.from_coefficients(coeffs).expect("length preserved")
    }

    pub fn scaled(&self, factor: f64) -> SpectralField {
        self.map_modes(|_, c| c * factor)
    }

    fn zip_with(&self, other: &SpectralField, f: impl Fn(Complex64, Complex64) -> Complex64) -> SpectralField {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect();
        SpectralField {
            coeffs,
            grid: self.grid.clone(),
        }
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;

    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;

    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;

    fn mul(self, rhs: f64) -> SpectralField {
        self.scaled(rhs)
    }
}
