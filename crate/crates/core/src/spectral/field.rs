use num_complex::Complex64;

use super::fft::Fft2;
use super::grid::GridSpec;
use crate::error::{Result, SqgError};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Forward transform of real samples; output is exactly Hermitian.
pub fn to_spectral(grid: &GridSpec, values: &[f64]) -> Vec<Complex64> {
    let mut work: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Fft2::for_size(grid.n()).forward(&mut work);
    symmetrize(grid, &mut work);
    work
}

/// Inverse transform; the coefficients are symmetrized first so the output is
/// the real field they represent.
pub fn to_physical(grid: &GridSpec, coeffs: &[Complex64]) -> Vec<f64> {
    let mut work = coeffs.to_vec();
    symmetrize(grid, &mut work);
    Fft2::for_size(grid.n()).inverse(&mut work);
    work.into_iter().map(|c| c.re).collect()
}

/// Replace every pair (c(k), c(−k)) by its Hermitian part.
fn symmetrize(grid: &GridSpec, coeffs: &mut [Complex64]) {
    for idx in 0..coeffs.len() {
        let (k1, k2) = grid.wavevector(idx);
        let mirror = grid.flat_index(-k1, -k2);
        if mirror < idx {
            continue;
        }
        if mirror == idx {
            coeffs[idx] = Complex64::new(coeffs[idx].re, 0.0);
        } else {
            let a = coeffs[idx];
            let b = coeffs[mirror].conj();
            let h = (a + b) * 0.5;
            coeffs[idx] = h;
            coeffs[mirror] = h.conj();
        }
    }
}

/// Real scalar field on the periodic grid, held in both representations.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    values: Vec<f64>,
    coeffs: Vec<Complex64>,
}

impl ScalarField {
    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(SqgError::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        let coeffs = to_spectral(&grid, &values);
        Ok(ScalarField {
            grid,
            values,
            coeffs,
        })
    }

    pub fn from_coeffs(grid: GridSpec, mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(SqgError::InvalidGrid(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        symmetrize(&grid, &mut coeffs);
        let values = to_physical(&grid, &coeffs);
        Ok(ScalarField {
            grid,
            values,
            coeffs,
        })
    }

    /// Keep `values` as given and pair them with their transform restricted to
    /// the dealiased disc. Used to canonicalize a state at snapshot steps, so
    /// that a field rebuilt from stored samples is bit-identical.
    pub fn from_band_values(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        let mut field = Self::from_values(grid, values)?;
        for (idx, c) in field.coeffs.iter_mut().enumerate() {
            let (k1, k2) = grid.wavevector(idx);
            if !grid.in_band(k1, k2) {
                *c = ZERO;
            }
        }
        Ok(field)
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|idx| {
                let (x, y) = grid.point(idx);
                f(x, y)
            })
            .collect();
        Self::from_values(grid, values).expect("length matches grid")
    }

    pub fn zeros(grid: GridSpec) -> Self {
        ScalarField {
            grid,
            values: vec![0.0; grid.len()],
            coeffs: vec![ZERO; grid.len()],
        }
    }

    pub fn constant(grid: GridSpec, c: f64) -> Self {
        let mut coeffs = vec![ZERO; grid.len()];
        coeffs[0] = Complex64::new(c * grid.len() as f64, 0.0);
        ScalarField {
            grid,
            values: vec![c; grid.len()],
            coeffs,
        }
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// θ̂(k) for a signed wavevector.
    pub fn coeff(&self, k1: i64, k2: i64) -> Complex64 {
        self.coeffs[self.grid.flat_index(k1, k2)]
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re / self.grid.len() as f64
    }

    /// Apply a real Fourier multiplier m(k₁, k₂).
    pub fn apply_multiplier(&self, m: impl Fn(i64, i64) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                let (k1, k2) = self.grid.wavevector(idx);
                if c == ZERO {
                    ZERO
                } else {
                    c * m(k1, k2)
                }
            })
            .collect();
        Self::from_coeffs(self.grid, coeffs).expect("length matches grid")
    }

    /// Apply a radial multiplier m(|k|).
    pub fn apply_radial(&self, m: impl Fn(f64) -> f64) -> Self {
        self.apply_multiplier(|k1, k2| m(((k1 * k1 + k2 * k2) as f64).sqrt()))
    }

    /// Zero every coefficient outside the dealiased disc |k| ≤ k_cut.
    pub fn dealiased(&self) -> Self {
        let g = self.grid;
        self.apply_multiplier(|k1, k2| if g.in_band(k1, k2) { 1.0 } else { 0.0 })
    }

    pub fn is_dealiased(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(idx, c)| {
            let (k1, k2) = self.grid.wavevector(idx);
            self.grid.in_band(k1, k2) || *c == ZERO
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        ScalarField {
            grid: self.grid,
            values: self.values.iter().map(|v| v * s).collect(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &ScalarField) -> Result<Self> {
        self.zip_with(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Result<Self> {
        self.zip_with(other, |a, b| a - b, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &ScalarField,
        fv: impl Fn(f64, f64) -> f64,
        fc: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.grid.same_as(&other.grid)?;
        Ok(ScalarField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| fv(a, b))
                .collect(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| fc(a, b))
                .collect(),
        })
    }

    /// ∫ θ·φ dx over the torus by uniform quadrature.
    pub fn inner(&self, other: &ScalarField) -> Result<f64> {
        self.grid.same_as(&other.grid)?;
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum();
        Ok(s * self.grid.cell_area())
    }

    /// ∫ θ·φ dx evaluated through Parseval on the coefficients.
    pub fn inner_spectral(&self, other: &ScalarField) -> Result<f64> {
        self.grid.same_as(&other.grid)?;
        let s: f64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum();
        let n2 = self.grid.len() as f64;
        Ok(s * self.grid.cell_area() / n2)
    }

    /// Spectral interpolation onto an M×M grid (zero padding or truncation).
    /// Modes that do not fit strictly inside (−M/2, M/2) are dropped.
    pub fn resample(&self, n: usize) -> Result<Self> {
        let target = GridSpec::with_dealias(n, self.grid.dealias_fraction())?;
        let half = (n.min(self.grid.n()) / 2) as i64;
        let scale = target.len() as f64 / self.grid.len() as f64;
        let mut coeffs = vec![ZERO; target.len()];
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let (k1, k2) = self.grid.wavevector(idx);
            if k1.abs() < half && k2.abs() < half {
                coeffs[target.flat_index(k1, k2)] = c * scale;
            }
        }
        Self::from_coeffs(target, coeffs)
    }

    pub fn has_non_finite(&self) -> bool {
        self.values.iter().any(|v| !v.is_finite())
    }
}

/// Velocity-like pair of scalar components.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub u1: ScalarField,
    pub u2: ScalarField,
}

impl VectorField {
    pub fn new(u1: ScalarField, u2: ScalarField) -> Result<Self> {
        u1.grid().same_as(u2.grid())?;
        Ok(VectorField { u1, u2 })
    }

    pub fn constant(grid: GridSpec, c1: f64, c2: f64) -> Self {
        VectorField {
            u1: ScalarField::constant(grid, c1),
            u2: ScalarField::constant(grid, c2),
        }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self::constant(grid, 0.0, 0.0)
    }

    pub fn grid(&self) -> &GridSpec {
        self.u1.grid()
    }

    pub fn map(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        VectorField {
            u1: f(&self.u1),
            u2: f(&self.u2),
        }
    }

    pub fn sub(&self, other: &VectorField) -> Result<Self> {
        Ok(VectorField {
            u1: self.u1.sub(&other.u1)?,
            u2: self.u2.sub(&other.u2)?,
        })
    }

    /// max over k of |k·û(k)|.
    pub fn max_divergence_coeff(&self) -> f64 {
        let g = self.grid();
        (0..g.len())
            .map(|idx| {
                let (k1, k2) = g.wavevector(idx);
                (self.u1.coeffs()[idx] * k1 as f64 + self.u2.coeffs()[idx] * k2 as f64).norm()
            })
            .fold(0.0, f64::max)
    }
}
