use crate::error::{invalid, Error, Result};
use crate::field::fft::wavenumbers;
use std::sync::Arc;

/// Periodic box [−Lx, Lx) × [−Ly, Ly) with its physical and spectral axes.
///
/// Immutable after construction; fields share it through an [`Arc`].
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub lx: f64,
    pub ly: f64,
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    /// x_i = −Lx + i·dx.
    pub x: Vec<f64>,
    /// y_j = −Ly + j·dy.
    pub y: Vec<f64>,
    /// Multiples of π/Lx in DFT order; the Nyquist entry is −π/dx.
    pub xi: Vec<f64>,
    /// Multiples of π/Ly in DFT order.
    pub eta: Vec<f64>,
}

impl Grid {
    /// Builds a grid; N must be even and at least 8, L positive.
    pub fn new(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Arc<Grid>> {
        for (name, l) in [("Lx", lx), ("Ly", ly)] {
            if !(l > 0.0) || !l.is_finite() {
                return Err(invalid(name, format!("must be positive, got {l}")));
            }
        }
        for (name, n) in [("Nx", nx), ("Ny", ny)] {
            if n < 8 || n % 2 != 0 {
                return Err(invalid(name, format!("must be even and >= 8, got {n}")));
            }
        }
        let dx = 2.0 * lx / nx as f64;
        let dy = 2.0 * ly / ny as f64;
        Ok(Arc::new(Grid {
            lx,
            ly,
            nx,
            ny,
            dx,
            dy,
            x: (0..nx).map(|i| -lx + i as f64 * dx).collect(),
            y: (0..ny).map(|j| -ly + j as f64 * dy).collect(),
            xi: wavenumbers(nx, dx),
            eta: wavenumbers(ny, dy),
        }))
    }

    /// Square box helper.
    pub fn square(l: f64, n: usize) -> Result<Arc<Grid>> {
        Grid::new(l, l, n, n)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dxi(&self) -> f64 {
        std::f64::consts::PI / self.lx
    }

    pub fn deta(&self) -> f64 {
        std::f64::consts::PI / self.ly
    }

    /// Area element dx·dy.
    pub fn cell(&self) -> f64 {
        self.dx * self.dy
    }

    /// Index of the sample nearest to x = 0 (exact for even N).
    pub fn x_origin(&self) -> usize {
        self.nx / 2
    }

    pub fn y_origin(&self) -> usize {
        self.ny / 2
    }
}

/// `make_grid` operation: see [`Grid::new`].
pub fn make_grid(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Arc<Grid>> {
    Grid::new(lx, ly, nx, ny)
}

/// Real samples u(x_i, y_j) stored x-major: `values[i * ny + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Arc<Grid>,
    pub values: Vec<f64>,
}

impl Field {
    pub fn new(grid: &Arc<Grid>, values: Vec<f64>) -> Result<Field> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), got: values.len() });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(invalid("values", format!("non-finite sample {v}")));
        }
        Ok(Field { grid: grid.clone(), values })
    }

    pub fn zeros(grid: &Arc<Grid>) -> Field {
        Field { grid: grid.clone(), values: vec![0.0; grid.len()] }
    }

    /// Samples `f(x, y)` on every grid point.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64, f64) -> f64) -> Field {
        let mut values = Vec::with_capacity(grid.len());
        for &x in &grid.x {
            for &y in &grid.y {
                values.push(f(x, y));
            }
        }
        Field { grid: grid.clone(), values }
    }

    /// Unit Gaussian e^{−x²−y²} scaled by `amp`.
    pub fn gaussian(grid: &Arc<Grid>, amp: f64) -> Field {
        Field::from_fn(grid, |x, y| amp * (-x * x - y * y).exp())
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.ny + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// dx·dy·Σ u.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell()
    }

    pub fn scale(&self, a: f64) -> Field {
        self.map(|v| a * v)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Field {
        assert_eq!(self.values.len(), other.values.len(), "fields on different grids");
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Field) -> Field {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Field) -> Field {
        self.zip_with(other, |a, b| a + b)
    }

    /// Sup-norm of the difference.
    pub fn max_diff(&self, other: &Field) -> f64 {
        self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Samples along the x-row through y_j.
    pub fn row_at_y(&self, j: usize) -> Vec<f64> {
        (0..self.grid.nx).map(|i| self.at(i, j)).collect()
    }
}
