//! Uniform cell-centred grids over `[0, x_end]` with two ghost cells per side.

use crate::error::{Error, Result};
use crate::linalg::ConservedState;
use crate::scalar::Real;

/// Ghost cells on each side of the interior.
pub const GHOSTS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D<T> {
    pub num_cells: usize,
    pub dx: T,
}

impl<T: Real> Grid1D<T> {
    pub fn new(num_cells: usize, dx: T) -> Result<Self> {
        if num_cells == 0 || !(dx > T::zero()) {
            return Err(Error::Geometry(format!(
                "need a positive cell count and width, got {num_cells} cells of width {dx}"
            )));
        }
        Ok(Self { num_cells, dx })
    }

    /// Centre of interior cell `i`.
    #[inline]
    pub fn center(&self, i: usize) -> T {
        (T::from_usize(i).unwrap() + T::half()) * self.dx
    }

    /// Left interface of interior cell `i` (`i = num_cells` gives the right end).
    #[inline]
    pub fn interface(&self, i: usize) -> T {
        T::from_usize(i).unwrap() * self.dx
    }

    pub fn length(&self) -> T {
        self.interface(self.num_cells)
    }
}

/// Sponge layer `[x_s, x_inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpongeGeometry<T> {
    pub x_start: T,
    pub x_end: T,
}

impl<T: Real> SpongeGeometry<T> {
    pub fn new(x_start: T, x_end: T) -> Result<Self> {
        if !(x_start > T::zero() && x_end > x_start) {
            return Err(Error::Geometry(format!(
                "sponge needs 0 < x_s < x_inf, got [{x_start}, {x_end}]"
            )));
        }
        Ok(Self { x_start, x_end })
    }

    pub fn width(&self) -> T {
        self.x_end - self.x_start
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.x_start && x <= self.x_end
    }
}

/// Result of [`build_grid`]: the whole grid plus where the sponge sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layout<T> {
    pub grid: Grid1D<T>,
    /// Cells in the computational domain `[0, x_s]`.
    pub computational_cells: usize,
    pub x_start: T,
    /// `None` when the sponge width is zero.
    pub sponge: Option<SpongeGeometry<T>>,
}

impl<T: Real> Layout<T> {
    pub fn sponge_cells(&self) -> usize {
        self.grid.num_cells - self.computational_cells
    }
}

/// Grid with `cells_per_wavelength` cells per wavelength covering the
/// computational domain `[0, x_s]` and a sponge of width `ω ≈ ω/L · L`.
///
/// The sponge is snapped to a whole number of cells (rounded, at least one
/// when `ω > 0`), so `x_inf` always lies on an interface; the returned
/// geometry carries the snapped `x_inf`.
pub fn build_grid<T: Real>(
    x_start: T,
    omega_over_l: T,
    cells_per_wavelength: usize,
    wavelength: T,
) -> Result<Layout<T>> {
    if cells_per_wavelength < 4 {
        return Err(Error::Geometry(format!(
            "need at least 4 cells per wavelength, got {cells_per_wavelength}"
        )));
    }
    if !(omega_over_l >= T::zero()) || !(wavelength > T::zero()) || !(x_start > T::zero()) {
        return Err(Error::Geometry(
            "sponge width, wavelength and x_s must be positive".into(),
        ));
    }
    let n = T::from_usize(cells_per_wavelength).unwrap();
    let dx = wavelength / n;
    let comp = x_start / dx;
    let comp_cells = comp.round();
    if (comp - comp_cells).abs() > T::lit(1e-9) * comp.max(T::one()) {
        return Err(Error::Geometry(format!(
            "x_s = {x_start} is not a whole number of cells of width {dx}"
        )));
    }
    let comp_cells = comp_cells.to_usize().unwrap();
    let mut sponge_cells = (omega_over_l * n).round().to_usize().unwrap();
    if omega_over_l > T::zero() {
        sponge_cells = sponge_cells.max(1);
    }
    let grid = Grid1D::new(comp_cells + sponge_cells, dx)?;
    let x_start = grid.interface(comp_cells);
    let sponge = if sponge_cells > 0 {
        Some(SpongeGeometry::new(x_start, grid.interface(comp_cells + sponge_cells))?)
    } else {
        None
    };
    Ok(Layout {
        grid,
        computational_cells: comp_cells,
        x_start,
        sponge,
    })
}

/// Cell averages including ghosts, plus the current time.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid<T> {
    pub grid: Grid1D<T>,
    /// `GHOSTS` left ghosts, `num_cells` interior cells, `GHOSTS` right ghosts.
    pub cells: Vec<ConservedState<T>>,
    pub time: T,
}

impl<T: Real> FieldGrid<T> {
    pub fn uniform(grid: Grid1D<T>, value: ConservedState<T>) -> Self {
        Self {
            grid,
            cells: vec![value; grid.num_cells + 2 * GHOSTS],
            time: T::zero(),
        }
    }

    pub fn from_fn(grid: Grid1D<T>, f: impl Fn(T) -> ConservedState<T>) -> Self {
        let mut field = Self::uniform(grid, ConservedState::zero());
        for i in 0..grid.num_cells {
            field.cells[i + GHOSTS] = f(grid.center(i));
        }
        let first = field.cells[GHOSTS];
        let last = field.cells[GHOSTS + grid.num_cells - 1];
        field.set_left_ghosts(first, first);
        field.set_right_ghosts(last, last);
        field
    }

    #[inline]
    pub fn interior(&self) -> &[ConservedState<T>] {
        &self.cells[GHOSTS..GHOSTS + self.grid.num_cells]
    }

    #[inline]
    pub fn interior_mut(&mut self) -> &mut [ConservedState<T>] {
        let n = self.grid.num_cells;
        &mut self.cells[GHOSTS..GHOSTS + n]
    }

    /// Ghost `-1` is adjacent to the first interior cell; `-2` is outermost.
    pub fn set_left_ghosts(&mut self, minus_one: ConservedState<T>, minus_two: ConservedState<T>) {
        self.cells[GHOSTS - 1] = minus_one;
        self.cells[GHOSTS - 2] = minus_two;
    }

    /// `first` is adjacent to the last interior cell; `second` is outermost.
    pub fn set_right_ghosts(&mut self, first: ConservedState<T>, second: ConservedState<T>) {
        let n = self.grid.num_cells;
        self.cells[GHOSTS + n] = first;
        self.cells[GHOSTS + n + 1] = second;
    }

    pub fn left_ghosts(&self) -> (ConservedState<T>, ConservedState<T>) {
        (self.cells[GHOSTS - 1], self.cells[GHOSTS - 2])
    }

    pub fn right_ghosts(&self) -> (ConservedState<T>, ConservedState<T>) {
        let n = self.grid.num_cells;
        (self.cells[GHOSTS + n], self.cells[GHOSTS + n + 1])
    }

    pub fn all_finite(&self) -> bool {
        self.cells.iter().all(|c| c.is_finite())
    }

    /// Component `k` of the interior cells.
    pub fn component(&self, k: usize) -> Vec<T> {
        self.interior().iter().map(|c| c[k]).collect()
    }

    /// Average groups of `ratio` consecutive interior cells.
    pub fn restrict(&self, ratio: usize) -> Result<FieldGrid<T>> {
        let n = self.grid.num_cells;
        if ratio == 0 || !n.is_multiple_of(ratio) {
            return Err(Error::Geometry(format!(
                "{n} cells cannot be restricted by a factor {ratio}"
            )));
        }
        let coarse = Grid1D::new(n / ratio, self.grid.dx * T::from_usize(ratio).unwrap())?;
        let inv = T::one() / T::from_usize(ratio).unwrap();
        let mut out = FieldGrid::uniform(coarse, ConservedState::zero());
        for (dst, chunk) in out.interior_mut().iter_mut().zip(self.interior().chunks(ratio)) {
            *dst = chunk.iter().fold(ConservedState::zero(), |a, &b| a + b) * inv;
        }
        out.time = self.time;
        Ok(out)
    }
}

/// Average groups of `ratio` consecutive values.
pub fn restrict_values(values: &[f64], ratio: usize) -> Result<Vec<f64>> {
    if ratio == 0 || !values.len().is_multiple_of(ratio) {
        return Err(Error::Geometry(format!(
            "{} cells cannot be restricted by a factor {ratio}",
            values.len()
        )));
    }
    Ok(values
        .chunks(ratio)
        .map(|c| c.iter().sum::<f64>() / ratio as f64)
        .collect())
}
