use crate::error::{Error, Result};

/// Uniform 1D mesh over (lo, hi) with ascending cell edges.
#[derive(Debug, Clone)]
pub struct Mesh1D {
    pub lo: f64,
    pub hi: f64,
    pub edges: Vec<f64>,
}

impl Mesh1D {
    pub fn uniform(lo: f64, hi: f64, cells: usize) -> Result<Mesh1D> {
        if cells == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::BadMesh { lo, hi });
        }
        let span = hi - lo;
        let mut edges: Vec<f64> = (0..=cells)
            .map(|k| lo + span * (k as f64 / cells as f64))
            .collect();
        edges[0] = lo;
        edges[cells] = hi;
        Ok(Mesh1D { lo, hi, edges })
    }

    pub fn cells(&self) -> usize {
        self.edges.len() - 1
    }

    /// (left edge, right edge) of cell k.
    pub fn cell(&self, k: usize) -> (f64, f64) {
        (self.edges[k], self.edges[k + 1])
    }

    pub fn center(&self, k: usize) -> f64 {
        0.5 * (self.edges[k] + self.edges[k + 1])
    }

    pub fn width(&self, k: usize) -> f64 {
        self.edges[k + 1] - self.edges[k]
    }

    pub fn min_width(&self) -> f64 {
        (0..self.cells())
            .map(|k| self.width(k))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Tensor-product 2D mesh. Cell (i, j) spans x.cell(i) x y.cell(j).
#[derive(Debug, Clone)]
pub struct Mesh2D {
    pub x: Mesh1D,
    pub y: Mesh1D,
}

pub fn build_mesh_2d(
    x_lo: f64,
    x_hi: f64,
    x_cells: usize,
    y_lo: f64,
    y_hi: f64,
    y_cells: usize,
) -> Result<Mesh2D> {
    Ok(Mesh2D {
        x: Mesh1D::uniform(x_lo, x_hi, x_cells)?,
        y: Mesh1D::uniform(y_lo, y_hi, y_cells)?,
    })
}

impl Mesh2D {
    pub fn cells(&self) -> usize {
        self.x.cells() * self.y.cells()
    }

    /// Flat index of cell (i, j), row-major in j.
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.x.cells() + i
    }

    pub fn min_width(&self) -> f64 {
        self.x.min_width().min(self.y.min_width())
    }
}
