//! Dense per-vertex vector data, stored row-major.

/// A map `V -> R^dim`, one row per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexMap {
    n: usize,
    dim: usize,
    data: Vec<f64>,
}

impl VertexMap {
    pub fn zeros(n: usize, dim: usize) -> Self {
        Self {
            n,
            dim,
            data: vec![0.0; n * dim],
        }
    }

    pub fn from_data(n: usize, dim: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * dim, "row-major data must be n*dim long");
        Self { n, dim, data }
    }

    /// Wraps one scalar value per vertex as a dim-1 map.
    pub fn from_scalar(values: Vec<f64>) -> Self {
        Self {
            n: values.len(),
            dim: 1,
            data: values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, v: usize) -> &[f64] {
        &self.data[v * self.dim..(v + 1) * self.dim]
    }

    pub fn row_mut(&mut self, v: usize) -> &mut [f64] {
        &mut self.data[v * self.dim..(v + 1) * self.dim]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn norm(&self, v: usize) -> f64 {
        self.row(v).iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn norms(&self) -> Vec<f64> {
        (0..self.n).map(|v| self.norm(v)).collect()
    }

    /// Squared Euclidean distance between the rows of `u` and `v`.
    pub fn row_dist_sq(&self, u: usize, v: usize) -> f64 {
        let (a, b) = (self.row(u), self.row(v));
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
    }

    /// Extracts coordinate `j` as a scalar map.
    pub fn coordinate(&self, j: usize) -> VertexMap {
        assert!(j < self.dim);
        VertexMap::from_scalar((0..self.n).map(|v| self.row(v)[j]).collect())
    }

    pub fn scale(&mut self, c: f64) {
        for x in &mut self.data {
            *x *= c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim.max(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_and_norms() {
        let m = VertexMap::from_data(2, 2, vec![3.0, 4.0, 0.0, 1.0]);
        assert_eq!(m.row(0), &[3.0, 4.0]);
        assert_eq!(m.norm(0), 5.0);
        assert_eq!(m.norms(), vec![5.0, 1.0]);
        assert_eq!(m.row_dist_sq(0, 1), 18.0);
    }

    #[test]
    fn coordinate_extraction() {
        let m = VertexMap::from_data(3, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(m.coordinate(1).data(), &[2.0, 4.0, 6.0]);
    }
}
