//! Uniform one-dimensional grids.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs at least two nodes, got {0}")]
    TooFewNodes(usize),
    #[error("grid end points must be finite and increasing, got [{0}, {1}]")]
    BadInterval(f64, f64),
}

/// `len` equally spaced nodes from `start` to `end` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    start: f64,
    end: f64,
    len: usize,
}

impl UniformGrid {
    pub fn new(start: f64, end: f64, len: usize) -> Result<Self, GridError> {
        if len < 2 {
            return Err(GridError::TooFewNodes(len));
        }
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(GridError::BadInterval(start, end));
        }
        Ok(UniformGrid { start, end, len })
    }

    /// Nodes on `[-half_width, half_width]`; node `len-1-i` is exactly the
    /// negative of node `i`.
    pub fn symmetric(half_width: f64, len: usize) -> Result<Self, GridError> {
        Self::new(-half_width, half_width, len)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.end - self.start) / (self.len - 1) as f64
    }

    pub fn is_symmetric(&self) -> bool {
        self.start == -self.end
    }

    pub fn node(&self, i: usize) -> f64 {
        let m = (self.len - 1) as f64;
        if self.is_symmetric() {
            self.end * ((2 * i) as f64 - m) / m
        } else if i + 1 == self.len {
            self.end
        } else {
            self.start + i as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.node(i)).collect()
    }

    /// Index of the node at `-x_i`; meaningful on symmetric grids.
    pub fn mirror(&self, i: usize) -> usize {
        self.len - 1 - i
    }

    /// Interval `[x_j, x_{j+1}]` containing `x` and the local offset `x - x_j`.
    pub fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if !(x >= self.start && x <= self.end) {
            return None;
        }
        let h = self.step();
        let j = (((x - self.start) / h).floor() as usize).min(self.len - 2);
        Some((j, x - self.node(j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_nodes_are_exact_mirrors() {
        let g = UniformGrid::symmetric(12.0, 2001).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.node(g.mirror(i)), -g.node(i));
        }
        assert_eq!(g.node(1000), 0.0);
        assert_eq!(g.node(0), -12.0);
        assert_eq!(g.node(2000), 12.0);
    }

    #[test]
    fn locate_clamps_last_interval() {
        let g = UniformGrid::new(0.0, 1.0, 11).unwrap();
        assert_eq!(g.locate(1.0).unwrap().0, 9);
        assert!(g.locate(1.5).is_none());
        let (j, s) = g.locate(0.35).unwrap();
        assert_eq!(j, 3);
        assert!((s - 0.05).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(UniformGrid::new(0.0, 1.0, 1).is_err());
        assert!(UniformGrid::new(1.0, 0.0, 5).is_err());
    }
}
