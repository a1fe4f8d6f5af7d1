//! Dense elimination over any [`Scalar`].
//!
//! Exact scalars get a true reduced row echelon form. Float scalars use
//! partial pivoting by modulus and treat pivots below
//! `rank_tolerance() × max|entry|` as zero.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: T) {
        let cell = &mut self.data[r * self.cols + c];
        *cell = cell.clone() + v;
    }

    fn scale(&self) -> f64 {
        self.data.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// Reduce in place to row echelon form with unit pivots and zeros above
    /// and below each pivot. Returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let scale = self.scale();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let candidate = if T::EXACT {
                (r..self.rows).find(|&i| !self.get(i, c).is_zero())
            } else {
                (r..self.rows)
                    .max_by(|&a, &b| self.get(a, c).modulus().total_cmp(&self.get(b, c).modulus()))
                    .filter(|&i| !self.get(i, c).is_negligible(scale))
            };
            let Some(p) = candidate else {
                if !T::EXACT {
                    for i in r..self.rows {
                        self.set(i, c, T::zero());
                    }
                }
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).inv();
            for k in c..self.cols {
                let v = self.get(r, k).clone() * inv.clone();
                self.set(r, k, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for k in c..self.cols {
                    let v = self.get(i, k).clone() - factor.clone() * self.get(r, k).clone();
                    self.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{v : A v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let mut reduced = self.clone();
        let pivots = reduced.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -reduced.get(row, f).clone();
                }
                v
            })
            .collect()
    }
}

pub fn inner<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.conj() * y.clone())
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Only meaningful
/// for float scalars; returns `None` for exact ones.
pub fn orthonormalize<T: Scalar>(vectors: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    if T::EXACT {
        return None;
    }
    let mut out: Vec<Vec<T>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let proj = inner(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi = wi.clone() - proj.clone() * qi.clone();
                }
            }
        }
        let norm = w.iter().map(|x| x.modulus().powi(2)).sum::<f64>().sqrt();
        if norm <= T::rank_tolerance() {
            continue;
        }
        let s = T::from_complex64(num_complex::Complex::new(1.0 / norm, 0.0))?;
        out.push(w.into_iter().map(|x| x * s.clone()).collect());
    }
    Some(out)
}
