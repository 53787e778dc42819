//! Brute-force solver for unknown maps given by polynomial ansatz.
//!
//! An unknown map `f: Q^n → Q^m` is written with every output coordinate a
//! polynomial of degree ≤ 2 in the inputs. Each sampled relation
//! `Σ coef · f_out(point) = 0` is linear in the unknown coefficients, so the
//! maps satisfying all recorded relations form the nullspace of the
//! accumulated constraint matrix.
//!
//! Relations are necessary conditions, so the computed solution space always
//! contains the true one. If it also equals a known family inside the true
//! space, the family is certified to be everything.

use crate::exactla::{same_span, Matrix, Scalar, Vector};

#[derive(Debug, Clone)]
pub struct Ansatz {
    n_in: usize,
    n_out: usize,
    rows: Vec<Vector>,
}

impl Ansatz {
    pub fn new(n_in: usize, n_out: usize) -> Self {
        Ansatz {
            n_in,
            n_out,
            rows: Vec::new(),
        }
    }

    /// Monomials `1, x_i, x_i x_j (i ≤ j)`.
    pub fn monomial_count(&self) -> usize {
        1 + self.n_in + self.n_in * (self.n_in + 1) / 2
    }

    pub fn unknowns(&self) -> usize {
        self.n_out * self.monomial_count()
    }

    pub fn relation_count(&self) -> usize {
        self.rows.len()
    }

    pub fn monomials(&self, x: &Vector) -> Vector {
        assert_eq!(x.len(), self.n_in);
        let mut out = Vec::with_capacity(self.monomial_count());
        out.push(Scalar::one());
        out.extend(x.iter().cloned());
        for i in 0..self.n_in {
            for j in i..self.n_in {
                out.push(&x[i] * &x[j]);
            }
        }
        Vector::new(out)
    }

    /// Records `Σ coef · f_out(point) = 0`.
    pub fn add_relation(&mut self, terms: &[(usize, Scalar, Vector)]) {
        let m = self.monomial_count();
        let mut row = Vector::zeros(self.unknowns());
        for (out, coef, point) in terms {
            assert!(*out < self.n_out, "output index out of range");
            let mons = self.monomials(point);
            for (k, mon) in mons.iter().enumerate() {
                if !mon.is_zero() {
                    row[out * m + k] += &(coef * mon);
                }
            }
        }
        if !row.is_zero() {
            self.rows.push(row);
        }
    }

    /// Coefficient vectors spanning the maps compatible with every relation.
    pub fn solution_basis(&self) -> Vec<Vector> {
        Matrix::from_row_vectors(&self.rows, self.unknowns()).kernel_basis()
    }

    pub fn evaluate(&self, coeffs: &Vector, x: &Vector) -> Vector {
        let m = self.monomial_count();
        let mons = self.monomials(x);
        (0..self.n_out)
            .map(|o| (0..m).map(|k| &coeffs[o * m + k] * &mons[k]).sum())
            .collect()
    }

    /// Coefficients of a map known to be polynomial of degree ≤ 2, read off
    /// from its values at `0`, `e_i`, `2e_i` and `e_i + e_j`.
    pub fn interpolate(&self, f: impl Fn(&Vector) -> Vector) -> Vector {
        let n = self.n_in;
        let m = self.monomial_count();
        let unit = |i: usize, t: i64| Vector::basis(n, i).scale(&Scalar::from_int(t));
        let f0 = f(&Vector::zeros(n));
        let mut coeffs = Vector::zeros(self.unknowns());
        let two = Scalar::from_int(2);
        let quad_index = |i: usize, j: usize| 1 + n + i * n - i * (i + 1) / 2 + j;
        for o in 0..self.n_out {
            coeffs[o * m] = f0[o].clone();
        }
        let mut linear = vec![Vector::zeros(self.n_out); n];
        for (i, lin) in linear.iter_mut().enumerate() {
            let f1 = f(&unit(i, 1)).sub(&f0);
            let f2 = f(&unit(i, 2)).sub(&f0);
            // f1 = b + a, f2 = 2b + 4a
            let a = f2.sub(&f1.scale(&two)).scale(&Scalar::new(1, 2));
            let b = f1.sub(&a);
            for o in 0..self.n_out {
                coeffs[o * m + 1 + i] = b[o].clone();
                coeffs[o * m + quad_index(i, i)] = a[o].clone();
            }
            *lin = f1;
        }
        for i in 0..n {
            for j in i + 1..n {
                let fij = f(&Vector::basis(n, i).add(&Vector::basis(n, j))).sub(&f0);
                let a = fij.sub(&linear[i]).sub(&linear[j]);
                for o in 0..self.n_out {
                    coeffs[o * m + quad_index(i, j)] = a[o].clone();
                }
            }
        }
        coeffs
    }

    /// Whether the solution space is exactly the span of `family`.
    pub fn solution_space_equals(&self, family: &[Vector]) -> bool {
        same_span(&self.solution_basis(), family, self.unknowns())
    }
}
