//! Dense brute-force reference for the one-step operator.
//!
//! The matrix is assembled entrywise from the operator's defining sums over
//! basis states, with its own index arithmetic, so this path shares no
//! evolution code with the structured kernel in [`crate::walk`]. It exists to
//! cross-validate that kernel and the reduced models on small instances and
//! is never a performance path.

use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmt_num::g17;
use crate::walk::{Layout, WalkParams};

/// Largest m·n the builder accepts; keeps accidental allocations bounded.
pub const SIZE_GUARD: usize = 4096;

/// Explicit 2mn × 2mn one-step operator in the linearized state layout.
#[derive(Debug, Clone)]
pub struct DenseUnitary {
    params: WalkParams,
    dim: usize,
    /// Row-major entries.
    entries: Vec<Complex64>,
}

impl DenseUnitary {
    /// Assemble the operator from its basis-state sums.
    pub fn build(params: &WalkParams) -> Result<Self> {
        let product = params.m * params.n;
        if product > SIZE_GUARD {
            return Err(Error::OracleTooLarge {
                product,
                limit: SIZE_GUARD,
            });
        }
        let (m, n) = (params.m, params.n);
        let dim = 2 * m * n;
        let mut entries = vec![Complex64::ZERO; dim * dim];

        let row1 = |i: usize, alpha: usize| (i - 1) * n + (alpha - 1);
        let row2 = |alpha: usize, i: usize| m * n + (alpha - 1) * m + (i - 1);
        let mut add = |row: usize, col: usize, value: f64| {
            entries[row * dim + col] += Complex64::new(value, 0.0);
        };

        let part1_unmarked = |i: usize| match params.layout {
            Layout::SamePart => i != params.sender && i != params.receiver,
            Layout::OppositePart => i != params.sender,
        };
        let part2_unmarked = |alpha: usize| match params.layout {
            Layout::SamePart => true,
            Layout::OppositePart => alpha != params.receiver,
        };

        // Part-1 half: (2/n) Σ_{i unmarked} Σ_{α,β} |α,i⟩⟨i,β|  −  Σ_{i,α} |α,i⟩⟨i,α|
        for i in 1..=m {
            if part1_unmarked(i) {
                for alpha in 1..=n {
                    for beta in 1..=n {
                        add(row2(alpha, i), row1(i, beta), 2.0 / n as f64);
                    }
                }
            }
            for alpha in 1..=n {
                add(row2(alpha, i), row1(i, alpha), -1.0);
            }
        }
        // Part-2 half: (2/m) Σ_{α unmarked} Σ_{i,j} |i,α⟩⟨α,j|  −  Σ_{i,α} |i,α⟩⟨α,i|
        for alpha in 1..=n {
            if part2_unmarked(alpha) {
                for i in 1..=m {
                    for j in 1..=m {
                        add(row1(i, alpha), row2(alpha, j), 2.0 / m as f64);
                    }
                }
            }
            for i in 1..=m {
                add(row1(i, alpha), row2(alpha, i), -1.0);
            }
        }

        Ok(DenseUnitary {
            params: *params,
            dim,
            entries,
        })
    }

    pub fn params(&self) -> &WalkParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// Matrix-vector product.
    pub fn apply(&self, vec: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(
            vec.len(),
            self.dim,
            "vector length does not match the operator"
        );
        let mut out = vec![Complex64::ZERO; self.dim];
        for (row, out_k) in out.iter_mut().enumerate() {
            let row_entries = &self.entries[row * self.dim..(row + 1) * self.dim];
            *out_k = row_entries.iter().zip(vec.iter()).map(|(u, v)| u * v).sum();
        }
        out
    }

    /// max |U†U − I|, entrywise.
    pub fn unitarity_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for row in 0..d {
            for col in 0..d {
                let mut dot = Complex64::ZERO;
                for k in 0..d {
                    dot += self.entry(k, row).conj() * self.entry(k, col);
                }
                let expect = if row == col { 1.0 } else { 0.0 };
                worst = worst.max((dot - expect).norm());
            }
        }
        worst
    }

    /// Nonzero entries as CSV rows `row,col,re,im` (0-based linear indices).
    pub fn write_nonzero_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "row,col,re,im")?;
        for row in 0..self.dim {
            for col in 0..self.dim {
                let e = self.entry(row, col);
                if e != Complex64::ZERO {
                    writeln!(w, "{},{},{},{}", row, col, g17(e.re), g17(e.im))?;
                }
            }
        }
        Ok(())
    }
}

/// Fidelity after exactly `steps` dense matrix-vector applications to the
/// initial state, using the oracle's own state constructions.
pub fn matrix_power_fidelity(params: &WalkParams, steps: usize) -> Result<f64> {
    let dense = DenseUnitary::build(params)?;
    let (m, n) = (params.m, params.n);
    let mut state = vec![Complex64::ZERO; dense.dim()];
    let w = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    for alpha in 1..=n {
        state[(params.sender - 1) * n + (alpha - 1)] = w;
    }
    let mut target = vec![Complex64::ZERO; dense.dim()];
    match params.layout {
        Layout::SamePart => {
            for alpha in 1..=n {
                target[(params.receiver - 1) * n + (alpha - 1)] = w;
            }
        }
        Layout::OppositePart => {
            let w = Complex64::new(1.0 / (m as f64).sqrt(), 0.0);
            for i in 1..=m {
                target[m * n + (params.receiver - 1) * m + (i - 1)] = w;
            }
        }
    }
    for _ in 0..steps {
        state = dense.apply(&state);
    }
    let overlap: Complex64 = target
        .iter()
        .zip(state.iter())
        .map(|(t, s)| t.conj() * s)
        .sum();
    Ok(overlap.norm_sqr())
}
