//! Closed-form layer: invariant-subspace models, spectral decomposition,
//! transfer times and fidelity formulas.
//!
//! The two-step dynamics of the walk closes on a tiny subspace that contains
//! the initial and target states, so everything needed for transfer analysis
//! reduces to a real orthogonal matrix of dimension 2, 3 (same-part) or 4
//! (opposite-part). This module builds those matrices together with their
//! basis vectors embedded in the full state space, exposes the closed-form
//! fidelity, the optimal step count and the fidelity envelope for the
//! opposite-part layout, and the star-graph step count for the same-part
//! layout.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmt_num::g17;
use crate::walk::{Layout, WalkParams, WalkState};

/// Rotation phase of the oscillating eigenvalue pair of the 4×4 two-step
/// matrix: `arccos((mn − 2m − 2n + 2)/(mn))`.
pub fn rotation_phase(m: usize, n: usize) -> f64 {
    assert!(m >= 1 && n >= 1, "part sizes must be positive");
    let (mf, nf) = (m as f64, n as f64);
    ((mf * nf - 2.0 * mf - 2.0 * nf + 2.0) / (mf * nf)).acos()
}

/// Fidelity envelope for opposite-part transfer:
/// `((√((m−1)(n−1)) + √(mn)) / (m+n−1))²`. Equals 1 exactly when m = n.
pub fn fmax_opposite(m: usize, n: usize) -> f64 {
    assert!(m >= 1 && n >= 1, "part sizes must be positive");
    let (mf, nf) = (m as f64, n as f64);
    let r = (((mf - 1.0) * (nf - 1.0)).sqrt() + (mf * nf).sqrt()) / (mf + nf - 1.0);
    r * r
}

/// Closed-form opposite-part fidelity after an odd number of steps 2t+1:
///
/// ```text
/// F = [mn − (m−1)(n−1)·cos(ωt) + √((m−1)(n−1)(m+n−1))·sin(ωt)]²
///     ───────────────────────────────────────────────────────────
///                        mn·(m+n−1)²
/// ```
///
/// Even step counts are rejected; at even steps the walker sits in the
/// sender's part and the fidelity is identically zero.
pub fn fidelity_closed_form(m: usize, n: usize, steps: usize) -> Result<f64> {
    if m < 2 || n < 2 {
        return Err(Error::ReducedOppositeTooSmall { m, n });
    }
    if steps.is_multiple_of(2) {
        return Err(Error::EvenSteps { steps });
    }
    let t = ((steps - 1) / 2) as f64;
    let (mf, nf) = (m as f64, n as f64);
    let phase = rotation_phase(m, n) * t;
    let numerator = mf * nf - (mf - 1.0) * (nf - 1.0) * phase.cos()
        + ((mf - 1.0) * (nf - 1.0) * (mf + nf - 1.0)).sqrt() * phase.sin();
    Ok(numerator * numerator / (mf * nf * (mf + nf - 1.0) * (mf + nf - 1.0)))
}

/// Nearest integer to `x` with the requested parity; exact midpoints round
/// toward the smaller candidate.
fn nearest_with_parity(x: f64, odd: bool) -> usize {
    debug_assert!(x >= if odd { 1.0 } else { 0.0 });
    let lo = if odd {
        2.0 * ((x - 1.0) / 2.0).floor() + 1.0
    } else {
        2.0 * (x / 2.0).floor()
    };
    let hi = lo + 2.0;
    let best = if (x - lo) <= (hi - x) { lo } else { hi };
    best as usize
}

/// Effective two-step evolution restricted to its invariant subspace.
///
/// `matrix` is real orthogonal, stored row-major; `basis` holds the subspace
/// vectors embedded in the full state space; `init_coords`/`target_coords`
/// are the coordinates of the initial state (after one step, for the
/// opposite-part layout) and of the target state in that basis.
#[derive(Debug, Clone)]
pub struct ReducedModel {
    pub layout: Layout,
    pub dim: usize,
    pub matrix: Vec<f64>,
    pub basis: Vec<WalkState>,
    pub init_coords: Vec<f64>,
    pub target_coords: Vec<f64>,
}

impl ReducedModel {
    /// 3×3 same-part model; needs m ≥ 3 so the third basis vector (uniform
    /// over the unmarked part-1 vertices) exists. Entries depend on m only.
    pub fn same_part(m: usize, n: usize) -> Result<Self> {
        Self::build_same(&WalkParams::same_part(m, n)?)
    }

    /// 2×2 same-part model for m = 2, where both part-1 vertices are marked
    /// and the subspace of initial and target state is already invariant.
    pub fn same_part_degenerate(m: usize, n: usize) -> Result<Self> {
        if m != 2 {
            return Err(Error::NotDegenerate { m });
        }
        Self::build(&WalkParams::same_part(m, n)?)
    }

    /// 4×4 opposite-part model; needs m, n ≥ 2.
    pub fn opposite(m: usize, n: usize) -> Result<Self> {
        Self::build(&WalkParams::opposite(m, n)?)
    }

    /// Model matching the layout (and marked placement) of `params`.
    pub fn for_params(params: &WalkParams) -> Result<Self> {
        Self::build(params)
    }

    fn build(params: &WalkParams) -> Result<Self> {
        match params.layout {
            Layout::SamePart if params.m == 2 => Ok(Self::build_same_degenerate(params)),
            Layout::SamePart => Self::build_same(params),
            Layout::OppositePart => Self::build_opposite(params),
        }
    }

    fn build_same(params: &WalkParams) -> Result<Self> {
        let (m, n) = (params.m, params.n);
        if m < 3 {
            return Err(Error::ReducedSameTooSmall { m });
        }
        let mf = m as f64;
        let q = 2.0 * (mf - 2.0).sqrt() / mf;
        let d = 2.0 / mf;
        #[rustfmt::skip]
        let matrix = vec![
            1.0 - d, -d,      q,
            -d,      1.0 - d, q,
            -q,      -q,      1.0 - 4.0 / mf,
        ];

        let mut rest = vec![Complex64::ZERO; params.dim()];
        let w = Complex64::new(1.0 / ((n * (m - 2)) as f64).sqrt(), 0.0);
        for i in 1..=m {
            if i != params.sender && i != params.receiver {
                for alpha in 1..=n {
                    rest[params.part1_index(i, alpha)] = w;
                }
            }
        }
        let basis = vec![
            WalkState::initial(*params)?,
            WalkState::target(*params)?,
            WalkState::from_amplitudes(*params, rest)?,
        ];
        Ok(ReducedModel {
            layout: Layout::SamePart,
            dim: 3,
            matrix,
            basis,
            init_coords: vec![1.0, 0.0, 0.0],
            target_coords: vec![0.0, 1.0, 0.0],
        })
    }

    fn build_same_degenerate(params: &WalkParams) -> Self {
        let mf = params.m as f64; // always 2.0 here
        let d = 2.0 / mf;
        let matrix = vec![1.0 - d, -d, -d, 1.0 - d];
        let basis = vec![
            WalkState::initial(*params).expect("validated params"),
            WalkState::target(*params).expect("validated params"),
        ];
        ReducedModel {
            layout: Layout::SamePart,
            dim: 2,
            matrix,
            basis,
            init_coords: vec![1.0, 0.0],
            target_coords: vec![0.0, 1.0],
        }
    }

    fn build_opposite(params: &WalkParams) -> Result<Self> {
        let (m, n) = (params.m, params.n);
        if m < 2 || n < 2 {
            return Err(Error::ReducedOppositeTooSmall { m, n });
        }
        let (mf, nf) = (m as f64, n as f64);
        let sm = (mf - 1.0).sqrt();
        let sn = (nf - 1.0).sqrt();
        #[rustfmt::skip]
        let matrix = vec![
            1.0, 0.0,            0.0,                            0.0,
            0.0, 1.0 - 2.0 / nf, 4.0 * sm * sn / (mf * nf),      2.0 * (mf - 2.0) * sn / (mf * nf),
            0.0, 0.0,            1.0 - 2.0 / mf,                 -2.0 * sm / mf,
            0.0, -2.0 * sn / nf, 2.0 * (nf - 2.0) * sm / (mf * nf), (mf - 2.0) * (nf - 2.0) / (mf * nf),
        ];

        let (s, rho) = (params.sender, params.receiver);
        let dim = params.dim();
        let mut corner = vec![Complex64::ZERO; dim];
        corner[params.part2_index(rho, s)] = Complex64::new(1.0, 0.0);

        let mut receiver_row = vec![Complex64::ZERO; dim];
        let w = Complex64::new(1.0 / sm, 0.0);
        for i in 1..=m {
            if i != s {
                receiver_row[params.part2_index(rho, i)] = w;
            }
        }
        let mut sender_column = vec![Complex64::ZERO; dim];
        let w = Complex64::new(1.0 / sn, 0.0);
        for alpha in 1..=n {
            if alpha != rho {
                sender_column[params.part2_index(alpha, s)] = w;
            }
        }
        let mut bulk = vec![Complex64::ZERO; dim];
        let w = Complex64::new(1.0 / (sm * sn), 0.0);
        for i in 1..=m {
            for alpha in 1..=n {
                if i != s && alpha != rho {
                    bulk[params.part2_index(alpha, i)] = w;
                }
            }
        }
        let basis = vec![
            WalkState::from_amplitudes(*params, corner)?,
            WalkState::from_amplitudes(*params, receiver_row)?,
            WalkState::from_amplitudes(*params, sender_column)?,
            WalkState::from_amplitudes(*params, bulk)?,
        ];
        Ok(ReducedModel {
            layout: Layout::OppositePart,
            dim: 4,
            matrix,
            basis,
            init_coords: vec![-1.0 / nf.sqrt(), 0.0, -(((nf - 1.0) / nf).sqrt()), 0.0],
            target_coords: vec![1.0 / mf.sqrt(), ((mf - 1.0) / mf).sqrt(), 0.0, 0.0],
        })
    }

    pub fn matrix_entry(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.dim + col]
    }

    /// Apply the two-step matrix to a coordinate vector.
    pub fn apply_coords(&self, coords: &[f64]) -> Vec<f64> {
        assert_eq!(coords.len(), self.dim);
        (0..self.dim)
            .map(|row| {
                (0..self.dim)
                    .map(|col| self.matrix_entry(row, col) * coords[col])
                    .sum()
            })
            .collect()
    }

    /// Coordinates after `t` two-step applications, starting from the initial
    /// coordinates.
    pub fn coords_after(&self, t: usize) -> Vec<f64> {
        let mut coords = self.init_coords.clone();
        for _ in 0..t {
            coords = self.apply_coords(&coords);
        }
        coords
    }

    /// Transfer fidelity after `t` two-step applications.
    pub fn fidelity_after(&self, t: usize) -> f64 {
        let coords = self.coords_after(t);
        let overlap: f64 = coords
            .iter()
            .zip(self.target_coords.iter())
            .map(|(a, b)| a * b)
            .sum();
        overlap * overlap
    }

    /// Walk-step count described by `t` two-step applications: 2t for the
    /// same-part layout, 2t+1 for the opposite-part layout.
    pub fn walk_step(&self, t: usize) -> usize {
        2 * t + self.layout.transfer_parity()
    }

    /// Fidelity at an absolute walk step, or `None` when the step parity does
    /// not match the model.
    pub fn fidelity_at_walk_step(&self, step: usize) -> Option<f64> {
        let parity = self.layout.transfer_parity();
        if step % 2 != parity {
            return None;
        }
        Some(self.fidelity_after((step - parity) / 2))
    }
}

/// Eigensystem of the 4×4 opposite-part matrix: a doubly degenerate
/// eigenvalue 1 plus the rotating pair `e^{±iω}`.
#[derive(Debug, Clone)]
pub struct SpectralModel {
    pub omega: f64,
    /// Coefficients of the rotating eigenvectors in the invariant basis:
    /// the `e^{+iω}` eigenvector is `(0, a, b, c)` and its partner is the
    /// entrywise conjugate. `b` is real and positive by convention.
    pub coeff_a: Complex64,
    pub coeff_b: f64,
    pub coeff_c: Complex64,
    /// Coordinate vectors in the invariant basis, ordered to match
    /// [`Self::eigenvalues`]: two fixed vectors, then `e^{+iω}`, then
    /// `e^{−iω}`.
    pub eigenvectors: [Vec<Complex64>; 4],
}

impl SpectralModel {
    pub fn opposite(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::ReducedOppositeTooSmall { m, n });
        }
        let (mf, nf) = (m as f64, n as f64);
        let omega = rotation_phase(m, n);
        let a = Complex64::new(
            -(mf * nf - mf - nf + 1.0)
                / (2.0 * nf * (mf - 1.0) * (nf - 1.0) * (mf + nf - 1.0)).sqrt(),
            -1.0 / (2.0 * nf).sqrt(),
        );
        let b = (nf / (2.0 * (mf + nf - 1.0))).sqrt();
        let c = Complex64::new(
            (mf - 1.0) / (2.0 * nf * (mf - 1.0) * (mf + nf - 1.0)).sqrt(),
            -(((nf - 1.0) / (2.0 * nf)).sqrt()),
        );

        let re = |x: f64| Complex64::new(x, 0.0);
        let fixed_corner = vec![re(1.0), re(0.0), re(0.0), re(0.0)];
        let norm = (mf + nf - 1.0).sqrt();
        let fixed_mixed = vec![
            re(0.0),
            re((nf - 1.0).sqrt() / norm),
            re((mf - 1.0).sqrt() / norm),
            re(-1.0 / norm),
        ];
        let rotating = vec![re(0.0), a, re(b), c];
        let rotating_conj = rotating.iter().map(|z| z.conj()).collect();

        Ok(SpectralModel {
            omega,
            coeff_a: a,
            coeff_b: b,
            coeff_c: c,
            eigenvectors: [fixed_corner, fixed_mixed, rotating, rotating_conj],
        })
    }

    /// Eigenvalues in the order of [`Self::eigenvectors`].
    pub fn eigenvalues(&self) -> [Complex64; 4] {
        let rot = Complex64::from_polar(1.0, self.omega);
        [
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            rot,
            rot.conj(),
        ]
    }
}

/// Transfer-time analysis for one walk configuration.
#[derive(Debug, Clone)]
pub struct TransferReport {
    pub params: WalkParams,
    /// Rotation phase of the reduced dynamics (opposite-part layout only).
    pub omega: Option<f64>,
    /// Recommended step count: the closest integer of transfer parity to the
    /// real-valued optimum.
    pub t_opt: usize,
    /// Closed-form fidelity envelope: 1 for same-part transfer, the
    /// opposite-part maximum otherwise.
    pub f_max_analytic: f64,
    /// Fidelity actually attained at `t_opt`.
    pub f_at_t: f64,
    /// First peak found by scanning a simulated curve, when one was computed.
    pub peak_step: Option<usize>,
    pub peak_fidelity: Option<f64>,
    /// Scanned (step, fidelity) points, when requested.
    pub curve: Option<Vec<(usize, f64)>>,
}

impl TransferReport {
    /// Flat JSON document; numbers carry 17 significant digits.
    pub fn write_json<W: Write>(&self, mut w: W) -> io::Result<()> {
        write!(
            w,
            "{{\"m\":{},\"n\":{},\"layout\":\"{}\"",
            self.params.m, self.params.n, self.params.layout
        )?;
        if let Some(omega) = self.omega {
            write!(w, ",\"omega\":{}", g17(omega))?;
        }
        write!(
            w,
            ",\"T_opt\":{},\"F_max_analytic\":{},\"F_at_T\":{}",
            self.t_opt,
            g17(self.f_max_analytic),
            g17(self.f_at_t)
        )?;
        if let Some(step) = self.peak_step {
            write!(w, ",\"peak_step\":{step}")?;
        }
        if let Some(f) = self.peak_fidelity {
            write!(w, ",\"peak_fidelity\":{}", g17(f))?;
        }
        if let Some(curve) = &self.curve {
            write!(w, ",\"curve\":[")?;
            for (k, (step, f)) in curve.iter().enumerate() {
                if k > 0 {
                    write!(w, ",")?;
                }
                write!(w, "[{},{}]", step, g17(*f))?;
            }
            write!(w, "]")?;
        }
        writeln!(w, "}}")
    }
}

/// Optimal step count and attained fidelity for `params`.
///
/// Same-part: the closest even integer to `2π/arccos((m−4)/m)`, with the
/// attained value read from the reduced model powered T/2 times and an
/// envelope of exactly 1. Opposite-part: the closest odd integer to the
/// real-valued first-maximum time, with the attained value from the closed
/// form and the envelope from [`fmax_opposite`]. Midpoint ties round toward
/// the smaller step count.
pub fn transfer_time(params: &WalkParams) -> Result<TransferReport> {
    match params.layout {
        Layout::SamePart => {
            let mf = params.m as f64;
            let theta = ((mf - 4.0) / mf).acos();
            let t_real = 2.0 * PI / theta;
            let t_opt = nearest_with_parity(t_real, false);
            let model = ReducedModel::for_params(params)?;
            let f_at_t = model.fidelity_after(t_opt / 2);
            Ok(TransferReport {
                params: *params,
                omega: None,
                t_opt,
                f_max_analytic: 1.0,
                f_at_t,
                peak_step: None,
                peak_fidelity: None,
                curve: None,
            })
        }
        Layout::OppositePart => {
            let (m, n) = (params.m, params.n);
            if m < 2 || n < 2 {
                return Err(Error::ReducedOppositeTooSmall { m, n });
            }
            let (mf, nf) = (m as f64, n as f64);
            let omega = rotation_phase(m, n);
            let peak_phase = (-(((mf - 1.0) * (nf - 1.0) / (mf * nf)).sqrt())).acos();
            let t_real = 2.0 * peak_phase / omega + 1.0;
            let t_opt = nearest_with_parity(t_real, true);
            Ok(TransferReport {
                params: *params,
                omega: Some(omega),
                t_opt,
                f_max_analytic: fmax_opposite(m, n),
                f_at_t: fidelity_closed_form(m, n, t_opt)?,
                peak_step: None,
                peak_fidelity: None,
                curve: None,
            })
        }
    }
}
