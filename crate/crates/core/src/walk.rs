//! Walk state representation and the structured O(mn) one-step kernel.
//!
//! The walker lives on the complete bipartite graph K_{m,n}. A basis state is
//! a (position, coin) pair: `|i,α⟩` for the particle at vertex `i` of part 1
//! whose coin points at vertex `α` of part 2, and `|α,i⟩` for the reverse.
//! Amplitude vectors are stored linearized with the part-1 block first:
//!
//! ```text
//! index(|i,α⟩) = (i-1)·n + (α-1)            i in 1..=m, α in 1..=n
//! index(|α,i⟩) = m·n + (α-1)·m + (i-1)
//! ```
//!
//! This layout is the contract for CSV snapshots and for comparisons against
//! the dense reference operator in [`crate::oracle`].
//!
//! One step applies a coin within each part and then the shift that swaps the
//! parts. Unmarked vertices diffuse their coin amplitudes with the Grover
//! operator; the marked sender/receiver vertices flip the sign instead. The
//! kernel never materializes the operator: each coin needs one pass to
//! accumulate the row mean, so a full step costs O(mn).

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmt_num::g17;

/// Where the receiver vertex sits relative to the sender (always in part 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layout {
    /// Sender and receiver both in part 1.
    SamePart,
    /// Sender in part 1, receiver in part 2.
    OppositePart,
}

impl Layout {
    /// Step parity at which the walker occupies the receiver's part:
    /// even for same-part transfer, odd for opposite-part transfer.
    pub fn transfer_parity(self) -> usize {
        match self {
            Layout::SamePart => 0,
            Layout::OppositePart => 1,
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Layout::SamePart => write!(f, "same"),
            Layout::OppositePart => write!(f, "opposite"),
        }
    }
}

impl FromStr for Layout {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "same" | "same-part" => Ok(Layout::SamePart),
            "opposite" | "opposite-part" => Ok(Layout::OppositePart),
            other => Err(format!(
                "unknown layout '{other}', expected 'same' or 'opposite'"
            )),
        }
    }
}

/// Graph sizes and marked-vertex placement for one walk.
///
/// Vertex labels are 1-based, matching the usual K_{m,n} notation; they are
/// converted to 0-based offsets internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WalkParams {
    pub m: usize,
    pub n: usize,
    pub layout: Layout,
    /// Sender vertex in part 1.
    pub sender: usize,
    /// Receiver vertex: in part 1 for [`Layout::SamePart`], in part 2 for
    /// [`Layout::OppositePart`].
    pub receiver: usize,
}

impl WalkParams {
    pub fn new(m: usize, n: usize, layout: Layout, sender: usize, receiver: usize) -> Result<Self> {
        let params = WalkParams {
            m,
            n,
            layout,
            sender,
            receiver,
        };
        params.validate()?;
        Ok(params)
    }

    /// Same-part transfer with the default placement: sender 1, receiver 2.
    pub fn same_part(m: usize, n: usize) -> Result<Self> {
        Self::new(m, n, Layout::SamePart, 1, 2)
    }

    /// Opposite-part transfer with the default placement: sender 1 in part 1,
    /// receiver 1 in part 2.
    pub fn opposite(m: usize, n: usize) -> Result<Self> {
        Self::new(m, n, Layout::OppositePart, 1, 1)
    }

    /// Same parameters with a different marked pair.
    pub fn with_marked(self, sender: usize, receiver: usize) -> Result<Self> {
        Self::new(self.m, self.n, self.layout, sender, receiver)
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::EmptyPart {
                m: self.m,
                n: self.n,
            });
        }
        if self.sender < 1 || self.sender > self.m {
            return Err(Error::SenderOutOfRange {
                sender: self.sender,
                m: self.m,
            });
        }
        match self.layout {
            Layout::SamePart => {
                if self.m < 2 {
                    return Err(Error::SamePartTooSmall { m: self.m });
                }
                if self.receiver < 1 || self.receiver > self.m {
                    return Err(Error::ReceiverOutOfRange {
                        receiver: self.receiver,
                        limit: self.m,
                    });
                }
                if self.receiver == self.sender {
                    return Err(Error::MarkedCoincide {
                        vertex: self.sender,
                    });
                }
            }
            Layout::OppositePart => {
                if self.receiver < 1 || self.receiver > self.n {
                    return Err(Error::ReceiverOutOfRange {
                        receiver: self.receiver,
                        limit: self.n,
                    });
                }
            }
        }
        Ok(())
    }

    /// Dimension of the full state space: both parts carry m·n coin states.
    pub fn dim(&self) -> usize {
        2 * self.m * self.n
    }

    /// Linear index of `|i,α⟩` (1-based labels).
    pub fn part1_index(&self, i: usize, alpha: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.m && alpha >= 1 && alpha <= self.n);
        (i - 1) * self.n + (alpha - 1)
    }

    /// Linear index of `|α,i⟩` (1-based labels).
    pub fn part2_index(&self, alpha: usize, i: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.m && alpha >= 1 && alpha <= self.n);
        self.m * self.n + (alpha - 1) * self.m + (i - 1)
    }

    /// Is the 0-based part-1 vertex marked?
    pub(crate) fn marked_part1(&self, i0: usize) -> bool {
        match self.layout {
            Layout::SamePart => i0 + 1 == self.sender || i0 + 1 == self.receiver,
            Layout::OppositePart => i0 + 1 == self.sender,
        }
    }

    /// Is the 0-based part-2 vertex marked?
    pub(crate) fn marked_part2(&self, a0: usize) -> bool {
        match self.layout {
            Layout::SamePart => false,
            Layout::OppositePart => a0 + 1 == self.receiver,
        }
    }
}

/// Complex amplitude vector over the walk's state space, plus a step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    params: WalkParams,
    amps: Vec<Complex64>,
    step: usize,
}

impl WalkState {
    /// The sender's uniform coin superposition: amplitude 1/√n on `|s,α⟩`
    /// for every α.
    pub fn initial(params: WalkParams) -> Result<Self> {
        params.validate()?;
        let mut amps = vec![Complex64::ZERO; params.dim()];
        let w = Complex64::new(1.0 / (params.n as f64).sqrt(), 0.0);
        for alpha in 1..=params.n {
            amps[params.part1_index(params.sender, alpha)] = w;
        }
        Ok(WalkState {
            params,
            amps,
            step: 0,
        })
    }

    /// The receiver's uniform coin superposition: 1/√n on `|r,α⟩` for the
    /// same-part layout, 1/√m on `|ρ,i⟩` for the opposite-part layout.
    pub fn target(params: WalkParams) -> Result<Self> {
        params.validate()?;
        let mut amps = vec![Complex64::ZERO; params.dim()];
        match params.layout {
            Layout::SamePart => {
                let w = Complex64::new(1.0 / (params.n as f64).sqrt(), 0.0);
                for alpha in 1..=params.n {
                    amps[params.part1_index(params.receiver, alpha)] = w;
                }
            }
            Layout::OppositePart => {
                let w = Complex64::new(1.0 / (params.m as f64).sqrt(), 0.0);
                for i in 1..=params.m {
                    amps[params.part2_index(params.receiver, i)] = w;
                }
            }
        }
        Ok(WalkState {
            params,
            amps,
            step: 0,
        })
    }

    /// Wrap a raw amplitude vector in the linearized layout. The vector is
    /// taken as-is; no normalization is applied.
    pub fn from_amplitudes(params: WalkParams, amps: Vec<Complex64>) -> Result<Self> {
        params.validate()?;
        if amps.len() != params.dim() {
            return Err(Error::ParamsMismatch);
        }
        Ok(WalkState {
            params,
            amps,
            step: 0,
        })
    }

    pub(crate) fn from_parts(params: WalkParams, amps: Vec<Complex64>, step: usize) -> Self {
        WalkState { params, amps, step }
    }

    pub fn params(&self) -> &WalkParams {
        &self.params
    }

    /// Number of steps taken since the initial state.
    pub fn step(&self) -> usize {
        self.step
    }

    /// Full amplitude vector in the linearized layout.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Part-1 block, indexed `(i-1)·n + (α-1)`.
    pub fn part1(&self) -> &[Complex64] {
        &self.amps[..self.params.m * self.params.n]
    }

    /// Part-2 block, indexed `(α-1)·m + (i-1)`.
    pub fn part2(&self) -> &[Complex64] {
        &self.amps[self.params.m * self.params.n..]
    }

    /// Amplitude of `|i,α⟩` (1-based labels).
    pub fn amplitude_part1(&self, i: usize, alpha: usize) -> Complex64 {
        self.amps[self.params.part1_index(i, alpha)]
    }

    /// Amplitude of `|α,i⟩` (1-based labels).
    pub fn amplitude_part2(&self, alpha: usize, i: usize) -> Complex64 {
        self.amps[self.params.part2_index(alpha, i)]
    }

    /// Squared norm over both parts.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Inner product `⟨self|other⟩`. Both states must live on the same graph.
    pub fn inner(&self, other: &WalkState) -> Complex64 {
        assert_eq!(
            (self.params.m, self.params.n),
            (other.params.m, other.params.n),
            "states live on different graphs"
        );
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Transfer fidelity `|⟨target|self⟩|²`.
    pub fn fidelity(&self, target: &WalkState) -> f64 {
        target.inner(self).norm_sqr()
    }

    /// CSV snapshot with columns `part,position,coin,re,im`, 1-based indices,
    /// 17 significant digits, part-1 block first in layout order.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "part,position,coin,re,im")?;
        for i in 1..=self.params.m {
            for alpha in 1..=self.params.n {
                let a = self.amplitude_part1(i, alpha);
                writeln!(w, "1,{},{},{},{}", i, alpha, g17(a.re), g17(a.im))?;
            }
        }
        for alpha in 1..=self.params.n {
            for i in 1..=self.params.m {
                let a = self.amplitude_part2(alpha, i);
                writeln!(w, "2,{},{},{},{}", alpha, i, g17(a.re), g17(a.im))?;
            }
        }
        Ok(())
    }
}

/// Grover diffusion of a coefficient vector: reflect every entry about the
/// vector mean, `out_k = (2/d)·Σ_j c_j − c_k`. One accumulation pass, O(d).
pub fn apply_grover(coeffs: &[Complex64]) -> Vec<Complex64> {
    assert!(
        !coeffs.is_empty(),
        "Grover diffusion needs at least one coefficient"
    );
    let mut out = vec![Complex64::ZERO; coeffs.len()];
    grover_into(coeffs, &mut out, 1);
    out
}

/// Grover kernel shared by [`apply_grover`] and the step operator; the
/// destination stride implements the shift's transposed write.
fn grover_into(src: &[Complex64], dst: &mut [Complex64], dst_stride: usize) {
    let sum: Complex64 = src.iter().sum();
    let mean2 = sum * (2.0 / src.len() as f64);
    for (k, value) in src.iter().enumerate() {
        dst[k * dst_stride] = mean2 - value;
    }
}

fn negate_into(src: &[Complex64], dst: &mut [Complex64], dst_stride: usize) {
    for (k, value) in src.iter().enumerate() {
        dst[k * dst_stride] = -value;
    }
}

/// One-step evolution operator, stored as the parameters needed to apply it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOperator {
    params: WalkParams,
}

impl StepOperator {
    pub fn new(params: WalkParams) -> Self {
        StepOperator { params }
    }

    pub fn params(&self) -> &WalkParams {
        &self.params
    }

    /// Apply one full step (coin, then shift) and bump the step counter.
    ///
    /// Norm is preserved to machine precision; a block that is exactly zero
    /// stays exactly zero, so a state supported on one part maps to a state
    /// supported entirely on the other.
    pub fn apply(&self, state: &WalkState) -> Result<WalkState> {
        if state.params != self.params {
            return Err(Error::ParamsMismatch);
        }
        let (m, n) = (self.params.m, self.params.n);
        let mut out = vec![Complex64::ZERO; 2 * m * n];
        let part1 = state.part1();
        let part2 = state.part2();
        let (out1, out2) = out.split_at_mut(m * n);

        // Part-1 coins, shifted into part 2: |i,α⟩ lands at |α,i⟩.
        for i0 in 0..m {
            let row = &part1[i0 * n..(i0 + 1) * n];
            let dst = &mut out2[i0..];
            if self.params.marked_part1(i0) {
                negate_into(row, dst, m);
            } else {
                grover_into(row, dst, m);
            }
        }
        // Part-2 coins, shifted into part 1: |α,i⟩ lands at |i,α⟩.
        for a0 in 0..n {
            let row = &part2[a0 * m..(a0 + 1) * m];
            let dst = &mut out1[a0..];
            if self.params.marked_part2(a0) {
                negate_into(row, dst, n);
            } else {
                grover_into(row, dst, n);
            }
        }

        Ok(WalkState::from_parts(self.params, out, state.step + 1))
    }

    /// Shift-only variant with both coins replaced by the identity. The shift
    /// swaps the parts, so two applications restore the input exactly.
    pub fn apply_shift_only(&self, state: &WalkState) -> Result<WalkState> {
        if state.params != self.params {
            return Err(Error::ParamsMismatch);
        }
        let (m, n) = (self.params.m, self.params.n);
        let mut out = vec![Complex64::ZERO; 2 * m * n];
        let part1 = state.part1();
        let part2 = state.part2();
        let (out1, out2) = out.split_at_mut(m * n);
        for i0 in 0..m {
            for a0 in 0..n {
                out2[a0 * m + i0] = part1[i0 * n + a0];
                out1[i0 * n + a0] = part2[a0 * m + i0];
            }
        }
        Ok(WalkState::from_parts(self.params, out, state.step + 1))
    }
}

/// Run `steps` steps of the walk from the initial state.
pub fn evolve(params: WalkParams, steps: usize) -> Result<WalkState> {
    let op = StepOperator::new(params);
    let mut state = WalkState::initial(params)?;
    for _ in 0..steps {
        state = op.apply(&state)?;
    }
    Ok(state)
}
