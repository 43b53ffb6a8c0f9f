//! Quantum state transfer by discrete-time coined walks on complete
//! bipartite graphs K_{m,n}.
//!
//! Two marked vertices, a sender and a receiver, carry a sign-flip coin while
//! every other vertex diffuses its coin with the Grover operator. The crate
//! provides three mutually checking layers:
//!
//! * [`walk`] — a structured simulator that applies one step of the evolution
//!   in O(mn) without materializing the operator;
//! * [`reduced`] — the closed-form layer: invariant-subspace matrices, their
//!   spectra, the transfer-time formulas and the fidelity envelope;
//! * [`oracle`] — a dense brute-force reference operator for cross-validating
//!   both on small instances.
//!
//! [`analysis`] ties the layers together with fidelity curves, size sweeps,
//! and a verification battery.
//!
//! ```
//! use bipartite_walk::{analysis, WalkParams};
//!
//! let params = WalkParams::opposite(100, 100).unwrap();
//! let report = analysis::transfer_report(&params, Some(60)).unwrap();
//! assert_eq!(report.t_opt, 23);
//! assert_eq!(report.peak_step, Some(23));
//! ```

pub mod analysis;
pub mod error;
mod fmt_num;
pub mod oracle;
pub mod reduced;
pub mod walk;

pub use analysis::{
    curve, first_peak_at_parity, full_simulation_points, peak, sweep_fmax, transfer_report, verify,
    write_curves_csv, CurveSource, FidelityCurve, PropertyCheck, SweepGrid, VerificationReport,
    VerifyLimits,
};
pub use error::{Error, Result};
pub use oracle::{matrix_power_fidelity, DenseUnitary, SIZE_GUARD};
pub use reduced::{
    fidelity_closed_form, fmax_opposite, rotation_phase, transfer_time, ReducedModel,
    SpectralModel, TransferReport,
};
pub use walk::{apply_grover, evolve, Layout, StepOperator, WalkParams, WalkState};
