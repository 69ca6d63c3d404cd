//! Numerical toolkit for frequency-dependent acoustic attenuation in
//! photoacoustic imaging.
//!
//! The crate is organised bottom-up:
//!
//! * [`laws`]: complex attenuation laws `alpha*(omega)` and their holomorphic
//!   extensions, plus a heuristic half-plane sign scan.
//! * [`spectral`]: the symmetric frequency/time grid pair, unitary-style Fourier
//!   transforms, Hilbert transform and Kramers-Kronig residuals.
//! * [`greens`]: the attenuation kernel `K`, the attenuated Green function, the
//!   `K*` kernel, causality reports and the Chen-Holm radial Green function.
//! * [`phantom`]: the uniform-ball N-wave pressure trace and an independent
//!   quadrature oracle.
//! * [`propagator`]: the integral operator mapping the attenuation-free trace to
//!   attenuated spectral data, its SVD analysis and truncated inversion.
//!
//! Units throughout are cm, MHz, 1/MHz (microseconds) and cm/us.

pub mod error;
pub mod greens;
pub mod laws;
pub mod phantom;
pub mod propagator;
pub mod spectral;

pub use error::{Error, Result};
pub use greens::{
    attenuated_green, causality_report, chen_holm_radial_green, chen_holm_spectral_green,
    dstar_kernel, expected_causality, kernel_k, kernel_k_tapered, CausalityReport,
    CausalityVerdict, Expectation,
    KernelSample,
};
pub use laws::{
    attenuation_law, eval_alpha_star, eval_alpha_star_halfplane, halfplane_sign_scan, nsw_derive,
    principal_pow, principal_sqrt, AttenuationModel, ChenHolmParams, Law, NswDerived,
    Relaxation, ScanVerdict, SignScanReport,
};
pub use phantom::{p0_ball, p0_nodal, p0_oracle, p0_support, p0_value, BallPhantom, DetectorGeometry};
pub use propagator::{
    build_matrix, default_n_cells, f_infinity, forward_apply, invert_truncated, m_time_kernel,
    invert_with, mhat_entry, svd_analyze, ForwardResult, Inversion, PropagatorMatrix, SvdReport,
    TruncatedSvd,
};
pub use spectral::{
    forward_fourier, hilbert, inverse_fourier, inverse_fourier_with_residue,
    kramers_kronig_residual, pre_arrival_fraction, pre_arrival_fraction_after, GridPair,
    SampledSignal, SampledSpectrum, Taper,
};
